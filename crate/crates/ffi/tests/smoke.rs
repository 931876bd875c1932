//! Exercises the C ABI through the same entry points a foreign caller
//! would use: generate, round-trip through text, solve, inspect, free.

use std::ffi::{CStr, CString};
use std::ptr;

use randmatch_ffi::*;

#[test]
fn solve_roundtrip_through_c_abi() {
    unsafe {
        let model = CString::new("complete_bipartite").unwrap();
        let g = rm_graph_generate(model.as_ptr(), 6, 1.0, 42);
        assert!(!g.is_null());
        assert_eq!(rm_graph_is_bipartite(g), 1);

        // Text round trip preserves the instance.
        let text = rm_graph_format(g);
        assert!(!text.is_null());
        let g2 = rm_graph_parse(text);
        assert!(!g2.is_null());

        let mut m = ptr::null_mut();
        assert_eq!(rm_solve(g, &mut m), RM_OK);
        let mut m2 = ptr::null_mut();
        assert_eq!(rm_solve(g2, &mut m2), RM_OK);
        assert_eq!(rm_matching_size(m), 6);
        assert_eq!(rm_matching_certified(m), 1);
        assert!((rm_matching_cost(m) - rm_matching_cost(m2)).abs() < 1e-12);

        let mut seen = [false; 6];
        let mut total = 0.0;
        for i in 0..rm_matching_size(m) {
            let (mut u, mut v, mut w) = (0usize, 0usize, 0f64);
            assert_eq!(rm_matching_pair(m, i, &mut u, &mut v, &mut w), RM_OK);
            assert!(!seen[u], "left vertex matched twice");
            seen[u] = true;
            assert!(v < 6);
            total += w;
        }
        assert!((total - rm_matching_cost(m)).abs() < 1e-9);

        // The incremental curve telescopes and ends at the matching cost.
        let mut s = ptr::null_mut();
        assert_eq!(rm_solve_sequence(g, 6, &mut s), RM_OK);
        assert_eq!(rm_sequence_len(s), 6);
        let sum: f64 = (1..=6).map(|r| rm_sequence_increment(s, r)).sum();
        assert!((sum - rm_sequence_cost(s, 6)).abs() < 1e-9);
        assert!((rm_sequence_cost(s, 6) - rm_matching_cost(m)).abs() < 1e-9);
        assert!(rm_sequence_cost(s, 7).is_nan());

        rm_sequence_free(s);
        rm_matching_free(m);
        rm_matching_free(m2);
        rm_string_free(text);
        rm_graph_free(g);
        rm_graph_free(g2);
    }
}

#[test]
fn general_graph_solve() {
    unsafe {
        let model = CString::new("gnp").unwrap();
        let g = rm_graph_generate(model.as_ptr(), 10, 0.9, 7);
        assert!(!g.is_null());
        assert_eq!(rm_graph_is_bipartite(g), 0);
        let mut m = ptr::null_mut();
        assert_eq!(rm_solve(g, &mut m), RM_OK);
        assert_eq!(rm_matching_size(m), 5);
        assert_eq!(rm_matching_certified(m), 1);
        rm_matching_free(m);
        rm_graph_free(g);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        // Unknown model is a precondition violation.
        let model = CString::new("heptapartite").unwrap();
        assert!(rm_graph_generate(model.as_ptr(), 4, 1.0, 1).is_null());
        let msg = CStr::from_ptr(rm_last_error()).to_str().unwrap();
        assert!(msg.contains("heptapartite"));

        // Unparsable text.
        let text = CString::new("gibberish").unwrap();
        assert!(rm_graph_parse(text.as_ptr()).is_null());

        // Odd vertex count cannot have a perfect matching.
        let model = CString::new("complete").unwrap();
        let g = rm_graph_generate(model.as_ptr(), 5, 1.0, 1);
        assert!(!g.is_null());
        let mut m = ptr::null_mut();
        assert_eq!(rm_solve(g, &mut m), RM_INVALID);
        assert!(m.is_null());

        // A sparse instance is infeasible rather than invalid.
        let model = CString::new("gnnp").unwrap();
        let sparse = rm_graph_generate(model.as_ptr(), 6, 0.05, 1);
        assert!(!sparse.is_null());
        assert_eq!(rm_solve(sparse, &mut m), RM_INFEASIBLE);

        rm_graph_free(g);
        rm_graph_free(sparse);

        // Null handles are rejected, not dereferenced.
        assert_eq!(rm_graph_is_bipartite(ptr::null()), -1);
        assert!(rm_matching_cost(ptr::null()).is_nan());
        assert_eq!(rm_solve(ptr::null(), &mut m), RM_INVALID);
        rm_graph_free(ptr::null_mut());
    }
}
