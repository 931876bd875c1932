//! C ABI over the matching solvers. Handles are opaque pointers owned by
//! the library; every constructor has a matching `_free`, and fallible
//! calls return an `RmStatus` code with details available per thread from
//! `rm_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::ptr;
use std::str::FromStr;

use randmatch::bipartite::solve_sequence;
use randmatch::general::{solve_perfect_matching, verify_certificate};
use randmatch::graph::{generate, Model, ModelSpec};
use randmatch::io::{format_graph, parse_graph};
use randmatch::{Error, GeneratedGraph, RngStream};

/// Status codes shared with the CLI exit codes.
pub const RM_OK: c_int = 0;
pub const RM_INTERNAL: c_int = 1;
pub const RM_INFEASIBLE: c_int = 2;
pub const RM_PARSE: c_int = 3;
pub const RM_INVALID: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> c_int {
    let message = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    match e {
        Error::Parse { .. } => RM_PARSE,
        Error::NoMatching(_) | Error::NoPerfectMatching => RM_INFEASIBLE,
        Error::OddVertexCount(_) | Error::InvalidArgument(_) => RM_INVALID,
        _ => RM_INTERNAL,
    }
}

fn invalid(message: &str) -> c_int {
    set_error(&Error::InvalidArgument(message.into()))
}

/// Opaque weighted graph handle (bipartite or general).
pub struct RmGraph(GeneratedGraph);

/// Opaque matching handle: matched pairs, total cost, certificate status.
pub struct RmMatching {
    pairs: Vec<(usize, usize, f64)>,
    cost: f64,
    certified: bool,
}

/// Opaque incremental cost curve handle for bipartite instances.
pub struct RmSequence {
    costs: Vec<f64>,
    increments: Vec<f64>,
}

/// Message for the last failure on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |s| s.as_ptr())
    })
}

/// Parse a graph from its edge-list text form. Returns null and sets the
/// thread error on failure.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rm_graph_parse(text: *const c_char) -> *mut RmGraph {
    if text.is_null() {
        invalid("null text");
        return ptr::null_mut();
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            invalid("text is not valid UTF-8");
            return ptr::null_mut();
        }
    };
    match parse_graph(text) {
        Ok(g) => Box::into_raw(Box::new(RmGraph(g))),
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Draw a random instance. `model` is one of "complete_bipartite", "gnnp",
/// "complete", "gnp"; weights are exponential(1). Returns null on failure.
///
/// # Safety
/// `model` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rm_graph_generate(
    model: *const c_char,
    n: usize,
    p: c_double,
    seed: u64,
) -> *mut RmGraph {
    if model.is_null() {
        invalid("null model");
        return ptr::null_mut();
    }
    let model = match CStr::from_ptr(model).to_str() {
        Ok(m) => m,
        Err(_) => {
            invalid("model is not valid UTF-8");
            return ptr::null_mut();
        }
    };
    let run = || -> Result<GeneratedGraph, Error> {
        let spec = ModelSpec { model: Model::from_str(model)?, n, p, rate: 1.0 }.validated()?;
        let mut rng = RngStream::for_purpose(seed, "generate", 0);
        generate(spec, &mut rng)
    };
    match run() {
        Ok(g) => Box::into_raw(Box::new(RmGraph(g))),
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// 1 when the graph is bipartite, 0 when general, -1 on a null handle.
///
/// # Safety
/// `g` must be a live handle from `rm_graph_parse`/`rm_graph_generate`.
#[no_mangle]
pub unsafe extern "C" fn rm_graph_is_bipartite(g: *const RmGraph) -> c_int {
    match g.as_ref() {
        Some(RmGraph(GeneratedGraph::Bipartite(_))) => 1,
        Some(RmGraph(GeneratedGraph::General(_))) => 0,
        None => -1,
    }
}

/// Render the graph in its edge-list text form; free with `rm_string_free`.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn rm_graph_format(g: *const RmGraph) -> *mut c_char {
    match g.as_ref() {
        Some(graph) => CString::new(format_graph(&graph.0))
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => {
            invalid("null graph");
            ptr::null_mut()
        }
    }
}

/// Solve for a minimum-cost perfect matching, verifying the dual
/// certificate. On success writes a matching handle to `out`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_solve(g: *const RmGraph, out: *mut *mut RmMatching) -> c_int {
    let Some(graph) = g.as_ref() else {
        return invalid("null graph");
    };
    if out.is_null() {
        return invalid("null output pointer");
    }
    let result = match &graph.0 {
        GeneratedGraph::Bipartite(g) => {
            if g.n_left() != g.n_right() {
                return invalid("perfect matching needs a square bipartite instance");
            }
            // Re-solving the last step keeps its dual certificate.
            match solve_sequence(g, g.n_left(), true) {
                Ok(seq) => {
                    let m = seq.final_matching;
                    let certified = seq
                        .certificates
                        .as_ref()
                        .and_then(|cs| cs.last())
                        .map(|c| c.verify(g, &m, g.n_left()))
                        .unwrap_or(false);
                    Ok(RmMatching { pairs: m.pairs, cost: m.cost, certified })
                }
                Err(Error::NoMatching(_)) => Err(Error::NoPerfectMatching),
                Err(e) => Err(e),
            }
        }
        GeneratedGraph::General(g) => solve_perfect_matching(g).map(|(m, state)| {
            let certified = verify_certificate(g, &m, &state);
            RmMatching { pairs: m.pairs, cost: m.cost, certified }
        }),
    };
    match result {
        Ok(m) => {
            *out = Box::into_raw(Box::new(m));
            RM_OK
        }
        Err(e) => set_error(&e),
    }
}

/// Solve the incremental bipartite curve C(n,1)..C(n,r_max). On success
/// writes a sequence handle to `out`.
///
/// # Safety
/// `g` must be a live bipartite graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_solve_sequence(
    g: *const RmGraph,
    r_max: usize,
    out: *mut *mut RmSequence,
) -> c_int {
    let Some(graph) = g.as_ref() else {
        return invalid("null graph");
    };
    if out.is_null() {
        return invalid("null output pointer");
    }
    let GeneratedGraph::Bipartite(g) = &graph.0 else {
        return invalid("sequence solving needs a bipartite graph");
    };
    match solve_sequence(g, r_max, false) {
        Ok(seq) => {
            *out = Box::into_raw(Box::new(RmSequence {
                costs: seq.costs,
                increments: seq.increments,
            }));
            RM_OK
        }
        Err(e) => set_error(&e),
    }
}

/// Total cost of the matching, or NaN on a null handle.
///
/// # Safety
/// `m` must be a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn rm_matching_cost(m: *const RmMatching) -> c_double {
    m.as_ref().map_or(f64::NAN, |m| m.cost)
}

/// Number of matched pairs, or 0 on a null handle.
///
/// # Safety
/// `m` must be a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn rm_matching_size(m: *const RmMatching) -> usize {
    m.as_ref().map_or(0, |m| m.pairs.len())
}

/// 1 when the dual certificate verified, 0 otherwise.
///
/// # Safety
/// `m` must be a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn rm_matching_certified(m: *const RmMatching) -> c_int {
    m.as_ref().map_or(0, |m| m.certified as c_int)
}

/// Fetch matched pair `index` into `u`, `v`, `w` (any may be null).
///
/// # Safety
/// `m` must be a live matching handle; non-null out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_matching_pair(
    m: *const RmMatching,
    index: usize,
    u: *mut usize,
    v: *mut usize,
    w: *mut c_double,
) -> c_int {
    let Some(m) = m.as_ref() else {
        return invalid("null matching");
    };
    let Some(&(pu, pv, pw)) = m.pairs.get(index) else {
        return invalid("pair index out of range");
    };
    if !u.is_null() {
        *u = pu;
    }
    if !v.is_null() {
        *v = pv;
    }
    if !w.is_null() {
        *w = pw;
    }
    RM_OK
}

/// Number of solved steps in the curve.
///
/// # Safety
/// `s` must be a live sequence handle.
#[no_mangle]
pub unsafe extern "C" fn rm_sequence_len(s: *const RmSequence) -> usize {
    s.as_ref().map_or(0, |s| s.costs.len())
}

/// C(n, r) for 1-based `r`, or NaN when out of range.
///
/// # Safety
/// `s` must be a live sequence handle.
#[no_mangle]
pub unsafe extern "C" fn rm_sequence_cost(s: *const RmSequence, r: usize) -> c_double {
    s.as_ref()
        .and_then(|s| r.checked_sub(1).and_then(|i| s.costs.get(i)))
        .copied()
        .unwrap_or(f64::NAN)
}

/// C(n, r) - C(n, r-1) for 1-based `r`, or NaN when out of range.
///
/// # Safety
/// `s` must be a live sequence handle.
#[no_mangle]
pub unsafe extern "C" fn rm_sequence_increment(s: *const RmSequence, r: usize) -> c_double {
    s.as_ref()
        .and_then(|s| r.checked_sub(1).and_then(|i| s.increments.get(i)))
        .copied()
        .unwrap_or(f64::NAN)
}

/// # Safety
/// `g` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn rm_graph_free(g: *mut RmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `m` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn rm_matching_free(m: *mut RmMatching) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `s` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn rm_sequence_free(s: *mut RmSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not freed.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
