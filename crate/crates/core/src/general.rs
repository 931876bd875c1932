//! Exact minimum-cost perfect matching on general graphs.
//!
//! Runs max-weight matching on the complemented weights w' = W - w with the
//! maximum-cardinality flag set, then maps the duals back to the minimization
//! problem: y(v) = W/2 - u'(v) and zeta(B) = -z'(B) <= 0 satisfy
//! y(u) + y(v) + sum of zeta over blossoms containing both <= w(u,v), with
//! equality on matched edges, and every blossom with nonzero dual is full.
//! Those conditions make sum(y) + sum(zeta * floor(|B|/2)) a lower bound on
//! any perfect matching's cost, attained by the returned matching.

use crate::blossom::{max_weight_matching, NONE};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Tolerance for dual-certificate checks.
pub const CERT_TOL: f64 = 1e-9;

/// A perfect matching with its total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMatching {
    /// Matched edges as (u, v, w) with u < v, sorted by (u, v).
    pub pairs: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

impl GeneralMatching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// partner[v] for every vertex, or usize::MAX if single.
    pub fn partner_map(&self, n: usize) -> Vec<usize> {
        let mut partner = vec![usize::MAX; n];
        for &(u, v, _) in &self.pairs {
            partner[u] = v;
            partner[v] = u;
        }
        partner
    }

    pub fn max_edge_cost(&self) -> Result<f64> {
        if self.pairs.is_empty() {
            return Err(Error::InvalidArgument(
                "max edge cost of an empty matching".into(),
            ));
        }
        Ok(self
            .pairs
            .iter()
            .fold(f64::NEG_INFINITY, |m, &(_, _, w)| m.max(w)))
    }
}

/// Dual certificate for a minimum-cost perfect matching.
#[derive(Debug, Clone)]
pub struct BlossomState {
    /// y(v) per vertex; unconstrained in sign.
    pub vertex_duals: Vec<f64>,
    /// (sorted vertex set, zeta <= 0) per blossom; the sets are laminar and odd.
    pub blossoms: Vec<(Vec<usize>, f64)>,
}

/// Minimum-cost perfect matching with its dual certificate.
pub fn solve_perfect_matching(g: &WeightedGraph) -> Result<(GeneralMatching, BlossomState)> {
    let n = g.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount(n));
    }
    let w_max = g
        .edges()
        .iter()
        .fold(0.0_f64, |m, e| m.max(e.w));
    let flipped: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, w_max - e.w))
        .collect();

    let out = max_weight_matching(n, flipped, true);
    if out.mate.contains(&NONE) {
        return Err(Error::NoPerfectMatching);
    }

    let mut pairs = vec![];
    let mut cost = 0.0;
    for e in g.edges() {
        if out.mate[e.u] == e.v {
            pairs.push((e.u, e.v, e.w));
            cost += e.w;
        }
    }
    pairs.sort_by_key(|a| (a.0, a.1));
    debug_assert_eq!(pairs.len(), n / 2);

    let vertex_duals = out
        .vertex_duals_x2
        .iter()
        .map(|&d2| w_max / 2.0 - d2 / 2.0)
        .collect();
    let blossoms = out
        .blossoms
        .into_iter()
        .map(|(leaves, z)| (leaves, -z))
        .collect();

    Ok((
        GeneralMatching { pairs, cost },
        BlossomState {
            vertex_duals,
            blossoms,
        },
    ))
}

/// True iff the certificate proves m optimal for g, within CERT_TOL.
pub fn verify_certificate(g: &WeightedGraph, m: &GeneralMatching, state: &BlossomState) -> bool {
    certificate_violation(g, m, state).is_none()
}

/// First violated optimality condition, or None if the certificate holds.
pub fn certificate_violation(
    g: &WeightedGraph,
    m: &GeneralMatching,
    state: &BlossomState,
) -> Option<String> {
    let n = g.n();
    if state.vertex_duals.len() != n {
        return Some(format!(
            "dual vector has length {} for {} vertices",
            state.vertex_duals.len(),
            n
        ));
    }
    let partner = m.partner_map(n);
    if m.pairs.len() * 2 != n || partner.contains(&usize::MAX) {
        return Some("matching is not perfect".into());
    }
    for &(u, v, w) in &m.pairs {
        if u >= n || v >= n || u == v {
            return Some(format!("invalid matched pair ({u}, {v})"));
        }
        let found = g
            .edges()
            .iter()
            .any(|e| e.u == u.min(v) && e.v == u.max(v) && (e.w - w).abs() <= CERT_TOL);
        if !found {
            return Some(format!("matched pair ({u}, {v}) is not a graph edge"));
        }
    }

    // Blossom structure: odd sets, nonpositive duals, laminar family.
    for (i, (set, zeta)) in state.blossoms.iter().enumerate() {
        if set.len() < 3 || set.len() % 2 == 0 {
            return Some(format!("blossom {i} has even or trivial cardinality"));
        }
        if set.windows(2).any(|w| w[0] >= w[1]) || *set.last().unwrap() >= n {
            return Some(format!("blossom {i} vertex set is not sorted and in range"));
        }
        if *zeta > CERT_TOL {
            return Some(format!("blossom {i} has positive dual {zeta}"));
        }
    }
    for i in 0..state.blossoms.len() {
        for j in (i + 1)..state.blossoms.len() {
            let (a, _) = &state.blossoms[i];
            let (b, _) = &state.blossoms[j];
            let inter = a.iter().filter(|v| b.binary_search(v).is_ok()).count();
            if inter != 0 && inter != a.len() && inter != b.len() {
                return Some(format!("blossoms {i} and {j} cross"));
            }
        }
    }

    // Reduced-cost feasibility on every edge, tightness on matched edges.
    for e in g.edges() {
        let mut reduced = state.vertex_duals[e.u] + state.vertex_duals[e.v];
        for (set, zeta) in &state.blossoms {
            if set.binary_search(&e.u).is_ok() && set.binary_search(&e.v).is_ok() {
                reduced += zeta;
            }
        }
        if reduced > e.w + CERT_TOL {
            return Some(format!(
                "edge ({}, {}) violates feasibility: {} > {}",
                e.u, e.v, reduced, e.w
            ));
        }
        if partner[e.u] == e.v && (reduced - e.w).abs() > CERT_TOL {
            return Some(format!(
                "matched edge ({}, {}) is not tight: {} vs {}",
                e.u, e.v, reduced, e.w
            ));
        }
    }

    // Complementary slackness: blossoms with nonzero dual must be full.
    for (i, (set, zeta)) in state.blossoms.iter().enumerate() {
        if zeta.abs() > CERT_TOL {
            let inside = m
                .pairs
                .iter()
                .filter(|&&(u, v, _)| {
                    set.binary_search(&u).is_ok() && set.binary_search(&v).is_ok()
                })
                .count();
            if inside != set.len() / 2 {
                return Some(format!(
                    "blossom {i} with nonzero dual is not full ({} of {} edges)",
                    inside,
                    set.len() / 2
                ));
            }
        }
    }

    None
}

/// Exhaustive minimum over all perfect matchings. Guarded to n <= 12.
pub fn brute_force_general(g: &WeightedGraph) -> Result<GeneralMatching> {
    let n = g.n();
    if n > 12 {
        return Err(Error::InvalidArgument(format!(
            "brute force limited to 12 vertices, got {n}"
        )));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount(n));
    }

    let mut partner = vec![usize::MAX; n];
    let mut chosen: Vec<(usize, usize, f64)> = vec![];
    let mut best: BestPairing = None;
    recurse(g, &mut partner, &mut chosen, 0.0, &mut best);

    match best {
        Some((cost, mut pairs)) => {
            pairs.sort_by_key(|a| (a.0, a.1));
            Ok(GeneralMatching { pairs, cost })
        }
        None => Err(Error::NoPerfectMatching),
    }
}

/// Cheapest complete pairing found so far during enumeration.
type BestPairing = Option<(f64, Vec<(usize, usize, f64)>)>;

fn recurse(
    g: &WeightedGraph,
    partner: &mut [usize],
    chosen: &mut Vec<(usize, usize, f64)>,
    cost: f64,
    best: &mut BestPairing,
) {
    if let Some((best_cost, _)) = best {
        if cost >= *best_cost {
            return;
        }
    }
    let u = match partner.iter().position(|&p| p == usize::MAX) {
        Some(u) => u,
        None => {
            *best = Some((cost, chosen.clone()));
            return;
        }
    };
    for &k in g.incident(u) {
        let e = g.edge(k);
        let v = if e.u == u { e.v } else { e.u };
        if partner[v] != usize::MAX {
            continue;
        }
        partner[u] = v;
        partner[v] = u;
        chosen.push((u.min(v), u.max(v), e.w));
        recurse(g, partner, chosen, cost + e.w, best);
        chosen.pop();
        partner[u] = usize::MAX;
        partner[v] = usize::MAX;
    }
}
