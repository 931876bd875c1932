//! Incremental minimum-cost bipartite matching.
//!
//! `solve_sequence` matches the left vertices a_1, a_2, ... one at a time,
//! each step augmenting along a minimum-cost alternating path found by
//! Dijkstra over reduced costs (Johnson potentials). The whole cost curve
//! C(n,r) for r = 1..r_max comes out of a single pass, together with a dual
//! certificate per step.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::BipartiteWeightedGraph;

pub const CERT_TOL: f64 = 1e-9;

/// A matching: vertex-disjoint edges of the source graph with their total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// (left vertex, right vertex, weight) per matched edge.
    pub pairs: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// Right vertices covered by the matching, ascending.
    pub fn matched_right(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().map(|&(_, b, _)| b).collect();
        v.sort_unstable();
        v
    }

    pub fn contains_right(&self, b: usize) -> bool {
        self.pairs.iter().any(|&(_, v, _)| v == b)
    }
}

/// Dual potentials proving optimality of one step of the sequence:
/// `y_left[u] + y_right[v] <= w(u,v)` on every edge with `u` matched so far,
/// with equality on matched edges.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub y_left: Vec<f64>,
    pub y_right: Vec<f64>,
}

impl DualCertificate {
    /// Check feasibility and tightness against `g` at step `r`
    /// (left vertices `0..r` constrained).
    pub fn verify(&self, g: &BipartiteWeightedGraph, matching: &Matching, r: usize) -> bool {
        for e in g.edges() {
            if e.u < r && self.y_left[e.u] + self.y_right[e.v] > e.w + CERT_TOL {
                return false;
            }
        }
        matching
            .pairs
            .iter()
            .all(|&(u, v, w)| (self.y_left[u] + self.y_right[v] - w).abs() <= CERT_TOL)
    }
}

/// The cost curve of the incremental matchings.
#[derive(Debug, Clone)]
pub struct MatchingSequence {
    pub r_max: usize,
    /// C(n,r) for r = 1..r_max.
    pub costs: Vec<f64>,
    /// C(n,r) - C(n,r-1), with C(n,0) = 0.
    pub increments: Vec<f64>,
    /// Final matching (size r_max).
    pub final_matching: Matching,
    /// Per-step snapshots, present when `keep_matchings` was set.
    pub matchings: Option<Vec<Matching>>,
    /// Per-step dual certificates, present when `keep_matchings` was set.
    pub certificates: Option<Vec<DualCertificate>>,
}

impl MatchingSequence {
    /// B_r: right vertices covered after step `r` (1-based), if snapshots
    /// were kept.
    pub fn matched_right_set(&self, r: usize) -> Option<Vec<usize>> {
        self.matchings.as_ref().map(|ms| ms[r - 1].matched_right())
    }
}

struct Solver<'a> {
    g: &'a BipartiteWeightedGraph,
    // mate_left[i] = edge index matching a_i, mate_right[j] = edge index
    // matching b_j.
    mate_left: Vec<Option<usize>>,
    mate_right: Vec<Option<usize>>,
    pot_left: Vec<f64>,
    pot_right: Vec<f64>,
    dist_left: Vec<f64>,
    dist_right: Vec<f64>,
    parent_edge: Vec<Option<usize>>, // per right vertex
    heap: BinaryHeap<Reverse<(ordered::F64, usize)>>,
}

mod ordered {
    /// Total order on finite f64 for heap keys.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct F64(pub f64);
    impl Eq for F64 {}
    impl PartialOrd for F64 {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for F64 {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.partial_cmp(&other.0).expect("finite distances")
        }
    }
}

impl<'a> Solver<'a> {
    fn new(g: &'a BipartiteWeightedGraph) -> Self {
        Solver {
            g,
            mate_left: vec![None; g.n_left()],
            mate_right: vec![None; g.n_right()],
            pot_left: vec![0.0; g.n_left()],
            pot_right: vec![0.0; g.n_right()],
            dist_left: vec![f64::INFINITY; g.n_left()],
            dist_right: vec![f64::INFINITY; g.n_right()],
            parent_edge: vec![None; g.n_right()],
            heap: BinaryHeap::new(),
        }
    }

    /// Augment for source `s`; returns Err(NoMatching) when no free right
    /// vertex is reachable.
    fn augment(&mut self, s: usize) -> Result<()> {
        let g = self.g;
        // A fresh source needs a potential that keeps all of its incident
        // reduced costs nonnegative.
        let mut src_pot = f64::NEG_INFINITY;
        for &idx in g.incident_left(s) {
            let e = g.edge(idx);
            src_pot = src_pot.max(self.pot_right[e.v] - e.w);
        }
        if src_pot == f64::NEG_INFINITY {
            return Err(Error::NoMatching(s + 1));
        }
        self.pot_left[s] = src_pot;

        self.dist_left.fill(f64::INFINITY);
        self.dist_right.fill(f64::INFINITY);
        self.parent_edge.fill(None);
        self.heap.clear();
        self.dist_left[s] = 0.0;
        for &idx in g.incident_left(s) {
            let e = g.edge(idx);
            let d = e.w + self.pot_left[s] - self.pot_right[e.v];
            if d < self.dist_right[e.v] {
                self.dist_right[e.v] = d;
                self.parent_edge[e.v] = Some(idx);
                self.heap.push(Reverse((ordered::F64(d), e.v)));
            }
        }

        // Dijkstra over the residual graph: forward arcs carry reduced cost,
        // matched arcs are tight and traversed for free.
        let mut done = vec![false; g.n_right()];
        while let Some(Reverse((ordered::F64(d), j))) = self.heap.pop() {
            if done[j] {
                continue;
            }
            done[j] = true;
            let Some(mate_idx) = self.mate_right[j] else { continue };
            let i = g.edge(mate_idx).u;
            self.dist_left[i] = d;
            for &idx in g.incident_left(i) {
                let e = g.edge(idx);
                if done[e.v] {
                    continue;
                }
                let nd = d + e.w + self.pot_left[i] - self.pot_right[e.v];
                if nd < self.dist_right[e.v] {
                    self.dist_right[e.v] = nd;
                    self.parent_edge[e.v] = Some(idx);
                    self.heap.push(Reverse((ordered::F64(nd), e.v)));
                }
            }
        }

        // Cheapest reachable free right vertex.
        let mut target = None;
        let mut best = f64::INFINITY;
        for j in 0..g.n_right() {
            if self.mate_right[j].is_none() && self.dist_right[j] < best {
                best = self.dist_right[j];
                target = Some(j);
            }
        }
        let Some(t) = target else {
            return Err(Error::NoMatching(s + 1));
        };

        // Potential update pi(v) += min(dist(v), D) keeps every residual
        // reduced cost nonnegative and makes the augmenting path tight.
        for i in 0..=s {
            self.pot_left[i] += self.dist_left[i].min(best);
        }
        for j in 0..g.n_right() {
            self.pot_right[j] += self.dist_right[j].min(best);
        }

        // Flip matched edges along the parent chain.
        let mut j = t;
        loop {
            let idx = self.parent_edge[j].expect("reached vertices have parents");
            let i = self.g.edge(idx).u;
            let prev = self.mate_left[i];
            self.mate_left[i] = Some(idx);
            self.mate_right[j] = Some(idx);
            match prev {
                None => break,
                Some(old) => j = self.g.edge(old).v,
            }
        }
        Ok(())
    }

    fn current_matching(&self, r: usize) -> Matching {
        let mut pairs = Vec::with_capacity(r);
        let mut cost = 0.0;
        for i in 0..r {
            let idx = self.mate_left[i].expect("left vertex matched");
            let e = self.g.edge(idx);
            pairs.push((e.u, e.v, e.w));
            cost += e.w;
        }
        Matching { pairs, cost }
    }

    fn certificate(&self) -> DualCertificate {
        DualCertificate {
            y_left: self.pot_left.iter().map(|p| -p).collect(),
            y_right: self.pot_right.clone(),
        }
    }
}

/// Minimum-cost matchings of `A_r` into `B` for r = 1..r_max.
pub fn solve_sequence(g: &BipartiteWeightedGraph, r_max: usize, keep_matchings: bool) -> Result<MatchingSequence> {
    if r_max > g.n_left() {
        return Err(Error::InvalidArgument(format!(
            "r_max = {r_max} exceeds n_left = {}",
            g.n_left()
        )));
    }
    let mut solver = Solver::new(g);
    let mut costs = Vec::with_capacity(r_max);
    let mut matchings = keep_matchings.then(Vec::new);
    let mut certificates = keep_matchings.then(Vec::new);
    for s in 0..r_max {
        solver.augment(s)?;
        let m = solver.current_matching(s + 1);
        costs.push(m.cost);
        if let Some(ms) = matchings.as_mut() {
            ms.push(m);
        }
        if let Some(cs) = certificates.as_mut() {
            cs.push(solver.certificate());
        }
    }
    let final_matching = solver.current_matching(r_max);
    let mut increments = Vec::with_capacity(r_max);
    let mut prev = 0.0;
    for &c in &costs {
        increments.push(c - prev);
        prev = c;
    }
    Ok(MatchingSequence { r_max, costs, increments, final_matching, matchings, certificates })
}

/// Minimum-cost perfect matching of a square bipartite graph.
pub fn solve_assignment(g: &BipartiteWeightedGraph) -> Result<Matching> {
    if g.n_left() != g.n_right() {
        return Err(Error::InvalidArgument(format!(
            "assignment requires n_left = n_right, got {} x {}",
            g.n_left(),
            g.n_right()
        )));
    }
    match solve_sequence(g, g.n_left(), false) {
        Ok(seq) => Ok(seq.final_matching),
        Err(Error::NoMatching(_)) => Err(Error::NoPerfectMatching),
        Err(e) => Err(e),
    }
}

/// Exhaustive oracle: minimum cost over all injective maps `A_r -> B`.
/// Guarded to `n_left <= 9`.
pub fn brute_force_bipartite(g: &BipartiteWeightedGraph, r: usize) -> Result<Matching> {
    if g.n_left() > 9 {
        return Err(Error::InvalidArgument("brute force limited to n_left <= 9".into()));
    }
    if r > g.n_left() {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n_left = {}", g.n_left())));
    }

    fn search(
        g: &BipartiteWeightedGraph,
        i: usize,
        r: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        cost: f64,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if i == r {
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                *best = Some((cost, chosen.clone()));
            }
            return;
        }
        if let Some((c, _)) = best {
            if cost >= *c {
                return;
            }
        }
        for &idx in g.incident_left(i) {
            let e = g.edge(idx);
            if !used[e.v] {
                used[e.v] = true;
                chosen.push(idx);
                search(g, i + 1, r, used, chosen, cost + e.w, best);
                chosen.pop();
                used[e.v] = false;
            }
        }
    }

    let mut best = None;
    let mut used = vec![false; g.n_right()];
    let mut chosen = Vec::new();
    search(g, 0, r, &mut used, &mut chosen, 0.0, &mut best);
    match best {
        Some((cost, idxs)) => Ok(Matching {
            pairs: idxs.iter().map(|&i| (g.edge(i).u, g.edge(i).v, g.edge(i).w)).collect(),
            cost,
        }),
        None if r == 0 => Ok(Matching { pairs: vec![], cost: 0.0 }),
        None => Err(Error::NoMatching(first_infeasible_r(g, r))),
    }
}

/// Smallest r for which no matching of A_r into B exists (oracle side).
fn first_infeasible_r(g: &BipartiteWeightedGraph, r_limit: usize) -> usize {
    for r in 1..=r_limit {
        if brute_force_feasible(g, r).is_none() {
            return r;
        }
    }
    r_limit
}

fn brute_force_feasible(g: &BipartiteWeightedGraph, r: usize) -> Option<()> {
    fn go(g: &BipartiteWeightedGraph, i: usize, r: usize, used: &mut Vec<bool>) -> bool {
        if i == r {
            return true;
        }
        for &idx in g.incident_left(i) {
            let v = g.edge(idx).v;
            if !used[v] {
                used[v] = true;
                if go(g, i + 1, r, used) {
                    used[v] = false;
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    let mut used = vec![false; g.n_right()];
    go(g, 0, r, &mut used).then_some(())
}
