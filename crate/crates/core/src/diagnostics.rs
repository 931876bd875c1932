//! Structural probes of alternating paths in optimal matchings.
//!
//! From a matching M the alternating digraph is built: non-matching edges
//! become forward arcs carrying their graph weight (restricted to each
//! vertex's k cheapest incident edges), and matching edges become reversed
//! arcs with negated weight. Directed paths that alternate between the two
//! arc kinds encode M-alternating paths, so hop distances and shortest-path
//! weights in this digraph measure how far augmentations have to travel.

use std::collections::VecDeque;

use crate::bipartite::Matching;
use crate::error::{Error, Result};
use crate::general::GeneralMatching;
use crate::graph::{BipartiteWeightedGraph, WeightedGraph};
use crate::rng::RngStream;

/// Probe parameters. `a_limit` restricts the source side to the first
/// `a_limit` left vertices (the incremental solver matches a prefix of A).
#[derive(Debug, Clone)]
pub struct DiagnosticsConfig {
    /// Out-degree truncation: each vertex keeps its k cheapest incident edges.
    pub k: usize,
    /// Hop bound the diameter probe is compared against.
    pub k0: usize,
    /// Number of (a, b) pairs sampled by the diameter probe.
    pub pair_samples: usize,
    pub a_limit: Option<usize>,
}

impl DiagnosticsConfig {
    /// Bipartite defaults: k = 40, k0 = ceil(3 log_4 n).
    pub fn bipartite(n: usize) -> Self {
        DiagnosticsConfig {
            k: 40,
            k0: ((n as f64).ln() / 4.0_f64.ln() * 3.0).ceil() as usize,
            pair_samples: 100,
            a_limit: None,
        }
    }

    /// General-graph defaults: k = 20, k0 = ceil(3 log_3 n).
    pub fn general(n: usize) -> Self {
        DiagnosticsConfig {
            k: 20,
            k0: ((n as f64).ln() / 3.0_f64.ln() * 3.0).ceil() as usize,
            pair_samples: 100,
            a_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub to: usize,
    pub weight: f64,
    /// True for reversed matching arcs (weight is the negated edge cost).
    pub matching: bool,
}

/// Directed encoding of M-alternating paths. Nodes 0..n_left are left
/// vertices, n_left..n_left+n_right are right vertices; for general graphs
/// nodes are the graph vertices and n_left = 0.
#[derive(Debug, Clone)]
pub struct AlternatingDigraph {
    n_left: usize,
    n_nodes: usize,
    adj: Vec<Vec<Arc>>,
    /// Candidate path sources (left side, or all vertices for general).
    sources: Vec<usize>,
    /// Candidate path targets (right side, or all vertices for general).
    targets: Vec<usize>,
    matched: Vec<bool>,
}

impl AlternatingDigraph {
    pub fn node_count(&self) -> usize {
        self.n_nodes
    }

    pub fn arcs(&self, v: usize) -> &[Arc] {
        &self.adj[v]
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Node id of right vertex b (bipartite digraphs only).
    pub fn right_node(&self, b: usize) -> usize {
        self.n_left + b
    }

    pub fn is_matched(&self, node: usize) -> bool {
        self.matched[node]
    }

    /// Uniformly sampled (source, target) pairs with distinct endpoints.
    pub fn sample_pairs(&self, count: usize, rng: &mut RngStream) -> Vec<(usize, usize)> {
        let mut pairs = vec![];
        if self.sources.is_empty() || self.targets.is_empty() {
            return pairs;
        }
        while pairs.len() < count {
            let a = self.sources[rng.next_below(self.sources.len())];
            let b = self.targets[rng.next_below(self.targets.len())];
            if a != b {
                pairs.push((a, b));
            }
        }
        pairs
    }
}

/// Keep the indices of the k cheapest edges from `candidates`.
fn k_cheapest(g_weights: &[f64], candidates: &[usize], k: usize) -> Vec<usize> {
    let mut sorted: Vec<usize> = candidates.to_vec();
    sorted.sort_by(|&a, &b| g_weights[a].partial_cmp(&g_weights[b]).unwrap());
    sorted.truncate(k);
    sorted
}

/// Bipartite alternating digraph. Forward arcs a -> b exist when the edge is
/// among a's k cheapest or among b's k cheapest (restricted to included left
/// vertices); matched edges add the reversed arc b -> a with weight -w.
pub fn build_alternating_digraph(
    g: &BipartiteWeightedGraph,
    m: &Matching,
    cfg: &DiagnosticsConfig,
) -> AlternatingDigraph {
    let n_left = g.n_left();
    let n_right = g.n_right();
    let a_limit = cfg.a_limit.unwrap_or(n_left).min(n_left);
    let weights: Vec<f64> = g.edges().iter().map(|e| e.w).collect();

    let mut forward = vec![false; g.edges().len()];
    for a in 0..a_limit {
        for &k in k_cheapest(&weights, g.incident_left(a), cfg.k).iter() {
            forward[k] = true;
        }
    }
    for b in 0..n_right {
        let candidates: Vec<usize> = g
            .incident_right(b)
            .iter()
            .copied()
            .filter(|&k| g.edge(k).u < a_limit)
            .collect();
        for &k in k_cheapest(&weights, &candidates, cfg.k).iter() {
            forward[k] = true;
        }
    }

    let n_nodes = n_left + n_right;
    let mut adj = vec![vec![]; n_nodes];
    for (k, e) in g.edges().iter().enumerate() {
        if forward[k] {
            adj[e.u].push(Arc {
                to: n_left + e.v,
                weight: e.w,
                matching: false,
            });
        }
    }
    let mut matched = vec![false; n_nodes];
    for &(a, b, w) in &m.pairs {
        matched[a] = true;
        matched[n_left + b] = true;
        adj[n_left + b].push(Arc {
            to: a,
            weight: -w,
            matching: true,
        });
    }

    AlternatingDigraph {
        n_left,
        n_nodes,
        adj,
        sources: (0..a_limit).collect(),
        targets: (n_left..n_left + n_right).collect(),
        matched,
    }
}

/// General-graph alternating digraph: non-matching edges get one random
/// orientation each (seeded, recorded by the caller's stream), matching
/// edges contribute two oppositely oriented arcs with negated weight.
pub fn build_general_alternating_digraph(
    g: &WeightedGraph,
    m: &GeneralMatching,
    _cfg: &DiagnosticsConfig,
    rng: &mut RngStream,
) -> AlternatingDigraph {
    let n = g.n();
    let partner = m.partner_map(n);
    let mut adj = vec![vec![]; n];
    for e in g.edges() {
        if partner[e.u] == e.v {
            adj[e.u].push(Arc {
                to: e.v,
                weight: -e.w,
                matching: true,
            });
            adj[e.v].push(Arc {
                to: e.u,
                weight: -e.w,
                matching: true,
            });
        } else if rng.next_unit() < 0.5 {
            adj[e.u].push(Arc {
                to: e.v,
                weight: e.w,
                matching: false,
            });
        } else {
            adj[e.v].push(Arc {
                to: e.u,
                weight: e.w,
                matching: false,
            });
        }
    }
    let matched: Vec<bool> = (0..n).map(|v| partner[v] != usize::MAX).collect();

    AlternatingDigraph {
        n_left: 0,
        n_nodes: n,
        adj,
        sources: (0..n).collect(),
        targets: (0..n).collect(),
        matched,
    }
}

/// State index for (node, next arc kind): 2v wants a forward arc next,
/// 2v+1 wants a matching arc next. Paths start and end on forward arcs,
/// so they have odd arc count.
#[inline]
fn want_forward(v: usize) -> usize {
    2 * v
}
#[inline]
fn want_matching(v: usize) -> usize {
    2 * v + 1
}

/// Hop count of the shortest alternating path from a to b, or None.
pub fn ab_hops(d: &AlternatingDigraph, a: usize, b: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; 2 * d.n_nodes];
    let mut queue = VecDeque::new();
    dist[want_forward(a)] = 0;
    queue.push_back(want_forward(a));
    while let Some(s) = queue.pop_front() {
        let (v, needs_matching) = (s / 2, s % 2 == 1);
        for arc in &d.adj[v] {
            if arc.matching != needs_matching {
                continue;
            }
            let next = if arc.matching {
                want_forward(arc.to)
            } else {
                want_matching(arc.to)
            };
            if dist[next] == usize::MAX {
                dist[next] = dist[s] + 1;
                if arc.to == b && !arc.matching {
                    return Some(dist[next]);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

/// Diameter probe over sampled pairs, reported for all targets and for the
/// subset of pairs whose target is unmatched (the augmenting use-case).
#[derive(Debug, Clone)]
pub struct DiameterReport {
    pub pair_count: usize,
    pub max_hops: Option<usize>,
    pub unreachable: usize,
    pub unmatched_pair_count: usize,
    pub max_hops_unmatched: Option<usize>,
    pub unreachable_unmatched: usize,
}

pub fn ab_diameter(d: &AlternatingDigraph, pairs: &[(usize, usize)]) -> Result<DiameterReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no pairs to probe".into()));
    }
    let mut report = DiameterReport {
        pair_count: pairs.len(),
        max_hops: None,
        unreachable: 0,
        unmatched_pair_count: 0,
        max_hops_unmatched: None,
        unreachable_unmatched: 0,
    };
    for &(a, b) in pairs {
        let hops = ab_hops(d, a, b);
        let unmatched_target = !d.is_matched(b);
        if unmatched_target {
            report.unmatched_pair_count += 1;
        }
        match hops {
            Some(h) => {
                report.max_hops = Some(report.max_hops.map_or(h, |m| m.max(h)));
                if unmatched_target {
                    report.max_hops_unmatched =
                        Some(report.max_hops_unmatched.map_or(h, |m| m.max(h)));
                }
            }
            None => {
                report.unreachable += 1;
                if unmatched_target {
                    report.unreachable_unmatched += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Minimum total arc weight over alternating a -> b paths. Label-correcting
/// search; arcs have negative weights but an optimal matching admits no
/// negative alternating cycle, so relaxation must settle. A state relaxed
/// more than 2n times signals such a cycle and therefore a non-optimal
/// matching.
pub fn min_alternating_cost(d: &AlternatingDigraph, a: usize, b: usize) -> Result<f64> {
    let nstates = 2 * d.n_nodes;
    let mut dist = vec![f64::INFINITY; nstates];
    let mut relaxations = vec![0usize; nstates];
    let mut in_queue = vec![false; nstates];
    let mut queue = VecDeque::new();
    dist[want_forward(a)] = 0.0;
    queue.push_back(want_forward(a));
    in_queue[want_forward(a)] = true;

    while let Some(s) = queue.pop_front() {
        in_queue[s] = false;
        let (v, needs_matching) = (s / 2, s % 2 == 1);
        for arc in &d.adj[v] {
            if arc.matching != needs_matching {
                continue;
            }
            let next = if arc.matching {
                want_forward(arc.to)
            } else {
                want_matching(arc.to)
            };
            let cand = dist[s] + arc.weight;
            if cand < dist[next] - 1e-15 {
                dist[next] = cand;
                relaxations[next] += 1;
                if relaxations[next] > nstates {
                    return Err(Error::OptimalityViolation);
                }
                if !in_queue[next] {
                    in_queue[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }

    let cost = dist[want_matching(b)];
    if cost.is_finite() {
        Ok(cost)
    } else {
        Err(Error::InvalidArgument(format!(
            "no alternating path from {a} to {b}"
        )))
    }
}

/// Largest edge weight used by a matching.
pub fn max_matching_edge_cost(pairs: &[(usize, usize, f64)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "max edge cost of an empty matching".into(),
        ));
    }
    Ok(pairs
        .iter()
        .fold(f64::NEG_INFINITY, |m, &(_, _, w)| m.max(w)))
}
