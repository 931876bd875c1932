//! Weighted graph value types and random instance generation.
//!
//! Four models are supported: the complete bipartite graph `K_{n,n}`, the
//! random bipartite graph `G_{n,n,p}`, the complete graph `K_n`, and the
//! random graph `G_{n,p}`. Every present edge receives an independent
//! exponential cost. Generation is deterministic given `(ModelSpec, RngStream)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{sample_exponential, RngStream};

/// A weighted edge. In a bipartite graph `u` indexes side A and `v` side B;
/// in a general graph the canonical form has `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    CompleteBipartite,
    Gnnp,
    Complete,
    Gnp,
}

impl Model {
    pub fn is_bipartite(self) -> bool {
        matches!(self, Model::CompleteBipartite | Model::Gnnp)
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::CompleteBipartite => "complete_bipartite",
            Model::Gnnp => "gnnp",
            Model::Complete => "complete",
            Model::Gnp => "gnp",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete_bipartite" => Ok(Model::CompleteBipartite),
            "gnnp" => Ok(Model::Gnnp),
            "complete" => Ok(Model::Complete),
            "gnp" => Ok(Model::Gnp),
            other => Err(Error::InvalidArgument(format!("unknown model '{other}'"))),
        }
    }
}

/// Which random instance to draw: model, size, edge probability and the
/// exponential rate of the edge costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    pub p: f64,
    pub rate: f64,
}

impl ModelSpec {
    pub fn new(model: Model, n: usize, p: f64) -> Result<Self> {
        ModelSpec { model, n, p, rate: 1.0 }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.n < 1 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (0,1], got {}", self.p)));
        }
        if !self.rate.is_finite() || self.rate <= 0.0 {
            return Err(Error::InvalidArgument(format!("rate must be positive, got {}", self.rate)));
        }
        let complete = matches!(self.model, Model::CompleteBipartite | Model::Complete);
        if complete && self.p != 1.0 {
            return Err(Error::InvalidArgument("complete models require p = 1".into()));
        }
        Ok(self)
    }
}

/// Rate of the exponential costs on edges incident to the special vertex
/// `b_{n+1}`. The participation estimator built on it carries a relative
/// bias of order `O(lambda)`, so keep `lambda` small.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialVertexConfig {
    pub lambda: f64,
}

impl SpecialVertexConfig {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        Ok(SpecialVertexConfig { lambda })
    }
}

/// Edge-weighted bipartite graph on `n_left + n_right` vertices.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteWeightedGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<WeightedEdge>,
    adj_left: Vec<Vec<usize>>,
    adj_right: Vec<Vec<usize>>,
}

impl BipartiteWeightedGraph {
    pub fn new(n_left: usize, n_right: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.u >= n_left || e.v >= n_right {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for sides {n_left} x {n_right}",
                    e.u, e.v
                )));
            }
            check_weight(e.w)?;
            if !seen.insert((e.u, e.v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
        }
        let mut adj_left = vec![Vec::new(); n_left];
        let mut adj_right = vec![Vec::new(); n_right];
        for (idx, e) in edges.iter().enumerate() {
            adj_left[e.u].push(idx);
            adj_right[e.v].push(idx);
        }
        Ok(BipartiteWeightedGraph { n_left, n_right, edges, adj_left, adj_right })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> WeightedEdge {
        self.edges[idx]
    }

    /// Indices of edges incident to left vertex `u`.
    pub fn incident_left(&self, u: usize) -> &[usize] {
        &self.adj_left[u]
    }

    /// Indices of edges incident to right vertex `v`.
    pub fn incident_right(&self, v: usize) -> &[usize] {
        &self.adj_right[v]
    }

    /// Copy of this graph with one extra right vertex `b_{n+1}` joined to
    /// every left vertex by an independent `E(lambda)` edge.
    pub fn augment_special_vertex(&self, cfg: SpecialVertexConfig, rng: &mut RngStream) -> Result<Self> {
        let special = self.n_right;
        let mut edges = self.edges.clone();
        edges.reserve(self.n_left);
        for u in 0..self.n_left {
            let w = sample_exponential(cfg.lambda, rng)?;
            edges.push(WeightedEdge { u, v: special, w });
        }
        BipartiteWeightedGraph::new(self.n_left, self.n_right + 1, edges)
    }
}

/// Edge-weighted general graph; edges are stored with `u < v`.
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<WeightedEdge>,
    adj: Vec<Vec<usize>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.u == e.v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {}", e.u)));
            }
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidArgument(format!("edge ({}, {}) out of range for n = {n}", e.u, e.v)));
            }
            check_weight(e.w)?;
            let (u, v) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            if !seen.insert((u, v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
            canonical.push(WeightedEdge { u, v, w: e.w });
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, e) in canonical.iter().enumerate() {
            adj[e.u].push(idx);
            adj[e.v].push(idx);
        }
        Ok(WeightedGraph { n, edges: canonical, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> WeightedEdge {
        self.edges[idx]
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Copy with every weight truncated at `mu`: `w -> min(w, mu)`.
    pub fn truncate_weights(&self, mu: f64) -> WeightedGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| WeightedEdge { u: e.u, v: e.v, w: e.w.min(mu) })
            .collect();
        WeightedGraph::new(self.n, edges).expect("truncation preserves validity")
    }
}

fn check_weight(w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::InvalidArgument(format!("edge weight must be finite and nonnegative, got {w}")));
    }
    Ok(())
}

/// Output of [`generate`]: one of the two graph kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratedGraph {
    Bipartite(BipartiteWeightedGraph),
    General(WeightedGraph),
}

impl GeneratedGraph {
    pub fn as_bipartite(&self) -> Option<&BipartiteWeightedGraph> {
        match self {
            GeneratedGraph::Bipartite(g) => Some(g),
            GeneratedGraph::General(_) => None,
        }
    }

    pub fn as_general(&self) -> Option<&WeightedGraph> {
        match self {
            GeneratedGraph::General(g) => Some(g),
            GeneratedGraph::Bipartite(_) => None,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            GeneratedGraph::Bipartite(g) => g.edges().len(),
            GeneratedGraph::General(g) => g.edges().len(),
        }
    }
}

/// Draw a random instance. Candidate pairs are visited in a fixed
/// lexicographic order; each is kept with probability `p` (complete models
/// skip the presence draw) and a kept pair consumes one exponential draw.
pub fn generate(spec: ModelSpec, rng: &mut RngStream) -> Result<GeneratedGraph> {
    let spec = spec.validated()?;
    match spec.model {
        Model::CompleteBipartite | Model::Gnnp => {
            let mut edges = Vec::new();
            for u in 0..spec.n {
                for v in 0..spec.n {
                    if spec.p >= 1.0 || rng.next_unit() < spec.p {
                        edges.push(WeightedEdge { u, v, w: sample_exponential(spec.rate, rng)? });
                    }
                }
            }
            Ok(GeneratedGraph::Bipartite(BipartiteWeightedGraph::new(spec.n, spec.n, edges)?))
        }
        Model::Complete | Model::Gnp => {
            let mut edges = Vec::new();
            for u in 0..spec.n {
                for v in (u + 1)..spec.n {
                    if spec.p >= 1.0 || rng.next_unit() < spec.p {
                        edges.push(WeightedEdge { u, v, w: sample_exponential(spec.rate, rng)? });
                    }
                }
            }
            Ok(GeneratedGraph::General(WeightedGraph::new(spec.n, edges)?))
        }
    }
}
