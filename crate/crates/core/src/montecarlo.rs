//! Declarative Monte Carlo experiments over random matching instances.
//!
//! Every trial draws its own random stream from (base_seed, purpose, trial
//! index), so results are bit-identical regardless of worker count or
//! scheduling, and aggregation is order-insensitive (values are sorted before
//! summation). Infeasible instances are data, not errors: they are recorded,
//! excluded from cost means, and reported as a frequency.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{solve_assignment, solve_sequence};
use crate::diagnostics::{ab_diameter, build_alternating_digraph, DiagnosticsConfig};
use crate::error::{Error, Result};
use crate::general::solve_perfect_matching;
use crate::graph::{generate, GeneratedGraph, Model, ModelSpec, SpecialVertexConfig};
use crate::rng::RngStream;
use crate::theory;

/// Which per-trial measurement an experiment records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    PerfectCost,
    CostSequence,
    Pnr,
    Membership,
    Concentration,
    MaxEdge,
    Diameter,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::PerfectCost => "perfect_cost",
            Quantity::CostSequence => "cost_sequence",
            Quantity::Pnr => "pnr",
            Quantity::Membership => "membership",
            Quantity::Concentration => "concentration",
            Quantity::MaxEdge => "max_edge",
            Quantity::Diameter => "diameter",
        }
    }

    /// Scalar the Summary aggregates.
    fn main_scalar(self) -> &'static str {
        match self {
            Quantity::PerfectCost | Quantity::CostSequence | Quantity::Concentration => "cost",
            Quantity::Pnr => "hit",
            Quantity::Membership => "matched_count",
            Quantity::MaxEdge => "max_edge",
            Quantity::Diameter => "max_hops",
        }
    }
}

/// Quantity-specific knobs; unset fields fall back to documented defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ExperimentParams {
    /// Matching size for cost_sequence / pnr / membership / diameter.
    pub r: Option<usize>,
    /// Special-vertex edge rate for pnr (default 1e-2).
    pub lambda: Option<f64>,
    /// Deviation thresholds for concentration tables.
    pub epsilons: Vec<f64>,
    /// mu = mu_factor * ln n / (n p) for the truncated-cost variant
    /// (default 20).
    pub mu_factor: Option<f64>,
    /// Sampled (a, b) pairs per diameter trial (default 50).
    pub pair_samples: Option<usize>,
}

pub const DEFAULT_LAMBDA: f64 = 1e-2;
pub const DEFAULT_MU_FACTOR: f64 = 20.0;
pub const DEFAULT_PAIR_SAMPLES: usize = 50;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub model: ModelSpec,
    pub trials: usize,
    pub base_seed: u64,
    pub quantity: Quantity,
    #[serde(default)]
    pub params: ExperimentParams,
}

impl ExperimentSpec {
    pub fn validated(self) -> Result<Self> {
        self.model.validated()?;
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        let bipartite_only = matches!(
            self.quantity,
            Quantity::CostSequence | Quantity::Pnr | Quantity::Membership | Quantity::Diameter
        );
        if bipartite_only && !self.model.model.is_bipartite() {
            return Err(Error::InvalidArgument(format!(
                "{} experiments need a bipartite model",
                self.quantity.name()
            )));
        }
        if let Some(r) = self.params.r {
            if r > self.model.n {
                return Err(Error::InvalidArgument(format!(
                    "r = {r} exceeds n = {}",
                    self.model.n
                )));
            }
        }
        if let Some(lambda) = self.params.lambda {
            if !lambda.is_finite() || lambda <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "lambda must be positive, got {lambda}"
                )));
            }
        }
        if self.quantity == Quantity::Concentration && self.params.epsilons.is_empty() {
            return Err(Error::InvalidArgument(
                "concentration experiments need at least one epsilon".into(),
            ));
        }
        Ok(self)
    }

    /// Stream purpose tag; together with base_seed and trial index it pins
    /// every trial's randomness.
    fn purpose(&self) -> String {
        format!("mc/{}", self.quantity.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub stream_id: u64,
    pub outcome: Outcome,
    /// Named measurements; empty for infeasible trials.
    pub scalars: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub theory_value: f64,
    pub relative_deviation: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials_ok: usize,
    pub trials_infeasible: usize,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    /// (percent, value) at 1, 5, 25, 50, 75, 95, 99.
    pub quantiles: Vec<(f64, f64)>,
    pub comparison: Option<Comparison>,
}

const QUANTILE_PERCENTS: [f64; 7] = [1.0, 5.0, 25.0, 50.0, 75.0, 95.0, 99.0];

/// Order-insensitive aggregation of one scalar across records.
pub fn summarize(records: &[TrialRecord], scalar: &str, theory: Option<f64>) -> Summary {
    let mut values: Vec<f64> = records
        .iter()
        .filter(|r| r.outcome == Outcome::Ok)
        .filter_map(|r| r.scalars.get(scalar).copied())
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let trials_ok = values.len();
    let trials_infeasible = records
        .iter()
        .filter(|r| r.outcome == Outcome::Infeasible)
        .count();

    let mean = if trials_ok > 0 {
        values.iter().sum::<f64>() / trials_ok as f64
    } else {
        f64::NAN
    };
    let variance = if trials_ok > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials_ok - 1) as f64
    } else {
        f64::NAN
    };
    let standard_error = (variance / trials_ok as f64).sqrt();

    let quantiles = QUANTILE_PERCENTS
        .iter()
        .map(|&pct| (pct, quantile(&values, pct / 100.0)))
        .collect();

    let comparison = theory.map(|theory_value| Comparison {
        theory_value,
        relative_deviation: ((mean - theory_value) / theory_value).abs(),
        z_score: (mean - theory_value) / standard_error,
    });

    Summary {
        trials_ok,
        trials_infeasible,
        mean,
        variance,
        standard_error,
        quantiles,
        comparison,
    }
}

/// Linear-interpolation quantile of sorted values.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Run trials in parallel; `trial` returns None for infeasible instances.
fn run_trials<F>(
    trials: usize,
    base_seed: u64,
    purpose: &str,
    trial: F,
) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize, &mut RngStream) -> Result<Option<BTreeMap<String, f64>>> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::for_purpose(base_seed, purpose, i as u64);
            let stream_id = rng.stream_id();
            match trial(i, &mut rng) {
                Ok(Some(scalars)) => Ok(TrialRecord {
                    trial_index: i as u64,
                    stream_id,
                    outcome: Outcome::Ok,
                    scalars,
                }),
                Ok(None) | Err(Error::NoMatching(_)) | Err(Error::NoPerfectMatching) => {
                    Ok(TrialRecord {
                        trial_index: i as u64,
                        stream_id,
                        outcome: Outcome::Infeasible,
                        scalars: BTreeMap::new(),
                    })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Theory value a cost mean is compared against: the exact Parisi partial sum
/// on the complete bipartite graph, the zeta(2)/p limit for sparse bipartite
/// models, and the half-zeta(2)/p limit for general models.
pub fn cost_theory_value(model: &ModelSpec) -> f64 {
    match model.model {
        Model::CompleteBipartite => theory::parisi_sum(model.n),
        Model::Gnnp => theory::ZETA2 / model.p,
        Model::Complete | Model::Gnp => theory::HALF_ZETA2 / model.p,
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<(Vec<TrialRecord>, Summary)> {
    let spec = spec.clone().validated()?;
    let purpose = spec.purpose();
    let model = spec.model;
    let n = model.n;

    let records = match spec.quantity {
        Quantity::PerfectCost | Quantity::MaxEdge | Quantity::Concentration => {
            let mu_factor = spec.params.mu_factor.unwrap_or(DEFAULT_MU_FACTOR);
            let with_truncation = spec.quantity == Quantity::Concentration;
            run_trials(spec.trials, spec.base_seed, &purpose, |_, rng| {
                let g = generate(model, rng)?;
                let (cost, max_edge, trunc_cost) = match &g {
                    GeneratedGraph::Bipartite(g) => {
                        let m = solve_assignment(g)?;
                        let trunc = if with_truncation {
                            let mu = mu_factor * (n as f64).ln() / (n as f64 * model.p);
                            let edges = g
                                .edges()
                                .iter()
                                .map(|e| crate::graph::WeightedEdge {
                                    u: e.u,
                                    v: e.v,
                                    w: e.w.min(mu),
                                })
                                .collect();
                            let gt = crate::graph::BipartiteWeightedGraph::new(
                                g.n_left(),
                                g.n_right(),
                                edges,
                            )?;
                            Some(solve_assignment(&gt)?.cost)
                        } else {
                            None
                        };
                        let max_edge = crate::diagnostics::max_matching_edge_cost(&m.pairs)?;
                        (m.cost, max_edge, trunc)
                    }
                    GeneratedGraph::General(g) => {
                        let (m, _) = solve_perfect_matching(g)?;
                        let trunc = if with_truncation {
                            let mu = mu_factor * (n as f64).ln() / (n as f64 * model.p);
                            Some(solve_perfect_matching(&g.truncate_weights(mu))?.0.cost)
                        } else {
                            None
                        };
                        let max_edge = m.max_edge_cost()?;
                        (m.cost, max_edge, trunc)
                    }
                };
                let mut scalars = BTreeMap::new();
                scalars.insert("cost".into(), cost);
                scalars.insert("p_cost".into(), model.p * cost);
                scalars.insert("max_edge".into(), max_edge);
                if let Some(tc) = trunc_cost {
                    scalars.insert("trunc_cost".into(), tc);
                    scalars.insert(
                        "trunc_differs".into(),
                        if (tc - cost).abs() > 1e-9 { 1.0 } else { 0.0 },
                    );
                }
                Ok(Some(scalars))
            })?
        }
        Quantity::CostSequence => {
            let r_max = spec.params.r.unwrap_or(n);
            run_trials(spec.trials, spec.base_seed, &purpose, |_, rng| {
                let g = generate(model, rng)?;
                let g = g.as_bipartite().expect("validated bipartite model");
                let seq = solve_sequence(g, r_max, false)?;
                let mut scalars = BTreeMap::new();
                scalars.insert("cost".into(), seq.costs[r_max - 1]);
                for (i, inc) in seq.increments.iter().enumerate() {
                    scalars.insert(format!("inc_{:03}", i + 1), *inc);
                }
                Ok(Some(scalars))
            })?
        }
        Quantity::Pnr => {
            let r = spec.params.r.ok_or_else(|| {
                Error::InvalidArgument("pnr experiments need r".into())
            })?;
            let lambda = spec.params.lambda.unwrap_or(DEFAULT_LAMBDA);
            let special_cfg = SpecialVertexConfig::new(lambda)?;
            run_trials(spec.trials, spec.base_seed, &purpose, |_, rng| {
                let mut scalars = BTreeMap::new();
                if r == 0 {
                    scalars.insert("hit".into(), 0.0);
                    return Ok(Some(scalars));
                }
                let g = generate(model, rng)?;
                let g = g.as_bipartite().expect("validated bipartite model");
                let special = g.n_right();
                let aug = g.augment_special_vertex(special_cfg, rng)?;
                let seq = solve_sequence(&aug, r, false)?;
                let hit = seq.final_matching.contains_right(special);
                scalars.insert("hit".into(), if hit { 1.0 } else { 0.0 });
                Ok(Some(scalars))
            })?
        }
        Quantity::Membership => {
            let r = spec.params.r.unwrap_or(n);
            run_trials(spec.trials, spec.base_seed, &purpose, |_, rng| {
                let g = generate(model, rng)?;
                let g = g.as_bipartite().expect("validated bipartite model");
                let seq = solve_sequence(g, r, false)?;
                let mut scalars = BTreeMap::new();
                for b in seq.final_matching.matched_right() {
                    scalars.insert(format!("b_{b:03}"), 1.0);
                }
                scalars.insert("matched_count".into(), seq.final_matching.size() as f64);
                Ok(Some(scalars))
            })?
        }
        Quantity::Diameter => {
            let r = spec
                .params
                .r
                .unwrap_or_else(|| n.saturating_sub(theory::default_cutoff(n)).max(1));
            let pair_samples = spec.params.pair_samples.unwrap_or(DEFAULT_PAIR_SAMPLES);
            let mut cfg = DiagnosticsConfig::bipartite(n);
            cfg.a_limit = Some((r + 1).min(n));
            cfg.pair_samples = pair_samples;
            run_trials(spec.trials, spec.base_seed, &purpose, |_, rng| {
                let g = generate(model, rng)?;
                let g = g.as_bipartite().expect("validated bipartite model");
                let seq = solve_sequence(g, r, false)?;
                let d = build_alternating_digraph(g, &seq.final_matching, &cfg);
                let pairs = d.sample_pairs(cfg.pair_samples, rng);
                let report = ab_diameter(&d, &pairs)?;
                let max_hops = report.max_hops.unwrap_or(2 * n) as f64;
                let within = report.unreachable == 0 && max_hops <= cfg.k0 as f64;
                let mut scalars = BTreeMap::new();
                scalars.insert("max_hops".into(), max_hops);
                scalars.insert("unreachable".into(), report.unreachable as f64);
                scalars.insert("within_bound".into(), if within { 1.0 } else { 0.0 });
                if let Some(h) = report.max_hops_unmatched {
                    scalars.insert("max_hops_unmatched".into(), h as f64);
                }
                Ok(Some(scalars))
            })?
        }
    };

    let theory = match spec.quantity {
        Quantity::PerfectCost | Quantity::CostSequence | Quantity::Concentration => {
            Some(cost_theory_value(&model))
        }
        _ => None,
    };
    let summary = summarize(&records, spec.quantity.main_scalar(), theory);
    Ok((records, summary))
}

/// Estimate of P(n, r): the normalized probability that the special vertex
/// joins the optimal r-matching.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PnrEstimate {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub lambda: f64,
    pub trials: usize,
    pub trials_ok: usize,
    pub hits: usize,
    /// hits / (trials_ok * lambda); carries a relative bias of order
    /// O(lambda) because lambda is finite.
    pub estimate: f64,
    pub standard_error: f64,
    /// (H_n - H_{n-r}) / p; exact for the complete bipartite model.
    pub theory: f64,
}

pub fn estimate_pnr(
    n: usize,
    r: usize,
    p: f64,
    lambda: f64,
    trials: usize,
    base_seed: u64,
) -> Result<PnrEstimate> {
    let model = if p >= 1.0 {
        ModelSpec::new(Model::CompleteBipartite, n, 1.0)?
    } else {
        ModelSpec::new(Model::Gnnp, n, p)?
    };
    let spec = ExperimentSpec {
        name: "pnr".into(),
        model,
        trials,
        base_seed,
        quantity: Quantity::Pnr,
        params: ExperimentParams {
            r: Some(r),
            lambda: Some(lambda),
            ..Default::default()
        },
    };
    let (records, summary) = run_experiment(&spec)?;
    let trials_ok = summary.trials_ok;
    let hits = records
        .iter()
        .filter(|rec| rec.outcome == Outcome::Ok && rec.scalars.get("hit") == Some(&1.0))
        .count();
    let hit_rate = hits as f64 / trials_ok as f64;
    let rate_se = (hit_rate * (1.0 - hit_rate) / trials_ok as f64).sqrt();
    Ok(PnrEstimate {
        n,
        r,
        p,
        lambda,
        trials,
        trials_ok,
        hits,
        estimate: hit_rate / lambda,
        standard_error: rate_se / lambda,
        theory: (theory::harmonic(n) - theory::harmonic(n - r)) / p,
    })
}

/// Per-vertex membership frequencies of B_r, with a chi-square uniformity
/// statistic against the r/n expectation. The usual Pearson statistic is
/// rescaled by (n-1)/n because the counts are constrained to sum to
/// trials * r (a random r-subset, not n independent coins).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReport {
    pub n: usize,
    pub r: usize,
    pub trials_ok: usize,
    pub trials_infeasible: usize,
    pub frequencies: Vec<f64>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// 0.999 quantile of the chi-square distribution with n-1 dof.
    pub critical_value: f64,
    pub passes: bool,
}

pub fn membership_frequency(
    n: usize,
    r: usize,
    p: f64,
    trials: usize,
    base_seed: u64,
) -> Result<MembershipReport> {
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    let model = if p >= 1.0 {
        ModelSpec::new(Model::CompleteBipartite, n, 1.0)?
    } else {
        ModelSpec::new(Model::Gnnp, n, p)?
    };
    let spec = ExperimentSpec {
        name: "membership".into(),
        model,
        trials,
        base_seed,
        quantity: Quantity::Membership,
        params: ExperimentParams {
            r: Some(r),
            ..Default::default()
        },
    };
    let (records, summary) = run_experiment(&spec)?;
    let trials_ok = summary.trials_ok;

    let mut counts = vec![0usize; n];
    for rec in records.iter().filter(|rec| rec.outcome == Outcome::Ok) {
        for (b, count) in counts.iter_mut().enumerate() {
            if rec.scalars.contains_key(&format!("b_{b:03}")) {
                *count += 1;
            }
        }
    }
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / trials_ok as f64).collect();

    let q = r as f64 / n as f64;
    let expected = trials_ok as f64 * q;
    let denom = trials_ok as f64 * q * (1.0 - q) * n as f64 / (n as f64 - 1.0);
    let chi_square = if denom > 0.0 {
        counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / denom)
            .sum()
    } else {
        // r = n: every vertex is always matched, no variability to test.
        0.0
    };
    let dof = n - 1;
    let critical_value = ChiSquared::new(dof as f64)
        .map_err(|e| Error::Numeric(e.to_string()))?
        .inverse_cdf(0.999);

    Ok(MembershipReport {
        n,
        r,
        trials_ok,
        trials_infeasible: summary.trials_infeasible,
        frequencies,
        chi_square,
        degrees_of_freedom: dof,
        critical_value,
        passes: chi_square <= critical_value,
    })
}

/// Exceedance table for the concentration probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub p: f64,
    pub trials_ok: usize,
    pub trials_infeasible: usize,
    /// Limit constant the scaled cost p*C is compared against.
    pub limit: f64,
    /// (epsilon, fraction of ok trials with |p*C - limit| >= epsilon).
    pub exceedance: Vec<(f64, f64)>,
    pub mu: f64,
    /// Fraction of ok trials where the truncated-weight optimum differs.
    pub truncation_mismatch: f64,
}

pub fn concentration_tail(
    spec: &ExperimentSpec,
    epsilons: &[f64],
) -> Result<(Vec<TrialRecord>, ConcentrationReport)> {
    let mut spec = spec.clone();
    spec.quantity = Quantity::Concentration;
    if spec.params.epsilons.is_empty() {
        spec.params.epsilons = epsilons.to_vec();
    }
    let (records, summary) = run_experiment(&spec)?;
    let model = spec.model;
    let limit = if model.model.is_bipartite() {
        theory::ZETA2
    } else {
        theory::HALF_ZETA2
    };
    let ok: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.outcome == Outcome::Ok)
        .collect();
    let trials_ok = ok.len();
    let exceedance = epsilons
        .iter()
        .map(|&eps| {
            let count = ok
                .iter()
                .filter(|r| (r.scalars["p_cost"] - limit).abs() >= eps)
                .count();
            (eps, count as f64 / trials_ok as f64)
        })
        .collect();
    let mismatch = ok
        .iter()
        .filter(|r| r.scalars.get("trunc_differs") == Some(&1.0))
        .count();
    let mu_factor = spec.params.mu_factor.unwrap_or(DEFAULT_MU_FACTOR);
    Ok((
        records,
        ConcentrationReport {
            n: model.n,
            p: model.p,
            trials_ok,
            trials_infeasible: summary.trials_infeasible,
            limit,
            exceedance,
            mu: mu_factor * (model.n as f64).ln() / (model.n as f64 * model.p),
            truncation_mismatch: mismatch as f64 / trials_ok as f64,
        },
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncrementRow {
    pub r: usize,
    pub empirical_mean: f64,
    pub standard_error: f64,
    pub theory: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncrementProfile {
    pub n: usize,
    pub p: f64,
    pub trials_ok: usize,
    pub trials_infeasible: usize,
    pub rows: Vec<IncrementRow>,
}

/// Monte Carlo means of C(n,r) - C(n,r-1) for r = 1..n against the
/// closed-form increment law. Trials whose full sequence is infeasible are
/// excluded entirely.
pub fn increment_profile(
    n: usize,
    p: f64,
    trials: usize,
    base_seed: u64,
) -> Result<(Vec<TrialRecord>, IncrementProfile)> {
    let model = if p >= 1.0 {
        ModelSpec::new(Model::CompleteBipartite, n, 1.0)?
    } else {
        ModelSpec::new(Model::Gnnp, n, p)?
    };
    let spec = ExperimentSpec {
        name: "increments".into(),
        model,
        trials,
        base_seed,
        quantity: Quantity::CostSequence,
        params: ExperimentParams {
            r: Some(n),
            ..Default::default()
        },
    };
    let (records, summary) = run_experiment(&spec)?;

    let rows = (1..=n)
        .map(|r| {
            let s = summarize(
                &records,
                &format!("inc_{r:03}"),
                Some(theory::expected_increment(n, r, p)),
            );
            let c = s.comparison.unwrap();
            IncrementRow {
                r,
                empirical_mean: s.mean,
                standard_error: s.standard_error,
                theory: c.theory_value,
                z_score: c.z_score,
            }
        })
        .collect();

    Ok((
        records,
        IncrementProfile {
            n,
            p,
            trials_ok: summary.trials_ok,
            trials_infeasible: summary.trials_infeasible,
            rows,
        },
    ))
}

/// Serialize results as line-delimited JSON: a config echo line (stable
/// across reruns), a timestamp line (the only non-reproducible content),
/// one line per trial, optional named report documents, and the summary.
pub fn render_jsonl(
    config: &serde_json::Value,
    records: &[TrialRecord],
    reports: &[(&str, serde_json::Value)],
    summary: Option<&Summary>,
) -> Result<String> {
    use std::fmt::Write;

    let mut out = String::new();
    let version = env!("CARGO_PKG_VERSION");
    writeln!(
        out,
        "{}",
        serde_json::json!({"type": "config", "version": version, "config": config})
    )
    .ok();
    writeln!(
        out,
        "{}",
        serde_json::json!({"type": "timestamp", "unix_seconds": unix_seconds()})
    )
    .ok();
    for rec in records {
        let mut v = serde_json::to_value(rec).map_err(|e| Error::Numeric(e.to_string()))?;
        v.as_object_mut()
            .unwrap()
            .insert("type".into(), "trial".into());
        writeln!(out, "{v}").ok();
    }
    for (kind, report) in reports {
        writeln!(
            out,
            "{}",
            serde_json::json!({"type": "report", "kind": kind, "report": report})
        )
        .ok();
    }
    if let Some(summary) = summary {
        let s = serde_json::to_value(summary).map_err(|e| Error::Numeric(e.to_string()))?;
        writeln!(out, "{}", serde_json::json!({"type": "summary", "summary": s})).ok();
    }
    Ok(out)
}

/// CSV mirror of the JSONL schema: config/timestamp/report/summary appear as
/// `#`-prefixed comment lines, trials as rows over the union of scalar keys.
pub fn render_csv(
    config: &serde_json::Value,
    records: &[TrialRecord],
    reports: &[(&str, serde_json::Value)],
    summary: Option<&Summary>,
) -> Result<String> {
    use std::fmt::Write;

    let mut keys: Vec<String> = records
        .iter()
        .flat_map(|r| r.scalars.keys().cloned())
        .collect();
    keys.sort();
    keys.dedup();

    let mut out = String::new();
    writeln!(
        out,
        "# config {}",
        serde_json::json!({"version": env!("CARGO_PKG_VERSION"), "config": config})
    )
    .ok();
    writeln!(out, "# timestamp {}", unix_seconds()).ok();
    writeln!(out, "trial_index,stream_id,outcome,{}", keys.join(",")).ok();
    for rec in records {
        let outcome = match rec.outcome {
            Outcome::Ok => "ok",
            Outcome::Infeasible => "infeasible",
        };
        write!(out, "{},{},{}", rec.trial_index, rec.stream_id, outcome).ok();
        for k in &keys {
            match rec.scalars.get(k) {
                Some(v) => write!(out, ",{v}").ok(),
                None => write!(out, ",").ok(),
            };
        }
        writeln!(out).ok();
    }
    for (kind, report) in reports {
        writeln!(out, "# report {kind} {report}").ok();
    }
    if let Some(summary) = summary {
        let s = serde_json::to_value(summary).map_err(|e| Error::Numeric(e.to_string()))?;
        writeln!(out, "# summary {s}").ok();
    }
    Ok(out)
}

fn unix_seconds() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(model: Model, n: usize, p: f64, trials: usize, q: Quantity) -> ExperimentSpec {
        ExperimentSpec {
            name: q.name().into(),
            model: ModelSpec::new(model, n, p).unwrap(),
            trials,
            base_seed: 1234,
            quantity: q,
            params: ExperimentParams::default(),
        }
    }

    #[test]
    fn parisi_n1_mean_is_one() {
        let s = spec(Model::CompleteBipartite, 1, 1.0, 1000, Quantity::PerfectCost);
        let (_, summary) = run_experiment(&s).unwrap();
        let c = summary.comparison.unwrap();
        assert!((c.theory_value - 1.0).abs() < 1e-12);
        assert!(
            (summary.mean - 1.0).abs() <= 3.0 * summary.standard_error,
            "mean {} se {}",
            summary.mean,
            summary.standard_error
        );
    }

    #[test]
    fn reproducible_across_runs() {
        let s = spec(Model::Gnnp, 12, 0.6, 50, Quantity::PerfectCost);
        let (r1, s1) = run_experiment(&s).unwrap();
        let (r2, s2) = run_experiment(&s).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(s1, s2);
    }

    #[test]
    fn summary_is_order_insensitive() {
        let s = spec(Model::CompleteBipartite, 5, 1.0, 200, Quantity::PerfectCost);
        let (mut records, summary) = run_experiment(&s).unwrap();
        records.reverse();
        records.rotate_left(7);
        let shuffled = summarize(&records, "cost", summary.comparison.as_ref().map(|c| c.theory_value));
        assert!((shuffled.mean - summary.mean).abs() <= 1e-12);
        assert!((shuffled.variance - summary.variance).abs() <= 1e-12);
        for (a, b) in shuffled.quantiles.iter().zip(summary.quantiles.iter()) {
            assert!((a.1 - b.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn telescoping_increments_match_cost() {
        let s = {
            let mut s = spec(Model::CompleteBipartite, 6, 1.0, 50, Quantity::CostSequence);
            s.params.r = Some(6);
            s
        };
        let (records, _) = run_experiment(&s).unwrap();
        for rec in &records {
            let total: f64 = (1..=6).map(|r| rec.scalars[&format!("inc_{r:03}")]).sum();
            assert!((total - rec.scalars["cost"]).abs() <= 1e-9);
        }
    }

    #[test]
    fn infeasibility_is_counted_not_fatal() {
        // Sparse gnnp at n=6 is frequently infeasible.
        let s = spec(Model::Gnnp, 6, 0.2, 200, Quantity::PerfectCost);
        let (records, summary) = run_experiment(&s).unwrap();
        assert_eq!(summary.trials_ok + summary.trials_infeasible, 200);
        assert!(summary.trials_infeasible > 0);
        for rec in records.iter().filter(|r| r.outcome == Outcome::Infeasible) {
            assert!(rec.scalars.is_empty());
        }
    }

    #[test]
    fn standard_error_shrinks_with_trials() {
        let s1 = spec(Model::CompleteBipartite, 2, 1.0, 2000, Quantity::PerfectCost);
        let s2 = spec(Model::CompleteBipartite, 2, 1.0, 4000, Quantity::PerfectCost);
        let (_, a) = run_experiment(&s1).unwrap();
        let (_, b) = run_experiment(&s2).unwrap();
        let ratio = b.standard_error / a.standard_error;
        let target = 1.0 / 2.0_f64.sqrt();
        assert!(
            (ratio - target).abs() <= 0.1,
            "se ratio {ratio} vs {target}"
        );
    }

    #[test]
    fn pnr_complete_n5_r1_matches_analytic_value() {
        // Hit probability lambda/(5 + lambda); normalized estimate ~ 1/5.
        let est = estimate_pnr(5, 1, 1.0, 0.01, 50_000, 77).unwrap();
        let analytic = 1.0 / (5.0 + 0.01);
        assert!(
            (est.estimate - analytic).abs() <= 3.0 * est.standard_error,
            "estimate {} se {}",
            est.estimate,
            est.standard_error
        );
        assert!((est.theory - 0.2).abs() < 1e-12);
    }

    #[test]
    fn pnr_r0_is_zero() {
        let est = estimate_pnr(5, 0, 1.0, 0.01, 100, 1).unwrap();
        assert_eq!(est.hits, 0);
        assert_eq!(est.estimate, 0.0);
    }

    #[test]
    fn membership_full_matching_covers_everything() {
        let rep = membership_frequency(4, 4, 1.0, 200, 3).unwrap();
        assert!(rep.frequencies.iter().all(|&f| (f - 1.0).abs() < 1e-12));
        assert!(rep.passes);
    }

    #[test]
    fn membership_half_is_near_uniform() {
        let rep = membership_frequency(4, 2, 1.0, 4000, 9).unwrap();
        let se = (0.25_f64 / 4000.0).sqrt();
        for &f in &rep.frequencies {
            assert!((f - 0.5).abs() <= 4.0 * se, "frequency {f}");
        }
        assert!(rep.passes, "chi-square {} > {}", rep.chi_square, rep.critical_value);
    }

    #[test]
    fn concentration_trivial_epsilons() {
        let mut s = spec(Model::Gnnp, 30, 0.5, 40, Quantity::Concentration);
        s.params.epsilons = vec![0.0, 1e9];
        let (_, rep) = concentration_tail(&s, &[0.0, 1e9]).unwrap();
        assert_eq!(rep.exceedance[0], (0.0, 1.0));
        assert_eq!(rep.exceedance[1].1, 0.0);
    }

    #[test]
    fn increment_profile_small_case() {
        let (_, prof) = increment_profile(4, 1.0, 3000, 21).unwrap();
        assert_eq!(prof.rows.len(), 4);
        for row in &prof.rows {
            assert!(
                (row.empirical_mean - row.theory).abs() <= 4.0 * row.standard_error,
                "r={} mean {} theory {}",
                row.r,
                row.empirical_mean,
                row.theory
            );
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = spec(Model::Gnp, 10, 0.5, 10, Quantity::Membership);
        assert!(run_experiment(&s).is_err());
        s = spec(Model::CompleteBipartite, 10, 1.0, 0, Quantity::PerfectCost);
        assert!(run_experiment(&s).is_err());
        s = spec(Model::CompleteBipartite, 10, 1.0, 5, Quantity::Pnr);
        s.params.r = Some(11);
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn rendered_output_stable_except_timestamp() {
        let s = spec(Model::CompleteBipartite, 3, 1.0, 5, Quantity::PerfectCost);
        let (records, summary) = run_experiment(&s).unwrap();
        let config = serde_json::to_value(&s).unwrap();
        let strip = |text: String| -> Vec<String> {
            text.lines()
                .filter(|l| !l.contains("timestamp"))
                .map(|l| l.to_string())
                .collect()
        };
        let j1 = strip(render_jsonl(&config, &records, &[], Some(&summary)).unwrap());
        let j2 = strip(render_jsonl(&config, &records, &[], Some(&summary)).unwrap());
        assert_eq!(j1, j2);
        assert_eq!(j1.len(), 2 + records.len());

        let c = render_csv(&config, &records, &[], Some(&summary)).unwrap();
        let header = c.lines().nth(2).unwrap();
        assert!(header.starts_with("trial_index,stream_id,outcome,"));
        assert!(header.contains("cost"));
    }
}
