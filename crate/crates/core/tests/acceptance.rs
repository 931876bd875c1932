//! Acceptance gate: twelve independent criteria covering solver
//! correctness against brute-force oracles, exact finite-n laws, limit
//! trends at desk scale, and structural diagnostics. Each test prints one
//! pass/fail line (visible with `--nocapture`) and asserts it.

use randmatch::bipartite::{brute_force_bipartite, solve_assignment, solve_sequence};
use randmatch::general::{brute_force_general, solve_perfect_matching, verify_certificate};
use randmatch::graph::{generate, Model, ModelSpec};
use randmatch::montecarlo::{
    concentration_tail, estimate_pnr, increment_profile, membership_frequency, run_experiment,
    ExperimentParams, ExperimentSpec, Outcome, Quantity,
};
use randmatch::theory;
use randmatch::{Error, RngStream};

const SEED: u64 = 0xACCE97;

fn report(id: u32, passed: bool, detail: &str) {
    println!(
        "criterion {id:2}: {} {detail}",
        if passed { "pass" } else { "FAIL" }
    );
    assert!(passed, "criterion {id} failed: {detail}");
}

fn experiment(name: &str, model: ModelSpec, trials: usize, quantity: Quantity) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        model,
        trials,
        base_seed: SEED,
        quantity,
        params: ExperimentParams::default(),
    }
}

/// 1000 bipartite instances against exhaustive enumeration, including
/// agreement on infeasibility, for every prefix size r.
#[test]
fn criterion_01_bipartite_oracle() {
    let mut rng = RngStream::for_purpose(SEED, "acceptance/bipartite-oracle", 0);
    let cases = [
        (Model::CompleteBipartite, 1.0),
        (Model::Gnnp, 0.5),
        (Model::Gnnp, 1.0),
    ];
    let mut checked = 0usize;
    let mut instances = 0usize;
    'outer: for round in 0.. {
        for &(model, p) in &cases {
            for n in 2..=7usize {
                if instances >= 1000 {
                    break 'outer;
                }
                instances += 1;
                let _ = round;
                let spec = ModelSpec { model, n, p, rate: 1.0 }.validated().unwrap();
                let g = generate(spec, &mut rng).unwrap();
                let g = g.as_bipartite().unwrap();
                for r in 1..=n {
                    let fast = solve_sequence(g, r, false);
                    let slow = brute_force_bipartite(g, r);
                    match (&fast, &slow) {
                        (Ok(seq), Ok(m)) => {
                            assert!(
                                (seq.costs[r - 1] - m.cost).abs() <= 1e-9,
                                "cost mismatch at n={n} r={r}"
                            );
                            checked += 1;
                        }
                        (Err(Error::NoMatching(_)), Err(Error::NoMatching(_))) => checked += 1,
                        _ => panic!("feasibility disagreement at n={n} r={r}"),
                    }
                }
                // Square feasible instances also go through solve_assignment.
                if let Ok(m) = solve_assignment(g) {
                    let oracle = brute_force_bipartite(g, n).unwrap();
                    assert!((m.cost - oracle.cost).abs() <= 1e-9);
                }
            }
        }
    }
    report(
        1,
        instances == 1000,
        &format!("bipartite oracle: {instances} instances, {checked} (r, instance) checks"),
    );
}

/// 500 general-graph instances against exhaustive enumeration; every
/// solved instance must also carry a verifiable dual certificate.
#[test]
fn criterion_02_general_oracle() {
    let mut rng = RngStream::for_purpose(SEED, "acceptance/general-oracle", 0);
    let mut instances = 0usize;
    let mut feasible = 0usize;
    'outer: for _round in 0.. {
        for n in [4usize, 6, 8, 10] {
            for p in [0.5, 0.9] {
                if instances >= 500 {
                    break 'outer;
                }
                instances += 1;
                let spec = ModelSpec { model: Model::Gnp, n, p, rate: 1.0 }.validated().unwrap();
                let g = generate(spec, &mut rng).unwrap();
                let g = g.as_general().unwrap();
                let fast = solve_perfect_matching(g);
                let slow = brute_force_general(g);
                match (&fast, &slow) {
                    (Ok((m, state)), Ok(oracle)) => {
                        assert!(
                            (m.cost - oracle.cost).abs() <= 1e-9,
                            "cost mismatch at n={n} p={p}"
                        );
                        assert!(verify_certificate(g, m, state), "bad certificate n={n} p={p}");
                        feasible += 1;
                    }
                    (Err(Error::NoPerfectMatching), Err(Error::NoPerfectMatching)) => {}
                    _ => panic!("feasibility disagreement at n={n} p={p}"),
                }
            }
        }
    }
    report(
        2,
        instances == 500,
        &format!("general oracle: {instances} instances, {feasible} feasible with certificates"),
    );
}

/// Exact finite-n mean of the complete bipartite cost: sum of 1/k^2.
#[test]
fn criterion_03_parisi_mean() {
    let model = ModelSpec::new(Model::CompleteBipartite, 10, 1.0).unwrap();
    let (_, summary) =
        run_experiment(&experiment("parisi", model, 20_000, Quantity::PerfectCost)).unwrap();
    let theory = theory::parisi_sum(10);
    let dev = (summary.mean - theory).abs();
    let bound = 3.0 * summary.standard_error;
    report(
        3,
        dev <= bound,
        &format!(
            "parisi: mean {:.7} vs {theory:.7}, |dev| {dev:.5} <= 3se {bound:.5}",
            summary.mean
        ),
    );
}

fn scaled_cost_deviation(model: Model, n: usize, p: f64, trials: usize, limit: f64) -> f64 {
    let spec = ModelSpec { model, n, p, rate: 1.0 }.validated().unwrap();
    let (_, summary) = run_experiment(&experiment("limit", spec, trials, Quantity::PerfectCost))
        .unwrap();
    assert_eq!(summary.trials_infeasible, 0, "unexpected infeasible trials");
    (p * summary.mean - limit).abs() / limit
}

/// Bipartite limit law: p * E[cost] approaches zeta(2), with the deviation
/// shrinking from n=100 to n=400 under the same recipe.
#[test]
fn criterion_04_bipartite_limit() {
    let dev400 = scaled_cost_deviation(Model::Gnnp, 400, 0.25, 200, theory::ZETA2);
    let dev100 = scaled_cost_deviation(Model::Gnnp, 100, 0.25, 200, theory::ZETA2);
    report(
        4,
        dev400 <= 0.10 && dev400 <= dev100,
        &format!("bipartite limit: deviation {dev400:.4} at n=400 (<= 0.10), {dev100:.4} at n=100"),
    );
}

/// General-graph limit law: p * E[cost] approaches zeta(2)/2.
#[test]
fn criterion_05_general_limit() {
    let dev = scaled_cost_deviation(Model::Gnp, 400, 0.25, 200, theory::HALF_ZETA2);
    report(5, dev <= 0.10, &format!("general limit: deviation {dev:.4} at n=400 (<= 0.10)"));
}

/// Increment law: every mean increment within 3 standard errors of the
/// closed form, and the increments telescope to the total cost.
#[test]
fn criterion_06_increment_law() {
    let (records, prof) = increment_profile(10, 1.0, 20_000, SEED).unwrap();
    let max_z = prof.rows.iter().map(|r| r.z_score.abs()).fold(0.0, f64::max);
    let mut telescoping = true;
    for rec in records.iter().filter(|r| r.outcome == Outcome::Ok) {
        let total: f64 = (1..=10)
            .map(|r| rec.scalars[&format!("inc_{r:03}")])
            .sum();
        if (total - rec.scalars["cost"]).abs() > 1e-9 {
            telescoping = false;
        }
    }
    let sum_of_means: f64 = prof.rows.iter().map(|r| r.empirical_mean).sum();
    let parisi_gap = (sum_of_means - theory::parisi_sum(10)).abs();
    report(
        6,
        max_z <= 3.0 && telescoping && parisi_gap < 0.05,
        &format!(
            "increments: max |z| {max_z:.3} <= 3, telescoping {telescoping}, \
             summed means {sum_of_means:.5} vs parisi {:.5}",
            theory::parisi_sum(10)
        ),
    );
}

/// Participation probability of the special vertex against the harmonic
/// closed form, within the larger of 3 standard errors and the known
/// O(lambda) estimator bias.
#[test]
fn criterion_07_participation_probe() {
    let est = estimate_pnr(20, 10, 1.0, 0.01, 1_000_000, SEED).unwrap();
    let dev = (est.estimate - est.theory).abs();
    let bound = (3.0 * est.standard_error).max(0.02 * est.theory);
    report(
        7,
        dev <= bound,
        &format!(
            "participation: estimate {:.6} vs {:.6}, |dev| {dev:.6} <= {bound:.6}",
            est.estimate, est.theory
        ),
    );
}

/// The matched right set of the optimal r-matching is a uniform random
/// r-subset: chi-square vertex-frequency test at significance 0.001.
#[test]
fn criterion_08_membership_uniformity() {
    let rep = membership_frequency(6, 3, 1.0, 10_000, SEED).unwrap();
    report(
        8,
        rep.passes,
        &format!(
            "membership: chi_square {:.3} <= critical {:.3} (dof {})",
            rep.chi_square, rep.critical_value, rep.degrees_of_freedom
        ),
    );
}

/// Deterministic numeric limits: truncated double sum near zeta(2), the
/// cost-limit integral at zeta(2)/2, and the harmonic expansion bound.
#[test]
fn criterion_09_numeric_limits() {
    let n = 1_000_000usize;
    let ds = theory::double_sum(n, theory::default_cutoff(n));
    let ds_dev = (ds - theory::ZETA2).abs() / theory::ZETA2;
    let mlim = theory::mlim_integral(1e-8).unwrap();
    let mlim_dev = (mlim - theory::HALF_ZETA2).abs();
    let mut harmonic_ok = true;
    for n in 10..=10_000usize {
        let gap = (theory::harmonic(n) - theory::harmonic_asymptotic(n)).abs();
        if gap > 1.0 / (n as f64 * n as f64) {
            harmonic_ok = false;
            break;
        }
    }
    report(
        9,
        ds_dev <= 0.03 && mlim_dev <= 1e-8 && harmonic_ok,
        &format!(
            "numeric limits: double_sum dev {ds_dev:.4} <= 0.03, \
             integral dev {mlim_dev:.2e} <= 1e-8, harmonic bound {harmonic_ok}"
        ),
    );
}

/// Hop diameter of the alternating digraph at the truncation cutoff stays
/// within ceil(3 log_4 n) hops for nearly all seeds.
#[test]
fn criterion_10_alternating_diameter() {
    let n = 300usize;
    let p = 3.0 * (n as f64).ln().powi(2) / n as f64;
    let model = ModelSpec { model: Model::Gnnp, n, p, rate: 1.0 }.validated().unwrap();
    let mut spec = experiment("diameter", model, 20, Quantity::Diameter);
    spec.params.pair_samples = Some(50);
    let (records, _) = run_experiment(&spec).unwrap();
    let ok = records.iter().filter(|r| r.outcome == Outcome::Ok).count();
    let within = records
        .iter()
        .filter(|r| r.scalars.get("within_bound") == Some(&1.0))
        .count();
    report(
        10,
        ok == 20 && within * 100 >= 95 * 20,
        &format!("diameter: {within}/20 seeds within 13 hops ({ok} feasible)"),
    );
}

/// No matching edge is expensive: max edge cost stays below
/// 20 log n / (np) in at least 99 of 100 seeds.
#[test]
fn criterion_11_max_edge_bound() {
    let n = 400usize;
    let p = 0.25;
    let model = ModelSpec { model: Model::Gnnp, n, p, rate: 1.0 }.validated().unwrap();
    let (records, _) = run_experiment(&experiment("maxedge", model, 100, Quantity::MaxEdge))
        .unwrap();
    let bound = 20.0 * (n as f64).ln() / (n as f64 * p);
    let under = records
        .iter()
        .filter(|r| r.outcome == Outcome::Ok && r.scalars["max_edge"] <= bound)
        .count();
    report(
        11,
        under >= 99,
        &format!("max edge: {under}/100 seeds below {bound:.4}"),
    );
}

/// Concentration trend: the frequency of |p*cost - zeta(2)| >= 0.3 does
/// not increase with n, and truncating weights at mu = 20 log n / (np)
/// almost never changes the optimum.
#[test]
fn criterion_12_concentration_trend() {
    let p = 0.25;
    let mut rows = vec![];
    for n in [100usize, 200, 400] {
        let model = ModelSpec { model: Model::Gnnp, n, p, rate: 1.0 }.validated().unwrap();
        let spec = experiment("concentration", model, 300, Quantity::Concentration);
        let (_, rep) = concentration_tail(&spec, &[0.3]).unwrap();
        rows.push((n, rep.exceedance[0].1, rep.truncation_mismatch));
    }
    let monotone = rows[0].1 >= rows[1].1 && rows[1].1 >= rows[2].1;
    let mismatch_ok = rows.iter().all(|&(_, _, m)| m <= 0.01);
    report(
        12,
        monotone && mismatch_ok,
        &format!(
            "concentration: exceedance {:?}, truncation mismatch {:?}",
            rows.iter().map(|r| r.1).collect::<Vec<_>>(),
            rows.iter().map(|r| r.2).collect::<Vec<_>>()
        ),
    );
}
