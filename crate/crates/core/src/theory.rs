//! Closed-form and numeric reference values for the limit laws.
//!
//! Everything here is a pure function over counts and probabilities:
//! harmonic numbers and their asymptotics, the partial zeta(2) sums, the
//! expected matching-cost increments, the double sum converging to pi^2/6,
//! the lower/upper participation bounds, and the pi^2/12 integral.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// zeta(2) = pi^2 / 6.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;
/// pi^2 / 12, the general-graph analogue of zeta(2).
pub const HALF_ZETA2: f64 = 0.822_467_033_424_113_2;

/// H_n, by direct ascending summation. `harmonic(0) == 0`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// `log n + gamma + 1/(2n)`; differs from `harmonic(n)` by O(n^-2).
pub fn harmonic_asymptotic(n: usize) -> f64 {
    let n = n as f64;
    n.ln() + EULER_GAMMA + 1.0 / (2.0 * n)
}

/// Partial sum of zeta(2): sum of 1/k^2 for k = 1..n.
pub fn parisi_sum(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / (k as f64 * k as f64)).sum()
}

/// Expected increment of the minimum matching cost,
/// `(1/(r p)) * (H_n - H_{n-r})`.
pub fn expected_increment(n: usize, r: usize, p: f64) -> f64 {
    assert!(r >= 1 && r <= n, "require 1 <= r <= n");
    (harmonic(n) - harmonic(n - r)) / (r as f64 * p)
}

/// The truncated double sum
/// `sum_{r=1}^{n-m} sum_{i=0}^{r-1} 1/(r (n-i))`,
/// evaluated in O(n) through prefix harmonic differences.
pub fn double_sum(n: usize, m: usize) -> f64 {
    assert!(m < n, "require 0 <= m < n");
    // Prefix harmonic values H_0..H_n, built once.
    let mut h = vec![0.0f64; n + 1];
    for i in 1..=n {
        h[i] = h[i - 1] + 1.0 / i as f64;
    }
    (1..=(n - m)).map(|r| (h[n] - h[n - r]) / r as f64).sum()
}

/// Default truncation cutoff `floor(n / (log n)^2)`.
pub fn default_cutoff(n: usize) -> usize {
    let ln = (n as f64).ln();
    (n as f64 / (ln * ln)).floor() as usize
}

/// Lower participation bound `L(n, r) = sum_{s=1}^{2r} 1/(n-s+1)`.
pub fn lower_l(n: usize, r: usize) -> f64 {
    assert!(2 * r <= n, "require 2r <= n");
    (1..=2 * r).map(|s| 1.0 / (n - s + 1) as f64).sum()
}

/// Upper participation bound `U(n, r) = sum_{s=1}^{r} 2/(n-2s+1)`.
pub fn upper_u(n: usize, r: usize) -> f64 {
    assert!(2 * r <= n, "require 2r <= n");
    (1..=r).map(|s| 2.0 / (n - 2 * s + 1) as f64).sum()
}

/// The integral `int_0^{1/2} 1/(1-a) * log((1-a)/a) da = pi^2/12`,
/// by adaptive Simpson quadrature. The integrable log singularity at 0 is
/// handled by an analytic stub on [0, eps].
pub fn mlim_integral(tolerance: f64) -> Result<f64> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let f = |a: f64| (1.0 / (1.0 - a)) * ((1.0 - a) / a).ln();
    // int_0^eps log(1/a) da = eps (1 - log eps); remaining terms are O(eps).
    let eps = 1e-12_f64;
    let stub = eps * (1.0 - eps.ln());
    let body = adaptive_simpson(&f, eps, 0.5, tolerance * 0.5, 60)?;
    Ok(stub + body)
}

/// The substituted form `int_0^infty y/(e^y + 1) dy`, for cross-checking
/// [`mlim_integral`]. The tail beyond `y = 60` is below 1e-24.
pub fn mlim_integral_substituted(tolerance: f64) -> Result<f64> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let f = |y: f64| y / (y.exp() + 1.0);
    adaptive_simpson(&f, 0.0, 60.0, tolerance * 0.5, 60)
}

fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol {
            return Ok(left + right + err / 15.0);
        }
        if depth == 0 {
            return Err(Error::Numeric("adaptive quadrature failed to converge".into()));
        }
        Ok(recurse(f, a, fa, m, fm, lm, flm, left, tol * 0.5, depth - 1)?
            + recurse(f, m, fm, b, fb, rm, frm, right, tol * 0.5, depth - 1)?)
    }

    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, depth)
}
