//! Closed-form entropy of tilings on the self-dual line `v = √Q`, with
//! finite-size estimates from the strip transfer matrix.
//!
//! `log S` is given by an integral for `0 < Q < 4` (`q = e^{iμ}`), by a
//! series for `Q > 4` (`q = e^λ`), and by a Gamma-function ratio at `Q = 4`.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, composite_gauss_legendre, geometric_breaks};
use crate::scalar::{Complex64, Scalar};
use crate::tutte::{StripLayout, StripTransfer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `0 < Q < 4`, `Q = (2 cos μ)²`
    Subcritical,
    /// `Q > 4`, `Q = (2 cosh λ)²`
    Supercritical,
    /// `Q = 4`
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub regime: Regime,
    /// `μ` or `λ`; zero at the critical point.
    pub parameter: f64,
    pub potts_q: f64,
    pub log_s: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Absolute tolerance on `log S`.
    pub tolerance: f64,
    /// Truncation point; chosen from the tail bound when `None`.
    pub t_max: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { tolerance: 1e-12, t_max: None }
    }
}

/// Integrand `sinh((π−μ)t) tanh(μt) / (t sinh(πt))`, even in `t`.
pub fn integrand(mu: f64, t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return (PI - mu) * mu / PI;
    }
    let ratio = if t < 1.0 {
        ((PI - mu) * t).sinh() / (PI * t).sinh()
    } else {
        (-mu * t).exp() * (-(-2.0 * (PI - mu) * t).exp_m1()) / (-(-2.0 * PI * t).exp_m1())
    };
    let x = mu * t;
    let tanh_over_t = if x < 1e-8 { mu * (1.0 - x * x / 3.0) } else { x.tanh() / t };
    ratio * tanh_over_t
}

/// Bound on `2∫_T^∞` of the integrand, using `f(t) ≤ e^{−μt} / (t (1 − e^{−2πT}))`.
fn tail_bound(mu: f64, t: f64) -> f64 {
    2.0 * (-mu * t).exp() / (mu * t * (-(-2.0 * PI * t).exp_m1()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralReport {
    pub point: EntropyPoint,
    pub adaptive: f64,
    pub fixed_order: f64,
    pub t_max: f64,
    pub tail_bound: f64,
    pub evaluations: usize,
}

pub fn entropy_integral(mu: f64, cfg: &QuadratureConfig) -> Result<EntropyPoint> {
    entropy_integral_report(mu, cfg).map(|r| r.point)
}

/// Evaluates the `0 < Q < 4` integral twice: adaptive Simpson and composite
/// 20-point Gauss–Legendre on geometric panels.
pub fn entropy_integral_report(mu: f64, cfg: &QuadratureConfig) -> Result<IntegralReport> {
    if !(mu > 0.0 && mu < PI / 2.0) {
        return Err(Error::Domain(format!("μ = {mu} outside (0, π/2)")));
    }
    let tol = cfg.tolerance;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let t_max = match cfg.t_max {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Error::Domain(format!("T_max = {t} must be positive"))),
        None => {
            let mut t = 1.0 / mu;
            while tail_bound(mu, t) > tol / 10.0 {
                t *= 1.25;
            }
            t
        }
    };
    let tail = tail_bound(mu, t_max);
    let f = |t: f64| integrand(mu, t);

    let adaptive = adaptive_simpson(f, 0.0, t_max, tol / 4.0)?;
    let first = 0.125 * (1.0f64).min(1.0 / mu);
    let fixed = composite_gauss_legendre(f, &geometric_breaks(first, t_max, 8), 20);

    let a = 2.0 * adaptive.value;
    let b = 2.0 * fixed.value;
    let disagreement = (a - b).abs();
    if disagreement > 10.0 * tol {
        return Err(Error::Accuracy(format!(
            "schemes disagree by {disagreement:e} at μ = {mu} (tolerance {tol:e})"
        )));
    }
    let cos = mu.cos();
    Ok(IntegralReport {
        point: EntropyPoint {
            regime: Regime::Subcritical,
            parameter: mu,
            potts_q: 4.0 * cos * cos,
            log_s: a,
            error_bound: tol + disagreement + tail,
        },
        adaptive: a,
        fixed_order: b,
        t_max,
        tail_bound: tail,
        evaluations: adaptive.evaluations + fixed.evaluations,
    })
}

/// `λ + 2 Σ_{n≥1} e^{−nλ} tanh(nλ) / n`, truncated once the geometric tail
/// bound drops below `tolerance`.
pub fn entropy_series(lambda: f64, tolerance: f64) -> Result<EntropyPoint> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("λ = {lambda} must be positive")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let ratio = -(-lambda).exp_m1();
    let mut sum = 0.0;
    let mut compensation = 0.0;
    let mut n = 1u64;
    let bound = loop {
        let nl = n as f64 * lambda;
        let term = (-nl).exp() * nl.tanh() / n as f64;
        // Neumann summation
        let t = sum + term;
        compensation += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        let next = (n + 1) as f64;
        let tail = 2.0 * (-next * lambda).exp() / (next * ratio);
        if tail < tolerance {
            break tail;
        }
        n += 1;
    };
    let half = 0.5 * (lambda.exp() + (-lambda).exp());
    Ok(EntropyPoint {
        regime: Regime::Supercritical,
        parameter: lambda,
        potts_q: 4.0 * half * half,
        log_s: lambda + 2.0 * (sum + compensation),
        error_bound: bound,
    })
}

/// The `Q = 4` value together with the alternative readings of the
/// Gamma-function ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalReport {
    pub point: EntropyPoint,
    /// `4 ln(Γ(5/4)/Γ(3/4))`, the ratio without the factor 2.
    pub bare_ratio_log_s: f64,
    /// `4 ln(Γ(3/4)/Γ(5/4))`, the reciprocal of the bare ratio.
    pub reciprocal_log_s: f64,
}

/// `log S = 4 ln(2 Γ(5/4) / Γ(3/4)) = ln(Γ(1/4)⁸ / (64 π⁴))`, the value both
/// regime formulas approach as `Q → 4`.
pub fn entropy_q4() -> EntropyPoint {
    entropy_q4_report().point
}

pub fn entropy_q4_report() -> CriticalReport {
    let bare = 4.0 * (ln_gamma(1.25) - ln_gamma(0.75));
    CriticalReport {
        point: EntropyPoint {
            regime: Regime::Critical,
            parameter: 0.0,
            potts_q: 4.0,
            log_s: bare + 4.0 * LN_2,
            error_bound: 1e-14,
        },
        bare_ratio_log_s: bare,
        reciprocal_log_s: -bare,
    }
}

/// Dispatches on `Q`: integral below 4, series above, closed form at 4.
pub fn entropy_at(potts_q: f64, cfg: &QuadratureConfig) -> Result<EntropyPoint> {
    if !(potts_q > 0.0) || !potts_q.is_finite() {
        return Err(Error::Domain(format!("Q = {potts_q} must be positive and finite")));
    }
    let half_root = potts_q.sqrt() / 2.0;
    if potts_q == 4.0 {
        Ok(entropy_q4())
    } else if potts_q < 4.0 {
        entropy_integral(half_root.acos(), cfg)
    } else {
        entropy_series(half_root.acosh(), cfg.tolerance)
    }
}

/// Polynomial extrapolation to `h = 0` (Neville) through `(h, value)` pairs.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    let h: Vec<f64> = points.iter().map(|&(h, _)| h).collect();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
        }
    }
    p[0]
}

/// `(Q^{−mn/2} Z_G(Q, v = √Q))^{1/(mn)}` on the `m × n` grid.
pub fn finite_size_entropy(m: usize, n: usize, potts_q: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Range("grid needs m, n >= 1".into()));
    }
    if !(potts_q > 0.0) || !potts_q.is_finite() {
        return Err(Error::Domain(format!("Q = {potts_q} must be positive and finite")));
    }
    let v = Complex64::new(potts_q.sqrt(), 0.0);
    let weights = vec![v; crate::cycles::GridGraph::new(m, n).edge_count()];
    let layout = StripLayout::new(m, n, &weights);
    let q = Complex64::new(potts_q, 0.0);
    let mut strip = StripTransfer::new(layout.width, q, |i| layout.horizontal(0, i))?;
    let mut log_scale = 0.0;
    for r in 1..layout.rows {
        strip.add_row(|i| layout.vertical(r - 1, i), |i| layout.horizontal(r, i));
        let largest = strip.states_mut().map(|w| w.norm()).fold(0.0, f64::max);
        if largest > 0.0 {
            log_scale += largest.ln();
            for w in strip.states_mut() {
                *w /= largest;
            }
        }
    }
    let z = strip.finish();
    let sites = (m * n) as f64;
    let log_f = log_scale + z.magnitude().ln() - 0.5 * sites * potts_q.ln();
    Ok((log_f / sites).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrand_limit_at_zero() {
        assert!((integrand(PI / 2.0 - 1e-15, 0.0) - PI / 4.0).abs() < 1e-12);
        let mu = 0.7;
        assert!((integrand(mu, 1e-7) - integrand(mu, 0.0)).abs() < 1e-10);
        // branch switch at t = 1 is continuous
        assert!((integrand(mu, 1.0 - 1e-12) - integrand(mu, 1.0)).abs() < 1e-10);
    }

    #[test]
    fn integral_dual_schemes() {
        let r = entropy_integral_report(PI / 4.0, &QuadratureConfig::default()).unwrap();
        assert!((r.adaptive - r.fixed_order).abs() < 1e-10);
        assert!((r.point.potts_q - 2.0).abs() < 1e-12);
        assert!(entropy_integral(0.0, &QuadratureConfig::default()).is_err());
        assert!(entropy_integral(PI / 2.0, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn series_asymptote() {
        let p = entropy_series(50.0, 1e-15).unwrap();
        assert!(p.log_s - 50.0 < 1e-12);
        assert!(entropy_series(0.0, 1e-12).is_err());
        assert!(entropy_series(-1.0, 1e-12).is_err());
    }

    #[test]
    fn critical_value() {
        let r = entropy_q4_report();
        assert!((r.point.log_s - 1.566_377_570_827_347).abs() < 1e-12);
        assert!((r.bare_ratio_log_s.exp() - 0.2993).abs() < 1e-4);
        assert!((r.reciprocal_log_s.exp() - 3.3408).abs() < 1e-4);
    }

    #[test]
    fn finite_size_small() {
        assert!((finite_size_entropy(1, 1, 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((finite_size_entropy(2, 2, 4.0).unwrap() - 84f64.powf(0.25)).abs() < 1e-12);
        assert!(finite_size_entropy(2, 2, -1.0).is_err());
    }

    #[test]
    fn neville_recovers_quadratic() {
        let f = |h: f64| 3.0 + 2.0 * h - h * h;
        let pts = [(0.1, f(0.1)), (0.05, f(0.05)), (0.025, f(0.025))];
        assert!((extrapolate_to_zero(&pts) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dispatch_by_q() {
        let cfg = QuadratureConfig::default();
        assert_eq!(entropy_at(4.0, &cfg).unwrap().regime, Regime::Critical);
        assert_eq!(entropy_at(2.0, &cfg).unwrap().regime, Regime::Subcritical);
        let sup = entropy_at(100.0 / 9.0, &cfg).unwrap();
        assert_eq!(sup.regime, Regime::Supercritical);
        assert!((sup.parameter - 3f64.ln()).abs() < 1e-12);
        assert!(entropy_at(0.0, &cfg).is_err());
    }
}
