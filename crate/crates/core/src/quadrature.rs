//! One-dimensional quadrature: adaptive Simpson and composite
//! Gauss–Legendre. The two share no nodes or error logic, so agreement
//! between them is a meaningful accuracy check.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson with the Lyness correction term, to absolute tolerance
/// `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut evaluations = 3;
    let mut error = 0.0;
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut evaluations, &mut error)?;
    Ok(Integral { value, error_estimate: error, evaluations })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evaluations: &mut usize,
    error: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evaluations += 2;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        *error += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || m <= a || m >= b {
        return Err(Error::Accuracy(format!("adaptive Simpson stalled on [{a}, {b}]")));
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evaluations, error)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evaluations, error)?;
    Ok(l + r)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre over the panels delimited by `breaks`.
pub fn composite_gauss_legendre(f: impl Fn(f64) -> f64, breaks: &[f64], order: usize) -> Integral {
    let rule = gauss_legendre(order);
    let mut value = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let panel: f64 = rule.iter().map(|&(x, wt)| wt * f(mid + half * x)).sum();
        value += half * panel;
        evaluations += rule.len();
    }
    Integral { value, error_estimate: f64::NAN, evaluations }
}

/// Breakpoints for `[0, end]`: a first panel of width `first`, then panels
/// doubling in width, each split into `split` equal pieces.
pub fn geometric_breaks(first: f64, end: f64, split: usize) -> Vec<f64> {
    let mut coarse = vec![0.0];
    let mut edge = first.min(end);
    while edge < end {
        coarse.push(edge);
        edge *= 2.0;
    }
    coarse.push(end);
    let mut breaks = vec![0.0];
    for w in coarse.windows(2) {
        for k in 1..=split {
            breaks.push(w[0] + (w[1] - w[0]) * k as f64 / split as f64);
        }
    }
    breaks
}
