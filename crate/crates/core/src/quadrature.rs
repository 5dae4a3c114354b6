//! Gauss rules from the Jacobi (recurrence-coefficient) matrix.
//!
//! Nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix, isolated by Sturm
//! bisection and polished by Newton on the characteristic recurrence. Weights come from
//! the Christoffel identity `w = μ₀ / Σ_j p̃_j(x)²` and are carried in log form so that
//! rules of order ~2000 (whose outer weights underflow) stay usable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};

pub const MAX_ORDER: usize = 2000;

/// Scaled Gauss–Hermite rule for the weight `exp(-Λ x²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub order: usize,
    pub scale: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Natural logs of the weights; finite even where `weights` underflow to 0.
    pub log_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Hermite rule of order `m` for `∫ f(x) e^{-Λx²} dx`.
pub fn gauss_hermite(m: usize, lambda: f64) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_ORDER {
        return invalid(format!("order m = {m} outside 1..={MAX_ORDER}"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return invalid(format!("scale Λ = {lambda} must be positive"));
    }
    let diag = vec![0.0; m];
    let off: Vec<f64> = (1..m).map(|j| (j as f64 / 2.0).sqrt()).collect();
    let (mut x, mut lw) = jacobi_rule(&diag, &off, 0.5 * std::f64::consts::PI.ln())?;

    // enforce exact mirror symmetry
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let xs = 0.5 * (x[j] - x[i]);
        x[i] = -xs;
        x[j] = xs;
        let ws = 0.5 * (lw[i] + lw[j]);
        lw[i] = ws;
        lw[j] = ws;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }

    if m <= 150 {
        for (i, (&xi, &lwi)) in x.iter().zip(&lw).enumerate() {
            let explicit = explicit_log_weight(m, 1.0, xi);
            let diff = (explicit - lwi).abs();
            if diff > 1e-9 {
                return Err(Error::Certificate {
                    what: format!("weight {i} disagrees with the explicit Hermite formula"),
                    measured: diff,
                    required: 1e-9,
                });
            }
        }
    }

    let s = lambda.sqrt();
    let nodes: Vec<f64> = x.iter().map(|v| v / s).collect();
    let log_weights: Vec<f64> = lw.iter().map(|v| v - s.ln()).collect();
    let weights = log_weights.iter().map(|v| v.exp()).collect();
    Ok(QuadratureRule { order: m, scale: lambda, nodes, weights, log_weights })
}

/// `ln w_i` from the closed form `2^{m-1} m! √π / (√Λ m² H_{m-1}(√Λ x)²)`, evaluated
/// in log space (the raw factorials overflow long before m = 2000).
pub fn explicit_log_weight(m: usize, lambda: f64, x: f64) -> f64 {
    let y = lambda.sqrt() * x;
    let (h, log_scale) = hermite_scaled(m - 1, y);
    let mf = m as f64;
    (mf - 1.0) * std::f64::consts::LN_2 + ln_gamma(mf + 1.0) + 0.5 * std::f64::consts::PI.ln()
        - 0.5 * lambda.ln()
        - 2.0 * mf.ln()
        - 2.0 * (h.abs().ln() + log_scale)
}

/// Physicists' Hermite `H_n(y)` as `value · e^{log_scale}`.
fn hermite_scaled(n: usize, y: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut log_scale = 0.0;
    for j in 0..n {
        let next = 2.0 * y * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (cur, log_scale)
}

/// Generalized Gauss–Laguerre rule for `∫_0^∞ f(x) x^α e^{-x} dx`, α > -1.
/// Returns nodes and (linear) weights.
pub fn gauss_laguerre(m: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 || m > MAX_ORDER {
        return invalid(format!("order m = {m} outside 1..={MAX_ORDER}"));
    }
    if !(alpha > -1.0) {
        return invalid(format!("α = {alpha} must exceed -1"));
    }
    let diag: Vec<f64> = (0..m).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..m).map(|j| (j as f64 * (j as f64 + alpha)).sqrt()).collect();
    let (x, lw) = jacobi_rule(&diag, &off, ln_gamma(alpha + 1.0))?;
    Ok((x, lw.into_iter().map(f64::exp).collect()))
}

/// Σ f(xᵢ) wᵢ.
pub fn integrate<F>(rule: &QuadratureRule, f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { index: i, x });
        }
        acc += v * w;
    }
    Ok(acc)
}

/// Number of eigenvalues of the Jacobi matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let dd = if d == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { d };
        d = diag[i] - x - off[i - 1] * off[i - 1] / dd;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Newton correction `P_m(x)/P_m'(x)` of the monic characteristic polynomial.
fn newton_correction(diag: &[f64], off: &[f64], x: f64) -> f64 {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for j in 0..diag.len() {
        let b2 = if j == 0 { 0.0 } else { off[j - 1] * off[j - 1] };
        let p2 = (x - diag[j]) * p1 - b2 * p0;
        let d2 = p1 + (x - diag[j]) * d1 - b2 * d0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        let m = p1.abs().max(d1.abs());
        if m > 1e100 {
            p0 *= 1e-100;
            p1 *= 1e-100;
            d0 *= 1e-100;
            d1 *= 1e-100;
        }
    }
    p1 / d1
}

/// `ln Σ_{j<m} p̃_j(x)²` for the orthonormal recurrence with `p̃_0 = 1`.
fn log_christoffel_sum(diag: &[f64], off: &[f64], x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    let mut log_scale = 0.0;
    for j in 0..diag.len() - 1 {
        let bj = if j == 0 { 0.0 } else { off[j - 1] };
        let next = ((x - diag[j]) * cur - bj * prev) / off[j];
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > 1e100 {
            cur *= 1e-100;
            prev *= 1e-100;
            sum *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    sum.ln() + log_scale
}

/// Nodes (ascending) and log-weights of the Gauss rule with Jacobi matrix
/// `tridiag(off, diag, off)` and total mass `e^{log_mu0}`.
fn jacobi_rule(diag: &[f64], off: &[f64], log_mu0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { off[i - 1] } else { 0.0 } + if i + 1 < m { off[i] } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = 1e-8 * (1.0 + lo.abs().max(hi.abs()));
    lo -= pad;
    hi += pad;

    let mut nodes = Vec::with_capacity(m);
    let mut log_weights = Vec::with_capacity(m);
    let mut floor = lo;
    for i in 0..m {
        // eigenvalue i: smallest x with count(x) > i
        let (mut a, mut b) = (floor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > i {
                b = mid;
            } else {
                a = mid;
            }
        }
        let mut x = 0.5 * (a + b);
        let width = (b - a).max(f64::EPSILON * x.abs());
        let mut corr = 0.0;
        for _ in 0..3 {
            corr = newton_correction(diag, off, x);
            let cand = x - corr;
            if !cand.is_finite() || (cand - x).abs() > 4.0 * width + 1e-12 * (1.0 + x.abs()) {
                break;
            }
            x = cand;
        }
        let resid = corr.abs() / (1.0 + x.abs());
        if !x.is_finite() || resid > 1e-8 {
            return Err(Error::NodeConvergence { index: i, residual: resid });
        }
        nodes.push(x);
        log_weights.push(log_mu0 - log_christoffel_sum(diag, off, x));
        floor = a;
    }
    Ok((nodes, log_weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn one_point_rule() {
        let r = gauss_hermite(1, 0.5).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - (2.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn two_point_rule_solves_moment_equations() {
        let r = gauss_hermite(2, 1.0).unwrap();
        let h = 0.5f64.sqrt();
        assert!((r.nodes[0] + h).abs() < 1e-15 && (r.nodes[1] - h).abs() < 1e-15);
        for w in &r.weights {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_38_moment_with_twenty_nodes() {
        let r = gauss_hermite(20, 0.5).unwrap();
        let got = integrate(&r, |x| Complex64::new(x.powi(38), 0.0)).unwrap().re;
        // 37!! √(2π)
        let dfact: f64 = (1..=37).step_by(2).map(|v| v as f64).product();
        let exact = dfact * (2.0 * PI).sqrt();
        assert!(((got - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn low_moments_m8() {
        let r = gauss_hermite(8, 1.0).unwrap();
        let one = integrate(&r, |_| Complex64::new(1.0, 0.0)).unwrap();
        let x1 = integrate(&r, |x| Complex64::new(x, 0.0)).unwrap();
        let x2 = integrate(&r, |x| Complex64::new(x * x, 0.0)).unwrap();
        assert!((one.re - PI.sqrt()).abs() < 1e-13);
        assert!(x1.norm() < 1e-14);
        assert!((x2.re - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_hermite(0, 1.0).unwrap_err().is_input());
        assert!(gauss_hermite(2001, 1.0).unwrap_err().is_input());
        assert!(gauss_hermite(4, -1.0).unwrap_err().is_input());
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = gauss_hermite(3, 1.0).unwrap();
        let e = integrate(&r, |x| Complex64::new(1.0 / x, 0.0)).unwrap_err();
        assert!(matches!(e, Error::NonFinite { index: 1, .. }));
    }

    #[test]
    fn large_order_symmetric_and_normalized() {
        let r = gauss_hermite(2000, 1.0).unwrap();
        for i in 0..1000 {
            assert_eq!(r.nodes[i], -r.nodes[1999 - i]);
            assert!(r.nodes[i] < r.nodes[i + 1]);
        }
        let total: f64 = r.weights.iter().sum();
        assert!((total - PI.sqrt()).abs() / PI.sqrt() < 1e-12);
        assert!(r.log_weights.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn laguerre_moments() {
        // ∫ x^p x^α e^{-x} dx = Γ(p+α+1)
        let alpha = -0.5;
        let (x, w) = gauss_laguerre(12, alpha).unwrap();
        for p in 0..24 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let exact = ln_gamma(p as f64 + alpha + 1.0).exp();
            assert!(((got - exact) / exact).abs() < 1e-11, "p={p}");
        }
    }
}
