//! τ(s, γ) as a Nyström-discretized Fredholm determinant.
//!
//! With a Gauss–Hermite rule of order 2n (weight `e^{-x²/2}`), the n negative nodes carry the
//! outer variable and all 2n nodes the inner one. The kernel matrix is
//! `c · 𝔸𝔸ᵀ` (plain transpose), `c = e^{ε²/2+sε} sin(πγ) / (2π²)`, and
//! `τ = det(I − c 𝔸𝔸ᵀ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_hermite, QuadratureRule};

/// Tolerance on `|Im (𝔸𝔸ᵀ)_{ij}| / (|𝔸||𝔸|ᵀ)_{ij}`: imaginary residue relative to the rounding
/// scale of each entry. A branch or contour mistake produces O(1) values here.
pub const REALNESS_TOL: f64 = 1e-10;

/// Contour shift of Γ∞ as a function of s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonPolicy {
    /// ε = max(0, −s).
    Unfloored,
    /// ε = max(floor, −s). With ε = 0 the inner contour runs through the branch point at the
    /// origin and the Gauss–Hermite sum converges only algebraically; a positive floor
    /// restores spectral convergence (the exact determinant does not depend on ε).
    Floored(f64),
}

impl Default for EpsilonPolicy {
    fn default() -> Self {
        EpsilonPolicy::Floored(0.5)
    }
}

impl EpsilonPolicy {
    pub fn epsilon(&self, s: f64) -> f64 {
        match *self {
            EpsilonPolicy::Unfloored => (-s).max(0.0),
            EpsilonPolicy::Floored(f) => (-s).max(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauParams {
    pub s: f64,
    pub gamma: f64,
    pub n: usize,
    pub epsilon: f64,
}

impl TauParams {
    /// Parameters with the default ε policy.
    pub fn new(s: f64, gamma: f64, n: usize) -> Result<Self> {
        Self::with_policy(s, gamma, n, EpsilonPolicy::default())
    }

    pub fn with_policy(s: f64, gamma: f64, n: usize, policy: EpsilonPolicy) -> Result<Self> {
        Self::with_epsilon(s, gamma, n, policy.epsilon(s))
    }

    pub fn with_epsilon(s: f64, gamma: f64, n: usize, epsilon: f64) -> Result<Self> {
        let p = TauParams { s, gamma, n, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return invalid(format!("s = {} is not finite", self.s));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return invalid(format!("γ = {} outside [0, 1)", self.gamma));
        }
        if self.n == 0 || 2 * self.n > crate::quadrature::MAX_ORDER {
            return invalid(format!("n = {} outside 1..=1000", self.n));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return invalid(format!("ε = {} must be nonnegative", self.epsilon));
        }
        Ok(())
    }

    /// Prefactor `e^{ε²/2+sε} sin(πγ) / (2π²)`.
    pub fn kernel_prefactor(&self) -> f64 {
        let e = self.epsilon;
        (0.5 * e * e + self.s * e).exp() * (PI * self.gamma).sin() / (2.0 * PI * PI)
    }
}

/// The rule every τ evaluation at resolution n uses: order 2n, Λ = 1/2.
pub fn tau_rule(n: usize) -> Result<QuadratureRule> {
    gauss_hermite(2 * n, 0.5)
}

/// The n × 2n Nyström matrix 𝔸.
pub fn assemble_a_matrix(p: &TauParams, rule: &QuadratureRule) -> Result<DMatrix<Complex64>> {
    p.validate()?;
    if rule.order != 2 * p.n || (rule.scale - 0.5).abs() > 0.0 {
        return invalid(format!(
            "rule must have order 2n = {} and Λ = 1/2 (got order {}, Λ = {})",
            2 * p.n,
            rule.order,
            rule.scale
        ));
    }
    let negative: Vec<usize> = (0..rule.order).filter(|&i| rule.nodes[i] < 0.0).collect();
    if negative.len() != p.n {
        return invalid(format!("rule has {} negative nodes, need {}", negative.len(), p.n));
    }
    let (s, g, e) = (p.s, p.gamma, p.epsilon);
    if e == 0.0 && rule.nodes.iter().any(|&x| x == 0.0) {
        return invalid("ε = 0 with a node at the origin puts (ix + ε)^{-γ/2} on its branch cut");
    }

    // column factors (ix_ℓ + ε)^{-γ/2} e^{i x_ℓ (s+ε)/2} √w_ℓ
    let cols: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(&rule.log_weights)
        .map(|(&x, &lw)| {
            let base = Complex64::new(e, x);
            let pow = if g == 0.0 { Complex64::new(1.0, 0.0) } else { (-0.5 * g * base.ln()).exp() };
            pow * Complex64::from_polar((0.5 * lw).exp(), 0.5 * x * (s + e))
        })
        .collect();

    let mut a = DMatrix::<Complex64>::zeros(p.n, rule.order);
    for (r, &j) in negative.iter().enumerate() {
        let xj = rule.nodes[j];
        // |x_j|^{γ/2} √w_j e^{-(s/2) x_j}, combined in log space
        let row = (0.5 * g * xj.abs().ln() + 0.5 * rule.log_weights[j] - 0.5 * s * xj).exp();
        for (l, &xl) in rule.nodes.iter().enumerate() {
            let den = Complex64::new(xj - e, -xl);
            if den.norm() < 1e-14 {
                return Err(Error::ContourIntersection(den.norm()));
            }
            a[(r, l)] = cols[l] * row / den;
        }
    }
    Ok(a)
}

/// Real and imaginary parts of 𝔸𝔸ᵀ, computed with real matrix products, plus |𝔸||𝔸|ᵀ.
fn aat_parts(a: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let p = a.map(|z| z.re);
    let q = a.map(|z| z.im);
    let pt = p.transpose();
    let qt = q.transpose();
    let re = &p * &pt - &q * &qt;
    let im = &p * &qt + &q * &pt;
    let m = a.map(|z| z.norm());
    let abs = &m * m.transpose();
    (re, im, abs)
}

/// Realness diagnostics for 𝔸𝔸ᵀ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Realness {
    /// max_ij |Im| / max_ij |entry|.
    pub normalized: f64,
    /// max_ij |Im_ij| / |Re_ij| over entries with nonzero real part.
    pub entrywise: f64,
    /// max_ij |Im_ij| / (|𝔸||𝔸|ᵀ)_ij — the quantity τ asserts on.
    pub rounding: f64,
    /// max_ij (|𝔸||𝔸|ᵀ)_ij / |Re_ij|: cancellation in the real part (digits lost ≈ log10).
    pub cancellation: f64,
}

fn realness_of(re: &DMatrix<f64>, im: &DMatrix<f64>, abs: &DMatrix<f64>) -> (Realness, (usize, usize)) {
    let scale = re.iter().zip(im.iter()).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
    let mut worst = (0, 0);
    let mut max_im = 0.0;
    let mut entrywise: f64 = 0.0;
    let mut rounding: f64 = 0.0;
    let mut cancellation: f64 = 0.0;
    for i in 0..re.nrows() {
        for j in 0..re.ncols() {
            let v = im[(i, j)].abs();
            max_im = f64::max(max_im, v);
            if re[(i, j)] != 0.0 {
                entrywise = entrywise.max(v / re[(i, j)].abs());
                cancellation = cancellation.max(abs[(i, j)] / re[(i, j)].abs());
            }
            if abs[(i, j)] > 0.0 && v / abs[(i, j)] > rounding {
                rounding = v / abs[(i, j)];
                worst = (i, j);
            }
        }
    }
    let normalized = if scale > 0.0 { max_im / scale } else { 0.0 };
    (Realness { normalized, entrywise, rounding, cancellation }, worst)
}

pub fn aat_realness(p: &TauParams) -> Result<Realness> {
    let rule = tau_rule(p.n)?;
    let a = assemble_a_matrix(p, &rule)?;
    let (re, im, abs) = aat_parts(&a);
    Ok(realness_of(&re, &im, &abs).0)
}

/// Discretized kernel matrix `c · Re(𝔸𝔸ᵀ)` after the realness check.
pub fn kernel_matrix(p: &TauParams, rule: &QuadratureRule) -> Result<DMatrix<f64>> {
    let a = assemble_a_matrix(p, rule)?;
    let (re, im, abs) = aat_parts(&a);
    let (r, (i, j)) = realness_of(&re, &im, &abs);
    if r.rounding > REALNESS_TOL {
        return Err(Error::NotReal { row: i, col: j, imag: r.rounding, tol: REALNESS_TOL });
    }
    Ok(re * p.kernel_prefactor())
}

/// `(sign, ln|τ|)`.
pub fn tau_log(p: &TauParams, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let k = kernel_matrix(p, rule)?;
    let n = k.nrows();
    let m = DMatrix::<f64>::identity(n, n) - k;
    let lu = m.lu();
    let mut sign: f64 = lu.p().determinant();
    let mut log = 0.0;
    let u = lu.u();
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        sign *= d.signum();
        log += d.abs().ln();
    }
    Ok((sign, log))
}

pub fn tau_with_rule(p: &TauParams, rule: &QuadratureRule) -> Result<f64> {
    let (sign, log) = tau_log(p, rule)?;
    Ok(sign * log.exp())
}

/// τ(s, γ, n) with the given ε.
pub fn tau(p: &TauParams) -> Result<f64> {
    tau_with_rule(p, &tau_rule(p.n)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauSeries {
    pub gamma: f64,
    pub n: usize,
    pub policy: EpsilonPolicy,
    pub s: Vec<f64>,
    pub tau: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
}

impl TauSeries {
    pub fn first_bracket_above(&self, s_min: f64) -> Option<(f64, f64)> {
        self.brackets.iter().copied().find(|b| b.0 > s_min)
    }
}

/// Uniform grid `s_min, s_min + step, …` not exceeding `s_max` (up to rounding).
pub fn s_grid(s_min: f64, s_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(s_min < s_max) || !(step > 0.0) || !s_min.is_finite() || !s_max.is_finite() {
        return invalid(format!("bad grid [{s_min}, {s_max}] step {step}"));
    }
    let count = ((s_max - s_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| s_min + i as f64 * step).collect())
}

pub fn tau_scan(
    gamma: f64,
    n: usize,
    s_min: f64,
    s_max: f64,
    step: f64,
    policy: EpsilonPolicy,
) -> Result<TauSeries> {
    let grid = s_grid(s_min, s_max, step)?;
    TauParams::with_policy(s_min, gamma, n, policy)?;
    let rule = tau_rule(n)?;
    let tau: Vec<f64> = grid
        .par_iter()
        .map(|&s| tau_with_rule(&TauParams::with_policy(s, gamma, n, policy)?, &rule))
        .collect::<Result<_>>()?;
    let brackets = tau
        .windows(2)
        .zip(grid.windows(2))
        .filter(|(t, _)| t[0] * t[1] < 0.0)
        .map(|(_, s)| (s[0], s[1]))
        .collect();
    Ok(TauSeries { gamma, n, policy, s: grid, tau, brackets })
}

/// Bisection for a sign change of `f` on `[lo, hi]`, to bracket width `tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !(lo < hi) {
        return invalid(format!("[{lo}, {hi}] does not bracket a sign change"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn refine_tau_zero(gamma: f64, n: usize, bracket: (f64, f64), policy: EpsilonPolicy) -> Result<f64> {
    let rule = tau_rule(n)?;
    bisect(
        |s| tau_with_rule(&TauParams::with_policy(s, gamma, n, policy)?, &rule),
        bracket.0,
        bracket.1,
        1e-9,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBound {
    /// (sin πγ/π) √(2π) e^{-s²/2} / |s|^{1+γ}
    pub exact: f64,
    /// γ-free relaxation used for the pole-free threshold.
    pub relaxed: f64,
}

pub fn norm_bound(s: f64, gamma: f64) -> Result<NormBound> {
    if !(s < 0.0) {
        return invalid(format!("norm bound needs s < 0 (got {s})"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("γ = {gamma} outside (0, 1)"));
    }
    let g = (-0.5 * s * s).exp();
    let exact = (PI * gamma).sin() / PI * (2.0 * PI).sqrt() * g / s.abs().powf(1.0 + gamma);
    Ok(NormBound { exact, relaxed: relaxed_bound(s) })
}

fn relaxed_bound(s: f64) -> f64 {
    let c = (2.0 / PI).sqrt() * (-0.5 * s * s).exp();
    if s >= -1.0 {
        c / (s * s)
    } else {
        c / s.abs()
    }
}

/// s₀: the root of the relaxed bound = 1 on (−1, 0).
pub fn pole_free_threshold() -> f64 {
    let (mut lo, mut hi) = (-1.0f64, -1e-3f64);
    // relaxed − 1 is negative at −1 and positive near 0
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if relaxed_bound(mid) > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest singular value of the discretized kernel matrix `c 𝔸𝔸ᵀ`.
pub fn operator_norm_estimate(p: &TauParams) -> Result<f64> {
    if !(p.s < 0.0) {
        return invalid("operator norm estimate is defined for s < 0");
    }
    let rule = tau_rule(p.n)?;
    let a = assemble_a_matrix(p, &rule)?;
    let c = p.kernel_prefactor();
    if c == 0.0 {
        return Ok(0.0);
    }
    let k = (&a * a.transpose()).map(|z| z * c);
    let sv = k.singular_values();
    Ok(sv.iter().cloned().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_zero_is_identity() {
        for &s in &[-3.0, 0.0, 2.5] {
            let p = TauParams::new(s, 0.0, 7).unwrap();
            assert_eq!(tau(&p).unwrap(), 1.0);
        }
    }

    #[test]
    fn gamma_zero_matrix_is_cauchy_gaussian() {
        let p = TauParams::new(-1.0, 0.0, 3).unwrap();
        let r = tau_rule(3).unwrap();
        let a = assemble_a_matrix(&p, &r).unwrap();
        let (s, e) = (p.s, p.epsilon);
        for (row, j) in (0..6).filter(|&i| r.nodes[i] < 0.0).enumerate() {
            for l in 0..6 {
                let (xj, xl) = (r.nodes[j], r.nodes[l]);
                let expect = (r.weights[j] * r.weights[l]).sqrt() * (-0.5 * s * xj).exp()
                    * Complex64::from_polar(1.0, 0.5 * xl * (s + e))
                    / Complex64::new(xj - e, -xl);
                assert!((a[(row, l)] - expect).norm() < 1e-14 * expect.norm());
            }
        }
    }

    #[test]
    fn single_node_pair_by_hand() {
        let p = TauParams::with_epsilon(-2.0, 0.5, 1, 2.0).unwrap();
        let r = tau_rule(1).unwrap();
        let a = assemble_a_matrix(&p, &r).unwrap();
        let w = (std::f64::consts::PI / 2.0).sqrt(); // m=2, Λ=1/2: nodes ±1, weights √(π/2)
        let xj = -1.0f64;
        for (l, &xl) in [-1.0f64, 1.0].iter().enumerate() {
            let base = Complex64::new(2.0, xl);
            let expect = xj.abs().powf(0.25) * w.sqrt() * (-0.5 * -2.0 * xj).exp() * base.powf(-0.25)
                * Complex64::from_polar(1.0, 0.5 * xl * 0.0)
                * w.sqrt()
                / Complex64::new(xj - 2.0, -xl);
            assert!((a[(0, l)] - expect).norm() < 1e-13, "{l}: {} vs {}", a[(0, l)], expect);
        }
    }

    #[test]
    fn aat_is_real() {
        let p = TauParams::new(-2.0, 0.5, 4).unwrap();
        assert!(aat_realness(&p).unwrap().normalized < 1e-12);
    }

    #[test]
    fn unfloored_policy_zero_epsilon_for_positive_s() {
        assert_eq!(EpsilonPolicy::Unfloored.epsilon(1.0), 0.0);
        assert_eq!(EpsilonPolicy::Unfloored.epsilon(-3.0), 3.0);
        assert_eq!(EpsilonPolicy::default().epsilon(1.0), 0.5);
        let p = TauParams::with_policy(1.0, 0.3, 5, EpsilonPolicy::Unfloored).unwrap();
        assert!(tau(&p).unwrap().is_finite());
    }

    #[test]
    fn bisect_identity() {
        let z = bisect(|s| Ok(s), -1.0, 0.7, 1e-12).unwrap();
        assert!(z.abs() < 1e-12);
        assert!(bisect(|s| Ok(s * s + 1.0), -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn norm_bound_values() {
        let b = norm_bound(-2.0, 0.5).unwrap();
        let expect = 1.0 / PI * (2.0 * PI).sqrt() * (-2.0f64).exp() / 2f64.powf(1.5);
        assert!((b.exact - expect).abs() < 1e-15);
        assert!((b.exact - 0.03817).abs() < 1e-5);
        assert!(norm_bound(-2.0, 1e-9).unwrap().exact < 1e-8);
        assert!(norm_bound(0.0, 0.5).unwrap_err().is_input());
    }

    #[test]
    fn threshold() {
        let s0 = pole_free_threshold();
        assert!((s0 + 0.7701449782).abs() < 1e-9, "{s0}");
        assert!((norm_bound(-0.7701449782, 0.3).unwrap().relaxed - 1.0).abs() < 1e-8);
        assert!(norm_bound(s0 - 0.1, 0.3).unwrap().relaxed < 1.0);
        assert!(norm_bound(s0 + 0.1, 0.3).unwrap().relaxed > 1.0);
    }

    #[test]
    fn grid_endpoints() {
        let g = s_grid(-5.0, 5.0, 0.5).unwrap();
        assert_eq!(g.len(), 21);
        assert!((g[20] - 5.0).abs() < 1e-12);
        assert!(s_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn flat_scan_at_gamma_zero() {
        let sr = tau_scan(0.0, 10, -5.0, 5.0, 0.5, EpsilonPolicy::default()).unwrap();
        assert!(sr.tau.iter().all(|&t| t == 1.0));
        assert!(sr.brackets.is_empty());
    }

    #[test]
    fn operator_norm_trivial() {
        let p = TauParams::new(-2.0, 0.0, 10).unwrap();
        assert_eq!(operator_norm_estimate(&p).unwrap(), 0.0);
    }
}
