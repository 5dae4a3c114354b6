//! Complex moments of the reduced weight, monic orthogonal polynomials from Hankel systems,
//! the planar-integral / contour-integral identity, and the unfolding πₖ → pₙ.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma as gamma_fn;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::mp::{horner, lu_solve, MpComplex, Precision, Scalar};
use crate::quadrature::gauss_laguerre;

/// Positively oriented circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Default for Circle {
    fn default() -> Self {
        Circle { center: Complex64::new(0.5, 0.0), radius: 2.5 }
    }
}

impl Circle {
    fn encloses(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && (0.0..=1.0).contains(&z.re)
}

/// `w_k(z) = z^{-k} e^{-kz/z₀} (z/(z−1))^γ` at any working precision.
pub fn weight_generic<T: Scalar>(z: &T, k: usize, z0: f64, gamma: f64) -> T {
    let lz = z.ln();
    let mut e = lz.scale(-(k as f64)).sub(&z.scale(k as f64 / z0));
    if gamma != 0.0 {
        let ratio = z.div(&z.sub(&z.one_like()));
        e = e.add(&ratio.ln().scale(gamma));
    }
    e.exp()
}

pub fn weight_w(z: Complex64, k: usize, z0: f64, gamma: f64) -> Result<Complex64> {
    if on_cut(z) {
        return invalid(format!("z = {z} lies on the cut [0, 1]"));
    }
    if !(z0 > 0.0) || !(0.0..1.0).contains(&gamma) {
        return invalid(format!("need z₀ > 0 and γ ∈ [0, 1) (got {z0}, {gamma})"));
    }
    Ok(weight_generic(&z, k, z0, gamma))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub gamma: f64,
    pub k: usize,
    pub z0: f64,
    pub contour: Circle,
    /// ν₀..ν_{j_max}.
    pub values: Vec<Complex64>,
    /// Same values at the working precision (absent in double precision).
    #[serde(skip)]
    pub exact: Option<Vec<MpComplex>>,
    pub precision: Precision,
    /// Trapezoid points of the accepted estimate.
    pub points: usize,
    /// max_j |ν_j(2M) − ν_j(M)| / max_j |ν_j|.
    pub certificate: f64,
}

impl MomentSequence {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Moment settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentOptions {
    pub contour: Circle,
    /// Initial number of trapezoid points (power of two).
    pub points: usize,
    pub max_points: usize,
    pub precision: Precision,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { contour: Circle::default(), points: 2048, max_points: 1 << 16, precision: Precision::Double }
    }
}

/// Relative certificate tolerance for moments computed at `precision`.
pub fn moment_tolerance(precision: Precision) -> f64 {
    match precision {
        Precision::Double => 1e-11,
        Precision::Digits(d) => 10f64.powf(-(d as f64) / 2.0).min(1e-11),
    }
}

const CHUNK: usize = 64;

#[allow(clippy::too_many_arguments)]
/// Σ over the points `offset, offset + stride, …` (of a level-`level` grid) of z^j w(z) dz/dθ.
fn trapezoid_sums<T: Scalar>(
    k: usize,
    z0: f64,
    gamma: f64,
    contour: Circle,
    level: usize,
    offset: usize,
    stride: usize,
    count: usize,
    jn: usize,
    bits: u32,
) -> Vec<T> {
    let idx: Vec<usize> = (0..count).map(|i| offset + i * stride).collect();
    let partials: Vec<Vec<T>> = idx
        .par_chunks(CHUNK)
        .map(|chunk| {
            let c = T::from_c64(contour.center, bits);
            let i_r = T::from_c64(Complex64::new(0.0, contour.radius), bits);
            let mut acc = vec![c.zero_like(); jn];
            for &m in chunk {
                let e = T::unit_root(m, level, bits);
                let z = c.add(&e.scale(contour.radius));
                let f = weight_generic(&z, k, z0, gamma).mul(&i_r.mul(&e));
                let mut pw = f;
                for a in acc.iter_mut() {
                    *a = a.add(&pw);
                    pw = pw.mul(&z);
                }
            }
            acc
        })
        .collect();
    // fixed-order reduction: deterministic for any thread count
    let mut total = vec![T::from_c64(Complex64::new(0.0, 0.0), bits); jn];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t = t.add(&v);
        }
    }
    total
}

fn moments_generic<T: Scalar>(
    k: usize,
    z0: f64,
    gamma: f64,
    j_max: usize,
    opts: &MomentOptions,
) -> Result<(Vec<T>, usize, f64)> {
    let bits = opts.precision.bits();
    let tol = moment_tolerance(opts.precision);
    let jn = j_max + 1;
    let two_pi = T::pi(bits).scale(2.0);
    let mut level = opts.points;
    let mut sum_all = trapezoid_sums::<T>(k, z0, gamma, opts.contour, level, 0, 1, level, jn, bits);
    loop {
        let odd = trapezoid_sums::<T>(k, z0, gamma, opts.contour, 2 * level, 1, 2, level, jn, bits);
        let coarse: Vec<T> = sum_all.iter().map(|s| s.mul(&two_pi).scale(1.0 / level as f64)).collect();
        let fine_sum: Vec<T> = sum_all.iter().zip(&odd).map(|(a, b)| a.add(b)).collect();
        let fine: Vec<T> = fine_sum.iter().map(|s| s.mul(&two_pi).scale(1.0 / (2 * level) as f64)).collect();
        let scale = fine.iter().map(|v| v.norm_f64()).fold(0.0, f64::max);
        let diff = fine.iter().zip(&coarse).map(|(a, b)| a.sub(b).norm_f64()).fold(0.0, f64::max);
        let cert = if scale > 0.0 { diff / scale } else { 0.0 };
        if !cert.is_finite() || fine.iter().any(|v| !v.is_finite()) {
            return Err(Error::Certificate { what: "non-finite moments".into(), measured: f64::NAN, required: tol });
        }
        if cert <= tol {
            return Ok((fine, 2 * level, cert));
        }
        level *= 2;
        if 2 * level > opts.max_points {
            return Err(Error::Certificate {
                what: format!("moment convergence at {} points", level),
                measured: cert,
                required: tol,
            });
        }
        sum_all = fine_sum;
    }
}

/// ν_j = ∮ z^j w_k(z) dz, j = 0..=j_max, by the trapezoidal rule on a circle.
pub fn complex_moments(k: usize, z0: f64, gamma: f64, j_max: usize, opts: &MomentOptions) -> Result<MomentSequence> {
    let c = opts.contour;
    if !(c.encloses(Complex64::new(0.0, 0.0)) && c.encloses(Complex64::new(1.0, 0.0))) {
        return invalid(format!("contour {c:?} must enclose 0 and 1 without meeting [0, 1]"));
    }
    if !opts.points.is_power_of_two() || opts.points < 8 {
        return invalid(format!("M = {} must be a power of two ≥ 8", opts.points));
    }
    if !(z0 > 0.0) || !(0.0..1.0).contains(&gamma) {
        return invalid(format!("need z₀ > 0 and γ ∈ [0, 1) (got {z0}, {gamma})"));
    }
    match opts.precision {
        Precision::Double => {
            let (v, points, certificate) = moments_generic::<Complex64>(k, z0, gamma, j_max, opts)?;
            Ok(MomentSequence {
                gamma,
                k,
                z0,
                contour: c,
                values: v,
                exact: None,
                precision: opts.precision,
                points,
                certificate,
            })
        }
        Precision::Digits(_) => {
            let (v, points, certificate) = moments_generic::<MpComplex>(k, z0, gamma, j_max, opts)?;
            Ok(MomentSequence {
                gamma,
                k,
                z0,
                contour: c,
                values: v.iter().map(|x| x.to_c64()).collect(),
                exact: Some(v),
                precision: opts.precision,
                points,
                certificate,
            })
        }
    }
}

/// Provenance of a computed polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub k: usize,
    pub z0: f64,
    pub gamma: f64,
    pub precision: Precision,
}

/// Monic polynomial `z^k + Σ_{i<k} c_i z^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    /// c₀..c_{k−1} (the leading 1 is implicit).
    pub coeffs: Vec<Complex64>,
    /// Working-precision coefficients, when available.
    pub exact: Option<Vec<MpComplex>>,
    pub provenance: Option<Provenance>,
}

/// JSON-friendly record of a polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub degree: usize,
    /// Ascending coefficients as [re, im] pairs, leading 1 included.
    pub coefficients: Vec<[f64; 2]>,
    pub provenance: Option<Provenance>,
}

impl MonicPolynomial {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        MonicPolynomial { coeffs, exact: None, provenance: None }
    }

    /// `∏ (z − r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &v) in c.iter().enumerate() {
                next[i + 1] += v;
                next[i] -= r * v;
            }
            c = next;
        }
        c.pop();
        Self::from_coeffs(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// All coefficients including the leading one.
    pub fn full_coeffs(&self) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        c.push(Complex64::new(1.0, 0.0));
        c
    }

    pub fn full_exact(&self) -> Option<Vec<MpComplex>> {
        self.exact.as_ref().map(|e| {
            let mut c = e.clone();
            let one = c.first().map(|v| v.one_like()).unwrap_or_else(|| MpComplex::from_c64(Complex64::new(1.0, 0.0), 64));
            c.push(one);
            c
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.full_coeffs(), &z)
    }

    /// Evaluation at the best available precision.
    pub fn eval_exact(&self, z: Complex64) -> MpComplex {
        match self.full_exact() {
            Some(c) => {
                let zz = MpComplex::from_c64(z, c[0].bits());
                horner(&c, &zz)
            }
            None => MpComplex::from_c64(self.eval(z), 53),
        }
    }

    /// πₖ(z)/z^k via Horner in 1/z (no overflow for |z| ≳ 1).
    pub fn eval_over_zk(&self, z: Complex64) -> Complex64 {
        match self.full_exact() {
            Some(c) => {
                let w = MpComplex::from_c64(z, c[0].bits());
                let inv = w.one_like().div(&w);
                let rev: Vec<MpComplex> = c.into_iter().rev().collect();
                horner(&rev, &inv).to_c64()
            }
            None => {
                let rev: Vec<Complex64> = self.full_coeffs().into_iter().rev().collect();
                horner(&rev, &(1.0 / z))
            }
        }
    }

    pub fn record(&self) -> PolynomialRecord {
        PolynomialRecord {
            degree: self.degree(),
            coefficients: self.full_coeffs().iter().map(|c| [c.re, c.im]).collect(),
            provenance: self.provenance,
        }
    }
}

/// Hankel settings for [`monic_orthogonal`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthoOptions {
    pub contour: Circle,
    pub points: usize,
    /// `None` picks the precision from k (see [`auto_precision`]).
    pub precision: Option<Precision>,
}

impl Default for OrthoOptions {
    fn default() -> Self {
        OrthoOptions { contour: Circle::default(), points: 2048, precision: None }
    }
}

/// Largest k handled in double precision by default.
pub const DOUBLE_MAX_K: usize = 3;

/// Double precision for small k, otherwise 40 + 3k decimal digits (Hankel conditioning grows
/// roughly like 10^{0.85k} and the contour sums lose ~k·log10(e²/2) digits to cancellation).
pub fn auto_precision(k: usize) -> Precision {
    if k <= DOUBLE_MAX_K {
        Precision::Double
    } else {
        Precision::Digits(40 + 3 * k as u32)
    }
}

/// Orthogonality tolerance relative to max |ν|.
pub const ORTHO_TOL: f64 = 1e-8;

fn hankel_solve<T: Scalar>(nu: &[T], k: usize) -> Result<(Vec<T>, f64)> {
    let scale = nu.iter().map(|v| v.norm_f64()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::Singular { step: 0, pivot: 0.0 });
    }
    let s = 1.0 / scale;
    let n: Vec<T> = nu.iter().map(|v| v.scale(s)).collect();
    let a: Vec<Vec<T>> = (0..k).map(|i| (0..k).map(|j| n[i + j].clone()).collect()).collect();
    let b: Vec<T> = (0..k).map(|i| n[i + k].neg()).collect();
    let (c, _, _) = lu_solve(a, b)?;
    // orthogonality residual Σ_i c_i ν_{i+j} + ν_{j+k}
    let mut resid: f64 = 0.0;
    for j in 0..k {
        let mut acc = n[j + k].clone();
        for (i, ci) in c.iter().enumerate() {
            acc = acc.add(&ci.mul(&n[i + j]));
        }
        resid = resid.max(acc.norm_f64());
    }
    Ok((c, resid))
}

/// Monic πₖ with ∮ πₖ z^j w_k dz = 0 for j < k.
pub fn monic_orthogonal(k: usize, z0: f64, gamma: f64, opts: &OrthoOptions) -> Result<MonicPolynomial> {
    let precision = opts.precision.unwrap_or_else(|| auto_precision(k));
    if k == 0 {
        return Ok(MonicPolynomial {
            coeffs: vec![],
            exact: None,
            provenance: Some(Provenance { k, z0, gamma, precision }),
        });
    }
    let mopts = MomentOptions { contour: opts.contour, points: opts.points, precision, ..Default::default() };
    let mom = complex_moments(k, z0, gamma, 2 * k - 1, &mopts)?;
    let prov = Some(Provenance { k, z0, gamma, precision });
    match &mom.exact {
        None => {
            let (c, resid) = hankel_solve(&mom.values, k)?;
            check_resid(resid)?;
            Ok(MonicPolynomial { coeffs: c, exact: None, provenance: prov })
        }
        Some(ex) => {
            let (c, resid) = hankel_solve(ex, k)?;
            check_resid(resid)?;
            Ok(MonicPolynomial { coeffs: c.iter().map(|v| v.to_c64()).collect(), exact: Some(c), provenance: prov })
        }
    }
}

fn check_resid(resid: f64) -> Result<()> {
    if !(resid < ORTHO_TOL) {
        return Err(Error::Certificate { what: "orthogonality residual".into(), measured: resid, required: ORTHO_TOL });
    }
    Ok(())
}

/// max_j |∮ πₖ z^j w dz| / max|ν| for j < k, evaluated with the supplied moments.
pub fn orthogonality_residual(p: &MonicPolynomial, mom: &MomentSequence) -> f64 {
    let k = p.degree();
    let scale = mom.max_abs();
    let full = p.full_coeffs();
    (0..k)
        .map(|j| (0..=k).map(|i| full[i] * mom.values[i + j]).sum::<Complex64>().norm() / scale)
        .fold(0.0, f64::max)
}

/// det[ν_{i+j}]_{i,j<k}.
pub fn hankel_det(mom: &MomentSequence, k: usize) -> Result<Complex64> {
    if mom.values.len() < 2 * k - 1 {
        return invalid(format!("need moments up to ν_{}", 2 * k - 2));
    }
    let det = match &mom.exact {
        Some(ex) => det_generic(ex, k)?.to_c64(),
        None => det_generic(&mom.values, k)?,
    };
    let scale = mom.max_abs().powi(k as i32);
    if !(det.norm() > 1e-10 * scale) {
        return Err(Error::Singular { step: k, pivot: det.norm() / scale });
    }
    Ok(det)
}

fn det_generic<T: Scalar>(nu: &[T], k: usize) -> Result<T> {
    let a: Vec<Vec<T>> = (0..k).map(|i| (0..k).map(|j| nu[i + j].clone()).collect()).collect();
    let b = vec![nu[0].zero_like(); k];
    let (_, piv, sign) = lu_solve(a, b)?;
    let mut d = piv[0].one_like().scale(sign);
    for p in &piv {
        d = d.mul(p);
    }
    Ok(d)
}

/// Resolution of the planar quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarOptions {
    pub radial: usize,
    pub angular: usize,
}

impl Default for PlanarOptions {
    fn default() -> Self {
        PlanarOptions { radial: 80, angular: 128 }
    }
}

/// (value, Σ|terms|): the second is the rounding scale used by the certificate.
fn planar_once(
    q: &[Complex64],
    j: usize,
    gamma: f64,
    big_n: f64,
    t: f64,
    o: PlanarOptions,
) -> Result<(Complex64, f64)> {
    let (xs, ws) = gauss_laguerre(o.radial, -gamma)?;
    let h = 2.0 * PI / o.angular as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let rho = (x / big_n).sqrt();
        for a in 0..o.angular {
            let th = h * a as f64;
            let u = Complex64::from_polar(rho, th);
            let v = horner(q, &u) * u.conj().powu(j as u32) * (2.0 * big_n * t * rho * th.cos()).exp();
            acc += v * h * w;
            mass += v.norm() * h * w;
        }
    }
    let f = big_n.powf(gamma) / (2.0 * big_n);
    Ok((acc * f, mass * f))
}

/// ∫_ℂ q(u) ū^j |u|^{−2γ} e^{−N(|u|² − tu − tū)} dA(u), with a doubled-resolution certificate
/// (relative to the value, or to the integrand's absolute mass when the value cancels to ~0).
pub fn planar_moment(q: &[Complex64], j: usize, gamma: f64, big_n: f64, t: f64, o: PlanarOptions) -> Result<Complex64> {
    if !(0.0..1.0).contains(&gamma) || !(big_n > 0.0) || q.is_empty() {
        return invalid("planar moment needs γ ∈ [0,1), N > 0 and a nonempty q");
    }
    let (a, _) = planar_once(q, j, gamma, big_n, t, o)?;
    let (b, mass) = planar_once(q, j, gamma, big_n, t, PlanarOptions { radial: 2 * o.radial, angular: 2 * o.angular })?;
    let scale = b.norm().max(1e-8 * mass).max(1e-300);
    let rel = (a - b).norm() / scale;
    if rel > 1e-7 {
        return Err(Error::Certificate { what: "planar moment resolution".into(), measured: rel, required: 1e-7 });
    }
    Ok(b)
}

/// πΓ(j−γ+1)/N^{j−γ+1} · (1/2πi) ∮ q(u) e^{Ntu} (u−t)^{−(j+1)} (1 − t/u)^γ du.
pub fn contour_rhs(q: &[Complex64], j: usize, gamma: f64, big_n: f64, t: f64, m: usize) -> Result<Complex64> {
    if !(0.0..1.0).contains(&gamma) || !(big_n > 0.0) || !(t >= 0.0) || q.is_empty() {
        return invalid("contour side needs γ ∈ [0,1), N > 0, t ≥ 0 and a nonempty q");
    }
    let c = Complex64::new(0.5 * t, 0.0);
    let r = 0.5 * t + 1.0;
    let once = |m: usize| {
        let h = 2.0 * PI / m as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for a in 0..m {
            let e = Complex64::from_polar(1.0, h * a as f64);
            let u = c + e * r;
            let du = Complex64::new(0.0, r) * e;
            let br = if gamma == 0.0 { Complex64::new(1.0, 0.0) } else { (1.0 - t / u).powf(gamma) };
            let v = horner(q, &u) * (big_n * t * u).exp() / (u - t).powu(j as u32 + 1) * br * du;
            acc += v;
            mass += v.norm();
        }
        (acc * h / Complex64::new(0.0, 2.0 * PI), mass * h / (2.0 * PI))
    };
    let (a, _) = once(m);
    let (b, mass) = once(2 * m);
    let scale = b.norm().max(1e-3 * mass).max(1e-300);
    if (a - b).norm() > 1e-12 * scale {
        return Err(Error::Certificate {
            what: "contour side resolution".into(),
            measured: (a - b).norm() / scale,
            required: 1e-12,
        });
    }
    let e = j as f64 - gamma + 1.0;
    Ok(b * PI * gamma_fn(e) / big_n.powf(e))
}

/// Coefficients of pₙ(λ) = λ^ℓ q_k(λ^d), q_k(u) = (−1)^k t^k πₖ(1 − u/t).
pub fn unfold_polynomial(p: &MonicPolynomial, t: f64, d: usize, ell: usize) -> Result<MonicPolynomial> {
    if d == 0 || !(t > 0.0) {
        return invalid("unfolding needs d ≥ 1 and t > 0");
    }
    let k = p.degree();
    let n = k * d + ell;
    match p.full_exact() {
        Some(c) => {
            let q = unfold_q(&c, t);
            let mut out = vec![q[0].zero_like(); n];
            for (m, v) in q.into_iter().enumerate().take(k) {
                out[m * d + ell] = v;
            }
            Ok(MonicPolynomial {
                coeffs: out.iter().map(|v| v.to_c64()).collect(),
                exact: Some(out),
                provenance: p.provenance,
            })
        }
        None => {
            let q = unfold_q(&p.full_coeffs(), t);
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (m, v) in q.into_iter().enumerate().take(k) {
                out[m * d + ell] = v;
            }
            Ok(MonicPolynomial { coeffs: out, exact: None, provenance: p.provenance })
        }
    }
}

/// Ascending coefficients of q_k (length k+1).
fn unfold_q<T: Scalar>(c: &[T], t: f64) -> Vec<T> {
    let k = c.len() - 1;
    // binomial rows built iteratively in T to keep full precision
    let mut out = Vec::with_capacity(k + 1);
    let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
    for m in 0..=k {
        // Σ_{i≥m} c_i C(i, m)
        let mut acc = c[0].zero_like();
        let mut binom = c[0].one_like(); // C(m, m)
        for i in m..=k {
            acc = acc.add(&c[i].mul(&binom));
            binom = binom.scale((i + 1) as f64 / (i + 1 - m) as f64);
        }
        // (−1)^k t^k (−1/t)^m
        let sgn = if m % 2 == 0 { sign_k } else { -sign_k };
        let f = sgn * t.powi(k as i32 - m as i32);
        out.push(acc.scale(f));
    }
    out
}
