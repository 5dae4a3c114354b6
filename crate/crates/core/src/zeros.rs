//! Roots of πₖ, their distance to Γ₁ and to the log k/k–corrected curve, and extraction of the
//! Painlevé IV quantities H and Z/U from finite-k evaluations.

use nalgebra::{linalg::Schur, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geometry::{gamma_r_radius, inside_gamma_r, CurveSample};
use crate::mp::{horner_with_derivative, MpComplex, Scalar};
use crate::orthopoly::MonicPolynomial;

/// Roots closer than this are reported as a cluster.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Required relative (backward) residual after polishing.
pub const ROOT_TOL: f64 = 1e-10;
/// Radius of the disk around z = 1 excluded from distance statistics.
pub const EXCLUSION_RADIUS: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub k: usize,
    pub z0: Option<f64>,
    pub gamma: Option<f64>,
    pub roots: Vec<Complex64>,
    /// |p(r)| / Σ|cᵢ||r|ⁱ per root.
    pub residuals: Vec<f64>,
    /// Index groups of roots within [`CLUSTER_TOL`] of each other.
    pub clusters: Vec<Vec<usize>>,
}

impl ZeroSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,residual\n");
        for (r, e) in self.roots.iter().zip(&self.residuals) {
            s.push_str(&format!("{},{},{}\n", crate::format::sci(r.re), crate::format::sci(r.im), crate::format::sci(*e)));
        }
        s
    }
}

/// Diagonal similarity scaling by powers of two (Parlett–Reinsch), in place.
fn balance(a: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Eigenvalues of the balanced companion matrix (double precision seeds).
pub fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = coeffs.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let mut a = DMatrix::<Complex64>::zeros(k, k);
    for i in 1..k {
        a[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..k {
        a[(i, k - 1)] = -coeffs[i];
    }
    balance(&mut a);
    let schur = Schur::try_new(a, 1e-15, 10_000 + 100 * k)
        .ok_or(Error::RootConvergence { iterations: 10_000 + 100 * k, correction: f64::NAN })?;
    let (_, t) = schur.unpack();
    Ok((0..k).map(|i| t[(i, i)]).collect())
}

fn backward_error<T: Scalar>(coeffs: &[T], z: &T) -> f64 {
    let (v, _) = horner_with_derivative(coeffs, z);
    let r = z.norm_f64();
    let scale: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm_f64());
    v.norm_f64() / scale.max(f64::MIN_POSITIVE)
}

/// Simultaneous Aberth–Ehrlich refinement followed by per-root Newton polishing.
fn refine<T: Scalar>(coeffs: &[T], seeds: &[Complex64], bits: u32, tol: f64) -> (Vec<T>, usize, f64) {
    let k = seeds.len();
    let mut z: Vec<T> = seeds.iter().map(|&s| T::from_c64(s, bits)).collect();
    let max_iter = 500;
    let mut last = f64::INFINITY;
    let mut it = 0;
    while it < max_iter {
        it += 1;
        let mut worst: f64 = 0.0;
        let mut all_small = true;
        for i in 0..k {
            let (v, dv) = horner_with_derivative(coeffs, &z[i]);
            if v.norm_f64() == 0.0 {
                continue;
            }
            if backward_error(coeffs, &z[i]) > tol {
                all_small = false;
            }
            let w = v.div(&dv);
            let mut s = z[i].zero_like();
            for j in 0..k {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if d.norm_f64() > 0.0 {
                        s = s.add(&d.one_like().div(&d));
                    }
                }
            }
            let den = z[i].one_like().sub(&w.mul(&s));
            let step = if den.norm_f64() > 0.0 && den.is_finite() { w.div(&den) } else { w };
            if !step.is_finite() {
                continue;
            }
            worst = worst.max(step.norm_f64() / z[i].norm_f64().max(1.0));
            z[i] = z[i].sub(&step);
        }
        last = worst;
        if all_small || worst < tol * 1e-3 {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..5 {
            let (v, dv) = horner_with_derivative(coeffs, zi);
            if v.norm_f64() == 0.0 || dv.norm_f64() == 0.0 {
                break;
            }
            let cand = zi.sub(&v.div(&dv));
            if !cand.is_finite() || backward_error(coeffs, &cand) >= backward_error(coeffs, zi) {
                break;
            }
            *zi = cand;
        }
    }
    (z, it, last)
}

fn clusters(roots: &[Complex64]) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut group = vec![i];
        seen[i] = true;
        let mut h = 0;
        while h < group.len() {
            let a = group[h];
            for j in 0..n {
                if !seen[j] && (roots[a] - roots[j]).norm() < CLUSTER_TOL {
                    seen[j] = true;
                    group.push(j);
                }
            }
            h += 1;
        }
        if group.len() > 1 {
            group.sort_unstable();
            out.push(group);
        }
    }
    out
}

/// All roots of a monic polynomial. Working-precision coefficients, when present, are used for the
/// refinement, so roots are accurate even when the double coefficients are not.
pub fn polynomial_roots(p: &MonicPolynomial) -> Result<ZeroSet> {
    let k = p.degree();
    if k == 0 {
        return invalid("polynomial degree must be at least 1");
    }
    let full = p.full_coeffs();
    if full.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return invalid("non-finite polynomial coefficients");
    }
    let seeds = companion_roots(&p.coeffs)?;
    let (roots, residuals, iterations) = match p.full_exact() {
        Some(c) => {
            let bits = c[0].bits();
            let tol = 10f64.powf(-(bits as f64) * 0.30103 * 0.6).max(1e-40);
            let (z, it, _) = refine::<MpComplex>(&c, &seeds, bits, tol);
            let res: Vec<f64> = z.iter().map(|r| backward_error(&c, r)).collect();
            (z.iter().map(|r| r.to_c64()).collect::<Vec<_>>(), res, it)
        }
        None => {
            let (z, it, _) = refine::<Complex64>(&full, &seeds, 53, 1e-15);
            let res: Vec<f64> = z.iter().map(|r| backward_error(&full, r)).collect();
            (z, res, it)
        }
    };
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if !(worst < ROOT_TOL) {
        return Err(Error::RootConvergence { iterations, correction: worst });
    }
    let prov = p.provenance;
    let mut order: Vec<usize> = (0..k).collect();
    // canonical ordering: by argument, then modulus
    order.sort_by(|&a, &b| {
        let (ra, rb) = (roots[a], roots[b]);
        ra.arg().partial_cmp(&rb.arg()).unwrap().then(ra.norm().partial_cmp(&rb.norm()).unwrap())
    });
    let roots: Vec<Complex64> = order.iter().map(|&i| roots[i]).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    Ok(ZeroSet {
        k,
        z0: prov.map(|p| p.z0),
        gamma: prov.map(|p| p.gamma),
        clusters: clusters(&roots),
        roots,
        residuals,
    })
}

/// λ-plane roots of pₙ(λ) = λ^ℓ q_k(λ^d): every d-th root of t(1 − z), plus ℓ roots at 0.
pub fn unfold_roots(zs: &ZeroSet, t: f64, d: usize, ell: usize) -> Result<Vec<Complex64>> {
    if d == 0 || !(t > 0.0) {
        return invalid("unfolding needs d ≥ 1 and t > 0");
    }
    let mut out = vec![Complex64::new(0.0, 0.0); ell];
    for &z in &zs.roots {
        let u = t * (1.0 - z);
        let base = if u.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { u.powf(1.0 / d as f64) };
        for m in 0..d {
            out.push(base * Complex64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64));
        }
    }
    Ok(out)
}

/// Re φ(z; r = 1) on the interior side: log|z| − (Re z − 1)/z₀.
pub fn re_phi_interior(z: Complex64, z0: f64) -> f64 {
    z.norm().ln() - (z.re - 1.0) / z0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    pub distances: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Whether each root lies outside the exclusion disk.
    pub kept: Vec<bool>,
    pub max: f64,
    pub mean: f64,
    pub max_residual: f64,
    pub count: usize,
}

/// Root-to-curve distance statistics, ignoring roots within [`EXCLUSION_RADIUS`] of z = 1.
pub fn zero_curve_distance(zs: &ZeroSet, curve: &CurveSample, z0: f64) -> Result<DistanceStats> {
    if curve.is_empty() {
        return invalid("empty curve sample");
    }
    let distances: Vec<f64> = zs.roots.iter().map(|&z| curve.distance_to(z)).collect();
    let residuals: Vec<f64> = zs.roots.iter().map(|&z| re_phi_interior(z, z0).abs()).collect();
    let kept: Vec<bool> = zs.roots.iter().map(|&z| (z - 1.0).norm() > EXCLUSION_RADIUS).collect();
    let sel: Vec<usize> = (0..kept.len()).filter(|&i| kept[i]).collect();
    let count = sel.len();
    let max = sel.iter().map(|&i| distances[i]).fold(0.0, f64::max);
    let mean = if count > 0 { sel.iter().map(|&i| distances[i]).sum::<f64>() / count as f64 } else { 0.0 };
    let max_residual = sel.iter().map(|&i| residuals[i]).fold(0.0, f64::max);
    Ok(DistanceStats { distances, residuals, kept, max, mean, max_residual, count })
}

/// Power of k multiplying log k / k in the corrected level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LevelExponent {
    /// (1+γ)/2.
    #[default]
    HalfOnePlusGamma,
    /// 1/2 + γ, the exponent of the interior expansion.
    HalfPlusGamma,
}

impl LevelExponent {
    pub fn value(self, gamma: f64) -> f64 {
        match self {
            LevelExponent::HalfOnePlusGamma => 0.5 * (1.0 + gamma),
            LevelExponent::HalfPlusGamma => 0.5 + gamma,
        }
    }
}

/// Left-hand side of the corrected level equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LevelForm {
    /// Re φ(z; 1) = log|z| − (Re z − 1)/z₀.
    #[default]
    RePhi,
    /// log|z| − |z − 1|/|z₀|.
    Literal,
}

impl LevelForm {
    pub fn lhs(self, z: Complex64, z0: f64) -> f64 {
        match self {
            LevelForm::RePhi => re_phi_interior(z, z0),
            LevelForm::Literal => z.norm().ln() - (z - 1.0).norm() / z0.abs(),
        }
    }
}

/// −e·log k/k + (1/k) log(|z/(z−1)|^γ |zu/(z−1)|).
pub fn corrected_level(z: Complex64, k: usize, gamma: f64, zu: Complex64, exponent: LevelExponent) -> f64 {
    let kf = k as f64;
    let zm1 = (z - 1.0).norm();
    -exponent.value(gamma) * kf.ln() / kf + (gamma * (z.norm() / zm1).ln() + (zu.norm() / zm1).ln()) / kf
}

/// Options for [`corrected_zero_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectedCurveOptions {
    pub z0: f64,
    pub points: usize,
    pub exponent: LevelExponent,
}

impl Default for CorrectedCurveOptions {
    fn default() -> Self {
        CorrectedCurveOptions { z0: 1.0, points: 512, exponent: LevelExponent::default() }
    }
}

/// Level set Re φ(z; 1) = corrected level, traced radially inside Γ₁. Near z = 1 the right side
/// blows up and the curve opens; those rays are omitted.
pub fn corrected_zero_curve(k: usize, gamma: f64, zu: Complex64, opts: &CorrectedCurveOptions) -> Result<CurveSample> {
    if k < 10 {
        return invalid(format!("k = {k} must be at least 10"));
    }
    if !(zu.norm() > 0.0 && zu.re.is_finite() && zu.im.is_finite()) {
        return invalid("Z/U ratio must be finite and nonzero");
    }
    if !(0.0..1.0).contains(&gamma) || opts.points < 16 {
        return invalid("need γ ∈ [0, 1) and at least 16 points");
    }
    let z0 = opts.z0;
    let m = opts.points;
    let f = |rho: f64, th: f64| {
        let z = Complex64::from_polar(rho, th);
        re_phi_interior(z, z0) - corrected_level(z, k, gamma, zu, opts.exponent)
    };
    // rays start at θ = 0⁺ so the opening around z = 1 falls at the ends of the list
    let hits: Vec<Option<f64>> = (0..m)
        .map(|j| {
            let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            let rg = gamma_r_radius(th, 1.0, z0).ok()?;
            outer_root(|r| f(r, th), rg)
        })
        .collect();
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    for (j, h) in hits.iter().enumerate() {
        if let Some(rho) = *h {
            let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            points.push(Complex64::from_polar(rho, th));
            residuals.push(f(rho, th).abs());
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyLevelSet(format!("k = {k}, |Z/U| = {}", zu.norm())));
    }
    let closed = points.len() == m;
    // runs of consecutive hits, counted cyclically
    let starts = (0..m).filter(|&j| hits[j].is_some() && hits[(j + m - 1) % m].is_none()).count();
    let components = if closed { 1 } else { starts };
    Ok(CurveSample { points, residuals, closed, components, density: None })
}

/// Outermost sign change of `f` on (0, hi], refined by bisection; f(hi) must be positive.
fn outer_root(f: impl Fn(f64) -> f64, hi: f64) -> Option<f64> {
    if !(f(hi) > 0.0) {
        return None;
    }
    let steps = 400;
    let mut b = hi;
    for i in 1..=steps {
        let a = hi * (1.0 - i as f64 / steps as f64).max(1e-6);
        if f(a) < 0.0 {
            let (mut lo, mut up) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + up);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    up = mid;
                }
                if up - lo < 1e-15 * up {
                    break;
                }
            }
            return Some(0.5 * (lo + up));
        }
        b = a;
    }
    None
}

/// Mean |lhs − level| over roots (outside the exclusion disk) for one reading of the level equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFit {
    pub form: LevelForm,
    pub exponent: LevelExponent,
    pub mean_residual: f64,
    pub uncorrected_mean: f64,
}

pub fn level_fit(
    zs: &ZeroSet,
    z0: f64,
    gamma: f64,
    zu: Complex64,
    form: LevelForm,
    exponent: LevelExponent,
) -> LevelFit {
    let sel: Vec<Complex64> = zs.roots.iter().cloned().filter(|z| (z - 1.0).norm() > EXCLUSION_RADIUS).collect();
    let n = sel.len().max(1) as f64;
    let mean_residual =
        sel.iter().map(|&z| (form.lhs(z, z0) - corrected_level(z, zs.k, gamma, zu, exponent)).abs()).sum::<f64>() / n;
    let uncorrected_mean = sel.iter().map(|&z| form.lhs(z, z0).abs()).sum::<f64>() / n;
    LevelFit { form, exponent, mean_residual, uncorrected_mean }
}

/// Fits of both left-hand readings and both exponents, best first.
pub fn compare_level_forms(zs: &ZeroSet, z0: f64, gamma: f64, zu: Complex64) -> Vec<LevelFit> {
    let mut v = Vec::new();
    for form in [LevelForm::RePhi, LevelForm::Literal] {
        for e in [LevelExponent::HalfOnePlusGamma, LevelExponent::HalfPlusGamma] {
            v.push(level_fit(zs, z0, gamma, zu, form, e));
        }
    }
    v.sort_by(|a, b| a.mean_residual.partial_cmp(&b.mean_residual).unwrap());
    v
}

/// Mean, population standard deviation / |mean|, and the per-sample values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEstimate {
    pub mean: Complex64,
    pub dispersion: f64,
    pub samples: Vec<Complex64>,
    pub points: Vec<Complex64>,
}

impl SampleEstimate {
    fn from_samples(points: Vec<Complex64>, samples: Vec<Complex64>) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<Complex64>() / n;
        let var = samples.iter().map(|s| (s - mean).norm_sqr()).sum::<f64>() / n;
        let dispersion = if mean.norm() > 0.0 { var.sqrt() / mean.norm() } else { var.sqrt() };
        SampleEstimate { mean, dispersion, samples, points }
    }
}

/// Eight points on |z| = 1.6 at angles (2a+1)π/8.
pub fn default_h_samples() -> Vec<Complex64> {
    (0..8).map(|a| Complex64::from_polar(1.6, (2 * a + 1) as f64 * PI / 8.0)).collect()
}

/// {0.35, 0.45, 0.55} ± 0.05i.
pub fn default_zu_samples() -> Vec<Complex64> {
    let mut v = Vec::new();
    for &x in &[0.35, 0.45, 0.55] {
        for &y in &[0.05, -0.05] {
            v.push(Complex64::new(x, y));
        }
    }
    v
}

/// Contour separating the sample regions: Γ₁, or Γ_{z₀} when z₀ < 1 (Γ_r needs r ≤ z₀).
fn side_r(z0: f64) -> f64 {
    z0.min(1.0)
}

fn check_sample(z: Complex64) -> Result<()> {
    if z.norm() < 1e-3 || (z - 1.0).norm() < 1e-3 {
        return invalid(format!("sample {z} too close to 0 or 1"));
    }
    Ok(())
}

/// H(z) = √k (z − 1)(πₖ(z) z^{−k} (1 − 1/z)^{−γ} − 1) over exterior samples.
pub fn extract_h(p: &MonicPolynomial, gamma: f64, z0: f64, samples: &[Complex64]) -> Result<SampleEstimate> {
    let k = p.degree();
    if samples.is_empty() {
        return invalid("no sample points");
    }
    let mut out = Vec::with_capacity(samples.len());
    for &z in samples {
        check_sample(z)?;
        if inside_gamma_r(z, side_r(z0), z0)? {
            return invalid(format!("sample {z} is not exterior to Γ₁"));
        }
        let ratio = p.eval_over_zk(z) * (1.0 - 1.0 / z).powf(-gamma);
        let h = (k as f64).sqrt() * (z - 1.0) * (ratio - 1.0);
        if !(h.re.is_finite() && h.im.is_finite()) {
            return Err(Error::NonFinite { index: out.len(), x: z.norm() });
        }
        out.push(h);
    }
    Ok(SampleEstimate::from_samples(samples.to_vec(), out))
}

/// πₖ(z) e^{−k g_in(z)} with g_in = z/z₀ − 1/z₀ (r = 1), at the polynomial's working precision.
fn scaled_interior_value(p: &MonicPolynomial, z: Complex64, z0: f64) -> Complex64 {
    let k = p.degree() as f64;
    let v = p.eval_exact(z);
    let g = MpComplex::from_c64((z - 1.0) * (-k / z0), v.bits()).exp();
    v.mul(&g).to_c64()
}

/// (Z/U)(z) = −πₖ(z) e^{−k g(z)} (z − 1) k^{1/2+γ} over interior samples.
pub fn extract_zu(p: &MonicPolynomial, gamma: f64, z0: f64, samples: &[Complex64]) -> Result<SampleEstimate> {
    let k = p.degree();
    if samples.is_empty() {
        return invalid("no sample points");
    }
    let mut out = Vec::with_capacity(samples.len());
    for &z in samples {
        check_sample(z)?;
        if !inside_gamma_r(z, side_r(z0), z0)? {
            return invalid(format!("sample {z} is not interior to Γ₁"));
        }
        let v = -scaled_interior_value(p, z, z0) * (z - 1.0) * (k as f64).powf(0.5 + gamma);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { index: out.len(), x: z.norm() });
        }
        out.push(v);
    }
    Ok(SampleEstimate::from_samples(samples.to_vec(), out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticExtract {
    pub k: usize,
    pub z0: f64,
    pub gamma: f64,
    /// 𝒮 = √k (1/z₀ − 1).
    pub s: f64,
    pub h: SampleEstimate,
    pub zu: SampleEstimate,
    /// |estimate(k) − estimate(previous k)| in a k-sequence.
    pub h_gap: Option<f64>,
    pub zu_gap: Option<f64>,
}

pub fn extract(p: &MonicPolynomial, gamma: f64, z0: f64) -> Result<AsymptoticExtract> {
    let k = p.degree();
    Ok(AsymptoticExtract {
        k,
        z0,
        gamma,
        s: (k as f64).sqrt() * (1.0 / z0 - 1.0),
        h: extract_h(p, gamma, z0, &default_h_samples())?,
        zu: extract_zu(p, gamma, z0, &default_zu_samples())?,
        h_gap: None,
        zu_gap: None,
    })
}

/// Fills the gap fields along a sequence ordered by k.
pub fn link_gaps(rows: &mut [AsymptoticExtract]) {
    for i in 1..rows.len() {
        let (h, zu) = ((rows[i].h.mean - rows[i - 1].h.mean).norm(), (rows[i].zu.mean - rows[i - 1].zu.mean).norm());
        rows[i].h_gap = Some(h);
        rows[i].zu_gap = Some(zu);
    }
}

/// Two-term reconstruction near Γ₁ from the interior side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlugIn {
    pub z: Complex64,
    pub exact: Complex64,
    pub model: Complex64,
    pub relative_error: f64,
    /// |second term| / |first term|.
    pub term_ratio: f64,
}

/// πₖ(z) e^{−kg} ≈ e^{kφ}((z−1)/z)^γ (1 + H/(√k(z−1))) − (Z/U)/((z−1) k^e), with g the interior
/// g-function; e defaults to 1/2 + γ (see [`LevelExponent`]).
pub fn plug_in_check(
    p: &MonicPolynomial,
    gamma: f64,
    z0: f64,
    h: Complex64,
    zu: Complex64,
    z: Complex64,
    exponent: LevelExponent,
) -> Result<PlugIn> {
    check_sample(z)?;
    if !inside_gamma_r(z, side_r(z0), z0)? {
        return invalid(format!("{z} is not interior to Γ₁"));
    }
    let k = p.degree() as f64;
    let exact = scaled_interior_value(p, z, z0);
    let phi = z.ln() - (z - 1.0) / z0;
    let first = (k * phi).exp() * ((z - 1.0) / z).powf(gamma) * (1.0 + h / (k.sqrt() * (z - 1.0)));
    let second = zu / ((z - 1.0) * k.powf(exponent.value(gamma)));
    let model = first - second;
    Ok(PlugIn {
        z,
        exact,
        model,
        relative_error: (model - exact).norm() / exact.norm(),
        term_ratio: second.norm() / first.norm(),
    })
}

/// Test point on the ray arg z = 0.6π, 0.02 inside Γ₁.
pub fn default_plug_in_point(z0: f64) -> Result<Complex64> {
    let th = 0.6 * PI;
    Ok(Complex64::from_polar(gamma_r_radius(th, 1.0, z0)? - 0.02, th))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        let p = MonicPolynomial::from_coeffs(vec![c(-1.0, 0.0), c(0.0, 0.0)]);
        let z = polynomial_roots(&p).unwrap();
        assert!((z.roots[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z.roots[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cubic_closed_form() {
        let p = MonicPolynomial::from_coeffs(vec![c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]);
        let z = polynomial_roots(&p).unwrap();
        let mut r: Vec<f64> = z.roots.iter().map(|r| r.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s = 2f64.sqrt();
        assert!((r[0] + s).abs() < 1e-14 && r[1].abs() < 1e-14 && (r[2] - s).abs() < 1e-14);
    }

    #[test]
    fn multiple_root_is_clustered() {
        let p = MonicPolynomial::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 1.0)]);
        let z = polynomial_roots(&p).unwrap();
        assert!(z.max_residual() < ROOT_TOL);
        assert_eq!(z.clusters.len(), 1);
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(polynomial_roots(&MonicPolynomial::from_coeffs(vec![])).unwrap_err().is_input());
    }

    #[test]
    fn unfolded_roots_symmetric() {
        let zs = ZeroSet {
            k: 1,
            z0: None,
            gamma: None,
            roots: vec![c(0.3, 0.2)],
            residuals: vec![0.0],
            clusters: vec![],
        };
        let l = unfold_roots(&zs, 2.0, 3, 1).unwrap();
        assert_eq!(l.len(), 4);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        for r in &l[1..] {
            assert!(l[1..].iter().any(|s| (s - r * w).norm() < 1e-14));
            assert!((r.powu(3) - 2.0 * (1.0 - c(0.3, 0.2))).norm() < 1e-14);
        }
    }

    #[test]
    fn level_exponents() {
        assert_eq!(LevelExponent::HalfOnePlusGamma.value(0.5), 0.75);
        assert_eq!(LevelExponent::HalfPlusGamma.value(0.5), 1.0);
        assert!(LevelForm::RePhi.lhs(c(1.0, 0.0), 1.0).abs() < 1e-16);
    }
}
