//! Curves and potentials of the model: the Szegő-type curve and its d-fold unfolding, the
//! lemniscate boundary of the droplet, the Γ_r family with its g-function, the local conformal
//! coordinate ζ near the critical point, and the double-scaling parameter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Radial tracer tolerance on |Re φ|.
pub const TRACE_TOL: f64 = 1e-12;

/// Parameters of one orthogonal-polynomial instance `W(λ) = |λ|^{2d} − t(λ^d + λ̄^d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: usize,
    pub ell: usize,
    pub t: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub k: usize,
}

impl ModelParams {
    pub fn new(d: usize, ell: usize, t: f64, big_t: f64, k: usize) -> Result<Self> {
        if d < 2 {
            return invalid(format!("d = {d} must be at least 2"));
        }
        if ell >= d {
            return invalid(format!("ℓ = {ell} must lie in 0..d-1"));
        }
        if !(t > 0.0 && big_t > 0.0 && t.is_finite() && big_t.is_finite()) {
            return invalid(format!("t = {t} and T = {big_t} must be positive"));
        }
        Ok(ModelParams { d, ell, t, big_t, k })
    }

    /// Instance at the critical time t = t_c.
    pub fn critical(d: usize, ell: usize, big_t: f64, k: usize) -> Result<Self> {
        let tc = (big_t / d as f64).sqrt();
        Self::new(d, ell, tc, big_t, k)
    }

    /// Instance with a prescribed z₀ = t_c²/t².
    pub fn with_z0(d: usize, ell: usize, big_t: f64, k: usize, z0: f64) -> Result<Self> {
        if !(z0 > 0.0) {
            return invalid(format!("z₀ = {z0} must be positive"));
        }
        let tc = (big_t / d as f64).sqrt();
        Self::new(d, ell, tc / z0.sqrt(), big_t, k)
    }

    pub fn n(&self) -> usize {
        self.k * self.d + self.ell
    }

    /// N = (n − ℓ)/T.
    pub fn big_n(&self) -> f64 {
        (self.n() - self.ell) as f64 / self.big_t
    }

    pub fn gamma(&self) -> f64 {
        (self.d - self.ell - 1) as f64 / self.d as f64
    }

    pub fn t_c(&self) -> f64 {
        (self.big_t / self.d as f64).sqrt()
    }

    pub fn z0(&self) -> f64 {
        let tc = self.t_c();
        tc * tc / (self.t * self.t)
    }

    pub fn scaling(&self) -> f64 {
        scaling_parameter(self.k, self.t, self.t_c())
    }
}

/// Discretized level curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub points: Vec<Complex64>,
    /// |defining function| at each point.
    pub residuals: Vec<f64>,
    pub closed: bool,
    /// Number of connected components (points are listed component by component).
    pub components: usize,
    pub density: Option<Vec<Complex64>>,
}

impl CurveSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Polyline segments (including the closing segment of each closed component).
    pub fn segments(&self) -> Vec<(Complex64, Complex64)> {
        let n = self.points.len();
        if n < 2 {
            return Vec::new();
        }
        let per = n / self.components.max(1);
        let mut out = Vec::with_capacity(n);
        for c in 0..self.components.max(1) {
            let chunk = &self.points[c * per..((c + 1) * per).min(n)];
            for w in chunk.windows(2) {
                out.push((w[0], w[1]));
            }
            if self.closed && chunk.len() > 2 {
                out.push((chunk[chunk.len() - 1], chunk[0]));
            }
        }
        out
    }

    /// Euclidean distance from `z` to the polyline.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let segs = self.segments();
        if segs.is_empty() {
            return self.points.first().map_or(f64::INFINITY, |p| (z - p).norm());
        }
        segs.iter().map(|&(a, b)| segment_distance(z, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the closed polyline around `z`.
    pub fn winding_number(&self, z: Complex64) -> i64 {
        let total: f64 = self.segments().iter().map(|&(a, b)| ((b - z) / (a - z)).arg()).sum();
        (total / (2.0 * PI)).round() as i64
    }

    /// CSV with columns re, im, residual, density_re, density_im.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,residual,density_re,density_im\n");
        for (i, p) in self.points.iter().enumerate() {
            let (dr, di) = match &self.density {
                Some(d) => (crate::format::sci(d[i].re), crate::format::sci(d[i].im)),
                None => (String::new(), String::new()),
            };
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                crate::format::sci(p.re),
                crate::format::sci(p.im),
                crate::format::sci(self.residuals[i]),
                dr,
                di
            ));
        }
        s
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / l2;
    (z - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// φ̂(λ) = log(t_c − λ^d) + λ^d/t_c − log t_c (principal log).
pub fn phi_hat(lambda: Complex64, t_c: f64, d: usize) -> Result<Complex64> {
    let u = lambda.powu(d as u32);
    let arg = Complex64::new(t_c, 0.0) - u;
    if arg.norm() == 0.0 {
        return invalid("λ^d = t_c is the logarithmic singularity of φ̂");
    }
    Ok(arg.ln() + u / t_c - t_c.ln())
}

/// z-plane form of φ̂: log z − z + 1.
pub fn phi_szego(z: Complex64) -> Complex64 {
    z.ln() - z + 1.0
}

/// Inner root in (0, z₀] of `log ρ − ρ cos θ / z₀ − log r + r/z₀ = 0`.
pub fn gamma_r_radius(theta: f64, r: f64, z0: f64) -> Result<f64> {
    let c = theta.cos() / z0;
    let shift = r / z0 - r.ln();
    let f = |rho: f64| rho.ln() - rho * c + shift;
    let hi0 = z0;
    let fhi = f(hi0);
    if fhi.abs() <= 1e-15 {
        return Ok(hi0);
    }
    if fhi < 0.0 {
        return Err(Error::RadialSolve { theta });
    }
    let mut lo = r * (-1.0 - 2.0 * r / z0).exp();
    let mut hi = hi0;
    if f(lo) >= 0.0 {
        return Err(Error::RadialSolve { theta });
    }
    let mut rho = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = f(rho);
        if v.abs() < 1e-15 {
            return Ok(rho);
        }
        if v < 0.0 {
            lo = rho;
        } else {
            hi = rho;
        }
        let dv = 1.0 / rho - c;
        let newton = rho - v / dv;
        rho = if dv > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-16 * hi {
            break;
        }
    }
    if f(rho).abs() < TRACE_TOL {
        Ok(rho)
    } else {
        Err(Error::RadialSolve { theta })
    }
}

fn check_r(r: f64, z0: f64) -> Result<()> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return invalid(format!("z₀ = {z0} must be positive"));
    }
    if !(r > 0.0 && r <= z0) {
        return invalid(format!("r = {r} outside (0, z₀ = {z0}]"));
    }
    Ok(())
}

/// Γ_r traced radially at angles θ_j = −π + 2πj/M.
pub fn curve_gamma_r(r: f64, z0: f64, m: usize) -> Result<CurveSample> {
    check_r(r, z0)?;
    if m < 16 {
        return invalid(format!("M = {m} must be at least 16"));
    }
    let mut points = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    for j in 0..m {
        let theta = -PI + 2.0 * PI * j as f64 / m as f64;
        let rho = gamma_r_radius(theta, r, z0)?;
        let z = Complex64::from_polar(rho, theta);
        let z = if j * 2 == m { Complex64::new(rho, 0.0) } else { z };
        points.push(z);
        residuals.push(re_phi_inner(z, r, z0).abs());
    }
    Ok(CurveSample { points, residuals, closed: true, components: 1, density: None })
}

/// Szegő curve |z e^{1−z}| = 1, |z| ≤ 1.
pub fn szego_curve_z(m: usize) -> Result<CurveSample> {
    curve_gamma_r(1.0, 1.0, m)
}

fn re_phi_inner(z: Complex64, r: f64, z0: f64) -> f64 {
    z.norm().ln() - z.re / z0 - r.ln() + r / z0
}

/// Pull a z-plane sample of Ĉ back to the λ-plane: λ = ω^m (t_c(1 − z))^{1/d}.
pub fn unfold_curve(sample: &CurveSample, t_c: f64, d: usize) -> Result<CurveSample> {
    if d == 0 || !(t_c > 0.0) {
        return invalid("unfolding needs d ≥ 1 and t_c > 0");
    }
    let mut points = Vec::with_capacity(d * sample.len());
    let mut residuals = Vec::with_capacity(d * sample.len());
    for m in 0..d {
        let omega = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64);
        for &z in &sample.points {
            let u = (1.0 - z) * t_c;
            if u.re < -1e-12 * t_c {
                return invalid(format!("1 − z = {} is not in the right half plane", 1.0 - z));
            }
            let lam = if u.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { omega * u.powf(1.0 / d as f64) };
            let res = if u.norm() == 0.0 { 0.0 } else { phi_hat(lam, t_c, d)?.re.abs() };
            points.push(lam);
            residuals.push(res);
        }
    }
    Ok(CurveSample { points, residuals, closed: sample.closed, components: d, density: None })
}

/// ∂D = {|λ^d − t| = t_c}: one component for t ≤ t_c, d components for t > t_c.
pub fn lemniscate_boundary(t: f64, t_c: f64, d: usize, m: usize) -> Result<CurveSample> {
    if !(t > 0.0 && t_c > 0.0) || d == 0 || m < 3 {
        return invalid("lemniscate needs t, t_c > 0, d ≥ 1, M ≥ 3");
    }
    let df = d as f64;
    let mut points = Vec::with_capacity(m * d);
    let components;
    if t > t_c {
        components = d;
        for s in 0..d {
            let omega = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / df);
            for i in 0..m {
                let u = t + t_c * Complex64::from_polar(1.0, 2.0 * PI * i as f64 / m as f64);
                points.push(omega * u.powf(1.0 / df));
            }
        }
    } else {
        // u winds around 0 (or touches it), so the d-th root continues across sheets
        components = 1;
        let total = m * d;
        let mut prev_arg: Option<f64> = None;
        let mut unwrapped = 0.0;
        for i in 0..total {
            let phase = 2.0 * PI * i as f64 / m as f64;
            let u = t + t_c * Complex64::from_polar(1.0, phase);
            if u.norm() < 1e-14 * t_c {
                points.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let a = u.arg();
            unwrapped = match prev_arg {
                None => a,
                Some(p) => {
                    let mut da = a - p;
                    while da > PI {
                        da -= 2.0 * PI;
                    }
                    while da < -PI {
                        da += 2.0 * PI;
                    }
                    unwrapped + da
                }
            };
            prev_arg = Some(a);
            points.push(Complex64::from_polar(u.norm().powf(1.0 / df), unwrapped / df));
        }
    }
    let residuals =
        points.iter().map(|l| ((l.powu(d as u32) - t).norm() - t_c).abs()).collect();
    Ok(CurveSample { points, residuals, closed: true, components, density: None })
}

/// Mass and density of dν̂ = dφ/(2πi) along a sampled closed z-curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuHat {
    /// Total mass (should be 1).
    pub mass: Complex64,
    /// Mass carried by each polyline segment i → i+1 (exact integral along the chord).
    pub segment_mass: Vec<Complex64>,
    /// Per-point density with respect to arclength.
    pub density: Vec<Complex64>,
}

/// ν̂ on a closed sample of Ĉ in z-coordinates; `d` sheets of weight 1/d each unfold to the
/// same total, so the mass is independent of `d`.
pub fn nu_hat(sample: &CurveSample, d: usize) -> Result<NuHat> {
    if !sample.closed || sample.components != 1 {
        return invalid("ν̂ needs a single closed curve");
    }
    if d == 0 {
        return invalid("d must be positive");
    }
    let p = &sample.points;
    let n = p.len();
    if n < 3 {
        return invalid("curve sample too short");
    }
    // φ(b) − φ(a) = log(b/a) − (b − a), exact along the chord
    let inc: Vec<Complex64> = (0..n)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            (b / a).ln() - (b - a)
        })
        .collect();
    let two_pi_i = 2.0 * PI * I;
    let segment_mass: Vec<Complex64> = inc.iter().map(|v| v / two_pi_i).collect();
    // d sheets × (1/d) each
    let mass: Complex64 = segment_mass.iter().sum::<Complex64>() * (d as f64) / (d as f64);
    let density = (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let ds = (p[i] - p[prev]).norm() + (p[(i + 1) % n] - p[i]).norm();
            (inc[prev] + inc[i]) / (two_pi_i * ds)
        })
        .collect();
    Ok(NuHat { mass, segment_mass, density })
}

pub fn nu_hat_mass(sample: &CurveSample, d: usize) -> Result<Complex64> {
    Ok(nu_hat(sample, d)?.mass)
}

/// Plain θ-trapezoid of φ'(z) z'(θ)/(2πi) on a radially traced Szegő sample
/// (kept as a diagnostic; the corner at z = 1 limits it to algebraic accuracy).
pub fn nu_hat_trapezoid_mass(m: usize) -> Result<Complex64> {
    let sample = szego_curve_z(m)?;
    let h = 2.0 * PI / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &z) in sample.points.iter().enumerate() {
        let theta = -PI + h * j as f64;
        let rho = z.norm();
        // ρ'(θ) from implicit differentiation of log ρ − ρ cos θ + 1 = 0
        let denom = 1.0 / rho - theta.cos();
        let drho = if denom.abs() < 1e-300 { 0.0 } else { -rho * theta.sin() / denom };
        let dz = Complex64::from_polar(1.0, theta) * Complex64::new(drho, rho);
        acc += (1.0 / z - 1.0) * dz * h;
    }
    Ok(acc / (2.0 * PI * I))
}

/// ℓ̂ = log r − r/z₀.
pub fn ell_hat(r: f64, z0: f64) -> f64 {
    r.ln() - r / z0
}

/// V(z) = z/z₀ + log z.
pub fn potential_v(z: Complex64, z0: f64) -> Complex64 {
    z / z0 + z.ln()
}

pub fn g_inside(z: Complex64, r: f64, z0: f64) -> Complex64 {
    z / z0 + ell_hat(r, z0)
}

pub fn g_outside(z: Complex64) -> Complex64 {
    z.ln()
}

/// Which side of Γ_r the point lies on (radial comparison with the traced curve).
pub fn inside_gamma_r(z: Complex64, r: f64, z0: f64) -> Result<bool> {
    check_r(r, z0)?;
    if z.norm() == 0.0 {
        return Ok(true);
    }
    let rho = gamma_r_radius(z.arg(), r, z0)?;
    let gap = z.norm() - rho;
    if gap.abs() <= 1e-12 * rho.max(1.0) {
        return Err(Error::OnCurve(format!("{z}")));
    }
    Ok(gap < 0.0)
}

pub fn g_function(z: Complex64, r: f64, z0: f64) -> Result<Complex64> {
    if inside_gamma_r(z, r, z0)? {
        Ok(g_inside(z, r, z0))
    } else {
        Ok(g_outside(z))
    }
}

/// φ(z; r): log z − z/z₀ − ℓ̂ inside Γ_r, z/z₀ − log z + ℓ̂ outside.
pub fn phi(z: Complex64, r: f64, z0: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return invalid("φ has a logarithmic singularity at z = 0");
    }
    let l = ell_hat(r, z0);
    if inside_gamma_r(z, r, z0)? {
        Ok(z.ln() - z / z0 - l)
    } else {
        Ok(z / z0 - z.ln() + l)
    }
}

/// φ(z; z₀) continued from the exterior of Γ₁: (z − 1)/z₀ − log z.
pub fn phi_critical(z: Complex64, z0: f64) -> Complex64 {
    (z - 1.0) / z0 - z.ln()
}

/// 2(w − log(1+w))/w², analytic near w = 0 and equal to 1 there.
fn h_ratio(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        // Σ_{n≥2} 2(−1)^n w^{n−2}/n
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for n in 2..40 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += pw * (2.0 * sign / n as f64);
            pw *= w;
        }
        acc
    } else {
        (w - (1.0 + w).ln()) * 2.0 / (w * w)
    }
}

fn check_zeta_domain(z0: f64) -> Result<()> {
    if !(z0 > 0.7 && z0 < 1.3) {
        return invalid(format!("z₀ = {z0} outside (0.7, 1.3)"));
    }
    Ok(())
}

/// A(z₀): real, A(1) = 0, A ≈ −(z₀ − 1) to first order, with −2φ_cr = A².
pub fn a_of(z0: f64) -> Result<f64> {
    check_zeta_domain(z0)?;
    let w1 = Complex64::new((1.0 - z0) / z0, 0.0);
    Ok((w1 * h_ratio(w1).sqrt()).re)
}

/// Conformal coordinate with φ(z; z₀) = ζ²/2 + Aζ, ζ(1) = 0, ζ'(1) > 0.
pub fn conformal_zeta(z: Complex64, z0: f64) -> Result<Complex64> {
    check_zeta_domain(z0)?;
    if (z - 1.0).norm() > 0.25 + 1e-12 {
        return invalid(format!("z = {z} outside the disk |z − 1| ≤ 0.25"));
    }
    let w = (z - z0) / z0;
    let w1 = Complex64::new((1.0 - z0) / z0, 0.0);
    let a = w1 * h_ratio(w1).sqrt();
    Ok(w * h_ratio(w).sqrt() - a)
}

/// 𝒮 = √k (t²/t_c² − 1).
pub fn scaling_parameter(k: usize, t: f64, t_c: f64) -> f64 {
    (k as f64).sqrt() * (t * t / (t_c * t_c) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_hat_origin_and_real_segment() {
        assert!(phi_hat(c(0.0, 0.0), 2.0, 3).unwrap().norm() < 1e-15);
        for &z in &[0.2, 0.5, 1.0] {
            // λ^d = t_c (1 − z) with d = 1
            let v = phi_hat(c(1.0 - z, 0.0), 1.0, 1).unwrap();
            assert!((v.re - (z.ln() + 1.0 - z)).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_hat_negative_crossing() {
        // log ρ + ρ + 1 = 0 → ρ = W(1/e)
        let (mut lo, mut hi) = (0.1f64, 0.5f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid.ln() + mid + 1.0 > 0.0 { hi = mid } else { lo = mid }
        }
        assert!((lo - 0.2784645).abs() < 1e-7);
        let v = phi_hat(c(1.0 + lo, 0.0), 1.0, 1).unwrap();
        assert!(v.re.abs() < 1e-12);
    }

    #[test]
    fn szego_landmarks() {
        let s = szego_curve_z(64).unwrap();
        assert_eq!(s.points[32], c(1.0, 0.0));
        assert!((s.points[0] - c(-0.2784645427610738, 0.0)).norm() < 1e-12);
        for z in &s.points {
            assert!(((*z * (1.0 - *z).exp()).norm() - 1.0).abs() < 1e-10);
        }
        assert!(s.max_residual() < TRACE_TOL);
    }

    #[test]
    fn gamma_r_real_crossing() {
        let s = curve_gamma_r(0.5, 1.0, 32).unwrap();
        assert!((s.points[16] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_r() {
        assert!(curve_gamma_r(1.2, 1.0, 32).unwrap_err().is_input());
        assert!(curve_gamma_r(0.5, 1.0, 8).unwrap_err().is_input());
    }

    #[test]
    fn lemniscate_components() {
        assert_eq!(lemniscate_boundary(2.0, 1.0, 2, 64).unwrap().components, 2);
        assert_eq!(lemniscate_boundary(0.5, 1.0, 2, 64).unwrap().components, 1);
        let at = lemniscate_boundary(1.0, 1.0, 3, 64).unwrap();
        assert!(at.points.iter().any(|p| p.norm() < 1e-10));
        assert!(at.max_residual() < 1e-12);
    }

    #[test]
    fn g_sides() {
        let z = c(1.5, 0.0);
        assert_eq!(g_function(z, 1.0, 1.0).unwrap(), z.ln());
        let v = phi(c(0.5, 0.0), 1.0, 1.0).unwrap();
        assert!((v.re - (0.5f64.ln() + 0.5)).abs() < 1e-15 && v.re < 0.0);
        assert!(matches!(g_function(c(1.0, 0.0), 1.0, 1.0), Err(Error::OnCurve(_))));
    }

    #[test]
    fn zeta_at_critical_point() {
        for &z0 in &[0.9, 1.0, 1.1] {
            assert_eq!(conformal_zeta(c(1.0, 0.0), z0).unwrap().norm(), 0.0);
        }
        assert_eq!(a_of(1.0).unwrap(), 0.0);
        assert!(conformal_zeta(c(1.5, 0.0), 1.0).unwrap_err().is_input());
        assert!(a_of(1.5).unwrap_err().is_input());
    }

    #[test]
    fn scaling_values() {
        assert_eq!(scaling_parameter(10, 1.3, 1.3), 0.0);
        assert!((scaling_parameter(100, 1.05f64.sqrt(), 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn model_params_derived() {
        let m = ModelParams::critical(3, 0, 3.0, 40).unwrap();
        assert_eq!(m.n(), 120);
        assert!((m.gamma() - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.z0() - 1.0).abs() < 1e-15);
        assert_eq!(m.scaling(), 0.0);
        assert!((m.big_n() * m.big_t - (m.n() - m.ell) as f64).abs() < 1e-12);
        assert!(ModelParams::new(1, 0, 1.0, 1.0, 1).is_err());
        assert!(ModelParams::new(3, 3, 1.0, 1.0, 1).is_err());
    }
}
