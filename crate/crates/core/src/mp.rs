//! Extended-precision complex arithmetic and a scalar abstraction shared with `Complex64`.
//!
//! Moment, Hankel and root computations are written once against [`Scalar`] and run either in
//! double precision or with MPFR floats at a caller-chosen number of bits.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::AssignRound;
use rug::Float;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Working precision of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    /// Decimal digits carried by MPFR floats.
    Digits(u32),
}

impl Precision {
    pub fn bits(&self) -> u32 {
        match *self {
            Precision::Double => 53,
            Precision::Digits(d) => digits_to_bits(d),
        }
    }

    pub fn digits(&self) -> u32 {
        match *self {
            Precision::Double => 16,
            Precision::Digits(d) => d,
        }
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

pub trait Scalar: Clone + Send + Sync + fmt::Debug + 'static {
    fn from_c64(c: Complex64, bits: u32) -> Self;
    fn bits(&self) -> u32;
    fn to_c64(&self) -> Complex64;
    fn norm_f64(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: f64) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// π as a real scalar.
    fn pi(bits: u32) -> Self;
    /// e^{iθ} for θ = 2π·num/den, exact in the argument reduction.
    fn unit_root(num: usize, den: usize, bits: u32) -> Self;

    fn like(&self, c: Complex64) -> Self {
        Self::from_c64(c, self.bits())
    }

    fn zero_like(&self) -> Self {
        self.like(Complex64::new(0.0, 0.0))
    }

    fn one_like(&self) -> Self {
        self.like(Complex64::new(1.0, 0.0))
    }
}

impl Scalar for Complex64 {
    fn from_c64(c: Complex64, _bits: u32) -> Self {
        c
    }
    fn bits(&self) -> u32 {
        53
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn norm_f64(&self) -> f64 {
        self.norm()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        Complex64::sqrt(*self)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn pi(_bits: u32) -> Self {
        Complex64::new(std::f64::consts::PI, 0.0)
    }
    fn unit_root(num: usize, den: usize, _bits: u32) -> Self {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * num as f64 / den as f64)
    }
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e}i)[{} bits]", self.re.to_f64(), self.im.to_f64(), self.re.prec())
    }
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn real(x: Float) -> Self {
        let p = x.prec();
        MpComplex { re: x, im: Float::new(p) }
    }

    fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn norm(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// `self += a * b`.
    pub fn add_mul_assign(&mut self, a: &MpComplex, b: &MpComplex) {
        let p = self.prec();
        let mut t = Float::with_val(p, &a.re * &b.re);
        t -= Float::with_val(p, &a.im * &b.im);
        self.re += t;
        let mut u = Float::with_val(p, &a.re * &b.im);
        u += Float::with_val(p, &a.im * &b.re);
        self.im += u;
    }
}

impl Scalar for MpComplex {
    fn from_c64(c: Complex64, bits: u32) -> Self {
        MpComplex { re: Float::with_val(bits, c.re), im: Float::with_val(bits, c.im) }
    }
    fn bits(&self) -> u32 {
        self.prec()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn norm_f64(&self) -> f64 {
        self.norm().to_f64()
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = self.zero_like();
        out.add_mul_assign(self, o);
        out
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.prec();
        let mut den = Float::with_val(p, &o.re * &o.re);
        den += Float::with_val(p, &o.im * &o.im);
        let mut re = Float::with_val(p, &self.re * &o.re);
        re += Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.im * &o.re);
        im -= Float::with_val(p, &self.re * &o.im);
        re /= &den;
        im /= &den;
        MpComplex { re, im }
    }
    fn neg(&self) -> Self {
        MpComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn scale(&self, s: f64) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }
    fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (mut s, mut c) = (Float::new(p), Float::new(p));
        (&mut s, &mut c).assign_round(self.im.sin_cos_ref(), rug::float::Round::Nearest);
        MpComplex { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }
    fn ln(&self) -> Self {
        MpComplex { re: self.norm().ln(), im: self.arg() }
    }
    fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.norm();
        if r.is_zero() {
            return self.zero_like();
        }
        let mut a = Float::with_val(p, &r + &self.re);
        a /= 2;
        let a = a.sqrt();
        let mut b = Float::with_val(p, &r - &self.re);
        b /= 2;
        let mut b = b.sqrt();
        if self.im.is_sign_negative() {
            b = -b;
        }
        MpComplex { re: a, im: b }
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn pi(bits: u32) -> Self {
        MpComplex::real(Float::with_val(bits, Constant::Pi))
    }
    fn unit_root(num: usize, den: usize, bits: u32) -> Self {
        let mut theta = Float::with_val(bits, Constant::Pi);
        theta *= 2 * num as u64;
        theta /= den as u64;
        let (mut s, mut c) = (Float::new(bits), Float::new(bits));
        (&mut s, &mut c).assign_round(theta.sin_cos_ref(), rug::float::Round::Nearest);
        MpComplex { re: c, im: s }
    }
}

/// Horner evaluation of `Σ c_i z^i` (ascending coefficients).
pub fn horner<T: Scalar>(coeffs: &[T], z: &T) -> T {
    let mut acc = coeffs.last().expect("nonempty").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Value and derivative by Horner.
pub fn horner_with_derivative<T: Scalar>(coeffs: &[T], z: &T) -> (T, T) {
    let mut p = coeffs.last().expect("nonempty").clone();
    let mut dp = p.zero_like();
    for c in coeffs.iter().rev().skip(1) {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Solve `A x = b` by LU with partial pivoting (pivot by modulus). Returns the solution and the
/// pivots (their product, times the permutation sign, is det A).
pub fn lu_solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> crate::Result<(Vec<T>, Vec<T>, f64)> {
    let n = b.len();
    let mut sign = 1.0;
    let mut pivots = Vec::with_capacity(n);
    let scale = a.iter().flatten().map(|v| v.norm_f64()).fold(0.0, f64::max);
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, a[r][col].norm_f64()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if !(best > scale * 1e-300) || !best.is_finite() {
            return Err(crate::Error::Singular { step: col, pivot: best });
        }
        if piv != col {
            a.swap(piv, col);
            b.swap(piv, col);
            sign = -sign;
        }
        let p = a[col][col].clone();
        pivots.push(p.clone());
        for r in col + 1..n {
            let f = a[r][col].div(&p);
            if f.norm_f64() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[r][c].sub(&f.mul(&a[col][c]));
                a[r][c] = v;
            }
            b[r] = b[r].sub(&f.mul(&b[col]));
        }
    }
    let mut x = vec![b[0].zero_like(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc.sub(&a[r][c].mul(&x[c]));
        }
        x[r] = acc.div(&a[r][r]);
    }
    Ok((x, pivots, sign))
}
