//! Truncated power series over the rationals, the generating functions of a
//! measure pair, continued fractions and Stieltjes inversion.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cumulants::{
    cfree_cumulants_from_moments, free_cumulants_from_moments, MeasurePair, MomentSequence,
};
use crate::error::{Error, Result};
use crate::limit_laws;
use crate::rational::{self, Rational};

/// `Σ_{k ≤ N} c_k z^k`, exact up to and including `z^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TruncatedSeries {
    #[serde(with = "crate::rational::serde_vec")]
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Coefficients `c_0..c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::SeriesPrecondition("a series needs at least a constant term"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `z` (order at least 1).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    fn common(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.common(other);
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common(other);
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common(other);
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `1 / f`, requiring `f(0) ≠ 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::SeriesPrecondition("reciprocal needs a nonzero constant term"));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let s: Rational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-s * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `f(g(z))`, requiring `g(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition("inner series of a composition must vanish at 0"));
        }
        let n = self.common(inner);
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `z f(z)`, one order higher.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `f(z) / z`, one order lower, requiring `f(0) = 0` and order ≥ 1.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() == 0 {
            return Err(Error::SeriesPrecondition("division by z needs a zero constant term"));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// Coefficients in `f64`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(rational::format).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Generating functions of a pair `(μ, ν)`:
/// `a = Σ r_n(ν) z^n`, `b = Σ m_n(ν) z^n`, `c = Σ R_n(μ, ν) z^n`,
/// `d = Σ m_n(μ) z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSeries {
    pub a: TruncatedSeries,
    pub b: TruncatedSeries,
    pub c: TruncatedSeries,
    pub d: TruncatedSeries,
}

fn with_zero_constant(values: &[Rational]) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(values.len() + 1);
    coeffs.push(Rational::zero());
    coeffs.extend(values.iter().cloned());
    TruncatedSeries { coeffs }
}

fn moment_series(m: &MomentSequence) -> TruncatedSeries {
    TruncatedSeries { coeffs: m.as_slice().to_vec() }
}

pub fn abcd_from_pair(pair: &MeasurePair) -> PairSeries {
    let r = free_cumulants_from_moments(pair.nu());
    let big_r = cfree_cumulants_from_moments(pair);
    PairSeries {
        a: with_zero_constant(r.as_slice()),
        b: moment_series(pair.nu()),
        c: with_zero_constant(big_r.as_slice()),
        d: moment_series(pair.mu()),
    }
}

/// Residuals of `a(z b(z)) + 1 - b(z)` and `c(z b(z)) d(z) - (d(z) - 1) b(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residuals {
    pub first: TruncatedSeries,
    pub second: TruncatedSeries,
}

impl Residuals {
    pub fn vanish(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

/// The two functional equations linking cumulant and moment series.
pub fn functional_equation_residuals(s: &PairSeries) -> Result<Residuals> {
    let orders = [s.a.order(), s.b.order(), s.c.order(), s.d.order()];
    if orders.iter().any(|&o| o != orders[0]) {
        return Err(Error::OrderMismatch { left: orders[0], right: *orders.iter().max().unwrap() });
    }
    let n = orders[0];
    let zb = s.b.mul_z().truncate(n);
    let one = TruncatedSeries::one(n);
    let first = s.a.compose(&zb)?.add(&one).sub(&s.b);
    let second = s.c.compose(&zb)?.mul(&s.d).sub(&s.d.sub(&one).mul(&s.b));
    Ok(Residuals { first, second })
}

/// The Cauchy-transform form of the same relations, in coefficients:
/// `b(z / (1 + a(z))) - (1 + a(z))` and `d(z) (1 - z ĉ(z b(z))) - 1` with
/// `ĉ = c / z`.
pub fn cauchy_form_residuals(pair: &MeasurePair) -> Result<Residuals> {
    let s = abcd_from_pair(pair);
    let n = s.a.order();
    let one = TruncatedSeries::one(n);
    let one_plus_a = one.add(&s.a);
    let inner = TruncatedSeries::identity(n).mul(&one_plus_a.reciprocal()?);
    let first = s.b.compose(&inner)?.sub(&one_plus_a);

    let c_hat = s.c.div_z()?;
    let zb = s.b.mul_z().truncate(n - 1);
    let z_c_hat = c_hat.compose(&zb)?.mul_z();
    let second = s.d.mul(&one.sub(&z_c_hat)).sub(&one);
    Ok(Residuals { first, second })
}

/// For `ν = δ_0`: `d(z) (1 - c(z)) - 1`.
pub fn boolean_residual(mu: &MomentSequence) -> Result<TruncatedSeries> {
    let s = abcd_from_pair(&MeasurePair::boolean(mu.clone()));
    let one = TruncatedSeries::one(s.d.order());
    Ok(s.d.mul(&one.sub(&s.c)).sub(&one))
}

/// One level of `1/(z - shift - (weight + weight_z z) · next)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfLevel {
    pub shift: f64,
    pub weight: f64,
    pub weight_z: f64,
}

impl CfLevel {
    pub fn jacobi(shift: f64, weight: f64) -> Self {
        CfLevel { shift, weight, weight_z: 0.0 }
    }
}

pub const DEFAULT_CF_DEPTH: usize = 64;

const NEAR_ZERO: f64 = 1e-250;

/// Evaluates the finite continued fraction bottom-up with tail 0.
pub fn cf_eval(levels: &[CfLevel], z: Complex64) -> Result<Complex64> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("continued fraction needs at least one level".into()));
    }
    let mut tail = Complex64::zero();
    for (depth, l) in levels.iter().enumerate().rev() {
        let den = z - l.shift - (l.weight + l.weight_z * z) * tail;
        if !(den.norm() > NEAR_ZERO) {
            return Err(Error::NumericalDegeneracy { level: depth + 1 });
        }
        tail = den.inv();
    }
    Ok(tail)
}

/// Jacobi levels of the c-free Gaussian law: weights `α², β², β², …`.
pub fn gaussian_cf_levels(alpha_sq: f64, beta_sq: f64, depth: usize) -> Vec<CfLevel> {
    (0..depth)
        .map(|k| CfLevel::jacobi(0.0, if k == 0 { alpha_sq } else { beta_sq }))
        .collect()
}

/// Levels of the c-free Poisson law: every denominator is `z + (1 - β)`
/// except the first, `z + (α/β)(1 - β)`, and the numerators are
/// `(α/β) z` then `z`.
pub fn poisson_cf_levels(alpha: f64, beta: f64, depth: usize) -> Vec<CfLevel> {
    let ratio = alpha / beta;
    (0..depth)
        .map(|k| {
            let shift = if k == 0 { -ratio * (1.0 - beta) } else { beta - 1.0 };
            // The numerator below level k is (α/β) z only after the first level.
            let weight_z = if k == 0 { ratio } else { 1.0 };
            CfLevel { shift, weight: 0.0, weight_z }
        })
        .collect()
}

/// A Cauchy transform `G(z) = ∫ dμ(t) / (z - t)` evaluable off the axis.
#[derive(Debug, Clone, PartialEq)]
pub enum CauchyEvaluator {
    /// `Σ_n m_n / z^{n+1}`, truncated; only meaningful for large `|z|`.
    FromMoments(Vec<f64>),
    Gaussian { alpha: f64, beta: f64 },
    Poisson { alpha: f64, beta: f64 },
    ContinuedFraction(Vec<CfLevel>),
}

impl CauchyEvaluator {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            CauchyEvaluator::FromMoments(m) => {
                let w = z.inv();
                let mut acc = Complex64::zero();
                for &mk in m.iter().rev() {
                    acc = acc * w + mk;
                }
                Ok(acc * w)
            }
            CauchyEvaluator::Gaussian { alpha, beta } => limit_laws::gaussian_cauchy_g(*alpha, *beta, z),
            CauchyEvaluator::Poisson { alpha, beta } => limit_laws::poisson_cauchy_g(*alpha, *beta, z),
            CauchyEvaluator::ContinuedFraction(levels) => cf_eval(levels, z),
        }
    }
}

pub const MIN_EPS: f64 = 1e-8;
pub const MAX_EPS: f64 = 1e-2;

/// `-Im G(t + i ε) / π`.
pub fn stieltjes_density(g: &CauchyEvaluator, t: f64, eps: f64) -> Result<f64> {
    if !(MIN_EPS..=MAX_EPS).contains(&eps) {
        return Err(Error::InvalidParameter(format!("eps {eps} outside [{MIN_EPS}, {MAX_EPS}]")));
    }
    let v = g.eval(Complex64::new(t, eps))?;
    Ok(-v.im / std::f64::consts::PI)
}
