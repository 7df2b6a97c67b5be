//! c-free, free and boolean convolution by cumulant additivity, plus
//! dilations and the normalized `N`-fold powers used in limit theorems.

use num_traits::{One, Zero};

use crate::cumulants::{
    cfree_cumulants_from_moments, cfree_moment_kernel, check_orders, free_cumulants_from_moments,
    free_moment_kernel, moments_from_cfree_cumulants, moments_from_free_cumulants,
    CFreeCumulantSequence, FreeCumulantSequence, MeasurePair, MomentSequence,
};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `(μ_1, ν_1) ⊞ (μ_2, ν_2)`: both the free cumulants of the `ν`-parts and
/// the c-free cumulants of the pairs add.
pub fn cfree_convolve(p1: &MeasurePair, p2: &MeasurePair) -> Result<MeasurePair> {
    check_orders(p1.order(), p2.order())?;
    let r = free_cumulants_from_moments(p1.nu()).add(&free_cumulants_from_moments(p2.nu()))?;
    let big_r = cfree_cumulants_from_moments(p1).add(&cfree_cumulants_from_moments(p2))?;
    pair_from_cumulants(&r, &big_r)
}

/// Rebuilds `(μ, ν)` from `r(ν)` and `R(μ, ν)`.
pub fn pair_from_cumulants(
    r: &FreeCumulantSequence,
    big_r: &CFreeCumulantSequence,
) -> Result<MeasurePair> {
    let nu = moments_from_free_cumulants(r);
    let mu = moments_from_cfree_cumulants(big_r, &nu)?;
    MeasurePair::new(mu, nu)
}

/// Free convolution of two single measures.
pub fn free_convolve(m1: &MomentSequence, m2: &MomentSequence) -> Result<MomentSequence> {
    check_orders(m1.order(), m2.order())?;
    let r = free_cumulants_from_moments(m1).add(&free_cumulants_from_moments(m2))?;
    Ok(moments_from_free_cumulants(&r))
}

/// Boolean convolution: c-free convolution with both `ν`-parts pinned to `δ_0`.
pub fn boolean_convolve(m1: &MomentSequence, m2: &MomentSequence) -> Result<MomentSequence> {
    let p = cfree_convolve(&MeasurePair::boolean(m1.clone()), &MeasurePair::boolean(m2.clone()))?;
    debug_assert_eq!(p.nu(), &MomentSequence::delta_zero(m1.order()));
    Ok(p.into_parts().0)
}

/// Push-forward of both measures under `t ↦ λ t`.
pub fn dilate(pair: &MeasurePair, lambda: &Rational) -> MeasurePair {
    let scale = |m: &MomentSequence| {
        let mut power = Rational::one();
        let moments = m
            .as_slice()
            .iter()
            .map(|v| {
                let out = v * &power;
                power *= lambda;
                out
            })
            .collect();
        MomentSequence::new(moments).expect("m_0 is preserved")
    };
    MeasurePair::new(scale(pair.mu()), scale(pair.nu())).expect("orders preserved")
}

/// Dilation factor, either rational or the square root of a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dilation {
    Rational(Rational),
    Sqrt(Rational),
}

impl Dilation {
    /// `λ^n` when it is rational.
    fn power(&self, n: usize) -> Option<Rational> {
        match self {
            Dilation::Rational(l) => Some(num_traits::pow(l.clone(), n)),
            Dilation::Sqrt(q) => {
                if n % 2 == 0 {
                    Some(num_traits::pow(q.clone(), n / 2))
                } else {
                    rational::exact_sqrt(q).map(|s| num_traits::pow(s, n))
                }
            }
        }
    }

    fn power_f64(&self, n: usize) -> f64 {
        match self {
            Dilation::Rational(l) => rational::to_f64(l).powi(n as i32),
            Dilation::Sqrt(q) => rational::to_f64(q).sqrt().powi(n as i32),
        }
    }
}

/// `D_λ` applied to the `copies`-fold c-free convolution power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingSpec {
    copies: u64,
    dilation: Dilation,
}

impl ScalingSpec {
    pub fn new(copies: u64, dilation: Dilation) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidParameter("copies must be at least 1".into()));
        }
        match &dilation {
            Dilation::Sqrt(q) if q < &Rational::zero() => {
                return Err(Error::InvalidParameter("square root of a negative dilation".into()))
            }
            _ => {}
        }
        Ok(ScalingSpec { copies, dilation })
    }

    /// Central-limit normalization: `N` copies dilated by `1/√N`.
    pub fn central(copies: u64) -> Result<Self> {
        let q = Rational::new(1.into(), copies.max(1).into());
        Self::new(copies, Dilation::Sqrt(q))
    }

    /// `N` copies, no dilation.
    pub fn plain(copies: u64) -> Result<Self> {
        Self::new(copies, Dilation::Rational(Rational::one()))
    }

    pub fn copies(&self) -> u64 {
        self.copies
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }
}

/// Moments in double precision, used when an irrational dilation meets a
/// nonzero odd cumulant.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPair {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scaled {
    Exact(MeasurePair),
    Approximate(FloatPair),
}

impl Scaled {
    pub fn exact(self) -> Option<MeasurePair> {
        match self {
            Scaled::Exact(p) => Some(p),
            Scaled::Approximate(_) => None,
        }
    }

    /// `μ`-moments as floats, whichever representation is held.
    pub fn mu_f64(&self) -> Vec<f64> {
        match self {
            Scaled::Exact(p) => p.mu().as_slice().iter().map(rational::to_f64).collect(),
            Scaled::Approximate(f) => f.mu.clone(),
        }
    }

    pub fn nu_f64(&self) -> Vec<f64> {
        match self {
            Scaled::Exact(p) => p.nu().as_slice().iter().map(rational::to_f64).collect(),
            Scaled::Approximate(f) => f.nu.clone(),
        }
    }
}

/// `D_λ{(μ, ν) ⊞ … ⊞ (μ, ν)}` computed in one step: the `n`-th cumulants
/// are multiplied by `N λ^n`.
///
/// The result is exact whenever every nonzero cumulant meets a rational
/// `λ^n`, which covers `λ = 1/√N` on centered inputs. Otherwise the
/// cumulants are scaled in `f64` and the moments rebuilt in `f64`.
pub fn scaled_power(pair: &MeasurePair, spec: &ScalingSpec) -> Scaled {
    let r = free_cumulants_from_moments(pair.nu());
    let big_r = cfree_cumulants_from_moments(pair);
    let n_copies = Rational::from_integer(spec.copies.into());
    let order = pair.order();

    let needs_float = (1..=order).any(|n| {
        (!r.get(n).is_zero() || !big_r.get(n).is_zero()) && spec.dilation.power(n).is_none()
    });
    if !needs_float {
        let factor = |n: usize| &n_copies * spec.dilation.power(n).unwrap_or_else(Rational::zero);
        let out = pair_from_cumulants(&r.scale_by(factor), &big_r.scale_by(factor))
            .expect("orders agree by construction");
        return Scaled::Exact(out);
    }

    let n_f = spec.copies as f64;
    let scale = |c: &[Rational]| -> Vec<f64> {
        c.iter()
            .enumerate()
            .map(|(i, v)| rational::to_f64(v) * n_f * spec.dilation.power_f64(i + 1))
            .collect()
    };
    let r_f = scale(r.as_slice());
    let big_r_f = scale(big_r.as_slice());
    let nu = free_moment_kernel(&r_f);
    let mu = cfree_moment_kernel(&big_r_f, &nu);
    Scaled::Approximate(FloatPair { mu, nu })
}

/// The Poisson prelimit pair `((1 - α/N) δ_0 + (α/N) δ_1, (1 - β/N) δ_0 + (β/N) δ_1)`.
pub fn poisson_prelimit(alpha: &Rational, beta: &Rational, copies: u64, order: usize) -> Result<MeasurePair> {
    let n = Rational::from_integer(copies.into());
    let (p, q) = (alpha / &n, beta / &n);
    for w in [&p, &q] {
        if w < &Rational::zero() || w > &Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "Bernoulli weight {} outside [0, 1]",
                rational::format(w)
            )));
        }
    }
    MeasurePair::new(MomentSequence::bernoulli(&p, order), MomentSequence::bernoulli(&q, order))
}
