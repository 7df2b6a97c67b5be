//! Exact moment ↔ cumulant transforms: free cumulants of a single measure,
//! c-free cumulants of a pair `(μ, ν)`, and boolean cumulants as the special
//! case `ν = δ_0`.
//!
//! The recursions here express the `n`-th moment through the first block
//! containing `1`: its size `k` and the `k` gaps it leaves. For the c-free
//! case every gap but the last sits inside that block and is filled with
//! `ν`-moments; the last gap is outer and uses `μ`-moments.

use num_traits::{Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{classify, for_each_nc, MAX_NC};
use crate::rational::{self, Rational};

/// Largest order accepted by [`partition_sum_moment`].
pub const MAX_PARTITION_SUM: usize = 12;

/// Truncated moments `m_0, …, m_N` of a state, with `m_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMoments", into = "RawMoments")]
pub struct MomentSequence {
    moments: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawMoments {
    order: usize,
    #[serde(with = "rational::serde_vec")]
    moments: Vec<Rational>,
}

impl TryFrom<RawMoments> for MomentSequence {
    type Error = Error;

    fn try_from(raw: RawMoments) -> Result<Self> {
        if raw.moments.len() != raw.order + 1 {
            return Err(Error::Parse(format!(
                "order {} needs {} moments, found {}",
                raw.order,
                raw.order + 1,
                raw.moments.len()
            )));
        }
        MomentSequence::new(raw.moments)
    }
}

impl From<MomentSequence> for RawMoments {
    fn from(m: MomentSequence) -> Self {
        RawMoments { order: m.order(), moments: m.moments }
    }
}

impl MomentSequence {
    pub fn new(moments: Vec<Rational>) -> Result<Self> {
        if moments.len() < 2 {
            return Err(Error::Bound { value: moments.len().saturating_sub(1), min: 1, max: usize::MAX });
        }
        if !moments[0].is_one() {
            return Err(Error::NotNormalized);
        }
        Ok(MomentSequence { moments })
    }

    pub fn order(&self) -> usize {
        self.moments.len() - 1
    }

    /// `m_n`; panics past the truncation order.
    pub fn get(&self, n: usize) -> &Rational {
        &self.moments[n]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.moments
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch { left: order, right: self.order() });
        }
        MomentSequence::new(self.moments[..=order].to_vec())
    }

    /// Moments of the point mass at `c`.
    pub fn point_mass(c: &Rational, order: usize) -> Self {
        let mut m = vec![Rational::one()];
        for n in 1..=order {
            let next = &m[n - 1] * c;
            m.push(next);
        }
        MomentSequence { moments: m }
    }

    pub fn delta_zero(order: usize) -> Self {
        Self::point_mass(&Rational::zero(), order)
    }

    /// Moments of `Σ w_i δ_{x_i}`; weights must sum to one.
    pub fn from_atoms(atoms: &[(Rational, Rational)], order: usize) -> Result<Self> {
        let total: Rational = atoms.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!(
                "atom weights sum to {}, not 1",
                rational::format(&total)
            )));
        }
        let mut m = vec![Rational::zero(); order + 1];
        for (x, w) in atoms {
            let mut power = w.clone();
            for slot in m.iter_mut() {
                *slot += &power;
                power *= x;
            }
        }
        MomentSequence::new(m)
    }

    /// `(1 - p) δ_0 + p δ_1`: every moment past the zeroth equals `p`.
    pub fn bernoulli(p: &Rational, order: usize) -> Self {
        let mut m = vec![p.clone(); order + 1];
        m[0] = Rational::one();
        MomentSequence { moments: m }
    }

    /// `(δ_{-a} + δ_a) / 2`.
    pub fn symmetric_two_point(a: &Rational, order: usize) -> Self {
        let mut m = vec![Rational::zero(); order + 1];
        m[0] = Rational::one();
        let a2 = a * a;
        for n in (2..=order).step_by(2) {
            m[n] = &m[n - 2] * &a2;
        }
        MomentSequence { moments: m }
    }

    /// Semicircle law of the given variance: `m_{2n} = C_n · variance^n`.
    pub fn semicircle(variance: &Rational, order: usize) -> Self {
        let mut m = vec![Rational::zero(); order + 1];
        m[0] = Rational::one();
        let mut power = Rational::one();
        for n in 1..=order / 2 {
            power *= variance;
            let c = Rational::from_integer(crate::partitions::catalan(n).into());
            m[2 * n] = c * &power;
        }
        MomentSequence { moments: m }
    }
}

macro_rules! cumulant_sequence {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
        #[serde(try_from = "RawCumulants", into = "RawCumulants")]
        pub struct $name {
            values: Vec<Rational>,
        }

        impl $name {
            /// Builds from `κ_1, …, κ_N`.
            pub fn new(values: Vec<Rational>) -> Result<Self> {
                if values.is_empty() {
                    return Err(Error::Bound { value: 0, min: 1, max: usize::MAX });
                }
                Ok($name { values })
            }

            pub fn order(&self) -> usize {
                self.values.len()
            }

            /// 1-based accessor; panics outside `1..=order`.
            pub fn get(&self, n: usize) -> &Rational {
                &self.values[n - 1]
            }

            pub fn as_slice(&self) -> &[Rational] {
                &self.values
            }

            /// Termwise sum; orders must agree.
            pub fn add(&self, other: &Self) -> Result<Self> {
                check_orders(self.order(), other.order())?;
                Ok($name {
                    values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
                })
            }

            /// `κ_n ↦ factor_n · κ_n`.
            pub fn scale_by<F: Fn(usize) -> Rational>(&self, factor: F) -> Self {
                $name {
                    values: self
                        .values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| v * factor(i + 1))
                        .collect(),
                }
            }
        }

        impl TryFrom<RawCumulants> for $name {
            type Error = Error;

            fn try_from(raw: RawCumulants) -> Result<Self> {
                if raw.cumulants.len() != raw.order {
                    return Err(Error::Parse(format!(
                        "order {} needs {} cumulants, found {}",
                        raw.order,
                        raw.order,
                        raw.cumulants.len()
                    )));
                }
                $name::new(raw.cumulants)
            }
        }

        impl From<$name> for RawCumulants {
            fn from(c: $name) -> Self {
                RawCumulants { order: c.order(), cumulants: c.values }
            }
        }
    };
}

#[derive(Serialize, Deserialize)]
struct RawCumulants {
    order: usize,
    #[serde(with = "rational::serde_vec")]
    cumulants: Vec<Rational>,
}

cumulant_sequence!(
    /// Free (non-crossing) cumulants `r_1, …, r_N` of a single measure.
    FreeCumulantSequence
);
cumulant_sequence!(
    /// c-free cumulants `R_1, …, R_N` of a pair `(μ, ν)`. With `ν = δ_0`
    /// these are the boolean cumulants of `μ`.
    CFreeCumulantSequence
);

/// A pair of moment sequences `(μ, ν)` of equal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct MeasurePair {
    mu: MomentSequence,
    nu: MomentSequence,
}

#[derive(Deserialize)]
struct RawPair {
    mu: MomentSequence,
    nu: MomentSequence,
}

impl TryFrom<RawPair> for MeasurePair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        MeasurePair::new(raw.mu, raw.nu)
    }
}

impl MeasurePair {
    pub fn new(mu: MomentSequence, nu: MomentSequence) -> Result<Self> {
        check_orders(mu.order(), nu.order())?;
        Ok(MeasurePair { mu, nu })
    }

    /// `(ν, ν)`: the c-free structure collapses to the free one.
    pub fn diagonal(nu: MomentSequence) -> Self {
        MeasurePair { mu: nu.clone(), nu }
    }

    /// `(μ, δ_0)`: the boolean case.
    pub fn boolean(mu: MomentSequence) -> Self {
        let nu = MomentSequence::delta_zero(mu.order());
        MeasurePair { mu, nu }
    }

    pub fn mu(&self) -> &MomentSequence {
        &self.mu
    }

    pub fn nu(&self) -> &MomentSequence {
        &self.nu
    }

    pub fn order(&self) -> usize {
        self.mu.order()
    }

    pub fn into_parts(self) -> (MomentSequence, MomentSequence) {
        (self.mu, self.nu)
    }
}

pub(crate) fn check_orders(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::OrderMismatch { left, right });
    }
    Ok(())
}

/// `powers[j][d]` = coefficient of `z^d` in `(Σ m_i z^i)^j`, for
/// `j <= max_power`, `d <= max_degree`.
fn series_powers<T: Num + Clone>(m: &[T], max_power: usize, max_degree: usize) -> Vec<Vec<T>> {
    let mut powers = Vec::with_capacity(max_power + 1);
    let mut unit = vec![T::zero(); max_degree + 1];
    unit[0] = T::one();
    powers.push(unit);
    for j in 1..=max_power {
        let prev = &powers[j - 1];
        let next: Vec<T> = (0..=max_degree)
            .map(|d| {
                (0..=d.min(m.len() - 1))
                    .filter(|&i| !m[i].is_zero() && !prev[d - i].is_zero())
                    .fold(T::zero(), |acc, i| acc + m[i].clone() * prev[d - i].clone())
            })
            .collect();
        powers.push(next);
    }
    powers
}

/// Moments `m_0..=m_N` from free cumulants `r_1..=r_N`.
pub(crate) fn free_moment_kernel<T: Num + Clone>(r: &[T]) -> Vec<T> {
    let order = r.len();
    let mut m = vec![T::one()];
    // pw[j][d]: coefficient of z^d in M(z)^j, over the degrees known so far.
    let mut pw: Vec<Vec<T>> = vec![vec![T::one()]; order + 1];
    for n in 1..=order {
        let mut mn = T::zero();
        for k in 1..=n {
            let rk = &r[k - 1];
            if !rk.is_zero() {
                mn = mn + rk.clone() * pw[k][n - k].clone();
            }
        }
        m.push(mn);
        pw[0].push(T::zero());
        for j in 1..=order {
            let v = (0..=n)
                .filter(|&d| !m[d].is_zero())
                .fold(T::zero(), |acc, d| acc + m[d].clone() * pw[j - 1][n - d].clone());
            pw[j].push(v);
        }
    }
    m
}

/// `μ`-moments `m_0..=m_N` from c-free cumulants `R_1..=R_N` and `ν`-moments.
pub(crate) fn cfree_moment_kernel<T: Num + Clone>(big_r: &[T], nu: &[T]) -> Vec<T> {
    let order = big_r.len();
    let nu_pw = series_powers(nu, order, order);
    let mut m = vec![T::one()];
    for n in 1..=order {
        let mut mn = T::zero();
        for k in 1..=n {
            let rk = &big_r[k - 1];
            if !rk.is_zero() {
                mn = mn + rk.clone() * cfree_gap_sum(&nu_pw, &m, n, k);
            }
        }
        m.push(mn);
    }
    m
}

/// Moments from free cumulants via
/// `m_n = Σ_k r_k Σ_{l_1+…+l_k = n-k} m_{l_1} ⋯ m_{l_k}`.
pub fn moments_from_free_cumulants(r: &FreeCumulantSequence) -> MomentSequence {
    MomentSequence { moments: free_moment_kernel(r.as_slice()) }
}

/// Inverts [`moments_from_free_cumulants`] one order at a time.
pub fn free_cumulants_from_moments(m: &MomentSequence) -> FreeCumulantSequence {
    let order = m.order();
    let pw = series_powers(m.as_slice(), order, order);
    let mut r: Vec<Rational> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut rn = m.get(n).clone();
        for k in 1..n {
            if !r[k - 1].is_zero() {
                rn -= &r[k - 1] * &pw[k][n - k];
            }
        }
        r.push(rn);
    }
    FreeCumulantSequence { values: r }
}

// Σ_{l_1+…+l_k = n-k} m_{l_1}(ν) ⋯ m_{l_{k-1}}(ν) m_{l_k}(μ)
fn cfree_gap_sum<T: Num + Clone>(nu_pw: &[Vec<T>], mu: &[T], n: usize, k: usize) -> T {
    let budget = n - k;
    (0..=budget)
        .filter(|&d| !nu_pw[k - 1][d].is_zero() && !mu[budget - d].is_zero())
        .fold(T::zero(), |acc, d| acc + nu_pw[k - 1][d].clone() * mu[budget - d].clone())
}

/// `μ`-moments from c-free cumulants and the `ν`-moments.
pub fn moments_from_cfree_cumulants(
    big_r: &CFreeCumulantSequence,
    nu: &MomentSequence,
) -> Result<MomentSequence> {
    check_orders(big_r.order(), nu.order())?;
    Ok(MomentSequence { moments: cfree_moment_kernel(big_r.as_slice(), nu.as_slice()) })
}

/// c-free cumulants `R_n(μ, ν)`.
pub fn cfree_cumulants_from_moments(pair: &MeasurePair) -> CFreeCumulantSequence {
    let order = pair.order();
    let mu = pair.mu.as_slice();
    let nu_pw = series_powers(pair.nu.as_slice(), order, order);
    let mut big_r: Vec<Rational> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut rn = mu[n].clone();
        for k in 1..n {
            if !big_r[k - 1].is_zero() {
                rn -= &big_r[k - 1] * cfree_gap_sum(&nu_pw, mu, n, k);
            }
        }
        big_r.push(rn);
    }
    CFreeCumulantSequence { values: big_r }
}

/// Boolean cumulants: c-free cumulants of `(μ, δ_0)`.
pub fn boolean_cumulants_from_moments(m: &MomentSequence) -> CFreeCumulantSequence {
    cfree_cumulants_from_moments(&MeasurePair::boolean(m.clone()))
}

pub fn moments_from_boolean_cumulants(b: &CFreeCumulantSequence) -> MomentSequence {
    moments_from_cfree_cumulants(b, &MomentSequence::delta_zero(b.order()))
        .expect("orders agree by construction")
}

/// The `n`-th `μ`-moment as an explicit sum over NC(n): inner blocks weigh
/// `r_{|V|}`, outer blocks `R_{|V|}`. Exponential; used as an oracle.
pub fn partition_sum_moment(
    r: &FreeCumulantSequence,
    big_r: &CFreeCumulantSequence,
    n: usize,
) -> Result<Rational> {
    if n == 0 || n > MAX_PARTITION_SUM.min(MAX_NC) {
        return Err(Error::Bound { value: n, min: 1, max: MAX_PARTITION_SUM });
    }
    if r.order() < n || big_r.order() < n {
        return Err(Error::OrderMismatch { left: n, right: r.order().min(big_r.order()) });
    }
    let mut total = Rational::zero();
    for_each_nc(n, |p| {
        let inner = classify(p).inner;
        let mut term = Rational::one();
        for (block, is_inner) in p.blocks().iter().zip(inner) {
            let c = if is_inner { r.get(block.len()) } else { big_r.get(block.len()) };
            if c.is_zero() {
                return;
            }
            term *= c;
        }
        total += term;
    })?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: i64) -> Rational {
        int(v)
    }

    fn ms(v: &[Rational]) -> MomentSequence {
        MomentSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn semicircle_from_second_cumulant() {
        let beta2 = ratio(3, 2);
        let r = FreeCumulantSequence::new(vec![q(0), beta2.clone(), q(0)]).unwrap();
        assert_eq!(moments_from_free_cumulants(&r).as_slice(), &[q(1), q(0), beta2, q(0)]);
    }

    #[test]
    fn zero_cumulants_give_delta_zero() {
        let r = FreeCumulantSequence::new(vec![q(0); 6]).unwrap();
        assert_eq!(moments_from_free_cumulants(&r), MomentSequence::delta_zero(6));
    }

    #[test]
    fn third_moment_and_cumulant_expressions() {
        let (r1, r2, r3) = (ratio(2, 3), ratio(-5, 7), ratio(11, 4));
        let r = FreeCumulantSequence::new(vec![r1.clone(), r2.clone(), r3.clone()]).unwrap();
        let m = moments_from_free_cumulants(&r);
        let expected = &r3 + q(3) * &r2 * &r1 + &r1 * &r1 * &r1;
        assert_eq!(m.get(3), &expected);

        let m = ms(&[q(1), ratio(1, 2), ratio(-3, 5), ratio(7, 9)]);
        let r = free_cumulants_from_moments(&m);
        let (m1, m2, m3) = (m.get(1), m.get(2), m.get(3));
        assert_eq!(r.get(3), &(m3 - q(3) * m2 * m1 + q(2) * m1 * m1 * m1));
    }

    #[test]
    fn semicircle_and_point_mass_cumulants() {
        let m = ms(&[q(1), q(0), q(1), q(0), q(2)]);
        assert_eq!(free_cumulants_from_moments(&m).as_slice(), &[q(0), q(1), q(0), q(0)]);
        let c = ratio(-4, 3);
        let r = free_cumulants_from_moments(&MomentSequence::point_mass(&c, 7));
        assert_eq!(r.get(1), &c);
        assert!(r.as_slice()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn cfree_reduces_to_free_on_diagonal() {
        let nu = ms(&[q(1), ratio(1, 3), ratio(5, 2), q(-1), ratio(9, 7)]);
        let r = free_cumulants_from_moments(&nu);
        let as_cfree = CFreeCumulantSequence::new(r.as_slice().to_vec()).unwrap();
        assert_eq!(moments_from_cfree_cumulants(&as_cfree, &nu).unwrap(), nu);
        let big_r = cfree_cumulants_from_moments(&MeasurePair::diagonal(nu.clone()));
        assert_eq!(big_r.as_slice(), r.as_slice());
    }

    #[test]
    fn cfree_gaussian_fourth_moment() {
        let (alpha2, beta2) = (ratio(7, 3), ratio(2, 5));
        let big_r = CFreeCumulantSequence::new(vec![q(0), alpha2.clone(), q(0), q(0)]).unwrap();
        let nu = MomentSequence::semicircle(&beta2, 4);
        let mu = moments_from_cfree_cumulants(&big_r, &nu).unwrap();
        assert_eq!(mu.get(4), &(&alpha2 * &alpha2 + &alpha2 * &beta2));
        assert_eq!(mu.get(2), &alpha2);
    }

    #[test]
    fn cfree_third_order_expressions() {
        let nu = ms(&[q(1), ratio(2, 7), ratio(3, 5), ratio(-1, 4)]);
        let r1 = free_cumulants_from_moments(&nu).get(1).clone();
        let big_r = CFreeCumulantSequence::new(vec![ratio(1, 3), ratio(-2, 9), ratio(5, 6)]).unwrap();
        let mu = moments_from_cfree_cumulants(&big_r, &nu).unwrap();
        let (c1, c2, c3) = (big_r.get(1), big_r.get(2), big_r.get(3));
        assert_eq!(mu.get(3), &(c3 + q(2) * c2 * c1 + c1 * c1 * c1 + c2 * &r1));

        let pair = MeasurePair::new(mu.clone(), nu.clone()).unwrap();
        let back = cfree_cumulants_from_moments(&pair);
        let (m1, m2, m3) = (mu.get(1), mu.get(2), mu.get(3));
        let n1 = nu.get(1);
        let expected = m3 - q(2) * m2 * m1 - m2 * n1 + m1 * m1 * m1 + m1 * m1 * n1;
        assert_eq!(back.get(3), &expected);
        assert_eq!(back, big_r);
    }

    #[test]
    fn boolean_low_orders() {
        let m = ms(&[q(1), ratio(3, 4), ratio(5, 3), q(2)]);
        let b = boolean_cumulants_from_moments(&m);
        assert_eq!(b.get(1), m.get(1));
        assert_eq!(b.get(2), &(m.get(2) - m.get(1) * m.get(1)));
        assert_eq!(moments_from_boolean_cumulants(&b), m);
    }

    #[test]
    fn partition_sum_low_orders() {
        let r = FreeCumulantSequence::new(vec![ratio(1, 2), ratio(2, 3), ratio(3, 4)]).unwrap();
        let big_r = CFreeCumulantSequence::new(vec![ratio(-1, 5), ratio(7, 3), ratio(1, 9)]).unwrap();
        let (c1, c2, c3) = (big_r.get(1), big_r.get(2), big_r.get(3));
        assert_eq!(partition_sum_moment(&r, &big_r, 1).unwrap(), c1.clone());
        assert_eq!(partition_sum_moment(&r, &big_r, 2).unwrap(), c2 + c1 * c1);
        let expected = c3 + q(2) * c2 * c1 + c1 * c1 * c1 + c2 * r.get(1);
        assert_eq!(partition_sum_moment(&r, &big_r, 3).unwrap(), expected);
        assert!(partition_sum_moment(&r, &big_r, 4).is_err());
        assert!(partition_sum_moment(&r, &big_r, 0).is_err());
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let big_r = CFreeCumulantSequence::new(vec![q(1), q(2)]).unwrap();
        let nu = MomentSequence::delta_zero(3);
        assert_eq!(
            moments_from_cfree_cumulants(&big_r, &nu),
            Err(Error::OrderMismatch { left: 2, right: 3 })
        );
        assert!(MeasurePair::new(MomentSequence::delta_zero(2), nu).is_err());
    }

    #[test]
    fn normalization_is_enforced() {
        assert_eq!(MomentSequence::new(vec![q(2), q(1)]), Err(Error::NotNormalized));
        assert!(MomentSequence::new(vec![q(1)]).is_err());
    }

    #[test]
    fn json_shape() {
        let m = ms(&[q(1), ratio(1, 2), q(3)]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"order":2,"moments":["1","1/2","3"]}"#);
        let back: MomentSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let r = FreeCumulantSequence::new(vec![ratio(-1, 3)]).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"order":1,"cumulants":["-1/3"]}"#);
        assert!(serde_json::from_str::<MomentSequence>(r#"{"order":3,"moments":["1","2"]}"#).is_err());
        assert!(serde_json::from_str::<MomentSequence>(r#"{"order":1,"moments":["2","2"]}"#).is_err());
    }

    #[test]
    fn constructors() {
        let two_point = MomentSequence::from_atoms(&[(q(-1), ratio(1, 2)), (q(1), ratio(1, 2))], 4).unwrap();
        assert_eq!(two_point, MomentSequence::symmetric_two_point(&q(1), 4));
        assert!(MomentSequence::from_atoms(&[(q(0), ratio(1, 2))], 2).is_err());
        let b = MomentSequence::from_atoms(&[(q(0), ratio(2, 3)), (q(1), ratio(1, 3))], 3).unwrap();
        assert_eq!(b, MomentSequence::bernoulli(&ratio(1, 3), 3));
        assert_eq!(MomentSequence::semicircle(&q(1), 6).as_slice(), &[1, 0, 1, 0, 2, 0, 5].map(q));
    }
}
