//! The c-free Gaussian and Poisson limit laws: exact moments from partition
//! counts, closed-form measures, Cauchy transforms and orthogonal
//! polynomials.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cumulants::{MeasurePair, MomentSequence};
use crate::error::{Error, Result};
use crate::partitions::{catalan, inner_pair_table, NcCounts};
use crate::quad;
use crate::rational::{self, Rational};

fn big(n: BigUint) -> Rational {
    Rational::from_integer(n.into())
}

/// `μ`-side moment of the c-free Gaussian law in terms of `α²`, `β²`:
/// `Σ_k a^{n/2}_k α^{n-2k} β^{2k}` for even `n`, zero for odd `n`.
pub fn gaussian_limit_moment(alpha_sq: &Rational, beta_sq: &Rational, n: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    if n % 2 == 1 {
        return Rational::zero();
    }
    let half = n / 2;
    inner_pair_table(half)
        .into_iter()
        .enumerate()
        .map(|(k, a)| {
            big(a) * num_traits::pow(alpha_sq.clone(), half - k) * num_traits::pow(beta_sq.clone(), k)
        })
        .sum()
}

/// `ν`-side moment: the semicircle with variance `β²`.
pub fn semicircle_limit_moment(beta_sq: &Rational, n: usize) -> Rational {
    if n % 2 == 1 {
        return Rational::zero();
    }
    big(catalan(n / 2)) * num_traits::pow(beta_sq.clone(), n / 2)
}

pub fn gaussian_limit_pair(alpha_sq: &Rational, beta_sq: &Rational, order: usize) -> MeasurePair {
    let mu = (0..=order).map(|n| gaussian_limit_moment(alpha_sq, beta_sq, n)).collect();
    let nu = (0..=order).map(|n| semicircle_limit_moment(beta_sq, n)).collect();
    MeasurePair::new(
        MomentSequence::new(mu).expect("m_0 = 1"),
        MomentSequence::new(nu).expect("m_0 = 1"),
    )
    .expect("equal orders")
}

/// Both moment sequences of the c-free Poisson law up to `order`:
/// `m_n(μ) = Σ s^n_{k,l} α^k β^l`, `m_n(ν) = Σ t^n_k β^k`.
pub fn poisson_limit_pair(alpha: &Rational, beta: &Rational, order: usize) -> Result<MeasurePair> {
    if order == 0 {
        return Err(Error::Bound { value: 0, min: 1, max: usize::MAX });
    }
    let counts = NcCounts::new(order);
    let mut mu = vec![Rational::one()];
    let mut nu = vec![Rational::one()];
    for n in 1..=order {
        let mut m = Rational::zero();
        for k in 1..=n {
            for l in 0..n {
                let s = counts.s(n, k, l);
                if !s.is_zero() {
                    m += big(s) * num_traits::pow(alpha.clone(), k) * num_traits::pow(beta.clone(), l);
                }
            }
        }
        mu.push(m);
        nu.push((1..=n).map(|k| big(counts.t(n, k)) * num_traits::pow(beta.clone(), k)).sum());
    }
    MeasurePair::new(MomentSequence::new(mu)?, MomentSequence::new(nu)?)
}

/// Single `μ`-side moment of the c-free Poisson law.
pub fn poisson_limit_moment(alpha: &Rational, beta: &Rational, n: usize) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::one());
    }
    Ok(poisson_limit_pair(alpha, beta, n)?.mu().get(n).clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Continuous {
    Gaussian { alpha_sq: f64, beta_sq: f64 },
    Poisson { alpha: f64, beta: f64 },
}

/// Atoms plus an absolutely continuous part on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormMeasure {
    family: Family,
    alpha: f64,
    beta: f64,
    atoms: Vec<Atom>,
    continuous: Option<Continuous>,
}

/// Weights this small come from rounding at a region boundary.
const WEIGHT_FLOOR: f64 = 1e-14;

fn check_param(name: &str, v: f64, allow_zero: bool) -> Result<()> {
    let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

/// The c-free Gaussian law with parameters `α, β`.
pub fn gaussian_limit_measure(alpha: f64, beta: f64) -> Result<ClosedFormMeasure> {
    check_param("alpha", alpha, false)?;
    check_param("beta", beta, true)?;
    let mut m = gaussian_limit_measure_sq(alpha * alpha, beta * beta)?;
    m.alpha = alpha;
    m.beta = beta;
    Ok(m)
}

/// The c-free Gaussian law from `α²` and `β²`, which keeps boundary cases
/// such as `α² = 2β²` exact.
pub fn gaussian_limit_measure_sq(alpha_sq: f64, beta_sq: f64) -> Result<ClosedFormMeasure> {
    check_param("alpha^2", alpha_sq, false)?;
    check_param("beta^2", beta_sq, true)?;
    let (alpha, beta) = (alpha_sq.sqrt(), beta_sq.sqrt());
    if beta_sq == 0.0 {
        return Ok(ClosedFormMeasure {
            family: Family::Gaussian,
            alpha,
            beta,
            atoms: vec![Atom { location: -alpha, weight: 0.5 }, Atom { location: alpha, weight: 0.5 }],
            continuous: None,
        });
    }
    let mut atoms = Vec::new();
    if 2.0 * beta_sq < alpha_sq {
        // Residue of the Cauchy transform at ±α²/√(α² - β²).
        let c = 0.5 * (alpha_sq - 2.0 * beta_sq) / (alpha_sq - beta_sq);
        let x = alpha_sq / (alpha_sq - beta_sq).sqrt();
        if c > WEIGHT_FLOOR {
            atoms = vec![Atom { location: -x, weight: c }, Atom { location: x, weight: c }];
        }
    }
    Ok(ClosedFormMeasure {
        family: Family::Gaussian,
        alpha,
        beta,
        atoms,
        continuous: Some(Continuous::Gaussian { alpha_sq, beta_sq }),
    })
}

/// Location of the movable atom of the Poisson law, `α + α/(α - β)`.
pub fn poisson_z0(alpha: f64, beta: f64) -> Option<f64> {
    (alpha != beta).then(|| alpha + alpha / (alpha - beta))
}

/// The c-free Poisson law with rates `α, β`.
pub fn poisson_limit_measure(alpha: f64, beta: f64) -> Result<ClosedFormMeasure> {
    check_param("alpha", alpha, false)?;
    check_param("beta", beta, false)?;
    let mut atoms = Vec::new();
    if beta < 1.0 {
        let a = (1.0 - beta) / (1.0 + alpha - beta);
        if a > WEIGHT_FLOOR {
            atoms.push(Atom { location: 0.0, weight: a });
        }
    }
    let sb = beta.sqrt();
    if let Some(z0) = poisson_z0(alpha, beta) {
        if alpha <= beta - sb || alpha >= beta + sb {
            let b = (beta * z0 - alpha * alpha) / (z0 * (beta - alpha));
            if b > WEIGHT_FLOOR {
                atoms.push(Atom { location: z0, weight: b });
            }
        }
    }
    atoms.sort_by(|x, y| x.location.total_cmp(&y.location));
    Ok(ClosedFormMeasure {
        family: Family::Poisson,
        alpha,
        beta,
        atoms,
        continuous: Some(Continuous::Poisson { alpha, beta }),
    })
}

impl Continuous {
    fn support(&self) -> (f64, f64) {
        match *self {
            Continuous::Gaussian { beta_sq, .. } => {
                let r = 2.0 * beta_sq.sqrt();
                (-r, r)
            }
            Continuous::Poisson { beta, .. } => {
                let sb = beta.sqrt();
                ((1.0 - sb).powi(2), (1.0 + sb).powi(2))
            }
        }
    }

    fn density(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(t > lo && t < hi) {
            return 0.0;
        }
        match *self {
            Continuous::Gaussian { alpha_sq, beta_sq } => {
                let root = (4.0 * beta_sq - t * t).sqrt();
                alpha_sq * root / (2.0 * PI * (alpha_sq * alpha_sq - (alpha_sq - beta_sq) * t * t))
            }
            Continuous::Poisson { alpha, beta } => {
                let u = t - 1.0 - beta;
                let root = (4.0 * beta - u * u).max(0.0).sqrt();
                alpha * root / (PI * 2.0 * t * (t * (beta - alpha) + alpha * (1.0 - beta + alpha)))
            }
        }
    }

    /// Point and weight for the angle `θ ∈ [0, π]`, with
    /// `t = lo + (hi - lo) sin²(θ/2)`, so that `∫ g(t) density(t) dt =
    /// ∫_0^π g(t(θ)) w(θ) dθ` and `w` stays bounded at both ends.
    fn angular(&self, theta: f64) -> (f64, f64) {
        let (sh, ch) = (0.5 * theta).sin_cos();
        let sin_sq = 4.0 * sh * sh * ch * ch;
        match *self {
            Continuous::Gaussian { alpha_sq, beta_sq } => {
                let t = 2.0 * beta_sq.sqrt() * (sh * sh - ch * ch);
                let d = alpha_sq - 2.0 * beta_sq;
                let den = d * d + 4.0 * beta_sq * (alpha_sq - beta_sq) * sin_sq;
                let w = if den == 0.0 {
                    // α² = 2β² at θ ∈ {0, π}: the ratio tends to a constant.
                    alpha_sq / (2.0 * PI * (alpha_sq - beta_sq))
                } else {
                    alpha_sq * 4.0 * beta_sq * sin_sq / (2.0 * PI * den)
                };
                (t, w)
            }
            Continuous::Poisson { alpha, beta } => {
                let (lo, _) = self.support();
                let r = 2.0 * beta.sqrt();
                let t = lo + 2.0 * r * sh * sh;
                // sin²θ / t, finite as t → 0 when the support starts at 0.
                let ratio = if lo == 0.0 { 2.0 * ch * ch / r } else { sin_sq / t };
                let q = t * (beta - alpha) + alpha * (1.0 - beta + alpha);
                (t, alpha * r * r * ratio / (2.0 * PI * q))
            }
        }
    }
}

/// Absolute error target for the continuous part.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Largest moment order accepted by [`quadrature_moment`].
pub const MAX_QUADRATURE_MOMENT: usize = 12;

impl ClosedFormMeasure {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Closed support interval of the continuous part, if there is one.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.continuous.map(|c| c.support())
    }

    /// Density of the continuous part; zero off the open support interval.
    pub fn density(&self, t: f64) -> f64 {
        self.continuous.map_or(0.0, |c| c.density(t))
    }

    /// `∫ g dμ` over atoms and density.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight * g(a.location)).sum();
        let cont = match self.continuous {
            None => 0.0,
            Some(c) => quad::integrate(
                |theta| {
                    let (t, w) = c.angular(theta);
                    g(t) * w
                },
                0.0,
                PI,
                QUADRATURE_TOL,
            )?,
        };
        Ok(atoms + cont)
    }

    pub fn mass(&self) -> Result<f64> {
        self.integrate(|_| 1.0)
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// `∫ t^n dμ(t)` by quadrature, `n ≤ 12`.
pub fn quadrature_moment(m: &ClosedFormMeasure, n: usize) -> Result<f64> {
    if n > MAX_QUADRATURE_MOMENT {
        return Err(Error::Bound { value: n, min: 0, max: MAX_QUADRATURE_MOMENT });
    }
    m.integrate(|t| t.powi(n as i32))
}

fn require_upper(z: Complex64) -> Result<()> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("Cauchy transform needs Im z > 0, got {z}")))
    }
}

/// `√(z - a) √(z - b)` with principal roots: analytic off `[a, b]` and
/// asymptotic to `z` at infinity.
fn paired_root(z: Complex64, a: f64, b: f64) -> Complex64 {
    (z - a).sqrt() * (z - b).sqrt()
}

/// Cauchy transform of the c-free Gaussian law,
/// `(z(α²/2 - β²) + (α²/2)√(z² - 4β²)) / (z²(α² - β²) - α⁴)`.
///
/// Evaluated as `(z + w) / (z(z + w) - 2α²)` with `w = √(z² - 4β²)`, the
/// same function without the cancellation at large `|z|`.
pub fn gaussian_cauchy_g(alpha: f64, beta: f64, z: Complex64) -> Result<Complex64> {
    require_upper(z)?;
    let w = paired_root(z, -2.0 * beta, 2.0 * beta);
    Ok((z + w) / (z * (z + w) - 2.0 * alpha * alpha))
}

/// Cauchy transform of the c-free Poisson law,
/// `(z(2β - α) + α(1 - β) - α w) / (2z[z(β - α) + α(1 - β + α)])` with
/// `w = √((z - 1 - β)² - 4β)`.
///
/// Evaluated as `2β / (z(2β - α) + α(1 - β) + α w)`.
pub fn poisson_cauchy_g(alpha: f64, beta: f64, z: Complex64) -> Result<Complex64> {
    require_upper(z)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
    }
    let sb = beta.sqrt();
    let w = paired_root(z, (1.0 - sb).powi(2), (1.0 + sb).powi(2));
    Ok(2.0 * beta / (z * (2.0 * beta - alpha) + alpha * (1.0 - beta) + alpha * w))
}

/// Monic orthogonal polynomials `p_0..p_N` of the c-free Gaussian law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoPolySeq {
    rows: Vec<Vec<Rational>>,
}

impl OrthoPolySeq {
    pub fn degree_cap(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficients of `p_n`, constant term first.
    pub fn coeffs(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.rows[n].iter().rev().fold(0.0, |acc, c| acc * x + rational::to_f64(c))
    }
}

/// `p_0 = 1`, `p_1 = x`, `p_2 = x² - α²`, `p_{n+1} = x p_n - β² p_{n-1}`.
pub fn ortho_polys(alpha_sq: &Rational, beta_sq: &Rational, n_max: usize) -> Result<OrthoPolySeq> {
    if n_max < 2 {
        return Err(Error::Bound { value: n_max, min: 2, max: usize::MAX });
    }
    let zero = Rational::zero;
    let mut rows = vec![vec![Rational::one()], vec![zero(), Rational::one()]];
    rows.push(vec![-alpha_sq.clone(), zero(), Rational::one()]);
    for n in 2..n_max {
        let mut next = vec![zero(); n + 2];
        for (k, c) in rows[n].iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in rows[n - 1].iter().enumerate() {
            next[k] -= beta_sq * c;
        }
        rows.push(next);
    }
    Ok(OrthoPolySeq { rows })
}

/// Result of comparing `ν_{α, γα²}` with the Cauchy density on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyTailReport {
    pub gamma: f64,
    pub alphas: Vec<f64>,
    pub distances: Vec<f64>,
    pub decreasing: bool,
}

pub const CAUCHY_GRID_HALF_WIDTH: f64 = 10.0;
pub const CAUCHY_GRID_POINTS: usize = 2001;

pub fn cauchy_density(gamma: f64, t: f64) -> f64 {
    gamma / (PI * (1.0 + gamma * gamma * t * t))
}

/// Sup-distance on `[-10, 10]` between the Gaussian-law density with
/// `β = γα²` and the Cauchy density, for each `α`.
pub fn cauchy_tail_limit_check(gamma: f64, alphas: &[f64]) -> Result<CauchyTailReport> {
    check_param("gamma", gamma, false)?;
    if alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("alphas must be strictly ascending".into()));
    }
    let step = 2.0 * CAUCHY_GRID_HALF_WIDTH / (CAUCHY_GRID_POINTS - 1) as f64;
    let mut distances = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let m = gaussian_limit_measure(alpha, gamma * alpha * alpha)?;
        let d = (0..CAUCHY_GRID_POINTS)
            .map(|i| {
                let t = -CAUCHY_GRID_HALF_WIDTH + i as f64 * step;
                (m.density(t) - cauchy_density(gamma, t)).abs()
            })
            .fold(0.0, f64::max);
        distances.push(d);
    }
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    Ok(CauchyTailReport { gamma, alphas: alphas.to_vec(), distances, decreasing })
}
