//! Validated run parameters built from raw flags.

use cfree_core::cumulants::{MeasurePair, MomentSequence};
use cfree_core::limit_laws::{gaussian_limit_measure_sq, poisson_limit_measure, ClosedFormMeasure};
use cfree_core::{rational, Rational};
use num_traits::One;

use crate::args::{FamilyArg, LawParams};
use crate::error::{usage, CliResult};

/// Largest grid accepted by `density`.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Comma-separated rationals (`1/2`, `-3`, `0.25`).
pub fn parse_list(s: &str) -> CliResult<Vec<Rational>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(usage("empty list"));
    }
    s.split(',').map(|v| rational::parse(v).map_err(Into::into)).collect()
}

/// `m_1, …, m_N` with `m_0 = 1` prepended, optionally truncated.
pub fn moments(s: &str, order: Option<usize>) -> CliResult<MomentSequence> {
    let mut m = vec![Rational::one()];
    m.extend(parse_list(s)?);
    let seq = MomentSequence::new(m)?;
    match order {
        Some(n) if n > seq.order() => Err(usage(format!("--order {n} exceeds the {} values given", seq.order()))),
        Some(n) => Ok(seq.truncate(n)?),
        None => Ok(seq),
    }
}

/// A pair from two lists; the orders must agree (after optional truncation).
pub fn pair(mu: &str, nu: &str, order: Option<usize>) -> CliResult<MeasurePair> {
    Ok(MeasurePair::new(moments(mu, order)?, moments(nu, order)?)?)
}

pub fn parse_rational(name: &str, s: &str) -> CliResult<Rational> {
    rational::parse(s).map_err(|e| usage(format!("--{name}: {e}")))
}

/// A real number, given as a decimal or as `p/q`.
pub fn parse_real(name: &str, s: &str) -> CliResult<f64> {
    let v = match s.trim().parse::<f64>() {
        Ok(v) => v,
        Err(_) => rational::to_f64(&parse_rational(name, s)?),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite")))
    }
}

/// Evenly spaced grid `lo:hi:points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, points] = parts.as_slice() else {
            return Err(usage(format!("grid {s:?} is not lo:hi:points")));
        };
        let lo = parse_real("grid", lo)?;
        let hi = parse_real("grid", hi)?;
        let points: usize = points.trim().parse().map_err(|_| usage(format!("grid point count {points:?}")))?;
        if !(lo < hi) {
            return Err(usage("grid needs lo < hi"));
        }
        if !(2..=MAX_GRID_POINTS).contains(&points) {
            return Err(usage(format!("grid points must lie in 2..={MAX_GRID_POINTS}")));
        }
        Ok(GridSpec { lo, hi, points })
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let last = (self.points - 1) as f64;
        (0..self.points).map(move |i| {
            if i + 1 == self.points {
                self.hi
            } else {
                self.lo + (self.hi - self.lo) * (i as f64 / last)
            }
        })
    }
}

/// Law parameters with Gaussian inputs held as squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawSpec {
    Gaussian { alpha_sq: f64, beta_sq: f64 },
    Poisson { alpha: f64, beta: f64 },
}

impl LawSpec {
    pub fn from_args(p: &LawParams) -> CliResult<Self> {
        match p.family {
            FamilyArg::Gaussian => {
                let square = |plain: &Option<String>, sq: &Option<String>, name: &str| -> CliResult<f64> {
                    match (plain, sq) {
                        (Some(v), None) => {
                            let x = parse_real(name, v)?;
                            Ok(x * x)
                        }
                        (None, Some(v)) => parse_real(&format!("{name}-sq"), v),
                        _ => Err(usage(format!("give exactly one of --{name} and --{name}-sq"))),
                    }
                };
                Ok(LawSpec::Gaussian {
                    alpha_sq: square(&p.alpha, &p.alpha_sq, "alpha")?,
                    beta_sq: square(&p.beta, &p.beta_sq, "beta")?,
                })
            }
            FamilyArg::Poisson => {
                if p.alpha_sq.is_some() || p.beta_sq.is_some() {
                    return Err(usage("--alpha-sq/--beta-sq apply to the gaussian family only"));
                }
                let get = |v: &Option<String>, name: &str| -> CliResult<f64> {
                    parse_real(name, v.as_deref().ok_or_else(|| usage(format!("--{name} is required")))?)
                };
                Ok(LawSpec::Poisson { alpha: get(&p.alpha, "alpha")?, beta: get(&p.beta, "beta")? })
            }
        }
    }

    pub fn measure(&self) -> CliResult<ClosedFormMeasure> {
        Ok(match *self {
            LawSpec::Gaussian { alpha_sq, beta_sq } => gaussian_limit_measure_sq(alpha_sq, beta_sq)?,
            LawSpec::Poisson { alpha, beta } => poisson_limit_measure(alpha, beta)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_moments() {
        let m = moments("1/2, -3,0.25", None).unwrap();
        assert_eq!(m.order(), 3);
        assert_eq!(m.get(3), &rational::ratio(1, 4));
        assert_eq!(moments("1,2,3", Some(2)).unwrap().order(), 2);
        assert!(moments("1,2", Some(3)).is_err());
        assert!(parse_list("1,,2").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = GridSpec::parse("-2.5:2.5:401").unwrap();
        let t: Vec<f64> = g.nodes().collect();
        assert_eq!(t.len(), 401);
        assert_eq!((t[0], t[200], t[400]), (-2.5, 0.0, 2.5));
        assert!(GridSpec::parse("1:0:10").is_err());
        assert!(GridSpec::parse("0:1:1").is_err());
        assert!(GridSpec::parse("0:1:1000001").is_err());
        assert!(GridSpec::parse("0:1").is_err());
        assert!(GridSpec::parse("-1/2:1/2:3").is_ok());
    }

    #[test]
    fn reals_accept_fractions() {
        assert_eq!(parse_real("beta", "1/4").unwrap(), 0.25);
        assert!(parse_real("beta", "inf").is_err());
        assert!(parse_real("beta", "x").is_err());
    }
}
