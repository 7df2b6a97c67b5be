//! One function per subcommand. Each returns the rendered main output and,
//! for `density`, the atom sidecar.

use std::path::{Path, PathBuf};

use cfree_core::convolution::{
    boolean_convolve, cfree_convolve, free_convolve, poisson_prelimit, scaled_power, Scaled, ScalingSpec,
};
use cfree_core::cumulants::{
    boolean_cumulants_from_moments, cfree_cumulants_from_moments, free_cumulants_from_moments,
    moments_from_boolean_cumulants, moments_from_cfree_cumulants, moments_from_free_cumulants,
    CFreeCumulantSequence, FreeCumulantSequence, MeasurePair,
};
use cfree_core::limit_laws::{gaussian_limit_pair, poisson_limit_pair};
use cfree_core::partitions::{catalan, classify, for_each_nc, enumerate_nc2, inner_pair_table, NcCounts, MAX_NC};
use cfree_core::series::{
    abcd_from_pair, cf_eval, gaussian_cf_levels, poisson_cf_levels, stieltjes_density, CauchyEvaluator, MAX_EPS,
    MIN_EPS,
};
use cfree_core::{rational, Rational};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::args::{
    CltArgs, ConvolveArgs, CumulantArgs, CumulantKind, DensityArgs, DensityMethod, Direction, FamilyArg, Format,
    NcAction, PoissonLimitArgs, TransformArgs,
};
use crate::config::{self, GridSpec, LawSpec};
use crate::error::{usage, CliResult};
use crate::output::{atoms_json, Cell, Table};

pub fn nc(action: &NcAction) -> CliResult<Table> {
    match *action {
        NcAction::Count { n } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let mut t = Table::new(vec!["quantity", "n", "count"]);
            t.push(vec![Cell::Text("partitions".into()), Cell::int(n), Cell::int(catalan(n))]);
            if n % 2 == 0 {
                t.push(vec![Cell::Text("pair_partitions".into()), Cell::int(n), Cell::int(catalan(n / 2))]);
            }
            Ok(t)
        }
        NcAction::Enum { n, pairs } => {
            let mut t = Table::new(vec!["index", "partition", "blocks", "outer", "inner"]);
            let mut push = |p: &cfree_core::Partition| {
                let c = classify(p).class;
                let index = t.rows.len();
                t.push(vec![
                    Cell::int(index),
                    Cell::Text(p.to_string()),
                    Cell::int(p.num_blocks()),
                    Cell::int(c.outer),
                    Cell::int(c.inner),
                ]);
            };
            if pairs {
                enumerate_nc2(n)?.iter().for_each(&mut push);
            } else {
                for_each_nc(n, push)?;
            }
            Ok(t)
        }
        NcAction::Stats { n } => {
            if n == 0 || n > MAX_NC {
                return Err(usage(format!("--n must lie in 1..={MAX_NC}")));
            }
            let blank = || Cell::Text(String::new());
            let mut t = Table::new(vec!["statistic", "k", "l", "count"]);
            // Pair partitions of 2n points with k inner pairs.
            for (k, a) in inner_pair_table(n).iter().enumerate() {
                if !a.is_zero() {
                    t.push(vec![Cell::Text("inner_pairs".into()), Cell::int(k), blank(), Cell::int(a)]);
                }
            }
            let counts = NcCounts::new(n);
            for k in 1..=n {
                t.push(vec![Cell::Text("blocks".into()), Cell::int(k), blank(), Cell::int(counts.t(n, k))]);
            }
            for k in 1..=n {
                for l in 0..n {
                    let s = counts.s(n, k, l);
                    if !s.is_zero() {
                        t.push(vec![Cell::Text("outer_inner".into()), Cell::int(k), Cell::int(l), Cell::int(s)]);
                    }
                }
            }
            Ok(t)
        }
    }
}

fn sequence_table(values: &[Rational]) -> Table {
    let mut t = Table::new(vec!["n", "value"]);
    for (i, v) in values.iter().enumerate() {
        t.push(vec![Cell::int(i + 1), Cell::Rat(v.clone())]);
    }
    t
}

fn truncated_list(s: &str, order: Option<usize>) -> CliResult<Vec<Rational>> {
    let mut v = config::parse_list(s)?;
    if let Some(n) = order {
        if n == 0 || n > v.len() {
            return Err(usage(format!("--order {n} does not fit the {} values given", v.len())));
        }
        v.truncate(n);
    }
    Ok(v)
}

pub fn cumulants(a: &CumulantArgs) -> CliResult<Table> {
    let need_nu = || a.nu.as_deref().ok_or_else(|| usage("--nu is required for cfree"));
    let out: Vec<Rational> = match (a.kind, a.direction) {
        (CumulantKind::Free, Direction::To) => {
            free_cumulants_from_moments(&config::moments(&a.values, a.order)?).as_slice().to_vec()
        }
        (CumulantKind::Free, Direction::From) => {
            let r = FreeCumulantSequence::new(truncated_list(&a.values, a.order)?)?;
            moments_from_free_cumulants(&r).as_slice()[1..].to_vec()
        }
        (CumulantKind::Boolean, Direction::To) => {
            boolean_cumulants_from_moments(&config::moments(&a.values, a.order)?).as_slice().to_vec()
        }
        (CumulantKind::Boolean, Direction::From) => {
            let b = CFreeCumulantSequence::new(truncated_list(&a.values, a.order)?)?;
            moments_from_boolean_cumulants(&b).as_slice()[1..].to_vec()
        }
        (CumulantKind::Cfree, Direction::To) => {
            let p = config::pair(&a.values, need_nu()?, a.order)?;
            cfree_cumulants_from_moments(&p).as_slice().to_vec()
        }
        (CumulantKind::Cfree, Direction::From) => {
            let big_r = CFreeCumulantSequence::new(truncated_list(&a.values, a.order)?)?;
            let nu = config::moments(need_nu()?, Some(big_r.order()))?;
            moments_from_cfree_cumulants(&big_r, &nu)?.as_slice()[1..].to_vec()
        }
    };
    Ok(sequence_table(&out))
}

fn pair_table(p: &MeasurePair) -> Table {
    let mut t = Table::new(vec!["n", "mu", "nu"]);
    for n in 1..=p.order() {
        t.push(vec![Cell::int(n), Cell::Rat(p.mu().get(n).clone()), Cell::Rat(p.nu().get(n).clone())]);
    }
    t
}

pub fn convolve(a: &ConvolveArgs) -> CliResult<Table> {
    match a.kind {
        CumulantKind::Cfree => {
            let nu1 = a.nu1.as_deref().ok_or_else(|| usage("--nu1 is required for cfree"))?;
            let nu2 = a.nu2.as_deref().ok_or_else(|| usage("--nu2 is required for cfree"))?;
            let p = cfree_convolve(&config::pair(&a.mu1, nu1, a.order)?, &config::pair(&a.mu2, nu2, a.order)?)?;
            Ok(pair_table(&p))
        }
        CumulantKind::Free | CumulantKind::Boolean => {
            let m1 = config::moments(&a.mu1, a.order)?;
            let m2 = config::moments(&a.mu2, a.order)?;
            let m = if a.kind == CumulantKind::Free { free_convolve(&m1, &m2)? } else { boolean_convolve(&m1, &m2)? };
            Ok(sequence_table(&m.as_slice()[1..]))
        }
    }
}

fn scaled_cells(s: &Scaled, n: usize) -> (Cell, Cell, f64) {
    match s {
        Scaled::Exact(p) => {
            (Cell::Rat(p.mu().get(n).clone()), Cell::Rat(p.nu().get(n).clone()), rational::to_f64(p.mu().get(n)))
        }
        Scaled::Approximate(f) => (Cell::Float(f.mu[n]), Cell::Float(f.nu[n]), f.mu[n]),
    }
}

fn limit_table(prelimit: &Scaled, limit: &MeasurePair) -> Table {
    let mut t = Table::new(vec!["n", "mu", "nu", "mu_limit", "nu_limit", "mu_error"]);
    for n in 1..=limit.order() {
        let (mu, nu, mu_f) = scaled_cells(prelimit, n);
        let err = (mu_f - rational::to_f64(limit.mu().get(n))).abs();
        t.push(vec![
            Cell::int(n),
            mu,
            nu,
            Cell::Rat(limit.mu().get(n).clone()),
            Cell::Rat(limit.nu().get(n).clone()),
            Cell::Float(err),
        ]);
    }
    t
}

pub fn clt(a: &CltArgs) -> CliResult<Table> {
    let p = config::pair(&a.mu, &a.nu, a.order)?;
    if !p.mu().get(1).is_zero() || !p.nu().get(1).is_zero() {
        return Err(usage("clt needs centered measures (m_1 = 0 for mu and nu)"));
    }
    if p.order() < 2 {
        return Err(usage("clt needs at least two moments"));
    }
    let (alpha_sq, beta_sq) = (p.mu().get(2).clone(), p.nu().get(2).clone());
    if alpha_sq.is_negative() || beta_sq.is_negative() {
        return Err(usage("second moments must be nonnegative"));
    }
    let scaled = scaled_power(&p, &ScalingSpec::central(a.copies)?);
    Ok(limit_table(&scaled, &gaussian_limit_pair(&alpha_sq, &beta_sq, p.order())))
}

pub fn poisson_limit(a: &PoissonLimitArgs) -> CliResult<Table> {
    let alpha = config::parse_rational("alpha", &a.alpha)?;
    let beta = config::parse_rational("beta", &a.beta)?;
    if a.order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let pre = poisson_prelimit(&alpha, &beta, a.copies, a.order)?;
    let scaled = scaled_power(&pre, &ScalingSpec::plain(a.copies)?);
    Ok(limit_table(&scaled, &poisson_limit_pair(&alpha, &beta, a.order)?))
}

/// Where the atom sidecar goes: explicit path, else next to `--out`.
pub fn sidecar_path(explicit: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| out.map(|p| p.with_extension("atoms.json")))
}

pub struct DensityOutput {
    pub grid: String,
    pub atoms: String,
}

pub fn density(a: &DensityArgs, format: Format) -> CliResult<DensityOutput> {
    let law = LawSpec::from_args(&a.law)?;
    let grid = GridSpec::parse(&a.grid)?;
    let measure = law.measure()?;
    let evaluator = match a.method {
        DensityMethod::ClosedForm => None,
        DensityMethod::Inversion => {
            if !(MIN_EPS..=MAX_EPS).contains(&a.eps) {
                return Err(usage(format!("--eps must lie in [{MIN_EPS:e}, {MAX_EPS:e}]")));
            }
            Some(match (law, a.depth) {
                (LawSpec::Gaussian { alpha_sq, beta_sq }, Some(d)) => {
                    CauchyEvaluator::ContinuedFraction(gaussian_cf_levels(alpha_sq, beta_sq, d))
                }
                (LawSpec::Poisson { alpha, beta }, Some(d)) => {
                    CauchyEvaluator::ContinuedFraction(poisson_cf_levels(alpha, beta, d))
                }
                (LawSpec::Gaussian { alpha_sq, beta_sq }, None) => {
                    CauchyEvaluator::Gaussian { alpha: alpha_sq.sqrt(), beta: beta_sq.sqrt() }
                }
                (LawSpec::Poisson { alpha, beta }, None) => CauchyEvaluator::Poisson { alpha, beta },
            })
        }
    };
    if a.depth.is_some() && evaluator.is_none() {
        return Err(usage("--depth applies to --method inversion"));
    }
    let mut t = Table::new(vec!["t", "density"]);
    for x in grid.nodes() {
        let d = match &evaluator {
            None => measure.density(x),
            Some(g) => stieltjes_density(g, x, a.eps)?,
        };
        t.push(vec![Cell::Float(x), Cell::Float(d)]);
    }
    Ok(DensityOutput { grid: t.render(format), atoms: atoms_json(measure.atoms()) })
}

pub fn transforms(a: &TransformArgs) -> CliResult<Table> {
    if a.order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let family_params = || -> CliResult<(FamilyArg, Rational, Rational)> {
        let family = a.family.ok_or_else(|| usage("--family is required here"))?;
        let alpha = config::parse_rational("alpha", a.alpha.as_deref().ok_or_else(|| usage("--alpha is required"))?)?;
        let beta = config::parse_rational("beta", a.beta.as_deref().ok_or_else(|| usage("--beta is required"))?)?;
        Ok((family, alpha, beta))
    };

    if let Some(at) = &a.at {
        let (family, alpha, beta) = family_params()?;
        let parts = config::parse_list(at)?;
        let [re, im] = parts.as_slice() else {
            return Err(usage("--at takes re,im"));
        };
        let z = Complex64::new(rational::to_f64(re), rational::to_f64(im));
        if z.im <= 0.0 {
            return Err(usage("--at needs Im z > 0"));
        }
        let (af, bf) = (rational::to_f64(&alpha), rational::to_f64(&beta));
        let (closed, levels) = match family {
            FamilyArg::Gaussian => (CauchyEvaluator::Gaussian { alpha: af, beta: bf }, gaussian_cf_levels(af * af, bf * bf, a.depth)),
            FamilyArg::Poisson => (CauchyEvaluator::Poisson { alpha: af, beta: bf }, poisson_cf_levels(af, bf, a.depth)),
        };
        let g = closed.eval(z)?;
        let h = cf_eval(&levels, z)?;
        let mut t = Table::new(vec!["method", "re", "im"]);
        t.push(vec![Cell::Text("closed_form".into()), Cell::Float(g.re), Cell::Float(g.im)]);
        t.push(vec![Cell::Text("continued_fraction".into()), Cell::Float(h.re), Cell::Float(h.im)]);
        t.push(vec![Cell::Text("abs_difference".into()), Cell::Float((g - h).norm()), Cell::Float(0.0)]);
        return Ok(t);
    }

    let pair = match (&a.mu, &a.nu) {
        (Some(mu), Some(nu)) => {
            if a.family.is_some() {
                return Err(usage("give either --family or --mu/--nu"));
            }
            config::pair(mu, nu, Some(a.order))?
        }
        (None, None) => {
            let (family, alpha, beta) = family_params()?;
            match family {
                FamilyArg::Gaussian => gaussian_limit_pair(&(&alpha * &alpha), &(&beta * &beta), a.order),
                FamilyArg::Poisson => poisson_limit_pair(&alpha, &beta, a.order)?,
            }
        }
        _ => return Err(usage("--mu and --nu go together")),
    };
    let s = abcd_from_pair(&pair);
    let mut t = Table::new(vec!["n", "a", "b", "c", "d"]);
    for n in 0..=a.order {
        t.push(vec![
            Cell::int(n),
            Cell::Rat(s.a.coeff(n).clone()),
            Cell::Rat(s.b.coeff(n).clone()),
            Cell::Rat(s.c.coeff(n).clone()),
            Cell::Rat(s.d.coeff(n).clone()),
        ]);
    }
    Ok(t)
}
