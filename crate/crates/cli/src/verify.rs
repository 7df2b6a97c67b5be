//! Invariant checks grouped by area. Every check records what it measured
//! and the tolerance it was held to; exact checks report a mismatch count
//! against tolerance 0.

use std::collections::BTreeMap;

use cfree_core::convolution::{cfree_convolve, poisson_prelimit, scaled_power, ScalingSpec};
use cfree_core::cumulants::{
    boolean_cumulants_from_moments, cfree_cumulants_from_moments, free_cumulants_from_moments,
    moments_from_boolean_cumulants, moments_from_cfree_cumulants, moments_from_free_cumulants, partition_sum_moment,
    MeasurePair, MomentSequence,
};
use cfree_core::limit_laws::{
    cauchy_tail_limit_check, gaussian_cauchy_g, gaussian_limit_measure_sq, gaussian_limit_moment,
    gaussian_limit_pair, poisson_cauchy_g, poisson_limit_measure, poisson_limit_pair, quadrature_moment,
    ClosedFormMeasure,
};
use cfree_core::partitions::{
    catalan, classify, enumerate_nc, enumerate_nc2, from_catalan_path, inner_pair_table, kreweras, to_catalan_path,
    NcCounts,
};
use cfree_core::product_state::sum_moments_via_words;
use cfree_core::series::{
    abcd_from_pair, boolean_residual, cauchy_form_residuals, cf_eval, functional_equation_residuals,
    gaussian_cf_levels, poisson_cf_levels, stieltjes_density, CauchyEvaluator, DEFAULT_CF_DEPTH,
};
use cfree_core::{rational, Rational};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{Format, VerifyGroup};
use crate::output::{render_json, Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        let mut t = Table::new(vec!["group", "check", "status", "measured", "tolerance", "detail"]);
        for c in &self.checks {
            t.push(vec![
                Cell::Text(c.group.into()),
                Cell::Text(c.name.into()),
                Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
                Cell::Float(c.measured),
                Cell::Float(c.tolerance),
                Cell::Text(c.detail.clone()),
            ]);
        }
        match format {
            Format::Csv => t.to_csv(),
            Format::Json => render_json(&json!({ "all_passed": self.passed(), "checks": t.to_json_value() })),
        }
    }
}

struct Recorder {
    group: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    /// `measured <= tolerance` passes; errors count as failures.
    fn record(&mut self, name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<(f64, String), String>) {
        let check = match f() {
            Ok((measured, detail)) => Check {
                group: self.group,
                name,
                passed: measured <= tolerance,
                measured,
                tolerance,
                detail,
            },
            Err(e) => Check { group: self.group, name, passed: false, measured: f64::NAN, tolerance, detail: e },
        };
        self.checks.push(check);
    }
}

type Measured = Result<(f64, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn mismatches(count: usize, what: &str) -> Measured {
    Ok((count as f64, format!("{count} mismatches; {what}")))
}

fn random_moments(rng: &mut ChaCha8Rng, order: usize) -> MomentSequence {
    let mut m = vec![Rational::one()];
    m.extend((0..order).map(|_| rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))));
    MomentSequence::new(m).expect("order >= 1")
}

fn random_pair(rng: &mut ChaCha8Rng, order: usize) -> MeasurePair {
    MeasurePair::new(random_moments(rng, order), random_moments(rng, order)).expect("equal orders")
}

pub fn run(group: VerifyGroup) -> Report {
    let groups: [(VerifyGroup, &'static str, fn(&mut Recorder)); 6] = [
        (VerifyGroup::Partitions, "partitions", partitions),
        (VerifyGroup::Cumulants, "cumulants", cumulants),
        (VerifyGroup::Oracle, "oracle", oracle),
        (VerifyGroup::Series, "series", series),
        (VerifyGroup::Laws, "laws", laws),
        (VerifyGroup::Limits, "limits", limits),
    ];
    let mut checks = Vec::new();
    for (g, name, f) in groups {
        if group == VerifyGroup::All || group == g {
            let mut r = Recorder { group: name, checks: Vec::new() };
            f(&mut r);
            checks.extend(r.checks);
        }
    }
    Report { checks }
}

const N_MAX: usize = 10;

fn partitions(r: &mut Recorder) {
    r.record("catalan_counts", 0.0, || {
        let mut bad = 0;
        for n in 1..=N_MAX {
            bad += usize::from(BigUint::from(enumerate_nc(n).map_err(err)?.len()) != catalan(n));
            bad += usize::from(BigUint::from(enumerate_nc2(2 * n).map_err(err)?.len()) != catalan(n));
        }
        mismatches(bad, "|NC(n)| and |NC_2(2n)| against Catalan numbers, n <= 10")
    });
    r.record("inner_pair_counts", 0.0, || {
        let mut bad = 0;
        for n in 1..=N_MAX {
            let mut hist = vec![BigUint::zero(); n + 1];
            for p in enumerate_nc2(2 * n).map_err(err)? {
                hist[classify(&p).class.inner] += 1u32;
            }
            bad += usize::from(inner_pair_table(n) != hist);
            bad += usize::from(!hist[0].is_one());
            if n >= 2 {
                let c = catalan(n - 1);
                bad += usize::from(hist[n - 1] != c || hist[n - 2] != c);
            }
        }
        mismatches(bad, "recursion vs enumeration and boundary values, n <= 10")
    });
    r.record("block_counts", 0.0, || {
        let counts = NcCounts::new(N_MAX);
        let mut bad = 0;
        for n in 1..=N_MAX {
            let mut t_enum = vec![BigUint::zero(); n + 1];
            let mut s_enum: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
            for p in enumerate_nc(n).map_err(err)? {
                t_enum[p.num_blocks()] += 1u32;
                let c = classify(&p).class;
                *s_enum.entry((c.outer, c.inner)).or_default() += 1u32;
            }
            for k in 1..=n {
                bad += usize::from(counts.t(n, k) != t_enum[k] || kreweras(n, k) != t_enum[k]);
                for l in 0..n {
                    bad += usize::from(counts.s(n, k, l) != s_enum.get(&(k, l)).cloned().unwrap_or_default());
                }
            }
            if n >= 2 {
                for l in 0..n {
                    bad += usize::from(counts.s(n, 1, l) != counts.t(n - 1, l + 1));
                }
            }
        }
        mismatches(bad, "block and outer/inner counts: recursion, closed form, enumeration, n <= 10")
    });
    r.record("catalan_paths", 0.0, || {
        let mut bad = 0;
        for n in 1..=7 {
            for p in enumerate_nc2(2 * n).map_err(err)? {
                let path = to_catalan_path(&p).map_err(err)?;
                bad += usize::from(from_catalan_path(&path) != p || path.diagonal_touches() != classify(&p).class.outer);
            }
        }
        mismatches(bad, "pair partition -> path -> pair partition, n <= 7")
    });
}

fn cumulants(r: &mut Recorder) {
    r.record("roundtrips", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut bad = 0;
        for _ in 0..100 {
            let order = rng.gen_range(1..=12);
            let p = random_pair(&mut rng, order);
            bad += usize::from(&moments_from_free_cumulants(&free_cumulants_from_moments(p.nu())) != p.nu());
            let big_r = cfree_cumulants_from_moments(&p);
            bad += usize::from(&moments_from_cfree_cumulants(&big_r, p.nu()).map_err(err)? != p.mu());
            bad += usize::from(&moments_from_boolean_cumulants(&boolean_cumulants_from_moments(p.mu())) != p.mu());
        }
        mismatches(bad, "free, c-free and boolean, 100 random pairs, order <= 12")
    });
    r.record("partition_sums", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut bad = 0;
        for _ in 0..10 {
            let p = random_pair(&mut rng, 8);
            let (rv, big_r) = (free_cumulants_from_moments(p.nu()), cfree_cumulants_from_moments(&p));
            for n in 1..=8 {
                bad += usize::from(&partition_sum_moment(&rv, &big_r, n).map_err(err)? != p.mu().get(n));
            }
        }
        mismatches(bad, "explicit sum over NC(n) vs recursion, n <= 8")
    });
    r.record("diagonal_collapse", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut bad = 0;
        for _ in 0..50 {
            let m = random_moments(&mut rng, 10);
            let p = MeasurePair::diagonal(m.clone());
            bad += usize::from(cfree_cumulants_from_moments(&p).as_slice() != free_cumulants_from_moments(&m).as_slice());
        }
        mismatches(bad, "c-free cumulants of (nu, nu) equal free cumulants of nu")
    });
}

fn oracle(r: &mut Recorder) {
    r.record("word_sums", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut bad = 0;
        for _ in 0..10 {
            let (p1, p2) = (random_pair(&mut rng, 8), random_pair(&mut rng, 8));
            let conv = cfree_convolve(&p1, &p2).map_err(err)?;
            for n in 1..=8 {
                bad += usize::from(&sum_moments_via_words(&p1, &p2, n).map_err(err)? != conv.mu().get(n));
            }
        }
        mismatches(bad, "cumulant-additive convolution vs product-state word sums, n <= 8, 10 pairs")
    });
}

fn series(r: &mut Recorder) {
    r.record("functional_equations", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut bad = 0;
        for _ in 0..20 {
            let p = random_pair(&mut rng, 12);
            bad += usize::from(!functional_equation_residuals(&abcd_from_pair(&p)).map_err(err)?.vanish());
            bad += usize::from(!cauchy_form_residuals(&p).map_err(err)?.vanish());
            bad += usize::from(!boolean_residual(p.mu()).map_err(err)?.is_zero());
        }
        mismatches(bad, "nonvanishing residuals at order 12, 20 pairs")
    });
    r.record("continued_fractions", 1e-10, || {
        let mut worst = 0.0f64;
        let points: Vec<Complex64> =
            (0..10).map(|i| Complex64::new(-3.0 + 1.0 * i as f64, 1.0 + 0.2 * i as f64)).collect();
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
            let levels = gaussian_cf_levels(a * a, b * b, DEFAULT_CF_DEPTH);
            for &z in &points {
                worst = worst.max((gaussian_cauchy_g(a, b, z).map_err(err)? - cf_eval(&levels, z).map_err(err)?).norm());
            }
        }
        for (a, b) in [(1.0, 1.0), (0.5, 0.5), (3.0, 1.0), (1.0, 3.0)] {
            let levels = poisson_cf_levels(a, b, DEFAULT_CF_DEPTH);
            for &z in &points {
                worst = worst.max((poisson_cauchy_g(a, b, z).map_err(err)? - cf_eval(&levels, z).map_err(err)?).norm());
            }
        }
        Ok((worst, "max |closed form - continued fraction|, depth 64, Im z in [1, 2.8]".into()))
    });
}

fn moment_error(m: &ClosedFormMeasure, exact: &MeasurePair, n_max: usize, step: usize) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for n in (0..=n_max).step_by(step) {
        let q = quadrature_moment(m, n).map_err(err)?;
        worst = worst.max((q - rational::to_f64(exact.mu().get(n))).abs());
    }
    Ok(worst)
}

const GAUSSIAN_SETS: [(i64, i64); 4] = [(1, 1), (4, 1), (2, 1), (1, 4)];
const POISSON_SETS: [(i64, i64, i64, i64); 4] = [(1, 1, 1, 1), (1, 2, 1, 2), (3, 1, 1, 1), (1, 1, 3, 1)];

fn laws(r: &mut Recorder) {
    r.record("gaussian_moments", 1e-7, || {
        let mut worst = 0.0f64;
        for (a2, b2) in GAUSSIAN_SETS {
            let m = gaussian_limit_measure_sq(a2 as f64, b2 as f64).map_err(err)?;
            let exact = gaussian_limit_pair(&rational::int(a2), &rational::int(b2), 8);
            worst = worst.max(moment_error(&m, &exact, 8, 2)?);
        }
        Ok((worst, "even moments n <= 8, (alpha^2, beta^2) in (1,1), (4,1), (2,1), (1,4)".into()))
    });
    r.record("gaussian_moment_formula", 0.0, || {
        // The ratio recursion m_2n = Σ_k α² m_2(k-1)(ν) m_2(n-k)(μ) against the closed sum.
        let (a2, b2) = (rational::ratio(3, 2), rational::ratio(2, 3));
        let p = gaussian_limit_pair(&a2, &b2, 12);
        let mut bad = 0;
        for n in 1..=6 {
            let mut rec = Rational::zero();
            for k in 1..=n {
                rec += &a2 * p.nu().get(2 * (k - 1)) * p.mu().get(2 * (n - k));
            }
            bad += usize::from(rec != gaussian_limit_moment(&a2, &b2, 2 * n));
        }
        mismatches(bad, "first-return recursion vs counting formula, n <= 6")
    });
    r.record("poisson_moments", 1e-7, || {
        let mut worst = 0.0f64;
        for (an, ad, bn, bd) in POISSON_SETS {
            let (a, b) = (rational::ratio(an, ad), rational::ratio(bn, bd));
            let m = poisson_limit_measure(rational::to_f64(&a), rational::to_f64(&b)).map_err(err)?;
            worst = worst.max(moment_error(&m, &poisson_limit_pair(&a, &b, 6).map_err(err)?, 6, 1)?);
        }
        Ok((worst, "moments n <= 6, (alpha, beta) in (1,1), (1/2,1/2), (3,1), (1,3)".into()))
    });
    r.record("mass", 1e-8, || {
        let mut worst = 0.0f64;
        for (a2, b2) in GAUSSIAN_SETS {
            let m = gaussian_limit_measure_sq(a2 as f64, b2 as f64).map_err(err)?;
            worst = worst.max((m.mass().map_err(err)? - 1.0).abs());
        }
        for (an, ad, bn, bd) in POISSON_SETS {
            let m = poisson_limit_measure(an as f64 / ad as f64, bn as f64 / bd as f64).map_err(err)?;
            worst = worst.max((m.mass().map_err(err)? - 1.0).abs());
        }
        Ok((worst, "|atoms + integral of density - 1|".into()))
    });
    r.record("atom_regions", 0.0, || {
        let mut bad = 0;
        for a in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
            for b in [0.25, 0.5, 1.0, 2.0] {
                let g = gaussian_limit_measure_sq(a * a, b * b).map_err(err)?;
                bad += usize::from(g.atoms().is_empty() == (b * b / (a * a) < 0.5));
                let p = poisson_limit_measure(a, b).map_err(err)?;
                let has_zero = p.atoms().iter().any(|x| x.location == 0.0);
                let has_other = p.atoms().iter().any(|x| x.location != 0.0);
                let s = b.sqrt();
                let outside = a != b && (a < b - s || a > b + s);
                bad += usize::from(has_zero != (b < 1.0)) + usize::from(has_other != outside);
            }
        }
        mismatches(bad, "atom presence against the parameter regions on a 6 x 4 grid")
    });
    r.record("stieltjes_inversion", 1e-2, || {
        let eps = 1e-4;
        let mut worst = 0.0f64;
        let mut cases: Vec<(CauchyEvaluator, ClosedFormMeasure)> = Vec::new();
        for (a2, b2) in GAUSSIAN_SETS {
            let (a, b) = ((a2 as f64).sqrt(), (b2 as f64).sqrt());
            cases.push((CauchyEvaluator::Gaussian { alpha: a, beta: b }, gaussian_limit_measure_sq(a2 as f64, b2 as f64).map_err(err)?));
        }
        for (an, ad, bn, bd) in POISSON_SETS {
            let (a, b) = (an as f64 / ad as f64, bn as f64 / bd as f64);
            cases.push((CauchyEvaluator::Poisson { alpha: a, beta: b }, poisson_limit_measure(a, b).map_err(err)?));
        }
        for (g, m) in &cases {
            let (lo, hi) = m.support().ok_or("no continuous part")?;
            for i in 1..=50 {
                let t = lo + (hi - lo) * i as f64 / 51.0;
                worst = worst.max((stieltjes_density(g, t, eps).map_err(err)? - m.density(t)).abs());
            }
        }
        Ok((worst, "eps = 1e-4, 50 interior points per law".into()))
    });
}

fn convergence_ratio(p64: &MeasurePair, p128: &MeasurePair, limit: &MeasurePair) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        for (a, b, l) in [(p64.mu(), p128.mu(), limit.mu()), (p64.nu(), p128.nu(), limit.nu())] {
            let (e64, e128) = ((a.get(n) - l.get(n)).abs(), (b.get(n) - l.get(n)).abs());
            if e64.is_zero() {
                if !e128.is_zero() {
                    return Err(format!("n = {n}: exact at N = 64 but not at N = 128"));
                }
            } else {
                worst = worst.max(rational::to_f64(&(e128 / e64)));
            }
        }
    }
    Ok(worst)
}

fn limits(r: &mut Recorder) {
    r.record("central_convergence", 0.6, || {
        let mut worst = 0.0f64;
        for (a, b) in [(2i64, 1i64), (1, 1), (1, 2)] {
            let (qa, qb) = (rational::int(a), rational::int(b));
            let base = MeasurePair::new(
                MomentSequence::symmetric_two_point(&qa, 6),
                MomentSequence::symmetric_two_point(&qb, 6),
            )
            .map_err(err)?;
            let pre = |n: u64| -> Result<MeasurePair, String> {
                scaled_power(&base, &ScalingSpec::central(n).map_err(err)?).exact().ok_or_else(|| "inexact scaling".into())
            };
            let limit = gaussian_limit_pair(&(&qa * &qa), &(&qb * &qb), 6);
            worst = worst.max(convergence_ratio(&pre(64)?, &pre(128)?, &limit)?);
        }
        Ok((worst, "worst error ratio N = 128 vs N = 64, n <= 6, symmetric two-point inputs".into()))
    });
    r.record("poisson_convergence", 0.6, || {
        let mut worst = 0.0f64;
        for (an, ad, bn, bd) in POISSON_SETS {
            let (a, b) = (rational::ratio(an, ad), rational::ratio(bn, bd));
            let pre = |n: u64| -> Result<MeasurePair, String> {
                let base = poisson_prelimit(&a, &b, n, 6).map_err(err)?;
                scaled_power(&base, &ScalingSpec::plain(n).map_err(err)?).exact().ok_or_else(|| "inexact scaling".into())
            };
            worst = worst.max(convergence_ratio(&pre(64)?, &pre(128)?, &poisson_limit_pair(&a, &b, 6).map_err(err)?)?);
        }
        Ok((worst, "worst error ratio N = 128 vs N = 64, n <= 6".into()))
    });
    r.record("cauchy_tail", 0.0, || {
        let rep = cauchy_tail_limit_check(1.0, &[2.0, 4.0, 8.0]).map_err(err)?;
        let d: Vec<String> = rep.distances.iter().map(|x| format!("{x:.3e}")).collect();
        Ok((f64::from(u8::from(!rep.decreasing)), format!("sup distances for alpha = 2, 4, 8: {}", d.join(" "))))
    });
}
