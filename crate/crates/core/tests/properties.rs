use num_traits::{One, Zero};
use proptest::prelude::*;

use cfree_core::convolution::{cfree_convolve, dilate, free_convolve};
use cfree_core::cumulants::{
    cfree_cumulants_from_moments, free_cumulants_from_moments, moments_from_cfree_cumulants,
    moments_from_free_cumulants, MeasurePair, MomentSequence,
};
use cfree_core::limit_laws::{
    gaussian_limit_measure, gaussian_limit_moment, poisson_limit_measure, poisson_limit_pair,
    quadrature_moment,
};
use cfree_core::partitions::{enumerate_nc, from_catalan_path, to_catalan_path, Partition};
use cfree_core::product_state::{eval_phi, eval_psi, sum_moments_via_words, StateFamily, Word};
use cfree_core::series::{abcd_from_pair, cauchy_form_residuals, functional_equation_residuals, TruncatedSeries};
use cfree_core::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn moments(order: usize) -> impl Strategy<Value = MomentSequence> {
    prop::collection::vec(rational(), order).prop_map(|v| {
        let mut m = vec![Rational::one()];
        m.extend(v);
        MomentSequence::new(m).unwrap()
    })
}

fn pair(order: usize) -> impl Strategy<Value = MeasurePair> {
    (moments(order), moments(order)).prop_map(|(mu, nu)| MeasurePair::new(mu, nu).unwrap())
}

fn sized_pair() -> impl Strategy<Value = MeasurePair> {
    (2usize..=9).prop_flat_map(pair)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_transform_roundtrip(m in (2usize..=10).prop_flat_map(moments)) {
        let r = free_cumulants_from_moments(&m);
        prop_assert_eq!(moments_from_free_cumulants(&r), m);
    }

    #[test]
    fn cfree_transform_roundtrip(p in sized_pair()) {
        let big_r = cfree_cumulants_from_moments(&p);
        prop_assert_eq!(&moments_from_cfree_cumulants(&big_r, p.nu()).unwrap(), p.mu());
    }

    #[test]
    fn diagonal_pairs_have_equal_cumulants(m in (2usize..=9).prop_flat_map(moments)) {
        let p = MeasurePair::diagonal(m.clone());
        let (c, r) = (cfree_cumulants_from_moments(&p), free_cumulants_from_moments(&m));
        prop_assert_eq!(c.as_slice(), r.as_slice());
    }

    #[test]
    fn convolution_commutes_and_associates((a, b, c) in (2usize..=7).prop_flat_map(|n| (pair(n), pair(n), pair(n)))) {
        let ab = cfree_convolve(&a, &b).unwrap();
        prop_assert_eq!(&ab, &cfree_convolve(&b, &a).unwrap());
        let left = cfree_convolve(&ab, &c).unwrap();
        let right = cfree_convolve(&a, &cfree_convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn delta_zero_is_neutral(p in sized_pair()) {
        let e = MeasurePair::diagonal(MomentSequence::delta_zero(p.order()));
        prop_assert_eq!(cfree_convolve(&p, &e).unwrap(), p);
    }

    #[test]
    fn nu_component_is_free_convolution((a, b) in (2usize..=8).prop_flat_map(|n| (pair(n), pair(n)))) {
        let ab = cfree_convolve(&a, &b).unwrap();
        prop_assert_eq!(ab.nu(), &free_convolve(a.nu(), b.nu()).unwrap());
    }

    #[test]
    fn dilation_scales_cumulants(p in sized_pair(), lambda in rational()) {
        let d = dilate(&p, &lambda);
        let (r, rd) = (free_cumulants_from_moments(p.nu()), free_cumulants_from_moments(d.nu()));
        let (c, cd) = (cfree_cumulants_from_moments(&p), cfree_cumulants_from_moments(&d));
        for n in 1..=p.order() {
            let f = num_traits::pow(lambda.clone(), n);
            prop_assert_eq!(rd.get(n), &(r.get(n) * &f));
            prop_assert_eq!(cd.get(n), &(c.get(n) * &f));
        }
    }

    #[test]
    fn functional_equations_hold(p in sized_pair()) {
        prop_assert!(functional_equation_residuals(&abcd_from_pair(&p)).unwrap().vanish());
        prop_assert!(cauchy_form_residuals(&p).unwrap().vanish());
    }

    #[test]
    fn reciprocal_is_inverse(mut v in prop::collection::vec(rational(), 1..10)) {
        if v[0].is_zero() {
            v[0] = Rational::one();
        }
        let s = TruncatedSeries::new(v).unwrap();
        let prod = s.mul(&s.reciprocal().unwrap());
        prop_assert_eq!(prod, TruncatedSeries::one(s.order()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn word_oracle_matches_convolution((a, b) in (1usize..=6).prop_flat_map(|n| (pair(n), pair(n)))) {
        let conv = cfree_convolve(&a, &b).unwrap();
        for n in 1..=a.order() {
            prop_assert_eq!(&sum_moments_via_words(&a, &b, n).unwrap(), conv.mu().get(n));
        }
    }

    #[test]
    fn psi_ignores_mu((a, b, letters) in (pair(6), pair(6), prop::collection::vec(1u8..=2, 0..=6))) {
        let fam = StateFamily::new(a.clone(), b.clone()).unwrap();
        let free = StateFamily::new(
            MeasurePair::diagonal(a.nu().clone()),
            MeasurePair::diagonal(b.nu().clone()),
        ).unwrap();
        let w = Word::from_letters(&letters).unwrap();
        prop_assert_eq!(eval_psi(&w, &fam).unwrap(), eval_phi(&w, &free).unwrap());
        prop_assert_eq!(eval_psi(&w, &fam).unwrap(), eval_psi(&w, &free).unwrap());
    }

    #[test]
    fn catalan_path_roundtrip((n, pick) in (1usize..=7, any::<prop::sample::Index>())) {
        let pairs: Vec<Partition> = enumerate_nc(2 * n).unwrap().into_iter().filter(Partition::is_pair_partition).collect();
        let p = pick.get(&pairs);
        let path = to_catalan_path(p).unwrap();
        prop_assert_eq!(&from_catalan_path(&path), p);
        let outer = cfree_core::partitions::classify(p).class.outer;
        prop_assert_eq!(path.diagonal_touches(), outer);
    }

    #[test]
    fn gaussian_measures_are_normalized(alpha in 0.3f64..4.0, beta in 0.3f64..4.0) {
        let m = gaussian_limit_measure(alpha, beta).unwrap();
        prop_assert!((m.mass().unwrap() - 1.0).abs() < 1e-8);
        prop_assert_eq!(!m.atoms().is_empty(), 2.0 * beta * beta < alpha * alpha);
        let a2 = Rational::from_float(alpha * alpha).unwrap();
        let b2 = Rational::from_float(beta * beta).unwrap();
        for n in [2usize, 4, 6] {
            let exact = cfree_core::rational::to_f64(&gaussian_limit_moment(&a2, &b2, n));
            let q = quadrature_moment(&m, n).unwrap();
            prop_assert!((q - exact).abs() <= 1e-8 * exact.max(1.0), "n = {} {} vs {}", n, q, exact);
        }
    }

    #[test]
    fn poisson_measures_are_normalized(alpha in 0.2f64..5.0, beta in 0.2f64..5.0) {
        let m = poisson_limit_measure(alpha, beta).unwrap();
        prop_assert!((m.mass().unwrap() - 1.0).abs() < 1e-8, "mass {}", m.mass().unwrap());
        let has_zero_atom = m.atoms().iter().any(|a| a.location == 0.0);
        prop_assert_eq!(has_zero_atom, beta < 1.0);
        let a = Rational::from_float(alpha).unwrap();
        let b = Rational::from_float(beta).unwrap();
        let exact = poisson_limit_pair(&a, &b, 4).unwrap();
        for n in 1..=4 {
            let e = cfree_core::rational::to_f64(exact.mu().get(n));
            let q = quadrature_moment(&m, n).unwrap();
            prop_assert!((q - e).abs() <= 1e-8 * e.abs().max(1.0), "n = {} {} vs {}", n, q, e);
        }
    }
}
