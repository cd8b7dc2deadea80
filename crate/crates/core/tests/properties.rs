use num_bigint::BigUint;
use obtuse_core::exact_bounds::{binom3, closed_form_2d, closed_form_3d, recursion_step};
use obtuse_core::geom::{
    classify_triangle, classify_with_margin, count_classes, Configuration, TriangleClass, DEFAULT_TOL,
};
use obtuse_core::search::forced_nonacute_bound;
use obtuse_core::special_fn::{ln_gamma, reg_inc_beta};
use obtuse_core::sphere::obtuse_given_angle;
use proptest::prelude::*;

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, d)
}

fn rotate_plane(p: &[f64], t: f64) -> Vec<f64> {
    let (s, c) = t.sin_cos();
    let mut q = p.to_vec();
    q[0] = c * p[0] - s * p[1];
    q[1] = s * p[0] + c * p[1];
    q
}

fn dots(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 3] {
    let dot = |o: &[f64], p: &[f64], q: &[f64]| -> f64 {
        o.iter().zip(p).zip(q).map(|((o, p), q)| (p - o) * (q - o)).sum()
    };
    [dot(a, b, c), dot(b, a, c), dot(c, a, b)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn class_is_invariant_under_permutation(a in point(3), b in point(3), c in point(3)) {
        let k = classify_triangle(&a, &b, &c, DEFAULT_TOL).unwrap();
        prop_assert_eq!(k, classify_triangle(&b, &c, &a, DEFAULT_TOL).unwrap());
        prop_assert_eq!(k, classify_triangle(&c, &a, &b, DEFAULT_TOL).unwrap());
        prop_assert_eq!(k, classify_triangle(&b, &a, &c, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn class_is_invariant_under_similarity(
        a in point(2), b in point(2), c in point(2),
        t in 0.0f64..6.3, s in 0.25f64..4.0, shift in point(2),
    ) {
        let k = classify_with_margin(&a, &b, &c, DEFAULT_TOL).unwrap();
        prop_assume!(k.margin > 1e-6);
        let map = |p: &Vec<f64>| -> Vec<f64> {
            rotate_plane(p, t).iter().zip(&shift).map(|(x, o)| s * x + o).collect()
        };
        let k2 = classify_triangle(&map(&a), &map(&b), &map(&c), DEFAULT_TOL).unwrap();
        prop_assert_eq!(k.class, k2);
    }

    #[test]
    fn obtuse_iff_one_negative_dot(a in point(4), b in point(4), c in point(4)) {
        let k = classify_with_margin(&a, &b, &c, 0.0).unwrap();
        prop_assume!(k.class != TriangleClass::Degenerate);
        let negative = dots(&a, &b, &c).iter().filter(|v| **v < 0.0).count();
        prop_assert!(negative <= 1);
        prop_assert_eq!(k.class == TriangleClass::Obtuse, negative == 1);
    }

    #[test]
    fn class_counts_partition_all_triples(pts in prop::collection::vec(point(2), 3..12)) {
        let n = pts.len() as u64;
        let cfg = Configuration::new(pts).unwrap();
        prop_assume!(cfg.validate().is_ok());
        let c = count_classes(&cfg, DEFAULT_TOL).unwrap();
        prop_assert_eq!(BigUint::from(c.total()), binom3(n));
    }

    #[test]
    fn random_planar_sets_respect_the_bound(pts in prop::collection::vec(point(2), 4..=10)) {
        let n = pts.len();
        let cfg = Configuration::new(pts).unwrap();
        prop_assume!(cfg.validate().is_ok());
        let c = count_classes(&cfg, DEFAULT_TOL).unwrap();
        prop_assert!(c.non_acute() >= forced_nonacute_bound(n, 2).unwrap());
    }

    #[test]
    fn random_spatial_sets_respect_the_bound(pts in prop::collection::vec(point(3), 6..=10)) {
        let n = pts.len();
        let cfg = Configuration::new(pts).unwrap();
        prop_assume!(cfg.validate().is_ok());
        let c = count_classes(&cfg, DEFAULT_TOL).unwrap();
        prop_assert!(c.non_acute() >= forced_nonacute_bound(n, 3).unwrap());
    }

    #[test]
    fn step_is_the_exact_ceiling(t in 1u64..1_000_000_000, n in 3u64..1_000_000) {
        let got = recursion_step(&BigUint::from(t), n).unwrap();
        let num = u128::from(t) * u128::from(n + 1);
        let den = u128::from(n - 2);
        prop_assert_eq!(got, BigUint::from(num.div_ceil(den)));
    }

    #[test]
    fn closed_forms_follow_the_recurrence(n in 6u64..5_000_000) {
        prop_assert_eq!(recursion_step(&closed_form_2d(n).unwrap(), n).unwrap(), closed_form_2d(n + 1).unwrap());
        prop_assert_eq!(recursion_step(&closed_form_3d(n).unwrap(), n).unwrap(), closed_form_3d(n + 1).unwrap());
    }

    #[test]
    fn incomplete_beta_reflection(z in 0.0f64..=1.0, a in 0.1f64..200.0, b in 0.1f64..200.0) {
        let lhs = reg_inc_beta(z, a, b).unwrap();
        let rhs = 1.0 - reg_inc_beta(1.0 - z, b, a).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12, "{} vs {}", lhs, rhs);
        prop_assert!((0.0..=1.0).contains(&lhs));
    }

    #[test]
    fn incomplete_beta_is_monotone_in_z(z in 0.0f64..0.99, dz in 1e-6f64..0.01, a in 0.5f64..100.0) {
        let lo = reg_inc_beta(z, a, 0.5).unwrap();
        let hi = reg_inc_beta(z + dz, a, 0.5).unwrap();
        prop_assert!(hi >= lo - 1e-15);
    }

    #[test]
    fn ln_gamma_satisfies_recurrence(x in 1e-3f64..1e4) {
        let lhs = ln_gamma(x + 1.0).unwrap();
        let rhs = ln_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn given_angle_is_a_probability(theta in 0.0f64..=std::f64::consts::PI, d in 2u32..2000) {
        let p = obtuse_given_angle(theta, d).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
