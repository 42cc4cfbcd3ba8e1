mod common;

use pretzel_fal::hypgeom::{CuspKind, Geometry};
use proptest::prelude::*;
use rayon::prelude::*;

const TOL_EXP: usize = 30;

#[test]
fn closed_geodesic_strictly_decreasing() {
    let lens: Vec<_> = (3..=1000u64)
        .into_par_iter()
        .map_init(
            || Geometry::new(256).unwrap(),
            |g, n| g.geodesic_data(n).unwrap().closed_length,
        )
        .collect();
    for (i, w) in lens.windows(2).enumerate() {
        assert!(w[0] > w[1], "l({}) <= l({})", i + 3, i + 4);
    }
}

#[test]
fn gram_entries_exact_vs_numeric() {
    (3..=150u64).into_par_iter().for_each(|n| {
        let mut g = Geometry::new(256).unwrap();
        let d = g.geodesic_data(n).unwrap();
        let exact = g.eval_gram(&d.gram_entry);
        let err = (&exact - &d.gram_numeric).abs();
        assert!(err < g.ctx().ten_pow_neg(TOL_EXP), "n = {n}: {err}");
        // and against the tan form of the same length
        let oracle = common::geodesic_length_tan(g.ctx(), n);
        assert!((&oracle - &d.closed_length).abs() < g.ctx().ten_pow_neg(TOL_EXP));
    });
}

#[test]
fn cusp_shapes_exact_vs_numeric() {
    (3..=150u64).into_par_iter().for_each(|n| {
        let mut g = Geometry::new(256).unwrap();
        let tol = g.ctx().ten_pow_neg(TOL_EXP);
        for kind in [
            CuspKind::Untwisted,
            CuspKind::Twisted { positive: true },
            CuspKind::Twisted { positive: false },
        ] {
            let c = g.cusp_shape(n, kind).unwrap();
            let numeric = c.numeric.unwrap();
            let exact = g.eval_cyclo(&c.exact.unwrap());
            assert!(exact.distance(&numeric) < tol, "n = {n} {kind}");
            if kind == CuspKind::Untwisted {
                assert!(numeric.re.is_zero());
            }
        }
    });
}

#[test]
fn packing_radii_relation() {
    let mut g = Geometry::new(256).unwrap();
    for n in 3..=150 {
        let p = g.packing_radii(n).unwrap();
        assert!(p.white_inner.is_positive() && p.shaded_small.is_positive());
        assert!(p.sec_residual < g.ctx().ten_pow_neg(TOL_EXP), "n = {n}");
    }
}

#[test]
fn f_below_limit() {
    let mut g = Geometry::new(256).unwrap();
    let lim = g.f_limit();
    let mut prev = g.orbifold_volume_f(5).unwrap();
    for n in 6..=150 {
        let f = g.orbifold_volume_f(n).unwrap();
        assert!(prev < f && f < lim, "n = {n}");
        prev = f;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lobachevsky_identities(t in -6.0f64..6.0) {
        let mut g = Geometry::new(256).unwrap();
        let tol = g.ctx().ten_pow_neg(TOL_EXP);
        let theta = g.ctx().parse(&format!("{t:.17}")).unwrap();
        let pi = g.ctx().pi();
        let half_pi = g.ctx().pi_ratio(1, 2);
        let two = g.ctx().int(2);
        let l = g.lobachevsky(&theta);
        prop_assert!((&g.lobachevsky(&-theta.clone()) + &l).abs() < tol);
        prop_assert!((&g.lobachevsky(&(&theta + &pi)) - &l).abs() < tol);
        let dup = &(&g.lobachevsky(&(&theta * &two)) - &(&l * &two))
            - &(&g.lobachevsky(&(&theta + &half_pi)) * &two);
        prop_assert!(dup.abs() < tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lobachevsky_matches_quadrature(t in 0.05f64..3.05) {
        let mut g = Geometry::new(192).unwrap();
        let theta = g.ctx().parse(&format!("{t:.17}")).unwrap();
        let series = g.lobachevsky(&theta);
        let quad = common::lobachevsky_quadrature(g.ctx(), &theta, 22);
        prop_assert!((&series - &quad).abs() < g.ctx().ten_pow_neg(20));
    }
}

#[test]
fn quarter_turn_against_quadrature() {
    let mut g = Geometry::new(256).unwrap();
    let quarter = g.ctx().pi_ratio(1, 4);
    let quad = common::lobachevsky_quadrature(g.ctx(), &quarter, 25);
    let two = g.ctx().int(2);
    let err = (&(&quad * &two) - &g.f_limit()).abs();
    assert!(err < g.ctx().ten_pow_neg(20));
    assert_eq!(&(&quad * &two).to_decimal(20)[..8], "0.915965");
}
