use incidence_workbench::poly::{factorial, point_vars, rat, ratio, MultiPoly, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn point(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), d)
}

/// Random polynomial in x, y, z with at most six terms of degree ≤ 2 in
/// each variable.
fn poly3() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2, 0u32..=2), -5i64..=5), 1..6).prop_map(|terms| {
        MultiPoly::from_terms(
            &point_vars(3),
            terms
                .into_iter()
                .map(|((a, b, c), k)| (vec![a, b, c], rat(k))),
        )
        .unwrap()
    })
}

fn nonconstant_poly3() -> impl Strategy<Value = MultiPoly> {
    poly3().prop_filter("positive degree", |p| p.total_degree() > 0)
}

/// Values for the variables of `p` looked up by name.
fn eval_named(p: &MultiPoly, value: impl Fn(&str) -> Rational) -> Rational {
    let v: Vec<Rational> = p.vars().iter().map(|n| value(n)).collect();
    p.eval(&v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eval_is_a_ring_homomorphism(f in poly3(), g in poly3(), p in point(3)) {
        let fp = f.eval(&p).unwrap();
        let gp = g.eval(&p).unwrap();
        prop_assert_eq!((&f + &g).eval(&p).unwrap(), &fp + &gp);
        prop_assert_eq!((&f * &g).eval(&p).unwrap(), &fp * &gp);
        prop_assert_eq!((&f - &g).eval(&p).unwrap(), fp - gp);
    }

    #[test]
    fn taylor_components_sum_back(f in poly3(), p in point(3), q in point(3)) {
        let comps = f.taylor_components(&p).unwrap();
        let shift: Vec<Rational> = q.iter().zip(&p).map(|(a, b)| a - b).collect();
        let total: Rational = comps.iter().map(|c| c.eval(&shift).unwrap()).sum();
        prop_assert_eq!(total, f.eval(&q).unwrap());
        for (k, c) in comps.iter().enumerate() {
            prop_assert!(c.terms().all(|(m, _)| m.degree() as usize == k));
        }
    }

    #[test]
    fn directional_form_matches_line_expansion(f in poly3(), p in point(3), v in point(3), k in 1u32..=4) {
        let form = f.directional_derivative_form(k).unwrap();
        let value = eval_named(&form, |name| match name {
            "x" => p[0].clone(),
            "y" => p[1].clone(),
            "z" => p[2].clone(),
            "v1" => v[0].clone(),
            "v2" => v[1].clone(),
            "v3" => v[2].clone(),
            other => panic!("unexpected variable {other}"),
        });
        let line = f.restrict_to_line(&p, &v).unwrap();
        let coeff = line.coeffs().get(k as usize).cloned().unwrap_or_else(|| rat(0));
        prop_assert_eq!(value, factorial(k) * coeff);
    }

    #[test]
    fn divisibility_agrees_with_evaluation(a in poly3(), h in poly3(), xy in point(2)) {
        // f = z − a(x, y) has the explicit zero (x, y, a(x, y))
        let a2 = a.eval_var(2, &rat(0));
        let f = &MultiPoly::var(&point_vars(3), "z").unwrap() - &a2;
        let g = &f * &h;
        prop_assert!(f.divides(&g).unwrap());
        let z = a2.eval(&[xy[0].clone(), xy[1].clone(), rat(0)]).unwrap();
        let on = [xy[0].clone(), xy[1].clone(), z];
        prop_assert_eq!(f.eval(&on).unwrap(), rat(0));
        prop_assert_eq!(g.eval(&on).unwrap(), rat(0));
        let shifted = &g + &MultiPoly::one(&point_vars(3));
        prop_assert!(!f.divides(&shifted).unwrap());
    }

    #[test]
    fn text_format_round_trips(f in poly3()) {
        let back: MultiPoly = f.to_string().parse().unwrap();
        prop_assert_eq!(back.with_vars(f.vars()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn square_free_part_is_idempotent_and_strips_squares(f in nonconstant_poly3(), g in nonconstant_poly3()) {
        let s = f.square_free_part().unwrap();
        prop_assert!(s.square_free_part().unwrap().eq_up_to_scalar(&s));
        prop_assert!(s.divides(&f).unwrap());
        let sq = &(&f * &f) * &g;
        let t = sq.square_free_part().unwrap();
        prop_assert!(t.is_square_free());
        prop_assert!(s.divides(&t).unwrap());
    }

    #[test]
    fn resultant_vanishes_at_a_planted_common_root(
        f in nonconstant_poly3(),
        g in nonconstant_poly3(),
        r in small_rational(),
        y0 in small_rational(),
    ) {
        // rename z to the eliminated variable and force a common root z = r
        // on the slice y = y0, x = 0
        let at = |q: &MultiPoly| q.eval(&[rat(0), y0.clone(), r.clone()]).unwrap();
        let vars = point_vars(3);
        let f2 = &f - &MultiPoly::constant(&vars, at(&f));
        let g2 = &g - &MultiPoly::constant(&vars, at(&g));
        prop_assume!(f2.degree_in(2) > 0 && g2.degree_in(2) > 0);
        let res = f2.sylvester_resultant(&g2, "z").unwrap();
        let value = eval_named(&res, |name| match name {
            "x" => rat(0),
            "y" => y0.clone(),
            // z is eliminated and survives only as a name
            "z" => rat(0),
            other => panic!("unexpected variable {other}"),
        });
        prop_assert_eq!(value, rat(0));
    }
}

#[test]
fn worked_examples() {
    let p = |s: &str| s.parse::<MultiPoly>().unwrap();
    let f = p("z - x*y");
    assert_eq!(f.eval(&[rat(2), rat(3), rat(6)]).unwrap(), rat(0));
    assert_eq!(f.eval(&[rat(2), rat(3), rat(7)]).unwrap(), rat(1));
    assert_eq!(p("x^2*y").partial_derivative("x").unwrap(), p("2*x*y"));
    assert!(p("x^2*y")
        .square_free_part()
        .unwrap()
        .eq_up_to_scalar(&p("x*y")));
    let sq = &f * &f;
    assert!(sq.square_free_part().unwrap().eq_up_to_scalar(&f));
    assert!(p("x^2 + y^2 + z^2 - 1")
        .directional_derivative_form(3)
        .unwrap()
        .is_zero());
    let hess = f.directional_derivative_form(2).unwrap();
    assert_eq!(hess, p("-2*v1*v2").with_vars(hess.vars()).unwrap());
    let r = p("v^2 - x").sylvester_resultant(&p("v - 1"), "v").unwrap();
    assert!(r.eq_up_to_scalar(&p("1 - x")));
    assert!(p("v^2")
        .sylvester_resultant(&p("v^2"), "v")
        .unwrap()
        .is_zero());
    assert!(f.divides(&(&f * &p("x + 1"))).unwrap());
    assert!(!f.divides(&p("z")).unwrap());
}
