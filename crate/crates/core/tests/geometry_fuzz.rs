use incidence_workbench::geometry::{
    klein_form, line_from_points, line_plane_intersection, line_plane_intersection_parametric,
    lines_coplanar, point_on_line, span_2flat, AffPoint, GeomError, HyperplaneH, ProjLine,
};
use incidence_workbench::poly::{rat, ratio, Rational};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn point3() -> impl Strategy<Value = AffPoint> {
    prop::collection::vec(coord(), 3).prop_map(AffPoint::new)
}

fn plane() -> impl Strategy<Value = HyperplaneH> {
    prop::collection::vec(coord(), 4)
        .prop_filter("normal must be nonzero", |c| {
            c[1..].iter().any(|x| *x != rat(0))
        })
        .prop_map(|c| HyperplaneH::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn plucker_tuples_lie_on_the_klein_quadric(x in point3(), y in point3()) {
        prop_assume!(x != y);
        let l = line_from_points(&x, &y).unwrap();
        let pl = l.plucker().expect("three-space lines carry Plücker coordinates");
        prop_assert_eq!(klein_form(pl), rat(0));
        prop_assert!(point_on_line(&x, &l) && point_on_line(&y, &l));
    }

    #[test]
    fn line_plane_formula_matches_parametric_solve(x in point3(), y in point3(), h in plane()) {
        prop_assume!(x != y);
        let l = line_from_points(&x, &y).unwrap();
        match (line_plane_intersection(&l, &h), line_plane_intersection_parametric(&l, &h)) {
            (Ok(a), Ok(b)) => {
                prop_assert!(a.same_point(&b));
                if let Some(p) = a.to_affine() {
                    prop_assert!(h.contains(&p));
                    prop_assert!(l.contains(&p));
                }
            }
            (Err(GeomError::LineInPlane), Err(GeomError::LineInPlane)) => {
                prop_assert!(h.contains_line(&l));
            }
            (a, b) => prop_assert!(false, "formula {:?} vs parametric {:?}", a, b),
        }
    }

    #[test]
    fn coplanarity_is_symmetric_and_spans_contain_both(
        a in point3(),
        b in point3(),
        c in point3(),
        d in point3(),
        mode in 0u8..3,
    ) {
        // mode 1 makes the lines meet at a, mode 2 makes them parallel
        let (c, d) = match mode {
            1 => (a.clone(), d),
            2 => {
                let shifted = c.coords.iter().zip(&b.coords).zip(&a.coords).map(|((c, b), a)| c + b - a);
                (c.clone(), AffPoint::new(shifted.collect()))
            }
            _ => (c, d),
        };
        prop_assume!(a != b && c != d);
        let l1 = line_from_points(&a, &b).unwrap();
        let l2 = line_from_points(&c, &d).unwrap();
        prop_assume!(l1 != l2);
        let co = lines_coplanar(&l1, &l2).unwrap();
        prop_assert_eq!(co, lines_coplanar(&l2, &l1).unwrap());
        prop_assert!(co || mode == 0);
        if co {
            let f = span_2flat(&l1, &l2).unwrap();
            prop_assert!(f.contains_line(&l1) && f.contains_line(&l2));
            prop_assert_eq!(f, span_2flat(&l2, &l1).unwrap());
        } else {
            prop_assert!(span_2flat(&l1, &l2).is_err());
        }
    }
}

#[test]
fn worked_examples() {
    let o = AffPoint::origin(3);
    let l = line_from_points(&o, &AffPoint::from_ints(&[1, 0, 0])).unwrap();
    let pl: Vec<Rational> = l.plucker().unwrap().to_vec();
    assert_eq!(pl, [1, 0, 0, 0, 0, 0].map(rat).to_vec());
    let diag = ProjLine::from_ints(&[0, 0, 0], &[2, 3, 6]).unwrap();
    assert!(point_on_line(&AffPoint::from_ints(&[2, 3, 6]), &diag));
    assert!(!point_on_line(&AffPoint::from_ints(&[1, 1, 2]), &diag));
    assert!(point_on_line(
        &AffPoint::new(vec![rat(1), ratio(3, 2), rat(3)]),
        &diag
    ));
    let hit = line_plane_intersection(
        &ProjLine::from_ints(&[1, 0, 0], &[0, 1, 1]).unwrap(),
        &HyperplaneH::from_ints(&[-2, 0, 1, 0]).unwrap(),
    )
    .unwrap();
    assert_eq!(hit.to_affine().unwrap(), AffPoint::from_ints(&[1, 2, 2]));
    let inside = line_plane_intersection(
        &ProjLine::from_ints(&[0, 0, 1], &[1, 1, 0]).unwrap(),
        &HyperplaneH::from_ints(&[-1, 0, 0, 1]).unwrap(),
    );
    assert_eq!(inside, Err(GeomError::LineInPlane));
    let r0 = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
    let r1 = ProjLine::from_ints(&[1, 0, 0], &[0, 1, 1]).unwrap();
    assert!(!lines_coplanar(&r0, &r1).unwrap());
}
