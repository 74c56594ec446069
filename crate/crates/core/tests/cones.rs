use num_traits::{Signed, Zero};
use proptest::prelude::*;

use loopdeg::ratcone::linalg::rank;
use loopdeg::ratcone::lp::{self, LpOutcome};
use loopdeg::ratcone::{
    cdd, cone_subset, dd_facets, difference_witness, member, q, verify_witness, Rational, RationalCone,
};
use loopdeg::Catalog;

fn cone_strategy(max_dim: usize, max_gens: usize, lo: i64, hi: i64) -> impl Strategy<Value = RationalCone> {
    (1..=max_dim).prop_flat_map(move |dim| {
        prop::collection::vec(prop::collection::vec(lo..=hi, dim), 1..=max_gens)
            .prop_map(move |rows| RationalCone::from_integer_rows(dim, &rows).unwrap())
    })
}

fn point_for(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), dim)
        .prop_map(|v| v.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect())
}

/// Whether some point of the intersection lies outside `exclude`, decided
/// facet by facet: minimize each facet functional over the intersection
/// normalized by the coefficient sum in the first cone.
fn oracle_escapes(intersect: &[RationalCone], exclude: &RationalCone) -> bool {
    let h = dd_facets(exclude);
    let d = exclude.dim();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for e in &h.equalities {
        let v: Vec<i64> = e.iter().map(|x| i64::try_from(x).unwrap()).collect();
        rows.push(v.iter().map(|x| -x).collect());
        rows.push(v);
    }
    rows.extend(h.inequalities.iter().map(|a| a.iter().map(|x| i64::try_from(x).unwrap()).collect()));
    let sizes: Vec<usize> = intersect.iter().map(RationalCone::len).collect();
    let n: usize = sizes.iter().sum();
    // Variables: one block of coefficients per cone. Constraints: the first
    // block's combination equals every other block's, and the first block sums to 1.
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    let mut offset = sizes[0];
    for (k, c) in intersect.iter().enumerate().skip(1) {
        for j in 0..d {
            let mut row = vec![Rational::zero(); n];
            for (i, g) in intersect[0].generators().iter().enumerate() {
                row[i] = g[j].clone();
            }
            for (i, g) in c.generators().iter().enumerate() {
                row[offset + i] = -g[j].clone();
            }
            a.push(row);
            b.push(Rational::zero());
        }
        offset += sizes[k];
    }
    let mut norm = vec![Rational::zero(); n];
    for x in norm.iter_mut().take(sizes[0]) {
        *x = q(1);
    }
    a.push(norm);
    b.push(q(1));
    rows.iter().any(|f| {
        let mut c = vec![Rational::zero(); n];
        for (i, g) in intersect[0].generators().iter().enumerate() {
            c[i] = g.iter().zip(f).map(|(x, &y)| x * q(y)).sum();
        }
        match lp::minimize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => value.is_negative(),
            LpOutcome::Unbounded => true,
            LpOutcome::Infeasible(_) => false,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_certificates_verify(
        (cone, x) in cone_strategy(6, 8, -3, 3).prop_flat_map(|c| { let d = c.dim(); (Just(c), point_for(d)) })
    ) {
        let cert = member(&cone, &x).unwrap();
        prop_assert!(cert.verify(&cone, &x));
        prop_assert_eq!(cert.is_inside(), dd_facets(&cone).contains(&x));
    }

    #[test]
    fn generators_satisfy_their_facets(cone in cone_strategy(5, 7, -2, 2)) {
        let h = dd_facets(&cone);
        for g in cone.generators() {
            prop_assert!(h.contains(g));
        }
        let span = rank(cone.generators());
        for a in &h.inequalities {
            let tight: Vec<Vec<Rational>> = cone.generators().iter().filter(|g| {
                g.iter().zip(a).map(|(x, y)| x * Rational::from_integer(y.clone())).sum::<Rational>().is_zero()
            }).cloned().collect();
            prop_assert_eq!(rank(&tight), span - 1);
        }
    }

    #[test]
    fn cdd_round_trip(cone in cone_strategy(5, 6, -3, 3)) {
        let back = cdd::read_v(&cdd::write_v(&cone)).unwrap();
        prop_assert_eq!(back.generators(), cone.generators());
        let h = dd_facets(&cone);
        prop_assert_eq!(cdd::read_h(&cdd::write_h(&h)).unwrap(), h);
    }

    #[test]
    fn single_cone_witness_matches_subset(
        (a, b) in (1usize..=4).prop_flat_map(|d| {
            let gens = move || prop::collection::vec(prop::collection::vec(0i64..=2, d), 1..=5)
                .prop_map(move |rows| RationalCone::from_integer_rows(d, &rows).unwrap());
            (gens(), gens())
        })
    ) {
        let w = difference_witness(std::slice::from_ref(&a), &b).unwrap();
        prop_assert_eq!(w.is_none(), cone_subset(&a, &b).unwrap().holds());
        if let Some(w) = w {
            prop_assert!(verify_witness(std::slice::from_ref(&a), &b, &w));
        }
    }

    #[test]
    fn witness_matches_lp_oracle(
        cones in (2usize..=4).prop_flat_map(|d| {
            let gens = move || prop::collection::vec(prop::collection::vec(-1i64..=2, d), 1..=5)
                .prop_map(move |rows| RationalCone::from_integer_rows(d, &rows).unwrap());
            (gens(), gens(), gens())
        })
    ) {
        let (a, b, ex) = cones;
        let intersect = vec![a, b];
        let w = difference_witness(&intersect, &ex).unwrap();
        prop_assert_eq!(w.is_some(), oracle_escapes(&intersect, &ex));
        if let Some(w) = w {
            prop_assert!(verify_witness(&intersect, &ex, &w));
            prop_assert!(w.point.iter().any(|x| !x.is_zero()));
        }
    }
}

#[test]
fn prime_cones_contain_lie_cone() {
    let catalog = Catalog::builtin();
    let lie = loopdeg::ratcone::lie_cone(&catalog, 14);
    for p in [2, 3, 5, 7, 11, 13] {
        let kp = loopdeg::ratcone::prime_cone(&catalog, p, 14);
        assert!(cone_subset(&lie, &kp).unwrap().holds(), "p = {p}");
    }
    let k5 = loopdeg::ratcone::prime_cone(&catalog, 5, 14);
    assert!(!cone_subset(&k5, &lie).unwrap().holds());
}

#[test]
fn no_witness_below_truncation_thirty() {
    let catalog = Catalog::builtin();
    let cones = loopdeg::papercheck::ConeFamily::new(&catalog, 14, &loopdeg::ratcone::LIN_EXTRA);
    assert!(difference_witness(&cones.intersected(), &cones.lie).unwrap().is_none());
}
