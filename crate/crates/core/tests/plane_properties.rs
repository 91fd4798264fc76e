//! Interval-union arithmetic against a sweep-line oracle, and the plane laws.

use haarlab::plane::{
    counterexample_bk, haar_v, regularity_gap, translate_v, verify_certificate, BkWitness, Bound, CylinderSet,
    Interval, IntervalUnion, Length,
};
use haarlab::rational::{int, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// (lo, hi, lo_closed, hi_closed) with finite rational endpoints.
type Raw = (Rational, Rational, bool, bool);

fn member(raw: &[Raw], x: &Rational) -> bool {
    raw.iter()
        .any(|(a, b, ac, bc)| (x > a || (*ac && x == a)) && (x < b || (*bc && x == b)))
}

/// Length of a union by sweeping the sorted endpoints and testing each gap's
/// midpoint against the raw intervals.
fn sweep_length(raw: &[Raw]) -> Rational {
    let mut points: Vec<Rational> = raw.iter().flat_map(|(a, b, _, _)| [a.clone(), b.clone()]).collect();
    points.sort();
    points.dedup();
    points
        .windows(2)
        .filter(|w| member(raw, &((&w[0] + &w[1]) / int(2))))
        .map(|w| &w[1] - &w[0])
        .sum()
}

fn build(raw: &[Raw]) -> IntervalUnion {
    IntervalUnion::new(
        raw.iter()
            .filter_map(|(a, b, ac, bc)| Interval::new(Bound::Finite(a.clone()), Bound::Finite(b.clone()), *ac, *bc).ok())
            .collect(),
    )
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..5).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn arb_raw() -> impl Strategy<Value = Vec<Raw>> {
    proptest::collection::vec(
        (arb_rational(), arb_rational(), any::<bool>(), any::<bool>()).prop_map(|(a, b, ac, bc)| {
            if a <= b {
                (a, b, ac, bc)
            } else {
                (b, a, ac, bc)
            }
        }),
        0..6,
    )
}

/// Raw list with the empty intervals removed, so membership matches.
fn nonempty(raw: Vec<Raw>) -> Vec<Raw> {
    raw.into_iter().filter(|(a, b, ac, bc)| a < b || (*ac && *bc)).collect()
}

fn finite(l: Length) -> Rational {
    l.finite().cloned().expect("bounded")
}

proptest! {
    #[test]
    fn length_matches_sweep(raw in arb_raw()) {
        let raw = nonempty(raw);
        let u = build(&raw);
        prop_assert_eq!(finite(u.length()), sweep_length(&raw));
    }

    #[test]
    fn canonical_form_preserves_membership(raw in arb_raw(), probes in proptest::collection::vec(arb_rational(), 10)) {
        let raw = nonempty(raw);
        let u = build(&raw);
        let mut tests: Vec<Rational> = raw.iter().flat_map(|(a, b, _, _)| [a.clone(), b.clone()]).collect();
        tests.extend(probes);
        for x in &tests {
            prop_assert_eq!(u.contains(x), member(&raw, x), "x = {}", x);
        }
        for w in u.intervals().windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (Bound::Finite(end), Bound::Finite(start)) = (a.hi(), b.lo()) else { unreachable!() };
            prop_assert!(end < start || (end == start && !a.hi_closed() && !b.lo_closed()));
        }
        prop_assert_eq!(IntervalUnion::new(u.intervals().to_vec()), u.clone());
    }

    #[test]
    fn translation_invariance(raw in arb_raw(), a in arb_rational(), b in arb_rational()) {
        let e = CylinderSet::new(build(&nonempty(raw)));
        let moved = translate_v(&e, &a, &b);
        prop_assert_eq!(haar_v(&moved), haar_v(&e));
        prop_assert_eq!(translate_v(&moved, &-a, &-b), e);
    }

    #[test]
    fn finite_additivity(r1 in arb_raw(), r2 in arb_raw()) {
        let e1 = build(&nonempty(r1));
        let e2 = build(&nonempty(r2));
        if e1.is_disjoint(&e2) {
            let joint = CylinderSet::new(e1.union(&e2));
            prop_assert_eq!(
                finite(haar_v(&joint)),
                finite(e1.length()) + finite(e2.length())
            );
        }
        // Inclusion-exclusion holds regardless.
        let lhs = finite(e1.union(&e2).length()) + finite(e1.intersection(&e2).length());
        prop_assert_eq!(lhs, finite(e1.length()) + finite(e2.length()));
    }

    #[test]
    fn regularity_gap_bounds(raw in arb_raw(), k in 0u32..12) {
        let e = CylinderSet::new(build(&nonempty(raw)));
        let eps = Rational::new(1.into(), (1i64 << k).into());
        let (inner, outer) = regularity_gap(&e, &eps).unwrap();
        let m = finite(haar_v(&e));
        prop_assert!(inner.is_closed_compact() && outer.is_open());
        prop_assert!(&m - finite(haar_v(&inner)) <= eps);
        prop_assert!(finite(haar_v(&outer)) - &m <= eps);
        prop_assert!(inner.base.union(&e.base) == e.base);
        prop_assert!(e.base.union(&outer.base) == outer.base);
    }

    #[test]
    fn certificates_verify(p in 0i64..30, q in 1i64..8, bound in 1i64..200) {
        let c = Rational::new(p.into(), q.into());
        let cert = counterexample_bk(&c, &int(bound)).unwrap();
        prop_assert!(verify_certificate(&cert).is_ok());
        if let BkWitness::Translates { count, total, .. } = &cert.witness {
            prop_assert!(*total > int(bound));
            prop_assert!(Rational::from_integer((*count as i64 - 1).into()) * &c <= int(bound));
        }
    }
}

#[test]
fn monotone_convergence_on_bounded_bases() {
    let e = CylinderSet::new(IntervalUnion::new(vec![
        Interval::open(int(0), int(1)).unwrap(),
        Interval::new(Bound::Finite(int(2)), Bound::Finite(Rational::new(7.into(), 3.into())), true, false).unwrap(),
    ]));
    let m = finite(haar_v(&e));
    let mut last_inner = Rational::zero();
    let mut last_outer: Option<Rational> = None;
    for k in 0..=20 {
        let eps = Rational::new(1.into(), (1i64 << k).into());
        let (inner, outer) = regularity_gap(&e, &eps).unwrap();
        let (i, o) = (finite(haar_v(&inner)), finite(haar_v(&outer)));
        assert!(i >= last_inner && i <= m && o >= m);
        if let Some(prev) = &last_outer {
            assert!(&o <= prev);
        }
        assert!(&m - &i <= eps && &o - &m <= eps);
        last_inner = i;
        last_outer = Some(o);
    }
}

#[test]
fn quotient_consistency_on_the_line() {
    // The length of the base is the Haar measure of the cylinder.
    let base = IntervalUnion::new(vec![
        Interval::closed(int(-3), int(-1)).unwrap(),
        Interval::open(Rational::new(1.into(), 2.into()), int(4)).unwrap(),
    ]);
    assert_eq!(haar_v(&CylinderSet::new(base.clone())), base.length());
    assert_eq!(base.length(), Length::Finite(Rational::new(11.into(), 2.into())));
}
