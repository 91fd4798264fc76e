//! Measure operations against a point-level oracle and algebraic laws.

mod common;

use common::{corpus, random_positive, random_rational, set};
use haarlab::group::group_topologies;
use haarlab::measure::{
    canonical_haar, haar_ratio, haar_solution_space, integrate, invert_measure, is_haar, positivity_report,
    product_haar, pullback, pushforward, riesz_check, translate_function,
};
use haarlab::quotient::quotient;
use haarlab::rational::{int, Rational};
use haarlab::{FiniteGroup, FiniteMeasure, FiniteTopGroup, PointFunction, Side, Subset};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mass of a point set: sum over atoms inside it; `None` if not Borel.
fn mass(g: &FiniteTopGroup, masses: &[Rational], e: Subset) -> Option<Rational> {
    let mut total = Rational::zero();
    let mut covered = Subset::EMPTY;
    for (a, m) in g.atoms().atoms().iter().zip(masses) {
        if a.is_subset(e) {
            total += m;
            covered = covered.union(*a);
        } else if !a.is_disjoint(e) {
            return None;
        }
    }
    (covered == e).then_some(total)
}

struct Oracle {
    left: bool,
    right: bool,
    outer: bool,
    inner: bool,
}

/// Every condition checked on point sets, with opens and closed sets taken
/// from the materialised topology.
fn oracle(g: &FiniteTopGroup, masses: &[Rational]) -> Oracle {
    let n = g.order();
    let space = g.space();
    let opens = space.opens();
    let closed = space.closed_sets();
    let borel: Vec<Subset> = (0..1u64 << n).map(Subset::from_mask).filter(|&e| mass(g, masses, e).is_some()).collect();
    let mu = |e: Subset| mass(g, masses, e).unwrap();
    let invariant = |side: Side| {
        borel.iter().all(|&e| (0..n).all(|x| mu(g.translate(side, x, e)) == mu(e)))
    };
    let outer = borel.iter().all(|&e| {
        opens.iter().filter(|u| e.is_subset(**u)).map(|&u| mu(u)).min() == Some(mu(e))
    });
    let inner = opens.iter().all(|&u| {
        closed.iter().filter(|c| c.is_subset(u)).map(|&c| mu(c)).max() == Some(mu(u))
    });
    Oracle { left: invariant(Side::Left), right: invariant(Side::Right), outer, inner }
}

fn small_corpus() -> Vec<FiniteTopGroup> {
    corpus().into_iter().filter(|g| g.order() <= 8).collect()
}

#[test]
fn is_haar_matches_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in small_corpus() {
        for trial in 0..6 {
            let k = g.atoms().len();
            let masses: Vec<Rational> = match trial {
                0 => vec![int(1); k],
                1 => vec![int(0); k],
                _ => (0..k).map(|_| random_rational(&mut rng, 3, 2)).collect(),
            };
            let mu = FiniteMeasure::new(&g, masses.clone()).unwrap();
            let report = is_haar(&g, &mu, Side::Left).unwrap();
            let o = oracle(&g, &masses);
            assert_eq!(report.left_invariant, o.left);
            assert_eq!(report.right_invariant, o.right);
            assert_eq!(report.outer_regular, o.outer);
            assert_eq!(report.inner_regular_on_opens, o.inner);
            assert_eq!(report.nonzero, masses.iter().any(|m| !m.is_zero()));
            assert!(report.exhaustive);
            for w in &report.witnesses {
                if let Some(x) = w.element {
                    assert_ne!(mu.measure(g.translate(Side::Left, x, w.set)), mu.measure(w.set));
                }
            }
        }
    }
}

#[test]
fn uniqueness_and_both_sides() {
    for g in corpus() {
        let space = haar_solution_space(&g).unwrap();
        assert_eq!(space.dimension, 1);
        assert_eq!(space.basis[0], canonical_haar(&g));
        let mu = canonical_haar(&g);
        let r = is_haar(&g, &mu, Side::Left).unwrap();
        assert!(r.is_left_haar() && r.is_right_haar());
        assert!(positivity_report(&g, &mu).unwrap().all_hold());
    }
}

#[test]
fn inversion_swaps_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in small_corpus() {
        let masses = (0..g.atoms().len()).map(|_| random_rational(&mut rng, 4, 3)).collect();
        let mu = FiniteMeasure::new(&g, masses).unwrap();
        let inv = invert_measure(&g, &mu).unwrap();
        assert_eq!(invert_measure(&g, &inv).unwrap(), mu);
        let before = is_haar(&g, &mu, Side::Left).unwrap();
        let after = is_haar(&g, &inv, Side::Right).unwrap();
        assert_eq!(before.is_left_haar(), after.is_right_haar());
        assert_eq!(before.is_right_haar(), after.is_left_haar());
    }
}

#[test]
fn integrals_are_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in corpus() {
        let a = random_positive(&mut rng, 9, 4);
        let mu = canonical_haar(&g).scaled(&a).unwrap();
        for &atom in g.atoms().atoms() {
            let f = PointFunction::indicator(g.order(), atom);
            let base = integrate(&g, &f, &mu).unwrap();
            for x in 0..g.order() {
                for side in [Side::Left, Side::Right] {
                    assert_eq!(integrate(&g, &translate_function(&g, &f, side, x), &mu).unwrap(), base);
                }
            }
        }
    }
}

#[test]
fn push_pull_are_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in corpus() {
        let q = quotient(&g).unwrap();
        let mu = canonical_haar(&g).scaled(&random_positive(&mut rng, 7, 5)).unwrap();
        let nu = pushforward(&q, &mu).unwrap();
        assert!(is_haar(q.quotient(), &nu, Side::Left).unwrap().is_left_haar());
        assert_eq!(pullback(&q, &nu).unwrap(), mu);
        let nu2 = canonical_haar(q.quotient()).scaled(&random_positive(&mut rng, 7, 5)).unwrap();
        assert_eq!(pushforward(&q, &pullback(&q, &nu2).unwrap()).unwrap(), nu2);
    }
}

#[test]
fn product_with_indiscrete_factor() {
    for x in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::quaternion8()] {
            let tx = FiniteTopGroup::discrete(x.clone());
            let (p, mu) = product_haar(&tx, &g).unwrap();
            assert_eq!(mu, canonical_haar(&p));
            assert!(is_haar(&p, &mu, Side::Left).unwrap().is_left_haar());
            let m = g.order();
            for &e in p.atoms().atoms() {
                let projected: Subset = e.iter().map(|pt| pt / m).collect();
                assert_eq!(mu.measure(e).unwrap(), int(projected.len() as i64));
            }
        }
    }
}

fn arb_instance() -> impl Strategy<Value = (FiniteTopGroup, Vec<Rational>, Vec<Rational>)> {
    let groups: Vec<FiniteTopGroup> = [FiniteGroup::cyclic(4), FiniteGroup::symmetric3(), FiniteGroup::dihedral(4)]
        .iter()
        .flat_map(|g| group_topologies(g).unwrap())
        .collect();
    (0..groups.len()).prop_flat_map(move |i| {
        let g = groups[i].clone();
        let k = g.atoms().len();
        let masses = proptest::collection::vec((0i64..4, 1i64..4).prop_map(|(p, q)| Rational::new(p.into(), q.into())), k);
        (Just(g), masses.clone(), masses)
    })
}

proptest! {
    #[test]
    fn riesz_detects_equality((g, a, b) in arb_instance()) {
        let mu1 = FiniteMeasure::new(&g, a).unwrap();
        let mu2 = FiniteMeasure::new(&g, b).unwrap();
        prop_assert_eq!(riesz_check(&g, &mu1, &mu2).unwrap(), mu1 == mu2);
        prop_assert!(riesz_check(&g, &mu1, &mu1).unwrap());
    }

    #[test]
    fn ratio_of_scaled_haar((g, _a, _b) in arb_instance(), p in 1i64..50, q in 1i64..50) {
        let mu = canonical_haar(&g);
        let a = Rational::new(p.into(), q.into());
        prop_assert_eq!(haar_ratio(&g, &mu, &mu.scaled(&a).unwrap()).unwrap(), Some(a));
    }

    #[test]
    fn measure_is_additive((g, a, _b) in arb_instance(), s in 0u64..64, t in 0u64..64) {
        let mu = FiniteMeasure::new(&g, a).unwrap();
        let k = g.atoms().len() as u32;
        let (s, t) = (s % (1 << k), t % (1 << k));
        let (es, et) = (g.atoms().union_of(s & !t), g.atoms().union_of(t));
        let joint = mu.measure(es.union(et)).unwrap();
        prop_assert_eq!(joint, mu.measure(es).unwrap() + mu.measure(et).unwrap());
        prop_assert_eq!(mu.measure(Subset::EMPTY).unwrap(), int(0));
    }

    #[test]
    fn non_atom_functions_are_not_integrable((g, a, _b) in arb_instance()) {
        let mu = FiniteMeasure::new(&g, a).unwrap();
        let big = g.atoms().atoms().iter().find(|a| a.len() > 1).copied();
        if let Some(atom) = big {
            let f = PointFunction::indicator(g.order(), set(&[atom.first().unwrap()]));
            prop_assert!(integrate(&g, &f, &mu).is_err());
        }
    }
}

#[test]
fn haar_is_inner_regular_on_every_borel_set() {
    for g in small_corpus() {
        let mu = canonical_haar(&g);
        let space = g.space();
        let compact_closed: Vec<Subset> =
            space.closed_sets().into_iter().filter(|c| space.is_compact(*c)).collect();
        let atoms = g.atoms();
        for m in 0..1u64 << atoms.len() {
            let e = atoms.union_of(m);
            let best = compact_closed
                .iter()
                .filter(|c| c.is_subset(e))
                .map(|&c| mu.measure(c).unwrap())
                .max();
            assert_eq!(best, Some(mu.measure(e).unwrap()), "{} {e}", g.group().name());
        }
    }
}
