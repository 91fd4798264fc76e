#![allow(dead_code)]

use haarlab::group::group_topologies;
use haarlab::rational::Rational;
use haarlab::{FiniteGroup, FiniteTopGroup, Subset};
use num_bigint::BigInt;
use rand::Rng;

/// Z_n for n <= 12, D3, D4, Q8, S3 and Z2 x Z4.
pub fn corpus_groups() -> Vec<FiniteGroup> {
    let mut groups: Vec<FiniteGroup> = (1..=12).map(FiniteGroup::cyclic).collect();
    groups.push(FiniteGroup::dihedral(3));
    groups.push(FiniteGroup::dihedral(4));
    groups.push(FiniteGroup::quaternion8());
    groups.push(FiniteGroup::symmetric3());
    groups.push(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)).unwrap());
    groups
}

/// Every corpus group with every compatible topology.
pub fn corpus() -> Vec<FiniteTopGroup> {
    corpus_groups()
        .iter()
        .flat_map(|g| group_topologies(g).unwrap())
        .collect()
}

pub fn set(points: &[usize]) -> Subset {
    points.iter().copied().collect()
}

/// Rational with numerator in `0..=num_max` and denominator in `1..=den_max`.
pub fn random_rational(rng: &mut impl Rng, num_max: i64, den_max: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(0..=num_max)), BigInt::from(rng.gen_range(1..=den_max)))
}

/// Same, but strictly positive.
pub fn random_positive(rng: &mut impl Rng, num_max: i64, den_max: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(1..=num_max)), BigInt::from(rng.gen_range(1..=den_max)))
}

/// Every subset of `0..n`, as masks.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..1u64 << n).map(Subset::from_mask)
}
