//! Covering numbers `(K:S)` and the ratio functionals built from them.
//!
//! `(K:S)` is the least number of left translates `g·int(S)` covering `K`,
//! with `(∅:S) = 0`. Solutions are exact: a branch-and-bound set cover
//! finds the optimum, then the lexicographically smallest sorted list of
//! translates achieving it is assembled one element at a time.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::group::FiniteTopGroup;
use crate::measure::{is_haar, FiniteMeasure, MeasureError};
use crate::quotient::all_borel_sets;
use crate::rational::Rational;
use crate::topology::Subset;
use crate::Side;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoveringError {
    #[error("{0} has empty interior")]
    EmptyInterior(Subset),
    #[error("{0} is not closed")]
    NotClosed(Subset),
    #[error("{0} is not an open neighbourhood of the identity")]
    NotIdentityNeighbourhood(Subset),
    #[error("{0} has points outside the group")]
    OutOfRange(Subset),
    #[error("too many Borel atoms ({atoms}) to tabulate every closed set")]
    TooManyAtoms { atoms: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Cover `k` by left translates of `int(s)`.
#[derive(Debug, Clone, Copy)]
pub struct CoveringProblem<'a> {
    pub group: &'a FiniteTopGroup,
    pub k: Subset,
    pub s: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringSolution {
    pub count: usize,
    /// Ascending group elements `g` with `k ⊆ ⋃ g·int(s)`.
    pub translates: Vec<usize>,
}

fn check_range(g: &FiniteTopGroup, s: Subset) -> Result<(), CoveringError> {
    if s.fits(g.order()) {
        Ok(())
    } else {
        Err(CoveringError::OutOfRange(s))
    }
}

/// Candidate translates restricted to `k`: `(g, g·int(s) ∩ k)`, nonempty,
/// one per distinct trace, keeping the smallest `g`.
fn candidates(g: &FiniteTopGroup, k: Subset, interior: Subset) -> Vec<(usize, u64)> {
    let mut seen = std::collections::HashSet::new();
    (0..g.order())
        .filter_map(|x| {
            let trace = g.group().left_translate(x, interior).intersection(k).mask();
            (trace != 0 && seen.insert(trace)).then_some((x, trace))
        })
        .collect()
}

/// Exact minimum number of `sets` covering `target`, or `None` if more than
/// `budget` are needed.
fn min_cover(target: u64, sets: &[u64], budget: usize) -> Option<usize> {
    if target == 0 {
        return Some(0);
    }
    let mut best = budget + 1;
    search(target, sets, 0, &mut best);
    (best <= budget).then_some(best)
}

fn search(uncovered: u64, sets: &[u64], used: usize, best: &mut usize) {
    if uncovered == 0 {
        *best = (*best).min(used);
        return;
    }
    let widest = sets.iter().map(|s| (s & uncovered).count_ones()).max().unwrap_or(0);
    if widest == 0 {
        return;
    }
    let lower = uncovered.count_ones().div_ceil(widest) as usize;
    if used + lower >= *best {
        return;
    }
    // Branch on the uncovered point with the fewest covering sets.
    let mut pivot = None;
    let mut fewest = usize::MAX;
    let mut rest = uncovered;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        let options = sets.iter().filter(|&&s| s & bit != 0).count();
        if options < fewest {
            fewest = options;
            pivot = Some(bit);
        }
    }
    let pivot = pivot.unwrap();
    if fewest == 0 {
        return;
    }
    let mut branches: Vec<u64> = sets.iter().copied().filter(|s| s & pivot != 0).collect();
    branches.sort_by_key(|s| std::cmp::Reverse((s & uncovered).count_ones()));
    for s in branches {
        search(uncovered & !s, sets, used + 1, best);
    }
}

/// Greedy cover size, an upper bound for the search.
fn greedy_cover(target: u64, sets: &[u64]) -> Option<usize> {
    let mut uncovered = target;
    let mut used = 0;
    while uncovered != 0 {
        let best = sets.iter().max_by_key(|&&s| (s & uncovered).count_ones())?;
        if best & uncovered == 0 {
            return None;
        }
        uncovered &= !best;
        used += 1;
    }
    Some(used)
}

/// Exact `(K:S)` with the lexicographically smallest optimal translates.
pub fn covering_number(p: CoveringProblem<'_>) -> Result<CoveringSolution, CoveringError> {
    let g = p.group;
    check_range(g, p.k)?;
    check_range(g, p.s)?;
    let interior = g.space().interior(p.s);
    if interior.is_empty() {
        return Err(CoveringError::EmptyInterior(p.s));
    }
    if p.k.is_empty() {
        return Ok(CoveringSolution { count: 0, translates: Vec::new() });
    }
    let cands = candidates(g, p.k, interior);
    let sets: Vec<u64> = cands.iter().map(|&(_, s)| s).collect();
    // Translates of a nonempty set cover the whole group.
    let upper = greedy_cover(p.k.mask(), &sets).expect("translates cover the group");
    let count = min_cover(p.k.mask(), &sets, upper).expect("greedy bound is feasible");

    let mut translates = Vec::with_capacity(count);
    let mut uncovered = p.k.mask();
    let mut from = 0;
    while uncovered != 0 {
        let remaining = count - translates.len() - 1;
        let (i, next) = (from..cands.len())
            .map(|i| (i, uncovered & !cands[i].1))
            .find(|&(i, next)| {
                let later: Vec<u64> = sets[i + 1..].to_vec();
                min_cover(next, &later, remaining).is_some()
            })
            .expect("an optimal cover extends some prefix");
        translates.push(cands[i].0);
        uncovered = next;
        from = i + 1;
    }
    translates.sort_unstable();
    Ok(CoveringSolution { count: translates.len(), translates })
}

/// `(K:U)` for a closed `K` and an open neighbourhood `U` of the identity.
fn checked_count(g: &FiniteTopGroup, k: Subset, u: Subset) -> Result<usize, CoveringError> {
    Ok(covering_number(CoveringProblem { group: g, k, s: u })?.count)
}

fn check_identity_neighbourhood(g: &FiniteTopGroup, u: Subset) -> Result<(), CoveringError> {
    check_range(g, u)?;
    if g.space().is_open(u) && u.contains(g.group().identity()) {
        Ok(())
    } else {
        Err(CoveringError::NotIdentityNeighbourhood(u))
    }
}

fn check_reference(g: &FiniteTopGroup, k0: Subset) -> Result<(), CoveringError> {
    check_range(g, k0)?;
    if !g.space().is_closed(k0) {
        return Err(CoveringError::NotClosed(k0));
    }
    if g.space().interior(k0).is_empty() {
        return Err(CoveringError::EmptyInterior(k0));
    }
    Ok(())
}

/// `μ_U(K) = (K:U)/(K₀:U)`.
pub fn mu_u(g: &FiniteTopGroup, k: Subset, k0: Subset, u: Subset) -> Result<Rational, CoveringError> {
    check_identity_neighbourhood(g, u)?;
    check_reference(g, k0)?;
    check_range(g, k)?;
    if !g.space().is_closed(k) {
        return Err(CoveringError::NotClosed(k));
    }
    let num = checked_count(g, k, u)?;
    let den = checked_count(g, k0, u)?;
    assert!(den > 0, "nonempty reference set needs at least one translate");
    Ok(Rational::new(num.into(), den.into()))
}

/// `μ_U` tabulated on every closed compact set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioFunctional {
    pub u: Subset,
    pub k0: Subset,
    pub values: BTreeMap<Subset, Rational>,
}

pub fn ratio_functional(g: &FiniteTopGroup, k0: Subset, u: Subset) -> Result<RatioFunctional, CoveringError> {
    check_identity_neighbourhood(g, u)?;
    check_reference(g, k0)?;
    // Closed sets here are exactly the unions of atoms.
    let closed = all_borel_sets(g.atoms()).ok_or(CoveringError::TooManyAtoms { atoms: g.atoms().len() })?;
    let den = checked_count(g, k0, u)?;
    let values = closed
        .into_iter()
        .map(|k| Ok((k, Rational::new(checked_count(g, k, u)?.into(), den.into()))))
        .collect::<Result<_, CoveringError>>()?;
    Ok(RatioFunctional { u, k0, values })
}

/// The limit functional `μ_N` extended to atoms: mass `(A:N)/(K₀:N)` on
/// each atom `A`. The result is checked to be Haar before it is returned.
pub fn existence_via_covering(g: &FiniteTopGroup, k0: Subset) -> Result<FiniteMeasure, CoveringError> {
    check_reference(g, k0)?;
    let n = g.identity_closure();
    let den = checked_count(g, k0, n)?;
    let masses = g
        .atoms()
        .atoms()
        .iter()
        .map(|&a| Ok(Rational::new(checked_count(g, a, n)?.into(), den.into())))
        .collect::<Result<Vec<_>, CoveringError>>()?;
    let mu = FiniteMeasure::new(g, masses)?;
    let report = is_haar(g, &mu, Side::Left)?;
    if !report.is_left_haar() || mu.total().is_zero() {
        return Err(MeasureError::Internal("covering limit is not a Haar measure".into()).into());
    }
    Ok(mu)
}
