//! Exact measures on finite topological groups.
//!
//! A Borel measure on a finite group is a nonnegative rational mass on each
//! Borel atom (coset of `closure{e}`). Radon and Haar conditions are checked
//! against the definitions built on closed compact sets: local finiteness on
//! closed compact sets, outer regularity on Borel sets as an infimum over
//! open supersets, inner regularity on opens as a supremum over closed
//! compact subsets.

use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::function::PointFunction;
use crate::group::{product_group, BorelAtoms, FiniteGroup, FiniteTopGroup, GroupError, Side};
use crate::linalg::null_space;
use crate::quotient::QuotientData;
use crate::rational::{common_denominator, Rational};
use crate::topology::Subset;
use crate::EXHAUSTIVE_ATOM_LIMIT;

/// Witnesses kept per failing axiom.
pub const MAX_WITNESSES_PER_AXIOM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("expected {expected} atom masses, got {got}")]
    MassCountMismatch { expected: usize, got: usize },
    #[error("atom {atom} has negative mass")]
    NegativeMass { atom: usize },
    #[error("measure does not live on this group")]
    MeasureSpaceMismatch,
    #[error("set {0} is not a union of Borel atoms")]
    NotBorel(Subset),
    #[error("function is not constant on atom {atom}")]
    NotMeasurable { atom: Subset },
    #[error("function has {got} values, expected {expected}")]
    FunctionLength { expected: usize, got: usize },
    #[error("measure is not a Radon measure")]
    NotRadon,
    #[error("measure is not a Haar measure")]
    NotHaar,
    #[error("group is not Hausdorff")]
    NotHausdorff,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Nonnegative rational mass per Borel atom of a finite topological group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMeasure {
    points: usize,
    atoms: Vec<Subset>,
    masses: Vec<Rational>,
}

impl FiniteMeasure {
    /// Masses aligned with the canonical atom order of `g`.
    pub fn new(g: &FiniteTopGroup, masses: Vec<Rational>) -> Result<Self, MeasureError> {
        let atoms = g.atoms().atoms().to_vec();
        if masses.len() != atoms.len() {
            return Err(MeasureError::MassCountMismatch {
                expected: atoms.len(),
                got: masses.len(),
            });
        }
        if let Some(atom) = masses.iter().position(|m| *m < Rational::zero()) {
            return Err(MeasureError::NegativeMass { atom });
        }
        Ok(Self { points: g.order(), atoms, masses })
    }

    pub fn zero(g: &FiniteTopGroup) -> Self {
        let k = g.atoms().len();
        Self::new(g, vec![Rational::zero(); k]).unwrap()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn atoms(&self) -> &[Subset] {
        &self.atoms
    }

    pub fn lives_on(&self, g: &FiniteTopGroup) -> bool {
        self.points == g.order() && self.atoms == g.atoms().atoms()
    }

    fn ensure_on(&self, g: &FiniteTopGroup) -> Result<(), MeasureError> {
        if self.lives_on(g) {
            Ok(())
        } else {
            Err(MeasureError::MeasureSpaceMismatch)
        }
    }

    pub fn total(&self) -> Rational {
        self.masses.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.masses.iter().all(Zero::is_zero)
    }

    /// Measure of a Borel set, given by points.
    pub fn measure(&self, set: Subset) -> Result<Rational, MeasureError> {
        let mut total = Rational::zero();
        let mut covered = Subset::EMPTY;
        for (atom, mass) in self.atoms.iter().zip(&self.masses) {
            if atom.is_subset(set) {
                total += mass;
                covered = covered.union(*atom);
            }
        }
        if covered == set {
            Ok(total)
        } else {
            Err(MeasureError::NotBorel(set))
        }
    }

    /// `a·μ`; `a` must be nonnegative.
    pub fn scaled(&self, a: &Rational) -> Result<Self, MeasureError> {
        if *a < Rational::zero() {
            return Err(MeasureError::NegativeMass { atom: 0 });
        }
        Ok(Self {
            points: self.points,
            atoms: self.atoms.clone(),
            masses: self.masses.iter().map(|m| m * a).collect(),
        })
    }
}

/// Which Radon or Haar condition a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Nonzero,
    LeftInvariant,
    RightInvariant,
    LocallyFinite,
    OuterRegular,
    InnerRegularOnOpens,
}

/// A set (and group element, for invariance) on which an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: Axiom,
    pub set: Subset,
    pub element: Option<usize>,
}

/// Regularity part of the Haar conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadonReport {
    pub locally_finite: bool,
    pub outer_regular: bool,
    pub inner_regular_on_opens: bool,
    /// Whether every union of atoms was examined.
    pub exhaustive: bool,
    pub witnesses: Vec<Witness>,
}

impl RadonReport {
    pub fn is_radon(&self) -> bool {
        self.locally_finite && self.outer_regular && self.inner_regular_on_opens
    }
}

/// Every Haar condition, decided separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaarReport {
    pub side: Side,
    pub nonzero: bool,
    pub left_invariant: bool,
    pub right_invariant: bool,
    pub locally_finite: bool,
    pub outer_regular: bool,
    pub inner_regular_on_opens: bool,
    pub exhaustive: bool,
    pub witnesses: Vec<Witness>,
}

impl HaarReport {
    fn radon(&self) -> bool {
        self.locally_finite && self.outer_regular && self.inner_regular_on_opens
    }

    pub fn is_left_haar(&self) -> bool {
        self.nonzero && self.left_invariant && self.radon()
    }

    pub fn is_right_haar(&self) -> bool {
        self.nonzero && self.right_invariant && self.radon()
    }

    /// Verdict for the side this report was requested for.
    pub fn is_haar(&self) -> bool {
        match self.side {
            Side::Left => self.is_left_haar(),
            Side::Right => self.is_right_haar(),
        }
    }
}

/// Permutation of atoms induced by translating with `g` on `side`.
fn atom_permutation(g: &FiniteTopGroup, side: Side, element: usize) -> Result<Vec<usize>, MeasureError> {
    let atoms = g.atoms();
    atoms
        .atoms()
        .iter()
        .map(|&a| {
            let image = g.translate(side, element, a);
            let target = atoms.atom(atoms.atom_of(image.first().unwrap()));
            if target == image {
                Ok(atoms.atom_of(image.first().unwrap()))
            } else {
                Err(MeasureError::Internal(format!("translate of atom {a} is not an atom")))
            }
        })
        .collect()
}

fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    Subset::from_mask(mask)
        .iter()
        .fold(0u64, |acc, i| acc | (1u64 << perm[i]))
}

/// Masses scaled to integers over a common denominator. The comparisons
/// below only need the order, so the denominator can be dropped.
enum ScaledMasses {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

fn scaled_masses(masses: &[Rational]) -> ScaledMasses {
    let den = common_denominator(masses);
    let ints: Vec<BigInt> = masses
        .iter()
        .map(|m| (m * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let total: BigInt = ints.iter().sum();
    if total.to_i128().is_some() {
        ScaledMasses::Small(ints.iter().map(|v| v.to_i128().unwrap()).collect())
    } else {
        ScaledMasses::Big(ints)
    }
}

/// Literal regularity tables over all unions of atoms.
///
/// `outer[S]` is the infimum of `μ(T)` over open `T ⊇ S`; `inner[S]` is the
/// supremum of `μ(C)` over closed compact `C ⊆ S`. Both are filled by
/// dynamic programming over one-atom extensions.
struct RegularityTables<T> {
    mass: Vec<T>,
    outer: Vec<Option<T>>,
    inner: Vec<Option<T>>,
}

fn regularity_tables<T>(weights: &[T], open: &[bool], closed_compact: &[bool]) -> RegularityTables<T>
where
    T: Clone + Ord + Zero + Add<Output = T>,
{
    let k = weights.len();
    let size = 1usize << k;
    let mut mass: Vec<T> = Vec::with_capacity(size);
    mass.push(T::zero());
    for s in 1..size {
        let low = s.trailing_zeros() as usize;
        let value = mass[s & (s - 1)].clone() + weights[low].clone();
        mass.push(value);
    }

    let mut outer: Vec<Option<T>> = vec![None; size];
    for s in (0..size).rev() {
        let mut best = open[s].then(|| mass[s].clone());
        for a in 0..k {
            if s & (1 << a) == 0 {
                if let Some(v) = &outer[s | (1 << a)] {
                    if best.as_ref().is_none_or(|b| v < b) {
                        best = Some(v.clone());
                    }
                }
            }
        }
        outer[s] = best;
    }

    let mut inner: Vec<Option<T>> = vec![None; size];
    for s in 0..size {
        let mut best = closed_compact[s].then(|| mass[s].clone());
        for a in 0..k {
            if s & (1 << a) != 0 {
                if let Some(v) = &inner[s & !(1 << a)] {
                    if best.as_ref().is_none_or(|b| v > b) {
                        best = Some(v.clone());
                    }
                }
            }
        }
        inner[s] = best;
    }
    RegularityTables { mass, outer, inner }
}

/// Which unions of atoms are open and which are closed compact.
fn lattice_tables(g: &FiniteTopGroup) -> (Vec<bool>, Vec<bool>) {
    let atoms = g.atoms();
    let space = g.space();
    (0..1u64 << atoms.len())
        .map(|m| {
            let s = atoms.union_of(m);
            (space.is_open(s), space.is_closed_compact(s))
        })
        .unzip()
}

struct RegularityOutcome {
    outer_failures: Vec<u64>,
    inner_failures: Vec<u64>,
}

fn regularity_failures<T>(tables: &RegularityTables<T>, open: &[bool]) -> RegularityOutcome
where
    T: PartialEq,
{
    let mut outer_failures = Vec::new();
    let mut inner_failures = Vec::new();
    for s in 0..tables.mass.len() {
        if tables.outer[s].as_ref() != Some(&tables.mass[s]) {
            outer_failures.push(s as u64);
        }
        if open[s] && tables.inner[s].as_ref() != Some(&tables.mass[s]) {
            inner_failures.push(s as u64);
        }
    }
    RegularityOutcome { outer_failures, inner_failures }
}

/// Local finiteness and both regularity conditions.
pub fn radon_report(g: &FiniteTopGroup, mu: &FiniteMeasure) -> Result<RadonReport, MeasureError> {
    mu.ensure_on(g)?;
    let atoms = g.atoms();
    // Masses are finite rationals, so every closed compact set has finite
    // measure.
    let locally_finite = true;
    let mut witnesses = Vec::new();

    if atoms.len() > EXHAUSTIVE_ATOM_LIMIT {
        // Every atom clopen makes every union of atoms clopen, and then the
        // infimum and supremum are attained at the set itself.
        let space = g.space();
        let clopen = atoms
            .atoms()
            .iter()
            .find(|&&a| !(space.is_open(a) && space.is_closed(a)));
        if let Some(&a) = clopen {
            witnesses.push(Witness { axiom: Axiom::OuterRegular, set: a, element: None });
        }
        return Ok(RadonReport {
            locally_finite,
            outer_regular: clopen.is_none(),
            inner_regular_on_opens: clopen.is_none(),
            exhaustive: false,
            witnesses,
        });
    }

    let (open, closed) = lattice_tables(g);
    let outcome = match scaled_masses(mu.masses()) {
        ScaledMasses::Small(w) => regularity_failures(&regularity_tables(&w, &open, &closed), &open),
        ScaledMasses::Big(w) => regularity_failures(&regularity_tables(&w, &open, &closed), &open),
    };
    for (axiom, failures) in [
        (Axiom::OuterRegular, &outcome.outer_failures),
        (Axiom::InnerRegularOnOpens, &outcome.inner_failures),
    ] {
        witnesses.extend(failures.iter().take(MAX_WITNESSES_PER_AXIOM).map(|&m| Witness {
            axiom,
            set: atoms.union_of(m),
            element: None,
        }));
    }
    Ok(RadonReport {
        locally_finite,
        outer_regular: outcome.outer_failures.is_empty(),
        inner_regular_on_opens: outcome.inner_failures.is_empty(),
        exhaustive: true,
        witnesses,
    })
}

/// Invariance failures for one side, as (atom mask, element) in canonical
/// order.
fn invariance_failures(
    g: &FiniteTopGroup,
    mu: &FiniteMeasure,
    side: Side,
    limit: usize,
) -> Result<(Vec<(u64, usize)>, bool), MeasureError> {
    let k = g.atoms().len();
    let perms: Vec<Vec<usize>> = (0..g.order())
        .map(|x| atom_permutation(g, side, x))
        .collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    let mut holds = true;
    if k > EXHAUSTIVE_ATOM_LIMIT {
        // Translations permute atoms, so invariance on atoms extends to all
        // unions by additivity.
        for i in 0..k {
            for (x, perm) in perms.iter().enumerate() {
                if mu.masses[perm[i]] != mu.masses[i] {
                    holds = false;
                    if failures.len() < limit {
                        failures.push((1u64 << i, x));
                    }
                }
            }
        }
        return Ok((failures, holds));
    }
    let mass: Vec<Rational> = {
        let mut m = vec![Rational::zero(); 1 << k];
        for s in 1..(1usize << k) {
            let low = s.trailing_zeros() as usize;
            m[s] = &m[s & (s - 1)] + &mu.masses[low];
        }
        m
    };
    for s in 0..(1u64 << k) {
        for (x, perm) in perms.iter().enumerate() {
            if mass[permute_mask(s, perm) as usize] != mass[s as usize] {
                holds = false;
                if failures.len() < limit {
                    failures.push((s, x));
                }
            }
        }
        if !holds && failures.len() >= limit {
            break;
        }
    }
    Ok((failures, holds))
}

/// Checks every Haar condition; `side` selects the verdict of
/// [`HaarReport::is_haar`]. Both invariances are always reported.
pub fn is_haar(g: &FiniteTopGroup, mu: &FiniteMeasure, side: Side) -> Result<HaarReport, MeasureError> {
    let radon = radon_report(g, mu)?;
    let atoms = g.atoms();
    let mut witnesses = Vec::new();

    let nonzero = !mu.is_zero();
    if !nonzero {
        witnesses.push(Witness { axiom: Axiom::Nonzero, set: g.group().elements(), element: None });
    }
    let (left_failures, left_invariant) = invariance_failures(g, mu, Side::Left, MAX_WITNESSES_PER_AXIOM)?;
    let (right_failures, right_invariant) = invariance_failures(g, mu, Side::Right, MAX_WITNESSES_PER_AXIOM)?;
    for (axiom, failures) in [(Axiom::LeftInvariant, left_failures), (Axiom::RightInvariant, right_failures)] {
        witnesses.extend(failures.into_iter().map(|(m, x)| Witness {
            axiom,
            set: atoms.union_of(m),
            element: Some(x),
        }));
    }
    witnesses.extend(radon.witnesses.iter().cloned());

    Ok(HaarReport {
        side,
        nonzero,
        left_invariant,
        right_invariant,
        locally_finite: radon.locally_finite,
        outer_regular: radon.outer_regular,
        inner_regular_on_opens: radon.inner_regular_on_opens,
        exhaustive: radon.exhaustive,
        witnesses,
    })
}

/// Mass one on every atom: the counting measure of the quotient pulled back
/// to `g`, normalised by `μ(closure{e}) = 1`.
pub fn canonical_haar(g: &FiniteTopGroup) -> FiniteMeasure {
    let k = g.atoms().len();
    FiniteMeasure::new(g, vec![Rational::from_integer(1.into()); k]).unwrap()
}

/// Solutions of the invariance equations over atom masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaarSolutionSpace {
    pub dimension: usize,
    pub basis: Vec<FiniteMeasure>,
}

/// Left Haar solution space.
pub fn haar_solution_space(g: &FiniteTopGroup) -> Result<HaarSolutionSpace, MeasureError> {
    haar_solution_space_for(g, Side::Left)
}

/// Solves `m[perm_x(i)] = m[i]` for every element `x` and atom `i` exactly.
/// Each basis vector is scaled so its first nonzero mass is 1 and must be
/// nonnegative and pass [`is_haar`].
pub fn haar_solution_space_for(g: &FiniteTopGroup, side: Side) -> Result<HaarSolutionSpace, MeasureError> {
    let k = g.atoms().len();
    let mut rows = Vec::new();
    for x in 0..g.order() {
        let perm = atom_permutation(g, side, x)?;
        for (i, &j) in perm.iter().enumerate() {
            if i != j {
                let mut row = vec![Rational::zero(); k];
                row[i] += Rational::from_integer(1.into());
                row[j] -= Rational::from_integer(1.into());
                rows.push(row);
            }
        }
    }
    let vectors = null_space(rows, k);
    let mut basis = Vec::with_capacity(vectors.len());
    for v in vectors {
        let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
        let normalised: Vec<Rational> = v.iter().map(|x| x / &lead).collect();
        let measure = FiniteMeasure::new(g, normalised)
            .map_err(|_| MeasureError::Internal("invariant solution with mixed signs".into()))?;
        if !is_haar(g, &measure, side)?.is_haar() {
            return Err(MeasureError::Internal("invariant solution is not Haar".into()));
        }
        basis.push(measure);
    }
    Ok(HaarSolutionSpace { dimension: basis.len(), basis })
}

/// For left Haar measures `μ` and `μ'`, the constant `a = μ'(G)/μ(G)`,
/// returned only if `μ' = a·μ` on every atom.
pub fn haar_ratio(
    g: &FiniteTopGroup,
    mu: &FiniteMeasure,
    mu_prime: &FiniteMeasure,
) -> Result<Option<Rational>, MeasureError> {
    for m in [mu, mu_prime] {
        if !is_haar(g, m, Side::Left)?.is_left_haar() {
            return Err(MeasureError::NotHaar);
        }
    }
    let a = mu_prime.total() / mu.total();
    let matches = mu
        .masses()
        .iter()
        .zip(mu_prime.masses())
        .all(|(m, mp)| &(m * &a) == mp);
    Ok(matches.then_some(a))
}

/// `μ'(E) = μ(E⁻¹)`.
pub fn invert_measure(g: &FiniteTopGroup, mu: &FiniteMeasure) -> Result<FiniteMeasure, MeasureError> {
    mu.ensure_on(g)?;
    let atoms = g.atoms();
    let masses = atoms
        .atoms()
        .iter()
        .map(|&a| {
            let inverse = g.group().inverse_set(a);
            let j = atoms.atom_of(inverse.first().unwrap());
            if atoms.atom(j) != inverse {
                return Err(MeasureError::Internal(format!("inverse of atom {a} is not an atom")));
            }
            Ok(mu.masses[j].clone())
        })
        .collect::<Result<Vec<_>, _>>()?;
    FiniteMeasure::new(g, masses)
}

/// `π_*μ(F) = μ(π⁻¹(F))`, a measure on the quotient.
pub fn pushforward(q: &QuotientData, mu: &FiniteMeasure) -> Result<FiniteMeasure, MeasureError> {
    mu.ensure_on(q.base())?;
    let target = q.quotient();
    let masses = target
        .atoms()
        .atoms()
        .iter()
        .map(|&f| mu.measure(q.preimage(f)))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteMeasure::new(target, masses)
}

/// `π^*ν(E) = ν(π(E))`, a measure on the base group. The outer and inner
/// regularity values of the result are compared with those of `ν` on every
/// union of atoms.
pub fn pullback(q: &QuotientData, nu: &FiniteMeasure) -> Result<FiniteMeasure, MeasureError> {
    nu.ensure_on(q.quotient())?;
    let base = q.base();
    let masses = base
        .atoms()
        .atoms()
        .iter()
        .map(|&a| nu.measure(q.image(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let pulled = FiniteMeasure::new(base, masses)?;
    replay_pullback_regularity(q, nu, &pulled)?;
    Ok(pulled)
}

/// Regularity infima and suprema of `π^*ν` over opens and closed compact sets
/// of the base coincide with those of `ν` over the quotient.
fn replay_pullback_regularity(
    q: &QuotientData,
    nu: &FiniteMeasure,
    pulled: &FiniteMeasure,
) -> Result<(), MeasureError> {
    let base = q.base();
    let target = q.quotient();
    let k = base.atoms().len();
    if k > EXHAUSTIVE_ATOM_LIMIT {
        return Ok(());
    }
    // Base atom i projects onto quotient point i, so atom masks align.
    for i in 0..k {
        if q.image(base.atoms().atom(i)) != target.atoms().atom(i) {
            return Err(MeasureError::Internal("atom order differs across the projection".into()));
        }
    }
    let (open_b, closed_b) = lattice_tables(base);
    let (open_q, closed_q) = lattice_tables(target);
    let den = common_denominator(nu.masses().iter().chain(pulled.masses()));
    let scale = |m: &FiniteMeasure| -> Vec<BigInt> {
        m.masses()
            .iter()
            .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
            .collect()
    };
    let tb = regularity_tables(&scale(pulled), &open_b, &closed_b);
    let tq = regularity_tables(&scale(nu), &open_q, &closed_q);
    for s in 0..(1usize << k) {
        if tb.outer[s] != tq.outer[s] {
            return Err(MeasureError::Internal(format!("outer regularity differs on atom mask {s:#b}")));
        }
        if open_b[s] && tb.inner[s] != tq.inner[s] {
            return Err(MeasureError::Internal(format!("inner regularity differs on atom mask {s:#b}")));
        }
    }
    Ok(())
}

fn ensure_function_len(f: &PointFunction, expected: usize) -> Result<(), MeasureError> {
    if f.len() == expected {
        Ok(())
    } else {
        Err(MeasureError::FunctionLength { expected, got: f.len() })
    }
}

/// `∫ f dμ` for `f` constant on each atom.
pub fn integrate(g: &FiniteTopGroup, f: &PointFunction, mu: &FiniteMeasure) -> Result<Rational, MeasureError> {
    mu.ensure_on(g)?;
    ensure_function_len(f, g.order())?;
    integrate_on_atoms(g.atoms(), f, mu)
}

fn integrate_on_atoms(atoms: &BorelAtoms, f: &PointFunction, mu: &FiniteMeasure) -> Result<Rational, MeasureError> {
    let mut total = Rational::zero();
    for (&atom, mass) in atoms.atoms().iter().zip(mu.masses()) {
        if !f.is_constant_on(atom) {
            return Err(MeasureError::NotMeasurable { atom });
        }
        total += f.value(atom.first().unwrap()) * mass;
    }
    Ok(total)
}

/// `x ↦ f(g·x)` (left) or `x ↦ f(x·g)` (right).
pub fn translate_function(g: &FiniteTopGroup, f: &PointFunction, side: Side, element: usize) -> PointFunction {
    let group = g.group();
    PointFunction::new(
        (0..g.order())
            .map(|x| {
                let y = match side {
                    Side::Left => group.mul(element, x),
                    Side::Right => group.mul(x, element),
                };
                f.value(y).clone()
            })
            .collect(),
    )
}

/// Both iterated integrals of a function on `g × h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FubiniOutcome {
    /// `∫_g ∫_h f(x,y) dλ(y) dμ(x)`.
    pub lhs: Rational,
    /// `∫_h ∫_g f(x,y) dμ(x) dλ(y)`.
    pub rhs: Rational,
}

impl FubiniOutcome {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Iterated integrals in both orders, each through its own slices. The
/// point `(x, y)` of `g × h` is index `x * |h| + y`.
pub fn fubini_check(
    g: &FiniteTopGroup,
    h: &FiniteTopGroup,
    f: &PointFunction,
    mu: &FiniteMeasure,
    lam: &FiniteMeasure,
) -> Result<FubiniOutcome, MeasureError> {
    mu.ensure_on(g)?;
    lam.ensure_on(h)?;
    let (n, m) = (g.order(), h.order());
    ensure_function_len(f, n * m)?;
    for (group, measure) in [(g, mu), (h, lam)] {
        if !radon_report(group, measure)?.is_radon() {
            return Err(MeasureError::NotRadon);
        }
    }
    let product_atom = |x: usize, y: usize| -> Subset {
        let a = g.atoms().atom(g.atoms().atom_of(x));
        let b = h.atoms().atom(h.atoms().atom_of(y));
        a.iter().flat_map(|p| b.iter().map(move |q| p * m + q)).collect()
    };
    let relabel = |e: MeasureError, x: Option<usize>, y: Option<usize>| match e {
        MeasureError::NotMeasurable { atom } => {
            let (px, py) = match (x, y) {
                (Some(x), None) => (x, atom.first().unwrap()),
                (None, Some(y)) => (atom.first().unwrap(), y),
                _ => unreachable!(),
            };
            MeasureError::NotMeasurable { atom: product_atom(px, py) }
        }
        other => other,
    };

    let inner_over_h: Vec<Rational> = (0..n)
        .map(|x| {
            let slice = PointFunction::new((0..m).map(|y| f.value(x * m + y).clone()).collect());
            integrate(h, &slice, lam).map_err(|e| relabel(e, Some(x), None))
        })
        .collect::<Result<_, _>>()?;
    let lhs = integrate(g, &PointFunction::new(inner_over_h), mu)?;

    let inner_over_g: Vec<Rational> = (0..m)
        .map(|y| {
            let slice = PointFunction::new((0..n).map(|x| f.value(x * m + y).clone()).collect());
            integrate(g, &slice, mu).map_err(|e| relabel(e, None, Some(y)))
        })
        .collect::<Result<_, _>>()?;
    let rhs = integrate(h, &PointFunction::new(inner_over_g), lam)?;

    Ok(FubiniOutcome { lhs, rhs })
}

/// Whether `μ1` and `μ2` give the same integral to every atom indicator,
/// which span the compactly supported continuous functions here.
pub fn riesz_check(g: &FiniteTopGroup, mu1: &FiniteMeasure, mu2: &FiniteMeasure) -> Result<bool, MeasureError> {
    for mu in [mu1, mu2] {
        mu.ensure_on(g)?;
        if !radon_report(g, mu)?.is_radon() {
            return Err(MeasureError::NotRadon);
        }
    }
    for &atom in g.atoms().atoms() {
        let f = PointFunction::indicator(g.order(), atom);
        if integrate(g, &f, mu1)? != integrate(g, &f, mu2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positivity facts for a Haar measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    /// Some closed compact set has positive measure.
    pub closed_compact_positive: bool,
    /// Every nonempty open set has positive measure.
    pub opens_positive: bool,
    /// Every nonzero nonnegative atom indicator has positive integral.
    pub integrals_positive: bool,
    pub exhaustive: bool,
    /// First nonempty open set of measure zero, if any.
    pub witness: Option<Subset>,
}

impl PositivityReport {
    pub fn all_hold(&self) -> bool {
        self.closed_compact_positive && self.opens_positive && self.integrals_positive
    }
}

pub fn positivity_report(g: &FiniteTopGroup, mu: &FiniteMeasure) -> Result<PositivityReport, MeasureError> {
    let report = is_haar(g, mu, Side::Left)?;
    if !(report.is_left_haar() || report.is_right_haar()) {
        return Err(MeasureError::NotHaar);
    }
    let space = g.space();
    let exhaustive = g.atoms().len() <= EXHAUSTIVE_ATOM_LIMIT;
    let (opens, closed) = if exhaustive {
        (space.opens(), space.closed_sets())
    } else {
        // Every nonempty open contains a minimal open set.
        let mut closed = g.atoms().atoms().to_vec();
        closed.push(space.full());
        (space.minimal_neighbourhoods().to_vec(), closed)
    };
    let positive = |s: Subset| mu.measure(s).map(|v| v > Rational::zero());

    let mut closed_compact_positive = false;
    for &c in closed.iter().filter(|&&c| space.is_closed_compact(c)) {
        if positive(c)? {
            closed_compact_positive = true;
            break;
        }
    }
    let mut witness = None;
    for &u in opens.iter().filter(|u| !u.is_empty()) {
        if !positive(u)? {
            witness = Some(u);
            break;
        }
    }
    let mut integrals_positive = true;
    for &atom in g.atoms().atoms() {
        let f = PointFunction::indicator(g.order(), atom);
        if integrate(g, &f, mu)? <= Rational::zero() {
            integrals_positive = false;
        }
    }
    Ok(PositivityReport {
        closed_compact_positive,
        opens_positive: witness.is_none(),
        integrals_positive,
        exhaustive,
        witness,
    })
}

/// `X × G` with opens `U × G`, and its Haar measure `E ↦ μ(π_X(E))` for the
/// canonical Haar measure `μ` of a Hausdorff `X`.
pub fn product_haar(x: &FiniteTopGroup, g: &FiniteGroup) -> Result<(FiniteTopGroup, FiniteMeasure), MeasureError> {
    if !x.is_hausdorff() {
        return Err(MeasureError::NotHausdorff);
    }
    let product = product_group(x, &FiniteTopGroup::indiscrete(g.clone()))?;
    let mu = canonical_haar(x);
    let m = g.order();
    let masses = product
        .atoms()
        .atoms()
        .iter()
        .map(|&e| {
            let projected: Subset = e.iter().map(|p| p / m).collect();
            mu.measure(projected)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let measure = FiniteMeasure::new(&product, masses)?;
    Ok((product, measure))
}
