//! Finite topological spaces.
//!
//! A finite topology is determined by the smallest open set containing each
//! point (its minimal neighbourhood); opens are exactly the unions of
//! minimal neighbourhoods. [`FiniteSpace`] stores those neighbourhoods and
//! answers openness, closure and interior queries with bit operations. The
//! full open family is materialised on demand by [`FiniteSpace::opens`].
//!
//! Regularity and normality follow the non-T1 convention: a regular space
//! only has to separate a point from a closed set missing it.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::function::PointFunction;

/// Largest point count a membership mask can describe.
pub const MAX_POINTS: usize = 64;

/// Default bound for [`enumerate_topologies`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 4;

/// A set of point indices, as a 64-bit membership mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_mask(mask: u64) -> Self {
        Subset(mask)
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        Subset(1u64 << x)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        points.into_iter().fold(Subset::EMPTY, |s, x| s.with(x))
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 & (1u64 << x) != 0
    }

    #[must_use]
    pub fn with(self, x: usize) -> Self {
        Subset(self.0 | (1u64 << x))
    }

    #[must_use]
    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    /// Complement inside `0..n`.
    #[must_use]
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True when every member is below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(Subset::full(n))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_points(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("{n} points exceed the mask width of {MAX_POINTS}")]
    TooManyPoints { n: usize },
    #[error("subset {set} mentions points outside 0..{n}")]
    SubsetOutOfRange { set: Subset, n: usize },
    #[error("open family must contain the empty set and the whole space")]
    MissingTrivialOpens,
    #[error("open set {0} listed twice")]
    DuplicateOpen(Subset),
    #[error("opens {0} and {1} have a union that is not open")]
    NotClosedUnderUnion(Subset, Subset),
    #[error("opens {0} and {1} have an intersection that is not open")]
    NotClosedUnderIntersection(Subset, Subset),
    #[error("minimal neighbourhood of point {point} is not consistent")]
    NotPreorder { point: usize },
    #[error("space is not regular")]
    NotRegular,
    #[error("space is not strongly locally compact")]
    NotStronglyLocallyCompact,
    #[error("sets {0} and {1} are not disjoint")]
    NotDisjoint(Subset, Subset),
    #[error("set {0} is not closed")]
    NotClosed(Subset),
    #[error("set {0} is not open")]
    NotOpen(Subset),
    #[error("{k} is not covered by {u1} and {u2}")]
    NotCovered { k: Subset, u1: Subset, u2: Subset },
    #[error("{k} is not contained in {u}")]
    NotNested { k: Subset, u: Subset },
    #[error("cannot enumerate topologies on {n} points (limit {limit})")]
    TooLarge { n: usize, limit: usize },
}

/// Separation and compactness properties, each decided from the topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationFlags {
    pub hausdorff: bool,
    pub regular: bool,
    pub normal: bool,
    pub locally_compact: bool,
    pub strongly_locally_compact: bool,
    pub base_compact_nbhds: bool,
    pub base_closed_compact_nbhds: bool,
}

/// A topology on the points `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    /// `nbhd[x]` is the intersection of all opens containing `x`.
    nbhd: Vec<Subset>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("n", &self.len())
            .field("minimal_neighbourhoods", &self.nbhd)
            .finish()
    }
}

impl FiniteSpace {
    /// Builds a space from an explicit open family, checking that it contains
    /// the trivial opens, has no repeats and is closed under pairwise union
    /// and intersection.
    pub fn from_opens(
        n: usize,
        opens: impl IntoIterator<Item = Subset>,
    ) -> Result<Self, TopologyError> {
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints { n });
        }
        let mut family = BTreeSet::new();
        for open in opens {
            if !open.fits(n) {
                return Err(TopologyError::SubsetOutOfRange { set: open, n });
            }
            if !family.insert(open) {
                return Err(TopologyError::DuplicateOpen(open));
            }
        }
        if !family.contains(&Subset::EMPTY) || !family.contains(&Subset::full(n)) {
            return Err(TopologyError::MissingTrivialOpens);
        }
        let list: Vec<Subset> = family.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if !family.contains(&a.union(b)) {
                    return Err(TopologyError::NotClosedUnderUnion(a, b));
                }
                if !family.contains(&a.intersection(b)) {
                    return Err(TopologyError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        let nbhd = (0..n)
            .map(|x| {
                list.iter()
                    .filter(|o| o.contains(x))
                    .fold(Subset::full(n), |acc, &o| acc.intersection(o))
            })
            .collect();
        Ok(Self { nbhd })
    }

    /// Builds a space from the minimal neighbourhood of every point. The
    /// neighbourhoods must describe a preorder: `x` lies in its own
    /// neighbourhood, and `y` in the neighbourhood of `x` forces the
    /// neighbourhood of `y` inside that of `x`.
    pub fn from_minimal_neighbourhoods(nbhd: Vec<Subset>) -> Result<Self, TopologyError> {
        let n = nbhd.len();
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints { n });
        }
        for (x, &u) in nbhd.iter().enumerate() {
            if !u.fits(n) {
                return Err(TopologyError::SubsetOutOfRange { set: u, n });
            }
            if !u.contains(x) || u.iter().any(|y| !nbhd[y].is_subset(u)) {
                return Err(TopologyError::NotPreorder { point: x });
            }
        }
        Ok(Self { nbhd })
    }

    pub fn discrete(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        Self {
            nbhd: (0..n).map(Subset::singleton).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        Self {
            nbhd: vec![Subset::full(n); n],
        }
    }

    /// Two points with opens `{}, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        Self {
            nbhd: vec![Subset::full(2), Subset::singleton(1)],
        }
    }

    /// Topology whose opens are the unions of the given blocks. The blocks
    /// must partition `0..n`.
    pub fn partition(n: usize, blocks: &[Subset]) -> Result<Self, TopologyError> {
        let mut nbhd = vec![Subset::EMPTY; n];
        for &block in blocks {
            for x in block.iter() {
                if x >= n {
                    return Err(TopologyError::SubsetOutOfRange { set: block, n });
                }
                nbhd[x] = block;
            }
        }
        Self::from_minimal_neighbourhoods(nbhd)
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.nbhd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbhd.is_empty()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Smallest open set containing `x`.
    pub fn minimal_neighbourhood(&self, x: usize) -> Subset {
        self.nbhd[x]
    }

    pub fn minimal_neighbourhoods(&self) -> &[Subset] {
        &self.nbhd
    }

    pub fn check_subset(&self, s: Subset) -> Result<(), TopologyError> {
        if s.fits(self.len()) {
            Ok(())
        } else {
            Err(TopologyError::SubsetOutOfRange { set: s, n: self.len() })
        }
    }

    pub fn is_open(&self, s: Subset) -> bool {
        s.fits(self.len()) && s.iter().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        s.fits(self.len()) && self.is_open(s.complement(self.len()))
    }

    /// Every subset of a finite space is compact.
    pub fn is_compact(&self, s: Subset) -> bool {
        s.fits(self.len())
    }

    pub fn is_closed_compact(&self, s: Subset) -> bool {
        self.is_closed(s) && self.is_compact(s)
    }

    /// Largest open subset of `s`. Points beyond the space are ignored.
    pub fn interior(&self, s: Subset) -> Subset {
        (0..self.len())
            .filter(|&x| s.contains(x) && self.nbhd[x].is_subset(s))
            .collect()
    }

    /// Smallest closed superset of `s`. Points beyond the space are ignored.
    pub fn closure(&self, s: Subset) -> Subset {
        let n = self.len();
        self.interior(s.complement(n)).complement(n)
    }

    /// Smallest open superset of `s`.
    pub fn open_hull(&self, s: Subset) -> Subset {
        s.intersection(self.full())
            .iter()
            .fold(Subset::EMPTY, |acc, x| acc.union(self.nbhd[x]))
    }

    /// All open sets in increasing mask order. Exponential in the number of
    /// distinct minimal neighbourhoods.
    pub fn opens(&self) -> Vec<Subset> {
        let mut found = BTreeSet::from([Subset::EMPTY]);
        let mut distinct: Vec<Subset> = self.nbhd.clone();
        distinct.sort();
        distinct.dedup();
        for u in distinct {
            let grown: Vec<Subset> = found.iter().map(|o| o.union(u)).collect();
            found.extend(grown);
        }
        found.into_iter().collect()
    }

    /// All closed sets in increasing mask order.
    pub fn closed_sets(&self) -> Vec<Subset> {
        let n = self.len();
        let mut closed: Vec<Subset> = self.opens().into_iter().map(|o| o.complement(n)).collect();
        closed.sort();
        closed
    }

    /// Partition of the points into minimal nonempty sets of the algebra
    /// generated by the opens, ordered by smallest member. Two points share
    /// an atom iff no open set separates them.
    pub fn borel_atoms(&self) -> Vec<Subset> {
        let mut atoms: Vec<Subset> = Vec::new();
        let mut seen = Subset::EMPTY;
        for x in 0..self.len() {
            if seen.contains(x) {
                continue;
            }
            let atom: Subset = (x..self.len())
                .filter(|&y| self.nbhd[y] == self.nbhd[x])
                .collect();
            seen = seen.union(atom);
            atoms.push(atom);
        }
        atoms
    }

    /// Decides every flag from the minimal neighbourhoods.
    ///
    /// Each quantifier over open or closed sets collapses onto an extreme
    /// witness: the smallest open containing a set is its open hull, and the
    /// largest closed set avoiding `x` is the complement of `nbhd(x)`.
    pub fn separation_flags(&self) -> SeparationFlags {
        let n = self.len();
        let points = 0..n;
        let full = self.full();

        let hausdorff = points.clone().all(|x| {
            (x + 1..n).all(|y| self.nbhd[x].is_disjoint(self.nbhd[y]))
        });

        let regular = points.clone().all(|x| {
            let far = self.nbhd[x].complement(n);
            self.nbhd[x].is_disjoint(self.open_hull(far))
        });

        // Disjoint closed sets A, B fail to separate iff some point has both
        // an element of A and an element of B in its closure.
        let point_closures: Vec<Subset> = points
            .clone()
            .map(|x| self.closure(Subset::singleton(x)))
            .collect();
        let normal = point_closures.iter().all(|&cz| {
            cz.iter().all(|a| {
                cz.iter()
                    .all(|b| !point_closures[a].is_disjoint(point_closures[b]))
            })
        });

        let is_neighbourhood = |k: Subset, x: usize| self.interior(k).contains(x);

        let locally_compact = points
            .clone()
            .all(|x| self.is_compact(full) && is_neighbourhood(full, x));
        let strongly_locally_compact = points.clone().all(|x| {
            let candidate = self.closure(self.nbhd[x]);
            self.is_closed_compact(candidate) && is_neighbourhood(candidate, x)
        });
        // Every open containing x contains nbhd(x), so it suffices to fit a
        // neighbourhood inside nbhd(x) itself.
        let base_compact_nbhds = points.clone().all(|x| {
            let candidate = self.nbhd[x];
            self.is_compact(candidate) && is_neighbourhood(candidate, x)
        });
        let base_closed_compact_nbhds = points.clone().all(|x| {
            let candidate = self.closure(self.nbhd[x]);
            candidate.is_subset(self.nbhd[x]) && self.is_closed_compact(candidate)
        });

        SeparationFlags {
            hausdorff,
            regular,
            normal,
            locally_compact,
            strongly_locally_compact,
            base_compact_nbhds,
            base_closed_compact_nbhds,
        }
    }

    pub fn is_regular(&self) -> bool {
        self.separation_flags().regular
    }

    /// Disjoint opens `(U, V)` with `a ⊆ U` and `b ⊆ V`, for `a` compact and
    /// `b` closed in a regular space. Returns the smallest such pair in mask
    /// order, which is the pair of open hulls.
    pub fn separate(&self, a: Subset, b: Subset) -> Result<(Subset, Subset), TopologyError> {
        self.check_subset(a)?;
        self.check_subset(b)?;
        if !a.is_disjoint(b) {
            return Err(TopologyError::NotDisjoint(a, b));
        }
        if !self.is_closed(b) {
            return Err(TopologyError::NotClosed(b));
        }
        if !self.is_regular() {
            return Err(TopologyError::NotRegular);
        }
        let u = self.open_hull(a);
        let v = self.open_hull(b);
        if !u.is_disjoint(v) {
            return Err(TopologyError::NotRegular);
        }
        Ok((u, v))
    }

    /// Splits a closed compact `k ⊆ u1 ∪ u2` into closed compact pieces
    /// `k1 ⊆ u1`, `k2 ⊆ u2` with `k1 ∪ k2 = k`: separate `k \ u1` from
    /// `k \ u2` by opens `v1, v2` and take `ki = k \ vi`.
    pub fn split_compact(
        &self,
        k: Subset,
        u1: Subset,
        u2: Subset,
    ) -> Result<(Subset, Subset), TopologyError> {
        for s in [k, u1, u2] {
            self.check_subset(s)?;
        }
        if !self.is_closed(k) {
            return Err(TopologyError::NotClosed(k));
        }
        for u in [u1, u2] {
            if !self.is_open(u) {
                return Err(TopologyError::NotOpen(u));
            }
        }
        if !k.is_subset(u1.union(u2)) {
            return Err(TopologyError::NotCovered { k, u1, u2 });
        }
        let l1 = k.difference(u1);
        let l2 = k.difference(u2);
        let (v1, v2) = self.separate(l1, l2)?;
        Ok((k.difference(v1), k.difference(v2)))
    }

    /// An open `U` and closed compact `L` with `k ⊆ U ⊆ L`, assembled from a
    /// finite cover of `k` by point neighbourhoods and their closures.
    pub fn closed_compact_sandwich(&self, k: Subset) -> Result<(Subset, Subset), TopologyError> {
        self.check_subset(k)?;
        if !self.separation_flags().strongly_locally_compact {
            return Err(TopologyError::NotStronglyLocallyCompact);
        }
        let mut u = Subset::EMPTY;
        let mut l = Subset::EMPTY;
        for x in k.iter() {
            let ux = self.nbhd[x];
            u = u.union(ux);
            l = l.union(self.closure(ux));
        }
        Ok((u, l))
    }

    /// Finite Urysohn function: continuous `g` with `1_k <= g <= 1_u` and
    /// closed support inside `u`. In a regular finite space the open hull
    /// of a closed set is clopen, so its indicator works.
    pub fn urysohn_finite(&self, k: Subset, u: Subset) -> Result<PointFunction, TopologyError> {
        self.check_subset(k)?;
        self.check_subset(u)?;
        if !self.is_closed(k) {
            return Err(TopologyError::NotClosed(k));
        }
        if !self.is_open(u) {
            return Err(TopologyError::NotOpen(u));
        }
        if !k.is_subset(u) {
            return Err(TopologyError::NotNested { k, u });
        }
        let flags = self.separation_flags();
        if !flags.regular {
            return Err(TopologyError::NotRegular);
        }
        let support = self.open_hull(k);
        debug_assert!(self.is_closed(support) && support.is_subset(u));
        Ok(PointFunction::indicator(self.len(), support))
    }

    /// Sorted open family, the canonical ordering key between spaces.
    pub fn canonical_key(&self) -> Vec<Subset> {
        self.opens()
    }
}

/// All topologies on `n` labelled points, with the default size limit.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>, TopologyError> {
    enumerate_topologies_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

/// All topologies on `n` labelled points in canonical order (by sorted open
/// family). Topologies correspond to preorders, which are generated by
/// backtracking over the minimal neighbourhood of each point.
pub fn enumerate_topologies_with_limit(
    n: usize,
    limit: usize,
) -> Result<Vec<FiniteSpace>, TopologyError> {
    if n > limit || n > MAX_POINTS {
        return Err(TopologyError::TooLarge { n, limit });
    }
    let mut out = Vec::new();
    let mut nbhd = vec![Subset::EMPTY; n];
    assign_neighbourhood(0, n, &mut nbhd, &mut out);
    let mut keyed: Vec<(Vec<Subset>, FiniteSpace)> =
        out.into_iter().map(|s| (s.canonical_key(), s)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

fn assign_neighbourhood(x: usize, n: usize, nbhd: &mut Vec<Subset>, out: &mut Vec<FiniteSpace>) {
    if x == n {
        out.push(FiniteSpace { nbhd: nbhd.clone() });
        return;
    }
    let others = Subset::full(n).difference(Subset::singleton(x));
    let mut sub = others.mask();
    loop {
        let candidate = Subset::from_mask(sub).with(x);
        if consistent_with_assigned(x, candidate, nbhd) {
            nbhd[x] = candidate;
            assign_neighbourhood(x + 1, n, nbhd, out);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others.mask();
    }
}

/// Transitivity between the new neighbourhood of `x` and those of points
/// already assigned.
fn consistent_with_assigned(x: usize, candidate: Subset, nbhd: &[Subset]) -> bool {
    (0..x).all(|y| {
        let uy = nbhd[y];
        (!candidate.contains(y) || uy.is_subset(candidate))
            && (!uy.contains(x) || candidate.is_subset(uy))
    })
}
