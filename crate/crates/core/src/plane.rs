//! The plane `ℝ²` with the topology of the seminorm `(x, y) ↦ |x|`.
//!
//! Borel sets are cylinders `E × ℝ`; here `E` ranges over finite unions of
//! intervals with rational endpoints. The Haar measure is the length of `E`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneError {
    #[error("interval from {lo} to {hi} is empty")]
    EmptyInterval { lo: String, hi: String },
    #[error("an infinite endpoint cannot be closed")]
    ClosedInfinity,
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("base is unbounded; a bounded inner set is attached")]
    UnboundedBase { inner: Box<CylinderSet> },
    #[error("hypothesised mass must be nonnegative")]
    NegativeMass,
    #[error("probe bound must be positive")]
    InvalidProbeBound,
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
}

/// An interval endpoint on the extended line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn shifted(&self, a: &Rational) -> Bound {
        match self {
            Bound::Finite(v) => Bound::Finite(v + a),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

/// A nonempty interval. Infinite endpoints are always open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound, lo_closed: bool, hi_closed: bool) -> Result<Self, PlaneError> {
        if (lo_closed && lo.finite().is_none()) || (hi_closed && hi.finite().is_none()) {
            return Err(PlaneError::ClosedInfinity);
        }
        let nonempty = match lo.cmp(&hi) {
            Ordering::Less => !(lo == Bound::PosInf || hi == Bound::NegInf),
            Ordering::Equal => lo_closed && hi_closed,
            Ordering::Greater => false,
        };
        if !nonempty {
            return Err(PlaneError::EmptyInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, PlaneError> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi), true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self, PlaneError> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi), false, false)
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    pub fn length(&self) -> Length {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Length::Finite(b - a),
            _ => Length::Infinite,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Bound::NegInf => true,
            Bound::Finite(a) => x > a || (self.lo_closed && x == a),
            Bound::PosInf => false,
        };
        let below = match &self.hi {
            Bound::PosInf => true,
            Bound::Finite(b) => x < b || (self.hi_closed && x == b),
            Bound::NegInf => false,
        };
        above && below
    }

    /// Start position: by value, a closed start before an open one.
    fn start_key(&self) -> (&Bound, bool) {
        (&self.lo, !self.lo_closed)
    }

    /// End position: by value, an open end before a closed one.
    fn end_key(&self) -> (&Bound, bool) {
        (&self.hi, self.hi_closed)
    }

    /// Whether `self ∪ next` is an interval, given `self` starts no later.
    fn joins(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = if self.start_key() >= other.start_key() {
            (self.lo.clone(), self.lo_closed)
        } else {
            (other.lo.clone(), other.lo_closed)
        };
        let (hi, hi_closed) = if self.end_key() <= other.end_key() {
            (self.hi.clone(), self.hi_closed)
        } else {
            (other.hi.clone(), other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    fn shifted(&self, a: &Rational) -> Interval {
        Interval {
            lo: self.lo.shifted(a),
            hi: self.hi.shifted(a),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// Lebesgue length, possibly infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl Length {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Length::Finite(v) => Some(v),
            Length::Infinite => None,
        }
    }
}

impl std::ops::Add for Length {
    type Output = Length;

    fn add(self, rhs: Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

/// Sorted, pairwise disjoint intervals with no two joinable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Canonical form of the union of `intervals`.
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.start_key().cmp(&b.start_key()));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for next in intervals {
            match merged.last_mut() {
                Some(cur) if cur.joins(&next) => {
                    if next.end_key() > cur.end_key() {
                        cur.hi = next.hi;
                        cur.hi_closed = next.hi_closed;
                    }
                }
                _ => merged.push(next),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    pub fn length(&self) -> Length {
        self.intervals.iter().fold(Length::Finite(Rational::zero()), |acc, i| acc + i.length())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let pieces = self
            .intervals
            .iter()
            .flat_map(|a| other.intervals.iter().filter_map(move |b| a.intersection(b)))
            .collect();
        IntervalUnion::new(pieces)
    }

    pub fn is_disjoint(&self, other: &IntervalUnion) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn shifted(&self, a: &Rational) -> IntervalUnion {
        IntervalUnion { intervals: self.intervals.iter().map(|i| i.shifted(a)).collect() }
    }

    /// Every interval closed and bounded.
    pub fn is_compact(&self) -> bool {
        self.intervals.iter().all(|i| i.is_bounded() && i.lo_closed && i.hi_closed)
    }

    /// Every endpoint open or infinite.
    pub fn is_open(&self) -> bool {
        self.intervals.iter().all(|i| !i.lo_closed && !i.hi_closed)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// The Borel set `base × ℝ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CylinderSet {
    pub base: IntervalUnion,
}

impl CylinderSet {
    pub fn new(base: IntervalUnion) -> Self {
        Self { base }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_closed_compact(&self) -> bool {
        self.base.is_compact()
    }

    pub fn is_open(&self) -> bool {
        self.base.is_open()
    }

    pub fn contains(&self, x: &Rational, _y: &Rational) -> bool {
        self.base.contains(x)
    }
}

/// Haar measure of a cylinder: the length of its base.
pub fn haar_v(e: &CylinderSet) -> Length {
    e.base.length()
}

/// Translate by `(a, b)`; only `a` moves a cylinder.
pub fn translate_v(e: &CylinderSet, a: &Rational, _b: &Rational) -> CylinderSet {
    CylinderSet::new(e.base.shifted(a))
}

/// A closed compact cylinder inside `e` and an open cylinder containing it,
/// each within `eps` of `haar_v(e)`.
///
/// With `m` intervals and `δ = eps/(2m)`, open endpoints move inward by `δ`
/// (intervals that vanish are dropped) and every endpoint moves outward by
/// `δ` and becomes open.
pub fn regularity_gap(e: &CylinderSet, eps: &Rational) -> Result<(CylinderSet, CylinderSet), PlaneError> {
    if !eps.is_positive() {
        return Err(PlaneError::NonPositiveEps);
    }
    let intervals = e.base.intervals();
    if intervals.is_empty() {
        return Ok((CylinderSet::empty(), CylinderSet::empty()));
    }
    let delta = eps / int(2 * intervals.len() as i64);

    let mut inner = Vec::with_capacity(intervals.len());
    let mut outer = Vec::with_capacity(intervals.len());
    for iv in intervals {
        let (lo, hi) = match (&iv.lo, &iv.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => (a.clone(), b.clone()),
            (Bound::Finite(a), _) => {
                let start = a + Rational::one();
                (start.clone(), start + eps.recip())
            }
            (_, Bound::Finite(b)) => {
                let end = b - Rational::one();
                (&end - eps.recip(), end)
            }
            _ => (Rational::zero(), eps.recip()),
        };
        let inner_lo = if iv.lo_closed || !iv.is_bounded() { lo.clone() } else { &lo + &delta };
        let inner_hi = if iv.hi_closed || !iv.is_bounded() { hi.clone() } else { &hi - &delta };
        if let Ok(piece) = Interval::closed(inner_lo, inner_hi) {
            inner.push(piece);
        }
        outer.push(Interval {
            lo: iv.lo.shifted(&-delta.clone()),
            hi: iv.hi.shifted(&delta),
            lo_closed: false,
            hi_closed: false,
        });
    }
    let inner = CylinderSet::new(IntervalUnion::new(inner));
    if !e.base.is_bounded() {
        return Err(PlaneError::UnboundedBase { inner: Box::new(inner) });
    }
    Ok((inner, CylinderSet::new(IntervalUnion::new(outer))))
}

/// Closed rectangle `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
}

impl Rect {
    /// `K_{m,n} = [m, m+1] × [n, n+1]`.
    pub fn grid_cell(m: i64, n: i64) -> Self {
        Rect { x_lo: int(m), x_hi: int(m + 1), y_lo: int(n), y_hi: int(n + 1) }
    }

    fn is_unit_square(&self) -> bool {
        &self.x_hi - &self.x_lo == Rational::one() && &self.y_hi - &self.y_lo == Rational::one()
    }

    fn is_disjoint(&self, other: &Rect) -> bool {
        self.x_hi < other.x_lo || other.x_hi < self.x_lo || self.y_hi < other.y_lo || other.y_hi < self.y_lo
    }

    fn inside_strip(&self) -> bool {
        self.x_lo >= Rational::zero() && self.x_hi <= Rational::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BkVerdict {
    /// `μ(K_{0,0}) > 0` forces `μ([0,1] × ℝ)` past every bound.
    FinitenessViolated,
    /// `μ(K_{0,0}) = 0` forces `μ(ℝ²) = 0`.
    NonzeroViolated,
}

impl BkVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            BkVerdict::FinitenessViolated => "FinitenessViolated",
            BkVerdict::NonzeroViolated => "NonzeroViolated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BkWitness {
    /// Disjoint translates `K_{0,2n}`, `n < count`, inside `[0,1] × ℝ`, of
    /// total mass `count·c > probe_bound`.
    Translates {
        probe_bound: Rational,
        count: usize,
        translates: Vec<Rect>,
        total: Rational,
    },
    /// The cover `{K_{m,n}}` of the plane, each of mass `c = 0`, checked on
    /// the cells with `|m|, |n| ≤ window`.
    GridCover { window: i64, cells: usize, cell_mass: Rational, total: Rational },
}

/// Refutes the existence of a Haar measure on the σ-algebra generated by
/// opens and compact sets, for one hypothesised value `c = μ(K_{0,0})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BkCertificate {
    pub input_mass: Rational,
    pub verdict: BkVerdict,
    pub witness: BkWitness,
}

/// Half-width of the grid window checked for the zero-mass branch.
pub const GRID_WINDOW: i64 = 4;

pub fn counterexample_bk(c: &Rational, probe_bound: &Rational) -> Result<BkCertificate, PlaneError> {
    if c.is_negative() {
        return Err(PlaneError::NegativeMass);
    }
    if !probe_bound.is_positive() {
        return Err(PlaneError::InvalidProbeBound);
    }
    let certificate = if c.is_positive() {
        let count: num_bigint::BigInt = (probe_bound / c).floor().to_integer() + 1;
        let count: usize = count.try_into().map_err(|_| PlaneError::InvalidProbeBound)?;
        let translates = (0..count as i64).map(|n| Rect::grid_cell(0, 2 * n)).collect();
        BkCertificate {
            input_mass: c.clone(),
            verdict: BkVerdict::FinitenessViolated,
            witness: BkWitness::Translates {
                probe_bound: probe_bound.clone(),
                count,
                translates,
                total: c * int(count as i64),
            },
        }
    } else {
        let side = 2 * GRID_WINDOW + 1;
        BkCertificate {
            input_mass: c.clone(),
            verdict: BkVerdict::NonzeroViolated,
            witness: BkWitness::GridCover {
                window: GRID_WINDOW,
                cells: (side * side) as usize,
                cell_mass: Rational::zero(),
                total: Rational::zero(),
            },
        }
    };
    verify_certificate(&certificate)?;
    Ok(certificate)
}

/// Re-checks a certificate from its data alone.
pub fn verify_certificate(cert: &BkCertificate) -> Result<(), PlaneError> {
    let reject = |why: &str| Err(PlaneError::CertificateRejected(why.to_owned()));
    match (&cert.verdict, &cert.witness) {
        (BkVerdict::FinitenessViolated, BkWitness::Translates { probe_bound, count, translates, total }) => {
            if !cert.input_mass.is_positive() {
                return reject("finiteness branch needs positive mass");
            }
            if translates.len() != *count {
                return reject("translate count mismatch");
            }
            if let Some(r) = translates.iter().find(|r| !r.is_unit_square()) {
                return reject(&format!("{r:?} is not a translate of K_{{0,0}}"));
            }
            if translates.iter().any(|r| !r.inside_strip()) {
                return reject("translate leaves [0,1] x R");
            }
            for (i, a) in translates.iter().enumerate() {
                if translates[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                    return reject("translates overlap");
                }
            }
            if *total != &cert.input_mass * int(*count as i64) {
                return reject("total is not count times mass");
            }
            if total <= probe_bound {
                return reject("total does not exceed the probe bound");
            }
            Ok(())
        }
        (BkVerdict::NonzeroViolated, BkWitness::GridCover { window, cells, cell_mass, total }) => {
            if !cert.input_mass.is_zero() || *cell_mass != cert.input_mass {
                return reject("zero branch needs zero cell mass");
            }
            // Unit cells with integer corners in the window tile the square
            // [-w, w+1]^2: every lattice point is the corner of exactly one.
            let w = *window;
            let grid: Vec<Rect> = (-w..=w).flat_map(|m| (-w..=w).map(move |n| Rect::grid_cell(m, n))).collect();
            if grid.len() != *cells {
                return reject("cell count mismatch");
            }
            let area: Rational = grid.iter().map(|r| (&r.x_hi - &r.x_lo) * (&r.y_hi - &r.y_lo)).sum();
            if area != int((2 * w + 1) * (2 * w + 1)) {
                return reject("cells do not tile the window");
            }
            let sum: Rational = grid.iter().map(|_| cell_mass.clone()).sum();
            if !sum.is_zero() || !total.is_zero() {
                return reject("subadditivity bound is not zero");
            }
            Ok(())
        }
        _ => reject("verdict and witness disagree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn closed(a: Rational, b: Rational) -> Interval {
        Interval::closed(a, b).unwrap()
    }

    fn cyl(intervals: Vec<Interval>) -> CylinderSet {
        CylinderSet::new(IntervalUnion::new(intervals))
    }

    #[test]
    fn haar_v_examples() {
        assert_eq!(haar_v(&cyl(vec![closed(int(0), int(1))])), Length::Finite(int(1)));
        assert_eq!(haar_v(&CylinderSet::empty()), Length::Finite(int(0)));
        let e = cyl(vec![closed(int(0), int(1)), closed(int(2), ratio(5, 2))]);
        assert_eq!(haar_v(&e), Length::Finite(ratio(3, 2)));
        let ray = Interval::new(Bound::Finite(int(0)), Bound::PosInf, true, false).unwrap();
        assert_eq!(haar_v(&cyl(vec![ray])), Length::Infinite);
    }

    #[test]
    fn translate_examples() {
        let e = cyl(vec![closed(int(0), int(1))]);
        assert_eq!(translate_v(&e, &int(3), &int(-7)), cyl(vec![closed(int(3), int(4))]));
        assert_eq!(translate_v(&e, &int(0), &int(9)), e);
        let e = cyl(vec![closed(int(0), int(1)), closed(int(2), int(3))]);
        assert_eq!(
            translate_v(&e, &ratio(1, 2), &int(0)),
            cyl(vec![closed(ratio(1, 2), ratio(3, 2)), closed(ratio(5, 2), ratio(7, 2))])
        );
    }

    #[test]
    fn canonical_merging() {
        let half_open = Interval::new(Bound::Finite(int(0)), Bound::Finite(int(1)), true, false).unwrap();
        let u = IntervalUnion::new(vec![closed(int(1), int(2)), half_open.clone()]);
        assert_eq!(u.intervals(), &[closed(int(0), int(2))]);
        let gap = IntervalUnion::new(vec![half_open, Interval::open(int(1), int(2)).unwrap()]);
        assert_eq!(gap.intervals().len(), 2);
        let nested = IntervalUnion::new(vec![closed(int(0), int(5)), closed(int(1), int(2))]);
        assert_eq!(nested.intervals(), &[closed(int(0), int(5))]);
    }

    #[test]
    fn empty_intervals_are_rejected() {
        assert!(Interval::open(int(1), int(1)).is_err());
        assert!(Interval::closed(int(2), int(1)).is_err());
        assert!(Interval::closed(int(1), int(1)).is_ok());
        assert_eq!(
            Interval::new(Bound::NegInf, Bound::Finite(int(0)), true, false),
            Err(PlaneError::ClosedInfinity)
        );
    }

    #[test]
    fn regularity_examples() {
        let e = cyl(vec![Interval::open(int(0), int(1)).unwrap()]);
        let (inner, outer) = regularity_gap(&e, &ratio(1, 10)).unwrap();
        assert_eq!(inner, cyl(vec![closed(ratio(1, 20), ratio(19, 20))]));
        assert_eq!(outer, cyl(vec![Interval::open(ratio(-1, 20), ratio(21, 20)).unwrap()]));
        let c = cyl(vec![closed(int(0), int(1))]);
        assert_eq!(regularity_gap(&c, &ratio(1, 10)).unwrap().0, c);
        let (inner, outer) = regularity_gap(&CylinderSet::empty(), &int(1)).unwrap();
        assert!(inner.base.is_empty() && outer.base.is_empty());
    }

    #[test]
    fn unbounded_base_returns_a_chunk() {
        let ray = Interval::new(Bound::Finite(int(0)), Bound::PosInf, false, false).unwrap();
        let eps = ratio(1, 4);
        match regularity_gap(&cyl(vec![ray]), &eps) {
            Err(PlaneError::UnboundedBase { inner }) => {
                assert!(inner.is_closed_compact());
                assert!(haar_v(&inner) >= Length::Finite(eps.recip()));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(regularity_gap(&CylinderSet::empty(), &int(0)), Err(PlaneError::NonPositiveEps));
    }

    #[test]
    fn certificate_examples() {
        let cert = counterexample_bk(&int(1), &int(10)).unwrap();
        assert_eq!(cert.verdict, BkVerdict::FinitenessViolated);
        assert!(matches!(cert.witness, BkWitness::Translates { count: 11, .. }));
        let cert = counterexample_bk(&int(0), &int(10)).unwrap();
        assert_eq!(cert.verdict, BkVerdict::NonzeroViolated);
        assert!(matches!(cert.witness, BkWitness::GridCover { .. }));
        let cert = counterexample_bk(&ratio(1, 3), &int(1)).unwrap();
        assert!(matches!(cert.witness, BkWitness::Translates { count: 4, .. }));
        assert_eq!(counterexample_bk(&int(-1), &int(1)), Err(PlaneError::NegativeMass));
        assert_eq!(counterexample_bk(&int(1), &int(0)), Err(PlaneError::InvalidProbeBound));
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut cert = counterexample_bk(&int(1), &int(3)).unwrap();
        if let BkWitness::Translates { translates, .. } = &mut cert.witness {
            translates[1] = Rect::grid_cell(0, 1);
        }
        assert!(verify_certificate(&cert).is_err());
        let mut cert = counterexample_bk(&int(1), &int(3)).unwrap();
        cert.verdict = BkVerdict::NonzeroViolated;
        assert!(verify_certificate(&cert).is_err());
    }
}
