//! Finite groups given by Cayley tables, and the topologies compatible with
//! them.

use std::collections::BTreeSet;

use crate::topology::{FiniteSpace, Subset, TopologyError, MAX_POINTS};

/// Largest group order representable with point masks.
pub const MAX_ORDER: usize = MAX_POINTS;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("order {order} exceeds the cap of {max}")]
    TooLarge { order: usize, max: usize },
    #[error("row {row} has {len} entries, expected {order}")]
    RaggedRow { row: usize, len: usize, order: usize },
    #[error("entry {a}*{b} = {value} is out of range")]
    EntryOutOfRange { a: usize, b: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group of order {order} paired with a space of {points} points")]
    SpaceMismatch { order: usize, points: usize },
    #[error("multiplication is not continuous at ({x}, {y}): preimage of open {open} is not open")]
    NotContinuousMultiplication { x: usize, y: usize, open: Subset },
    #[error("inversion is not continuous at {x}: preimage of open {open} is not open")]
    NotContinuousInversion { x: usize, open: Subset },
    #[error("{0} is not a normal subgroup")]
    NotNormalSubgroup(Subset),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A finite group on the elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table: square shape, entries in range, associative,
    /// with an identity and inverses.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge { order, max: MAX_ORDER });
        }
        let mut table = Vec::with_capacity(order * order);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::RaggedRow { row: a, len: row.len(), order });
            }
            for (b, &value) in row.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange { a, b, value });
                }
                table.push(value);
            }
        }
        Self::from_flat(name.into(), order, table)
    }

    fn from_flat(name: String, order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        let at = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(order);
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NoInverse(x))?;
            inverse.push(inv);
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self { name, order, table, identity, inverse })
    }

    fn from_rule(name: String, order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..order * order).map(|i| mul(i / order, i % order)).collect();
        Self::from_flat(name, order, table).expect("built-in group tables are valid")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "cyclic order out of range");
        Self::from_rule(format!("Z{n}"), n, |a, b| (a + b) % n)
    }

    /// Dihedral group of order `2n`. Element `k + n*f` is `r^k s^f`, with
    /// `s r = r^{-1} s`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1 && 2 * n <= MAX_ORDER, "dihedral parameter out of range");
        Self::from_rule(format!("D{n}"), 2 * n, |x, y| {
            let (a, f) = (x % n, x / n);
            let (b, g) = (y % n, y / n);
            let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
            k + n * (f ^ g)
        })
    }

    /// Permutations of `{0,1,2}` in lexicographic order, composed right to
    /// left: `(p*q)(i) = p(q(i))`.
    pub fn symmetric3() -> Self {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        Self::from_rule("S3".into(), 6, |a, b| {
            let p = PERMS[a];
            let q = PERMS[b];
            let composed = [p[q[0]], p[q[1]], p[q[2]]];
            PERMS.iter().position(|r| *r == composed).unwrap()
        })
    }

    /// Quaternion group. Element `2u + s` is `(-1)^s` times the unit
    /// `u ∈ {1, i, j, k}`.
    pub fn quaternion8() -> Self {
        // (sign, unit) of unit_a * unit_b
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        Self::from_rule("Q8".into(), 8, |a, b| {
            let (sa, ua) = (a % 2, a / 2);
            let (sb, ub) = (b % 2, b / 2);
            let (s, u) = UNITS[ua][ub];
            2 * u + (s ^ sa ^ sb)
        })
    }

    /// Direct product; the pair `(a, b)` is element `a * |h| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self, GroupError> {
        let order = g.order * h.order;
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge { order, max: MAX_ORDER });
        }
        let m = h.order;
        Ok(Self::from_rule(format!("{}x{}", g.name, h.name), order, |x, y| {
            g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> Subset {
        Subset::full(self.order)
    }

    /// Cayley table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `g·s`.
    pub fn left_translate(&self, g: usize, s: Subset) -> Subset {
        s.iter().map(|x| self.mul(g, x)).collect()
    }

    /// `s·g`.
    pub fn right_translate(&self, s: Subset, g: usize) -> Subset {
        s.iter().map(|x| self.mul(x, g)).collect()
    }

    /// `{xy : x ∈ a, y ∈ b}`.
    pub fn product_set(&self, a: Subset, b: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for x in a.iter() {
            out = out.union(self.left_translate(x, b));
        }
        out
    }

    /// `s^{-1}`.
    pub fn inverse_set(&self, s: Subset) -> Subset {
        s.iter().map(|x| self.inv(x)).collect()
    }

    pub fn is_subgroup(&self, s: Subset) -> bool {
        s.contains(self.identity)
            && s.fits(self.order)
            && s.iter().all(|x| self.left_translate(x, s).is_subset(s) && s.contains(self.inv(x)))
    }

    pub fn is_normal_subgroup(&self, s: Subset) -> bool {
        self.is_subgroup(s)
            && (0..self.order).all(|g| self.left_translate(g, s) == self.right_translate(s, g))
    }

    /// Subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: Subset) -> Subset {
        let mut current = Subset::singleton(self.identity).union(gens);
        loop {
            let next = current.union(self.product_set(current, current));
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: Subset) -> Subset {
        let mut current = self.generated_subgroup(s);
        loop {
            let conjugates: Subset = (0..self.order)
                .flat_map(|g| current.iter().map(move |x| (g, x)))
                .map(|(g, x)| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            let next = self.generated_subgroup(current.union(conjugates));
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// All normal subgroups, ordered by size then mask. Every normal
    /// subgroup is reached by adjoining elements one at a time and taking
    /// normal closures, starting from the trivial subgroup.
    pub fn normal_subgroups(&self) -> Vec<Subset> {
        let trivial = Subset::singleton(self.identity);
        let mut found = BTreeSet::from([trivial]);
        let mut frontier = vec![trivial];
        while let Some(n) = frontier.pop() {
            for x in n.complement(self.order).iter() {
                let bigger = self.normal_closure(n.with(x));
                if found.insert(bigger) {
                    frontier.push(bigger);
                }
            }
        }
        let mut out: Vec<Subset> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.mask()));
        out
    }

    /// Left cosets of `n` in canonical order: the coset of the identity
    /// first, the rest by smallest member.
    pub fn cosets(&self, n: Subset) -> Vec<Subset> {
        let mut out = Vec::new();
        let mut seen = Subset::EMPTY;
        for x in 0..self.order {
            if !seen.contains(x) {
                let coset = self.left_translate(x, n);
                seen = seen.union(coset);
                out.push(coset);
            }
        }
        identity_first(out, self.identity)
    }

    /// True when `map` (indexed by element of `self`) is a homomorphism into
    /// `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&v| v < target.order)
            && (0..self.order).all(|a| {
                (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }
}

/// Moves the block containing `identity` to the front, keeping the others
/// in their (smallest-member) order.
fn identity_first(mut blocks: Vec<Subset>, identity: usize) -> Vec<Subset> {
    if let Some(pos) = blocks.iter().position(|b| b.contains(identity)) {
        let block = blocks.remove(pos);
        blocks.insert(0, block);
    }
    blocks
}

/// Partition of a group into Borel atoms, with a point-to-atom index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorelAtoms {
    atoms: Vec<Subset>,
    atom_of: Vec<usize>,
}

impl BorelAtoms {
    pub(crate) fn new(atoms: Vec<Subset>, points: usize) -> Self {
        let mut atom_of = vec![0; points];
        for (i, a) in atoms.iter().enumerate() {
            for x in a.iter() {
                atom_of[x] = i;
            }
        }
        Self { atoms, atom_of }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Subset] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> Subset {
        self.atoms[i]
    }

    pub fn atom_of(&self, x: usize) -> usize {
        self.atom_of[x]
    }

    /// Points of the union of the atoms selected by `mask` (bit `i` = atom
    /// `i`).
    pub fn union_of(&self, mask: u64) -> Subset {
        Subset::from_mask(mask)
            .iter()
            .fold(Subset::EMPTY, |acc, i| acc.union(self.atoms[i]))
    }

    /// Atom mask of `set`, or `None` when `set` is not a union of atoms.
    pub fn atom_mask(&self, set: Subset) -> Option<u64> {
        let mut mask = 0u64;
        for x in set.iter() {
            let i = *self.atom_of.get(x)?;
            mask |= 1 << i;
        }
        (self.union_of(mask) == set).then_some(mask)
    }
}

/// A finite group with a compatible topology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopGroup {
    group: FiniteGroup,
    space: FiniteSpace,
    identity_closure: Subset,
    atoms: BorelAtoms,
}

impl FiniteTopGroup {
    /// Checks continuity of multiplication and inversion by preimages of the
    /// minimal open sets, then records `N = closure{e}` and the Borel atoms.
    ///
    /// The minimal open set of `(x, y)` in `G × G` is `nbhd(x) × nbhd(y)`, so
    /// the preimage of every open containing `xy` is open at `(x, y)` iff
    /// `nbhd(x)·nbhd(y) ⊆ nbhd(xy)`.
    pub fn new(group: FiniteGroup, space: FiniteSpace) -> Result<Self, GroupError> {
        let order = group.order();
        if space.len() != order {
            return Err(GroupError::SpaceMismatch { order, points: space.len() });
        }
        let u = |x: usize| space.minimal_neighbourhood(x);
        for x in 0..order {
            for y in 0..order {
                let target = u(group.mul(x, y));
                if !group.product_set(u(x), u(y)).is_subset(target) {
                    return Err(GroupError::NotContinuousMultiplication { x, y, open: target });
                }
            }
        }
        for x in 0..order {
            let target = u(group.inv(x));
            if !group.inverse_set(u(x)).is_subset(target) {
                return Err(GroupError::NotContinuousInversion { x, open: target });
            }
        }

        let e = group.identity();
        let n = space.closure(Subset::singleton(e));
        if !group.is_normal_subgroup(n) {
            return Err(GroupError::Internal(format!(
                "closure of the identity {n} is not a normal subgroup"
            )));
        }
        for x in 0..order {
            let coset = group.left_translate(x, n);
            if space.closure(Subset::singleton(x)) != coset {
                return Err(GroupError::Internal(format!("closure of {{{x}}} is not {coset}")));
            }
            if u(x) != coset {
                return Err(GroupError::Internal(format!(
                    "minimal open set of {x} is {} rather than the coset {coset}",
                    u(x)
                )));
            }
        }
        let atoms = BorelAtoms::new(identity_first(space.borel_atoms(), e), order);
        if atoms.atoms() != group.cosets(n).as_slice() {
            return Err(GroupError::Internal("Borel atoms are not the cosets of closure{e}".into()));
        }
        Ok(Self { group, space, identity_closure: n, atoms })
    }

    /// Topology whose opens are the unions of cosets of the normal subgroup
    /// `n`.
    pub fn with_normal_subgroup(group: FiniteGroup, n: Subset) -> Result<Self, GroupError> {
        if !group.is_normal_subgroup(n) {
            return Err(GroupError::NotNormalSubgroup(n));
        }
        let space = FiniteSpace::partition(group.order(), &group.cosets(n))?;
        Self::new(group, space)
    }

    pub fn discrete(group: FiniteGroup) -> Self {
        let space = FiniteSpace::discrete(group.order());
        Self::new(group, space).expect("discrete topology is compatible")
    }

    pub fn indiscrete(group: FiniteGroup) -> Self {
        let space = FiniteSpace::indiscrete(group.order());
        Self::new(group, space).expect("indiscrete topology is compatible")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// `N = closure{e}`, a normal subgroup whose cosets are the point
    /// closures.
    pub fn identity_closure(&self) -> Subset {
        self.identity_closure
    }

    /// Borel atoms (the cosets of `N`), coset of the identity first.
    pub fn atoms(&self) -> &BorelAtoms {
        &self.atoms
    }

    pub fn is_hausdorff(&self) -> bool {
        self.identity_closure.len() == 1
    }

    pub fn is_indiscrete(&self) -> bool {
        self.identity_closure.len() == self.order()
    }

    /// `g·s` for `Side::Left`, `s·g` for `Side::Right`.
    pub fn translate(&self, side: Side, g: usize, s: Subset) -> Subset {
        match side {
            Side::Left => self.group.left_translate(g, s),
            Side::Right => self.group.right_translate(s, g),
        }
    }
}

/// Which translation a Haar measure is invariant under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Every topology compatible with `group`, one per normal subgroup, ordered
/// by the size of `closure{e}`.
pub fn group_topologies(group: &FiniteGroup) -> Result<Vec<FiniteTopGroup>, GroupError> {
    group_topologies_with_cap(group, MAX_ORDER)
}

pub fn group_topologies_with_cap(
    group: &FiniteGroup,
    max_order: usize,
) -> Result<Vec<FiniteTopGroup>, GroupError> {
    if group.order() > max_order.min(MAX_ORDER) {
        return Err(GroupError::TooLarge { order: group.order(), max: max_order.min(MAX_ORDER) });
    }
    group
        .normal_subgroups()
        .into_iter()
        .map(|n| {
            let tg = FiniteTopGroup::with_normal_subgroup(group.clone(), n)?;
            if tg.identity_closure() != n {
                return Err(GroupError::Internal(format!(
                    "coset topology of {n} has identity closure {}",
                    tg.identity_closure()
                )));
            }
            Ok(tg)
        })
        .collect()
}

/// Direct product with the product topology; `(a, b)` is point
/// `a * |h| + b`.
pub fn product_group(g: &FiniteTopGroup, h: &FiniteTopGroup) -> Result<FiniteTopGroup, GroupError> {
    let group = FiniteGroup::direct_product(g.group(), h.group())?;
    let m = h.order();
    let nbhd = (0..group.order())
        .map(|p| {
            let (a, b) = (p / m, p % m);
            let ua = g.space().minimal_neighbourhood(a);
            let ub = h.space().minimal_neighbourhood(b);
            ua.iter()
                .flat_map(|x| ub.iter().map(move |y| x * m + y))
                .collect::<Subset>()
        })
        .collect();
    let space = FiniteSpace::from_minimal_neighbourhoods(nbhd)?;
    FiniteTopGroup::new(group, space)
}
