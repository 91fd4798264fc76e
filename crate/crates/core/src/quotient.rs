//! The quotient `G / closure{e}` and the saturation properties that make
//! Borel sets of `G` correspond to Borel sets of the quotient.
//!
//! Statements that quantify over opens or Borel sets are checked over every
//! union of atoms while the atom count is at most [`EXHAUSTIVE_ATOM_LIMIT`];
//! past that they are checked on the minimal open sets and atoms, which
//! generate everything else under unions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::group::{BorelAtoms, FiniteGroup, FiniteTopGroup, GroupError};
use crate::topology::{FiniteSpace, Subset};
use crate::EXHAUSTIVE_ATOM_LIMIT;

/// Atom count up to which pairwise statements run over all pairs of Borel
/// sets.
pub const PAIRWISE_ATOM_LIMIT: usize = 10;

/// Outcome of checking the quotient-map statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuotientStatements {
    /// Images of opens are open.
    pub projection_open: bool,
    /// The quotient is Hausdorff.
    pub quotient_hausdorff: bool,
    /// Images of closed sets are closed.
    pub projection_closed: bool,
    pub quotient_locally_compact: bool,
    /// Every compact set of the quotient is the image of a closed compact
    /// set, namely its preimage.
    pub compact_lifting: bool,
    /// The quotient topology is exactly the set of images of opens.
    pub topology_is_image: bool,
    /// The quotient Borel algebra is exactly the set of images of Borel sets.
    pub borel_is_image: bool,
    pub exhaustive: bool,
}

impl QuotientStatements {
    pub fn all_hold(&self) -> bool {
        self.projection_open
            && self.quotient_hausdorff
            && self.projection_closed
            && self.quotient_locally_compact
            && self.compact_lifting
            && self.topology_is_image
            && self.borel_is_image
    }
}

/// Outcome of checking that Borel sets are saturated and that the
/// projection reflects inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BorelStatements {
    /// `x ∈ U` open implies `closure{x} ⊆ U`.
    pub opens_saturated: bool,
    /// `x ∈ E` Borel implies `closure{x} ⊆ E`.
    pub borel_saturated: bool,
    /// Disjoint Borel sets have disjoint images.
    pub disjointness_preserved: bool,
    /// `π(E1) ⊆ π(E2)` implies `E1 ⊆ E2`.
    pub inclusion_reflected: bool,
    /// `π(E1) = π(E2)` implies `E1 = E2`.
    pub equality_reflected: bool,
    /// `π⁻¹(π(E)) = E`.
    pub preimage_of_image: bool,
    pub exhaustive: bool,
}

impl BorelStatements {
    pub fn all_hold(&self) -> bool {
        self.opens_saturated
            && self.borel_saturated
            && self.disjointness_preserved
            && self.inclusion_reflected
            && self.equality_reflected
            && self.preimage_of_image
    }
}

/// A topological group together with its Hausdorff quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    base: FiniteTopGroup,
    quotient: FiniteTopGroup,
    projection: Vec<usize>,
    labels: Vec<usize>,
    statements: QuotientStatements,
}

impl QuotientData {
    pub fn base(&self) -> &FiniteTopGroup {
        &self.base
    }

    pub fn quotient(&self) -> &FiniteTopGroup {
        &self.quotient
    }

    /// `π(x)` for every base point `x`.
    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// Name of each quotient point: the smallest member of its coset.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn statements(&self) -> &QuotientStatements {
        &self.statements
    }

    /// `π(s)`.
    pub fn image(&self, s: Subset) -> Subset {
        s.iter().map(|x| self.projection[x]).collect()
    }

    /// `π⁻¹(t)`.
    pub fn preimage(&self, t: Subset) -> Subset {
        (0..self.projection.len())
            .filter(|&x| t.contains(self.projection[x]))
            .collect()
    }
}

/// Builds `G' = G / N` for `N = closure{e}` with the quotient topology and
/// verifies the projection statements.
pub fn quotient(g: &FiniteTopGroup) -> Result<QuotientData, GroupError> {
    let atoms = g.atoms();
    let group = g.group();
    let k = atoms.len();
    let projection: Vec<usize> = (0..g.order()).map(|x| atoms.atom_of(x)).collect();
    let reps: Vec<usize> = atoms.atoms().iter().map(|a| a.first().unwrap()).collect();

    let table: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..k).map(|j| projection[group.mul(reps[i], reps[j])]).collect())
        .collect();
    let name = format!("{}/{}", group.name(), g.identity_closure());
    let qgroup = FiniteGroup::from_table(name, table)?;
    if !group.is_homomorphism(&qgroup, &projection) {
        return Err(GroupError::Internal("coset multiplication is not well defined".into()));
    }
    if qgroup.identity() != projection[group.identity()] {
        return Err(GroupError::Internal("identity coset is not the quotient identity".into()));
    }

    let qspace = quotient_space(g.space(), &projection, k)?;
    let qtop = FiniteTopGroup::new(qgroup, qspace)?;

    let mut data = QuotientData {
        base: g.clone(),
        quotient: qtop,
        projection,
        labels: reps,
        statements: QuotientStatements {
            projection_open: false,
            quotient_hausdorff: false,
            projection_closed: false,
            quotient_locally_compact: false,
            compact_lifting: false,
            topology_is_image: false,
            borel_is_image: false,
            exhaustive: false,
        },
    };
    data.statements = check_quotient_statements(&data);
    if !data.statements.all_hold() {
        return Err(GroupError::Internal(format!(
            "quotient statements failed: {:?}",
            data.statements
        )));
    }
    Ok(data)
}

/// Quotient topology: `V` is open iff `π⁻¹(V)` is open. The minimal open
/// set of a quotient point is grown until its preimage is open.
fn quotient_space(base: &FiniteSpace, projection: &[usize], k: usize) -> Result<FiniteSpace, GroupError> {
    let preimage = |t: Subset| -> Subset {
        (0..projection.len()).filter(|&x| t.contains(projection[x])).collect()
    };
    let image = |s: Subset| -> Subset { s.iter().map(|x| projection[x]).collect() };
    let nbhd = (0..k)
        .map(|c| {
            let mut v = Subset::singleton(c);
            loop {
                let pre = preimage(v);
                if base.is_open(pre) {
                    return v;
                }
                v = v.union(image(base.open_hull(pre)));
            }
        })
        .collect();
    Ok(FiniteSpace::from_minimal_neighbourhoods(nbhd)?)
}

/// Every union of atoms, as point sets, when the atom count allows it.
pub(crate) fn all_borel_sets(atoms: &BorelAtoms) -> Option<Vec<Subset>> {
    (atoms.len() <= EXHAUSTIVE_ATOM_LIMIT)
        .then(|| (0..1u64 << atoms.len()).map(|m| atoms.union_of(m)).collect())
}

fn check_quotient_statements(q: &QuotientData) -> QuotientStatements {
    let base = q.base.space();
    let qspace = q.quotient.space();
    let qflags = qspace.separation_flags();
    let exhaustive = q.base.atoms().len() <= EXHAUSTIVE_ATOM_LIMIT;

    let (opens, closed): (Vec<Subset>, Vec<Subset>) = if exhaustive {
        (base.opens(), base.closed_sets())
    } else {
        let n = base.len();
        let basis: Vec<Subset> = base.minimal_neighbourhoods().to_vec();
        let closed = (0..n).map(|x| base.closure(Subset::singleton(x))).collect();
        (basis, closed)
    };

    let projection_open = opens.iter().all(|&u| qspace.is_open(q.image(u)));
    let projection_closed = closed.iter().all(|&c| qspace.is_closed(q.image(c)));

    let quotient_subsets: Vec<Subset> = if exhaustive {
        (0..1u64 << qspace.len()).map(Subset::from_mask).collect()
    } else {
        (0..qspace.len()).map(Subset::singleton).collect()
    };
    let compact_lifting = quotient_subsets.iter().all(|&c| {
        let lift = q.preimage(c);
        !qspace.is_compact(c) || (base.is_closed_compact(lift) && q.image(lift) == c)
    });

    let (topology_is_image, borel_is_image) = if exhaustive {
        let images: BTreeSet<Subset> = opens.iter().map(|&u| q.image(u)).collect();
        let qopens: BTreeSet<Subset> = qspace.opens().into_iter().collect();
        let borel = all_borel_sets(q.base.atoms()).unwrap_or_default();
        let borel_images: BTreeSet<Subset> = borel.iter().map(|&e| q.image(e)).collect();
        let qatoms = BorelAtoms::new(qspace.borel_atoms(), qspace.len());
        let qborel: BTreeSet<Subset> = all_borel_sets(&qatoms).unwrap_or_default().into_iter().collect();
        (images == qopens, borel_images == qborel)
    } else {
        // Both sides are generated under unions by the listed sets.
        let topology = (0..qspace.len()).all(|c| {
            let u = qspace.minimal_neighbourhood(c);
            base.is_open(q.preimage(u)) && q.image(q.preimage(u)) == u
        });
        let borel = q
            .base
            .atoms()
            .atoms()
            .iter()
            .all(|&a| q.image(a).len() == 1);
        (topology, borel)
    };

    QuotientStatements {
        projection_open,
        quotient_hausdorff: qflags.hausdorff,
        projection_closed,
        quotient_locally_compact: qflags.locally_compact,
        compact_lifting,
        topology_is_image,
        borel_is_image,
        exhaustive,
    }
}

/// Checks the saturation statements over Borel sets of `q.base()`.
pub fn verify_borel_statements(q: &QuotientData) -> BorelStatements {
    let g = q.base();
    let space = g.space();
    let atoms = BorelAtoms::new(space.borel_atoms(), space.len());
    let closure_of = |x: usize| space.closure(Subset::singleton(x));
    let saturated = |s: Subset| s.iter().all(|x| closure_of(x).is_subset(s));

    let exhaustive = atoms.len() <= PAIRWISE_ATOM_LIMIT;
    let borel: Vec<Subset> = all_borel_sets(&atoms).unwrap_or_else(|| atoms.atoms().to_vec());
    let opens: Vec<Subset> = if atoms.len() <= EXHAUSTIVE_ATOM_LIMIT {
        space.opens()
    } else {
        space.minimal_neighbourhoods().to_vec()
    };
    // Left-hand sets of the pairwise statements. Containment of E1 in E2 is
    // decided atom by atom, so atoms suffice past the pairwise limit.
    let left: Vec<Subset> = if exhaustive { borel.clone() } else { atoms.atoms().to_vec() };

    let opens_saturated = opens.iter().all(|&u| saturated(u));
    let borel_saturated = borel.iter().all(|&e| saturated(e));
    let disjointness_preserved = left.iter().all(|&e1| {
        borel
            .iter()
            .all(|&e2| !e1.is_disjoint(e2) || q.image(e1).is_disjoint(q.image(e2)))
    });
    let inclusion_reflected = left.iter().all(|&e1| {
        borel
            .iter()
            .all(|&e2| !q.image(e1).is_subset(q.image(e2)) || e1.is_subset(e2))
    });
    let images: BTreeSet<Subset> = borel.iter().map(|&e| q.image(e)).collect();
    let equality_reflected = images.len() == borel.len();
    let preimage_of_image = borel.iter().all(|&e| q.preimage(q.image(e)) == e);

    BorelStatements {
        opens_saturated,
        borel_saturated,
        disjointness_preserved,
        inclusion_reflected,
        equality_reflected,
        preimage_of_image,
        exhaustive,
    }
}

/// The Borel atoms of `g` (cosets of `closure{e}`), after verifying the
/// saturation statements against the quotient map.
pub fn borel_atoms(g: &FiniteTopGroup) -> Result<BorelAtoms, GroupError> {
    let q = quotient(g)?;
    let statements = verify_borel_statements(&q);
    if !statements.all_hold() {
        return Err(GroupError::Internal(format!("Borel statements failed: {statements:?}")));
    }
    Ok(g.atoms().clone())
}
