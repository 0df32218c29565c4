//! Building sets and nested sets of a stratum lattice.
//!
//! Both notions are checked in the dual: a family of subspaces `U` of `V`
//! corresponds to the family of annihilators `U^⊥ ⊂ V*`, intersections become
//! sums, and transversality becomes directness of sums (codimensions add).

use serde::Serialize;

use crate::error::{Result, WonderError};
use crate::linalg::{RatMatrix, Subspace};
use crate::stratification::StratumLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildingSetKind {
    Maximal,
    Minimal,
    Custom,
}

/// Cached quotient data for one member `U`: the coordinates `Q` of `V/U` and
/// the columns used to lift quotient vectors back into `V`.
#[derive(Debug, Clone)]
pub(crate) struct QuotientData {
    pub(crate) coords: RatMatrix,
    lift_pivots: Vec<usize>,
}

impl QuotientData {
    fn new(u: &Subspace) -> Self {
        let ann = u.annihilator();
        QuotientData {
            coords: ann.basis().clone(),
            lift_pivots: ann.pivots().to_vec(),
        }
    }

    pub(crate) fn project(&self, v: &[crate::linalg::Rational]) -> crate::linalg::RatVector {
        self.coords.mul_vec(v)
    }

    pub(crate) fn lift(&self, ambient: usize, q: &[crate::linalg::Rational]) -> crate::linalg::RatVector {
        let mut v = crate::linalg::zero_vector(ambient);
        for (&p, x) in self.lift_pivots.iter().zip(q) {
            v[p] = x.clone();
        }
        v
    }
}

/// A subfamily of a stratum lattice used as the index set of a wonderful model.
#[derive(Debug, Clone)]
pub struct BuildingSet {
    kind: BuildingSetKind,
    ambient_dim: usize,
    members: Vec<Subspace>,
    lattice_indices: Vec<usize>,
    lattice_elements: Vec<Subspace>,
    quotients: Vec<QuotientData>,
}

impl BuildingSet {
    fn from_indices(lattice: &StratumLattice, mut indices: Vec<usize>, kind: BuildingSetKind) -> Self {
        indices.sort_unstable();
        indices.dedup();
        let members: Vec<Subspace> = indices.iter().map(|&i| lattice.element(i).clone()).collect();
        let quotients = members.iter().map(QuotientData::new).collect();
        BuildingSet {
            kind,
            ambient_dim: lattice.ambient_dim(),
            members,
            lattice_indices: indices,
            lattice_elements: lattice.elements().to_vec(),
            quotients,
        }
    }

    /// A building set made of chosen lattice members. Validity is not checked
    /// here; see [`is_building_set`].
    pub fn custom(lattice: &StratumLattice, indices: Vec<usize>) -> Self {
        Self::from_indices(lattice, indices, BuildingSetKind::Custom)
    }

    /// A custom building set given by explicit subspaces; genericity is
    /// measured against their intersection closure.
    pub fn from_subspaces(ambient: usize, subspaces: &[Subspace]) -> Self {
        let lattice = crate::stratification::intersection_closure(ambient, subspaces.iter().cloned());
        let mut indices: Vec<usize> = subspaces
            .iter()
            .filter_map(|s| lattice.iter().position(|l| l == s))
            .collect();
        indices.sort_unstable();
        indices.dedup();
        let members: Vec<Subspace> = indices.iter().map(|&i| lattice[i].clone()).collect();
        BuildingSet {
            kind: BuildingSetKind::Custom,
            ambient_dim: ambient,
            quotients: members.iter().map(QuotientData::new).collect(),
            members,
            lattice_indices: indices,
            lattice_elements: lattice,
        }
    }

    pub fn kind(&self) -> BuildingSetKind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn lattice_indices(&self) -> &[usize] {
        &self.lattice_indices
    }

    /// Every member of the underlying lattice (used for genericity checks).
    pub fn lattice_elements(&self) -> &[Subspace] {
        &self.lattice_elements
    }

    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.members.iter().position(|m| m == s)
    }

    pub(crate) fn quotient(&self, i: usize) -> &QuotientData {
        &self.quotients[i]
    }

    /// `members[i] ⊇ members[j]`.
    pub fn member_contains(&self, i: usize, j: usize) -> bool {
        self.members[i].contains(&self.members[j]).expect("same ambient")
    }
}

/// Every lattice member.
pub fn building_set_max(lattice: &StratumLattice) -> BuildingSet {
    BuildingSet::from_indices(lattice, (0..lattice.len()).collect(), BuildingSetKind::Maximal)
}

/// The irreducible lattice members.
pub fn building_set_min(lattice: &StratumLattice) -> BuildingSet {
    let members = (0..lattice.len()).filter(|&i| !is_reducible(lattice, i)).collect();
    BuildingSet::from_indices(lattice, members, BuildingSetKind::Minimal)
}

/// `U` is reducible when `U^⊥ = A_1 ⊕ A_2` for annihilators of two other
/// members, such that every member annihilator `B ⊆ U^⊥` splits as
/// `(B ∩ A_1) + (B ∩ A_2)`.
fn is_reducible(lattice: &StratumLattice, i: usize) -> bool {
    let u = lattice.element(i);
    let above: Vec<usize> = (0..lattice.len())
        .filter(|&j| j != i && lattice.contains(j, i))
        .collect();
    let duals: Vec<Subspace> = lattice.elements().iter().map(Subspace::annihilator).collect();
    for (a, &j1) in above.iter().enumerate() {
        for &j2 in &above[a + 1..] {
            let (u1, u2) = (lattice.element(j1), lattice.element(j2));
            if u1.codim() + u2.codim() != u.codim() || &u1.intersect(u2).expect("same ambient") != u {
                continue;
            }
            let (a1, a2) = (&duals[j1], &duals[j2]);
            let splits = above.iter().chain(std::iter::once(&i)).all(|&k| {
                let b = &duals[k];
                let p1 = b.intersect(a1).expect("same ambient");
                let p2 = b.intersect(a2).expect("same ambient");
                &p1.sum(&p2).expect("same ambient") == b
            });
            if splits {
                return true;
            }
        }
    }
    false
}

/// For every lattice member `U`, the minimal building-set members containing
/// `U` must cut out `U` transversally.
pub fn is_building_set(lattice: &StratumLattice, bs: &BuildingSet) -> bool {
    lattice.elements().iter().all(|u| {
        let over: Vec<&Subspace> = bs
            .members()
            .iter()
            .filter(|g| g.contains(u).expect("same ambient"))
            .collect();
        let minimal: Vec<&Subspace> = over
            .iter()
            .copied()
            .filter(|g| !over.iter().any(|h| h != g && g.contains(h).expect("same ambient")))
            .collect();
        if minimal.is_empty() {
            return false;
        }
        let meet = minimal
            .iter()
            .skip(1)
            .fold(minimal[0].clone(), |acc, g| acc.intersect(g).expect("same ambient"));
        let codims: usize = minimal.iter().map(|g| g.codim()).sum();
        &meet == u && codims == u.codim()
    })
}

/// Building-set positions ordered by strict containment, smallest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Chain {
    pub entries: Vec<usize>,
}

impl Chain {
    pub fn new(bs: &BuildingSet, entries: Vec<usize>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0] == w[1] || !bs.member_contains(w[1], w[0]) {
                return Err(WonderError::InvalidChain(format!(
                    "member {} does not strictly contain member {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(Chain { entries })
    }

    pub fn empty() -> Self {
        Chain { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn subspaces(&self, bs: &BuildingSet) -> Vec<Subspace> {
        self.entries.iter().map(|&i| bs.member(i).clone()).collect()
    }

    pub fn describe(&self, bs: &BuildingSet) -> String {
        let parts: Vec<String> = self.subspaces(bs).iter().map(Subspace::describe).collect();
        format!("chain[{}]", parts.join(" ⊂ "))
    }
}

/// A set of building-set positions, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NestedSet {
    pub entries: Vec<usize>,
}

impl NestedSet {
    /// The chain formed by the entries, if they are totally ordered.
    pub fn as_chain(&self, bs: &BuildingSet) -> Option<Chain> {
        let mut e = self.entries.clone();
        e.sort_by_key(|&i| bs.member(i).dim());
        Chain::new(bs, e).ok()
    }
}

fn comparable(bs: &BuildingSet, a: usize, b: usize) -> bool {
    bs.member_contains(a, b) || bs.member_contains(b, a)
}

/// Whether adding `e` to the nested set `current` keeps it nested: every
/// antichain through `e` of size at least two must meet transversally in a
/// subspace outside the building set.
fn extends_nested(bs: &BuildingSet, current: &[usize], e: usize) -> bool {
    let others: Vec<usize> = current.iter().copied().filter(|&c| !comparable(bs, c, e)).collect();
    let n = others.len();
    // every nonempty subset of the elements incomparable with e
    for mask in 1u64..(1u64 << n) {
        let pick: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| others[b]).collect();
        let antichain = pick
            .iter()
            .enumerate()
            .all(|(i, &a)| pick[i + 1..].iter().all(|&b| !comparable(bs, a, b)));
        if !antichain {
            continue;
        }
        let mut meet = bs.member(e).clone();
        let mut codims = bs.member(e).codim();
        for &p in &pick {
            meet = meet.intersect(bs.member(p)).expect("same ambient");
            codims += bs.member(p).codim();
        }
        if meet.codim() != codims || bs.position(&meet).is_some() {
            return false;
        }
    }
    true
}

/// Visits every nested set with at most `size_cap` entries (the empty set
/// included), in lexicographic order. Fails once more than `count_cap`
/// sets have been produced.
pub fn for_each_nested_set(
    bs: &BuildingSet,
    size_cap: usize,
    count_cap: usize,
    mut visit: impl FnMut(&NestedSet),
) -> Result<usize> {
    let mut count = 0usize;
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        bs: &BuildingSet,
        start: usize,
        stack: &mut Vec<usize>,
        size_cap: usize,
        count_cap: usize,
        count: &mut usize,
        visit: &mut dyn FnMut(&NestedSet),
    ) -> Result<()> {
        *count += 1;
        if *count > count_cap {
            return Err(WonderError::CapExceeded {
                what: "nested-set count",
                cap: count_cap,
            });
        }
        visit(&NestedSet { entries: stack.clone() });
        if stack.len() == size_cap {
            return Ok(());
        }
        for e in start..bs.len() {
            if extends_nested(bs, stack, e) {
                stack.push(e);
                rec(bs, e + 1, stack, size_cap, count_cap, count, visit)?;
                stack.pop();
            }
        }
        Ok(())
    }
    rec(bs, 0, &mut stack, size_cap, count_cap, &mut count, &mut visit)?;
    Ok(count)
}

pub fn nested_sets(bs: &BuildingSet, size_cap: usize, count_cap: usize) -> Result<Vec<NestedSet>> {
    let mut out = Vec::new();
    for_each_nested_set(bs, size_cap, count_cap, |n| out.push(n.clone()))?;
    Ok(out)
}

/// Every chain of the building set, the empty chain included, found by
/// walking up the containment order directly.
pub fn chains(bs: &BuildingSet) -> Vec<Chain> {
    let mut out = vec![Chain::empty()];
    let mut frontier: Vec<Vec<usize>> = (0..bs.len()).map(|i| vec![i]).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in frontier {
            let top = *c.last().expect("nonempty");
            for j in 0..bs.len() {
                if j != top && bs.member_contains(j, top) {
                    let mut d = c.clone();
                    d.push(j);
                    next.push(d);
                }
            }
            out.push(Chain { entries: c });
        }
        frontier = next;
    }
    out.sort();
    out
}
