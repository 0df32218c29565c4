//! The stabilizer and Y stratifications of a linear group action.
//!
//! Strata are stored as closed strata (subspaces); an open stratum is a member
//! minus the union of the members strictly inside it. Conicality is automatic
//! in the linear model and is not checked at runtime.
//!
//! ## Computing `H_1` without characters
//!
//! For a subgroup `H`, the 1-dimensional complex summands of `V` span exactly
//! `W = Fixed([H, H])`: that space is `H`-stable, `H` acts on it through the
//! abelian quotient `H / [H, H]` (so it splits into lines over `C`), and every
//! 1-dimensional summand is killed by `[H, H]`. The common kernel of the
//! characters of those summands is therefore `H_1 = { h ∈ H : h|_W = id }`, and
//! `Y(H) = Fixed(H_1)`. Every kernel involved is rational, so the rational
//! computation is a `Q`-form of the complex one. In the linear model `Y` only
//! depends on `H`, since fixed loci are connected.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::group::{FiniteMatrixGroup, Subgroup};
use crate::linalg::{kernel, RatMatrix, Subspace};

/// A finite group acting linearly on `Q^d`: the local model of a smooth
/// variety near a point, with `V` standing in for the tangent space.
#[derive(Debug)]
pub struct LinearGModel {
    pub name: String,
    pub group: FiniteMatrixGroup,
}

impl LinearGModel {
    pub fn new(name: impl Into<String>, group: FiniteMatrixGroup) -> Self {
        LinearGModel {
            name: name.into(),
            group,
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.group.dim()
    }
}

/// An intersection-closed family of proper subspaces of `V`, with its
/// containment order and the pointwise stabilizer of each member.
#[derive(Debug, Clone)]
pub struct StratumLattice {
    ambient_dim: usize,
    elements: Vec<Subspace>,
    order: Vec<Vec<bool>>,
    pointwise_stabs: Vec<Subgroup>,
    minimum: Option<usize>,
}

impl StratumLattice {
    /// Closure of the proper members of `seeds` under pairwise intersection.
    pub fn generated(group: &FiniteMatrixGroup, seeds: impl IntoIterator<Item = Subspace>) -> Self {
        let elements = intersection_closure(group.dim(), seeds);
        let pointwise_stabs = elements.iter().map(|s| group.pointwise_stabilizer(s)).collect();
        Self::assemble(group.dim(), elements, pointwise_stabs)
    }

    fn assemble(ambient_dim: usize, elements: Vec<Subspace>, pointwise_stabs: Vec<Subgroup>) -> Self {
        let order: Vec<Vec<bool>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| a.contains(b).expect("same ambient")).collect())
            .collect();
        let minimum = (0..elements.len()).find(|&i| (0..elements.len()).all(|j| order[j][i]));
        StratumLattice {
            ambient_dim,
            elements,
            order,
            pointwise_stabs,
            minimum,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Subspace {
        &self.elements[i]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `elements[i] ⊇ elements[j]`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.order[i][j]
    }

    pub fn pointwise_stab(&self, i: usize) -> &Subgroup {
        &self.pointwise_stabs[i]
    }

    pub fn minimum(&self) -> Option<usize> {
        self.minimum
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    /// Covering pairs `(lower, upper)` of the containment order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for lo in 0..n {
            for hi in 0..n {
                if lo == hi || !self.order[hi][lo] {
                    continue;
                }
                let covered = (0..n).any(|m| m != lo && m != hi && self.order[hi][m] && self.order[m][lo]);
                if !covered {
                    edges.push((lo, hi));
                }
            }
        }
        edges
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                let c = a.intersect(b).expect("same ambient");
                self.index_of(&c).is_some()
            })
        })
    }
}

/// Closure of the proper subspaces among `seeds` under intersection, sorted
/// by dimension and then canonically.
pub fn intersection_closure(ambient: usize, seeds: impl IntoIterator<Item = Subspace>) -> Vec<Subspace> {
    let mut seen = HashSet::new();
    let mut list: Vec<Subspace> = Vec::new();
    for s in seeds {
        assert_eq!(s.ambient_dim(), ambient, "seed ambient mismatch");
        if !s.is_full() && seen.insert(s.clone()) {
            list.push(s);
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let c = list[i].intersect(&list[j]).expect("same ambient");
            if seen.insert(c.clone()) {
                list.push(c);
            }
        }
        i += 1;
    }
    list.sort();
    list
}

/// Closure of `{ ker(g - 1) : g ≠ 1 }` under intersection.
pub fn stabilizer_lattice(model: &LinearGModel) -> StratumLattice {
    let g = &model.group;
    let id = RatMatrix::identity(g.dim());
    let mut kernels = HashSet::new();
    for i in 1..g.order() {
        kernels.insert(kernel(&g.matrix(i).sub(&id)));
    }
    let mut seeds: Vec<Subspace> = kernels.into_iter().collect();
    seeds.sort();
    StratumLattice::generated(g, seeds)
}

/// One member `Y_j` of the Y family, with the subgroup that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct YWitness {
    pub subspace: Subspace,
    pub witness_h: Subgroup,
    pub h1: Subgroup,
    /// `Fixed([H, H])`, the span of the 1-dimensional summands.
    pub w_space: Subspace,
}

/// `(W, H_1, Y)` for a single subgroup `H`; see the module docs.
/// `Y` is all of `V` exactly when `H` is abelian.
pub fn y_of_subgroup(group: &FiniteMatrixGroup, h: &Subgroup) -> (Subspace, Subgroup, Subspace) {
    let derived = group.derived_subgroup(h);
    let w = group.fixed_space(&derived);
    let h1_members = h
        .members()
        .iter()
        .copied()
        .filter(|&x| group.acts_trivially_on(x, &w))
        .collect();
    let h1 = group.subgroup_from_members(h1_members);
    let y = group.fixed_space(&h1);
    (w, h1, y)
}

/// The proper subvarieties `Y(H)` over all nonabelian subgroups, one witness
/// per distinct subspace, sorted canonically.
pub fn y_family(model: &LinearGModel, order_cap: usize) -> Result<Vec<YWitness>> {
    let g = &model.group;
    let mut out: Vec<YWitness> = Vec::new();
    for h in g.all_subgroups(order_cap)? {
        if g.is_abelian(&h) {
            continue;
        }
        let (w_space, h1, y) = y_of_subgroup(g, &h);
        if y.is_full() || out.iter().any(|w| w.subspace == y) {
            continue;
        }
        out.push(YWitness {
            subspace: y,
            witness_h: h,
            h1,
            w_space,
        });
    }
    out.sort_by(|a, b| a.subspace.cmp(&b.subspace));
    Ok(out)
}

pub fn y_subspaces(family: &[YWitness]) -> Vec<Subspace> {
    family.iter().map(|w| w.subspace.clone()).collect()
}

/// Closed strata of the Y stratification.
pub fn y_lattice(model: &LinearGModel, family: &[YWitness]) -> StratumLattice {
    StratumLattice::generated(&model.group, y_subspaces(family))
}

/// `#{ j : Y_j ⊇ W }`.
pub fn incidence_count(w: &Subspace, family: &[YWitness]) -> usize {
    family
        .iter()
        .filter(|y| y.subspace.contains(w).expect("same ambient"))
        .count()
}

/// Indices of members whose generic points have a non-solvable stabilizer.
pub fn nonsolvable_strata(group: &FiniteMatrixGroup, lattice: &StratumLattice) -> Vec<usize> {
    (0..lattice.len())
        .filter(|&i| !group.is_solvable(lattice.pointwise_stab(i)))
        .collect()
}
