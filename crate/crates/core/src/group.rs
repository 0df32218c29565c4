//! Finite groups of invertible rational matrices, enumerated element by element.
//!
//! Elements are addressed by their index in the group's element table; index 0
//! is always the identity. Subgroups are sorted index sets against that table.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Result, WonderError};
use crate::linalg::{kernel, RatMatrix, Subspace};
use crate::par::{map_range, Execution};

pub type ElementIndex = usize;

/// Default bound on the group order accepted by subgroup enumeration.
pub const DEFAULT_SUBGROUP_ORDER_CAP: usize = 400;
/// Default bound on the number of elements produced by generator closure.
pub const DEFAULT_GROUP_ORDER_CAP: usize = 5000;

pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<RatMatrix>,
    lookup: HashMap<RatMatrix, ElementIndex>,
    inverses: Vec<ElementIndex>,
    generators: Vec<ElementIndex>,
    table: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for FiniteMatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMatrixGroup")
            .field("dim", &self.dim)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteMatrixGroup {
    /// Breadth-first closure of `gens` inside `GL_dim(Q)`. Fails once more
    /// than `cap` elements have been produced.
    pub fn close_generators(dim: usize, gens: &[RatMatrix], cap: usize) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(WonderError::Dimension(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.inverse().is_none() {
                return Err(WonderError::NonInvertible { index: i });
            }
        }
        let id = RatMatrix::identity(dim);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0)]);
        let mut next = 0;
        while next < elements.len() {
            for g in gens {
                let p = elements[next].mul(g);
                if !lookup.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(WonderError::CapExceeded {
                            what: "group order",
                            cap,
                        });
                    }
                    lookup.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            next += 1;
        }
        let inverses = elements
            .iter()
            .map(|m| {
                let inv = m.inverse().expect("group elements are invertible");
                *lookup
                    .get(&inv)
                    .expect("finite closure under products contains inverses")
            })
            .collect();
        let mut generators: Vec<ElementIndex> = gens.iter().map(|g| lookup[g]).filter(|&i| i != 0).collect();
        generators.sort_unstable();
        generators.dedup();
        Ok(FiniteMatrixGroup {
            dim,
            elements,
            lookup,
            inverses,
            generators,
            table: OnceLock::new(),
        })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::close_generators(dim, &[], 1).expect("trivial group")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> ElementIndex {
        0
    }

    pub fn matrix(&self, i: ElementIndex) -> &RatMatrix {
        &self.elements[i]
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElementIndex] {
        &self.generators
    }

    pub fn index_of(&self, m: &RatMatrix) -> Option<ElementIndex> {
        self.lookup.get(m).copied()
    }

    pub fn inverse(&self, i: ElementIndex) -> ElementIndex {
        self.inverses[i]
    }

    pub fn mul(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        if let Some(t) = self.table.get() {
            return t[a * self.order() + b] as usize;
        }
        let p = self.elements[a].mul(&self.elements[b]);
        *self.lookup.get(&p).expect("group is closed under products")
    }

    /// The full Cayley table, computed once on first use.
    pub fn cayley_table(&self, exec: Execution) -> &[u32] {
        self.table.get_or_init(|| {
            let n = self.order();
            map_range(exec, n, |a| {
                (0..n)
                    .map(|b| {
                        let p = self.elements[a].mul(&self.elements[b]);
                        self.lookup[&p] as u32
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect()
        })
    }

    pub fn has_cayley_table(&self) -> bool {
        self.table.get().is_some()
    }

    pub fn commutator(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        let ab = self.mul(a, b);
        let ab_ainv = self.mul(ab, self.inverse(a));
        self.mul(ab_ainv, self.inverse(b))
    }

    pub fn conjugate(&self, g: ElementIndex, x: ElementIndex) -> ElementIndex {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    pub fn element_order(&self, i: ElementIndex) -> usize {
        let mut k = 1;
        let mut p = i;
        while p != 0 {
            p = self.mul(p, i);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
            generators: self.generators.clone(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: vec![0],
            generators: Vec::new(),
        }
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[ElementIndex]) -> Subgroup {
        let mut gens: Vec<ElementIndex> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let members = self.closure_from(&[0], &gens);
        Subgroup {
            members,
            generators: gens,
        }
    }

    /// Closure of `start` (assumed to contain the identity) under right
    /// multiplication by `gens`; returns sorted members.
    fn closure_from(&self, start: &[ElementIndex], gens: &[ElementIndex]) -> Vec<ElementIndex> {
        let mut seen = vec![false; self.order()];
        let mut queue: VecDeque<ElementIndex> = VecDeque::new();
        for &s in start {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            out.push(x);
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Wraps a member set that is known to be a subgroup, choosing a small
    /// generating set greedily.
    pub fn subgroup_from_members(&self, mut members: Vec<ElementIndex>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        for &m in &members {
            if !inside[m] {
                gens.push(m);
                for x in self.closure_from(&[0], &gens) {
                    inside[x] = true;
                }
            }
        }
        debug_assert_eq!(
            members.len(),
            inside.iter().filter(|&&b| b).count(),
            "member set is not closed"
        );
        Subgroup {
            members,
            generators: gens,
        }
    }

    /// Every subgroup exactly once: cyclic subgroups, closed under joins until
    /// nothing new appears. Sorted by order, then members.
    pub fn all_subgroups(&self, order_cap: usize) -> Result<Vec<Subgroup>> {
        if self.order() > order_cap {
            return Err(WonderError::CapExceeded {
                what: "subgroup enumeration order",
                cap: order_cap,
            });
        }
        self.cayley_table(Execution::default());
        let mut seen: HashSet<Vec<ElementIndex>> = HashSet::new();
        let mut cyclic = Vec::new();
        for g in 0..self.order() {
            let h = self.generate(&[g]);
            if seen.insert(h.members.clone()) {
                cyclic.push(h);
            }
        }
        let mut all = cyclic.clone();
        let mut next = 0;
        while next < all.len() {
            let base = all[next].clone();
            let mut inside = vec![false; self.order()];
            for &m in &base.members {
                inside[m] = true;
            }
            for c in &cyclic {
                let g = c.generators.first().copied().unwrap_or(0);
                if inside[g] {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(g);
                let members = self.closure_from(&base.members, &gens);
                if seen.insert(members.clone()) {
                    gens.sort_unstable();
                    all.push(Subgroup {
                        members,
                        generators: gens,
                    });
                }
            }
            next += 1;
        }
        all.sort();
        Ok(all)
    }

    /// `[H, H]`, as the normal closure in `H` of commutators of generators.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        let gens = &h.generators;
        let mut seeds = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                let c = self.commutator(a, b);
                if c != 0 {
                    seeds.push(c);
                }
            }
        }
        let mut n = self.generate(&seeds);
        loop {
            let mut inside = vec![false; self.order()];
            for &m in &n.members {
                inside[m] = true;
            }
            let extra: Vec<ElementIndex> = gens
                .iter()
                .flat_map(|&g| n.generators.iter().map(move |&x| (g, x)))
                .map(|(g, x)| self.conjugate(g, x))
                .filter(|&c| !inside[c])
                .collect();
            if extra.is_empty() {
                return n;
            }
            let mut all_gens = n.generators.clone();
            all_gens.extend(extra);
            n = self.generate(&all_gens);
        }
    }

    pub fn is_abelian(&self, h: &Subgroup) -> bool {
        let g = &h.generators;
        g.iter()
            .enumerate()
            .all(|(i, &a)| g[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `H ⊳ H' ⊳ H'' ⊳ …` down to the first repeated term.
    pub fn derived_series(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut series = vec![h.clone()];
        loop {
            let last = series.last().expect("nonempty series");
            let d = self.derived_subgroup(last);
            if d.members == last.members {
                return series;
            }
            series.push(d);
        }
    }

    pub fn is_solvable(&self, h: &Subgroup) -> bool {
        self.derived_series(h).last().is_some_and(|s| s.order() == 1)
    }

    pub fn is_normal_in(&self, n: &Subgroup, h: &Subgroup) -> bool {
        h.generators
            .iter()
            .all(|&g| n.generators.iter().all(|&x| n.contains(self.conjugate(g, x))))
    }

    /// `Fixed(H)`: the common kernel of `h - 1` over generators of `H`.
    pub fn fixed_space(&self, h: &Subgroup) -> Subspace {
        self.fixed_space_of(&h.generators)
    }

    pub fn fixed_space_of(&self, elements: &[ElementIndex]) -> Subspace {
        let id = RatMatrix::identity(self.dim);
        let mut eqs = RatMatrix::zeros(0, self.dim);
        for &g in elements {
            eqs = eqs.vstack(&self.elements[g].sub(&id));
        }
        kernel(&eqs)
    }

    /// Whether element `g` is the identity on every vector of `s`.
    pub fn acts_trivially_on(&self, g: ElementIndex, s: &Subspace) -> bool {
        let m = &self.elements[g];
        s.basis_vectors().iter().all(|b| &m.mul_vec(b) == b)
    }

    /// `{ g ∈ G : g|_S = id }`.
    pub fn pointwise_stabilizer(&self, s: &Subspace) -> Subgroup {
        let members = (0..self.order()).filter(|&g| self.acts_trivially_on(g, s)).collect();
        self.subgroup_from_members(members)
    }

    /// Elements of `k` mapping `s` onto itself.
    pub fn setwise_stabilizer_in(&self, k: &Subgroup, s: &Subspace) -> Subgroup {
        let members = k
            .members
            .iter()
            .copied()
            .filter(|&g| &s.image(&self.elements[g]) == s)
            .collect();
        self.subgroup_from_members(members)
    }

    pub fn subspace_image(&self, g: ElementIndex, s: &Subspace) -> Subspace {
        s.image(&self.elements[g])
    }
}

/// A subgroup, as a sorted set of element indices of its parent group.
/// Equality, hashing and ordering only look at the member set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<ElementIndex>,
    generators: Vec<ElementIndex>,
}

impl Subgroup {
    pub fn members(&self) -> &[ElementIndex] {
        &self.members
    }

    pub fn generators(&self) -> &[ElementIndex] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: ElementIndex) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, group: &FiniteMatrixGroup, other: &Subgroup) -> Subgroup {
        let members = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        group.subgroup_from_members(members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Subgroup", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("members", &self.members)?;
        st.end()
    }
}
