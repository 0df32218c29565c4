//! Stabilizers of points of a wonderful model.

use std::collections::HashSet;

use serde::Serialize;

use super::arc::{realize, EmbeddedPoint};
use super::building::{BuildingSet, Chain};
use crate::error::{Result, WonderError};
use crate::group::{ElementIndex, FiniteMatrixGroup, Subgroup};
use crate::linalg::{is_zero_vector, kernel, normalize_line, proportional, RatMatrix, RatVector, Rational, Subspace};
use crate::par::{map_range, Execution};
use crate::stratification::LinearGModel;

/// Upper bound on the line assignments tried per base point in
/// [`nonabelian_fixed_point_search`].
pub const ASSIGNMENT_CAP: usize = 20_000;

#[derive(Debug, Clone, Serialize)]
pub struct StabReport {
    pub descriptor: String,
    pub stabilizer: Subgroup,
    pub order: usize,
    pub abelian: bool,
    pub solvable: bool,
}

impl StabReport {
    pub fn new(descriptor: impl Into<String>, group: &FiniteMatrixGroup, stabilizer: Subgroup) -> Self {
        StabReport {
            descriptor: descriptor.into(),
            order: stabilizer.order(),
            abelian: group.is_abelian(&stabilizer),
            solvable: group.is_solvable(&stabilizer),
            stabilizer,
        }
    }
}

/// How the group permutes the building-set members: `image[g][u]` is the
/// position of `g·U`, or `None` when `g·U` is not a member.
#[derive(Debug, Clone)]
pub struct BuildingSetAction {
    image: Vec<Vec<Option<usize>>>,
}

impl BuildingSetAction {
    pub fn new(group: &FiniteMatrixGroup, bs: &BuildingSet, exec: Execution) -> Self {
        let image = map_range(exec, group.order(), |g| {
            bs.members()
                .iter()
                .map(|u| bs.position(&group.subspace_image(g, u)))
                .collect()
        });
        BuildingSetAction { image }
    }

    pub fn image(&self, g: ElementIndex, u: usize) -> Option<usize> {
        self.image[g][u]
    }

    /// Whether every element maps members to members.
    pub fn is_stable(&self) -> bool {
        self.image.iter().all(|row| row.iter().all(Option::is_some))
    }
}

/// Whether `g` fixes `p`: it fixes the base and carries the line at each `U`
/// onto the line at `g·U`.
pub fn fixes_point(
    group: &FiniteMatrixGroup,
    bs: &BuildingSet,
    action: &BuildingSetAction,
    g: ElementIndex,
    p: &EmbeddedPoint,
) -> bool {
    let m = group.matrix(g);
    if m.mul_vec(&p.base) != p.base {
        return false;
    }
    (0..bs.len()).all(|u| match action.image(g, u) {
        None => false,
        Some(gu) => {
            let moved = m.mul_vec(&bs.quotient(u).lift(bs.ambient_dim(), &p.lines[u]));
            proportional(&bs.quotient(gu).project(&moved), &p.lines[gu])
        }
    })
}

pub fn point_stabilizer_with(
    p: &EmbeddedPoint,
    model: &LinearGModel,
    bs: &BuildingSet,
    action: &BuildingSetAction,
) -> StabReport {
    let g = &model.group;
    let members = (0..g.order()).filter(|&x| fixes_point(g, bs, action, x, p)).collect();
    StabReport::new("point", g, g.subgroup_from_members(members))
}

pub fn point_stabilizer(p: &EmbeddedPoint, model: &LinearGModel, bs: &BuildingSet) -> StabReport {
    let action = BuildingSetAction::new(&model.group, bs, Execution::Sequential);
    point_stabilizer_with(p, model, bs, &action)
}

/// `g` acts on `W'/W` (given by the quotient coordinates of `W` and a basis
/// of `W'`) as a scalar.
fn acts_as_scalar(m: &RatMatrix, q: &RatMatrix, upper: &[RatVector]) -> bool {
    let mut scalar: Option<Rational> = None;
    for b in upper {
        let before = q.mul_vec(b);
        if is_zero_vector(&before) {
            continue;
        }
        let after = q.mul_vec(&m.mul_vec(b));
        let (i, pivot) = before
            .iter()
            .enumerate()
            .find(|(_, x)| !num_traits::Zero::is_zero(*x))
            .expect("nonzero");
        let c = &after[i] / pivot;
        if before.iter().zip(&after).any(|(x, y)| &(x * &c) != y) {
            return false;
        }
        match &scalar {
            None => scalar = Some(c),
            Some(s) if *s != c => return false,
            _ => {}
        }
    }
    true
}

/// Whether `g` is the identity on `W_1` and a scalar on every quotient
/// `W_{l+1}/W_l` and on `V/W_k`.
pub fn passes_chain_conditions(m: &RatMatrix, flag: &[Subspace]) -> bool {
    let n = m.rows();
    let Some(first) = flag.first() else {
        return m.is_identity();
    };
    if first.basis_vectors().iter().any(|b| &m.mul_vec(b) != b) {
        return false;
    }
    let full = Subspace::full(n);
    flag.iter()
        .zip(flag.iter().skip(1).chain(std::iter::once(&full)))
        .all(|(lower, upper)| acts_as_scalar(m, &lower.quotient_coords(), &upper.basis_vectors()))
}

/// The stabilizer of a generic point over the stratum indexed by `chain`.
pub fn generic_chain_stabilizer(chain: &Chain, model: &LinearGModel, bs: &BuildingSet) -> StabReport {
    let g = &model.group;
    let flag = chain.subspaces(bs);
    let members = (0..g.order())
        .filter(|&x| passes_chain_conditions(g.matrix(x), &flag))
        .collect();
    StabReport::new(chain.describe(bs), g, g.subgroup_from_members(members))
}

/// Projection to a smaller building set: same base, lines of the members
/// that survive.
pub fn forget_point(p: &EmbeddedPoint, big: &BuildingSet, small: &BuildingSet) -> Result<EmbeddedPoint> {
    let lines = small
        .members()
        .iter()
        .map(|u| {
            big.position(u).map(|i| p.lines[i].clone()).ok_or_else(|| {
                WonderError::NotSubBuildingSet(format!("{} is not a member of the larger building set", u.describe()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddedPoint {
        base: p.base.clone(),
        lines,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<EmbeddedPoint>,
    pub assignments_tested: usize,
    pub truncated: bool,
}

/// Matrix of `g` on `V/U` in the quotient coordinates of `U`.
fn induced_on_quotient(bs: &BuildingSet, u: usize, m: &RatMatrix) -> RatMatrix {
    let q = bs.quotient(u);
    let c = q.coords.rows();
    let n = bs.ambient_dim();
    let cols: Vec<RatVector> = (0..c)
        .map(|j| {
            let mut e = vec![Rational::from_integer(0.into()); c];
            e[j] = Rational::from_integer(1.into());
            q.project(&m.mul_vec(&q.lift(n, &e)))
        })
        .collect();
    RatMatrix::from_rows(c, cols).expect("square").transpose()
}

/// Rational lines in `V/U` fixed by every generator of `k_u`: common
/// eigenvectors with eigenvalues `±1`. Eigenspaces of dimension two or more
/// contribute their basis lines and the sum of the basis.
fn eigenline_candidates(group: &FiniteMatrixGroup, bs: &BuildingSet, u: usize, k_u: &Subgroup) -> Vec<RatVector> {
    let gens: Vec<RatMatrix> = k_u
        .generators()
        .iter()
        .map(|&x| induced_on_quotient(bs, u, group.matrix(x)))
        .collect();
    let c = bs.quotient(u).coords.rows();
    let one = Rational::from_integer(1.into());
    let mut out: Vec<RatVector> = Vec::new();
    for signs in 0u32..(1 << gens.len()) {
        let mut eqs = RatMatrix::zeros(0, c);
        for (i, m) in gens.iter().enumerate() {
            let s = if signs >> i & 1 == 1 { -one.clone() } else { one.clone() };
            eqs = eqs.vstack(&m.minus_scalar(&s));
        }
        let e = kernel(&eqs);
        let mut lines = e.basis_vectors();
        if e.dim() >= 2 {
            lines.push(crate::linalg::combine(
                c,
                &vec![one.clone(); e.dim()],
                &e.basis_vectors(),
            ));
        }
        for l in lines {
            let l = normalize_line(&l);
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    out
}

/// Looks for a point fixed by `k` that is the limit of an arc. Bases range
/// over a basis of `Fixed(K)`, its sum and `0`; lines over the rational
/// eigenlines of the member stabilizers, propagated along `K`-orbits.
pub fn nonabelian_fixed_point_search(
    k: &Subgroup,
    model: &LinearGModel,
    bs: &BuildingSet,
    action: &BuildingSetAction,
) -> Result<SearchOutcome> {
    let group = &model.group;
    if !action.is_stable() {
        return Err(WonderError::NotEquivariant(
            "the group does not permute the building-set members".into(),
        ));
    }
    let n = bs.ambient_dim();
    let fixed = group.fixed_space(k);
    let mut bases = vec![vec![Rational::from_integer(0.into()); n]];
    let fb = fixed.basis_vectors();
    bases.extend(fb.iter().cloned());
    if fb.len() >= 2 {
        bases.push(crate::linalg::combine(
            n,
            &vec![Rational::from_integer(1.into()); fb.len()],
            &fb,
        ));
    }

    // K-orbits of members, each with a representative and a carrier per member
    let mut carrier: Vec<Option<(usize, ElementIndex)>> = vec![None; bs.len()];
    let mut reps = Vec::new();
    for u in 0..bs.len() {
        if carrier[u].is_some() {
            continue;
        }
        reps.push(u);
        for &x in k.members() {
            let v = action.image(x, u).expect("stable");
            if carrier[v].is_none() {
                carrier[v] = Some((u, x));
            }
        }
    }

    let mut tested = 0usize;
    let mut truncated = false;
    for base in &bases {
        let options: Vec<Vec<RatVector>> = reps
            .iter()
            .map(|&u| {
                let b = bs.quotient(u).project(base);
                if is_zero_vector(&b) {
                    let k_u = group.subgroup_from_members(
                        k.members()
                            .iter()
                            .copied()
                            .filter(|&x| action.image(x, u) == Some(u))
                            .collect(),
                    );
                    eigenline_candidates(group, bs, u, &k_u)
                } else {
                    vec![normalize_line(&b)]
                }
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let total = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
        let budget = match total {
            Some(t) if t <= ASSIGNMENT_CAP => t,
            _ => {
                truncated = true;
                ASSIGNMENT_CAP
            }
        };
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for idx in 0..budget {
            let mut rem = idx;
            let choice: Vec<usize> = options
                .iter()
                .map(|o| {
                    let c = rem % o.len();
                    rem /= o.len();
                    c
                })
                .collect();
            if !seen.insert(choice.clone()) {
                continue;
            }
            tested += 1;
            let mut rep_line = vec![None; bs.len()];
            for (r, &u) in reps.iter().enumerate() {
                rep_line[u] = Some(options[r][choice[r]].clone());
            }
            let lines: Vec<RatVector> = (0..bs.len())
                .map(|v| {
                    let (u, x) = carrier[v].expect("every member lies in an orbit");
                    let l = rep_line[u].as_ref().expect("representative");
                    let moved = group.matrix(x).mul_vec(&bs.quotient(u).lift(n, l));
                    normalize_line(&bs.quotient(v).project(&moved))
                })
                .collect();
            let p = EmbeddedPoint {
                base: base.clone(),
                lines,
            };
            if !k.generators().iter().all(|&x| fixes_point(group, bs, action, x, &p)) {
                continue;
            }
            if realize(&p, bs, &Subspace::full(n)).is_some() {
                return Ok(SearchOutcome {
                    witness: Some(p),
                    assignments_tested: tested,
                    truncated,
                });
            }
        }
    }
    Ok(SearchOutcome {
        witness: None,
        assignments_tested: tested,
        truncated,
    })
}
