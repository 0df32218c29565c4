//! Polynomial arcs `x(t) = Σ v_i t^i` and their limits in `V × ∏ P(V/U)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::building::{BuildingSet, Chain};
use crate::error::{Result, WonderError};
use crate::linalg::{
    combine, is_zero_vector, kernel, normalize_line, proportional, rat, serde_vector, serde_vectors, zero_vector,
    RatMatrix, RatVector, Rational, Subspace,
};
use crate::stratification::intersection_closure;

/// Resampling attempts before a degenerate configuration is reported.
pub const ARC_RETRY_BUDGET: usize = 64;

/// Coefficient range for generic samples.
const GENERIC_RANGE: i64 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    #[serde(with = "serde_vectors")]
    pub coefficients: Vec<RatVector>,
}

/// A point of the wonderful model: the base point and, for each building-set
/// member (same order as the members), a normalized vector in the quotient
/// coordinates of `V/U`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddedPoint {
    #[serde(with = "serde_vector")]
    pub base: RatVector,
    #[serde(with = "serde_vectors")]
    pub lines: Vec<RatVector>,
}

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random integer combination of the basis of `space`.
pub fn random_in(space: &Subspace, range: i64, rng: &mut impl Rng) -> RatVector {
    let coeffs: Vec<Rational> = (0..space.dim()).map(|_| rat(rng.gen_range(-range..=range))).collect();
    space.vector_from_coeffs(&coeffs)
}

/// A vector of `space` lying in no member of `avoid` that does not already
/// contain all of `space`.
pub fn sample_generic(space: &Subspace, avoid: &[Subspace], rng: &mut impl Rng) -> Result<RatVector> {
    let forced: Vec<bool> = avoid.iter().map(|m| m.contains(space).expect("same ambient")).collect();
    for _ in 0..ARC_RETRY_BUDGET {
        let v = random_in(space, GENERIC_RANGE, rng);
        if !space.is_zero() && is_zero_vector(&v) {
            continue;
        }
        let ok = avoid.iter().zip(&forced).all(|(m, &f)| f || !m.contains_vector(&v));
        if ok {
            return Ok(v);
        }
    }
    Err(WonderError::RetryBudget(format!(
        "no generic vector found in {} after {ARC_RETRY_BUDGET} attempts",
        space.describe()
    )))
}

/// An arc with `v_0` generic in `flag[0]`, `v_l` generic in `flag[l]` and a
/// final coefficient generic in `V`.
pub fn arc_through_flag(flag: &[Subspace], avoid: &[Subspace], ambient: usize, rng: &mut impl Rng) -> Result<Arc> {
    let mut coefficients = Vec::with_capacity(flag.len() + 1);
    for s in flag {
        coefficients.push(sample_generic(s, avoid, rng)?);
    }
    coefficients.push(sample_generic(&Subspace::full(ambient), avoid, rng)?);
    Ok(Arc { coefficients })
}

/// Generic arc adapted to a chain `W_1 ⊊ … ⊊ W_k`, deterministic in `seed`.
/// The empty chain gives a constant arc at a generic point of `V`.
pub fn adapted_arc(chain: &Chain, bs: &BuildingSet, seed: u64) -> Result<Arc> {
    let mut rng = seeded_rng(seed, 0);
    let avoid: Vec<Subspace> = bs.lattice_elements().iter().chain(bs.members()).cloned().collect();
    let flag = chain.subspaces(bs);
    let mut arc = arc_through_flag(&flag, &avoid, bs.ambient_dim(), &mut rng)?;
    if chain.is_empty() {
        arc.coefficients.truncate(1);
    }
    Ok(arc)
}

/// Leading-term limit of an arc.
pub fn limit_point(arc: &Arc, bs: &BuildingSet) -> Result<EmbeddedPoint> {
    let base = arc
        .coefficients
        .first()
        .cloned()
        .ok_or_else(|| WonderError::DegenerateArc("arc has no coefficients".into()))?;
    let mut lines = Vec::with_capacity(bs.len());
    for (i, u) in bs.members().iter().enumerate() {
        let q = bs.quotient(i);
        let lead = arc
            .coefficients
            .iter()
            .map(|v| q.project(v))
            .find(|w| !is_zero_vector(w))
            .ok_or_else(|| WonderError::DegenerateArc(format!("arc lies inside {}", u.describe())))?;
        lines.push(normalize_line(&lead));
    }
    Ok(EmbeddedPoint { base, lines })
}

impl EmbeddedPoint {
    /// Structural validity: nonzero lines, consistent with the base.
    pub fn is_consistent(&self, bs: &BuildingSet) -> bool {
        self.lines.len() == bs.len()
            && self.lines.iter().enumerate().all(|(i, l)| {
                let b = bs.quotient(i).project(&self.base);
                !is_zero_vector(l) && (is_zero_vector(&b) || proportional(&b, l))
            })
    }
}

/// An arc, with every coefficient in `confine`, whose limit is `p`; `None`
/// when no such arc exists.
///
/// Members containing the base are handled in rounds: each round picks a
/// subspace `M` from the intersection closure of the still-open members, adds
/// a coefficient in `M ∩ confine` whose image spans the prescribed line of
/// every open member not containing `M`, and defers the rest.
pub fn realize(p: &EmbeddedPoint, bs: &BuildingSet, confine: &Subspace) -> Option<Arc> {
    if !confine.contains_vector(&p.base) || !p.is_consistent(bs) {
        return None;
    }
    let active: Vec<usize> = (0..bs.len())
        .filter(|&i| bs.member(i).contains_vector(&p.base))
        .collect();
    let mut coefficients = vec![p.base.clone()];
    realize_rec(p, bs, confine, active, &mut coefficients).then_some(Arc { coefficients })
}

fn realize_rec(
    p: &EmbeddedPoint,
    bs: &BuildingSet,
    confine: &Subspace,
    active: Vec<usize>,
    out: &mut Vec<RatVector>,
) -> bool {
    if active.is_empty() {
        return true;
    }
    let n = bs.ambient_dim();
    let mut candidates = intersection_closure(n, active.iter().map(|&i| bs.member(i).clone()));
    candidates.push(Subspace::full(n));
    for m in candidates {
        let deferred: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| bs.member(i).contains(&m).expect("same ambient"))
            .collect();
        if deferred.len() == active.len() {
            continue;
        }
        let resolved: Vec<usize> = active.iter().copied().filter(|i| !deferred.contains(i)).collect();
        let space = m.intersect(confine).expect("same ambient");
        if let Some(v) = solve_round(p, bs, &space, &resolved) {
            out.push(v);
            if realize_rec(p, bs, confine, deferred, out) {
                return true;
            }
            out.pop();
        }
    }
    false
}

/// `v ∈ space` with `Q_U v = λ_U ℓ_U`, `λ_U ≠ 0`, for every `U` in `resolved`.
fn solve_round(p: &EmbeddedPoint, bs: &BuildingSet, space: &Subspace, resolved: &[usize]) -> Option<RatVector> {
    let m = space.dim();
    let r = resolved.len();
    if m == 0 {
        return None;
    }
    let basis = space.basis_vectors();
    let mut rows = Vec::new();
    for (k, &u) in resolved.iter().enumerate() {
        let q = bs.quotient(u);
        let images: Vec<RatVector> = basis.iter().map(|b| q.project(b)).collect();
        for (c, l) in p.lines[u].iter().enumerate() {
            let mut row = zero_vector(m + r);
            for (a, img) in images.iter().enumerate() {
                row[a] = img[c].clone();
            }
            row[m + k] = -l.clone();
            rows.push(row);
        }
    }
    let sol = kernel(&RatMatrix::from_rows(m + r, rows).expect("consistent widths"));
    let ks = sol.basis_vectors();
    if (m..m + r).any(|j| ks.iter().all(|k| k[j].is_zero())) {
        return None;
    }
    // Σ t^i k_i has every λ-coordinate nonzero for all but finitely many t.
    for t in 1..=(ks.len() * r + 2) as i64 {
        let mut coeffs = Vec::with_capacity(ks.len());
        let mut c = Rational::one();
        for _ in 0..ks.len() {
            coeffs.push(c.clone());
            c *= rat(t);
        }
        let x = combine(m + r, &coeffs, &ks);
        if (m..m + r).all(|j| !x[j].is_zero()) {
            return Some(combine(space.ambient_dim(), &x[..m], &basis));
        }
    }
    None
}
