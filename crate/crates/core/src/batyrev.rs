//! The staged abelianization trace over the Y family.
//!
//! In the linear model every `Y_j` passes through the origin, so the first
//! stage always has `r` equal to the family size and blows up `∩ Y_j`.
//! Later stages measure incidence of proper transforms upstairs: a point over
//! a chain of blown centers whose last normal direction is generic in a tail
//! `T` lies on exactly the transforms of the active `Y_j ⊇ T`. The tails worth
//! considering are the lattice elements not inside any blown center.
//!
//! [`oracle_r`] recomputes the same maximum by building explicit arcs and
//! asking, for each `Y_j`, whether the limit point is reachable by an arc
//! inside `Y_j`.

use serde::Serialize;

use crate::error::{Result, WonderError};
use crate::group::FiniteMatrixGroup;
use crate::linalg::Subspace;
use crate::par::{map_slice, Execution};
use crate::stratification::{intersection_closure, y_subspaces, StratumLattice, YWitness};
use crate::wonderful::{limit_point, realize, sample_generic, seeded_rng, Arc, BuildingSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatyrevStage {
    pub r: usize,
    pub centers: Vec<Subspace>,
    /// Family indices retired at this stage (contained in a center).
    pub retired: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatyrevTrace {
    pub ambient_dim: usize,
    pub family: Vec<Subspace>,
    pub initial_r: usize,
    pub stages: Vec<BatyrevStage>,
    /// Family indices still active when each stage starts.
    pub active_history: Vec<Vec<usize>>,
}

impl BatyrevTrace {
    pub fn blown_stages(&self) -> Vec<Vec<Subspace>> {
        self.stages.iter().map(|s| s.centers.clone()).collect()
    }

    /// Every center, in stage order.
    pub fn all_centers(&self) -> Vec<Subspace> {
        self.stages.iter().flat_map(|s| s.centers.iter().cloned()).collect()
    }
}

fn inside_any(s: &Subspace, blown: &[Subspace]) -> bool {
    blown.iter().any(|b| b.contains(s).expect("same ambient"))
}

/// Family indices whose subspace is not inside a blown center.
pub fn active_indices(family: &[Subspace], blown: &[Subspace]) -> Vec<usize> {
    (0..family.len()).filter(|&j| !inside_any(&family[j], blown)).collect()
}

/// The combinatorial `r` at the current stage, with every tail attaining it.
pub fn stage_r(family: &[Subspace], blown: &[Subspace]) -> (usize, Vec<Subspace>) {
    let ambient = family.first().map_or(0, Subspace::ambient_dim);
    let active = active_indices(family, blown);
    let mut best = 0;
    let mut tails = Vec::new();
    for t in intersection_closure(ambient, family.iter().cloned()) {
        if inside_any(&t, blown) {
            continue;
        }
        let count = active
            .iter()
            .filter(|&&j| family[j].contains(&t).expect("same ambient"))
            .count();
        if count > best {
            best = count;
            tails.clear();
        }
        if count == best && count > 0 {
            tails.push(t);
        }
    }
    (best, tails)
}

pub fn batyrev_trace(ambient: usize, family: &[YWitness]) -> BatyrevTrace {
    batyrev_trace_subspaces(ambient, &y_subspaces(family))
}

pub fn batyrev_trace_subspaces(ambient: usize, family: &[Subspace]) -> BatyrevTrace {
    let mut blown: Vec<Subspace> = Vec::new();
    let mut stages = Vec::new();
    let mut active_history = Vec::new();
    loop {
        let active = active_indices(family, &blown);
        if active.is_empty() {
            break;
        }
        let (r, tails) = stage_r(family, &blown);
        let mut centers: Vec<Subspace> = tails
            .iter()
            .map(|t| {
                active
                    .iter()
                    .map(|&j| &family[j])
                    .filter(|y| y.contains(t).expect("same ambient"))
                    .fold(Subspace::full(ambient), |acc, y| {
                        acc.intersect(y).expect("same ambient")
                    })
            })
            .collect();
        centers.sort();
        centers.dedup();
        let retired = active
            .iter()
            .copied()
            .filter(|&j| inside_any(&family[j], &centers))
            .collect();
        blown.extend(centers.iter().cloned());
        active_history.push(active);
        stages.push(BatyrevStage { r, centers, retired });
    }
    BatyrevTrace {
        ambient_dim: ambient,
        family: family.to_vec(),
        initial_r: stages.first().map_or(0, |s| s.r),
        stages,
        active_history,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub passed: bool,
    pub checks: Vec<TraceCheck>,
}

impl TraceReport {
    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

/// Checks the structural laws of a trace: strictly decreasing `r`, at most
/// `initial_r` stages, first center `∩ Y_j`, centers closed under the group,
/// centers in the Y lattice, pairwise non-nested centers within a stage, and
/// every lattice element blown eventually.
pub fn verify_trace(trace: &BatyrevTrace, group: &FiniteMatrixGroup) -> TraceReport {
    let n = trace.ambient_dim;
    let lattice = intersection_closure(n, trace.family.iter().cloned());
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| checks.push(TraceCheck { name, passed, detail });

    let rs: Vec<usize> = trace.stages.iter().map(|s| s.r).collect();
    push(
        "monotonicity",
        rs.windows(2).all(|w| w[0] > w[1]),
        format!("r values {rs:?}"),
    );
    push(
        "stage-bound",
        trace.stages.len() <= trace.initial_r,
        format!("{} stages, initial r {}", trace.stages.len(), trace.initial_r),
    );
    let meet = trace
        .family
        .iter()
        .fold(Subspace::full(n), |acc, y| acc.intersect(y).expect("same ambient"));
    let first_ok = match trace.stages.first() {
        None => trace.family.is_empty(),
        Some(s) => s.centers == vec![meet.clone()] && s.r == trace.family.len(),
    };
    push("first-center", first_ok, format!("expected {}", meet.describe()));

    let mut stable = true;
    for s in &trace.stages {
        for c in &s.centers {
            for &g in group.generators() {
                if !s.centers.contains(&group.subspace_image(g, c)) {
                    stable = false;
                }
            }
        }
    }
    push("equivariance", stable, "centers permuted by the generators".into());

    let members = trace
        .stages
        .iter()
        .all(|s| s.centers.iter().all(|c| lattice.contains(c)));
    push(
        "lattice-membership",
        members,
        format!("{} lattice elements", lattice.len()),
    );

    let non_nested = trace.stages.iter().all(|s| {
        s.centers.iter().enumerate().all(|(i, a)| {
            s.centers[i + 1..]
                .iter()
                .all(|b| !a.contains(b).expect("same ambient") && !b.contains(a).expect("same ambient"))
        })
    });
    push("non-nested", non_nested, "centers within a stage".into());

    let all = trace.all_centers();
    let coverage = lattice.iter().all(|l| all.contains(l)) && all.len() == lattice.len();
    push(
        "coverage",
        coverage,
        format!("{} centers for {} lattice elements", all.len(), lattice.len()),
    );

    TraceReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// A point upstairs: a chain of blown centers (with their stages) and a tail
/// giving the last normal direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualPoint {
    pub chain: Vec<(usize, Subspace)>,
    pub tail: Subspace,
}

/// Upper bound on enumerated virtual points per stage.
pub const VIRTUAL_POINT_CAP: usize = 20_000;

/// Admissible virtual points after blowing up `blown_stages`: chains of
/// centers increasing in stage and containment with no blown center strictly
/// between consecutive entries, and a tail from the lattice (or `V`) that
/// strictly contains the top and lies in no blown center.
pub fn virtual_points(family: &[Subspace], blown_stages: &[Vec<Subspace>]) -> Result<Vec<VirtualPoint>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let n = first.ambient_dim();
    let blown: Vec<(usize, Subspace)> = blown_stages
        .iter()
        .enumerate()
        .flat_map(|(s, cs)| cs.iter().map(move |c| (s, c.clone())))
        .collect();
    let flat: Vec<Subspace> = blown.iter().map(|(_, c)| c.clone()).collect();
    let mut tails: Vec<Subspace> = intersection_closure(n, family.iter().cloned())
        .into_iter()
        .filter(|t| !inside_any(t, &flat))
        .collect();
    tails.push(Subspace::full(n));

    let strictly = |a: &Subspace, b: &Subspace| a != b && b.contains(a).expect("same ambient");
    let skips = |a: &(usize, Subspace), b: &(usize, Subspace)| {
        blown
            .iter()
            .any(|(s, c)| *s > a.0 && *s < b.0 && strictly(&a.1, c) && strictly(c, &b.1))
    };

    let mut chains: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = (0..blown.len()).map(|i| vec![i]).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in frontier {
            let top = &blown[*c.last().expect("nonempty")];
            for (j, b) in blown.iter().enumerate() {
                if b.0 > top.0 && strictly(&top.1, &b.1) && !skips(top, b) {
                    let mut d = c.clone();
                    d.push(j);
                    next.push(d);
                }
            }
            chains.push(c);
        }
        frontier = next;
    }

    let mut out = Vec::new();
    for c in &chains {
        for t in &tails {
            let ok = match c.last() {
                None => true,
                Some(&top) => strictly(&blown[top].1, t),
            };
            if ok {
                if out.len() == VIRTUAL_POINT_CAP {
                    return Err(WonderError::CapExceeded {
                        what: "virtual points",
                        cap: VIRTUAL_POINT_CAP,
                    });
                }
                out.push(VirtualPoint {
                    chain: c.iter().map(|&i| blown[i].clone()).collect(),
                    tail: t.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// `r` at the stage after `blown_stages`, measured with explicit arcs: for
/// each admissible virtual point and sample, the limit of a generic arc
/// adapted to it, and the number of active `Y_j` containing an arc with the
/// same limit.
pub fn oracle_r(
    family: &[Subspace],
    blown_stages: &[Vec<Subspace>],
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<usize> {
    let Some(first) = family.first() else {
        return Ok(0);
    };
    let n = first.ambient_dim();
    let flat: Vec<Subspace> = blown_stages.iter().flatten().cloned().collect();
    let active = active_indices(family, &flat);
    let bs = BuildingSet::from_subspaces(n, &flat);
    let mut avoid = intersection_closure(n, family.iter().cloned().chain(flat.iter().cloned()));
    avoid.extend(flat.iter().cloned());
    let points = virtual_points(family, blown_stages)?;
    let tasks: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..samples).map(move |s| (p, s)))
        .collect();
    let counts = map_slice(exec, &tasks, |&(p, s)| -> Result<usize> {
        let vp = &points[p];
        let mut rng = seeded_rng(seed, (p * samples + s) as u64);
        let mut coefficients = Vec::new();
        for (_, c) in &vp.chain {
            coefficients.push(sample_generic(c, &avoid, &mut rng)?);
        }
        coefficients.push(sample_generic(&vp.tail, &avoid, &mut rng)?);
        let point = limit_point(&Arc { coefficients }, &bs)?;
        Ok(active
            .iter()
            .filter(|&&j| realize(&point, &bs, &family[j]).is_some())
            .count())
    });
    let mut best = 0;
    for c in counts {
        best = best.max(c?);
    }
    Ok(best)
}

/// Combinatorial and oracle `r` at every stage, failing on any mismatch.
pub fn cross_check_oracle(
    trace: &BatyrevTrace,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<(usize, usize)>> {
    let blown = trace.blown_stages();
    let mut out = Vec::new();
    for (i, stage) in trace.stages.iter().enumerate() {
        let o = oracle_r(&trace.family, &blown[..i], samples, seed.wrapping_add(i as u64), exec)?;
        if o != stage.r {
            return Err(WonderError::OracleMismatch(format!(
                "stage {}: combinatorial r = {}, arc oracle r = {o}",
                i + 1,
                stage.r
            )));
        }
        out.push((stage.r, o));
    }
    Ok(out)
}

/// Lattice elements grouped by dimension, ascending: the blowup order of the
/// maximal wonderful model.
pub fn wonderful_order(lattice: &StratumLattice) -> Vec<Vec<Subspace>> {
    let mut out: Vec<Vec<Subspace>> = Vec::new();
    let mut last = None;
    for e in lattice.elements() {
        if last != Some(e.dim()) {
            out.push(Vec::new());
            last = Some(e.dim());
        }
        out.last_mut().expect("pushed").push(e.clone());
    }
    for stage in &mut out {
        stage.sort();
    }
    out.sort_by_key(|s| s[0].dim());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::stratification::{stabilizer_lattice, y_family, y_lattice};

    fn trace_of(m: &crate::stratification::LinearGModel) -> BatyrevTrace {
        batyrev_trace(m.ambient_dim(), &y_family(m, 400).unwrap())
    }

    #[test]
    fn s4_trace() {
        let m = presets::s4_perm4();
        let t = trace_of(&m);
        assert_eq!(t.stages.len(), 2);
        assert_eq!(t.stages[0].r, 8);
        assert_eq!(t.stages[0].centers.len(), 1);
        assert_eq!(t.stages[0].centers[0].dim(), 1);
        assert_eq!(t.stages[1].r, 1);
        assert_eq!(t.stages[1].centers.len(), 7);
        assert!(verify_trace(&t, &m.group).passed);
    }

    #[test]
    fn s3_std2_trace() {
        let m = presets::s3_std2();
        let t = trace_of(&m);
        assert_eq!(t.stages.len(), 1);
        assert_eq!(t.stages[0].r, 1);
        assert_eq!(t.stages[0].centers, vec![Subspace::zero(4)]);
        assert!(verify_trace(&t, &m.group).passed);
    }

    #[test]
    fn abelian_group_has_empty_trace() {
        let m = presets::prod(2, 1, false).unwrap();
        let t = trace_of(&m);
        assert!(t.stages.is_empty());
        assert_eq!(t.initial_r, 0);
        assert!(verify_trace(&t, &m.group).passed);
    }

    #[test]
    fn forged_trace_fails_monotonicity() {
        let m = presets::s4_perm4();
        let mut t = trace_of(&m);
        t.stages[1].r = 9;
        let rep = verify_trace(&t, &m.group);
        assert!(!rep.passed);
        assert!(rep.failed().contains(&"monotonicity"));
    }

    #[test]
    fn oracle_matches_on_s4() {
        let m = presets::s4_perm4();
        let t = trace_of(&m);
        assert_eq!(oracle_r(&t.family, &[], 2, 1, Execution::Sequential).unwrap(), 8);
        assert_eq!(
            oracle_r(&t.family, &t.blown_stages()[..1], 2, 1, Execution::Sequential).unwrap(),
            1
        );
        assert_eq!(
            cross_check_oracle(&t, 2, 5, Execution::default()).unwrap(),
            vec![(8, 8), (1, 1)]
        );
    }

    #[test]
    fn single_member_family() {
        let y = vec![Subspace::zero(3)];
        assert_eq!(oracle_r(&y, &[], 3, 0, Execution::Sequential).unwrap(), 1);
    }

    #[test]
    fn wonderful_order_groups_by_dimension() {
        let l = stabilizer_lattice(&presets::s3_perm3());
        let o = wonderful_order(&l);
        assert_eq!(o.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 3]);

        let m = presets::s4_perm4();
        let yl = y_lattice(&m, &y_family(&m, 400).unwrap());
        let o = wonderful_order(&yl);
        let t = trace_of(&m);
        assert_eq!(o, t.blown_stages());
    }
}
