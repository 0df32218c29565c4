//! Suites that check the stabilizer statements on concrete models.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Result, WonderError};
use crate::group::{FiniteMatrixGroup, Subgroup, DEFAULT_GROUP_ORDER_CAP, DEFAULT_SUBGROUP_ORDER_CAP};
use crate::linalg::{RatMatrix, Subspace};
use crate::par::{map_range, map_slice, Execution};
use crate::stratification::{
    nonsolvable_strata, stabilizer_lattice, y_family, y_lattice, y_of_subgroup, LinearGModel, StratumLattice,
};
use crate::wonderful::{
    adapted_arc, building_set_max, building_set_min, chains, generic_chain_stabilizer, is_building_set, limit_point,
    nonabelian_fixed_point_search, point_stabilizer_with, random_in, seeded_rng, Arc, BuildingSet, BuildingSetAction,
    Chain, ARC_RETRY_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StratificationKind {
    Stabilizer,
    Y,
}

impl StratificationKind {
    pub fn lattice(self, model: &LinearGModel, subgroup_cap: usize) -> Result<StratumLattice> {
        Ok(match self {
            StratificationKind::Stabilizer => stabilizer_lattice(model),
            StratificationKind::Y => y_lattice(model, &y_family(model, subgroup_cap)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteModes {
    pub chains: bool,
    pub arcs: bool,
    pub search: bool,
}

impl SuiteModes {
    pub const ALL: SuiteModes = SuiteModes {
        chains: true,
        arcs: true,
        search: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteBudget {
    /// Arcs sampled in mode (b).
    pub samples: usize,
    pub subgroup_order_cap: usize,
}

impl Default for SuiteBudget {
    fn default() -> Self {
        SuiteBudget {
            samples: 1000,
            subgroup_order_cap: DEFAULT_SUBGROUP_ORDER_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub chains_checked: usize,
    pub arcs_sampled: usize,
    pub arcs_skipped: usize,
    pub searches_run: usize,
    pub assignments_tested: usize,
    pub strata_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub model: String,
    pub theorem: String,
    pub kind: String,
    pub modes: Option<SuiteModes>,
    pub seed: u64,
    pub totals: Totals,
    pub notes: Vec<String>,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    fn finish(mut self, started: Instant) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self.passed = self.violations.is_empty();
        self.wall_time_ms = started.elapsed().as_millis() as u64;
        self
    }

    fn new(model: &LinearGModel, theorem: &str, kind: &str, seed: u64) -> Self {
        VerificationReport {
            model: model.name.clone(),
            theorem: theorem.into(),
            kind: kind.into(),
            modes: None,
            seed,
            totals: Totals::default(),
            notes: Vec::new(),
            violations: Vec::new(),
            passed: false,
            wall_time_ms: 0,
        }
    }
}

/// Abelian stabilizers on the maximal model of the given stratification.
pub fn abelian_suite(
    model: &LinearGModel,
    kind: StratificationKind,
    modes: SuiteModes,
    budget: SuiteBudget,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let lattice = kind.lattice(model, budget.subgroup_order_cap)?;
    let bs = building_set_max(&lattice);
    let label = match kind {
        StratificationKind::Stabilizer => "stabilizer",
        StratificationKind::Y => "y",
    };
    abelian_suite_with(model, &bs, label, modes, budget, seed, exec)
}

/// Same suite over an explicit building set.
pub fn abelian_suite_with(
    model: &LinearGModel,
    bs: &BuildingSet,
    label: &str,
    modes: SuiteModes,
    budget: SuiteBudget,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let g = &model.group;
    let mut report = VerificationReport::new(model, "abelian-max", label, seed);
    report.modes = Some(modes);

    let action = BuildingSetAction::new(g, bs, exec);
    if !action.is_stable() {
        report.violations.push(Violation {
            check: "equivariance".into(),
            detail: "the group does not permute the building-set members".into(),
        });
    }
    let own_lattice = StratumLattice::generated(g, bs.lattice_elements().iter().cloned());
    if !is_building_set(&own_lattice, bs) {
        report.violations.push(Violation {
            check: "building-set".into(),
            detail: "members do not satisfy the building-set axiom".into(),
        });
    }
    let all_chains = chains(bs);

    if modes.chains {
        let bad = map_slice(exec, &all_chains, |c| {
            let r = generic_chain_stabilizer(c, model, bs);
            (!r.abelian).then(|| Violation {
                check: "chain-stabilizer".into(),
                detail: format!("{}: stabilizer of order {} is not abelian", r.descriptor, r.order),
            })
        });
        report.totals.chains_checked = all_chains.len();
        report.violations.extend(bad.into_iter().flatten());
    }

    if modes.arcs && action.is_stable() {
        // special bases come from the strata of the action itself
        let mut pool: Vec<Subspace> = stabilizer_lattice(model).elements().to_vec();
        pool.extend(bs.members().iter().cloned());
        pool.push(Subspace::full(bs.ambient_dim()));
        let outcomes = map_range(exec, budget.samples, |i| -> Result<Option<Option<Violation>>> {
            let mut rng = seeded_rng(seed, i as u64);
            let arc = if i % 4 == 3 {
                match special_arc(&pool, bs, &mut rng) {
                    Some(a) => a,
                    None => return Ok(None),
                }
            } else {
                let c = all_chains.choose(&mut rng).cloned().unwrap_or_else(Chain::empty);
                adapted_arc(&c, bs, rng.gen())?
            };
            let p = limit_point(&arc, bs)?;
            let r = point_stabilizer_with(&p, model, bs, &action);
            Ok(Some((!r.abelian).then(|| Violation {
                check: "point-stabilizer".into(),
                detail: format!(
                    "sample {i}: base ({}) has stabilizer of order {}",
                    crate::linalg::format_vector(&p.base).join(","),
                    r.order
                ),
            })))
        });
        for o in outcomes {
            match o? {
                None => report.totals.arcs_skipped += 1,
                Some(v) => {
                    report.totals.arcs_sampled += 1;
                    report.violations.extend(v);
                }
            }
        }
    }

    if modes.search && action.is_stable() {
        let subgroups: Vec<Subgroup> = g
            .all_subgroups(budget.subgroup_order_cap)?
            .into_iter()
            .filter(|h| !g.is_abelian(h))
            .collect();
        let outcomes = map_slice(exec, &subgroups, |k| {
            nonabelian_fixed_point_search(k, model, bs, &action)
        });
        for (k, o) in subgroups.iter().zip(outcomes) {
            let o = o?;
            report.totals.searches_run += 1;
            report.totals.assignments_tested += o.assignments_tested;
            if o.truncated {
                report
                    .notes
                    .push(format!("search over subgroup of order {} truncated", k.order()));
            }
            if let Some(w) = o.witness {
                report.violations.push(Violation {
                    check: "fixed-point-search".into(),
                    detail: format!(
                        "subgroup of order {} fixes the point over base ({})",
                        k.order(),
                        crate::linalg::format_vector(&w.base).join(",")
                    ),
                });
            }
        }
    }
    Ok(report.finish(started))
}

/// Small-coefficient arc through a random stratum, aimed at special lines.
fn special_arc(pool: &[Subspace], bs: &BuildingSet, rng: &mut impl Rng) -> Option<Arc> {
    let full = Subspace::full(bs.ambient_dim());
    for _ in 0..ARC_RETRY_BUDGET {
        let s = pool.choose(rng).expect("pool contains V");
        let t = pool.choose(rng).expect("pool contains V");
        let arc = Arc {
            coefficients: vec![random_in(s, 2, rng), random_in(t, 2, rng), random_in(&full, 2, rng)],
        };
        if limit_point(&arc, bs).is_ok() {
            return Some(arc);
        }
    }
    None
}

/// Whether every non-solvable stratum of the stabilizer lattice lies in one
/// of the centers.
pub fn criterion_check(model: &LinearGModel, centers: &[Subspace]) -> bool {
    let lattice = stabilizer_lattice(model);
    nonsolvable_strata(&model.group, &lattice).iter().all(|&i| {
        centers
            .iter()
            .any(|c| c.contains(lattice.element(i)).expect("same ambient"))
    })
}

/// [`criterion_check`] as a report, naming each uncovered stratum.
pub fn criterion_report(model: &LinearGModel, centers: &[Subspace]) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(model, "criterion", "stabilizer", 0);
    let lattice = stabilizer_lattice(model);
    let bad = nonsolvable_strata(&model.group, &lattice);
    report.totals.strata_checked = bad.len();
    for i in bad {
        let s = lattice.element(i);
        if !centers.iter().any(|c| c.contains(s).expect("same ambient")) {
            report.violations.push(Violation {
                check: "criterion".into(),
                detail: format!(
                    "{} carries a non-solvable stabilizer and lies in no center",
                    s.describe()
                ),
            });
        }
    }
    report.finish(started)
}

/// Solvable stabilizers on the minimal model of the Y stratification, via the
/// criterion: non-solvable strata sit inside irreducible members of
/// codimension at least two, and inside their own `Y(H)`.
pub fn solvable_min_check(model: &LinearGModel, subgroup_cap: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let g = &model.group;
    let mut report = VerificationReport::new(model, "solvable-min", "y", 0);
    let stab = stabilizer_lattice(model);
    let ylat = y_lattice(model, &y_family(model, subgroup_cap)?);
    let min = building_set_min(&ylat);
    let bad = nonsolvable_strata(g, &stab);
    report.totals.strata_checked = bad.len();
    if bad.is_empty() {
        report.notes.push("no stratum has a non-solvable stabilizer".into());
    }
    for &i in &bad {
        let s = stab.element(i);
        let covered = min
            .members()
            .iter()
            .any(|m| m.codim() >= 2 && m.contains(s).expect("same ambient"));
        if !covered {
            report.violations.push(Violation {
                check: "minimal-cover".into(),
                detail: format!("{} is in no irreducible member of codimension >= 2", s.describe()),
            });
        }
        let (_, _, y) = y_of_subgroup(g, stab.pointwise_stab(i));
        if y.is_full() || !y.contains(s).expect("same ambient") {
            report.violations.push(Violation {
                check: "y-witness".into(),
                detail: format!("Y of the stabilizer of {} is {}", s.describe(), y.describe()),
            });
        }
    }
    if !criterion_check(model, min.members()) {
        report.violations.push(Violation {
            check: "criterion".into(),
            detail: "minimal building set misses a non-solvable stratum".into(),
        });
    }
    Ok(report.finish(started))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuestionVerdict {
    #[serde(rename = "property-holds-and-solvable")]
    HoldsSolvable,
    #[serde(rename = "property-holds-and-nonsolvable")]
    Candidate,
    #[serde(rename = "property-fails")]
    Fails,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementKernel {
    pub element: RatMatrix,
    pub kernel: Subspace,
    pub is_coordinate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuestionReport {
    pub group_order: usize,
    pub solvable: bool,
    pub verdict: QuestionVerdict,
    /// The failing element with the smallest fixed space, if any.
    pub witness: Option<ElementKernel>,
    pub elements: Vec<ElementKernel>,
}

/// Whether `ker(g - 1)` is a coordinate subspace for every `g ≠ 1`.
pub fn question_check(group: &FiniteMatrixGroup) -> QuestionReport {
    let id = RatMatrix::identity(group.dim());
    let elements: Vec<ElementKernel> = (1..group.order())
        .map(|i| {
            let m = group.matrix(i);
            let kernel = crate::linalg::kernel(&m.sub(&id));
            ElementKernel {
                element: m.clone(),
                is_coordinate: kernel.is_coordinate(),
                kernel,
            }
        })
        .collect();
    let solvable = group.is_solvable(&group.whole());
    let witness = elements
        .iter()
        .filter(|e| !e.is_coordinate)
        .min_by_key(|e| e.kernel.dim())
        .cloned();
    let verdict = match (&witness, solvable) {
        (Some(_), _) => QuestionVerdict::Fails,
        (None, true) => QuestionVerdict::HoldsSolvable,
        (None, false) => QuestionVerdict::Candidate,
    };
    QuestionReport {
        group_order: group.order(),
        solvable,
        verdict,
        witness,
        elements,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub index: usize,
    pub generators: Vec<RatMatrix>,
    pub group_order: usize,
    pub verdict: QuestionVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub dim: usize,
    pub seed: u64,
    pub scanned: usize,
    pub holds_and_solvable: usize,
    pub fails: usize,
    pub candidates: Vec<ScanEntry>,
    pub skipped: Vec<String>,
    pub extra: Vec<ScanEntry>,
    pub summary: String,
}

/// A random signed permutation matrix.
pub fn random_monomial(dim: usize, rng: &mut impl Rng) -> RatMatrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let mut m = RatMatrix::zeros(dim, dim);
    for (i, &p) in perm.iter().enumerate() {
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        m.set(p, i, crate::linalg::rat(s));
    }
    m
}

/// The built-in candidate stream: one to three random signed permutation
/// matrices per candidate, seeded per index.
pub fn builtin_candidate(dim: usize, seed: u64, index: usize) -> Vec<RatMatrix> {
    let mut rng = seeded_rng(seed, index as u64);
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| random_monomial(dim, &mut rng)).collect()
}

pub const SCAN_MAX_DIM: usize = 5;

/// Runs [`question_check`] over `count` built-in candidates in dimension
/// `dim` and over the `extra` generator sets.
pub fn question_scan(
    dim: usize,
    count: usize,
    seed: u64,
    extra: &[Vec<RatMatrix>],
    exec: Execution,
) -> Result<ScanReport> {
    if dim == 0 || dim > SCAN_MAX_DIM {
        return Err(WonderError::Dimension(format!(
            "scan dimension must be between 1 and {SCAN_MAX_DIM}, got {dim}"
        )));
    }
    let run = |index: usize, gens: Vec<RatMatrix>| -> std::result::Result<ScanEntry, String> {
        let d = gens.first().map_or(dim, RatMatrix::rows);
        let group = FiniteMatrixGroup::close_generators(d, &gens, DEFAULT_GROUP_ORDER_CAP)
            .map_err(|e| format!("candidate {index}: {e}"))?;
        let q = question_check(&group);
        Ok(ScanEntry {
            index,
            generators: gens,
            group_order: group.order(),
            verdict: q.verdict,
        })
    };
    let builtin = map_range(exec, count, |i| run(i, builtin_candidate(dim, seed, i)));
    let extra_runs = map_range(exec, extra.len(), |i| run(count + i, extra[i].clone()));

    let mut report = ScanReport {
        dim,
        seed,
        scanned: 0,
        holds_and_solvable: 0,
        fails: 0,
        candidates: Vec::new(),
        skipped: Vec::new(),
        extra: Vec::new(),
        summary: String::new(),
    };
    let n_builtin = builtin.len();
    for (pos, r) in builtin.into_iter().chain(extra_runs).enumerate() {
        match r {
            Err(note) => report.skipped.push(note),
            Ok(e) => {
                report.scanned += 1;
                match e.verdict {
                    QuestionVerdict::HoldsSolvable => report.holds_and_solvable += 1,
                    QuestionVerdict::Fails => report.fails += 1,
                    QuestionVerdict::Candidate => report.candidates.push(e.clone()),
                }
                if pos >= n_builtin {
                    report.extra.push(e);
                }
            }
        }
    }
    report.summary = if report.candidates.is_empty() {
        format!(
            "{} candidates found; no candidate found within search space ({} groups scanned)",
            0, report.scanned
        )
    } else {
        format!(
            "{} candidates found among {} groups scanned",
            report.candidates.len(),
            report.scanned
        )
    };
    Ok(report)
}
