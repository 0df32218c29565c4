//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion with
//! its time limit and exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use wonder_core::batyrev::{batyrev_trace, cross_check_oracle, oracle_r, verify_trace};
use wonder_core::group::{FiniteMatrixGroup, DEFAULT_SUBGROUP_ORDER_CAP};
use wonder_core::linalg::{int_vector, kernel, RatMatrix, Subspace};
use wonder_core::par::Execution;
use wonder_core::presets;
use wonder_core::stratification::{
    intersection_closure, stabilizer_lattice, y_family, y_lattice, y_subspaces, LinearGModel,
};
use wonder_core::verify::{
    abelian_suite, abelian_suite_with, criterion_check, question_check, question_scan, solvable_min_check,
    QuestionVerdict, StratificationKind, SuiteBudget, SuiteModes,
};
use wonder_core::wonderful::{
    adapted_arc, building_set_max, building_set_min, chains, forget_point, limit_point, point_stabilizer_with,
    seeded_rng, BuildingSet, BuildingSetAction,
};

const SEED: u64 = 20_240_917;
const SAMPLES: usize = 1000;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kinds() -> [StratificationKind; 2] {
    [StratificationKind::Stabilizer, StratificationKind::Y]
}

/// `{ (x, λx) }` inside `Q^2 ⊕ Q^2`.
fn graph_submodule(lambda: i64) -> Subspace {
    Subspace::span(4, vec![int_vector(&[1, 0, lambda, 0]), int_vector(&[0, 1, 0, lambda])])
}

fn criterion_1() -> Outcome {
    let m = presets::s3_std2();
    let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
    ensure(y_subspaces(&fam) == vec![Subspace::zero(4)], || {
        format!("Y family {:?}", y_subspaces(&fam))
    })?;
    let t = batyrev_trace(4, &fam);
    ensure(
        t.stages.len() == 1 && t.stages[0].centers == vec![Subspace::zero(4)],
        || format!("trace {:?}", t.stages),
    )?;
    let budget = SuiteBudget {
        samples: 200,
        ..SuiteBudget::default()
    };
    let r = abelian_suite(
        &m,
        StratificationKind::Y,
        SuiteModes::ALL,
        budget,
        SEED,
        Execution::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("Y suite violations {:?}", r.violations))?;
    for lambda in [0, 1, -1, 2] {
        let l = graph_submodule(lambda);
        for g in m.group.matrices() {
            ensure(l.image(g) == l, || format!("L_{lambda} is not a submodule"))?;
        }
        let bs = BuildingSet::from_subspaces(4, &[l]);
        let r = abelian_suite_with(&m, &bs, "custom", SuiteModes::ALL, budget, SEED, Execution::default())
            .map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("L_{lambda} violations {:?}", r.violations))?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for m in presets::roster() {
        let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
        let t = batyrev_trace(m.ambient_dim(), &fam);
        let rep = verify_trace(&t, &m.group);
        for name in ["monotonicity", "stage-bound", "first-center", "equivariance"] {
            ensure(!rep.failed().contains(&name), || format!("{}: {name} failed", m.name))?;
        }
    }
    Ok(())
}

/// Every subgroup of a group of permutation matrices, by closing all pairs
/// of elements under raw matrix multiplication (every subgroup of `S_4` is
/// generated by two elements).
fn brute_force_subgroups(elements: &[RatMatrix]) -> Vec<Vec<RatMatrix>> {
    let mut out: HashSet<Vec<RatMatrix>> = HashSet::new();
    for a in elements {
        for b in elements {
            out.insert(raw_closure(&[a.clone(), b.clone()]));
        }
    }
    out.into_iter().collect()
}

fn raw_closure(gens: &[RatMatrix]) -> Vec<RatMatrix> {
    let n = gens[0].rows();
    let mut set: HashSet<RatMatrix> = HashSet::new();
    set.insert(RatMatrix::identity(n));
    let mut frontier = vec![RatMatrix::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let mut v: Vec<RatMatrix> = set.into_iter().collect();
    v.sort();
    v
}

fn fixed_of(ms: &[RatMatrix], n: usize) -> Subspace {
    let id = RatMatrix::identity(n);
    let eqs = ms.iter().fold(RatMatrix::zeros(0, n), |acc, m| acc.vstack(&m.sub(&id)));
    kernel(&eqs)
}

fn brute_force_y(h: &[RatMatrix], n: usize) -> Subspace {
    let mut comms = Vec::new();
    for a in h {
        for b in h {
            let ai = a.inverse().unwrap();
            let bi = b.inverse().unwrap();
            comms.push(a.mul(b).mul(&ai).mul(&bi));
        }
    }
    let derived = raw_closure(&comms);
    let w = fixed_of(&derived, n);
    let h1: Vec<RatMatrix> = h
        .iter()
        .filter(|g| w.basis_vectors().iter().all(|v| &g.mul_vec(v) == v))
        .cloned()
        .collect();
    fixed_of(&h1, n)
}

fn is_commutative(h: &[RatMatrix]) -> bool {
    h.iter().all(|a| h.iter().all(|b| a.mul(b) == b.mul(a)))
}

/// Subspace cut out by equalities `x_i = x_j` for each block of a set partition.
fn partition_subspace(blocks: &[&[usize]]) -> Subspace {
    let mut rows = Vec::new();
    for b in blocks {
        for w in b.windows(2) {
            let mut f = vec![0i64; 4];
            f[w[0]] = 1;
            f[w[1]] = -1;
            rows.push(int_vector(&f));
        }
    }
    kernel(&RatMatrix::from_rows(4, rows).unwrap())
}

fn criterion_3() -> Outcome {
    let m = presets::s4_perm4();
    let elements = m.group.matrices().to_vec();
    let subgroups = brute_force_subgroups(&elements);
    ensure(subgroups.len() == 30, || {
        format!("{} subgroups of S_4", subgroups.len())
    })?;
    let computed = m
        .group
        .all_subgroups(DEFAULT_SUBGROUP_ORDER_CAP)
        .map_err(|e| e.to_string())?;
    ensure(computed.len() == 30, || format!("enumeration found {}", computed.len()))?;

    let mut oracle_y: Vec<Subspace> = subgroups
        .iter()
        .filter(|h| !is_commutative(h))
        .map(|h| brute_force_y(h, 4))
        .filter(|y| !y.is_full())
        .collect();
    oracle_y.sort();
    oracle_y.dedup();
    let fam = y_subspaces(&y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?);
    ensure(fam == oracle_y, || format!("Y family {fam:?} vs oracle {oracle_y:?}"))?;

    let delta = partition_subspace(&[&[0, 1, 2, 3]]);
    let triples: Vec<Subspace> = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        .iter()
        .map(|t| partition_subspace(&[t]))
        .collect();
    let doubles: Vec<Subspace> = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]]
        .iter()
        .map(|[a, b]| partition_subspace(&[a, b]))
        .collect();
    let singles: Vec<Subspace> = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
        .iter()
        .map(|p| partition_subspace(&[p]))
        .collect();
    let mut expected_y: Vec<Subspace> = std::iter::once(delta.clone())
        .chain(triples.iter().cloned())
        .chain(doubles.iter().cloned())
        .collect();
    expected_y.sort();
    ensure(fam == expected_y, || {
        "Y family differs from Δ, triples, double-doubles".into()
    })?;

    let fixed_spaces = elements
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| fixed_of(std::slice::from_ref(g), 4));
    let oracle_lattice = intersection_closure(4, fixed_spaces);
    let lattice = stabilizer_lattice(&m);
    ensure(
        lattice.len() == 14 && lattice.elements() == oracle_lattice.as_slice(),
        || format!("stabilizer lattice has {} elements", lattice.len()),
    )?;

    let min = building_set_min(&lattice);
    let mut expected_min: Vec<Subspace> = singles.into_iter().chain(triples).chain([delta]).collect();
    expected_min.sort();
    let mut got: Vec<Subspace> = min.members().to_vec();
    got.sort();
    ensure(got == expected_min, || {
        format!("minimal building set has {} members", got.len())
    })?;
    ensure(doubles.iter().all(|d| min.position(d).is_none()), || {
        "double-doubles kept".into()
    })
}

fn criterion_4() -> Outcome {
    let modes = SuiteModes {
        chains: true,
        arcs: false,
        search: false,
    };
    for m in presets::roster() {
        for kind in kinds() {
            let r = abelian_suite(&m, kind, modes, SuiteBudget::default(), SEED, Execution::default())
                .map_err(|e| e.to_string())?;
            ensure(r.passed && r.totals.chains_checked >= 1, || {
                format!("{} {kind:?}: {:?}", m.name, r.violations)
            })?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let modes = SuiteModes {
        chains: false,
        arcs: true,
        search: true,
    };
    let budget = SuiteBudget {
        samples: SAMPLES,
        ..SuiteBudget::default()
    };
    for m in presets::roster() {
        let r = abelian_suite(
            &m,
            StratificationKind::Stabilizer,
            modes,
            budget,
            SEED,
            Execution::default(),
        )
        .map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{}: {:?}", m.name, r.violations))?;
        ensure(
            r.totals.arcs_sampled >= SAMPLES * 3 / 4 && r.totals.arcs_sampled + r.totals.arcs_skipped == SAMPLES,
            || format!("{}: {} arcs sampled", m.name, r.totals.arcs_sampled),
        )?;
        let nonabelian = m
            .group
            .all_subgroups(DEFAULT_SUBGROUP_ORDER_CAP)
            .map_err(|e| e.to_string())?
            .iter()
            .filter(|h| !m.group.is_abelian(h))
            .count();
        ensure(r.totals.searches_run == nonabelian, || {
            format!(
                "{}: {} searches for {nonabelian} subgroups",
                m.name, r.totals.searches_run
            )
        })?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for m in [presets::a5_perm5(), presets::prod(5, 1, true).unwrap()] {
        let r = solvable_min_check(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
        ensure(r.passed && r.totals.strata_checked == 1, || {
            format!("{}: {:?}", m.name, r.violations)
        })?;
    }
    ensure(!criterion_check(&presets::a5_perm5(), &[]), || {
        "empty centers accepted on a5_perm5".into()
    })
}

fn criterion_7() -> Outcome {
    let m = presets::prod(3, 2, false).unwrap();
    let big = building_set_max(&stabilizer_lattice(&m));
    let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
    let small = building_set_max(&y_lattice(&m, &fam));
    let big_action = BuildingSetAction::new(&m.group, &big, Execution::Sequential);
    let small_action = BuildingSetAction::new(&m.group, &small, Execution::Sequential);
    let all_chains = chains(&big);
    for i in 0..SAMPLES {
        let c = &all_chains[i % all_chains.len()];
        let seed = rand::Rng::gen(&mut seeded_rng(SEED, i as u64));
        let p =
            limit_point(&adapted_arc(c, &big, seed).map_err(|e| e.to_string())?, &big).map_err(|e| e.to_string())?;
        let f = forget_point(&p, &big, &small).map_err(|e| e.to_string())?;
        ensure(f.base == p.base, || format!("sample {i}: base changed"))?;
        let s = point_stabilizer_with(&p, &m, &big, &big_action);
        let t = point_stabilizer_with(&f, &m, &small, &small_action);
        ensure(s.stabilizer.is_subgroup_of(&t.stabilizer), || {
            format!("sample {i}: Stab(p) of order {} not inside Stab(forget p)", s.order)
        })?;
    }
    for m in presets::roster() {
        let stab = stabilizer_lattice(&m);
        let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
        let yl = y_lattice(&m, &fam);
        ensure(yl.elements().iter().all(|y| stab.index_of(y).is_some()), || {
            format!("{}: Y lattice not inside the stabilizer lattice", m.name)
        })?;
    }
    Ok(())
}

fn large_diagonal(i: usize, j: usize) -> Subspace {
    let mut rows = Vec::new();
    for c in 0..2 {
        let mut f = vec![0i64; 6];
        f[2 * i + c] = 1;
        f[2 * j + c] = -1;
        rows.push(int_vector(&f));
    }
    kernel(&RatMatrix::from_rows(6, rows).unwrap())
}

fn criterion_8() -> Outcome {
    let m = presets::prod(3, 2, false).unwrap();
    let stab = stabilizer_lattice(&m);
    let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
    let yl = y_lattice(&m, &fam);
    let mut diff: Vec<Subspace> = stab
        .elements()
        .iter()
        .filter(|s| yl.index_of(s).is_none())
        .cloned()
        .collect();
    diff.sort();
    let mut expected = vec![large_diagonal(0, 1), large_diagonal(0, 2), large_diagonal(1, 2)];
    expected.sort();
    ensure(diff == expected && diff.iter().all(|d| d.dim() == 4), || {
        format!("difference {diff:?}")
    })?;
    let delta = yl.elements().to_vec();
    ensure(delta.len() == 1 && delta[0].dim() == 2, || {
        "Y lattice is not {Δ}".into()
    })?;
    let before = oracle_r(&expected, &[], 8, SEED, Execution::default()).map_err(|e| e.to_string())?;
    let after = oracle_r(&expected, &[delta], 8, SEED, Execution::default()).map_err(|e| e.to_string())?;
    ensure(before == 3 && after == 1, || {
        format!("oracle r before {before}, after {after}")
    })
}

fn criterion_9() -> Outcome {
    for m in presets::roster() {
        let fam = y_family(&m, DEFAULT_SUBGROUP_ORDER_CAP).map_err(|e| e.to_string())?;
        let t = batyrev_trace(m.ambient_dim(), &fam);
        let pairs = cross_check_oracle(&t, 4, SEED, Execution::default()).map_err(|e| format!("{}: {e}", m.name))?;
        ensure(pairs.len() == t.stages.len(), || format!("{}: stage count", m.name))?;
    }
    Ok(())
}

fn element_order(m: &RatMatrix) -> usize {
    let mut x = m.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(m);
        k += 1;
    }
    k
}

fn criterion_10() -> Outcome {
    let a5: LinearGModel = presets::a5_perm5();
    let q = question_check(&a5.group);
    ensure(q.verdict == QuestionVerdict::Fails, || {
        format!("verdict {:?}", q.verdict)
    })?;
    let w = q.witness.ok_or("no witness")?;
    ensure(element_order(&w.element) == 5 && w.kernel.dim() == 1, || {
        "witness is not a 5-cycle".into()
    })?;
    let scan = question_scan(4, SAMPLES, SEED, &[], Execution::default()).map_err(|e| e.to_string())?;
    ensure(scan.scanned == SAMPLES && scan.candidates.is_empty(), || {
        format!("{} scanned, {} candidates", scan.scanned, scan.candidates.len())
    })?;
    let group =
        FiniteMatrixGroup::close_generators(3, &[RatMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])], 10)
            .map_err(|e| e.to_string())?;
    ensure(question_check(&group).verdict == QuestionVerdict::Fails, || {
        "transposition".into()
    })
}

/// Label, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 s3_std2 origin blowup and graph submodules", 5, criterion_1),
        ("2 trace laws on every preset", 30, criterion_2),
        ("3 s4_perm4 lattice, Y family, minimal building set", 60, criterion_3),
        ("4 abelian chain stabilizers, exhaustive", 120, criterion_4),
        ("5 abelian point stabilizers, sampled and searched", 300, criterion_5),
        ("6 solvable stabilizers through the criterion", 60, criterion_6),
        ("7 forgetful map functoriality", 120, criterion_7),
        ("8 large diagonals of prod(3,2)", 60, criterion_8),
        ("9 combinatorial r equals arc oracle r", 120, criterion_9),
        ("10 coordinate-kernel question tooling", 120, criterion_10),
    ];
    let mut failures = 0;
    for (name, limit, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        match (&outcome, within) {
            (Ok(()), true) => println!("PASS criterion {name} ({:.2}s, limit {limit}s)", elapsed.as_secs_f64()),
            (Ok(()), false) => {
                failures += 1;
                println!(
                    "FAIL criterion {name}: took {:.2}s, limit {limit}s",
                    elapsed.as_secs_f64()
                );
            }
            (Err(e), _) => {
                failures += 1;
                println!("FAIL criterion {name} ({:.2}s): {e}", elapsed.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
