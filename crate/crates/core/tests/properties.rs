use proptest::prelude::*;

use wonder_core::batyrev::{batyrev_trace, cross_check_oracle, verify_trace};
use wonder_core::group::FiniteMatrixGroup;
use wonder_core::linalg::{format_rational, int_vector, parse_rational, ratio, RatMatrix, Subspace};
use wonder_core::par::Execution;
use wonder_core::presets;
use wonder_core::stratification::{stabilizer_lattice, y_family, y_lattice, LinearGModel};
use wonder_core::verify::{builtin_candidate, question_check};
use wonder_core::wonderful::{
    adapted_arc, building_set_max, building_set_min, chains, generic_chain_stabilizer, is_building_set, limit_point,
    nested_sets, realize, Chain,
};

fn vectors(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), 0..=max)
}

fn span(n: usize, rows: &[Vec<i64>]) -> Subspace {
    Subspace::span(n, rows.iter().map(|r| int_vector(r)).collect())
}

fn monomial_model(dim: usize, seed: u64, index: usize) -> LinearGModel {
    let gens = builtin_candidate(dim, seed, index);
    LinearGModel::new(
        "monomial",
        FiniteMatrixGroup::close_generators(dim, &gens, 5000).expect("signed permutations are finite"),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn echelon_form_is_canonical(rows in vectors(4, 4), scales in prop::collection::vec(1i64..=5, 4)) {
        let a = span(4, &rows);
        let mut scaled: Vec<Vec<i64>> = rows.iter().zip(&scales).map(|(r, s)| r.iter().map(|x| x * s).collect()).collect();
        scaled.reverse();
        if rows.len() >= 2 {
            let mix: Vec<i64> = rows[0].iter().zip(&rows[1]).map(|(x, y)| x + 2 * y).collect();
            scaled.push(mix);
        }
        prop_assert_eq!(a, span(4, &scaled));
    }

    #[test]
    fn dimension_formula(a in vectors(4, 3), b in vectors(4, 3)) {
        let (a, b) = (span(4, &a), span(4, &b));
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(s.contains(&a).unwrap() && a.contains(&i).unwrap() && b.contains(&i).unwrap());
    }

    #[test]
    fn modular_law(a in vectors(4, 2), b in vectors(4, 3), c in vectors(4, 3)) {
        let (a0, b, c0) = (span(4, &a), span(4, &b), span(4, &c));
        let c = a0.sum(&c0).unwrap();
        let lhs = a0.sum(&b.intersect(&c).unwrap()).unwrap();
        let rhs = a0.sum(&b).unwrap().intersect(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilator_duality(a in vectors(4, 3), b in vectors(4, 3)) {
        let (a, b) = (span(4, &a), span(4, &b));
        prop_assert_eq!(a.sum(&b).unwrap().annihilator(), a.annihilator().intersect(&b.annihilator()).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap().annihilator(), a.annihilator().sum(&b.annihilator()).unwrap());
        prop_assert_eq!(a.annihilator().annihilator(), a.clone());
        prop_assert_eq!(a.annihilator().dim(), a.codim());
    }

    #[test]
    fn containment_is_intersection(a in vectors(4, 3), b in vectors(4, 3)) {
        let (a, b) = (span(4, &a), span(4, &b));
        prop_assert_eq!(a.contains(&b).unwrap(), a.intersect(&b).unwrap() == b);
    }

    #[test]
    fn rational_strings_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let q = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn quotient_lift_is_a_section(a in vectors(4, 3), q in prop::collection::vec(-5i64..=5, 4)) {
        let a = span(4, &a);
        let q = int_vector(&q[..a.codim()]);
        prop_assert_eq!(a.quotient_coords().mul_vec(&a.lift_from_quotient(&q)), q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn question_verdict_ignores_basis_order(index in 0usize..500, perm in Just(vec![2usize, 0, 3, 1]).prop_shuffle()) {
        let m = monomial_model(4, 11, index);
        let p = RatMatrix::permutation(&perm);
        let pi = p.inverse().unwrap();
        let gens: Vec<RatMatrix> = m.group.generators().iter().map(|&g| p.mul(m.group.matrix(g)).mul(&pi)).collect();
        let conj = FiniteMatrixGroup::close_generators(4, &gens, 5000).unwrap();
        let (a, b) = (question_check(&m.group), question_check(&conj));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.solvable, b.solvable);
    }

    #[test]
    fn stratifications_of_monomial_groups(index in 0usize..500) {
        let m = monomial_model(3, 5, index);
        let stab = stabilizer_lattice(&m);
        prop_assert!(stab.is_intersection_closed());
        let fam = y_family(&m, 400).unwrap();
        for y in &fam {
            prop_assert!(stab.index_of(&y.subspace).is_some());
            prop_assert!(y.subspace.contains(&m.group.fixed_space(&y.witness_h)).unwrap());
        }
        let yl = y_lattice(&m, &fam);
        for l in [&stab, &yl] {
            let max = building_set_max(l);
            let min = building_set_min(l);
            prop_assert!(is_building_set(l, &max) && is_building_set(l, &min));
            prop_assert!(min.members().iter().all(|s| max.position(s).is_some()));
            let mut ns: Vec<Chain> = nested_sets(&max, 16, 100_000).unwrap().iter().map(|n| n.as_chain(&max).expect("chain")).collect();
            ns.sort();
            prop_assert_eq!(ns, chains(&max));
        }
    }

    #[test]
    fn traces_of_monomial_groups(index in 0usize..500) {
        let m = monomial_model(3, 9, index);
        let t = batyrev_trace(3, &y_family(&m, 400).unwrap());
        let rep = verify_trace(&t, &m.group);
        prop_assert!(rep.passed, "{:?}", rep.failed());
        prop_assert!(cross_check_oracle(&t, 2, index as u64, Execution::Sequential).is_ok());
    }

    #[test]
    fn chain_stabilizers_commute_and_points_realize(seed in any::<u64>()) {
        let m = presets::s4_perm4();
        let b = building_set_max(&stabilizer_lattice(&m));
        let all = chains(&b);
        let c = &all[(seed % all.len() as u64) as usize];
        let r = generic_chain_stabilizer(c, &m, &b);
        for &x in r.stabilizer.members() {
            for &y in r.stabilizer.members() {
                prop_assert_eq!(m.group.mul(x, y), m.group.mul(y, x));
            }
        }
        let p = limit_point(&adapted_arc(c, &b, seed).unwrap(), &b).unwrap();
        let arc = realize(&p, &b, &Subspace::full(4)).expect("limit points are realizable");
        prop_assert_eq!(limit_point(&arc, &b).unwrap(), p);
    }
}
