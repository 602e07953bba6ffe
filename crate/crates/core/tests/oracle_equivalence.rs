mod common;

use bapsens::oracle::{
    all_sign_corners_allowable, brute_bap, brute_is_allowable, brute_is_edge_allowable, brute_lex_assignment,
    brute_uniform_radius, enumerate_assignments, verify_exclusive_coverage, EnumerationBudget, DEFAULT_TOLERANCE,
};
use bapsens::{
    assignment_max_weight, assignment_sensitivity, build_exclusive_set, edge_sensitivity, lexicographic_assignment,
    resolve_after_removal, sensitivity_radius, solve_bap, AssignmentSensitivityOptions, BapSolution,
    EdgeSensitivityOptions, Solver, WeightMatrix,
};
use common::{random_matrix, sample_inside, tied_matrix};
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

#[test]
fn solve_matches_enumeration_on_5x4() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let w = random_matrix(&mut rng, 5, 4, 0.0);
        assert_eq!(enumerate_assignments(&w, budget()).unwrap().count(), 120);
        let sol = solve_bap(&w).unwrap();
        let brute = brute_bap(&w, budget()).unwrap();
        assert_eq!(sol.bottleneck_value, brute.value);
        assert!(brute.optimizers.contains(&sol.assignment));
    }
}

#[test]
fn solve_matches_enumeration_with_ties_and_gaps() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..200 {
        let (n, m) = (1 + k % 6, 1 + (k / 6) % 6);
        let w = if k % 2 == 0 {
            tied_matrix(&mut rng, n, m)
        } else {
            random_matrix(&mut rng, n, m, 0.2)
        };
        match (solve_bap(&w), brute_bap(&w, budget())) {
            (Ok(sol), Ok(brute)) => {
                assert_eq!(sol.bottleneck_value, brute.value);
                assert!(brute.optimizers.contains(&sol.assignment));
                // every candidate is the heaviest edge of some optimizer
                for c in &sol.candidates {
                    assert_eq!(w.get(*c), brute.value);
                    assert!(brute.optimizers.iter().any(|a| a.contains(*c)));
                }
                let expected: Vec<_> = w
                    .edges()
                    .filter(|&e| w.get(e) == brute.value && brute.optimizers.iter().any(|a| a.contains(e)))
                    .collect();
                assert_eq!(sol.candidates, expected);
                assert_eq!(sol.edge_unique, expected.len() == 1);
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            (a, b) => panic!("solver and oracle disagree: {a:?} vs {b:?}"),
        }
    }
}

/// The matching may differ between warm and cold runs; nothing else may.
fn assert_same_solution(w: &WeightMatrix, warm: Option<&BapSolution>, cold: Option<&BapSolution>) {
    match (warm, cold) {
        (Some(a), Some(b)) => {
            assert_eq!(a.bottleneck_value, b.bottleneck_value);
            assert_eq!(a.bottleneck_edge, b.bottleneck_edge);
            assert_eq!(a.candidates, b.candidates);
            assert_eq!(a.edge_unique, b.edge_unique);
            assert_eq!(
                assignment_max_weight(w, &a.assignment).unwrap().value,
                a.bottleneck_value
            );
            assert!(a.assignment.contains(a.bottleneck_edge));
        }
        (None, None) => {}
        _ => panic!("warm and cold disagree on feasibility"),
    }
}

#[test]
fn warm_removal_matches_cold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let mut w = random_matrix(&mut rng, 5, 5, 0.0);
        let mut warm = Solver::new(true);
        let mut prev = warm.solve(&w).unwrap();
        for _ in 0..6 {
            let e = prev.assignment.edges().choose(&mut rng).unwrap();
            w.remove_edge(e);
            let cold = solve_bap(&w).ok();
            let repaired = warm.resolve_after_removal(&w, e, prev.bottleneck_value);
            assert_same_solution(&w, repaired.as_ref(), cold.as_ref());
            match repaired {
                Some(s) => prev = s,
                None => break,
            }
        }
    }
}

#[test]
fn free_function_removal_matches_cold() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let w = random_matrix(&mut rng, 5, 5, 0.1);
        let sol = solve_bap(&w).unwrap();
        let e = sol.bottleneck_edge;
        let after = w.with_removed(e);
        let repaired = resolve_after_removal(&w, &sol, e).ok();
        assert_same_solution(&after, repaired.as_ref(), solve_bap(&after).ok().as_ref());
    }
}

#[test]
fn lexicographic_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = random_matrix(&mut rng, 4, 4, 0.0);
        assert_eq!(enumerate_assignments(&w, budget()).unwrap().count(), 24);
        let lex = lexicographic_assignment(&w).unwrap();
        assert!(lex.certified);
        assert_eq!(lex.assignment, brute_lex_assignment(&w, budget()).unwrap());
    }
    for k in 0..60 {
        let w = random_matrix(&mut rng, 3 + k % 4, 1 + k % 3, 0.2);
        assert_eq!(
            lexicographic_assignment(&w).unwrap().assignment,
            brute_lex_assignment(&w, budget()).unwrap()
        );
    }
}

#[test]
fn exclusive_sets_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..120 {
        let (n, m) = (2 + k % 5, 1 + k % 4);
        let w = if k % 3 == 0 {
            tied_matrix(&mut rng, n.max(m), m)
        } else {
            random_matrix(&mut rng, n.max(m), m, 0.2)
        };
        let Ok(sol) = solve_bap(&w) else { continue };
        for &anchor in &sol.candidates {
            for opts in [EdgeSensitivityOptions::warm(), EdgeSensitivityOptions::cold()] {
                let s = build_exclusive_set(&w, anchor, &opts).unwrap();
                assert!(verify_exclusive_coverage(&w, anchor, &s.members, budget()).unwrap());
            }
        }
        let r = assignment_sensitivity(&w, None, &AssignmentSensitivityOptions::default()).unwrap();
        for (e, members) in &r.exclusive_sets {
            assert!(verify_exclusive_coverage(&w, *e, members, budget()).unwrap());
        }
    }
}

#[test]
fn sampled_perturbations_are_allowable() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let w = random_matrix(&mut rng, 4, 4, 0.0);
        let edge = edge_sensitivity(&w, None, &EdgeSensitivityOptions::warm()).unwrap();
        let assign = assignment_sensitivity(&w, None, &AssignmentSensitivityOptions::default()).unwrap();
        for _ in 0..10 {
            let p = sample_inside(&mut rng, &edge.intervals, 1e3);
            assert!(brute_is_edge_allowable(&w, edge.anchor, &p, budget()).unwrap());
            let p = sample_inside(&mut rng, &assign.intervals, 1e3);
            assert!(brute_is_allowable(&w, &assign.assignment, &p, budget()).unwrap());
        }
    }
}

#[test]
fn radius_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..40 {
        let (n, m) = if k % 2 == 0 { (4, 4) } else { (5, 3) };
        let w = random_matrix(&mut rng, n, m, if k % 4 == 1 { 0.2 } else { 0.0 });
        let a = lexicographic_assignment(&w).unwrap().assignment;
        let rho = sensitivity_radius(&w, &a, &AssignmentSensitivityOptions::default()).unwrap();
        let brute = brute_uniform_radius(&w, &a, budget(), DEFAULT_TOLERANCE).unwrap();
        if rho.is_infinite() {
            assert!(brute.is_infinite());
        } else {
            assert!(
                (rho - brute).abs() <= DEFAULT_TOLERANCE,
                "rho {rho} vs bisection {brute}"
            );
        }
    }
}

#[test]
fn single_flip_corners_are_the_worst_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let shapes = [(3, 3), (3, 2), (4, 2), (4, 3), (4, 4)];
    for k in 0..20 {
        let (n, m) = shapes[k % shapes.len()];
        if (n, m) == (4, 4) && k >= 10 {
            continue;
        }
        let w = random_matrix(&mut rng, n, m, 0.0);
        let a = solve_bap(&w).unwrap().assignment;
        let r = brute_uniform_radius(&w, &a, budget(), DEFAULT_TOLERANCE).unwrap();
        assert!(r.is_finite() || n == m && m == 1);
        assert!(all_sign_corners_allowable(&w, &a, r, budget()).unwrap(), "{w:?} at {r}");
        assert!(!all_sign_corners_allowable(&w, &a, r + 2.0 * DEFAULT_TOLERANCE + 1e-7, budget()).unwrap());
    }
}
