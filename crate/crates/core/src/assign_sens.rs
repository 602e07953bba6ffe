//! Sensitivity of a whole bottleneck assignment.
//!
//! For every assigned edge `e` a derived weight matrix `B_e` is built whose
//! entry at `e'` is the largest bound still compatible with keeping `e'`
//! heavier than `e` (see [`bound_value`]). Each round solves every `B_e`,
//! takes the assigned edge whose bottleneck value is smallest and fixes the
//! not-yet-determined bounds of that pair. Determined values never decrease
//! from one round to the next, which is checked on every run. The loop stops
//! when every `B_e` has no finite assignment left; the edges whose entry
//! became `+inf` then form an exclusive set for `e`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::intervals::IntervalArray;
use crate::matrix::{apply_perturbation, assignment_max_weight, Assignment, Edge, Perturbation, WeightMatrix, MISSING};
use crate::solver::{feasible_under_threshold, solve_bap, BapSolution, Solver};

const UNDETERMINED: f64 = f64::INFINITY;

/// Largest bound keeping `w_e + up_e <= w_e' - low_e'`, given which of the
/// two bounds are already fixed. `+inf` means undetermined on input. Returns
/// `+inf` if both are fixed and the constraint holds, `-inf` if it fails.
pub fn bound_value(w_e: f64, w_e_prime: f64, up_e: f64, low_e_prime: f64) -> f64 {
    match (up_e == UNDETERMINED, low_e_prime == UNDETERMINED) {
        (true, true) => (w_e_prime - w_e) / 2.0,
        (true, false) => w_e_prime - low_e_prime - w_e,
        (false, true) => w_e_prime - w_e - up_e,
        (false, false) => {
            if w_e + up_e <= w_e_prime - low_e_prime {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminedBound {
    /// 1-based round in which the bound was fixed.
    pub iteration: usize,
    pub edge: Edge,
    pub side: Side,
    pub value: f64,
}

/// Bound magnitudes while the rounds run; `+inf` = undetermined.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundState {
    cols: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    log: Vec<DeterminedBound>,
}

impl BoundState {
    fn new(w: &WeightMatrix) -> Self {
        let len = w.rows() * w.cols();
        BoundState {
            cols: w.cols(),
            lower: vec![UNDETERMINED; len],
            upper: vec![UNDETERMINED; len],
            log: Vec::new(),
        }
    }

    pub fn lower(&self, e: Edge) -> f64 {
        self.lower[e.row * self.cols + e.col]
    }

    pub fn upper(&self, e: Edge) -> f64 {
        self.upper[e.row * self.cols + e.col]
    }

    /// Every determination in order.
    pub fn determined_log(&self) -> &[DeterminedBound] {
        &self.log
    }

    /// Fixes a bound if it is still open; returns whether it was.
    fn determine(&mut self, iteration: usize, edge: Edge, side: Side, value: f64) -> bool {
        let idx = edge.row * self.cols + edge.col;
        let slot = match side {
            Side::Lower => &mut self.lower[idx],
            Side::Upper => &mut self.upper[idx],
        };
        if *slot != UNDETERMINED {
            return false;
        }
        *slot = value;
        self.log.push(DeterminedBound {
            iteration,
            edge,
            side,
            value,
        });
        true
    }
}

/// How ties among bottleneck edges affect certification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TiePolicy {
    /// Any tied `E(B_e)`, or several assigned edges sharing the smallest
    /// value, uncertifies the result.
    #[default]
    Strict,
    /// Only ties on the chosen edge's bottleneck where some tied candidate
    /// still has an undetermined lower bound (the choice could change the
    /// output).
    Material,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssignmentSensitivityOptions {
    /// Seed each `B_e` solve with the previous round's matching.
    pub warm_start: bool,
    /// Patch only the `B_e` entries whose bound pair changed instead of
    /// rebuilding every matrix each round.
    pub incremental: bool,
    pub tie_policy: TiePolicy,
}

impl Default for AssignmentSensitivityOptions {
    fn default() -> Self {
        AssignmentSensitivityOptions {
            warm_start: true,
            incremental: false,
            tie_policy: TiePolicy::Strict,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentSensitivityReport {
    pub assignment: Assignment,
    pub intervals: IntervalArray,
    /// Exclusive set implied for each assigned edge, row-major.
    pub exclusive_sets: Vec<(Edge, Vec<Edge>)>,
    /// Rounds that determined at least one bound.
    pub iterations: usize,
    pub certified: bool,
    pub bounds: BoundState,
}

impl AssignmentSensitivityReport {
    pub fn determined_log(&self) -> &[DeterminedBound] {
        self.bounds.determined_log()
    }
}

fn entry(w: &WeightMatrix, e: Edge, other: Edge, state: &BoundState) -> f64 {
    let wo = w.get(other);
    if other == e || wo == MISSING {
        MISSING
    } else {
        bound_value(w.get(e), wo, state.upper(e), state.lower(other))
    }
}

fn build_b(w: &WeightMatrix, e: Edge, state: &BoundState) -> WeightMatrix {
    let data = w.indices().map(|o| entry(w, e, o, state)).collect();
    WeightMatrix::from_parts(w.rows(), w.cols(), data)
}

fn checked_assignment(w: &WeightMatrix, a: Option<&Assignment>) -> Result<Assignment> {
    let optimum = solve_bap(w)?;
    match a {
        None => Ok(optimum.assignment),
        Some(a) => {
            a.check_dims(w)?;
            let value = assignment_max_weight(w, a)?.value;
            if value != optimum.bottleneck_value {
                return Err(Error::NotOptimalAssignment {
                    value,
                    optimum: optimum.bottleneck_value,
                });
            }
            Ok(a.clone())
        }
    }
}

/// Largest allowable interval array for an optimal assignment `a`
/// (default: the solver's optimum).
pub fn assignment_sensitivity(
    w: &WeightMatrix,
    a: Option<&Assignment>,
    opts: &AssignmentSensitivityOptions,
) -> Result<AssignmentSensitivityReport> {
    let assignment = checked_assignment(w, a)?;
    let assigned = assignment.sorted_edges();
    let mut state = BoundState::new(w);
    let mut mats: Vec<WeightMatrix> = assigned.iter().map(|&e| build_b(w, e, &state)).collect();
    let mut solvers = vec![Solver::new(opts.warm_start); assigned.len()];
    let limit = 2 * w.rows() * w.cols();
    let mut certified = true;
    let mut iterations = 0;
    let mut last = f64::NEG_INFINITY;

    loop {
        let results: Vec<Option<BapSolution>> = solvers.iter_mut().zip(&mats).map(|(s, b)| s.solve(b)).collect();
        let value_of = |r: &Option<BapSolution>| r.as_ref().map_or(f64::INFINITY, |s| s.bottleneck_value);

        let mut chosen = 0;
        for k in 1..results.len() {
            if value_of(&results[k]) < value_of(&results[chosen]) {
                chosen = k;
            }
        }
        let value = value_of(&results[chosen]);
        if value == f64::INFINITY {
            break;
        }
        let sol = results[chosen].as_ref().expect("finite value has a solution");

        if iterations >= limit {
            return Err(Error::InvariantViolation("iteration bound 2nm exceeded"));
        }
        if value < last {
            return Err(Error::InvariantViolation("determined bounds decreased between rounds"));
        }
        if value < 0.0 {
            return Err(Error::InvariantViolation("negative bound determined"));
        }
        last = value;

        match opts.tie_policy {
            TiePolicy::Strict => {
                let shared_min = results.iter().filter(|r| value_of(r) == value).count() > 1;
                let tied_b = results.iter().flatten().any(|s| !s.edge_unique);
                if shared_min || tied_b {
                    certified = false;
                }
            }
            TiePolicy::Material => {
                if !sol.edge_unique && sol.candidates.iter().any(|&c| state.lower(c) == UNDETERMINED) {
                    certified = false;
                }
            }
        }

        iterations += 1;
        let e_hat = assigned[chosen];
        let b = sol.bottleneck_edge;
        let up_changed = state.determine(iterations, e_hat, Side::Upper, value);
        let low_changed = state.determine(iterations, b, Side::Lower, value);
        if !up_changed && !low_changed {
            return Err(Error::InvariantViolation("round determined no new bound"));
        }

        if opts.incremental {
            if up_changed {
                mats[chosen] = build_b(w, e_hat, &state);
            }
            if low_changed {
                for (k, &e) in assigned.iter().enumerate() {
                    let v = entry(w, e, b, &state);
                    mats[k].set(b, v);
                }
            }
        } else {
            for (k, &e) in assigned.iter().enumerate() {
                mats[k] = build_b(w, e, &state);
            }
        }
    }

    let exclusive_sets = assigned
        .iter()
        .map(|&e| {
            let members = w
                .edges()
                .filter(|&o| o != e && entry(w, e, o, &state) == f64::INFINITY)
                .collect();
            (e, members)
        })
        .collect();
    let intervals = IntervalArray::from_magnitudes(w.rows(), w.cols(), state.lower.clone(), state.upper.clone())?;

    Ok(AssignmentSensitivityReport {
        assignment,
        intervals,
        exclusive_sets,
        iterations,
        certified,
        bounds: state,
    })
}

/// Smallest bound magnitude of the assignment's interval array: the largest
/// `s` such that every perturbation with entries in `[-s, s]` is allowable.
pub fn sensitivity_radius(w: &WeightMatrix, a: &Assignment, opts: &AssignmentSensitivityOptions) -> Result<f64> {
    assignment_sensitivity(w, Some(a), opts)?.intervals.rho(1)
}

/// `a` is still an optimizer of `W + P`.
pub fn is_allowable(w: &WeightMatrix, a: &Assignment, p: &Perturbation) -> Result<bool> {
    let perturbed = apply_perturbation(w, p)?;
    let value = assignment_max_weight(&perturbed, a)?.value;
    Ok(value == solve_bap(&perturbed)?.bottleneck_value)
}

/// `anchor` is still a bottleneck edge of `W + P`.
pub fn is_edge_allowable(w: &WeightMatrix, anchor: Edge, p: &Perturbation) -> Result<bool> {
    let perturbed = apply_perturbation(w, p)?;
    perturbed.check_edge(anchor)?;
    let t = solve_bap(&perturbed)?.bottleneck_value;
    Ok(perturbed.get(anchor) == t && feasible_under_threshold(&perturbed, t, Some(anchor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::validate_matrix;

    const INF: f64 = f64::INFINITY;

    fn e(i: usize, j: usize) -> Edge {
        Edge::from_one_based(i, j).unwrap()
    }

    fn distinct() -> WeightMatrix {
        validate_matrix(&[[2.0, 91.0, 63.0], [26.0, 89.0, 93.0], [48.0, 60.0, 71.0]]).unwrap()
    }

    fn distinct_lex() -> Assignment {
        Assignment::from_edges([e(2, 1), e(3, 2), e(1, 3)], 3, 3).unwrap()
    }

    fn signed(l: &IntervalArray) -> Vec<(f64, f64)> {
        let (r, c) = l.dims();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| Edge::new(i, j)))
            .map(|x| l.interval(x))
            .collect()
    }

    #[test]
    fn bound_value_cases() {
        assert_eq!(bound_value(63.0, 89.0, INF, INF), 13.0);
        assert_eq!(bound_value(60.0, 89.0, INF, 13.0), 16.0);
        assert_eq!(bound_value(63.0, 91.0, 13.0, INF), 15.0);
        assert_eq!(bound_value(63.0, 89.0, 13.0, 13.0), INF);
        assert_eq!(bound_value(63.0, 89.0, 14.0, 13.0), f64::NEG_INFINITY);
    }

    #[test]
    fn assignment_intervals_exact() {
        let assignment_intervals = vec![
            (-INF, INF),
            (-15.0, INF),
            (-INF, 13.0),
            (-INF, 50.0),
            (-13.0, INF),
            (-17.0, INF),
            (-INF, INF),
            (-INF, 16.0),
            (-INF, INF),
        ];
        for warm_start in [true, false] {
            for incremental in [true, false] {
                let opts = AssignmentSensitivityOptions {
                    warm_start,
                    incremental,
                    tie_policy: TiePolicy::Strict,
                };
                let r = assignment_sensitivity(&distinct(), Some(&distinct_lex()), &opts).unwrap();
                assert_eq!(signed(&r.intervals), assignment_intervals);
                assert!(!r.certified, "the reference run contains a tie");
                assert_eq!(r.iterations, 5);
            }
        }
        let opts = AssignmentSensitivityOptions {
            tie_policy: TiePolicy::Material,
            ..Default::default()
        };
        let r = assignment_sensitivity(&distinct(), Some(&distinct_lex()), &opts).unwrap();
        assert_eq!(signed(&r.intervals), assignment_intervals);
        assert!(r.certified);
    }

    #[test]
    fn assignment_trace_and_exclusive_sets() {
        let r = assignment_sensitivity(&distinct(), Some(&distinct_lex()), &Default::default()).unwrap();
        let values: Vec<f64> = r.determined_log().iter().map(|d| d.value).collect();
        assert_eq!(values, vec![13.0, 13.0, 15.0, 16.0, 17.0, 50.0]);
        let sets = &r.exclusive_sets;
        assert_eq!(sets[0], (e(1, 3), vec![e(1, 2), e(2, 2), e(2, 3)]));
        assert_eq!(sets[1].0, e(2, 1));
        assert_eq!(sets[1].1, vec![e(1, 2), e(2, 2), e(2, 3)]);
        assert_eq!(sets[2], (e(3, 2), vec![e(1, 2), e(2, 2), e(2, 3)]));
    }

    #[test]
    fn single_cell_is_unbounded() {
        let w = validate_matrix(&[[5.0]]).unwrap();
        let r = assignment_sensitivity(&w, None, &Default::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.intervals.interval(e(1, 1)), (-INF, INF));
        let a = Assignment::from_edges([e(1, 1)], 1, 1).unwrap();
        assert_eq!(sensitivity_radius(&w, &a, &Default::default()).unwrap(), INF);
    }

    #[test]
    fn radius_of_distinct_matrix() {
        assert_eq!(
            sensitivity_radius(&distinct(), &distinct_lex(), &Default::default()).unwrap(),
            13.0
        );
    }

    #[test]
    fn rejects_suboptimal_assignment() {
        let a = Assignment::from_edges([e(1, 1), e(2, 2), e(3, 3)], 3, 3).unwrap();
        assert!(matches!(
            assignment_sensitivity(&distinct(), Some(&a), &Default::default()),
            Err(Error::NotOptimalAssignment { value, optimum }) if value == 89.0 && optimum == 63.0
        ));
    }

    #[test]
    fn allowability_checks() {
        let w = distinct();
        let a = distinct_lex();
        let mut p = Perturbation::zeros_like(&w);
        assert!(is_allowable(&w, &a, &p).unwrap());
        p.set(e(1, 3), 13.0);
        p.set(e(2, 2), -13.0);
        assert!(is_allowable(&w, &a, &p).unwrap());
        p.set(e(1, 3), 13.000001);
        assert!(!is_allowable(&w, &a, &p).unwrap());
    }

    #[test]
    fn edge_allowability_checks() {
        let w = distinct();
        let mut p = Perturbation::zeros_like(&w);
        assert!(is_edge_allowable(&w, e(1, 3), &p).unwrap());
        p.set(e(1, 3), -1.5);
        p.set(e(3, 2), 1.5);
        assert!(is_edge_allowable(&w, e(1, 3), &p).unwrap());
        let mut p = Perturbation::zeros_like(&w);
        p.set(e(1, 3), -2.0);
        assert!(is_edge_allowable(&w, e(1, 3), &p).unwrap());
        p.set(e(3, 2), 2.0);
        assert!(!is_edge_allowable(&w, e(1, 3), &p).unwrap());
    }
}
