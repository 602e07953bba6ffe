//! Brute-force ground truth by enumerating every assignment. Only meant for
//! small instances; every entry point refuses matrices over its
//! [`EnumerationBudget`].

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{apply_perturbation, assignment_max_weight, Assignment, Edge, Perturbation, WeightMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_rows: usize,
    pub max_assignments: u128,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_rows: 7,
            max_assignments: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    fn admit(&self, w: &WeightMatrix) -> Result<()> {
        let (n, m) = w.dims();
        let count = ((n - m + 1)..=n).fold(1u128, |acc, k| acc.saturating_mul(k as u128));
        if n > self.max_rows || count > self.max_assignments {
            return Err(Error::BudgetExceeded {
                rows: n,
                assignments: count,
            });
        }
        Ok(())
    }
}

/// Depth-first stream over finite column-perfect matchings. Columns are
/// filled in order, rows tried ascending.
#[derive(Debug)]
pub struct Assignments<'a> {
    w: &'a WeightMatrix,
    row_of_col: Vec<usize>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let (n, m) = self.w.dims();
        let (mut col, mut start);
        if !self.started {
            self.started = true;
            col = 0;
            start = 0;
        } else {
            col = m - 1;
            let r = self.row_of_col[col];
            self.used[r] = false;
            start = r + 1;
        }
        loop {
            let found = (start..n).find(|&r| !self.used[r] && self.w.at(r, col).is_finite());
            match found {
                Some(r) => {
                    self.row_of_col[col] = r;
                    self.used[r] = true;
                    if col + 1 == m {
                        return Some(Assignment::from_rows_unchecked(self.row_of_col.clone()));
                    }
                    col += 1;
                    start = 0;
                }
                None => {
                    if col == 0 {
                        self.done = true;
                        return None;
                    }
                    col -= 1;
                    let r = self.row_of_col[col];
                    self.used[r] = false;
                    start = r + 1;
                }
            }
        }
    }
}

pub fn enumerate_assignments(w: &WeightMatrix, budget: EnumerationBudget) -> Result<Assignments<'_>> {
    budget.admit(w)?;
    Ok(Assignments {
        w,
        row_of_col: vec![0; w.cols()],
        used: vec![false; w.rows()],
        started: false,
        done: false,
    })
}

fn max_weight(w: &WeightMatrix, a: &Assignment) -> f64 {
    a.edges().map(|e| w.get(e)).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteBap {
    pub value: f64,
    pub optimizers: Vec<Assignment>,
}

pub fn brute_bap(w: &WeightMatrix, budget: EnumerationBudget) -> Result<BruteBap> {
    let mut best = BruteBap {
        value: f64::INFINITY,
        optimizers: Vec::new(),
    };
    for a in enumerate_assignments(w, budget)? {
        let v = max_weight(w, &a);
        if v < best.value {
            best.value = v;
            best.optimizers.clear();
        }
        if v == best.value {
            best.optimizers.push(a);
        }
    }
    if best.optimizers.is_empty() {
        return Err(Error::NoFeasibleAssignment);
    }
    Ok(best)
}

fn descending_weights(w: &WeightMatrix, a: &Assignment) -> Vec<f64> {
    let mut v: Vec<f64> = a.edges().map(|e| w.get(e)).collect();
    v.sort_unstable_by(|x, y| y.total_cmp(x));
    v
}

fn compare_weights(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Assignment whose descending weight vector is lexicographically smallest;
/// ties go to the row-major-smallest sorted edge list.
pub fn brute_lex_assignment(w: &WeightMatrix, budget: EnumerationBudget) -> Result<Assignment> {
    let mut best: Option<(Vec<f64>, Vec<Edge>, Assignment)> = None;
    for a in enumerate_assignments(w, budget)? {
        let weights = descending_weights(w, &a);
        let edges = a.sorted_edges();
        let better = match &best {
            None => true,
            Some((bw, be, _)) => compare_weights(&weights, bw).then_with(|| edges.cmp(be)).is_lt(),
        };
        if better {
            best = Some((weights, edges, a));
        }
    }
    best.map(|(_, _, a)| a).ok_or(Error::NoFeasibleAssignment)
}

/// Every assignment contains `anchor` or an edge of `members`.
pub fn verify_exclusive_coverage(
    w: &WeightMatrix,
    anchor: Edge,
    members: &[Edge],
    budget: EnumerationBudget,
) -> Result<bool> {
    for a in enumerate_assignments(w, budget)? {
        if !a.contains(anchor) && !members.iter().any(|&s| a.contains(s)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a` attains the enumerated optimum of `W + P`.
pub fn brute_is_allowable(
    w: &WeightMatrix,
    a: &Assignment,
    p: &Perturbation,
    budget: EnumerationBudget,
) -> Result<bool> {
    let perturbed = apply_perturbation(w, p)?;
    let value = assignment_max_weight(&perturbed, a)?.value;
    Ok(value == brute_bap(&perturbed, budget)?.value)
}

/// Some optimizer of `W + P` has `anchor` as its heaviest edge.
pub fn brute_is_edge_allowable(
    w: &WeightMatrix,
    anchor: Edge,
    p: &Perturbation,
    budget: EnumerationBudget,
) -> Result<bool> {
    let perturbed = apply_perturbation(w, p)?;
    perturbed.check_edge(anchor)?;
    let best = brute_bap(&perturbed, budget)?;
    Ok(perturbed.get(anchor) == best.value && best.optimizers.iter().any(|a| a.contains(anchor)))
}

pub const RADIUS_SEARCH_CAP: f64 = 1e9;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `+sigma` on `flipped`, `-sigma` on every other entry.
pub fn single_flip_corner(w: &WeightMatrix, flipped: Edge, sigma: f64) -> Perturbation {
    let mut p = Perturbation::zeros_like(w);
    for e in w.indices() {
        p.set(e, if e == flipped { sigma } else { -sigma });
    }
    p
}

fn uniform_allowable(w: &WeightMatrix, a: &Assignment, sigma: f64, budget: EnumerationBudget) -> Result<bool> {
    for e in a.sorted_edges() {
        if !brute_is_allowable(w, a, &single_flip_corner(w, e, sigma), budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `sigma` such that every perturbation with entries in
/// `[-sigma, sigma]` keeps `a` optimal, to within `tol`. The worst case is
/// raising one assigned edge and lowering everything else, so only those
/// `|A|` corners are probed. Returns `+inf` if allowable at
/// [`RADIUS_SEARCH_CAP`].
pub fn brute_uniform_radius(w: &WeightMatrix, a: &Assignment, budget: EnumerationBudget, tol: f64) -> Result<f64> {
    budget.admit(w)?;
    a.check_dims(w)?;
    if !uniform_allowable(w, a, 0.0, budget)? {
        return Err(Error::NotOptimalAssignment {
            value: assignment_max_weight(w, a)?.value,
            optimum: brute_bap(w, budget)?.value,
        });
    }
    if uniform_allowable(w, a, RADIUS_SEARCH_CAP, budget)? {
        return Ok(f64::INFINITY);
    }
    let (mut lo, mut hi) = (0.0, RADIUS_SEARCH_CAP);
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if uniform_allowable(w, a, mid, budget)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Checks all `2^(nm)` perturbations with entries `±sigma`. Used to confirm
/// that the single-flip corners really are the worst case.
pub fn all_sign_corners_allowable(
    w: &WeightMatrix,
    a: &Assignment,
    sigma: f64,
    budget: EnumerationBudget,
) -> Result<bool> {
    let cells: Vec<Edge> = w.indices().collect();
    if cells.len() > 20 {
        return Err(Error::BudgetExceeded {
            rows: w.rows(),
            assignments: 1u128 << cells.len().min(127),
        });
    }
    let mut p = Perturbation::zeros_like(w);
    for mask in 0u32..(1u32 << cells.len()) {
        for (bit, &e) in cells.iter().enumerate() {
            p.set(e, if mask >> bit & 1 == 1 { sigma } else { -sigma });
        }
        if !brute_is_allowable(w, a, &p, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}
