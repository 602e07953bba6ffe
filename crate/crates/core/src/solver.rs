//! Bottleneck assignment by threshold search.
//!
//! Feasibility at a threshold `t` is a maximum bipartite matching over the
//! edges with weight `<= t`, grown by augmenting paths from each free column
//! (rows scanned in index order, so results are reproducible). The optimum is
//! found by binary search over the sorted distinct finite weights.
//!
//! A [`Solver`] keeps the last matching it produced and, in warm mode, seeds
//! the next search with it: after a single edge removal only the freed
//! column needs a new augmenting path.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{Assignment, Edge, WeightMatrix, MISSING};

const FREE: usize = usize::MAX;

/// One optimizer of the bottleneck problem together with its bottleneck edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BapSolution {
    pub assignment: Assignment,
    pub bottleneck_value: f64,
    /// Row-major-first element of `candidates`; always part of `assignment`.
    pub bottleneck_edge: Edge,
    /// `false` when more than one bottleneck edge exists.
    pub edge_unique: bool,
    /// All bottleneck edges (max-weight edges of some optimal assignment),
    /// row-major.
    pub candidates: Vec<Edge>,
}

#[inline]
fn usable(w: f64, t: f64) -> bool {
    w < MISSING && w <= t
}

#[derive(Clone, Debug)]
struct Matching {
    row_of_col: Vec<usize>,
    col_of_row: Vec<usize>,
    locked_row: Option<usize>,
}

impl Matching {
    fn new(rows: usize, cols: usize) -> Self {
        Matching {
            row_of_col: vec![FREE; cols],
            col_of_row: vec![FREE; rows],
            locked_row: None,
        }
    }

    /// Starts from the usable part of `hint` (row per column, `FREE` allowed).
    fn seeded(w: &WeightMatrix, t: f64, hint: Option<&[usize]>) -> Self {
        let mut m = Matching::new(w.rows(), w.cols());
        if let Some(hint) = hint {
            for (c, &r) in hint.iter().enumerate() {
                if r < w.rows() && m.col_of_row[r] == FREE && usable(w.at(r, c), t) {
                    m.row_of_col[c] = r;
                    m.col_of_row[r] = c;
                }
            }
        }
        m
    }

    /// Pins `e` into the matching; augmenting paths will never move it.
    fn force(&mut self, e: Edge) {
        let old_row = self.row_of_col[e.col];
        if old_row != FREE {
            self.col_of_row[old_row] = FREE;
        }
        let old_col = self.col_of_row[e.row];
        if old_col != FREE {
            self.row_of_col[old_col] = FREE;
        }
        self.row_of_col[e.col] = e.row;
        self.col_of_row[e.row] = e.col;
        self.locked_row = Some(e.row);
    }

    fn complete(&mut self, w: &WeightMatrix, t: f64) -> bool {
        let mut visited = vec![false; w.rows()];
        for c in 0..w.cols() {
            if self.row_of_col[c] != FREE {
                continue;
            }
            visited.fill(false);
            if let Some(r) = self.locked_row {
                visited[r] = true;
            }
            if !self.augment(w, t, c, &mut visited) {
                return false;
            }
        }
        true
    }

    fn augment(&mut self, w: &WeightMatrix, t: f64, col: usize, visited: &mut [bool]) -> bool {
        for r in 0..w.rows() {
            if visited[r] || !usable(w.at(r, col), t) {
                continue;
            }
            visited[r] = true;
            let prev = self.col_of_row[r];
            if prev == FREE || self.augment(w, t, prev, visited) {
                self.row_of_col[col] = r;
                self.col_of_row[r] = col;
                return true;
            }
        }
        false
    }

    fn max_weight(&self, w: &WeightMatrix) -> Option<f64> {
        let mut best = f64::NEG_INFINITY;
        for (c, &r) in self.row_of_col.iter().enumerate() {
            if r == FREE {
                return None;
            }
            best = best.max(w.at(r, c));
        }
        Some(best)
    }
}

/// `true` iff a column-perfect matching exists using only edges of weight
/// `<= t`, containing `forced` when given.
pub fn feasible_under_threshold(w: &WeightMatrix, t: f64, forced: Option<Edge>) -> bool {
    let mut m = Matching::new(w.rows(), w.cols());
    if let Some(f) = forced {
        if !w.contains_edge_index(f) || !usable(w.get(f), t) {
            return false;
        }
        m.force(f);
    }
    m.complete(w, t)
}

fn forced_matching(w: &WeightMatrix, t: f64, forced: Edge, hint: &[usize]) -> Option<Matching> {
    let mut m = Matching::seeded(w, t, Some(hint));
    m.force(forced);
    m.complete(w, t).then_some(m)
}

/// Smallest feasible threshold `>= lower` and a matching attaining it.
fn threshold_search(w: &WeightMatrix, hint: Option<&[usize]>, lower: f64) -> Option<(f64, Matching)> {
    let mut ts: Vec<f64> = w
        .as_slice()
        .iter()
        .copied()
        .filter(|&x| x < MISSING && x >= lower)
        .collect();
    ts.sort_unstable_by(f64::total_cmp);
    ts.dedup();

    // A complete hint caps the search from above.
    if let Some(h) = hint {
        let seeded = Matching::seeded(w, f64::MAX, Some(h));
        if let Some(hv) = seeded.max_weight(w) {
            if hv >= lower {
                let keep = ts.partition_point(|&x| x <= hv);
                ts.truncate(keep);
            }
        }
    }

    let attempt = |t: f64| {
        let mut m = Matching::seeded(w, t, hint);
        m.complete(w, t).then_some(m)
    };

    let mut hi = ts.len().checked_sub(1)?;
    let mut best = attempt(ts[hi])?;
    let mut lo = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match attempt(ts[mid]) {
            Some(m) => {
                hi = mid;
                best = m;
            }
            None => lo = mid + 1,
        }
    }
    Some((ts[hi], best))
}

fn finalize(w: &WeightMatrix, value: f64, mut matching: Matching) -> BapSolution {
    let mut candidates = Vec::new();
    let mut first_forced: Option<Matching> = None;
    for e in w.indices() {
        if w.get(e) != value {
            continue;
        }
        if matching.row_of_col[e.col] == e.row {
            candidates.push(e);
        } else if let Some(m) = forced_matching(w, value, e, &matching.row_of_col) {
            if candidates.is_empty() {
                first_forced = Some(m);
            }
            candidates.push(e);
        }
    }
    debug_assert!(!candidates.is_empty());
    let bottleneck_edge = candidates[0];
    if let Some(mut m) = first_forced {
        m.locked_row = None;
        matching = m;
    }
    BapSolution {
        assignment: Assignment::from_rows_unchecked(matching.row_of_col),
        bottleneck_value: value,
        bottleneck_edge,
        edge_unique: candidates.len() == 1,
        candidates,
    }
}

fn solve_from(w: &WeightMatrix, hint: Option<&[usize]>, lower: f64) -> Option<BapSolution> {
    let (value, matching) = threshold_search(w, hint, lower)?;
    Some(finalize(w, value, matching))
}

/// A bottleneck solver holding its last matching for warm restarts.
///
/// One solve per instance at a time; use separate instances for concurrent
/// work over a shared matrix.
#[derive(Clone, Debug, Default)]
pub struct Solver {
    warm: bool,
    last: Option<Vec<usize>>,
}

impl Solver {
    pub fn new(warm: bool) -> Self {
        Solver { warm, last: None }
    }

    pub fn is_warm(&self) -> bool {
        self.warm
    }

    /// Solves `w`, seeding from the previous matching in warm mode. `None`
    /// means every column-perfect matching uses a missing edge.
    pub fn solve(&mut self, w: &WeightMatrix) -> Option<BapSolution> {
        let hint = if self.warm { self.last.as_deref() } else { None };
        let sol = solve_from(w, hint, f64::NEG_INFINITY);
        self.remember(sol.as_ref());
        sol
    }

    /// Re-solves after `removed` was deleted from the graph. `w_after` must
    /// already have `removed` missing; `prev_value` is the optimum before the
    /// removal, which bounds the new optimum from below.
    pub fn resolve_after_removal(
        &mut self,
        w_after: &WeightMatrix,
        removed: Edge,
        prev_value: f64,
    ) -> Option<BapSolution> {
        let sol = match (&self.last, self.warm) {
            (Some(last), true) => {
                let mut hint = last.clone();
                if hint.get(removed.col) == Some(&removed.row) {
                    hint[removed.col] = FREE;
                }
                solve_from(w_after, Some(&hint), prev_value)
            }
            _ => solve_from(w_after, None, f64::NEG_INFINITY),
        };
        self.remember(sol.as_ref());
        sol
    }

    fn remember(&mut self, sol: Option<&BapSolution>) {
        if let Some(s) = sol {
            self.last = Some(s.assignment.rows_by_col().to_vec());
        }
    }
}

/// Solves the bottleneck assignment problem on `w` from scratch.
pub fn solve_bap(w: &WeightMatrix) -> Result<BapSolution> {
    solve_from(w, None, f64::NEG_INFINITY).ok_or(Error::NoFeasibleAssignment)
}

/// Row-major-first bottleneck edge of `w`.
pub fn bottleneck_edge(w: &WeightMatrix) -> Result<Edge> {
    solve_bap(w).map(|s| s.bottleneck_edge)
}

/// Solution of `w` with `removed` deleted, repaired from `prev` (a solution
/// of `w`) instead of solved from scratch.
pub fn resolve_after_removal(w: &WeightMatrix, prev: &BapSolution, removed: Edge) -> Result<BapSolution> {
    w.check_edge(removed)?;
    if !w.is_edge(removed) {
        return Err(Error::PreconditionViolation {
            edge: removed,
            reason: "removed edge is already missing",
        });
    }
    let after = w.with_removed(removed);
    let mut hint = prev.assignment.rows_by_col().to_vec();
    if prev.assignment.contains(removed) {
        hint[removed.col] = FREE;
    }
    solve_from(&after, Some(&hint), prev.bottleneck_value).ok_or(Error::NoFeasibleAssignment)
}
