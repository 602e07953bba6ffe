//! Sensitivity of a single bottleneck edge.
//!
//! The anchor is removed from the graph and the bottleneck edge of what is
//! left is removed repeatedly until no finite assignment remains. The removed
//! edges form an exclusive set: every assignment uses the anchor or one of
//! them. Together with the lexicographic assignment through the anchor this
//! fixes the largest edge-allowable interval array.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::intervals::IntervalArray;
use crate::lex::lexicographic_assignment_through;
use crate::matrix::{Assignment, Edge, WeightMatrix, MISSING};
use crate::solver::{solve_bap, Solver};

/// Edges covering every assignment that avoids `anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusiveSet {
    pub anchor: Edge,
    /// In removal order, which is also non-decreasing weight order.
    pub members: Vec<Edge>,
    /// No removal step had to choose between tied bottleneck edges.
    pub tie_free: bool,
}

#[derive(Clone, Debug, Default)]
pub struct EdgeSensitivityOptions {
    /// Re-solve after each removal by repairing the previous matching.
    pub warm_start: bool,
    /// When a removal step has several bottleneck edges, the first of these
    /// that appears in the list is removed. Otherwise the row-major-first.
    pub tie_preference: Vec<Edge>,
}

impl EdgeSensitivityOptions {
    pub fn warm() -> Self {
        EdgeSensitivityOptions {
            warm_start: true,
            tie_preference: Vec::new(),
        }
    }

    pub fn cold() -> Self {
        EdgeSensitivityOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSensitivityReport {
    pub anchor: Edge,
    pub intervals: IntervalArray,
    pub exclusive_set: ExclusiveSet,
    pub lex_assignment_used: Assignment,
    pub lambda_up_star: f64,
    pub lambda_down_star: f64,
    pub certified: bool,
}

fn require_bottleneck_edge(w: &WeightMatrix, anchor: Edge) -> Result<()> {
    w.check_edge(anchor)?;
    let sol = solve_bap(w)?;
    if sol.candidates.binary_search(&anchor).is_ok() {
        Ok(())
    } else {
        Err(Error::NotABottleneckEdge(anchor))
    }
}

/// Exclusive set of `anchor` by repeated bottleneck-edge removal.
pub fn build_exclusive_set(w: &WeightMatrix, anchor: Edge, opts: &EdgeSensitivityOptions) -> Result<ExclusiveSet> {
    require_bottleneck_edge(w, anchor)?;

    let mut work = w.clone();
    work.remove_edge(anchor);
    let mut solver = Solver::new(opts.warm_start);
    if opts.warm_start {
        // seed with a matching of the intact graph; the anchor's column is
        // freed by the removal repair below
        solver.solve(w);
    }
    let mut current = solver.resolve_after_removal(&work, anchor, w.get(anchor));
    let mut members = Vec::new();
    let mut tie_free = true;

    while let Some(sol) = current {
        let next = if sol.edge_unique {
            sol.bottleneck_edge
        } else {
            tie_free = false;
            opts.tie_preference
                .iter()
                .copied()
                .find(|p| sol.candidates.contains(p))
                .unwrap_or(sol.bottleneck_edge)
        };
        members.push(next);
        work.remove_edge(next);
        current = solver.resolve_after_removal(&work, next, sol.bottleneck_value);
    }

    Ok(ExclusiveSet {
        anchor,
        members,
        tie_free,
    })
}

fn check_bounds_preconditions(w: &WeightMatrix, anchor: Edge, members: &[Edge], a: &Assignment) -> Result<()> {
    w.check_edge(anchor)?;
    a.check_dims(w)?;
    let wa = w.get(anchor);
    if !a.contains(anchor) {
        return Err(Error::PreconditionViolation {
            edge: anchor,
            reason: "anchor is not in the assignment",
        });
    }
    if wa == MISSING {
        return Err(Error::PreconditionViolation {
            edge: anchor,
            reason: "anchor is a missing edge",
        });
    }
    for e in a.edges() {
        if w.get(e) > wa {
            return Err(Error::PreconditionViolation {
                edge: e,
                reason: "assigned edge heavier than the anchor",
            });
        }
    }
    for &e in members {
        w.check_edge(e)?;
        if e == anchor {
            return Err(Error::PreconditionViolation {
                edge: e,
                reason: "anchor cannot be its own exclusive-set member",
            });
        }
        if w.get(e) < wa || w.get(e) == MISSING {
            return Err(Error::PreconditionViolation {
                edge: e,
                reason: "exclusive-set member lighter than the anchor or missing",
            });
        }
    }
    Ok(())
}

/// Half the weight gap from the anchor to the nearest exclusive-set member
/// (upper) and to the nearest other assigned edge (lower). `+inf` when the
/// respective set is empty.
pub fn anchor_bounds(w: &WeightMatrix, anchor: Edge, members: &[Edge], a: &Assignment) -> Result<(f64, f64)> {
    check_bounds_preconditions(w, anchor, members, a)?;
    let wa = w.get(anchor);
    let up = members
        .iter()
        .map(|&e| (w.get(e) - wa) / 2.0)
        .fold(f64::INFINITY, f64::min);
    let down = a
        .edges()
        .filter(|&e| e != anchor)
        .map(|e| (wa - w.get(e)) / 2.0)
        .fold(f64::INFINITY, f64::min);
    Ok((up, down))
}

/// Interval array for a given exclusive set and assignment through the anchor.
pub fn build_edge_intervals(w: &WeightMatrix, anchor: Edge, members: &[Edge], a: &Assignment) -> Result<IntervalArray> {
    let (up, down) = anchor_bounds(w, anchor, members, a)?;
    let wa = w.get(anchor);
    let mut out = IntervalArray::unbounded_like(w);
    for &e in members {
        // lower end is w* + up* - w_e <= 0
        out.set_lower(e, 0.0 - (wa + up - w.get(e)));
    }
    for e in a.edges().filter(|&e| e != anchor) {
        out.set_upper(e, wa - down - w.get(e));
    }
    out.set_lower(anchor, down);
    out.set_upper(anchor, up);
    Ok(out)
}

/// Largest edge-allowable interval array for `anchor` (default: the
/// row-major-first bottleneck edge).
pub fn edge_sensitivity(
    w: &WeightMatrix,
    anchor: Option<Edge>,
    opts: &EdgeSensitivityOptions,
) -> Result<EdgeSensitivityReport> {
    let anchor = match anchor {
        Some(a) => a,
        None => solve_bap(w)?.bottleneck_edge,
    };
    let exclusive_set = build_exclusive_set(w, anchor, opts)?;
    let lex = lexicographic_assignment_through(w, anchor)?;
    let (lambda_up_star, lambda_down_star) = anchor_bounds(w, anchor, &exclusive_set.members, &lex.assignment)?;
    let intervals = build_edge_intervals(w, anchor, &exclusive_set.members, &lex.assignment)?;
    Ok(EdgeSensitivityReport {
        anchor,
        intervals,
        certified: exclusive_set.tie_free && lex.certified,
        exclusive_set,
        lex_assignment_used: lex.assignment,
        lambda_up_star,
        lambda_down_star,
    })
}
