//! Bottleneck assignment with sensitivity analysis.
//!
//! Solves the bottleneck assignment problem on `n x m` weight matrices
//! (`n >= m`, missing edges are `+inf`) and computes, for a bottleneck edge
//! or for a whole optimal assignment, per-edge perturbation intervals inside
//! which the edge or assignment stays optimal.
//!
//! `no_std`; needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assign_sens;
pub mod edge_sens;
pub mod error;
pub mod intervals;
pub mod lex;
pub mod matrix;
pub mod oracle;
pub mod solver;

pub use assign_sens::{
    assignment_sensitivity, bound_value, is_allowable, is_edge_allowable, sensitivity_radius,
    AssignmentSensitivityOptions, AssignmentSensitivityReport, BoundState, DeterminedBound, Side, TiePolicy,
};
pub use edge_sens::{
    anchor_bounds, build_edge_intervals, build_exclusive_set, edge_sensitivity, EdgeSensitivityOptions,
    EdgeSensitivityReport, ExclusiveSet,
};
pub use error::{Error, Result};
pub use intervals::IntervalArray;
pub use lex::{lexicographic_assignment, lexicographic_assignment_through, LexAssignment};
pub use matrix::{
    apply_perturbation, assignment_max_weight, validate_matrix, Assignment, Edge, MaxWeight, Perturbation,
    WeightMatrix, MISSING,
};
pub use solver::{bottleneck_edge, feasible_under_threshold, resolve_after_removal, solve_bap, BapSolution, Solver};
