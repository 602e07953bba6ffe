//! Lexicographic assignment: minimise the largest assigned weight, then the
//! second largest, and so on.
//!
//! Computed by iterative bottleneck fixing. Each step solves the bottleneck
//! problem on the remaining rows and columns, keeps the bottleneck edge,
//! deletes its row and column and forbids edges heavier than the value just
//! fixed. With distinct weights the bottleneck edge is unique and lies in
//! every optimum, so the result is exact; otherwise the row-major-first
//! bottleneck edge is taken and the result is marked uncertified.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{Assignment, Edge, WeightMatrix, MISSING};
use crate::solver::{feasible_under_threshold, solve_bap};

#[derive(Clone, Debug, PartialEq)]
pub struct LexAssignment {
    pub assignment: Assignment,
    /// Assigned weights in descending order.
    pub sorted_weights: Vec<f64>,
    /// Every fixing step had a unique bottleneck edge.
    pub certified: bool,
}

pub fn lexicographic_assignment(w: &WeightMatrix) -> Result<LexAssignment> {
    fix_iteratively(w, None)
}

/// Lexicographically minimal assignment among those whose largest weight
/// sits at `first`. `first` must be a bottleneck edge of `w`.
pub fn lexicographic_assignment_through(w: &WeightMatrix, first: Edge) -> Result<LexAssignment> {
    w.check_edge(first)?;
    fix_iteratively(w, Some(first))
}

fn fix_iteratively(w: &WeightMatrix, first: Option<Edge>) -> Result<LexAssignment> {
    let mut rows: Vec<usize> = (0..w.rows()).collect();
    let mut cols: Vec<usize> = (0..w.cols()).collect();
    let mut cap = MISSING;
    let mut row_of_col = alloc::vec![usize::MAX; w.cols()];
    let mut sorted_weights = Vec::with_capacity(w.cols());
    let mut certified = true;

    if let Some(f) = first {
        let optimum = solve_bap(w)?.bottleneck_value;
        let wf = w.get(f);
        if wf != optimum || !feasible_under_threshold(w, wf, Some(f)) {
            return Err(Error::NotABottleneckEdge(f));
        }
        row_of_col[f.col] = f.row;
        sorted_weights.push(wf);
        cap = wf;
        rows.retain(|&r| r != f.row);
        cols.retain(|&c| c != f.col);
    }

    while !cols.is_empty() {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rows {
            for &c in &cols {
                let x = w.at(r, c);
                data.push(if x > cap { MISSING } else { x });
            }
        }
        let reduced = WeightMatrix::from_parts(rows.len(), cols.len(), data);
        let sol = solve_bap(&reduced)?;
        certified &= sol.edge_unique;
        let e = sol.bottleneck_edge;
        let (r, c) = (rows[e.row], cols[e.col]);
        row_of_col[c] = r;
        sorted_weights.push(sol.bottleneck_value);
        cap = sol.bottleneck_value;
        rows.remove(e.row);
        cols.remove(e.col);
    }

    Ok(LexAssignment {
        assignment: Assignment::from_rows_unchecked(row_of_col),
        sorted_weights,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::validate_matrix;
    use alloc::vec;

    fn e(i: usize, j: usize) -> Edge {
        Edge::from_one_based(i, j).unwrap()
    }

    #[test]
    fn reference_assignments() {
        let w = validate_matrix(&[[0.0, 10.0, 0.0], [100.0, 1.0, 5.0], [0.0, 5.0, 0.0]]).unwrap();
        let lex = lexicographic_assignment(&w).unwrap();
        assert_eq!(lex.assignment.sorted_edges(), vec![e(1, 1), e(2, 2), e(3, 3)]);
        assert_eq!(lex.sorted_weights, vec![1.0, 0.0, 0.0]);
        // the zero block ties
        assert!(!lex.certified);

        let w = validate_matrix(&[[2.0, 91.0, 63.0], [26.0, 89.0, 93.0], [48.0, 60.0, 71.0]]).unwrap();
        let lex = lexicographic_assignment(&w).unwrap();
        assert_eq!(lex.assignment.sorted_edges(), vec![e(1, 3), e(2, 1), e(3, 2)]);
        assert_eq!(lex.sorted_weights, vec![63.0, 60.0, 26.0]);
        assert!(lex.certified);
    }

    #[test]
    fn through_default_anchor_matches_plain() {
        let w = validate_matrix(&[[2.0, 91.0, 63.0], [26.0, 89.0, 93.0], [48.0, 60.0, 71.0]]).unwrap();
        assert_eq!(
            lexicographic_assignment_through(&w, e(1, 3)).unwrap(),
            lexicographic_assignment(&w).unwrap()
        );
        assert_eq!(
            lexicographic_assignment_through(&w, e(1, 1)),
            Err(Error::NotABottleneckEdge(e(1, 1)))
        );
    }

    #[test]
    fn rectangular_and_missing() {
        let inf = f64::INFINITY;
        let w = validate_matrix(&[[4.0, inf], [1.0, 3.0], [2.0, 9.0]]).unwrap();
        let lex = lexicographic_assignment(&w).unwrap();
        assert_eq!(lex.sorted_weights, vec![3.0, 2.0]);
        assert_eq!(lex.assignment.sorted_edges(), vec![e(2, 2), e(3, 1)]);
    }
}
