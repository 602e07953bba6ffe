//! Weight matrices, edges, assignments and perturbations.
//!
//! Weights live on the extended reals: any finite `f64`, or `f64::INFINITY`
//! for a missing edge. `-inf` and NaN are rejected when a matrix is built from
//! caller data. Matrices are stored with at least as many rows as columns; a
//! wider input is transposed on ingestion and remembers that it was.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Marker for a missing edge.
pub const MISSING: f64 = f64::INFINITY;

/// An edge `(row, col)` of the bipartite graph. Indices are 0-based;
/// `Display` and [`Edge::one_based`] give the 1-based form used in files and
/// reports. The derived ordering is row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub row: usize,
    pub col: usize,
}

impl Edge {
    pub const fn new(row: usize, col: usize) -> Self {
        Edge { row, col }
    }

    /// Builds an edge from 1-based indices. Returns `None` for a zero index.
    pub fn from_one_based(row: usize, col: usize) -> Option<Self> {
        Some(Edge {
            row: row.checked_sub(1)?,
            col: col.checked_sub(1)?,
        })
    }

    pub fn one_based(self) -> (usize, usize) {
        (self.row + 1, self.col + 1)
    }

    pub fn transposed(self) -> Self {
        Edge {
            row: self.col,
            col: self.row,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

/// Dense `rows x cols` matrix of extended-real edge weights, `rows >= cols >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    transposed: bool,
}

/// Validates caller weights and builds a [`WeightMatrix`].
///
/// Inputs with more columns than rows are transposed; see
/// [`WeightMatrix::is_transposed`] and [`WeightMatrix::to_external`].
pub fn validate_matrix<R: AsRef<[f64]>>(raw: &[R]) -> Result<WeightMatrix> {
    let (rows, cols, data) = rectangular(raw)?;
    for (idx, &w) in data.iter().enumerate() {
        let (row, col) = (idx / cols, idx % cols);
        if w.is_nan() {
            return Err(Error::NotANumber { row, col });
        }
        if w == f64::NEG_INFINITY {
            return Err(Error::NegativeInfinityWeight { row, col });
        }
    }
    let matrix = WeightMatrix {
        rows,
        cols,
        data,
        transposed: false,
    };
    Ok(if rows < cols { matrix.transpose() } else { matrix })
}

fn rectangular<R: AsRef<[f64]>>(raw: &[R]) -> Result<(usize, usize, Vec<f64>)> {
    let rows = raw.len();
    let cols = raw.first().map_or(0, |r| r.as_ref().len());
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (row, r) in raw.iter().enumerate() {
        let r = r.as_ref();
        if r.len() != cols {
            return Err(Error::RaggedMatrix {
                row,
                expected: cols,
                found: r.len(),
            });
        }
        data.extend_from_slice(r);
    }
    Ok((rows, cols, data))
}

impl WeightMatrix {
    /// Builds a matrix without ingestion checks. Used for derived matrices
    /// (sensitivity weights may legitimately hold `-inf`).
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert!(rows >= cols && cols >= 1);
        debug_assert_eq!(data.len(), rows * cols);
        WeightMatrix {
            rows,
            cols,
            data,
            transposed: false,
        }
    }

    fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c]);
            }
        }
        WeightMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
            transposed: !self.transposed,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Whether the caller's input was transposed on ingestion.
    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    /// Maps an internal edge to the caller's orientation.
    pub fn to_external(&self, e: Edge) -> Edge {
        if self.transposed {
            e.transposed()
        } else {
            e
        }
    }

    /// Maps an edge given in the caller's orientation to the internal one.
    pub fn to_internal(&self, e: Edge) -> Edge {
        self.to_external(e)
    }

    pub fn contains_edge_index(&self, e: Edge) -> bool {
        e.row < self.rows && e.col < self.cols
    }

    #[inline]
    pub fn get(&self, e: Edge) -> f64 {
        self.data[e.row * self.cols + e.col]
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `true` iff `e` is in range and has finite weight.
    pub fn is_edge(&self, e: Edge) -> bool {
        self.contains_edge_index(e) && self.get(e) < MISSING
    }

    pub(crate) fn set(&mut self, e: Edge, w: f64) {
        self.data[e.row * self.cols + e.col] = w;
    }

    /// Marks `e` as missing.
    pub fn remove_edge(&mut self, e: Edge) {
        self.set(e, MISSING);
    }

    pub fn with_removed(&self, e: Edge) -> Self {
        let mut out = self.clone();
        out.remove_edge(e);
        out
    }

    /// All index pairs in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Edge::new(r, c)))
    }

    /// Finite edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.indices().filter(move |&e| self.get(e) < MISSING)
    }

    pub(crate) fn check_edge(&self, e: Edge) -> Result<()> {
        if self.contains_edge_index(e) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: e.row.max(e.col) + 1,
                len: self.rows.max(self.cols),
            })
        }
    }
}

/// A column-perfect matching: every column exactly once, every row at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    row_of_col: Vec<usize>,
}

impl Assignment {
    /// Checks the matching constraints against a `rows x cols` graph.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I, rows: usize, cols: usize) -> Result<Self> {
        let mut row_of_col = alloc::vec![usize::MAX; cols];
        let mut row_used = alloc::vec![false; rows];
        let mut count = 0;
        for e in edges {
            if e.row >= rows || e.col >= cols {
                return Err(Error::InvalidAssignment("edge index out of range"));
            }
            if row_of_col[e.col] != usize::MAX {
                return Err(Error::InvalidAssignment("column assigned twice"));
            }
            if row_used[e.row] {
                return Err(Error::InvalidAssignment("row assigned twice"));
            }
            row_of_col[e.col] = e.row;
            row_used[e.row] = true;
            count += 1;
        }
        if count != cols {
            return Err(Error::InvalidAssignment("not every column is assigned"));
        }
        Ok(Assignment { row_of_col })
    }

    pub(crate) fn from_rows_unchecked(row_of_col: Vec<usize>) -> Self {
        Assignment { row_of_col }
    }

    /// Row assigned to each column, indexed by column.
    pub fn rows_by_col(&self) -> &[usize] {
        &self.row_of_col
    }

    pub fn len(&self) -> usize {
        self.row_of_col.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_of_col.is_empty()
    }

    /// Edges in column order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.row_of_col.iter().enumerate().map(|(c, &r)| Edge::new(r, c))
    }

    /// Edges in row-major order.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.edges().collect();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.row_of_col.get(e.col) == Some(&e.row)
    }

    pub(crate) fn check_dims(&self, w: &WeightMatrix) -> Result<()> {
        if self.row_of_col.len() != w.cols() || self.row_of_col.iter().any(|&r| r >= w.rows()) {
            return Err(Error::InvalidAssignment("assignment does not fit the weight matrix"));
        }
        Ok(())
    }
}

/// A real-valued perturbation with the same shape as a [`WeightMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    rows: usize,
    cols: usize,
    deltas: Vec<f64>,
}

impl Perturbation {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Perturbation {
            rows,
            cols,
            deltas: alloc::vec![0.0; rows * cols],
        }
    }

    pub fn zeros_like(w: &WeightMatrix) -> Self {
        Self::zeros(w.rows(), w.cols())
    }

    /// Validates a perturbation given in the caller's orientation for `like`,
    /// transposing it if `like` was transposed on ingestion.
    pub fn for_matrix<R: AsRef<[f64]>>(raw: &[R], like: &WeightMatrix) -> Result<Self> {
        let (rows, cols, data) = rectangular(raw)?;
        if let Some(idx) = data.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFinitePerturbation {
                row: idx / cols,
                col: idx % cols,
            });
        }
        let mut p = Perturbation {
            rows,
            cols,
            deltas: data,
        };
        if like.is_transposed() {
            p = p.transpose();
        }
        if p.dims() != like.dims() {
            return Err(Error::DimensionMismatch {
                expected: like.dims(),
                found: p.dims(),
            });
        }
        Ok(p)
    }

    fn transpose(&self) -> Self {
        let mut deltas = Vec::with_capacity(self.deltas.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                deltas.push(self.deltas[r * self.cols + c]);
            }
        }
        Perturbation {
            rows: self.cols,
            cols: self.rows,
            deltas,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, e: Edge) -> f64 {
        self.deltas[e.row * self.cols + e.col]
    }

    /// Sets one entry. Panics on a non-finite delta.
    pub fn set(&mut self, e: Edge, delta: f64) {
        assert!(delta.is_finite(), "perturbations must be finite");
        self.deltas[e.row * self.cols + e.col] = delta;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.deltas
    }

    /// Entrywise sum of two perturbations.
    pub fn add(&self, other: &Perturbation) -> Result<Perturbation> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(Perturbation {
            rows: self.rows,
            cols: self.cols,
            deltas: self.deltas.iter().zip(&other.deltas).map(|(a, b)| a + b).collect(),
        })
    }
}

/// `W + P` entrywise; missing edges stay missing.
pub fn apply_perturbation(w: &WeightMatrix, p: &Perturbation) -> Result<WeightMatrix> {
    if w.dims() != p.dims() {
        return Err(Error::DimensionMismatch {
            expected: w.dims(),
            found: p.dims(),
        });
    }
    let data = w
        .data
        .iter()
        .zip(&p.deltas)
        .map(|(&wv, &d)| if wv == MISSING { MISSING } else { wv + d })
        .collect();
    Ok(WeightMatrix {
        rows: w.rows,
        cols: w.cols,
        data,
        transposed: w.transposed,
    })
}

/// Largest weight of an assignment and where it sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxWeight {
    pub value: f64,
    /// Row-major-first edge attaining `value`.
    pub edge: Edge,
    /// More than one assigned edge attains `value`.
    pub tied: bool,
}

pub fn assignment_max_weight(w: &WeightMatrix, a: &Assignment) -> Result<MaxWeight> {
    a.check_dims(w)?;
    let mut best: Option<MaxWeight> = None;
    for e in a.sorted_edges() {
        let v = w.get(e);
        best = Some(match best {
            None => MaxWeight {
                value: v,
                edge: e,
                tied: false,
            },
            Some(b) if v > b.value => MaxWeight {
                value: v,
                edge: e,
                tied: false,
            },
            Some(b) if v == b.value => MaxWeight { tied: true, ..b },
            Some(b) => b,
        });
    }
    best.ok_or(Error::InvalidAssignment("empty assignment"))
}
