//! Arrays of perturbation intervals `[-lower_e, upper_e]`, one per edge.
//!
//! Bounds are stored as non-negative magnitudes (`+inf` = unbounded), so the
//! zero perturbation is always contained. Arrays are ordered
//! lexicographically by their magnitude spectrum: the sorted multiset of all
//! `2nm` bound magnitudes, infinities last.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{Edge, Perturbation, WeightMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalArray {
    rows: usize,
    cols: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl IntervalArray {
    /// Every interval `(-inf, inf)`.
    pub fn unbounded(rows: usize, cols: usize) -> Self {
        IntervalArray {
            rows,
            cols,
            lower: alloc::vec![f64::INFINITY; rows * cols],
            upper: alloc::vec![f64::INFINITY; rows * cols],
        }
    }

    pub fn unbounded_like(w: &WeightMatrix) -> Self {
        Self::unbounded(w.rows(), w.cols())
    }

    /// Builds an array from row-major magnitude vectors; every bound must be
    /// `>= 0` (possibly `+inf`).
    pub fn from_magnitudes(rows: usize, cols: usize, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != rows * cols || upper.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: (lower.len().max(upper.len()) / cols.max(1), cols),
            });
        }
        for (idx, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo >= 0.0 && hi >= 0.0) {
                return Err(Error::PreconditionViolation {
                    edge: Edge::new(idx / cols, idx % cols),
                    reason: "interval bounds must be non-negative magnitudes",
                });
            }
        }
        Ok(IntervalArray {
            rows,
            cols,
            lower,
            upper,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Magnitude of the lower end: the interval starts at `-lower(e)`.
    pub fn lower(&self, e: Edge) -> f64 {
        self.lower[e.row * self.cols + e.col]
    }

    pub fn upper(&self, e: Edge) -> f64 {
        self.upper[e.row * self.cols + e.col]
    }

    /// Signed endpoints `(lo, hi)` with `lo <= 0 <= hi`.
    pub fn interval(&self, e: Edge) -> (f64, f64) {
        (-self.lower(e), self.upper(e))
    }

    pub fn lower_magnitudes(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_magnitudes(&self) -> &[f64] {
        &self.upper
    }

    pub(crate) fn set_lower(&mut self, e: Edge, magnitude: f64) {
        debug_assert!(magnitude >= 0.0);
        self.lower[e.row * self.cols + e.col] = magnitude;
    }

    pub(crate) fn set_upper(&mut self, e: Edge, magnitude: f64) {
        debug_assert!(magnitude >= 0.0);
        self.upper[e.row * self.cols + e.col] = magnitude;
    }

    /// All `2nm` magnitudes, ascending, infinities last.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.lower.iter().chain(&self.upper).copied().collect();
        s.sort_unstable_by(f64::total_cmp);
        s
    }

    /// `k`-th smallest bound magnitude, `1 <= k <= 2nm`.
    pub fn rho(&self, k: usize) -> Result<f64> {
        let len = 2 * self.rows * self.cols;
        if k == 0 || k > len {
            return Err(Error::IndexOutOfRange { index: k, len });
        }
        Ok(self.spectrum()[k - 1])
    }

    /// Lexicographic comparison of magnitude spectra. Distinct arrays with
    /// equal spectra compare `Equal`.
    pub fn lex_compare(&self, other: &IntervalArray) -> Result<Ordering> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        let (a, b) = (self.spectrum(), other.spectrum());
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal))
    }

    /// Closed membership test on every entry.
    pub fn contains(&self, p: &Perturbation) -> Result<bool> {
        if self.dims() != p.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: p.dims(),
            });
        }
        Ok(p.as_slice()
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&d, (&lo, &hi))| -lo <= d && d <= hi))
    }

    /// Extreme point of the array: `flipped` at its upper end, every other
    /// edge at its lower end, infinite magnitudes truncated to `clamp`.
    pub fn corner_perturbation(&self, flipped: Edge, clamp: f64) -> Perturbation {
        assert!(clamp.is_finite() && clamp > 0.0, "clamp must be finite and positive");
        let mut p = Perturbation::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = Edge::new(r, c);
                if e == flipped {
                    p.set(e, self.upper(e).min(clamp));
                } else {
                    p.set(e, -self.lower(e).min(clamp));
                }
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const INF: f64 = f64::INFINITY;

    fn e(i: usize, j: usize) -> Edge {
        Edge::from_one_based(i, j).unwrap()
    }

    /// Builds an array from signed `(lo, hi)` rows in display form.
    fn table(rows: &[[(f64, f64); 3]; 3]) -> IntervalArray {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for row in rows {
            for &(lo, hi) in row {
                lower.push(-lo);
                upper.push(hi);
            }
        }
        IntervalArray::from_magnitudes(3, 3, lower, upper).unwrap()
    }

    fn edge_intervals() -> IntervalArray {
        table(&[
            [(-INF, INF), (-15.0, INF), (-1.5, 13.0)],
            [(-INF, 35.5), (-13.0, INF), (-17.0, INF)],
            [(-INF, INF), (-INF, 1.5), (-INF, INF)],
        ])
    }

    fn assignment_intervals() -> IntervalArray {
        table(&[
            [(-INF, INF), (-15.0, INF), (-INF, 13.0)],
            [(-INF, 50.0), (-13.0, INF), (-17.0, INF)],
            [(-INF, INF), (-INF, 16.0), (-INF, INF)],
        ])
    }

    #[test]
    fn rho_spectrum() {
        assert_eq!(assignment_intervals().rho(1).unwrap(), 13.0);
        assert_eq!(edge_intervals().rho(1).unwrap(), 1.5);
        assert_eq!(edge_intervals().rho(2).unwrap(), 1.5);
        assert_eq!(edge_intervals().rho(3).unwrap(), 13.0);
        assert_eq!(IntervalArray::unbounded(2, 2).rho(5).unwrap(), INF);
        assert!(matches!(edge_intervals().rho(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(edge_intervals().rho(19), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn lexicographic_order() {
        let left = table(&[
            [(-INF, 0.5), (-INF, INF), (-INF, INF)],
            [(-97.0, INF), (-0.5, 2.0), (-2.0, INF)],
            [(-INF, INF), (-INF, INF), (-INF, 0.5)],
        ]);
        let right = table(&[
            [(-INF, 0.5), (-7.0, INF), (-INF, INF)],
            [(-INF, INF), (-0.5, 2.0), (-INF, INF)],
            [(-INF, INF), (-2.0, INF), (-INF, 0.5)],
        ]);
        assert_eq!(left.lex_compare(&right).unwrap(), Ordering::Greater);
        assert_eq!(right.lex_compare(&left).unwrap(), Ordering::Less);
        assert_eq!(left.lex_compare(&left).unwrap(), Ordering::Equal);

        let a = IntervalArray::from_magnitudes(1, 1, vec![1.0], vec![2.0]).unwrap();
        let b = IntervalArray::from_magnitudes(1, 1, vec![3.0], vec![1.0]).unwrap();
        assert_eq!(a.lex_compare(&b).unwrap(), Ordering::Less);
        let c = IntervalArray::from_magnitudes(1, 1, vec![2.0], vec![1.0]).unwrap();
        // same spectrum, different arrays
        assert_eq!(a.lex_compare(&c).unwrap(), Ordering::Equal);
        assert!(a.lex_compare(&IntervalArray::unbounded(2, 1)).is_err());
    }

    #[test]
    fn membership_is_closed() {
        let t = assignment_intervals();
        let mut p = Perturbation::zeros(3, 3);
        assert!(t.contains(&p).unwrap());
        p.set(e(1, 3), 13.0);
        assert!(t.contains(&p).unwrap());
        p.set(e(1, 3), 13.1);
        assert!(!t.contains(&p).unwrap());
    }

    #[test]
    fn corners() {
        let p = edge_intervals().corner_perturbation(e(1, 3), 1e6);
        assert_eq!(p.get(e(1, 3)), 13.0);
        assert_eq!(p.get(e(2, 2)), -13.0);
        assert_eq!(p.get(e(1, 2)), -15.0);
        assert_eq!(p.get(e(2, 3)), -17.0);
        assert_eq!(p.get(e(2, 1)), -1e6);
        assert_eq!(p.get(e(1, 1)), -1e6);

        let p = IntervalArray::unbounded(2, 2).corner_perturbation(e(2, 1), 1.0);
        assert_eq!(p.as_slice(), &[-1.0, -1.0, 1.0, -1.0]);

        let p = assignment_intervals().corner_perturbation(e(2, 1), 1e6);
        assert_eq!(p.get(e(2, 1)), 50.0);
        assert_eq!(p.get(e(2, 2)), -13.0);
        assert_eq!(p.get(e(1, 2)), -15.0);
        assert_eq!(p.get(e(2, 3)), -17.0);
        assert!(assignment_intervals().contains(&p).unwrap());
    }

    #[test]
    fn rejects_negative_magnitudes() {
        assert!(IntervalArray::from_magnitudes(1, 1, vec![-1.0], vec![0.0]).is_err());
        assert!(IntervalArray::from_magnitudes(1, 1, vec![f64::NAN], vec![0.0]).is_err());
    }
}
