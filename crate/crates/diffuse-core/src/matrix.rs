//! Column-compressed sparse matrix.
//!
//! Every diffusion step reads exactly one column (the out-edges of the
//! diffusing node), so the storage is column-major: `col_ptr[i]..col_ptr[i+1]`
//! indexes the `(row, value)` pairs of column `i`, sorted by row. Stored
//! values are strictly positive; zeros are never stored. Per-column sums are
//! cached at construction.

use crate::error::{Error, Result};
use crate::vector::{DenseVector, MonitorVector};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
    col_sums: Vec<f64>,
}

impl SparseMatrix {
    /// n x n matrix with no stored entries.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            col_ptr: vec![0; n + 1],
            rows: Vec::new(),
            vals: Vec::new(),
            col_sums: vec![0.0; n],
        }
    }

    /// Builds from `(row, col, value)` triplets. Duplicate positions are
    /// summed; every triplet value must be strictly positive and finite.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(row, col, value) in triplets {
            if row >= n {
                return Err(Error::IndexOutOfRange { index: row, dim: n });
            }
            if col >= n {
                return Err(Error::IndexOutOfRange { index: col, dim: n });
            }
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidMatrixValue { row, col, value });
            }
            entries.push((col, row, value));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut rows = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut counts = vec![0usize; n];
        let mut last: Option<(usize, usize)> = None;
        for &(col, row, value) in &entries {
            if last == Some((col, row)) {
                *vals.last_mut().unwrap() += value;
            } else {
                rows.push(row);
                vals.push(value);
                counts[col] += 1;
                last = Some((col, row));
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for c in 0..n {
            col_ptr[c + 1] = col_ptr[c] + counts[c];
        }
        let col_sums = (0..n)
            .map(|c| vals[col_ptr[c]..col_ptr[c + 1]].iter().sum())
            .collect();
        Ok(Self {
            n,
            col_ptr,
            rows,
            vals,
            col_sums,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(row, value)` pairs of column `i`, sorted by row.
    pub fn column(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.col_ptr[i];
        let hi = self.col_ptr[i + 1];
        self.rows[lo..hi]
            .iter()
            .copied()
            .zip(self.vals[lo..hi].iter().copied())
    }

    pub fn col_nnz(&self, i: usize) -> usize {
        self.col_ptr[i + 1] - self.col_ptr[i]
    }

    pub fn col_sum(&self, i: usize) -> f64 {
        self.col_sums[i]
    }

    pub fn col_sums(&self) -> &[f64] {
        &self.col_sums
    }

    pub fn max_col_sum(&self) -> f64 {
        self.col_sums.iter().fold(0.0, |m, &s| m.max(s))
    }

    /// All stored entries as `(row, col, value)` triplets in column order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    /// Matrix scaled entrywise by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "scale factor must be strictly positive, got {factor}"
            )));
        }
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= factor;
        }
        for s in &mut out.col_sums {
            *s *= factor;
        }
        Ok(out)
    }

    /// `P * x`, accumulated column by column.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector> {
        x.check_len(self.n)?;
        let mut y = DenseVector::zeros(self.n);
        for i in 0..self.n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for (row, val) in self.column(i) {
                y[row] += val * xi;
            }
        }
        Ok(y)
    }

    /// Columnwise test that the monitor never increases under `P`:
    /// for every column `i`, `sum_j v_j * p_ji <= v_i` (slack 1e-12).
    pub fn is_sigma_decreasing(&self, mon: &MonitorVector) -> Result<bool> {
        if mon.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: mon.len(),
            });
        }
        for i in 0..self.n {
            let weighted: f64 = self.column(i).map(|(row, val)| mon.weight(row) * val).sum();
            if weighted > mon.weight(i) + 1e-12 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Errors unless every column sums to 1 within `tol`.
    pub fn validate_column_stochastic(&self, tol: f64) -> Result<()> {
        for (i, &s) in self.col_sums.iter().enumerate() {
            if (s - 1.0).abs() > tol {
                return Err(Error::NotColumnStochastic {
                    column: i,
                    sum: s,
                    tol,
                });
            }
        }
        Ok(())
    }

    /// Row-major dense copy. Intended for oracles and small matrices only;
    /// callers enforce their own size caps.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (row, col, val) in self.triplets() {
            dense[row][col] += val;
        }
        dense
    }

    #[cfg(test)]
    pub(crate) fn assert_internal_invariants(&self) {
        assert_eq!(self.col_ptr.len(), self.n + 1);
        assert_eq!(self.col_ptr[0], 0);
        assert_eq!(*self.col_ptr.last().unwrap(), self.vals.len());
        for c in 0..self.n {
            assert!(self.col_ptr[c] <= self.col_ptr[c + 1]);
            let lo = self.col_ptr[c];
            let hi = self.col_ptr[c + 1];
            for k in lo..hi {
                assert!(self.rows[k] < self.n);
                assert!(self.vals[k] > 0.0);
                if k > lo {
                    assert!(
                        self.rows[k - 1] < self.rows[k],
                        "rows not strictly increasing"
                    );
                }
            }
            let sum: f64 = self.vals[lo..hi].iter().sum();
            let cached = self.col_sums[c];
            assert!(
                (sum - cached).abs() <= 1e-12 * sum.abs().max(1.0),
                "col_sums cache drifted: {cached} vs {sum}"
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_entry_2x2() -> SparseMatrix {
        // p_21 = 0.5 in 1-based terms: row 1, col 0 in 0-based indexing
        SparseMatrix::from_triplets(2, &[(1, 0, 0.5)]).unwrap()
    }

    #[test]
    fn matvec_zero_matrix() {
        let m = SparseMatrix::zero(2);
        let y = m.matvec(&DenseVector::from_vec(vec![1.0, 1.0])).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn matvec_single_entry_scales_column() {
        let m = single_entry_2x2();
        let y = m.matvec(&DenseVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 0.5]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let m = single_entry_2x2();
        assert!(m.matvec(&DenseVector::zeros(3)).is_err());
    }

    #[test]
    fn duplicates_are_summed() {
        let m = SparseMatrix::from_triplets(3, &[(0, 1, 0.5), (0, 1, 0.25), (2, 1, 1.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        let col: Vec<_> = m.column(1).collect();
        assert_eq!(col, vec![(0, 0.75), (2, 1.0)]);
        assert_eq!(m.col_sum(1), 1.75);
        m.assert_internal_invariants();
    }

    #[test]
    fn rejects_nonpositive_and_out_of_range() {
        assert!(matches!(
            SparseMatrix::from_triplets(2, &[(0, 0, 0.0)]),
            Err(Error::InvalidMatrixValue { .. })
        ));
        assert!(matches!(
            SparseMatrix::from_triplets(2, &[(0, 0, -1.0)]),
            Err(Error::InvalidMatrixValue { .. })
        ));
        assert!(matches!(
            SparseMatrix::from_triplets(2, &[(2, 0, 1.0)]),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(matches!(
            SparseMatrix::from_triplets(2, &[(0, 5, 1.0)]),
            Err(Error::IndexOutOfRange { index: 5, dim: 2 })
        ));
    }

    #[test]
    fn sigma_decreasing_checks() {
        let mon = MonitorVector::ones(3);
        // zero matrix is trivially decreasing
        assert!(SparseMatrix::zero(3).is_sigma_decreasing(&mon).unwrap());
        // column-stochastic matrix with unit weights
        let stoch =
            SparseMatrix::from_triplets(3, &[(0, 0, 0.5), (1, 0, 0.5), (2, 1, 1.0), (0, 2, 1.0)])
                .unwrap();
        assert!(stoch.is_sigma_decreasing(&mon).unwrap());
        // a column summing to 1.5 violates the criterion for unit weights
        let bad = SparseMatrix::from_triplets(3, &[(0, 1, 1.0), (2, 1, 0.5), (1, 0, 0.3)]).unwrap();
        assert!(!bad.is_sigma_decreasing(&mon).unwrap());
    }

    #[test]
    fn column_stochastic_validation() {
        let stoch = SparseMatrix::from_triplets(2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(stoch.validate_column_stochastic(1e-9).is_ok());
        let sub = SparseMatrix::from_triplets(2, &[(0, 0, 0.5), (1, 1, 1.0)]).unwrap();
        let err = sub.validate_column_stochastic(1e-9).unwrap_err();
        assert!(matches!(err, Error::NotColumnStochastic { column: 0, .. }));
    }

    #[test]
    fn dense_copy_round_trips_triplets() {
        let m = SparseMatrix::from_triplets(3, &[(1, 0, 0.5), (2, 0, 0.5), (0, 2, 1.0)]).unwrap();
        let d = m.to_dense();
        assert_eq!(d[1][0], 0.5);
        assert_eq!(d[2][0], 0.5);
        assert_eq!(d[0][2], 1.0);
        assert_eq!(d[0][0], 0.0);
    }
}
