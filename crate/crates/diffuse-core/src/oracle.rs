//! Dense reference routines used to cross-check the sparse solvers.
//!
//! These are deliberately independent of the diffusion machinery: the linear
//! oracle runs Gaussian elimination with partial pivoting on a dense copy of
//! `I - P`, and the eigen oracle runs plain dense power iteration. Both are
//! capped at `n <= 512` to keep accidental dense work out of large runs.

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::vector::DenseVector;

/// Size cap for all dense routines.
pub const DENSE_CAP: usize = 512;

fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        return Err(Error::DenseCapExceeded { n, cap: DENSE_CAP });
    }
    Ok(())
}

/// Dense `y = A * x` for a row-major matrix.
pub fn dense_matvec(a: &[Vec<f64>], x: &DenseVector) -> DenseVector {
    a.iter()
        .map(|row| row.iter().zip(x.iter()).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

/// `P^k * x0` by repeated dense multiplication.
pub fn dense_power_apply(m: &SparseMatrix, x0: &DenseVector, k: usize) -> Result<DenseVector> {
    check_cap(m.dim())?;
    x0.check_len(m.dim())?;
    let dense = m.to_dense();
    let mut x = x0.clone();
    for _ in 0..k {
        x = dense_matvec(&dense, &x);
    }
    Ok(x)
}

/// Solves `(I - P) * X = B` by Gaussian elimination with partial pivoting.
pub fn dense_oracle_solve(m: &SparseMatrix, b: &DenseVector) -> Result<DenseVector> {
    let n = m.dim();
    check_cap(n)?;
    b.check_len(n)?;

    // Build I - P row-major, augmented with b.
    let mut a = vec![vec![0.0f64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (row, col, val) in m.triplets() {
        a[row][col] -= val;
    }
    let mut rhs: Vec<f64> = b.iter().copied().collect();

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .expect("nonempty range");
        if a[pivot_row][k].abs() < 1e-300 {
            return Err(Error::SingularSystem);
        }
        a.swap(k, pivot_row);
        rhs.swap(k, pivot_row);
        for i in (k + 1)..n {
            let factor = a[i][k] / a[k][k];
            if factor == 0.0 {
                continue;
            }
            let (pivot_rows, rest) = a.split_at_mut(i);
            let pivot = &pivot_rows[k];
            for (aij, akj) in rest[0][k..].iter_mut().zip(&pivot[k..]) {
                *aij -= factor * akj;
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Ok(DenseVector::from_vec(x))
}

/// Dominant right eigenvector of a column-stochastic matrix by dense power
/// iteration with L1 renormalization, run to a successive-iterate distance
/// of 1e-12. Fails on periodic or reducible inputs that never settle.
pub fn dense_oracle_eigen(m: &SparseMatrix) -> Result<DenseVector> {
    let n = m.dim();
    check_cap(n)?;
    m.validate_column_stochastic(1e-9)?;
    const MAX_ITERS: u64 = 1_000_000;
    const TOL: f64 = 1e-12;

    let dense = m.to_dense();
    // A deliberately non-uniform start so that periodic inputs keep moving
    // instead of landing on the invariant uniform vector.
    let mut x: DenseVector = (0..n).map(|i| (i + 1) as f64).collect();
    let scale = x.l1_norm();
    for v in x.as_mut_slice() {
        *v /= scale;
    }
    for _ in 0..MAX_ITERS {
        let mut next = dense_matvec(&dense, &x);
        let norm = next.l1_norm();
        if norm == 0.0 {
            return Err(Error::SingularSystem);
        }
        for v in next.as_mut_slice() {
            *v /= norm;
        }
        let dist: f64 = next.iter().zip(x.iter()).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if dist <= TOL {
            return Ok(x);
        }
    }
    Err(Error::PowerIterationStalled {
        max_iters: MAX_ITERS,
    })
}
