use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense real vector with binary64 entries.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    pub fn from_vec(data: Vec<f64>) -> Self {
        Self { data }
    }

    /// Vector with every entry set to `value`.
    pub fn uniform(n: usize, value: f64) -> Self {
        Self {
            data: vec![value; n],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }

    /// First index holding a negative entry, if any.
    pub fn first_negative(&self) -> Option<(usize, f64)> {
        self.data
            .iter()
            .enumerate()
            .find(|(_, &x)| x < 0.0)
            .map(|(i, &x)| (i, x))
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(data: Vec<f64>) -> Self {
        Self { data }
    }
}

impl FromIterator<f64> for DenseVector {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        Self {
            data: iter.into_iter().collect(),
        }
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Strictly positive weight vector defining the monitor functional
/// `sigma(x) = sum_i v_i * x_i`.
///
/// The weights are validated once at construction; all later uses may
/// assume positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct MonitorVector {
    weights: DenseVector,
}

impl MonitorVector {
    pub fn new(weights: DenseVector) -> Result<Self> {
        for (i, &v) in weights.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveMonitor { index: i, value: v });
            }
        }
        Ok(Self { weights })
    }

    /// All-ones monitor; the usual choice for (sub-)stochastic matrices.
    pub fn ones(n: usize) -> Self {
        Self {
            weights: DenseVector::uniform(n, 1.0),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &DenseVector {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Weighted sum `sum_i v_i * x_i`.
    pub fn sigma(&self, x: &DenseVector) -> Result<f64> {
        x.check_len(self.len())?;
        Ok(self.weights.iter().zip(x.iter()).map(|(v, x)| v * x).sum())
    }

    /// Weighted absolute sum `sum_i v_i * |x_i|`. Coincides with
    /// [`sigma`](Self::sigma) on nonnegative vectors.
    pub fn weighted_abs_sum(&self, x: &DenseVector) -> Result<f64> {
        x.check_len(self.len())?;
        Ok(self
            .weights
            .iter()
            .zip(x.iter())
            .map(|(v, x)| v * x.abs())
            .sum())
    }
}

/// Free-function form of the monitor functional.
pub fn sigma_v(mon: &MonitorVector, x: &DenseVector) -> Result<f64> {
    mon.sigma(x)
}
