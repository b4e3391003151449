//! The joint state of a diffusion run: residual fluid, accumulated history,
//! step counter, and O(1) monitored aggregates.
//!
//! The aggregates (`fluid_l1`, and the monitor value when a monitor is
//! attached) are updated incrementally by each step and recomputed from
//! scratch every `n` steps so that float drift stays bounded.

use std::sync::Arc;

use crate::error::Result;
use crate::matrix::SparseMatrix;
use crate::vector::{DenseVector, MonitorVector};

#[derive(Clone, Debug)]
pub struct DiffusionState {
    fluid: DenseVector,
    history: DenseVector,
    step: u64,
    fluid_l1: f64,
    fluid_sigma: Option<f64>,
    monitor: Option<Arc<MonitorVector>>,
    steps_since_refresh: usize,
}

impl DiffusionState {
    /// Fresh state: fluid = `f0`, history = 0, step = 0.
    pub fn new(f0: DenseVector) -> Self {
        let n = f0.len();
        let fluid_l1 = f0.l1_norm();
        Self {
            fluid: f0,
            history: DenseVector::zeros(n),
            step: 0,
            fluid_l1,
            fluid_sigma: None,
            monitor: None,
            steps_since_refresh: 0,
        }
    }

    /// Rebuilds a state from checkpointed vectors; caches are recomputed.
    pub fn from_parts(fluid: DenseVector, history: DenseVector, step: u64) -> Result<Self> {
        history.check_len(fluid.len())?;
        let mut s = Self::new(fluid);
        s.history = history;
        s.step = step;
        Ok(s)
    }

    /// Attaches a monitor so that `fluid_sigma` is maintained per step.
    pub fn with_monitor(mut self, monitor: Arc<MonitorVector>) -> Result<Self> {
        self.fluid.check_len(monitor.len())?;
        self.fluid_sigma = Some(monitor.sigma(&self.fluid)?);
        self.monitor = Some(monitor);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.fluid.len()
    }

    pub fn fluid(&self) -> &DenseVector {
        &self.fluid
    }

    pub fn history(&self) -> &DenseVector {
        &self.history
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Cached `sum_i |F_i|`; within 1e-9 relative of the exact value.
    pub fn fluid_l1(&self) -> f64 {
        self.fluid_l1
    }

    /// Cached monitor value `sigma(F)`, if a monitor is attached.
    pub fn fluid_sigma(&self) -> Option<f64> {
        self.fluid_sigma
    }

    pub fn monitor(&self) -> Option<&MonitorVector> {
        self.monitor.as_deref()
    }

    /// `max_i |F_i|`, computed on demand.
    pub fn fluid_linf(&self) -> f64 {
        self.fluid.linf_norm()
    }

    /// `sum_i v_i * |F_i|` for the attached monitor, computed on demand.
    pub fn weighted_fluid_l1(&self) -> Option<f64> {
        self.monitor.as_ref().map(|m| {
            m.weighted_abs_sum(&self.fluid)
                .expect("dims checked at attach")
        })
    }

    /// Applies one diffusion of fraction `alpha` at `node`. Callers validate
    /// `node` and `alpha`; see [`crate::ops::diffuse_step`].
    ///
    /// Returns the diffused amount `t = alpha * F[node]`.
    pub(crate) fn apply(&mut self, m: &SparseMatrix, node: usize, alpha: f64) -> f64 {
        let t = alpha * self.fluid[node];
        // Track |new| - |old| per write; the per-entry terms telescope, so
        // self-loop double writes are handled correctly.
        let mut l1_delta = 0.0;
        let mut sigma_delta = 0.0;
        let before = self.fluid[node];
        let after = before - t;
        self.fluid[node] = after;
        l1_delta += after.abs() - before.abs();
        for (row, val) in m.column(node) {
            let add = val * t;
            let before = self.fluid[row];
            let after = before + add;
            self.fluid[row] = after;
            l1_delta += after.abs() - before.abs();
            if let Some(mon) = &self.monitor {
                sigma_delta += mon.weight(row) * add;
            }
        }
        self.history[node] += t;
        self.fluid_l1 += l1_delta;
        if let Some(mon) = &self.monitor {
            let sigma = self.fluid_sigma.get_or_insert(0.0);
            *sigma += sigma_delta - mon.weight(node) * t;
        }
        self.step += 1;
        self.steps_since_refresh += 1;
        if self.steps_since_refresh >= self.dim().max(1) {
            self.refresh_caches();
        }
        t
    }

    /// Recomputes all cached aggregates from the vectors.
    pub fn refresh_caches(&mut self) {
        self.fluid_l1 = self.fluid.l1_norm();
        if let Some(mon) = &self.monitor {
            self.fluid_sigma = Some(mon.sigma(&self.fluid).expect("dims checked at attach"));
        }
        self.steps_since_refresh = 0;
    }
}

/// `max_i |(H + F - P*H - B)_i|`: how far the state is from the conservation
/// identity `H + F = P*H + B`.
pub fn residual_linf(m: &SparseMatrix, state: &DiffusionState, b: &DenseVector) -> Result<f64> {
    let n = m.dim();
    state.fluid().check_len(n)?;
    b.check_len(n)?;
    let ph = m.matvec(state.history())?;
    let mut worst = 0.0f64;
    for i in 0..n {
        let r = state.history()[i] + state.fluid()[i] - ph[i] - b[i];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_state_has_zero_residual() {
        let m = SparseMatrix::from_triplets(2, &[(1, 0, 0.5)]).unwrap();
        let b = DenseVector::from_vec(vec![1.0, 0.0]);
        let state = DiffusionState::new(b.clone());
        assert_eq!(residual_linf(&m, &state, &b).unwrap(), 0.0);
    }

    #[test]
    fn corrupted_history_is_detected() {
        let m = SparseMatrix::from_triplets(2, &[(1, 0, 0.5)]).unwrap();
        let b = DenseVector::from_vec(vec![1.0, 0.0]);
        let mut history = DenseVector::zeros(2);
        history[0] += 1.0;
        let state = DiffusionState::from_parts(b.clone(), history, 1).unwrap();
        let r = residual_linf(&m, &state, &b).unwrap();
        assert!(
            r > 0.4,
            "corruption must produce a clearly nonzero residual, got {r}"
        );
    }

    #[test]
    fn caches_track_fluid() {
        let m = SparseMatrix::from_triplets(2, &[(1, 0, 0.5)]).unwrap();
        let b = DenseVector::from_vec(vec![1.0, 0.0]);
        let mut state = DiffusionState::new(b)
            .with_monitor(Arc::new(MonitorVector::ones(2)))
            .unwrap();
        let t = state.apply(&m, 0, 1.0);
        assert_eq!(t, 1.0);
        assert_eq!(state.fluid().as_slice(), &[0.0, 0.5]);
        assert_eq!(state.history().as_slice(), &[1.0, 0.0]);
        assert_eq!(state.step(), 1);
        assert!((state.fluid_l1() - 0.5).abs() < 1e-15);
        assert!((state.fluid_sigma().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn from_parts_rejects_mismatched_lengths() {
        let res = DiffusionState::from_parts(DenseVector::zeros(2), DenseVector::zeros(3), 0);
        assert!(res.is_err());
    }

    #[test]
    fn cached_l1_stays_within_drift_bound() {
        use rand::Rng;
        use rand::SeedableRng;
        let n = 40;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let triplets: Vec<_> = (0..n)
            .map(|c| ((c * 7 + 3) % n, c, rng.random_range(0.05..0.9)))
            .collect();
        let m = SparseMatrix::from_triplets(n, &triplets).unwrap();
        let b: DenseVector = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let mut state = DiffusionState::new(b)
            .with_monitor(Arc::new(MonitorVector::ones(n)))
            .unwrap();
        for _ in 0..50_000 {
            let node = rng.random_range(0..n);
            let alpha: f64 = rng.random_range(0.0..=1.0);
            state.apply(&m, node, alpha);
            let exact = state.fluid().l1_norm();
            let cached = state.fluid_l1();
            assert!(
                (cached - exact).abs() <= 1e-9 * exact.max(1e-30),
                "cache drifted: {cached} vs {exact}"
            );
        }
    }
}
