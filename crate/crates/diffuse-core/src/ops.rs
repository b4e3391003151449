//! The elementary diffusion step and the conservation checker.
//!
//! A step at node `i` with fraction `alpha` moves `t = alpha * F[i]` out of
//! the residual fluid, credits it to the history `H[i]`, and redistributes
//! `p_ji * t` along column `i` of the matrix. With `alpha = 1` this is the
//! plain per-node diffusion; fractional `alpha` diffuses part of the fluid
//! and leaves the rest in place.
//!
//! Every state reachable from `F = B`, `H = 0` through these steps satisfies
//! `H + F = P*H + B` up to float rounding; [`check_invariant`] measures the
//! violation.

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::state::{residual_linf, DiffusionState};
use crate::vector::DenseVector;

/// One scheduling decision: which node diffuses and which fraction of its
/// fluid moves. The fraction is restricted to `[0, 1]`; over-relaxation is
/// not supported.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleStep {
    node: usize,
    alpha: f64,
}

impl ScheduleStep {
    pub fn new(node: usize, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { node, alpha })
    }

    /// Full diffusion (`alpha = 1`) at `node`.
    pub fn full(node: usize) -> Self {
        Self { node, alpha: 1.0 }
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Applies one diffusion step to the state and returns the diffused amount.
///
/// Out-of-range nodes are rejected; there is no clamping. Diffusing a node
/// holding zero fluid is a permitted no-op (the step counter still advances).
pub fn diffuse_step(
    m: &SparseMatrix,
    state: &mut DiffusionState,
    step: ScheduleStep,
) -> Result<f64> {
    if state.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: state.dim(),
        });
    }
    if step.node >= m.dim() {
        return Err(Error::IndexOutOfRange {
            index: step.node,
            dim: m.dim(),
        });
    }
    if !(0.0..=1.0).contains(&step.alpha) {
        return Err(Error::InvalidAlpha(step.alpha));
    }
    Ok(state.apply(m, step.node, step.alpha))
}

/// True iff the conservation residual is at most
/// `tol * (1 + max(|B|_inf, |H|_inf))`.
pub fn check_invariant(
    m: &SparseMatrix,
    state: &DiffusionState,
    b: &DenseVector,
    tol: f64,
) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be strictly positive, got {tol}"
        )));
    }
    let r = residual_linf(m, state, b)?;
    let scale = 1.0 + b.linf_norm().max(state.history().linf_norm());
    Ok(r <= tol * scale)
}

/// `(1 - alpha) * x + alpha * P * x` for `alpha >= 0`.
pub fn apply_alpha_blend(m: &SparseMatrix, x: &DenseVector, alpha: f64) -> Result<DenseVector> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "blend fraction must be finite and >= 0, got {alpha}"
        )));
    }
    let px = m.matvec(x)?;
    Ok(x.iter()
        .zip(px.iter())
        .map(|(xi, pxi)| (1.0 - alpha) * xi + alpha * pxi)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> (SparseMatrix, DenseVector) {
        let m = SparseMatrix::from_triplets(2, &[(1, 0, 0.5)]).unwrap();
        let b = DenseVector::from_vec(vec![1.0, 0.0]);
        (m, b)
    }

    #[test]
    fn alpha_zero_is_identity_except_step_counter() {
        let (m, b) = two_node();
        let mut state = DiffusionState::new(b.clone());
        let t = diffuse_step(&m, &mut state, ScheduleStep::new(0, 0.0).unwrap()).unwrap();
        assert_eq!(t, 0.0);
        assert_eq!(state.fluid(), &b);
        assert_eq!(state.history().as_slice(), &[0.0, 0.0]);
        assert_eq!(state.step(), 1);
    }

    #[test]
    fn zero_matrix_absorbs_into_history() {
        let m = SparseMatrix::zero(2);
        let mut state = DiffusionState::new(DenseVector::from_vec(vec![1.0, 0.0]));
        diffuse_step(&m, &mut state, ScheduleStep::full(0)).unwrap();
        assert_eq!(state.fluid().as_slice(), &[0.0, 0.0]);
        assert_eq!(state.history().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn single_step_matches_dense_arithmetic() {
        let (m, b) = two_node();
        let mut state = DiffusionState::new(b.clone());
        diffuse_step(&m, &mut state, ScheduleStep::full(0)).unwrap();
        assert_eq!(state.fluid().as_slice(), &[0.0, 0.5]);
        assert_eq!(state.history().as_slice(), &[1.0, 0.0]);
        // H + F = P*H + B = (1, 0.5)
        let ph = m.matvec(state.history()).unwrap();
        for i in 0..2 {
            let lhs = state.history()[i] + state.fluid()[i];
            let rhs = ph[i] + b[i];
            assert_eq!(lhs, rhs);
        }
        assert_eq!(residual_linf(&m, &state, &b).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_node_and_alpha() {
        let (m, b) = two_node();
        let mut state = DiffusionState::new(b);
        assert!(matches!(
            diffuse_step(&m, &mut state, ScheduleStep::full(2)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            ScheduleStep::new(0, 1.5),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            ScheduleStep::new(0, -0.1),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            ScheduleStep::new(0, f64::NAN),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn self_loop_returns_fluid_to_node() {
        let m = SparseMatrix::from_triplets(1, &[(0, 0, 0.25)]).unwrap();
        let mut state = DiffusionState::new(DenseVector::from_vec(vec![1.0]));
        let t = diffuse_step(&m, &mut state, ScheduleStep::full(0)).unwrap();
        assert_eq!(t, 1.0);
        assert_eq!(state.fluid()[0], 0.25);
        assert_eq!(state.history()[0], 1.0);
    }

    #[test]
    fn check_invariant_detects_perturbation() {
        let (m, b) = two_node();
        let mut state = DiffusionState::new(b.clone());
        for node in [0, 1, 0, 1] {
            diffuse_step(&m, &mut state, ScheduleStep::full(node)).unwrap();
        }
        assert!(check_invariant(&m, &state, &b, 1e-12).unwrap());
        // perturb F by 1e-3 at one entry
        let mut fluid = state.fluid().clone();
        fluid[0] += 1e-3;
        let bad = DiffusionState::from_parts(fluid, state.history().clone(), state.step()).unwrap();
        assert!(!check_invariant(&m, &bad, &b, 1e-6).unwrap());
    }

    #[test]
    fn blend_endpoints() {
        let (m, _) = two_node();
        let x = DenseVector::from_vec(vec![1.0, 0.0]);
        assert_eq!(apply_alpha_blend(&m, &x, 0.0).unwrap(), x);
        assert_eq!(
            apply_alpha_blend(&m, &x, 1.0).unwrap(),
            m.matvec(&x).unwrap()
        );
        let half = apply_alpha_blend(&m, &x, 0.5).unwrap();
        assert_eq!(half.as_slice(), &[0.5, 0.25]);
    }

    #[test]
    fn invariant_survives_ten_thousand_random_steps() {
        use rand::Rng;
        use rand::SeedableRng;
        let (m, _) =
            crate::io::make_fixture(&crate::io::Fixture::RandomSubstochastic { n: 50, seed: 13 })
                .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        let b: DenseVector = (0..50).map(|_| rng.random_range(0.0..1.0)).collect();
        let mut state = DiffusionState::new(b.clone());
        for _ in 0..10_000 {
            let node = rng.random_range(0..50);
            let alpha = rng.random_range(0.0..=1.0);
            diffuse_step(&m, &mut state, ScheduleStep::new(node, alpha).unwrap()).unwrap();
        }
        assert!(check_invariant(&m, &state, &b, 1e-10).unwrap());
    }
}
