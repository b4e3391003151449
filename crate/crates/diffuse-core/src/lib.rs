//! Sparse fixed-point solving by per-node diffusion.
//!
//! The fixed point `X = P*X + B` over a nonnegative matrix `P` can be
//! reached without ever forming a matrix-vector product. The library keeps
//! two state vectors instead:
//!
//! * `F`, the residual fluid: the part of the right-hand side that has not
//!   been propagated yet, and
//! * `H`, the history: everything each node has already pushed out. `H`
//!   converges to the solution.
//!
//! One step picks a node `i` and a fraction `alpha` in `[0, 1]`, moves
//! `t = alpha * F[i]` into `H[i]`, and deposits `p_ji * t` on each stored
//! entry of column `i`. Every reachable state satisfies the conservation
//! identity `H + F = P*H + B`, which makes the remaining fluid an exact
//! backward residual and gives schedulers a live priority signal. Strategies
//! range from plain round-robin to greedy residual chasing; see
//! [`schedule::SchedulerKind`].
//!
//! Two solver entry points sit on top of the same engine:
//!
//! * [`solver::solve_linear`] for `X = P*X + B` with nonnegative `B`, and
//! * [`solver::solve_eigen`] for the dominant right eigenvector of a
//!   column-stochastic matrix. The eigen mode seeds the signed fluid
//!   `P*e - e` and, restricted to negative-fluid diffusion, drives the
//!   history monotonically to `X - e`. Mixing signs can cycle forever; the
//!   bundled snake fixture demonstrates it
//!   ([`solver::snake_oscillation_demo`]).
//!
//! The weighted sum `sigma(X) = sum_i v_i * x_i` over a strictly positive
//! monitor vector never increases under diffusion when no column's weighted
//! sum exceeds its node weight, so it doubles as a cheap convergence
//! monitor; traces record it next to the fluid norms.
//!
//! Everything is deterministic: a fixed matrix, right-hand side, and
//! configuration reproduce traces bit for bit.

// `!(x > 0.0)` is the NaN-rejecting form of the positivity checks here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod matrix;
pub mod ops;
pub mod oracle;
pub mod schedule;
pub mod solver;
pub mod state;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::SparseMatrix;
pub use ops::{apply_alpha_blend, check_invariant, diffuse_step, ScheduleStep};
pub use schedule::{EligibilityIndex, Scheduler, SchedulerKind};
pub use solver::{solve_eigen, solve_linear, FluidNorm, SolveConfig, SolveReport};
pub use state::{residual_linf, DiffusionState};
pub use vector::{sigma_v, DenseVector, MonitorVector};
