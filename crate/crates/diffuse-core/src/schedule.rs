//! Node-selection strategies for the diffusion sequence.
//!
//! The priority-driven strategies (greedy on `|F_i|`, negative-only,
//! positive-only) sit on a max-heap with lazy invalidation: updates push new
//! entries without removing old ones, and `pop` discards entries whose
//! recorded key no longer matches the live fluid value (disagreement beyond
//! 1e-15 counts as stale). Ties always break toward the lowest node index so
//! runs are reproducible.
//!
//! Sweep strategies (cyclic, threshold) keep a cursor instead. The cyclic
//! strategy evaluates exhaustion at sweep boundaries only, which keeps its
//! per-step cost O(1).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::ops::ScheduleStep;
use crate::state::DiffusionState;

/// Tolerance for deciding that a heap entry's recorded key disagrees with
/// the live fluid value.
const STALE_TOL: f64 = 1e-15;

/// Which strategy produces the diffusion sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum SchedulerKind {
    /// Round-robin over all nodes.
    Cyclic,
    /// Node with the largest `|F_i|`.
    GreedyAbs,
    /// Most negative fluid among nodes with `F_i < -theta`.
    NegativeOnly,
    /// Mirror of `NegativeOnly` for positive fluid. Experimental: convergence
    /// of positive-only diffusion is not guaranteed.
    PositiveOnly,
    /// Index-order sweep that diffuses every node with `|F_i| > theta`.
    Threshold,
    /// Seeded uniform choice among eligible nodes.
    Random { seed: u64 },
    /// Replays an explicit step list.
    Scripted(Vec<ScheduleStep>),
}

impl SchedulerKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchedulerKind::Cyclic => "cyclic",
            SchedulerKind::GreedyAbs => "greedy",
            SchedulerKind::NegativeOnly => "negative",
            SchedulerKind::PositiveOnly => "positive",
            SchedulerKind::Threshold => "threshold",
            SchedulerKind::Random { .. } => "random",
            SchedulerKind::Scripted(_) => "scripted",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a node's fluid value maps to a priority key. A node is eligible when
/// its key exceeds the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyRule {
    /// `|F_i|`
    AbsMagnitude,
    /// `-F_i` (large for very negative fluid)
    NegativeMagnitude,
    /// `F_i`
    PositiveMagnitude,
}

impl KeyRule {
    #[inline]
    fn key(self, fluid: f64) -> f64 {
        match self {
            KeyRule::AbsMagnitude => fluid.abs(),
            KeyRule::NegativeMagnitude => -fluid,
            KeyRule::PositiveMagnitude => fluid,
        }
    }
}

#[derive(Debug)]
struct HeapEntry {
    key: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger key first; equal keys pop the lowest node index first
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Max-priority structure over node indices keyed by a [`KeyRule`] of the
/// live fluid, with push-and-lazy-delete updates.
#[derive(Debug)]
pub struct EligibilityIndex {
    heap: BinaryHeap<HeapEntry>,
    rule: KeyRule,
    theta: f64,
}

impl EligibilityIndex {
    /// Builds the index from the current fluid; every node whose key exceeds
    /// `theta` is pushed.
    pub fn build(rule: KeyRule, theta: f64, state: &DiffusionState) -> Self {
        let mut heap = BinaryHeap::with_capacity(state.dim());
        for (node, &f) in state.fluid().iter().enumerate() {
            let key = rule.key(f);
            if key > theta {
                heap.push(HeapEntry { key, node });
            }
        }
        Self { heap, rule, theta }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Refreshes the keys of nodes touched by the last diffusion step.
    pub fn notify_update<I>(&mut self, touched: I, state: &DiffusionState)
    where
        I: IntoIterator<Item = usize>,
    {
        for node in touched {
            let key = self.rule.key(state.fluid()[node]);
            if key > self.theta {
                self.heap.push(HeapEntry { key, node });
            }
        }
        // Lazy entries accumulate one per touch; rebuild when the backlog
        // dominates, so memory stays proportional to the dimension.
        if self.heap.len() > 8 * state.dim().max(16) {
            self.rebuild(state);
        }
    }

    /// Pops the best live node, discarding stale and no-longer-eligible
    /// entries, or returns `None` when nothing is eligible.
    ///
    /// Entries whose key drifted from the live value by more than the
    /// staleness tolerance are dropped (a fresher entry exists). Entries
    /// within tolerance but not exactly live are re-pushed with the live
    /// key, so the returned node always carries its exact current key and
    /// the selection order matches a full scan.
    pub fn pop_eligible(&mut self, state: &DiffusionState) -> Option<usize> {
        while let Some(entry) = self.heap.pop() {
            let live = self.rule.key(state.fluid()[entry.node]);
            if (entry.key - live).abs() > STALE_TOL {
                continue; // stale
            }
            if entry.key != live {
                self.heap.push(HeapEntry {
                    key: live,
                    node: entry.node,
                });
                continue; // refresh on pop
            }
            if live > self.theta {
                return Some(entry.node);
            }
        }
        None
    }

    fn rebuild(&mut self, state: &DiffusionState) {
        self.heap.clear();
        for (node, &f) in state.fluid().iter().enumerate() {
            let key = self.rule.key(f);
            if key > self.theta {
                self.heap.push(HeapEntry { key, node });
            }
        }
    }

    #[cfg(test)]
    fn len(&self) -> usize {
        self.heap.len()
    }
}

enum Strategy {
    Cyclic {
        cursor: usize,
    },
    Indexed(EligibilityIndex),
    Threshold {
        cursor: usize,
    },
    Random {
        rng: Box<ChaCha8Rng>,
        scratch: Vec<usize>,
    },
    Scripted {
        steps: Vec<ScheduleStep>,
        pos: usize,
    },
}

/// A scheduler bound to one diffusion run.
pub struct Scheduler {
    kind_name: &'static str,
    theta: f64,
    strategy: Strategy,
}

impl Scheduler {
    /// `theta >= 0` is the eligibility threshold; nodes whose key is at or
    /// below it are never selected (scripted replays ignore it).
    pub fn new(kind: SchedulerKind, state: &DiffusionState, theta: f64) -> Result<Self> {
        if !(theta >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "eligibility threshold must be >= 0, got {theta}"
            )));
        }
        let kind_name = kind.name();
        let strategy = match kind {
            SchedulerKind::Cyclic => Strategy::Cyclic { cursor: 0 },
            SchedulerKind::GreedyAbs => {
                Strategy::Indexed(EligibilityIndex::build(KeyRule::AbsMagnitude, theta, state))
            }
            SchedulerKind::NegativeOnly => Strategy::Indexed(EligibilityIndex::build(
                KeyRule::NegativeMagnitude,
                theta,
                state,
            )),
            SchedulerKind::PositiveOnly => Strategy::Indexed(EligibilityIndex::build(
                KeyRule::PositiveMagnitude,
                theta,
                state,
            )),
            SchedulerKind::Threshold => Strategy::Threshold { cursor: 0 },
            SchedulerKind::Random { seed } => Strategy::Random {
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                scratch: Vec::new(),
            },
            SchedulerKind::Scripted(steps) => {
                for (k, s) in steps.iter().enumerate() {
                    if s.node() >= state.dim() {
                        return Err(Error::InvalidConfig(format!(
                            "scripted step {k} names node {} but dimension is {}",
                            s.node(),
                            state.dim()
                        )));
                    }
                }
                Strategy::Scripted { steps, pos: 0 }
            }
        };
        Ok(Self {
            kind_name,
            theta,
            strategy,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind_name
    }

    /// Next `(node, alpha)` decision, or `None` when no node is eligible
    /// (for scripted schedules: when the script is exhausted).
    pub fn next_step(&mut self, state: &DiffusionState) -> Option<ScheduleStep> {
        let n = state.dim();
        if n == 0 {
            return None;
        }
        match &mut self.strategy {
            Strategy::Cyclic { cursor } => {
                if *cursor == 0 {
                    let any_eligible = state.fluid().iter().any(|f| f.abs() > self.theta);
                    if !any_eligible {
                        return None;
                    }
                }
                let node = *cursor;
                *cursor = (*cursor + 1) % n;
                Some(ScheduleStep::full(node))
            }
            Strategy::Indexed(index) => index.pop_eligible(state).map(ScheduleStep::full),
            Strategy::Threshold { cursor } => {
                for _ in 0..n {
                    let node = *cursor;
                    *cursor = (*cursor + 1) % n;
                    if state.fluid()[node].abs() > self.theta {
                        return Some(ScheduleStep::full(node));
                    }
                }
                None
            }
            Strategy::Random { rng, scratch } => {
                scratch.clear();
                scratch.extend(
                    state
                        .fluid()
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| f.abs() > self.theta)
                        .map(|(i, _)| i),
                );
                if scratch.is_empty() {
                    return None;
                }
                let pick = rng.random_range(0..scratch.len());
                Some(ScheduleStep::full(scratch[pick]))
            }
            Strategy::Scripted { steps, pos } => {
                let step = steps.get(*pos).copied();
                if step.is_some() {
                    *pos += 1;
                }
                step
            }
        }
    }

    /// Reports the nodes touched by the last applied step (the diffusing
    /// node plus the rows of its column) so priority keys can be refreshed.
    pub fn notify_update(&mut self, m: &SparseMatrix, node: usize, state: &DiffusionState) {
        if let Strategy::Indexed(index) = &mut self.strategy {
            index.notify_update(
                std::iter::once(node).chain(m.column(node).map(|(row, _)| row)),
                state,
            );
        }
    }
}

/// Loads a scripted schedule: one `node alpha` pair per line, 0-based node,
/// decimal alpha in `[0, 1]`. Blank lines and `#` comments are allowed.
pub fn read_script(path: &Path) -> Result<Vec<ScheduleStep>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let display = path.display().to_string();
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let node: usize = parts
            .next()
            .ok_or_else(|| Error::parse(&display, line_no, "missing node index"))?
            .parse()
            .map_err(|_| Error::parse(&display, line_no, "node index is not an integer"))?;
        let alpha: f64 = parts
            .next()
            .ok_or_else(|| Error::parse(&display, line_no, "missing alpha"))?
            .parse()
            .map_err(|_| Error::parse(&display, line_no, "alpha is not a number"))?;
        if parts.next().is_some() {
            return Err(Error::parse(
                &display,
                line_no,
                "expected exactly two fields",
            ));
        }
        let step = ScheduleStep::new(node, alpha)
            .map_err(|e| Error::parse(&display, line_no, e.to_string()))?;
        steps.push(step);
    }
    Ok(steps)
}
