//! Finite-prefix certification of the pairwise properties the constructions
//! are built for: divergence of positionwise differences, infinitely
//! repeated collisions, and complete difference with respect to a graph.
//!
//! None of these properties is decidable from a prefix, so the verifiers
//! report honest finite evidence: first-passage times per threshold,
//! explicit collision positions, and first counterexamples.

use serde::Serialize;
use thiserror::Error;

use crate::graphs::GraphSpec;
use crate::streams::{Construction, HorizonCap, StreamError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("thresholds must be nonempty, positive and strictly ascending")]
    BadThresholds,
    #[error("horizon {horizon} is below the largest threshold {threshold}")]
    HorizonBelowThreshold { horizon: u64, threshold: u64 },
    #[error("horizon must be >= 1")]
    EmptyHorizon,
    #[error("value {value} at position {position} is outside the graph's vertex range 1..={limit}")]
    VertexOutOfRange {
        position: u64,
        value: u64,
        limit: u64,
    },
    #[error("edge-law pair requires 1 <= i < k, got i = {i}, k = {k}")]
    BadEdgeLawPair { i: u64, k: u64 },
}

/// Positionwise absolute differences of two streams over a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceSequence {
    pub pair: (Construction, Construction),
    pub horizon: u64,
    /// `diffs[t - 1] = |c1(t) - c2(t)|`.
    pub diffs: Vec<u64>,
}

/// Per-threshold first-passage evidence that the difference sequence grows
/// without bound within the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceCertificate {
    pub horizon: u64,
    pub entries: Vec<ThresholdEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdEntry {
    pub threshold: u64,
    pub passage: FirstPassage,
}

/// Smallest `T` such that every difference from `T` through the horizon is
/// at least the threshold. `Failed` means even the final position falls
/// short; `weak` flags a passage inside the last 10% of the horizon, where
/// the surviving tail is too short to mean much.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FirstPassage {
    Passed { t: u64, weak: bool },
    Failed,
}

impl DivergenceCertificate {
    /// True when no threshold FAILED.
    pub fn is_valid(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.passage, FirstPassage::Passed { .. }))
    }

    pub fn has_weak(&self) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e.passage, FirstPassage::Passed { weak: true, .. }))
    }

    pub fn first_failed_threshold(&self) -> Option<u64> {
        self.entries
            .iter()
            .find(|e| matches!(e.passage, FirstPassage::Failed))
            .map(|e| e.threshold)
    }
}

/// Positions where two streams land on adjacent values of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    pub graph: GraphSpec,
    pub horizon: u64,
    pub positions: Vec<u64>,
}

/// Outcome of an exhaustive positionwise check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    FailAt { position: u64 },
}

impl CheckOutcome {
    pub fn passed(self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn fail_position(self) -> Option<u64> {
        match self {
            CheckOutcome::Pass => None,
            CheckOutcome::FailAt { position } => Some(position),
        }
    }
}

/// `|c1(t) - c2(t)|` for `t = 1..=n`.
pub fn difference_sequence(
    c1: &Construction,
    c2: &Construction,
    n: u64,
    cap: HorizonCap,
) -> Result<DifferenceSequence, VerifyError> {
    if n < 1 {
        return Err(VerifyError::EmptyHorizon);
    }
    cap.check_position(n).map_err(VerifyError::from)?;
    let mut diffs = Vec::with_capacity(n as usize);
    for t in 1..=n {
        let a = c1.value_at_checked(t, cap)?;
        let b = c2.value_at_checked(t, cap)?;
        diffs.push(a.abs_diff(b));
    }
    Ok(DifferenceSequence {
        pair: (c1.clone(), c2.clone()),
        horizon: n,
        diffs,
    })
}

/// Builds a per-threshold first-passage certificate by scanning the
/// difference sequence backward from the horizon.
///
/// For each threshold `M` the scan finds the last position with difference
/// below `M`; the passage time is one past it. The backward direction
/// matters because difference sequences dip locally: a forward
/// first-crossing would overstate the evidence.
pub fn divergence_certificate(
    c1: &Construction,
    c2: &Construction,
    horizon: u64,
    thresholds: &[u64],
    cap: HorizonCap,
) -> Result<DivergenceCertificate, VerifyError> {
    if horizon < 1 {
        return Err(VerifyError::EmptyHorizon);
    }
    cap.check_position(horizon).map_err(VerifyError::from)?;
    if thresholds.is_empty()
        || thresholds[0] == 0
        || thresholds.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(VerifyError::BadThresholds);
    }
    let max_threshold = *thresholds.last().expect("nonempty");
    if horizon < max_threshold {
        return Err(VerifyError::HorizonBelowThreshold {
            horizon,
            threshold: max_threshold,
        });
    }

    // last_below[idx] = largest t with diff(t) < thresholds[idx], if any.
    let mut last_below: Vec<Option<u64>> = vec![None; thresholds.len()];
    let mut unresolved = thresholds.len();
    for t in (1..=horizon).rev() {
        let a = c1.value_at_checked(t, cap)?;
        let b = c2.value_at_checked(t, cap)?;
        let diff = a.abs_diff(b);
        // Thresholds ascend, so diff < M for a suffix of the list.
        for (idx, &m) in thresholds.iter().enumerate().rev() {
            if diff >= m {
                break;
            }
            if last_below[idx].is_none() {
                last_below[idx] = Some(t);
                unresolved -= 1;
            }
        }
        if unresolved == 0 {
            break;
        }
    }

    let weak_bound = horizon - horizon / 10;
    let entries = thresholds
        .iter()
        .zip(&last_below)
        .map(|(&threshold, &last)| {
            let passage = match last {
                Some(t) if t == horizon => FirstPassage::Failed,
                Some(t) => FirstPassage::Passed {
                    t: t + 1,
                    weak: t + 1 > weak_bound,
                },
                None => FirstPassage::Passed { t: 1, weak: false },
            };
            ThresholdEntry { threshold, passage }
        })
        .collect();
    Ok(DivergenceCertificate { horizon, entries })
}

/// Every position `t <= n` where `c1(t)` and `c2(t)` are adjacent in `graph`.
pub fn collision_scan(
    c1: &Construction,
    c2: &Construction,
    graph: &GraphSpec,
    n: u64,
    cap: HorizonCap,
) -> Result<CollisionReport, VerifyError> {
    if n < 1 {
        return Err(VerifyError::EmptyHorizon);
    }
    cap.check_position(n).map_err(VerifyError::from)?;
    let limit = graph.vertex_limit();
    let mut positions = Vec::new();
    for t in 1..=n {
        let a = c1.value_at_checked(t, cap)?;
        let b = c2.value_at_checked(t, cap)?;
        check_vertex_range(limit, t, a)?;
        check_vertex_range(limit, t, b)?;
        if graph.adjacent(a, b) {
            positions.push(t);
        }
    }
    Ok(CollisionReport {
        graph: graph.clone(),
        horizon: n,
        positions,
    })
}

/// Pass iff the two streams put graph-adjacent values in *every* position up
/// to `n`; otherwise the smallest violating position.
pub fn completely_different_check(
    c1: &Construction,
    c2: &Construction,
    graph: &GraphSpec,
    n: u64,
    cap: HorizonCap,
) -> Result<CheckOutcome, VerifyError> {
    if n < 1 {
        return Err(VerifyError::EmptyHorizon);
    }
    cap.check_position(n).map_err(VerifyError::from)?;
    let limit = graph.vertex_limit();
    for t in 1..=n {
        let a = c1.value_at_checked(t, cap)?;
        let b = c2.value_at_checked(t, cap)?;
        check_vertex_range(limit, t, a)?;
        check_vertex_range(limit, t, b)?;
        if !graph.adjacent(a, b) {
            return Ok(CheckOutcome::FailAt { position: t });
        }
    }
    Ok(CheckOutcome::Pass)
}

/// Checks the even-position edge law for a divergent pair: at position `2j`
/// the streams for indices `i < k` must differ by exactly `2(k - i)j`.
pub fn lemma_edge_law(
    i: u64,
    k: u64,
    jmax: u64,
    cap: HorizonCap,
) -> Result<CheckOutcome, VerifyError> {
    if i < 1 || i >= k {
        return Err(VerifyError::BadEdgeLawPair { i, k });
    }
    if jmax < 1 {
        return Err(VerifyError::EmptyHorizon);
    }
    cap.check_position(jmax.saturating_mul(2))
        .map_err(VerifyError::from)?;
    let lo = Construction::Divergent { i };
    let hi = Construction::Divergent { i: k };
    for j in 1..=jmax {
        let t = 2 * j;
        let a = lo.value_at_checked(t, cap)?;
        let b = hi.value_at_checked(t, cap)?;
        if a.abs_diff(b) != 2 * (k - i) * j {
            return Ok(CheckOutcome::FailAt { position: j });
        }
    }
    Ok(CheckOutcome::Pass)
}

fn check_vertex_range(limit: Option<u64>, position: u64, value: u64) -> Result<(), VerifyError> {
    match limit {
        Some(limit) if value > limit || value < 1 => Err(VerifyError::VertexOutOfRange {
            position,
            value,
            limit,
        }),
        _ => Ok(()),
    }
}
