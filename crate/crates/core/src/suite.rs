//! The runnable invariant suite over the streams and verify modules: one
//! named check per library invariant, each reporting pass/fail with a first
//! counterexample. The `verify` CLI subcommand is a thin wrapper around
//! [`run_suite`].

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::GraphSpec;
use crate::streams::{pure_sites_up_to, Construction, HorizonCap};
use crate::verify::{
    collision_scan, completely_different_check, divergence_certificate, lemma_edge_law,
};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub cap: HorizonCap,
    pub round_trip_limit: u64,
    pub permutation_lengths: Vec<u64>,
    pub edge_law_jmax: u64,
    pub divergence_horizon: u64,
    pub collision_horizon: u64,
    pub blockswap_horizon: u64,
    pub residue_horizon: u64,
    pub pure_site_limit: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cap: HorizonCap::default(),
            round_trip_limit: 100_000,
            permutation_lengths: vec![1_000, 1_000_000],
            edge_law_jmax: 100_000,
            divergence_horizon: 1_000_000,
            collision_horizon: 1_000_000,
            blockswap_horizon: 1 << 16,
            residue_horizon: 1 << 14,
            pure_site_limit: 10_000_000,
        }
    }
}

impl SuiteConfig {
    /// Same checks with the two scan horizons overridden (for quick runs).
    pub fn with_scan_horizon(horizon: u64) -> Self {
        SuiteConfig {
            divergence_horizon: horizon,
            collision_horizon: horizon,
            ..SuiteConfig::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// One construction per behavior worth exercising; every kind appears.
///
/// Values move at most `2^(i-1)` (block swaps) or `q * 2^(i-1)` (residue
/// swaps) positions, so the parameters stay small enough for coverage to
/// hold already at the shortest validated prefix length.
pub fn representative_family() -> Vec<Construction> {
    vec![
        Construction::identity(),
        Construction::divergent(2).unwrap(),
        Construction::divergent(3).unwrap(),
        Construction::divergent(6).unwrap(),
        Construction::colliding([2]).unwrap(),
        Construction::colliding([2, 3]).unwrap(),
        Construction::colliding([3, 5]).unwrap(),
        Construction::block_swap(1).unwrap(),
        Construction::block_swap(4).unwrap(),
        Construction::block_swap(8).unwrap(),
        Construction::residue_block_swap(2, 1).unwrap(),
        Construction::residue_block_swap(3, 2).unwrap(),
        Construction::residue_block_swap(5, 3).unwrap(),
    ]
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let checks = vec![
        run_check("streams/round_trip", || check_round_trip(config)),
        run_check("streams/permutation_prefix", || check_permutation(config)),
        run_check("streams/colliding_swap_disjointness", || {
            check_pure_site_disjointness(config)
        }),
        run_check("streams/blockswap_involution", || {
            check_blockswap_involution(config)
        }),
        run_check("streams/residue_class_preservation", || {
            check_residue_classes(config)
        }),
        run_check("verify/divergent_edge_law", || check_edge_law(config)),
        run_check("verify/divergence_certificates", || {
            check_divergence(config)
        }),
        run_check("verify/collision_sites_exact", || check_collisions(config)),
        run_check("verify/blockswap_complete_difference", || {
            check_blockswap_difference(config)
        }),
        run_check("verify/residue_complete_difference", || {
            check_residue_difference(config)
        }),
    ];
    SuiteReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn run_check(name: &str, body: impl FnOnce() -> (bool, String)) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = body();
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn check_round_trip(config: &SuiteConfig) -> (bool, String) {
    for c in representative_family() {
        for t in 1..=config.round_trip_limit {
            let v = c.value_at(t);
            let back = c.inverse_at(v);
            if back != t {
                return (
                    false,
                    format!("{c}: inverse_at(value_at({t})) = {back}, expected {t}"),
                );
            }
        }
    }
    (
        true,
        format!(
            "{} constructions, t <= {}",
            representative_family().len(),
            config.round_trip_limit
        ),
    )
}

fn check_permutation(config: &SuiteConfig) -> (bool, String) {
    for c in representative_family() {
        for &n in &config.permutation_lengths {
            match c.validate_prefix(n, config.cap) {
                Ok(report) if report.passed() => {}
                Ok(report) => {
                    return (
                        false,
                        format!(
                            "{c} at n = {n}: duplicate {:?}, missing {:?}",
                            report.first_duplicate, report.first_missing
                        ),
                    )
                }
                Err(e) => return (false, format!("{c} at n = {n}: {e}")),
            }
        }
    }
    (
        true,
        format!(
            "{} constructions at n in {:?}",
            representative_family().len(),
            config.permutation_lengths
        ),
    )
}

fn check_pure_site_disjointness(config: &SuiteConfig) -> (bool, String) {
    let sites = pure_sites_up_to(config.pure_site_limit, None);
    for pair in sites.windows(2) {
        if pair[1].value <= pair[0].value + 1 {
            return (
                false,
                format!(
                    "swap pairs overlap: {}^{} = {} and {}^{} = {}",
                    pair[0].p, pair[0].j, pair[0].value, pair[1].p, pair[1].j, pair[1].value
                ),
            );
        }
    }
    (
        true,
        format!(
            "{} sites <= {}, all swap pairs disjoint",
            sites.len(),
            config.pure_site_limit
        ),
    )
}

fn check_blockswap_involution(config: &SuiteConfig) -> (bool, String) {
    for i in 1..=12u32 {
        let c = Construction::block_swap(i).unwrap();
        for t in 1..=config.round_trip_limit {
            let twice = c.value_at(c.value_at(t));
            if twice != t {
                return (false, format!("blockswap:{i} applied twice moved {t} to {twice}"));
            }
        }
    }
    (true, format!("i <= 12, t <= {}", config.round_trip_limit))
}

fn check_residue_classes(config: &SuiteConfig) -> (bool, String) {
    for (q, i) in [(2u64, 1u32), (2, 5), (3, 2), (5, 3), (7, 4)] {
        let c = Construction::residue_block_swap(q, i).unwrap();
        for t in 1..=config.round_trip_limit {
            let v = c.value_at(t);
            if v % q != t % q {
                return (
                    false,
                    format!("{c}: value {v} at position {t} left its class mod {q}"),
                );
            }
        }
    }
    (true, format!("t <= {}", config.round_trip_limit))
}

fn check_edge_law(config: &SuiteConfig) -> (bool, String) {
    let pairs: Vec<(u64, u64)> = (1..=10u64)
        .flat_map(|i| ((i + 1)..=10).map(move |k| (i, k)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, k)| {
            match lemma_edge_law(i, k, config.edge_law_jmax, config.cap) {
                Ok(outcome) if outcome.passed() => {}
                Ok(outcome) => {
                    return Some(format!(
                        "({i}, {k}): law broken at j = {:?}",
                        outcome.fail_position()
                    ))
                }
                Err(e) => return Some(format!("({i}, {k}): {e}")),
            }
            // The even-position differences must also be strictly increasing
            // in j, so each pair witnesses infinitely many distinct graphs.
            let lo = Construction::divergent(i).unwrap();
            let hi = Construction::divergent(k).unwrap();
            let mut prev = 0u64;
            for j in 1..=config.edge_law_jmax {
                let diff = lo.value_at(2 * j).abs_diff(hi.value_at(2 * j));
                if j > 1 && diff <= prev {
                    return Some(format!(
                        "({i}, {k}): difference not increasing at j = {j}"
                    ));
                }
                prev = diff;
            }
            None
        })
        .collect();
    summarize(failures, format!("{} pairs, j <= {}", pairs.len(), config.edge_law_jmax))
}

fn check_divergence(config: &SuiteConfig) -> (bool, String) {
    let thresholds: Vec<u64> = [1u64, 2, 5, 10, 50, 100]
        .into_iter()
        .filter(|&m| m <= config.divergence_horizon)
        .collect();
    let pairs: Vec<(u64, u64)> = (1..=6u64)
        .flat_map(|i| ((i + 1)..=6).map(move |k| (i, k)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, k)| {
            let a = Construction::divergent(i).unwrap();
            let b = Construction::divergent(k).unwrap();
            match divergence_certificate(&a, &b, config.divergence_horizon, &thresholds, config.cap)
            {
                Ok(cert) if cert.is_valid() && !cert.has_weak() => None,
                Ok(cert) => Some(format!(
                    "({i}, {k}): failed threshold {:?}, weak = {}",
                    cert.first_failed_threshold(),
                    cert.has_weak()
                )),
                Err(e) => Some(format!("({i}, {k}): {e}")),
            }
        })
        .collect();
    summarize(
        failures,
        format!(
            "{} pairs at horizon {}, thresholds {:?}",
            pairs.len(),
            config.divergence_horizon,
            thresholds
        ),
    )
}

fn check_collisions(config: &SuiteConfig) -> (bool, String) {
    let supports = small_supports();
    let graph = GraphSpec::distance(1).unwrap();
    let pairs: Vec<(usize, usize)> = (0..supports.len())
        .flat_map(|a| ((a + 1)..supports.len()).map(move |b| (a, b)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let sa = &supports[a];
            let sb = &supports[b];
            let ca = Construction::colliding(sa.iter().copied()).unwrap();
            let cb = Construction::colliding(sb.iter().copied()).unwrap();
            let scan = match collision_scan(&ca, &cb, &graph, config.collision_horizon, config.cap)
            {
                Ok(scan) => scan,
                Err(e) => return Some(format!("{sa:?} vs {sb:?}: {e}")),
            };
            let delta: BTreeSet<u32> = sa.symmetric_difference(sb).copied().collect();
            let expected = predicted_collision_positions(&delta, config.collision_horizon);
            if scan.positions.is_empty() {
                Some(format!("{sa:?} vs {sb:?}: no collisions found"))
            } else if scan.positions != expected {
                let diff = first_mismatch(&scan.positions, &expected);
                Some(format!("{sa:?} vs {sb:?}: positions differ at {diff:?}"))
            } else {
                None
            }
        })
        .collect();
    summarize(
        failures,
        format!(
            "{} support pairs at horizon {}",
            pairs.len(),
            config.collision_horizon
        ),
    )
}

/// Every position at which exactly one side of a pair with symmetric
/// difference `delta` swaps: both members of each pure-site pair, clipped
/// to the horizon.
pub fn predicted_collision_positions(delta: &BTreeSet<u32>, horizon: u64) -> Vec<u64> {
    let mut positions = Vec::new();
    for site in pure_sites_up_to(horizon, Some(delta)) {
        positions.push(site.value);
        if site.successor <= horizon {
            positions.push(site.successor);
        }
    }
    positions.sort_unstable();
    positions
}

fn small_supports() -> Vec<BTreeSet<u32>> {
    let mut out: Vec<BTreeSet<u32>> = Vec::new();
    for j in 2..=6u32 {
        out.push(BTreeSet::from([j]));
    }
    for a in 2..=6u32 {
        for b in (a + 1)..=6 {
            out.push(BTreeSet::from([a, b]));
        }
    }
    out
}

fn check_blockswap_difference(config: &SuiteConfig) -> (bool, String) {
    let complete = GraphSpec::complete();
    let pairs: Vec<(u32, u32)> = (1..=12u32)
        .flat_map(|i| ((i + 1)..=12).map(move |j| (i, j)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let a = Construction::block_swap(i).unwrap();
            let b = Construction::block_swap(j).unwrap();
            match completely_different_check(&a, &b, &complete, config.blockswap_horizon, config.cap)
            {
                Ok(outcome) if outcome.passed() => None,
                Ok(outcome) => Some(format!(
                    "({i}, {j}): equal entries at position {:?}",
                    outcome.fail_position()
                )),
                Err(e) => Some(format!("({i}, {j}): {e}")),
            }
        })
        .collect();
    summarize(
        failures,
        format!("{} pairs up to {}", pairs.len(), config.blockswap_horizon),
    )
}

fn check_residue_difference(config: &SuiteConfig) -> (bool, String) {
    let mut jobs = Vec::new();
    for q in [2u64, 3, 5] {
        for i in 1..=8u32 {
            for j in (i + 1)..=8 {
                jobs.push((q, i, j));
            }
        }
    }
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(q, i, j)| {
            let a = Construction::residue_block_swap(q, i).unwrap();
            let b = Construction::residue_block_swap(q, j).unwrap();
            let graph = GraphSpec::residue(q).unwrap();
            match completely_different_check(&a, &b, &graph, config.residue_horizon, config.cap) {
                Ok(outcome) if outcome.passed() => None,
                Ok(outcome) => Some(format!(
                    "(q = {q}, {i}, {j}): not adjacent at position {:?}",
                    outcome.fail_position()
                )),
                Err(e) => Some(format!("(q = {q}, {i}, {j}): {e}")),
            }
        })
        .collect();
    summarize(
        failures,
        format!("{} triples up to {}", jobs.len(), config.residue_horizon),
    )
}

fn first_mismatch(got: &[u64], expected: &[u64]) -> Option<(Option<u64>, Option<u64>)> {
    let n = got.len().max(expected.len());
    (0..n).find_map(|idx| {
        let g = got.get(idx).copied();
        let e = expected.get(idx).copied();
        (g != e).then_some((g, e))
    })
}

fn summarize(failures: Vec<String>, ok_detail: String) -> (bool, String) {
    if failures.is_empty() {
        (true, ok_detail)
    } else {
        (false, failures.join("; "))
    }
}
