//! The acceptance gate: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test -p diverge-core --test acceptance` (add
//! `-- --nocapture` to see the lines for passing criteria too).

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use diverge_core::capacity::{
    build_difference_graph, g_different, max_clique, middle_binomial, CliqueOptions,
};
use diverge_core::streams::pure_sites_up_to;
use diverge_core::suite::{predicted_collision_positions, representative_family};
use diverge_core::verify::{
    collision_scan, completely_different_check, difference_sequence, divergence_certificate,
    lemma_edge_law, FirstPassage,
};
use diverge_core::{Construction, GraphSpec, HorizonCap};

fn cap() -> HorizonCap {
    HorizonCap::default()
}

struct Criterion {
    name: &'static str,
    started: Instant,
}

impl Criterion {
    fn new(name: &'static str) -> Criterion {
        Criterion {
            name,
            started: Instant::now(),
        }
    }

    fn finish(self, outcome: Result<String, String>) {
        let elapsed = self.started.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS  {} ({elapsed} ms) — {detail}", self.name),
            Err(detail) => {
                println!("FAIL  {} ({elapsed} ms) — {detail}", self.name);
                panic!("{}: {detail}", self.name);
            }
        }
    }
}

/// Criterion 1: even-position differences of divergent pairs obey the exact
/// edge law 2(k-i)j for all 1 <= i < k <= 10 and j <= 10^5.
#[test]
fn criterion_1_divergent_edge_law() {
    let criterion = Criterion::new("criterion 1: divergent edge law");
    let mut pairs = 0;
    for i in 1..=10u64 {
        for k in (i + 1)..=10 {
            pairs += 1;
            let outcome = lemma_edge_law(i, k, 100_000, cap()).unwrap();
            if let Some(j) = outcome.fail_position() {
                return criterion.finish(Err(format!("pair ({i}, {k}) broke the law at j = {j}")));
            }
        }
    }
    criterion.finish(Ok(format!("{pairs} pairs, j <= 100000, exact equality")));
}

/// Criterion 2: divergence certificates at horizon 10^6 for all pairs
/// 1 <= i < k <= 6, thresholds up to 100, with no FAILED and no WEAK entries.
#[test]
fn criterion_2_divergence_certificates() {
    let criterion = Criterion::new("criterion 2: divergence certificates");
    let thresholds = [1u64, 2, 5, 10, 50, 100];
    let horizon = 1_000_000;
    let mut pairs = 0;
    for i in 1..=6u64 {
        for k in (i + 1)..=6 {
            pairs += 1;
            let a = Construction::divergent(i).unwrap();
            let b = Construction::divergent(k).unwrap();
            let cert = divergence_certificate(&a, &b, horizon, &thresholds, cap()).unwrap();
            if !cert.is_valid() {
                return criterion.finish(Err(format!(
                    "pair ({i}, {k}) failed at threshold {:?}",
                    cert.first_failed_threshold()
                )));
            }
            if cert.has_weak() {
                return criterion.finish(Err(format!("pair ({i}, {k}) has a WEAK passage")));
            }
        }
    }
    criterion.finish(Ok(format!(
        "{pairs} pairs at horizon {horizon}, thresholds {thresholds:?}"
    )));
}

/// Criterion 3: collision positions of colliding({2}) vs colliding({3})
/// under the distance-1 graph up to 10^6 equal the pure-site pairs for
/// exponents 2 and 3, cross-checked against an independent prime sieve.
#[test]
fn criterion_3_collision_positions_exact() {
    let criterion = Criterion::new("criterion 3: collision positions");
    let horizon = 1_000_000u64;
    let c2 = Construction::colliding([2]).unwrap();
    let c3 = Construction::colliding([3]).unwrap();
    let graph = GraphSpec::distance(1).unwrap();
    let scan = collision_scan(&c2, &c3, &graph, horizon, cap()).unwrap();

    // Independent prediction: a fresh sieve, no library prime code.
    let mut expected = BTreeSet::new();
    for p in common::sieve_primes(1_000) {
        if p == 2 {
            continue;
        }
        for j in [2u32, 3] {
            let power = p.pow(j);
            if power + 1 <= horizon {
                expected.insert(power);
                expected.insert(power + 1);
            }
        }
    }
    let expected: Vec<u64> = expected.into_iter().collect();
    if scan.positions != expected {
        let got = scan.positions.len();
        return criterion.finish(Err(format!(
            "scan returned {got} positions, sieve predicts {}",
            expected.len()
        )));
    }
    criterion.finish(Ok(format!(
        "{} positions <= {horizon}, exact set equality with the sieve",
        expected.len()
    )));
}

/// Criterion 4: pure-site swap pairs are pairwise disjoint up to 10^7.
#[test]
fn criterion_4_swap_pairs_disjoint() {
    let criterion = Criterion::new("criterion 4: swap-pair disjointness");
    let limit = 10_000_000u64;
    let sites = pure_sites_up_to(limit, None);
    for pair in sites.windows(2) {
        if pair[1].value <= pair[0].value + 1 {
            return criterion.finish(Err(format!(
                "{}^{} = {} and {}^{} = {} overlap",
                pair[0].p, pair[0].j, pair[0].value, pair[1].p, pair[1].j, pair[1].value
            )));
        }
    }
    criterion.finish(Ok(format!(
        "{} sites <= {limit}, all value/successor pairs disjoint",
        sites.len()
    )));
}

/// Criterion 5: block-swap pairs differ in every position up to 2^16 for
/// all 1 <= i < j <= 12.
#[test]
fn criterion_5_blockswap_complete_difference() {
    let criterion = Criterion::new("criterion 5: blockswap complete K-difference");
    let horizon = 1u64 << 16;
    let complete = GraphSpec::complete();
    let mut pairs = 0;
    for i in 1..=12u32 {
        for j in (i + 1)..=12 {
            pairs += 1;
            let a = Construction::block_swap(i).unwrap();
            let b = Construction::block_swap(j).unwrap();
            let outcome = completely_different_check(&a, &b, &complete, horizon, cap()).unwrap();
            if let Some(t) = outcome.fail_position() {
                return criterion.finish(Err(format!("pair ({i}, {j}) agrees at position {t}")));
            }
        }
    }
    criterion.finish(Ok(format!("{pairs} pairs up to {horizon}, exact")));
}

/// Criterion 6: residue block-swap pairs are completely Residue(q)-different
/// up to 2^14 for q in {2, 3, 5} and 1 <= i < j <= 8.
#[test]
fn criterion_6_residue_complete_difference() {
    let criterion = Criterion::new("criterion 6: residue complete difference");
    let horizon = 1u64 << 14;
    let mut triples = 0;
    for q in [2u64, 3, 5] {
        let graph = GraphSpec::residue(q).unwrap();
        for i in 1..=8u32 {
            for j in (i + 1)..=8 {
                triples += 1;
                let a = Construction::residue_block_swap(q, i).unwrap();
                let b = Construction::residue_block_swap(q, j).unwrap();
                let outcome = completely_different_check(&a, &b, &graph, horizon, cap()).unwrap();
                if let Some(t) = outcome.fail_position() {
                    return criterion.finish(Err(format!(
                        "(q = {q}, i = {i}, j = {j}) not adjacent at position {t}"
                    )));
                }
            }
        }
    }
    criterion.finish(Ok(format!("{triples} triples up to {horizon}, exact")));
}

/// Criterion 7: omega(distance-1, n) = 2, 3, 6, 10 for n = 2..5, matching
/// the middle binomial coefficient, with the exact solver confirmed by
/// whole-subset brute force at n = 3.
#[test]
fn criterion_7_capacity_conjecture_small_n() {
    let criterion = Criterion::new("criterion 7: capacity conjecture");
    let base = GraphSpec::distance(1).unwrap();
    let expected = [2u64, 3, 6, 10];
    for (n, &want) in (2u64..=5).zip(&expected) {
        let graph = build_difference_graph(n, &base, 6).unwrap();
        let result = max_clique(&graph, &CliqueOptions::default()).unwrap();
        if result.omega != want {
            return criterion.finish(Err(format!(
                "omega at n = {n} is {}, expected {want}",
                result.omega
            )));
        }
        if result.omega != middle_binomial(n) {
            return criterion.finish(Err(format!("omega at n = {n} misses C(n, n/2)")));
        }
    }

    // Independent route at n = 3: exhaustive subsets of S_3.
    let perms = diverge_core::capacity::all_permutations(3);
    let mut brute = 0usize;
    for mask in 0u32..(1 << perms.len()) {
        let chosen: Vec<_> = perms
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask >> idx & 1 == 1)
            .map(|(_, p)| p)
            .collect();
        if chosen.len() > brute
            && chosen
                .iter()
                .enumerate()
                .all(|(i, p)| chosen[i + 1..].iter().all(|r| g_different(p, r, &base)))
        {
            brute = chosen.len();
        }
    }
    if brute != 3 {
        return criterion.finish(Err(format!("subset brute force found {brute}, expected 3")));
    }
    criterion.finish(Ok(
        "omegas 2, 3, 6, 10 match C(n, n/2); n = 3 confirmed by subset brute force".into(),
    ));
}

/// Criterion 8: every construction kind passes prefix validation at n = 10^6
/// (injective and covering 1..5*10^5).
#[test]
fn criterion_8_permutation_validity() {
    let criterion = Criterion::new("criterion 8: permutation validity");
    let n = 1_000_000u64;
    for c in representative_family() {
        let report = c.validate_prefix(n, cap()).unwrap();
        if !report.passed() {
            return criterion.finish(Err(format!(
                "{c}: duplicate {:?}, missing {:?}",
                report.first_duplicate, report.first_missing
            )));
        }
    }
    criterion.finish(Ok(format!(
        "{} constructions validated at n = {n}",
        representative_family().len()
    )));
}

/// Criterion 9: every verify operation agrees with the naive
/// materialize-and-scan oracle at horizon 10^4 over the fixed matrix of 20
/// construction pairs.
#[test]
fn criterion_9_oracle_equivalence() {
    let criterion = Criterion::new("criterion 9: oracle equivalence");
    let horizon = 10_000u64;
    let thresholds = [1u64, 2, 5];
    let l1 = GraphSpec::distance(1).unwrap();
    let complete = GraphSpec::complete();
    let matrix = common::fixed_pair_matrix();
    assert_eq!(matrix.len(), 20, "the matrix is fixed at 20 pairs");

    for (c1, c2) in &matrix {
        let p1 = common::oracle_prefix(c1, horizon);
        let p2 = common::oracle_prefix(c2, horizon);
        let diffs = common::oracle_diffs(&p1, &p2);

        let seq = difference_sequence(c1, c2, horizon, cap()).unwrap();
        if seq.diffs != diffs {
            return criterion.finish(Err(format!("difference_sequence differs for {c1} vs {c2}")));
        }

        let cert = divergence_certificate(c1, c2, horizon, &thresholds, cap()).unwrap();
        for entry in &cert.entries {
            let expected = common::oracle_first_passage(&diffs, entry.threshold);
            let matches = match (entry.passage, expected) {
                (FirstPassage::Passed { t, .. }, Some(want)) => t == want,
                (FirstPassage::Failed, None) => true,
                _ => false,
            };
            if !matches {
                return criterion.finish(Err(format!(
                    "certificate mismatch for {c1} vs {c2} at threshold {}",
                    entry.threshold
                )));
            }
        }

        let scan = collision_scan(c1, c2, &l1, horizon, cap()).unwrap();
        if scan.positions != common::oracle_collisions(&p1, &p2, |a, b| a.abs_diff(b) == 1) {
            return criterion.finish(Err(format!("collision_scan differs for {c1} vs {c2}")));
        }

        let outcome = completely_different_check(c1, c2, &complete, horizon, cap()).unwrap();
        if outcome.fail_position() != common::oracle_first_non_adjacent(&p1, &p2, |a, b| a != b) {
            return criterion.finish(Err(format!(
                "completely_different_check differs for {c1} vs {c2}"
            )));
        }
    }

    // lemma_edge_law against oracle prefixes on its own grid
    for i in 1..=5u64 {
        for k in (i + 1)..=6 {
            let outcome = lemma_edge_law(i, k, horizon / 2, cap()).unwrap();
            let lo = common::oracle_prefix(&Construction::divergent(i).unwrap(), horizon);
            let hi = common::oracle_prefix(&Construction::divergent(k).unwrap(), horizon);
            let oracle_fail = (1..=horizon / 2)
                .find(|&j| lo[(2 * j - 1) as usize].abs_diff(hi[(2 * j - 1) as usize]) != 2 * (k - i) * j);
            if outcome.fail_position() != oracle_fail {
                return criterion.finish(Err(format!("edge law differs for ({i}, {k})")));
            }
        }
    }

    criterion.finish(Ok(
        "20 pairs at horizon 10^4: sequences, certificates, scans and checks all match".into(),
    ));
}

/// The predicted-positions helper used by the invariant suite agrees with
/// the independent sieve route, so the suite's exactness check is anchored.
#[test]
fn predicted_positions_agree_with_sieve() {
    let horizon = 100_000u64;
    let delta = BTreeSet::from([2u32, 3]);
    let predicted = predicted_collision_positions(&delta, horizon);
    let mut expected = BTreeSet::new();
    for p in common::sieve_primes(400) {
        if p == 2 {
            continue;
        }
        for j in [2u32, 3] {
            let power = p.pow(j);
            if power <= horizon {
                expected.insert(power);
            }
            if power + 1 <= horizon {
                expected.insert(power + 1);
            }
        }
    }
    let by_sieve: Vec<u64> = expected.into_iter().collect();
    assert_eq!(predicted, by_sieve);
}
