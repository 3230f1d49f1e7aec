//! Brute-force oracles for the integration suites: every function here
//! materializes and scans, with its own primality code, and never calls the
//! closed forms it is used to check.

use std::collections::BTreeSet;

use diverge_core::Construction;

/// Trial-division primality; slow and obviously correct.
pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain sieve of Eratosthenes, independent of the library's.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit as usize + 1];
    let mut primes = Vec::new();
    for p in 2..=limit as usize {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= limit as usize {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Prefix of a construction by direct simulation: slots are filled the way
/// the definitions describe them, with no closed-form index arithmetic.
pub fn oracle_prefix(c: &Construction, n: u64) -> Vec<u64> {
    match c {
        Construction::Identity => (1..=n).collect(),
        Construction::Divergent { i } => oracle_divergent(*i, n),
        Construction::Colliding { support } => oracle_colliding(support, n),
        Construction::BlockSwap { i } => oracle_block_swap(*i, n),
        Construction::ResidueBlockSwap { q, i } => oracle_residue_block_swap(*q, *i, n),
    }
}

fn oracle_divergent(i: u64, n: u64) -> Vec<u64> {
    let q = 2 * i;
    let mut out = vec![0u64; n as usize];
    // even positions 2j carry 2ij
    let mut j = 1u64;
    while 2 * j <= n {
        out[(2 * j - 1) as usize] = 2 * i * j;
        j += 1;
    }
    // odd positions take the skipped numbers in increasing order
    let mut v = 0u64;
    let mut t = 1u64;
    while t <= n {
        v += 1;
        while v % q == 0 {
            v += 1;
        }
        out[(t - 1) as usize] = v;
        t += 2;
    }
    out
}

fn oracle_colliding(support: &BTreeSet<u32>, n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).collect();
    let mut p = 3u64;
    loop {
        let min_j = *support.iter().next().expect("support is nonempty");
        let smallest = (p as u128).pow(min_j);
        if smallest > (n as u128) + 1 {
            break;
        }
        if trial_is_prime(p) {
            for &j in support {
                let power = (p as u128).pow(j);
                if power > (n as u128) + 1 {
                    continue;
                }
                let s = power as u64;
                if s <= n {
                    out[(s - 1) as usize] = s + 1;
                }
                if s + 1 <= n {
                    out[s as usize] = s;
                }
            }
        }
        p += 2;
    }
    out
}

fn oracle_block_swap(i: u32, n: u64) -> Vec<u64> {
    let len = 1usize << i;
    let padded = (n as usize).div_ceil(len) * len;
    let mut out: Vec<u64> = (1..=padded as u64).collect();
    for chunk in out.chunks_exact_mut(len) {
        chunk.rotate_left(len / 2);
    }
    out.truncate(n as usize);
    out
}

fn oracle_residue_block_swap(q: u64, i: u32, n: u64) -> Vec<u64> {
    let mut out = vec![0u64; n as usize];
    let len = 1usize << i;
    for r in 1..=q {
        let positions: Vec<u64> = (r..=n).step_by(q as usize).collect();
        if positions.is_empty() {
            continue;
        }
        let padded = positions.len().div_ceil(len) * len;
        let mut order: Vec<usize> = (0..padded).collect();
        for chunk in order.chunks_exact_mut(len) {
            chunk.rotate_left(len / 2);
        }
        for (slot, &t) in positions.iter().enumerate() {
            out[(t - 1) as usize] = r + order[slot] as u64 * q;
        }
    }
    out
}

pub fn oracle_diffs(p1: &[u64], p2: &[u64]) -> Vec<u64> {
    p1.iter().zip(p2).map(|(&a, &b)| a.abs_diff(b)).collect()
}

/// Forward-computed first passage for one threshold: the smallest `T` such
/// that every difference from `T` through the end stays at or above `m`.
/// `None` means even the last position falls short.
pub fn oracle_first_passage(diffs: &[u64], m: u64) -> Option<u64> {
    let horizon = diffs.len() as u64;
    let last_below = diffs
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &d)| d < m)
        .map(|(idx, _)| idx as u64 + 1);
    match last_below {
        Some(t) if t == horizon => None,
        Some(t) => Some(t + 1),
        None => Some(1),
    }
}

pub fn oracle_collisions(p1: &[u64], p2: &[u64], adjacent: impl Fn(u64, u64) -> bool) -> Vec<u64> {
    p1.iter()
        .zip(p2)
        .enumerate()
        .filter(|(_, (&a, &b))| adjacent(a, b))
        .map(|(idx, _)| idx as u64 + 1)
        .collect()
}

/// First position whose entries are not adjacent; `None` means completely
/// different.
pub fn oracle_first_non_adjacent(
    p1: &[u64],
    p2: &[u64],
    adjacent: impl Fn(u64, u64) -> bool,
) -> Option<u64> {
    p1.iter()
        .zip(p2)
        .position(|(&a, &b)| !adjacent(a, b))
        .map(|idx| idx as u64 + 1)
}

/// The fixed construction-pair matrix used for oracle-equivalence runs.
pub fn fixed_pair_matrix() -> Vec<(Construction, Construction)> {
    let id = Construction::identity();
    let d1 = Construction::divergent(1).unwrap();
    let d2 = Construction::divergent(2).unwrap();
    let d3 = Construction::divergent(3).unwrap();
    let d5 = Construction::divergent(5).unwrap();
    let c2 = Construction::colliding([2]).unwrap();
    let c3 = Construction::colliding([3]).unwrap();
    let c23 = Construction::colliding([2, 3]).unwrap();
    let c25 = Construction::colliding([2, 5]).unwrap();
    let b1 = Construction::block_swap(1).unwrap();
    let b2 = Construction::block_swap(2).unwrap();
    let b3 = Construction::block_swap(3).unwrap();
    let r21 = Construction::residue_block_swap(2, 1).unwrap();
    let r23 = Construction::residue_block_swap(2, 3).unwrap();
    let r32 = Construction::residue_block_swap(3, 2).unwrap();
    let r51 = Construction::residue_block_swap(5, 1).unwrap();
    vec![
        (id.clone(), id.clone()),
        (id.clone(), d2.clone()),
        (d1.clone(), d2.clone()),
        (d2.clone(), d3.clone()),
        (d3.clone(), d5.clone()),
        (d1, d5.clone()),
        (c2.clone(), c3.clone()),
        (c2.clone(), c23.clone()),
        (c23, c25),
        (c3.clone(), id.clone()),
        (b1.clone(), b2.clone()),
        (b2.clone(), b3.clone()),
        (b1.clone(), b3.clone()),
        (b3, id),
        (r21.clone(), r23),
        (r32.clone(), r51.clone()),
        (r21, b1),
        (c2, d2),
        (b2, d3),
        (r51, c3),
    ]
}
