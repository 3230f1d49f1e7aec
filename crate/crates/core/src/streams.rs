//! Infinite permutations of the naturals given by closed-form forward and
//! inverse maps, plus the number-theoretic bookkeeping they need.
//!
//! Every permutation here is finitely parameterized: a [`Construction`]
//! value fully determines the stream, and both `value_at` and `inverse_at`
//! run in time polylogarithmic in their argument. Indexing is 1-based
//! throughout.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::nt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("position {position} exceeds the horizon cap {cap}")]
    PositionAboveCap { position: u64, cap: u64 },
    #[error("value {value} at position {position} exceeds the horizon cap {cap}")]
    ValueAboveCap { position: u64, value: u64, cap: u64 },
    #[error("value at position {position} overflows 64-bit arithmetic")]
    Overflow { position: u64 },
}

/// Ceiling on every position and value touched by a streaming operation.
///
/// With the default cap of 10^8 all intermediate products in the library
/// stay far below 2^63, so arithmetic never silently wraps; requests beyond
/// the cap are refused rather than risked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HorizonCap(u64);

impl HorizonCap {
    pub const DEFAULT: HorizonCap = HorizonCap(100_000_000);

    pub fn new(cap: u64) -> HorizonCap {
        HorizonCap(cap)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn check_position(self, position: u64) -> Result<(), StreamError> {
        if position > self.0 {
            Err(StreamError::PositionAboveCap {
                position,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_value(self, position: u64, value: u64) -> Result<(), StreamError> {
        if value > self.0 {
            Err(StreamError::ValueAboveCap {
                position,
                value,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for HorizonCap {
    fn default() -> Self {
        HorizonCap::DEFAULT
    }
}

/// A finitely-parameterized infinite permutation of the naturals.
///
/// * `Identity` — the trivial stream `1, 2, 3, ...`.
/// * `Divergent(i)` — even position `2j` holds `2ij`; odd positions hold the
///   remaining naturals (the non-multiples of `2i`) in increasing order.
///   `Divergent(1)` is the identity.
/// * `Colliding(support)` — the identity with the pair `(p^j, p^j + 1)`
///   transposed for every odd prime `p` and every exponent `j` in the
///   support set. Exponents are at least 2, so every swapped value is the
///   proper power of an odd prime, and no two swap pairs overlap.
/// * `BlockSwap(i)` — in each block `[(b-1)*2^i + 1, b*2^i]` the first and
///   second halves are exchanged as contiguous runs.
/// * `ResidueBlockSwap(q, i)` — `BlockSwap(i)` applied to the index sequence
///   of each residue class mod `q` independently; values stay in the class
///   of their position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Identity,
    Divergent { i: u64 },
    Colliding { support: BTreeSet<u32> },
    BlockSwap { i: u32 },
    ResidueBlockSwap { q: u64, i: u32 },
}

// BlockSwap block lengths are 2^i; keep 2^i and q*2^i inside u64.
const MAX_BLOCK_EXP: u32 = 62;

impl Construction {
    pub fn identity() -> Construction {
        Construction::Identity
    }

    pub fn divergent(i: u64) -> Result<Construction, StreamError> {
        if i < 1 {
            return Err(StreamError::InvalidConstruction(
                "divergent index must be >= 1".into(),
            ));
        }
        Ok(Construction::Divergent { i })
    }

    pub fn colliding<I>(support: I) -> Result<Construction, StreamError>
    where
        I: IntoIterator<Item = u32>,
    {
        let support: BTreeSet<u32> = support.into_iter().collect();
        if support.is_empty() {
            return Err(StreamError::InvalidConstruction(
                "colliding support must be nonempty".into(),
            ));
        }
        if let Some(&j) = support.iter().next() {
            if j < 2 {
                return Err(StreamError::InvalidConstruction(format!(
                    "colliding exponent {j} is below 2; swapped values must be proper prime powers"
                )));
            }
        }
        Ok(Construction::Colliding { support })
    }

    pub fn block_swap(i: u32) -> Result<Construction, StreamError> {
        if i < 1 {
            return Err(StreamError::InvalidConstruction(
                "block-swap exponent must be >= 1".into(),
            ));
        }
        if i > MAX_BLOCK_EXP {
            return Err(StreamError::InvalidConstruction(format!(
                "block-swap exponent {i} exceeds {MAX_BLOCK_EXP}; block length 2^i must fit in u64"
            )));
        }
        Ok(Construction::BlockSwap { i })
    }

    pub fn residue_block_swap(q: u64, i: u32) -> Result<Construction, StreamError> {
        if q < 2 {
            return Err(StreamError::InvalidConstruction(
                "residue modulus must be >= 2".into(),
            ));
        }
        if i < 1 || i > MAX_BLOCK_EXP {
            return Err(StreamError::InvalidConstruction(format!(
                "block-swap exponent {i} must be in 1..={MAX_BLOCK_EXP}"
            )));
        }
        if q.checked_mul(1u64 << i).is_none() {
            return Err(StreamError::InvalidConstruction(format!(
                "q * 2^i overflows u64 (q = {q}, i = {i})"
            )));
        }
        Ok(Construction::ResidueBlockSwap { q, i })
    }

    /// Value of the permutation at position `t` (1-based).
    ///
    /// Panics on `t = 0` and on 64-bit overflow; use [`value_at_checked`]
    /// when the inputs are not already bounded by a horizon cap.
    ///
    /// [`value_at_checked`]: Construction::value_at_checked
    pub fn value_at(&self, t: u64) -> u64 {
        self.try_value_at(t)
            .unwrap_or_else(|| panic!("value at position {t} overflows u64"))
    }

    /// Fallible companion of [`value_at`](Construction::value_at): enforces
    /// the horizon cap on both the position and the computed value.
    pub fn value_at_checked(&self, t: u64, cap: HorizonCap) -> Result<u64, StreamError> {
        cap.check_position(t)?;
        let value = self
            .try_value_at(t)
            .ok_or(StreamError::Overflow { position: t })?;
        cap.check_value(t, value)?;
        Ok(value)
    }

    fn try_value_at(&self, t: u64) -> Option<u64> {
        assert!(t >= 1, "positions are 1-based");
        match self {
            Construction::Identity => Some(t),
            Construction::Divergent { i } => {
                if t % 2 == 0 {
                    let j = t / 2;
                    2u64.checked_mul(*i)?.checked_mul(j)
                } else {
                    let m = (t + 1) / 2;
                    Some(nth_non_multiple(m, 2 * i))
                }
            }
            Construction::Colliding { support } => {
                if pure_power_exponent(t, support).is_some() {
                    t.checked_add(1)
                } else if t >= 2 && pure_power_exponent(t - 1, support).is_some() {
                    Some(t - 1)
                } else {
                    Some(t)
                }
            }
            Construction::BlockSwap { i } => block_swap_value(*i, t),
            Construction::ResidueBlockSwap { q, i } => {
                // Per-class: position t is the m-th member of its residue
                // class; the class index sequence is block-swapped.
                let r = (t - 1) % q + 1;
                let m = (t - 1) / q + 1;
                let m2 = block_swap_value(*i, m)?;
                (m2 - 1).checked_mul(*q)?.checked_add(r)
            }
        }
    }

    /// The unique position `t` with `value_at(t) = v`, via closed form.
    ///
    /// `Colliding`, `BlockSwap` and `ResidueBlockSwap` are involutions, so
    /// their inverse is the forward map; `Divergent` inverts its two arms
    /// directly.
    pub fn inverse_at(&self, v: u64) -> u64 {
        assert!(v >= 1, "values are 1-based");
        match self {
            Construction::Identity => v,
            Construction::Divergent { i } => {
                let q = 2 * i;
                if v % q == 0 {
                    // v = 2ij sits at position 2j.
                    2 * (v / q)
                } else {
                    // v is the m-th non-multiple of 2i, at position 2m - 1.
                    let m = v - v / q;
                    2 * m - 1
                }
            }
            Construction::Colliding { .. }
            | Construction::BlockSwap { .. }
            | Construction::ResidueBlockSwap { .. } => self.value_at(v),
        }
    }

    /// First `n` values of the stream.
    pub fn prefix(&self, n: u64, cap: HorizonCap) -> Result<Vec<u64>, StreamError> {
        cap.check_position(n)?;
        let mut out = Vec::with_capacity(n as usize);
        for t in 1..=n {
            out.push(self.value_at_checked(t, cap)?);
        }
        Ok(out)
    }

    /// Checks that the length-`n` prefix looks like a permutation prefix:
    /// all values distinct, and every value up to `n/2` already present.
    pub fn validate_prefix(&self, n: u64, cap: HorizonCap) -> Result<ValidityReport, StreamError> {
        assert!(n >= 2, "validation needs at least two positions");
        let prefix = self.prefix(n, cap)?;
        Ok(validate_values(&prefix))
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Identity => write!(f, "identity"),
            Construction::Divergent { i } => write!(f, "divergent:{i}"),
            Construction::Colliding { support } => {
                write!(f, "colliding:")?;
                for (pos, j) in support.iter().enumerate() {
                    if pos > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{j}")?;
                }
                Ok(())
            }
            Construction::BlockSwap { i } => write!(f, "blockswap:{i}"),
            Construction::ResidueBlockSwap { q, i } => write!(f, "residueswap:{q}:{i}"),
        }
    }
}

impl Serialize for Construction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The m-th smallest positive integer not divisible by q.
///
/// Closed form: `m + (m - 1) / (q - 1)`. Panics unless `m >= 1` and `q >= 2`.
pub fn nth_non_multiple(m: u64, q: u64) -> u64 {
    assert!(m >= 1, "m must be >= 1");
    assert!(q >= 2, "q must be >= 2");
    m + (m - 1) / (q - 1)
}

fn block_swap_value(i: u32, t: u64) -> Option<u64> {
    let len = 1u64 << i;
    let half = len >> 1;
    let offset = (t - 1) % len + 1;
    let base = t - offset;
    if offset <= half {
        base.checked_add(offset)?.checked_add(half)
    } else {
        Some(base + offset - half)
    }
}

/// If `v = p^j` for an odd prime `p` and some `j` in `support`, returns that
/// `(p, j)`. Values have a unique prime-power representation, so at most one
/// exponent can match.
fn pure_power_exponent(v: u64, support: &BTreeSet<u32>) -> Option<(u64, u32)> {
    if v < 9 {
        return None; // smallest pure number is 3^2
    }
    for &j in support {
        let p = nt::integer_root(v, j);
        if p >= 3 && p % 2 == 1 && nt::pow_checked(p, j) == Some(v) && nt::is_prime(p) {
            return Some((p, j));
        }
    }
    None
}

/// A proper power of an odd prime together with its successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PureSite {
    pub p: u64,
    pub j: u32,
    pub value: u64,
    pub successor: u64,
}

/// All pure sites with value <= `limit`, sorted by value. When `exponents`
/// is given, only those exponents contribute.
pub fn pure_sites_up_to(limit: u64, exponents: Option<&BTreeSet<u32>>) -> Vec<PureSite> {
    let mut sites = Vec::new();
    if limit < 9 {
        return sites;
    }
    let primes = nt::sieve(nt::integer_root(limit, 2));
    let max_j = {
        let mut j = 2u32;
        while nt::pow_checked(3, j + 1).is_some_and(|p| p <= limit) {
            j += 1;
        }
        j
    };
    for j in 2..=max_j {
        if exponents.is_some_and(|set| !set.contains(&j)) {
            continue;
        }
        for &p in primes.iter().skip(1) {
            // skip p = 2
            match nt::pow_checked(p, j) {
                Some(value) if value <= limit => sites.push(PureSite {
                    p,
                    j,
                    value,
                    successor: value + 1,
                }),
                _ => break,
            }
        }
    }
    sites.sort_by_key(|s| s.value);
    sites
}

/// Outcome of [`Construction::validate_prefix`] / [`validate_values`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub n: u64,
    pub injective: bool,
    pub coverage: bool,
    /// First repeated value, as `(position, value)`.
    pub first_duplicate: Option<(u64, u64)>,
    /// Smallest value <= n/2 missing from the prefix.
    pub first_missing: Option<u64>,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.injective && self.coverage
    }
}

/// Permutation-prefix validation over raw values (1-based positions).
pub fn validate_values(values: &[u64]) -> ValidityReport {
    let n = values.len() as u64;
    let bound = n / 2;
    let mut seen = HashSet::with_capacity(values.len());
    let mut covered = vec![false; bound as usize + 1];
    let mut first_duplicate = None;
    for (idx, &v) in values.iter().enumerate() {
        if !seen.insert(v) && first_duplicate.is_none() {
            first_duplicate = Some((idx as u64 + 1, v));
        }
        if v >= 1 && v <= bound {
            covered[v as usize] = true;
        }
    }
    let first_missing = (1..=bound).find(|&v| !covered[v as usize]);
    ValidityReport {
        n,
        injective: first_duplicate.is_none(),
        coverage: first_missing.is_none(),
        first_duplicate,
        first_missing,
    }
}
