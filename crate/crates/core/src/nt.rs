//! Small number-theory helpers: deterministic 64-bit primality, integer
//! roots, and a plain sieve for bulk prime enumeration.

/// Deterministic Miller-Rabin for u64. The witness set below is known to be
/// exact for the full 64-bit range.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the j-th root of v (j >= 1).
pub(crate) fn integer_root(v: u64, j: u32) -> u64 {
    assert!(j >= 1);
    if j == 1 || v <= 1 {
        return v;
    }
    if j >= 64 {
        return 1; // 2^64 > u64::MAX, so the root of anything is 1
    }
    let mut r = (v as f64).powf(1.0 / j as f64).round() as u64;
    // Float roots can be off by one in either direction; settle exactly.
    while r > 1 && pow_checked(r, j).map_or(true, |p| p > v) {
        r -= 1;
    }
    while pow_checked(r + 1, j).is_some_and(|p| p <= v) {
        r += 1;
    }
    r
}

pub(crate) fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// All primes <= limit, ascending.
pub(crate) fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}
