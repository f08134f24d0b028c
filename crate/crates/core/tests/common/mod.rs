//! Independent reference implementations shared by the integration tests.
//! They use machine integers and straightforward loops only.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub fn nonzero_digits(mut n: u64, b: u64) -> usize {
    let mut c = 0;
    while n > 0 {
        if !n.is_multiple_of(b) {
            c += 1;
        }
        n /= b;
    }
    c
}

/// Integers in `[1, limit]` not divisible by `b` with at most `k` nonzero digits.
pub fn brute_sparse(b: u64, k: usize, limit: u64) -> Vec<u64> {
    (1..=limit).filter(|&n| n % b != 0 && nonzero_digits(n, b) <= k).collect()
}

pub type Relation = (u128, u32, Option<u32>, u64, u64, u64);

fn is_unit(mut u: u128, primes: &[u64]) -> bool {
    for &q in primes {
        while u.is_multiple_of(q as u128) {
            u /= q as u128;
        }
    }
    u == 1
}

/// Every `d3 b^m + d2 b^n + d1` (`d2 = 0` allowed, reported as `n = None`)
/// with `m <= m_max` that is an S-unit, sorted.
pub fn solver_oracle(b: u64, primes: &[u64], m_max: u32, strict: bool) -> Vec<Relation> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let bm = (b as u128).pow(m);
        for d3 in 1..b {
            for d1 in 1..b {
                let base = d3 as u128 * bm + d1 as u128;
                if !strict && is_unit(base, primes) {
                    out.push((base, m, None, d3, 0, d1));
                }
                for n in 1..m {
                    for d2 in 1..b {
                        let u = base + d2 as u128 * (b as u128).pow(n);
                        if is_unit(u, primes) {
                            out.push((u, m, Some(n), d3, d2, d1));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// `(m, n)` with `[2^m + 2^n + 1]_{3,5}^4 > 2^{3m}`.
pub fn check42_oracle(m_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 2..=m_max {
        for n in 1..m {
            let mut u: u128 = (1u128 << m) + (1u128 << n) + 1;
            let mut s: u128 = 1;
            for q in [3u128, 5] {
                while u.is_multiple_of(q) {
                    u /= q;
                    s *= q;
                }
            }
            if s.pow(4) > 1u128 << (3 * m) {
                out.push((m, n));
            }
        }
    }
    out
}

/// Prime factorization by trial division.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Π (x_i/y_i)^{b_i} - 1` in exact rationals.
pub fn lambda(items: &[(i64, i64, i64)]) -> BigRational {
    let mut prod = BigRational::one();
    for &(x, y, b) in items {
        let r = BigRational::new(BigInt::from(x), BigInt::from(y));
        let r = if b >= 0 { r } else { r.recip() };
        for _ in 0..b.unsigned_abs() {
            prod *= &r;
        }
    }
    prod - BigRational::one()
}

/// Natural log of a positive big integer, to double precision.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (&n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).bits() == 0 {
        n /= &p;
        k += 1;
    }
    k
}
