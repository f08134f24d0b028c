//! Exact S-parts, valuations, smoothness, greatest prime factor and radical
//! on arbitrary-precision integers.
//!
//! S-parts only ever divide by the members of `S`, so they are exact even
//! when the cofactor is out of reach. Everything that needs a full
//! factorization is effort-bounded and reports `Partial`/`Unknown` instead
//! of guessing.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_big;

/// Witness set that makes Miller-Rabin deterministic below 3.3e24.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mr_limit() -> BigUint {
    // 3317044064679887385961981
    BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("literal")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES[..12] {
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

fn strong_probable_prime(n: &BigUint, a: u64) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().expect("n > 1");
    let d = &n1 >> s;
    let mut x = BigUint::from(a).modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Deterministic primality below 3.3e24; `None` above that range.
pub fn is_prime_certain(n: &BigUint) -> Option<bool> {
    if let Some(v) = n.to_u64() {
        return Some(is_prime_u64(v));
    }
    if *n >= mr_limit() {
        return None;
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Some(false);
        }
    }
    Some(MR_BASES.iter().all(|&a| strong_probable_prime(n, a)))
}

/// The finite prime set `S = {q_1 < ... < q_s}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyPrimeSet);
        }
        primes.sort_unstable();
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePrime(w[0]));
            }
        }
        if let Some(&q) = primes.iter().find(|&&q| !is_prime_u64(q)) {
            return Err(Error::NotPrime(q.to_string()));
        }
        Ok(Self { primes })
    }

    /// The first `s` primes.
    pub fn first(s: usize) -> Result<Self> {
        Self::new((2u64..).filter(|&q| is_prime_u64(q)).take(s).collect())
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, q: u64) -> bool {
        self.primes.binary_search(&q).is_ok()
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(s: PrimeSet) -> Self {
        s.primes
    }
}

/// `n = q_1^{r_1} ... q_s^{r_s} M` with `M` coprime to every `q_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFactorization {
    #[serde(with = "serde_big::biguint")]
    pub n: BigUint,
    pub primes: PrimeSet,
    pub exponents: Vec<u64>,
    #[serde(with = "serde_big::biguint")]
    pub cofactor: BigUint,
}

impl SFactorization {
    /// `[n]_S`.
    pub fn s_part(&self) -> BigUint {
        self.primes
            .primes()
            .iter()
            .zip(&self.exponents)
            .map(|(&q, &r)| BigUint::from(q).pow(r as u32))
            .product()
    }

    pub fn is_s_unit(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Strips all factors `p` from `n`, returning the count.
fn strip(n: &mut BigUint, p: u64) -> u64 {
    let mut v = 0;
    if let Some(mut small) = n.to_u64() {
        while small % p == 0 {
            small /= p;
            v += 1;
        }
        *n = BigUint::from(small);
        return v;
    }
    let pb = BigUint::from(p);
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

pub fn valuation(n: &BigUint, p: u64) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::NonPositive);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut m = n.clone();
    Ok(strip(&mut m, p))
}

pub fn s_part(n: &BigUint, set: &PrimeSet) -> Result<SFactorization> {
    if n.is_zero() {
        return Err(Error::NonPositive);
    }
    let mut cofactor = n.clone();
    let exponents = set
        .primes()
        .iter()
        .map(|&q| strip(&mut cofactor, q))
        .collect();
    Ok(SFactorization {
        n: n.clone(),
        primes: set.clone(),
        exponents,
        cofactor,
    })
}

/// How hard to try when a full factorization is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEffort {
    pub trial_ceiling: u64,
    /// Pollard-Brent rho after trial division.
    pub second_stage: bool,
    pub iteration_budget: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        Self {
            trial_ceiling: 1_000_000,
            second_stage: false,
            iteration_budget: 1_000_000,
        }
    }
}

impl FactorEffort {
    pub fn trial(ceiling: u64) -> Self {
        Self {
            trial_ceiling: ceiling.max(2),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorStatus {
    Complete,
    Partial,
}

/// Prime factors found so far plus whatever could not be split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Certified primes with multiplicity, increasing.
    pub primes: Vec<(BigUint, u32)>,
    /// Product of the pieces that are not certified prime; 1 if none.
    pub unfactored: BigUint,
}

impl Factorization {
    pub fn status(&self) -> FactorStatus {
        if self.unfactored.is_one() {
            FactorStatus::Complete
        } else {
            FactorStatus::Partial
        }
    }
}

fn trial_divide_u64(mut n: u64, ceiling: u64, found: &mut Vec<(BigUint, u32)>) -> (u64, bool) {
    let mut push = |p: u64, e: u32| found.push((BigUint::from(p), e));
    for p in [2u64, 3] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            push(p, e);
        }
    }
    let mut d = 5u64;
    let mut step = 2;
    while d <= ceiling && (d as u128 * d as u128) <= n as u128 {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            push(d, e);
        }
        d += step;
        step = 6 - step;
    }
    // true: the loop ran out because d^2 > n, so n is 1 or prime
    let exhausted = (d as u128 * d as u128) > n as u128;
    (n, exhausted)
}

fn trial_divide(n: &BigUint, ceiling: u64, found: &mut Vec<(BigUint, u32)>) -> (BigUint, bool) {
    if let Some(small) = n.to_u64() {
        let (rest, exhausted) = trial_divide_u64(small, ceiling, found);
        return (BigUint::from(rest), exhausted);
    }
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= ceiling {
        if let Some(small) = rest.to_u64() {
            let (r, exhausted) = trial_divide_u64_from(small, d, ceiling, found);
            return (BigUint::from(r), exhausted);
        }
        let e = strip(&mut rest, d);
        if e > 0 {
            found.push((BigUint::from(d), e as u32));
        }
        d = next_candidate(d);
    }
    (rest, false)
}

fn next_candidate(d: u64) -> u64 {
    match d {
        2 => 3,
        3 => 5,
        _ if d % 6 == 5 => d + 2,
        _ => d + 4,
    }
}

fn trial_divide_u64_from(
    mut n: u64,
    mut d: u64,
    ceiling: u64,
    found: &mut Vec<(BigUint, u32)>,
) -> (u64, bool) {
    while d <= ceiling && (d as u128 * d as u128) <= n as u128 {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            found.push((BigUint::from(d), e));
        }
        d = next_candidate(d);
    }
    (n, (d as u128 * d as u128) > n as u128)
}

/// Pollard-Brent rho; returns a nontrivial factor of composite `n` or `None`
/// once `budget` iterations are spent.
fn rho_split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BLOCK: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BLOCK.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BLOCK;
                if *budget < BLOCK {
                    *budget = 0;
                    return None;
                }
                *budget -= BLOCK;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

/// Factors `n >= 1` within `effort`.
pub fn factorize(n: &BigUint, effort: &FactorEffort) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::NonPositive);
    }
    let ceiling = effort.trial_ceiling.max(2);
    let mut primes = Vec::new();
    let (rest, exhausted) = trial_divide(n, ceiling, &mut primes);
    let mut unfactored = BigUint::one();
    if !rest.is_one() {
        let bound = BigUint::from(ceiling) + 1u32;
        if exhausted || rest < &bound * &bound {
            primes.push((rest, 1));
        } else {
            let mut stack = vec![rest];
            let mut budget = if effort.second_stage {
                effort.iteration_budget
            } else {
                0
            };
            while let Some(piece) = stack.pop() {
                if piece < &bound * &bound || is_prime_certain(&piece) == Some(true) {
                    primes.push((piece, 1));
                    continue;
                }
                let known_composite = is_prime_certain(&piece) == Some(false);
                if (known_composite || piece >= mr_limit()) && budget > 0 {
                    match rho_split(&piece, &mut budget) {
                        Some(f) => {
                            let other = &piece / &f;
                            stack.push(f);
                            stack.push(other);
                        }
                        None => unfactored *= piece,
                    }
                } else {
                    unfactored *= piece;
                }
            }
        }
    }
    primes.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(primes.len());
    for (p, e) in primes {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization {
        primes: merged,
        unfactored,
    })
}

/// `P[n]` as far as `effort` allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargestPrime {
    /// Largest certified prime factor; with `Partial` status, `P[n]` is at least this.
    #[serde(with = "serde_big::opt_biguint")]
    pub prime: Option<BigUint>,
    pub status: FactorStatus,
    /// Unsplit cofactor (1 when complete); all its prime factors exceed the trial ceiling.
    #[serde(with = "serde_big::biguint")]
    pub unfactored: BigUint,
}

pub fn greatest_prime_factor(n: &BigUint, effort: &FactorEffort) -> Result<LargestPrime> {
    if *n < BigUint::from(2u32) {
        return Err(Error::Domain("greatest prime factor needs n >= 2".into()));
    }
    let f = factorize(n, effort)?;
    Ok(LargestPrime {
        prime: f.primes.last().map(|(p, _)| p.clone()),
        status: f.status(),
        unfactored: f.unfactored,
    })
}

/// `Q[n]`, the greatest square-free divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radical {
    /// Exact when complete; otherwise a divisor of `n` that `Q[n]` divides.
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
    pub status: FactorStatus,
}

pub fn radical(n: &BigUint, effort: &FactorEffort) -> Result<Radical> {
    if *n < BigUint::from(2u32) {
        return Err(Error::Domain("radical needs n >= 2".into()));
    }
    let f = factorize(n, effort)?;
    let value = f.primes.iter().map(|(p, _)| p.clone()).product::<BigUint>() * &f.unfactored;
    Ok(Radical {
        value,
        status: f.status(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Smooth,
    NotSmooth,
    Unknown,
}

/// Whether every prime factor of `n` is at most `bound`.
pub fn is_smooth(n: &BigUint, bound: u64, effort: &FactorEffort) -> Result<Smoothness> {
    if n.is_zero() {
        return Err(Error::NonPositive);
    }
    if bound < 2 {
        return Err(Error::InvalidArgument("smoothness bound must be at least 2".into()));
    }
    if n.is_one() {
        return Ok(Smoothness::Smooth);
    }
    // Dividing out every d <= bound decides the question outright.
    if bound <= effort.trial_ceiling {
        let mut found = Vec::new();
        let (rest, exhausted) = trial_divide(n, bound, &mut found);
        return Ok(if rest.is_one() || (exhausted && rest <= BigUint::from(bound)) {
            Smoothness::Smooth
        } else {
            Smoothness::NotSmooth
        });
    }
    let f = factorize(n, effort)?;
    let b = BigUint::from(bound);
    if f.primes.iter().any(|(p, _)| *p > b) {
        return Ok(Smoothness::NotSmooth);
    }
    if f.unfactored.is_one() || f.unfactored <= b {
        return Ok(Smoothness::Smooth);
    }
    if is_prime_certain(&f.unfactored) == Some(true) {
        return Ok(Smoothness::NotSmooth);
    }
    // every prime factor of the leftover exceeds the trial ceiling
    let c = BigUint::from(effort.trial_ceiling);
    if f.unfactored > &b * &b && f.unfactored < &c * &c * &c {
        // at most two prime factors, their product exceeds bound^2
        return Ok(Smoothness::NotSmooth);
    }
    Ok(Smoothness::Unknown)
}
