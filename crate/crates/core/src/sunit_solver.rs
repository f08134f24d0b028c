//! Exhaustive search for `d_3 b^m + d_2 b^n + d_1 = q_1^{r_1} ... q_s^{r_s}`
//! below an exponent cap, the `2^m + 2^n + 1` checker, and empirical tables.
//!
//! Candidates are screened by residues before any big-integer work: an
//! S-unit reduced modulo `q^t` (`q` in `S`) is `0` or `q^r h` with `h` in
//! the subgroup generated by the other primes of `S`; modulo a prime
//! `l` outside `S` it lies in the subgroup generated by `S`. Only
//! survivors are built and divided out.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arithmetic::{
    greatest_prime_factor, is_prime_u64, s_part, FactorEffort, FactorStatus, LargestPrime, PrimeSet,
};
use crate::effective_bounds::iterated_logs;
use crate::rigorous::{escalate, ln_biguint, RigorousReal, DEFAULT_PRECISION};
use crate::serde_big;
use crate::sparse_digits::{EnumerationCursor, ThreeTermCursor};
use crate::{Error, Result};

/// Largest modulus used for a prime-power residue table.
pub const MAX_RESIDUE_MODULUS: u64 = 1 << 16;
/// Auxiliary primes are drawn from below this bound.
const AUX_PRIME_LIMIT: u64 = 2000;
const AUX_PRIME_COUNT: usize = 6;

/// One relation `u = d_3 b^m + d_2 b^n + d_1 = ∏ q_i^{r_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub base: u64,
    pub m: u32,
    /// `None` when `d_2 = 0`.
    pub n: Option<u32>,
    pub d3: u64,
    pub d2: u64,
    pub d1: u64,
    /// Exponents over the prime set, in its order.
    pub exponents: Vec<u64>,
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
}

impl SolutionRecord {
    fn sort_key(&self) -> (&BigUint, u32, Option<u32>, u64, u64, u64) {
        (&self.value, self.m, self.n, self.d3, self.d2, self.d1)
    }

    pub fn from_digits(&self) -> BigUint {
        let b = BigUint::from(self.base);
        let mut u = BigUint::from(self.d3) * b.pow(self.m) + BigUint::from(self.d1);
        if let Some(n) = self.n {
            u += BigUint::from(self.d2) * b.pow(n);
        }
        u
    }

    pub fn from_exponents(&self, primes: &PrimeSet) -> BigUint {
        primes
            .primes()
            .iter()
            .zip(&self.exponents)
            .map(|(&q, &r)| BigUint::from(q).pow(r as u32))
            .product()
    }

    /// Both reconstructions agree with `value` and the digit constraints hold.
    pub fn revalidate(&self, primes: &PrimeSet) -> bool {
        let b = self.base;
        let digits_ok = (1..b).contains(&self.d3)
            && (1..b).contains(&self.d1)
            && self.d2 < b
            && match self.n {
                Some(n) => n > 0 && n < self.m && self.d2 > 0,
                None => self.d2 == 0 && self.m > 0,
            };
        digits_ok
            && self.exponents.len() == primes.len()
            && self.from_digits() == self.value
            && self.from_exponents(primes) == self.value
            && !(&self.value % b).is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub workers: usize,
    /// Exponent `t` of the `q^t` residue tables.
    pub residue_exponent: u32,
    /// Drop `d_2 = 0` relations.
    pub strict: bool,
    /// Use residue screening at all.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { workers: 1, residue_exponent: 10, strict: false, prune: true }
    }
}

/// Residues an S-unit can take modulo `modulus`, with `b^e mod modulus`.
#[derive(Debug, Clone)]
struct ResidueFilter {
    modulus: u64,
    allowed: Vec<bool>,
    powers: Vec<u64>,
    /// Fraction of residues allowed, for ordering the checks.
    density: f64,
}

impl ResidueFilter {
    fn new(modulus: u64, allowed: Vec<bool>, b: u64, m_max: u32) -> Self {
        let mut powers = Vec::with_capacity(m_max as usize + 1);
        let mut x = 1 % modulus;
        for _ in 0..=m_max {
            powers.push(x);
            x = mulmod(x, b % modulus, modulus);
        }
        let density = allowed.iter().filter(|&&a| a).count() as f64 / modulus as f64;
        Self { modulus, allowed, powers, density }
    }

    #[inline]
    fn admits(&self, d3: u64, m: u32, d2: u64, n: u32, d1: u64) -> bool {
        let md = self.modulus as u128;
        let r = (d3 as u128 * self.powers[m as usize] as u128
            + d2 as u128 * self.powers[n as usize] as u128
            + d1 as u128)
            % md;
        self.allowed[r as usize]
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Closure of `{1}` under multiplication by `gens` modulo `modulus`.
fn subgroup(gens: &[u64], modulus: u64) -> Vec<bool> {
    let mut seen = vec![false; modulus as usize];
    let start = 1 % modulus;
    seen[start as usize] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = mulmod(x, g % modulus, modulus);
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Residues modulo `q^t` of products of primes of `S`.
fn prime_power_filter(q: u64, t: u32, primes: &[u64]) -> (u64, Vec<bool>) {
    let modulus = q.pow(t);
    let others: Vec<u64> = primes.iter().copied().filter(|&p| p != q).collect();
    let units = subgroup(&others, modulus);
    let mut allowed = vec![false; modulus as usize];
    allowed[0] = true;
    let mut qr = 1u64;
    for _ in 0..t {
        for (h, _) in units.iter().enumerate().filter(|(_, &u)| u) {
            allowed[mulmod(qr, h as u64, modulus) as usize] = true;
        }
        qr *= q;
    }
    (modulus, allowed)
}

fn build_filters(b: u64, primes: &[u64], m_max: u32, t: u32) -> Vec<ResidueFilter> {
    let mut filters = Vec::new();
    for &q in primes {
        let mut tq = 0;
        while tq < t && q.checked_pow(tq + 1).is_some_and(|x| x <= MAX_RESIDUE_MODULUS) {
            tq += 1;
        }
        if tq == 0 {
            continue;
        }
        let (modulus, allowed) = prime_power_filter(q, tq, primes);
        filters.push(ResidueFilter::new(modulus, allowed, b, m_max));
    }
    let mut aux: Vec<ResidueFilter> = (3..AUX_PRIME_LIMIT)
        .filter(|&l| is_prime_u64(l) && !primes.contains(&l))
        .filter_map(|l| {
            let allowed = subgroup(primes, l);
            let size = allowed.iter().filter(|&&a| a).count() as u64;
            (size < l - 1).then(|| ResidueFilter::new(l, allowed, b, m_max))
        })
        .collect();
    aux.sort_by(|x, y| x.density.partial_cmp(&y.density).unwrap_or(Ordering::Equal));
    aux.truncate(AUX_PRIME_COUNT);
    filters.extend(aux);
    filters.retain(|f| f.density < 1.0);
    filters.sort_by(|x, y| x.density.partial_cmp(&y.density).unwrap_or(Ordering::Equal));
    filters
}

struct SearchSpace<'a> {
    b: u64,
    primes: &'a PrimeSet,
    filters: Vec<ResidueFilter>,
    powers: Vec<BigUint>,
    strict: bool,
}

impl SearchSpace<'_> {
    fn admits(&self, d3: u64, m: u32, d2: u64, n: u32, d1: u64) -> bool {
        self.filters.iter().all(|f| f.admits(d3, m, d2, n, d1))
    }

    fn test(&self, m: u32, n: Option<u32>, d3: u64, d2: u64, d1: u64, out: &mut Vec<SolutionRecord>) {
        let mut u = BigUint::from(d3) * &self.powers[m as usize] + BigUint::from(d1);
        if let Some(n) = n {
            u += BigUint::from(d2) * &self.powers[n as usize];
        }
        let f = s_part(&u, self.primes).expect("positive candidate");
        if f.is_s_unit() {
            out.push(SolutionRecord {
                base: self.b,
                m,
                n,
                d3,
                d2,
                d1,
                exponents: f.exponents,
                value: u,
            });
        }
    }

    fn scan_m(&self, m: u32, out: &mut Vec<SolutionRecord>) {
        let b = self.b;
        for d3 in 1..b {
            if !self.strict {
                for d1 in 1..b {
                    if self.admits(d3, m, 0, 0, d1) {
                        self.test(m, None, d3, 0, d1, out);
                    }
                }
            }
            for n in 1..m {
                for d2 in 1..b {
                    for d1 in 1..b {
                        if self.admits(d3, m, d2, n, d1) {
                            self.test(m, Some(n), d3, d2, d1, out);
                        }
                    }
                }
            }
        }
    }
}

/// Every relation with `m <= m_max`, sorted by value, then `(m, n, d_3, d_2, d_1)`.
pub fn solve_three_digit(b: u64, primes: &PrimeSet, m_max: u32, opts: &SolveOptions) -> Result<Vec<SolutionRecord>> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if primes.is_empty() {
        return Err(Error::EmptyPrimeSet);
    }
    if m_max < 2 {
        return Err(Error::InvalidArgument("m_max must be at least 2".into()));
    }
    if opts.workers == 0 {
        return Err(Error::InvalidArgument("worker count must be at least 1".into()));
    }
    let filters = if opts.prune {
        build_filters(b, primes.primes(), m_max, opts.residue_exponent)
    } else {
        Vec::new()
    };
    let base = BigUint::from(b);
    let powers: Vec<BigUint> = (0..=m_max).map(|e| base.pow(e)).collect();
    let space = SearchSpace { b, primes, filters, powers, strict: opts.strict };

    let workers = opts.workers.min(m_max as usize);
    let mut found: Vec<SolutionRecord> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let space = &space;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for m in (1..=m_max).filter(|m| (*m as usize - 1) % workers == w) {
                        space.scan_m(m, &mut out);
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("solver worker panicked"))
            .collect()
    });
    found.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(found)
}

/// `[2^m + 2^n + 1]_{{3,5}} > 2^{3m/4}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub m: u32,
    pub n: u32,
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
    #[serde(with = "serde_big::biguint")]
    pub s_part: BigUint,
    /// `log_2` of the cap, `3m/4`.
    pub cap_log2: f64,
    pub s_part_log2: f64,
}

/// All `(m, n)`, `m_max >= m > n > 0`, violating the `2^{3m/4}` cap for `S = {3, 5}`.
pub fn check_problem42(m_max: u32) -> Result<Vec<Violation>> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("m_max must be at least 2".into()));
    }
    let set = PrimeSet::new(vec![3, 5])?;
    let mut out = Vec::new();
    for m in 2..=m_max {
        let cap4 = BigUint::one() << (3 * m as u64);
        for n in 1..m {
            let u = (BigUint::one() << m) + (BigUint::one() << n) + 1u32;
            let part = s_part(&u, &set)?.s_part();
            if part.pow(4) > cap4 {
                out.push(Violation {
                    m,
                    n,
                    s_part_log2: log2(&part),
                    value: u,
                    s_part: part,
                    cap_log2: 0.75 * m as f64,
                });
            }
        }
    }
    Ok(out)
}

fn log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 60;
    (n >> shift).to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64
}

/// A threshold that is either a number or outside the iterated-log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdCell {
    Value(f64),
    NotApplicable,
}

impl Serialize for ThresholdCell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Value(v) => s.serialize_f64(*v),
            Self::NotApplicable => s.serialize_str("n/a"),
        }
    }
}

impl<'de> Deserialize<'de> for ThresholdCell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Self::Value(v)),
            Raw::Text(t) if t == "n/a" => Ok(Self::NotApplicable),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unexpected threshold {t:?}"))),
        }
    }
}

impl std::fmt::Display for ThresholdCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Value(v) => write!(f, "{v}"),
            Self::NotApplicable => f.write_str("n/a"),
        }
    }
}

/// One row of an empirical table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    /// Position `j` in the sequence, from 1.
    pub index: usize,
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
    /// `(m, n)` pairs for `a^m + c^n + 1` rows.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<(u32, u32)>,
    #[serde(with = "serde_big::opt_biguint", skip_serializing_if = "Option::is_none", default)]
    pub s_part: Option<BigUint>,
    #[serde(with = "serde_big::opt_biguint", skip_serializing_if = "Option::is_none", default)]
    pub cofactor: Option<BigUint>,
    /// `[u]_S < u^ε`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub below_eps: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub largest_prime: Option<LargestPrime>,
    /// `(1 - ε) ll u · lll u / llll u`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<ThresholdCell>,
    /// `P[u]` exceeds the threshold; only set when `P[u]` is certain.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exceeds_threshold: Option<bool>,
}

impl TrendRow {
    fn bare(index: usize, value: BigUint) -> Self {
        Self {
            index,
            value,
            witnesses: Vec::new(),
            s_part: None,
            cofactor: None,
            below_eps: None,
            largest_prime: None,
            threshold: None,
            exceeds_threshold: None,
        }
    }
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// `s < u^ε` decided exactly for small denominators, otherwise on
/// logarithm enclosures.
pub fn below_power(s: &BigUint, u: &BigUint, eps: &BigRational) -> Result<bool> {
    check_eps(eps)?;
    if s.is_zero() || u.is_zero() {
        return Err(Error::NonPositive);
    }
    if s.is_one() {
        return Ok(!u.is_one());
    }
    let (a, c) = (eps.numer(), eps.denom());
    if let (Some(a), Some(c)) = (a.to_u32(), c.to_u32()) {
        if c as u64 * s.bits() + a as u64 * u.bits() <= 1 << 20 {
            return Ok(s.pow(c) < u.pow(a));
        }
    }
    escalate(DEFAULT_PRECISION, |prec| {
        let ls = ln_biguint(s, prec)?;
        let lu = ln_biguint(u, prec)?.mul(&RigorousReal::from_ratio(eps, prec));
        Ok(if ls.certainly_lt(&lu) {
            Some(true)
        } else if lu.certainly_le(&ls) {
            Some(false)
        } else {
            None
        })
    })?
    .ok_or_else(|| Error::Undecided("comparison of [u]_S with u^eps".into()))
}

/// S-part rows for the first `j_count` members of `u^(k)` in base `b`.
pub fn verify_spart_trend(b: u64, k: usize, primes: &PrimeSet, j_count: usize, eps: &BigRational) -> Result<Vec<TrendRow>> {
    check_eps(eps)?;
    if primes.is_empty() {
        return Err(Error::EmptyPrimeSet);
    }
    EnumerationCursor::new(b, k)?
        .take(j_count)
        .enumerate()
        .map(|(i, x)| {
            let f = s_part(&x.value, primes)?;
            let part = f.s_part();
            let mut row = TrendRow::bare(i + 1, x.value.clone());
            row.below_eps = Some(below_power(&part, &x.value, eps)?);
            row.s_part = Some(part);
            row.cofactor = Some(f.cofactor);
            Ok(row)
        })
        .collect()
}

/// Which sequence a P-table walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    /// `u^(k)` in base `base`.
    Sparse { base: u64, k: usize },
    /// `a^m + c^n + 1`.
    ThreeTerm { a: u64, c: u64 },
}

/// Threshold cell for `u`; `None` in the enclosure when outside the domain.
fn threshold_for(u: &BigUint, eps: &BigRational) -> Result<Option<RigorousReal>> {
    let Some(logs) = iterated_logs(u, DEFAULT_PRECISION)? else {
        return Ok(None);
    };
    let prec = logs[0].precision();
    let one_minus = RigorousReal::from_ratio(&(BigRational::one() - eps), prec);
    Ok(Some(one_minus.mul(&logs[1]).mul(&logs[2]).div(&logs[3])))
}

/// `P[u]` rows for the first `count` members of `source`.
pub fn p_table(source: Source, count: usize, effort: &FactorEffort, eps: &BigRational) -> Result<Vec<TrendRow>> {
    check_eps(eps)?;
    if *eps >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    let members: Vec<(BigUint, Vec<(u32, u32)>)> = match source {
        Source::Sparse { base, k } => EnumerationCursor::new(base, k)?
            .take(count)
            .map(|x| (x.value, Vec::new()))
            .collect(),
        Source::ThreeTerm { a, c } => ThreeTermCursor::new(a, c)?
            .take(count)
            .map(|x| (x.value, x.witnesses))
            .collect(),
    };
    members
        .into_iter()
        .enumerate()
        .map(|(i, (u, witnesses))| {
            let mut row = TrendRow::bare(i + 1, u.clone());
            row.witnesses = witnesses;
            if u < BigUint::from(2u32) {
                row.threshold = Some(ThresholdCell::NotApplicable);
                return Ok(row);
            }
            let lp = greatest_prime_factor(&u, effort)?;
            let bound = threshold_for(&u, eps)?;
            row.threshold = Some(match &bound {
                Some(t) => ThresholdCell::Value(t.midpoint_f64()),
                None => ThresholdCell::NotApplicable,
            });
            if let (Some(t), FactorStatus::Complete, Some(p)) = (&bound, lp.status, &lp.prime) {
                row.exceeds_threshold = Some(exceeds(p, t)?);
            }
            row.largest_prime = Some(lp);
            Ok(row)
        })
        .collect()
}

fn exceeds(p: &BigUint, t: &RigorousReal) -> Result<bool> {
    let pr = RigorousReal::from_biguint(p, t.precision());
    if t.certainly_lt(&pr) {
        return Ok(true);
    }
    if pr.certainly_le(t) {
        return Ok(false);
    }
    Err(Error::Undecided("P[u] against the threshold".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(q: &[u64]) -> PrimeSet {
        PrimeSet::new(q.to_vec()).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Unscreened enumeration with machine integers.
    fn oracle(b: u64, primes: &[u64], m_max: u32) -> Vec<(u128, u32, Option<u32>, u64, u64, u64)> {
        let unit = |mut u: u128| {
            for &q in primes {
                while u.is_multiple_of(q as u128) {
                    u /= q as u128;
                }
            }
            u == 1
        };
        let mut out = Vec::new();
        for m in 1..=m_max {
            let bm = (b as u128).pow(m);
            for d3 in 1..b {
                for d1 in 1..b {
                    let u = d3 as u128 * bm + d1 as u128;
                    if unit(u) {
                        out.push((u, m, None, d3, 0, d1));
                    }
                    for n in 1..m {
                        for d2 in 1..b {
                            let u = u + d2 as u128 * (b as u128).pow(n);
                            if unit(u) {
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

    fn flatten(r: &[SolutionRecord]) -> Vec<(u128, u32, Option<u32>, u64, u64, u64)> {
        r.iter()
            .map(|s| (s.value.to_u128().unwrap(), s.m, s.n, s.d3, s.d2, s.d1))
            .collect()
    }

    #[test]
    fn base_two_three_five() {
        let s = set(&[3, 5]);
        let sols = solve_three_digit(2, &s, 20, &SolveOptions::default()).unwrap();
        let has = |u: u64, m: u32, n: Option<u32>| sols.iter().any(|r| r.value == big(u) && r.m == m && r.n == n);
        assert!(has(25, 4, Some(3)));
        assert!(has(81, 6, Some(4)));
        for (u, m) in [(3, 1), (5, 2), (9, 3)] {
            assert!(has(u, m, None), "{u}");
        }
        assert!(sols.iter().all(|r| r.revalidate(&s)));
        assert_eq!(flatten(&sols), oracle(2, &[3, 5], 20));
    }

    #[test]
    fn seven_from_four_two_one() {
        let sols = solve_three_digit(2, &set(&[7]), 10, &SolveOptions::default()).unwrap();
        let hit: Vec<_> = sols.iter().filter(|r| r.value == big(7)).collect();
        assert_eq!(hit.len(), 1);
        assert_eq!((hit[0].m, hit[0].n, hit[0].exponents.clone()), (2, Some(1), vec![1]));
    }

    #[test]
    fn strict_drops_two_digit_values() {
        let opts = SolveOptions { strict: true, ..SolveOptions::default() };
        let sols = solve_three_digit(2, &set(&[3, 5]), 12, &opts).unwrap();
        assert!(sols.iter().all(|r| r.n.is_some() && r.d2 > 0));
    }

    #[test]
    fn pruning_matches_oracle_on_several_bases() {
        for (b, s, m) in [(3, vec![2, 5], 12), (10, vec![3, 7], 8), (10, vec![2, 3], 7), (5, vec![2, 3, 7], 9), (6, vec![5, 7], 8)] {
            let got = solve_three_digit(b, &set(&s), m, &SolveOptions::default()).unwrap();
            assert_eq!(flatten(&got), oracle(b, &s, m), "b={b} S={s:?}");
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let s = set(&[3, 5, 7]);
        let one = solve_three_digit(2, &s, 24, &SolveOptions::default()).unwrap();
        let many = solve_three_digit(2, &s, 24, &SolveOptions { workers: 7, ..SolveOptions::default() }).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn unpruned_equals_pruned() {
        let s = set(&[3, 5]);
        let a = solve_three_digit(2, &s, 18, &SolveOptions::default()).unwrap();
        let b = solve_three_digit(2, &s, 18, &SolveOptions { prune: false, ..SolveOptions::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn residue_tables_contain_every_s_unit() {
        let primes = [2u64, 3, 5];
        let (modulus, allowed) = prime_power_filter(3, 6, &primes);
        for a in 0..20u32 {
            for b in 0..12u32 {
                for c in 0..9u32 {
                    let u = 2u128.pow(a) * 3u128.pow(b) * 5u128.pow(c);
                    assert!(allowed[(u % modulus as u128) as usize]);
                }
            }
        }
        // 2 has order 6 modulo 9 and generates the units; with S = {3, 7}
        // only the subgroup of 7 (order 3 mod 9) is reachable, and 3 * 7^k = 3.
        let (modulus, allowed) = prime_power_filter(3, 2, &[3, 7]);
        assert_eq!(modulus, 9);
        let reached: Vec<usize> = (0..9).filter(|&i| allowed[i]).collect();
        assert_eq!(reached, vec![0, 1, 3, 4, 7]);
    }

    #[test]
    fn rejects_bad_solver_arguments() {
        assert!(solve_three_digit(1, &set(&[3]), 5, &SolveOptions::default()).is_err());
        assert!(solve_three_digit(2, &set(&[3]), 1, &SolveOptions::default()).is_err());
        assert!(solve_three_digit(2, &set(&[3]), 5, &SolveOptions { workers: 0, ..SolveOptions::default() }).is_err());
    }

    #[test]
    fn cap_violations_small_slices() {
        assert!(check_problem42(3).unwrap().is_empty());
        let v: Vec<(u32, u32)> = check_problem42(10).unwrap().iter().map(|x| (x.m, x.n)).collect();
        assert_eq!(v, vec![(4, 3), (6, 4)]);
        let v = check_problem42(10).unwrap();
        assert_eq!(v[0].s_part, big(25));
        assert_eq!(v[1].s_part, big(81));
        assert!(check_problem42(1).is_err());
    }

    #[test]
    fn trend_rows() {
        let rows = verify_spart_trend(2, 3, &set(&[3, 5]), 60, &ratio(9, 10)).unwrap();
        assert_eq!(rows.len(), 60);
        for r in &rows {
            assert_eq!(r.s_part.as_ref().unwrap() * r.cofactor.as_ref().unwrap(), r.value);
        }
        let r81 = rows.iter().find(|r| r.value == big(81)).unwrap();
        assert_eq!(r81.s_part, Some(big(81)));
        assert_eq!(r81.cofactor, Some(big(1)));
        assert_eq!(r81.below_eps, Some(false));
        let higher = verify_spart_trend(2, 3, &set(&[3, 5]), 60, &ratio(99, 100)).unwrap();
        for (lo, hi) in rows.iter().zip(&higher) {
            assert!(!lo.below_eps.unwrap() || hi.below_eps.unwrap());
        }
    }

    #[test]
    fn below_power_exact_edges() {
        // 9 = 81^(1/2): not strictly below
        assert!(!below_power(&big(9), &big(81), &ratio(1, 2)).unwrap());
        assert!(below_power(&big(8), &big(81), &ratio(1, 2)).unwrap());
        assert!(!below_power(&big(1), &big(1), &ratio(1, 2)).unwrap());
        let eps = BigRational::new(123_456_789.into(), 1_000_000_000.into());
        assert!(below_power(&big(2), &big(1000), &eps).unwrap());
    }

    #[test]
    fn p_table_flags_domain() {
        let rows = p_table(Source::Sparse { base: 2, k: 3 }, 400, &FactorEffort::default(), &ratio(1, 10)).unwrap();
        let row = rows.iter().find(|r| r.value == big(1_049_601));
        if let Some(row) = row {
            let lp = row.largest_prime.as_ref().unwrap();
            assert_eq!(lp.prime, Some(big(331)));
            assert_eq!(lp.status, FactorStatus::Complete);
            assert_eq!(row.threshold, Some(ThresholdCell::NotApplicable));
            assert_eq!(row.exceeds_threshold, None);
        }
        assert_eq!(rows[0].value, big(1));
        assert!(rows[0].largest_prime.is_none());
    }

    #[test]
    fn p_table_three_term_witnesses() {
        let rows = p_table(Source::ThreeTerm { a: 6, c: 2 }, 30, &FactorEffort::default(), &ratio(1, 10)).unwrap();
        assert_eq!(rows.len(), 30);
        // 6 + 2^5 + 1 = 39 = 6^2 + 2 + 1
        let r = rows.iter().find(|r| r.value == big(39)).unwrap();
        assert_eq!(r.witnesses, vec![(1, 5), (2, 1)]);
    }

    #[test]
    fn partial_factorizations_are_not_compared() {
        // 2^127 - 1 is prime: with a tiny trial ceiling P stays unknown
        let rows = p_table(Source::ThreeTerm { a: 3, c: 2 }, 5, &FactorEffort::trial(2), &ratio(1, 10)).unwrap();
        for r in rows {
            let lp = r.largest_prime.unwrap();
            if lp.status == FactorStatus::Partial {
                assert_eq!(r.exceeds_threshold, None);
            }
        }
    }

    #[test]
    fn threshold_cell_serde() {
        let js = serde_json::to_string(&[ThresholdCell::Value(1.5), ThresholdCell::NotApplicable]).unwrap();
        assert_eq!(js, "[1.5,\"n/a\"]");
        let back: Vec<ThresholdCell> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, vec![ThresholdCell::Value(1.5), ThresholdCell::NotApplicable]);
    }
}
