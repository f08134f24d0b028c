//! Explicit exponent bounds for three-digit S-unit relations
//!
//! ```text
//! u = d_3 b^m + d_2 b^n + d_1 = q_1^{r_1} ... q_s^{r_s} M,   m > n > 0,
//! ```
//!
//! with digits below `b`, `d_1 d_3 != 0` and `M` coprime to `S`.
//!
//! Two linear forms are compared against their elementary size estimates:
//!
//! * `m >= 2n`: `Λ_a = q^r b^{-m} (M/d_3) - 1` satisfies
//!   `log|Λ_a| <= -(m/2 - 1) log b`, while Matveev's bound gives a lower
//!   bound growing only like `log m`.
//! * `m <= 2n`: with `p` the smallest prime of `b`,
//!   `Λ_u = q^r (M/d_1) - 1` has `v_p(Λ_u) >= m/2 - log b / log p`, while
//!   Yu's bound grows like `log m`.
//!
//! For a cofactor cap `A` (relations with `M <= A`) each branch yields the
//! first `m` from which the two estimates are incompatible. Every search runs
//! on interval enclosures; a comparison the enclosure cannot settle is
//! repeated at doubled precision, so the integers returned do not depend on
//! the starting precision.
//!
//! The exponent `c` of a certificate comes from the same search with the
//! growing cap `M <= max(A, b^{c(m+1)})`: past the reported threshold such a
//! relation is impossible, hence `M > b^{c(m+1)} > u^c` and
//! `[u]_S < u^{1-c}`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::PrimeSet;
use crate::lfl_bounds::{log_height, matveev_constant, yu_constant};
use crate::rigorous::{escalate, Dyadic, RigorousReal, DEFAULT_PRECISION, MAX_PRECISION};
use crate::{Error, Result};

/// Largest `k` tried for the exponent `c = 2^{-k}`.
const MAX_EXPONENT_SHIFT: u32 = 512;
/// Doubling steps allowed while bracketing a crossover.
const MAX_DOUBLINGS: u32 = 4096;

/// Bound for one branch of the argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchBound {
    /// Every relation in this branch has `m <= m_bound`.
    #[serde(with = "crate::serde_big::biguint")]
    pub m_bound: BigUint,
    /// The compared difference is nondecreasing in `m` from here on.
    #[serde(with = "crate::serde_big::biguint")]
    pub monotone_from: BigUint,
    /// Number of rationals in the linear form.
    pub terms: usize,
    /// The prime of the p-adic branch.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
    pub precision_used: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub base: u64,
    pub primes: PrimeSet,
    /// Relations with cofactor `M <= cofactor_cap` are covered.
    #[serde(with = "crate::serde_big::biguint")]
    pub cofactor_cap: BigUint,
    /// `Q = log q_1 ... log q_s`.
    pub log_product: RigorousReal,
    pub archimedean: BranchBound,
    pub padic: BranchBound,
    #[serde(with = "crate::serde_big::biguint")]
    pub m0: BigUint,
    /// `c = 2^{-k}` as a dyadic string.
    pub exponent: Dyadic,
    pub exponent_f64: f64,
    /// `[u]_S < u^{1-c}` for every relation with `m` above this value.
    #[serde(with = "crate::serde_big::biguint")]
    pub exponent_threshold: BigUint,
    pub precision_used: u32,
    pub assumptions: Vec<String>,
}

/// Cofactor model: `log A_N(m) = max(L_0, c (m+1) log b)` with `c = 2^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cap {
    Fixed,
    Power(u32),
}

#[derive(Debug, Clone)]
struct Setting {
    b: u64,
    p: u64,
    primes: Vec<u64>,
    cap: BigUint,
}

impl Setting {
    fn new(b: u64, primes: &PrimeSet, cap: &BigUint) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        if primes.is_empty() {
            return Err(Error::EmptyPrimeSet);
        }
        if *cap < BigUint::from(2u32) {
            return Err(Error::InvalidArgument("cofactor cap must be at least 2".into()));
        }
        Ok(Self {
            b,
            p: smallest_prime_factor(b),
            primes: primes.primes().to_vec(),
            cap: cap.clone(),
        })
    }

    /// Height cap of the cofactor term `M/d`.
    fn cofactor_height(&self) -> BigUint {
        self.cap.clone().max(BigUint::from(self.b - 1))
    }
}

pub fn smallest_prime_factor(b: u64) -> u64 {
    if b < 2 {
        return b;
    }
    (2..)
        .take_while(|d| d * d <= b)
        .find(|d| b.is_multiple_of(*d))
        .unwrap_or(b)
}

fn rr(n: &BigUint, prec: u32) -> RigorousReal {
    RigorousReal::from_biguint(n, prec)
}

fn int(n: i64, prec: u32) -> RigorousReal {
    RigorousReal::from_int(n, prec)
}

/// `log x / log p`, exact when `x` is a power of `p`.
fn log_ratio(x: &BigUint, p: u64, prec: u32) -> Result<RigorousReal> {
    let mut rest = x.clone();
    let mut k = 0i64;
    while !rest.is_zero() && (&rest % p).is_zero() {
        rest /= p;
        k += 1;
    }
    if rest.is_one() {
        return Ok(int(k, prec));
    }
    Ok(crate::rigorous::ln_biguint(x, prec)?.div(&int(p as i64, prec).ln()?))
}

fn pow2(k: u32, prec: u32) -> RigorousReal {
    int(1, prec).mul_pow2(-(k as i64))
}

/// Quantities of the Archimedean form at one precision.
#[derive(Debug, Clone)]
struct ArchModel {
    log_b: RigorousReal,
    /// `8 · 30^{N+3} N^{9/2} ∏ log A_j` over the non-cofactor slots.
    k_const: RigorousReal,
    /// `max_j κ_j log A_j` where `κ_j (m+1)` bounds the j-th exponent.
    w: RigorousReal,
    l0: RigorousReal,
    terms: usize,
}

impl ArchModel {
    fn new(set: &Setting, prec: u32) -> Result<Self> {
        let log_b = int(set.b as i64, prec).ln()?;
        // Primes of S dividing b absorb their share of b^{-m}.
        let mut rest = set.b;
        let mut slots: Vec<(RigorousReal, RigorousReal)> = Vec::new();
        for &q in &set.primes {
            while rest.is_multiple_of(q) {
                rest /= q;
            }
            let log_q = int(q as i64, prec).ln()?;
            let log_a = log_height(&BigUint::from(q), prec)?;
            slots.push((log_b.div(&log_q), log_a));
        }
        if rest > 1 {
            slots.push((int(1, prec), log_height(&BigUint::from(rest), prec)?));
        }
        let l0 = log_height(&set.cofactor_height(), prec)?;
        let terms = slots.len() + 1;
        let mut k_const = matveev_constant(terms, prec);
        let mut w = int(0, prec);
        for (kappa, log_a) in &slots {
            k_const = k_const.mul(log_a);
            w = w.max(&kappa.mul(log_a));
        }
        Ok(Self { log_b, k_const, w, l0, terms })
    }

    fn log_cofactor(&self, m1: &RigorousReal, cap: Cap) -> RigorousReal {
        match cap {
            Cap::Fixed => self.l0.clone(),
            Cap::Power(k) => self
                .l0
                .max(&m1.mul(&self.log_b).mul_pow2(-(k as i64))),
        }
    }

    /// `(m/2 - 1) log b - K (1 + log B̂)`; a nonnegative value excludes `m`.
    fn gap(&self, m: &BigUint, cap: Cap) -> Result<RigorousReal> {
        let prec = self.log_b.precision();
        let mr = rr(m, prec);
        let m1 = mr.add(&int(1, prec));
        let l = self.log_cofactor(&m1, cap);
        let one = int(1, prec);
        let b_hat = one.max(&m1.mul(&self.w).div(&l));
        let k = self.k_const.mul(&l);
        let lhs = mr.mul_pow2(-1).sub(&one).mul(&self.log_b);
        Ok(lhs.sub(&k.mul(&one.add(&b_hat.ln()?))))
    }

    /// `2 K / log b` at the fixed cap.
    fn monotone_bound(&self) -> RigorousReal {
        self.k_const.mul(&self.l0).mul_int(2).div(&self.log_b)
    }

    /// Slope in `m` once the growing cap dominates.
    fn power_slope(&self, k: u32) -> Result<RigorousReal> {
        let prec = self.log_b.precision();
        let c = pow2(k, prec);
        let one = int(1, prec);
        let b_c = one.max(&self.w.div(&c.mul(&self.log_b)));
        let drag = self.k_const.mul(&c).mul(&one.add(&b_c.ln()?));
        Ok(self.log_b.mul(&int(1, prec).mul_pow2(-1).sub(&drag)))
    }
}

/// Quantities of the p-adic form at one precision.
#[derive(Debug, Clone)]
struct PadicModel {
    log_b: RigorousReal,
    /// `log q_min` over the slots other than the cofactor.
    log_qmin: Option<RigorousReal>,
    /// `∏ log A_q` over those slots.
    q_prod: RigorousReal,
    yu: Option<RigorousReal>,
    /// `log T + log δ`, i.e. the part of `log T` not depending on `m`.
    t_const: RigorousReal,
    l0: RigorousReal,
    /// `log b / log p`.
    offset: RigorousReal,
    /// `L_0 / log p`.
    l0_over_p: RigorousReal,
    /// `log (b - 1) / log p`, zero for `b = 2`.
    digit_over_p: RigorousReal,
    terms: usize,
}

impl PadicModel {
    fn new(set: &Setting, prec: u32) -> Result<Self> {
        let log_b = int(set.b as i64, prec).ln()?;
        let log_p = int(set.p as i64, prec).ln()?;
        let mut q_prod = int(1, prec);
        let mut log_qmin: Option<RigorousReal> = None;
        let mut log_log_sum = int(0, prec);
        let mut count = 0usize;
        // p itself is absorbed into M/d_1, which then is a p-adic unit.
        for &q in set.primes.iter().filter(|&&q| q != set.p) {
            let log_a = log_height(&BigUint::from(q), prec)?;
            q_prod = q_prod.mul(&log_a);
            log_log_sum = log_log_sum.add(&log_a.ln()?);
            if log_qmin.is_none() {
                log_qmin = Some(int(q as i64, prec).ln()?);
            }
            count += 1;
        }
        let terms = count + 1;
        let nf = terms as i64;
        let t_const = RigorousReal::ln2(prec)
            .add(&int((nf + 1) * (6 * nf + 5), prec))
            .add(&log_p.mul_int(nf + 1))
            .add(&log_log_sum);
        let yu = if count > 0 { Some(yu_constant(terms, set.p, prec)?) } else { None };
        let l0 = log_height(&set.cofactor_height(), prec)?;
        let offset = log_ratio(&BigUint::from(set.b), set.p, prec)?;
        let height = set.cofactor_height();
        let l0_over_p = if height >= BigUint::from(3u32) {
            log_ratio(&height, set.p, prec)?
        } else {
            int(1, prec).div(&log_p)
        };
        let digit_over_p = log_ratio(&BigUint::from(set.b - 1), set.p, prec)?;
        Ok(Self {
            log_b,
            log_qmin,
            q_prod,
            yu,
            t_const,
            l0,
            offset,
            l0_over_p,
            digit_over_p,
            terms,
        })
    }

    fn log_cofactor(&self, m1: &RigorousReal, cap: Cap) -> RigorousReal {
        match cap {
            Cap::Fixed => self.l0.clone(),
            Cap::Power(k) => self
                .l0
                .max(&m1.mul(&self.log_b).mul_pow2(-(k as i64))),
        }
    }

    /// Upper bound for `v_p(Λ_u)` at exponent `m`.
    fn valuation_bound(&self, m1: &RigorousReal, cap: Cap) -> Result<RigorousReal> {
        let prec = self.log_b.precision();
        let l = self.log_cofactor(m1, cap);
        // a single p-adic unit x/y: v_p(x - y) <= log max(x, y) / log p
        let single = match cap {
            Cap::Fixed => self.l0_over_p.clone(),
            Cap::Power(k) => self
                .l0_over_p
                .max(&m1.mul(&self.offset).mul_pow2(-(k as i64))),
        };
        let (Some(yu), Some(log_qmin)) = (&self.yu, &self.log_qmin) else {
            return Ok(single);
        };
        let p_prod = self.q_prod.mul(&l);
        let b_hat = int(3, prec).max(&m1.mul(&self.log_b).div(log_qmin));
        let half = int(1, prec).mul_pow2(-1);
        let delta = half.min(&p_prod.div(&b_hat));
        let log_t = self.t_const.sub(&delta.ln()?);
        let u = yu.mul(&p_prod.mul(&log_t).max(&delta.mul(&b_hat)));
        Ok(u.max(&single))
    }

    /// `m/2 - log b / log p - U(m)`; a nonnegative value excludes `m`.
    fn gap(&self, m: &BigUint, cap: Cap) -> Result<RigorousReal> {
        let prec = self.log_b.precision();
        let mr = rr(m, prec);
        let m1 = mr.add(&int(1, prec));
        let u = self.valuation_bound(&m1, cap)?;
        Ok(mr.mul_pow2(-1).sub(&self.offset).sub(&u))
    }

    /// Past the largest of these, `B̂` is linear, `δ < 1/2` and the
    /// `log B̂` growth is outpaced.
    fn monotone_bounds(&self) -> Vec<RigorousReal> {
        let (Some(yu), Some(log_qmin)) = (&self.yu, &self.log_qmin) else {
            return Vec::new();
        };
        let p0 = self.q_prod.mul(&self.l0);
        vec![
            log_qmin.mul_int(3).div(&self.log_b),
            p0.mul_int(2).mul(log_qmin).div(&self.log_b),
            yu.mul(&p0).mul_int(2),
        ]
    }

    /// Slopes of every affine piece of `U` once the growing cap dominates.
    fn power_slopes(&self, k: u32) -> Result<Vec<RigorousReal>> {
        let prec = self.log_b.precision();
        let c = pow2(k, prec);
        let mut out = vec![c.mul(&self.offset)];
        if let (Some(yu), Some(log_qmin)) = (&self.yu, &self.log_qmin) {
            let half = int(1, prec).mul_pow2(-1);
            let delta = half.min(&self.q_prod.mul(&c).mul(log_qmin));
            let log_t = self.t_const.sub(&delta.ln()?);
            out.push(yu.mul(&self.q_prod).mul(&c).mul(&self.log_b).mul(&log_t));
            out.push(yu.mul(&delta).mul(&self.log_b).div(log_qmin));
        }
        Ok(out)
    }

    /// `floor(2 log(b-1) / log p)`: covers `v_p(d_1) >= n`.
    fn small_bound(&self) -> RigorousReal {
        self.digit_over_p.mul_int(2)
    }
}

#[derive(Debug, Clone)]
struct Models {
    arch: ArchModel,
    padic: PadicModel,
}

/// Lazily built models for every precision visited.
struct Evaluator {
    set: Setting,
    start: u32,
    cache: HashMap<u32, Models>,
    max_prec: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Archimedean,
    Padic,
}

impl Evaluator {
    fn new(set: Setting, start: u32) -> Self {
        Self { set, start, cache: HashMap::new(), max_prec: 0 }
    }

    fn models(&mut self, prec: u32) -> Result<&Models> {
        self.max_prec = self.max_prec.max(prec);
        if !self.cache.contains_key(&prec) {
            let m = Models {
                arch: ArchModel::new(&self.set, prec)?,
                padic: PadicModel::new(&self.set, prec)?,
            };
            self.cache.insert(prec, m);
        }
        Ok(&self.cache[&prec])
    }

    /// Runs `f` until its enclosure decides, escalating precision.
    fn decide<T>(&mut self, what: &str, mut f: impl FnMut(&Models) -> Result<Option<T>>) -> Result<T> {
        let start = self.start;
        escalate(start, |prec| {
            let models = self.models(prec)?;
            f(models)
        })?
        .ok_or_else(|| Error::Undecided(format!("{what} at {MAX_PRECISION} bits")))
    }

    fn excluded(&mut self, branch: Branch, m: &BigUint, cap: Cap) -> Result<bool> {
        self.decide("crossover comparison", |mods| {
            let g = match branch {
                Branch::Archimedean => mods.arch.gap(m, cap)?,
                Branch::Padic => mods.padic.gap(m, cap)?,
            };
            Ok(if g.is_nonnegative() {
                Some(true)
            } else if g.is_negative() {
                Some(false)
            } else {
                None
            })
        })
    }

    /// Exact `ceil` of a nonnegative quantity, `0` for an empty list.
    fn ceil_max(&mut self, f: impl Fn(&Models) -> Result<Vec<RigorousReal>>) -> Result<BigUint> {
        self.decide("integer rounding", |mods| {
            let vals = f(mods)?;
            let mut lo = BigInt::zero();
            let mut hi = BigInt::zero();
            for v in &vals {
                lo = lo.max(v.lower().ceil());
                hi = hi.max(v.upper().ceil());
            }
            Ok((lo == hi).then(|| lo.to_biguint().unwrap_or_default()))
        })
        .or_else(|e| match e {
            // an exact integer: the upper ceiling is still a valid choice
            Error::Undecided(_) => {
                let mods = self.models(MAX_PRECISION)?;
                let vals = f(mods)?;
                Ok(vals
                    .iter()
                    .map(|v| v.upper().ceil().to_biguint().unwrap_or_default())
                    .max()
                    .unwrap_or_default())
            }
            e => Err(e),
        })
    }

    fn floor_of(&mut self, f: impl Fn(&Models) -> Result<RigorousReal>) -> Result<BigUint> {
        self.decide("integer rounding", |mods| {
            let v = f(mods)?;
            let lo = v.lower().floor();
            Ok((lo == v.upper().floor()).then(|| lo.to_biguint().unwrap_or_default()))
        })
        .or_else(|e| match e {
            Error::Undecided(_) => {
                let v = f(self.models(MAX_PRECISION)?)?;
                Ok(v.upper().floor().to_biguint().unwrap_or_default())
            }
            e => Err(e),
        })
    }

    fn all_negative(&mut self, f: impl Fn(&Models) -> Result<Vec<RigorousReal>>) -> Result<bool> {
        self.decide("slope sign", |mods| {
            let vals = f(mods)?;
            if vals.iter().all(|v| v.is_negative()) {
                Ok(Some(true))
            } else if vals.iter().any(|v| v.is_nonnegative()) {
                Ok(Some(false))
            } else {
                Ok(None)
            }
        })
    }

    fn monotone_from(&mut self, branch: Branch) -> Result<BigUint> {
        let raw = match branch {
            Branch::Archimedean => self.ceil_max(|m| Ok(vec![m.arch.monotone_bound()]))?,
            Branch::Padic => self.ceil_max(|m| Ok(m.padic.monotone_bounds()))?,
        };
        Ok(raw.max(BigUint::one()))
    }

    /// First excluded `m >= from`, assuming exclusion is monotone there.
    fn first_excluded(&mut self, branch: Branch, from: &BigUint, cap: Cap) -> Result<BigUint> {
        if self.excluded(branch, from, cap)? {
            return Ok(from.clone());
        }
        let mut lo = from.clone();
        let mut hi = from * 2u32 + 1u32;
        let mut steps = 0;
        while !self.excluded(branch, &hi, cap)? {
            steps += 1;
            if steps > MAX_DOUBLINGS {
                return Err(Error::BudgetExceeded("crossover bracketing".into()));
            }
            lo = hi.clone();
            hi = &hi * 2u32 + 1u32;
        }
        // lo is not excluded, hi is
        while &hi - &lo > BigUint::one() {
            let mid: BigUint = (&lo + &hi) >> 1;
            if self.excluded(branch, &mid, cap)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    fn branch(&mut self, branch: Branch, cap: Cap) -> Result<BranchBound> {
        let before = self.max_prec;
        self.max_prec = 0;
        let from = self.monotone_from(branch)?;
        let first = self.first_excluded(branch, &from, cap)?;
        let mut m_bound = if first.is_zero() { BigUint::zero() } else { first - 1u32 };
        let (terms, prime) = {
            let mods = self.models(self.start)?;
            match branch {
                Branch::Archimedean => (mods.arch.terms, None),
                Branch::Padic => (mods.padic.terms, Some(self.set.p)),
            }
        };
        if branch == Branch::Padic {
            let small = self.floor_of(|m| Ok(m.padic.small_bound()))?;
            m_bound = m_bound.max(small);
        }
        let used = self.max_prec;
        self.max_prec = self.max_prec.max(before);
        Ok(BranchBound {
            m_bound: m_bound.max(BigUint::one()),
            monotone_from: from,
            terms,
            prime,
            precision_used: used,
        })
    }

    fn power_slopes_ok(&mut self, k: u32) -> Result<bool> {
        let arch = self.all_negative(|m| Ok(vec![m.arch.power_slope(k)?.neg()]))?;
        if !arch {
            return Ok(false);
        }
        let half = |prec| int(1, prec).mul_pow2(-1);
        self.all_negative(|m| {
            let prec = m.padic.log_b.precision();
            Ok(m.padic
                .power_slopes(k)?
                .into_iter()
                .map(|s| s.sub(&half(prec)))
                .collect())
        })
    }
}

fn validate_precision(prec: u32) -> Result<u32> {
    if !(crate::rigorous::MIN_PRECISION..=MAX_PRECISION).contains(&prec) {
        return Err(Error::InvalidArgument(format!(
            "precision must lie in [{}, {MAX_PRECISION}], got {prec}",
            crate::rigorous::MIN_PRECISION
        )));
    }
    Ok(prec)
}

/// Default cofactor cap: `max(b, 3)`, covering `M = 1` with any digit.
pub fn default_cofactor_cap(b: u64) -> BigUint {
    BigUint::from(b.max(3))
}

/// Every relation with `m >= 2n` and `M <= a` has `m <= m_bound`.
pub fn archimedean_m_bound(b: u64, primes: &PrimeSet, a: &BigUint, prec: u32) -> Result<BranchBound> {
    let mut ev = Evaluator::new(Setting::new(b, primes, a)?, validate_precision(prec)?);
    ev.branch(Branch::Archimedean, Cap::Fixed)
}

/// Every relation with `m <= 2n` and `M <= a` has `m <= m_bound`.
pub fn padic_m_bound(b: u64, primes: &PrimeSet, a: &BigUint, prec: u32) -> Result<BranchBound> {
    let mut ev = Evaluator::new(Setting::new(b, primes, a)?, validate_precision(prec)?);
    ev.branch(Branch::Padic, Cap::Fixed)
}

pub fn three_digit_certificate(b: u64, primes: &PrimeSet, a: &BigUint, prec: u32) -> Result<BoundCertificate> {
    let set = Setting::new(b, primes, a)?;
    let mut ev = Evaluator::new(set.clone(), validate_precision(prec)?);
    let archimedean = ev.branch(Branch::Archimedean, Cap::Fixed)?;
    let padic = ev.branch(Branch::Padic, Cap::Fixed)?;
    let m0 = archimedean.m_bound.clone().max(padic.m_bound.clone());

    // Largest c = 2^{-k} whose threshold is m0; otherwise the smallest
    // threshold seen.
    let mut best: Option<(u32, BigUint)> = None;
    for k in 1..=MAX_EXPONENT_SHIFT {
        if !ev.power_slopes_ok(k)? {
            continue;
        }
        let cap = Cap::Power(k);
        let from_a = ev.monotone_from(Branch::Archimedean)?;
        let from_p = ev.monotone_from(Branch::Padic)?;
        let ta = ev.first_excluded(Branch::Archimedean, &from_a, cap)?;
        let tp = ev.first_excluded(Branch::Padic, &from_p, cap)?;
        let t = (ta.max(tp).max(BigUint::one()) - 1u32).max(m0.clone());
        let done = t == m0;
        if best.as_ref().is_none_or(|(_, bt)| t < *bt) {
            best = Some((k, t));
        }
        if done {
            break;
        }
    }
    let (k, exponent_threshold) =
        best.ok_or_else(|| Error::BudgetExceeded("no admissible exponent c".into()))?;
    let exponent = Dyadic::new(BigInt::one(), -(k as i64));

    let log_product = set
        .primes
        .iter()
        .try_fold(int(1, prec), |acc, &q| Ok::<_, Error>(acc.mul(&int(q as i64, prec).ln()?)))?;
    let assumptions = vec![
        format!("cofactor M <= {a}; term heights bounded by max(A, b - 1, e)"),
        "branch m >= 2n compared with Matveev's lower bound".to_string(),
        format!("branch m <= 2n compared with Yu's bound at p = {}", set.p),
        "exponents bounded by r_i log q_i < (m + 1) log b".to_string(),
        "natural logarithms, outward-rounded enclosures".to_string(),
        format!("[u]_S < u^(1 - c) once m > {exponent_threshold}"),
    ];
    Ok(BoundCertificate {
        base: b,
        primes: primes.clone(),
        cofactor_cap: a.clone(),
        log_product,
        archimedean,
        padic,
        m0,
        exponent_f64: exponent.to_f64(),
        exponent,
        exponent_threshold,
        precision_used: ev.max_prec,
        assumptions,
    })
}

/// `m_0` for `S` = the first `s` primes and `M = 1`, using the cap `max(b, 2)`.
pub fn first_primes_m_bound(b: u64, s: usize) -> Result<BigUint> {
    let primes = PrimeSet::first(s)?;
    let cert = three_digit_certificate(b, &primes, &BigUint::from(b.max(2)), DEFAULT_PRECISION)?;
    Ok(cert.m0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdQuery {
    #[serde(with = "crate::serde_big::biguint")]
    pub n: BigUint,
    #[serde(with = "crate::serde_big::rational")]
    pub eps: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdValue {
    #[serde(flatten)]
    pub query: ThresholdQuery,
    pub value: f64,
    pub enclosure: RigorousReal,
    /// `log n, log log n, log log log n, log log log log n` (midpoints).
    pub iterated_logs: [f64; 4],
}

/// Iterated natural logarithms `[log n, ll n, lll n, llll n]` when all are
/// certainly positive; `None` when `n <= exp(exp(e))`.
pub fn iterated_logs(n: &BigUint, prec: u32) -> Result<Option<[RigorousReal; 4]>> {
    let out = escalate(prec, |p| {
        if n <= &BigUint::one() {
            return Ok(Some(None));
        }
        let l1 = crate::rigorous::ln_biguint(n, p)?;
        let mut logs = vec![l1];
        for _ in 0..3 {
            let last = logs.last().expect("nonempty");
            if last.upper().signum() <= 0 {
                return Ok(Some(None));
            }
            if !last.is_positive() {
                return Ok(None);
            }
            logs.push(last.ln()?);
        }
        let l4 = &logs[3];
        if l4.is_positive() {
            let arr: [RigorousReal; 4] = logs.try_into().expect("four logs");
            Ok(Some(Some(arr)))
        } else if l4.upper().signum() <= 0 {
            Ok(Some(None))
        } else {
            Ok(None)
        }
    })?;
    out.ok_or_else(|| Error::Undecided("iterated logarithm sign".into()))
}

/// `(1 - ε) (log log n)(log log log n) / log log log log n`.
pub fn smooth_threshold(n: &BigUint, eps: &BigRational, prec: u32) -> Result<ThresholdValue> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    let prec = validate_precision(prec)?;
    let logs = iterated_logs(n, prec)?.ok_or_else(|| {
        Error::Domain(format!("n = {n} is not above exp(exp(e)); iterated logarithms are not all positive"))
    })?;
    let one_minus = RigorousReal::from_ratio(&(BigRational::one() - eps), logs[0].precision());
    let enclosure = one_minus.mul(&logs[1]).mul(&logs[2]).div(&logs[3]);
    Ok(ThresholdValue {
        query: ThresholdQuery { n: n.clone(), eps: eps.clone() },
        value: enclosure.midpoint_f64(),
        enclosure,
        iterated_logs: [0, 1, 2, 3].map(|i| logs[i].midpoint_f64()),
    })
}
