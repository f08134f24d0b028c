//! Explicit linear-forms-in-logarithms estimates over the rationals.
//!
//! For `Λ = (x_1/y_1)^{b_1} ... (x_n/y_n)^{b_n} - 1 ≠ 0`:
//!
//! * Matveev (archimedean, positive rationals):
//!   `log|Λ| > -8 · 30^{n+3} · n^{9/2} · log(eB) · log A_1 ··· log A_n`
//!   with `A_i >= max{|x_i|, |y_i|, e}` and
//!   `B = max{1, max_j |b_j| log A_j / log A_n}`.
//! * Yu (p-adic): `v_p(Λ) < (16e)^{2(n+1)} n^{3/2} (log 2n)^2 p/(log p)^2
//!   · max{log A_1 ··· log A_n · log T, δB/B_n}` with
//!   `T = 2 B_n δ^{-1} e^{(n+1)(6n+5)} p^{n+1} log A_1 ··· log A_{n-1}`.
//!
//! Lower bounds are returned rounded down and upper bounds rounded up.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{factorize, is_prime_u64, FactorEffort, FactorStatus};
use crate::error::{Error, Result};
use crate::rigorous::{precise_log, Dyadic, RigorousReal};
use crate::serde_big;

/// Largest `|b_i|` for which exact rational powering is attempted.
pub const EXACT_EXPONENT_BUDGET: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTerm {
    #[serde(with = "serde_big::bigint_flex")]
    pub x: BigInt,
    #[serde(with = "serde_big::bigint_flex")]
    pub y: BigInt,
    pub b: i64,
}

impl LinearTerm {
    pub fn new(x: i64, y: i64, b: i64) -> Self {
        Self {
            x: BigInt::from(x),
            y: BigInt::from(y),
            b,
        }
    }

    fn ratio(&self) -> BigRational {
        BigRational::new(self.x.clone(), self.y.clone())
    }

    fn height(&self) -> BigUint {
        self.x.magnitude().max(self.y.magnitude()).clone()
    }
}

/// Rationals `x_i/y_i` with exponents `b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFormInstance {
    pub items: Vec<LinearTerm>,
    /// Caller's assertion that the product differs from 1, used only when
    /// the exact check is out of budget.
    #[serde(default)]
    pub nontrivial_asserted: bool,
}

impl LinearFormInstance {
    pub fn new(items: Vec<LinearTerm>) -> Self {
        Self {
            items,
            nontrivial_asserted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn validate_shape(&self) -> Result<()> {
        if self.items.len() < 2 {
            return Err(Error::TooFewTerms(self.items.len()));
        }
        for t in &self.items {
            if t.x.is_zero() || !t.y.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "need x != 0 and y > 0, got {}/{}",
                    t.x, t.y
                )));
            }
        }
        Ok(())
    }

    /// Decides `Π (x_i/y_i)^{b_i} = 1` exactly.
    pub fn product_is_one(&self) -> Result<bool> {
        let negative = self
            .items
            .iter()
            .filter(|t| t.x.is_negative() && t.b.rem_euclid(2) == 1)
            .count()
            % 2
            == 1;
        let effort = FactorEffort::default();
        let mut exps: Vec<(BigUint, i128)> = Vec::new();
        let mut factored = true;
        'outer: for t in &self.items {
            for (n, sign) in [(t.x.magnitude(), 1i128), (t.y.magnitude(), -1i128)] {
                let f = factorize(n, &effort)?;
                if f.status() != FactorStatus::Complete {
                    factored = false;
                    break 'outer;
                }
                for (p, e) in f.primes {
                    let add = sign * e as i128 * t.b as i128;
                    match exps.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, acc)) => *acc += add,
                        None => exps.push((p, add)),
                    }
                }
            }
        }
        if factored {
            return Ok(!negative && exps.iter().all(|(_, e)| *e == 0));
        }
        if self.items.iter().all(|t| t.b.unsigned_abs() <= EXACT_EXPONENT_BUDGET) {
            return Ok(exact_product(&self.items).is_one());
        }
        if self.nontrivial_asserted {
            return Ok(false);
        }
        Err(Error::BudgetExceeded(
            "cannot verify the product differs from 1; set nontrivial_asserted".into(),
        ))
    }
}

fn exact_product(items: &[LinearTerm]) -> BigRational {
    items.iter().fold(BigRational::one(), |acc, t| {
        let r = t.ratio();
        let p = num_traits::pow(r.clone(), t.b.unsigned_abs() as usize);
        if t.b < 0 {
            acc / p
        } else {
            acc * p
        }
    })
}

/// Extra data for the p-adic estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDetails {
    pub p: u64,
    pub b: RigorousReal,
    pub b_last: RigorousReal,
    pub delta: RigorousReal,
    pub log_t: RigorousReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Matveev,
    Yu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub kind: BoundKind,
    /// Directed endpoint: a valid lower bound for `log|Λ|` (Matveev) or a
    /// valid upper bound for `v_p(Λ)` (Yu).
    pub value: Dyadic,
    pub enclosure: RigorousReal,
    /// `log A_i` in evaluation order.
    pub log_heights: Vec<RigorousReal>,
    /// Matveev's `B`, or the caller's `B` for Yu.
    pub b: RigorousReal,
    /// Position in the caller's item list of each evaluated slot.
    pub order: Vec<usize>,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub padic: Option<PadicDetails>,
}

impl BoundEvaluation {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `log A` for `A = max{h, e}`.
pub fn log_height(h: &BigUint, prec: u32) -> Result<RigorousReal> {
    let one = RigorousReal::from_int(1, prec);
    if h.is_zero() {
        return Ok(one);
    }
    Ok(crate::rigorous::ln_biguint(h, prec)?.max(&one))
}

/// `8 · 30^{n+3} · n^{9/2}`.
pub fn matveev_constant(n: usize, prec: u32) -> RigorousReal {
    let nn = RigorousReal::from_int(n as i64, prec);
    RigorousReal::from_int(8, prec)
        .mul(&RigorousReal::from_int(30, prec).powi(n as u32 + 3))
        .mul(&nn.powi(4))
        .mul(&nn.sqrt())
}

/// Matveev's right-hand side from prepared `log A_i` (last slot is `A_n`)
/// and `B`.
pub fn matveev_from_heights(log_heights: &[RigorousReal], b: &RigorousReal) -> Result<RigorousReal> {
    let n = log_heights.len();
    if n < 2 {
        return Err(Error::TooFewTerms(n));
    }
    let prec = b.precision();
    let one = RigorousReal::from_int(1, prec);
    let log_eb = one.add(&b.ln()?);
    let prod = log_heights.iter().fold(one, |acc, l| acc.mul(l));
    Ok(matveev_constant(n, prec).mul(&log_eb).mul(&prod).neg())
}

/// `(16e)^{2(n+1)} n^{3/2} (log 2n)^2 p / (log p)^2`.
pub fn yu_constant(n: usize, p: u64, prec: u32) -> Result<RigorousReal> {
    let e16 = RigorousReal::e(prec).mul_int(16);
    let nn = RigorousReal::from_int(n as i64, prec);
    let log2n = RigorousReal::from_int(2 * n as i64, prec).ln()?;
    let logp = RigorousReal::from_int(p as i64, prec).ln()?;
    Ok(e16
        .powi(2 * (n as u32 + 1))
        .mul(&nn.mul(&nn.sqrt()))
        .mul(&log2n.mul(&log2n))
        .mul_int(p as i64)
        .div(&logp.mul(&logp)))
}

/// Yu's right-hand side from prepared `log A_i` (last slot is the one
/// carrying `B_n`), returning `(bound, log T)`.
pub fn yu_from_heights(
    p: u64,
    log_heights: &[RigorousReal],
    b: &RigorousReal,
    b_last: &RigorousReal,
    delta: &RigorousReal,
) -> Result<(RigorousReal, RigorousReal)> {
    let n = log_heights.len();
    if n < 2 {
        return Err(Error::TooFewTerms(n));
    }
    let prec = b.precision();
    let nf = n as i64;
    let logp = RigorousReal::from_int(p as i64, prec).ln()?;
    let mut log_t = RigorousReal::ln2(prec)
        .add(&b_last.ln()?)
        .sub(&delta.ln()?)
        .add(&RigorousReal::from_int((nf + 1) * (6 * nf + 5), prec))
        .add(&logp.mul_int(nf + 1));
    for l in &log_heights[..n - 1] {
        log_t = log_t.add(&l.ln()?);
    }
    let prod = log_heights
        .iter()
        .fold(RigorousReal::from_int(1, prec), |acc, l| acc.mul(l));
    let first = prod.mul(&log_t);
    let second = delta.mul(b).div(b_last);
    let bound = yu_constant(n, p, prec)?.mul(&first.max(&second));
    Ok((bound, log_t))
}

/// Lower bound for `log|Λ|`, valid for positive rationals with `Λ ≠ 0`.
pub fn matveev_bound(inst: &LinearFormInstance, prec: u32) -> Result<BoundEvaluation> {
    inst.validate_shape()?;
    if let Some(t) = inst.items.iter().find(|t| !t.x.is_positive()) {
        return Err(Error::NonPositiveRational(format!("{}/{}", t.x, t.y)));
    }
    if inst.product_is_one()? {
        return Err(Error::TrivialProduct);
    }
    let mut logs = inst
        .items
        .iter()
        .map(|t| log_height(&t.height(), prec))
        .collect::<Result<Vec<_>>>()?;
    // any slot may serve as A_n; the largest height gives the smallest B
    let last = (0..logs.len())
        .max_by(|&i, &j| logs[i].upper().cmp(logs[j].upper()).then(j.cmp(&i)))
        .expect("at least two terms");
    let n = logs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.swap(last, n - 1);
    logs.swap(last, n - 1);
    let log_an = logs.last().expect("nonempty").clone();
    let mut b = RigorousReal::from_int(1, prec);
    for (slot, &idx) in order.iter().enumerate() {
        let bj = inst.items[idx].b.unsigned_abs();
        let ratio = logs[slot].mul_int(bj as i64).div(&log_an);
        b = b.max(&ratio);
    }
    let enclosure = matveev_from_heights(&logs, &b)?;
    Ok(BoundEvaluation {
        kind: BoundKind::Matveev,
        value: enclosure.lower().clone(),
        enclosure,
        log_heights: logs,
        b,
        order,
        precision: prec,
        padic: None,
    })
}

fn padic_val_i64(b: i64, p: u64) -> u32 {
    let mut b = b.unsigned_abs();
    let mut v = 0;
    while b.is_multiple_of(p) {
        b /= p;
        v += 1;
    }
    v
}

/// Upper bound for `v_p(Λ)`; the slot with the least `v_p(b_j)` is moved
/// last before evaluation.
pub fn yu_bound(
    p: u64,
    inst: &LinearFormInstance,
    b: &BigRational,
    b_last: &BigRational,
    delta: &BigRational,
    prec: u32,
) -> Result<BoundEvaluation> {
    inst.validate_shape()?;
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if !delta.is_positive() || delta.clone() * BigRational::from_integer(BigInt::from(2)) > BigRational::one() {
        return Err(Error::DeltaOutOfRange(delta.to_string()));
    }
    if inst.items.iter().any(|t| t.b == 0) {
        return Err(Error::ExponentPrecondition("all exponents must be nonzero".into()));
    }
    let pb = BigInt::from(p);
    if inst
        .items
        .iter()
        .any(|t| t.x.is_multiple_of(&pb) || t.y.is_multiple_of(&pb))
    {
        return Err(Error::NotPadicUnit { p });
    }
    if inst.product_is_one()? {
        return Err(Error::TrivialProduct);
    }
    let n = inst.items.len();
    let last = (0..n)
        .min_by_key(|&i| (padic_val_i64(inst.items[i].b, p), std::cmp::Reverse(i)))
        .expect("at least two terms");
    let mut order: Vec<usize> = (0..n).collect();
    order.swap(last, n - 1);
    let max_b = inst.items.iter().map(|t| t.b.unsigned_abs()).max().unwrap_or(0).max(3);
    if *b < BigRational::from_integer(BigInt::from(max_b)) {
        return Err(Error::ExponentPrecondition(format!("B = {b} < max(|b_i|, 3) = {max_b}")));
    }
    let bn_abs = BigRational::from_integer(BigInt::from(inst.items[order[n - 1]].b.unsigned_abs()));
    if *b_last < bn_abs || b_last > b {
        return Err(Error::ExponentPrecondition(format!(
            "need B >= B_n >= |b_n| = {bn_abs}, got B_n = {b_last}"
        )));
    }
    let logs = order
        .iter()
        .map(|&i| log_height(&inst.items[i].height(), prec))
        .collect::<Result<Vec<_>>>()?;
    let b_r = RigorousReal::from_ratio(b, prec);
    let bn_r = RigorousReal::from_ratio(b_last, prec);
    let d_r = RigorousReal::from_ratio(delta, prec);
    let (enclosure, log_t) = yu_from_heights(p, &logs, &b_r, &bn_r, &d_r)?;
    Ok(BoundEvaluation {
        kind: BoundKind::Yu,
        value: enclosure.upper().clone(),
        enclosure,
        log_heights: logs,
        b: b_r.clone(),
        order,
        precision: prec,
        padic: Some(PadicDetails {
            p,
            b: b_r,
            b_last: bn_r,
            delta: d_r,
            log_t,
        }),
    })
}

/// `Λ` computed exactly; exponents limited to `budget` in absolute value.
pub fn exact_lambda(inst: &LinearFormInstance, budget: u64) -> Result<BigRational> {
    if let Some(t) = inst.items.iter().find(|t| t.b.unsigned_abs() > budget) {
        return Err(Error::BudgetExceeded(format!("|b| = {} > {budget}", t.b.unsigned_abs())));
    }
    inst.validate_shape()?;
    Ok(exact_product(&inst.items) - BigRational::one())
}

/// Enclosure of `log|Λ|` from exact rational arithmetic.
pub fn true_archimedean_gap(inst: &LinearFormInstance, prec: u32) -> Result<RigorousReal> {
    let lambda = exact_lambda(inst, EXACT_EXPONENT_BUDGET)?;
    if lambda.is_zero() {
        return Err(Error::TrivialProduct);
    }
    precise_log(&lambda.abs(), prec)
}

/// `v_p(Λ)` from exact rational arithmetic.
pub fn true_padic_valuation(p: u64, inst: &LinearFormInstance) -> Result<i64> {
    let lambda = exact_lambda(inst, EXACT_EXPONENT_BUDGET)?;
    if lambda.is_zero() {
        return Err(Error::TrivialProduct);
    }
    let v = |n: &BigInt| -> i64 {
        let pb = BigInt::from(p);
        let mut n = n.abs();
        let mut k = 0;
        while n.is_multiple_of(&pb) {
            n /= &pb;
            k += 1;
        }
        k
    };
    Ok(v(lambda.numer()) - v(lambda.denom()))
}

/// Rational from a decimal literal such as `0.25`, `3`, `-1.5e3` or `1/3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational literal: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
