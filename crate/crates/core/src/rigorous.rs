//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! Every operation rounds its lower endpoint toward negative infinity and its
//! upper endpoint toward positive infinity at the working precision, so an
//! enclosure stays an enclosure no matter how few bits are carried.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, kept with an odd mantissa (or zero with `exp = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn bits(n: &BigInt) -> u64 {
    n.bits()
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Self {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self::new(BigInt::zero(), 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Keeps at most `prec` significant bits, rounding in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let b = bits(&self.mant);
        if b <= prec as u64 {
            return self.clone();
        }
        let shift = b - prec as u64;
        let m = shift_round(&self.mant, shift, dir);
        Self::new(m, self.exp + shift as i64)
    }

    /// `num / den` rounded in direction `dir` to `prec` bits; `den != 0`.
    pub fn div_round(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + 2 + bits(den) as i64 - bits(num) as i64).max(0);
        let scaled = num << k as u64;
        let (n, d) = if den.is_negative() {
            (-scaled, -den)
        } else {
            (scaled, den.clone())
        };
        let q = match dir {
            Round::Down => n.div_floor(&d),
            Round::Up => -((-n).div_floor(&d)),
        };
        Self::new(q, -k).round(prec, dir)
    }

    pub fn from_ratio(r: &BigRational, prec: u32, dir: Round) -> Self {
        Self::div_round(r.numer(), r.denom(), prec, dir)
    }

    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish `f64`; only for display.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant) as i64;
        let keep = 60.min(b);
        let m = (&self.mant >> (b - keep) as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + b - keep;
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Floor as a big integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Ceiling as a big integer.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }
}

fn shift_round(m: &BigInt, shift: u64, dir: Round) -> BigInt {
    // `>>` on BigInt floors toward negative infinity
    match dir {
        Round::Down => m >> shift,
        Round::Up => -((-m) >> shift),
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.add(&other.neg()).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}p{}", self.mant, self.exp)
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a dyadic literal: {s:?}"));
        let (m, e) = s.split_once('p').ok_or_else(bad)?;
        let mant = BigInt::from_str(m).map_err(|_| bad())?;
        let exp = e.parse::<i64>().map_err(|_| bad())?;
        Ok(Self::new(mant, exp))
    }
}

/// A closed interval `[lower, upper]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigorousReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RigorousReal {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        Self { lo, hi, prec }
    }

    pub fn exact(d: Dyadic, prec: u32) -> Self {
        Self::new(d.clone(), d, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let d = Dyadic::from_int(n);
        Self::new(d.round(prec, Round::Down), d.round(prec, Round::Up), prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        Self::new(
            Dyadic::from_ratio(r, prec, Round::Down),
            Dyadic::from_ratio(r, prec, Round::Up),
            prec,
        )
    }

    pub fn from_biguint(n: &BigUint, prec: u32) -> Self {
        Self::from_int(BigInt::from(n.clone()), prec)
    }

    pub fn lower(&self) -> &Dyadic {
        &self.lo
    }

    pub fn upper(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add(&self.lo.neg())
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_ratio(&self, x: &BigRational) -> bool {
        self.lo.to_ratio() <= *x && *x <= self.hi.to_ratio()
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo.signum() >= 0
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    fn p(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Self::new(lo.round(prec, Round::Down), hi.round(prec, Round::Up), prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::rounded(self.lo.add(&other.lo), self.hi.add(&other.hi), self.p(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::rounded(
            self.lo.add(&other.hi.neg()),
            self.hi.add(&other.lo.neg()),
            self.p(other),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Self::rounded(lo, hi, self.p(other))
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::new(self.lo.shl(k), self.hi.shl(k), self.prec)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::exact(Dyadic::from_int(k), self.prec))
    }

    /// Division; `None` if the divisor interval contains zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.lo.signum() <= 0 && other.hi.signum() >= 0 {
            return None;
        }
        let prec = self.p(other);
        let q = |a: &Dyadic, b: &Dyadic, dir: Round| {
            // a/b = (a.m / b.m) 2^(a.e - b.e)
            Dyadic::div_round(&a.mant, &b.mant, prec + 2, dir).shl(a.exp - b.exp)
        };
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs.iter().map(|(a, b)| q(a, b, Round::Down)).min()?;
        let hi = pairs.iter().map(|(a, b)| q(a, b, Round::Up)).max()?;
        Some(Self::rounded(lo, hi, prec))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("divisor interval contains zero")
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div(&Self::exact(Dyadic::from_int(k), self.prec))
    }

    pub fn max(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.p(other),
        )
    }

    pub fn min(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.p(other),
        )
    }

    pub fn abs_upper(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Square root of a non-negative interval.
    pub fn sqrt(&self) -> Self {
        assert!(self.lo.signum() >= 0, "sqrt of negative interval");
        Self::new(
            sqrt_dyadic(&self.lo, self.prec, Round::Down),
            sqrt_dyadic(&self.hi, self.prec, Round::Up),
            self.prec,
        )
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Result<Self> {
        if self.lo.signum() <= 0 {
            return Err(Error::Domain("logarithm of a non-positive enclosure".into()));
        }
        let lo = ln_dyadic(&self.lo, self.prec).lo;
        let hi = ln_dyadic(&self.hi, self.prec).hi;
        Ok(Self::new(lo, hi, self.prec))
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        let w = prec + 16;
        let mut sum = Self::from_int(1, w);
        let mut term = Self::from_int(1, w);
        let mut k = 1i64;
        loop {
            term = term.div_int(k);
            sum = sum.add(&term);
            k += 1;
            // remaining tail < 2 * term / k
            if term.hi.shl(w as i64 + 2) < Dyadic::from_int(1) {
                break;
            }
        }
        let tail = term.div_int(k).mul_int(2);
        let widened = Self::new(sum.lo, sum.hi.add(&tail.hi), w);
        Self::rounded(widened.lo, widened.hi, prec)
    }

    pub fn ln2(prec: u32) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u32, RigorousReal>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(v) = cache.lock().expect("ln2 cache").get(&prec) {
            return v.clone();
        }
        let w = prec + 16;
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let a = atanh_series(&third, w).mul_int(2);
        let v = Self::rounded(a.lo, a.hi, prec);
        cache.lock().expect("ln2 cache").insert(prec, v.clone());
        v
    }
}

fn sqrt_dyadic(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    let want = 2 * (prec as i64 + 2);
    let mut shift = (want - bits(&x.mant) as i64).max(0);
    if (x.exp - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let m = (&x.mant << shift as u64).to_biguint().expect("non-negative");
    let mut r = m.sqrt();
    if dir == Round::Up && &r * &r != m {
        r += 1u32;
    }
    Dyadic::new(BigInt::from(r), (x.exp - shift) / 2).round(prec, dir)
}

/// `atanh(t) = sum t^(2i+1)/(2i+1)` for `|t| <= 1/3`.
fn atanh_series(t: &BigRational, w: u32) -> RigorousReal {
    assert!(t.abs() * BigInt::from(3) <= BigRational::one());
    let x = RigorousReal::from_ratio(t, w);
    if t.is_zero() {
        return RigorousReal::from_int(0, w);
    }
    let x2 = x.mul(&x);
    let first = x.abs_upper();
    let mut sum = RigorousReal::from_int(0, w);
    let mut power = x.clone();
    let mut i = 0i64;
    loop {
        sum = sum.add(&power.div_int(2 * i + 1));
        power = power.mul(&x2);
        i += 1;
        // |power| <= 2^-(w+4) |t|
        if power.abs_upper().shl(w as i64 + 4) <= first.round(8, Round::Down) {
            break;
        }
    }
    // tail <= |t|^(2i+1) / ((2i+1)(1 - t^2)) <= 2 |power|
    let tail = power.abs_upper().shl(1);
    RigorousReal::new(sum.lo.add(&tail.neg()), sum.hi.add(&tail), w)
}

/// Enclosure of `ln x` for a positive dyadic.
fn ln_dyadic(x: &Dyadic, prec: u32) -> RigorousReal {
    assert!(x.signum() > 0);
    let w = prec + 24;
    let l = bits(&x.mant) as i64;
    // x = (mant / 2^(l-1)) * 2^(l-1+exp), mantissa fraction in [1, 2)
    let mut k = l - 1 + x.exp;
    let mut scale = BigInt::one() << (l - 1) as u64;
    if &x.mant * BigInt::from(2) > &scale * BigInt::from(3) {
        scale <<= 1u64;
        k += 1;
    }
    // y = mant/scale in (3/4, 3/2]; t = (y-1)/(y+1)
    let t = BigRational::new(&x.mant - &scale, &x.mant + &scale);
    if t.is_zero() && k == 0 {
        return RigorousReal::exact(Dyadic::zero(), prec);
    }
    let mut acc = atanh_series(&t, w).mul_int(2);
    if k != 0 {
        acc = acc.add(&RigorousReal::ln2(w).mul_int(k));
    }
    RigorousReal::rounded(acc.lo, acc.hi, prec)
}

/// Enclosure of `ln x` for a positive rational.
pub fn precise_log(x: &BigRational, prec: u32) -> Result<RigorousReal> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("log of non-positive {x}")));
    }
    if x.is_one() {
        return Ok(RigorousReal::exact(Dyadic::zero(), prec));
    }
    if x.is_integer() {
        return RigorousReal::from_int(x.numer().clone(), prec + 8)
            .ln()
            .map(|r| r.with_precision(prec));
    }
    let num = RigorousReal::from_int(x.numer().clone(), prec + 8).ln()?;
    let den = RigorousReal::from_int(x.denom().clone(), prec + 8).ln()?;
    let d = num.sub(&den);
    Ok(RigorousReal::rounded(d.lo, d.hi, prec))
}

/// Natural log of a positive big integer.
pub fn ln_biguint(n: &BigUint, prec: u32) -> Result<RigorousReal> {
    precise_log(&BigRational::from_integer(BigInt::from(n.clone())), prec)
}

impl fmt::Display for RigorousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[derive(Serialize, Deserialize)]
struct RigorousRepr {
    lower: String,
    upper: String,
    approx: f64,
    precision: u32,
}

impl Serialize for RigorousReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RigorousRepr {
            lower: self.lo.to_string(),
            upper: self.hi.to_string(),
            approx: self.midpoint_f64(),
            precision: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RigorousReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RigorousRepr::deserialize(d)?;
        let lo: Dyadic = r.lower.parse().map_err(D::Error::custom)?;
        let hi: Dyadic = r.upper.parse().map_err(D::Error::custom)?;
        if lo > hi {
            return Err(D::Error::custom("lower endpoint above upper"));
        }
        Ok(Self::new(lo, hi, r.precision))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Runs `f` at increasing precision until it returns `Some`, doubling from
/// `start` up to [`MAX_PRECISION`].
pub fn escalate<T>(start: u32, mut f: impl FnMut(u32) -> Result<Option<T>>) -> Result<Option<T>> {
    let mut prec = start.clamp(MIN_PRECISION, MAX_PRECISION);
    loop {
        if let Some(v) = f(prec)? {
            return Ok(Some(v));
        }
        if prec >= MAX_PRECISION {
            return Ok(None);
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// ln 2 to 110 digits.
    const LN2: &str = "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471560586332699641868754200148102";

    fn decimal(s: &str) -> BigRational {
        let (i, f) = s.split_once('.').unwrap();
        let den = BigInt::from(10).pow(f.len() as u32);
        BigRational::new(BigInt::from_str(&format!("{i}{f}")).unwrap(), den)
    }

    #[test]
    fn dyadic_rounding_directions() {
        let x = Dyadic::from_int(0b1011_0111);
        assert_eq!(x.round(4, Round::Down), Dyadic::from_int(0b1011_0000));
        assert_eq!(x.round(4, Round::Up), Dyadic::from_int(0b1100_0000));
        let y = Dyadic::from_int(-0b1011_0111);
        assert_eq!(y.round(4, Round::Down), Dyadic::from_int(-0b1100_0000));
        assert_eq!(y.round(4, Round::Up), Dyadic::from_int(-0b1011_0000));
        let third_lo = Dyadic::div_round(&BigInt::from(1), &BigInt::from(3), 20, Round::Down);
        let third_hi = Dyadic::div_round(&BigInt::from(1), &BigInt::from(3), 20, Round::Up);
        assert!(third_lo.to_ratio() < ratio(1, 3) && ratio(1, 3) < third_hi.to_ratio());
        assert_eq!("-3p-2".parse::<Dyadic>().unwrap().to_ratio(), ratio(-3, 4));
    }

    #[test]
    fn log_of_one_is_exact_zero() {
        let l = precise_log(&ratio(1, 1), 128).unwrap();
        assert!(l.lower().is_zero() && l.upper().is_zero());
    }

    #[test]
    fn log_two_encloses_reference() {
        let reference = decimal(LN2);
        for prec in [64, 128, 256] {
            let l = precise_log(&ratio(2, 1), prec).unwrap();
            assert!(l.contains_ratio(&reference), "prec {prec}: {l}");
            let w = l.width().to_f64();
            assert!(w < 2f64.powi(-(prec as i32) + 4), "width {w} at {prec}");
            let h = precise_log(&ratio(1, 2), prec).unwrap();
            assert!(h.contains_ratio(&-reference.clone()));
        }
    }

    #[test]
    fn log_escalation_is_nested() {
        let x = ratio(1_000_003, 7);
        let mut prev = precise_log(&x, 64).unwrap();
        for prec in [128, 256, 512] {
            let next = precise_log(&x, prec).unwrap();
            assert!(next.is_within(&prev.clone().with_precision(prec)) || next.is_within(&prev));
            prev = next;
        }
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(precise_log(&ratio(0, 1), 64).is_err());
        assert!(precise_log(&ratio(-2, 3), 64).is_err());
    }

    #[test]
    fn e_and_sqrt() {
        let e = RigorousReal::e(128);
        let reference = decimal("2.718281828459045235360287471352662497757247093699959574966967");
        assert!(e.contains_ratio(&reference));
        let s = RigorousReal::from_int(2, 128).sqrt();
        let lo = s.lower().to_ratio();
        let hi = s.upper().to_ratio();
        assert!(&lo * &lo <= ratio(2, 1) && ratio(2, 1) <= &hi * &hi);
    }

    #[test]
    fn serde_round_trip() {
        let l = precise_log(&ratio(10, 3), 96).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        let back: RigorousReal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
