//! Base-b digit manipulation and increasing-order enumeration of integers
//! with few nonzero digits.
//!
//! Both enumerators work off a min-heap frontier where every member has a
//! unique parent that is strictly smaller, so popping the heap yields the
//! sequence in increasing order without scanning the gaps between members.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_big;

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    Ok(())
}

/// Base-`b` digits of `n`, least significant first.
pub fn digits_of(n: &BigUint, b: u64) -> Result<Vec<u64>> {
    check_base(b)?;
    if n.is_zero() {
        return Err(Error::NonPositive);
    }
    let base = BigUint::from(b);
    let mut rest = n.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        out.push(r.to_u64().expect("digit below base"));
        rest = q;
    }
    Ok(out)
}

pub fn nonzero_digit_count(n: &BigUint, b: u64) -> Result<usize> {
    Ok(digits_of(n, b)?.iter().filter(|&&d| d != 0).count())
}

/// A positive integer not divisible by its base, kept with its sparse
/// digit decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseInt {
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
    pub base: u64,
    /// `(digit, exponent)` pairs, exponents strictly decreasing, last exponent 0.
    pub terms: Vec<(u64, u32)>,
}

impl SparseInt {
    pub fn nonzero_digits(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_exponent(&self) -> u32 {
        self.terms[0].1
    }
}

impl Ord for SparseInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for SparseInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds the canonical [`SparseInt`] from unordered `(digit, exponent)` pairs.
pub fn sparse_value(b: u64, terms: &[(u64, u32)]) -> Result<SparseInt> {
    check_base(b)?;
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| std::cmp::Reverse(t.1));
    for w in sorted.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(Error::RepeatedExponent(w[0].1));
        }
    }
    for &(d, _) in &sorted {
        if d == 0 || d >= b {
            return Err(Error::DigitOutOfRange { digit: d, base: b });
        }
    }
    if sorted.last().map(|t| t.1) != Some(0) {
        return Err(Error::MissingUnitTerm);
    }
    let value = evaluate_terms(b, &sorted);
    Ok(SparseInt {
        value,
        base: b,
        terms: sorted,
    })
}

fn evaluate_terms(b: u64, terms: &[(u64, u32)]) -> BigUint {
    let base = BigUint::from(b);
    terms
        .iter()
        .map(|&(d, e)| BigUint::from(d) * base.pow(e))
        .sum()
}

/// When to end an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stop {
    Count(usize),
    Ceiling(#[serde(with = "serde_big::biguint")] BigUint),
}

/// Min-heap cursor over `u_j^(k)`: integers not divisible by `base` with at
/// most `k` nonzero base-`base` digits.
///
/// Parent rule (leading term `d·b^e`): if `d > 1` the parent lowers `d`;
/// if `d = 1` and `e` exceeds the next exponent by more than one, the parent
/// shifts the leading term down one place; otherwise the parent drops it.
#[derive(Debug, Clone)]
pub struct EnumerationCursor {
    base: u64,
    k: usize,
    frontier: BinaryHeap<Reverse<SparseInt>>,
    last: Option<BigUint>,
}

impl EnumerationCursor {
    pub fn new(base: u64, k: usize) -> Result<Self> {
        check_base(base)?;
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let mut frontier = BinaryHeap::new();
        frontier.push(Reverse(SparseInt {
            value: BigUint::one(),
            base,
            terms: vec![(1, 0)],
        }));
        Ok(Self {
            base,
            k,
            frontier,
            last: None,
        })
    }

    pub fn last_emitted(&self) -> Option<&BigUint> {
        self.last.as_ref()
    }

    fn push_children(&mut self, x: &SparseInt) {
        let b = self.base;
        let base = BigUint::from(b);
        let (d, e) = x.terms[0];
        let lead = base.pow(e);
        if d + 1 < b {
            let mut terms = x.terms.clone();
            terms[0].0 = d + 1;
            self.frontier.push(Reverse(SparseInt {
                value: &x.value + &lead,
                base: b,
                terms,
            }));
        }
        if d == 1 && x.terms.len() >= 2 {
            let mut terms = x.terms.clone();
            terms[0].1 = e + 1;
            // value - b^e + b^(e+1)
            let value = &x.value + &lead * (b - 1);
            self.frontier.push(Reverse(SparseInt {
                value,
                base: b,
                terms,
            }));
        }
        if x.terms.len() < self.k {
            let mut terms = Vec::with_capacity(x.terms.len() + 1);
            terms.push((1, e + 1));
            terms.extend_from_slice(&x.terms);
            self.frontier.push(Reverse(SparseInt {
                value: &x.value + lead * base,
                base: b,
                terms,
            }));
        }
    }
}

impl Iterator for EnumerationCursor {
    type Item = SparseInt;

    fn next(&mut self) -> Option<SparseInt> {
        let Reverse(x) = self.frontier.pop()?;
        self.push_children(&x);
        debug_assert!(self.last.as_ref().is_none_or(|l| *l < x.value));
        self.last = Some(x.value.clone());
        Some(x)
    }
}

/// Members of `u^(k)` in base `b`, increasing, until `stop`.
pub fn enumerate_sparse(b: u64, k: usize, stop: &Stop) -> Result<Vec<SparseInt>> {
    let cursor = EnumerationCursor::new(b, k)?;
    Ok(match stop {
        Stop::Count(n) => cursor.take(*n).collect(),
        Stop::Ceiling(c) => cursor.take_while(|x| x.value <= *c).collect(),
    })
}

/// One value of the sequence `a^m + c^n + 1` with every `(m, n)` producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermValue {
    #[serde(with = "serde_big::biguint")]
    pub value: BigUint,
    pub witnesses: Vec<(u32, u32)>,
}

/// Increasing, deduplicated cursor over `a^m + c^n + 1`, `m, n >= 1`.
///
/// Grid parent rule: `(m, n)` with `n > 1` comes from `(m, n - 1)`,
/// `(m, 1)` from `(m - 1, 1)`.
#[derive(Debug, Clone)]
pub struct ThreeTermCursor {
    a: BigUint,
    c: BigUint,
    frontier: BinaryHeap<Reverse<(BigUint, u32, u32)>>,
}

impl ThreeTermCursor {
    pub fn new(a: u64, c: u64) -> Result<Self> {
        if a < 2 || c < 2 {
            return Err(Error::InvalidBase(a.min(c)));
        }
        if a == c {
            return Err(Error::EqualBases);
        }
        let a = BigUint::from(a);
        let c = BigUint::from(c);
        let mut frontier = BinaryHeap::new();
        frontier.push(Reverse((&a + &c + 1u32, 1, 1)));
        Ok(Self { a, c, frontier })
    }

    fn value(&self, m: u32, n: u32) -> BigUint {
        self.a.pow(m) + self.c.pow(n) + 1u32
    }

    fn expand(&mut self, m: u32, n: u32) {
        self.frontier
            .push(Reverse((self.value(m, n + 1), m, n + 1)));
        if n == 1 {
            self.frontier.push(Reverse((self.value(m + 1, 1), m + 1, 1)));
        }
    }
}

impl Iterator for ThreeTermCursor {
    type Item = ThreeTermValue;

    fn next(&mut self) -> Option<ThreeTermValue> {
        let Reverse((value, m, n)) = self.frontier.pop()?;
        self.expand(m, n);
        let mut witnesses = vec![(m, n)];
        while let Some(Reverse((v, _, _))) = self.frontier.peek() {
            if *v != value {
                break;
            }
            let Reverse((_, m2, n2)) = self.frontier.pop().expect("peeked");
            self.expand(m2, n2);
            witnesses.push((m2, n2));
        }
        witnesses.sort_unstable();
        Some(ThreeTermValue { value, witnesses })
    }
}

pub fn enumerate_three_term(a: u64, c: u64, stop: &Stop) -> Result<Vec<ThreeTermValue>> {
    let cursor = ThreeTermCursor::new(a, c)?;
    Ok(match stop {
        Stop::Count(n) => cursor.take(*n).collect(),
        Stop::Ceiling(cap) => cursor.take_while(|x| x.value <= *cap).collect(),
    })
}
