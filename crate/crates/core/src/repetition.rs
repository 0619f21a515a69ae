//! Periods, exponents, runs and power-freeness.
//!
//! All exponents are exact rationals. A word is `α`-power-free when no factor
//! has exponent `≥ α`, and `α⁺`-power-free when no factor has exponent `> α`;
//! [`PowerBound`] carries the distinction.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::index::Lce;
use crate::{Error, Result, Word};

pub type Rational = BigRational;

pub fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An exponent threshold, read as `α` (non-strict) or `α⁺` (strict).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerBound {
    value: Rational,
    strict: bool,
    // value as a reduced u64 fraction for the hot comparison path
    num: u64,
    den: u64,
}

impl PowerBound {
    pub fn new(value: Rational, strict: bool) -> Result<Self> {
        if value < Rational::one() {
            return Err(Error::Domain(format!("power bound {value} is below 1")));
        }
        let num = value.numer().to_u64();
        let den = value.denom().to_u64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Self { value, strict, num, den }),
            _ => Err(Error::Domain("power bound does not fit in 64 bits".into())),
        }
    }

    pub fn from_ratio(num: u64, den: u64, strict: bool) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(Rational::new(num.into(), den.into()), strict)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Whether a factor with this exponent is forbidden.
    pub fn forbids(&self, exponent: &Rational) -> bool {
        if self.strict {
            exponent > &self.value
        } else {
            exponent >= &self.value
        }
    }

    /// Same as [`forbids`](Self::forbids) for the exponent `len / period`.
    #[inline]
    pub fn forbids_ratio(&self, len: usize, period: usize) -> bool {
        let lhs = len as u128 * self.den as u128;
        let rhs = self.num as u128 * period as u128;
        if self.strict { lhs > rhs } else { lhs >= rhs }
    }
}

impl PartialOrd for PowerBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `α < α⁺ < β` for every `β > α`.
impl Ord for PowerBound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.strict.cmp(&other.strict))
    }
}

impl FromStr for PowerBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, strict) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let bad = || Error::Parse(format!("invalid power bound {s:?}"));
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n.parse::<u64>().map_err(|_| bad())?, d.parse::<u64>().map_err(|_| bad())?),
            None => (body.parse::<u64>().map_err(|_| bad())?, 1),
        };
        if den == 0 {
            return Err(bad());
        }
        Self::from_ratio(num, den, strict)
    }
}

impl fmt::Display for PowerBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, if self.strict { "+" } else { "" })
    }
}

/// An occurrence `w[start..start+length]` with period `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Repetition {
    pub start: usize,
    pub length: usize,
    pub period: usize,
}

impl Repetition {
    pub fn exponent(&self) -> Rational {
        ratio(self.length, self.period)
    }

    pub fn factor<'a>(&self, w: &'a [u8]) -> &'a [u8] {
        &w[self.start..self.start + self.length]
    }
}

/// A maximal repetition of exponent at least 2.
pub type Run = Repetition;

fn nonempty(w: &[u8]) -> Result<()> {
    if w.is_empty() {
        Err(Error::Domain("empty word".into()))
    } else {
        Ok(())
    }
}

/// `|w|` minus the length of the longest proper border.
pub fn minimal_period(w: &[u8]) -> Result<usize> {
    nonempty(w)?;
    let mut fail = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    Ok(w.len() - fail[w.len() - 1])
}

pub fn exponent(w: &[u8]) -> Result<Rational> {
    Ok(ratio(w.len(), minimal_period(w)?))
}

/// Maximal exponent over all nonempty factors, with the leftmost maximizing
/// factor of least period.
pub fn critical_exponent(w: &[u8]) -> Result<(Rational, Repetition)> {
    nonempty(w)?;
    let n = w.len();
    let mut best = Repetition { start: 0, length: 1, period: 1 };
    for p in 1..n {
        // with period p no factor is longer than n
        if n * best.period <= best.length * p {
            break;
        }
        let mut ext = 0usize;
        let mut local: Option<(usize, usize)> = None;
        for i in (0..n - p).rev() {
            if w[i] == w[i + p] {
                ext += 1;
            } else {
                ext = 0;
            }
            if ext > 0 && local.is_none_or(|(_, e)| ext >= e) {
                local = Some((i, ext));
            }
        }
        if let Some((i, e)) = local {
            let len = p + e;
            if len * best.period > best.length * p {
                best = Repetition { start: i, length: len, period: p };
            }
        }
    }
    Ok((best.exponent(), best))
}

/// Prefix of `x^ω` of length `⌈a·|x|⌉`.
pub fn fractional_power(x: &Word, a: &Rational) -> Result<Word> {
    nonempty(x)?;
    if a < &Rational::one() {
        return Err(Error::Domain(format!("exponent {a} is below 1")));
    }
    let target = (a * BigInt::from(x.len())).ceil().to_integer();
    let len = target
        .to_usize()
        .ok_or_else(|| Error::Domain("power too long".into()))?;
    let letters = x.iter().copied().cycle().take(len).collect();
    Word::new(letters, x.alphabet_size())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerCheck {
    Pass,
    /// A factor of maximal exponent, which the bound forbids.
    Fail(Repetition),
}

impl PowerCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PowerCheck::Pass)
    }
}

pub fn check_power_free(w: &[u8], bound: &PowerBound) -> PowerCheck {
    if w.is_empty() {
        return PowerCheck::Pass;
    }
    let (_, witness) = critical_exponent(w).expect("nonempty");
    if bound.forbids_ratio(witness.length, witness.period) {
        PowerCheck::Fail(witness)
    } else {
        PowerCheck::Pass
    }
}

/// All maximal runs, sorted by start then period.
///
/// Every run of period `p` and length `≥ 2p` contains two positions `i`,
/// `i + p` with `i` a multiple of `p`; extending from these anchors with
/// constant-time LCE queries finds each run in `O(n log n)` total.
pub fn runs(w: &[u8]) -> Vec<Run> {
    let n = w.len();
    if n < 2 {
        return Vec::new();
    }
    let fwd = Lce::new(w);
    let rev_word: Vec<u8> = w.iter().rev().copied().collect();
    let bwd = Lce::new(&rev_word);
    // common suffix of w[..a] and w[..b]
    let lcs = |a: usize, b: usize| -> usize {
        if a == 0 || b == 0 {
            0
        } else {
            bwd.lce(n - a, n - b)
        }
    };
    let mut found: HashMap<(usize, usize), usize> = HashMap::new();
    for p in 1..=n / 2 {
        let mut covered_until = 0;
        let mut i = 0;
        while i + p < n {
            if i + p >= covered_until {
                let f = fwd.lce(i, i + p);
                let b = lcs(i, i + p);
                let start = i - b;
                let end = i + p + f;
                if end - start >= 2 * p {
                    found
                        .entry((start, end - start))
                        .and_modify(|q| *q = (*q).min(p))
                        .or_insert(p);
                }
                covered_until = end;
            }
            i += p;
        }
    }
    let mut out: Vec<Run> = found
        .into_iter()
        .map(|((start, length), period)| Run { start, length, period })
        .collect();
    out.sort();
    out
}

/// Highest exponent among runs, if any.
pub fn max_run(w: &[u8]) -> Option<Run> {
    runs(w).into_iter().max_by(|a, b| {
        (a.length * b.period)
            .cmp(&(b.length * a.period))
            .then(b.start.cmp(&a.start))
    })
}

pub fn is_square_free(w: &[u8]) -> bool {
    runs(w).is_empty()
}
