//! Subword complexity, special factors and the Thue-Morse toolbox.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::index::SuffixIndex;
use crate::words::{self, bijective_codings, GeneratorSpec, Morphism, Word};
use crate::{Error, Result};

/// `p(0..=N)` of a finite word, or an estimate for an infinite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub values: Vec<u64>,
    pub source_prefix_length: usize,
    /// Set by [`stabilized_profile`] once successive prefixes agree. Always
    /// true for [`profile`], whose counts are exact for the word itself.
    pub stabilized: bool,
}

impl ComplexityProfile {
    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// First differences `p(n+1) - p(n)` for `n < N`.
    pub fn differences(&self) -> Vec<i64> {
        self.values.windows(2).map(|p| p[1] as i64 - p[0] as i64).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p\n");
        for (n, p) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{p}\n"));
        }
        out
    }
}

/// Distinct factor counts for lengths `0..=n_max`, from one suffix array:
/// `p(n) = (|w| − n + 1) − #{adjacent LCP ≥ n}`.
fn factor_counts(w: &[u8], n_max: usize) -> Vec<u64> {
    let idx = SuffixIndex::new(w);
    let mut at_least = vec![0u64; n_max + 2];
    for &l in idx.lcp() {
        at_least[(l as usize).min(n_max + 1)] += 1;
    }
    for n in (0..=n_max).rev() {
        at_least[n] += at_least[n + 1];
    }
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                1
            } else {
                (w.len() - n + 1) as u64 - at_least[n]
            }
        })
        .collect()
}

pub fn profile(w: &[u8], n_max: usize) -> Result<ComplexityProfile> {
    if n_max > w.len() {
        return Err(Error::Range(format!("N = {n_max} exceeds word length {}", w.len())));
    }
    Ok(ComplexityProfile {
        values: factor_counts(w, n_max),
        source_prefix_length: w.len(),
        stabilized: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub initial_factor: usize,
    pub min_length: usize,
    pub max_length: usize,
}

impl Default for Stabilization {
    fn default() -> Self {
        Self { initial_factor: 4, min_length: 64, max_length: 1 << 20 }
    }
}

pub fn stabilized_profile(spec: GeneratorSpec, n_max: usize) -> ComplexityProfile {
    stabilized_profile_with(spec, n_max, Stabilization::default())
}

/// Doubles the prefix length from `initial_factor · N` until three
/// consecutive prefixes give the same `p(0..=N)`.
pub fn stabilized_profile_with(spec: GeneratorSpec, n_max: usize, policy: Stabilization) -> ComplexityProfile {
    let mut len = (policy.initial_factor * n_max).max(policy.min_length).max(n_max);
    let mut word = spec.generate(len.min(policy.max_length) * 4);
    let mut history: Vec<(usize, Vec<u64>)> = Vec::new();
    loop {
        if len > policy.max_length {
            let (l, values) = history.pop().unwrap_or_else(|| {
                let l = policy.max_length.max(n_max);
                (l, factor_counts(&spec.generate(l), n_max))
            });
            return ComplexityProfile { values, source_prefix_length: l, stabilized: false };
        }
        if word.len() < len {
            word = spec.generate(len * 4);
        }
        let values = factor_counts(&word[..len], n_max);
        history.push((len, values));
        if let [.., (_, a), (_, b), (_, c)] = history.as_slice() {
            if a == b && b == c {
                let (l, values) = history.pop().unwrap();
                return ComplexityProfile { values, source_prefix_length: l, stabilized: true };
            }
        }
        len *= 2;
    }
}

/// Prefix on which `p(0..=n)` stabilized, for callers that need the factors themselves.
pub fn stabilized_prefix(spec: GeneratorSpec, n: usize) -> (Word, bool) {
    let prof = stabilized_profile(spec, n);
    (spec.generate(prof.source_prefix_length), prof.stabilized)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFactorReport {
    pub n: usize,
    /// Factors with at least two right extensions, with those extensions.
    pub special: Vec<(Word, Vec<u8>)>,
}

impl SpecialFactorReport {
    pub fn count(&self) -> usize {
        self.special.len()
    }

    /// `Σ (extensions − 1)`, which equals `p(n+1) − p(n)` over any alphabet.
    pub fn excess(&self) -> usize {
        self.special.iter().map(|(_, e)| e.len() - 1).sum()
    }
}

pub fn special_factors(w: &Word, n: usize) -> Result<SpecialFactorReport> {
    if n + 1 > w.len() {
        return Err(Error::Range(format!("n + 1 = {} exceeds word length {}", n + 1, w.len())));
    }
    let mut ext: BTreeMap<&[u8], BTreeSet<u8>> = BTreeMap::new();
    for win in w.windows(n + 1) {
        ext.entry(&win[..n]).or_default().insert(win[n]);
    }
    let special = ext
        .into_iter()
        .filter(|(_, e)| e.len() >= 2)
        .map(|(v, e)| (Word::new(v.to_vec(), w.alphabet_size()).unwrap(), e.into_iter().collect()))
        .collect();
    Ok(SpecialFactorReport { n, special })
}

/// `D(1..=n_max)` (number of special factors) on a stabilized prefix of a registry word.
pub fn special_counts(spec: GeneratorSpec, n_max: usize) -> (Vec<usize>, bool) {
    let (w, stable) = stabilized_prefix(spec, n_max + 1);
    let counts = (1..=n_max)
        .map(|n| special_factors(&w, n).expect("prefix is long enough").count())
        .collect();
    (counts, stable)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `p_t(n)`.
    Pt,
    /// `p_{t′}(n)`.
    PtPrime,
    /// `D_t(n)`, `n ≥ 1`.
    Dt,
    /// `D_{t′}(n)`, `n ≥ 1`.
    DtPrime,
}

impl std::str::FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p_t" => Ok(Self::Pt),
            "p_tprime" => Ok(Self::PtPrime),
            "D_t" => Ok(Self::Dt),
            "D_tprime" => Ok(Self::DtPrime),
            _ => Err(Error::Parse(format!("unknown closed form {s:?}"))),
        }
    }
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// Closed-form value at `n`. Lengths below each formula's domain come from
/// fixed small tables; `D` at `n = 0` is 1.
pub fn closed_form(form: ClosedForm, n: u64) -> u64 {
    match form {
        ClosedForm::Pt => match n {
            0 => 1,
            1 => 2,
            2 => 4,
            _ => {
                let m = n - 1;
                let i = floor_log2(m);
                let p = 1u64 << i;
                if m <= 3 * p / 2 {
                    4 * m - p
                } else {
                    2 * m + 2 * p
                }
            }
        },
        ClosedForm::PtPrime => match n {
            0 => 1,
            1 => 2,
            2 => 4,
            3 => 6,
            4 => 10,
            _ => {
                let m = n - 1;
                let i = floor_log2(m);
                let q = 1u64 << (i - 2);
                if m <= 6 * q {
                    4 * m - 3 * q
                } else if m <= 7 * q {
                    3 * m + 3 * q
                } else {
                    2 * m + 10 * q
                }
            }
        },
        ClosedForm::Dt => {
            if n == 0 {
                return 1;
            }
            // n = 2^k + i, 0 < i ≤ 2^{k-1}, k ≥ 1
            let k = floor_log2(n);
            let i = n - (1u64 << k);
            if k >= 1 && i > 0 && i <= 1u64 << (k - 1) { 4 } else { 2 }
        }
        ClosedForm::DtPrime => {
            if n == 0 {
                return 1;
            }
            if n == 4 {
                return 3;
            }
            let four = (0..63).any(|k| {
                let lo = 1u128 << (k + 1);
                let hi = 3u128 << k;
                let n = n as u128;
                lo < n && n <= hi
            });
            if four {
                return 4;
            }
            let three = (1..62).any(|k| {
                let lo = 3u128 << k;
                let hi = 7u128 << (k - 1);
                let n = n as u128;
                lo < n && n <= hi
            });
            if three { 3 } else { 2 }
        }
    }
}

/// `r_k = a_k μ^k(010) 0` (`xs = [0,1,0]`) or `s_k = a_k μ^k(101) 0` (`xs = [1,0,1]`).
fn forbidden_family(xs: &[u8], k: u32) -> Word {
    let mu = Morphism::thue_morse();
    let mut core = xs.to_vec();
    for _ in 0..k {
        core = mu.apply(&core).unwrap().into_letters();
    }
    // a_k: last letter of μ^k(0)
    let a_k = (k % 2) as u8;
    let mut letters = vec![a_k];
    letters.extend(core);
    letters.push(0);
    Word::new(letters, 2).unwrap()
}

pub fn r_k(k: u32) -> Word {
    forbidden_family(&[0, 1, 0], k)
}

pub fn s_k(k: u32) -> Word {
    forbidden_family(&[1, 0, 1], k)
}

/// Minimal forbidden words of the Thue-Morse factor language: `000`, `111`,
/// and `r_k`, `s_k` with their complements for `k ≤ k_max`.
pub fn minimal_forbidden_tm(k_max: u32) -> Vec<Word> {
    let mut out = vec![Word::new(vec![0; 3], 2).unwrap(), Word::new(vec![1; 3], 2).unwrap()];
    for k in 0..=k_max {
        for w in [r_k(k), s_k(k)] {
            out.push(words::complement(&w).unwrap());
            out.push(w);
        }
    }
    out
}

/// True iff `w` is absent from `reference` while its two maximal proper factors occur.
pub fn verify_minimal_forbidden(w: &[u8], reference: &[u8]) -> Result<bool> {
    if reference.len() < 4 * w.len() {
        return Err(Error::Inconclusive(format!(
            "reference of length {} is shorter than 4·|w| = {}",
            reference.len(),
            4 * w.len()
        )));
    }
    if w.is_empty() {
        return Ok(false);
    }
    let present = |v: &[u8]| words::contains(reference, v);
    Ok(!present(w) && present(&w[1..]) && present(&w[..w.len() - 1]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuFactorization {
    /// `x_0, …, x_{levels-1}`, each in `{ε, 0, 1, 00, 11}`.
    pub prefixes: Vec<Word>,
    /// The μ-preimage left after the last level (boundary letter dropped).
    pub residual: Word,
}

const DECISION_WINDOW: usize = 8;

fn mu_blocks(w: &[u8]) -> Option<Vec<u8>> {
    w.chunks_exact(2)
        .map(|b| match b {
            [0, 1] => Some(0),
            [1, 0] => Some(1),
            _ => None,
        })
        .collect()
}

/// Peels `w = x_0 μ(x_1 μ(⋯))` level by level.
pub fn mu_factorize(w: &Word, levels: usize) -> Result<MuFactorization> {
    if w.alphabet_size() != 2 {
        return Err(Error::Factorization("binary word expected".into()));
    }
    let mut cur: Vec<u8> = w.to_vec();
    let mut prefixes = Vec::with_capacity(levels);
    for level in 0..levels {
        if cur.len() < DECISION_WINDOW {
            return Err(Error::Factorization(format!(
                "level {level}: only {} letters left, at least {DECISION_WINDOW} needed",
                cur.len()
            )));
        }
        let even: &[u8] = if matches!(cur[..2], [0, 0] | [1, 1]) { &cur[..2] } else { &[] };
        let odd: &[u8] = &cur[..1];
        let candidates: Vec<(&[u8], Vec<u8>)> = [even, odd]
            .into_iter()
            .filter_map(|x| {
                let rest = &cur[x.len()..];
                let body = &rest[..rest.len() - rest.len() % 2];
                mu_blocks(body).map(|pre| (x, pre))
            })
            .collect();
        let (x, pre) = match candidates.as_slice() {
            [one] => one.clone(),
            [] => return Err(Error::Factorization(format!("level {level}: not a μ-image up to a short prefix"))),
            _ => return Err(Error::Factorization(format!("level {level}: ambiguous, input too short"))),
        };
        prefixes.push(Word::new(x.to_vec(), 2)?);
        cur = pre;
    }
    check_side_condition(&prefixes)?;
    Ok(MuFactorization { prefixes, residual: Word::new(cur, 2)? })
}

/// `|x_i| = 2` must be preceded (ignoring a block of length-1 prefixes) by an
/// empty prefix or the start of the factorization.
fn check_side_condition(xs: &[Word]) -> Result<()> {
    for i in 1..xs.len() {
        if xs[i].len() == 2 {
            let before = xs[..i].iter().rev().find(|x| x.len() != 1);
            if before.is_some_and(|x| x.len() == 2) {
                return Err(Error::Factorization(format!("x_{i} violates the length-2 side condition")));
            }
        }
    }
    Ok(())
}

/// Factors of `w` with length exactly `n`.
pub fn factor_set(w: &[u8], n: usize) -> HashSet<&[u8]> {
    if n > w.len() {
        return HashSet::new();
    }
    if n == 0 {
        return HashSet::from([&w[..0]]);
    }
    w.windows(n).collect()
}

/// True iff the factors of length `≤ n` are closed under every bijective coding.
pub fn is_symmetric(w: &Word, n: usize) -> bool {
    let codings = bijective_codings(w.alphabet_size());
    (1..=n.min(w.len())).all(|len| {
        let set = factor_set(w, len);
        set.iter().all(|v| {
            codings.iter().all(|c| {
                let image: Vec<u8> = v.iter().map(|&a| c[a as usize]).collect();
                set.contains(image.as_slice())
            })
        })
    })
}

/// `00 μ(1) μ²(t)`.
pub fn u1_prefix(n: usize) -> Word {
    let t = GeneratorSpec::ThueMorse.generate(n / 4 + 1);
    let mu = Morphism::thue_morse();
    let mut letters = vec![0, 0, 1, 0];
    letters.extend_from_slice(&mu.apply(&mu.apply(&t).unwrap()).unwrap());
    letters.truncate(n);
    Word::new(letters, 2).unwrap()
}

/// `0 μ(00) μ²(v)` with `v = t[2..] = 101001⋯`.
pub fn u2_prefix(n: usize) -> Word {
    let t = GeneratorSpec::ThueMorse.generate(n / 4 + 3);
    let mu = Morphism::thue_morse();
    let mut letters = vec![0, 0, 1, 0, 1];
    letters.extend_from_slice(&mu.apply(&mu.apply(&t[2..]).unwrap()).unwrap());
    letters.truncate(n);
    Word::new(letters, 2).unwrap()
}
