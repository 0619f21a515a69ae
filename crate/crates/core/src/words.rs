//! Finite words, morphisms and the registry of named infinite words.
//!
//! A [`Word`] is a finite sequence over `Σ_k = {0, …, k-1}` with `2 ≤ k ≤ 5`.
//! Infinite words are only ever handled through prefix generators: see
//! [`generate`] and [`GeneratorSpec`].

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::codewalk;
use crate::{Error, Result};

pub const MAX_ALPHABET: u8 = 5;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<u8>,
    k: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, k: u8) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(Error::Domain(format!("alphabet size {k} outside 2..=5")));
        }
        if let Some(&bad) = letters.iter().find(|&&a| a >= k) {
            return Err(Error::Domain(format!("letter {bad} not in Σ_{k}")));
        }
        Ok(Self { letters, k })
    }

    /// Builds a word over the smallest alphabet (at least binary) holding its letters.
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        let k = letters.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Self::new(letters, k)
    }

    pub(crate) fn from_raw(letters: Vec<u8>, k: u8) -> Self {
        debug_assert!(letters.iter().all(|&a| a < k));
        Self { letters, k }
    }

    pub fn empty(k: u8) -> Self {
        Self { letters: Vec::new(), k }
    }

    /// Parses a digit string over an explicit alphabet.
    pub fn parse_over(s: &str, k: u8) -> Result<Self> {
        Self::new(parse_digits(s)?, k)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn alphabet_size(&self) -> u8 {
        self.k
    }

    pub fn with_alphabet(mut self, k: u8) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&k) || self.letters.iter().any(|&a| a >= k) {
            return Err(Error::Domain(format!("word does not fit in Σ_{k}")));
        }
        self.k = k;
        Ok(self)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_raw(self.letters[..n.min(self.len())].to_vec(), self.k)
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word::from_raw(self.letters[start..start + len].to_vec(), self.k)
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word::from_raw(letters, self.k)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_raw(letters, self.k.max(other.k))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn contains_factor(&self, v: &[u8]) -> bool {
        contains(&self.letters, v)
    }
}

impl Deref for Word {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.letters
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_letters(parse_digits(s)?)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}; Σ_{})", digits(&self.letters), self.k)
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'0'..=b'4' => Ok(b - b'0'),
            _ => Err(Error::Parse(format!("invalid letter {:?} in word literal", b as char))),
        })
        .collect()
}

pub fn digits(letters: &[u8]) -> String {
    letters.iter().map(|&a| char::from(b'0' + a)).collect()
}

pub(crate) fn contains(haystack: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || haystack.windows(needle.len()).any(|w| w == needle)
}

/// A non-erasing morphism `Σ_source → Σ_target*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Word>,
    source_k: u8,
    target_k: u8,
}

impl Morphism {
    pub fn new(images: Vec<Word>, target_k: u8) -> Result<Self> {
        let source_k = u8::try_from(images.len())
            .map_err(|_| Error::Domain("too many images".into()))?;
        if !(1..=MAX_ALPHABET).contains(&source_k) {
            return Err(Error::Domain(format!("{source_k} images; expected 1..=5")));
        }
        let mut checked = Vec::with_capacity(images.len());
        for (a, img) in images.into_iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Domain(format!("erasing image for letter {a}")));
            }
            checked.push(img.with_alphabet(target_k)?);
        }
        Ok(Self { images: checked, source_k, target_k })
    }

    /// Builds a morphism from digit-string images; the target alphabet is inferred.
    pub fn from_images(images: &[&str]) -> Result<Self> {
        let parsed: Vec<Vec<u8>> = images.iter().map(|s| parse_digits(s)).collect::<Result<_>>()?;
        let target_k = parsed.iter().flatten().copied().max().map_or(2, |m| (m + 1).max(2));
        let words = parsed.into_iter().map(|l| Word::from_raw(l, target_k)).collect();
        Self::new(words, target_k)
    }

    /// `μ: 0 → 01, 1 → 10`.
    pub fn thue_morse() -> Self {
        Self::from_images(&["01", "10"]).unwrap()
    }

    /// `0 → 02, 1 → 21, 2 → 12`; its fixed point codes to the twisted Thue-Morse word.
    pub fn twisted() -> Self {
        Self::from_images(&["02", "21", "12"]).unwrap()
    }

    /// `θ: 0 → 012, 1 → 02, 2 → 1`.
    pub fn ternary_thue() -> Self {
        Self::from_images(&["012", "02", "1"]).unwrap()
    }

    /// `φ: 0 → 01, 1 → 0`.
    pub fn fibonacci() -> Self {
        Self::from_images(&["01", "0"]).unwrap()
    }

    /// `γ: 0 → 01, 1 → 2, 2 → 02`.
    pub fn gamma() -> Self {
        Self::from_images(&["01", "2", "02"]).unwrap()
    }

    /// `τ: 0 → 0, 1 → 01, 2 → 011`.
    pub fn tau() -> Self {
        Self::from_images(&["0", "01", "011"]).unwrap()
    }

    /// `η: 0 → 010, 1 → 011`.
    pub fn eta() -> Self {
        Self::from_images(&["010", "011"]).unwrap()
    }

    /// The 27-uniform morphism `Σ_3 → Σ_2` sending square-free words to (7/3)⁺-free ones.
    pub fn g() -> Self {
        const HEAD: &str = "011001001101001";
        Self::from_images(&[
            &format!("{HEAD}011010011001"),
            &format!("{HEAD}011001101001"),
            &format!("{HEAD}100101101001"),
        ])
        .unwrap()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn source_alphabet(&self) -> u8 {
        self.source_k
    }

    pub fn target_alphabet(&self) -> u8 {
        self.target_k
    }

    pub fn image(&self, a: u8) -> &[u8] {
        &self.images[a as usize]
    }

    pub fn is_prolongable(&self, a: u8) -> bool {
        self.images
            .get(a as usize)
            .is_some_and(|img| img.len() >= 2 && img[0] == a)
    }

    pub fn apply(&self, w: &[u8]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &a in w {
            let img = self
                .images
                .get(a as usize)
                .ok_or_else(|| Error::Domain(format!("letter {a} outside Σ_{}", self.source_k)))?;
            out.extend_from_slice(img);
        }
        Ok(Word::from_raw(out, self.target_k))
    }

    /// Length-`n` prefix of the fixed point `m^ω(a)`.
    pub fn fixed_point_prefix(&self, a: u8, n: usize) -> Result<Word> {
        if self.source_k != self.target_k || !self.is_prolongable(a) {
            return Err(Error::Construction(format!("morphism is not prolongable at {a}")));
        }
        let mut out = self.images[a as usize].letters.clone();
        let mut next = 1;
        while out.len() < n {
            let b = out[next] as usize;
            out.extend_from_slice(&self.images[b]);
            next += 1;
        }
        out.truncate(n);
        Ok(Word::from_raw(out, self.target_k))
    }

    /// Row `i` is the Parikh vector of the image of letter `i`.
    pub fn matrix(&self) -> IntMatrix {
        let rows = self
            .images
            .iter()
            .map(|img| {
                let mut row = vec![0u64; self.target_k as usize];
                for &a in img.iter() {
                    row[a as usize] += 1;
                }
                row
            })
            .collect();
        IntMatrix { rows, cols: self.target_k as usize }
    }
}

pub fn apply(m: &Morphism, w: &[u8]) -> Result<Word> {
    m.apply(w)
}

pub fn fixed_point_prefix(m: &Morphism, a: u8, n: usize) -> Result<Word> {
    m.fixed_point_prefix(a, n)
}

pub fn morphism_matrix(m: &Morphism) -> IntMatrix {
    m.matrix()
}

/// Nonnegative integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged matrix".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        Self { rows, cols: n }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }
}

/// Per-letter occurrence counts. Arbitrary precision, since series of runs
/// multiply these by large matrix powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParikhVector(pub Vec<BigUint>);

impl ParikhVector {
    pub fn zero(k: usize) -> Self {
        Self(vec![BigUint::zero(); k])
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// Row vector times matrix.
    pub fn times(&self, m: &IntMatrix) -> Result<ParikhVector> {
        if self.dim() != m.nrows() {
            return Err(Error::Domain(format!(
                "vector of length {} times {}×{} matrix",
                self.dim(),
                m.nrows(),
                m.ncols()
            )));
        }
        let mut out = vec![BigUint::zero(); m.ncols()];
        for (x, row) in self.0.iter().zip(m.rows()) {
            if x.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(row) {
                if a != 0 {
                    *o += x * a;
                }
            }
        }
        Ok(ParikhVector(out))
    }

    pub fn add(&self, other: &ParikhVector) -> ParikhVector {
        ParikhVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: u64) -> ParikhVector {
        ParikhVector(self.0.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn parikh(w: &Word) -> ParikhVector {
    let mut counts = vec![0u64; w.alphabet_size() as usize];
    for &a in w.iter() {
        counts[a as usize] += 1;
    }
    ParikhVector::from_counts(&counts)
}

/// Letterwise image under `coding` (`coding[a]` is the image of `a`).
pub fn recode(w: &Word, coding: &[u8]) -> Result<Word> {
    if coding.len() < w.alphabet_size() as usize {
        return Err(Error::Domain("coding is not total on the alphabet".into()));
    }
    let k = coding.iter().copied().max().map_or(2, |m| (m + 1).max(2));
    Word::new(w.iter().map(|&a| coding[a as usize]).collect(), k)
}

pub fn complement(w: &Word) -> Result<Word> {
    if w.alphabet_size() != 2 {
        return Err(Error::Domain("complement is defined for binary words".into()));
    }
    Ok(Word::from_raw(w.iter().map(|&a| 1 - a).collect(), 2))
}

/// All `k!` permutations of `Σ_k`, in lexicographic order.
pub fn bijective_codings(k: u8) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for a in 0..used.len() {
            if !used[a] {
                used[a] = true;
                prefix.push(a as u8);
                go(prefix, used, out);
                prefix.pop();
                used[a] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k as usize], &mut out);
    out
}

/// Lexicographically least image of `w` under a bijective coding: letters are
/// renamed in order of first occurrence.
pub fn canonical_image(w: &Word) -> Word {
    let mut map = [u8::MAX; MAX_ALPHABET as usize];
    let mut next = 0;
    let letters = w
        .iter()
        .map(|&a| {
            if map[a as usize] == u8::MAX {
                map[a as usize] = next;
                next += 1;
            }
            map[a as usize]
        })
        .collect();
    Word::from_raw(letters, w.alphabet_size())
}

/// The registry of named infinite words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorSpec {
    /// Thue-Morse word `t`.
    ThueMorse,
    /// Twisted Thue-Morse word `t′`.
    TwistedThueMorse,
    /// Ternary Thue word `T`, fixed point of θ.
    TernaryThue,
    Fibonacci,
    /// 1-2-bonacci word `F12`.
    F12,
    /// 1-3-bonacci word `F13`.
    F13,
    /// Fixed point of γ.
    G,
    /// τ(G).
    TauG,
    /// g(T).
    GT,
    /// Fixed point of η.
    Eta,
}

impl GeneratorSpec {
    pub const ALL: [GeneratorSpec; 10] = [
        Self::ThueMorse,
        Self::TwistedThueMorse,
        Self::TernaryThue,
        Self::Fibonacci,
        Self::F12,
        Self::F13,
        Self::G,
        Self::TauG,
        Self::GT,
        Self::Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ThueMorse => "tm",
            Self::TwistedThueMorse => "twisted_tm",
            Self::TernaryThue => "ternary_thue",
            Self::Fibonacci => "fibonacci",
            Self::F12 => "f12",
            Self::F13 => "f13",
            Self::G => "G",
            Self::TauG => "tauG",
            Self::GT => "gT",
            Self::Eta => "eta",
        }
    }

    pub fn alphabet_size(self) -> u8 {
        match self {
            Self::ThueMorse
            | Self::TwistedThueMorse
            | Self::Fibonacci
            | Self::TauG
            | Self::GT
            | Self::Eta => 2,
            Self::TernaryThue | Self::F12 | Self::F13 | Self::G => 3,
        }
    }

    pub fn generate(self, n: usize) -> Word {
        match self {
            Self::ThueMorse => Morphism::thue_morse().fixed_point_prefix(0, n).unwrap(),
            Self::TwistedThueMorse => twisted_tm_coded(n),
            Self::TernaryThue => Morphism::ternary_thue().fixed_point_prefix(0, n).unwrap(),
            Self::Fibonacci => Morphism::fibonacci().fixed_point_prefix(0, n).unwrap(),
            Self::F12 => codewalk::bonacci(codewalk::Bonacci::OneTwo, n),
            Self::F13 => codewalk::bonacci(codewalk::Bonacci::OneThree, n),
            Self::G => Morphism::gamma().fixed_point_prefix(0, n).unwrap(),
            Self::TauG => {
                let g = Morphism::gamma().fixed_point_prefix(0, n).unwrap();
                Morphism::tau().apply(&g).unwrap().prefix(n)
            }
            Self::GT => g_of_thue(n),
            Self::Eta => codewalk::eta_word(n),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Registry(s.to_string()))
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Length-`n` prefix of a registry word.
pub fn generate(spec: GeneratorSpec, n: usize) -> Word {
    spec.generate(n)
}

/// Looks a generator up by its registry name.
pub fn generate_named(name: &str, n: usize) -> Result<Word> {
    Ok(name.parse::<GeneratorSpec>()?.generate(n))
}

/// `t′` as the image of the fixed point of `0 → 02, 1 → 21, 2 → 12` under `{0,2} → 0, 1 → 1`.
pub fn twisted_tm_coded(n: usize) -> Word {
    let fp = Morphism::twisted().fixed_point_prefix(0, n).unwrap();
    Word::from_raw(fp.iter().map(|&a| u8::from(a == 1)).collect(), 2)
}

/// `t′` as `00 μ(1) μ²(0) μ³(1) ⋯`.
pub fn twisted_tm_blocks(n: usize) -> Word {
    let mu = Morphism::thue_morse();
    let mut out = vec![0u8, 0];
    let mut block = vec![1u8, 0];
    while out.len() < n {
        out.extend_from_slice(&block);
        // μ^{j+1} of the flipped letter is the complement of μ applied to the current block
        block = mu.apply(&block).unwrap().iter().map(|&a| 1 - a).collect();
    }
    out.truncate(n);
    Word::from_raw(out, 2)
}

/// `t′_i` is the parity of the number of 0's in the binary expansion of `i`
/// (with the expansion of 0 taken to be empty).
pub fn twisted_tm_digit_parity(n: usize) -> Word {
    let letters = (0..n as u64)
        .map(|i| {
            if i == 0 {
                0
            } else {
                let zeros = (64 - i.leading_zeros()) - i.count_ones();
                (zeros % 2) as u8
            }
        })
        .collect();
    Word::from_raw(letters, 2)
}

/// g(T), streamed one 27-letter block per letter of T.
fn g_of_thue(n: usize) -> Word {
    let g = Morphism::g();
    let thue = Morphism::ternary_thue().fixed_point_prefix(0, n.div_ceil(27)).unwrap();
    let mut out = Vec::with_capacity(n + 27);
    for &a in thue.iter() {
        out.extend_from_slice(g.image(a));
    }
    out.truncate(n);
    Word::from_raw(out, 2)
}
