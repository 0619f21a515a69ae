//! Backtracking over power-free languages, optionally under a subword
//! complexity cap and a set of forbidden factors.
//!
//! Appending a letter can only create repetitions and factors that are
//! suffixes of the new word. For every period `p` the builder keeps the
//! length of the longest suffix with period `p`, so both the power check
//! and the new-factor count cost `O(|w|)` per letter.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::complexity::factor_set;
use crate::repetition::{check_power_free, is_square_free};
use crate::{Error, PowerBound, Result, Word};

/// `p(n) ≤ a·n + b` for every `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineCap {
    pub a: i64,
    pub b: i64,
}

impl AffineCap {
    pub fn at(&self, n: usize) -> i64 {
        self.a * n as i64 + self.b
    }
}

impl FromStr for AffineCap {
    type Err = Error;

    /// `"2n"`, `"2n+1"`, `"n+1"`, `"3n-2"`, `"n"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cap {s:?} is not of the form a·n+b"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lin, rest) = t.split_once('n').ok_or_else(bad)?;
        let a = match lin.trim_end_matches('*') {
            "" => 1,
            x => x.parse().map_err(|_| bad())?,
        };
        let b = match rest {
            "" => 0,
            r if r.starts_with('+') => r[1..].parse().map_err(|_| bad())?,
            r if r.starts_with('-') => r.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        Ok(AffineCap { a, b })
    }
}

impl fmt::Display for AffineCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a {
            1 => write!(f, "n")?,
            a => write!(f, "{a}n")?,
        }
        match self.b {
            0 => Ok(()),
            b if b > 0 => write!(f, "+{b}"),
            b => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexityCap {
    Affine(AffineCap),
    /// Explicit `n ↦ max p(n)`; lengths not listed are unconstrained.
    Table(BTreeMap<usize, u64>),
}

impl ComplexityCap {
    fn allows(&self, n: usize, count: u64) -> bool {
        match self {
            ComplexityCap::Affine(c) => (count as i64) <= c.at(n),
            ComplexityCap::Table(t) => t.get(&n).is_none_or(|&m| count <= m),
        }
    }
}

impl FromStr for ComplexityCap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(ComplexityCap::Affine)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub bound: PowerBound,
    pub cap: Option<ComplexityCap>,
    pub forbidden: Vec<Vec<u8>>,
    pub k: u8,
}

impl Constraint {
    pub fn new(k: u8, bound: PowerBound) -> Self {
        Self { bound, cap: None, forbidden: Vec::new(), k }
    }

    pub fn with_cap(mut self, cap: ComplexityCap) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_forbidden(mut self, factors: Vec<Vec<u8>>) -> Self {
        self.forbidden = factors;
        self
    }

    /// Same language read backwards.
    pub fn reversed(&self) -> Self {
        let forbidden = self.forbidden.iter().map(|f| f.iter().rev().copied().collect()).collect();
        Self { forbidden, ..self.clone() }
    }
}

/// Full re-check of a word against a constraint, without incremental state.
pub fn is_admissible(w: &[u8], c: &Constraint) -> bool {
    if w.iter().any(|&a| a >= c.k) {
        return false;
    }
    if !check_power_free(w, &c.bound).passed() {
        return false;
    }
    if c.forbidden.iter().any(|f| crate::words::contains(w, f)) {
        return false;
    }
    match &c.cap {
        Some(cap) => (1..=w.len()).all(|n| cap.allows(n, factor_set(w, n).len() as u64)),
        None => true,
    }
}

/// Admissible word under incremental extension and backtracking.
pub struct Builder<'c> {
    c: &'c Constraint,
    w: Vec<u8>,
    // shifts[L-1][p-1]: common suffix length of w[..L] and w[..L-p]
    shifts: Vec<Vec<u32>>,
    counts: Vec<u64>,
    undo: Vec<usize>,
}

impl<'c> Builder<'c> {
    pub fn new(c: &'c Constraint) -> Self {
        Self { c, w: Vec::new(), shifts: Vec::new(), counts: vec![1], undo: Vec::new() }
    }

    /// Builder holding `w`, or `None` if some prefix of `w` is not admissible.
    pub fn from_word(c: &'c Constraint, w: &[u8]) -> Option<Self> {
        let mut b = Self::new(c);
        for &a in w {
            if !b.push(a) {
                return None;
            }
        }
        Some(b)
    }

    pub fn word(&self) -> &[u8] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Appends `a` if the result stays admissible.
    pub fn push(&mut self, a: u8) -> bool {
        if a >= self.c.k || self.c.bound.forbids_ratio(1, 1) {
            return false;
        }
        let l = self.w.len();
        let mut next = Vec::with_capacity(l);
        let prev = self.shifts.last();
        for p in 1..=l {
            let r = if a == self.w[l - p] {
                1 + prev.and_then(|v| v.get(p - 1)).copied().unwrap_or(0)
            } else {
                0
            };
            if r > 0 && self.c.bound.forbids_ratio(p + r as usize, p) {
                return false;
            }
            next.push(r);
        }
        self.w.push(a);
        if self.c.forbidden.iter().any(|f| self.w.ends_with(f)) {
            self.w.pop();
            return false;
        }
        if let Some(cap) = &self.c.cap {
            // suffixes longer than the longest earlier-occurring one are new factors
            let m = next.iter().copied().max().unwrap_or(0) as usize;
            let new_len = l + 1;
            self.counts.push(0);
            let mut ok = true;
            for n in m + 1..=new_len {
                self.counts[n] += 1;
                ok &= cap.allows(n, self.counts[n]);
            }
            if !ok {
                for n in m + 1..=new_len {
                    self.counts[n] -= 1;
                }
                self.counts.pop();
                self.w.pop();
                return false;
            }
            self.undo.push(m);
        }
        self.shifts.push(next);
        true
    }

    pub fn pop(&mut self) -> Option<u8> {
        let a = self.w.pop()?;
        self.shifts.pop();
        if self.c.cap.is_some() {
            let m = self.undo.pop().unwrap();
            for n in m + 1..=self.w.len() + 1 {
                self.counts[n] -= 1;
            }
            self.counts.pop();
        }
        Some(a)
    }
}

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_DEPTH: usize = 64;
const STORED_WORDS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxLength {
    Finite(usize),
    /// The search stopped on its length or node limit with words still growing.
    Open,
}

impl fmt::Display for MaxLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxLength::Finite(n) => write!(f, "{n}"),
            MaxLength::Open => f.write_str("open"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// `census[ℓ]` = number of admissible words of length `ℓ` visited.
    pub census: Vec<u64>,
    pub max_length: MaxLength,
    pub maximal_words: Vec<Word>,
    pub nodes: u64,
    /// False when the node budget ran out; counts are then lower bounds.
    pub complete: bool,
}

struct Dfs<'c> {
    b: Builder<'c>,
    limit: usize,
    budget: u64,
    nodes: u64,
    census: Vec<u64>,
    out_of_budget: bool,
    dead_ends: Vec<Vec<u8>>,
    longest: Vec<Vec<u8>>,
    longest_len: usize,
}

impl<'c> Dfs<'c> {
    fn new(c: &'c Constraint, limit: usize, budget: u64) -> Self {
        let mut census = vec![0; limit + 1];
        census[0] = 1;
        Self {
            b: Builder::new(c),
            limit,
            budget,
            nodes: 1,
            census,
            out_of_budget: false,
            dead_ends: Vec::new(),
            longest: vec![Vec::new()],
            longest_len: 0,
        }
    }

    fn run(&mut self) {
        if self.b.len() == self.limit {
            return;
        }
        let mut children = 0;
        for a in 0..self.b.c.k {
            if self.nodes >= self.budget {
                self.out_of_budget = true;
                return;
            }
            if !self.b.push(a) {
                continue;
            }
            self.nodes += 1;
            children += 1;
            let l = self.b.len();
            self.census[l] += 1;
            if l > self.longest_len {
                self.longest_len = l;
                self.longest.clear();
            }
            if l == self.longest_len && self.longest.len() < STORED_WORDS {
                self.longest.push(self.b.word().to_vec());
            }
            self.run();
            self.b.pop();
            if self.out_of_budget {
                return;
            }
        }
        if children == 0 && self.dead_ends.len() < STORED_WORDS {
            self.dead_ends.push(self.b.word().to_vec());
        }
    }
}

fn words(c: &Constraint, v: Vec<Vec<u8>>) -> Vec<Word> {
    v.into_iter().map(|w| Word::from_raw(w, c.k)).collect()
}

/// Counts of admissible words of every length up to `n_max`.
/// `maximal_words` lists the words with no admissible one-letter extension.
pub fn dfs_census(c: &Constraint, n_max: usize, budget: u64) -> SearchOutcome {
    let mut d = Dfs::new(c, n_max, budget);
    d.run();
    let complete = !d.out_of_budget;
    let max_length = match d.census.iter().position(|&x| x == 0) {
        Some(first_zero) if complete => MaxLength::Finite(first_zero - 1),
        _ => MaxLength::Open,
    };
    SearchOutcome { census: d.census, max_length, maximal_words: words(c, d.dead_ends), nodes: d.nodes, complete }
}

/// Exhausts the constrained tree and reports its height with every word of that length.
pub fn longest_with_cap(c: &Constraint, length_limit: usize, budget: u64) -> SearchOutcome {
    let mut d = Dfs::new(c, length_limit, budget);
    d.run();
    let complete = !d.out_of_budget;
    let finite = complete && d.longest_len < length_limit;
    d.census.truncate(d.longest_len + 1);
    SearchOutcome {
        census: d.census,
        max_length: if finite { MaxLength::Finite(d.longest_len) } else { MaxLength::Open },
        maximal_words: words(c, d.longest),
        nodes: d.nodes,
        complete,
    }
}

/// Calls `visit` on every nonempty admissible word of length `≤ n_max`, in
/// DFS order. Returns false if the node budget ran out.
pub fn dfs_visit(c: &Constraint, n_max: usize, budget: u64, mut visit: impl FnMut(&[u8])) -> bool {
    fn go(b: &mut Builder<'_>, n_max: usize, budget: u64, nodes: &mut u64, visit: &mut dyn FnMut(&[u8])) -> bool {
        if b.len() == n_max {
            return true;
        }
        for a in 0..b.c.k {
            if *nodes >= budget {
                return false;
            }
            if b.push(a) {
                *nodes += 1;
                visit(b.word());
                let ok = go(b, n_max, budget, nodes, visit);
                b.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut b = Builder::new(c);
    go(&mut b, n_max, budget, &mut 0, &mut visit)
}

/// Node budget of a single extendability query.
pub const EXT_BUDGET: u64 = 10_000_000;

fn extend_right(b: &mut Builder<'_>, target: usize, nodes: &mut u64) -> bool {
    if b.len() >= target {
        return true;
    }
    for a in 0..b.c.k {
        if *nodes >= EXT_BUDGET {
            return false;
        }
        if b.push(a) {
            *nodes += 1;
            let ok = extend_right(b, target, nodes);
            b.pop();
            if ok {
                return true;
            }
        }
    }
    false
}

/// `w` is admissible and has an admissible right extension by `depth` letters.
/// An exhausted node budget counts as failure.
pub fn rext_approx(w: &[u8], c: &Constraint, depth: usize) -> bool {
    match Builder::from_word(c, w) {
        Some(mut b) => extend_right(&mut b, w.len() + depth, &mut 0),
        None => false,
    }
}

/// `x·w·y` is admissible for some `x`, `y` of length `depth`.
pub fn ext_approx(w: &[u8], c: &Constraint, depth: usize) -> bool {
    let rc = c.reversed();
    let rev: Vec<u8> = w.iter().rev().copied().collect();
    let Some(mut b) = Builder::from_word(&rc, &rev) else {
        return false;
    };
    let mut nodes = 0u64;
    left_then_right(&mut b, c, w.len() + depth, depth, &mut nodes)
}

fn left_then_right(rb: &mut Builder<'_>, c: &Constraint, target: usize, depth: usize, nodes: &mut u64) -> bool {
    if rb.len() >= target {
        let xw: Vec<u8> = rb.word().iter().rev().copied().collect();
        return rext_approx(&xw, c, depth);
    }
    for a in 0..rb.c.k {
        if *nodes >= EXT_BUDGET {
            return false;
        }
        if rb.push(a) {
            *nodes += 1;
            let ok = left_then_right(rb, c, target, depth, nodes);
            rb.pop();
            if ok {
                return true;
            }
        }
    }
    false
}

/// Shortest, then lexicographically least, `w` with `|w| ≤ max_middle`,
/// `u·w·v` admissible and `ext_approx(u·w·v)`.
pub fn connect(u: &[u8], v: &[u8], c: &Constraint, max_middle: usize, depth: usize) -> Option<Word> {
    let mut b = Builder::from_word(c, u)?;
    for m in 0..=max_middle {
        if let Some(w) = connect_at(&mut b, u.len(), m, v, c, depth) {
            return Some(Word::from_raw(w, c.k));
        }
    }
    None
}

fn connect_at(b: &mut Builder<'_>, base: usize, m: usize, v: &[u8], c: &Constraint, depth: usize) -> Option<Vec<u8>> {
    if b.len() == base + m {
        let pushed = v.iter().take_while(|&&a| b.push(a)).count();
        let ok = pushed == v.len() && ext_approx(b.word(), c, depth);
        let middle = b.word()[base..base + m].to_vec();
        for _ in 0..pushed {
            b.pop();
        }
        return ok.then_some(middle);
    }
    for a in 0..c.k {
        if b.push(a) {
            let found = connect_at(b, base, m, v, c, depth);
            b.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Replaces the `i`-th occurrence of `2` in `u` with `v[i]`.
pub fn split_letter(u: &Word, v: &[u8]) -> Result<Word> {
    if let Some(&x) = v.iter().find(|&&x| x != 2 && x != 3) {
        return Err(Error::Domain(format!("substitute letter {x} is not in {{2,3}}")));
    }
    let twos = u.iter().filter(|&&a| a == 2).count();
    if twos > v.len() {
        return Err(Error::Domain(format!("u has {twos} letters 2 but only {} substitutes were given", v.len())));
    }
    let mut next = v.iter();
    let letters = u.iter().map(|&a| if a == 2 { *next.next().unwrap() } else { a }).collect();
    Word::new(letters, 4)
}

/// `split_letter` followed by a square-freeness check of the result.
pub fn split_letter_checked(u: &Word, v: &[u8]) -> Result<(Word, bool)> {
    let w = split_letter(u, v)?;
    let sf = is_square_free(&w);
    Ok((w, sf))
}

/// Words over `Σ_k` in radix order: by length, then lexicographically.
fn radix_successor(w: &mut Vec<u8>, k: u8) {
    for i in (0..w.len()).rev() {
        if w[i] + 1 < k {
            w[i] += 1;
            for x in &mut w[i + 1..] {
                *x = 0;
            }
            return;
        }
    }
    *w = vec![0; w.len() + 1];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub word: Word,
    /// Words appended, in order, with their connectors.
    pub added: Vec<(Word, Word)>,
    pub stopped_early: bool,
}

/// Longest candidate tried before giving up on a step.
const GREEDY_MAX_CANDIDATE: usize = 24;

/// From the seed `0`, repeatedly appends a connector and the radix-least
/// extendable word that is not yet a factor.
pub fn greedy_recurrent_builder(c: &Constraint, steps: usize, depth: usize, max_middle: usize) -> GreedyOutcome {
    let mut u = vec![0u8];
    let mut added = Vec::new();
    let mut cand: Vec<u8> = vec![0];
    for _ in 0..steps {
        let mut step_done = false;
        while cand.len() <= GREEDY_MAX_CANDIDATE {
            if crate::words::contains(&u, &cand) || !ext_approx(&cand, c, depth) {
                radix_successor(&mut cand, c.k);
                continue;
            }
            match connect(&u, &cand, c, max_middle, depth) {
                Some(w) => {
                    u.extend_from_slice(&w);
                    u.extend_from_slice(&cand);
                    added.push((Word::from_raw(cand.clone(), c.k), w));
                    step_done = true;
                    break;
                }
                None => {
                    return GreedyOutcome { word: Word::from_raw(u, c.k), added, stopped_early: true };
                }
            }
        }
        if !step_done {
            return GreedyOutcome { word: Word::from_raw(u, c.k), added, stopped_early: true };
        }
    }
    GreedyOutcome { word: Word::from_raw(u, c.k), added, stopped_early: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(s: &str) -> PowerBound {
        s.parse().unwrap()
    }

    fn naive_census(c: &Constraint, n: usize) -> Vec<u64> {
        let mut out = vec![1u64];
        let mut level: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &level {
                for a in 0..c.k {
                    let mut x = w.clone();
                    x.push(a);
                    if is_admissible(&x, c) {
                        next.push(x);
                    }
                }
            }
            out.push(next.len() as u64);
            level = next;
        }
        out
    }

    #[test]
    fn affine_caps() {
        assert_eq!("2n".parse::<AffineCap>().unwrap(), AffineCap { a: 2, b: 0 });
        assert_eq!("2n+1".parse::<AffineCap>().unwrap(), AffineCap { a: 2, b: 1 });
        assert_eq!("n+1".parse::<AffineCap>().unwrap(), AffineCap { a: 1, b: 1 });
        assert_eq!("3n-2".parse::<AffineCap>().unwrap(), AffineCap { a: 3, b: -2 });
        assert_eq!("3n-2".parse::<AffineCap>().unwrap().to_string(), "3n-2");
        assert!("2m".parse::<AffineCap>().is_err());
        assert!("2n*3".parse::<AffineCap>().is_err());
    }

    #[test]
    fn small_census() {
        let sq3 = Constraint::new(3, bound("2"));
        let out = dfs_census(&sq3, 3, DEFAULT_BUDGET);
        assert_eq!(out.census, [1, 3, 6, 12]);
        let of2 = Constraint::new(2, bound("2+"));
        assert_eq!(dfs_census(&of2, 3, DEFAULT_BUDGET).census[3], 6);
    }

    #[test]
    fn incremental_matches_naive() {
        let caps = [None, Some("2n"), Some("n+1")];
        for k in [2u8, 3] {
            for b in ["2", "2+", "7/3", "5/2", "3"] {
                for cap in caps {
                    let mut c = Constraint::new(k, bound(b));
                    if let Some(cap) = cap {
                        c = c.with_cap(cap.parse().unwrap());
                    }
                    let n = if k == 3 { 9 } else { 12 };
                    assert_eq!(dfs_census(&c, n, DEFAULT_BUDGET).census, naive_census(&c, n), "k={k} {b} {cap:?}");
                }
            }
        }
    }

    #[test]
    fn builder_pop_restores_state() {
        let c = Constraint::new(2, bound("5/2")).with_cap("2n".parse().unwrap());
        let mut b = Builder::new(&c);
        for &a in &[0u8, 0, 1, 1, 0, 0, 1] {
            assert!(b.push(a));
        }
        let before = (b.counts.clone(), b.shifts.clone());
        if b.push(1) {
            b.pop();
        }
        assert_eq!((b.counts.clone(), b.shifts.clone()), before);
    }

    #[test]
    fn binary_square_free_is_short() {
        let c = Constraint::new(2, bound("2"));
        let out = longest_with_cap(&c, 100, DEFAULT_BUDGET);
        assert_eq!(out.max_length, MaxLength::Finite(3));
        assert!(out.maximal_words.iter().any(|w| w.to_string() == "010"));
    }

    #[test]
    fn forbidden_factors() {
        let c = Constraint::new(3, bound("2")).with_forbidden(vec![vec![0, 1, 0], vec![2, 1, 2]]);
        assert!(is_admissible(&[0, 1, 2], &c));
        assert!(!is_admissible(&[2, 0, 1, 0], &c));
        assert!(Builder::from_word(&c, &[2, 0, 1, 0]).is_none());
    }

    #[test]
    fn extendability() {
        let sq3 = Constraint::new(3, bound("2"));
        assert!(rext_approx(&[0, 1, 0], &sq3, 10));
        assert!(ext_approx(&[0, 1, 0], &sq3, 10));
        let sq2 = Constraint::new(2, bound("2"));
        for d in [0, 1, 5] {
            assert!(!rext_approx(&[0, 1, 0, 1], &sq2, d));
        }
        // 010 is admissible but cannot grow on both sides over two letters
        assert!(!ext_approx(&[0, 1, 0], &sq2, 1));
    }

    #[test]
    fn connectors() {
        let sq3 = Constraint::new(3, bound("2"));
        assert_eq!(connect(&[], &[0, 1, 2], &sq3, 4, 8).unwrap().len(), 0);
        let w = connect(&[0, 1, 0], &[0, 2, 0], &sq3, 32, 16).unwrap();
        let mut full = vec![0, 1, 0];
        full.extend_from_slice(&w);
        full.extend_from_slice(&[0, 2, 0]);
        assert!(is_admissible(&full, &sq3));
    }

    #[test]
    fn letter_splitting() {
        let u = Word::parse_over("012021", 3).unwrap();
        assert_eq!(split_letter(&u, &[2, 3]).unwrap().to_string(), "012031");
        assert_eq!(split_letter(&u, &[2, 2]).unwrap().letters(), u.letters());
        assert!(matches!(split_letter(&u, &[2]), Err(Error::Domain(_))));
        assert!(split_letter(&u, &[1, 2]).is_err());
    }

    #[test]
    fn radix_order() {
        let mut w = vec![0u8];
        let mut seen = Vec::new();
        for _ in 0..6 {
            seen.push(crate::words::digits(&w));
            radix_successor(&mut w, 2);
        }
        assert_eq!(seen, ["0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn greedy_square_free() {
        let c = Constraint::new(3, bound("2"));
        assert_eq!(greedy_recurrent_builder(&c, 0, 32, 16).word.to_string(), "0");
        let out = greedy_recurrent_builder(&c, 3, 32, 16);
        assert!(!out.stopped_early);
        assert!(is_admissible(&out.word, &c));
        for f in ["0", "1", "2", "01"] {
            assert!(out.word.contains_factor(&Word::parse_over(f, 3).unwrap()));
        }
    }
}
