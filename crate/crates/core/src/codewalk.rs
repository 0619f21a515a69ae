//! Jumps `aba` in ternary square-free words and the weighted `K₃₃` walk they trace.
//!
//! From a jump `aba` at position `i`, with `c` the third letter, the next
//! jump is `aca` at `i+2` (weight 1), `cbc` at `i+3` (weight 2) or `bab` at
//! `i+4` (weight 3). Each weight therefore acts on the six jumps as an
//! involution, and a codewalk is closed when the product of these
//! involutions fixes a vertex.

use std::fmt;
use std::str::FromStr;

use crate::repetition::is_square_free;
use crate::words::{canonical_image, Morphism, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JumpVertex {
    pub outer: u8,
    pub inner: u8,
}

impl JumpVertex {
    pub const ALL: [JumpVertex; 6] = [
        JumpVertex { outer: 0, inner: 1 },
        JumpVertex { outer: 0, inner: 2 },
        JumpVertex { outer: 1, inner: 0 },
        JumpVertex { outer: 1, inner: 2 },
        JumpVertex { outer: 2, inner: 0 },
        JumpVertex { outer: 2, inner: 1 },
    ];

    pub fn new(outer: u8, inner: u8) -> Result<Self> {
        if outer == inner || outer > 2 || inner > 2 {
            return Err(Error::Domain(format!("no jump {outer}{inner}{outer}")));
        }
        Ok(Self { outer, inner })
    }

    pub fn third(self) -> u8 {
        3 - self.outer - self.inner
    }

    pub fn letters(self) -> [u8; 3] {
        [self.outer, self.inner, self.outer]
    }

    /// The jump reached along an edge of weight `w`.
    pub fn step(self, w: u8) -> JumpVertex {
        let (a, b, c) = (self.outer, self.inner, self.third());
        match w {
            1 => JumpVertex { outer: a, inner: c },
            2 => JumpVertex { outer: c, inner: b },
            3 => JumpVertex { outer: b, inner: a },
            _ => panic!("weight {w} not in 1..=3"),
        }
    }

    /// Letters written after this jump before the next one ends.
    fn edge_letters(self, w: u8) -> Vec<u8> {
        let (a, b, c) = (self.outer, self.inner, self.third());
        match w {
            1 => vec![c, a],
            2 => vec![c, b, c],
            3 => vec![c, b, a, b],
            _ => panic!("weight {w} not in 1..=3"),
        }
    }

    fn index(self) -> usize {
        JumpVertex::ALL.iter().position(|&v| v == self).unwrap()
    }
}

impl fmt::Display for JumpVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.outer, self.inner, self.outer)
    }
}

impl FromStr for JumpVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.as_bytes() {
            [a, b, c] if a == c && a.is_ascii_digit() && b.is_ascii_digit() => JumpVertex::new(a - b'0', b - b'0'),
            _ => Err(Error::Parse(format!("{s:?} is not a jump aba"))),
        }
    }
}

/// Position in a walk over the jump graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkState {
    pub vertex: JumpVertex,
    /// Start of the current jump in the decoded word.
    pub position: usize,
}

impl WalkState {
    pub fn new(vertex: JumpVertex, position: usize) -> Self {
        Self { vertex, position }
    }

    pub fn advance(&mut self, w: u8) {
        self.vertex = self.vertex.step(w);
        self.position += usize::from(w) + 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codewalk {
    weights: Vec<u8>,
    head: usize,
    tail: usize,
}

impl Codewalk {
    pub fn new(weights: Vec<u8>, head_edge_length: usize, tail_edge_length: usize) -> Result<Self> {
        if let Some(&w) = weights.iter().find(|&&w| !(1..=3).contains(&w)) {
            return Err(Error::Parse(format!("weight {w} not in 1..=3")));
        }
        Ok(Self { weights, head: head_edge_length, tail: tail_edge_length })
    }

    /// Unmarked codewalk from a digit string over `{1,2,3}`.
    pub fn unmarked(s: &str) -> Result<Self> {
        Self::new(parse_weights(s)?, 0, 0)
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn head_marked(&self) -> bool {
        self.head > 0
    }

    pub fn tail_marked(&self) -> bool {
        self.tail > 0
    }

    pub fn head_edge_length(&self) -> usize {
        self.head
    }

    pub fn tail_edge_length(&self) -> usize {
        self.tail
    }

    /// Weights with the hanging edges in place, as codewalks are usually written.
    pub fn symbols(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weights.len() + 2);
        if self.head > 0 {
            out.push(self.head);
        }
        out.extend(self.weights.iter().map(|&w| usize::from(w)));
        if self.tail > 0 {
            out.push(self.tail);
        }
        out
    }

    /// Vertex reached from `start` after all weights.
    pub fn end_vertex(&self, start: JumpVertex) -> JumpVertex {
        self.weights.iter().fold(start, |v, &w| v.step(w))
    }
}

fn parse_weights(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'1'..=b'3' => Ok(b - b'0'),
            _ => Err(Error::Parse(format!("bad codewalk symbol {:?}", b as char))),
        })
        .collect()
}

impl fmt::Display for Codewalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.head > 0 {
            write!(f, "<{}:", self.head)?;
        }
        for &w in &self.weights {
            write!(f, "{w}")?;
        }
        if self.tail > 0 {
            write!(f, ":{}>", self.tail)?;
        }
        Ok(())
    }
}

impl FromStr for Codewalk {
    type Err = Error;

    /// `"<h:www…:t>"`, with either mark optional.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut head = 0;
        let mut tail = 0;
        if let Some(r) = rest.strip_prefix('<') {
            let (h, r) = r.split_once(':').ok_or_else(|| Error::Parse(format!("head mark without ':' in {s:?}")))?;
            head = h.parse().map_err(|_| Error::Parse(format!("bad head length {h:?}")))?;
            if head == 0 {
                return Err(Error::Parse("marked head of length 0".into()));
            }
            rest = r;
        }
        if let Some(r) = rest.strip_suffix('>') {
            let (w, t) = r.rsplit_once(':').ok_or_else(|| Error::Parse(format!("tail mark without ':' in {s:?}")))?;
            tail = t.parse().map_err(|_| Error::Parse(format!("bad tail length {t:?}")))?;
            if tail == 0 {
                return Err(Error::Parse("marked tail of length 0".into()));
            }
            rest = w;
        }
        Codewalk::new(parse_weights(rest)?, head, tail)
    }
}

fn ternary(w: &Word) -> Result<()> {
    if w.alphabet_size() != 3 {
        return Err(Error::Domain(format!("ternary word expected, got alphabet size {}", w.alphabet_size())));
    }
    Ok(())
}

fn jumps_unchecked(w: &[u8]) -> Vec<(usize, JumpVertex)> {
    w.windows(3)
        .enumerate()
        .filter(|(_, x)| x[0] == x[2] && x[0] != x[1])
        .map(|(i, x)| (i, JumpVertex { outer: x[0], inner: x[1] }))
        .collect()
}

pub fn find_jumps(w: &Word) -> Result<Vec<(usize, JumpVertex)>> {
    ternary(w)?;
    if !is_square_free(w) {
        return Err(Error::Domain("word contains a square".into()));
    }
    Ok(jumps_unchecked(w))
}

pub fn encode(w: &Word) -> Result<Codewalk> {
    let jumps = find_jumps(w)?;
    let (first, last) = match (jumps.first(), jumps.last()) {
        (Some(f), Some(l)) => (f.0, l.0),
        _ => return Err(Error::NoJump),
    };
    let weights = jumps.windows(2).map(|p| (p[1].0 - p[0].0 - 1) as u8).collect();
    Codewalk::new(weights, first, w.len() - (last + 3))
}

/// First jump of a square-free ternary word.
pub fn first_jump(w: &Word) -> Result<JumpVertex> {
    find_jumps(w)?.first().map(|j| j.1).ok_or(Error::NoJump)
}

fn is_jump_at(w: &[u8], i: usize) -> bool {
    i + 2 < w.len() && w[i] == w[i + 2] && w[i] != w[i + 1]
}

fn has_prefix_square(w: &[u8]) -> bool {
    (1..=w.len() / 2).any(|p| w[..p] == w[p..2 * p])
}

/// Body from the first jump on: jump, edges, then `tail` forced letters.
fn decode_body(weights: &[u8], start: JumpVertex, tail: usize) -> Result<Vec<u8>> {
    let mut out = start.letters().to_vec();
    let mut v = start;
    for &w in weights {
        out.extend(v.edge_letters(w));
        v = v.step(w);
    }
    if tail > 3 {
        return Err(Error::Decode(format!("tail edge of length {tail} always meets a jump or a square")));
    }
    // the tail is the beginning of a weight-3 edge without its closing jump
    out.extend(&v.edge_letters(3)[..tail]);
    Ok(out)
}

/// Prepends `head` letters, each the only one creating neither a square nor a jump.
fn extend_head(body: Vec<u8>, head: usize) -> Result<Vec<u8>> {
    let mut rev: Vec<u8> = body.into_iter().rev().collect();
    for step in 0..head {
        let mut choices = (0..3u8).filter(|&x| {
            rev.push(x);
            let n = rev.len();
            let ok = !is_jump_at(&rev[n - 3..], 0) && {
                let fwd: Vec<u8> = rev.iter().rev().copied().collect();
                !has_prefix_square(&fwd)
            };
            rev.pop();
            ok
        });
        let x = match (choices.next(), choices.next()) {
            (Some(x), None) => x,
            (None, _) => {
                return Err(Error::Decode(format!("no letter fits {} positions before the first jump", step + 1)))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Decode(format!("head letter {} is not forced", step + 1)))
            }
        };
        rev.push(x);
    }
    rev.reverse();
    Ok(rev)
}

/// The square-free word with codewalk `c` whose first jump is `start`.
pub fn decode(c: &Codewalk, start: JumpVertex) -> Result<Word> {
    let letters = extend_head(decode_body(&c.weights, start, c.tail)?, c.head)?;
    if !is_square_free(&letters) {
        return Err(Error::Decode(format!("codewalk {c} describes no square-free word")));
    }
    Word::new(letters, 3)
}

/// Representative of the decoded coding class, least under bijective codings.
pub fn decode_canonical(c: &Codewalk) -> Result<Word> {
    Ok(canonical_image(&decode(c, JumpVertex::ALL[0])?))
}

/// Closed codewalks have no hanging edges and return to their start vertex.
pub fn is_closed(c: &Codewalk) -> bool {
    !c.head_marked() && !c.tail_marked() && weights_closed(&c.weights)
}

fn weights_closed(ws: &[u8]) -> bool {
    let v = JumpVertex::ALL[0];
    ws.iter().fold(v, |u, &w| u.step(w)) == v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodewalkCheck {
    /// The decoded word is square-free.
    SufficientPass,
    Reject { position: usize, factor: String, reason: String },
}

impl CodewalkCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CodewalkCheck::SufficientPass)
    }
}

const FORBIDDEN_SHORT: [&[u8]; 5] = [&[1, 1], &[2, 2, 2], &[2, 2, 3], &[3, 2, 2], &[3, 3, 3]];

/// Sufficient test for square-freeness: no `11, 222, 223, 322, 333` and no
/// `vabv` with `v ≠ ε` and `vab` closed. Hanging edges are read as full
/// edges of their length, positions index [`Codewalk::symbols`].
pub fn sf_codewalk_check(c: &Codewalk) -> CodewalkCheck {
    let ws: Vec<u8> = c.symbols().into_iter().map(|s| s as u8).collect();
    let ws = &ws[..];
    for (i, _) in ws.iter().enumerate() {
        for bad in FORBIDDEN_SHORT {
            if ws[i..].starts_with(bad) {
                return CodewalkCheck::Reject {
                    position: i,
                    factor: crate::words::digits(bad),
                    reason: "forbidden short factor".into(),
                };
            }
        }
    }
    // perm[j] = image of each vertex after ws[i..j]
    let n = ws.len();
    for i in 0..n {
        let mut perm: [usize; 6] = [0, 1, 2, 3, 4, 5];
        for j in i..n {
            for p in perm.iter_mut() {
                *p = JumpVertex::ALL[*p].step(ws[j]).index();
            }
            // ws[i..=j] = v a b with |v| = j - i - 1
            let lv = (j + 1 - i).saturating_sub(2);
            if j < i + 2 || perm[0] != 0 {
                continue;
            }
            if j + 1 + lv <= n && ws[i..i + lv] == ws[j + 1..j + 1 + lv] {
                return CodewalkCheck::Reject {
                    position: i,
                    factor: crate::words::digits(&ws[i..j + 1 + lv]),
                    reason: "factor vabv with vab closed".into(),
                };
            }
        }
    }
    CodewalkCheck::SufficientPass
}

/// Largest index accepted by [`build_ab`].
pub const AB_CAP: usize = 12;

/// `A_0 = 212`, `B_0 = 3`, `A_{i+1} = B_i B_i A_i A_i A_i`, `B_{i+1} = B_i B_i A_i`.
pub fn build_ab(i: usize) -> Result<(Codewalk, Codewalk)> {
    if i > AB_CAP {
        return Err(Error::Capacity(format!("A_{i} exceeds the cap i ≤ {AB_CAP}")));
    }
    let mut a = vec![2u8, 1, 2];
    let mut b = vec![3u8];
    for _ in 0..i {
        let mut na = Vec::with_capacity(2 * b.len() + 3 * a.len());
        na.extend_from_slice(&b);
        na.extend_from_slice(&b);
        let mut nb = na.clone();
        nb.extend_from_slice(&a);
        for _ in 0..3 {
            na.extend_from_slice(&a);
        }
        a = na;
        b = nb;
    }
    Ok((Codewalk::new(a, 0, 0)?, Codewalk::new(b, 0, 0)?))
}

/// Concatenation of unmarked codewalks.
pub fn concat(parts: &[&Codewalk]) -> Codewalk {
    let weights = parts.iter().flat_map(|c| c.weights.iter().copied()).collect();
    Codewalk { weights, head: 0, tail: 0 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bonacci {
    /// Codewalk `ξ(f)` with `ξ: 0 → 2, 1 → 1`.
    OneTwo,
    /// Codewalk obtained from `f` by `0 → 3`.
    OneThree,
}

impl Bonacci {
    pub fn coding(self) -> [u8; 2] {
        match self {
            Bonacci::OneTwo => [2, 1],
            Bonacci::OneThree => [3, 1],
        }
    }
}

impl FromStr for Bonacci {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "12" => Ok(Bonacci::OneTwo),
            "13" => Ok(Bonacci::OneThree),
            _ => Err(Error::Parse(format!("bonacci variant {s:?}, expected 12 or 13"))),
        }
    }
}

/// Prefix of the coded Fibonacci codewalk driving `bonacci(variant, n)`.
pub fn bonacci_codewalk(variant: Bonacci, len: usize) -> Codewalk {
    let f = Morphism::fibonacci().fixed_point_prefix(0, len).unwrap();
    let code = variant.coding();
    Codewalk { weights: f.iter().map(|&a| code[a as usize]).collect(), head: 0, tail: 0 }
}

/// Prefix of the ternary word starting with the jump `010` and having the
/// coded Fibonacci word as codewalk.
pub fn bonacci(variant: Bonacci, n: usize) -> Word {
    let c = bonacci_codewalk(variant, n / 2 + 1);
    let mut letters = decode_body(&c.weights, JumpVertex::ALL[0], 0).unwrap();
    letters.truncate(n);
    Word::from_raw(letters, 3)
}

/// Prefix of the fixed point of `η: 0 → 010, 1 → 011`.
pub fn eta_word(n: usize) -> Word {
    Morphism::eta().fixed_point_prefix(0, n).unwrap()
}

/// True iff `len/period > (5+√5)/4`, decided in integers.
pub fn exceeds_f13_bound(len: usize, period: usize) -> bool {
    // r > (5+√5)/4  ⇔  4r − 5 > √5  ⇔  4L − 5P > 0 and (4L − 5P)² > 5P²
    let (l, p) = (len as i128, period as i128);
    let d = 4 * l - 5 * p;
    d > 0 && d * d > 5 * p * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::GeneratorSpec;

    fn w3(s: &str) -> Word {
        Word::parse_over(s, 3).unwrap()
    }

    #[test]
    fn cwk_of_t_golden() {
        let t = GeneratorSpec::TernaryThue.generate(48);
        let c = encode(&t).unwrap();
        assert!(c.head_marked());
        assert_eq!(c.head_edge_length(), 2);
        let sym: Vec<usize> = c.symbols().into_iter().take(16).collect();
        assert_eq!(sym, [2, 2, 1, 2, 3, 3, 2, 1, 2, 2, 1, 2, 2, 1, 2, 3]);
    }

    #[test]
    fn jumps_of_t() {
        let t = GeneratorSpec::TernaryThue.generate(14);
        let j = find_jumps(&t).unwrap();
        let first: Vec<(usize, String)> = j.iter().take(3).map(|(i, v)| (*i, v.to_string())).collect();
        assert_eq!(first, [(2, "202".into()), (5, "101".into()), (7, "121".into())]);
        let gaps_ok = j.windows(2).all(|p| (2..=4).contains(&(p[1].0 - p[0].0)));
        assert!(gaps_ok);
    }

    #[test]
    fn small_words() {
        let j = find_jumps(&w3("01020")).unwrap();
        assert_eq!(j, vec![(0, "010".parse().unwrap()), (2, "020".parse().unwrap())]);
        assert!(find_jumps(&w3("012")).unwrap().is_empty());
        assert!(matches!(find_jumps(&w3("0101")), Err(Error::Domain(_))));
        let c = encode(&w3("01020")).unwrap();
        assert_eq!(c.weights(), [1]);
        assert!(!c.head_marked() && !c.tail_marked());
        assert_eq!(encode(&w3("012")), Err(Error::NoJump));
    }

    #[test]
    fn decode_small() {
        let v: JumpVertex = "010".parse().unwrap();
        assert_eq!(decode(&Codewalk::unmarked("").unwrap(), v).unwrap().to_string(), "010");
        assert_eq!(decode(&Codewalk::unmarked("1").unwrap(), v).unwrap().to_string(), "01020");
    }

    #[test]
    fn roundtrip_t() {
        for n in [5usize, 10, 48, 500] {
            let t = GeneratorSpec::TernaryThue.generate(n);
            let c = encode(&t).unwrap();
            assert_eq!(decode(&c, first_jump(&t).unwrap()).unwrap(), t, "n = {n}");
        }
    }

    #[test]
    fn head_limits() {
        let v = JumpVertex::ALL[0];
        let c = Codewalk::new(vec![2], 3, 0).unwrap();
        assert_eq!(decode(&c, v).unwrap().len(), 3 + 3 + 3);
        assert!(matches!(decode(&Codewalk::new(vec![], 4, 0).unwrap(), v), Err(Error::Decode(_))));
        assert!(matches!(decode(&Codewalk::new(vec![], 0, 4).unwrap(), v), Err(Error::Decode(_))));
    }

    #[test]
    fn text_format() {
        let c: Codewalk = "<2:2212332".parse().unwrap();
        assert_eq!(c.head_edge_length(), 2);
        assert_eq!(c.weights(), [2, 2, 1, 2, 3, 3, 2]);
        assert_eq!(c.to_string(), "<2:2212332");
        let d: Codewalk = "<1:12:3>".parse().unwrap();
        assert_eq!((d.weights(), d.tail_edge_length()), (&[1u8, 2][..], 3));
        assert_eq!(d.to_string(), "<1:12:3>");
        assert!("124".parse::<Codewalk>().is_err());
        assert!("<0:12".parse::<Codewalk>().is_err());
    }

    #[test]
    fn closedness() {
        assert!(is_closed(&Codewalk::unmarked("212212").unwrap()));
        assert!(!is_closed(&Codewalk::unmarked("212").unwrap()));
        assert!(is_closed(&Codewalk::unmarked("33").unwrap()));
        assert!(is_closed(&Codewalk::unmarked("2123").unwrap()));
        assert!(!is_closed(&Codewalk::new(vec![3, 3], 1, 0).unwrap()));
        for s in ["212212", "212", "33", "2123", "1221", "123"] {
            let c = Codewalk::unmarked(s).unwrap();
            let closed: Vec<bool> = JumpVertex::ALL.iter().map(|&v| c.end_vertex(v) == v).collect();
            assert!(closed.iter().all(|&x| x == closed[0]), "{s}");
        }
    }

    #[test]
    fn sf_check() {
        let t = GeneratorSpec::TernaryThue.generate(200);
        let c = encode(&t).unwrap();
        let prefix = Codewalk::new(c.weights()[..16].to_vec(), 0, 0).unwrap();
        assert!(sf_codewalk_check(&prefix).passed());
        assert!(!sf_codewalk_check(&Codewalk::unmarked("2112").unwrap()).passed());
        let sq = Codewalk::unmarked("212212212212").unwrap();
        assert!(!sf_codewalk_check(&sq).passed());
        assert!(decode(&sq, JumpVertex::ALL[0]).is_err());
    }

    #[test]
    fn ab_sequences() {
        let (a, b) = build_ab(0).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("212".into(), "3".into()));
        let (a, b) = build_ab(1).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("33212212212".into(), "33212".into()));
        for (x, y) in [(&a, &a), (&a, &b), (&b, &b)] {
            assert!(is_closed(&concat(&[x, y])));
        }
        assert!(matches!(build_ab(AB_CAP + 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn bonacci_words() {
        assert_eq!(bonacci(Bonacci::OneTwo, 2).to_string(), "01");
        let f = bonacci(Bonacci::OneTwo, 300);
        assert!(is_square_free(&f));
        assert_eq!(encode(&f).unwrap().weights()[..20], bonacci_codewalk(Bonacci::OneTwo, 20).weights()[..]);
        assert!(is_square_free(&bonacci(Bonacci::OneThree, 300)));
        assert_eq!(eta_word(9).to_string(), "010011010");
    }

    #[test]
    fn f13_bound_arithmetic() {
        // (5+√5)/4 ≈ 1.809017
        assert!(!exceeds_f13_bound(1809, 1000));
        assert!(exceeds_f13_bound(1810, 1000));
        assert!(!exceeds_f13_bound(9, 5));
    }
}
