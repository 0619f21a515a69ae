//! Critical exponents of morphic fixed points from series of runs.
//!
//! A series starts from a run `V₀` with root `X` and repeatedly takes the
//! image of the current run, extended to a run with the image period. With
//! `P_i` the Parikh vector of the letters added at step `i`,
//!
//! ```text
//! exp(V_m) = ‖P(V₀)·A^m + Σ_{i=1..m} P_i·A^{m−i}‖ / ‖P(X)·A^m‖.
//! ```

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::repetition::{critical_exponent, ratio, runs, Rational, Run};
use crate::words::{GeneratorSpec, IntMatrix, Morphism, ParikhVector};
use crate::{Error, Result};

// ---------------------------------------------------------------- polynomials

/// Characteristic polynomial `det(xI − A)`, leading coefficient first.
pub fn char_poly(a: &IntMatrix) -> Result<Vec<i128>> {
    if !a.is_square() {
        return Err(Error::Eigen(format!("{}×{} matrix is not square", a.nrows(), a.ncols())));
    }
    let n = a.nrows();
    let am: Vec<Vec<i128>> = a.rows().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect())
            .collect()
    };
    // Faddeev–LeVerrier
    let mut coeffs = vec![1i128];
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let c_prev = *coeffs.last().unwrap();
        let mut next = mul(&am, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c_prev;
        }
        m = next;
        let am_m = mul(&am, &m);
        let trace: i128 = (0..n).map(|i| am_m[i][i]).sum();
        coeffs.push(-trace / k as i128);
    }
    Ok(coeffs)
}

fn eval_rational(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Horner evaluation, leading coefficient first.
pub fn eval_poly(p: &[i128], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, &c| acc * x + c as f64)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
    }
    p
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    let d = p.len() - 1;
    trim(p[..d].iter().enumerate().map(|(i, c)| c * BigInt::from(d - i)).collect())
}

fn remainder(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let q = &r[0] / &b[0];
        for (i, c) in b.iter().enumerate() {
            r[i] = &r[i] - &q * c;
        }
        r.remove(0);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        r = trim(r);
    }
    r
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

struct Sturm(Vec<Vec<BigRational>>);

impl Sturm {
    fn new(p: &[i128]) -> Self {
        let p0: Vec<BigRational> = p.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let mut chain = vec![p0.clone()];
        if p0.len() > 1 {
            let mut prev = p0;
            let mut cur = derivative(&prev);
            while !is_zero_poly(&cur) {
                let r: Vec<BigRational> = remainder(&prev, &cur).into_iter().map(|c| -c).collect();
                chain.push(cur.clone());
                prev = cur;
                cur = r;
            }
        }
        Sturm(chain)
    }

    fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<bool> = self
            .0
            .iter()
            .map(|p| eval_rational(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|s| s[0] != s[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenData {
    pub lambda: f64,
    /// `|χ(λ)|` at the returned value.
    pub residual: f64,
    /// Characteristic polynomial, leading coefficient first.
    pub char_poly: Vec<i128>,
}

/// Largest real eigenvalue by Sturm-sequence bisection on the exact
/// characteristic polynomial, to an interval shorter than `tol`.
pub fn dominant_eigenvalue(a: &IntMatrix, tol: f64) -> Result<EigenData> {
    let p = char_poly(a)?;
    if p.len() < 2 {
        return Err(Error::Eigen("empty matrix".into()));
    }
    let sturm = Sturm::new(&p);
    let p_rat: Vec<BigRational> = p.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let one = BigRational::from_integer(1.into());
    // Cauchy bound on root moduli
    let bound = 1 + p[1..].iter().map(|c| c.abs()).max().unwrap_or(0);
    let mut hi = BigRational::from_integer(bound.into());
    let has_one = eval_rational(&p_rat, &one).is_zero();
    if sturm.count(&one, &hi) == 0 {
        if has_one {
            return Ok(EigenData { lambda: 1.0, residual: 0.0, char_poly: p });
        }
        return Err(Error::Eigen("no real eigenvalue ≥ 1".into()));
    }
    let tol = BigRational::from_float(tol.max(1e-300)).unwrap();
    let mut lo = one;
    let two = BigRational::from_integer(2.into());
    while &hi - &lo >= tol {
        let mid = (&lo + &hi) / &two;
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the root lies in (lo, hi]
    let lambda = if eval_rational(&p_rat, &hi).is_zero() {
        hi.to_f64().unwrap()
    } else {
        ((&lo + &hi) / two).to_f64().unwrap()
    };
    Ok(EigenData { lambda, residual: eval_poly(&p, lambda).abs(), char_poly: p })
}

// --------------------------------------------------------------------- series

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSeries {
    pub name: String,
    /// `P(X)`.
    pub root_parikh: ParikhVector,
    /// `P(V₀)`.
    pub initial_parikh: ParikhVector,
    /// `P_i` is `corrections[(i − 1) mod len]`.
    pub corrections: Vec<ParikhVector>,
    pub matrix: IntMatrix,
    /// Coding applied after the last step, with the letters it adds.
    pub image_matrix: Option<IntMatrix>,
    pub image_extension: u64,
    /// Seed run in the prefix of the morphic word.
    pub seed: Run,
}

impl RunSeries {
    fn correction(&self, i: usize) -> &ParikhVector {
        &self.corrections[(i - 1) % self.corrections.len()]
    }

    /// Numerator and denominator vectors at `m`, before any image coding.
    fn vectors(&self, m: usize) -> (ParikhVector, ParikhVector) {
        let mut num = self.initial_parikh.clone();
        let mut den = self.root_parikh.clone();
        for i in 1..=m {
            num = num.times(&self.matrix).unwrap().add(self.correction(i));
            den = den.times(&self.matrix).unwrap();
        }
        (num, den)
    }
}

fn pv(c: &[u64]) -> ParikhVector {
    ParikhVector::from_counts(c)
}

/// Series of `G` from the run `2020` at position 2, root `20`.
pub fn g_series_1() -> RunSeries {
    RunSeries {
        name: "G1".into(),
        root_parikh: pv(&[1, 0, 1]),
        initial_parikh: pv(&[2, 0, 2]),
        corrections: vec![pv(&[0, 0, 0]), pv(&[1, 0, 1])],
        matrix: Morphism::gamma().matrix(),
        image_matrix: None,
        image_extension: 0,
        seed: Run { start: 2, length: 4, period: 2 },
    }
}

/// Series of `G` from the run `201201` at position 8, root `201`.
pub fn g_series_2() -> RunSeries {
    RunSeries {
        name: "G2".into(),
        root_parikh: pv(&[1, 1, 1]),
        initial_parikh: pv(&[2, 2, 2]),
        corrections: vec![pv(&[1, 0, 0]), pv(&[0, 0, 1])],
        matrix: Morphism::gamma().matrix(),
        image_matrix: None,
        image_extension: 0,
        seed: Run { start: 8, length: 6, period: 3 },
    }
}

/// `τ`-images of the first `G` series, each extended by two letters.
pub fn tau_g_series() -> RunSeries {
    RunSeries {
        name: "tauG".into(),
        image_matrix: Some(Morphism::tau().matrix()),
        image_extension: 2,
        // τ(01) = 001, so τ(2020) starts at 3 and gains 01 on the right
        seed: Run { start: 3, length: 10, period: 4 },
        ..g_series_1()
    }
}

pub fn named_series(name: &str) -> Result<RunSeries> {
    match name {
        "G1" => Ok(g_series_1()),
        "G2" => Ok(g_series_2()),
        "tauG" => Ok(tau_g_series()),
        _ => Err(Error::Registry(format!("unknown series {name:?}; expected G1, G2 or tauG"))),
    }
}

fn to_int(x: BigUint) -> BigInt {
    BigInt::from(x)
}

/// Exact exponent of the `m`-th run of the series.
pub fn series_exponent(s: &RunSeries, m: usize) -> Rational {
    let (num, den) = s.vectors(m);
    let (num, den) = match &s.image_matrix {
        Some(b) => (num.times(b).unwrap(), den.times(b).unwrap()),
        None => (num, den),
    };
    Rational::new(to_int(num.norm() + s.image_extension), to_int(den.norm()))
}

/// Exponents for `m = 0..=m_max`, sharing the matrix products.
pub fn series_exponents(s: &RunSeries, m_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(m_max + 1);
    let mut num = s.initial_parikh.clone();
    let mut den = s.root_parikh.clone();
    for m in 0..=m_max {
        if m > 0 {
            num = num.times(&s.matrix).unwrap().add(s.correction(m));
            den = den.times(&s.matrix).unwrap();
        }
        let (n, d) = match &s.image_matrix {
            Some(b) => (num.times(b).unwrap(), den.times(b).unwrap()),
            None => (num.clone(), den.clone()),
        };
        out.push(Rational::new(to_int(n.norm() + s.image_extension), to_int(d.norm())));
    }
    out
}

/// `2 + (‖v·(A^{m−2} + A^{m−4} + ⋯)‖ + extra) / ‖v·A^m‖`.
pub fn reduced_exponent(v: &ParikhVector, a: &IntMatrix, m: usize, extra: u64) -> Rational {
    let mut powers = vec![v.clone()];
    for _ in 0..m {
        let next = powers.last().unwrap().times(a).unwrap();
        powers.push(next);
    }
    let mut sum = BigUint::zero();
    let mut j = m;
    while j >= 2 {
        j -= 2;
        sum += powers[j].norm();
    }
    let den = powers[m].norm();
    Rational::from_integer(2.into()) + Rational::new(to_int(sum + extra), to_int(den))
}

/// The growth step `c_1·A + c_2` of a period-2 correction pattern equals the
/// root vector, and the seed is a square: the series then telescopes.
fn telescopes(s: &RunSeries) -> bool {
    match s.corrections.as_slice() {
        [c1, c2] => {
            c1.times(&s.matrix).map(|x| x.add(c2)).ok().as_ref() == Some(&s.root_parikh)
                && s.initial_parikh == s.root_parikh.scale(2)
        }
        _ => false,
    }
}

/// Depth of the exact evaluation behind numeric limits.
pub const LIMIT_DEPTH: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesLimit {
    /// `2 + 1/(λ² − 1)` when the corrections telescope.
    pub symbolic: Option<f64>,
    /// `exp(V_40)` as a float.
    pub numeric: f64,
    /// `|exp(V_40) − symbolic|`, or the last step's change without a symbolic value.
    pub error_bar: f64,
    pub warning: Option<String>,
}

impl SeriesLimit {
    pub fn value(&self) -> f64 {
        self.symbolic.unwrap_or(self.numeric)
    }
}

pub fn series_limit(s: &RunSeries) -> Result<SeriesLimit> {
    let values = series_exponents(s, LIMIT_DEPTH);
    let numeric = values[LIMIT_DEPTH].to_f64().unwrap();
    if telescopes(s) {
        let eig = dominant_eigenvalue(&s.matrix, 1e-13)?;
        let symbolic = 2.0 + 1.0 / (eig.lambda * eig.lambda - 1.0);
        Ok(SeriesLimit { symbolic: Some(symbolic), numeric, error_bar: (numeric - symbolic).abs(), warning: None })
    } else {
        let prev = values[LIMIT_DEPTH - 1].to_f64().unwrap();
        Ok(SeriesLimit {
            symbolic: None,
            numeric,
            error_bar: (numeric - prev).abs(),
            warning: Some(format!("series {} does not telescope; numeric limit only", s.name)),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExponentValue {
    Exact(Rational),
    Limit(f64),
}

impl ExponentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExponentValue::Exact(r) => r.to_f64().unwrap(),
            ExponentValue::Limit(x) => *x,
        }
    }
}

impl std::fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExponentValue::Exact(r) => write!(f, "{r}"),
            ExponentValue::Limit(x) => write!(f, "{x:.7}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Supremum {
    pub value: ExponentValue,
    pub attained: bool,
    /// Index of the largest exact term when attained.
    pub at: Option<usize>,
}

/// Supremum of `exp(V_m)`: the largest exact term if it beats the limit,
/// otherwise the limit itself.
pub fn series_supremum(s: &RunSeries) -> Result<Supremum> {
    let values = series_exponents(s, LIMIT_DEPTH);
    let limit = series_limit(s)?.value();
    let (at, best) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .unwrap();
    if best.to_f64().unwrap() > limit + 1e-12 {
        Ok(Supremum { value: ExponentValue::Exact(best.clone()), attained: true, at: Some(at) })
    } else {
        Ok(Supremum { value: ExponentValue::Limit(limit), attained: false, at: None })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphicExponent {
    pub value: ExponentValue,
    pub attained: bool,
    /// Highest run found directly in the prefix.
    pub best_run: Option<Run>,
}

/// Critical exponent of a registry word from a direct sweep of a prefix and
/// the suprema of the given series.
pub fn morphic_critical_exponent(spec: GeneratorSpec, series: &[RunSeries], prefix_len: usize) -> Result<MorphicExponent> {
    if let Some(s) = series.iter().find(|s| s.seed.start + s.seed.length > prefix_len) {
        return Err(Error::Coverage(format!(
            "prefix of length {prefix_len} does not contain the seed of series {}",
            s.name
        )));
    }
    let w = spec.generate(prefix_len);
    let direct = runs(&w).into_iter().max_by(|a, b| {
        (a.length * b.period).cmp(&(b.length * a.period)).then(b.start.cmp(&a.start))
    });
    let (mut best, best_run) = match direct {
        Some(r) => (r.exponent(), Some(r)),
        None if w.is_empty() => (ratio(0, 1), None),
        None => {
            let (e, r) = critical_exponent(&w)?;
            (e, Some(r))
        }
    };
    let mut limit: Option<f64> = None;
    for s in series {
        let sup = series_supremum(s)?;
        match sup.value {
            ExponentValue::Exact(r) => best = best.max(r),
            ExponentValue::Limit(x) => limit = Some(limit.map_or(x, |l: f64| l.max(x))),
        }
    }
    match limit {
        Some(x) if x > best.to_f64().unwrap() + 1e-12 => {
            Ok(MorphicExponent { value: ExponentValue::Limit(x), attained: false, best_run })
        }
        _ => Ok(MorphicExponent { value: ExponentValue::Exact(best), attained: true, best_run }),
    }
}
