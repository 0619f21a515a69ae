use proptest::prelude::*;

use powerfree_core::codewalk::{self, decode, encode, is_closed, sf_codewalk_check, Codewalk, JumpVertex};
use powerfree_core::repetition::{
    check_power_free, critical_exponent, exponent, fractional_power, minimal_period, ratio, runs, PowerCheck,
};
use powerfree_core::search::{dfs_census, is_admissible, AffineCap, Builder, ComplexityCap, Constraint};
use powerfree_core::words::{self, bijective_codings, canonical_image, complement, recode};
use powerfree_core::{GeneratorSpec, PowerBound, Rational, Word};

const SPECS: [GeneratorSpec; 9] = [
    GeneratorSpec::ThueMorse,
    GeneratorSpec::TwistedThueMorse,
    GeneratorSpec::TernaryThue,
    GeneratorSpec::Fibonacci,
    GeneratorSpec::F12,
    GeneratorSpec::F13,
    GeneratorSpec::G,
    GeneratorSpec::TauG,
    GeneratorSpec::Eta,
];

const BOUNDS: [&str; 7] = ["2", "2+", "7/3", "7/3+", "5/2", "5/2+", "3"];

fn word_over(k: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..k, 1..=max_len)
}

fn any_word() -> impl Strategy<Value = (u8, Vec<u8>)> {
    (2u8..=4).prop_flat_map(|k| (Just(k), word_over(k, 40)))
}

fn naive_min_period(w: &[u8]) -> usize {
    (1..=w.len()).find(|&p| (p..w.len()).all(|i| w[i] == w[i - p])).unwrap()
}

fn naive_max_exponent(w: &[u8]) -> Rational {
    let mut best = ratio(1, 1);
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            let f = &w[i..j];
            let e = ratio(f.len(), naive_min_period(f));
            if e > best {
                best = e;
            }
        }
    }
    best
}

// maximal repetitions of exponent at least 2, by direct scan
fn naive_runs(w: &[u8]) -> Vec<(usize, usize, usize)> {
    let n = w.len();
    let mut out = Vec::new();
    for p in 1..=n / 2 {
        let mut i = 0;
        while i + p < n {
            if w[i] != w[i + p] {
                i += 1;
                continue;
            }
            let s = i;
            while i + p < n && w[i] == w[i + p] {
                i += 1;
            }
            let len = i - s + p;
            if len >= 2 * p && naive_min_period(&w[s..s + len]) == p {
                out.push((s, len, p));
            }
        }
    }
    out.sort();
    out
}

fn ternary_square_free() -> impl Strategy<Value = Word> {
    let sources = [GeneratorSpec::TernaryThue, GeneratorSpec::F12, GeneratorSpec::F13, GeneratorSpec::G];
    (0..sources.len(), 0usize..2000, 4usize..300, 0usize..6).prop_map(move |(s, start, len, c)| {
        let w = sources[s].generate(start + len);
        let f = w.factor(start, len);
        recode(&f, &bijective_codings(3)[c]).unwrap()
    })
}

fn codewalk_strategy() -> impl Strategy<Value = Codewalk> {
    (prop::collection::vec(1u8..=3, 1..14), 0usize..=3, 0usize..=3)
        .prop_map(|(ws, h, t)| Codewalk::new(ws, h, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_prefixes_are_stable(s in 0..SPECS.len(), n in 0usize..400, d in 0usize..400) {
        let long = SPECS[s].generate(n + d);
        prop_assert_eq!(SPECS[s].generate(n), long.prefix(n));
    }

    #[test]
    fn complement_is_an_involution(w in word_over(2, 60)) {
        let w = Word::new(w, 2).unwrap();
        prop_assert_eq!(complement(&complement(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn canonical_image_is_minimal_and_idempotent((k, w) in any_word()) {
        let w = Word::new(w, k).unwrap();
        let c = canonical_image(&w);
        prop_assert_eq!(canonical_image(&c), c.clone());
        for coding in bijective_codings(k) {
            let r = recode(&w, &coding).unwrap();
            prop_assert!(c.letters() <= r.letters());
            prop_assert_eq!(canonical_image(&r), c.clone());
        }
    }

    #[test]
    fn minimal_period_matches_scan((_, w) in any_word()) {
        prop_assert_eq!(minimal_period(&w).unwrap(), naive_min_period(&w));
    }

    #[test]
    fn critical_exponent_matches_scan((_, w) in any_word()) {
        let (e, r) = critical_exponent(&w).unwrap();
        prop_assert_eq!(&e, &naive_max_exponent(&w));
        prop_assert_eq!(exponent(r.factor(&w)).unwrap(), e);
    }

    #[test]
    fn runs_match_scan((_, w) in any_word()) {
        let mut got: Vec<_> = runs(&w).into_iter().map(|r| (r.start, r.length, r.period)).collect();
        got.sort();
        prop_assert_eq!(got, naive_runs(&w));
    }

    #[test]
    fn repetitions_sit_inside_dominating_runs((_, w) in any_word(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let i = a.index(w.len());
        let j = i + 1 + b.index(w.len() - i);
        let f = &w[i..j];
        let e = exponent(f).unwrap();
        let q = naive_min_period(f);
        if e >= ratio(2, 1) {
            prop_assert!(runs(&w).iter().any(|r| r.period == q && r.start <= i && j <= r.start + r.length && r.exponent() >= e));
        }
    }

    #[test]
    fn every_square_lies_in_a_run((_, w) in any_word()) {
        let rs = runs(&w);
        for p in 1..=w.len() / 2 {
            for i in 0..=w.len() - 2 * p {
                if w[i..i + p] == w[i + p..i + 2 * p] {
                    prop_assert!(rs.iter().any(|r| r.period == naive_min_period(&w[i..i + 2 * p])
                        && r.start <= i && i + 2 * p <= r.start + r.length));
                }
            }
        }
    }

    #[test]
    fn fractional_power_exponent(y in prop::collection::vec(0u8..2, 0..8), num in 1usize..30) {
        // a single 2 keeps x primitive
        let mut x = y;
        x.push(2);
        let x = Word::new(x, 3).unwrap();
        let len = x.len() + num;
        let a = ratio(len, x.len());
        let y = fractional_power(&x, &a).unwrap();
        prop_assert_eq!(y.len(), len);
        prop_assert!(exponent(&y).unwrap() >= a);
    }

    #[test]
    fn check_is_monotone_in_the_bound((_, w) in any_word(), i in 0..BOUNDS.len(), j in 0..BOUNDS.len()) {
        let (lo, hi) = (i.min(j), i.max(j));
        let lo: PowerBound = BOUNDS[lo].parse().unwrap();
        let hi: PowerBound = BOUNDS[hi].parse().unwrap();
        if check_power_free(&w, &lo).passed() {
            prop_assert!(check_power_free(&w, &hi).passed());
        }
        match check_power_free(&w, &lo) {
            PowerCheck::Pass => {}
            PowerCheck::Fail(r) => prop_assert!(lo.forbids(&r.exponent())),
        }
    }

    #[test]
    fn bound_text_roundtrip(i in 0..BOUNDS.len()) {
        let b: PowerBound = BOUNDS[i].parse().unwrap();
        prop_assert_eq!(b.to_string().parse::<PowerBound>().unwrap(), b);
    }

    #[test]
    fn builder_agrees_with_full_check(k in 2u8..=3, i in 0..BOUNDS.len(), cap in 0usize..4, w in word_over(3, 30)) {
        let caps = [None, Some("2n"), Some("n+1"), Some("3n-2")];
        let mut c = Constraint::new(k, BOUNDS[i].parse().unwrap());
        if let Some(s) = caps[cap] {
            c = c.with_cap(ComplexityCap::Affine(s.parse::<AffineCap>().unwrap()));
        }
        let w: Vec<u8> = w.into_iter().map(|a| a % k).collect();
        let mut b = Builder::new(&c);
        for (n, &a) in w.iter().enumerate() {
            let ok = b.push(a);
            prop_assert_eq!(ok, is_admissible(&w[..=n], &c), "at {}", n);
            if !ok {
                break;
            }
        }
        let len = b.len();
        while b.pop().is_some() {}
        prop_assert!(b.is_empty());
        for &a in &w[..len] {
            prop_assert!(b.push(a));
        }
    }

    #[test]
    fn codewalks_ignore_renaming(w in ternary_square_free(), c in 0usize..6) {
        let r = recode(&w, &bijective_codings(3)[c]).unwrap();
        match encode(&w) {
            Ok(cw) => prop_assert_eq!(encode(&r).unwrap(), cw),
            Err(_) => prop_assert!(encode(&r).is_err()),
        }
    }

    #[test]
    fn decode_inverts_encode(w in ternary_square_free()) {
        if let Ok(c) = encode(&w) {
            let start = codewalk::first_jump(&w).unwrap();
            prop_assert_eq!(decode(&c, start).unwrap(), w.clone());
            let text = c.to_string();
            prop_assert_eq!(text.parse::<Codewalk>().unwrap(), c);
        }
    }

    #[test]
    fn passing_codewalks_decode_square_free(c in codewalk_strategy(), v in 0usize..6) {
        if sf_codewalk_check(&c).passed() {
            let w = decode(&c, JumpVertex::ALL[v]);
            prop_assert!(w.is_ok(), "{} -> {:?}", c, w);
        }
    }

    #[test]
    fn closedness_ignores_start(ws in prop::collection::vec(1u8..=3, 1..20)) {
        let c = Codewalk::new(ws, 0, 0).unwrap();
        let fixed = JumpVertex::ALL.iter().map(|&v| c.end_vertex(v) == v).collect::<Vec<_>>();
        prop_assert!(fixed.iter().all(|&f| f == is_closed(&c)));
    }

    #[test]
    fn parikh_of_images(s in 0usize..4, w in word_over(3, 30)) {
        let ms = [words::Morphism::ternary_thue(), words::Morphism::gamma(), words::Morphism::g(), words::Morphism::tau()];
        let m = &ms[s];
        let k = m.source_alphabet();
        let w: Vec<u8> = w.into_iter().map(|a| a % k).collect();
        let w = Word::new(w, k).unwrap();
        let lhs = words::parikh(&m.apply(&w).unwrap());
        prop_assert_eq!(lhs, words::parikh(&w).times(&m.matrix()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn census_shrinks_when_tightened(k in 2u8..=3, i in 0..BOUNDS.len() - 1, cap in 0usize..3) {
        let caps = ["n+1", "2n", "3n-2"];
        let n = if k == 2 { 14 } else { 9 };
        let loose = Constraint::new(k, BOUNDS[i + 1].parse().unwrap());
        let tight = Constraint::new(k, BOUNDS[i].parse().unwrap());
        let capped = loose.clone().with_cap(ComplexityCap::Affine(caps[cap].parse().unwrap()));
        let a = dfs_census(&loose, n, u64::MAX).census;
        let b = dfs_census(&tight, n, u64::MAX).census;
        let c = dfs_census(&capped, n, u64::MAX).census;
        for l in 0..=n {
            prop_assert!(b[l] <= a[l] && c[l] <= a[l]);
        }
    }
}
