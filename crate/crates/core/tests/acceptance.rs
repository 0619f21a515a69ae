#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

//! End-to-end acceptance checks, one line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use powerfree_core::codewalk::{decode, encode, first_jump};
use powerfree_core::complexity::{
    self, closed_form, minimal_forbidden_tm, mu_factorize, special_counts, stabilized_profile, ClosedForm,
};
use powerfree_core::krieger::{self, dominant_eigenvalue, series_exponent, series_exponents, series_limit};
use powerfree_core::repetition::{check_power_free, critical_exponent, ratio};
use powerfree_core::search::{self, longest_with_cap, Constraint, MaxLength, DEFAULT_BUDGET};
use powerfree_core::words::{self, parikh, Morphism};
use powerfree_core::{GeneratorSpec, PowerBound, Word};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn gen(spec: GeneratorSpec, n: usize) -> Word {
    spec.generate(n)
}

fn bound(s: &str) -> PowerBound {
    s.parse().unwrap()
}

fn golden_prefixes() -> Outcome {
    let cases = [
        (GeneratorSpec::ThueMorse, "0110100110010110"),
        (GeneratorSpec::TwistedThueMorse, "001001101001011001101001100101101001011"),
        (GeneratorSpec::TernaryThue, "012021012102012021020121012021012102012101202102"),
        (GeneratorSpec::G, "012020102012010201202"),
        (GeneratorSpec::TauG, "0010110011001001100101100100110010110011001"),
        (GeneratorSpec::GT, "011001001101001011010011001"),
    ];
    for (spec, want) in cases {
        let got = gen(spec, want.len()).to_string();
        ensure!(got == want, "{spec}: got {got}");
    }
    let g = Morphism::g();
    let images = [
        "011001001101001011010011001",
        "011001001101001011001101001",
        "011001001101001100101101001",
    ];
    for (a, want) in images.iter().enumerate() {
        ensure!(words::digits(g.image(a as u8)) == *want, "g({a})");
    }
    Ok(())
}

fn tprime_table() -> Outcome {
    let want = [1, 2, 4, 6, 10, 13, 17, 21, 24, 26, 30, 34, 38, 42, 45, 48, 50, 52, 56];
    let p = stabilized_profile(GeneratorSpec::TwistedThueMorse, 18);
    ensure!(p.stabilized, "profile did not stabilize");
    ensure!(p.values == want, "got {:?}", p.values);
    Ok(())
}

fn digits_of(s: &str) -> Vec<usize> {
    s.bytes().map(|b| (b - b'0') as usize).collect()
}

fn closed_forms() -> Outcome {
    let pt = stabilized_profile(GeneratorSpec::ThueMorse, 1024);
    ensure!(pt.stabilized, "tm profile did not stabilize");
    for n in 2..=1024 {
        ensure!(pt.get(n) == closed_form(ClosedForm::Pt, n as u64), "p_t({n})");
    }
    let ptp = stabilized_profile(GeneratorSpec::TwistedThueMorse, 512);
    ensure!(ptp.stabilized, "t′ profile did not stabilize");
    for n in 4..=512 {
        ensure!(ptp.get(n) == closed_form(ClosedForm::PtPrime, n as u64), "p_t′({n})");
    }
    let dt = digits_of("224244224444222244444444222222224");
    let dtp = digits_of("224344324444332244444444333322224");
    for (spec, shown, form) in [
        (GeneratorSpec::ThueMorse, &dt, ClosedForm::Dt),
        (GeneratorSpec::TwistedThueMorse, &dtp, ClosedForm::DtPrime),
    ] {
        let (counts, stable) = special_counts(spec, 33);
        ensure!(stable, "{spec} special factors did not stabilize");
        ensure!(&counts == shown, "{spec}: D = {counts:?}");
        for (i, &d) in shown.iter().enumerate() {
            ensure!(closed_form(form, i as u64 + 1) == d as u64, "{form:?}({})", i + 1);
        }
    }
    Ok(())
}

fn power_free_checks() -> Outcome {
    let pass = |w: &Word, b: &str| check_power_free(w, &bound(b)).passed();
    ensure!(pass(&gen(GeneratorSpec::ThueMorse, 1 << 14), "2+"), "t is not overlap-free");
    ensure!(pass(&gen(GeneratorSpec::TernaryThue, 10_000), "2"), "T has a square");
    let f12 = gen(GeneratorSpec::F12, 10_000);
    ensure!(pass(&f12, "11/6+"), "F12 exceeds 11/6");
    let (e, _) = critical_exponent(&f12).unwrap();
    ensure!(e == ratio(11, 6), "F12 critical exponent on the prefix is {e}");
    let tg = gen(GeneratorSpec::TauG, 10_000);
    ensure!(pass(&tg, "5/2+"), "τ(G) exceeds 5/2");
    ensure!(tg.contains_factor(&[0, 1, 1, 0, 0, 1, 1, 0, 0, 1]), "τ(G) misses 0110011001");
    ensure!(!pass(&tg, "5/2"), "τ(G) should contain a 5/2-power");
    ensure!(pass(&gen(GeneratorSpec::GT, 27_000), "7/3+"), "g(T) exceeds 7/3");
    Ok(())
}

fn codewalk_golden() -> Outcome {
    let t = gen(GeneratorSpec::TernaryThue, 48);
    let c = encode(&t).map_err(|e| e.to_string())?;
    ensure!(c.head_marked(), "head not marked");
    let sym: Vec<usize> = c.symbols().into_iter().take(16).collect();
    ensure!(sym == [2, 2, 1, 2, 3, 3, 2, 1, 2, 2, 1, 2, 2, 1, 2, 3], "cwk(T) = {sym:?}");
    let sf = Constraint::new(3, bound("2"));
    let mut checked = 0u64;
    let mut failure = None;
    let complete = search::dfs_visit(&sf, 30, DEFAULT_BUDGET, |w| {
        if failure.is_some() {
            return;
        }
        let word = Word::new(w.to_vec(), 3).unwrap();
        let Ok(cw) = encode(&word) else { return };
        checked += 1;
        match decode(&cw, first_jump(&word).unwrap()) {
            Ok(back) if back == word => {}
            other => failure = Some(format!("{word}: {other:?}")),
        }
    });
    ensure!(complete, "enumeration ran out of budget");
    if let Some(f) = failure {
        return Err(f);
    }
    ensure!(checked > 10_000, "only {checked} words checked");
    Ok(())
}

fn complexity_laws() -> Outcome {
    let law = |spec: GeneratorSpec, n_max: usize, lo: usize, f: &dyn Fn(u64) -> u64| -> Outcome {
        let p = stabilized_profile(spec, n_max);
        ensure!(p.stabilized, "{spec} did not stabilize");
        for n in lo..=n_max {
            ensure!(p.get(n) == f(n as u64), "{spec}: p({n}) = {}", p.get(n));
        }
        Ok(())
    };
    law(GeneratorSpec::F12, 200, 2, &|n| 6 * n - 6)?;
    law(GeneratorSpec::F13, 200, 5, &|n| 6 * n)?;
    law(GeneratorSpec::G, 300, 0, &|n| 2 * n + 1)?;
    law(GeneratorSpec::TauG, 300, 1, &|n| 2 * n)?;
    let pt = stabilized_profile(GeneratorSpec::ThueMorse, 257);
    let p_thue = stabilized_profile(GeneratorSpec::TernaryThue, 256);
    ensure!(pt.stabilized && p_thue.stabilized, "profiles did not stabilize");
    for n in 2..=256 {
        ensure!(p_thue.get(n) == pt.get(n + 1), "p_T({n}) ≠ p_t({})", n + 1);
    }
    Ok(())
}

fn krieger_numbers() -> Outcome {
    let e = dominant_eigenvalue(&Morphism::gamma().matrix(), 1e-12).map_err(|e| e.to_string())?;
    ensure!((e.lambda - 1.754_877_7).abs() < 1e-6, "λ = {}", e.lambda);
    ensure!(e.residual < 1e-9, "residual {}", e.residual);
    let s = krieger::g_series_1();
    let lim = series_limit(&s).map_err(|e| e.to_string())?;
    ensure!((lim.value() - 2.480_862_7).abs() < 1e-6, "limit {}", lim.value());
    ensure!((lim.numeric - lim.value()).abs() < 1e-6, "numeric limit {}", lim.numeric);
    for (m, want) in [(0, ratio(2, 1)), (1, ratio(2, 1)), (2, ratio(16, 7))] {
        ensure!(series_exponent(&s, m) == want, "exp(V_{m})");
    }
    let v = series_exponents(&s, 30);
    // the first two terms tie at 2, growth is strict from m = 1 on
    for m in 1..30 {
        ensure!(v[m + 1] > v[m], "not increasing at {m}");
    }
    let tv = series_exponents(&krieger::tau_g_series(), 40);
    ensure!(tv[0] == ratio(5, 2), "exp(v_0) = {}", tv[0]);
    ensure!(tv[1..].iter().all(|x| x < &ratio(5, 2)), "some exp(v_m) ≥ 5/2");
    Ok(())
}

fn length_38() -> Outcome {
    let c = Constraint::new(2, bound("5/2")).with_cap("2n".parse().unwrap());
    let out = longest_with_cap(&c, 200, DEFAULT_BUDGET);
    ensure!(out.complete, "budget exhausted after {} nodes", out.nodes);
    ensure!(out.max_length == MaxLength::Finite(38), "max length {}", out.max_length);
    let set: BTreeSet<String> = out.maximal_words.iter().map(ToString::to_string).collect();
    for w in ["00110011010011001001101001100100110010", "00110011010011001001101001100100110011"] {
        ensure!(set.contains(w), "{w} missing");
    }
    for w in &out.maximal_words {
        let r = w.reversed().to_string();
        let c = words::complement(w).unwrap().to_string();
        ensure!(set.contains(&r) && set.contains(&c), "{w}: orbit not closed");
    }
    println!("    {} maximal words of length 38, {} nodes", set.len(), out.nodes);
    Ok(())
}

fn gt_separation() -> Outcome {
    let p = stabilized_profile(GeneratorSpec::GT, 101);
    ensure!(p.stabilized, "g(T) did not stabilize");
    let pt = closed_form(ClosedForm::Pt, 101);
    ensure!(pt == 328, "p_t(101) = {pt}");
    ensure!(p.get(101) < pt, "p_g(101) = {}", p.get(101));
    println!("    p_g(101) = {}", p.get(101));
    Ok(())
}

/// Largest `|f|/per(f)` over all factors, as `(length, period)`, by direct search.
fn oracle_max_power(w: &[u8]) -> (usize, usize) {
    let mut best = (1, 1);
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            let f = &w[i..j];
            let per = (1..=f.len()).find(|&p| f[..f.len() - p] == f[p..]).unwrap();
            if f.len() * best.1 > best.0 * per {
                best = (f.len(), per);
            }
        }
    }
    best
}

fn property_suites() -> Outcome {
    // checker vs oracle
    let bounds: Vec<PowerBound> = ["2", "2+", "7/3", "7/3+", "5/2", "5/2+", "11/6+"].iter().map(|b| bound(b)).collect();
    for k in [2u8, 3] {
        let mut w: Vec<u8> = Vec::new();
        for len in 1..=14 {
            w.clear();
            w.resize(len, 0);
            loop {
                let (l, p) = oracle_max_power(&w);
                for b in &bounds {
                    let oracle = !b.forbids_ratio(l, p);
                    if check_power_free(&w, b).passed() != oracle {
                        return Err(format!("{} under {b}", words::digits(&w)));
                    }
                }
                // next word in lexicographic order
                let Some(i) = w.iter().rposition(|&a| a + 1 < k) else { break };
                w[i] += 1;
                for x in &mut w[i + 1..] {
                    *x = 0;
                }
            }
        }
    }
    // binary first differences
    for spec in [GeneratorSpec::ThueMorse, GeneratorSpec::TwistedThueMorse] {
        let p = stabilized_profile(spec, 65);
        let (d, _) = special_counts(spec, 64);
        for n in 1..=64 {
            ensure!(p.get(n + 1) - p.get(n) == d[n - 1] as u64, "{spec}: D({n}) ≠ Δp({n})");
        }
    }
    // Parikh/matrix homomorphism
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let strategy = (2u8..=4).prop_flat_map(|k| {
        (
            Just(k),
            prop::collection::vec(prop::collection::vec(0..k, 1..5), k as usize),
            prop::collection::vec(0..k, 0..40),
        )
    });
    runner
        .run(&strategy, |(k, images, w)| {
            let m = Morphism::new(images.into_iter().map(|i| Word::new(i, k).unwrap()).collect(), k).unwrap();
            let w = Word::new(w, k).unwrap();
            let lhs = parikh(&m.apply(&w).unwrap());
            let rhs = parikh(&w).times(&m.matrix()).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    // symmetry verdicts
    ensure!(complexity::is_symmetric(&gen(GeneratorSpec::ThueMorse, 1 << 12), 10), "t not symmetric");
    ensure!(!complexity::is_symmetric(&gen(GeneratorSpec::TwistedThueMorse, 1 << 12), 5), "t′ symmetric");
    ensure!(complexity::is_symmetric(&gen(GeneratorSpec::F12, 10_000), 3), "F12 not symmetric");
    // μ-factorization of t′
    let f = mu_factorize(&gen(GeneratorSpec::TwistedThueMorse, 256), 4).map_err(|e| e.to_string())?;
    let xs: Vec<String> = f.prefixes.iter().map(ToString::to_string).collect();
    ensure!(xs == ["00", "1", "0", "1"], "x = {xs:?}");
    // minimal forbidden words
    let t = gen(GeneratorSpec::ThueMorse, 1 << 14);
    let listed: BTreeSet<Vec<u8>> = minimal_forbidden_tm(4).into_iter().map(Word::into_letters).collect();
    let max_len = 3 * 16 + 2;
    let mut found = BTreeSet::new();
    for m in 2..=max_len {
        let shorter = complexity::factor_set(&t, m - 1);
        let same = complexity::factor_set(&t, m);
        for x in &shorter {
            for b in 0..2u8 {
                let mut y = x.to_vec();
                y.push(b);
                if !same.contains(y.as_slice()) && shorter.contains(&y[1..]) {
                    found.insert(y);
                }
            }
        }
    }
    ensure!(found == listed, "discovered {} minimal forbidden words, listed {}", found.len(), listed.len());
    for w in &listed {
        ensure!(complexity::verify_minimal_forbidden(w, &t).unwrap(), "{}", words::digits(w));
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden prefixes", golden_prefixes),
        ("t′ complexity table", tprime_table),
        ("closed forms vs brute force", closed_forms),
        ("power-free golden checks", power_free_checks),
        ("codewalk golden and roundtrip", codewalk_golden),
        ("complexity laws", complexity_laws),
        ("Krieger numbers", krieger_numbers),
        ("length-38 regression", length_38),
        ("g(T) separation", gt_separation),
        ("property suites", property_suites),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|x| x == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {id:>2} {name}: pass ({secs:.1} s)"),
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({secs:.1} s): {e}");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
