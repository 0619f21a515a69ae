mod config;
mod output;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use powerfree_core::codewalk::{self, Codewalk, CodewalkCheck, JumpVertex};
use powerfree_core::complexity::{self, minimal_forbidden_tm, profile, stabilized_profile, verify_minimal_forbidden};
use powerfree_core::krieger::{self, ExponentValue, RunSeries};
use powerfree_core::repetition::{check_power_free, critical_exponent, PowerCheck};
use powerfree_core::search::{self, ComplexityCap, Constraint};
use powerfree_core::{GeneratorSpec, PowerBound, Word};

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "powerfree", version, about = "Power-free infinite words, subword complexity and codewalks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// `key = value` file with flag defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Node budget for searches.
    #[arg(long, global = true, env = "POWERFREE_BUDGET", default_value_t = search::DEFAULT_BUDGET)]
    budget: u64,
    /// Lookahead depth for extendability tests.
    #[arg(long, global = true, default_value_t = search::DEFAULT_DEPTH)]
    depth: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Prefix of a named word.
    Gen {
        /// One of tm, twisted_tm, ternary_thue, fibonacci, f12, f13, G, tauG, gT, eta.
        name: GeneratorSpec,
        /// Number of letters.
        #[arg(long, short = 'n')]
        length: usize,
    },
    /// Subword complexity p(n), or special factor counts D(n).
    Complexity {
        /// Named word, as accepted by `gen`.
        #[arg(long, required_unless_present = "word", conflicts_with = "word")]
        spec: Option<GeneratorSpec>,
        /// Word literal, `gen:<name>:<n>` or `file:<path>`.
        #[arg(long, visible_alias = "word-from", value_parser = parse_word_ref)]
        word: Option<Word>,
        /// Largest n.
        #[arg(long, default_value_t = 20)]
        to: usize,
        /// Emit D(n) for 1 ≤ n ≤ to instead of p(n).
        #[arg(long)]
        special: bool,
    },
    /// Critical exponent of a finite word, or of a named word via run series.
    Critexp {
        /// Named word, as accepted by `gen`.
        #[arg(long, required_unless_present = "word", conflicts_with = "word")]
        spec: Option<GeneratorSpec>,
        /// Word literal, `gen:<name>:<n>` or `file:<path>`.
        #[arg(long, visible_alias = "word-from", value_parser = parse_word_ref)]
        word: Option<Word>,
        /// Prefix swept directly when `--spec` is given.
        #[arg(long, default_value_t = 10_000)]
        length: usize,
    },
    /// Power-freeness verdict with a witness.
    Check {
        /// Exponent bound: `a/b` forbids that power, `a/b+` only larger ones.
        #[arg(long)]
        bound: PowerBound,
        /// Word literal, `gen:<name>:<n>` or `file:<path>`.
        #[arg(long, visible_alias = "word-from", value_parser = parse_word_ref)]
        word: Word,
    },
    /// Codewalks of ternary square-free words.
    Codewalk {
        #[command(subcommand)]
        action: CodewalkCmd,
    },
    /// Exponents of run series of morphic words.
    Krieger {
        #[arg(long, value_parser = parse_series)]
        series: RunSeries,
        /// Inclusive range `a..b` or a single index.
        #[arg(long, default_value = "0..40", value_parser = parse_range)]
        m: (usize, usize),
        /// Report the limit and supremum instead of the terms.
        #[arg(long)]
        limit: bool,
    },
    /// Longest words under a power bound and complexity cap.
    Search {
        /// Alphabet size k, letters 0..k.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        alphabet: u8,
        /// Exponent bound: `a/b` forbids that power, `a/b+` only larger ones.
        #[arg(long)]
        bound: PowerBound,
        /// Affine cap such as `2n`, `2n+1`, `n+1`.
        #[arg(long)]
        cap: Option<ComplexityCap>,
        #[arg(long, value_enum, default_value_t = Mode::Longest)]
        mode: Mode,
        /// Length limit of the search tree.
        #[arg(long, default_value_t = 200)]
        limit: usize,
    },
    /// Number of admissible words of each length.
    Census {
        /// Alphabet size k, letters 0..k.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        alphabet: u8,
        /// Exponent bound: `a/b` forbids that power, `a/b+` only larger ones.
        #[arg(long)]
        bound: PowerBound,
        /// Affine cap such as `2n`, `2n+1`, `n+1`.
        #[arg(long)]
        cap: Option<ComplexityCap>,
        /// Largest length counted.
        #[arg(long)]
        to: usize,
    },
    /// Minimal forbidden factors of the Thue-Morse word.
    Forbidden {
        /// Largest k of the r_k, s_k families.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=12))]
        to: u32,
    },
    /// Regenerated tables.
    Report { name: report::ReportName },
}

#[derive(Subcommand, Debug)]
enum CodewalkCmd {
    /// Codewalk of a ternary square-free word.
    Encode {
        #[arg(value_parser = parse_word_ref)]
        word: Word,
    },
    /// Word with the given codewalk, starting from a jump such as `010`.
    Decode {
        codewalk: Codewalk,
        #[arg(long, default_value = "010")]
        start: JumpVertex,
    },
    /// Sufficient square-freeness test.
    Check { codewalk: Codewalk },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Height of the search tree and every word of that length.
    Longest,
    /// Dead ends of the search tree.
    DeadEnds,
}

fn parse_word_ref(s: &str) -> Result<Word, String> {
    if let Some(rest) = s.strip_prefix("gen:") {
        let (name, n) = rest.rsplit_once(':').ok_or("expected gen:<name>:<n>")?;
        let n: usize = n.parse().map_err(|_| format!("bad length {n:?}"))?;
        return powerfree_core::words::generate_named(name, n).map_err(|e| e.to_string());
    }
    if let Some(path) = s.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let digits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        return digits.parse().map_err(|e: powerfree_core::Error| e.to_string());
    }
    s.parse().map_err(|e: powerfree_core::Error| e.to_string())
}

fn parse_series(s: &str) -> Result<RunSeries, String> {
    krieger::named_series(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad index {x:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// Exit status beyond success.
enum Status {
    Ok,
    Failed,
}

type CmdResult = Result<(Output, Status), String>;

fn exact(e: &ExponentValue) -> Value {
    match e {
        ExponentValue::Exact(r) => json!(r.to_string()),
        ExponentValue::Limit(_) => Value::Null,
    }
}

fn default_series(spec: GeneratorSpec) -> Vec<RunSeries> {
    match spec {
        GeneratorSpec::G => vec![krieger::g_series_1(), krieger::g_series_2()],
        GeneratorSpec::TauG => vec![krieger::tau_g_series()],
        _ => Vec::new(),
    }
}

fn words_json(ws: &[Word]) -> Value {
    Value::Array(ws.iter().map(|w| json!(w.to_string())).collect())
}

fn run(cli: &Cli) -> CmdResult {
    let ok = |o: Output| Ok((o, Status::Ok));
    match &cli.command {
        Cmd::Gen { name, length } => {
            let w = name.generate(*length);
            ok(Output::record(&["name", "length", "word"], vec![json!(name.name()), json!(w.len()), json!(w.to_string())])
                .with_plain(w.to_string()))
        }
        Cmd::Complexity { spec, word, to, special } => {
            let (w, stable) = match (spec, word) {
                (Some(s), _) => complexity::stabilized_prefix(*s, to + 1),
                (None, Some(w)) => (w.clone(), true),
                _ => unreachable!(),
            };
            let rows = if *special {
                if w.len() < to + 1 {
                    return Err(format!("word of length {} is too short for D({to})", w.len()));
                }
                (1..=*to)
                    .map(|n| {
                        let r = complexity::special_factors(&w, n).unwrap();
                        vec![json!(n), json!(r.count())]
                    })
                    .collect()
            } else {
                let p = match spec {
                    Some(s) => stabilized_profile(*s, *to),
                    None => profile(&w, *to).map_err(|e| e.to_string())?,
                };
                (0..=*to).map(|n| vec![json!(n), json!(p.get(n))]).collect()
            };
            let out = Output::table(if *special { &["n", "D"] } else { &["n", "p"] }, rows);
            if stable {
                ok(out)
            } else {
                eprintln!("warning: profile did not stabilize");
                Ok((out, Status::Failed))
            }
        }
        Cmd::Critexp { spec, word, length } => match (spec, word) {
            (_, Some(w)) => {
                let (e, r) = critical_exponent(w).map_err(|e| e.to_string())?;
                let f = ExponentValue::Exact(e.clone()).to_f64();
                ok(Output::record(
                    &["exponent", "exponent_float", "start", "length", "period"],
                    vec![json!(e.to_string()), json!(f), json!(r.start), json!(r.length), json!(r.period)],
                )
                .with_plain(format!("{e} (start {}, length {}, period {})", r.start, r.length, r.period)))
            }
            (Some(s), None) => {
                let series = default_series(*s);
                let m = krieger::morphic_critical_exponent(*s, &series, *length).map_err(|e| e.to_string())?;
                let names: Vec<&str> = series.iter().map(|x| x.name.as_str()).collect();
                let kind = if m.attained { "attained" } else { "limit, not attained" };
                ok(Output::record(
                    &["spec", "exponent_exact", "exponent_float", "attained", "series"],
                    vec![json!(s.name()), exact(&m.value), json!(m.value.to_f64()), json!(m.attained), json!(names.join(" "))],
                )
                .with_plain(format!("{s}: {} ({kind}; prefix {length}; series: {})", m.value, if names.is_empty() { "none".to_string() } else { names.join(" ") })))
            }
            _ => unreachable!(),
        },
        Cmd::Check { bound, word } => match check_power_free(word, bound) {
            PowerCheck::Pass => ok(Output::record(&["result", "bound", "length"], vec![json!("pass"), json!(bound.to_string()), json!(word.len())])
                .with_plain("pass")),
            PowerCheck::Fail(r) => {
                let e = r.exponent();
                let out = Output::record(
                    &["result", "bound", "length", "exponent", "start", "run_length", "period"],
                    vec![json!("fail"), json!(bound.to_string()), json!(word.len()), json!(e.to_string()), json!(r.start), json!(r.length), json!(r.period)],
                )
                .with_plain(format!("fail: exponent {e} at start {}, length {}, period {}", r.start, r.length, r.period));
                Ok((out, Status::Failed))
            }
        },
        Cmd::Codewalk { action } => match action {
            CodewalkCmd::Encode { word } => {
                let c = codewalk::encode(word).map_err(|e| e.to_string())?;
                let start = codewalk::first_jump(word).map_err(|e| e.to_string())?;
                ok(Output::record(&["codewalk", "start"], vec![json!(c.to_string()), json!(start.to_string())]).with_plain(c.to_string()))
            }
            CodewalkCmd::Decode { codewalk: c, start } => {
                let w = codewalk::decode(c, *start).map_err(|e| e.to_string())?;
                ok(Output::record(&["word", "length"], vec![json!(w.to_string()), json!(w.len())]).with_plain(w.to_string()))
            }
            CodewalkCmd::Check { codewalk: c } => match codewalk::sf_codewalk_check(c) {
                CodewalkCheck::SufficientPass => ok(Output::record(&["result"], vec![json!("sufficient_pass")]).with_plain("sufficient_pass")),
                CodewalkCheck::Reject { position, factor, reason } => Ok((
                    Output::record(&["result", "position", "factor", "reason"], vec![json!("reject"), json!(position), json!(factor), json!(reason)])
                        .with_plain(format!("reject: {factor} at {position} ({reason})")),
                    Status::Failed,
                )),
            },
        },
        Cmd::Krieger { series, m, limit } => {
            if *limit {
                let l = krieger::series_limit(series).map_err(|e| e.to_string())?;
                let sup = krieger::series_supremum(series).map_err(|e| e.to_string())?;
                if let Some(w) = &l.warning {
                    eprintln!("warning: {w}");
                }
                return ok(Output::record(
                    &["series", "limit", "symbolic", "error_bar", "supremum", "attained"],
                    vec![json!(series.name), json!(l.value()), json!(l.symbolic.is_some()), json!(l.error_bar), json!(sup.value.to_string()), json!(sup.attained)],
                ));
            }
            let values = krieger::series_exponents(series, m.1);
            let rows = (m.0..=m.1)
                .map(|i| {
                    let v = ExponentValue::Exact(values[i].clone());
                    vec![json!(i), json!(values[i].to_string()), json!(v.to_f64())]
                })
                .collect();
            ok(Output::table(&["m", "exponent_exact", "exponent_float"], rows))
        }
        Cmd::Search { alphabet, bound, cap, mode, limit } => {
            let mut c = Constraint::new(*alphabet, bound.clone());
            if let Some(cap) = cap {
                c = c.with_cap(cap.clone());
            }
            let out = match mode {
                Mode::Longest => search::longest_with_cap(&c, *limit, cli.budget),
                Mode::DeadEnds => search::dfs_census(&c, *limit, cli.budget),
            };
            let mut plain = format!("max_length {}\nnodes {}\ncomplete {}\n", out.max_length, out.nodes, out.complete);
            for w in &out.maximal_words {
                plain.push_str(&format!("{w}\n"));
            }
            let rows = out.maximal_words.iter().map(|w| vec![json!(out.max_length.to_string()), json!(w.len()), json!(w.to_string())]).collect();
            let o = Output::table(&["max_length", "length", "word"], rows).with_plain(plain).with_json(json!({
                "max_length": out.max_length.to_string(),
                "nodes": out.nodes,
                "complete": out.complete,
                "words": words_json(&out.maximal_words),
            }));
            if out.complete {
                ok(o)
            } else {
                eprintln!("warning: node budget exhausted; results are partial");
                Ok((o, Status::Failed))
            }
        }
        Cmd::Census { alphabet, bound, cap, to } => {
            let mut c = Constraint::new(*alphabet, bound.clone());
            if let Some(cap) = cap {
                c = c.with_cap(cap.clone());
            }
            let out = search::dfs_census(&c, *to, cli.budget);
            let rows = out.census.iter().enumerate().map(|(n, &x)| vec![json!(n), json!(x)]).collect();
            let o = Output::table(&["n", "count"], rows);
            if out.complete {
                ok(o)
            } else {
                eprintln!("warning: node budget exhausted; counts are lower bounds");
                Ok((o, Status::Failed))
            }
        }
        Cmd::Forbidden { to } => {
            let ws = minimal_forbidden_tm(*to);
            let longest = ws.iter().map(|w| w.len()).max().unwrap_or(0);
            let reference = GeneratorSpec::ThueMorse.generate((4 * longest).next_power_of_two());
            let mut rows = Vec::new();
            let mut all = true;
            for w in &ws {
                let v = verify_minimal_forbidden(w, &reference).map_err(|e| e.to_string())?;
                all &= v;
                rows.push(vec![json!(w.len()), json!(w.to_string()), json!(v)]);
            }
            Ok((Output::table(&["length", "word", "verified"], rows), if all { Status::Ok } else { Status::Failed }))
        }
        Cmd::Report { name } => {
            let (out, all) = report::build(*name);
            Ok((out, if all { Status::Ok } else { Status::Failed }))
        }
    }
}

fn parse_args(argv: Vec<OsString>) -> Result<Cli, clap::Error> {
    let cmd = Cli::command();
    // lenient pass: required flags may come from the config file
    let loose = cmd.clone().ignore_errors(true).try_get_matches_from(&argv)?;
    let mut leaf = &loose;
    while let Some((_, sub)) = leaf.subcommand() {
        leaf = sub;
    }
    let path = leaf.get_one::<PathBuf>("config").or_else(|| loose.get_one::<PathBuf>("config"));
    let Some(path) = path.cloned() else {
        let matches = cmd.try_get_matches_from(&argv)?;
        return Cli::from_arg_matches(&matches);
    };
    let usage = |msg: String| Cli::command().error(clap::error::ErrorKind::ValueValidation, msg);
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let entries = config::parse(&text).map_err(usage)?;
    let merged = config::merge(&argv, &cmd, &loose, &entries).map_err(usage)?;
    let matches = cmd.try_get_matches_from(merged)?;
    Cli::from_arg_matches(&matches)
}

fn main() -> ExitCode {
    let cli = match parse_args(std::env::args_os().collect()) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((out, status)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.render(cli.format).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            match status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
