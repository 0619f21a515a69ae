//! `key = value` defaults read from `--config`. Keys are flag names of the
//! invoked subcommand (or global flags); flags given on the command line win.

use std::ffi::OsString;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((k.replace('-', "_"), v.to_string()));
    }
    Ok(out)
}

/// Appends config entries the user did not set on the command line.
pub fn merge(argv: &[OsString], cmd: &Command, matches: &ArgMatches, entries: &[(String, String)]) -> Result<Vec<OsString>, String> {
    // leaf first, then its ancestors, which hold the global flags
    let mut chain = vec![(cmd, matches)];
    while let Some((name, sub)) = chain.last().unwrap().1.subcommand() {
        let c = chain.last().unwrap().0.find_subcommand(name).expect("parsed subcommand exists");
        chain.push((c, sub));
    }
    chain.reverse();
    let leaf_name = chain[0].0.get_name().to_string();
    let mut out = argv.to_vec();
    for (key, value) in entries {
        let found = chain.iter().find_map(|(c, m)| {
            c.get_arguments().find(|a| a.get_id().as_str() == key && a.get_long().is_some()).map(|a| (a, *m))
        });
        let Some((arg, m)) = found else {
            return Err(format!("unknown config key `{key}` for `{leaf_name}`"));
        };
        if key == "config" {
            return Err("config files cannot name another config file".into());
        }
        if m.value_source(key) == Some(ValueSource::CommandLine) {
            continue;
        }
        let flag = format!("--{}", arg.get_long().unwrap());
        if arg.get_action().takes_values() {
            out.push(flag.into());
            out.push(value.into());
        } else {
            match value.as_str() {
                "true" => out.push(flag.into()),
                "false" => {}
                _ => return Err(format!("config key `{key}` expects true or false")),
            }
        }
    }
    Ok(out)
}
