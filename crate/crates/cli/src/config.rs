//! Flat `key = value` configuration files merged into the command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, CommandFactory};

use crate::args::Cli;
use crate::error::CliError;

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

/// Remove `--config PATH` / `--config=PATH` from the arguments and return the path.
fn take_config(args: &[OsString]) -> (Vec<OsString>, Option<OsString>) {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            rest.push(a.clone());
            rest.extend(it.cloned());
            break;
        }
        if s == "--config" {
            path = it.next().cloned();
            if path.is_none() {
                rest.push(a.clone());
            }
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a.clone());
        }
    }
    (rest, path)
}

/// Long flag names given explicitly on the command line.
fn given_flags(args: &[OsString]) -> Vec<String> {
    args.iter()
        .map(|a| a.to_string_lossy().into_owned())
        .take_while(|s| s != "--")
        .filter_map(|s| s.strip_prefix("--").map(|n| n.split('=').next().unwrap_or(n).to_string()))
        .collect()
}

/// Command-line arguments with the config file's keys appended as flags,
/// except keys the command line already sets.
pub fn merge_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let (args, path) = take_config(&args);
    let Some(path) = path else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let entries = parse(&text)?;
    let Some(sub_name) = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).find(|a| !a.starts_with('-')) else {
        return Ok(args);
    };
    let cli = Cli::command();
    let Some(sub) = cli.find_subcommand(&sub_name) else {
        return Ok(args);
    };
    let given = given_flags(&args);
    let mut merged = args.clone();
    for (key, value) in &entries {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && !matches!(key.as_str(), "help" | "version" | "config"))
            .ok_or_else(|| CliError::Config(format!("unknown key `{key}` for `{sub_name}`")))?;
        if given.iter().any(|g| g == key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => merged.push(format!("--{key}").into()),
                "false" => {}
                other => {
                    return Err(CliError::Config(format!("`{key}` expects true or false, got `{other}`")));
                }
            },
            ArgAction::Append if arg.get_value_delimiter().is_none() => {
                for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    merged.push(format!("--{key}={part}").into());
                }
            }
            _ => merged.push(format!("--{key}={value}").into()),
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_underscores() {
        let m = parse("# run\nalpha = 0.5\ninner_nodes=64 # more\n\n").unwrap();
        assert_eq!(m["alpha"], "0.5");
        assert_eq!(m["inner-nodes"], "64");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse("alpha 0.5").is_err());
        assert!(parse("alpha = 1\nalpha = 2").is_err());
    }

    #[test]
    fn config_flag_is_removed() {
        let (rest, path) = take_config(&os(&["bin", "deriv", "--config=a.cfg", "--alpha", "1"]));
        assert_eq!(path, Some(OsString::from("a.cfg")));
        assert_eq!(rest, os(&["bin", "deriv", "--alpha", "1"]));
    }

    #[test]
    fn given_flags_stop_at_separator() {
        let g = given_flags(&os(&["bin", "deriv", "--alpha=1", "--strict", "--", "--n"]));
        assert_eq!(g, vec!["alpha", "strict"]);
    }
}
