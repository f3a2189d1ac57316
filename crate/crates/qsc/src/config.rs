//! `key = value` run files. Keys are flag names without the dashes; blank
//! lines and `#` comments are ignored.

use anyhow::{bail, Context, Result};
use std::path::Path;

/// Flags that take no value.
const SWITCHES: [&str; 2] = ["timestamps", "negative-control"];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`", i + 1);
        };
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k.is_empty() || k == "config" {
            bail!("line {}: bad key `{k}`", i + 1);
        }
        out.push((k, v.to_string()));
    }
    Ok(out)
}

/// The file's settings as command-line arguments, to be placed before the
/// user's own flags so that those win.
pub fn config_args(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut args = Vec::new();
    for (k, v) in parse_config(&text).with_context(|| format!("in {}", path.display()))? {
        if SWITCHES.contains(&k.as_str()) {
            match v.as_str() {
                "true" | "yes" | "1" => args.push(format!("--{k}")),
                "false" | "no" | "0" => {}
                _ => bail!("`{k}` takes true or false, not `{v}`"),
            }
        } else {
            args.push(format!("--{k}={v}"));
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let got = parse_config("# sweep\nid = THM_A\nn=3..7  # odd only\n\nm_choice = both\n").unwrap();
        let want = [("id", "THM_A"), ("n", "3..7"), ("m-choice", "both")];
        assert_eq!(got, want.map(|(k, v)| (k.to_string(), v.to_string())));
        assert!(parse_config("id THM_A").is_err());
        assert!(parse_config("config = x").is_err());
    }

    #[test]
    fn switches_become_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "timestamps = true\nnegative_control = no\nseed = 4\n").unwrap();
        assert_eq!(config_args(&path).unwrap(), ["--timestamps", "--seed=4"]);
    }
}
