//! `--config` files: flat `key=value` lines turned into flags.
//!
//! Global keys go in front of everything and subcommand keys directly after
//! the subcommand name, so flags given on the command line come later and
//! win.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use crate::args::{GLOBAL_KEYS, SUBCOMMANDS};

fn config_path(raw: &[OsString]) -> Option<PathBuf> {
    let mut it = raw.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() || k == "config" {
            return Err(format!("config line {}: invalid key `{k}`", i + 1));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// `raw` with the configuration flags spliced in.
pub fn expand_args(raw: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&raw) else {
        return Ok(raw);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let pairs = parse_config(&text)?;
    let flag = |k: &str, v: &str| [OsString::from(format!("--{k}")), OsString::from(v)];
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (k, v) in &pairs {
        if GLOBAL_KEYS.contains(&k.as_str()) {
            global.extend(flag(k, v));
        } else {
            local.extend(flag(k, v));
        }
    }
    let sub = raw
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let mut out = Vec::with_capacity(raw.len() + global.len() + local.len());
    out.push(raw[0].clone());
    out.extend(global);
    match sub {
        Some(i) => {
            out.extend(raw[1..=i].iter().cloned());
            out.extend(local);
            out.extend(raw[i + 1..].iter().cloned());
        }
        None => {
            if !local.is_empty() {
                return Err("config sets subcommand options but no subcommand was given".into());
            }
            out.extend(raw[1..].iter().cloned());
        }
    }
    Ok(out)
}
