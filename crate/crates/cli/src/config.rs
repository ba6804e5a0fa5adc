//! `--config` files: one `key = value` per line, keys are long flag names.

use std::ffi::OsString;
use std::path::Path;

/// Turns a config file into flags. `true`/`false` values toggle switches.
pub fn parse(text: &str) -> Result<Vec<OsString>, String> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key `{key}`", lineno + 1));
        }
        match value {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => args.push(format!("--{key}={value}").into()),
        }
    }
    Ok(args)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            return it.next().cloned();
        }
        if let Some(path) = arg.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(path.into());
        }
    }
    None
}

#[derive(Debug)]
pub enum ConfigError {
    Read(String),
    Syntax(String),
}

/// Splices the config file's flags in after the subcommand so that flags on
/// the command line, which come later, take precedence.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    if argv.len() < 2 {
        return Ok(argv);
    }
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
    let extra = parse(&text).map_err(|e| ConfigError::Syntax(format!("{}: {e}", path.display())))?;
    let mut out = argv[..2].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
