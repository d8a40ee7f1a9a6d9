//! `key=value` defaults for the global options. Flags given on the command
//! line win over the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use crate::args::{Format, GlobalArgs};

/// Fully resolved global settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub time_budget_s: Option<f64>,
    pub max_keys: Option<usize>,
    pub oracle_ceiling: Option<u128>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("config key `{key}`: {e}"))
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<GlobalArgs> {
    let mut g = GlobalArgs::default();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value", no + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        match key.replace('-', "_").as_str() {
            "threads" => g.threads = Some(parse(key, value)?),
            "format" => {
                g.format = Some(match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => bail!("config key `format`: unknown format `{other}`"),
                })
            }
            "out" => g.out = Some(PathBuf::from(value)),
            "seed" => g.seed = Some(parse(key, value)?),
            "time_budget_s" => g.time_budget_s = Some(parse(key, value)?),
            "max_keys" => g.max_keys = Some(parse(key, value)?),
            "oracle_ceiling" => g.oracle_ceiling = Some(parse(key, value)?),
            _ => bail!("config line {}: unknown key `{key}`", no + 1),
        }
    }
    Ok(g)
}

pub fn load_config(path: &Path) -> Result<GlobalArgs> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text)
}

/// Overlays command-line flags on the config file, if any.
pub fn resolve(flags: &GlobalArgs) -> Result<Settings> {
    let file = match &flags.config {
        Some(p) => load_config(p)?,
        None => GlobalArgs::default(),
    };
    Ok(Settings {
        threads: flags.threads.or(file.threads),
        format: flags.format.or(file.format).unwrap_or_default(),
        out: flags.out.clone().or(file.out),
        seed: flags.seed.or(file.seed),
        time_budget_s: flags.time_budget_s.or(file.time_budget_s),
        max_keys: flags.max_keys.or(file.max_keys),
        oracle_ceiling: flags.oracle_ceiling.or(file.oracle_ceiling),
    })
}
