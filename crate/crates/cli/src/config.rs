use std::fs;
use std::path::Path;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every command. Values come from explicit flags,
/// then the config file, then the defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub memory_cap: usize,
    pub cutoff: u64,
    pub depth: usize,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { precision: 256, memory_cap: 1 << 27, cutoff: 1000, depth: 6, format: None, threads: None }
    }
}

/// Values read from a config file; unset keys stay `None`.
#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub precision: Option<u32>,
    pub memory_cap: Option<usize>,
    pub cutoff: Option<u64>,
    pub depth: Option<usize>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config(format!("line {line}: bad value '{v}' for {key}")))
}

/// Parses `key = value` lines. Blank lines and lines starting with `#`
/// are skipped. Keys: precision, memory_cap, cutoff, depth, format, threads.
pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    let mut c = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected key = value", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        match k {
            "precision" => c.precision = Some(parse_value(k, v, i + 1)?),
            "memory_cap" => c.memory_cap = Some(parse_value(k, v, i + 1)?),
            "cutoff" => c.cutoff = Some(parse_value(k, v, i + 1)?),
            "depth" => c.depth = Some(parse_value(k, v, i + 1)?),
            "threads" => c.threads = Some(parse_value(k, v, i + 1)?),
            "format" => {
                c.format = Some(match v {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(CliError::Config(format!("line {}: format must be json or csv", i + 1))),
                })
            }
            _ => return Err(CliError::Config(format!("line {}: unknown key '{k}'", i + 1))),
        }
    }
    Ok(c)
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

impl RunConfig {
    /// Flags win over the file, the file over the defaults.
    pub fn merge(flags: &FileConfig, file: &FileConfig) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let c = RunConfig {
            precision: flags.precision.or(file.precision).unwrap_or(d.precision),
            memory_cap: flags.memory_cap.or(file.memory_cap).unwrap_or(d.memory_cap),
            cutoff: flags.cutoff.or(file.cutoff).unwrap_or(d.cutoff),
            depth: flags.depth.or(file.depth).unwrap_or(d.depth),
            format: flags.format.or(file.format),
            threads: flags.threads.or(file.threads),
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.precision < 32 {
            return Err(CliError::Config(format!("precision must be at least 32 bits, got {}", self.precision)));
        }
        if self.memory_cap == 0 || self.cutoff == 0 || self.threads == Some(0) {
            return Err(CliError::Config("limits must be positive".into()));
        }
        if self.depth > 12 {
            return Err(CliError::Config(format!("depth must be at most 12, got {}", self.depth)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_merge() {
        let file = parse_config("# run\nprecision = 128\ndepth=4\n\nformat = csv\n").unwrap();
        let flags = FileConfig { depth: Some(7), ..Default::default() };
        let c = RunConfig::merge(&flags, &file).unwrap();
        assert_eq!(c.precision, 128);
        assert_eq!(c.depth, 7);
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.cutoff, 1000);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config("depth: 3").is_err());
        assert!(parse_config("colour = red").is_err());
        assert!(parse_config("depth = many").is_err());
        let flags = FileConfig { depth: Some(13), ..Default::default() };
        assert!(RunConfig::merge(&flags, &FileConfig::default()).is_err());
    }
}
