use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Batch settings read from a JSON file; command-line flags override them.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub variant: String,
    /// Degree bound `A` for algebra sweeps.
    pub degree_bound: i64,
    /// Level cap `I`.
    pub level_cap: i64,
    /// Module window `[lo, hi]`.
    pub range: (i64, i64),
    pub a_grid: Vec<String>,
    pub b_grid: Vec<String>,
    pub lambda: Option<PathBuf>,
    pub format: Format,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: "B".into(),
            degree_bound: 4,
            level_cap: 2,
            range: (-8, 8),
            a_grid: ["0", "1", "1/2", "-3/2"].map(String::from).to_vec(),
            b_grid: ["0", "1/2", "1", "2"].map(String::from).to_vec(),
            lambda: None,
            format: Format::Table,
            strict: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree_bound < 0 || self.level_cap < 0 {
            bail!("degree_bound and level_cap must be nonnegative");
        }
        if self.range.0 > self.range.1 {
            bail!("range: lower end {} exceeds upper end {}", self.range.0, self.range.1);
        }
        if self.a_grid.is_empty() || self.b_grid.is_empty() {
            bail!("a_grid and b_grid must be nonempty");
        }
        Ok(())
    }
}

/// Parses `lo:hi`.
pub fn parse_range(text: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("expected lo:hi, got {text:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("range lower end: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("range upper end: {e}"))?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-8:8"), Ok((-8, 8)));
        assert!(parse_range("8").is_err());
    }

    #[test]
    fn partial_config() {
        let c: RunConfig = serde_json::from_str(r#"{"level_cap": 3, "format": "json"}"#).unwrap();
        assert_eq!(c.level_cap, 3);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.range, (-8, 8));
        assert!(serde_json::from_str::<RunConfig>(r#"{"levle_cap": 3}"#).is_err());
    }
}
