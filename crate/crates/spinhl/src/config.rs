//! Optional TOML presets for the command line.
//!
//! ```toml
//! seed = 7
//! jobs = 4
//! n = 2
//! p = 1
//! D = 4
//! ```
//!
//! Flags given on the command line win over the file. `SPINHL_SEED` sits
//! between the two: it overrides the file but not an explicit `--seed`.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

pub const SEED_VAR: &str = "SPINHL_SEED";

#[derive(Debug, Default, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    #[serde(rename = "D")]
    pub d: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Seed precedence: flag, then `SPINHL_SEED`, then the file, then `fallback`.
    pub fn seed(&self, flag: Option<u64>, env: Option<&str>, fallback: u64) -> Result<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(text) = env {
            return text.trim().parse().with_context(|| format!("{SEED_VAR}={text:?} is not a seed"));
        }
        Ok(self.seed.unwrap_or(fallback))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let c: Config = toml::from_str("seed = 3\nD = 5").unwrap();
        assert_eq!(c.d, Some(5));
        assert_eq!(c.seed(None, None, 7).unwrap(), 3);
        assert_eq!(c.seed(None, Some("11"), 7).unwrap(), 11);
        assert_eq!(c.seed(Some(2), Some("11"), 7).unwrap(), 2);
        assert_eq!(Config::default().seed(None, None, 7).unwrap(), 7);
        assert!(c.seed(None, Some("x"), 7).is_err());
        assert!(toml::from_str::<Config>("colour = 1").is_err());
    }
}
