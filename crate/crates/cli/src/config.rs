//! `key = value` run configuration files. Flags on the command line win.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "state",
    "n",
    "phi",
    "r",
    "parity",
    "lambda",
    "cutoff",
    "scheme",
    "order",
    "bounds",
    "max_m",
    "format",
    "output",
    "family",
    "from",
    "to",
    "step",
    "alpha_order",
    "memory_limit_mb",
    "half_width",
    "points",
    "seed",
    "count",
    "threads",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Blank lines and `#` comments are skipped; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", i + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    i + 1
                )));
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Usage(format!(
                    "config line {}: '{key}' given twice",
                    i + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        debug_assert!(KEYS.contains(&key), "{key} is not a config key");
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    /// The flag value if given, otherwise the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_dashes() {
        let c = Config::parse("# run\nstate = fock\nn=3  # photons\nmax-m = 4\n").unwrap();
        assert_eq!(c.get::<String>("state").unwrap().as_deref(), Some("fock"));
        assert_eq!(c.get::<usize>("n").unwrap(), Some(3));
        assert_eq!(c.get::<usize>("max_m").unwrap(), Some(4));
        assert_eq!(c.pick(Some(7usize), "n").unwrap(), Some(7));
        assert_eq!(c.pick::<f64>(None, "r").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("n = 1\nn = 2").is_err());
        assert!(Config::parse("just words").is_err());
        assert!(Config::parse("n = three")
            .unwrap()
            .get::<usize>("n")
            .is_err());
    }
}
