//! Run configuration: defaults, `key = value` files, and flag overrides.

use serde::Serialize;

use crate::algebra::ToleranceConfig;
use crate::boson::{DEFAULT_CUTOFF, DEFAULT_SAFE_MARGIN};
use crate::conventions::ConventionRecord;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const FORMATS: [&str; 3] = ["json", "csv", "md"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub cutoff: usize,
    pub safe_margin: usize,
    pub seed: u64,
    pub tolerances: ToleranceConfig,
    /// Convention override; `None` runs the resolved default.
    pub conventions: Option<ConventionRecord>,
    pub format: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_CUTOFF,
            safe_margin: DEFAULT_SAFE_MARGIN,
            seed: DEFAULT_SEED,
            tolerances: ToleranceConfig::default(),
            conventions: None,
            format: "md".to_string(),
        }
    }
}

/// Values present in a config file or on the command line. Unset fields keep
/// the value from the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub cutoff: Option<usize>,
    pub safe_margin: Option<usize>,
    pub seed: Option<u64>,
    pub num_tol: Option<f64>,
    pub exact_tol: Option<f64>,
    pub approx_tol: Option<f64>,
    pub format: Option<String>,
}

impl RunConfig {
    pub fn convention(&self) -> ConventionRecord {
        self.conventions.unwrap_or_default()
    }

    pub fn apply(&mut self, o: &ConfigOverrides) {
        if let Some(v) = o.cutoff {
            self.cutoff = v;
        }
        if let Some(v) = o.safe_margin {
            self.safe_margin = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.num_tol {
            self.tolerances.num_tol = v;
        }
        if let Some(v) = o.exact_tol {
            self.tolerances.exact_tol = v;
        }
        if let Some(v) = o.approx_tol {
            self.tolerances.approx_tol = v;
        }
        if let Some(v) = &o.format {
            self.format = v.clone();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 2 || self.cutoff < self.safe_margin {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                safe_margin: self.safe_margin,
            });
        }
        if !FORMATS.contains(&self.format.as_str()) {
            return Err(Error::UnknownName {
                kind: "format",
                name: self.format.clone(),
            });
        }
        self.tolerances.validate()
    }

    /// Defaults, then the file layer, then the flag layer.
    pub fn resolve(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(f) = file {
            cfg.apply(f);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| {
        Error::Config(format!(
            "line {line}: invalid value '{value}' for key '{key}'"
        ))
    })
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_config(text: &str) -> Result<ConfigOverrides> {
    let mut out = ConfigOverrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {line}: expected 'key = value', got '{content}'"
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "cutoff" => out.cutoff = Some(parse_value(key, value, line)?),
            "safe_margin" => out.safe_margin = Some(parse_value(key, value, line)?),
            "seed" => out.seed = Some(parse_value(key, value, line)?),
            "num_tol" => out.num_tol = Some(parse_value(key, value, line)?),
            "exact_tol" => out.exact_tol = Some(parse_value(key, value, line)?),
            "approx_tol" => out.approx_tol = Some(parse_value(key, value, line)?),
            "format" => out.format = Some(value.to_string()),
            other => {
                return Err(Error::Config(format!("line {line}: unknown key '{other}'")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_defaults() {
        let o = parse_config("").unwrap();
        let c = RunConfig::resolve(Some(&o), &ConfigOverrides::default()).unwrap();
        assert_eq!(c.cutoff, 3);
        assert_eq!(c.safe_margin, 2);
        assert_eq!(c.seed, 42);
        assert_eq!(c.format, "md");
        assert_eq!(c.convention(), ConventionRecord::default());
    }

    #[test]
    fn flags_override_file() {
        let o = parse_config("cutoff = 4\n# comment\nseed = 7  # trailing\n").unwrap();
        let flags = ConfigOverrides {
            cutoff: Some(2),
            ..Default::default()
        };
        let c = RunConfig::resolve(Some(&o), &flags).unwrap();
        assert_eq!(c.cutoff, 2);
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse_config("cutof = 4").unwrap_err();
        assert!(e.to_string().contains("cutof"), "{e}");
        assert!(e.is_usage());
        assert!(parse_config("cutoff 4").is_err());
        assert!(parse_config("cutoff = three")
            .unwrap_err()
            .to_string()
            .contains("line 1"));
    }

    #[test]
    fn invalid_combinations() {
        let flags = ConfigOverrides {
            cutoff: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(None, &flags),
            Err(Error::CutoffTooSmall { .. })
        ));
        let flags = ConfigOverrides {
            format: Some("xml".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &flags).is_err());
        let flags = ConfigOverrides {
            num_tol: Some(1e-3),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &flags).is_err());
    }
}
