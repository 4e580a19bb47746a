//! Run configuration: a key-value file, flag overrides and the config hash.
//!
//! The file format is one `key = value` per line; `#` starts a comment.
//! Keys not known to the chosen subcommand are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use mbi_core::electrostatics::{beta_born, ModelParams, ALPHA_CODATA};
use mbi_core::spectral::fmt17;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Potential,
    Spectrum,
    Perturb,
    BetaBound,
    Fields,
    Trajectory,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Potential => "potential",
            Command::Spectrum => "spectrum",
            Command::Perturb => "perturb",
            Command::BetaBound => "beta-bound",
            Command::Fields => "fields",
            Command::Trajectory => "trajectory",
            Command::Verify => "verify",
        }
    }

    /// Subcommand keys with their defaults, beyond the shared ones.
    fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Potential => &[("r_min", "1e-3"), ("r_max", "1e4")],
            Command::Spectrum => &[("levels", "3"), ("ell", "0"), ("kg", "true")],
            Command::Perturb => &[("beta_min", "1e-6"), ("beta_max", "10")],
            Command::BetaBound => &[("fractions", "1,0.1,0.01,0.001"), ("k", "1")],
            Command::Fields => &[
                ("steps", "200"),
                ("dt", "0.25"),
                ("every", "20"),
                ("seed", "1"),
            ],
            Command::Trajectory => &[
                ("periods", "1"),
                ("starts", "1,0.5,0.3"),
                ("guide", "schrodinger"),
            ],
            Command::Verify => &[("criteria", "all")],
        }
    }

    fn default_grid(self) -> usize {
        match self {
            Command::Potential => 71,
            Command::Spectrum => 500,
            Command::Perturb => 29,
            Command::BetaBound => 0,
            Command::Fields => 16,
            Command::Trajectory => 800,
            Command::Verify => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError(format!(
                "format must be csv or json, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Flag values; `None` leaves the file value or the default in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    /// Extra `key=value` pairs.
    pub set: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub tol: f64,
    pub grid: usize,
    pub out: PathBuf,
    pub format: Format,
    extra: BTreeMap<String, String>,
}

/// Parse `key = value` lines.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            ConfigError(format!("line {}: expected key = value, got {raw:?}", i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError(format!("line {}: empty key", i + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError(format!("line {}: duplicate key {k:?}", i + 1)));
        }
    }
    Ok(map)
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {v:?}")))
}

impl RunConfig {
    pub fn resolve(
        command: Command,
        file: Option<&Path>,
        flags: Overrides,
    ) -> Result<Self, ConfigError> {
        let mut map = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
                parse_key_values(&text)?
            }
            None => BTreeMap::new(),
        };
        for kv in &flags.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("--set expects key=value, got {kv:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }

        let mut take = |key: &str| map.remove(key);
        let alpha = match (flags.alpha, take("alpha")) {
            (Some(a), _) => a,
            (None, Some(v)) => number("alpha", &v)?,
            (None, None) => ALPHA_CODATA,
        };
        let beta = match (flags.beta, take("beta")) {
            (Some(b), _) => b,
            (None, Some(v)) if v == "born" => beta_born(alpha),
            (None, Some(v)) => number("beta", &v)?,
            (None, None) => beta_born(alpha),
        };
        let tol = match (flags.tol, take("tol")) {
            (Some(t), _) => t,
            (None, Some(v)) => number("tol", &v)?,
            (None, None) => 0.01,
        };
        let grid = match (flags.grid, take("grid")) {
            (Some(g), _) => g,
            (None, Some(v)) => number("grid", &v)?,
            (None, None) => command.default_grid(),
        };
        let out = match (flags.out, take("out")) {
            (Some(o), _) => o,
            (None, Some(v)) => PathBuf::from(v),
            (None, None) => PathBuf::from("."),
        };
        let format = match (flags.format, take("format")) {
            (Some(f), _) => Format::parse(&f)?,
            (None, Some(v)) => Format::parse(&v)?,
            (None, None) => Format::Csv,
        };

        let mut extra = BTreeMap::new();
        for &(k, default) in command.keys() {
            extra.insert(
                k.to_string(),
                map.remove(k).unwrap_or_else(|| default.to_string()),
            );
        }
        if let Some(k) = map.keys().next() {
            return Err(ConfigError(format!(
                "unknown key {k:?} for {}",
                command.name()
            )));
        }

        let params = ModelParams::new(alpha, beta).map_err(|e| ConfigError(e.to_string()))?;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(ConfigError(format!("tol must lie in (0, 1), got {tol}")));
        }
        let cfg = Self {
            command,
            params,
            tol,
            grid,
            out,
            format,
            extra,
        };
        cfg.check_grid()?;
        Ok(cfg)
    }

    fn check_grid(&self) -> Result<(), ConfigError> {
        let min = match self.command {
            Command::Potential | Command::Perturb => 2,
            Command::Spectrum => 20,
            Command::Fields => 4,
            Command::Trajectory => 1,
            Command::BetaBound | Command::Verify => 0,
        };
        if self.grid < min {
            return Err(ConfigError(format!(
                "grid must be at least {min} for {}, got {}",
                self.command.name(),
                self.grid
            )));
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> &str {
        self.extra.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        number(key, self.raw(key))
    }

    pub fn get_str(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// Comma-separated numbers.
    pub fn get_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.raw(key)
            .split(',')
            .map(|s| number(key, s.trim()))
            .collect()
    }

    /// Semicolon-separated points `x,y,z`.
    pub fn get_points(&self, key: &str) -> Result<Vec<[f64; 3]>, ConfigError> {
        self.raw(key)
            .split(';')
            .map(|p| {
                let v: Vec<f64> = p
                    .split(',')
                    .map(|s| number(key, s.trim()))
                    .collect::<Result<_, _>>()?;
                <[f64; 3]>::try_from(v)
                    .map_err(|_| ConfigError(format!("{key}: points need three coordinates")))
            })
            .collect()
    }

    /// Canonical `key=value` lines of everything that affects the numbers.
    /// The output directory is left out.
    pub fn canonical(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("command".to_string(), self.command.name().to_string()),
            ("alpha".to_string(), fmt17(self.params.alpha)),
            ("beta".to_string(), fmt17(self.params.beta)),
            ("tol".to_string(), fmt17(self.tol)),
            ("grid".to_string(), self.grid.to_string()),
            ("format".to_string(), self.format.extension().to_string()),
        ];
        v.extend(self.extra.iter().map(|(k, val)| (k.clone(), val.clone())));
        v
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.canonical() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let m = parse_key_values("# run\nalpha = 0.5  # override\n\n beta=2\n").unwrap();
        assert_eq!(m["alpha"], "0.5");
        assert_eq!(m["beta"], "2");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_key_values("alpha 0.5").is_err());
        assert!(parse_key_values("a=1\na=2").is_err());
        assert!(parse_key_values("=3").is_err());
    }

    #[test]
    fn flags_override_and_hash_changes() {
        let base = RunConfig::resolve(Command::Perturb, None, Overrides::default()).unwrap();
        assert_eq!(base.params.beta, beta_born(ALPHA_CODATA));
        let other = RunConfig::resolve(
            Command::Perturb,
            None,
            Overrides {
                beta: Some(1e-3),
                ..Default::default()
            },
        )
        .unwrap();
        assert_ne!(base.hash(), other.hash());
        assert_eq!(base.hash().len(), 16);
    }

    #[test]
    fn output_directory_does_not_enter_hash() {
        let a = RunConfig::resolve(Command::Potential, None, Overrides::default()).unwrap();
        let b = RunConfig::resolve(
            Command::Potential,
            None,
            Overrides {
                out: Some("elsewhere".into()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn validation_errors() {
        let bad = |o: Overrides| RunConfig::resolve(Command::Spectrum, None, o).is_err();
        assert!(bad(Overrides {
            alpha: Some(-1.0),
            ..Default::default()
        }));
        assert!(bad(Overrides {
            tol: Some(0.0),
            ..Default::default()
        }));
        assert!(bad(Overrides {
            format: Some("xml".into()),
            ..Default::default()
        }));
        assert!(bad(Overrides {
            set: vec!["nonsense=1".into()],
            ..Default::default()
        }));
        assert!(bad(Overrides {
            grid: Some(3),
            ..Default::default()
        }));
    }

    #[test]
    fn lists_and_points() {
        let c = RunConfig::resolve(
            Command::Trajectory,
            None,
            Overrides {
                set: vec!["starts=1,2,3; 4,5,6".into()],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            c.get_points("starts").unwrap(),
            vec![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
        );
        let b = RunConfig::resolve(Command::BetaBound, None, Overrides::default()).unwrap();
        assert_eq!(
            b.get_list("fractions").unwrap(),
            vec![1.0, 0.1, 0.01, 0.001]
        );
    }
}
