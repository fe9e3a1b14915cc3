use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One problem found while reading a config, addressed by JSON pointer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Balance,
    Slope,
    Decide,
    Chow,
    Bergman,
    Convexity,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Balance => "balance",
            Command::Slope => "slope",
            Command::Decide => "decide",
            Command::Chow => "chow",
            Command::Bergman => "bergman",
            Command::Convexity => "convexity",
            Command::Sample => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Minimizer,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    P1,
    P1Anticanonical,
    Product,
    Random,
    Degenerate,
}

/// Raw run description, as read from `run.json` or assembled from flags.
/// Every field except `command` and `seed` has a default.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub sample: Option<PathBuf>,
    pub direction: Option<PathBuf>,
    pub toric: Option<PathBuf>,
    pub profile: Option<PathBuf>,
    pub eps_bal: Option<f64>,
    pub max_iter: Option<usize>,
    pub cond_cap: Option<f64>,
    pub t_max: Option<f64>,
    pub slope_tol: Option<f64>,
    pub stat_tol: Option<f64>,
    pub m_max: Option<u32>,
    pub levels: Option<Vec<u32>>,
    pub trials: Option<usize>,
    pub expect: Option<Expect>,
    pub kind: Option<SampleKind>,
    pub k: Option<u32>,
    pub sections: Option<usize>,
    pub points: Option<usize>,
    pub hyperplane_dim: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

fn take<T: DeserializeOwned>(obj: &mut Map<String, Value>, key: &str, diags: &mut Vec<Diagnostic>) -> Option<T> {
    let value = obj.remove(key)?;
    if value.is_null() {
        return None;
    }
    match serde_json::from_value(value) {
        Ok(v) => Some(v),
        Err(e) => {
            diags.push(Diagnostic::new(format!("/{key}"), e.to_string()));
            None
        }
    }
}

impl RunConfig {
    /// Reads a config document field by field so every problem gets its own
    /// pointer. Relative paths are resolved against `base_dir`.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, Vec<Diagnostic>> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| vec![Diagnostic::new("", format!("config is not valid JSON: {e}"))])?;
        let Value::Object(mut obj) = value else {
            return Err(vec![Diagnostic::new("", "config must be a JSON object")]);
        };
        let mut d = Vec::new();
        let resolve = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base_dir.join(p) } else { p });
        let cfg = RunConfig {
            command: take(&mut obj, "command", &mut d),
            sample: resolve(take(&mut obj, "sample", &mut d)),
            direction: resolve(take(&mut obj, "direction", &mut d)),
            toric: resolve(take(&mut obj, "toric", &mut d)),
            profile: resolve(take(&mut obj, "profile", &mut d)),
            eps_bal: take(&mut obj, "eps_bal", &mut d),
            max_iter: take(&mut obj, "max_iter", &mut d),
            cond_cap: take(&mut obj, "cond_cap", &mut d),
            t_max: take(&mut obj, "t_max", &mut d),
            slope_tol: take(&mut obj, "slope_tol", &mut d),
            stat_tol: take(&mut obj, "stat_tol", &mut d),
            m_max: take(&mut obj, "m_max", &mut d),
            levels: take(&mut obj, "levels", &mut d),
            trials: take(&mut obj, "trials", &mut d),
            expect: take(&mut obj, "expect", &mut d),
            kind: take(&mut obj, "kind", &mut d),
            k: take(&mut obj, "k", &mut d),
            sections: take(&mut obj, "sections", &mut d),
            points: take(&mut obj, "points", &mut d),
            hyperplane_dim: take(&mut obj, "hyperplane_dim", &mut d),
            seed: take(&mut obj, "seed", &mut d),
            out: resolve(take(&mut obj, "out", &mut d)),
        };
        for key in obj.keys() {
            d.push(Diagnostic::new(format!("/{key}"), "unknown field"));
        }
        if d.is_empty() {
            Ok(cfg)
        } else {
            Err(d)
        }
    }

    pub fn validate(self) -> Result<Run, Vec<Diagnostic>> {
        let mut d = Vec::new();
        if self.seed.is_none() {
            d.push(Diagnostic::new("/seed", "seed is required for reproducibility"));
        }
        let Some(command) = self.command else {
            d.push(Diagnostic::new("/command", "command is required"));
            return Err(d);
        };
        let mut need = |field: &Option<PathBuf>, name: &str| {
            if field.is_none() {
                d.push(Diagnostic::new(format!("/{name}"), format!("{} needs an input file", command.name())));
            }
        };
        match command {
            Command::Balance | Command::Decide | Command::Convexity => need(&self.sample, "sample"),
            Command::Slope => {
                need(&self.sample, "sample");
                need(&self.direction, "direction");
            }
            Command::Chow => need(&self.toric, "toric"),
            Command::Bergman => need(&self.profile, "profile"),
            Command::Sample => {
                if self.kind.is_none() {
                    d.push(Diagnostic::new("/kind", "sample needs a kind"));
                }
            }
        }

        let tol = Tolerances {
            eps_bal: self.eps_bal.unwrap_or(1e-12),
            cond_cap: self.cond_cap.unwrap_or(1e12),
            t_max: self.t_max.unwrap_or(60.0),
            slope_tol: self.slope_tol.unwrap_or(1e-8),
            stat_tol: self.stat_tol.unwrap_or(1e-9),
        };
        for (name, v) in [
            ("eps_bal", tol.eps_bal),
            ("t_max", tol.t_max),
            ("slope_tol", tol.slope_tol),
            ("stat_tol", tol.stat_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                d.push(Diagnostic::new(format!("/{name}"), format!("must be positive and finite, got {v}")));
            }
        }
        if !(tol.cond_cap > 1.0 && tol.cond_cap.is_finite()) {
            d.push(Diagnostic::new("/cond_cap", "must be a finite number above 1"));
        }
        let max_iter = self.max_iter.unwrap_or(2000);
        if max_iter == 0 {
            d.push(Diagnostic::new("/max_iter", "must be at least 1"));
        }
        let trials = self.trials.unwrap_or(1000);
        if trials == 0 {
            d.push(Diagnostic::new("/trials", "must be at least 1"));
        }
        let m_max = self.m_max.unwrap_or(50);
        if m_max < 10 {
            d.push(Diagnostic::new("/m_max", "must be at least 10"));
        }
        let levels = self.levels.clone().unwrap_or_else(|| vec![8, 16, 32]);
        if levels.is_empty() || levels.contains(&0) {
            d.push(Diagnostic::new("/levels", "levels must be a nonempty list of positive integers"));
        }
        if !d.is_empty() {
            return Err(d);
        }
        Ok(Run {
            command,
            max_iter,
            trials,
            m_max,
            levels,
            tol,
            seed: self.seed.expect("checked"),
            out: self.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            config: self,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub eps_bal: f64,
    pub cond_cap: f64,
    pub t_max: f64,
    pub slope_tol: f64,
    pub stat_tol: f64,
}

/// A validated config with defaults filled in.
#[derive(Debug, Clone)]
pub struct Run {
    pub command: Command,
    pub max_iter: usize,
    pub trials: usize,
    pub m_max: u32,
    pub levels: Vec<u32>,
    pub tol: Tolerances,
    pub seed: u64,
    pub out: PathBuf,
    pub config: RunConfig,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Run, Vec<Diagnostic>> {
        RunConfig::from_json(text, Path::new("/tmp")).and_then(RunConfig::validate)
    }

    #[test]
    fn missing_seed_is_reported_at_its_pointer() {
        let err = parse(r#"{"command": "chow", "toric": "g.json"}"#).unwrap_err();
        assert_eq!(err[0].path, "/seed");
    }

    #[test]
    fn every_bad_field_is_listed() {
        let err = parse(r#"{"command": "balance", "seed": 1, "eps_bal": -1, "max_iter": "many", "colour": 3}"#)
            .unwrap_err();
        let paths: Vec<&str> = err.iter().map(|d| d.path.as_str()).collect();
        assert!(paths.contains(&"/max_iter"));
        assert!(paths.contains(&"/colour"));
        let err = parse(r#"{"command": "balance", "seed": 1, "eps_bal": -1}"#).unwrap_err();
        let paths: Vec<&str> = err.iter().map(|d| d.path.as_str()).collect();
        assert_eq!(paths, vec!["/sample", "/eps_bal"]);
    }

    #[test]
    fn relative_inputs_follow_the_config() {
        let run = parse(r#"{"command": "decide", "seed": 3, "sample": "s.json"}"#).unwrap();
        assert_eq!(run.config.sample.unwrap(), PathBuf::from("/tmp/s.json"));
        assert_eq!(run.tol.eps_bal, 1e-12);
        assert_eq!(run.out, PathBuf::from("."));
    }
}
