//! Verification reports and run configuration.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::mpoly::GroebnerBudget;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const PLUMBING: &str = "plumbing";

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Anomaly,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Anomaly => "anomaly",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    /// The mathematical statement the check exercises, or `"plumbing"`.
    pub anchor: String,
    pub notes: String,
}

impl CheckResult {
    pub fn new(name: &str, status: Status, expected: Value, actual: Value, anchor: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            status,
            expected,
            actual,
            anchor: anchor.to_string(),
            notes: String::new(),
        }
    }

    /// Pass iff `expected == actual`.
    pub fn compare(name: &str, expected: Value, actual: Value, anchor: &str) -> Self {
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        Self::new(name, status, expected, actual, anchor)
    }

    pub fn skipped(name: &str, reason: &str) -> Self {
        Self::new(name, Status::Skipped, Value::Null, Value::Null, PLUMBING).with_notes(reason)
    }

    /// An error raised while computing a check becomes a failing check.
    pub fn error(name: &str, err: &dyn std::error::Error, anchor: &str) -> Self {
        Self::new(name, Status::Fail, Value::Null, Value::Null, anchor).with_notes(&format!("error: {err}"))
    }

    pub fn with_notes(mut self, notes: &str) -> Self {
        self.notes = notes.to_string();
        self
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub toolkit_version: String,
    pub seed: u64,
    pub duration_ms: u64,
    pub checks: Vec<CheckResult>,
    /// Row data backing the checks (orbits, fibers, sweep rows), when any.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub tables: Value,
}

impl Report {
    pub fn new(command: &str, params: Value, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            params,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            seed,
            duration_ms: 0,
            checks: Vec::new(),
            tables: Value::Null,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// 0 iff no check failed.
    pub fn exit_code(&self) -> i32 {
        if self.has_failures() {
            1
        } else {
            0
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# nilcone-lab {}\n", self.command);
        let _ = writeln!(out, "- params: `{}`", self.params);
        let _ = writeln!(
            out,
            "- version: {}, seed: {}, duration: {} ms",
            self.toolkit_version, self.seed, self.duration_ms
        );
        let _ = writeln!(
            out,
            "- checks: {} pass, {} fail, {} anomaly, {} skipped\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Anomaly),
            self.count(Status::Skipped)
        );
        let _ = writeln!(out, "| check | status | expected | actual |");
        let _ = writeln!(out, "|---|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                c.name,
                c.status.as_str(),
                md_cell(&c.expected),
                md_cell(&c.actual)
            );
        }
        let noted: Vec<&CheckResult> = self.checks.iter().filter(|c| !c.notes.is_empty()).collect();
        if !noted.is_empty() {
            let _ = writeln!(out, "\n## Notes\n");
            for c in noted {
                let _ = writeln!(out, "- **{}**: {}", c.name, c.notes);
            }
        }
        out
    }
}

fn md_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let s = s.replace('|', "\\|");
    if s.chars().count() > 120 {
        let cut: String = s.chars().take(117).collect();
        format!("{cut}...")
    } else {
        s
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: invalid value for `{key}`: {msg}")]
    InvalidValue { line: usize, key: String, msg: String },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_q_exponent: u32,
    pub groebner_pair_budget: usize,
    pub groebner_basis_budget: usize,
    pub degree_cap: u32,
    /// 0 means exhaustive.
    pub sample_size: u64,
    pub threads: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let budget = GroebnerBudget::default();
        RunConfig {
            max_q_exponent: 2,
            groebner_pair_budget: budget.max_pairs,
            groebner_basis_budget: budget.max_basis,
            degree_cap: 12,
            sample_size: 0,
            threads: default_threads(),
            seed: 0,
        }
    }
}

fn default_threads() -> usize {
    std::env::var("NILCONE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t: &usize| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

impl RunConfig {
    pub fn groebner_budget(&self) -> GroebnerBudget {
        GroebnerBudget { max_pairs: self.groebner_pair_budget, max_basis: self.groebner_basis_budget }
    }

    /// Applies `key = value` lines over `self`. `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let invalid = |msg: &str| ConfigError::InvalidValue { line, key: key.to_string(), msg: msg.to_string() };
            let parsed: u64 = if value.starts_with('-') {
                return Err(invalid("must be non-negative"));
            } else {
                value.parse().map_err(|_| invalid("expected a non-negative integer"))?
            };
            let positive = |v: u64| if v == 0 { Err(invalid("must be positive")) } else { Ok(v) };
            match key {
                "max_q_exponent" => self.max_q_exponent = positive(parsed)? as u32,
                "groebner_pair_budget" => self.groebner_pair_budget = positive(parsed)? as usize,
                "groebner_basis_budget" => self.groebner_basis_budget = positive(parsed)? as usize,
                "degree_cap" => self.degree_cap = positive(parsed)? as u32,
                "sample_size" => self.sample_size = parsed,
                "threads" => self.threads = positive(parsed)? as usize,
                "seed" => self.seed = parsed,
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        Ok(())
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    cfg.merge_text(text)?;
    Ok(cfg)
}

/// Defaults merged with the file, if one is given; a given but missing file is an error.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, ConfigError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError::Io { path: p.display().to_string(), msg: e.to_string() })?;
            parse_config(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn config_examples() {
        assert_eq!(parse_config("threads = 4").unwrap().threads, 4);
        assert!(matches!(parse_config("degree_cap = -1"), Err(ConfigError::InvalidValue { line: 1, .. })));
        assert_eq!(parse_config("seed = 3\nbogus = 1"), Err(ConfigError::UnknownKey { line: 2, key: "bogus".into() }));
        assert_eq!(parse_config("# comment\n\nseed=9 # trailing").unwrap().seed, 9);
        assert!(matches!(parse_config("threads = 0"), Err(ConfigError::InvalidValue { .. })));
        assert!(matches!(parse_config("threads"), Err(ConfigError::Syntax { line: 1 })));
        assert_eq!(load_config(None).unwrap(), RunConfig::default());
        assert!(matches!(load_config(Some(Path::new("/nonexistent/cfg"))), Err(ConfigError::Io { .. })));
    }

    #[test]
    fn report_round_trip_and_exit_code() {
        let mut r = Report::new("cone", json!({"n": 3, "p": 3}), 0);
        r.checks.push(CheckResult::compare("count", json!(729), json!(729), "oracle"));
        assert_eq!(r.exit_code(), 0);
        r.checks.push(CheckResult::new("edge", Status::Anomaly, json!(1), json!(2), "x").with_notes("n"));
        assert_eq!(r.exit_code(), 0);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        r.checks.push(CheckResult::compare("bad", json!(1), json!(2), PLUMBING));
        assert_eq!(r.exit_code(), 1);
        let md = r.to_markdown();
        assert!(md.contains("| count | pass | 729 | 729 |"));
        assert!(md.contains("1 fail, 1 anomaly"));
    }

    #[test]
    fn status_serializes_lowercase() {
        assert_eq!(serde_json::to_string(&Status::Anomaly).unwrap(), "\"anomaly\"");
    }
}
