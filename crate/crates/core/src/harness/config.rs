use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::oracles::OracleSpec;
use crate::error::{Error, Result};
use crate::schreier::DEFAULT_VERTEX_CAP;

/// Everything an experiment run depends on. Two runs from equal configs
/// produce byte-identical outputs.
///
/// The text form is one `key = value` per line, `#` starts a comment:
///
/// ```text
/// experiment = main_theorem
/// h1 = kernel:weights=1,0
/// h2 = perm:n=50;d=2
/// radius = 40
/// seeds = 0..19
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub h1: Option<OracleSpec>,
    pub h2: Option<OracleSpec>,
    pub radius: usize,
    pub seeds: Vec<u64>,
    /// Power-iteration tolerance.
    pub tol: f64,
    pub max_iter: usize,
    pub vertex_cap: usize,
    /// Worker threads for seed sweeps; results do not depend on it.
    pub threads: usize,
    /// Output stem: `<out>.json` and `<out>.csv` are written.
    pub out: Option<PathBuf>,
    /// Experiment-specific keys.
    pub extra: BTreeMap<String, String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            h1: None,
            h2: None,
            radius: 10,
            seeds: vec![0],
            tol: 1e-10,
            max_iter: 200_000,
            vertex_cap: DEFAULT_VERTEX_CAP,
            threads: 1,
            out: None,
            extra: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            ..Default::default()
        }
    }

    /// Sets one key, parsing the value. Unknown keys land in `extra`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::parse(format!("bad value `{value}` for `{key}`"));
        match key {
            "experiment" => self.experiment = value.to_string(),
            "h1" => self.h1 = Some(value.parse()?),
            "h2" => self.h2 = Some(value.parse()?),
            "radius" => self.radius = value.parse().map_err(|_| bad())?,
            "seed" => self.seeds = vec![value.parse().map_err(|_| bad())?],
            "seeds" => self.seeds = parse_seeds(value)?,
            "tol" => self.tol = value.parse().map_err(|_| bad())?,
            "max_iter" => self.max_iter = value.parse().map_err(|_| bad())?,
            "vertex_cap" => self.vertex_cap = value.parse().map_err(|_| bad())?,
            "threads" => self.threads = value.parse::<usize>().map_err(|_| bad())?.max(1),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                self.extra.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    pub fn extra_str(&self, key: &str) -> Option<&str> {
        self.extra.get(key).map(String::as_str)
    }

    pub fn extra_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.extra.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::parse(format!("bad value `{v}` for `{key}`"))),
            None => Ok(default),
        }
    }

    pub fn h1(&self) -> Result<&OracleSpec> {
        self.h1
            .as_ref()
            .ok_or_else(|| Error::invalid("config needs `h1`"))
    }

    pub fn h2(&self) -> Result<&OracleSpec> {
        self.h2
            .as_ref()
            .ok_or_else(|| Error::invalid("config needs `h2`"))
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("experiment = {}", self.experiment)];
        if let Some(h) = &self.h1 {
            lines.push(format!("h1 = {h}"));
        }
        if let Some(h) = &self.h2 {
            lines.push(format!("h2 = {h}"));
        }
        lines.push(format!("radius = {}", self.radius));
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        lines.push(format!("seeds = {}", seeds.join(",")));
        lines.push(format!("tol = {:e}", self.tol));
        lines.push(format!("max_iter = {}", self.max_iter));
        lines.push(format!("vertex_cap = {}", self.vertex_cap));
        lines.push(format!("threads = {}", self.threads));
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        lines.extend(self.extra.iter().map(|(k, v)| format!("{k} = {v}")));
        lines.join("\n") + "\n"
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {}: expected `key = value`", no + 1)))?;
            config
                .set(k.trim(), v.trim())
                .map_err(|e| Error::parse(format!("line {}: {e}", no + 1)))?;
        }
        Ok(config)
    }
}

/// `0..19` (inclusive) or `1,5,9`.
fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::parse(format!("bad seed list `{s}`"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
                if hi < lo {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
