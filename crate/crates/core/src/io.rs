//! Serialisation: radial profiles (CSV and JSON), report CSVs, sweep
//! configuration files, and run manifests. All file writes are atomic
//! (temp + rename).

use crate::error::{Error, Result};
use crate::families::FamilyReport;
use crate::grid::{RadialFunction, RadialGrid};
use crate::regime::Params;
use crate::scalar::Scalar;
use crate::solver::SolverConfig;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp~");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// radial profiles

/// CSV with columns r, u(r); data only (grid metadata lives in the JSON form).
pub fn profile_to_csv(u: &RadialFunction) -> String {
    let mut out = String::from("r,u\n");
    for (&r, &v) in u.grid.r().iter().zip(&u.values) {
        out.push_str(&format!("{r:.17e},{v:.17e}\n"));
    }
    out
}

/// Parse the two-column profile CSV into (r, u) pairs. Tolerates a header
/// line; rejects rows that are not two finite numbers.
pub fn parse_profile_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with('r')) {
            continue;
        }
        let mut parts = line.split(',');
        let (a, b) = (parts.next(), parts.next());
        if parts.next().is_some() {
            return Err(Error::Format(format!(
                "line {}: more than two columns",
                i + 1
            )));
        }
        let parse = |s: Option<&str>| -> Result<f64> {
            let v: f64 = s
                .ok_or_else(|| Error::Format(format!("line {}: missing column", i + 1)))?
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad number", i + 1)))?;
            if !v.is_finite() {
                return Err(Error::Format(format!("line {}: non-finite value", i + 1)));
            }
            Ok(v)
        };
        rows.push((parse(a)?, parse(b)?));
    }
    if rows.is_empty() {
        return Err(Error::Format("no data rows".into()));
    }
    if !rows.windows(2).all(|w| w[1].0 > w[0].0) || rows[0].0 <= 0.0 {
        return Err(Error::Format(
            "radii must be positive and increasing".into(),
        ));
    }
    Ok(rows)
}

/// JSON profile with grid metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileJson {
    pub n: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub m: usize,
    pub values: Vec<f64>,
}

pub fn profile_to_json(u: &RadialFunction) -> ProfileJson {
    ProfileJson {
        n: u.grid.dim(),
        r_min: u.grid.r_min(),
        r_max: u.grid.r_max(),
        m: u.grid.len(),
        values: u.values.clone(),
    }
}

pub fn profile_from_json(p: &ProfileJson) -> Result<RadialFunction> {
    if p.values.len() != p.m {
        return Err(Error::Format(format!(
            "value count {} does not match m = {}",
            p.values.len(),
            p.m
        )));
    }
    let grid =
        RadialGrid::new(p.r_min, p.r_max, p.m, p.n).map_err(|e| Error::Format(e.to_string()))?;
    RadialFunction::new(grid, p.values.clone()).map_err(|e| Error::Format(e.to_string()))
}

/// Decode and validate a JSON profile blob (never panics on bad input).
pub fn parse_profile_json(bytes: &[u8]) -> Result<RadialFunction> {
    let p: ProfileJson = serde_json::from_slice(bytes)
        .map_err(|e| Error::Format(format!("bad profile JSON: {e}")))?;
    if p.m > 1 << 20 {
        return Err(Error::Format("profile too large".into()));
    }
    profile_from_json(&p)
}

// ---------------------------------------------------------------------------
// family report CSV

pub fn family_report_csv(report: &FamilyReport) -> String {
    let mut extra_keys: Vec<String> = Vec::new();
    for m in &report.members {
        for k in m.extra.keys() {
            if !extra_keys.contains(k) {
                extra_keys.push(k.clone());
            }
        }
    }
    extra_keys.sort();
    let mut out = String::from("param,dirichlet,coulomb,lq,e_norm");
    for k in &extra_keys {
        out.push(',');
        out.push_str(k);
    }
    out.push('\n');
    for m in &report.members {
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            m.param, m.dirichlet, m.coulomb, m.lq, m.e_norm
        ));
        for k in &extra_keys {
            out.push(',');
            match m.extra.get(k) {
                Some(v) => out.push_str(&format!("{v:.17e}")),
                None => out.push_str(""),
            }
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// sweep configuration

/// Flat sweep configuration (documented schema, JSON on disk).
///
/// ```json
/// {
///   "n": 3,
///   "alpha": "2",
///   "p_values": ["2"],
///   "q_values": ["2.8", "3", "4"],
///   "c": 1.0,
///   "r_min": 1e-3, "r_max": 1e3, "m": 2048,
///   "tol_grad": 1e-6, "tol_energy": 1e-10,
///   "max_iter": 20000, "seed": 0, "workers": 4
/// }
/// ```
///
/// `alpha`, `p_values` and `q_values` are strings parsed exactly (decimals
/// and fractions such as "18/7" are exact rationals).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: u32,
    pub alpha: Scalar,
    pub p_values: Vec<Scalar>,
    pub q_values: Vec<Scalar>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_tol_grad")]
    pub tol_grad: f64,
    #[serde(default = "default_tol_energy")]
    pub tol_energy: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_c() -> f64 {
    1.0
}
fn default_r_min() -> f64 {
    1e-3
}
fn default_r_max() -> f64 {
    1e3
}
fn default_m() -> usize {
    2048
}
fn default_tol_grad() -> f64 {
    1e-6
}
fn default_tol_energy() -> f64 {
    1e-10
}
fn default_max_iter() -> usize {
    20000
}
fn default_workers() -> usize {
    4
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_values.is_empty() || self.q_values.is_empty() {
            return Err(Error::Format(
                "p_values and q_values must be nonempty".into(),
            ));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Format("c must be positive".into()));
        }
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::Format("bad grid bounds".into()));
        }
        if self.m < 16 || self.m > 8192 {
            return Err(Error::Format("m outside [16, 8192]".into()));
        }
        if !(self.tol_grad > 0.0 && self.tol_energy > 0.0) {
            return Err(Error::Format("tolerances must be positive".into()));
        }
        if self.max_iter == 0 || self.max_iter > 1_000_000 {
            return Err(Error::Format("max_iter outside (0, 1e6]".into()));
        }
        if self.workers == 0 || self.workers > 256 {
            return Err(Error::Format("workers outside [1, 256]".into()));
        }
        // every (p, q) pair must form valid Params
        for &p in &self.p_values {
            for &q in &self.q_values {
                Params::new(self.n, self.alpha, p, q).map_err(|e| Error::Format(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            c: self.c,
            tol_grad: self.tol_grad,
            tol_energy: self.tol_energy,
            max_iter: self.max_iter,
            seed: self.seed,
            ..Default::default()
        }
    }
}

/// Parse and validate a sweep configuration blob (never panics).
pub fn parse_sweep_config(bytes: &[u8]) -> Result<SweepConfig> {
    let cfg: SweepConfig = serde_json::from_slice(bytes)
        .map_err(|e| Error::Format(format!("bad sweep config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// run manifest

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub m: usize,
    pub n: u32,
}

/// Everything needed to reproduce a run bit-identically given the same build.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Option<Params>,
    pub grid: Option<GridSpec>,
    pub solver: Option<SolverConfig>,
    pub code_version: String,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            params: None,
            grid: None,
            solver: None,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: Vec::new(),
        }
    }
}
