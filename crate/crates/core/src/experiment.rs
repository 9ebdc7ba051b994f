//! Experiment configuration and the `run` / `compare` pipelines behind the
//! command-line tool.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{compare, CompareReport};
use crate::asymptotics::{airy_parametrix, pearcey_parametrix};
use crate::circulant::{localized_square_root, CouplingVector};
use crate::correlations::{correlation_field, CorrelationIndex, FieldMethod};
use crate::dataset::{CorrelationDataset, Format, Method, Row};
use crate::dispersion::{degenerate_family_interior, degenerate_half_point, DegeneratePoint, Dispersion};
use crate::dynamics::{mc_correlations_with, EnsembleSpec, NonlinearModel};
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Nn,
    Example1,
    Example2,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "nn" => Preset::Nn,
            "example1" => Preset::Example1,
            "example2" => Preset::Example2,
            _ => return None,
        })
    }

    pub fn couplings(self) -> CouplingVector {
        match self {
            Preset::Nn => CouplingVector::nearest_neighbour(),
            Preset::Example1 => CouplingVector::example1(),
            Preset::Example2 => CouplingVector::example2(),
        }
    }
}

/// Either a named preset or an explicit `κ_1 … κ_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
}

impl ModelConfig {
    pub fn couplings(&self) -> Result<CouplingVector> {
        match (&self.preset, &self.kappa) {
            (Some(p), None) => Ok(p.couplings()),
            (None, Some(k)) => CouplingVector::new(k.clone())
                .map_err(|e| Error::config("model.kappa", e.to_string())),
            _ => Err(Error::config("model", "give exactly one of `preset` and `kappa`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "finiteN")]
    FiniteN,
    #[serde(rename = "airy")]
    Airy,
    #[serde(rename = "pearcey")]
    Pearcey,
    #[serde(rename = "mc")]
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub j_min: i64,
    pub j_max: i64,
    #[serde(default = "one")]
    pub j_step: i64,
    pub t: Vec<f64>,
    #[serde(default = "default_pairs")]
    pub pairs: Vec<(u8, u8)>,
}

fn one() -> i64 {
    1
}

fn default_pairs() -> Vec<(u8, u8)> {
    vec![(1, 1), (1, 2), (2, 1), (2, 2), (3, 3)]
}

impl GridConfig {
    pub fn js(&self) -> Vec<i64> {
        (self.j_min..=self.j_max).step_by(self.j_step.max(1) as usize).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub replicas: usize,
    pub seed: u64,
    pub n: usize,
    pub dt: f64,
    #[serde(default)]
    pub chi: f64,
    #[serde(default)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

/// A complete experiment: model, temperature, method, grid and output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default = "unit")]
    pub beta: f64,
    pub mode: Mode,
    pub grid: GridConfig,
    /// Chain length for `finiteN`; chosen per time if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_n: Option<usize>,
    /// Starting wavenumber for locating an interior degenerate point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_seed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn unit() -> f64 {
    1.0
}

impl ExperimentConfig {
    /// Parses a JSON document; syntax and type errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            field: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Default experiment for a preset: exact correlations around the
    /// features that make the preset interesting.
    pub fn preset(p: Preset) -> Self {
        let (j_min, j_max, t) = match p {
            Preset::Nn => (80, 120, vec![100.0]),
            Preset::Example1 => (-20, 20, vec![200.0, 400.0, 800.0]),
            Preset::Example2 => (260, 310, vec![800.0]),
        };
        Self {
            model: ModelConfig { preset: Some(p), kappa: None },
            beta: 1.0,
            mode: Mode::Exact,
            grid: GridConfig { j_min, j_max, j_step: 1, t, pairs: default_pairs() },
            finite_n: None,
            k_seed: None,
            mc: None,
            output: None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.mc.as_ref().map(|m| m.seed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        if let Some(mc) = self.mc.as_mut() {
            mc.seed = seed;
        }
    }

    pub fn validate(&self) -> Result<CouplingVector> {
        let c = self.model.couplings()?;
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::config("beta", "must be finite and > 0"));
        }
        let g = &self.grid;
        if g.j_step < 1 {
            return Err(Error::config("grid.j_step", "must be >= 1"));
        }
        if g.j_min > g.j_max {
            return Err(Error::config("grid.j_min", "must not exceed grid.j_max"));
        }
        if g.t.is_empty() {
            return Err(Error::config("grid.t", "needs at least one time"));
        }
        if g.t.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::config("grid.t", "times must be finite and >= 0"));
        }
        if g.t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid.t", "times must be strictly increasing"));
        }
        if g.pairs.is_empty() {
            return Err(Error::config("grid.pairs", "needs at least one pair"));
        }
        for &(a, b) in &g.pairs {
            if !(1..=3).contains(&a) || !(1..=3).contains(&b) {
                return Err(Error::config("grid.pairs", format!("labels must be in 1..=3, got ({a}, {b})")));
            }
        }
        match self.mode {
            Mode::Airy | Mode::Pearcey if g.t.iter().any(|&t| t <= 0.0) => {
                return Err(Error::config("grid.t", "parametrices need t > 0"));
            }
            Mode::FiniteN => {
                if let Some(n) = self.finite_n {
                    crate::circulant::check_len(n, c.m())
                        .map_err(|e| Error::config("finite_n", e.to_string()))?;
                }
            }
            Mode::MonteCarlo => {
                let mc = self.mc.as_ref().ok_or_else(|| Error::config("mc", "required in mode mc"))?;
                crate::circulant::check_len(mc.n, c.m()).map_err(|e| Error::config("mc.n", e.to_string()))?;
                if mc.gamma < 0.0 {
                    return Err(Error::config("mc.gamma", "must be >= 0"));
                }
            }
            _ => {}
        }
        if let Some(k) = self.k_seed {
            if !(k > 0.0 && k < 0.5) {
                return Err(Error::config("k_seed", "must lie in (0, 1/2)"));
            }
        }
        Ok(c)
    }

    fn output_format(&self, out: Option<&Path>) -> Format {
        match self.output.as_ref().and_then(|o| o.format) {
            Some(OutputFormat::Csv) => Format::Csv,
            Some(OutputFormat::Json) => Format::Json,
            None => out.map(Format::from_path).unwrap_or(Format::Csv),
        }
    }
}

/// Degenerate point used by the Pearcey mode: `k* = 1/2` if `f″(1/2) = 0`,
/// otherwise an interior point of the given couplings (which must already
/// belong to the degenerate family).
pub fn locate_degenerate_point(c: &CouplingVector, k_seed: Option<f64>) -> Result<DegeneratePoint> {
    if let Ok(p) = degenerate_half_point(c) {
        return Ok(p);
    }
    let seed = k_seed.unwrap_or(1.0 / 3.0);
    let (p, adjusted) = degenerate_family_interior(c, seed)?;
    let drift = c
        .kappa()
        .iter()
        .zip(adjusted.kappa())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if drift > 1e-9 {
        return Err(Error::NotFound(format!(
            "couplings have no degenerate point near k = {seed}; nearest family member is κ = {:?}",
            adjusted.kappa()
        )));
    }
    Ok(p)
}

/// Evaluates an experiment. Metadata holds the full config, the crate
/// version, the seed, and the degenerate point for the Pearcey mode.
pub fn run(cfg: &ExperimentConfig, exec: Execution) -> Result<CorrelationDataset> {
    let c = cfg.validate()?;
    let sq = localized_square_root(&c)?;
    let disp = Dispersion::new(&c, &sq);
    let js = cfg.grid.js();
    let ts = &cfg.grid.t;
    let mut ds = CorrelationDataset::new();
    match cfg.mode {
        Mode::Exact | Mode::FiniteN => {
            let method = if cfg.mode == Mode::Exact { FieldMethod::Auto } else { FieldMethod::FiniteN };
            for &(a, b) in &cfg.grid.pairs {
                let part = correlation_field(a, b, &js, ts, &disp, cfg.beta, method, cfg.finite_n, exec)?;
                ds.extend(part);
            }
        }
        Mode::Airy | Mode::Pearcey => {
            let point = if cfg.mode == Mode::Pearcey {
                let p = locate_degenerate_point(&c, cfg.k_seed)?;
                ds.meta.insert("kstar".into(), p.kstar.into());
                ds.meta.insert("vstar".into(), p.vstar.into());
                ds.meta.insert("lambdastar".into(), p.lambdastar.into());
                Some(p)
            } else {
                let a = disp.airy();
                ds.meta.insert("v0".into(), a.v0.into());
                ds.meta.insert("lambda0".into(), a.lambda0.into());
                None
            };
            let tag = if point.is_some() { Method::Pearcey } else { Method::Airy };
            for &(a, b) in &cfg.grid.pairs {
                let blocks = map_ordered(exec, ts, |&t| -> Result<Vec<Row>> {
                    js.iter()
                        .map(|&j| {
                            let idx = CorrelationIndex::new(a, b, j, t)?;
                            let value = match &point {
                                Some(p) => pearcey_parametrix(&idx, p, &disp, cfg.beta)?,
                                None => airy_parametrix(&idx, &disp, cfg.beta)?,
                            };
                            Ok(Row { alpha: a, alphaprime: b, j, t, value, stderr: 0.0, method: tag })
                        })
                        .collect()
                });
                for b in blocks {
                    ds.rows.extend(b?);
                }
            }
        }
        Mode::MonteCarlo => {
            let mc = cfg.mc.as_ref().expect("validated");
            let spec = EnsembleSpec {
                replicas: mc.replicas,
                seed: mc.seed,
                n: mc.n,
                beta: cfg.beta,
                dt: mc.dt,
                t_snapshots: ts.clone(),
                pairs: cfg.grid.pairs.clone(),
                js: js.clone(),
            };
            let model = NonlinearModel::new(c.clone(), mc.chi, mc.gamma)
                .map_err(|e| Error::config("mc", e.to_string()))?;
            let part = mc_correlations_with(&spec, &model, &sq, exec)?;
            ds.extend(part);
        }
    }
    let echo = serde_json::to_value(cfg).expect("config serialises");
    ds.meta.insert("config".into(), echo);
    ds.meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    if let Some(seed) = cfg.seed() {
        ds.meta.insert("seed".into(), Value::from(seed));
    }
    Ok(ds)
}

/// Runs and writes the dataset; `out` overrides the configured path.
pub fn run_to_file(cfg: &ExperimentConfig, out: Option<&Path>, exec: Execution) -> Result<PathBuf> {
    let path = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()))
        .ok_or_else(|| Error::config("output.path", "no output path given"))?;
    let ds = run(cfg, exec)?;
    ds.write(&path, cfg.output_format(Some(&path)))?;
    Ok(path)
}

/// Recovers the config echoed into a dataset's metadata.
pub fn config_from_meta(ds: &CorrelationDataset) -> Result<ExperimentConfig> {
    let v = ds
        .meta
        .get("config")
        .ok_or_else(|| Error::config("config", "dataset carries no config"))?;
    serde_json::from_value(v.clone()).map_err(|e| Error::config("config", e.to_string()))
}

pub fn compare_files(a: &Path, b: &Path) -> Result<CompareReport> {
    compare(&CorrelationDataset::read(a)?, &CorrelationDataset::read(b)?)
}
