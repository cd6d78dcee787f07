//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! dim = 2
//! n = 32
//! dealias = exact
//! tau = 1e-3
//! t_end = 0.2
//! picard.tol = 1e-11
//! ic.kind = uniform_perturbed
//! output.trace_path = trace.csv
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::energetics::ModelParams;
use crate::error::{Error, Result};
use crate::fields::{Dealias, GridSpec};
use crate::stepper::PicardConfig;

use super::ic::IcKind;

#[derive(Clone, Debug, PartialEq)]
pub struct IcConfig {
    pub kind: IcKind,
    pub seed: u64,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub trace_path: Option<PathBuf>,
    pub snapshot_dir: Option<PathBuf>,
    /// 0 disables snapshots.
    pub snapshot_every: usize,
    /// Also store `mu` and `v` in snapshots.
    pub full_state: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub padding_factor: f64,
    pub params: ModelParams,
    pub t_end: f64,
    pub picard: PicardConfig,
    pub ic: IcConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Defaults for everything except the grid, `tau` and `t_end`.
    pub fn new(grid: GridSpec, tau: f64, t_end: f64) -> Self {
        RunConfig {
            grid,
            padding_factor: grid.dealias().padding_factor(),
            params: ModelParams::default().with_tau(tau),
            t_end,
            picard: PicardConfig::default(),
            ic: IcConfig {
                kind: IcKind::UniformPerturbed,
                seed: 0,
                amplitude: 0.1,
            },
            output: OutputConfig {
                trace_path: None,
                snapshot_dir: None,
                snapshot_every: 0,
                full_state: false,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |e: Error| match e {
            Error::InvalidParam(m) => Error::ConfigInvalid(m),
            other => other,
        };
        self.params.validate().map_err(invalid)?;
        if self.params.epsilon <= 0.0 {
            return Err(Error::ConfigInvalid("epsilon > 0".into()));
        }
        self.picard.validate(self.params.tau).map_err(invalid)?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::ConfigInvalid("t_end > 0".into()));
        }
        if self.padding_factor != self.grid.dealias().padding_factor() {
            return Err(Error::ConfigInvalid(format!(
                "padding_factor {} does not match dealias = {}",
                self.padding_factor,
                self.grid.dealias()
            )));
        }
        if !(self.ic.amplitude >= 0.0 && self.ic.amplitude.is_finite()) {
            return Err(Error::ConfigInvalid("ic.amplitude >= 0".into()));
        }
        if self.ic.kind == IcKind::DefectPair && self.grid.dim() != 2 {
            return Err(Error::ConfigInvalid("ic.kind = defect_pair requires dim = 2".into()));
        }
        if self.output.snapshot_every > 0 && self.output.snapshot_dir.is_none() {
            return Err(Error::ConfigInvalid("output.snapshot_every > 0 requires output.snapshot_dir".into()));
        }
        Ok(())
    }

    /// Resolves relative output paths against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        for p in [&mut self.output.trace_path, &mut self.output.snapshot_dir].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ConfigParse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| parse_err(line, format!("invalid value {v:?} for {key}")))
}

fn boolean(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(parse_err(line, format!("{key} must be true or false"))),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut seen = HashSet::new();
    let mut dim = None;
    let mut n = None;
    let mut tau = None;
    let mut t_end = None;
    let mut dealias = None;
    let mut padding = None;
    let mut params = ModelParams::default();
    let mut picard = PicardConfig::default();
    let mut ic = IcConfig {
        kind: IcKind::UniformPerturbed,
        seed: 0,
        amplitude: 0.1,
    };
    let mut output = OutputConfig {
        trace_path: None,
        snapshot_dir: None,
        snapshot_every: 0,
        full_state: false,
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let key = key.trim();
        let mut value = value.trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        }
        if value.is_empty() {
            return Err(parse_err(line, format!("missing value for {key}")));
        }
        if !seen.insert(key.to_string()) {
            return Err(parse_err(line, format!("duplicate key {key}")));
        }
        match key {
            "dim" => dim = Some(num::<usize>(line, key, value)?),
            "n" => n = Some(num::<usize>(line, key, value)?),
            "dealias" => {
                dealias = Some(Dealias::parse(value).ok_or_else(|| {
                    parse_err(line, format!("unknown dealias mode {value:?} (none, two_thirds, exact)"))
                })?)
            }
            "padding_factor" => padding = Some(num::<f64>(line, key, value)?),
            "rho" => params.rho = num(line, key, value)?,
            "eta" => params.eta = num(line, key, value)?,
            "alpha" => params.alpha = num(line, key, value)?,
            "gamma" => params.gamma = num(line, key, value)?,
            "epsilon" => params.epsilon = num(line, key, value)?,
            "tau" => tau = Some(num::<f64>(line, key, value)?),
            "t_end" => t_end = Some(num::<f64>(line, key, value)?),
            "picard.tol" => picard.tol = num(line, key, value)?,
            "picard.max_iter" => picard.max_iter = num(line, key, value)?,
            "picard.damping" => picard.damping = num(line, key, value)?,
            "picard.tau_shrink" => picard.tau_shrink = num(line, key, value)?,
            "picard.tau_min" => picard.tau_min = num(line, key, value)?,
            "picard.anderson_depth" => picard.anderson_depth = num(line, key, value)?,
            "ic.kind" => {
                ic.kind = IcKind::parse(value).ok_or_else(|| {
                    parse_err(
                        line,
                        format!("unknown ic.kind {value:?} (uniform_perturbed, random_smooth, defect_pair)"),
                    )
                })?
            }
            "ic.seed" => ic.seed = num(line, key, value)?,
            "ic.amplitude" => ic.amplitude = num(line, key, value)?,
            "output.trace_path" => output.trace_path = Some(PathBuf::from(value)),
            "output.snapshot_dir" => output.snapshot_dir = Some(PathBuf::from(value)),
            "output.snapshot_every" => output.snapshot_every = num(line, key, value)?,
            "output.full_state" => output.full_state = boolean(line, key, value)?,
            _ => return Err(parse_err(line, format!("unknown key {key}"))),
        }
    }

    let missing = |k: &str| Error::ConfigInvalid(format!("missing required key {k}"));
    let dim = dim.ok_or_else(|| missing("dim"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let tau = tau.ok_or_else(|| missing("tau"))?;
    let t_end = t_end.ok_or_else(|| missing("t_end"))?;

    let dealias = match (dealias, padding) {
        (Some(d), _) => d,
        (None, Some(p)) => [Dealias::None, Dealias::TwoThirds, Dealias::Exact]
            .into_iter()
            .find(|d| d.padding_factor() == p)
            .ok_or_else(|| Error::ConfigInvalid(format!("padding_factor {p} must be 1, 1.5 or 3")))?,
        (None, None) => Dealias::TwoThirds,
    };
    let grid = GridSpec::new(dim, n, dealias).map_err(|e| match e {
        Error::InvalidGrid(m) => Error::ConfigInvalid(m),
        other => other,
    })?;
    params.tau = tau;
    let cfg = RunConfig {
        grid,
        padding_factor: padding.unwrap_or_else(|| dealias.padding_factor()),
        params,
        t_end,
        picard,
        ic,
        output,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a configuration file; relative output paths are taken relative
/// to the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config(&text)?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}
