//! The simulation loop.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use crate::coupling::extra_velocity_spectral;
use crate::diagnostics::{check_energy_inequality, default_budget, InequalityCheck};
use crate::energetics::{chemical_potential_spectral, energy_spectral};
use crate::error::Result;
use crate::fields::SpectralField;
use crate::stepper::{implicit_step, StepState};

use super::config::RunConfig;
use super::ic::initial_condition;
use super::snapshot::{write_snapshot, Snapshot};
use super::trace::{TraceRow, TraceWriter};

/// Relative divergence threshold reported per step.
pub const DIVERGENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct StepReport {
    pub row: TraceRow,
    pub inequality: InequalityCheck,
    /// `div_u_max <= 1e-12 (1 + ‖u‖)`
    pub solenoidal: bool,
    pub tau_used: f64,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub initial: StepState,
    pub final_state: StepState,
    pub initial_energy: f64,
    pub budget: f64,
    pub reports: Vec<StepReport>,
    pub snapshots: Vec<PathBuf>,
}

impl RunSummary {
    pub fn steps(&self) -> usize {
        self.reports.len()
    }

    pub fn all_checks_pass(&self) -> bool {
        self.reports.iter().all(|r| r.inequality.pass && r.solenoidal)
    }
}

fn snapshot_of(state: &StepState, mu: Option<(&SpectralField, &SpectralField)>) -> Result<Snapshot> {
    let d = state.d_field();
    let u = state.u_field();
    match mu {
        Some((mu, v)) => {
            let (mu, v) = (mu.to_real(), v.to_real());
            Snapshot::from_fields(&[("d", &d), ("u", &u), ("mu", &mu), ("v", &v)])
        }
        None => Snapshot::from_fields(&[("d", &d), ("u", &u)]),
    }
}

/// Runs to `t_end`, calling `observe` after every accepted step.
///
/// The trace file is flushed row by row, so on a solver failure the rows
/// and snapshots written so far remain on disk and the error is returned.
pub fn run_observed(cfg: &RunConfig, mut observe: impl FnMut(&StepReport)) -> Result<RunSummary> {
    cfg.validate()?;
    let params = cfg.params;
    let mut state = initial_condition(cfg.ic.kind, cfg.grid, cfg.ic.seed, cfg.ic.amplitude)?;
    let initial = state.clone();
    let initial_energy = energy_spectral(&state.d, &state.u, &params).total;
    let budget = default_budget(cfg.picard.tol, initial_energy);

    let mut trace = match &cfg.output.trace_path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Some(TraceWriter::new(BufWriter::new(File::create(p)?))?)
        }
        None => None,
    };
    let snap_dir = match (&cfg.output.snapshot_dir, cfg.output.snapshot_every) {
        (Some(dir), every) if every > 0 => {
            std::fs::create_dir_all(dir)?;
            Some(dir.clone())
        }
        _ => None,
    };
    let mut snapshots = Vec::new();
    let mut save = |step: usize, state: &StepState, extra: Option<(&SpectralField, &SpectralField)>| -> Result<()> {
        if let Some(dir) = &snap_dir {
            if step % cfg.output.snapshot_every == 0 {
                let path = dir.join(format!("snap_{step:06}.nemf"));
                write_snapshot(&path, &snapshot_of(state, extra)?)?;
                snapshots.push(path);
            }
        }
        Ok(())
    };

    if cfg.output.full_state {
        let mu = chemical_potential_spectral(&state.d, &state.d, params.gamma);
        let v = extra_velocity_spectral(&mu, &state.d, params.alpha);
        save(0, &state, Some((&mu, &v)))?;
    } else {
        save(0, &state, None)?;
    }

    let mut reports = Vec::new();
    let mut step = 0;
    while cfg.t_end - state.time > 1e-9 * params.tau {
        let tau = params.tau.min(cfg.t_end - state.time);
        let p = params.with_tau(tau);
        let mut cfg_step = cfg.picard;
        cfg_step.tau_min = cfg_step.tau_min.min(tau);
        let result = implicit_step(&state, &p, &cfg_step)?;
        step += 1;
        let mut ledger = result.ledger;
        ledger.step = step;
        let row = TraceRow::new(ledger, &result.state);
        let report = StepReport {
            inequality: check_energy_inequality(&row.ledger, budget),
            solenoidal: row.div_u_max <= DIVERGENCE_TOL * (1.0 + result.state.u.l2_norm()),
            tau_used: result.tau_used,
            row,
        };
        if let Some(w) = trace.as_mut() {
            w.write_row(&report.row)?;
        }
        let extra = cfg.output.full_state.then_some((&result.mu, &result.v_extra));
        save(step, &result.state, extra)?;
        observe(&report);
        reports.push(report);
        state = result.state;
    }
    Ok(RunSummary {
        initial,
        final_state: state,
        initial_energy,
        budget,
        reports,
        snapshots,
    })
}

pub fn run_simulation(cfg: &RunConfig) -> Result<RunSummary> {
    run_observed(cfg, |_| {})
}
