//! Per-step energy ledger over a short run.

use nematic::diagnostics::{check_energy_inequality, default_budget};
use nematic::energetics::{energy_spectral, ModelParams};
use nematic::fields::{Dealias, GridSpec};
use nematic::runner::{initial_condition, IcKind};
use nematic::stepper::{implicit_step, PicardConfig};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 16, Dealias::Exact)?;
    let p = ModelParams {
        alpha: 0.3,
        gamma: 0.1,
        epsilon: 0.01,
        tau: 1e-3,
        ..ModelParams::default()
    };
    let cfg = PicardConfig {
        tol: 1e-11,
        max_iter: 500,
        ..PicardConfig::default()
    };
    let mut s = initial_condition(IcKind::UniformPerturbed, g, 7, 0.2)?;
    let budget = default_budget(cfg.tol, energy_spectral(&s.d, &s.u, &p).total);

    println!("{:>4} {:>12} {:>11} {:>11} {:>11} {:>11} {:>5}", "step", "E", "D_visc", "D_fric", "J", "slack", "ok");
    for step in 1..=10 {
        let r = implicit_step(&s, &p, &cfg)?;
        let l = &r.ledger;
        println!(
            "{step:>4} {:>12.8} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>5}",
            l.energy.total,
            l.d_visc,
            l.d_friction,
            l.jumps(),
            l.slack,
            check_energy_inequality(l, budget).pass
        );
        s = r.state;
    }
    Ok(())
}
