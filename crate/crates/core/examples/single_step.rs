//! One implicit step from a perturbed aligned state.

use nematic::energetics::ModelParams;
use nematic::fields::{Dealias, GridSpec};
use nematic::runner::{initial_condition, IcKind};
use nematic::stepper::{implicit_step, residual_fully_implicit, PicardConfig};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 16, Dealias::Exact)?;
    let s = initial_condition(IcKind::UniformPerturbed, g, 7, 0.2)?;
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
    let r = implicit_step(&s, &p, &cfg)?;
    println!("iterations {}  residual {:.2e}  tau {}", r.iters, r.residual, r.tau_used);
    let res = residual_fully_implicit(&s, &r.state.d, &r.state.u, &r.mu, &p.with_tau(r.tau_used));
    println!("independent residuals: r_d {:.2e} r_mu {:.2e} r_u {:.2e}", res.r_d, res.r_mu, res.r_u);
    println!("energy {:.8} -> {:.8}", r.ledger.energy_prev.total, r.ledger.energy.total);
    Ok(())
}
