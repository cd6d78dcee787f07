//! Parse a config and run it in memory with a per-step callback.
//!
//!     cargo run --release --example run_config [path/to/config]

use nematic::runner::{load_config, parse_config, run_observed};

const DEFAULT: &str = "\
dim = 2
n = 16
dealias = exact
alpha = 0.3
gamma = 0.1
epsilon = 0.01
tau = 1e-3
t_end = 0.01
picard.tol = 1e-11
picard.max_iter = 500
ic.kind = uniform_perturbed
ic.seed = 7
ic.amplitude = 0.2
";

fn main() -> nematic::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => load_config(path.as_ref())?,
        None => parse_config(DEFAULT)?,
    };
    let summary = run_observed(&cfg, |r| {
        let l = &r.row.ledger;
        println!(
            "step {:>4} t {:.4} E {:.8} slack {:+.2e} |d| in [{:.4}, {:.4}]",
            l.step, l.time, l.energy.total, l.slack, r.row.min_len, r.row.max_len
        );
    })?;
    println!("{} steps, all checks pass: {}", summary.steps(), summary.all_checks_pass());
    Ok(())
}
