//! `nematic run|check|inspect`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nematic::runner::{load_config, read_snapshot, run_observed, RunConfig};
use nematic::Error;

#[derive(Parser)]
#[command(version, about = "Nematic liquid-crystal flow on the periodic box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run {
        config: PathBuf,
        /// Print one line per step.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Validate a config file without running it.
    Check { config: PathBuf },
    /// Print the header of a snapshot file.
    Inspect { snapshot: PathBuf },
}

fn describe(cfg: &RunConfig) {
    let g = &cfg.grid;
    let p = &cfg.params;
    println!("grid      dim={} n={} dealias={} padding={}", g.dim(), g.n(), g.dealias(), cfg.padding_factor);
    println!(
        "params    rho={} eta={} alpha={} gamma={} epsilon={} tau={}",
        p.rho, p.eta, p.alpha, p.gamma, p.epsilon, p.tau
    );
    println!("t_end     {} ({} nominal steps)", cfg.t_end, (cfg.t_end / p.tau).ceil());
    println!("ic        {} seed={} amplitude={}", cfg.ic.kind, cfg.ic.seed, cfg.ic.amplitude);
}

fn run(config: PathBuf, verbose: bool) -> Result<(), Error> {
    let cfg = load_config(&config)?;
    describe(&cfg);
    let summary = run_observed(&cfg, |r| {
        if verbose {
            let l = &r.row.ledger;
            println!(
                "step {:>5} t={:.6e} E={:.10e} slack={:.3e} iters={} {}",
                l.step,
                l.time,
                l.energy.total,
                l.slack,
                l.picard_iters,
                if r.inequality.pass && r.solenoidal { "ok" } else { "CHECK FAILED" }
            );
        }
    })?;
    let failed = summary
        .reports
        .iter()
        .filter(|r| !(r.inequality.pass && r.solenoidal))
        .count();
    let final_e = summary.reports.last().map_or(summary.initial_energy, |r| r.row.ledger.energy.total);
    println!(
        "done      {} steps, E {:.10e} -> {:.10e}, {} step(s) failed checks (budget {:.3e})",
        summary.steps(),
        summary.initial_energy,
        final_e,
        failed,
        summary.budget
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, verbose } => run(config, verbose),
        Command::Check { config } => load_config(&config).map(|cfg| {
            describe(&cfg);
            println!("config ok");
        }),
        Command::Inspect { snapshot } => read_snapshot(&snapshot).map(|s| {
            let n: Vec<String> = s.n.iter().map(usize::to_string).collect();
            println!("dim {} n [{}] fields {}", s.dim, n.join(", "), s.fields.len());
            for f in &s.fields {
                let (lo, hi) = f
                    .data
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                println!("  {:<4} components {} range [{lo:e}, {hi:e}]", f.name, f.components);
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
