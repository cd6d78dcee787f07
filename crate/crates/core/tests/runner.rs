use std::fs;
use std::path::Path;
use std::process::Command;

use nematic::fields::{Dealias, GridSpec};
use nematic::runner::{
    load_config, parse_config, parse_trace, read_snapshot, run_simulation, write_snapshot, IcKind, RunConfig, Snapshot,
    TRACE_HEADER,
};
use nematic::Error;

fn base(dir: &Path, extra: &str) -> RunConfig {
    let text = format!(
        "dim = 2\nn = 16\ndealias = exact\nalpha = 0.3\ntau = 1e-3\nt_end = 3e-3\npicard.tol = 1e-11\n\
         picard.max_iter = 300\nic.kind = uniform_perturbed\nic.seed = 4\nic.amplitude = 0.1\n\
         output.trace_path = trace.csv\noutput.snapshot_dir = snaps\noutput.snapshot_every = 1\n{extra}"
    );
    let path = dir.join("run.conf");
    fs::write(&path, text).unwrap();
    load_config(&path).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nematic"))
}

#[test]
fn three_steps_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = base(dir.path(), "");
    let summary = run_simulation(&cfg).unwrap();
    assert_eq!(summary.steps(), 3);
    assert!(summary.all_checks_pass());
    let text = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(text.lines().next(), Some(TRACE_HEADER));
    let rows = parse_trace(&text).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
    assert!((rows[2][1] - 3e-3).abs() <= 1e-15);
    // step 0 plus one per step
    assert_eq!(summary.snapshots.len(), 4);
    let last = read_snapshot(summary.snapshots.last().unwrap()).unwrap();
    assert_eq!(last.dim, 2);
    assert_eq!(last.n, vec![16, 16]);
    let d = last.field("d").unwrap();
    assert_eq!(d.data, summary.final_state.d_field().values());
    assert!(last.field("mu").is_none());
}

#[test]
fn equilibrium_run_stays_at_zero_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = base(dir.path(), "");
    let cfg = RunConfig {
        ic: nematic::runner::IcConfig {
            amplitude: 0.0,
            ..cfg.ic
        },
        ..cfg
    };
    let summary = run_simulation(&cfg).unwrap();
    assert!(summary.all_checks_pass());
    let last = &summary.reports.last().unwrap().row.ledger;
    assert!(last.energy.total.abs() <= 1e-12);
}

#[test]
fn runs_are_bitwise_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let extra = "output.full_state = true\n";
    run_simulation(&base(a.path(), extra)).unwrap();
    run_simulation(&base(b.path(), extra)).unwrap();
    assert_eq!(
        fs::read(a.path().join("trace.csv")).unwrap(),
        fs::read(b.path().join("trace.csv")).unwrap()
    );
    for step in 0..=3 {
        let name = format!("snaps/snap_{step:06}.nemf");
        let sa = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(sa, fs::read(b.path().join(&name)).unwrap());
        let snap = Snapshot::decode(&sa).unwrap();
        assert_eq!(snap.fields.iter().map(|f| f.name.as_str()).collect::<Vec<_>>(), ["d", "u", "mu", "v"]);
    }
}

#[test]
fn snapshot_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let g = GridSpec::new(3, 4, Dealias::None).unwrap();
    let s = nematic::runner::initial_condition(IcKind::RandomSmooth, g, 2, 0.5).unwrap();
    let (d, u) = (s.d_field(), s.u_field());
    let mut snap = Snapshot::from_fields(&[("d", &d), ("u", &u)]).unwrap();
    // awkward values survive too
    snap.fields[0].data[0] = -0.0;
    snap.fields[0].data[1] = f64::MIN_POSITIVE / 3.0;
    snap.fields[0].data[2] = f64::MAX;
    let path = dir.path().join("x.nemf");
    write_snapshot(&path, &snap).unwrap();
    let back = read_snapshot(&path).unwrap();
    assert_eq!(back.encode(), snap.encode());
    for (a, b) in back.fields.iter().zip(&snap.fields) {
        assert!(a.data.iter().zip(&b.data).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn config_examples() {
    let c = parse_config("dim = 2\nn = 8\ntau = 1e-3\nt_end = 1e-2\n").unwrap();
    assert_eq!(c.params.alpha, 0.5);
    assert_eq!(c.grid.dealias(), Dealias::TwoThirds);
    let c = parse_config("dim = 2\nn = 8\ntau = 1e-3\nt_end = 1e-2\ndealias = exact\n").unwrap();
    assert_eq!(c.padding_factor, 3.0);
    let e = parse_config("dim = 2\nn = 8\ntau = 1e-3\nt_end = 1e-2\nalpha = 1.5\n").unwrap_err();
    assert!(e.to_string().contains("alpha ∈ [0,1]"));
    assert_eq!(e.exit_code(), 2);
    for bad in [
        "dim = 2\nn = 7\ntau = 1e-3\nt_end = 1\n",
        "dim = 4\nn = 8\ntau = 1e-3\nt_end = 1\n",
        "dim = 2\nn = 8\ntau = 1e-3\nt_end = 0\n",
        "dim = 2\nn = 8\ntau = 1e-3\nt_end = 1\nepsilon = 0\n",
        "dim = 3\nn = 8\ntau = 1e-3\nt_end = 1\nic.kind = defect_pair\n",
        "dim = 2\nn = 8\ntau = 1e-3\nt_end = 1\noutput.snapshot_every = 2\n",
        "dim = 2\nn = 8\ntau = 1e-3\nt_end = 1\npicard.damping = 0\n",
    ] {
        let e = parse_config(bad).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{bad}: {e}");
    }
}

#[test]
fn solver_failure_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    // too few iterations and no room to shrink τ
    let mut cfg = base(dir.path(), "");
    cfg.picard.max_iter = 3;
    cfg.picard.tau_min = 1e-3;
    let err = run_simulation(&cfg).unwrap_err();
    assert!(matches!(err, Error::PicardDivergence { .. }), "{err}");
    assert_eq!(err.exit_code(), 3);
    let text = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(text.starts_with(TRACE_HEADER));
    assert!(dir.path().join("snaps/snap_000000.nemf").exists());
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("ok.conf");
    fs::write(
        &conf,
        "dim = 2\nn = 8\ntau = 1e-3\nt_end = 2e-3\noutput.trace_path = t.csv\n\
         output.snapshot_dir = s\noutput.snapshot_every = 2\n",
    )
    .unwrap();
    let out = bin().args(["check", conf.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("t.csv").exists());

    let out = bin().args(["run", conf.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(parse_trace(&fs::read_to_string(dir.path().join("t.csv")).unwrap()).unwrap().len(), 2);

    let snap = dir.path().join("s/snap_000002.nemf");
    let out = bin().args(["inspect", snap.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("dim 2 n [8, 8] fields 2"), "{text}");

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "dim = 2\nn = 8\ntau = 1e-3\nt_end = 2e-3\nwhat = 1\n").unwrap();
    let out = bin().args(["check", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));

    let fail = dir.path().join("fail.conf");
    fs::write(
        &fail,
        "dim = 2\nn = 16\ntau = 1e-2\nt_end = 5e-2\nic.amplitude = 0.3\npicard.max_iter = 2\npicard.tau_min = 1e-2\n",
    )
    .unwrap();
    let out = bin().args(["run", fail.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = bin().args(["inspect", dir.path().join("missing.nemf").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = bin().args(["run", dir.path().join("missing.conf").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    fs::write(dir.path().join("junk.nemf"), b"NEMF1\n\x02").unwrap();
    let out = bin().args(["inspect", dir.path().join("junk.nemf").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}
