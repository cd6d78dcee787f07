use nematic::energetics::{energy_spectral, ModelParams};
use nematic::fields::{
    divergence, gradient, laplacian, leray_project, random_band_limited, random_solenoidal, Dealias, GridSpec,
    SpectralField, VectorField,
};
use nematic::oracle::{dense_operator_matrix, dense_scheme_residual, quadrature_energy, OperatorKind, SchemeSamples};
use nematic::stepper::{implicit_step, residual_fully_implicit, PicardConfig, StepState};
use nematic::runner::{initial_condition, IcKind};
use nematic::Error;

fn params() -> ModelParams {
    ModelParams {
        rho: 1.3,
        eta: 0.7,
        alpha: 0.3,
        gamma: 0.2,
        epsilon: 0.05,
        tau: 1e-2,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

#[test]
fn operators_match_dense_matrices() {
    for (dim, n) in [(2, 8), (3, 4)] {
        let g = GridSpec::new(dim, n, Dealias::None).unwrap();
        let f = random_band_limited(g, dim, n, 1.0, 5).to_real();
        let grads = gradient(&f).unwrap();
        for j in 0..dim {
            let m = dense_operator_matrix(&g, OperatorKind::Gradient(j)).unwrap();
            for c in 0..dim {
                let expect = m.apply(f.component(c));
                let got = grads.component(c * dim + j);
                let err = expect.iter().zip(got).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
                assert!(err <= 1e-11, "grad dim {dim} axis {j}: {err}");
            }
        }
        let lap = dense_operator_matrix(&g, OperatorKind::Laplacian).unwrap();
        let got = laplacian(&f).unwrap();
        for c in 0..dim {
            let expect = lap.apply(f.component(c));
            let err = expect.iter().zip(got.component(c)).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
            assert!(err <= 1e-10, "lap {err}");
        }
        let div = dense_operator_matrix(&g, OperatorKind::Divergence).unwrap();
        let expect = div.apply(f.values());
        let got = divergence(&f).unwrap();
        let err = expect.iter().zip(got.values()).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
        assert!(err <= 1e-11, "div {err}");
        let leray = dense_operator_matrix(&g, OperatorKind::Leray).unwrap();
        let expect = leray.apply(f.values());
        let got = leray_project(&f).unwrap();
        let err = expect.iter().zip(got.values()).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
        assert!(err <= 1e-12, "leray {err}");
    }
}

#[test]
fn oracle_rejects_large_grids() {
    let g = GridSpec::new(2, 32, Dealias::Exact).unwrap();
    let d = VectorField::zeros(g, 2);
    assert!(matches!(
        quadrature_energy(&d, &d, &params()),
        Err(Error::OracleTooLarge { n: 32, max: 16 })
    ));
}

#[test]
fn energy_matches_quadrature() {
    for (dim, n) in [(2, 8), (2, 16), (3, 4)] {
        let g = GridSpec::new(dim, n, Dealias::Exact).unwrap();
        for seed in 0..4 {
            let d = random_band_limited(g, dim, 3, 0.6, seed);
            let u = random_solenoidal(g, 3, 0.4, seed + 100);
            let p = params();
            let prod = energy_spectral(&d, &u, &p);
            let oracle = quadrature_energy(&d.to_real(), &u.to_real(), &p).unwrap();
            assert!(rel(prod.total, oracle.total) <= 1e-11, "{prod:?} vs {oracle:?}");
            assert!(rel(prod.well, oracle.well) <= 1e-11);
            assert!(rel(prod.elastic, oracle.elastic) <= 1e-11);
        }
    }
}

fn candidate(g: GridSpec, seed: u64) -> (StepState, SpectralField, SpectralField, SpectralField) {
    let dim = g.dim();
    let prev = StepState::from_spectral(
        random_band_limited(g, dim, 3, 0.5, seed).truncate(),
        random_solenoidal(g, 3, 0.3, seed + 1).truncate(),
        0.0,
    )
    .unwrap();
    let d = random_band_limited(g, dim, 3, 0.5, seed + 2).truncate();
    let u = random_solenoidal(g, 3, 0.3, seed + 3).truncate();
    let mu = random_band_limited(g, dim, 3, 2.0, seed + 4).truncate();
    (prev, d, u, mu)
}

fn oracle_residual(prev: &StepState, d: &SpectralField, u: &SpectralField, mu: &SpectralField, p: &ModelParams) -> nematic::stepper::Residuals {
    let (dp, up) = (prev.d_field(), prev.u_field());
    let (d, u, mu) = (d.to_real(), u.to_real(), mu.to_real());
    dense_scheme_residual(
        &SchemeSamples {
            d_prev: &dp,
            u_prev: &up,
            d: &d,
            u: &u,
            mu: &mu,
        },
        p,
    )
    .unwrap()
}

#[test]
fn residual_matches_dense_oracle() {
    for (dim, n) in [(2, 8), (3, 4)] {
        let g = GridSpec::new(dim, n, Dealias::Exact).unwrap();
        for seed in 0..3 {
            let (prev, d, u, mu) = candidate(g, 10 * seed);
            let p = params();
            let a = residual_fully_implicit(&prev, &d, &u, &mu, &p);
            let b = oracle_residual(&prev, &d, &u, &mu, &p);
            assert!((a.r_d - b.r_d).abs() <= 1e-10, "{a:?} {b:?}");
            assert!((a.r_mu - b.r_mu).abs() <= 1e-10, "{a:?} {b:?}");
            assert!((a.r_u - b.r_u).abs() <= 1e-10, "{a:?} {b:?}");
            assert!(a.r_d > 1e-3 && a.r_mu > 1e-3 && a.r_u > 1e-3);
        }
    }
}

#[test]
fn converged_step_is_a_root_of_the_oracle() {
    let g = GridSpec::new(2, 8, Dealias::Exact).unwrap();
    let prev = initial_condition(IcKind::UniformPerturbed, g, 3, 0.2).unwrap();
    let p = params().with_tau(1e-3);
    let cfg = PicardConfig {
        tol: 1e-11,
        ..PicardConfig::default()
    };
    let step = implicit_step(&prev, &p, &cfg).unwrap();
    assert_eq!(step.tau_used, p.tau, "iters {}", step.iters);
    let r = oracle_residual(&prev, &step.state.d, &step.state.u, &step.mu, &p);
    assert!(r.max() <= 2.0 * cfg.tol, "{r:?}");
}
