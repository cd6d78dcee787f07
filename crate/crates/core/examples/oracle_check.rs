//! Compare the spectral operators and scheme residual against the dense
//! reference implementation.

use nematic::energetics::{energy_spectral, ModelParams};
use nematic::fields::{laplacian, random_band_limited, random_solenoidal, Dealias, GridSpec};
use nematic::oracle::{dense_operator_matrix, dense_scheme_residual, quadrature_energy, OperatorKind, SchemeSamples};
use nematic::stepper::{residual_fully_implicit, StepState};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 8, Dealias::Exact)?;
    let f = random_band_limited(g, 2, 3, 1.0, 1).to_real();
    let lap = dense_operator_matrix(&g, OperatorKind::Laplacian)?;
    let dense = lap.apply(f.component(0));
    let fast = laplacian(&f)?;
    let err = dense.iter().zip(fast.component(0)).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    println!("laplacian: dense vs spectral max diff {err:.2e}");

    let p = ModelParams::default();
    let d = random_band_limited(g, 2, 3, 0.6, 2);
    let u = random_solenoidal(g, 3, 0.4, 3);
    let a = energy_spectral(&d, &u, &p).total;
    let b = quadrature_energy(&d.to_real(), &u.to_real(), &p)?.total;
    println!("energy: spectral {a:.15} quadrature {b:.15}");

    let prev = StepState::from_spectral(d.truncate(), u.truncate(), 0.0)?;
    let d1 = random_band_limited(g, 2, 3, 0.5, 4).truncate();
    let u1 = random_solenoidal(g, 3, 0.3, 5).truncate();
    let mu = random_band_limited(g, 2, 3, 1.0, 6).truncate();
    let fast = residual_fully_implicit(&prev, &d1, &u1, &mu, &p);
    let (dp, up) = (prev.d_field(), prev.u_field());
    let (dr, ur, mr) = (d1.to_real(), u1.to_real(), mu.to_real());
    let slow = dense_scheme_residual(
        &SchemeSamples {
            d_prev: &dp,
            u_prev: &up,
            d: &dr,
            u: &ur,
            mu: &mr,
        },
        &p,
    )?;
    println!("residual stepper {fast:?}");
    println!("residual oracle  {slow:?}");
    Ok(())
}
