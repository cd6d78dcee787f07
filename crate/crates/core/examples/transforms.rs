//! Spectral transforms and operators on a small 2D grid.

use std::f64::consts::PI;

use nematic::fields::{divergence, gradient, laplacian, leray_project, Dealias, GridSpec, VectorField};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 16, Dealias::TwoThirds)?;
    let f = VectorField::from_fn(g, 2, |x, o| {
        o[0] = (2.0 * PI * x[0]).sin() + 0.5;
        o[1] = (2.0 * PI * (x[0] + 2.0 * x[1])).cos();
    });

    let s = f.to_spectral()?;
    println!("mean of component 0: {:.3}", s.coeff_at(0, [0, 0, 0]).re);
    println!("round trip error: {:.2e}", s.to_real().max_diff(&f));

    // ∂_x sin(2πx) = 2π cos(2πx)
    let grad = gradient(&f)?;
    println!("max ∂_x f0 = {:.6} (2π = {:.6})", grad.component(0).iter().cloned().fold(f64::MIN, f64::max), 2.0 * PI);

    let lap = laplacian(&f)?;
    println!("max |Δf| = {:.3}", lap.max_abs());

    let p = leray_project(&f)?;
    println!("div f = {:.3e}, div Pf = {:.3e}", divergence(&f)?.max_abs(), divergence(&p)?.max_abs());
    Ok(())
}
