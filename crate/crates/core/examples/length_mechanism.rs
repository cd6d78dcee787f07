//! At α = ½ transport alone keeps |d| fixed: ∫d·T(d,w) vanishes and an
//! explicit transport-only run barely moves |d|.

use std::f64::consts::PI;

use nematic::coupling::{director_transport_spectral, transport_rk4_step};
use nematic::diagnostics::director_length_stats;
use nematic::fields::{random_band_limited, random_solenoidal, Dealias, GridSpec, VectorField};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 16, Dealias::Exact)?;
    let d = random_band_limited(g, 2, 4, 1.0, 1);
    let w = random_solenoidal(g, 4, 1.0, 2);
    for alpha in [0.0, 0.3, 0.5, 0.7, 1.0] {
        let pairing = d.inner(&director_transport_spectral(&d, &w, alpha));
        println!("alpha {alpha:.1}: ∫d·T(d,w) = {pairing:+.3e}");
    }

    let g = GridSpec::new(2, 32, Dealias::Exact)?;
    let d = VectorField::from_fn(g, 2, |x, o| {
        let theta = 0.3 * (2.0 * PI * x[0]).sin();
        o[0] = theta.cos();
        o[1] = theta.sin();
    });
    let d = d.to_spectral()?.truncate();
    println!("initial max ||d|-1| = {:.3e}", director_length_stats(&d.to_real()).max_deviation);
    let w = random_solenoidal(g, 2, 1.0, 3);
    let w = w.scale(1.0 / w.to_real().max_abs());
    for alpha in [0.5, 0.0] {
        let mut dd = d.clone();
        for _ in 0..100 {
            dd = transport_rk4_step(&dd, &w, alpha, 1e-4);
        }
        println!("alpha {alpha}: max ||d|-1| after 100 steps = {:.3e}", director_length_stats(&dd.to_real()).max_deviation);
    }
    Ok(())
}
