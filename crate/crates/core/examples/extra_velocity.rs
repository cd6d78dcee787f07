//! Extra velocity v(μ, d) and the transport operator it is adjoint to.

use nematic::coupling::{director_transport, extra_velocity};
use nematic::energetics::{chemical_potential, ModelParams};
use nematic::fields::{random_band_limited, random_solenoidal, Dealias, GridSpec};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 16, Dealias::Exact)?;
    let d = random_band_limited(g, 2, 3, 0.5, 3).to_real();
    let w = random_solenoidal(g, 3, 1.0, 4).to_real();
    let mu = chemical_potential(&d, &d, &ModelParams::default())?;

    for alpha in [0.0, 0.5, 1.0] {
        let v = extra_velocity(&mu, &d, alpha)?;
        let t = director_transport(&d, &w, alpha)?;
        // ∫ v·w = ∫ μ·T(d, w)
        let lhs = v.dot(&w);
        let rhs = mu.dot(&t);
        println!("alpha {alpha}: ∫v·w = {lhs:+.10e}  ∫μ·T(d,w) = {rhs:+.10e}");
    }
    Ok(())
}
