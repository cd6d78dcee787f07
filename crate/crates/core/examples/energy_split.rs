//! Energy functional and the convex/concave split of the double well.

use nematic::energetics::{chemical_potential, f_split, total_energy, well_concave, well_convex, well_value, ModelParams};
use nematic::fields::{random_band_limited, Dealias, GridSpec, VectorField};

fn main() -> nematic::Result<()> {
    let gamma = 0.1;
    for r in [0.0, 0.5, 1.0, 1.5] {
        let d2 = r * r;
        println!(
            "|d| = {r:.1}: W = {:.4}  W+ = {:.4}  W- = {:.4}",
            well_value(d2, gamma),
            well_convex(d2, gamma),
            well_concave(d2, gamma)
        );
    }

    let g = GridSpec::new(2, 16, Dealias::Exact)?;
    let mut d = VectorField::uniform(g, &[1.0, 0.0]);
    let pert = random_band_limited(g, 2, 3, 0.05, 1).to_real();
    for (a, b) in d.values_mut().iter_mut().zip(pert.values()) {
        *a += b;
    }
    let u = VectorField::zeros(g, 2);
    let p = ModelParams {
        gamma,
        ..ModelParams::default()
    };
    let e = total_energy(&d, &u, &p)?;
    println!("elastic {:.4e} well {:.4e} kinetic {:.4e}", e.elastic, e.well, e.kinetic);

    let (fp, fm) = f_split(&d, &d, gamma)?;
    println!("max |f+| = {:.3}, max |f-| = {:.3}", fp.max_abs(), fm.max_abs());
    let mu = chemical_potential(&d, &d, &p)?;
    println!("max |μ| = {:.3}", mu.max_abs());
    Ok(())
}
