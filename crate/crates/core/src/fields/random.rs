use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::grid::GridSpec;

/// Random real field whose modes satisfy `|k_j| <= max_k` on every axis,
/// with standard-normal-ish coefficients scaled by `amplitude`.
///
/// Deterministic in `seed`. Conjugate symmetry holds exactly, so the
/// synthesized samples are real.
pub fn random_band_limited(
    grid: GridSpec,
    components: usize,
    max_k: usize,
    amplitude: f64,
    seed: u64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpectralField::zeros(grid, components);
    let dim = grid.dim();
    let n = grid.n();
    let max_k = max_k.min(n / 2 - 1) as i64;
    let len = grid.len();
    for c in 0..components {
        let coeffs = out.component_mut(c);
        for p in 0..len {
            let idx = grid.unravel(p);
            let k: Vec<i64> = idx[..dim].iter().map(|&i| grid.wavenumber(i)).collect();
            if k.iter().any(|&ki| ki.abs() > max_k) {
                continue;
            }
            // fill one representative of each +/- pair, mirror the other
            let neg: Vec<i64> = k.iter().map(|&ki| -ki).collect();
            if k < neg {
                continue;
            }
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = if k == neg { 0.0 } else { rng.gen_range(-1.0..1.0) };
            let v = Complex64::new(re, im) * amplitude;
            coeffs[p] = v;
            let mflat = neg
                .iter()
                .fold(0usize, |acc, &ki| acc * n + ki.rem_euclid(n as i64) as usize);
            coeffs[mflat] = v.conj();
        }
    }
    out
}

/// Random band-limited velocity projected onto solenoidal zero-mean fields.
pub fn random_solenoidal(grid: GridSpec, max_k: usize, amplitude: f64, seed: u64) -> SpectralField {
    random_band_limited(grid, grid.dim(), max_k, amplitude, seed)
        .leray()
        .expect("component count equals dim")
}
