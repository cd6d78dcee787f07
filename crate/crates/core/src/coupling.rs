//! The two nonlinear operators coupling director and flow.
//!
//! Extra velocity (equal to the elastic force in the momentum balance):
//!
//! ```text
//! v_i = Σ_j μ_j ∂_i d_j + α Σ_j ∂_j(μ_i d_j) - (1-α) Σ_j ∂_j(d_i μ_j)
//! ```
//!
//! Director transport by a velocity `w`:
//!
//! ```text
//! T_i = Σ_j w_j ∂_j d_i - α Σ_j (∂_j w_i) d_j + (1-α) Σ_j (∂_i w_j) d_j
//! ```
//!
//! `T(d, ·)` is the L² adjoint of `θ ↦ v(θ, d)`: for any `w`, `θ`,
//! `∫ θ·T(d, w) = ∫ w·v(θ, d)`. With exact products this holds to round-off,
//! which is what makes the friction term cancel in the energy balance.

use crate::error::Result;
use crate::fields::{SpectralField, VectorField};

/// Padded-grid samples of `d` and `∇d`, shared by both operators.
pub struct DirectorSamples {
    pub(crate) d: Vec<Vec<f64>>,
    /// `∂_j d_i` at index `i * dim + j`.
    pub(crate) grad: Vec<Vec<f64>>,
}

impl DirectorSamples {
    pub fn new(d: &SpectralField) -> Self {
        DirectorSamples {
            d: d.to_padded(),
            grad: d.gradient().to_padded(),
        }
    }

    /// Padded samples of `d` itself.
    pub fn director(&self) -> &[Vec<f64>] {
        &self.d
    }
}

/// Extra velocity `v(μ, d)` in spectral form.
pub fn extra_velocity_with(mu: &SpectralField, ds: &DirectorSamples, alpha: f64) -> SpectralField {
    let grid = *mu.grid();
    let dim = grid.dim();
    let len = grid.padded_len();
    let mu_p = mu.to_padded();
    let mut a = vec![vec![0.0; len]; dim];
    let mut m = vec![vec![0.0; len]; dim * dim];
    for p in 0..len {
        for i in 0..dim {
            let mut s = 0.0;
            for j in 0..dim {
                s += mu_p[j][p] * ds.grad[j * dim + i][p];
                m[i * dim + j][p] = alpha * mu_p[i][p] * ds.d[j][p]
                    - (1.0 - alpha) * ds.d[i][p] * mu_p[j][p];
            }
            a[i][p] = s;
        }
    }
    let a = SpectralField::from_padded(grid, &a);
    let m = SpectralField::from_padded(grid, &m);
    a.add(&m.divergence().expect("dim x dim tensor"))
}

/// Director transport `T(d, w)` in spectral form.
pub fn director_transport_with(w: &SpectralField, ds: &DirectorSamples, alpha: f64) -> SpectralField {
    let grid = *w.grid();
    let dim = grid.dim();
    let len = grid.padded_len();
    let w_p = w.to_padded();
    let gw = w.gradient().to_padded();
    let mut t = vec![vec![0.0; len]; dim];
    for p in 0..len {
        for (i, ti) in t.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..dim {
                s += w_p[j][p] * ds.grad[i * dim + j][p];
                s -= alpha * gw[i * dim + j][p] * ds.d[j][p];
                s += (1.0 - alpha) * gw[j * dim + i][p] * ds.d[j][p];
            }
            ti[p] = s;
        }
    }
    SpectralField::from_padded(grid, &t)
}

pub fn extra_velocity_spectral(mu: &SpectralField, d: &SpectralField, alpha: f64) -> SpectralField {
    extra_velocity_with(mu, &DirectorSamples::new(d), alpha)
}

pub fn director_transport_spectral(d: &SpectralField, w: &SpectralField, alpha: f64) -> SpectralField {
    director_transport_with(w, &DirectorSamples::new(d), alpha)
}

/// Extra velocity `μ·∇d + α div(μ⊗d) - (1-α) div(d⊗μ)`, Galerkin-projected.
pub fn extra_velocity(mu: &VectorField, d: &VectorField, alpha: f64) -> Result<VectorField> {
    mu.same_shape(d)?;
    let mu = mu.to_spectral()?.truncate();
    let d = d.to_spectral()?.truncate();
    Ok(extra_velocity_spectral(&mu, &d, alpha).to_real())
}

/// Elastic force entering the momentum balance with a plus sign. It is the
/// extra velocity, computed by the same routine.
pub fn elastic_force(mu: &VectorField, d: &VectorField, alpha: f64) -> Result<VectorField> {
    extra_velocity(mu, d, alpha)
}

/// Director transport `(w·∇)d - α(∇w)d + (1-α)(∇w)ᵀd`, Galerkin-projected.
pub fn director_transport(d: &VectorField, w: &VectorField, alpha: f64) -> Result<VectorField> {
    d.same_shape(w)?;
    let d = d.to_spectral()?.truncate();
    let w = w.to_spectral()?.truncate();
    Ok(director_transport_spectral(&d, &w, alpha).to_real())
}

/// One classical Runge-Kutta step of pure transport `∂_t d + T(d, w) = 0`
/// with `w` frozen. No regularization and no well: with `α = ½` the length
/// `|d|` is only advected.
pub fn transport_rk4_step(d: &SpectralField, w: &SpectralField, alpha: f64, tau: f64) -> SpectralField {
    let rate = |x: &SpectralField| director_transport_spectral(x, w, alpha).scale(-1.0);
    let k1 = rate(d);
    let k2 = rate(&d.axpy(0.5 * tau, &k1));
    let k3 = rate(&d.axpy(0.5 * tau, &k2));
    let k4 = rate(&d.axpy(tau, &k3));
    let mut out = d.axpy(tau / 6.0, &k1);
    out.axpy_mut(tau / 3.0, &k2);
    out.axpy_mut(tau / 3.0, &k3);
    out.axpy_mut(tau / 6.0, &k4);
    out
}
