//! Penalty potential, its convex-concave splitting, the discrete chemical
//! potential and the energy and dissipation functionals.
//!
//! The well `W(d) = (|d|^2 - 1)^2 / (4 gamma)` splits as
//! `W+ = (|d|^4 + 1) / (4 gamma)` (convex) and `W- = -|d|^2 / (2 gamma)`
//! (concave), with variations `f+(d) = |d|^2 d / gamma` and `f-(d) = -d / gamma`.

use crate::error::{Error, Result};
use crate::fields::{SpectralField, VectorField};

/// Physical and scheme constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub rho: f64,
    pub eta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub tau: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            rho: 1.0,
            eta: 1.0,
            alpha: 0.5,
            gamma: 0.1,
            epsilon: 0.01,
            tau: 1e-3,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParam(msg.to_string()))
            }
        };
        check(self.rho > 0.0 && self.rho.is_finite(), "rho > 0")?;
        check(self.eta > 0.0 && self.eta.is_finite(), "eta > 0")?;
        check((0.0..=1.0).contains(&self.alpha), "alpha ∈ [0,1]")?;
        check(self.gamma > 0.0 && self.gamma.is_finite(), "gamma > 0")?;
        check(self.epsilon >= 0.0 && self.epsilon.is_finite(), "epsilon >= 0")?;
        check(self.tau > 0.0 && self.tau.is_finite(), "tau > 0")?;
        Ok(())
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        ModelParams { tau, ..*self }
    }
}

/// Energy split into its elastic, well and kinetic parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyBreakdown {
    pub elastic: f64,
    pub well: f64,
    pub kinetic: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(elastic: f64, well: f64, kinetic: f64) -> Self {
        EnergyBreakdown {
            elastic,
            well,
            kinetic,
            total: elastic + well + kinetic,
        }
    }
}

#[inline]
pub fn well_value(d2: f64, gamma: f64) -> f64 {
    let s = d2 - 1.0;
    s * s / (4.0 * gamma)
}

/// Convex part of the well, `(|d|^4 + 1) / (4 gamma)`.
#[inline]
pub fn well_convex(d2: f64, gamma: f64) -> f64 {
    (d2 * d2 + 1.0) / (4.0 * gamma)
}

/// Concave part of the well, `-|d|^2 / (2 gamma)`.
#[inline]
pub fn well_concave(d2: f64, gamma: f64) -> f64 {
    -d2 / (2.0 * gamma)
}

fn pointwise_sq(d: &VectorField, p: usize) -> f64 {
    (0..d.components()).map(|c| d.at(c, p).powi(2)).sum()
}

/// Pointwise double-well potential `W(d)` as a scalar field.
pub fn double_well(d: &VectorField, gamma: f64) -> VectorField {
    let grid = *d.grid();
    let vals = (0..grid.len())
        .map(|p| well_value(pointwise_sq(d, p), gamma))
        .collect();
    VectorField::from_values(grid, 1, vals).expect("one value per point")
}

/// Pointwise `(f+(d), f-(d_prev))`.
pub fn f_split(d: &VectorField, d_prev: &VectorField, gamma: f64) -> Result<(VectorField, VectorField)> {
    d.same_shape(d_prev)?;
    let grid = *d.grid();
    let mut plus = VectorField::zeros(grid, d.components());
    for p in 0..grid.len() {
        let s = pointwise_sq(d, p) / gamma;
        for c in 0..d.components() {
            plus.component_mut(c)[p] = s * d.at(c, p);
        }
    }
    let mut minus = d_prev.clone();
    minus.values_mut().iter_mut().for_each(|v| *v *= -1.0 / gamma);
    Ok((plus, minus))
}

/// Galerkin projection of `f+(d)` computed on the padded grid from padded
/// director samples.
pub(crate) fn f_plus_padded(d_pad: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    let len = d_pad[0].len();
    let d2: Vec<f64> = (0..len)
        .map(|p| d_pad.iter().map(|c| c[p] * c[p]).sum())
        .collect();
    d_pad
        .iter()
        .map(|c| c.iter().zip(&d2).map(|(v, s)| v * s / gamma).collect())
        .collect()
}

/// `μ = P[-Δd + f+(d) + f-(d_prev)]` in spectral form, given padded samples
/// of `d`.
pub(crate) fn chemical_potential_with(
    d: &SpectralField,
    d_pad: &[Vec<f64>],
    d_prev: &SpectralField,
    gamma: f64,
) -> SpectralField {
    let fp = SpectralField::from_padded(*d.grid(), &f_plus_padded(d_pad, gamma));
    let mut mu = d.laplacian().scale(-1.0);
    mu.axpy_mut(1.0, &fp);
    mu.axpy_mut(-1.0 / gamma, d_prev);
    mu.truncate()
}

pub fn chemical_potential_spectral(
    d: &SpectralField,
    d_prev: &SpectralField,
    gamma: f64,
) -> SpectralField {
    let d_pad = d.to_padded();
    chemical_potential_with(d, &d_pad, d_prev, gamma)
}

/// Discrete chemical potential `μ = Proj[-Δd + f+(d) + f-(d_prev)]`.
pub fn chemical_potential(
    d: &VectorField,
    d_prev: &VectorField,
    params: &ModelParams,
) -> Result<VectorField> {
    d.same_shape(d_prev)?;
    let ds = d.to_spectral()?.truncate();
    let dp = d_prev.to_spectral()?.truncate();
    Ok(chemical_potential_spectral(&ds, &dp, params.gamma).to_real())
}

/// `∫ W(d)` by quadrature on the padded grid.
pub(crate) fn well_integral(d_pad: &[Vec<f64>], gamma: f64) -> f64 {
    let len = d_pad[0].len();
    let s: f64 = (0..len)
        .map(|p| well_value(d_pad.iter().map(|c| c[p] * c[p]).sum(), gamma))
        .sum();
    s / len as f64
}

/// `½ ∫ |∇d|^2` via Parseval.
pub fn elastic_energy(d: &SpectralField) -> f64 {
    d.weighted_norm_sq(|k2| k2) * 0.5
}

pub fn energy_spectral(d: &SpectralField, u: &SpectralField, params: &ModelParams) -> EnergyBreakdown {
    let d_pad = d.to_padded();
    energy_with(d, &d_pad, u, params)
}

pub(crate) fn energy_with(
    d: &SpectralField,
    d_pad: &[Vec<f64>],
    u: &SpectralField,
    params: &ModelParams,
) -> EnergyBreakdown {
    EnergyBreakdown::new(
        elastic_energy(d),
        well_integral(d_pad, params.gamma),
        0.5 * params.rho * u.norm_sq(),
    )
}

/// Elastic, well and kinetic energy of the state `(d, u)`.
pub fn total_energy(d: &VectorField, u: &VectorField, params: &ModelParams) -> Result<EnergyBreakdown> {
    let ds = d.to_spectral()?;
    let us = u.to_spectral()?;
    Ok(energy_spectral(&ds, &us, params))
}

/// `∫ |D u|^2` via Parseval, `D u` the symmetric gradient.
pub fn sym_gradient_norm_sq(u: &SpectralField) -> f64 {
    let dim = u.grid().dim();
    let g = u.gradient();
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let a = g.component(i * dim + j);
            let b = g.component(j * dim + i);
            s += a
                .iter()
                .zip(b)
                .map(|(x, y)| ((x + y) * 0.5).norm_sqr())
                .sum::<f64>();
        }
    }
    s
}

/// Dissipation functional `2η ∫|Du|^2 + ∫|u - v|^2`.
pub fn dissipation_rate(u: &VectorField, v: &VectorField, params: &ModelParams) -> Result<f64> {
    u.same_shape(v)?;
    let us = u.to_spectral()?;
    let diff = us.sub(&v.to_spectral()?);
    Ok(2.0 * params.eta * sym_gradient_norm_sq(&us) + diff.norm_sq())
}
