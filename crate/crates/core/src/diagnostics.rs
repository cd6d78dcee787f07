//! Per-step energy ledger, inequality check, director-length statistics and
//! the H² diagnostic.
//!
//! The ledger records every term of the discrete energy balance
//!
//! ```text
//! E(dⁿ,uⁿ) + D_visc + D_friction + D_eps + J_grad + J_d + J_u + slack = E(dⁿ⁻¹,uⁿ⁻¹)
//! ```
//!
//! For an exact solution of the implicit system, `slack` equals the
//! convexity gap of the implicit well part and is nonnegative.

use crate::energetics::{energy_spectral, sym_gradient_norm_sq, EnergyBreakdown, ModelParams};
use crate::fields::{SpectralField, VectorField};
use crate::stepper::StepState;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyLedger {
    pub step: usize,
    pub time: f64,
    pub energy: EnergyBreakdown,
    pub energy_prev: EnergyBreakdown,
    /// `2ητ ∫|Duⁿ|²`
    pub d_visc: f64,
    /// `τ ∫|vⁿ|²`
    pub d_friction: f64,
    /// `ετ ∫|μⁿ|²`
    pub d_eps: f64,
    /// `½ ∫|∇dⁿ - ∇dⁿ⁻¹|²`
    pub j_grad: f64,
    /// `(1/2γ) ∫|dⁿ - dⁿ⁻¹|²`, the exact concave-split remainder.
    pub j_d: f64,
    /// `½ ∫|dⁿ - dⁿ⁻¹|²`, recorded for comparison with the unscaled form.
    pub j_d_unscaled: f64,
    /// `½ρ ∫|uⁿ - uⁿ⁻¹|²`
    pub j_u: f64,
    pub slack: f64,
    pub picard_iters: usize,
    pub picard_residual: f64,
}

impl EnergyLedger {
    pub fn dissipation(&self) -> f64 {
        self.d_visc + self.d_friction + self.d_eps
    }

    pub fn jumps(&self) -> f64 {
        self.j_grad + self.j_d + self.j_u
    }

    /// `E_prev - E - ΣD - ΣJ`, recomputed from the stored terms.
    pub fn balance(&self) -> f64 {
        self.energy_prev.total - self.energy.total - (self.dissipation() + self.jumps())
    }
}

/// Inputs describing one accepted step.
pub struct LedgerInput<'a> {
    pub prev: &'a StepState,
    pub d: &'a SpectralField,
    pub u: &'a SpectralField,
    pub mu: &'a SpectralField,
    pub v_extra: &'a SpectralField,
    pub tau: f64,
}

pub fn build_ledger(input: &LedgerInput<'_>, params: &ModelParams) -> EnergyLedger {
    let p = params.with_tau(input.tau);
    let energy_prev = energy_spectral(&input.prev.d, &input.prev.u, &p);
    let energy = energy_spectral(input.d, input.u, &p);
    let dd = input.d.sub(&input.prev.d);
    let du = input.u.sub(&input.prev.u);
    let tau = input.tau;
    let mut ledger = EnergyLedger {
        step: 0,
        time: input.prev.time + tau,
        energy,
        energy_prev,
        d_visc: 2.0 * p.eta * tau * sym_gradient_norm_sq(input.u),
        d_friction: tau * input.v_extra.norm_sq(),
        d_eps: p.epsilon * tau * input.mu.norm_sq(),
        j_grad: 0.5 * dd.weighted_norm_sq(|k2| k2),
        j_d: dd.norm_sq() / (2.0 * p.gamma),
        j_d_unscaled: 0.5 * dd.norm_sq(),
        j_u: 0.5 * p.rho * du.norm_sq(),
        slack: 0.0,
        picard_iters: 0,
        picard_residual: 0.0,
    };
    ledger.slack = ledger.balance();
    ledger
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub pass: bool,
    pub slack: f64,
    pub budget: f64,
}

/// Default slack budget `10 · tol · (1 + E⁰)`.
pub fn default_budget(picard_tol: f64, initial_energy: f64) -> f64 {
    10.0 * picard_tol * (1.0 + initial_energy)
}

pub fn check_energy_inequality(ledger: &EnergyLedger, budget: f64) -> InequalityCheck {
    InequalityCheck {
        pass: ledger.slack >= -budget,
        slack: ledger.slack,
        budget,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// `max | |d| - 1 |`
    pub max_deviation: f64,
}

pub fn director_length_stats(d: &VectorField) -> LengthStats {
    let len = d.grid().len();
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut dev = 0.0f64;
    for p in 0..len {
        let l = (0..d.components())
            .map(|c| d.at(c, p).powi(2))
            .sum::<f64>()
            .sqrt();
        min = min.min(l);
        max = max.max(l);
        sum += l;
        dev = dev.max((l - 1.0).abs());
    }
    LengthStats {
        min,
        max,
        mean: sum / len as f64,
        max_deviation: dev,
    }
}

/// `‖Δd‖_{L²}` from the spectral coefficients.
pub fn h2_diagnostic(d: &SpectralField) -> f64 {
    d.weighted_norm_sq(|k2| k2 * k2).sqrt()
}
