//! One fully implicit step of the Galerkin scheme.
//!
//! Unknowns `(dⁿ, uⁿ)` (with `μⁿ` eliminated) solve
//!
//! ```text
//! dⁿ - dⁿ⁻¹ + τ T(dⁿ, uⁿ + vⁿ) + ετ μⁿ = 0
//! μⁿ = P[-Δdⁿ + f+(dⁿ) + f-(dⁿ⁻¹)]
//! L[ρ(uⁿ - uⁿ⁻¹) + τρ (uⁿ·∇)uⁿ - τη Δuⁿ - τ vⁿ] = 0,   vⁿ = v(μⁿ, dⁿ)
//! ```
//!
//! with `P` the Galerkin projection and `L` the Leray projector. The system
//! is solved by a preconditioned fixed-point sweep accelerated with Anderson
//! mixing. The preconditioner is the mode-wise linearization about a
//! spatially averaged director tensor, which captures the fourth-order
//! stiffness of `τ T(d, v(μ(d), d))`. Failed solves retry with a shrunken
//! time increment.

use num_complex::Complex64;

use crate::anderson::Anderson;
use crate::coupling::{director_transport_with, extra_velocity_with, DirectorSamples};
use crate::diagnostics::{build_ledger, EnergyLedger, LedgerInput};
use crate::energetics::{chemical_potential_with, ModelParams};
use crate::error::{non_finite, Error, Result};
use crate::fields::{GridSpec, SpectralField, VectorField};

/// Relative solenoidality threshold for admissible velocities.
pub const SOLENOIDAL_TOL: f64 = 1e-12;

/// One time level `(d, u)`; `u` is solenoidal with zero mean.
#[derive(Clone, Debug, PartialEq)]
pub struct StepState {
    pub d: SpectralField,
    pub u: SpectralField,
    pub time: f64,
}

impl StepState {
    /// Builds a state from samples, projecting both fields onto the
    /// Galerkin band. Fails if `u` is not solenoidal and zero-mean.
    pub fn new(d: &VectorField, u: &VectorField, time: f64) -> Result<Self> {
        let d = d.to_spectral()?.truncate();
        let u = u.to_spectral()?.truncate();
        Self::from_spectral(d, u, time)
    }

    pub fn from_spectral(d: SpectralField, u: SpectralField, time: f64) -> Result<Self> {
        let dim = d.grid().dim();
        if d.components() != dim || u.components() != dim || d.grid() != u.grid() {
            return Err(Error::Shape("d and u must be dim-component fields on one grid".into()));
        }
        if !d.is_finite() || !u.is_finite() {
            return Err(non_finite("initial state"));
        }
        let state = StepState { d, u, time };
        let (div, mean) = state.velocity_defects();
        let scale = SOLENOIDAL_TOL * state.u.l2_norm().max(f64::MIN_POSITIVE);
        if div > scale || mean > scale {
            return Err(Error::InvalidParam(format!(
                "velocity must be solenoidal with zero mean (divergence {div:e}, mean {mean:e})"
            )));
        }
        Ok(state)
    }

    /// Ground state: uniform unit director `direction`, fluid at rest.
    pub fn uniform(grid: GridSpec, direction: &[f64]) -> Result<Self> {
        let d = VectorField::uniform(grid, direction);
        let u = VectorField::zeros(grid, grid.dim());
        StepState::new(&d, &u, 0.0)
    }

    pub fn grid(&self) -> &GridSpec {
        self.d.grid()
    }

    pub fn d_field(&self) -> VectorField {
        self.d.to_real()
    }

    pub fn u_field(&self) -> VectorField {
        self.u.to_real()
    }

    /// `(max mode-wise divergence, |mean|)` of the velocity.
    pub fn velocity_defects(&self) -> (f64, f64) {
        let dim = self.u.grid().dim();
        let mean = (0..dim)
            .map(|c| self.u.component(c)[0].norm_sqr())
            .sum::<f64>()
            .sqrt();
        (self.u.max_divergence(), mean)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Mixing parameter θ in (0, 1].
    pub damping: f64,
    pub tau_shrink: f64,
    pub tau_min: f64,
    /// Anderson history length; 0 gives the plain damped sweep.
    pub anderson_depth: usize,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            tol: 1e-10,
            max_iter: 200,
            damping: 1.0,
            tau_shrink: 0.5,
            tau_min: 1e-8,
            anderson_depth: 8,
        }
    }
}

impl PicardConfig {
    pub fn validate(&self, tau: f64) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParam(m.to_string()));
        if !(self.tol > 0.0) {
            return fail("picard.tol > 0");
        }
        if self.max_iter < 1 {
            return fail("picard.max_iter >= 1");
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return fail("picard.damping ∈ (0,1]");
        }
        if !(self.tau_shrink > 0.0 && self.tau_shrink < 1.0) {
            return fail("picard.tau_shrink ∈ (0,1)");
        }
        if !(self.tau_min > 0.0 && self.tau_min <= tau) {
            return fail("0 < picard.tau_min <= tau");
        }
        Ok(())
    }
}

/// Normalized residuals of the implicit system.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residuals {
    pub r_d: f64,
    pub r_mu: f64,
    pub r_u: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.r_d.max(self.r_mu).max(self.r_u)
    }
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub state: StepState,
    pub mu: SpectralField,
    pub v_extra: SpectralField,
    pub ledger: EnergyLedger,
    pub iters: usize,
    pub residual: f64,
    pub tau_used: f64,
}

/// Current `(d, u)` iterate of the fixed-point solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub d: SpectralField,
    pub u: SpectralField,
}

/// Fields produced while evaluating the scheme at an iterate.
pub(crate) struct Evaluation {
    pub mu: SpectralField,
    pub v: SpectralField,
    /// strong residual of the director equation
    pub res_d: SpectralField,
    /// Leray-projected strong residual of the momentum equation
    pub res_u: SpectralField,
}

/// Galerkin projection of the convective term `(u·∇)u`.
pub fn convection(u: &SpectralField) -> SpectralField {
    let grid = *u.grid();
    let dim = grid.dim();
    let len = grid.padded_len();
    let up = u.to_padded();
    let gu = u.gradient().to_padded();
    let mut out = vec![vec![0.0; len]; dim];
    for (i, o) in out.iter_mut().enumerate() {
        for p in 0..len {
            let mut s = 0.0;
            for j in 0..dim {
                s += up[j][p] * gu[i * dim + j][p];
            }
            o[p] = s;
        }
    }
    SpectralField::from_padded(grid, &out)
}

fn momentum_residual(
    prev: &StepState,
    u: &SpectralField,
    v: &SpectralField,
    params: &ModelParams,
) -> SpectralField {
    let tau = params.tau;
    let mut r = u.sub(&prev.u).scale(params.rho);
    r.axpy_mut(tau * params.rho, &convection(u));
    r.axpy_mut(-tau * params.eta, &u.laplacian());
    r.axpy_mut(-tau, v);
    r.leray().expect("velocity has dim components")
}

fn director_residual(
    prev: &StepState,
    d: &SpectralField,
    u: &SpectralField,
    mu: &SpectralField,
    v: &SpectralField,
    ds: &DirectorSamples,
    params: &ModelParams,
) -> SpectralField {
    let w = u.add(v);
    let t = director_transport_with(&w, ds, params.alpha);
    let mut r = d.sub(&prev.d);
    r.axpy_mut(params.tau, &t);
    r.axpy_mut(params.epsilon * params.tau, mu);
    r.truncate()
}

pub(crate) fn evaluate(prev: &StepState, d: &SpectralField, u: &SpectralField, params: &ModelParams) -> Evaluation {
    let ds = DirectorSamples::new(d);
    let mu = chemical_potential_with(d, ds.director(), &prev.d, params.gamma);
    let v = extra_velocity_with(&mu, &ds, params.alpha);
    let res_d = director_residual(prev, d, u, &mu, &v, &ds, params);
    let res_u = momentum_residual(prev, u, &v, params);
    Evaluation { mu, v, res_d, res_u }
}

fn normalized(res_d: &SpectralField, res_u: &SpectralField, d: &SpectralField, u: &SpectralField, rho: f64) -> (f64, f64) {
    (
        res_d.l2_norm() / (1.0 + d.l2_norm()),
        res_u.l2_norm() / (rho * (1.0 + u.l2_norm())),
    )
}

/// Residuals of the fully implicit system at a candidate `(d, u, μ)`.
///
/// The candidate `μ` is used as given, both in the extra velocity and in
/// the regularization term; `r_mu` measures its mismatch with the discrete
/// chemical potential of `d`.
pub fn residual_fully_implicit(
    prev: &StepState,
    d: &SpectralField,
    u: &SpectralField,
    mu: &SpectralField,
    params: &ModelParams,
) -> Residuals {
    let ds = DirectorSamples::new(d);
    let v = extra_velocity_with(mu, &ds, params.alpha);
    let res_d = director_residual(prev, d, u, mu, &v, &ds, params);
    let res_u = momentum_residual(prev, u, &v, params);
    let mu_exact = chemical_potential_with(d, ds.director(), &prev.d, params.gamma);
    let (r_d, r_u) = normalized(&res_d, &res_u, d, u, params.rho);
    Residuals {
        r_d,
        r_mu: mu.sub(&mu_exact).l2_norm() / (1.0 + mu.l2_norm()),
        r_u,
    }
}

/// Frozen-coefficient spectral preconditioner for the director and
/// momentum residuals.
pub(crate) struct Preconditioner {
    dim: usize,
    /// per mode, row-major `dim x dim` inverse of the director block
    inv_d: Vec<f64>,
    /// per mode, `1 / (ρ + τη|K|²)`
    inv_u: Vec<f64>,
}

impl Preconditioner {
    /// Linearization about the mean director tensor `C = ⟨d ⊗ d⟩` of `d`.
    pub fn new(d: &SpectralField, params: &ModelParams) -> Self {
        let grid = *d.grid();
        let dim = grid.dim();
        let d_pad = d.to_padded();
        let plen = d_pad[0].len() as f64;
        let mut c = [[0.0f64; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                c[i][j] = d_pad[i].iter().zip(&d_pad[j]).map(|(a, b)| a * b).sum::<f64>() / plen;
            }
        }
        let tr: f64 = (0..dim).map(|i| c[i][i]).sum();
        let (alpha, tau, eps, gamma) = (params.alpha, params.tau, params.epsilon, params.gamma);
        let fourier = d.fourier().clone();
        let len = grid.len();
        let mut inv_d = vec![0.0; len * dim * dim];
        let mut inv_u = vec![0.0; len];
        for p in 0..len {
            let k = fourier.dk(p);
            let k2 = fourier.dk2(p);
            inv_u[p] = 1.0 / (params.rho + tau * params.eta * k2);
            // AᵀA = α² (KᵀCK) I - α(1-α)(C K Kᵀ + K Kᵀ C) + (1-α)² tr(C) K Kᵀ
            let mut ck = [0.0; 3];
            for i in 0..dim {
                for j in 0..dim {
                    ck[i] += c[i][j] * k[j];
                }
            }
            let kck: f64 = (0..dim).map(|i| k[i] * ck[i]).sum();
            let mut ata = nalgebra::DMatrix::<f64>::zeros(dim, dim);
            let mut mmu = nalgebra::DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    ata[(i, j)] = alpha * alpha * kck * delta
                        - alpha * (1.0 - alpha) * (ck[i] * k[j] + k[i] * ck[j])
                        + (1.0 - alpha) * (1.0 - alpha) * tr * k[i] * k[j]
                        + eps * delta;
                    mmu[(i, j)] = k2 * delta + (tr * delta + 2.0 * c[i][j]) / gamma;
                }
            }
            let block = nalgebra::DMatrix::<f64>::identity(dim, dim) + (ata * mmu) * tau;
            let inv = block
                .try_inverse()
                .unwrap_or_else(|| nalgebra::DMatrix::<f64>::identity(dim, dim));
            for i in 0..dim {
                for j in 0..dim {
                    inv_d[(p * dim + i) * dim + j] = inv[(i, j)];
                }
            }
        }
        Preconditioner { dim, inv_d, inv_u }
    }

    pub fn apply_d(&self, r: &SpectralField) -> SpectralField {
        let dim = self.dim;
        let len = r.grid().len();
        let mut out = SpectralField::zeros(*r.grid(), dim);
        for p in 0..len {
            for i in 0..dim {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    s += r.component(j)[p] * self.inv_d[(p * dim + i) * dim + j];
                }
                out.component_mut(i)[p] = s;
            }
        }
        out
    }

    pub fn apply_u(&self, r: &SpectralField) -> SpectralField {
        let len = r.grid().len();
        let mut out = r.clone();
        for c in 0..self.dim {
            for (p, v) in out.component_mut(c).iter_mut().enumerate() {
                *v *= self.inv_u[p % len];
            }
        }
        out
    }
}

/// One damped residual-correction sweep from `current`.
///
/// Evaluates `μ` and `v` at the current iterate, forms the director and
/// momentum residuals, applies the spectral preconditioner and blends:
/// `next = current - θ P⁻¹ R(current)`.
pub fn picard_sweep(prev: &StepState, current: &Iterate, params: &ModelParams, damping: f64) -> Iterate {
    let pre = Preconditioner::new(&prev.d, params);
    let ev = evaluate(prev, &current.d, &current.u, params);
    let dd = pre.apply_d(&ev.res_d);
    let du = pre.apply_u(&ev.res_u);
    Iterate {
        d: current.d.axpy(-damping, &dd),
        u: current.u.axpy(-damping, &du),
    }
}

enum Failure {
    Stalled(f64),
    NonFinite,
}

struct Solved {
    d: SpectralField,
    u: SpectralField,
    eval: Evaluation,
    iters: usize,
    residual: f64,
}

fn solve(prev: &StepState, params: &ModelParams, cfg: &PicardConfig) -> std::result::Result<Solved, Failure> {
    let dim = prev.grid().dim();
    let pre = Preconditioner::new(&prev.d, params);
    let mut acc = Anderson::new(cfg.anderson_depth);
    let mut d = prev.d.clone();
    let mut u = prev.u.clone();
    let mut beta = cfg.damping;
    let mut last = f64::INFINITY;
    let mut best = f64::INFINITY;
    for iter in 1..=cfg.max_iter {
        let eval = evaluate(prev, &d, &u, params);
        if !eval.res_d.is_finite() || !eval.res_u.is_finite() {
            return Err(Failure::NonFinite);
        }
        let (r_d, r_u) = normalized(&eval.res_d, &eval.res_u, &d, &u, params.rho);
        let r = r_d.max(r_u);
        if r <= cfg.tol {
            return Ok(Solved {
                d,
                u,
                eval,
                iters: iter,
                residual: r,
            });
        }
        if r > last {
            beta = beta.min(0.5);
        }
        if r > 1e3 * best {
            acc.reset();
        }
        last = r;
        best = best.min(r);
        let corr = SpectralField::concat(&[&pre.apply_d(&eval.res_d).scale(-1.0), &pre.apply_u(&eval.res_u).scale(-1.0)]);
        let x = SpectralField::concat(&[&d, &u]);
        let next = acc.step(x.coeffs(), corr.coeffs(), beta);
        let mut xn = x;
        xn.coeffs_mut().copy_from_slice(&next);
        d = xn.slice(0, dim).truncate();
        u = xn.slice(dim, dim).leray().expect("dim components").truncate();
    }
    Err(Failure::Stalled(best))
}

/// Advances `prev` by one implicit step, shrinking `τ` on solver failure.
pub fn implicit_step(prev: &StepState, params: &ModelParams, cfg: &PicardConfig) -> Result<StepResult> {
    params.validate()?;
    if params.epsilon <= 0.0 {
        return Err(Error::InvalidParam("epsilon > 0 required by the implicit step".into()));
    }
    cfg.validate(params.tau)?;
    let mut tau = params.tau;
    loop {
        let p = params.with_tau(tau);
        match solve(prev, &p, cfg) {
            Ok(s) => {
                let mut ledger = build_ledger(
                    &LedgerInput {
                        prev,
                        d: &s.d,
                        u: &s.u,
                        mu: &s.eval.mu,
                        v_extra: &s.eval.v,
                        tau,
                    },
                    &p,
                );
                ledger.picard_iters = s.iters;
                ledger.picard_residual = s.residual;
                let state = StepState {
                    d: s.d,
                    u: s.u,
                    time: prev.time + tau,
                };
                return Ok(StepResult {
                    state,
                    mu: s.eval.mu,
                    v_extra: s.eval.v,
                    ledger,
                    iters: s.iters,
                    residual: s.residual,
                    tau_used: tau,
                });
            }
            Err(fail) => {
                let next = tau * cfg.tau_shrink;
                if next < cfg.tau_min {
                    return Err(match fail {
                        Failure::NonFinite => non_finite("implicit step iteration"),
                        Failure::Stalled(r) => Error::PicardDivergence { tau: next, residual: r },
                    });
                }
                tau = next;
            }
        }
    }
}
