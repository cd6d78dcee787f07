//! Built-in initial conditions.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{random_band_limited, GridSpec, SpectralField, VectorField};
use crate::stepper::StepState;

/// Highest wavenumber excited by the random initial profiles.
const IC_MAX_K: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcKind {
    /// Uniform director `e₁` plus a smooth perturbation of pointwise size at
    /// most `amplitude`; smooth solenoidal velocity of the same size.
    UniformPerturbed,
    /// Smooth random director of unit peak length and smooth random velocity.
    RandomSmooth,
    /// A ±1 defect pair in 2D with a cored director profile.
    DefectPair,
}

impl IcKind {
    pub fn parse(s: &str) -> Option<IcKind> {
        match s {
            "uniform_perturbed" => Some(IcKind::UniformPerturbed),
            "random_smooth" => Some(IcKind::RandomSmooth),
            "defect_pair" => Some(IcKind::DefectPair),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IcKind::UniformPerturbed => "uniform_perturbed",
            IcKind::RandomSmooth => "random_smooth",
            IcKind::DefectPair => "defect_pair",
        }
    }
}

impl fmt::Display for IcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn max_pointwise(f: &VectorField) -> f64 {
    (0..f.grid().len())
        .map(|p| {
            (0..f.components())
                .map(|c| f.at(c, p).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// `f` rescaled so its largest pointwise length on the grid is `target`.
fn with_peak(f: SpectralField, target: f64) -> SpectralField {
    let peak = max_pointwise(&f.to_real());
    if peak == 0.0 || target == 0.0 {
        return f.scale(0.0);
    }
    f.scale(target / peak)
}

fn smooth_velocity(grid: GridSpec, amplitude: f64, seed: u64) -> SpectralField {
    let raw = random_band_limited(grid, grid.dim(), IC_MAX_K, 1.0, seed ^ 0x5eed_0f_u64)
        .leray()
        .expect("dim components");
    with_peak(raw, amplitude)
}

/// Initial state of the given kind; deterministic in `seed`.
pub fn initial_condition(kind: IcKind, grid: GridSpec, seed: u64, amplitude: f64) -> Result<StepState> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidParam("ic.amplitude >= 0".into()));
    }
    let dim = grid.dim();
    let (d, u) = match kind {
        IcKind::UniformPerturbed => {
            let mut e1 = vec![0.0; dim];
            e1[0] = 1.0;
            let base = VectorField::uniform(grid, &e1).to_spectral()?;
            let pert = with_peak(random_band_limited(grid, dim, IC_MAX_K, 1.0, seed), amplitude);
            (base.add(&pert), smooth_velocity(grid, amplitude, seed))
        }
        IcKind::RandomSmooth => {
            let d = with_peak(random_band_limited(grid, dim, IC_MAX_K, 1.0, seed), 1.0);
            (d, smooth_velocity(grid, amplitude, seed))
        }
        IcKind::DefectPair => {
            if dim != 2 {
                return Err(Error::InvalidParam("defect_pair is only defined in 2D".into()));
            }
            let core = 0.05;
            let plus = [0.35, 0.5];
            let minus = [0.65, 0.5];
            let d = VectorField::from_fn(grid, 2, |x, out| {
                let (dx1, dy1) = (x[0] - plus[0], x[1] - plus[1]);
                let (dx2, dy2) = (x[0] - minus[0], x[1] - minus[1]);
                let theta = dy1.atan2(dx1) - dy2.atan2(dx2);
                let r = (dx1.hypot(dy1)).min(dx2.hypot(dy2));
                let len = (r / core).tanh();
                out[0] = len * theta.cos();
                out[1] = len * theta.sin();
            });
            let u = VectorField::from_fn(grid, 2, |x, out| {
                out[0] = amplitude * (2.0 * PI * x[1]).sin();
                out[1] = 0.0;
            });
            (d.to_spectral()?, u.to_spectral()?)
        }
    };
    StepState::from_spectral(d.truncate(), u.truncate().leray()?, 0.0)
}
