//! Periodic grid, transforms, spectral differential operators, Leray
//! projection and dealiased products on the unit torus.

mod field;
mod fourier;
mod grid;
mod ops;
mod random;

pub use field::{SpectralField, VectorField};
pub use fourier::Fourier;
pub use grid::{Dealias, GridSpec};
pub use ops::{
    divergence, forward_transform, gradient, inverse_transform, laplacian, leray_project,
    multiply_dealiased, product, sym_skew_gradient,
};
pub use random::{random_band_limited, random_solenoidal};
