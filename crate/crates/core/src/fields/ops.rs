//! Real-space entry points for the spectral operators.
//!
//! Each operator transforms its input, acts mode-wise, and transforms back.
//! Derivatives are exact for the trigonometric interpolant; Nyquist-mode
//! derivatives are zero.

use super::field::{SpectralField, VectorField};
use crate::error::{Error, Result};

pub fn forward_transform(f: &VectorField) -> Result<SpectralField> {
    f.to_spectral()
}

pub fn inverse_transform(f: &SpectralField) -> VectorField {
    f.to_real()
}

/// `(∇f)_{ij} = ∂f_i/∂x_j`, stored at component `i * dim + j`.
pub fn gradient(f: &VectorField) -> Result<VectorField> {
    Ok(f.to_spectral()?.gradient().to_real())
}

/// `(div M)_i = Σ_j ∂M_{ij}/∂x_j`. A vector field yields a scalar field.
pub fn divergence(m: &VectorField) -> Result<VectorField> {
    Ok(m.to_spectral()?.divergence()?.to_real())
}

pub fn laplacian(f: &VectorField) -> Result<VectorField> {
    Ok(f.to_spectral()?.laplacian().to_real())
}

/// Symmetric and skew parts of the velocity gradient, `(Du, Wu)`.
pub fn sym_skew_gradient(u: &VectorField) -> Result<(VectorField, VectorField)> {
    let dim = u.grid().dim();
    if u.components() != dim {
        return Err(Error::Shape(format!(
            "expected a {dim}-component velocity, got {}",
            u.components()
        )));
    }
    let g = gradient(u)?;
    Ok(split_sym_skew(&g, dim))
}

pub(crate) fn split_sym_skew(g: &VectorField, dim: usize) -> (VectorField, VectorField) {
    let mut sym = VectorField::zeros(*g.grid(), dim * dim);
    let mut skew = VectorField::zeros(*g.grid(), dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let gij = g.component(i * dim + j);
            let gji = g.component(j * dim + i);
            for (p, (a, b)) in gij.iter().zip(gji).enumerate() {
                sym.component_mut(i * dim + j)[p] = 0.5 * (a + b);
                skew.component_mut(i * dim + j)[p] = 0.5 * (a - b);
            }
        }
    }
    (sym, skew)
}

/// Projection onto solenoidal, zero-mean vector fields.
pub fn leray_project(w: &VectorField) -> Result<VectorField> {
    Ok(w.to_spectral()?.leray()?.to_real())
}

/// Pointwise product of `factors` evaluated on the padded grid and projected
/// back onto the Galerkin band.
///
/// Factors are scalar (one component) or share a common component count;
/// scalar factors broadcast. With `require_exact`, the grid's padding must
/// resolve the product degree so the result is the exact L² projection.
pub fn multiply_dealiased(factors: &[&VectorField], require_exact: bool) -> Result<VectorField> {
    if factors.is_empty() || factors.len() > 5 {
        return Err(Error::Shape(format!(
            "expected 1 to 5 factors, got {}",
            factors.len()
        )));
    }
    let spectral = factors
        .iter()
        .map(|f| f.to_spectral())
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&SpectralField> = spectral.iter().collect();
    Ok(product(&refs, require_exact)?.to_real())
}

/// Spectral-level counterpart of [`multiply_dealiased`].
pub fn product(factors: &[&SpectralField], require_exact: bool) -> Result<SpectralField> {
    let grid = *factors[0].grid();
    let dealias = grid.dealias();
    if require_exact && factors.len() > dealias.exact_degree() {
        return Err(Error::InsufficientPadding {
            padding: format!("{}", dealias.padding_factor()),
            degree: factors.len(),
        });
    }
    let comps = factors.iter().map(|f| f.components()).max().unwrap_or(1);
    for f in factors {
        if *f.grid() != grid {
            return Err(Error::Shape("factors live on different grids".into()));
        }
        if f.components() != 1 && f.components() != comps {
            return Err(Error::Shape(format!(
                "factor with {} components cannot broadcast to {comps}",
                f.components()
            )));
        }
    }
    let padded: Vec<Vec<Vec<f64>>> = factors.iter().map(|f| f.to_padded()).collect();
    let len = grid.padded_len();
    let mut out = vec![vec![1.0; len]; comps];
    for (c, o) in out.iter_mut().enumerate() {
        for f in &padded {
            let src = if f.len() == 1 { &f[0] } else { &f[c] };
            for (a, b) in o.iter_mut().zip(src) {
                *a *= b;
            }
        }
    }
    Ok(SpectralField::from_padded(grid, &out))
}
