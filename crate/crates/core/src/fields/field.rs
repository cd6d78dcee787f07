use std::sync::Arc;

use num_complex::Complex64;

use super::fourier::Fourier;
use super::grid::GridSpec;
use crate::error::{non_finite, Error, Result};

/// Real samples of a field with `components` entries per grid point.
///
/// Storage is component-major; within a component, row-major with the last
/// axis fastest. Tensor fields store entry `(i, j)` as component `i * dim + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: GridSpec,
    components: usize,
    values: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        VectorField {
            grid,
            components,
            values: vec![0.0; grid.len() * components],
        }
    }

    pub fn from_values(grid: GridSpec, components: usize, values: Vec<f64>) -> Result<Self> {
        if components == 0 || values.len() != grid.len() * components {
            return Err(Error::Shape(format!(
                "expected {} x {} samples, got {}",
                components,
                grid.len(),
                values.len()
            )));
        }
        Ok(VectorField {
            grid,
            components,
            values,
        })
    }

    /// Samples `f(x)` at every grid point; `f` writes `components` values.
    pub fn from_fn(grid: GridSpec, components: usize, f: impl Fn([f64; 3], &mut [f64])) -> Self {
        let len = grid.len();
        let mut values = vec![0.0; len * components];
        let mut buf = vec![0.0; components];
        for p in 0..len {
            f(grid.coords(p), &mut buf);
            for (c, v) in buf.iter().enumerate() {
                values[c * len + p] = *v;
            }
        }
        VectorField {
            grid,
            components,
            values,
        }
    }

    /// A spatially uniform field.
    pub fn uniform(grid: GridSpec, value: &[f64]) -> Self {
        let c = value.to_vec();
        VectorField::from_fn(grid, value.len(), move |_, out| out.copy_from_slice(&c))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let len = self.grid.len();
        &self.values[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let len = self.grid.len();
        &mut self.values[c * len..(c + 1) * len]
    }

    /// Value of component `c` at grid point `p`.
    pub fn at(&self, c: usize, p: usize) -> f64 {
        self.values[c * self.grid.len() + p]
    }

    pub fn check_finite(&self, context: &str) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(non_finite(context))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest pointwise difference to `other`.
    pub fn max_diff(&self, other: &VectorField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `∫ f·g` over the unit torus by the trapezoid rule (grid mean).
    pub fn dot(&self, other: &VectorField) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        s / self.grid.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn to_spectral(&self) -> Result<SpectralField> {
        self.check_finite("forward transform input")?;
        let fourier = Fourier::for_grid(&self.grid);
        let comps: Vec<&[f64]> = (0..self.components).map(|c| self.component(c)).collect();
        let coeffs = fourier.analyze(&comps);
        Ok(SpectralField::from_components(self.grid, fourier, coeffs))
    }

    pub(crate) fn same_shape(&self, other: &VectorField) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(Error::Shape(format!(
                "{} components on n={} vs {} components on n={}",
                self.components,
                self.grid.n(),
                other.components,
                other.grid.n()
            )));
        }
        Ok(())
    }
}

/// Fourier coefficients of a real field, indexed by FFT order on the native
/// grid. The `k = 0` coefficient is the mean.
#[derive(Clone)]
pub struct SpectralField {
    grid: GridSpec,
    fourier: Arc<Fourier>,
    components: usize,
    coeffs: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralField")
            .field("grid", &self.grid)
            .field("components", &self.components)
            .finish_non_exhaustive()
    }
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.components == other.components && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        SpectralField {
            grid,
            fourier: Fourier::for_grid(&grid),
            components,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len() * components],
        }
    }

    pub(crate) fn from_components(
        grid: GridSpec,
        fourier: Arc<Fourier>,
        comps: Vec<Vec<Complex64>>,
    ) -> Self {
        let components = comps.len();
        let mut coeffs = Vec::with_capacity(grid.len() * components);
        for c in comps {
            coeffs.extend(c);
        }
        SpectralField {
            grid,
            fourier,
            components,
            coeffs,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn fourier(&self) -> &Arc<Fourier> {
        &self.fourier
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.coeffs[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.grid.len();
        &mut self.coeffs[c * len..(c + 1) * len]
    }

    fn component_slices(&self) -> Vec<&[Complex64]> {
        (0..self.components).map(|c| self.component(c)).collect()
    }

    /// Coefficient of component `c` at integer wavevector `k`.
    pub fn coeff_at(&self, c: usize, k: [i64; 3]) -> Complex64 {
        let n = self.grid.n() as i64;
        let flat = k[..self.grid.dim()]
            .iter()
            .fold(0usize, |acc, &ki| acc * n as usize + ki.rem_euclid(n) as usize);
        self.component(c)[flat]
    }

    pub fn to_real(&self) -> VectorField {
        let comps = self.fourier.synthesize(&self.component_slices());
        let mut values = Vec::with_capacity(self.grid.len() * self.components);
        for c in comps {
            values.extend(c);
        }
        VectorField {
            grid: self.grid,
            components: self.components,
            values,
        }
    }

    /// Component samples on the padded product grid.
    pub fn to_padded(&self) -> Vec<Vec<f64>> {
        self.fourier.to_padded(&self.component_slices())
    }

    /// Galerkin projection of padded-grid samples.
    pub fn from_padded(grid: GridSpec, samples: &[Vec<f64>]) -> Self {
        let fourier = Fourier::for_grid(&grid);
        let refs: Vec<&[f64]> = samples.iter().map(|v| v.as_slice()).collect();
        let comps = fourier.from_padded(&refs);
        SpectralField::from_components(grid, fourier, comps)
    }

    fn map_modes(&self, out_components: usize, f: impl Fn(usize, &Fourier, &[Complex64], &mut [Complex64])) -> Self {
        // f(flat, fourier, input coefficients at flat, output coefficients at flat)
        let len = self.grid.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len * out_components];
        let mut input = vec![Complex64::new(0.0, 0.0); self.components];
        let mut output = vec![Complex64::new(0.0, 0.0); out_components];
        for p in 0..len {
            for c in 0..self.components {
                input[c] = self.coeffs[c * len + p];
            }
            output.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
            f(p, &self.fourier, &input, &mut output);
            for c in 0..out_components {
                coeffs[c * len + p] = output[c];
            }
        }
        SpectralField {
            grid: self.grid,
            fourier: self.fourier.clone(),
            components: out_components,
            coeffs,
        }
    }

    /// `∂f/∂x_axis` for every component.
    pub fn derivative(&self, axis: usize) -> Self {
        self.map_modes(self.components, |p, fo, inp, out| {
            let ik = Complex64::new(0.0, fo.dk(p)[axis]);
            for (o, i) in out.iter_mut().zip(inp) {
                *o = ik * i;
            }
        })
    }

    /// Jacobian `(∇f)_{ij} = ∂f_i/∂x_j`, stored at component `i * dim + j`.
    pub fn gradient(&self) -> Self {
        let dim = self.grid.dim();
        self.map_modes(self.components * dim, |p, fo, inp, out| {
            let k = fo.dk(p);
            for (i, v) in inp.iter().enumerate() {
                for j in 0..dim {
                    out[i * dim + j] = Complex64::new(0.0, k[j]) * v;
                }
            }
        })
    }

    /// `(div M)_i = Σ_j ∂M_{ij}/∂x_j`; the trailing index has length `dim`.
    pub fn divergence(&self) -> Result<Self> {
        let dim = self.grid.dim();
        if self.components % dim != 0 {
            return Err(Error::Shape(format!(
                "divergence needs a multiple of {dim} components, got {}",
                self.components
            )));
        }
        Ok(self.map_modes(self.components / dim, |p, fo, inp, out| {
            let k = fo.dk(p);
            for (i, o) in out.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    s += Complex64::new(0.0, k[j]) * inp[i * dim + j];
                }
                *o = s;
            }
        }))
    }

    pub fn laplacian(&self) -> Self {
        self.map_modes(self.components, |p, fo, inp, out| {
            let s = -fo.dk2(p);
            for (o, i) in out.iter_mut().zip(inp) {
                *o = i * s;
            }
        })
    }

    /// Multiplies every mode by `symbol(|2 pi k|^2)`.
    pub fn apply_radial(&self, symbol: impl Fn(f64) -> f64) -> Self {
        self.map_modes(self.components, |p, fo, inp, out| {
            let s = symbol(fo.dk2(p));
            for (o, i) in out.iter_mut().zip(inp) {
                *o = i * s;
            }
        })
    }

    /// Orthogonal projection onto solenoidal zero-mean vector fields.
    pub fn leray(&self) -> Result<Self> {
        let dim = self.grid.dim();
        if self.components != dim {
            return Err(Error::Shape(format!(
                "Leray projection needs {dim} components, got {}",
                self.components
            )));
        }
        Ok(self.map_modes(dim, |p, fo, inp, out| {
            if p == 0 {
                return;
            }
            let k = fo.dk(p);
            let k2 = fo.dk2(p);
            if k2 == 0.0 {
                out.copy_from_slice(inp);
                return;
            }
            let mut kw = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                kw += inp[j] * k[j];
            }
            for i in 0..dim {
                out[i] = inp[i] - kw * (k[i] / k2);
            }
        }))
    }

    /// Galerkin projection: removes every mode with a Nyquist component.
    pub fn truncate(&self) -> Self {
        let fo = self.fourier.clone();
        let mut out = self.clone();
        let len = self.grid.len();
        for (i, v) in out.coeffs.iter_mut().enumerate() {
            if !fo.in_band(i % len) {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest mode-wise divergence `|2 pi k · f(k)|`.
    pub fn max_divergence(&self) -> f64 {
        let dim = self.grid.dim();
        let len = self.grid.len();
        (0..len)
            .map(|p| {
                let k = self.fourier.dk(p);
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    s += self.coeffs[j * len + p] * k[j];
                }
                s.norm()
            })
            .fold(0.0, f64::max)
    }

    /// `∫ f·g` over the unit torus via Parseval.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `Σ_k weight(|2 pi k|^2) |f(k)|^2` over all components.
    pub fn weighted_norm_sq(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let len = self.grid.len();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| weight(self.fourier.dk2(i % len)) * c.norm_sqr())
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SpectralField) -> Self {
        let mut out = self.clone();
        out.axpy_mut(s, other);
        out
    }

    pub fn axpy_mut(&mut self, s: f64, other: &SpectralField) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        self.axpy(-1.0, other)
    }

    /// Component-wise view of two coefficient blocks as a single field.
    pub fn concat(parts: &[&SpectralField]) -> Self {
        let grid = parts[0].grid;
        let mut coeffs = Vec::new();
        let mut components = 0;
        for p in parts {
            coeffs.extend_from_slice(&p.coeffs);
            components += p.components;
        }
        SpectralField {
            grid,
            fourier: parts[0].fourier.clone(),
            components,
            coeffs,
        }
    }

    /// Components `start..start + count` as a new field.
    pub fn slice(&self, start: usize, count: usize) -> Self {
        let len = self.grid.len();
        SpectralField {
            grid: self.grid,
            fourier: self.fourier.clone(),
            components: count,
            coeffs: self.coeffs[start * len..(start + count) * len].to_vec(),
        }
    }
}
