//! Brute-force reference implementations for tiny grids.
//!
//! Nothing here calls the FFT engine or the spectral operators: transforms
//! are direct DFT sums, derivatives are dense matrices assembled from the
//! DFT definition, and products are exact convolutions of coefficient maps.
//! Inputs and outputs are plain samples so the production path can be
//! compared against it end to end.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::energetics::{EnergyBreakdown, ModelParams};
use crate::error::{Error, Result};
use crate::fields::{GridSpec, VectorField};
use crate::stepper::Residuals;

/// Largest `n` accepted by the dense builders.
pub const MAX_DENSE_N: usize = 8;
/// Largest `n` accepted by [`quadrature_energy`].
pub const MAX_QUADRATURE_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `∂/∂x_axis` acting on a scalar field.
    Gradient(usize),
    /// Vector field to scalar divergence.
    Divergence,
    /// Scalar Laplacian.
    Laplacian,
    /// Leray projector on vector fields.
    Leray,
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn wavenumbers(n: usize) -> Vec<i64> {
    (0..n as i64)
        .map(|i| if i <= n as i64 / 2 { i } else { i - n as i64 })
        .collect()
}

/// All integer wavevectors of the grid, `(-n/2, n/2]^dim`.
fn all_modes(grid: &GridSpec) -> Vec<[i64; 3]> {
    let ks = wavenumbers(grid.n());
    let mut out = Vec::new();
    match grid.dim() {
        2 => {
            for &a in &ks {
                for &b in &ks {
                    out.push([a, b, 0]);
                }
            }
        }
        _ => {
            for &a in &ks {
                for &b in &ks {
                    for &c in &ks {
                        out.push([a, b, c]);
                    }
                }
            }
        }
    }
    out
}

/// Derivative wavevector: Nyquist components carry no derivative.
fn deriv_k(k: [i64; 3], n: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    for a in 0..3 {
        if k[a].unsigned_abs() as usize != n / 2 {
            out[a] = 2.0 * PI * k[a] as f64;
        }
    }
    out
}

fn point_index(grid: &GridSpec, flat: usize) -> [i64; 3] {
    let idx = grid.unravel(flat);
    [idx[0] as i64, idx[1] as i64, idx[2] as i64]
}

/// `(1/N) Σ_k symbol(k) exp(2πi k·(x - y))` for every pair of points.
fn circulant(grid: &GridSpec, symbol: impl Fn([i64; 3]) -> Complex64) -> DenseMatrix {
    let n = grid.n();
    let len = grid.len();
    let modes = all_modes(grid);
    let symbols: Vec<Complex64> = modes.iter().map(|&k| symbol(k)).collect();
    // the kernel depends only on the displacement x - y
    let kernel: Vec<f64> = (0..len)
        .map(|disp| {
            let r = point_index(grid, disp);
            let mut s = Complex64::new(0.0, 0.0);
            for (k, sym) in modes.iter().zip(&symbols) {
                let phase = 2.0 * PI * (k[0] * r[0] + k[1] * r[1] + k[2] * r[2]) as f64 / n as f64;
                s += sym * Complex64::from_polar(1.0, phase);
            }
            s.re / len as f64
        })
        .collect();
    let mut m = DenseMatrix::zeros(len, len);
    for x in 0..len {
        let xi = point_index(grid, x);
        for y in 0..len {
            let yi = point_index(grid, y);
            let mut disp = 0usize;
            for a in 0..grid.dim() {
                disp = disp * n + (xi[a] - yi[a]).rem_euclid(n as i64) as usize;
            }
            m.set(x, y, kernel[disp]);
        }
    }
    m
}

fn block(grid: &GridSpec, rows: usize, cols: usize, parts: &[(usize, usize, DenseMatrix)]) -> DenseMatrix {
    let len = grid.len();
    let mut out = DenseMatrix::zeros(rows * len, cols * len);
    for (br, bc, m) in parts {
        for r in 0..len {
            for c in 0..len {
                out.set(br * len + r, bc * len + c, m.get(r, c));
            }
        }
    }
    out
}

fn build_matrix(grid: &GridSpec, kind: OperatorKind) -> DenseMatrix {
    let n = grid.n();
    let dim = grid.dim();
    let grad = |axis: usize| circulant(grid, move |k| Complex64::new(0.0, deriv_k(k, n)[axis]));
    match kind {
        OperatorKind::Gradient(axis) => grad(axis),
        OperatorKind::Laplacian => circulant(grid, |k| {
            let kk = deriv_k(k, n);
            Complex64::new(-(kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2]), 0.0)
        }),
        OperatorKind::Divergence => {
            let parts: Vec<_> = (0..dim).map(|j| (0, j, grad(j))).collect();
            block(grid, 1, dim, &parts)
        }
        OperatorKind::Leray => {
            let mut parts = Vec::new();
            for a in 0..dim {
                for b in 0..dim {
                    let m = circulant(grid, move |k| {
                        if k == [0, 0, 0] {
                            return Complex64::new(0.0, 0.0);
                        }
                        let kk = deriv_k(k, n);
                        let k2 = kk[0] * kk[0] + kk[1] * kk[1] + kk[2] * kk[2];
                        let delta = if a == b { 1.0 } else { 0.0 };
                        if k2 == 0.0 {
                            Complex64::new(delta, 0.0)
                        } else {
                            Complex64::new(delta - kk[a] * kk[b] / k2, 0.0)
                        }
                    });
                    parts.push((a, b, m));
                }
            }
            block(grid, dim, dim, &parts)
        }
    }
}

/// Dense matrix of a spectral operator, acting on flattened samples
/// (component-major). Limited to `n <= 8`.
pub fn dense_operator_matrix(grid: &GridSpec, kind: OperatorKind) -> Result<DenseMatrix> {
    if grid.n() > MAX_DENSE_N {
        return Err(Error::OracleTooLarge {
            n: grid.n(),
            max: MAX_DENSE_N,
        });
    }
    if let OperatorKind::Gradient(axis) = kind {
        if axis >= grid.dim() {
            return Err(Error::Shape(format!("axis {axis} out of range")));
        }
    }
    Ok(build_matrix(grid, kind))
}

/// Trigonometric polynomial as a sparse map from wavevector to coefficient.
#[derive(Clone, Debug, Default)]
struct Trig(BTreeMap<[i64; 3], Complex64>);

impl Trig {
    fn mode(k: [i64; 3], c: Complex64) -> Trig {
        let mut m = BTreeMap::new();
        m.insert(k, c);
        Trig(m)
    }

    fn get(&self, k: [i64; 3]) -> Complex64 {
        self.0.get(&k).copied().unwrap_or_default()
    }

    fn add_scaled(&mut self, other: &Trig, s: f64) {
        for (k, v) in &other.0 {
            *self.0.entry(*k).or_default() += v * s;
        }
    }

    fn plus(&self, other: &Trig, s: f64) -> Trig {
        let mut out = self.clone();
        out.add_scaled(other, s);
        out
    }

    fn scale(&self, s: f64) -> Trig {
        Trig(self.0.iter().map(|(k, v)| (*k, v * s)).collect())
    }

    /// Exact derivative along `axis` (no band limit applies to products).
    fn deriv(&self, axis: usize) -> Trig {
        Trig(
            self.0
                .iter()
                .map(|(k, v)| (*k, v * Complex64::new(0.0, 2.0 * PI * k[axis] as f64)))
                .collect(),
        )
    }

    fn mul(&self, other: &Trig) -> Trig {
        let mut out: BTreeMap<[i64; 3], Complex64> = BTreeMap::new();
        for (ka, a) in &self.0 {
            for (kb, b) in &other.0 {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                *out.entry(k).or_default() += a * b;
            }
        }
        Trig(out)
    }

    /// `∫ f g` over the unit torus.
    fn pair(&self, other: &Trig) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (k, v) in &self.0 {
            s += v * other.get([-k[0], -k[1], -k[2]]);
        }
        s
    }

    /// Keep modes with `|k_j| < n/2`.
    fn truncate(&self, n: usize) -> Trig {
        let lim = (n / 2) as i64;
        Trig(
            self.0
                .iter()
                .filter(|(k, _)| k.iter().all(|&ki| ki.abs() < lim))
                .map(|(k, v)| (*k, *v))
                .collect(),
        )
    }

    fn norm_sq(&self) -> f64 {
        self.0.values().map(|v| v.norm_sqr()).sum()
    }
}

fn band_modes(grid: &GridSpec) -> Vec<[i64; 3]> {
    let lim = (grid.n() / 2) as i64;
    all_modes(grid)
        .into_iter()
        .filter(|k| k.iter().all(|&ki| ki.abs() < lim))
        .collect()
}

/// In-band coefficients of each component by direct DFT sums.
fn dft(f: &VectorField) -> Vec<Trig> {
    let grid = *f.grid();
    let n = grid.n();
    let len = grid.len();
    let modes = band_modes(&grid);
    (0..f.components())
        .map(|c| {
            let vals = f.component(c);
            let mut t = BTreeMap::new();
            for k in &modes {
                let mut s = Complex64::new(0.0, 0.0);
                for (p, v) in vals.iter().enumerate() {
                    let x = point_index(&grid, p);
                    let phase = -2.0 * PI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) as f64 / n as f64;
                    s += Complex64::from_polar(*v, phase);
                }
                t.insert(*k, s / len as f64);
            }
            Trig(t)
        })
        .collect()
}

fn trig_norm(v: &[Trig]) -> f64 {
    v.iter().map(Trig::norm_sq).sum::<f64>().sqrt()
}

/// Energy by plain real-space means: gradients from the dense matrix on
/// the native grid, the quartic well on a grid refined threefold by direct
/// trigonometric synthesis.
pub fn quadrature_energy(d: &VectorField, u: &VectorField, params: &ModelParams) -> Result<EnergyBreakdown> {
    let grid = *d.grid();
    if grid.n() > MAX_QUADRATURE_N {
        return Err(Error::OracleTooLarge {
            n: grid.n(),
            max: MAX_QUADRATURE_N,
        });
    }
    let dim = grid.dim();
    let len = grid.len() as f64;
    let mut elastic = 0.0;
    for j in 0..dim {
        let g = build_matrix(&grid, OperatorKind::Gradient(j));
        for c in 0..d.components() {
            elastic += g.apply(d.component(c)).iter().map(|v| v * v).sum::<f64>();
        }
    }
    elastic *= 0.5 / len;
    let kinetic = 0.5 * params.rho * u.values().iter().map(|v| v * v).sum::<f64>() / len;

    let coeffs = dft(d);
    let fine = 3 * grid.n();
    let fine_len = fine.pow(dim as u32);
    let mut well = 0.0;
    for p in 0..fine_len {
        let mut idx = [0usize; 3];
        let mut rest = p;
        for a in (0..dim).rev() {
            idx[a] = rest % fine;
            rest /= fine;
        }
        let mut d2 = 0.0;
        for c in &coeffs {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, v) in &c.0 {
                let phase = 2.0 * PI * (k[0] * idx[0] as i64 + k[1] * idx[1] as i64 + k[2] * idx[2] as i64) as f64
                    / fine as f64;
                s += v * Complex64::from_polar(1.0, phase);
            }
            d2 += s.re * s.re;
        }
        well += (d2 - 1.0).powi(2) / (4.0 * params.gamma);
    }
    well /= fine_len as f64;
    Ok(EnergyBreakdown::new(elastic, well, kinetic))
}

/// Sample arrays describing one implicit step: previous level and candidate.
pub struct SchemeSamples<'a> {
    pub d_prev: &'a VectorField,
    pub u_prev: &'a VectorField,
    pub d: &'a VectorField,
    pub u: &'a VectorField,
    pub mu: &'a VectorField,
}

/// `θ·∇d + α div(θ⊗d) - (1-α) div(d⊗θ)` with exact products.
fn coupling_bracket(theta: &[Trig], d: &[Trig], alpha: f64, dim: usize) -> Vec<Trig> {
    (0..dim)
        .map(|i| {
            let mut out = Trig::default();
            for j in 0..dim {
                out.add_scaled(&theta[j].mul(&d[j].deriv(i)), 1.0);
                out.add_scaled(&theta[i].mul(&d[j]).deriv(j), alpha);
                out.add_scaled(&d[i].mul(&theta[j]).deriv(j), -(1.0 - alpha));
            }
            out
        })
        .collect()
}

/// Weak-form residuals of the time-discrete system, tested against every
/// basis mode of the Galerkin spaces. Limited to `n <= 8`.
///
/// Normalization matches [`crate::stepper::residual_fully_implicit`].
pub fn dense_scheme_residual(s: &SchemeSamples<'_>, params: &ModelParams) -> Result<Residuals> {
    let grid = *s.d.grid();
    if grid.n() > MAX_DENSE_N {
        return Err(Error::OracleTooLarge {
            n: grid.n(),
            max: MAX_DENSE_N,
        });
    }
    let n = grid.n();
    let dim = grid.dim();
    let (tau, alpha, eps, gamma, rho, eta) = (
        params.tau,
        params.alpha,
        params.epsilon,
        params.gamma,
        params.rho,
        params.eta,
    );
    let d = dft(s.d);
    let dp = dft(s.d_prev);
    let u = dft(s.u);
    let up = dft(s.u_prev);
    let mu = dft(s.mu);

    let v: Vec<Trig> = coupling_bracket(&mu, &d, alpha, dim)
        .iter()
        .map(|t| t.truncate(n))
        .collect();
    let w: Vec<Trig> = (0..dim).map(|i| u[i].plus(&v[i], 1.0)).collect();

    let d2 = (0..dim).fold(Trig::default(), |acc, j| acc.plus(&d[j].mul(&d[j]), 1.0));
    let f_plus: Vec<Trig> = d.iter().map(|dc| d2.mul(dc).scale(1.0 / gamma)).collect();
    let conv: Vec<Trig> = (0..dim)
        .map(|i| {
            (0..dim).fold(Trig::default(), |acc, j| acc.plus(&u[j].mul(&u[i].deriv(j)), 1.0))
        })
        .collect();

    let mut rd = 0.0;
    let mut rmu = 0.0;
    let mut ru = 0.0;
    for k in band_modes(&grid) {
        let nk = [-k[0], -k[1], -k[2]];
        let mut res_u = vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            // test function θ = e_c exp(-2πi k·x)
            let phi = Trig::mode(nk, Complex64::new(1.0, 0.0));
            let mut theta = vec![Trig::default(); dim];
            theta[c] = phi.clone();

            let bracket = coupling_bracket(&theta, &d, alpha, dim);
            let pairing: Complex64 = (0..dim).map(|i| w[i].pair(&bracket[i])).sum();
            let r = d[c].get(k) - dp[c].get(k) + pairing * tau + mu[c].get(k) * (eps * tau);
            rd += r.norm_sqr();

            let grad_pair: Complex64 = (0..dim).map(|j| d[c].deriv(j).pair(&phi.deriv(j))).sum();
            let r = mu[c].get(k) - grad_pair - f_plus[c].pair(&phi) + dp[c].get(k) / gamma;
            rmu += r.norm_sqr();

            // 2η ∫ Du : Dθ
            let mut visc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    let du_ij = u[i].deriv(j).plus(&u[j].deriv(i), 1.0).scale(0.5);
                    let dth_ij = theta[i].deriv(j).plus(&theta[j].deriv(i), 1.0).scale(0.5);
                    visc += du_ij.pair(&dth_ij) * (2.0 * eta);
                }
            }
            res_u[c] = (u[c].get(k) - up[c].get(k)) * rho + conv[c].pair(&phi) * (tau * rho) + visc * tau
                - v[c].pair(&phi) * tau;
        }
        // restrict to the solenoidal zero-mean test space at this mode
        if k == [0, 0, 0] {
            continue;
        }
        let kk = deriv_k(k, n);
        let k2: f64 = kk.iter().map(|x| x * x).sum();
        let kr: Complex64 = (0..dim).map(|j| res_u[j] * kk[j]).sum();
        for c in 0..dim {
            let proj = if k2 > 0.0 { res_u[c] - kr * (kk[c] / k2) } else { res_u[c] };
            ru += proj.norm_sqr();
        }
    }
    Ok(Residuals {
        r_d: rd.sqrt() / (1.0 + trig_norm(&d)),
        r_mu: rmu.sqrt() / (1.0 + trig_norm(&mu)),
        r_u: ru.sqrt() / (rho * (1.0 + trig_norm(&u))),
    })
}
