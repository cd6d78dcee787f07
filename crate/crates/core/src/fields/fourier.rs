//! Multi-dimensional FFTs on the native and padded grids.
//!
//! Coefficients are normalized so that the `k = 0` entry is the mean of the
//! samples: `f(x) = sum_k c_k exp(2 pi i k.x)`. Real fields are transformed
//! two at a time by packing them into the real and imaginary parts of one
//! complex array.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{signed_wavenumber, unravel, GridSpec};

type Plan = Arc<dyn Fft<f64>>;

struct Plans {
    fwd: Plan,
    inv: Plan,
}

impl Plans {
    fn new(planner: &mut FftPlanner<f64>, size: usize) -> Self {
        Plans {
            fwd: planner.plan_fft_forward(size),
            inv: planner.plan_fft_inverse(size),
        }
    }
}

/// FFT engine for one [`GridSpec`]. Obtain through [`Fourier::for_grid`].
pub struct Fourier {
    grid: GridSpec,
    native: Plans,
    padded: Plans,
    /// native flat index -> padded flat index, `None` for Nyquist modes.
    pad_map: Vec<Option<usize>>,
    /// native flat index is in the Galerkin band (no Nyquist component).
    in_band: Vec<bool>,
    /// flat index of the negated wavenumber, native and padded grids.
    mirror_native: Vec<usize>,
    mirror_padded: Vec<usize>,
    /// physical derivative wavevector 2 pi k with Nyquist components zeroed.
    dk: Vec<[f64; 3]>,
}

fn cache() -> &'static Mutex<HashMap<GridSpec, Arc<Fourier>>> {
    static CACHE: OnceLock<Mutex<HashMap<GridSpec, Arc<Fourier>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Fourier {
    /// Shared engine for `grid`; plans are built once per grid.
    pub fn for_grid(grid: &GridSpec) -> Arc<Fourier> {
        let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
        map.entry(*grid)
            .or_insert_with(|| Arc::new(Fourier::build(*grid)))
            .clone()
    }

    fn build(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        let m = grid.padded_n();
        let dim = grid.dim();
        let native = Plans::new(&mut planner, n);
        let padded = Plans::new(&mut planner, m);
        let mut pad_map = Vec::with_capacity(grid.len());
        let mut in_band = Vec::with_capacity(grid.len());
        let mut dk = Vec::with_capacity(grid.len());
        for flat in 0..grid.len() {
            let idx = unravel(flat, n, dim);
            let mut kv = [0.0; 3];
            for a in 0..dim {
                if idx[a] != n / 2 {
                    kv[a] = 2.0 * PI * signed_wavenumber(idx[a], n) as f64;
                }
            }
            dk.push(kv);
            let nyq = idx[..dim].iter().any(|&i| i == n / 2);
            in_band.push(!nyq);
            if nyq {
                pad_map.push(None);
                continue;
            }
            let mut p = 0usize;
            for &i in &idx[..dim] {
                let k = signed_wavenumber(i, n);
                let j = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                p = p * m + j;
            }
            pad_map.push(Some(p));
        }
        Fourier {
            grid,
            native,
            padded,
            pad_map,
            in_band,
            mirror_native: mirror_table(n, dim),
            mirror_padded: mirror_table(m, dim),
            dk,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Derivative wavevector `2 pi k` of native flat index `i` (Nyquist
    /// components zeroed).
    #[inline]
    pub fn dk(&self, i: usize) -> [f64; 3] {
        self.dk[i]
    }

    /// Squared length of [`Fourier::dk`].
    #[inline]
    pub fn dk2(&self, i: usize) -> f64 {
        let k = self.dk[i];
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Whether native flat index `i` lies in the Galerkin band.
    pub fn in_band(&self, i: usize) -> bool {
        self.in_band[i]
    }

    fn transform(&self, data: &mut [Complex64], padded: bool, inverse: bool) {
        let (size, plans) = if padded {
            (self.grid.padded_n(), &self.padded)
        } else {
            (self.grid.n(), &self.native)
        };
        let plan = if inverse { &plans.inv } else { &plans.fwd };
        fft_nd(data, size, self.grid.dim(), plan.as_ref());
    }

    /// Forward transforms of real sample arrays on the native grid.
    pub fn analyze(&self, reals: &[&[f64]]) -> Vec<Vec<Complex64>> {
        self.analyze_impl(reals, false)
    }

    /// Inverse transforms of coefficient arrays onto the native grid.
    pub fn synthesize(&self, coeffs: &[&[Complex64]]) -> Vec<Vec<f64>> {
        self.synthesize_impl(coeffs, false)
    }

    /// Evaluates band-limited coefficient arrays on the padded grid.
    /// Nyquist modes are dropped.
    pub fn to_padded(&self, coeffs: &[&[Complex64]]) -> Vec<Vec<f64>> {
        self.synthesize_impl(coeffs, true)
    }

    /// Transforms padded-grid samples and truncates to the Galerkin band.
    pub fn from_padded(&self, reals: &[&[f64]]) -> Vec<Vec<Complex64>> {
        self.analyze_impl(reals, true)
    }

    fn synthesize_impl(&self, coeffs: &[&[Complex64]], padded: bool) -> Vec<Vec<f64>> {
        let size = if padded {
            self.grid.padded_len()
        } else {
            self.grid.len()
        };
        let mut out = Vec::with_capacity(coeffs.len());
        for pair in coeffs.chunks(2) {
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            let i = Complex64::new(0.0, 1.0);
            for (slot, c) in pair.iter().enumerate() {
                let w = if slot == 0 { Complex64::new(1.0, 0.0) } else { i };
                if padded {
                    for (src, dst) in self.pad_map.iter().enumerate() {
                        if let Some(dst) = dst {
                            buf[*dst] += w * c[src];
                        }
                    }
                } else {
                    for (b, v) in buf.iter_mut().zip(c.iter()) {
                        *b += w * v;
                    }
                }
            }
            self.transform(&mut buf, padded, true);
            out.push(buf.iter().map(|z| z.re).collect());
            if pair.len() == 2 {
                out.push(buf.iter().map(|z| z.im).collect());
            }
        }
        out
    }

    fn analyze_impl(&self, reals: &[&[f64]], padded: bool) -> Vec<Vec<Complex64>> {
        let (len, mirror) = if padded {
            (self.grid.padded_len(), &self.mirror_padded)
        } else {
            (self.grid.len(), &self.mirror_native)
        };
        let scale = 1.0 / len as f64;
        let zero = Complex64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(reals.len());
        for pair in reals.chunks(2) {
            let mut buf: Vec<Complex64> = if pair.len() == 2 {
                pair[0]
                    .iter()
                    .zip(pair[1].iter())
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect()
            } else {
                pair[0].iter().map(|&a| Complex64::new(a, 0.0)).collect()
            };
            self.transform(&mut buf, padded, false);
            let sources: Vec<Option<usize>> = if padded {
                self.pad_map.clone()
            } else {
                (0..len).map(Some).collect()
            };
            if pair.len() == 2 {
                let mut a = Vec::with_capacity(sources.len());
                let mut b = Vec::with_capacity(sources.len());
                for src in &sources {
                    match src {
                        Some(f) => {
                            let z = buf[*f];
                            let zm = buf[mirror[*f]].conj();
                            a.push((z + zm) * (0.5 * scale));
                            b.push((z - zm) * Complex64::new(0.0, -0.5 * scale));
                        }
                        None => {
                            a.push(zero);
                            b.push(zero);
                        }
                    }
                }
                out.push(a);
                out.push(b);
            } else {
                out.push(
                    sources
                        .iter()
                        .map(|src| src.map_or(zero, |f| buf[f] * scale))
                        .collect(),
                );
            }
        }
        out
    }
}

fn mirror_table(n: usize, dim: usize) -> Vec<usize> {
    (0..n.pow(dim as u32))
        .map(|flat| {
            let idx = unravel(flat, n, dim);
            idx[..dim]
                .iter()
                .fold(0usize, |acc, &i| acc * n + (n - i) % n)
        })
        .collect()
}

/// In-place unnormalized FFT along every axis of a `size^dim` array.
fn fft_nd(data: &mut [Complex64], size: usize, dim: usize, plan: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    // last axis is contiguous
    plan.process_with_scratch(data, &mut scratch);
    if dim == 1 {
        return;
    }
    let total = data.len();
    let mut line = vec![Complex64::new(0.0, 0.0); total];
    for axis in 0..dim - 1 {
        let stride = size.pow((dim - 1 - axis) as u32);
        let block = stride * size;
        // gather every line along `axis` into contiguous storage
        let mut l = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for j in 0..size {
                    line[l * size + j] = data[base + j * stride];
                }
                l += 1;
            }
        }
        plan.process_with_scratch(&mut line, &mut scratch);
        let mut l = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for j in 0..size {
                    data[base + j * stride] = line[l * size + j];
                }
                l += 1;
            }
        }
    }
}
