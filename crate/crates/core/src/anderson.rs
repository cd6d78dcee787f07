//! Anderson acceleration of a fixed-point map `x ↦ x + f(x)`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) struct Anderson {
    depth: usize,
    prev_x: Option<Vec<Complex64>>,
    prev_f: Option<Vec<Complex64>>,
    dx: VecDeque<Vec<Complex64>>,
    df: VecDeque<Vec<Complex64>>,
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Anderson {
    pub fn new(depth: usize) -> Self {
        Anderson {
            depth,
            prev_x: None,
            prev_f: None,
            dx: VecDeque::new(),
            df: VecDeque::new(),
        }
    }

    pub fn reset(&mut self) {
        self.prev_x = None;
        self.prev_f = None;
        self.dx.clear();
        self.df.clear();
    }

    /// Next iterate from the current point `x` and its correction `f`
    /// (`x + f` is the plain fixed-point update). `beta` is the mixing
    /// parameter.
    pub fn step(&mut self, x: &[Complex64], f: &[Complex64], beta: f64) -> Vec<Complex64> {
        if self.depth > 0 {
            if let (Some(px), Some(pf)) = (&self.prev_x, &self.prev_f) {
                self.dx.push_back(sub(x, px));
                self.df.push_back(sub(f, pf));
                if self.dx.len() > self.depth {
                    self.dx.pop_front();
                    self.df.pop_front();
                }
            }
            self.prev_x = Some(x.to_vec());
            self.prev_f = Some(f.to_vec());
        }

        let m = self.df.len();
        if m == 0 {
            return x.iter().zip(f).map(|(a, b)| a + b * beta).collect();
        }
        // least squares min ||f - DF g|| over real g, complex entries split
        let rows = 2 * f.len();
        let mat = DMatrix::from_fn(rows, m, |r, c| {
            let z = self.df[c][r / 2];
            if r % 2 == 0 {
                z.re
            } else {
                z.im
            }
        });
        let rhs = DVector::from_fn(rows, |r, _| {
            let z = f[r / 2];
            if r % 2 == 0 {
                z.re
            } else {
                z.im
            }
        });
        let gamma = match mat.svd(true, true).solve(&rhs, 1e-13) {
            Ok(g) => g,
            Err(_) => {
                self.reset();
                return x.iter().zip(f).map(|(a, b)| a + b * beta).collect();
            }
        };
        let mut out: Vec<Complex64> = x.iter().zip(f).map(|(a, b)| a + b * beta).collect();
        for c in 0..m {
            let g = gamma[c];
            if g == 0.0 {
                continue;
            }
            for ((o, ddx), ddf) in out.iter_mut().zip(&self.dx[c]).zip(&self.df[c]) {
                *o -= (ddx + ddf * beta) * g;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_linear_fixed_point() {
        // x = A x + b with a slowly contracting diagonal A
        let a = [0.9, 0.5, -0.8, 0.95];
        let b = [1.0, -2.0, 0.5, 0.1];
        let exact: Vec<f64> = a.iter().zip(&b).map(|(a, b)| b / (1.0 - a)).collect();
        let mut x = vec![Complex64::new(0.0, 0.0); 4];
        let mut acc = Anderson::new(5);
        for _ in 0..12 {
            let f: Vec<Complex64> = (0..4)
                .map(|i| Complex64::new(a[i] * x[i].re + b[i] - x[i].re, 0.0))
                .collect();
            x = acc.step(&x, &f, 1.0);
        }
        for i in 0..4 {
            assert!((x[i].re - exact[i]).abs() < 1e-10, "{} {}", x[i], exact[i]);
        }
    }
}
