use std::fmt;

use crate::error::{Error, Result};

/// Dealiasing policy for pointwise products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dealias {
    /// Products evaluated on the native grid (padding 1).
    None,
    /// Two-thirds rule (padding 3/2). Exact for quadratic products.
    TwoThirds,
    /// Padding 3. Exact Galerkin projection for products up to degree 5.
    Exact,
}

impl Dealias {
    /// Padding factor as a rational `(num, den)`.
    pub fn padding(self) -> (usize, usize) {
        match self {
            Dealias::None => (1, 1),
            Dealias::TwoThirds => (3, 2),
            Dealias::Exact => (3, 1),
        }
    }

    pub fn padding_factor(self) -> f64 {
        let (a, b) = self.padding();
        a as f64 / b as f64
    }

    /// Highest product degree whose Galerkin projection is exact at this padding.
    ///
    /// A product of `p` band-limited factors is projected exactly when the
    /// padded size satisfies `M >= (p + 1) n / 2`.
    pub fn exact_degree(self) -> usize {
        let (a, b) = self.padding();
        // p + 1 <= 2a/b
        (2 * a) / b - 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Dealias::None => "none",
            Dealias::TwoThirds => "two_thirds",
            Dealias::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Dealias> {
        match s {
            "none" => Some(Dealias::None),
            "two_thirds" => Some(Dealias::TwoThirds),
            "exact" => Some(Dealias::Exact),
            _ => None,
        }
    }
}

impl fmt::Display for Dealias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform periodic grid on the unit torus `[0,1)^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    dealias: Dealias,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, dealias: Dealias) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n must be even and >= 4, got {n}"
            )));
        }
        Ok(GridSpec { dim, n, dealias })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dealias(&self) -> Dealias {
        self.dealias
    }

    pub fn with_dealias(&self, dealias: Dealias) -> Self {
        GridSpec { dealias, ..*self }
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Samples per axis of the padded product grid.
    pub fn padded_n(&self) -> usize {
        let (a, b) = self.dealias.padding();
        self.n * a / b
    }

    pub fn padded_len(&self) -> usize {
        self.padded_n().pow(self.dim as u32)
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Signed wavenumber of FFT index `i` in `(-n/2, n/2]`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        signed_wavenumber(i, self.n)
    }

    /// True when FFT index `i` is the Nyquist index on some axis.
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Multi-index (axis 0 slowest) of the flat index `flat`.
    pub fn unravel(&self, flat: usize) -> [usize; 3] {
        unravel(flat, self.n, self.dim)
    }

    /// Physical coordinate of grid point `flat` along each axis.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let h = self.spacing();
        [idx[0] as f64 * h, idx[1] as f64 * h, idx[2] as f64 * h]
    }
}

pub(crate) fn signed_wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

pub(crate) fn unravel(mut flat: usize, n: usize, dim: usize) -> [usize; 3] {
    let mut idx = [0usize; 3];
    for axis in (0..dim).rev() {
        idx[axis] = flat % n;
        flat /= n;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(2, 6, Dealias::None).is_ok());
        assert!(GridSpec::new(2, 5, Dealias::None).is_err());
        assert!(GridSpec::new(2, 2, Dealias::None).is_err());
        assert!(GridSpec::new(1, 8, Dealias::None).is_err());
        assert!(GridSpec::new(4, 8, Dealias::None).is_err());
    }

    #[test]
    fn padding_sizes() {
        let g = GridSpec::new(2, 8, Dealias::TwoThirds).unwrap();
        assert_eq!(g.padded_n(), 12);
        assert_eq!(g.with_dealias(Dealias::Exact).padded_n(), 24);
        assert_eq!(Dealias::None.exact_degree(), 1);
        assert_eq!(Dealias::TwoThirds.exact_degree(), 2);
        assert_eq!(Dealias::Exact.exact_degree(), 5);
    }

    #[test]
    fn wavenumbers_wrap() {
        let g = GridSpec::new(2, 8, Dealias::None).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.unravel(8 * 3 + 5), [3, 5, 0]);
    }
}
