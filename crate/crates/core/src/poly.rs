//! Bivariate polynomials with exact differentiation.
//!
//! Custom conformal factors and manufactured fields are supplied as
//! coefficient tables of degree <= 6 so that all their derivatives are
//! closed-form; no numeric differentiation noise enters identity tests.

use crate::error::{Error, Result};

/// Maximum total degree allowed for coefficient tables.
pub const MAX_DEGREE: usize = 6;

/// A polynomial sum c[i][j] x^i y^j with i + j <= 6.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    c: [[f64; MAX_DEGREE + 1]; MAX_DEGREE + 1],
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 {
            c: [[0.0; MAX_DEGREE + 1]; MAX_DEGREE + 1],
        }
    }

    /// Build from (x power, y power, coefficient) triples.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut p = Poly2::zero();
        for &(i, j, v) in terms {
            if i + j > MAX_DEGREE {
                return Err(Error::UnsupportedConfiguration(format!(
                    "polynomial term x^{i} y^{j} exceeds degree {MAX_DEGREE}"
                )));
            }
            p.c[i][j] += v;
        }
        Ok(p)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.c[i][j]
    }

    /// Nonzero terms in lexicographic (i, j) order.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..=MAX_DEGREE {
            for j in 0..=MAX_DEGREE {
                if self.c[i][j] != 0.0 {
                    out.push((i, j, self.c[i][j]));
                }
            }
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in x, inner Horner in y.
        let mut acc = 0.0;
        for i in (0..=MAX_DEGREE).rev() {
            let mut row = 0.0;
            for j in (0..=MAX_DEGREE).rev() {
                row = row * y + self.c[i][j];
            }
            acc = acc * x + row;
        }
        acc
    }

    pub fn dx(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for i in 1..=MAX_DEGREE {
            for j in 0..=MAX_DEGREE {
                p.c[i - 1][j] = self.c[i][j] * i as f64;
            }
        }
        p
    }

    pub fn dy(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for i in 0..=MAX_DEGREE {
            for j in 1..=MAX_DEGREE {
                p.c[i][j - 1] = self.c[i][j] * j as f64;
            }
        }
        p
    }

    pub fn laplacian(&self) -> Poly2 {
        let dxx = self.dx().dx();
        let dyy = self.dy().dy();
        let mut p = Poly2::zero();
        for i in 0..=MAX_DEGREE {
            for j in 0..=MAX_DEGREE {
                p.c[i][j] = dxx.c[i][j] + dyy.c[i][j];
            }
        }
        p
    }

    /// Gradient at a point.
    pub fn grad(&self, x: f64, y: f64) -> [f64; 2] {
        [self.dx().eval(x, y), self.dy().eval(x, y)]
    }

    /// Second partials [[xx, xy], [xy, yy]] at a point.
    pub fn hess(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let dxx = self.dx().dx().eval(x, y);
        let dxy = self.dx().dy().eval(x, y);
        let dyy = self.dy().dy().eval(x, y);
        [[dxx, dxy], [dxy, dyy]]
    }
}
