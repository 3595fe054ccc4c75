//! Dense real univariate polynomials and the Sylvester resultant.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, ComplexMatrix};

/// Coefficients in ascending degree; trailing zeros are trimmed so the
/// leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds from descending coefficients, `[1, a, b]` meaning `w² + a w + b`.
    pub fn from_descending(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut p = Self::new(vec![1.0]);
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, 1.0]));
        }
        p
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `self + c` for a constant `c`.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        coeffs[0] += c;
        Self::new(coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*w")?,
                _ => write!(f, "{a}*w^{k}")?,
            }
        }
        Ok(())
    }
}

pub fn poly_eval(p: &RealPolynomial, x: f64) -> f64 {
    p.eval(x)
}

pub fn poly_derivative(p: &RealPolynomial) -> RealPolynomial {
    p.derivative()
}

/// Determinant of the Sylvester matrix of `p` and `q`.
pub fn sylvester_resultant(p: &RealPolynomial, q: &RealPolynomial) -> Result<f64> {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let size = m + n;
    if size == 0 {
        return Ok(1.0);
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); size * size];
    // rows 0..n: shifts of p; rows n..n+m: shifts of q; descending coefficients
    for row in 0..n {
        for (j, &c) in p.coeffs.iter().rev().enumerate() {
            entries[row * size + row + j] = Complex64::new(c, 0.0);
        }
    }
    for row in 0..m {
        for (j, &c) in q.coeffs.iter().rev().enumerate() {
            entries[(n + row) * size + row + j] = Complex64::new(c, 0.0);
        }
    }
    let sylvester = ComplexMatrix::new(size, entries)?;
    Ok(determinant(&sylvester).re)
}
