//! Continuous affine functionals `x -> <phi, x> + c`, the atoms every
//! piecewise-linear convex function is generated from.

use nalgebra::DVector;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AffineFunctional {
    phi: DVector<f64>,
    c: f64,
}

impl AffineFunctional {
    pub fn new(phi: DVector<f64>, c: f64) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::EmptyInput("affine functional needs dimension >= 1".into()));
        }
        if phi.iter().any(|v| !v.is_finite()) || !c.is_finite() {
            return Err(Error::Parse("affine functional entries must be finite".into()));
        }
        Ok(AffineFunctional { phi, c })
    }

    /// Purely linear functional `x -> <phi, x>`.
    pub fn linear(phi: DVector<f64>) -> Result<Self> {
        AffineFunctional::new(phi, 0.0)
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        AffineFunctional::new(DVector::zeros(dim), c)
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn gradient(&self) -> &DVector<f64> {
        &self.phi
    }

    pub fn offset(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.phi.dot(x) + self.c)
    }

    pub fn scale(&self, t: f64) -> AffineFunctional {
        AffineFunctional { phi: &self.phi * t, c: self.c * t }
    }

    pub fn add(&self, other: &AffineFunctional) -> Result<AffineFunctional> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(AffineFunctional { phi: &self.phi + &other.phi, c: self.c + other.c })
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn combine(&self, other: &AffineFunctional, lambda: f64) -> Result<AffineFunctional> {
        self.scale(lambda).add(&other.scale(1.0 - lambda))
    }

    pub fn approx_eq(&self, other: &AffineFunctional, tol: f64) -> bool {
        self.dim() == other.dim()
            && (&self.phi - &other.phi).amax() <= tol
            && (self.c - other.c).abs() <= tol
    }
}
