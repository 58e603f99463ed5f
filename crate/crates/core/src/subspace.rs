//! Linear subspaces of R^n with orthonormal bases, and their lattice
//! operations (meet = intersection, join = span of the union).

use nalgebra::{DMatrix, DVector};

use crate::enumeration::{nullspace, orthonormalize};
use crate::error::{Error, Result};
use crate::num::EPS_SUBSPACE;

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    /// orthonormal columns; zero columns = the zero subspace
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Build from a spanning set; the basis is orthonormalized and rank-cut.
    pub fn from_spanning(ambient: usize, vectors: &[DVector<f64>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
            }
        }
        Ok(Subspace { ambient, basis: orthonormalize(vectors, ambient) })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: DMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: DMatrix::identity(ambient, ambient) }
    }

    /// The line spanned by `v` (which must be nonzero).
    pub fn line(v: &DVector<f64>) -> Result<Self> {
        let n = v.norm();
        if n <= 1e-14 {
            return Err(Error::EmptyInput("a line needs a nonzero direction".into()));
        }
        Ok(Subspace { ambient: v.len(), basis: DMatrix::from_columns(&[v / n]) })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|i| self.basis.column(i).into()).collect()
    }

    pub fn contains_vec(&self, x: &DVector<f64>, tol: f64) -> bool {
        let proj = &self.basis * (self.basis.transpose() * x);
        (x - proj).norm() <= tol * (1.0 + x.norm())
    }

    /// Image under a linear map, re-orthonormalized.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<Subspace> {
        if m.ncols() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: m.ncols() });
        }
        let cols: Vec<DVector<f64>> = (0..self.dim()).map(|i| m * self.basis.column(i)).collect();
        Subspace::from_spanning(m.nrows(), &cols)
    }

    /// Equality up to principal angle below [`EPS_SUBSPACE`] (measured as the
    /// spectral norm of the projection residual, i.e. sin of the largest
    /// angle).
    pub fn approx_eq(&self, other: &Subspace) -> bool {
        if self.ambient != other.ambient || self.dim() != other.dim() {
            return false;
        }
        if self.dim() == 0 {
            return true;
        }
        let resid = &other.basis - &self.basis * (self.basis.transpose() * &other.basis);
        resid.norm() <= EPS_SUBSPACE * (self.dim() as f64).sqrt().max(1.0)
    }
}

/// Intersection of two subspaces.
pub fn meet_sub(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient() != b.ambient() {
        return Err(Error::DimensionMismatch { expected: a.ambient(), got: b.ambient() });
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace::zero(a.ambient()));
    }
    // solutions of A alpha = B beta: nullspace of [A | -B]
    let mut stacked = DMatrix::zeros(a.ambient(), a.dim() + b.dim());
    stacked.view_mut((0, 0), (a.ambient(), a.dim())).copy_from(a.basis());
    stacked.view_mut((0, a.dim()), (a.ambient(), b.dim())).copy_from(&(-b.basis()));
    let ns = nullspace(&stacked);
    let vecs: Vec<DVector<f64>> = (0..ns.ncols())
        .map(|i| {
            let alpha: DVector<f64> = ns.column(i).rows(0, a.dim()).into();
            a.basis() * alpha
        })
        .collect();
    Subspace::from_spanning(a.ambient(), &vecs)
}

/// Span of the union of two subspaces.
pub fn join_sub(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient() != b.ambient() {
        return Err(Error::DimensionMismatch { expected: a.ambient(), got: b.ambient() });
    }
    let mut vecs = a.basis_vectors();
    vecs.extend(b.basis_vectors());
    Subspace::from_spanning(a.ambient(), &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn meet_and_join_of_axes() {
        let ex = Subspace::line(&e(2, 0)).unwrap();
        let ey = Subspace::line(&e(2, 1)).unwrap();
        let m = meet_sub(&ex, &ey).unwrap();
        assert_eq!(m.dim(), 0);
        let j = join_sub(&ex, &ey).unwrap();
        assert_eq!(j.dim(), 2);
        assert!(j.approx_eq(&Subspace::full(2)));
    }

    #[test]
    fn absorption_when_nested() {
        let n = 4;
        let small = Subspace::from_spanning(n, &[e(n, 0), e(n, 1)]).unwrap();
        let big = Subspace::from_spanning(n, &[e(n, 0), e(n, 1), e(n, 3)]).unwrap();
        assert!(meet_sub(&small, &big).unwrap().approx_eq(&small));
        assert!(join_sub(&small, &big).unwrap().approx_eq(&big));
    }

    #[test]
    fn dimension_formula_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 5;
        for _ in 0..40 {
            let da = rng.random_range(1..=3);
            let db = rng.random_range(1..=3);
            let mk = |d: usize, rng: &mut ChaCha8Rng| {
                let vs: Vec<DVector<f64>> =
                    (0..d).map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))).collect();
                Subspace::from_spanning(n, &vs).unwrap()
            };
            let a = mk(da, &mut rng);
            let b = mk(db, &mut rng);
            let meet = meet_sub(&a, &b).unwrap();
            let join = join_sub(&a, &b).unwrap();
            assert_eq!(join.dim() + meet.dim(), a.dim() + b.dim());
        }
    }

    #[test]
    fn equality_is_basis_independent() {
        // same plane described by two different spanning pairs
        let a = Subspace::from_spanning(3, &[e(3, 0), e(3, 1)]).unwrap();
        let b = Subspace::from_spanning(
            3,
            &[
                DVector::from_row_slice(&[1.0, 1.0, 0.0]),
                DVector::from_row_slice(&[1.0, -1.0, 0.0]),
            ],
        )
        .unwrap();
        assert!(a.approx_eq(&b));
        let c = Subspace::from_spanning(3, &[e(3, 0), e(3, 2)]).unwrap();
        assert!(!a.approx_eq(&c));
    }
}
