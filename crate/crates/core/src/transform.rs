//! Canonical fully order preserving / reversing transforms of the convex
//! cone: `f -> alpha f(U . + shift) + <phi0, .> + r0` in preserving mode,
//! and the same affine data wrapped around a Fenchel conjugate in reversing
//! mode (the shift then lives in the dual argument and is applied after
//! conjugation).
//!
//! In R^n the dual-space isomorphism of the reversing form is stored as an
//! ordinary invertible matrix: the standard inner product identifies the
//! space with its dual, although the underlying theory keeps them distinct.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fenchel::conjugate_pl;
use crate::function::PLConvexFunction;
use crate::num::EPS_DET;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    Preserving,
    Reversing,
}

#[derive(Debug, Clone)]
pub struct CanonicalTransform {
    alpha: f64,
    u: DMatrix<f64>,
    shift: DVector<f64>,
    phi0: DVector<f64>,
    r0: f64,
    mode: TransformMode,
}

impl CanonicalTransform {
    pub fn new(
        alpha: f64,
        u: DMatrix<f64>,
        shift: DVector<f64>,
        phi0: DVector<f64>,
        r0: f64,
        mode: TransformMode,
    ) -> Result<Self> {
        let n = u.nrows();
        if !u.is_square() || shift.len() != n || phi0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.ncols() });
        }
        if alpha <= 0.0 {
            return Err(Error::NegativeScale(alpha));
        }
        if u.determinant().abs() <= EPS_DET {
            return Err(Error::Singular("transform matrix must be invertible".into()));
        }
        Ok(CanonicalTransform { alpha, u, shift, phi0, r0, mode })
    }

    pub fn identity(n: usize, mode: TransformMode) -> Self {
        CanonicalTransform {
            alpha: 1.0,
            u: DMatrix::identity(n, n),
            shift: DVector::zeros(n),
            phi0: DVector::zeros(n),
            r0: 0.0,
            mode,
        }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn phi0(&self) -> &DVector<f64> {
        &self.phi0
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn mode(&self) -> TransformMode {
        self.mode
    }

    /// Apply to a PL convex function. Reversing mode conjugates first and is
    /// therefore subject to the exact-conjugation dimension cap.
    pub fn apply(&self, f: &PLConvexFunction) -> Result<PLConvexFunction> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: f.dim() });
        }
        let inner = match self.mode {
            TransformMode::Preserving => f.clone(),
            TransformMode::Reversing => conjugate_pl(f)?,
        };
        inner
            .precompose_affine(&self.u, &self.shift)?
            .affine_postcompose(self.alpha, &self.phi0, self.r0)
    }

    /// Explicit inverse of a preserving transform.
    pub fn invert(&self) -> Result<CanonicalTransform> {
        if self.mode == TransformMode::Reversing {
            return Err(Error::Unsupported(
                "a reversing transform is inverted through compose (reversing o reversing)".into(),
            ));
        }
        let u_inv = self
            .u
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("transform matrix not invertible".into()))?;
        let alpha_inv = 1.0 / self.alpha;
        let shift_inv = -(&u_inv * &self.shift);
        // g = alpha f(U . + shift) + phi0 . + r0  =>
        // f = alpha^{-1} g(U^{-1}(. - shift)) - alpha^{-1} (U^{-T} phi0) . + alpha^{-1}(phi0 . U^{-1} shift - r0)
        let phi0_inv = -(u_inv.transpose() * &self.phi0) * alpha_inv;
        let r0_inv = alpha_inv * (self.phi0.dot(&(&u_inv * &self.shift)) - self.r0);
        CanonicalTransform::new(
            alpha_inv,
            u_inv,
            shift_inv,
            phi0_inv,
            r0_inv,
            TransformMode::Preserving,
        )
    }

    /// Composition `self o other`: `apply(compose(s, t), f) = apply(s, apply(t, f))`.
    ///
    /// Mode algebra: preserving o preserving = preserving, reversing o
    /// reversing = preserving, mixed = reversing. The algebra rides on the
    /// conjugate-flip identity `F o A = flip(A) o F` for affine wrappers A.
    pub fn compose(&self, other: &CanonicalTransform) -> Result<CanonicalTransform> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        use TransformMode::*;
        let (mode, left, right) = match (self.mode, other.mode) {
            (Preserving, Preserving) => (Preserving, self.affine_part(), other.affine_part()),
            // s o t = A_s (A_t F) = (A_s A_t) F
            (Preserving, Reversing) => (Reversing, self.affine_part(), other.affine_part()),
            // s o t = (A_s F) A_t = (A_s flip(A_t)) F
            (Reversing, Preserving) => (Reversing, self.affine_part(), other.affine_part().conjugate_flip()?),
            // s o t = (A_s F)(A_t F) = A_s flip(A_t) F F = A_s flip(A_t)
            (Reversing, Reversing) => (Preserving, self.affine_part(), other.affine_part().conjugate_flip()?),
        };
        let composed = left.compose_affine(&right);
        CanonicalTransform::new(
            composed.alpha,
            composed.u,
            composed.shift,
            composed.phi0,
            composed.r0,
            mode,
        )
    }

    fn affine_part(&self) -> AffinePart {
        AffinePart {
            alpha: self.alpha,
            u: self.u.clone(),
            shift: self.shift.clone(),
            phi0: self.phi0.clone(),
            r0: self.r0,
        }
    }
}

/// The affine wrapper `g -> alpha g(U . + shift) + <phi0, .> + r0` without a
/// mode tag; composition and conjugate-flip algebra live here.
struct AffinePart {
    alpha: f64,
    u: DMatrix<f64>,
    shift: DVector<f64>,
    phi0: DVector<f64>,
    r0: f64,
}

impl AffinePart {
    /// `self o other` as maps on functions.
    fn compose_affine(&self, other: &AffinePart) -> AffinePart {
        // s(t(f))(y) = a_s [a_t f(U_t (U_s y + x_s) + x_t) + phi_t.(U_s y + x_s) + r_t] + phi_s.y + r_s
        let alpha = self.alpha * other.alpha;
        let u = &other.u * &self.u;
        let shift = &other.u * &self.shift + &other.shift;
        let phi0 = self.u.transpose() * &other.phi0 * self.alpha + &self.phi0;
        let r0 = self.alpha * (other.phi0.dot(&self.shift) + other.r0) + self.r0;
        AffinePart { alpha, u, shift, phi0, r0 }
    }

    /// The affine wrapper C with `F o A = C o F` on closed convex functions:
    /// `(A(g))* = C(g*)`.
    fn conjugate_flip(&self) -> Result<AffinePart> {
        let u_inv_t = self
            .u
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("flip of a singular wrapper".into()))?
            .transpose();
        let u_inv = u_inv_t.transpose();
        // (A(g))*(y) = alpha g*(U^{-T}(y - phi0)/alpha) - <y, U^{-1} shift> + <phi0, U^{-1} shift> - r0
        let alpha = self.alpha;
        let u = &u_inv_t / self.alpha;
        let shift = -(&u_inv_t * &self.phi0) / self.alpha;
        let phi0 = -(&u_inv * &self.shift);
        let r0 = self.phi0.dot(&(&u_inv * &self.shift)) - self.r0;
        Ok(AffinePart { alpha, u, shift, phi0, r0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineFunctional;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(s: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(s)
    }

    fn random_function(rng: &mut ChaCha8Rng, n: usize) -> PLConvexFunction {
        let k = rng.random_range(2..5);
        let pieces = (0..k)
            .map(|_| {
                AffineFunctional::new(
                    DVector::from_fn(n, |_, _| rng.random_range(-2.0..2.0)),
                    rng.random_range(-1.0..1.0),
                )
                .unwrap()
            })
            .collect();
        PLConvexFunction::new(n, pieces, None).unwrap()
    }

    fn random_preserving(rng: &mut ChaCha8Rng, n: usize) -> CanonicalTransform {
        let u = loop {
            let m: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            if m.determinant().abs() > 0.3 {
                break m;
            }
        };
        CanonicalTransform::new(
            rng.random_range(0.5..2.0),
            u,
            DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)),
            DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)),
            rng.random_range(-1.0..1.0),
            TransformMode::Preserving,
        )
        .unwrap()
    }

    #[test]
    fn identity_preserving_is_identity() {
        let t = CanonicalTransform::identity(2, TransformMode::Preserving);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_function(&mut rng, 2);
        let g = t.apply(&f).unwrap();
        for _ in 0..50 {
            let x = DVector::from_fn(2, |_, _| rng.random_range(-3.0..3.0));
            assert_eq!(g.eval(&x).unwrap(), f.eval(&x).unwrap());
        }
    }

    #[test]
    fn identity_reversing_is_fenchel_and_involutive() {
        let t = CanonicalTransform::identity(1, TransformMode::Reversing);
        let f = PLConvexFunction::abs_1d();
        let g = t.apply(&f).unwrap();
        // F|x| is the indicator of [-1, 1]
        assert!(g.eval(&v(&[0.5])).unwrap().abs() < 1e-9);
        assert_eq!(g.eval(&v(&[1.5])).unwrap(), f64::INFINITY);
        let back = t.apply(&g).unwrap();
        for x in [-2.0, 0.0, 0.7, 3.0] {
            assert!((back.eval(&v(&[x])).unwrap() - x.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn apply_matches_pointwise_formula() {
        let t = CanonicalTransform::new(
            2.0,
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]),
            v(&[0.5, -1.0]),
            v(&[1.0, 1.0]),
            0.25,
            TransformMode::Preserving,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_function(&mut rng, 2);
        let g = t.apply(&f).unwrap();
        for _ in 0..500 {
            let y = DVector::from_fn(2, |_, _| rng.random_range(-3.0..3.0));
            let expect =
                2.0 * f.eval(&(t.matrix() * &y + t.shift())).unwrap() + t.phi0().dot(&y) + 0.25;
            assert!((g.eval(&y).unwrap() - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn invert_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_preserving(&mut rng, 2);
            let inv = t.invert().unwrap();
            let f = random_function(&mut rng, 2);
            let back = inv.apply(&t.apply(&f).unwrap()).unwrap();
            for _ in 0..20 {
                let x = DVector::from_fn(2, |_, _| rng.random_range(-2.0..2.0));
                let a = back.eval(&x).unwrap();
                let b = f.eval(&x).unwrap();
                assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
            }
            // parameter-wise involution
            let twice = inv.invert().unwrap();
            assert!((twice.alpha() - t.alpha()).abs() < 1e-12);
            assert!((twice.matrix() - t.matrix()).amax() < 1e-12);
            assert!((twice.shift() - t.shift()).amax() < 1e-12);
            assert!((twice.phi0() - t.phi0()).amax() < 1e-12);
            assert!((twice.r0() - t.r0()).abs() < 1e-12);
        }
    }

    #[test]
    fn invert_of_identity() {
        let t = CanonicalTransform::identity(3, TransformMode::Preserving);
        let inv = t.invert().unwrap();
        assert!((inv.matrix() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);
        assert!(inv.shift().amax() < 1e-14);
        assert!((inv.alpha() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_preserving(&mut rng, 2);
        let c = t.compose(&t.invert().unwrap()).unwrap();
        assert!((c.matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-9);
        assert!((c.alpha() - 1.0).abs() < 1e-9);
        assert!(c.shift().amax() < 1e-9);
        assert!(c.phi0().amax() < 1e-9);
        assert!(c.r0().abs() < 1e-9);
    }

    #[test]
    fn two_fenchels_compose_to_identity() {
        let rev = CanonicalTransform::identity(1, TransformMode::Reversing);
        let c = rev.compose(&rev).unwrap();
        assert_eq!(c.mode(), TransformMode::Preserving);
        let f = PLConvexFunction::abs_1d();
        let g = c.apply(&f).unwrap();
        for x in [-1.0, 0.0, 2.0] {
            assert!((g.eval(&v(&[x])).unwrap() - x.abs()).abs() < 1e-10);
        }
    }

    #[test]
    fn composed_apply_equals_sequential_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let n = 2;
            let s_rev = trial % 2 == 0;
            let t_rev = trial % 3 == 0;
            let mk = |rev: bool, rng: &mut ChaCha8Rng| {
                let base = random_preserving(rng, n);
                CanonicalTransform::new(
                    base.alpha(),
                    base.matrix().clone(),
                    base.shift().clone(),
                    base.phi0().clone(),
                    base.r0(),
                    if rev { TransformMode::Reversing } else { TransformMode::Preserving },
                )
                .unwrap()
            };
            let s = mk(s_rev, &mut rng);
            let t = mk(t_rev, &mut rng);
            let f = random_function(&mut rng, n);
            let sequential = s.apply(&t.apply(&f).unwrap()).unwrap();
            let composed = s.compose(&t).unwrap().apply(&f).unwrap();
            for _ in 0..30 {
                let x = DVector::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
                let a = sequential.eval(&x).unwrap();
                let b = composed.eval(&x).unwrap();
                if a.is_infinite() || b.is_infinite() {
                    assert_eq!(a, b, "trial {trial}");
                } else {
                    assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "trial {trial}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let r = CanonicalTransform::new(
            1.0,
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            DVector::zeros(2),
            0.0,
            TransformMode::Preserving,
        );
        assert!(matches!(r, Err(Error::Singular(_))));
    }
}
