//! Seeded generators for functions, bodies, subspaces and transforms.
//! Everything takes an explicit rng so that reported results replay.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::affine::AffineFunctional;
use crate::function::PLConvexFunction;
use crate::polyhedron::{Halfspace, Polyhedron};
use crate::subspace::Subspace;
use crate::transform::{CanonicalTransform, TransformMode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vector(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(lo..hi))
}

pub fn affine(rng: &mut ChaCha8Rng, n: usize) -> AffineFunctional {
    AffineFunctional::new(vector(rng, n, -2.0, 2.0), rng.random_range(-1.0..1.0)).unwrap()
}

/// Random full-domain PL convex function with `pieces` pieces.
pub fn pl_function(rng: &mut ChaCha8Rng, n: usize, pieces: usize) -> PLConvexFunction {
    let ps = (0..pieces.max(1)).map(|_| affine(rng, n)).collect();
    PLConvexFunction::new(n, ps, None).unwrap()
}

/// Random PL convex function restricted to a bounded polyhedral domain that
/// contains a ball around the origin (so it is always proper).
pub fn pl_function_with_domain(rng: &mut ChaCha8Rng, n: usize, pieces: usize) -> PLConvexFunction {
    let ps: Vec<AffineFunctional> = (0..pieces.max(1)).map(|_| affine(rng, n)).collect();
    let dom = domain_around_origin(rng, n);
    PLConvexFunction::new(n, ps, Some(dom)).unwrap()
}

/// Bounded polyhedron with the origin at least 0.4 deep inside: a box of
/// random radius cut by a few random halfspaces with offsets >= 0.5.
pub fn domain_around_origin(rng: &mut ChaCha8Rng, n: usize) -> Polyhedron {
    let radius = rng.random_range(1.0..4.0);
    let mut hs = Vec::new();
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        hs.push(Halfspace::new(e.clone(), radius));
        hs.push(Halfspace::new(-e, radius));
    }
    for _ in 0..rng.random_range(0..=n) {
        let mut a = vector(rng, n, -1.0, 1.0);
        let norm = a.norm();
        if norm < 0.1 {
            continue;
        }
        a /= norm;
        hs.push(Halfspace::new(a, rng.random_range(0.5..2.0)));
    }
    Polyhedron::from_halfspaces(n, hs)
}

/// Sample a point of `f`'s effective domain (rejection around the origin;
/// domains produced by this module always contain a neighborhood of 0).
pub fn domain_point(rng: &mut ChaCha8Rng, f: &PLConvexFunction, scale: f64) -> DVector<f64> {
    let n = f.dim();
    for attempt in 0..200 {
        let shrink = 1.0 / (1.0 + attempt as f64 * 0.2);
        let x = vector(rng, n, -scale * shrink, scale * shrink);
        if f.eval(&x).map(|v| v.is_finite()).unwrap_or(false) {
            return x;
        }
    }
    DVector::zeros(n)
}

/// Random compact polytope: the hull of `k` points.
pub fn polytope(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Polyhedron {
    let pts = (0..k.max(n + 1)).map(|_| vector(rng, n, -2.0, 2.0)).collect();
    Polyhedron::from_vertices(n, pts, Vec::new()).canonicalize().unwrap()
}

/// Random compact polytope containing the origin strictly inside.
pub fn polytope_with_origin(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Polyhedron {
    let mut pts: Vec<DVector<f64>> = (0..k.max(2)).map(|_| vector(rng, n, -2.0, 2.0)).collect();
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 0.3;
        pts.push(e.clone());
        pts.push(-e);
    }
    Polyhedron::from_vertices(n, pts, Vec::new()).canonicalize().unwrap()
}

/// Random symmetric compact polytope; `inradius` guarantees a scaled
/// cross-polytope inside (so the body is solid).
pub fn symmetric_polytope(rng: &mut ChaCha8Rng, n: usize, k: usize, inradius: f64) -> Polyhedron {
    let mut pts: Vec<DVector<f64>> = Vec::new();
    for _ in 0..k.max(1) {
        let p = vector(rng, n, -2.0, 2.0);
        pts.push(p.clone());
        pts.push(-p);
    }
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = inradius.max(1e-3);
        pts.push(e.clone());
        pts.push(-e);
    }
    Polyhedron::from_vertices(n, pts, Vec::new()).canonicalize().unwrap()
}

/// Random subspace of the given dimension.
pub fn subspace(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Subspace {
    loop {
        let vs: Vec<DVector<f64>> = (0..dim).map(|_| vector(rng, n, -1.0, 1.0)).collect();
        let s = Subspace::from_spanning(n, &vs).unwrap();
        if s.dim() == dim {
            return s;
        }
    }
}

/// Random invertible matrix with singular values in roughly [0.3, 3].
pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    loop {
        let m: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let svd = m.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin > 0.25 && smax < 3.0 {
            return m;
        }
    }
}

pub fn transform(rng: &mut ChaCha8Rng, n: usize, mode: TransformMode) -> CanonicalTransform {
    CanonicalTransform::new(
        rng.random_range(0.5..2.0),
        invertible(rng, n),
        vector(rng, n, -1.0, 1.0),
        vector(rng, n, -1.0, 1.0),
        rng.random_range(-1.0..1.0),
        mode,
    )
    .unwrap()
}

/// A certified ordered pair `f <= g` built by raising `f` by a positive
/// constant and (optionally) shrinking its domain.
pub fn ordered_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    with_domain: bool,
) -> (PLConvexFunction, PLConvexFunction) {
    let pieces = rng.random_range(2..5);
    let f = if with_domain {
        pl_function_with_domain(rng, n, pieces)
    } else {
        pl_function(rng, n, pieces)
    };
    let lift = rng.random_range(0.1..1.0);
    let raised = f.affine_postcompose(1.0, &DVector::zeros(n), lift).unwrap();
    let g = if with_domain {
        let shrink = domain_around_origin(rng, n);
        let dom = crate::function::intersect_domains(
            &raised.domain().cloned(),
            &Some(shrink),
        )
        .unwrap();
        PLConvexFunction::new(n, raised.pieces().to_vec(), dom).unwrap()
    } else {
        raised
    };
    (f, g)
}
