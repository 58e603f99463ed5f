//! Legendre-Fenchel conjugation: exact on piecewise-linear representations
//! (dimension <= 3) and linear-time on 1-D grids.
//!
//! The exact path rests on one observation: `f*(y)` is the support function
//! of `epi f` evaluated at `(y, -1)`. Enumerating the generators of `epi f`
//! therefore hands us `f*` directly in max-of-pieces form, with the
//! epigraph's vertices becoming pieces, its extreme rays becoming domain
//! halfspaces, and its lineality becoming domain equalities.

use nalgebra::DVector;

use crate::affine::AffineFunctional;
use crate::enumeration::vertex_enumeration;
use crate::error::{Error, Result};
use crate::function::PLConvexFunction;
use crate::grid::{lower_hull_indices, GridFunction1D};
use crate::polyhedron::{Halfspace, Polyhedron};

/// Exact conjugate of a proper PL convex function, `n <= 3`.
pub fn conjugate_pl(f: &PLConvexFunction) -> Result<PLConvexFunction> {
    let n = f.dim();
    if n > 3 {
        return Err(Error::DimensionCap(n));
    }
    if !f.is_proper()? {
        return Err(Error::Improper("conjugate of an improper function".into()));
    }

    // constraints of epi f in R^{n+1}
    let mut normals: Vec<DVector<f64>> = Vec::new();
    let mut offsets: Vec<f64> = Vec::new();
    for p in f.pieces() {
        let mut a = DVector::zeros(n + 1);
        a.rows_mut(0, n).copy_from(p.gradient());
        a[n] = -1.0;
        normals.push(a);
        offsets.push(-p.offset());
    }
    if let Some(d) = f.domain() {
        let h = d.with_hrep()?;
        for hs in h.halfspaces().unwrap() {
            let mut a = DVector::zeros(n + 1);
            a.rows_mut(0, n).copy_from(&hs.normal);
            normals.push(a);
            offsets.push(hs.offset);
        }
    }

    let gens = vertex_enumeration(n + 1, &normals, &offsets)?
        .ok_or_else(|| Error::Improper("epigraph came back empty".into()))?;

    // vertices (v, s) of epi f become pieces y -> <v, y> - s
    let mut pieces = Vec::with_capacity(gens.vertices.len());
    for vert in &gens.vertices {
        let v: DVector<f64> = vert.rows(0, n).into();
        pieces.push(AffineFunctional::new(v, -vert[n])?);
    }
    if pieces.is_empty() {
        return Err(Error::Geometry("epigraph enumeration produced no vertices".into()));
    }

    // recession rays (r, t): sigma finite needs <y, r> <= t; lineality pins equalities
    let mut hs: Vec<Halfspace> = Vec::new();
    for ray in &gens.rays {
        let r: DVector<f64> = ray.rows(0, n).into();
        let t = ray[n];
        if r.amax() <= 1e-12 {
            continue; // the vertical ray (0, 1) never constrains the dual
        }
        hs.push(Halfspace::new(r, t));
    }
    for lin in &gens.lineality {
        let l: DVector<f64> = lin.rows(0, n).into();
        let t = lin[n];
        if l.amax() <= 1e-12 && t.abs() <= 1e-12 {
            continue;
        }
        hs.push(Halfspace::new(l.clone(), t));
        hs.push(Halfspace::new(-l, -t));
    }
    let domain = if hs.is_empty() { None } else { Some(Polyhedron::from_halfspaces(n, hs)) };
    PLConvexFunction::new(n, pieces, domain)
}

/// `conjugate_pl` applied twice; equals `f` pointwise on closed proper
/// convex input.
pub fn biconjugate(f: &PLConvexFunction) -> Result<PLConvexFunction> {
    conjugate_pl(&conjugate_pl(f)?)
}

/// Output grid description for the discrete transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub y_min: f64,
    pub step: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn node(&self, j: usize) -> f64 {
        self.y_min + self.step * j as f64
    }
}

/// Default dual grid: the slope range of the input's lower envelope, with as
/// many nodes as the input.
pub fn default_dual_grid(g: &GridFunction1D) -> Result<GridSpec> {
    let (lo, hi) = g.finite_block()?;
    let hull = lower_hull_indices(g.values(), lo, hi);
    let count = g.len();
    if hull.len() < 2 {
        // single finite node: conjugate is linear; any window works
        return Ok(GridSpec { y_min: -1.0, step: 2.0 / (count - 1) as f64, count });
    }
    let slope = |a: usize, b: usize| {
        (g.values()[b] - g.values()[a]) / ((b - a) as f64 * g.step())
    };
    let s_min = slope(hull[0], hull[1]);
    let s_max = slope(hull[hull.len() - 2], hull[hull.len() - 1]);
    let width = (s_max - s_min).max(0.0);
    let step = if width > 0.0 { width / (count - 1) as f64 } else { 1.0 };
    Ok(GridSpec { y_min: s_min, step, count })
}

/// Discrete Legendre transform in O(N + M): hull of the samples, then a
/// merge walk that advances the argmax pointer monotonically in the dual
/// node. Values agree bit-for-bit with the brute-force double loop on
/// convex samples because both paths evaluate the same `y * x - v`
/// expression over the same candidate set.
pub fn conjugate_grid(g: &GridFunction1D, spec: Option<GridSpec>) -> Result<GridFunction1D> {
    if g.num_finite() == 0 {
        return Err(Error::EmptyInput("conjugate of an all-infinite grid".into()));
    }
    let spec = match spec {
        Some(s) => s,
        None => default_dual_grid(g)?,
    };
    let (lo, hi) = g.finite_block()?;
    let hull = lower_hull_indices(g.values(), lo, hi);
    let xs: Vec<f64> = hull.iter().map(|&i| g.node(i)).collect();
    let vs: Vec<f64> = hull.iter().map(|&i| g.values()[i]).collect();

    let mut out = Vec::with_capacity(spec.count);
    let mut k = 0usize;
    for j in 0..spec.count {
        let y = spec.node(j);
        while k + 1 < xs.len() && y * xs[k + 1] - vs[k + 1] >= y * xs[k] - vs[k] {
            k += 1;
        }
        out.push(y * xs[k] - vs[k]);
    }
    GridFunction1D::new(spec.y_min, spec.step, out)
}

/// O(N * M) reference transform over all finite samples.
pub fn conjugate_grid_brute(g: &GridFunction1D, spec: Option<GridSpec>) -> Result<GridFunction1D> {
    if g.num_finite() == 0 {
        return Err(Error::EmptyInput("conjugate of an all-infinite grid".into()));
    }
    let spec = match spec {
        Some(s) => s,
        None => default_dual_grid(g)?,
    };
    let (lo, hi) = g.finite_block()?;
    let mut out = Vec::with_capacity(spec.count);
    for j in 0..spec.count {
        let y = spec.node(j);
        let mut best = f64::NEG_INFINITY;
        for i in lo..hi {
            let v = g.values()[i];
            if v.is_finite() {
                let cand = y * g.node(i) - v;
                if cand > best {
                    best = cand;
                }
            }
        }
        out.push(best);
    }
    GridFunction1D::new(spec.y_min, spec.step, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(s: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(s)
    }

    #[test]
    fn conjugate_of_affine_is_point_indicator() {
        // f(x) = 2x + 3  =>  f* = -3 at y = 2, +inf elsewhere
        let f = PLConvexFunction::from_piece(AffineFunctional::new(v(&[2.0]), 3.0).unwrap());
        let fs = conjugate_pl(&f).unwrap();
        assert!((fs.eval(&v(&[2.0])).unwrap() + 3.0).abs() < 1e-9);
        assert_eq!(fs.eval(&v(&[1.5])).unwrap(), f64::INFINITY);
        assert_eq!(fs.eval(&v(&[2.5])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn conjugate_of_delta_zero_is_zero() {
        let f = PLConvexFunction::delta_zero(2);
        let fs = conjugate_pl(&f).unwrap();
        for p in [[0.0, 0.0], [3.0, -1.0], [-7.0, 2.0]] {
            assert!(fs.eval(&v(&p)).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn conjugate_of_abs_is_interval_indicator() {
        let f = PLConvexFunction::abs_1d();
        let fs = conjugate_pl(&f).unwrap();
        for y in [-1.0, -0.5, 0.0, 0.7, 1.0] {
            assert!(fs.eval(&v(&[y])).unwrap().abs() < 1e-9, "y = {y}");
        }
        assert_eq!(fs.eval(&v(&[1.2])).unwrap(), f64::INFINITY);
        assert_eq!(fs.eval(&v(&[-1.2])).unwrap(), f64::INFINITY);
        // 1-D brute-force oracle: sup over x in [-10, 10]
        for y in [-0.9, -0.3, 0.4, 0.8] {
            let mut sup = f64::NEG_INFINITY;
            let steps = 20_000;
            for i in 0..=steps {
                let x = -10.0 + 20.0 * i as f64 / steps as f64;
                sup = sup.max(y * x - x.abs());
            }
            assert!((fs.eval(&v(&[y])).unwrap() - sup).abs() < 2e-3, "y = {y}");
        }
    }

    #[test]
    fn biconjugate_fixes_closed_functions() {
        let f = PLConvexFunction::abs_1d();
        let ff = biconjugate(&f).unwrap();
        for x in [-2.0, -0.3, 0.0, 1.7] {
            assert!((ff.eval(&v(&[x])).unwrap() - x.abs()).abs() < 1e-10);
        }
        let d = PLConvexFunction::delta_zero(1);
        let dd = biconjugate(&d).unwrap();
        assert!(dd.eval(&v(&[0.0])).unwrap().abs() < 1e-10);
        assert_eq!(dd.eval(&v(&[0.5])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn improper_rejected() {
        let empty = Polyhedron::from_halfspaces(
            1,
            vec![Halfspace::new(v(&[1.0]), -1.0), Halfspace::new(v(&[-1.0]), -1.0)],
        );
        let f = PLConvexFunction::new(
            1,
            vec![AffineFunctional::constant(1, 0.0).unwrap()],
            Some(empty),
        )
        .unwrap();
        assert!(matches!(conjugate_pl(&f), Err(Error::Improper(_))));
    }

    #[test]
    fn dimension_cap_enforced() {
        let f = PLConvexFunction::zero(4);
        assert!(matches!(conjugate_pl(&f), Err(Error::DimensionCap(4))));
    }

    #[test]
    fn grid_conjugate_of_quadratic() {
        // g(x) = x^2 / 2 on [-5, 5], N = 1001; g*(y) ~ y^2 / 2
        let n = 1001;
        let h = 10.0 / (n - 1) as f64;
        let g = GridFunction1D::sample(-5.0, h, n, |x| 0.5 * x * x).unwrap();
        let spec = GridSpec { y_min: -4.0, step: 8.0 / (n - 1) as f64, count: n };
        let gs = conjugate_grid(&g, Some(spec)).unwrap();
        let mut max_err = 0.0f64;
        for j in 0..n {
            let y = spec.node(j);
            max_err = max_err.max((gs.values()[j] - 0.5 * y * y).abs());
        }
        assert!(max_err <= h * h / 2.0 + 1e-12, "max_err = {max_err}");
    }

    #[test]
    fn grid_conjugate_of_single_point() {
        let g = GridFunction1D::new(
            0.0,
            1.0,
            vec![f64::INFINITY, 0.0, f64::INFINITY],
        )
        .unwrap();
        let spec = GridSpec { y_min: -2.0, step: 0.5, count: 9 };
        let gs = conjugate_grid(&g, Some(spec)).unwrap();
        for j in 0..9 {
            let y = spec.node(j);
            assert!((gs.values()[j] - y * 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_equals_brute_force_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let n = 256;
            // random convex samples: increasing slopes accumulated
            let mut slopes: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-4.0..4.0)).collect();
            slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut vals = vec![rng.random_range(-1.0..1.0)];
            let h = 0.05;
            for s in &slopes {
                let last = *vals.last().unwrap();
                vals.push(last + h * s);
            }
            let g = GridFunction1D::new(-3.0, h, vals).unwrap();
            let spec = GridSpec { y_min: -4.5, step: 9.0 / 255.0, count: 256 };
            let fast = conjugate_grid(&g, Some(spec)).unwrap();
            let brute = conjugate_grid_brute(&g, Some(spec)).unwrap();
            for (a, b) in fast.values().iter().zip(brute.values().iter()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn default_grid_covers_slope_range() {
        let g = GridFunction1D::sample(-2.0, 0.1, 41, |x| x.abs()).unwrap();
        let spec = default_dual_grid(&g).unwrap();
        assert!((spec.y_min + 1.0).abs() < 1e-9);
        assert!((spec.node(spec.count - 1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn duplicate_and_collinear_pieces_conjugate_cleanly() {
        // repeated pieces and pieces with equal gradients but different
        // offsets must not confuse the epigraph enumeration
        let f = PLConvexFunction::new(
            2,
            vec![
                AffineFunctional::new(v(&[1.0, 0.0]), 0.0).unwrap(),
                AffineFunctional::new(v(&[1.0, 0.0]), 0.0).unwrap(),
                AffineFunctional::new(v(&[1.0, 0.0]), -1.0).unwrap(),
                AffineFunctional::new(v(&[-1.0, 0.0]), 0.0).unwrap(),
                AffineFunctional::new(v(&[0.0, 1.0]), 0.5).unwrap(),
                AffineFunctional::new(v(&[0.0, -1.0]), 0.5).unwrap(),
            ],
            None,
        )
        .unwrap();
        let ff = biconjugate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..200 {
            let x = DVector::from_fn(2, |_, _| rng.random_range(-3.0..3.0));
            let a = ff.eval(&x).unwrap();
            let b = f.eval(&x).unwrap();
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b} at {x:?}");
        }
    }

    #[test]
    fn degenerate_vertex_domain_conjugates_cleanly() {
        // four domain facets meeting in a single point (a degenerate corner)
        let dom = Polyhedron::from_halfspaces(
            2,
            vec![
                Halfspace::new(v(&[1.0, 0.0]), 1.0),
                Halfspace::new(v(&[0.0, 1.0]), 1.0),
                Halfspace::new(v(&[1.0, 1.0]), 2.0),
                Halfspace::new(v(&[2.0, 1.0]), 3.0),
                Halfspace::new(v(&[-1.0, 0.0]), 1.0),
                Halfspace::new(v(&[0.0, -1.0]), 1.0),
            ],
        );
        let f = PLConvexFunction::new(
            2,
            vec![
                AffineFunctional::new(v(&[0.5, -0.5]), 0.25).unwrap(),
                AffineFunctional::new(v(&[-0.5, 0.5]), 0.0).unwrap(),
            ],
            Some(dom),
        )
        .unwrap();
        let ff = biconjugate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..300 {
            let x = DVector::from_fn(2, |_, _| rng.random_range(-1.5..1.5));
            let a = ff.eval(&x).unwrap();
            let b = f.eval(&x).unwrap();
            if a.is_infinite() || b.is_infinite() {
                assert_eq!(a, b, "at {x:?}");
            } else {
                assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "{a} vs {b} at {x:?}");
            }
        }
    }

    #[test]
    fn conjugates_of_random_pl_match_definition() {
        // f*(y) = sup_x <y,x> - f(x) checked against a dense 1-D sweep
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let k = rng.random_range(2..5);
            let pieces: Vec<AffineFunctional> = (0..k)
                .map(|_| {
                    AffineFunctional::new(
                        v(&[rng.random_range(-2.0..2.0)]),
                        rng.random_range(-1.0..1.0),
                    )
                    .unwrap()
                })
                .collect();
            let f = PLConvexFunction::new(1, pieces, None).unwrap();
            let fs = conjugate_pl(&f).unwrap();
            // test at dual points inside the gradient range
            let lo = f.pieces().iter().map(|p| p.gradient()[0]).fold(f64::INFINITY, f64::min);
            let hi = f.pieces().iter().map(|p| p.gradient()[0]).fold(f64::NEG_INFINITY, f64::max);
            for t in 0..5 {
                let y = lo + (hi - lo) * (t as f64 + 0.5) / 5.0;
                let mut sup = f64::NEG_INFINITY;
                for i in 0..=40_000 {
                    let x = -20.0 + 40.0 * i as f64 / 40_000.0;
                    sup = sup.max(y * x - f.eval(&v(&[x])).unwrap());
                }
                assert!(
                    (fs.eval(&v(&[y])).unwrap() - sup).abs() < 5e-3,
                    "residual at y = {y}"
                );
            }
        }
    }
}
