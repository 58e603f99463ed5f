//! Convex polyhedra with V- and/or H-representations.
//!
//! A `Polyhedron` may carry either representation; conversions run through
//! the enumeration module on demand. The empty set is a valid value (a
//! V-representation with no vertices) because lattice meets can transiently
//! empty a body. All operations return new values; nothing is mutated in
//! place after construction.

use nalgebra::{DMatrix, DVector};

use crate::enumeration::{facet_enumeration, vertex_enumeration};
use crate::error::{Error, Result};
use crate::lp::{LpOutcome, LpProblem};
use crate::num::{EPS_GEOM, EPS_LP, EPS_RANK};

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: DVector<f64>, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol
    }
}

/// Cached structural flags; `None` means not yet computed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BodyFlags {
    pub symmetric: Option<bool>,
    pub contains_origin: Option<bool>,
    pub bounded: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Polyhedron {
    dim: usize,
    vertices: Option<Vec<DVector<f64>>>,
    rays: Vec<DVector<f64>>,
    halfspaces: Option<Vec<Halfspace>>,
    pub flags: BodyFlags,
}

impl Polyhedron {
    // ----- constructors -----

    pub fn from_vertices(dim: usize, vertices: Vec<DVector<f64>>, rays: Vec<DVector<f64>>) -> Self {
        debug_assert!(vertices.iter().chain(rays.iter()).all(|v| v.len() == dim));
        Polyhedron { dim, vertices: Some(vertices), rays, halfspaces: None, flags: BodyFlags::default() }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        debug_assert!(halfspaces.iter().all(|h| h.normal.len() == dim));
        Polyhedron { dim, vertices: None, rays: Vec::new(), halfspaces: Some(halfspaces), flags: BodyFlags::default() }
    }

    pub fn with_both(
        dim: usize,
        vertices: Vec<DVector<f64>>,
        rays: Vec<DVector<f64>>,
        halfspaces: Vec<Halfspace>,
    ) -> Self {
        Polyhedron {
            dim,
            vertices: Some(vertices),
            rays,
            halfspaces: Some(halfspaces),
            flags: BodyFlags::default(),
        }
    }

    /// All of R^n.
    pub fn universe(dim: usize) -> Self {
        Polyhedron::from_halfspaces(dim, Vec::new())
    }

    pub fn empty(dim: usize) -> Self {
        let mut p = Polyhedron::from_vertices(dim, Vec::new(), Vec::new());
        p.flags.bounded = Some(true);
        p.flags.contains_origin = Some(false);
        p
    }

    pub fn singleton(point: DVector<f64>) -> Self {
        let dim = point.len();
        Polyhedron::from_vertices(dim, vec![point], Vec::new())
    }

    pub fn segment(a: DVector<f64>, b: DVector<f64>) -> Self {
        let dim = a.len();
        Polyhedron::from_vertices(dim, vec![a, b], Vec::new())
    }

    /// `[-x, x]`.
    pub fn symmetric_segment(x: &DVector<f64>) -> Self {
        let mut p = Polyhedron::segment(-x.clone(), x.clone());
        p.flags.symmetric = Some(true);
        p.flags.contains_origin = Some(true);
        p.flags.bounded = Some(true);
        p
    }

    /// `[0, x]`.
    pub fn anchored_segment(x: &DVector<f64>) -> Self {
        let mut p = Polyhedron::segment(DVector::zeros(x.len()), x.clone());
        p.flags.contains_origin = Some(true);
        p.flags.bounded = Some(true);
        p
    }

    /// Axis box `{ |x_i| <= radius }`.
    pub fn cube(dim: usize, radius: f64) -> Self {
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut n = DVector::zeros(dim);
            n[i] = 1.0;
            hs.push(Halfspace::new(n.clone(), radius));
            hs.push(Halfspace::new(-n, radius));
        }
        let mut verts = Vec::new();
        for mask in 0..(1usize << dim) {
            let mut v = DVector::zeros(dim);
            for i in 0..dim {
                v[i] = if mask >> i & 1 == 1 { radius } else { -radius };
            }
            verts.push(v);
        }
        let mut p = Polyhedron::with_both(dim, verts, Vec::new(), hs);
        p.flags = BodyFlags { symmetric: Some(true), contains_origin: Some(true), bounded: Some(true) };
        p
    }

    /// `conv{ +-radius e_i }`, the scaled cross-polytope.
    pub fn cross_polytope(dim: usize, radius: f64) -> Self {
        let mut verts = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut v = DVector::zeros(dim);
            v[i] = radius;
            verts.push(v.clone());
            verts.push(-v);
        }
        let mut p = Polyhedron::from_vertices(dim, verts, Vec::new());
        p.flags = BodyFlags { symmetric: Some(true), contains_origin: Some(true), bounded: Some(true) };
        p
    }

    /// Slab `{ z : |<x, z>| <= 1 }` in V-representation (vertices +-x/|x|^2,
    /// lineality of x-perp stored as opposite ray pairs).
    pub fn slab(x: &DVector<f64>) -> Result<Self> {
        let dim = x.len();
        let n2 = x.norm_squared();
        if n2 <= EPS_RANK {
            return Err(Error::EmptyInput("slab direction must be nonzero".into()));
        }
        let v = x / n2;
        let mut rays = Vec::new();
        for w in orth_complement(x) {
            rays.push(w.clone());
            rays.push(-w);
        }
        let mut p = Polyhedron::from_vertices(dim, vec![v.clone(), -v], rays);
        p.halfspaces = Some(vec![
            Halfspace::new(x.clone(), 1.0),
            Halfspace::new(-x.clone(), 1.0),
        ]);
        p.flags = BodyFlags { symmetric: Some(true), contains_origin: Some(true), bounded: Some(dim == 1) };
        Ok(p)
    }

    /// Halfspace body `{ z : <x, z> <= 1 }` in both representations.
    pub fn halfspace_body(x: &DVector<f64>) -> Result<Self> {
        let dim = x.len();
        let n2 = x.norm_squared();
        if n2 <= EPS_RANK {
            return Err(Error::EmptyInput("halfspace direction must be nonzero".into()));
        }
        let v = x / n2;
        let mut rays = vec![-x / x.norm()];
        for w in orth_complement(x) {
            rays.push(w.clone());
            rays.push(-w);
        }
        let mut p = Polyhedron::from_vertices(dim, vec![v], rays);
        p.halfspaces = Some(vec![Halfspace::new(x.clone(), 1.0)]);
        p.flags = BodyFlags { symmetric: Some(false), contains_origin: Some(true), bounded: Some(false) };
        Ok(p)
    }

    // ----- accessors -----

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> Option<&[DVector<f64>]> {
        self.vertices.as_deref()
    }

    pub fn rays(&self) -> &[DVector<f64>] {
        &self.rays
    }

    pub fn halfspaces(&self) -> Option<&[Halfspace]> {
        self.halfspaces.as_deref()
    }

    pub fn has_vrep(&self) -> bool {
        self.vertices.is_some()
    }

    pub fn has_hrep(&self) -> bool {
        self.halfspaces.is_some()
    }

    // ----- representation conversion -----

    /// Return a copy that carries a V-representation.
    pub fn with_vrep(&self) -> Result<Polyhedron> {
        if self.has_vrep() {
            return Ok(self.clone());
        }
        let hs = self.halfspaces.as_ref().expect("one rep always present");
        let normals: Vec<DVector<f64>> = hs.iter().map(|h| h.normal.clone()).collect();
        let offsets: Vec<f64> = hs.iter().map(|h| h.offset).collect();
        let mut out = self.clone();
        match vertex_enumeration(self.dim, &normals, &offsets)? {
            None => {
                out.vertices = Some(Vec::new());
                out.rays = Vec::new();
            }
            Some(g) => {
                let mut rays = g.rays;
                for l in g.lineality {
                    rays.push(l.clone());
                    rays.push(-l);
                }
                out.vertices = Some(g.vertices);
                out.rays = rays;
            }
        }
        Ok(out)
    }

    /// Return a copy that carries an H-representation.
    pub fn with_hrep(&self) -> Result<Polyhedron> {
        if self.has_hrep() {
            return Ok(self.clone());
        }
        let verts = self.vertices.as_ref().expect("one rep always present");
        if verts.is_empty() {
            // empty set: encode as an infeasible pair
            let mut one = DVector::zeros(self.dim);
            if self.dim > 0 {
                one[0] = 1.0;
            }
            let mut out = self.clone();
            out.halfspaces =
                Some(vec![Halfspace::new(one.clone(), -1.0), Halfspace::new(-one, -1.0)]);
            return Ok(out);
        }
        let f = facet_enumeration(verts, &self.rays)?;
        let mut hs: Vec<Halfspace> =
            f.halfspaces.into_iter().map(|(a, b)| Halfspace::new(a, b)).collect();
        for (a, b) in f.equalities {
            hs.push(Halfspace::new(a.clone(), b));
            hs.push(Halfspace::new(-a, -b));
        }
        let mut out = self.clone();
        out.halfspaces = Some(hs);
        Ok(out)
    }

    // ----- predicates -----

    pub fn contains(&self, x: &DVector<f64>) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if let Some(hs) = &self.halfspaces {
            return Ok(hs.iter().all(|h| h.contains(x, EPS_GEOM)));
        }
        let verts = self.vertices.as_ref().unwrap();
        if verts.is_empty() {
            return Ok(false);
        }
        // x = V lambda + R mu, sum lambda = 1, lambda, mu >= 0
        let k = verts.len();
        let r = self.rays.len();
        let mut p = LpProblem::new(k + r);
        for row in 0..self.dim {
            let mut a = DVector::zeros(k + r);
            for (j, v) in verts.iter().enumerate() {
                a[j] = v[row];
            }
            for (j, ray) in self.rays.iter().enumerate() {
                a[k + j] = ray[row];
            }
            p.eq(a, x[row]);
        }
        let mut ones = DVector::zeros(k + r);
        for j in 0..k {
            ones[j] = 1.0;
        }
        p.eq(ones, 1.0);
        for j in 0..k + r {
            let mut a = DVector::zeros(k + r);
            a[j] = -1.0;
            p.leq(a, 0.0);
        }
        Ok(p.feasible())
    }

    pub fn is_empty(&self) -> Result<bool> {
        if let Some(verts) = &self.vertices {
            return Ok(verts.is_empty());
        }
        let hs = self.halfspaces.as_ref().unwrap();
        let mut p = LpProblem::new(self.dim);
        for h in hs {
            p.leq(h.normal.clone(), h.offset);
        }
        Ok(!p.feasible())
    }

    /// Support function `sigma(x) = sup { <y, x> : y in self }`.
    ///
    /// Returns `-inf` for the empty set and `+inf` along unbounded
    /// directions.
    pub fn support(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if let Some(verts) = &self.vertices {
            if verts.is_empty() {
                return Ok(f64::NEG_INFINITY);
            }
            for r in &self.rays {
                if r.dot(x) > EPS_GEOM * (1.0 + x.amax()) {
                    return Ok(f64::INFINITY);
                }
            }
            return Ok(verts.iter().map(|v| v.dot(x)).fold(f64::NEG_INFINITY, f64::max));
        }
        let hs = self.halfspaces.as_ref().unwrap();
        let mut p = LpProblem::new(self.dim);
        for h in hs {
            p.leq(h.normal.clone(), h.offset);
        }
        match p.minimize(&(-x)) {
            LpOutcome::Optimal { value, .. } => Ok(-value),
            LpOutcome::Unbounded => Ok(f64::INFINITY),
            LpOutcome::Infeasible => Ok(f64::NEG_INFINITY),
        }
    }

    /// Minkowski gauge `inf { t > 0 : x in t * self }`; requires `0 in self`.
    pub fn gauge(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !self.contains(&DVector::zeros(self.dim))? {
            return Err(Error::Geometry("gauge requires the origin inside the body".into()));
        }
        if x.amax() == 0.0 {
            return Ok(0.0);
        }
        if let Some(hs) = &self.halfspaces {
            // gauge = max over halfspaces of (a.x / b), with b >= 0 since 0 is inside
            let mut g: f64 = 0.0;
            for h in hs {
                let ax = h.normal.dot(x);
                if h.offset <= EPS_RANK {
                    if ax > EPS_GEOM {
                        return Ok(f64::INFINITY);
                    }
                } else {
                    g = g.max(ax / h.offset);
                }
            }
            return Ok(g.max(0.0));
        }
        // V-rep: minimize sum(gamma) s.t. V gamma + R delta = x, gamma, delta >= 0
        let verts = self.vertices.as_ref().unwrap();
        let k = verts.len();
        let r = self.rays.len();
        let mut p = LpProblem::new(k + r);
        for row in 0..self.dim {
            let mut a = DVector::zeros(k + r);
            for (j, v) in verts.iter().enumerate() {
                a[j] = v[row];
            }
            for (j, ray) in self.rays.iter().enumerate() {
                a[k + j] = ray[row];
            }
            p.eq(a, x[row]);
        }
        for j in 0..k + r {
            let mut a = DVector::zeros(k + r);
            a[j] = -1.0;
            p.leq(a, 0.0);
        }
        let mut c = DVector::zeros(k + r);
        for j in 0..k {
            c[j] = 1.0;
        }
        match p.minimize(&c) {
            LpOutcome::Optimal { value, .. } => Ok(value.max(0.0)),
            LpOutcome::Unbounded => Ok(0.0),
            LpOutcome::Infeasible => Ok(f64::INFINITY),
        }
    }

    // ----- geometry ops -----

    /// Polar body `{ y : <y, x> <= 1 for all x in self }`; requires `0 in self`.
    pub fn polar(&self) -> Result<Polyhedron> {
        if !self.contains(&DVector::zeros(self.dim))? {
            return Err(Error::Geometry("polar requires the origin inside the body".into()));
        }
        if let Some(verts) = &self.vertices {
            let mut hs = Vec::new();
            for v in verts {
                if v.amax() > EPS_RANK {
                    hs.push(Halfspace::new(v.clone(), 1.0));
                }
            }
            for r in &self.rays {
                hs.push(Halfspace::new(r.clone(), 0.0));
            }
            let mut out = Polyhedron::from_halfspaces(self.dim, hs);
            out.flags.contains_origin = Some(true);
            return Ok(out);
        }
        // polar of { a_k . x <= b_k } with b_k >= 0 is conv({a_k / b_k} U {0}) + cone{a_k : b_k = 0}
        let hs = self.halfspaces.as_ref().unwrap();
        let mut verts = vec![DVector::zeros(self.dim)];
        let mut rays = Vec::new();
        for h in hs {
            if h.offset <= EPS_RANK {
                rays.push(h.normal.clone());
            } else {
                verts.push(&h.normal / h.offset);
            }
        }
        let mut out = Polyhedron::from_vertices(self.dim, verts, rays);
        out.flags.contains_origin = Some(true);
        out.prune_vrep()?;
        Ok(out)
    }

    /// Image under an (invertible for H-reps) linear map.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<Polyhedron> {
        if m.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.ncols() });
        }
        let mut out = Polyhedron {
            dim: m.nrows(),
            vertices: None,
            rays: Vec::new(),
            halfspaces: None,
            flags: BodyFlags { symmetric: self.flags.symmetric, ..BodyFlags::default() },
        };
        if let Some(verts) = &self.vertices {
            out.vertices = Some(verts.iter().map(|v| m * v).collect());
            out.rays = self.rays.iter().map(|r| m * r).collect();
        }
        if let Some(hs) = &self.halfspaces {
            if m.is_square() {
                if let Some(minv) = m.clone().try_inverse() {
                    let mt = minv.transpose();
                    out.halfspaces = Some(
                        hs.iter().map(|h| Halfspace::new(&mt * &h.normal, h.offset)).collect(),
                    );
                }
            }
        }
        if out.vertices.is_none() && out.halfspaces.is_none() {
            return Err(Error::Singular("linear image of an H-rep needs an invertible map".into()));
        }
        Ok(out)
    }

    pub fn negate(&self) -> Polyhedron {
        let m = -DMatrix::<f64>::identity(self.dim, self.dim);
        self.linear_image(&m).expect("negation is invertible")
    }

    pub fn translate(&self, t: &DVector<f64>) -> Polyhedron {
        let mut out = self.clone();
        if let Some(verts) = &mut out.vertices {
            for v in verts.iter_mut() {
                *v += t;
            }
        }
        if let Some(hs) = &mut out.halfspaces {
            for h in hs.iter_mut() {
                h.offset += h.normal.dot(t);
            }
        }
        out.flags = BodyFlags::default();
        out
    }

    pub fn scale(&self, t: f64) -> Result<Polyhedron> {
        if t <= 0.0 {
            return Err(Error::NegativeScale(t));
        }
        let mut out = self.clone();
        if let Some(verts) = &mut out.vertices {
            for v in verts.iter_mut() {
                *v *= t;
            }
        }
        if let Some(hs) = &mut out.halfspaces {
            for h in hs.iter_mut() {
                h.offset *= t;
            }
        }
        Ok(out)
    }

    // ----- canonicalization -----

    /// Prune redundancy in whichever representations are present and
    /// recompute the structural flags.
    pub fn canonicalize(&self) -> Result<Polyhedron> {
        let mut out = self.clone();
        if out.vertices.is_some() {
            out.prune_vrep()?;
        }
        if out.halfspaces.is_some() {
            out.prune_hrep()?;
        }
        out.recompute_flags()?;
        Ok(out)
    }

    fn prune_vrep(&mut self) -> Result<()> {
        let verts = self.vertices.take().unwrap();
        let mut rays = std::mem::take(&mut self.rays);
        // dedupe first, then LP-prune one at a time
        let mut kept: Vec<DVector<f64>> = Vec::new();
        for v in verts {
            if !kept.iter().any(|w| (w - &v).amax() <= EPS_GEOM * (1.0 + v.amax())) {
                kept.push(v);
            }
        }
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let candidate = kept[i].clone();
            let rest: Vec<DVector<f64>> =
                kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
            let hull = Polyhedron::from_vertices(self.dim, rest, rays.clone());
            if hull.contains(&candidate)? {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        // prune rays: drop r if it lies in the cone of the others
        let mut j = 0;
        while j < rays.len() {
            let candidate = rays[j].clone();
            let rest: Vec<DVector<f64>> =
                rays.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, r)| r.clone()).collect();
            if in_cone(&candidate, &rest) {
                rays.remove(j);
            } else {
                j += 1;
            }
        }
        self.vertices = Some(kept);
        self.rays = rays;
        Ok(())
    }

    fn prune_hrep(&mut self) -> Result<()> {
        let hs = self.halfspaces.take().unwrap();
        // normalize and dedupe
        let mut kept: Vec<Halfspace> = Vec::new();
        for h in hs {
            let n = h.normal.norm();
            if n <= EPS_RANK {
                continue; // 0 . x <= b is vacuous or marks emptiness handled below
            }
            let cand = Halfspace::new(&h.normal / n, h.offset / n);
            let dup = kept.iter().any(|k| {
                (&k.normal - &cand.normal).amax() <= EPS_GEOM
                    && (k.offset - cand.offset).abs() <= EPS_GEOM
            });
            if !dup {
                kept.push(cand);
            }
        }
        let mut i = 0;
        while i < kept.len() {
            // redundant iff max a.x over the others is still <= b
            let mut p = LpProblem::new(self.dim);
            for (j, h) in kept.iter().enumerate() {
                if j != i {
                    p.leq(h.normal.clone(), h.offset);
                }
            }
            let redundant = match p.minimize(&(-kept[i].normal.clone())) {
                LpOutcome::Optimal { value, .. } => -value <= kept[i].offset + EPS_LP * 10.0,
                LpOutcome::Unbounded => false,
                LpOutcome::Infeasible => true,
            };
            if redundant && kept.len() > 1 {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        self.halfspaces = Some(kept);
        Ok(())
    }

    pub fn recompute_flags(&mut self) -> Result<()> {
        let origin = DVector::zeros(self.dim);
        self.flags.contains_origin = Some(!self.is_empty()? && self.contains(&origin)?);
        if self.has_vrep() {
            let verts = self.vertices.as_ref().unwrap();
            self.flags.bounded = Some(self.rays.is_empty() || verts.is_empty());
            let sym_v = verts.iter().all(|v| {
                verts.iter().any(|w| (w + v).amax() <= EPS_GEOM * (1.0 + v.amax()))
            });
            let sym_r = self
                .rays
                .iter()
                .all(|r| self.rays.iter().any(|s| (s + r).amax() <= EPS_GEOM));
            self.flags.symmetric = Some(sym_v && sym_r);
        } else {
            let hs = self.halfspaces.as_ref().unwrap();
            let normals: Vec<DVector<f64>> = hs.iter().map(|h| h.normal.clone()).collect();
            let zeros = vec![0.0; normals.len()];
            let rec = vertex_enumeration(self.dim, &normals, &zeros)?;
            let bounded = match rec {
                Some(g) => g.rays.is_empty() && g.lineality.is_empty(),
                None => true,
            };
            self.flags.bounded = Some(bounded);
            let sym = hs.iter().all(|h| {
                hs.iter().any(|k| {
                    (&k.normal + &h.normal).amax() <= EPS_GEOM
                        && (k.offset - h.offset).abs() <= EPS_GEOM
                })
            });
            self.flags.symmetric = Some(sym);
        }
        Ok(())
    }

    /// Check that the V- and H-representations describe the same set (only
    /// meaningful when both are present).
    pub fn reps_consistent(&self) -> Result<bool> {
        let (verts, hs) = match (&self.vertices, &self.halfspaces) {
            (Some(v), Some(h)) => (v, h),
            _ => return Ok(true),
        };
        for v in verts {
            if !hs.iter().all(|h| h.contains(v, 1e-6)) {
                return Ok(false);
            }
        }
        for r in &self.rays {
            if !hs.iter().all(|h| h.normal.dot(r) <= 1e-6) {
                return Ok(false);
            }
        }
        // H-side vertices must be expressible from the V-side
        let honly = Polyhedron::from_halfspaces(self.dim, hs.clone()).with_vrep()?;
        let vonly = Polyhedron::from_vertices(self.dim, verts.clone(), self.rays.clone());
        for v in honly.vertices().unwrap_or(&[]) {
            if !vonly.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ----- set comparison -----

    /// `self` a subset of `other`, up to tolerance.
    pub fn subset_of(&self, other: &Polyhedron) -> Result<bool> {
        let v = self.with_vrep()?;
        let verts = v.vertices().unwrap();
        if verts.is_empty() {
            return Ok(true);
        }
        for x in verts {
            if !other.contains(x)? {
                return Ok(false);
            }
        }
        if !v.rays().is_empty() {
            // every ray of self must lie in the recession cone of other
            let oh = other.with_hrep()?;
            let hs = oh.halfspaces().unwrap();
            for r in v.rays() {
                if !hs.iter().all(|h| h.normal.dot(r) <= EPS_GEOM) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn set_eq(&self, other: &Polyhedron) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }

    /// Hausdorff distance between compact polytopes.
    pub fn hausdorff(&self, other: &Polyhedron) -> Result<f64> {
        let a = self.with_vrep()?;
        let b = other.with_vrep()?;
        if !a.rays().is_empty() || !b.rays().is_empty() {
            return Err(Error::Unsupported("hausdorff distance needs compact bodies".into()));
        }
        let va = a.vertices().unwrap();
        let vb = b.vertices().unwrap();
        if va.is_empty() || vb.is_empty() {
            return Err(Error::EmptyInput("hausdorff distance of an empty body".into()));
        }
        let mut d: f64 = 0.0;
        for v in va {
            d = d.max(distance_to_hull(v, vb));
        }
        for w in vb {
            d = d.max(distance_to_hull(w, va));
        }
        Ok(d)
    }
}

fn orth_complement(x: &DVector<f64>) -> Vec<DVector<f64>> {
    let row = DMatrix::from_rows(&[x.transpose()]);
    let ns = crate::enumeration::nullspace(&row);
    (0..ns.ncols()).map(|i| ns.column(i).into()).collect()
}

fn in_cone(x: &DVector<f64>, gens: &[DVector<f64>]) -> bool {
    if x.amax() <= EPS_RANK {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let dim = x.len();
    let k = gens.len();
    let mut p = LpProblem::new(k);
    for row in 0..dim {
        let a = DVector::from_iterator(k, gens.iter().map(|g| g[row]));
        p.eq(a, x[row]);
    }
    for j in 0..k {
        let mut a = DVector::zeros(k);
        a[j] = -1.0;
        p.leq(a, 0.0);
    }
    p.feasible()
}

/// Euclidean distance from `x` to `conv(points)` by Wolfe's min-norm-point
/// algorithm on the translated hull. Finite termination; tolerances are
/// sized for desk-scale data.
pub fn distance_to_hull(x: &DVector<f64>, points: &[DVector<f64>]) -> f64 {
    let shifted: Vec<DVector<f64>> = points.iter().map(|p| p - x).collect();
    min_norm_point(&shifted).norm()
}

fn min_norm_point(points: &[DVector<f64>]) -> DVector<f64> {
    let eps = 1e-12;
    let start = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm_squared().partial_cmp(&b.1.norm_squared()).unwrap())
        .map(|(i, _)| i)
        .expect("nonempty point set");
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..10_000 {
        // most aligned new point
        let (j, best) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, x.dot(p)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best >= x.norm_squared() - eps * (1.0 + x.norm_squared()) {
            return x;
        }
        if !corral.contains(&j) {
            corral.push(j);
            lambda.push(0.0);
        }
        loop {
            // min-norm point of the affine hull of the corral
            let alpha = affine_min_norm(points, &corral);
            if alpha.iter().all(|&a| a > eps) {
                lambda = alpha.clone();
                x = combine(points, &corral, &alpha);
                break;
            }
            // step toward alpha until a coefficient hits zero
            let mut theta: f64 = 1.0;
            for (i, (&l, &a)) in lambda.iter().zip(alpha.iter()).enumerate() {
                let _ = i;
                if a <= eps && (l - a).abs() > eps {
                    theta = theta.min(l / (l - a));
                }
            }
            let mut keep_idx = Vec::new();
            let mut keep_lam = Vec::new();
            for (i, (&l, &a)) in lambda.iter().zip(alpha.iter()).enumerate() {
                let nl = (1.0 - theta) * l + theta * a;
                if nl > eps {
                    keep_idx.push(corral[i]);
                    keep_lam.push(nl);
                }
            }
            if keep_idx.is_empty() {
                // numerical corner; keep the best single point
                keep_idx.push(corral[0]);
                keep_lam.push(1.0);
            }
            let total: f64 = keep_lam.iter().sum();
            for l in keep_lam.iter_mut() {
                *l /= total;
            }
            corral = keep_idx;
            lambda = keep_lam;
            x = combine(points, &corral, &lambda);
            if corral.len() == 1 {
                break;
            }
        }
    }
    x
}

fn combine(points: &[DVector<f64>], idx: &[usize], lam: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(points[0].len());
    for (&i, &l) in idx.iter().zip(lam.iter()) {
        x += &points[i] * l;
    }
    x
}

/// Coefficients of the min-norm point of the affine hull of the corral.
fn affine_min_norm(points: &[DVector<f64>], idx: &[usize]) -> Vec<f64> {
    let k = idx.len();
    // solve [[G, 1], [1^T, 0]] [alpha; mu] = [0; 1] with G the Gram matrix
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = points[idx[i]].dot(&points[idx[j]]);
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    match m.clone().full_piv_lu().solve(&rhs) {
        Some(sol) => sol.rows(0, k).iter().copied().collect(),
        None => {
            // degenerate corral: fall back to uniform weights
            vec![1.0 / k as f64; k]
        }
    }
}
