//! The cones of sublinear functions, Minkowski gauges and seminorms, and
//! the body correspondences between them.
//!
//! A sublinear function carries the convex body it is the support function
//! of as its primary datum, which makes the function-to-body map and the
//! body-to-function map exact inverses by construction; all numerics live in
//! the hull and LP code underneath. Gauges carry the generating body `D`
//! (with `0 in D`) and evaluate through a small LP; seminorms carry a
//! symmetric dual body and evaluate as its support function.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::PLConvexFunction;
use crate::num::EPS_HOMOGENEITY;
use crate::polyhedron::Polyhedron;

/// Support function of a nonempty closed convex body.
#[derive(Debug, Clone)]
pub struct SublinearFunction {
    body: Polyhedron,
}

impl SublinearFunction {
    pub fn new(body: Polyhedron) -> Result<Self> {
        if body.is_empty()? {
            return Err(Error::EmptyInput("support function of an empty body".into()));
        }
        Ok(SublinearFunction { body })
    }

    /// The linear functional `<phi, .>` as a sublinear function.
    pub fn linear(phi: DVector<f64>) -> Self {
        SublinearFunction { body: Polyhedron::singleton(phi) }
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn body(&self) -> &Polyhedron {
        &self.body
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        self.body.support(x)
    }

    /// Shift the body, i.e. add the linear functional `<b, .>`.
    pub fn add_linear(&self, b: &DVector<f64>) -> SublinearFunction {
        SublinearFunction { body: self.body.translate(b) }
    }
}

/// The S map: a body in the dual becomes its support function.
pub fn support_function(c: &Polyhedron) -> Result<SublinearFunction> {
    SublinearFunction::new(c.clone())
}

/// The D map on sublinear carriers: recover the body, pruned.
pub fn body_of(p: &SublinearFunction) -> Result<Polyhedron> {
    p.body.canonicalize()
}

/// The D map on PL representations: validates positive homogeneity by
/// sampling, then reads the body off the pieces and the domain cone.
///
/// For `p = max <phi_i, .>` restricted to a cone `{a_k . x <= 0}`, the body
/// is `conv{phi_i} + cone{a_k}`.
pub fn body_of_pl(f: &PLConvexFunction) -> Result<Polyhedron> {
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    for _ in 0..100 {
        let x = DVector::from_fn(n, |_, _| rng.random_range(-2.0..2.0));
        let fx = f.eval(&x)?;
        for t in [2.0, 0.5] {
            let ftx = f.eval(&(&x * t))?;
            let ok = if fx.is_infinite() {
                ftx == fx
            } else {
                (ftx - t * fx).abs() <= EPS_HOMOGENEITY * (1.0 + fx.abs().max(ftx.abs()))
            };
            if !ok {
                return Err(Error::NotHomogeneous(format!(
                    "p({t} x) != {t} p(x) at a sampled point (p(x) = {fx}, p({t}x) = {ftx})"
                )));
            }
        }
    }
    let vertices: Vec<DVector<f64>> = f.pieces().iter().map(|p| p.gradient().clone()).collect();
    if f.pieces().iter().any(|p| p.offset().abs() > EPS_HOMOGENEITY) {
        return Err(Error::NotHomogeneous("pieces carry nonzero offsets".into()));
    }
    let mut rays = Vec::new();
    if let Some(d) = f.domain() {
        let h = d.with_hrep()?;
        for hs in h.halfspaces().unwrap() {
            if hs.offset.abs() > EPS_HOMOGENEITY {
                return Err(Error::NotHomogeneous("effective domain is not a cone".into()));
            }
            rays.push(hs.normal.clone());
        }
    }
    Polyhedron::from_vertices(n, vertices, rays).canonicalize()
}

/// Minkowski functional of a closed convex `D` with `0 in D`.
#[derive(Debug, Clone)]
pub struct MinkowskiGauge {
    body: Polyhedron,
}

impl MinkowskiGauge {
    pub fn new(body: Polyhedron) -> Result<Self> {
        if !body.contains(&DVector::zeros(body.dim()))? {
            return Err(Error::Geometry("a gauge body must contain the origin".into()));
        }
        Ok(MinkowskiGauge { body })
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn body(&self) -> &Polyhedron {
        &self.body
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        self.body.gauge(x)
    }

    /// The same function in support form: `gauge_D = sigma_{D polar}`.
    pub fn to_support_form(&self) -> Result<SublinearFunction> {
        SublinearFunction::new(self.body.polar()?)
    }
}

/// `inf { t > 0 : x in t D }` for a body with `0 in D`.
pub fn gauge(d: &Polyhedron, x: &DVector<f64>) -> Result<f64> {
    d.gauge(x)
}

/// Polar body `{ y : <y, x> <= 1 on D }`.
pub fn polar(d: &Polyhedron) -> Result<Polyhedron> {
    d.polar()
}

/// Seminorm as the support function of a symmetric dual body.
#[derive(Debug, Clone)]
pub struct Seminorm {
    dual_body: Polyhedron,
}

impl Seminorm {
    pub fn new(dual_body: Polyhedron) -> Result<Self> {
        let mut b = dual_body;
        if b.flags.symmetric.is_none() {
            b = b.canonicalize()?;
        }
        if b.flags.symmetric != Some(true) {
            return Err(Error::Geometry("a seminorm needs a symmetric dual body".into()));
        }
        if b.is_empty()? {
            return Err(Error::EmptyInput("seminorm with an empty dual body".into()));
        }
        Ok(Seminorm { dual_body: b })
    }

    /// `|<x*, .>|`, the seminorm of a symmetric segment.
    pub fn of_functional(xstar: &DVector<f64>) -> Self {
        Seminorm { dual_body: Polyhedron::symmetric_segment(xstar) }
    }

    pub fn dim(&self) -> usize {
        self.dual_body.dim()
    }

    pub fn dual_body(&self) -> &Polyhedron {
        &self.dual_body
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        self.dual_body.support(x)
    }

    /// Gauge form: the seminorm is the Minkowski functional of the polar of
    /// its dual body.
    pub fn to_gauge(&self) -> Result<MinkowskiGauge> {
        MinkowskiGauge::new(self.dual_body.polar()?)
    }

    /// Finite everywhere iff the dual body is bounded.
    pub fn is_finite_valued(&self) -> Result<bool> {
        let mut b = self.dual_body.clone();
        if b.flags.bounded.is_none() {
            b.recompute_flags()?;
        }
        Ok(b.flags.bounded == Some(true))
    }
}

/// Which homogeneity law a degree-p function obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// `f(t x) = t^p f(x)` for `t >= 0`.
    Positive,
    /// `f(t x) = |t|^p f(x)`.
    Absolute,
}

/// `base(x)^p` for a gauge or seminorm base and degree `p >= 1`.
#[derive(Debug, Clone)]
pub enum HomogeneousBase {
    Gauge(MinkowskiGauge),
    Seminorm(Seminorm),
}

#[derive(Debug, Clone)]
pub struct HomogeneousFunction {
    base: HomogeneousBase,
    degree: f64,
}

impl HomogeneousFunction {
    pub fn dim(&self) -> usize {
        match &self.base {
            HomogeneousBase::Gauge(g) => g.dim(),
            HomogeneousBase::Seminorm(s) => s.dim(),
        }
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn mode(&self) -> Homogeneity {
        match &self.base {
            HomogeneousBase::Gauge(_) => Homogeneity::Positive,
            HomogeneousBase::Seminorm(_) => Homogeneity::Absolute,
        }
    }

    pub fn base(&self) -> &HomogeneousBase {
        &self.base
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        let b = match &self.base {
            HomogeneousBase::Gauge(g) => g.eval(x)?,
            HomogeneousBase::Seminorm(s) => s.eval(x)?,
        };
        Ok(b.powf(self.degree))
    }
}

/// Raise a gauge to degree `p >= 1`.
pub fn hom_power_gauge(k: MinkowskiGauge, p: f64) -> Result<HomogeneousFunction> {
    if p < 1.0 {
        return Err(Error::NegativeScale(p));
    }
    Ok(HomogeneousFunction { base: HomogeneousBase::Gauge(k), degree: p })
}

/// Raise a seminorm to degree `p >= 1`.
pub fn hom_power_seminorm(k: Seminorm, p: f64) -> Result<HomogeneousFunction> {
    if p < 1.0 {
        return Err(Error::NegativeScale(p));
    }
    Ok(HomogeneousFunction { base: HomogeneousBase::Seminorm(k), degree: p })
}

/// Recover the degree-1 base.
pub fn hom_root(f: HomogeneousFunction) -> HomogeneousBase {
    f.base
}
