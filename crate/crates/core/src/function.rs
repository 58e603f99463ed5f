//! Extended-real proper lsc convex functions as finite maxima of affine
//! pieces over an optional polyhedral effective domain.
//!
//! The value at `x` is `max_i <phi_i, x> + c_i` inside the domain and `+inf`
//! outside. The representation can never take the value `-inf`, so a
//! function here is proper exactly when its domain is nonempty. Order
//! decisions reduce to piecewise-linear minimization, which is a small dense
//! LP in epigraph form.

use nalgebra::{DMatrix, DVector};

use crate::affine::AffineFunctional;
use crate::error::{Error, Result};
use crate::lp::{LpOutcome, LpProblem};
use crate::num::EPS_ORDER;
use crate::polyhedron::{Halfspace, Polyhedron};

#[derive(Debug, Clone)]
pub struct PLConvexFunction {
    n: usize,
    pieces: Vec<AffineFunctional>,
    domain: Option<Polyhedron>,
}

impl PLConvexFunction {
    pub fn new(
        n: usize,
        pieces: Vec<AffineFunctional>,
        domain: Option<Polyhedron>,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput("a PL convex function needs at least one piece".into()));
        }
        for p in &pieces {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
            }
        }
        if let Some(d) = &domain {
            if d.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: d.dim() });
            }
        }
        Ok(PLConvexFunction { n, pieces, domain })
    }

    pub fn from_piece(piece: AffineFunctional) -> Self {
        let n = piece.dim();
        PLConvexFunction { n, pieces: vec![piece], domain: None }
    }

    /// The constant zero function on R^n.
    pub fn zero(n: usize) -> Self {
        PLConvexFunction::from_piece(AffineFunctional::constant(n, 0.0).unwrap())
    }

    pub fn constant(n: usize, c: f64) -> Self {
        PLConvexFunction::from_piece(AffineFunctional::constant(n, c).unwrap())
    }

    /// Indicator of `{0}`: zero at the origin, `+inf` elsewhere.
    pub fn delta_zero(n: usize) -> Self {
        let mut hs = Vec::new();
        for i in 0..n {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            hs.push(Halfspace::new(e.clone(), 0.0));
            hs.push(Halfspace::new(-e, 0.0));
        }
        PLConvexFunction {
            n,
            pieces: vec![AffineFunctional::constant(n, 0.0).unwrap()],
            domain: Some(Polyhedron::from_halfspaces(n, hs)),
        }
    }

    /// `|x|` in one dimension; handy in tests and examples.
    pub fn abs_1d() -> Self {
        let up = AffineFunctional::linear(DVector::from_row_slice(&[1.0])).unwrap();
        let dn = AffineFunctional::linear(DVector::from_row_slice(&[-1.0])).unwrap();
        PLConvexFunction { n: 1, pieces: vec![up, dn], domain: None }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[AffineFunctional] {
        &self.pieces
    }

    pub fn domain(&self) -> Option<&Polyhedron> {
        self.domain.as_ref()
    }

    /// Proper = nonempty effective domain (the representation is never -inf).
    pub fn is_proper(&self) -> Result<bool> {
        match &self.domain {
            None => Ok(true),
            Some(d) => Ok(!d.is_empty()?),
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        if let Some(d) = &self.domain {
            if !d.contains(x)? {
                return Ok(f64::INFINITY);
            }
        }
        let mut m = f64::NEG_INFINITY;
        for p in &self.pieces {
            m = m.max(p.eval(x)?);
        }
        Ok(m)
    }

    /// Pointwise maximum of two functions.
    pub fn max2(&self, other: &PLConvexFunction) -> Result<PLConvexFunction> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(PLConvexFunction { n: self.n, pieces, domain: intersect_domains(&self.domain, &other.domain)? })
    }

    /// Pointwise supremum of a nonempty finite family; a fold of `max2`.
    pub fn sup_family(fs: &[PLConvexFunction]) -> Result<PLConvexFunction> {
        let first = fs.first().ok_or_else(|| Error::EmptyInput("sup of an empty family".into()))?;
        let mut acc = first.clone();
        for f in &fs[1..] {
            acc = acc.max2(f)?;
        }
        Ok(acc)
    }

    /// Pointwise sum; pieces are all pairwise sums.
    pub fn add(&self, other: &PLConvexFunction) -> Result<PLConvexFunction> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(p.add(q)?);
            }
        }
        Ok(PLConvexFunction { n: self.n, pieces, domain: intersect_domains(&self.domain, &other.domain)? })
    }

    /// Nonnegative scaling. `scale(f, 0)` is the zero function restricted to
    /// `dom f` (the cone-axiom limit), not the zero function on R^n.
    pub fn scale(&self, t: f64) -> Result<PLConvexFunction> {
        if t < 0.0 {
            return Err(Error::NegativeScale(t));
        }
        if t == 0.0 {
            return Ok(PLConvexFunction {
                n: self.n,
                pieces: vec![AffineFunctional::constant(self.n, 0.0).unwrap()],
                domain: self.domain.clone(),
            });
        }
        Ok(PLConvexFunction {
            n: self.n,
            pieces: self.pieces.iter().map(|p| p.scale(t)).collect(),
            domain: self.domain.clone(),
        })
    }

    /// Global infimum and, when attained, a minimizer.
    ///
    /// `(-inf, None)` when unbounded below, `(+inf, None)` on an empty
    /// domain.
    pub fn minimize(&self) -> Result<(f64, Option<DVector<f64>>)> {
        // min s  s.t.  phi_i . x - s <= -c_i,  domain rows
        let m = self.epigraph_lp(None)?;
        match m {
            LpOutcome::Optimal { point, value } => {
                Ok((value, Some(point.rows(0, self.n).into())))
            }
            LpOutcome::Unbounded => Ok((f64::NEG_INFINITY, None)),
            LpOutcome::Infeasible => Ok((f64::INFINITY, None)),
        }
    }

    /// Minimize `self` over an extra polyhedron intersected with the domain.
    pub fn minimize_over(&self, region: &Polyhedron) -> Result<(f64, Option<DVector<f64>>)> {
        match self.epigraph_lp(Some(region))? {
            LpOutcome::Optimal { point, value } => {
                Ok((value, Some(point.rows(0, self.n).into())))
            }
            LpOutcome::Unbounded => Ok((f64::NEG_INFINITY, None)),
            LpOutcome::Infeasible => Ok((f64::INFINITY, None)),
        }
    }

    fn epigraph_lp(&self, extra: Option<&Polyhedron>) -> Result<LpOutcome> {
        let mut p = LpProblem::new(self.n + 1);
        for piece in &self.pieces {
            let mut a = DVector::zeros(self.n + 1);
            a.rows_mut(0, self.n).copy_from(piece.gradient());
            a[self.n] = -1.0;
            p.leq(a, -piece.offset());
        }
        let mut add_domain = |d: &Polyhedron| -> Result<()> {
            let h = d.with_hrep()?;
            for hs in h.halfspaces().unwrap() {
                let mut a = DVector::zeros(self.n + 1);
                a.rows_mut(0, self.n).copy_from(&hs.normal);
                p.leq(a, hs.offset);
            }
            Ok(())
        };
        if let Some(d) = &self.domain {
            add_domain(d)?;
        }
        if let Some(d) = extra {
            add_domain(d)?;
        }
        let mut c = DVector::zeros(self.n + 1);
        c[self.n] = 1.0;
        Ok(p.minimize(&c))
    }

    /// Decide `self <= other` pointwise on all of R^n.
    ///
    /// Criterion: `dom(other)` is contained in `dom(self)`, and every affine
    /// piece of `self` minorizes `other` on `dom(other)`.
    pub fn is_leq(&self, other: &PLConvexFunction) -> Result<bool> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let other_dom = match &other.domain {
            Some(d) => d.clone(),
            None => Polyhedron::universe(self.n),
        };
        if other_dom.is_empty()? {
            return Ok(true); // other is identically +inf
        }
        if let Some(df) = &self.domain {
            // need dom(other) subset of dom(self)
            if !other_dom.subset_of(df)? {
                return Ok(false);
            }
        }
        for piece in &self.pieces {
            // inf over dom(other) of (other - piece) >= 0
            let shifted: Vec<AffineFunctional> = other
                .pieces
                .iter()
                .map(|q| q.add(&piece.scale(-1.0)))
                .collect::<Result<_>>()?;
            let diff = PLConvexFunction::new(self.n, shifted, other.domain.clone())?;
            let (inf, _) = diff.minimize()?;
            if inf < -EPS_ORDER {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lift to the positively homogeneous function on R^{n+1} with
    /// `p(x, 1) = f(x)` whenever `dom f = R^n`.
    pub fn homogenize(&self) -> Result<PLConvexFunction> {
        if !self.is_proper()? {
            return Err(Error::Improper("cannot homogenize an improper function".into()));
        }
        let m = self.n + 1;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut phi = DVector::zeros(m);
                phi.rows_mut(0, self.n).copy_from(p.gradient());
                phi[self.n] = p.offset();
                AffineFunctional::linear(phi)
            })
            .collect::<Result<Vec<_>>>()?;
        PLConvexFunction::new(m, pieces, None)
    }

    /// `|f(x0)| + max_i |phi_i|`, exact for finite-valued PL functions.
    pub fn lipschitz_bound(&self, x0: &DVector<f64>) -> Result<f64> {
        if self.domain.is_some() {
            return Err(Error::RestrictedDomain(
                "Lipschitz bound is only defined for finite-valued functions".into(),
            ));
        }
        let fx0 = self.eval(x0)?;
        let slope = self.pieces.iter().map(|p| p.gradient().norm()).fold(0.0f64, f64::max);
        Ok(fx0.abs() + slope)
    }

    /// The generating affine minorants: the pieces themselves.
    pub fn minorants(&self) -> Vec<AffineFunctional> {
        self.pieces.clone()
    }

    /// Drop redundant pieces (lazily, via one LP per piece) and canonicalize
    /// the domain.
    pub fn canonicalize(&self) -> Result<PLConvexFunction> {
        let mut pieces = self.pieces.clone();
        let mut i = 0;
        while pieces.len() > 1 && i < pieces.len() {
            let candidate = pieces[i].clone();
            let rest: Vec<AffineFunctional> = pieces
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            // redundant iff max of the rest dominates the candidate everywhere
            let shifted: Vec<AffineFunctional> = rest
                .iter()
                .map(|q| q.add(&candidate.scale(-1.0)))
                .collect::<Result<_>>()?;
            let diff = PLConvexFunction::new(self.n, shifted, self.domain.clone())?;
            let (inf, _) = diff.minimize()?;
            if inf >= -1e-9 {
                pieces.remove(i);
            } else {
                i += 1;
            }
        }
        let domain = match &self.domain {
            Some(d) => Some(d.canonicalize()?),
            None => None,
        };
        PLConvexFunction::new(self.n, pieces, domain)
    }

    /// `y -> f(U y + x0)`; exact on PL representations.
    pub fn precompose_affine(&self, u: &DMatrix<f64>, x0: &DVector<f64>) -> Result<PLConvexFunction> {
        if u.nrows() != self.n || x0.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: u.nrows() });
        }
        let m = u.ncols();
        let ut = u.transpose();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                AffineFunctional::new(&ut * p.gradient(), p.gradient().dot(x0) + p.offset())
            })
            .collect::<Result<Vec<_>>>()?;
        let domain = match &self.domain {
            None => None,
            Some(d) => {
                let h = d.with_hrep()?;
                let hs = h
                    .halfspaces()
                    .unwrap()
                    .iter()
                    .map(|hsp| {
                        Halfspace::new(&ut * &hsp.normal, hsp.offset - hsp.normal.dot(x0))
                    })
                    .collect();
                Some(Polyhedron::from_halfspaces(m, hs))
            }
        };
        PLConvexFunction::new(m, pieces, domain)
    }

    /// `x -> alpha f(x) + <phi0, x> + r0` with `alpha > 0`.
    pub fn affine_postcompose(
        &self,
        alpha: f64,
        phi0: &DVector<f64>,
        r0: f64,
    ) -> Result<PLConvexFunction> {
        if alpha <= 0.0 {
            return Err(Error::NegativeScale(alpha));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffineFunctional::new(p.gradient() * alpha + phi0, alpha * p.offset() + r0))
            .collect::<Result<Vec<_>>>()?;
        PLConvexFunction::new(self.n, pieces, self.domain.clone())
    }
}

pub(crate) fn intersect_domains(
    a: &Option<Polyhedron>,
    b: &Option<Polyhedron>,
) -> Result<Option<Polyhedron>> {
    match (a, b) {
        (None, None) => Ok(None),
        (Some(d), None) | (None, Some(d)) => Ok(Some(d.clone())),
        (Some(d1), Some(d2)) => {
            let h1 = d1.with_hrep()?;
            let h2 = d2.with_hrep()?;
            let mut hs = h1.halfspaces().unwrap().to_vec();
            hs.extend(h2.halfspaces().unwrap().iter().cloned());
            Ok(Some(Polyhedron::from_halfspaces(d1.dim(), hs)))
        }
    }
}
