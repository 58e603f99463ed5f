//! Lattices of closed convex sets: meet = intersection, join = closed
//! convex hull of the union. Includes segment types, lattice-isomorphism
//! auditing of set maps, and the compact-extension construction that builds
//! a map on all symmetric compacta out of one defined on solid bodies only.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::EPS_GEOM;
use crate::oracle::Oracle;
use crate::polyhedron::Polyhedron;

/// Meet: H-representation concatenation, canonicalized. An empty result is
/// returned as a flagged-empty polyhedron, not an error.
pub fn meet_convex(a: &Polyhedron, b: &Polyhedron) -> Result<Polyhedron> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let ha = a.with_hrep()?;
    let hb = b.with_hrep()?;
    let mut hs = ha.halfspaces().unwrap().to_vec();
    hs.extend(hb.halfspaces().unwrap().iter().cloned());
    let joined = Polyhedron::from_halfspaces(a.dim(), hs);
    if joined.is_empty()? {
        return Ok(Polyhedron::empty(a.dim()));
    }
    joined.canonicalize()
}

/// Join: V-representation concatenation, hull-canonicalized.
pub fn join_convex(a: &Polyhedron, b: &Polyhedron) -> Result<Polyhedron> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let va = a.with_vrep()?;
    let vb = b.with_vrep()?;
    let mut verts = va.vertices().unwrap().to_vec();
    verts.extend(vb.vertices().unwrap().iter().cloned());
    let mut rays = va.rays().to_vec();
    rays.extend(vb.rays().iter().cloned());
    if verts.is_empty() {
        return Ok(Polyhedron::empty(a.dim()));
    }
    Polyhedron::from_vertices(a.dim(), verts, rays).canonicalize()
}

/// Segments of the dual space: `[-x, x]` or `[0, x]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Symmetric,
    Anchored,
}

#[derive(Debug, Clone)]
pub struct Segment {
    pub endpoint: DVector<f64>,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn symmetric(endpoint: DVector<f64>) -> Self {
        Segment { endpoint, kind: SegmentKind::Symmetric }
    }

    pub fn anchored(endpoint: DVector<f64>) -> Self {
        Segment { endpoint, kind: SegmentKind::Anchored }
    }

    pub fn to_polyhedron(&self) -> Polyhedron {
        match self.kind {
            SegmentKind::Symmetric => Polyhedron::symmetric_segment(&self.endpoint),
            SegmentKind::Anchored => Polyhedron::anchored_segment(&self.endpoint),
        }
    }

    /// Read a segment back off a polyhedron; errors when the body is not a
    /// segment of the requested kind. For symmetric segments the returned
    /// endpoint sign is arbitrary.
    pub fn from_polyhedron(p: &Polyhedron, kind: SegmentKind) -> Result<Segment> {
        let c = p.canonicalize()?;
        if !c.rays().is_empty() {
            return Err(Error::Geometry("segment image is unbounded".into()));
        }
        let verts = c.vertices().ok_or_else(|| Error::Geometry("segment needs a V-rep".into()))?;
        match kind {
            SegmentKind::Symmetric => match verts.len() {
                1 if verts[0].amax() <= EPS_GEOM => {
                    Ok(Segment::symmetric(DVector::zeros(c.dim())))
                }
                2 if (&verts[0] + &verts[1]).amax() <= EPS_GEOM * (1.0 + verts[0].amax()) => {
                    Ok(Segment::symmetric(verts[0].clone()))
                }
                _ => Err(Error::Geometry("image is not a symmetric segment".into())),
            },
            SegmentKind::Anchored => match verts.len() {
                1 if verts[0].amax() <= EPS_GEOM => Ok(Segment::anchored(DVector::zeros(c.dim()))),
                2 => {
                    let end = if verts[0].amax() <= EPS_GEOM {
                        1
                    } else if verts[1].amax() <= EPS_GEOM {
                        0
                    } else {
                        return Err(Error::Geometry("image segment is not anchored at 0".into()));
                    };
                    Ok(Segment::anchored(verts[end].clone()))
                }
                _ => Err(Error::Geometry("image is not an anchored segment".into())),
            },
        }
    }
}

/// Which set lattice an oracle claims to act on. Beyond the equational
/// meet/join laws, the anchored and symmetric lattices impose a closure
/// constraint on images (contain the origin / be symmetric) that maps like
/// translations violate even though they commute with meet and join as set
/// operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeTag {
    /// All nonempty closed convex sets.
    General,
    /// Sets containing the origin.
    ContainsOrigin,
    /// Symmetric sets.
    Symmetric,
}

/// Outcome of auditing a set map against the lattice-isomorphism laws.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeIsoReport {
    pub pairs: usize,
    pub meet_violations: usize,
    pub join_violations: usize,
    pub order_violations: usize,
    /// Oracle outputs that left the tagged lattice.
    pub membership_violations: usize,
    pub witnesses: Vec<String>,
}

impl LatticeIsoReport {
    pub fn total_violations(&self) -> usize {
        self.meet_violations
            + self.join_violations
            + self.order_violations
            + self.membership_violations
    }
}

fn in_lattice(p: &Polyhedron, tag: LatticeTag) -> Result<bool> {
    match tag {
        LatticeTag::General => Ok(true),
        LatticeTag::ContainsOrigin => {
            let origin = nalgebra::DVector::zeros(p.dim());
            p.contains(&origin)
        }
        LatticeTag::Symmetric => {
            let mut c = p.canonicalize()?;
            if c.flags.symmetric.is_none() {
                c.recompute_flags()?;
            }
            Ok(c.flags.symmetric == Some(true))
        }
    }
}

/// Check `phi(A meet B) = phi(A) meet phi(B)`, the join law, order
/// preservation, and membership of images in the tagged lattice, over the
/// supplied sample pairs.
pub fn check_lattice_iso(
    oracle: &Oracle<Polyhedron>,
    tag: LatticeTag,
    pairs: &[(Polyhedron, Polyhedron)],
) -> Result<LatticeIsoReport> {
    let mut report = LatticeIsoReport {
        pairs: pairs.len(),
        meet_violations: 0,
        join_violations: 0,
        order_violations: 0,
        membership_violations: 0,
        witnesses: Vec::new(),
    };
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let fa = oracle.query(a)?;
        let fb = oracle.query(b)?;
        for (name, img) in [("phi(A)", &fa), ("phi(B)", &fb)] {
            if !in_lattice(img, tag)? {
                report.membership_violations += 1;
                if report.witnesses.len() < 8 {
                    report.witnesses.push(format!("pair {idx}: {name} left the tagged lattice"));
                }
            }
        }

        let meet = meet_convex(a, b)?;
        if !meet.is_empty()? {
            let f_meet = oracle.query(&meet)?;
            let expect = meet_convex(&fa, &fb)?;
            if !f_meet.set_eq(&expect)? {
                report.meet_violations += 1;
                if report.witnesses.len() < 8 {
                    report.witnesses.push(format!("pair {idx}: phi(A meet B) != phi(A) meet phi(B)"));
                }
            }
        }

        let join = join_convex(a, b)?;
        let f_join = oracle.query(&join)?;
        let expect = join_convex(&fa, &fb)?;
        if !f_join.set_eq(&expect)? {
            report.join_violations += 1;
            if report.witnesses.len() < 8 {
                report.witnesses.push(format!("pair {idx}: phi(A join B) != phi(A) join phi(B)"));
            }
        }

        // order preservation on comparable pairs: A subset A join B
        if !(fa.subset_of(&f_join)? && fb.subset_of(&f_join)?) {
            report.order_violations += 1;
            if report.witnesses.len() < 8 {
                report.witnesses.push(format!("pair {idx}: inclusion not preserved into the join"));
            }
        }
    }
    Ok(report)
}

/// The dyadic ladder `{2^k : k = levels..-levels}` sorted descending.
pub fn dyadic_ladder(levels: i32) -> Vec<f64> {
    (-levels..=levels).rev().map(|k| 2f64.powi(k)).collect()
}

/// Extend a set map defined on solid symmetric compacta to an arbitrary
/// symmetric compact `a` by intersecting the images of `a join (q * ball)`
/// down the ladder. The truncation error of the finite ladder is bounded by
/// the smallest rung times the oracle's modulus; with the generating map
/// linear this is `|U| * q_min * diam(ball)` (an implementer's bound, not
/// part of the construction).
pub fn extend_to_compact(
    oracle: &Oracle<Polyhedron>,
    a: &Polyhedron,
    ladder: &[f64],
    unit_ball: &Polyhedron,
) -> Result<Polyhedron> {
    if ladder.is_empty() {
        return Err(Error::EmptyInput("ladder must be nonempty".into()));
    }
    if ladder.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Parse("ladder must be sorted descending".into()));
    }
    let images = crate::batch::try_batch_map(ladder, |&q| {
        let rung = join_convex(a, &unit_ball.scale(q)?)?;
        oracle.query(&rung)
    })?;
    let mut acc: Option<Polyhedron> = None;
    for img in images {
        acc = Some(match acc {
            None => img,
            Some(cur) => meet_convex(&cur, &img)?,
        });
    }
    acc.unwrap().canonicalize()
}
