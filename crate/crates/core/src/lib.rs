//! Computational convex duality on R^n.
//!
//! Exact Fenchel conjugation and support-function calculus for
//! piecewise-linear convex functions, lattices of convex bodies and linear
//! subspaces, the canonical fully order preserving / reversing transforms,
//! and black-box recovery of the linear data behind such transforms.

pub mod affine;
pub mod batch;
pub mod cones;
pub mod enumeration;
pub mod error;
pub mod fenchel;
pub mod function;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod num;
pub mod oracle;
pub mod polyhedron;
pub mod random;
pub mod reconstruct;
pub mod subspace;
pub mod transform;
pub mod verifier;

pub use affine::AffineFunctional;
pub use cones::{HomogeneousFunction, MinkowskiGauge, Seminorm, SublinearFunction};
pub use error::{Error, Result};
pub use function::PLConvexFunction;
pub use grid::GridFunction1D;
pub use lattice::{Segment, SegmentKind};
pub use oracle::Oracle;
pub use reconstruct::{IdentifiedTransform, RecoverOptions, RecoveredMap, ScalarClass};
pub use polyhedron::{BodyFlags, Halfspace, Polyhedron};
pub use subspace::Subspace;
pub use verifier::CheckReport;
pub use transform::{CanonicalTransform, TransformMode};
