//! Recovery of the linear and affine data behind black-box order-transform
//! oracles.
//!
//! Every recovery probes a fixed deterministic design — basis directions,
//! sum directions `e_1 + e_j`, then seeded random validation probes — so
//! residuals are reproducible. Audits of an oracle's claimed order behavior
//! are sampled and advisory: a passing audit never proves the global
//! property, it only fails to refute it.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::cones::{
    hom_power_gauge, hom_power_seminorm, hom_root, Homogeneity, HomogeneousBase,
    HomogeneousFunction, MinkowskiGauge, Seminorm, SublinearFunction,
};
use crate::error::{Error, Result};
use crate::fenchel::conjugate_pl;
use crate::function::PLConvexFunction;
use crate::lattice::{Segment, SegmentKind};
use crate::oracle::Oracle;
use crate::polyhedron::Polyhedron;
use crate::random;
use crate::subspace::Subspace;
use crate::transform::{CanonicalTransform, TransformMode};

/// How tightly the recovered matrix is pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarClass {
    /// Up to a positive scalar (after sign normalization).
    UpToPositiveScalar,
    /// Up to sign.
    UpToSign,
    /// Fully determined.
    Exact,
}

/// A recovered linear map plus the verification residual that produced it.
/// The residual is always reported, never hidden.
#[derive(Debug, Clone)]
pub struct RecoveredMap {
    pub matrix: DMatrix<f64>,
    pub scalar_class: ScalarClass,
    pub residual: f64,
}

/// Probe- and audit-depth knobs shared by the recovery routines.
#[derive(Debug, Clone, Copy)]
pub struct RecoverOptions {
    pub seed: u64,
    /// Sampled order pairs examined before trusting an oracle's claim.
    pub audit_pairs: usize,
    /// Random validation probes after the parameters are assembled.
    pub validate: usize,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions { seed: 0xC0FFEE, audit_pairs: 100, validate: 50 }
    }
}

const SUBSPACE_TOL: f64 = 1e-8;
const SEGMENT_TOL: f64 = 1e-9;
const SEMINORM_TOL: f64 = 1e-9;
const MINK_TOL: f64 = 1e-9;
const SUBL_TOL: f64 = 1e-9;
const IDENTIFY_TOL: f64 = 1e-8;
const REVERSING_TOL: f64 = 1e-6;

/// Unit Frobenius norm, first nonzero entry of the first nonzero column
/// positive: the canonical representative of an up-to-scalar class.
pub fn normalize_up_to_scalar(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m / m.norm();
    'outer: for j in 0..out.ncols() {
        for i in 0..out.nrows() {
            if out[(i, j)].abs() > 1e-10 {
                if out[(i, j)] < 0.0 {
                    out = -out;
                }
                break 'outer;
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// Solve `anchor + c * u = mu * w` for `(c, mu)` in the least-squares sense
/// and demand a small residual; this is how relative scalings between probe
/// images are fixed.
fn relative_scaling(
    anchor: &DVector<f64>,
    u: &DVector<f64>,
    w: &DVector<f64>,
    context: &str,
) -> Result<(f64, f64)> {
    let n = anchor.len();
    let mut m = DMatrix::zeros(n, 2);
    m.column_mut(0).copy_from(u);
    m.column_mut(1).copy_from(&(-w));
    let rhs = -anchor.clone();
    let svd = m.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::NonRepresentable(format!("{context}: {e}")))?;
    let resid = (&m * &sol - &rhs).norm();
    if resid > 1e-7 * (1.0 + anchor.norm()) {
        return Err(Error::NonRepresentable(format!(
            "{context}: relative-scaling system is inconsistent (residual {resid:.3e})"
        )));
    }
    let (c, mu) = (sol[0], sol[1]);
    if c.abs() < 1e-10 || mu.abs() < 1e-10 {
        return Err(Error::NonRepresentable(format!(
            "{context}: degenerate relative scaling"
        )));
    }
    Ok((c, mu))
}

// ---------------------------------------------------------------------------
// subspace lattice
// ---------------------------------------------------------------------------

/// Recover the matrix behind a fully order preserving map of the subspace
/// lattice, unique up to a positive scalar after normalization.
pub fn recover_linear_subspaces(
    oracle: &Oracle<Subspace>,
    opts: &RecoverOptions,
) -> Result<RecoveredMap> {
    let n = oracle.dim();
    if n < 2 {
        return Err(Error::Unsupported("subspace recovery needs n >= 2".into()));
    }
    let line_image = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let img = oracle.query(&Subspace::line(x)?)?;
        if img.dim() != 1 {
            return Err(Error::NonRepresentable(format!(
                "image of a line has dimension {}",
                img.dim()
            )));
        }
        Ok(img.basis().column(0).into())
    };

    let v: Vec<DVector<f64>> = (0..n).map(|i| line_image(&unit(n, i))).collect::<Result<_>>()?;
    let mut columns: Vec<DVector<f64>> = vec![v[0].clone()];
    for j in 1..n {
        let w = line_image(&(unit(n, 0) + unit(n, j)))?;
        let (c, _mu) = relative_scaling(&v[0], &v[j], &w, "subspace scaling probe")?;
        columns.push(&v[j] * c);
    }
    let lambda = normalize_up_to_scalar(&DMatrix::from_columns(&columns));

    // verification on random subspaces of random dimension
    let mut rng = random::rng(opts.seed);
    let mut residual = 0.0f64;
    for _ in 0..opts.validate {
        let d = rng.random_range(1..n.max(2));
        let s = random::subspace(&mut rng, n, d);
        let image = oracle.query(&s)?;
        let expect = s.linear_image(&lambda)?;
        if !image.approx_eq(&expect) {
            return Err(Error::NonRepresentable(
                "oracle is not induced by any linear map (validation probe failed)".into(),
            ));
        }
        // quantitative residual: projection defect of the two bases
        let pb = expect.basis();
        let resid = (image.basis() - pb * (pb.transpose() * image.basis())).norm();
        residual = residual.max(resid);
    }
    if residual > SUBSPACE_TOL * 10.0 {
        return Err(Error::NonRepresentable(format!(
            "subspace validation residual {residual:.3e} is inconsistent with a linear map"
        )));
    }
    Ok(RecoveredMap { matrix: lambda, scalar_class: ScalarClass::UpToPositiveScalar, residual })
}

// ---------------------------------------------------------------------------
// symmetric segments
// ---------------------------------------------------------------------------

/// Recover `Lambda` with `oracle([-x, x]) = [-Lambda x, Lambda x]` from a
/// set map on the symmetric lattice. The endpoint sign is unobservable, so
/// the class is up-to-sign.
pub fn recover_from_segments(
    oracle: &Oracle<Polyhedron>,
    opts: &RecoverOptions,
) -> Result<RecoveredMap> {
    let n = oracle.dim();
    let seg_image = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let img = oracle.query(&Polyhedron::symmetric_segment(x))?;
        let seg = Segment::from_polyhedron(&img, SegmentKind::Symmetric).map_err(|_| {
            Error::NonRepresentable("image of a symmetric segment is not one".into())
        })?;
        if x.amax() > 1e-9 && seg.endpoint.amax() <= 1e-9 {
            return Err(Error::NonRepresentable(
                "a nonzero segment collapsed to the origin".into(),
            ));
        }
        Ok(seg.endpoint)
    };

    let u: Vec<DVector<f64>> = (0..n).map(|i| seg_image(&unit(n, i))).collect::<Result<_>>()?;
    let mut columns = vec![u[0].clone()];
    for j in 1..n {
        let w = seg_image(&(unit(n, 0) + unit(n, j)))?;
        let (c, _mu) = relative_scaling(&u[0], &u[j], &w, "segment scaling probe")?;
        columns.push(&u[j] * c);
    }
    let lambda = DMatrix::from_columns(&columns);

    // validation on random (generically non-collinear) directions
    let mut rng = random::rng(opts.seed);
    let mut residual = 0.0f64;
    for _ in 0..opts.validate {
        let x = random::vector(&mut rng, n, -2.0, 2.0);
        let y = seg_image(&x)?;
        let expect = &lambda * &x;
        let err = (&y - &expect).amax().min((&y + &expect).amax());
        residual = residual.max(err);
    }
    if residual > SEGMENT_TOL * 100.0 {
        return Err(Error::NonRepresentable(format!(
            "segment validation residual {residual:.3e} is inconsistent with a linear map"
        )));
    }
    Ok(RecoveredMap { matrix: lambda, scalar_class: ScalarClass::UpToSign, residual })
}

// ---------------------------------------------------------------------------
// seminorms
// ---------------------------------------------------------------------------

/// Recover `E` with `T f = f(E .)` for a fully order preserving map of the
/// seminorm cone, up to sign. Conjugates the oracle into the symmetric-body
/// lattice through the dual-body correspondence and delegates to
/// [`recover_from_segments`].
pub fn recover_seminorm_map(
    oracle: &Oracle<Seminorm>,
    opts: &RecoverOptions,
) -> Result<RecoveredMap> {
    let n = oracle.dim();
    audit_seminorm_order(oracle, opts)?;

    // F = D T S on segment probes: functional -> seminorm -> oracle -> dual segment
    let seg_image = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let img = oracle.query(&Seminorm::of_functional(x))?;
        let seg = Segment::from_polyhedron(img.dual_body(), SegmentKind::Symmetric)
            .map_err(|_| Error::NonRepresentable("seminorm image is not a segment seminorm".into()))?;
        if x.amax() > 1e-9 && seg.endpoint.amax() <= 1e-9 {
            return Err(Error::NonRepresentable("a nonzero seminorm collapsed to zero".into()));
        }
        Ok(seg.endpoint)
    };
    let u: Vec<DVector<f64>> = (0..n).map(|i| seg_image(&unit(n, i))).collect::<Result<_>>()?;
    let mut columns = vec![u[0].clone()];
    for j in 1..n {
        let w = seg_image(&(unit(n, 0) + unit(n, j)))?;
        let (c, _mu) = relative_scaling(&u[0], &u[j], &w, "seminorm scaling probe")?;
        columns.push(&u[j] * c);
    }
    // set-side matrix Lambda = E^T; report E
    let e = DMatrix::from_columns(&columns).transpose();

    // verify T f (x) = f(E x) on random seminorms and points
    let mut rng = random::rng(opts.seed);
    let mut residual = 0.0f64;
    let seminorms = 20.min(opts.validate.max(1));
    for _ in 0..seminorms {
        let body = random::symmetric_polytope(&mut rng, n, 3, 0.1);
        let f = Seminorm::new(body)?;
        let tf = oracle.query(&f)?;
        for _ in 0..opts.validate {
            let x = random::vector(&mut rng, n, -2.0, 2.0);
            let lhs = tf.eval(&x)?;
            let rhs = f.eval(&(&e * &x))?;
            if lhs.is_infinite() || rhs.is_infinite() {
                if lhs != rhs {
                    return Err(Error::NonRepresentable(
                        "seminorm action mismatch at infinite values".into(),
                    ));
                }
            } else {
                residual = residual.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
    }
    if residual > SEMINORM_TOL {
        return Err(Error::NonRepresentable(format!(
            "seminorm action residual {residual:.3e} exceeds {SEMINORM_TOL:.0e}"
        )));
    }
    Ok(RecoveredMap { matrix: e, scalar_class: ScalarClass::UpToSign, residual })
}

fn audit_seminorm_order(oracle: &Oracle<Seminorm>, opts: &RecoverOptions) -> Result<()> {
    let n = oracle.dim();
    let mut rng = random::rng(opts.seed ^ 0xA0D17);
    for _ in 0..opts.audit_pairs {
        // nested dual bodies give ordered seminorms
        let small = random::symmetric_polytope(&mut rng, n, 2, 0.05);
        let big = crate::lattice::join_convex(
            &small,
            &random::symmetric_polytope(&mut rng, n, 2, 0.05),
        )?;
        let fs = oracle.query(&Seminorm::new(small)?)?;
        let fb = oracle.query(&Seminorm::new(big)?)?;
        if !fs.dual_body().subset_of(fb.dual_body())? {
            return Err(Error::AuditFailed(
                "seminorm oracle does not preserve order on a sampled pair".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Minkowski functionals
// ---------------------------------------------------------------------------

/// Read `y` (up to sign) off an evaluable `|<y, .>|`.
fn read_abs_functional(
    eval: &dyn Fn(&DVector<f64>) -> Result<f64>,
    n: usize,
    context: &str,
) -> Result<DVector<f64>> {
    let mags: Vec<f64> = (0..n).map(|j| eval(&unit(n, j))).collect::<Result<_>>()?;
    if mags.iter().any(|m| !m.is_finite() || *m < -1e-9) {
        return Err(Error::NonRepresentable(format!("{context}: not a finite seminorm probe")));
    }
    let pivot = (0..n).max_by(|&a, &b| mags[a].partial_cmp(&mags[b]).unwrap()).unwrap();
    let mut y = DVector::zeros(n);
    if mags[pivot] <= 1e-12 {
        return Ok(y);
    }
    y[pivot] = mags[pivot];
    for j in 0..n {
        if j == pivot || mags[j] <= 1e-12 {
            continue;
        }
        let both = eval(&(unit(n, pivot) + unit(n, j)))?;
        let same = (both - (mags[pivot] + mags[j])).abs();
        let opposite = (both - (mags[pivot] - mags[j]).abs()).abs();
        y[j] = if same <= opposite { mags[j] } else { -mags[j] };
    }
    Ok(y)
}

/// Recover `E` with `T f = f(E .)` for a fully order preserving map of the
/// Minkowski cone, exactly: the seminorm restriction pins `{+-E}` and
/// anchored-segment probes disambiguate the sign.
pub fn recover_mink_map(
    oracle: &Oracle<MinkowskiGauge>,
    opts: &RecoverOptions,
) -> Result<RecoveredMap> {
    let n = oracle.dim();

    // seminorm restriction: probe |<a, .>| as a gauge (body = slab)
    let abs_image = |a: &DVector<f64>| -> Result<DVector<f64>> {
        let probe = MinkowskiGauge::new(Polyhedron::slab(a)?)?;
        let img = oracle.query(&probe)?;
        read_abs_functional(&|x| img.eval(x), n, "mink seminorm probe")
    };
    let u: Vec<DVector<f64>> = (0..n).map(|i| abs_image(&unit(n, i))).collect::<Result<_>>()?;
    if u.iter().any(|col| col.amax() <= 1e-12) {
        return Err(Error::NonRepresentable("a basis gauge collapsed to zero".into()));
    }
    let mut columns = vec![u[0].clone()];
    for j in 1..n {
        let w = abs_image(&(unit(n, 0) + unit(n, j)))?;
        let (c, _mu) = relative_scaling(&u[0], &u[j], &w, "mink scaling probe")?;
        columns.push(&u[j] * c);
    }
    // candidate E^T up to global sign
    let et = DMatrix::from_columns(&columns);

    // anchored probes read E^T exactly: T (<a,.>^+) = <E^T a, .>^+
    let anchored_image = |a: &DVector<f64>| -> Result<DVector<f64>> {
        let probe = MinkowskiGauge::new(Polyhedron::halfspace_body(a)?)?;
        let img = oracle.query(&probe)?;
        let mut y = DVector::zeros(n);
        for j in 0..n {
            let plus = img.eval(&unit(n, j))?;
            let minus = img.eval(&(-unit(n, j)))?;
            if !plus.is_finite() || !minus.is_finite() {
                return Err(Error::NonRepresentable(
                    "anchored probe image is not a positive part".into(),
                ));
            }
            y[j] = plus - minus;
        }
        Ok(y)
    };
    let y0 = anchored_image(&unit(n, 0))?;
    let col0: DVector<f64> = et.column(0).into();
    let plus_err = (&y0 - &col0).amax();
    let minus_err = (&y0 + &col0).amax();
    let scale = 1.0 + y0.amax();
    let sign = if plus_err <= 1e-6 * scale {
        1.0
    } else if minus_err <= 1e-6 * scale {
        -1.0
    } else {
        return Err(Error::NonRepresentable(
            "anchored probe is inconsistent with both signs".into(),
        ));
    };
    // cross-check the remaining anchored directions against the chosen sign
    for i in 1..n {
        let yi = anchored_image(&unit(n, i))?;
        let coli: DVector<f64> = et.column(i).into();
        if (&yi - &(coli * sign)).amax() > 1e-6 * (1.0 + yi.amax()) {
            return Err(Error::NonRepresentable(
                "anchored probes disagree on the sign".into(),
            ));
        }
    }
    let e = (et * sign).transpose();

    // validate on random gauges
    let mut rng = random::rng(opts.seed);
    let mut residual = 0.0f64;
    for _ in 0..20.min(opts.validate.max(1)) {
        let body = random::polytope_with_origin(&mut rng, n, 4);
        let f = MinkowskiGauge::new(body)?;
        let tf = oracle.query(&f)?;
        for _ in 0..opts.validate {
            let x = random::vector(&mut rng, n, -2.0, 2.0);
            let lhs = tf.eval(&x)?;
            let rhs = f.eval(&(&e * &x))?;
            if lhs.is_infinite() || rhs.is_infinite() {
                if lhs != rhs {
                    return Err(Error::NonRepresentable(
                        "gauge action mismatch at infinite values".into(),
                    ));
                }
            } else {
                residual = residual.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
    }
    if residual > MINK_TOL {
        return Err(Error::NonRepresentable(format!(
            "gauge action residual {residual:.3e} exceeds {MINK_TOL:.0e}"
        )));
    }
    Ok(RecoveredMap { matrix: e, scalar_class: ScalarClass::Exact, residual })
}

// ---------------------------------------------------------------------------
// degree-p homogeneous functions
// ---------------------------------------------------------------------------

/// Reduce a degree-p oracle to the degree-1 case through p-th roots and
/// delegate: positively homogeneous functions reduce to gauges (exact sign),
/// absolutely homogeneous ones to seminorms (sign class).
pub fn recover_homogeneous_map(
    oracle: &Oracle<HomogeneousFunction>,
    degree: f64,
    mode: Homogeneity,
    opts: &RecoverOptions,
) -> Result<RecoveredMap> {
    if degree < 1.0 {
        return Err(Error::NegativeScale(degree));
    }
    let n = oracle.dim();
    match mode {
        Homogeneity::Positive => {
            let inner = Oracle::new(n, move |k: &MinkowskiGauge| -> Result<MinkowskiGauge> {
                let f = hom_power_gauge(k.clone(), degree)?;
                match hom_root(oracle.query(&f)?) {
                    HomogeneousBase::Gauge(g) => Ok(g),
                    HomogeneousBase::Seminorm(s) => {
                        MinkowskiGauge::new(s.to_gauge()?.body().clone())
                    }
                }
            });
            recover_mink_map(&inner, opts)
        }
        Homogeneity::Absolute => {
            let inner = Oracle::new(n, move |k: &Seminorm| -> Result<Seminorm> {
                let f = hom_power_seminorm(k.clone(), degree)?;
                match hom_root(oracle.query(&f)?) {
                    HomogeneousBase::Seminorm(s) => Ok(s),
                    HomogeneousBase::Gauge(_) => {
                        Err(Error::Oracle("degree-p oracle changed the base kind".into()))
                    }
                }
            });
            recover_seminorm_map(&inner, opts)
        }
    }
}

// ---------------------------------------------------------------------------
// sublinear functions
// ---------------------------------------------------------------------------

/// Recover `(U, phi0)` with `T f = f(U .) + <phi0, .>` for a fully order
/// preserving map of the sublinear cone.
pub fn recover_sublinear_map(
    oracle: &Oracle<SublinearFunction>,
    opts: &RecoverOptions,
) -> Result<(RecoveredMap, DVector<f64>)> {
    let n = oracle.dim();
    let zero = SublinearFunction::linear(DVector::zeros(n));
    let t0 = oracle.query(&zero)?;
    let mut phi0 = DVector::zeros(n);
    for j in 0..n {
        let plus = t0.eval(&unit(n, j))?;
        let minus = t0.eval(&(-unit(n, j)))?;
        if !plus.is_finite() || !minus.is_finite() || (plus + minus).abs() > 1e-8 * (1.0 + plus.abs())
        {
            return Err(Error::NonRepresentable("T(0) is not a linear functional".into()));
        }
        phi0[j] = plus;
    }
    let mut rng = random::rng(opts.seed ^ 0x51B);
    for _ in 0..10 {
        let x = random::vector(&mut rng, n, -2.0, 2.0);
        let v = t0.eval(&x)?;
        if (v - phi0.dot(&x)).abs() > 1e-8 * (1.0 + v.abs()) {
            return Err(Error::NonRepresentable("T(0) is not a linear functional".into()));
        }
    }

    // S = T - T(0) on basis functionals: S(e_i*) = <U^T e_i, .>
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let img = oracle.query(&SublinearFunction::linear(unit(n, i)))?;
        let mut ui = DVector::zeros(n);
        for j in 0..n {
            let plus = img.eval(&unit(n, j))? - phi0[j];
            let minus = img.eval(&(-unit(n, j)))? + phi0[j];
            if (plus + minus).abs() > 1e-8 * (1.0 + plus.abs()) {
                return Err(Error::NonRepresentable(
                    "S is not linear on a basis probe".into(),
                ));
            }
            ui[j] = plus;
        }
        cols.push(ui);
    }
    // consistency probe: S(e_1* + e_2*) = S(e_1*) + S(e_2*)
    if n >= 2 {
        let img = oracle.query(&SublinearFunction::linear(unit(n, 0) + unit(n, 1)))?;
        for j in 0..n {
            let got = img.eval(&unit(n, j))? - phi0[j];
            let expect = cols[0][j] + cols[1][j];
            if (got - expect).abs() > 1e-8 * (1.0 + expect.abs()) {
                return Err(Error::NonRepresentable("S probes are inconsistent".into()));
            }
        }
    }
    let u = DMatrix::from_columns(&cols).transpose();

    // validation on random sublinear functions
    let mut residual = 0.0f64;
    for _ in 0..20.min(opts.validate.max(1)) {
        let body = random::polytope(&mut rng, n, 4);
        let f = SublinearFunction::new(body)?;
        let tf = oracle.query(&f)?;
        for _ in 0..opts.validate {
            let x = random::vector(&mut rng, n, -2.0, 2.0);
            let lhs = tf.eval(&x)?;
            let rhs = f.eval(&(&u * &x))? + phi0.dot(&x);
            if lhs.is_infinite() || rhs.is_infinite() {
                if lhs != rhs {
                    return Err(Error::NonRepresentable(
                        "sublinear action mismatch at infinite values".into(),
                    ));
                }
            } else {
                residual = residual.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
    }
    if residual > SUBL_TOL {
        return Err(Error::NonRepresentable(format!(
            "sublinear action residual {residual:.3e} exceeds {SUBL_TOL:.0e}"
        )));
    }
    Ok((RecoveredMap { matrix: u, scalar_class: ScalarClass::Exact, residual }, phi0))
}

// ---------------------------------------------------------------------------
// full convex cone: canonical transform identification
// ---------------------------------------------------------------------------

/// A transform recovered from a black-box oracle together with the maximal
/// pointwise validation residual.
#[derive(Debug, Clone)]
pub struct IdentifiedTransform {
    pub transform: CanonicalTransform,
    pub residual: f64,
}

/// Identify the canonical form of a fully order preserving oracle on the
/// convex cone: probe `T(0)` for the affine offset, `T(1)` for the scale,
/// basis functionals for the matrix and shift, then validate.
pub fn identify_preserving(
    oracle: &Oracle<PLConvexFunction>,
    opts: &RecoverOptions,
) -> Result<IdentifiedTransform> {
    let n = oracle.dim();
    let mut rng = random::rng(opts.seed);

    let t0 = oracle.query(&PLConvexFunction::zero(n))?;
    let r0 = finite(t0.eval(&DVector::zeros(n))?, "T(0) at 0")?;
    let mut phi0 = DVector::zeros(n);
    for j in 0..n {
        phi0[j] = finite(t0.eval(&unit(n, j))?, "T(0) at a basis point")? - r0;
    }
    for _ in 0..12 {
        let x = random::vector(&mut rng, n, -3.0, 3.0);
        let got = finite(t0.eval(&x)?, "T(0) at a sample")?;
        let expect = phi0.dot(&x) + r0;
        if (got - expect).abs() > 1e-8 * (1.0 + expect.abs()) {
            return Err(Error::AuditFailed("T(0) is not affine".into()));
        }
    }

    // S(1) is the constant alpha
    let t1 = oracle.query(&PLConvexFunction::constant(n, 1.0))?;
    let alpha = finite(t1.eval(&DVector::zeros(n))?, "T(1) at 0")? - r0;
    if alpha <= 0.0 {
        return Err(Error::AuditFailed(format!("S(1) = {alpha} is not positive")));
    }
    for _ in 0..6 {
        let x = random::vector(&mut rng, n, -3.0, 3.0);
        let s1 = finite(t1.eval(&x)?, "T(1) at a sample")? - finite(t0.eval(&x)?, "T(0)")?;
        if (s1 - alpha).abs() > 1e-8 * (1.0 + alpha.abs()) {
            return Err(Error::AuditFailed("S(1) is not constant".into()));
        }
    }

    // gradients of S on basis functionals give alpha U^T; constants give alpha x0
    let mut g = DMatrix::zeros(n, n);
    let mut consts = DVector::zeros(n);
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let probe = PLConvexFunction::from_piece(crate::affine::AffineFunctional::linear(
            unit(n, i),
        )?);
        let img = oracle.query(&probe)?;
        let c = finite(img.eval(&DVector::zeros(n))?, "S(e_i*) at 0")? - r0;
        consts[i] = c;
        for j in 0..n {
            g[(j, i)] =
                finite(img.eval(&unit(n, j))?, "S(e_i*) at a basis point")? - r0 - phi0[j] - c;
        }
        images.push(img);
    }
    // linearity audit: S(e_i* + e_j*) = S(e_i*) + S(e_j*) on sampled points
    for i in 0..n.min(3) {
        for j in (i + 1)..n.min(3) {
            let probe = PLConvexFunction::from_piece(crate::affine::AffineFunctional::linear(
                unit(n, i) + unit(n, j),
            )?);
            let img = oracle.query(&probe)?;
            for _ in 0..4 {
                let x = random::vector(&mut rng, n, -2.0, 2.0);
                let lhs = finite(img.eval(&x)?, "S(sum probe)")? - finite(t0.eval(&x)?, "T(0)")?;
                let rhs = finite(images[i].eval(&x)?, "S(e_i*)")?
                    + finite(images[j].eval(&x)?, "S(e_j*)")?
                    - 2.0 * finite(t0.eval(&x)?, "T(0)")?;
                if (lhs - rhs).abs() > 1e-8 * (1.0 + rhs.abs()) {
                    return Err(Error::AuditFailed("S is not additive on probes".into()));
                }
            }
        }
    }

    let u = (g.clone() / alpha).transpose();
    if u.determinant().abs() <= 1e-12 {
        return Err(Error::Singular("recovered matrix W is singular".into()));
    }
    let shift = consts / alpha;
    let transform =
        CanonicalTransform::new(alpha, u, shift, phi0, r0, TransformMode::Preserving)?;

    // order audit on certified pairs
    for _ in 0..opts.audit_pairs {
        let (f, gfun) = random::ordered_pair(&mut rng, n, false);
        let tf = oracle.query(&f)?;
        let tg = oracle.query(&gfun)?;
        if !tf.is_leq(&tg)? {
            return Err(Error::AuditFailed(
                "oracle does not preserve order on a sampled pair".into(),
            ));
        }
    }

    // validation: apply vs oracle, pointwise
    let mut residual = 0.0f64;
    for trial in 0..opts.validate {
        let pieces = rng.random_range(2..6);
        let f = if trial % 4 == 0 {
            random::pl_function_with_domain(&mut rng, n, pieces)
        } else {
            random::pl_function(&mut rng, n, pieces)
        };
        let expect = transform.apply(&f)?;
        let got = oracle.query(&f)?;
        for _ in 0..100 {
            let x = random::vector(&mut rng, n, -2.0, 2.0);
            let a = got.eval(&x)?;
            let b = expect.eval(&x)?;
            if a.is_infinite() || b.is_infinite() {
                if a != b {
                    residual = residual.max(1.0);
                }
            } else {
                residual = residual.max((a - b).abs() / (1.0 + b.abs()));
            }
        }
    }
    if residual > IDENTIFY_TOL {
        return Err(Error::NonRepresentable(format!(
            "identified transform reproduces the oracle only to {residual:.3e}"
        )));
    }
    Ok(IdentifiedTransform { transform, residual })
}

/// Identify a fully order reversing oracle by composing it with the Fenchel
/// transform (making it preserving) and re-expressing the result in
/// reversing mode. Capped at `n <= 3` by exact conjugation.
pub fn identify_reversing(
    oracle: &Oracle<PLConvexFunction>,
    opts: &RecoverOptions,
) -> Result<IdentifiedTransform> {
    let n = oracle.dim();
    if n > 3 {
        return Err(Error::DimensionCap(n));
    }
    // audit: order must flip
    let mut rng = random::rng(opts.seed ^ 0xF11);
    for _ in 0..opts.audit_pairs {
        let (f, g) = random::ordered_pair(&mut rng, n, false);
        let tf = oracle.query(&f)?;
        let tg = oracle.query(&g)?;
        if !tg.is_leq(&tf)? {
            return Err(Error::AuditFailed(
                "oracle does not reverse order on a sampled pair".into(),
            ));
        }
    }

    let composed = Oracle::new(n, move |f: &PLConvexFunction| {
        let conj = conjugate_pl(f)?;
        oracle.query(&conj)
    });
    let preserving = identify_preserving(&composed, opts)?;
    let t = preserving.transform;
    let transform = CanonicalTransform::new(
        t.alpha(),
        t.matrix().clone(),
        t.shift().clone(),
        t.phi0().clone(),
        t.r0(),
        TransformMode::Reversing,
    )?;

    let mut residual = 0.0f64;
    for _ in 0..opts.validate.min(25) {
        let pieces = rng.random_range(2..5);
        let f = random::pl_function(&mut rng, n, pieces);
        let expect = transform.apply(&f)?;
        let got = oracle.query(&f)?;
        for _ in 0..60 {
            let x = random::vector(&mut rng, n, -2.0, 2.0);
            let a = got.eval(&x)?;
            let b = expect.eval(&x)?;
            if a.is_infinite() || b.is_infinite() {
                if a != b {
                    residual = residual.max(1.0);
                }
            } else {
                residual = residual.max((a - b).abs() / (1.0 + b.abs()));
            }
        }
    }
    if residual > REVERSING_TOL {
        return Err(Error::NonRepresentable(format!(
            "reversing identification reproduces the oracle only to {residual:.3e}"
        )));
    }
    Ok(IdentifiedTransform { transform, residual })
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::AuditFailed(format!("{what} is not finite")))
    }
}
