//! Shared tolerances and small floating-point utilities.
//!
//! Every threshold used for a decision (feasibility, rank, ordering) lives
//! here so the numeric policy of the crate is visible in one place.

/// Simplex feasibility / pivot threshold.
pub const EPS_LP: f64 = 1e-9;
/// Vertex feasibility slack and dedup radius in polyhedral enumeration.
pub const EPS_GEOM: f64 = 1e-7;
/// Singular-value cutoff for rank decisions.
pub const EPS_RANK: f64 = 1e-10;
/// Slack allowed when deciding `f <= g` pointwise.
pub const EPS_ORDER: f64 = 1e-7;
/// Invertibility threshold for transform matrices.
pub const EPS_DET: f64 = 1e-12;
/// Principal-angle tolerance for subspace equality.
pub const EPS_SUBSPACE: f64 = 1e-8;
/// Relative tolerance for sampled homogeneity validation.
pub const EPS_HOMOGENEITY: f64 = 1e-9;

/// Relative-ish comparison that treats equal infinities as equal.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Exact sign of `ux * vy - uy * vx`.
///
/// The four inputs are taken as exact f64 values. A static error filter
/// accepts the plain floating-point sign when the magnitude safely clears
/// the rounding bound; near ties the determinant is accumulated as a
/// nonoverlapping expansion, so the returned sign is always exact.
pub fn cross2_sign(ux: f64, uy: f64, vx: f64, vy: f64) -> i8 {
    let p = ux * vy;
    let q = uy * vx;
    let d = p - q;
    let bound = 4.0 * f64::EPSILON * (p.abs() + q.abs());
    if d > bound {
        return 1;
    }
    if d < -bound {
        return -1;
    }
    cross2_sign_exact(ux, uy, vx, vy)
}

fn cross2_sign_exact(ux: f64, uy: f64, vx: f64, vy: f64) -> i8 {
    let (p, pe) = two_product(ux, vy);
    let (q, qe) = two_product(uy, vx);
    // det = (p + pe) - (q + qe); sum the four terms exactly
    let mut exp: Vec<f64> = vec![p];
    for t in [pe, -q, -qe] {
        exp = grow_expansion(&exp, t);
    }
    for &c in exp.iter().rev() {
        if c > 0.0 {
            return 1;
        }
        if c < 0.0 {
            return -1;
        }
    }
    0
}

fn grow_expansion(e: &[f64], b: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(e.len() + 1);
    let mut q = b;
    for &x in e {
        let (s, err) = two_sum(q, x);
        if err != 0.0 {
            out.push(err);
        }
        q = s;
    }
    out.push(q);
    out
}
