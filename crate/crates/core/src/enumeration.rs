//! Vertex, extreme-ray and facet enumeration for small-dimensional polyhedra.
//!
//! The H-to-V direction splits off the lineality space, projects onto its
//! orthogonal complement (where the polyhedron is pointed) and enumerates
//! basic solutions over constraint subsets. The V-to-H direction enumerates
//! extreme rays of the polar cone of the homogenization. Subset enumeration
//! is exponential in the dimension, which is fine at desk scale (n <= 4-ish
//! ambient, a few dozen constraints).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::num::{EPS_GEOM, EPS_RANK};

/// Generators of a polyhedron: conv(vertices) + cone(rays) + span(lineality).
#[derive(Debug, Clone)]
pub struct Generators {
    pub vertices: Vec<DVector<f64>>,
    pub rays: Vec<DVector<f64>>,
    pub lineality: Vec<DVector<f64>>,
}

/// Orthonormal bases of the nullspace and row space of `a` (as columns),
/// from the spectral decomposition of `a^T a`. Full bases even for wide
/// matrices, which thin SVD does not provide.
fn spectral_split(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = a.ncols();
    if a.nrows() == 0 {
        return (DMatrix::identity(d, d), DMatrix::zeros(d, 0));
    }
    let ata = a.transpose() * a;
    let se = ata.symmetric_eigen();
    let svs: Vec<f64> = se.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let sv_max = svs.iter().cloned().fold(0.0, f64::max);
    // eigenvalues of a^T a carry O(machine eps * lambda_max) noise, so the
    // smallest resolvable singular value scales like sqrt(eps) * sv_max
    let cut = 1e-7 * (1.0 + sv_max);
    let mut null_cols = Vec::new();
    let mut row_cols = Vec::new();
    for (i, &sv) in svs.iter().enumerate() {
        let col: DVector<f64> = se.eigenvectors.column(i).into();
        if sv <= cut {
            null_cols.push(col);
        } else {
            row_cols.push(col);
        }
    }
    let pack = |cols: Vec<DVector<f64>>| {
        if cols.is_empty() {
            DMatrix::zeros(d, 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    };
    (pack(null_cols), pack(row_cols))
}

/// Orthonormal basis of the nullspace of `a` (columns).
pub fn nullspace(a: &DMatrix<f64>) -> DMatrix<f64> {
    spectral_split(a).0
}

/// Orthonormal basis of the row space of `a` (columns).
pub fn rowspace(a: &DMatrix<f64>) -> DMatrix<f64> {
    spectral_split(a).1
}

/// Orthonormalize a spanning set (columns of the result).
pub fn orthonormalize(vectors: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(dim, 0);
    }
    let m = DMatrix::from_columns(vectors);
    rowspace(&m.transpose())
}

fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(m - i) / (i + 1);
    }
    r
}

const SUBSET_BUDGET: usize = 4_000_000;

/// Enumerate the generators of `{ z : normals[i] . z <= offsets[i] }`.
///
/// Returns `None` when the polyhedron is empty. Lineality directions are
/// returned separately; vertices/rays live in the pointed quotient mapped
/// back to the ambient space.
pub fn vertex_enumeration(
    dim: usize,
    normals: &[DVector<f64>],
    offsets: &[f64],
) -> Result<Option<Generators>> {
    assert_eq!(normals.len(), offsets.len());
    let d = dim;
    debug_assert!(normals.iter().all(|n| n.len() == d));
    if normals.is_empty() {
        return Ok(Some(Generators {
            vertices: vec![DVector::zeros(d)],
            rays: Vec::new(),
            lineality: (0..d).map(|i| unit(d, i)).collect(),
        }));
    }
    let m = normals.len();
    let a = DMatrix::from_rows(&normals.iter().map(|n| n.transpose()).collect::<Vec<_>>());
    let lin = nullspace(&a);
    let q = rowspace(&a);
    let r = q.ncols();
    let lineality: Vec<DVector<f64>> = (0..lin.ncols()).map(|i| lin.column(i).into()).collect();

    if r == 0 {
        // no effective constraints: whole space or empty
        if offsets.iter().all(|&b| b >= -EPS_GEOM) {
            return Ok(Some(Generators {
                vertices: vec![DVector::zeros(d)],
                rays: Vec::new(),
                lineality,
            }));
        }
        return Ok(None);
    }

    let ap = &a * &q; // m x r, pointed system
    let b = DVector::from_row_slice(offsets);
    if binomial(m, r) > SUBSET_BUDGET {
        return Err(Error::Geometry(format!(
            "constraint subset count C({m},{r}) exceeds enumeration budget"
        )));
    }

    let feasible = |u: &DVector<f64>| -> bool {
        let res = &ap * u;
        (0..m).all(|i| res[i] <= b[i] + EPS_GEOM)
    };

    let mut vertices: Vec<DVector<f64>> = Vec::new();
    for_each_subset(m, r, |s| {
        let rows: Vec<_> = s.iter().map(|&i| ap.row(i)).collect();
        let sub = DMatrix::from_rows(&rows);
        let rhs = DVector::from_iterator(r, s.iter().map(|&i| b[i]));
        let lu = sub.full_piv_lu();
        if let Some(u) = lu.solve(&rhs) {
            // reject poorly determined systems: verify the residual
            let res = DMatrix::from_rows(&s.iter().map(|&i| ap.row(i)).collect::<Vec<_>>()) * &u
                - &rhs;
            if res.amax() < 1e-6 && feasible(&u) {
                let dup = vertices.iter().any(|v| (v - &u).amax() <= EPS_GEOM * (1.0 + u.amax()));
                if !dup {
                    vertices.push(u);
                }
            }
        }
        Ok(())
    })?;

    if vertices.is_empty() {
        // a pointed nonempty polyhedron owns a vertex; none found means empty
        return Ok(None);
    }

    // extreme rays of the recession cone { u : ap u <= 0 }
    let mut rays: Vec<DVector<f64>> = Vec::new();
    let cone_feasible = |w: &DVector<f64>| -> bool {
        let res = &ap * w;
        (0..m).all(|i| res[i] <= EPS_GEOM)
    };
    if r == 1 {
        for sgn in [1.0, -1.0] {
            let w = DVector::from_element(1, sgn);
            if cone_feasible(&w) {
                rays.push(w);
            }
        }
    } else {
        for_each_subset(m, r - 1, |s| {
            let rows: Vec<_> = s.iter().map(|&i| ap.row(i)).collect();
            let sub = DMatrix::from_rows(&rows);
            let ns = nullspace(&sub);
            if ns.ncols() == 1 {
                let w: DVector<f64> = ns.column(0).into();
                for cand in [w.clone(), -w] {
                    if cone_feasible(&cand) {
                        let dup = rays.iter().any(|x| (x - &cand).amax() <= EPS_GEOM);
                        if !dup {
                            rays.push(cand);
                        }
                        break;
                    }
                }
            }
            Ok(())
        })?;
    }

    let back = |u: &DVector<f64>| -> DVector<f64> { &q * u };
    Ok(Some(Generators {
        vertices: vertices.iter().map(&back).collect(),
        rays: rays.iter().map(&back).collect(),
        lineality,
    }))
}

fn unit(d: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[i] = 1.0;
    v
}

/// A facet `normal . x <= offset`; equalities are reported separately.
#[derive(Debug, Clone)]
pub struct FacetDescription {
    pub halfspaces: Vec<(DVector<f64>, f64)>,
    pub equalities: Vec<(DVector<f64>, f64)>,
}

/// Facets of `conv(vertices) + cone(rays)` via extreme rays of the polar
/// cone of the homogenization. Lineality of that polar cone yields the
/// equality constraints that pin lower-dimensional bodies to their affine
/// hull.
pub fn facet_enumeration(
    vertices: &[DVector<f64>],
    rays: &[DVector<f64>],
) -> Result<FacetDescription> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput("facet enumeration of an empty body".into()));
    }
    let d = vertices[0].len();
    // polar cone of cone{(v,1), (r,0)}: rows (v,1) and (r,0), constraint <= 0
    let mut normals: Vec<DVector<f64>> = Vec::new();
    for v in vertices {
        let mut row = DVector::zeros(d + 1);
        row.rows_mut(0, d).copy_from(v);
        row[d] = 1.0;
        normals.push(row);
    }
    for r in rays {
        let mut row = DVector::zeros(d + 1);
        row.rows_mut(0, d).copy_from(r);
        normals.push(row);
    }
    let offsets = vec![0.0; normals.len()];
    let gens = vertex_enumeration(d + 1, &normals, &offsets)?
        .ok_or_else(|| Error::Geometry("polar cone enumeration came back empty".into()))?;

    let mut out = FacetDescription { halfspaces: Vec::new(), equalities: Vec::new() };
    let mut push = |w: &DVector<f64>, eq: bool| {
        let a: DVector<f64> = w.rows(0, d).into();
        let a0 = w[d];
        let norm = a.norm();
        if norm <= EPS_RANK {
            return; // vacuous: 0 . x <= -a0 with a0 <= 0
        }
        let hs = (a.clone() / norm, -a0 / norm);
        if eq {
            out.equalities.push(hs);
        } else {
            out.halfspaces.push(hs);
        }
    };
    for w in &gens.rays {
        push(w, false);
    }
    for w in &gens.lineality {
        push(w, true);
    }
    Ok(out)
}
