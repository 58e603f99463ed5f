//! Wire formats: JSON schemas for functions, polyhedra and transforms, CSV
//! for 1-D grids, and the JSON-lines request/response protocol that lets the
//! CLI replay black-box oracles from a file.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::affine::AffineFunctional;
use crate::error::{Error, Result};
use crate::function::PLConvexFunction;
use crate::grid::GridFunction1D;
use crate::polyhedron::{BodyFlags, Halfspace, Polyhedron};
use crate::transform::{CanonicalTransform, TransformMode};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceWire {
    pub phi: Vec<f64>,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfspaceWire {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FlagsWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contains_origin: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PolyhedronWire {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub halfspaces: Vec<HalfspaceWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionWire {
    pub n: usize,
    pub pieces: Vec<PieceWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PolyhedronWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformWire {
    pub alpha: f64,
    #[serde(rename = "U")]
    pub u: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
    pub phi0: Vec<f64>,
    pub r0: f64,
    pub mode: String,
}

fn vec_to_dvector(v: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(v)
}

// ----- polyhedron -----

pub fn polyhedron_to_wire(p: &Polyhedron) -> PolyhedronWire {
    PolyhedronWire {
        vertices: p
            .vertices()
            .map(|vs| vs.iter().map(|v| v.iter().copied().collect()).collect())
            .unwrap_or_default(),
        rays: p.rays().iter().map(|r| r.iter().copied().collect()).collect(),
        halfspaces: p
            .halfspaces()
            .map(|hs| {
                hs.iter()
                    .map(|h| HalfspaceWire {
                        normal: h.normal.iter().copied().collect(),
                        offset: h.offset,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        flags: Some(FlagsWire {
            symmetric: p.flags.symmetric,
            contains_origin: p.flags.contains_origin,
            bounded: p.flags.bounded,
        }),
    }
}

pub fn polyhedron_from_wire(w: &PolyhedronWire, dim: usize) -> Result<Polyhedron> {
    let has_v = !w.vertices.is_empty() || !w.rays.is_empty();
    let has_h = !w.halfspaces.is_empty();
    for row in w.vertices.iter().chain(w.rays.iter()) {
        if row.len() != dim {
            return Err(Error::Parse(format!(
                "polyhedron row has length {}, expected {dim}",
                row.len()
            )));
        }
    }
    for h in &w.halfspaces {
        if h.normal.len() != dim {
            return Err(Error::Parse(format!(
                "halfspace normal has length {}, expected {dim}",
                h.normal.len()
            )));
        }
    }
    let mut p = if has_v && has_h {
        Polyhedron::with_both(
            dim,
            w.vertices.iter().map(|v| vec_to_dvector(v)).collect(),
            w.rays.iter().map(|r| vec_to_dvector(r)).collect(),
            w.halfspaces.iter().map(|h| Halfspace::new(vec_to_dvector(&h.normal), h.offset)).collect(),
        )
    } else if has_v {
        Polyhedron::from_vertices(
            dim,
            w.vertices.iter().map(|v| vec_to_dvector(v)).collect(),
            w.rays.iter().map(|r| vec_to_dvector(r)).collect(),
        )
    } else if has_h {
        Polyhedron::from_halfspaces(
            dim,
            w.halfspaces.iter().map(|h| Halfspace::new(vec_to_dvector(&h.normal), h.offset)).collect(),
        )
    } else {
        return Err(Error::Parse("polyhedron needs vertices or halfspaces".into()));
    };
    if let Some(f) = &w.flags {
        p.flags = BodyFlags {
            symmetric: f.symmetric,
            contains_origin: f.contains_origin,
            bounded: f.bounded,
        };
    }
    Ok(p)
}

// ----- function -----

pub fn function_to_wire(f: &PLConvexFunction) -> FunctionWire {
    FunctionWire {
        n: f.dim(),
        pieces: f
            .pieces()
            .iter()
            .map(|p| PieceWire { phi: p.gradient().iter().copied().collect(), c: p.offset() })
            .collect(),
        domain: f.domain().map(polyhedron_to_wire),
    }
}

pub fn function_from_wire(w: &FunctionWire) -> Result<PLConvexFunction> {
    if w.n == 0 {
        return Err(Error::Parse("function dimension must be >= 1".into()));
    }
    let pieces = w
        .pieces
        .iter()
        .map(|p| {
            if p.phi.len() != w.n {
                return Err(Error::Parse(format!(
                    "piece gradient has length {}, expected {}",
                    p.phi.len(),
                    w.n
                )));
            }
            AffineFunctional::new(vec_to_dvector(&p.phi), p.c)
        })
        .collect::<Result<Vec<_>>>()?;
    let domain = match &w.domain {
        Some(d) => Some(polyhedron_from_wire(d, w.n)?),
        None => None,
    };
    PLConvexFunction::new(w.n, pieces, domain)
}

pub fn function_to_json(f: &PLConvexFunction) -> String {
    sorted_json(&function_to_wire(f))
}

pub fn function_from_json(s: &str) -> Result<PLConvexFunction> {
    let wire: FunctionWire =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("function JSON: {e}")))?;
    function_from_wire(&wire)
}

// ----- transform -----

pub fn transform_to_wire(t: &CanonicalTransform) -> TransformWire {
    TransformWire {
        alpha: t.alpha(),
        u: (0..t.matrix().nrows())
            .map(|i| t.matrix().row(i).iter().copied().collect())
            .collect(),
        shift: t.shift().iter().copied().collect(),
        phi0: t.phi0().iter().copied().collect(),
        r0: t.r0(),
        mode: match t.mode() {
            TransformMode::Preserving => "preserving".into(),
            TransformMode::Reversing => "reversing".into(),
        },
    }
}

pub fn transform_from_wire(w: &TransformWire) -> Result<CanonicalTransform> {
    let n = w.u.len();
    if n == 0 || w.u.iter().any(|row| row.len() != n) {
        return Err(Error::Parse("transform matrix must be square and nonempty".into()));
    }
    let mut u = DMatrix::zeros(n, n);
    for (i, row) in w.u.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            u[(i, j)] = *v;
        }
    }
    let mode = match w.mode.as_str() {
        "preserving" => TransformMode::Preserving,
        "reversing" => TransformMode::Reversing,
        other => return Err(Error::Parse(format!("unknown transform mode '{other}'"))),
    };
    CanonicalTransform::new(
        w.alpha,
        u,
        vec_to_dvector(&w.shift),
        vec_to_dvector(&w.phi0),
        w.r0,
        mode,
    )
}

pub fn transform_to_json(t: &CanonicalTransform) -> String {
    sorted_json(&transform_to_wire(t))
}

pub fn transform_from_json(s: &str) -> Result<CanonicalTransform> {
    let wire: TransformWire =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("transform JSON: {e}")))?;
    transform_from_wire(&wire)
}

/// Serialize any value as pretty JSON with lexicographically sorted keys
/// (serde_json's default map representation), for byte-stable CLI output.
pub fn sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serialization cannot fail");
    serde_json::to_string_pretty(&v).expect("json to string cannot fail")
}

// ----- grid CSV -----

/// Two columns `x,value` with an `inf` sentinel for +infinity.
pub fn grid_to_csv(g: &GridFunction1D) -> String {
    let mut out = String::from("x,value\n");
    for i in 0..g.len() {
        let v = g.values()[i];
        if v.is_finite() {
            out.push_str(&format!("{},{}\n", g.node(i), v));
        } else {
            out.push_str(&format!("{},inf\n", g.node(i)));
        }
    }
    out
}

pub fn grid_from_csv(s: &str) -> Result<GridFunction1D> {
    let mut xs: Vec<f64> = Vec::new();
    let mut vs: Vec<f64> = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
            continue;
        }
        let (xs_str, v_str) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'x,value'", lineno + 1)))?;
        let x: f64 = xs_str
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: bad x ({e})", lineno + 1)))?;
        let v_str = v_str.trim();
        let v = if v_str.eq_ignore_ascii_case("inf") || v_str == "+inf" || v_str == "infinity" {
            f64::INFINITY
        } else {
            v_str
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: bad value ({e})", lineno + 1)))?
        };
        xs.push(x);
        vs.push(v);
    }
    if xs.len() < 2 {
        return Err(Error::Parse("grid CSV needs at least two rows".into()));
    }
    let step = xs[1] - xs[0];
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * (1.0 + step.abs()) {
            return Err(Error::Parse("grid nodes must be uniformly spaced".into()));
        }
    }
    GridFunction1D::new(xs[0], step, vs)
}

// ----- oracle batch protocol -----

/// One JSON line of a recorded oracle exchange.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchLine {
    pub request: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<serde_json::Value>,
}

/// A replay oracle backed by recorded request/response lines, keyed by the
/// canonical (sorted-key) serialization of the request.
#[derive(Debug, Clone, Default)]
pub struct BatchTape {
    map: HashMap<String, serde_json::Value>,
}

impl BatchTape {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let entry: BatchLine = serde_json::from_str(line)
                .map_err(|e| Error::Parse(format!("batch line {}: {e}", lineno + 1)))?;
            let response = entry.response.ok_or_else(|| {
                Error::Parse(format!("batch line {}: missing response", lineno + 1))
            })?;
            map.insert(canonical_key(&entry.request), response);
        }
        Ok(BatchTape { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn lookup(&self, request: &serde_json::Value) -> Result<&serde_json::Value> {
        self.map.get(&canonical_key(request)).ok_or_else(|| {
            Error::Oracle(format!(
                "batch tape has no response for request {}",
                serde_json::to_string(request).unwrap_or_default()
            ))
        })
    }
}

/// Canonical lookup key: serde_json's Value already sorts object keys.
pub fn canonical_key(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("value to string cannot fail")
}
