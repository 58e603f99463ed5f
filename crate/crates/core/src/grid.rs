//! Sampled 1-D functions on uniform grids, the substrate of the fast
//! discrete Legendre transform. `+inf` entries mark points outside the
//! effective domain; the finite entries must form one contiguous block.

use crate::error::{Error, Result};
use crate::num::cross2_sign;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    x_min: f64,
    step: f64,
    values: Vec<f64>,
}

impl GridFunction1D {
    pub fn new(x_min: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::EmptyInput("grid needs at least two nodes".into()));
        }
        if step <= 0.0 || !step.is_finite() || !x_min.is_finite() {
            return Err(Error::Parse("grid spacing must be positive and finite".into()));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::Parse("grid values must be finite or +inf".into()));
        }
        let g = GridFunction1D { x_min, step, values };
        let (lo, hi) = g.finite_block()?;
        if g.values[lo..hi].iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("finite grid values must be contiguous".into()));
        }
        Ok(g)
    }

    /// Sample `f` on `count` nodes from `x_min` with spacing `step`.
    pub fn sample(x_min: f64, step: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..count).map(|i| f(x_min + step * i as f64)).collect();
        GridFunction1D::new(x_min, step, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + self.step * i as f64
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Half-open index range of the finite block.
    pub fn finite_block(&self) -> Result<(usize, usize)> {
        let lo = self.values.iter().position(|v| v.is_finite());
        let hi = self.values.iter().rposition(|v| v.is_finite());
        match (lo, hi) {
            (Some(l), Some(h)) => Ok((l, h + 1)),
            _ => Err(Error::EmptyInput("grid has no finite samples".into())),
        }
    }

    pub fn num_finite(&self) -> usize {
        self.values.iter().filter(|v| v.is_finite()).count()
    }

    /// Lower convex envelope of the sample points (monotone-chain lower
    /// hull interpolated back onto the grid). Output <= input pointwise and
    /// the minimum is preserved.
    pub fn lsc_hull(&self) -> Result<GridFunction1D> {
        let (lo, hi) = self.finite_block()?;
        if hi - lo < 2 {
            return Err(Error::EmptyInput("lsc hull needs at least two finite samples".into()));
        }
        let hull = lower_hull_indices(&self.values, lo, hi);
        let mut out = self.values.clone();
        let mut seg = 0;
        for i in lo..hi {
            while seg + 1 < hull.len() && hull[seg + 1] < i {
                seg += 1;
            }
            let a = hull[seg];
            let b = hull[(seg + 1).min(hull.len() - 1)];
            if i <= a || a == b {
                out[i] = self.values[a];
            } else if i == b {
                out[i] = self.values[b];
            } else {
                let t = (i - a) as f64 / (b - a) as f64;
                out[i] = self.values[a] + t * (self.values[b] - self.values[a]);
            }
        }
        GridFunction1D::new(self.x_min, self.step, out)
    }
}

/// Indices of the lower convex hull of `(node_i, values_i)` over `[lo, hi)`,
/// keeping collinear points. The turn test uses an exact determinant sign so
/// convex input is never dropped by rounding.
pub(crate) fn lower_hull_indices(values: &[f64], lo: usize, hi: usize) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // pop b when it lies strictly above segment a-i
            let ux = (b - a) as f64;
            let uy = values[b] - values[a];
            let vx = (i - a) as f64;
            let vy = values[i] - values[a];
            if cross2_sign(ux, uy, vx, vy) < 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}
