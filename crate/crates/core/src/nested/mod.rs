//! Minimum-vertex convex polygons nested between an inner point set and an
//! outer convex polygon, solved exactly over the rationals.

mod boundary;
pub mod oracle;
mod solver;

use serde::{Deserialize, Serialize};

use crate::edm::StochasticEdm;
use crate::error::{Error, Result};
use crate::exact::{serde_str, Rational};
use crate::polygeom::{edges_touched, slice_geometry, verify_convex_combination, Point2, Polygon2};

pub use solver::min_nested_polygon;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedInstance {
    pub inner: Vec<Point2>,
    pub outer: Polygon2,
}

impl NestedInstance {
    pub fn new(inner: Vec<Point2>, outer: Polygon2) -> Result<Self> {
        let inst = NestedInstance { inner, outer };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inner.is_empty() {
            return Err(Error::Dimension("no inner points".into()));
        }
        if let Some(p) = self.inner.iter().find(|p| !self.outer.contains(p)) {
            return Err(Error::Infeasible(format!("inner point {p:?} lies outside the outer polygon")));
        }
        Ok(())
    }

    /// Columns of `D'` inside the slice of the simplex, in chart coordinates.
    pub fn from_edm(a: &StochasticEdm) -> Result<Self> {
        let g = slice_geometry(a)?;
        NestedInstance::new(g.inner, g.outer)
    }
}

/// A nested polygon with exact witnesses: convex weights of every inner
/// point over the polygon's vertices, and of every vertex over the outer
/// polygon's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedCertificate {
    pub polygon: Polygon2,
    pub k: usize,
    #[serde(with = "serde_str::nested")]
    pub inner_witnesses: Vec<Vec<Rational>>,
    #[serde(with = "serde_str::nested")]
    pub vertex_witnesses: Vec<Vec<Rational>>,
}

impl NestedCertificate {
    /// Builds the witnesses for `polygon`, failing if it is not nested.
    pub fn for_polygon(polygon: Polygon2, inst: &NestedInstance) -> Result<Self> {
        let inner_witnesses = inst
            .inner
            .iter()
            .map(|p| {
                polygon
                    .convex_coefficients(p)
                    .ok_or_else(|| Error::Infeasible(format!("{p:?} is not covered")))
            })
            .collect::<Result<Vec<_>>>()?;
        let vertex_witnesses = polygon
            .vertices()
            .iter()
            .map(|v| {
                inst.outer
                    .convex_coefficients(v)
                    .ok_or_else(|| Error::Infeasible(format!("vertex {v:?} escapes the outer polygon")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NestedCertificate {
            k: polygon.len(),
            polygon,
            inner_witnesses,
            vertex_witnesses,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        self.polygon.vertices()
    }
}

/// True iff every witness in `cert` checks out exactly against `inst`.
pub fn check_nested(cert: &NestedCertificate, inst: &NestedInstance) -> bool {
    let verts = cert.polygon.vertices();
    cert.k == verts.len()
        && cert.inner_witnesses.len() == inst.inner.len()
        && cert.vertex_witnesses.len() == verts.len()
        && inst
            .inner
            .iter()
            .zip(&cert.inner_witnesses)
            .all(|(p, w)| verify_convex_combination(verts, w, p))
        && verts
            .iter()
            .zip(&cert.vertex_witnesses)
            .all(|(v, w)| verify_convex_combination(inst.outer.vertices(), w, v))
}

/// Minimum nested polygon for the slice of a column-stochastic EDM.
pub fn restricted_rank_certificate(a: &StochasticEdm) -> Result<NestedCertificate> {
    min_nested_polygon(&NestedInstance::from_edm(a)?)
}

/// Smallest `k` such that `D' = BC` with `B, C >= 0`, `B` of width `k` and
/// `col(B) ⊆ col(D')`.
pub fn restricted_rank_plus(a: &StochasticEdm) -> Result<usize> {
    Ok(restricted_rank_certificate(a)?.k)
}

/// Per-edge flags: whether each outer edge holds an inner point.
pub fn edge_touching(inst: &NestedInstance) -> Vec<bool> {
    edges_touched(&inst.outer, &inst.inner)
}

/// Whether every edge of the outer polygon of `a` holds a column of `D'`.
pub fn edge_touching_audit(a: &StochasticEdm) -> Result<bool> {
    Ok(edge_touching(&NestedInstance::from_edm(a)?).iter().all(|&t| t))
}
