use num_traits::{Signed, Zero};
use serde::Serialize;

use super::chart::AffineChart;
use super::geom::{on_segment, orient, Point2, Polygon2};
use crate::edm::{AlphaVector, StochasticEdm};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Vertices `v_k = u_k / s_k` of the outer polygon in `Q^n`, where
/// `u_k[i] = (a_i - a_k)(a_i - a_{k+1})` (indices mod n) and `s_k` is the
/// coordinate sum. Dividing by `s_k` also fixes the sign of the wrap-around
/// vector `u_{n-1}`, which is nonpositive.
pub fn outer_vertices(alpha: &AlphaVector) -> Result<Vec<Vec<Rational>>> {
    let a = alpha.values();
    let n = a.len();
    (0..n)
        .map(|k| {
            let ak = alpha.at(k);
            let ak1 = alpha.at(k + 1);
            let u: Vec<Rational> = a.iter().map(|ai| (ai - ak) * (ai - ak1)).collect();
            let pos = u.iter().any(Signed::is_positive);
            let neg = u.iter().any(Signed::is_negative);
            if pos && neg {
                return Err(Error::Internal(format!("u_{k} has mixed signs")));
            }
            let s: Rational = u.iter().fold(Rational::zero(), |acc, v| acc + v);
            if s.is_zero() {
                return Err(Error::Internal(format!("u_{k} sums to zero")));
            }
            Ok(u.into_iter().map(|v| v / &s).collect())
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct OuterPolygon {
    /// `v_1..v_n` in `Q^n`.
    pub vertices: Vec<Vec<Rational>>,
    pub chart: AffineChart,
    /// The same vertices in chart coordinates, counterclockwise.
    pub polygon: Polygon2,
}

/// Outer polygon `Δ_n ∩ col(D')` in a chart spanned by the first, middle
/// and last columns of `D'`, oriented so that `v_1..v_n` run counterclockwise.
pub fn outer_polygon(a: &StochasticEdm) -> Result<OuterPolygon> {
    let n = a.n();
    let vertices = outer_vertices(&a.alpha)?;
    let dp = &a.dprime;
    let mut chart =
        AffineChart::from_points(&dp.column(0), &dp.column(n / 2), &dp.column(n - 1))?;
    let mut pts = vertices
        .iter()
        .map(|v| chart.to_chart(v))
        .collect::<Result<Vec<_>>>()?;
    if orient(&pts[0], &pts[1], &pts[2]).is_negative() {
        chart = chart.swapped();
        pts = vertices
            .iter()
            .map(|v| chart.to_chart(v))
            .collect::<Result<Vec<_>>>()?;
    }
    let polygon = Polygon2::new(pts)?;
    Ok(OuterPolygon {
        vertices,
        chart,
        polygon,
    })
}

/// Columns of `D'` in chart coordinates and their convex hull.
pub fn inner_points(a: &StochasticEdm, chart: &AffineChart) -> Result<(Vec<Point2>, Polygon2)> {
    let pts = (0..a.n())
        .map(|j| chart.to_chart(&a.dprime.column(j)))
        .collect::<Result<Vec<_>>>()?;
    let hull = Polygon2::hull_of(&pts)?;
    Ok((pts, hull))
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceGeometry {
    #[serde(skip)]
    pub chart: AffineChart,
    #[serde(skip)]
    pub outer_vertices: Vec<Vec<Rational>>,
    pub outer: Polygon2,
    pub inner: Vec<Point2>,
    pub inner_hull: Polygon2,
}

impl SliceGeometry {
    /// Whether each column of `D'` is a vertex of the inner hull.
    pub fn inner_extremal(&self) -> Vec<bool> {
        self.inner
            .iter()
            .map(|p| self.inner_hull.vertices().contains(p))
            .collect()
    }
}

pub fn slice_geometry(a: &StochasticEdm) -> Result<SliceGeometry> {
    let outer = outer_polygon(a)?;
    let (inner, inner_hull) = inner_points(a, &outer.chart)?;
    Ok(SliceGeometry {
        chart: outer.chart,
        outer_vertices: outer.vertices,
        outer: outer.polygon,
        inner,
        inner_hull,
    })
}

/// For each edge of `outer`, whether some point of `pts` lies on it.
pub fn edges_touched(outer: &Polygon2, pts: &[Point2]) -> Vec<bool> {
    (0..outer.len())
        .map(|i| {
            let (a, b) = outer.edge(i);
            pts.iter().any(|p| on_segment(a, b, p))
        })
        .collect()
}
