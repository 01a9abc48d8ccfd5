use num_traits::Zero;

use super::geom::Point2;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Exact affine coordinates on a 2-plane of `Q^n` given by three affinely
/// independent points `p0, p1, p2`: `x = p0 + c1 (p1 - p0) + c2 (p2 - p0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    origin: Vec<Rational>,
    axes: [Vec<Rational>; 2],
    /// Two coordinates on which the axes form an invertible 2x2 block.
    rows: (usize, usize),
    det: Rational,
}

impl AffineChart {
    pub fn from_points(p0: &[Rational], p1: &[Rational], p2: &[Rational]) -> Result<Self> {
        let n = p0.len();
        if p1.len() != n || p2.len() != n {
            return Err(Error::Dimension("chart points of unequal length".into()));
        }
        let e1: Vec<Rational> = p1.iter().zip(p0).map(|(a, b)| a - b).collect();
        let e2: Vec<Rational> = p2.iter().zip(p0).map(|(a, b)| a - b).collect();
        Self::from_axes(p0.to_vec(), e1, e2)
    }

    fn from_axes(origin: Vec<Rational>, e1: Vec<Rational>, e2: Vec<Rational>) -> Result<Self> {
        let n = origin.len();
        for r in 0..n {
            for s in r + 1..n {
                let det = &e1[r] * &e2[s] - &e1[s] * &e2[r];
                if !det.is_zero() {
                    return Ok(AffineChart {
                        origin,
                        axes: [e1, e2],
                        rows: (r, s),
                        det,
                    });
                }
            }
        }
        Err(Error::DegeneratePolygon(
            "chart points are affinely dependent".into(),
        ))
    }

    /// Same plane with the two axes exchanged (flips orientation).
    pub fn swapped(&self) -> Self {
        let [e1, e2] = self.axes.clone();
        Self::from_axes(self.origin.clone(), e2, e1).expect("same plane")
    }

    pub fn ambient(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[Rational] {
        &self.origin
    }

    pub fn axes(&self) -> &[Vec<Rational>; 2] {
        &self.axes
    }

    pub fn from_chart(&self, p: &Point2) -> Vec<Rational> {
        (0..self.ambient())
            .map(|i| &self.origin[i] + &p.x * &self.axes[0][i] + &p.y * &self.axes[1][i])
            .collect()
    }

    /// Chart coordinates of `x`; fails unless `x` lies on the plane exactly.
    pub fn to_chart(&self, x: &[Rational]) -> Result<Point2> {
        if x.len() != self.ambient() {
            return Err(Error::Dimension("point has wrong ambient dimension".into()));
        }
        let (r, s) = self.rows;
        let [e1, e2] = &self.axes;
        let br = &x[r] - &self.origin[r];
        let bs = &x[s] - &self.origin[s];
        let c1 = (&br * &e2[s] - &bs * &e2[r]) / &self.det;
        let c2 = (&e1[r] * &bs - &e1[s] * &br) / &self.det;
        let p = Point2::new(c1, c2);
        if self.from_chart(&p) != x {
            return Err(Error::OffLine("point is not on the chart plane".into()));
        }
        Ok(p)
    }
}
