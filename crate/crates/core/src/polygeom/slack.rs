use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::geom::{orient, Point2, Polygon2, PolygonKind};
use crate::error::{Error, Result};
use crate::exact::{serde_str, QMatrix, Rational};

/// Facet-by-vertex matrix of slacks `c_i(p_t) - b_i`; entrywise nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SlackMatrix(QMatrix);

impl SlackMatrix {
    pub fn new(s: QMatrix) -> Result<Self> {
        if !s.is_nonnegative() {
            return Err(Error::InvalidMatrix("slack matrix has a negative entry".into()));
        }
        Ok(SlackMatrix(s))
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_inner(self) -> QMatrix {
        self.0
    }
}

/// Slack matrix of the simplex slice: facets `x_i >= 0`, so
/// `S[i][k] = v_k[i]`.
pub fn slack_matrix_simplex_slice(vertices: &[Vec<Rational>]) -> Result<SlackMatrix> {
    SlackMatrix::new(QMatrix::from_columns(vertices)?)
}

/// `S[i][k] = det [[p_{i-1}, 1], [p_i, 1], [p_k, 1]]` for a cyclic point
/// sequence; row `i` belongs to the edge `(p_{i-1}, p_i)`.
pub fn oriented_volume_matrix(points: &[Point2]) -> QMatrix {
    let n = points.len();
    QMatrix::from_fn(n, n, |i, k| {
        orient(&points[(i + n - 1) % n], &points[i], &points[k])
    })
}

pub fn slack_matrix_polygon(p: &Polygon2) -> Result<SlackMatrix> {
    if p.kind() != PolygonKind::Polygon {
        return Err(Error::DegeneratePolygon(format!(
            "slack matrix needs at least 3 vertices, got {}",
            p.len()
        )));
    }
    SlackMatrix::new(oriented_volume_matrix(p.vertices()))
}

/// Invertible diagonals with `s1 = diag(row) * s2 * diag(col)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scaling {
    #[serde(with = "serde_str::vec")]
    pub row: Vec<Rational>,
    #[serde(with = "serde_str::vec")]
    pub col: Vec<Rational>,
    /// All diagonal entries strictly positive.
    pub positive: bool,
}

impl Scaling {
    pub fn apply(&self, s2: &QMatrix) -> QMatrix {
        QMatrix::from_fn(s2.rows(), s2.cols(), |i, j| {
            &self.row[i] * s2.get(i, j) * &self.col[j]
        })
    }
}

/// Finds nonzero diagonals relating `s1` and `s2`, or `None` when the zero
/// patterns differ or the entry ratios are not of rank-one form.
///
/// Within each connected component of the support graph, the column with the
/// smallest index gets the scale one; every other scale follows from the
/// ratios `s1[i][j] / s2[i][j]`. Any positive solution has the same signs up
/// to negating a whole component, so `positive` is exact.
pub fn scaling_equivalence(s1: &QMatrix, s2: &QMatrix) -> Option<Scaling> {
    if s1.rows() != s2.rows() || s1.cols() != s2.cols() {
        return None;
    }
    let (r, c) = (s1.rows(), s1.cols());
    for i in 0..r {
        for j in 0..c {
            if s1.get(i, j).is_zero() != s2.get(i, j).is_zero() {
                return None;
            }
        }
    }
    let ratio = |i: usize, j: usize| s1.get(i, j) / s2.get(i, j);
    let mut row: Vec<Option<Rational>> = vec![None; r];
    let mut col: Vec<Option<Rational>> = vec![None; c];
    let mut component_positive = true;
    for start in 0..c {
        if col[start].is_some() {
            continue;
        }
        col[start] = Some(Rational::from_integer(1.into()));
        // Queue of (is_row, index) whose scale was just fixed.
        let mut queue = VecDeque::from([(false, start)]);
        while let Some((is_row, idx)) = queue.pop_front() {
            if is_row {
                let d = row[idx].clone().expect("set");
                for j in 0..c {
                    if s2.get(idx, j).is_zero() {
                        continue;
                    }
                    let want = ratio(idx, j) / &d;
                    match &col[j] {
                        Some(v) if v != &want => return None,
                        Some(_) => {}
                        None => {
                            col[j] = Some(want);
                            queue.push_back((false, j));
                        }
                    }
                }
            } else {
                let d = col[idx].clone().expect("set");
                for i in 0..r {
                    if s2.get(i, idx).is_zero() {
                        continue;
                    }
                    let want = ratio(i, idx) / &d;
                    match &row[i] {
                        Some(v) if v != &want => return None,
                        Some(_) => {}
                        None => {
                            row[i] = Some(want);
                            queue.push_back((true, i));
                        }
                    }
                }
            }
        }
    }
    let one = || Rational::from_integer(1.into());
    let row: Vec<Rational> = row.into_iter().map(|v| v.unwrap_or_else(one)).collect();
    let col: Vec<Rational> = col.into_iter().map(|v| v.unwrap_or_else(one)).collect();
    component_positive &= row.iter().chain(&col).all(Signed::is_positive);
    let sc = Scaling {
        row,
        col,
        positive: component_positive,
    };
    debug_assert_eq!(&sc.apply(s2), s1);
    Some(sc)
}
