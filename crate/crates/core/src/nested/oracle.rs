//! Brute-force cross-check for the nested polygon solver.
//!
//! From many boundary start points it follows chords exactly, each chosen
//! as the farthest boundary point whose chord keeps the inner hull on its
//! left, found by intersecting one linear constraint per inner vertex on
//! every outer edge. Start points are the outer vertices, all boundary
//! crossings of lines through two of the inner or outer vertices, and a
//! uniform grid on every edge. The smallest closed chain found is an upper
//! bound on the optimum and coincides with it when some start lies in the
//! optimal window.

use num_traits::{One, Signed, Zero};

use super::NestedInstance;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::polygeom::{convex_hull, cross, on_segment, orient, Point2};

pub const DEFAULT_GRID: usize = 48;

struct Walker<'a> {
    v: &'a [Point2],
    hull: &'a [Point2],
    m: usize,
}

impl Walker<'_> {
    fn at(&self, edge: usize, t: &Rational) -> Point2 {
        let a = &self.v[edge % self.m];
        let b = &self.v[(edge + 1) % self.m];
        a.lerp(b, t)
    }

    /// Largest `t` in `[0, 1]` with `orient(x, at(edge, t), q) >= 0` for all
    /// inner vertices `q`.
    fn max_valid(&self, x: &Point2, edge: usize) -> Option<Rational> {
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        let p0 = self.at(edge, &Rational::zero());
        let p1 = self.at(edge, &Rational::one());
        for q in self.hull {
            let f0 = orient(x, &p0, q);
            let slope = orient(x, &p1, q) - &f0;
            // f0 + t * slope >= 0
            if slope.is_zero() {
                if f0.is_negative() {
                    return None;
                }
            } else {
                let root = -&f0 / &slope;
                if slope.is_positive() {
                    lo = lo.max(root);
                } else {
                    hi = hi.min(root);
                }
            }
            if lo > hi {
                return None;
            }
        }
        Some(hi)
    }

    /// Farthest valid chord end from lifted position `u`.
    fn next(&self, u: &Rational) -> Rational {
        let j0 = u.floor();
        let s = u - &j0;
        let j: usize = {
            let m = Rational::from_integer(self.m.into());
            let r = &j0 - (&j0 / &m).floor() * &m;
            r.to_integer().try_into().expect("edge index")
        };
        let x = self.at(j, &s);
        // The rest of the current edge is always valid; edges follow in
        // boundary order, skipping the one that ends at x when x is a vertex.
        let mut best = &j0 + Rational::one();
        let last = if s.is_zero() { self.m - 1 } else { self.m };
        for r in 1..last {
            if let Some(t) = self.max_valid(&x, j + r) {
                best = &j0 + Rational::from_integer(r.into()) + t;
            }
        }
        best
    }
}

fn candidate_starts(w: &Walker, grid: usize) -> Vec<Rational> {
    let mut pts: Vec<Point2> = w.v.to_vec();
    pts.extend(w.hull.iter().cloned());
    let mut out = Vec::new();
    for i in 0..w.m {
        for g in 0..grid.max(1) {
            out.push(Rational::from_integer(i.into()) + Rational::new(g.into(), grid.max(1).into()));
        }
        let a = &w.v[i];
        let b = &w.v[(i + 1) % w.m];
        let e = b.sub(a);
        for (pi, p) in pts.iter().enumerate() {
            if on_segment(a, b, p) && p != b {
                out.push(Rational::from_integer(i.into()) + p.sub(a).dot(&e) / e.dot(&e));
            }
            for q in &pts[pi + 1..] {
                let r = q.sub(p);
                let den = cross(&r, &e);
                if r.dot(&r).is_zero() || den.is_zero() {
                    continue;
                }
                let t = cross(&r, &p.sub(a)) / den;
                if !t.is_negative() && t < Rational::one() {
                    out.push(Rational::from_integer(i.into()) + t);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Smallest closed chord chain found from the candidate starts.
pub fn oracle_min_vertices(inst: &NestedInstance, grid: usize) -> Result<usize> {
    inst.validate()?;
    let hull = convex_hull(&inst.inner);
    if hull.len() < 3 {
        return Ok(hull.len());
    }
    let w = Walker {
        v: inst.outer.vertices(),
        hull: &hull,
        m: inst.outer.len(),
    };
    let mr = Rational::from_integer(w.m.into());
    let mut best = usize::MAX;
    for u in candidate_starts(&w, grid) {
        let target = &u + &mr;
        let mut cur = u.clone();
        let mut k = 0;
        while cur < target {
            cur = w.next(&cur);
            k += 1;
            if k > w.m + 1 {
                return Err(Error::Internal("oracle chain did not close".into()));
            }
        }
        best = best.min(k);
    }
    Ok(best)
}
