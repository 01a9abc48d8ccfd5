use num_traits::{Signed, Zero};

use super::boundary::{Boundary, Mobius};
use super::{NestedCertificate, NestedInstance};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::polygeom::{convex_hull, on_segment, Point2, Polygon2};

/// Minimum-vertex convex polygon `P` with `conv(inner) ⊆ P ⊆ outer`.
///
/// Chains of chords that keep the inner hull on their left and end on the
/// outer boundary are followed greedily; the greedy count from any start
/// exceeds the optimum by at most one, and that last step is settled
/// exactly by splitting the boundary into pieces where the `k`-fold chord
/// map is a single Möbius transformation.
pub fn min_nested_polygon(inst: &NestedInstance) -> Result<NestedCertificate> {
    inst.validate()?;
    let hull = convex_hull(&inst.inner);
    if hull.len() < 3 {
        return NestedCertificate::for_polygon(Polygon2::new(hull)?, inst);
    }
    let b = Boundary::new(&inst.outer, &hull);
    let lower = contact_bound(&inst.outer, &hull).max(3);

    let starts = base_breakpoints(&b);
    let mut best: Option<(usize, Vec<Rational>)> = None;
    for u in &starts {
        let chain = b.greedy_chain(u)?;
        let len = chain.len();
        if best.as_ref().is_none_or(|(k, _)| len < *k) {
            best = Some((len, chain));
        }
        if len <= lower {
            break;
        }
    }
    let (k, mut chain) = best.expect("breakpoints include the vertices");
    if k > lower {
        if let Some(u) = find_start(&b, &starts, k - 1)? {
            chain = b.greedy_chain(&u)?;
        }
    }
    let pts: Vec<Point2> = chain.iter().map(|u| b.point(u)).collect();
    NestedCertificate::for_polygon(Polygon2::new(convex_hull(&pts))?, inst)
}

/// Number of outer edges whose relative interior meets the inner hull. A
/// nested polygon needs a separate vertex for each of them.
pub(crate) fn contact_bound(outer: &Polygon2, hull: &[Point2]) -> usize {
    (0..outer.len())
        .filter(|&i| {
            let (a, b) = outer.edge(i);
            let on: Vec<&Point2> = hull.iter().filter(|p| on_segment(a, b, p)).collect();
            on.iter().any(|p| *p != a && *p != b) || (on.contains(&a) && on.contains(&b))
        })
        .count()
}

/// Boundary coordinates in `[0, m)` where the combinatorics of one chord
/// step can change: outer vertices, inner vertices on the boundary, lines
/// through inner hull edges, and lines through an outer and an inner vertex.
fn base_breakpoints(b: &Boundary) -> Vec<Rational> {
    let mut pts: Vec<Rational> = (0..b.m).map(|i| Rational::from_integer(i.into())).collect();
    let h = b.hull.len();
    for (i, q) in b.hull.iter().enumerate() {
        pts.extend(b.locate(q));
        let r = b.hull[(i + 1) % h].sub(q);
        pts.extend(b.line_hits(q, &r));
        for v in b.v {
            if v != q {
                pts.extend(b.line_hits(q, &v.sub(q)));
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Consecutive pairs of a sorted breakpoint list, closing the cycle at `m`.
fn pieces<'p>(pts: &'p [Rational], m: &Rational) -> impl Iterator<Item = (Rational, Rational)> + 'p {
    let m = m.clone();
    (0..pts.len()).map(move |i| {
        let lo = pts[i].clone();
        let hi = if i + 1 < pts.len() {
            pts[i + 1].clone()
        } else {
            &pts[0] + &m
        };
        (lo, hi)
    })
}

fn midpoint(lo: &Rational, hi: &Rational) -> Rational {
    (lo + hi) / Rational::from_integer(2.into())
}

/// Points of `[0, m)` mapped onto one of `targets` by a single chord step.
fn preimages(b: &Boundary, base: &[Rational], targets: &[Rational]) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (lo, hi) in pieces(base, &b.mr) {
        let map = b.step(&midpoint(&lo, &hi))?.map;
        let (Some(vlo), Some(vhi)) = (map.eval(&lo), map.eval(&hi)) else {
            continue;
        };
        if vlo >= vhi {
            continue;
        }
        for t in targets {
            let shift = ((&vlo - t) / &b.mr).ceil();
            let t = t + shift * &b.mr;
            if t > vlo && t < vhi {
                if let Some(u) = map.solve(&t) {
                    if u > lo && u < hi {
                        out.push(b.reduce(&u));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A start `u` whose `k`-step greedy chain wraps around, if any exists.
fn find_start(b: &Boundary, base: &[Rational], k: usize) -> Result<Option<Rational>> {
    let mut level = base.to_vec();
    for _ in 1..k {
        let mut next = base.to_vec();
        next.extend(preimages(b, base, &level)?);
        next.sort();
        next.dedup();
        level = next;
    }
    let wraps = |u: &Rational| -> Result<bool> { Ok(b.iterate(u, k)? >= u + &b.mr) };
    for u in &level {
        if wraps(u)? {
            return Ok(Some(u.clone()));
        }
    }
    for (lo, hi) in pieces(&level, &b.mr) {
        let mid = midpoint(&lo, &hi);
        let mut map = Mobius::identity();
        let mut cur = mid.clone();
        for _ in 0..k {
            let st = b.step(&cur)?;
            map = st.map.after(&map);
            cur = st.value;
        }
        // sign(den) * ((a u + b) - (u + m)(c u + d)) >= 0
        let den = &map.c * &mid + &map.d;
        if den.is_zero() {
            return Err(Error::Internal("pole inside a piece".into()));
        }
        let sg = Rational::from_integer(if den.is_positive() { 1 } else { -1 }.into());
        let qa = -&map.c * &sg;
        let qb = (&map.a - &map.d - &b.mr * &map.c) * &sg;
        if !qa.is_negative() {
            continue;
        }
        let top = -qb / (Rational::from_integer(2.into()) * &qa);
            if top > lo && top < hi && wraps(&top)? {
            return Ok(Some(b.reduce(&top)));
        }
    }
    Ok(None)
}
