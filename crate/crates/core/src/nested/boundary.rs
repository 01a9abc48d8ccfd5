use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::polygeom::{cross, on_segment, Point2, Polygon2};

/// `u -> (a u + b) / (c u + d)`.
#[derive(Clone, Debug)]
pub(crate) struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius {
            a: Rational::from_integer(1.into()),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::from_integer(1.into()),
        }
    }

    pub fn eval(&self, u: &Rational) -> Option<Rational> {
        let den = &self.c * u + &self.d;
        (!den.is_zero()).then(|| (&self.a * u + &self.b) / den)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
    }

    /// Solves `self(u) = v`.
    pub fn solve(&self, v: &Rational) -> Option<Rational> {
        let den = &self.a - &self.c * v;
        (!den.is_zero()).then(|| (&self.d * v - &self.b) / den)
    }
}

/// One application of the tangent map: the chord leaving the boundary point
/// at `u` that keeps the inner hull on its left and turns as far
/// counterclockwise as possible.
pub(crate) struct Step {
    pub value: Rational,
    pub map: Mobius,
}

/// The outer boundary parametrized by a lifted coordinate `u`: `floor(u)`
/// mod `m` selects the edge and the fractional part the position on it.
pub(crate) struct Boundary<'a> {
    pub v: &'a [Point2],
    pub e: Vec<Point2>,
    pub m: usize,
    pub mr: Rational,
    pub hull: &'a [Point2],
}

fn floor_split(u: &Rational) -> (BigInt, Rational) {
    let f = u.floor();
    let s = u - &f;
    (f.to_integer(), s)
}

impl<'a> Boundary<'a> {
    pub fn new(outer: &'a Polygon2, hull: &'a [Point2]) -> Self {
        let v = outer.vertices();
        let m = v.len();
        let e = (0..m).map(|i| v[(i + 1) % m].sub(&v[i])).collect();
        Boundary {
            v,
            e,
            m,
            mr: Rational::from_integer(m.into()),
            hull,
        }
    }

    fn edge_of(&self, j0: &BigInt) -> usize {
        let m = BigInt::from(self.m);
        let r = ((j0 % &m) + &m) % &m;
        r.try_into().expect("edge index fits")
    }

    pub fn point(&self, u: &Rational) -> Point2 {
        let (j0, s) = floor_split(u);
        let j = self.edge_of(&j0);
        self.v[j].add(&self.e[j].scale(&s))
    }

    /// Reduces a lifted coordinate into `[0, m)`.
    pub fn reduce(&self, u: &Rational) -> Rational {
        let w = (u / &self.mr).floor();
        u - w * &self.mr
    }

    /// Base coordinate of a point known to lie on the boundary.
    pub fn locate(&self, p: &Point2) -> Option<Rational> {
        (0..self.m).find_map(|i| {
            let a = &self.v[i];
            let b = &self.v[(i + 1) % self.m];
            if !on_segment(a, b, p) || p == b {
                return None;
            }
            let t = p.sub(a).dot(&self.e[i]) / self.e[i].dot(&self.e[i]);
            Some(Rational::from_integer(i.into()) + t)
        })
    }

    /// Base coordinates where the line through `p` with direction `r`
    /// crosses the boundary.
    pub fn line_hits(&self, p: &Point2, r: &Point2) -> Vec<Rational> {
        let mut out = Vec::new();
        for i in 0..self.m {
            let den = cross(r, &self.e[i]);
            if den.is_zero() {
                continue;
            }
            let t = cross(r, &p.sub(&self.v[i])) / den;
            if t.is_negative() || t > Rational::from_integer(1.into()) {
                continue;
            }
            out.push(self.reduce(&(Rational::from_integer(i.into()) + t)));
        }
        out
    }

    pub fn step(&self, u: &Rational) -> Result<Step> {
        let (j0, s) = floor_split(u);
        let j = self.edge_of(&j0);
        let ej = &self.e[j];
        let x = self.v[j].add(&ej.scale(&s));

        let mut best: Option<(&Point2, Point2)> = None;
        for q in self.hull {
            if *q == x {
                continue;
            }
            let d = q.sub(&x);
            if cross(ej, &d).is_zero() && d.dot(ej).is_negative() {
                continue;
            }
            match &best {
                Some((_, bd)) if !cross(&d, bd).is_positive() => {}
                _ => best = Some((q, d)),
            }
        }
        let (q, d) = best.ok_or_else(|| Error::Internal("no tangent vertex".into()))?;

        let mut exit: Option<(Rational, usize)> = None;
        for i in 0..self.m {
            let c = cross(&self.e[i], &d);
            if !c.is_negative() {
                continue;
            }
            let h = cross(&self.e[i], &x.sub(&self.v[i]));
            let lam = h / -c;
            let better = match &exit {
                None => true,
                Some((l, _)) => lam < *l,
            };
            if better {
                exit = Some((lam, i));
            }
        }
        let (lam, i) = exit.ok_or_else(|| Error::Internal("ray does not leave the polygon".into()))?;
        if !lam.is_positive() {
            return Err(Error::Internal("degenerate chord".into()));
        }
        let y = x.add(&d.scale(&lam));
        let ei = &self.e[i];
        let t = y.sub(&self.v[i]).dot(ei) / ei.dot(ei);
        let base = Rational::from_integer(i.into()) + &t;
        let w = ((u - &base) / &self.mr).floor() + Rational::from_integer(1.into());
        let lift = Rational::from_integer(i.into()) + w * &self.mr;
        let value = &lift + &t;

        // t(s) = (a0 + b0 s) / (c0 + d0 s) on the exit edge, s = u - j0.
        let p = q.sub(&self.v[j]);
        let wq = q.sub(&self.v[i]);
        let a0 = cross(&p, &wq);
        let b0 = -cross(ej, &wq);
        let c0 = cross(&p, ei);
        let d0 = -cross(ej, ei);
        let j0r = Rational::from_integer(j0);
        let nb = &a0 - &b0 * &j0r;
        let nd = &c0 - &d0 * &j0r;
        let map = Mobius {
            a: &b0 + &lift * &d0,
            b: &nb + &lift * &nd,
            c: d0,
            d: nd,
        };
        Ok(Step { value, map })
    }

    pub fn iterate(&self, u: &Rational, k: usize) -> Result<Rational> {
        let mut cur = u.clone();
        for _ in 0..k {
            cur = self.step(&cur)?.value;
        }
        Ok(cur)
    }

    /// Greedy chain from `u` until it wraps once around: the lifted
    /// coordinates of the chain's vertices.
    pub fn greedy_chain(&self, u: &Rational) -> Result<Vec<Rational>> {
        let target = u + &self.mr;
        let mut chain = vec![u.clone()];
        let mut cur = u.clone();
        for _ in 0..self.m + 2 {
            cur = self.step(&cur)?.value;
            if cur >= target {
                return Ok(chain);
            }
            chain.push(cur.clone());
        }
        Err(Error::Internal("greedy chain did not close".into()))
    }
}
