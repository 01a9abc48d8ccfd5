use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point2::new(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Point2, t: &Rational) -> Point2 {
        self.add(&other.sub(self).scale(t))
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn to_strings(&self) -> [String; 2] {
        [format_rational(&self.x), format_rational(&self.y)]
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(Point2::new(
            parse_rational(&x).map_err(serde::de::Error::custom)?,
            parse_rational(&y).map_err(serde::de::Error::custom)?,
        ))
    }
}

/// `cross(a, b)` for vectors.
pub fn cross(a: &Point2, b: &Point2) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Twice the signed area of `(a, b, c)`; positive for a left turn. Equals
/// `det [[a, 1], [b, 1], [c, 1]]`.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    cross(&b.sub(a), &c.sub(a))
}

pub fn orient_sign(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    orient(a, b, c).cmp(&Rational::zero())
}

/// Closed segment membership.
pub fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let lo_x = a.x.clone().min(b.x.clone());
    let hi_x = a.x.clone().max(b.x.clone());
    let lo_y = a.y.clone().min(b.y.clone());
    let hi_y = a.y.clone().max(b.y.clone());
    lo_x <= p.x && p.x <= hi_x && lo_y <= p.y && p.y <= hi_y
}

/// Strictly convex hull in counterclockwise order (monotone chain).
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonKind {
    Point,
    Segment,
    Polygon,
}

/// Convex polygon with counterclockwise, strictly convex vertices. One- and
/// two-vertex (point and segment) polygons are allowed and flagged by `kind`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        match vertices.len() {
            0 => Err(Error::DegeneratePolygon("no vertices".into())),
            1 => Ok(Polygon2 { vertices }),
            2 if vertices[0] != vertices[1] => Ok(Polygon2 { vertices }),
            2 => Err(Error::DegeneratePolygon("repeated vertex".into())),
            n => {
                for i in 0..n {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    for (j, c) in vertices.iter().enumerate() {
                        if j == i || j == (i + 1) % n {
                            continue;
                        }
                        if !orient(a, b, c).is_positive() {
                            return Err(Error::DegeneratePolygon(format!(
                                "vertex {j} is not strictly left of edge {i}"
                            )));
                        }
                    }
                }
                Ok(Polygon2 { vertices })
            }
        }
    }

    /// Hull of arbitrary points.
    pub fn hull_of(points: &[Point2]) -> Result<Self> {
        Polygon2::new(convex_hull(points))
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            _ => PolygonKind::Polygon,
        }
    }

    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn twice_area(&self) -> Rational {
        let n = self.vertices.len();
        (0..n)
            .map(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n]))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point2) -> bool {
        match self.kind() {
            PolygonKind::Point => &self.vertices[0] == p,
            PolygonKind::Segment => on_segment(&self.vertices[0], &self.vertices[1], p),
            PolygonKind::Polygon => (0..self.len()).all(|i| {
                let (a, b) = self.edge(i);
                !orient(a, b, p).is_negative()
            }),
        }
    }

    pub fn contains_polygon(&self, other: &Polygon2) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Convex coefficients of `p` over the vertices (fan triangulation from
    /// vertex 0), or `None` when `p` lies outside.
    pub fn convex_coefficients(&self, p: &Point2) -> Option<Vec<Rational>> {
        let n = self.len();
        let mut out = vec![Rational::zero(); n];
        match self.kind() {
            PolygonKind::Point => {
                if &self.vertices[0] != p {
                    return None;
                }
                out[0] = Rational::one();
                Some(out)
            }
            PolygonKind::Segment => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                if !on_segment(a, b, p) {
                    return None;
                }
                let d = b.sub(a);
                let t = p.sub(a).dot(&d) / d.dot(&d);
                out[0] = Rational::one() - &t;
                out[1] = t;
                Some(out)
            }
            PolygonKind::Polygon => {
                if !self.contains(p) {
                    return None;
                }
                let v0 = &self.vertices[0];
                for i in 1..n - 1 {
                    let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
                    let total = orient(v0, a, b);
                    let l0 = orient(p, a, b);
                    let l1 = orient(v0, p, b);
                    let l2 = orient(v0, a, p);
                    if l0.is_negative() || l1.is_negative() || l2.is_negative() {
                        continue;
                    }
                    out[0] = l0 / &total;
                    out[i] = l1 / &total;
                    out[i + 1] = l2 / &total;
                    return Some(out);
                }
                None
            }
        }
    }

    pub fn to_strings(&self) -> Vec<[String; 2]> {
        self.vertices.iter().map(Point2::to_strings).collect()
    }
}

impl fmt::Debug for Polygon2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

impl Serialize for Polygon2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Point2>::deserialize(d)?;
        Polygon2::new(v).map_err(serde::de::Error::custom)
    }
}

/// Checks that `coeffs` are convex weights over `basis` reproducing `p`.
pub fn verify_convex_combination(basis: &[Point2], coeffs: &[Rational], p: &Point2) -> bool {
    if basis.len() != coeffs.len() || coeffs.iter().any(Signed::is_negative) {
        return false;
    }
    let sum = coeffs.iter().fold(Rational::zero(), |a, b| a + b);
    if !sum.is_one() {
        return false;
    }
    let mut acc = Point2::new(Rational::zero(), Rational::zero());
    for (v, c) in basis.iter().zip(coeffs) {
        acc = acc.add(&v.scale(c));
    }
    &acc == p
}
