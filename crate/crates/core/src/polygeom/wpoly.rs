use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::geom::{orient, Point2};
use crate::edm::AlphaVector;
use crate::error::{Error, Result};
use crate::exact::{int, rational_sqrt, serde_str, RatFunc, Rational};

pub const DEFAULT_SYMBOLIC_LIMIT: usize = 8;

/// Cyclically ordered points that need not be in convex position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PointCycle {
    pub points: Vec<Point2>,
}

impl PointCycle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, k: usize) -> &Point2 {
        &self.points[k % self.points.len()]
    }

    /// Strictly convex position with the cyclic order as boundary order
    /// (either orientation).
    pub fn convex_position(&self) -> bool {
        let n = self.len();
        if n < 3 {
            return false;
        }
        let mut sign = 0i8;
        for i in 0..n {
            let a = self.point(i);
            let b = self.point(i + 1);
            for j in 0..n {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                let o = orient(a, b, self.point(j));
                let s = if o.is_positive() {
                    1
                } else if o.is_negative() {
                    -1
                } else {
                    return false;
                };
                if sign == 0 {
                    sign = s;
                } else if sign != s {
                    return false;
                }
            }
        }
        true
    }
}

/// `w_k = (1/a_k + 1/a_{k+1} + 1/(a_k a_{k+1}), -1/a_k - 1/a_{k+1} + 1/(a_k a_{k+1}))`.
pub fn w_polygon(alpha: &AlphaVector) -> Result<PointCycle> {
    if alpha.values().iter().any(Zero::is_zero) {
        return Err(Error::InvalidAlpha("w points need nonzero entries".into()));
    }
    let n = alpha.len();
    let points = (0..n)
        .map(|k| {
            let p = alpha.at(k).recip();
            let q = alpha.at(k + 1).recip();
            let pq = &p * &q;
            Point2::new(&p + &q + &pq, &pq - &p - &q)
        })
        .collect();
    Ok(PointCycle { points })
}

/// The `w` points over the indeterminates `a_1..a_n`.
pub fn symbolic_w(n: usize) -> Vec<(RatFunc, RatFunc)> {
    let one = RatFunc::constant(n, Rational::one());
    (0..n)
        .map(|k| {
            let ak = RatFunc::var(n, k);
            let ak1 = RatFunc::var(n, (k + 1) % n);
            let prod = &ak * &ak1;
            let x = (&(&ak + &ak1) + &one).div(&prod).expect("nonzero monomial");
            let y = (&(&one - &ak) - &ak1).div(&prod).expect("nonzero monomial");
            (x, y)
        })
        .collect()
}

/// Closed form of the oriented volume `S_ik` (zero-based, indices mod n):
/// `2 (a_{i-1} - a_{i+1}) / (a_{i-1} a_i^2 a_{i+1}) * 1/(a_k a_{k+1}) * (a_i - a_k)(a_i - a_{k+1})`.
pub fn claim5_rhs(n: usize, i: usize, k: usize) -> RatFunc {
    let a = |j: usize| RatFunc::var(n, j % n);
    let (im1, ip1) = ((i + n - 1) % n, (i + 1) % n);
    let two = RatFunc::constant(n, int(2));
    let row = (&two * &(&a(im1) - &a(ip1)))
        .div(&(&(&a(im1) * &a(i)) * &(&a(i) * &a(ip1))))
        .expect("nonzero monomial");
    let col = RatFunc::constant(n, Rational::one())
        .div(&(&a(k) * &a(k + 1)))
        .expect("nonzero monomial");
    let core = &(&a(i) - &a(k)) * &(&a(i) - &a(k + 1));
    &(&row * &col) * &core
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim5Report {
    pub n: usize,
    pub pairs_checked: usize,
    /// One-based `(i, k)` pairs where the identity fails.
    pub failures: Vec<(usize, usize)>,
}

impl Claim5Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `det [[w_{i-1},1],[w_i,1],[w_k,1]] = claim5_rhs(i, k)` as an
/// identity of rational functions for every pair `(i, k)`.
pub fn verify_claim5_identity(n: usize, limit: usize) -> Result<Claim5Report> {
    verify_claim5_identity_scaled(n, limit, &Rational::one())
}

/// Same as [`verify_claim5_identity`] with the right side multiplied by
/// `factor`; any factor other than one must make every nonzero pair fail.
pub fn verify_claim5_identity_scaled(
    n: usize,
    limit: usize,
    factor: &Rational,
) -> Result<Claim5Report> {
    if n < 3 {
        return Err(Error::InvalidAlpha(format!("n = {n} < 3")));
    }
    if n > limit {
        return Err(Error::SymbolicLimit { n, limit });
    }
    let w = symbolic_w(n);
    let mut failures = Vec::new();
    for i in 0..n {
        let (px, py) = &w[(i + n - 1) % n];
        let (qx, qy) = &w[i];
        let ex = qx - px;
        let ey = qy - py;
        for k in 0..n {
            let (rx, ry) = &w[k];
            let lhs = &(&ex * &(ry - py)) - &(&ey * &(rx - px));
            let rhs = claim5_rhs(n, i, k).scale(factor);
            if lhs != rhs {
                failures.push((i + 1, k + 1));
            }
        }
    }
    Ok(Claim5Report {
        n,
        pairs_checked: n * n,
        failures,
    })
}

/// `sigma1`/`sigma2` are the half-sum and half-difference of the point's
/// coordinates; `roots` are the rational roots of `t^2 - sigma2 t + sigma1`
/// when the discriminant is a rational square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VietaRecovery {
    #[serde(with = "serde_str")]
    pub sigma1: Rational,
    #[serde(with = "serde_str")]
    pub sigma2: Rational,
    #[serde(with = "serde_str::vec")]
    pub roots: Vec<Rational>,
}

impl VietaRecovery {
    pub fn is_root(&self, t: &Rational) -> bool {
        (t * t - &self.sigma2 * t + &self.sigma1).is_zero()
    }
}

/// Recovers the quadratic whose roots include `1/a_k` from a point `h` on
/// the line through `w_{k-1}` and `w_k` (zero-based `k`, cyclic).
pub fn vieta_recover(w: &PointCycle, h: &Point2, k: usize) -> Result<VietaRecovery> {
    let n = w.len();
    let a = w.point(k + n - 1);
    let b = w.point(k);
    if a == b || !orient(a, b, h).is_zero() {
        return Err(Error::OffLine(format!("h = {h:?} is not on line w_{}w_{}", k, k + 1)));
    }
    let half = Rational::new(1.into(), 2.into());
    let sigma1 = (&h.x + &h.y) * &half;
    let sigma2 = (&h.x - &h.y) * &half;
    let disc = &sigma2 * &sigma2 - &sigma1 * int(4);
    let roots = match rational_sqrt(&disc) {
        Some(r) => {
            let mut v = vec![(&sigma2 - &r) * &half, (&sigma2 + &r) * &half];
            v.dedup();
            v
        }
        None => Vec::new(),
    };
    Ok(VietaRecovery {
        sigma1,
        sigma2,
        roots,
    })
}
