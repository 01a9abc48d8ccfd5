//! Squared-difference distance matrices `D_ij = (a_i - a_j)^2`, their
//! column-stochastic form, and the rank-one trace factorization of size two.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, serde_str, QMatrix, RatFunc, Rational};

/// Generator of a distance matrix: at least three distinct rationals, stored
/// in increasing order together with the permutation that sorted them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaVector {
    #[serde(with = "serde_str::vec")]
    values: Vec<Rational>,
    /// `permutation[i]` is the input position of the i-th smallest entry.
    permutation: Vec<usize>,
}

impl AlphaVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidAlpha(format!(
                "need at least 3 entries, got {}",
                values.len()
            )));
        }
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
        if let Some(w) = idx.windows(2).find(|w| values[w[0]] == values[w[1]]) {
            return Err(Error::InvalidAlpha(format!(
                "duplicate entry {} at positions {} and {}",
                values[w[0]], w[0], w[1]
            )));
        }
        let sorted = idx.iter().map(|&i| values[i].clone()).collect();
        Ok(AlphaVector {
            values: sorted,
            permutation: idx,
        })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    /// Parses a comma-separated list such as `0,1/2,3`.
    pub fn parse(list: &str) -> Result<Self> {
        let vals = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(vals)
    }

    /// Distinct random rationals `p/q` with `|p| <= bound`, `1 <= q <= bound`.
    pub fn random(n: usize, seed: u64, bound: u32) -> Result<Self> {
        let b = i64::from(bound.max(1));
        let mut distinct = BTreeSet::new();
        for q in 1..=b {
            for p in -b..=b {
                distinct.insert(Rational::new(p.into(), q.into()));
                if distinct.len() >= n {
                    break;
                }
            }
            if distinct.len() >= n {
                break;
            }
        }
        if distinct.len() < n {
            return Err(Error::InvalidAlpha(format!(
                "denominator bound {bound} admits fewer than {n} distinct values"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p = rng.gen_range(-b..=b);
            let q = rng.gen_range(1..=b);
            let r = Rational::new(p.into(), q.into());
            if seen.insert(r.clone()) {
                out.push(r);
            }
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Entry at a cyclic index (`n` wraps to `0`).
    pub fn at(&self, k: usize) -> &Rational {
        &self.values[k % self.values.len()]
    }

    pub fn translated(&self, c: &Rational) -> Self {
        AlphaVector {
            values: self.values.iter().map(|v| v + c).collect(),
            permutation: self.permutation.clone(),
        }
    }

    pub fn all_positive(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    /// Translates so that the smallest entry is at least one; returns the
    /// shifted vector and the shift. The matrix `D` does not change.
    pub fn positive_shift(&self) -> (Self, Rational) {
        let min = &self.values[0];
        if min.is_positive() {
            return (self.clone(), Rational::zero());
        }
        let c = Rational::one() - min;
        (self.translated(&c), c)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edm {
    pub n: usize,
    pub alpha: AlphaVector,
    pub d: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StochasticEdm {
    pub alpha: AlphaVector,
    pub dprime: QMatrix,
    /// Column sums of the original matrix.
    #[serde(with = "serde_str::vec")]
    pub d: Vec<Rational>,
}

impl StochasticEdm {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }
}

pub fn build_edm(alpha: &AlphaVector) -> Edm {
    let a = alpha.values();
    let n = a.len();
    let d = QMatrix::from_fn(n, n, |i, j| {
        let diff = &a[i] - &a[j];
        &diff * &diff
    });
    Edm {
        n,
        alpha: alpha.clone(),
        d,
    }
}

/// Divides each column of a nonnegative matrix by its sum.
pub fn column_normalize(m: &QMatrix) -> Result<(QMatrix, Vec<Rational>)> {
    if !m.is_nonnegative() {
        return Err(Error::InvalidMatrix("negative entry".into()));
    }
    let sums = m.column_sums();
    if let Some(j) = sums.iter().position(Zero::is_zero) {
        return Err(Error::InvalidMatrix(format!("column {j} sums to zero")));
    }
    let inv: Vec<Rational> = sums.iter().map(|s| s.recip()).collect();
    let out = QMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) * &inv[j]);
    Ok((out, sums))
}

pub fn column_stochasticize(edm: &Edm) -> Result<StochasticEdm> {
    let (dprime, d) = column_normalize(&edm.d)?;
    Ok(StochasticEdm {
        alpha: edm.alpha.clone(),
        dprime,
        d,
    })
}

/// `Dprime * diag(d)`.
pub fn unscale(s: &StochasticEdm) -> QMatrix {
    let m = &s.dprime;
    QMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) * &s.d[j])
}

/// Exact rank of `D` after confirming it equals three and that the column
/// space is spanned by the all-ones, `a` and `a^2` vectors.
pub fn classical_rank_check(edm: &Edm) -> Result<usize> {
    let rank = edm.d.rank();
    if rank != 3 {
        return Err(Error::InvalidAlpha(format!("rank(D) = {rank}, expected 3")));
    }
    if !moment_span_matches(edm) {
        return Err(Error::Internal(
            "column space of D differs from span(1, a, a^2)".into(),
        ));
    }
    Ok(rank)
}

/// `col(D) = span{1, a, a^2}`.
pub fn moment_span_matches(edm: &Edm) -> bool {
    let moments = moment_matrix(&edm.alpha);
    let joint = edm.d.hstack(&moments).expect("same row count");
    let r = edm.d.rank();
    moments.rank() == r && joint.rank() == r
}

/// Columns `(1,..,1)`, `(a_1,..,a_n)`, `(a_1^2,..,a_n^2)`.
pub fn moment_matrix(alpha: &AlphaVector) -> QMatrix {
    let a = alpha.values();
    QMatrix::from_fn(a.len(), 3, |i, j| match j {
        0 => Rational::one(),
        1 => a[i].clone(),
        _ => &a[i] * &a[i],
    })
}

/// Whether `v` lies in the column space of `m`.
pub fn in_column_space(m: &QMatrix, v: &[Rational]) -> bool {
    m.solve(v).is_some()
}

/// Symmetric 2x2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sym2 {
    #[serde(with = "serde_str")]
    pub xx: Rational,
    #[serde(with = "serde_str")]
    pub xy: Rational,
    #[serde(with = "serde_str")]
    pub yy: Rational,
}

impl Sym2 {
    pub fn outer(v: [&Rational; 2]) -> Self {
        Sym2 {
            xx: v[0] * v[0],
            xy: v[0] * v[1],
            yy: v[1] * v[1],
        }
    }

    pub fn det(&self) -> Rational {
        &self.xx * &self.yy - &self.xy * &self.xy
    }

    /// Nonnegative diagonal and determinant.
    pub fn is_psd(&self) -> bool {
        !self.xx.is_negative() && !self.yy.is_negative() && !self.det().is_negative()
    }

    /// `tr(self * other)` for symmetric matrices.
    pub fn trace_product(&self, other: &Self) -> Rational {
        &self.xx * &other.xx + (&self.xy * &other.xy) * int(2) + &self.yy * &other.yy
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdFactorization {
    pub b: Vec<Sym2>,
    pub c: Vec<Sym2>,
}

impl PsdFactorization {
    pub fn size(&self) -> usize {
        2
    }

    pub fn trace_matrix(&self) -> QMatrix {
        QMatrix::from_fn(self.b.len(), self.c.len(), |i, j| {
            self.b[i].trace_product(&self.c[j])
        })
    }

    /// Every factor is psd and the trace products reproduce `target` exactly.
    pub fn verify(&self, target: &QMatrix) -> bool {
        self.b.len() == target.rows()
            && self.c.len() == target.cols()
            && self.b.iter().chain(&self.c).all(Sym2::is_psd)
            && &self.trace_matrix() == target
    }
}

/// `B_i = x_i x_i^T` with `x_i = (1, a_i)` and `C_j = y_j y_j^T` with
/// `y_j = (a_j, -1)`, so that `tr(B_i C_j) = (x_i . y_j)^2 = (a_i - a_j)^2`.
pub fn psd_rank2_factorization(alpha: &AlphaVector) -> PsdFactorization {
    let one = Rational::one();
    let minus_one = -Rational::one();
    PsdFactorization {
        b: alpha.values().iter().map(|a| Sym2::outer([&one, a])).collect(),
        c: alpha
            .values()
            .iter()
            .map(|a| Sym2::outer([a, &minus_one]))
            .collect(),
    }
}

/// `D` over the indeterminates `a_1..a_n`.
pub fn symbolic_edm(n: usize) -> Vec<Vec<RatFunc>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diff = &RatFunc::var(n, i) - &RatFunc::var(n, j);
                    &diff * &diff
                })
                .collect()
        })
        .collect()
}
