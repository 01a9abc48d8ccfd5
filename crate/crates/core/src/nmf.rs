//! Nonnegative factorizations `A = BC`: verification, column normalization,
//! a multiplicative-update search for approximate factorizations, and the
//! passage between exact factorizations and nested polygons.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edm::{in_column_space, StochasticEdm};
use crate::error::{Error, Result};
use crate::exact::{to_f64, QMatrix, Rational};
use crate::nested::{NestedCertificate, NestedInstance};
use crate::polygeom::{slice_geometry, Polygon2};

pub type FMatrix = Vec<Vec<f64>>;

pub const FLOOR: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Factorization {
    Exact {
        #[serde(rename = "B")]
        b: QMatrix,
        #[serde(rename = "C")]
        c: QMatrix,
    },
    Approximate {
        #[serde(rename = "B")]
        b: FMatrix,
        #[serde(rename = "C")]
        c: FMatrix,
        /// Max-abs entry of `A - BC` against the target it was fitted to.
        residual: f64,
    },
}

impl Factorization {
    pub fn exact(b: QMatrix, c: QMatrix) -> Result<Self> {
        if b.cols() != c.rows() {
            return Err(Error::Dimension(format!(
                "B has {} columns but C has {} rows",
                b.cols(),
                c.rows()
            )));
        }
        if !b.is_nonnegative() || !c.is_nonnegative() {
            return Err(Error::InvalidFactorization("negative entry".into()));
        }
        Ok(Factorization::Exact { b, c })
    }

    /// Number of rank-one terms.
    pub fn size(&self) -> usize {
        match self {
            Factorization::Exact { b, .. } => b.cols(),
            Factorization::Approximate { c, .. } => c.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Factorization::Exact { .. })
    }
}

fn fmul(b: &FMatrix, c: &FMatrix) -> FMatrix {
    let cols = c.first().map_or(0, Vec::len);
    b.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(c).map(|(x, crow)| x * crow[j]).sum())
                .collect()
        })
        .collect()
}

/// Max-abs entry of `a - bc`.
pub fn residual(a: &FMatrix, b: &FMatrix, c: &FMatrix) -> f64 {
    let p = fmul(b, c);
    a.iter()
        .zip(&p)
        .flat_map(|(ra, rp)| ra.iter().zip(rp).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// Exact: `a = BC` entrywise. Approximate: nonnegative factors with
/// max-abs residual at most `tol`, recomputed here.
pub fn verify_factorization(a: &QMatrix, f: &Factorization, tol: f64) -> bool {
    match f {
        Factorization::Exact { b, c } => {
            b.rows() == a.rows()
                && c.cols() == a.cols()
                && b.cols() == c.rows()
                && b.is_nonnegative()
                && c.is_nonnegative()
                && b.mul(c).is_ok_and(|p| &p == a)
        }
        Factorization::Approximate { b, c, .. } => {
            let fa = a.to_f64_rows();
            let shape_ok = b.len() == a.rows()
                && b.iter().all(|r| r.len() == c.len())
                && c.iter().all(|r| r.len() == a.cols());
            shape_ok
                && b.iter().chain(c).flatten().all(|x| *x >= 0.0)
                && residual(&fa, b, c) <= tol
        }
    }
}

/// Rescales so that every column of `B` sums to one, moving the scale into
/// the matching row of `C`. Zero columns of `B` are dropped together with
/// their row of `C`.
pub fn normalize_columns(f: &Factorization) -> Factorization {
    match f {
        Factorization::Exact { b, c } => {
            let sums = b.column_sums();
            let keep: Vec<usize> = (0..b.cols()).filter(|&j| !sums[j].is_zero()).collect();
            let nb = QMatrix::from_fn(b.rows(), keep.len(), |i, t| b.get(i, keep[t]) / &sums[keep[t]]);
            let nc = QMatrix::from_fn(keep.len(), c.cols(), |t, j| c.get(keep[t], j) * &sums[keep[t]]);
            Factorization::Exact { b: nb, c: nc }
        }
        Factorization::Approximate { b, c, residual } => {
            let r = c.len();
            let sums: Vec<f64> = (0..r).map(|j| b.iter().map(|row| row[j]).sum()).collect();
            let keep: Vec<usize> = (0..r).filter(|&j| sums[j] != 0.0).collect();
            let nb = b
                .iter()
                .map(|row| keep.iter().map(|&j| row[j] / sums[j]).collect())
                .collect();
            let nc = keep
                .iter()
                .map(|&j| c[j].iter().map(|x| x * sums[j]).collect())
                .collect();
            Factorization::Approximate {
                b: nb,
                c: nc,
                residual: *residual,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmfOptions {
    pub r: usize,
    pub seeds: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for NmfOptions {
    fn default() -> Self {
        NmfOptions {
            r: 1,
            seeds: 8,
            iters: 5000,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NmfRun {
    pub seed_index: usize,
    pub factorization: Factorization,
}

fn transpose(m: &FMatrix) -> FMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// Multiplicative updates for `||A - BC||_F`.
fn mu_step(a: &FMatrix, b: &mut FMatrix, c: &mut FMatrix) {
    let (n, r, m) = (b.len(), c.len(), a[0].len());
    let bt = transpose(b);
    let num = fmul(&bt, a);
    let den = fmul(&fmul(&bt, b), c);
    for i in 0..r {
        for j in 0..m {
            c[i][j] = (c[i][j] * num[i][j] / den[i][j].max(FLOOR)).max(FLOOR);
        }
    }
    let ct = transpose(c);
    let num = fmul(a, &ct);
    let den = fmul(b, &fmul(c, &ct));
    for i in 0..n {
        for j in 0..r {
            b[i][j] = (b[i][j] * num[i][j] / den[i][j].max(FLOOR)).max(FLOOR);
        }
    }
}

/// One sweep of hierarchical alternating least squares: each row of `C`
/// and then each column of `B` is the projected exact minimizer with the
/// other terms held fixed.
fn hals_step(a: &FMatrix, b: &mut FMatrix, c: &mut FMatrix) {
    let (n, r, m) = (b.len(), c.len(), a[0].len());
    let bt = transpose(b);
    let bta = fmul(&bt, a);
    let btb = fmul(&bt, b);
    for k in 0..r {
        if btb[k][k] <= FLOOR {
            continue;
        }
        for j in 0..m {
            let cross: f64 = (0..r).map(|l| btb[k][l] * c[l][j]).sum();
            c[k][j] = (c[k][j] + (bta[k][j] - cross) / btb[k][k]).max(FLOOR);
        }
    }
    let ct = transpose(c);
    let act = fmul(a, &ct);
    let cct = fmul(c, &ct);
    for k in 0..r {
        if cct[k][k] <= FLOOR {
            continue;
        }
        for i in 0..n {
            let cross: f64 = (0..r).map(|l| b[i][l] * cct[l][k]).sum();
            b[i][k] = (b[i][k] + (act[i][k] - cross) / cct[k][k]).max(FLOOR);
        }
    }
}

fn single_run(a: &FMatrix, r: usize, iters: usize, tol: f64, seed: u64) -> (FMatrix, FMatrix, f64) {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = (a.iter().flatten().sum::<f64>() / ((n * m).max(1) as f64) / r as f64).sqrt().max(FLOOR);
    let mut b: FMatrix = (0..n)
        .map(|_| (0..r).map(|_| rng.gen_range(0.1..1.0) * scale).collect())
        .collect();
    let mut c: FMatrix = (0..r)
        .map(|_| (0..m).map(|_| rng.gen_range(0.1..1.0) * scale).collect())
        .collect();
    let warm = iters / 4;
    let mut res = residual(a, &b, &c);
    for it in 0..iters {
        if res <= tol {
            break;
        }
        if it < warm {
            mu_step(a, &mut b, &mut c);
        } else {
            hals_step(a, &mut b, &mut c);
        }
        if it % 16 == 15 {
            res = residual(a, &b, &c);
        }
    }
    let res = residual(a, &b, &c);
    (b, c, res)
}

/// Best multiplicative-update run over `opts.seeds` independent starts,
/// regardless of tolerance. Seed `s` uses generator seed `opts.seed + s`;
/// ties go to the lowest seed index.
pub fn nmf_best(a: &FMatrix, opts: &NmfOptions) -> Option<NmfRun> {
    if opts.r == 0 || a.is_empty() || a.iter().flatten().any(|x| *x < 0.0 || !x.is_finite()) {
        return None;
    }
    let runs: Vec<(usize, FMatrix, FMatrix, f64)> = (0..opts.seeds)
        .into_par_iter()
        .map(|s| {
            let (b, c, res) = single_run(a, opts.r, opts.iters, opts.tol, opts.seed.wrapping_add(s as u64));
            (s, b, c, res)
        })
        .collect();
    runs.into_iter()
        .min_by(|x, y| x.3.total_cmp(&y.3).then(x.0.cmp(&y.0)))
        .map(|(s, b, c, residual)| NmfRun {
            seed_index: s,
            factorization: Factorization::Approximate { b, c, residual },
        })
}

/// Best run if its max-abs residual is within `opts.tol`. Absence is not
/// evidence that no factorization of that size exists.
pub fn nmf_search(a: &FMatrix, opts: &NmfOptions) -> Option<Factorization> {
    nmf_best(a, opts)
        .map(|run| run.factorization)
        .filter(|f| matches!(f, Factorization::Approximate { residual, .. } if *residual <= opts.tol))
}

pub fn to_fmatrix(a: &QMatrix) -> FMatrix {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| to_f64(a.get(i, j))).collect())
        .collect()
}

/// The nested polygon `R = conv(columns of B)` built from an exact
/// factorization of `D'`, together with the factorization size.
#[derive(Clone, Debug, Serialize)]
pub struct NestedFromFactorization {
    pub r: usize,
    pub certificate: NestedCertificate,
}

/// Normalizes `f`, checks `col(B) ⊆ col(D')`, and returns the hull of the
/// columns of `B` in the slice as a certified nested polygon.
pub fn factorization_to_nested(f: &Factorization, a: &StochasticEdm) -> Result<NestedFromFactorization> {
    if !verify_factorization(&a.dprime, f, 0.0) || !f.is_exact() {
        return Err(Error::InvalidFactorization("not an exact factorization of D'".into()));
    }
    let r = f.size();
    let Factorization::Exact { b, .. } = normalize_columns(f) else {
        unreachable!()
    };
    let g = slice_geometry(a)?;
    let mut pts = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let col = b.column(j);
        if !in_column_space(&a.dprime, &col) {
            return Err(Error::Unrestricted);
        }
        pts.push(g.chart.to_chart(&col)?);
    }
    let inst = NestedInstance::new(g.inner, g.outer)?;
    let certificate = NestedCertificate::for_polygon(Polygon2::hull_of(&pts)?, &inst)?;
    Ok(NestedFromFactorization { r, certificate })
}

/// Lifts a nested polygon for the slice of `a` to an exact factorization
/// `D' = BC`: the columns of `B` are the polygon's vertices and the columns
/// of `C` are the inner witnesses.
pub fn nested_to_factorization(cert: &NestedCertificate, a: &StochasticEdm) -> Result<Factorization> {
    let g = slice_geometry(a)?;
    let inst = NestedInstance::new(g.inner, g.outer)?;
    if !crate::nested::check_nested(cert, &inst) {
        return Err(Error::InvalidFactorization("certificate does not match the slice".into()));
    }
    let cols: Vec<Vec<Rational>> = cert.vertices().iter().map(|p| g.chart.from_chart(p)).collect();
    let b = QMatrix::from_columns(&cols)?;
    let c = QMatrix::from_fn(cert.k, a.n(), |i, j| cert.inner_witnesses[j][i].clone());
    let f = Factorization::exact(b, c)?;
    if !verify_factorization(&a.dprime, &f, 0.0) {
        return Err(Error::Internal("lifted factorization does not reproduce D'".into()));
    }
    Ok(f)
}

/// `D' = D' * I`.
pub fn trivial_factorization(a: &StochasticEdm) -> Factorization {
    Factorization::Exact {
        b: a.dprime.clone(),
        c: QMatrix::identity(a.n()),
    }
}

fn is_stochastic_column(col: &[Rational]) -> bool {
    col.iter().all(|x| !x.is_negative()) && col.iter().fold(Rational::zero(), |s, x| s + x).is_one()
}

/// Whether every column of `B` lies in the simplex.
pub fn is_normalized(f: &Factorization) -> bool {
    match f {
        Factorization::Exact { b, .. } => (0..b.cols()).all(|j| is_stochastic_column(&b.column(j))),
        Factorization::Approximate { b, c, .. } => (0..c.len())
            .all(|j| (b.iter().map(|r| r[j]).sum::<f64>() - 1.0).abs() <= 1e-12),
    }
}
