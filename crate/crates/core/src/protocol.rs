//! One-way randomized protocols that compute a nonnegative matrix in
//! expectation, built from a factorization `A = BC`.
//!
//! On input `i` the sender draws `k` with probability `B_ik / r_i`, where
//! `r_i` is the row sum of `B`, and sends it in `ceil(log2 r)` bits. The
//! receiver, holding `j`, outputs `r_i C_kj`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edm::{psd_rank2_factorization, AlphaVector, Edm, PsdFactorization};
use crate::error::{Error, Result};
use crate::exact::{serde_str, to_f64, QMatrix, Rational};
use crate::nmf::Factorization;

/// `ceil(log2 r)` for `r >= 1`; zero for `r <= 1`.
pub fn ceil_log2(r: usize) -> u32 {
    if r <= 1 {
        0
    } else {
        usize::BITS - (r - 1).leading_zeros()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowDistribution {
    #[serde(with = "serde_str")]
    pub scale: Rational,
    #[serde(with = "serde_str::vec")]
    pub probs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationProtocol {
    pub r: usize,
    pub bits: u32,
    pub rows: Vec<RowDistribution>,
    pub responses: QMatrix,
}

pub fn protocol_from_factorization(f: &Factorization) -> Result<ExpectationProtocol> {
    let Factorization::Exact { b, c } = f else {
        return Err(Error::InvalidFactorization("protocols need an exact factorization".into()));
    };
    if !b.is_nonnegative() || !c.is_nonnegative() {
        return Err(Error::InvalidFactorization("negative entry".into()));
    }
    let r = b.cols();
    let rows = (0..b.rows())
        .map(|i| {
            let row = b.row(i);
            let scale = row.iter().fold(Rational::zero(), |s, x| s + x);
            let probs = if scale.is_zero() {
                vec![Rational::zero(); r]
            } else {
                row.iter().map(|x| x / &scale).collect()
            };
            RowDistribution { scale, probs }
        })
        .collect();
    Ok(ExpectationProtocol {
        r,
        bits: ceil_log2(r),
        rows,
        responses: c.clone(),
    })
}

impl ExpectationProtocol {
    /// `sum_k p_i(k) r_i C_kj`.
    pub fn expectation(&self, i: usize, j: usize) -> Rational {
        let row = &self.rows[i];
        row.probs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |s, (k, p)| s + p * &row.scale * self.responses.get(k, j))
    }

    pub fn expectation_matrix(&self) -> QMatrix {
        QMatrix::from_fn(self.rows.len(), self.responses.cols(), |i, j| self.expectation(i, j))
    }

    /// Inverse-CDF thresholds `ceil(F_k * 2^64)` for row `i`.
    fn thresholds(&self, i: usize) -> Vec<u128> {
        let two64 = BigInt::one() << 64;
        let mut cum = Rational::zero();
        self.rows[i]
            .probs
            .iter()
            .map(|p| {
                cum += p;
                let t = (cum.numer() * &two64 + cum.denom() - BigInt::one()) / cum.denom();
                u128::try_from(t).expect("threshold fits in 65 bits")
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Simulation {
    pub i: usize,
    pub j: usize,
    pub trials: u64,
    #[serde(with = "serde_str")]
    pub exact: Rational,
    pub empirical: f64,
    pub stderr: f64,
    pub bits: u32,
}

impl Simulation {
    /// Whether the empirical mean lies within `z` standard errors of the
    /// exact value (equality is required when the sample has no spread).
    pub fn within(&self, z: f64) -> bool {
        let diff = (self.empirical - to_f64(&self.exact)).abs();
        if self.stderr == 0.0 {
            diff <= 1e-12 * to_f64(&self.exact).abs().max(1.0)
        } else {
            diff <= z * self.stderr
        }
    }
}

pub fn simulate(p: &ExpectationProtocol, i: usize, j: usize, trials: u64, seed: u64) -> Result<Simulation> {
    if i >= p.rows.len() || j >= p.responses.cols() {
        return Err(Error::Dimension(format!("cell ({i}, {j}) out of range")));
    }
    let exact = p.expectation(i, j);
    let row = &p.rows[i];
    let outputs: Vec<f64> = (0..p.r)
        .map(|k| to_f64(&(&row.scale * p.responses.get(k, j))))
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    if !row.scale.is_zero() && p.r > 0 {
        let th = p.thresholds(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let u = rng.next_u64() as u128;
            let k = th.partition_point(|&t| t <= u);
            let x = outputs[k.min(p.r - 1)];
            sum += x;
            sumsq += x * x;
        }
    }
    let t = trials.max(1) as f64;
    let mean = sum / t;
    let var = if trials > 1 {
        ((sumsq - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Simulation {
        i,
        j,
        trials,
        exact,
        empirical: mean,
        stderr: (var / t).sqrt(),
        bits: p.bits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumSize {
    pub bits: u32,
    pub psd_rank_upper: usize,
    pub certificate: PsdFactorization,
    /// `ceil(log2 n)`: size of the classical protocol from `D = D I`.
    pub classical_trivial_bits: u32,
}

/// One qubit suffices: the explicit rank-2 psd factorization, verified.
pub fn quantum_size(d: &Edm, alpha: &AlphaVector) -> Result<QuantumSize> {
    let certificate = psd_rank2_factorization(alpha);
    if !certificate.verify(&d.d) {
        return Err(Error::Internal("psd factorization does not reproduce D".into()));
    }
    Ok(QuantumSize {
        bits: ceil_log2(certificate.size()),
        psd_rank_upper: certificate.size(),
        certificate,
        classical_trivial_bits: ceil_log2(d.n),
    })
}

/// Checks that no row distribution has negative weight and that each sums
/// to one (or is the zero row).
pub fn distributions_valid(p: &ExpectationProtocol) -> bool {
    p.rows.iter().all(|row| {
        let total = row.probs.iter().fold(Rational::zero(), |s, x| s + x);
        row.probs.iter().all(|x| !x.is_negative())
            && (total.is_one() || (row.scale.is_zero() && total.is_zero()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::build_edm;
    use crate::exact::int;

    #[test]
    fn log_sizes() {
        let v: Vec<u32> = [1, 2, 3, 4, 5, 8, 9, 1024, 1025].iter().map(|&r| ceil_log2(r)).collect();
        assert_eq!(v, vec![0, 1, 2, 2, 3, 3, 4, 10, 11]);
    }

    #[test]
    fn identity_left_factor_is_deterministic() {
        let d = build_edm(&AlphaVector::from_i64(&[0, 1, 2]).unwrap());
        let f = Factorization::exact(QMatrix::identity(3), d.d.clone()).unwrap();
        let p = protocol_from_factorization(&f).unwrap();
        assert_eq!(p.bits, 2);
        assert!(distributions_valid(&p));
        assert_eq!(p.expectation_matrix(), d.d);
        let s = simulate(&p, 0, 2, 50, 1).unwrap();
        assert_eq!(s.empirical, 4.0);
        assert_eq!(s.stderr, 0.0);
    }

    #[test]
    fn rank_one_needs_no_bits() {
        let b = QMatrix::from_i64_rows(&[&[1], &[2]]);
        let c = QMatrix::from_i64_rows(&[&[3, 4]]);
        let p = protocol_from_factorization(&Factorization::exact(b, c).unwrap()).unwrap();
        assert_eq!(p.bits, 0);
        assert_eq!(p.expectation(1, 1), int(8));
    }

    #[test]
    fn monte_carlo_within_three_standard_errors() {
        let d = build_edm(&AlphaVector::from_i64(&[0, 1, 2]).unwrap());
        let f = Factorization::exact(d.d.clone(), QMatrix::identity(3)).unwrap();
        let p = protocol_from_factorization(&f).unwrap();
        assert_eq!(p.expectation_matrix(), d.d);
        let s = simulate(&p, 0, 2, 100_000, 7).unwrap();
        assert_eq!(s.exact, int(4));
        assert!(s.within(3.0), "{s:?}");
        assert_eq!(simulate(&p, 0, 2, 1000, 7).unwrap(), simulate(&p, 0, 2, 1000, 7).unwrap());
    }

    #[test]
    fn quantum_one_bit() {
        for alpha in [[0i64, 1, 2].as_slice(), &[-3, 1, 4, 9, 10]] {
            let a = AlphaVector::from_i64(alpha).unwrap();
            let d = build_edm(&a);
            let q = quantum_size(&d, &a).unwrap();
            assert_eq!(q.bits, 1);
            assert!(q.certificate.verify(&d.d));
        }
    }
}
