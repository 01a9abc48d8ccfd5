//! Integer lower-bound calculators and the rank bracket for an EDM.

use num_integer::Roots;
use serde::Serialize;

use crate::edm::StochasticEdm;
use crate::error::Result;
use crate::nested::{restricted_rank_certificate, NestedCertificate};
use crate::nmf::{nested_to_factorization, nmf_best, to_fmatrix, Factorization, NmfOptions};

/// Smallest `m` with `m^2 >= x`.
pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.sqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// `max(0, ceil(2 sqrt(t)) - k)`.
pub fn trdeg_ic_bound(t: u64, k: u64) -> u64 {
    ceil_sqrt(4 * t).saturating_sub(k)
}

/// `d (v - d + k)`.
pub fn lemma_trdeg_cap(d: u64, v: u64, k: u64) -> u64 {
    d * (v + k).saturating_sub(d)
}

/// `ceil(2 sqrt(n)) - 2`; valid for `rank_+ D(a)` only when the entries of
/// `a` are algebraically independent, which numeric input cannot certify.
pub fn theorem1_bound(n: u64) -> u64 {
    trdeg_ic_bound(n, 2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSide {
    pub value: usize,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalBound {
    pub value: u64,
    /// `2 sqrt(n) - 2` as a float, with its floor and ceiling.
    pub real: f64,
    pub floor: i64,
    pub ceil: i64,
    pub hypothesis: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximateEvidence {
    pub r: usize,
    pub residual: f64,
    pub seed_index: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankBracket {
    pub n: usize,
    pub alpha: Vec<String>,
    pub lower: BoundSide,
    pub upper: BoundSide,
    pub conditional_lower: ConditionalBound,
    pub nested_certificate: NestedCertificate,
    pub factorization: Factorization,
    /// Smallest size below `upper` at which the numeric search met its
    /// tolerance. Not a certificate.
    pub approximate: Option<ApproximateEvidence>,
}

impl RankBracket {
    pub fn is_consistent(&self) -> bool {
        self.lower.value <= self.upper.value
    }
}

/// Unconditional bracket `3 <= rank_+(D') <= min(n, restricted rank)`, with
/// the exact factorization realising the upper side and the conditional
/// lower bound kept apart.
pub fn bracket_rank_plus(a: &StochasticEdm, search: Option<&NmfOptions>) -> Result<RankBracket> {
    let n = a.n();
    let cert = restricted_rank_certificate(a)?;
    let factorization = nested_to_factorization(&cert, a)?;
    let (value, source) = if cert.k < n {
        (cert.k, "restricted nested polygon")
    } else {
        (n, "trivial factorization D' = D' I")
    };
    let upper = BoundSide {
        value: value.min(factorization.size()),
        source: source.into(),
    };
    let lower = BoundSide {
        value: 3,
        source: "rank(D) = 3".into(),
    };
    let real = 2.0 * (n as f64).sqrt() - 2.0;
    let conditional_lower = ConditionalBound {
        value: theorem1_bound(n as u64),
        real,
        floor: real.floor() as i64,
        ceil: real.ceil() as i64,
        hypothesis: "entries of alpha algebraically independent".into(),
    };
    let approximate = match search {
        Some(opts) => {
            let fa = to_fmatrix(&a.dprime);
            let mut found = None;
            for r in (1..upper.value).rev() {
                let run = nmf_best(&fa, &NmfOptions { r, ..opts.clone() });
                match run {
                    Some(run) => match run.factorization {
                        Factorization::Approximate { residual, .. } if residual <= opts.tol => {
                            found = Some(ApproximateEvidence {
                                r,
                                residual,
                                seed_index: run.seed_index,
                                tol: opts.tol,
                            });
                        }
                        _ => break,
                    },
                    None => break,
                }
            }
            found
        }
        None => None,
    };
    Ok(RankBracket {
        n,
        alpha: a.alpha.to_strings(),
        lower,
        upper,
        conditional_lower,
        nested_certificate: cert,
        factorization,
        approximate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::{build_edm, column_stochasticize, AlphaVector};
    use crate::nmf::verify_factorization;
    use proptest::prelude::*;

    #[test]
    fn calculator_examples() {
        assert_eq!(trdeg_ic_bound(16, 2), 6);
        assert_eq!(trdeg_ic_bound(0, 5), 0);
        assert_eq!(trdeg_ic_bound(25, 2), 8);
        assert_eq!(trdeg_ic_bound(2, 0), 3);
        assert_eq!(lemma_trdeg_cap(3, 5, 2), 12);
        assert_eq!(lemma_trdeg_cap(4, 4, 0), 0);
        assert_eq!(theorem1_bound(9), 4);
        assert_eq!(theorem1_bound(16), 6);
        assert_eq!(theorem1_bound(3), 2);
    }

    #[test]
    fn cap_peaks_at_midpoint() {
        for v in 0..40u64 {
            for k in 0..=v {
                if (v + k) % 2 == 0 {
                    let mid = (v + k) / 2;
                    let best = (k..=v).map(|d| lemma_trdeg_cap(d, v, k)).max().unwrap();
                    assert_eq!(best, lemma_trdeg_cap(mid, v, k));
                }
            }
        }
    }

    #[test]
    fn cap_square_inequality() {
        for s in 0..=100u64 {
            for k in 0..=s {
                let v = s - k;
                for d in k.min(v)..=v {
                    assert!(4 * lemma_trdeg_cap(d, v, k) <= (v + k) * (v + k));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ceil_sqrt_is_tight(x in 0u64..1_000_000_000) {
            let m = ceil_sqrt(x);
            prop_assert!(m * m >= x);
            prop_assert!(m == 0 || (m - 1) * (m - 1) < x);
        }

        #[test]
        fn bound_monotone(t in 0u64..10_000, k in 0u64..50) {
            prop_assert!(trdeg_ic_bound(t + 1, k) >= trdeg_ic_bound(t, k));
            prop_assert!(trdeg_ic_bound(t, k + 1) <= trdeg_ic_bound(t, k));
        }
    }

    #[test]
    fn bracket_small() {
        let a = column_stochasticize(&build_edm(&AlphaVector::from_i64(&[0, 1, 2]).unwrap())).unwrap();
        let b = bracket_rank_plus(&a, None).unwrap();
        assert_eq!((b.lower.value, b.upper.value), (3, 3));
        assert!(verify_factorization(&a.dprime, &b.factorization, 0.0));
        for alpha in [[0i64, 1, 3, 7, 8].as_slice(), &[-4, -1, 0, 2, 3, 9, 11]] {
            let a = column_stochasticize(&build_edm(&AlphaVector::from_i64(alpha).unwrap())).unwrap();
            let b = bracket_rank_plus(&a, None).unwrap();
            assert!(b.is_consistent());
            assert!(b.upper.value <= alpha.len());
            assert!(b.conditional_lower.value as usize <= b.upper.value);
        }
    }
}
