//! Intrinsic difference and Kullback–Leibler divergence over discrete
//! distributions, in bits.
//!
//! Zero probabilities are tested exactly: repertoires are built from sums and
//! products of TPM entries, so structural zeros stay exactly zero.

use crate::search::approx_eq;

/// `p·log₂(p/q)` with `0·log(0/q) = 0` and `p > 0, q = 0 ⇒ +∞`.
pub fn pointwise(p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q <= 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicDifference {
    pub value: f64,
    /// States attaining `value` (within tolerance), ascending.
    pub states: Vec<usize>,
}

/// Maximum of the pointwise divergence over states, with its maximisers.
pub fn intrinsic_difference(p: &[f64], q: &[f64], tol: f64) -> IntrinsicDifference {
    assert_eq!(p.len(), q.len(), "distributions over different state spaces");
    let terms: Vec<f64> = p.iter().zip(q).map(|(&a, &b)| pointwise(a, b)).collect();
    let value = terms
        .iter()
        .zip(p)
        .filter(|(_, &pa)| pa > 0.0)
        .map(|(&t, _)| t)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    let states = terms
        .iter()
        .enumerate()
        .filter(|&(i, &t)| p[i] > 0.0 && approx_eq(t.max(0.0), value, tol))
        .map(|(i, _)| i)
        .collect();
    IntrinsicDifference { value, states }
}

pub fn kld(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different state spaces");
    p.iter().zip(q).map(|(&a, &b)| pointwise(a, b)).sum()
}
