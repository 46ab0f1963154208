//! Exact single-letter law of a codeword uniform over the conditional typical set.
//!
//! Given `x` of length `m`, draw `u` uniformly from the words whose joint type
//! with `x` is typical. The law of `u_i` depends on `x` only through `x_i` and
//! the weight of `x`, so it is computed by summing binomial counts over joint
//! types instead of enumerating `2^m` words.

use serde::Serialize;

use crate::bitlattice::{check_dim, SubsetMask};
use crate::error::{check_probability, Error, Result};

use super::{JointType, SlcsConfig};

/// Largest length handled by the brute-force path.
pub const MAX_MARGINAL_DIM: usize = 20;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// Typical joint types with the given `x` type, as `(ones over x = 0, ones over x = 1)`.
fn typical_splits(config: &SlcsConfig, zeros: usize, ones: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..=zeros).flat_map(move |a| (0..=ones).map(move |b| (a, b))).filter(move |&(a, b)| {
        JointType { counts: [[zeros - a, ones - b], [a, b]] }.is_typical(config)
    })
}

fn x_type(config: &SlcsConfig, x: u32) -> Result<(usize, usize)> {
    let m = config.n;
    check_dim(m)?;
    SubsetMask::new(x, m)?;
    let ones = x.count_ones() as usize;
    Ok((m - ones, ones))
}

/// Number of words of length `config.n` jointly typical with `x`.
pub fn conditional_typical_count(config: &SlcsConfig, x: u32) -> Result<u128> {
    let (zeros, ones) = x_type(config, x)?;
    Ok(typical_splits(config, zeros, ones).map(|(a, b)| binomial(zeros, a) * binomial(ones, b)).sum())
}

/// `P(u_i = v)` for `u` uniform over the words jointly typical with `x`; `i` is 1-based.
pub fn single_letter_marginal(config: &SlcsConfig, x: u32, i: usize, v: bool) -> Result<f64> {
    let (zeros, ones) = x_type(config, x)?;
    let xi = SubsetMask::basis(config.n, i)?.bits() & x != 0;
    let (mut total, mut hits) = (0u128, 0u128);
    for (a, b) in typical_splits(config, zeros, ones) {
        total += binomial(zeros, a) * binomial(ones, b);
        // split coordinate i's group into itself and the rest
        let (group, group_ones, other) = if xi {
            (ones, b, binomial(zeros, a))
        } else {
            (zeros, a, binomial(ones, b))
        };
        let with_i = if v {
            if group_ones == 0 { 0 } else { binomial(group - 1, group_ones - 1) }
        } else {
            binomial(group - 1, group_ones)
        };
        hits += with_i * other;
    }
    if total == 0 {
        return Err(Error::EmptyConditionalTypicalSet);
    }
    Ok(hits as f64 / total as f64)
}

/// Same quantity as [`single_letter_marginal`] by enumerating all `2^n` words.
pub fn single_letter_marginal_enumerated(config: &SlcsConfig, x: u32, i: usize, v: bool) -> Result<f64> {
    let m = config.n;
    if m > MAX_MARGINAL_DIM {
        return Err(Error::DimensionTooLarge { n: m, max: MAX_MARGINAL_DIM, what: "marginal enumeration" });
    }
    x_type(config, x)?;
    let bit = SubsetMask::basis(m, i)?.bits();
    let (mut total, mut hits) = (0u64, 0u64);
    for u in 0..1u32 << m {
        if config.is_jointly_typical(u, x) {
            total += 1;
            hits += ((u & bit != 0) == v) as u64;
        }
    }
    if total == 0 {
        return Err(Error::EmptyConditionalTypicalSet);
    }
    Ok(hits as f64 / total as f64)
}

/// Distance between the single-letter law given all of `x` and given `x_1` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleLetterGap {
    pub n: usize,
    /// `max |P(u_1 = 1 | x) - P(u_1 = 1 | x_1)|` over inputs with a non-empty typical set.
    pub gap: f64,
    /// `E |P(u_1 = 1 | x) - P(u_1 = 1 | x_1)|` over covered inputs, renormalized.
    pub mean_gap: f64,
    /// Source probability of inputs whose conditional typical set is non-empty.
    pub covered_mass: f64,
}

/// Gap for coordinate 1, with `x` drawn from the product law with `P(X = 1) = config.p_x`.
///
/// `P(u_1 = 1 | x_1)` averages `P(u_1 = 1 | x)` over the remaining coordinates,
/// restricted to inputs with a non-empty typical set.
pub fn single_letter_gap(config: &SlcsConfig) -> Result<SingleLetterGap> {
    let m = config.n;
    check_dim(m)?;
    let p = config.p_x;
    check_probability("p_x", p)?;
    let lead = 1u32 << (m - 1);
    let (mut gap, mut weighted, mut covered) = (0.0f64, 0.0, 0.0);
    for x1 in [false, true] {
        let p1 = if x1 { p } else { 1.0 - p };
        let mut rows = Vec::new();
        for w in 0..m {
            // w ones among coordinates 2..=m
            let x = (if x1 { lead } else { 0 }) | ((1u32 << w) - 1);
            let weight = binomial(m - 1, w) as f64 * p.powi(w as i32) * (1.0 - p).powi((m - 1 - w) as i32);
            match single_letter_marginal(config, x, 1, true) {
                Ok(prob) => rows.push((weight, prob)),
                Err(Error::EmptyConditionalTypicalSet) => {}
                Err(e) => return Err(e),
            }
        }
        let mass: f64 = rows.iter().map(|r| r.0).sum();
        covered += p1 * mass;
        if mass > 0.0 {
            let avg = rows.iter().map(|r| r.0 * r.1).sum::<f64>() / mass;
            gap = rows.iter().fold(gap, |g, r| g.max((r.1 - avg).abs()));
            weighted += p1 * rows.iter().map(|r| r.0 * (r.1 - avg).abs()).sum::<f64>();
        }
    }
    let mean_gap = if covered > 0.0 { weighted / covered } else { 0.0 };
    Ok(SingleLetterGap { n: m, gap, mean_gap, covered_mass: covered })
}
