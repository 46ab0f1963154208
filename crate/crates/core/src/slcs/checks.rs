//! Monte-Carlo checks of the structural properties of a scheme across encoder draws.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitlattice::{Permutation, SubsetMask};
use crate::error::{Error, Result};
use crate::seed;

use super::{CodebookMode, SlcsConfig, SlcsScheme};

const MAX_PAIRWISE_DIM: usize = 10;
const MAX_PERMUTATION_DIM: usize = 8;
const TAG_DRAW: u64 = 0xD4A3;
const TAG_PAIRS: u64 = 0xFA12;
const TAG_INPUTS: u64 = 0x1A9B;
const PAIRS: usize = 4;
const INPUTS: usize = 4;
const PAIR_ATTEMPTS: usize = 4096;
/// Acceptance band in standard errors.
const Z_TOLERANCE: f64 = 4.0;

fn check_cap(n: usize, max: usize, what: &'static str) -> Result<()> {
    if n > max {
        return Err(Error::DimensionTooLarge { n, max, what });
    }
    Ok(())
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidParameter("at least two encoder draws are needed".into()));
    }
    Ok(())
}

/// Encodes each input under `trials` independent encoder draws; `out[t][k]` is the word for `inputs[k]`.
fn encode_across_draws(scheme: &SlcsScheme, inputs: &[u32], trials: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let enc = scheme.draw(seed::derive(seed, &[TAG_DRAW, t]))?;
            Ok(inputs.iter().map(|&x| enc.encode(x).word).collect())
        })
        .collect()
}

fn pearson(a: &[bool], b: &[bool]) -> Option<f64> {
    let t = a.len() as f64;
    let ma = a.iter().filter(|&&v| v).count() as f64 / t;
    let mb = b.iter().filter(|&&v| v).count() as f64 / t;
    let mab = a.iter().zip(b).filter(|(&x, &y)| x && y).count() as f64 / t;
    let (va, vb) = (ma * (1.0 - ma), mb * (1.0 - mb));
    if va <= 0.0 || vb <= 0.0 {
        return None;
    }
    Some((mab - ma * mb) / (va * vb).sqrt())
}

fn bit_correlations(outputs: &[Vec<u32>], ka: usize, kb: usize, n: usize) -> Vec<Option<f64>> {
    (0..n)
        .map(|k| {
            let bit = 1u32 << k;
            let a: Vec<bool> = outputs.iter().map(|o| o[ka] & bit != 0).collect();
            let b: Vec<bool> = outputs.iter().map(|o| o[kb] & bit != 0).collect();
            pearson(&a, &b)
        })
        .rev()
        .collect()
}

/// Pearson correlation of each output bit of `Ē(x)` and `Ē(y)` over encoder
/// draws, listed by coordinate. `None` marks a bit that is constant in either output.
pub fn output_bit_correlations(
    config: &SlcsConfig,
    x: u32,
    y: u32,
    trials: usize,
    seed: u64,
) -> Result<Vec<Option<f64>>> {
    check_cap(config.n, MAX_PAIRWISE_DIM, "pairwise checks")?;
    check_trials(trials)?;
    SubsetMask::new(x | y, config.n)?;
    let scheme = SlcsScheme::new(config.clone())?;
    let outputs = encode_across_draws(&scheme, &[x, y], trials, seed)?;
    Ok(bit_correlations(&outputs, 0, 1, config.n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseReport {
    pub n: usize,
    pub trials: usize,
    /// Sampled inputs with non-empty, disjoint candidate sets.
    pub pairs: Vec<(u32, u32)>,
    /// Largest `|corr|` over pairs and non-degenerate bits.
    pub max_abs_correlation: f64,
    /// `1/√trials`, the null standard error of a sample correlation.
    pub stderr: f64,
    pub non_degenerate_bits: usize,
    /// Every compared bit was constant.
    pub degenerate: bool,
    pub within_tolerance: bool,
}

fn candidate_set(scheme: &SlcsScheme, x: u32) -> Vec<bool> {
    let cfg = scheme.config();
    (0..1u32 << cfg.n)
        .map(|u| {
            let reachable = match cfg.codebook_mode {
                CodebookMode::UniformTypical => scheme.typical_set().contains(u),
                CodebookMode::IidProduct => true,
            };
            reachable && cfg.is_jointly_typical(u, x)
        })
        .collect()
}

/// Samples input pairs whose jointly typical codeword candidates are disjoint
/// and checks that the encoder outputs are uncorrelated across draws.
///
/// Outputs of inputs that fail to find a typical codeword are drawn from the
/// same codebook, so frequent failures show up as correlation.
pub fn check_pairwise_independence(config: &SlcsConfig, trials: usize, seed: u64) -> Result<PairwiseReport> {
    let n = config.n;
    check_cap(n, MAX_PAIRWISE_DIM, "pairwise checks")?;
    check_trials(trials)?;
    let scheme = SlcsScheme::new(config.clone())?;
    let mut rng = seed::rng(seed, &[TAG_PAIRS]);
    let mut pairs = Vec::new();
    for _ in 0..PAIR_ATTEMPTS {
        if pairs.len() == PAIRS {
            break;
        }
        let x = rng.gen_range(0..1u32 << n);
        let y = rng.gen_range(0..1u32 << n);
        if x == y || pairs.contains(&(x, y)) {
            continue;
        }
        let (a, b) = (candidate_set(&scheme, x), candidate_set(&scheme, y));
        let disjoint = !a.iter().zip(&b).any(|(&p, &q)| p && q);
        if disjoint && a.contains(&true) && b.contains(&true) {
            pairs.push((x, y));
        }
    }
    let inputs: Vec<u32> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    let outputs = encode_across_draws(&scheme, &inputs, trials, seed)?;
    let stderr = 1.0 / (trials as f64).sqrt();
    let correlations: Vec<f64> =
        (0..pairs.len()).flat_map(|k| bit_correlations(&outputs, 2 * k, 2 * k + 1, n)).flatten().collect();
    let max_abs_correlation = correlations.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    Ok(PairwiseReport {
        n,
        trials,
        pairs,
        max_abs_correlation,
        stderr,
        non_degenerate_bits: correlations.len(),
        degenerate: correlations.is_empty(),
        within_tolerance: max_abs_correlation <= Z_TOLERANCE * stderr,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationReport {
    pub n: usize,
    pub trials: usize,
    pub inputs: Vec<u32>,
    /// `max |P(Ē(x) = u) - P(Ē(πx) = πu)|` over sampled inputs and observed `u`.
    pub max_abs_diff: f64,
    /// Standard error of the difference at the maximizing cell.
    pub stderr: f64,
    /// Largest difference in units of its own standard error.
    pub max_z: f64,
    pub within_tolerance: bool,
}

/// Compares the law of `Ē(x)` with the law of `π⁻¹(Ē(πx))` on common encoder draws.
pub fn check_permutation_invariance(
    config: &SlcsConfig,
    pi: &Permutation,
    trials: usize,
    seed: u64,
) -> Result<PermutationReport> {
    let n = config.n;
    check_cap(n, MAX_PERMUTATION_DIM, "permutation checks")?;
    check_trials(trials)?;
    if pi.dim() != n {
        return Err(Error::DimensionMismatch { left: pi.dim(), right: n });
    }
    let scheme = SlcsScheme::new(config.clone())?;
    let mut rng = seed::rng(seed, &[TAG_INPUTS]);
    let inputs: Vec<u32> = (0..INPUTS).map(|_| rng.gen_range(0..1u32 << n)).collect();
    let queries: Vec<u32> = inputs.iter().flat_map(|&x| [x, pi.apply(x)]).collect();
    let outputs = encode_across_draws(&scheme, &queries, trials, seed)?;
    let inv = pi.inverse();
    let t = trials as f64;
    let (mut max_abs_diff, mut stderr, mut max_z, mut within) = (0.0f64, 0.0, 0.0f64, true);
    for k in 0..inputs.len() {
        let a: Vec<u32> = outputs.iter().map(|o| o[2 * k]).collect();
        let b: Vec<u32> = outputs.iter().map(|o| inv.apply(o[2 * k + 1])).collect();
        let cells: BTreeSet<u32> = a.iter().chain(&b).copied().collect();
        for u in cells {
            let d: Vec<f64> = a.iter().zip(&b).map(|(&p, &q)| (p == u) as u8 as f64 - (q == u) as u8 as f64).collect();
            let mean = d.iter().sum::<f64>() / t;
            let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1.0);
            let se = (var / t).sqrt();
            let z = if se > 0.0 { mean.abs() / se } else if mean == 0.0 { 0.0 } else { f64::INFINITY };
            if mean.abs() > max_abs_diff {
                max_abs_diff = mean.abs();
                stderr = se;
            }
            max_z = max_z.max(z);
            within &= z <= Z_TOLERANCE;
        }
    }
    Ok(PermutationReport { n, trials, inputs, max_abs_diff, stderr, max_z, within_tolerance: within })
}
