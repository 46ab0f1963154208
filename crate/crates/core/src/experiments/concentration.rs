//! Low-weight spectral mass of a coordinate function across encoder draws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlattice::{ProductSource, SubsetMask};
use crate::decomposition::center;
use crate::error::{Error, Result};
use crate::seed;

use super::{check_draws, check_experiment_dim, EncoderFamily};

const TAG: u64 = 0xC0C0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationParams {
    pub family: EncoderFamily,
    /// `P(X = 1)` of the product source the spectra are taken under.
    pub p: f64,
    pub ns: Vec<usize>,
    /// Weight cutoffs.
    pub ms: Vec<usize>,
    pub gammas: Vec<f64>,
    /// Output coordinate (1-based).
    pub k: usize,
    pub draws: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub k: usize,
    /// Fraction of draws with low-weight mass `≥ gamma`.
    pub empirical_prob: f64,
    /// Mean low-weight mass over the draws, divided by `gamma`.
    pub markov_bound: f64,
    pub draws: usize,
    pub seed: u64,
}

/// `samples[d][j]`: mass of draw `d` on masks of weight `≤ ms[j]` other than `{k}`.
pub fn level_mass_samples(
    family: &EncoderFamily,
    p: f64,
    n: usize,
    ms: &[usize],
    k: usize,
    draws: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let src = ProductSource::new(n, p)?;
    let exclude = SubsetMask::basis(n, k)?;
    (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let enc = family.realize(n, seed::derive(seed, &[TAG, n as u64, d]))?;
            let spectrum = center(&enc.coordinate_function(k)?, &src)?.spectrum()?;
            Ok(ms.iter().map(|&m| spectrum.level_mass(m, exclude)).collect())
        })
        .collect()
}

/// One row per `(n, m, gamma)`, in grid order. Draws are shared across `m` and `gamma`.
pub fn run_concentration(params: &ConcentrationParams) -> Result<Vec<ConcentrationRow>> {
    check_experiment_dim(&params.ns)?;
    check_draws(params.draws)?;
    if let Some(&g) = params.gammas.iter().find(|&&g| !(g.is_finite() && g > 0.0)) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {g}")));
    }
    let mut rows = Vec::new();
    for &n in &params.ns {
        let samples = level_mass_samples(&params.family, params.p, n, &params.ms, params.k, params.draws, params.seed)?;
        for (j, &m) in params.ms.iter().enumerate() {
            let masses: Vec<f64> = samples.iter().map(|s| s[j]).collect();
            let mean = masses.iter().sum::<f64>() / masses.len() as f64;
            for &gamma in &params.gammas {
                let hits = masses.iter().filter(|&&v| v >= gamma).count();
                rows.push(ConcentrationRow {
                    n,
                    m,
                    gamma,
                    k: params.k,
                    empirical_prob: hits as f64 / params.draws as f64,
                    markov_bound: mean / gamma,
                    draws: params.draws,
                    seed: params.seed,
                });
            }
        }
    }
    Ok(rows)
}
