//! Disagreement of first output coordinates against the collapse threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlattice::CorrelatedPairSource;
use crate::corrbounds::{collapse_threshold, exact_disagreement, mc_disagreement, Method, MAX_EXACT_DIM};
use crate::decomposition::center;
use crate::error::{Error, Result};
use crate::seed;

use super::{check_draws, check_experiment_dim, mean_stderr, EncoderFamily};

const TAG: u64 = 0xC011;
const TAG_SECOND: u64 = 2;
const TAG_MC: u64 = 0x3C;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseParams {
    pub family: EncoderFamily,
    /// `P(X = 1)`.
    pub p: f64,
    pub ns: Vec<usize>,
    pub eps: Vec<f64>,
    /// Slack subtracted inside the threshold.
    pub delta: f64,
    pub draws: usize,
    /// Both ends use one encoder draw instead of two independent ones.
    pub shared: bool,
    pub seed: u64,
    /// Source pairs per draw when `n` is too large for exact summation.
    pub mc_trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseRow {
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub shared_encoder: bool,
    pub draws: usize,
    /// Mean of `P(E_1(X) ≠ F_1(Y))` over draws.
    pub disagreement_estimate: f64,
    pub disagreement_stderr: f64,
    /// Mean of the collapse threshold (with `delta` already subtracted) over draws.
    pub collapse_threshold: f64,
    /// Fraction of draws whose disagreement exceeds their own threshold.
    pub fraction_above_threshold: f64,
    pub method: Method,
}

/// One row per `(n, eps)`. Encoder draws depend on `(seed, n, draw)` only, so
/// every `eps` sees the same encoders.
pub fn run_collapse(params: &CollapseParams) -> Result<Vec<CollapseRow>> {
    check_experiment_dim(&params.ns)?;
    check_draws(params.draws)?;
    if !(params.delta.is_finite() && params.delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be non-negative, got {}", params.delta)));
    }
    let mut rows = Vec::new();
    for &n in &params.ns {
        let sources = params
            .eps
            .iter()
            .map(|&eps| CorrelatedPairSource::new(n, params.p, eps))
            .collect::<Result<Vec<_>>>()?;
        let method = if n <= MAX_EXACT_DIM { Method::Exact } else { Method::Mc };
        // per[d][j] = (disagreement, threshold) of draw d at eps[j]
        let per: Vec<Vec<(f64, f64)>> = (0..params.draws as u64)
            .into_par_iter()
            .map(|d| {
                let e_enc = params.family.realize(n, seed::derive(params.seed, &[TAG, n as u64, d]))?;
                let f_enc = if params.shared {
                    e_enc.clone()
                } else {
                    params.family.realize(n, seed::derive(params.seed, &[TAG, n as u64, d, TAG_SECOND]))?
                };
                let (e, f) = (e_enc.coordinate_function(1)?, f_enc.coordinate_function(1)?);
                sources
                    .iter()
                    .enumerate()
                    .map(|(j, src)| {
                        let p_spec = center(&e, &src.x_source())?.spectrum()?;
                        let q_spec = center(&f, &src.y_source())?.spectrum()?;
                        let threshold = collapse_threshold(&p_spec, &q_spec, src.eps(), params.delta)?;
                        let disagreement = match method {
                            Method::Exact => exact_disagreement(&e, &f, src)?,
                            Method::Mc => {
                                let s = seed::derive(params.seed, &[TAG_MC, n as u64, d, j as u64]);
                                mc_disagreement(&e, &f, src, params.mc_trials, s)?.estimate
                            }
                        };
                        Ok((disagreement, threshold))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (j, &eps) in params.eps.iter().enumerate() {
            let ds: Vec<f64> = per.iter().map(|r| r[j].0).collect();
            let ts: Vec<f64> = per.iter().map(|r| r[j].1).collect();
            let (disagreement, stderr) = mean_stderr(&ds);
            let above = per.iter().filter(|r| r[j].0 > r[j].1).count();
            rows.push(CollapseRow {
                n,
                eps,
                delta: params.delta,
                shared_encoder: params.shared,
                draws: params.draws,
                disagreement_estimate: disagreement,
                disagreement_stderr: stderr,
                collapse_threshold: ts.iter().sum::<f64>() / ts.len() as f64,
                fraction_above_threshold: above as f64 / params.draws as f64,
                method,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::default_slcs_config;

    fn params(shared: bool) -> CollapseParams {
        CollapseParams {
            family: EncoderFamily::Slcs(default_slcs_config()),
            p: 0.5,
            ns: vec![4, 6],
            eps: vec![0.0, 0.1, 0.5],
            delta: 0.05,
            draws: 12,
            shared,
            seed: 5,
            mc_trials: 1 << 14,
        }
    }

    #[test]
    fn shared_encoders_agree_without_noise() {
        let rows = run_collapse(&params(true)).unwrap();
        assert_eq!(rows.len(), 6);
        for r in rows.iter().filter(|r| r.eps == 0.0) {
            assert_eq!(r.disagreement_estimate, 0.0);
        }
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.fraction_above_threshold));
            assert_eq!(r.method, Method::Exact);
        }
    }

    #[test]
    fn independent_inputs_give_product_disagreement() {
        // at eps = 1/2 the inputs are independent, so D = q_e(1-q_f) + q_f(1-q_e)
        let mut p = params(true);
        p.eps = vec![0.5];
        p.family = EncoderFamily::Uncoded;
        let rows = run_collapse(&p).unwrap();
        assert!(rows.iter().all(|r| (r.disagreement_estimate - 0.5).abs() < 1e-12));
    }

    #[test]
    fn uncoded_sits_on_the_dictator_bound() {
        let mut p = params(true);
        p.family = EncoderFamily::Uncoded;
        p.eps = vec![0.1];
        let rows = run_collapse(&p).unwrap();
        for r in rows {
            assert!((r.disagreement_estimate - 0.1).abs() < 1e-12);
            // threshold = 2·(1/4) - 2·0.8·(1/4) - delta = 0.1 - delta
            assert!((r.collapse_threshold - 0.05).abs() < 1e-12);
            assert_eq!(r.fraction_above_threshold, 1.0);
        }
    }

    #[test]
    fn monte_carlo_above_exact_cap() {
        let mut p = params(false);
        p.ns = vec![11];
        p.eps = vec![0.1];
        p.draws = 2;
        p.mc_trials = 4096;
        let rows = run_collapse(&p).unwrap();
        assert_eq!(rows[0].method, Method::Mc);
        assert_eq!(rows, run_collapse(&p).unwrap());
    }
}
