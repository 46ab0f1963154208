//! Bounds on the disagreement probability of two Boolean functions applied to
//! correlated inputs, in terms of their dependency spectra.
//!
//! For `e` applied to `X^n` and `f` applied to `Y^n`, with coordinate-wise
//! disagreement probability `eps = P(X_j ≠ Y_j)` and `C_i = (1 - 2 eps)^|i|`:
//!
//! ```text
//! 2 √ΣP √ΣQ - 2 Σ C_i √(P_i Q_i)  ≤  P(e(X) ≠ f(Y))  ≤  1 - 2 √ΣP √ΣQ + 2 Σ C_i √(P_i Q_i)
//! ```
//!
//! `P` must be the spectrum of `e` under the law of `X` and `Q` the spectrum of
//! `f` under the law of `Y`. When `X` is not uniform the two laws differ; see
//! [`CorrelatedPairSource::y_source`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlattice::{CorrelatedPairSource, SubsetMask};
use crate::decomposition::{center, BooleanFunction, DependencySpectrum};
use crate::error::{Error, Result};
use crate::seed;

/// Largest dimension for exhaustive disagreement.
pub const MAX_EXACT_DIM: usize = 10;

/// Slack used when checking that an exact disagreement lies within the bounds.
pub const SANDWICH_SLACK: f64 = 1e-9;

const MC_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn lower_clamped(&self) -> f64 {
        self.lower.max(0.0)
    }

    pub fn upper_clamped(&self) -> f64 {
        self.upper.min(1.0)
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..=0.5).contains(&eps) {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

fn check_same_dim(p: &DependencySpectrum, q: &DependencySpectrum) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    Ok(())
}

/// Two-sided bound on `P(e(X) ≠ f(Y))` from the spectra of `e` and `f`.
pub fn disagreement_bounds(p: &DependencySpectrum, q: &DependencySpectrum, eps: f64) -> Result<Bounds> {
    check_same_dim(p, q)?;
    check_eps(eps)?;
    let rho = 1.0 - 2.0 * eps;
    let cross: f64 = p
        .variances()
        .iter()
        .zip(q.variances())
        .enumerate()
        .map(|(i, (pi, qi))| rho.powi(i.count_ones() as i32) * (pi * qi).sqrt())
        .sum();
    let base = 2.0 * p.total().sqrt() * q.total().sqrt();
    Ok(Bounds { lower: base - 2.0 * cross, upper: 1.0 - base + 2.0 * cross })
}

/// `2 √P √Q - 2 (1 - 2 eps) √(P_1 Q_1) - delta`, where `P_1`, `Q_1` are the
/// variances on the single-letter mask of coordinate 1. Encoders drawn from a
/// single-letter scheme exceed this disagreement level with probability
/// tending to one as the blocklength grows.
pub fn collapse_threshold(p: &DependencySpectrum, q: &DependencySpectrum, eps: f64, delta: f64) -> Result<f64> {
    check_same_dim(p, q)?;
    check_eps(eps)?;
    let first = SubsetMask::basis(p.dim(), 1)?;
    Ok(2.0 * p.total().sqrt() * q.total().sqrt()
        - 2.0 * (1.0 - 2.0 * eps) * (p.variance(first) * q.variance(first)).sqrt()
        - delta)
}

fn check_pair(e: &BooleanFunction, f: &BooleanFunction, src: &CorrelatedPairSource) -> Result<()> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch { left: e.dim(), right: f.dim() });
    }
    if e.dim() != src.dim() {
        return Err(Error::DimensionMismatch { left: e.dim(), right: src.dim() });
    }
    Ok(())
}

/// `P(e(X) ≠ f(Y))` by summing over every input and every flip pattern.
pub fn exact_disagreement(e: &BooleanFunction, f: &BooleanFunction, src: &CorrelatedPairSource) -> Result<f64> {
    check_pair(e, f, src)?;
    let n = e.dim();
    if n > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_EXACT_DIM, what: "exact disagreement" });
    }
    let px = src.x_source().probs();
    let pflip = src.flip_source().probs();
    let (et, ft) = (e.table(), f.table());
    Ok(pflip
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(flip, &w)| {
            let inner =
                px.iter().enumerate().filter(|&(x, _)| et[x] != ft[x ^ flip]).fold(0.0, |acc, (_, p)| acc + p);
            w * inner
        })
        .fold(0.0, |acc, v| acc + v))
}

/// A Monte-Carlo frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
}

impl McEstimate {
    pub fn from_count(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        McEstimate { estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), trials }
    }
}

/// Monte-Carlo estimate of `P(e(X) ≠ f(Y))`. Trials are split into fixed-size
/// chunks with their own derived seeds, so the result does not depend on the
/// number of worker threads.
pub fn mc_disagreement(
    e: &BooleanFunction,
    f: &BooleanFunction,
    src: &CorrelatedPairSource,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_pair(e, f, src)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let chunks = trials.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed::rng(seed, &[c]);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            (0..len)
                .filter(|_| {
                    let (x, y) = src.sample(&mut rng);
                    e.eval(x) != f.eval(y)
                })
                .count() as u64
        })
        .sum();
    Ok(McEstimate::from_count(hits, trials))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Mc,
}

/// Bounds together with the disagreement they bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub n: usize,
    pub eps: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_clamped: f64,
    pub upper_clamped: f64,
    pub disagreement: Option<f64>,
    pub stderr: Option<f64>,
    pub method: Option<Method>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

impl CorrelationReport {
    /// Bounds only, from two spectra.
    pub fn from_spectra(p: &DependencySpectrum, q: &DependencySpectrum, eps: f64) -> Result<Self> {
        let b = disagreement_bounds(p, q, eps)?;
        Ok(CorrelationReport {
            n: p.dim(),
            eps,
            lower: b.lower,
            upper: b.upper,
            lower_clamped: b.lower_clamped(),
            upper_clamped: b.upper_clamped(),
            disagreement: None,
            stderr: None,
            method: None,
            seed: None,
            trials: None,
        })
    }

    fn spectra(e: &BooleanFunction, f: &BooleanFunction, src: &CorrelatedPairSource) -> Result<Self> {
        check_pair(e, f, src)?;
        let p = center(e, &src.x_source())?.spectrum()?;
        let q = center(f, &src.y_source())?.spectrum()?;
        Self::from_spectra(&p, &q, src.eps())
    }

    pub fn exact(e: &BooleanFunction, f: &BooleanFunction, src: &CorrelatedPairSource) -> Result<Self> {
        let mut r = Self::spectra(e, f, src)?;
        r.disagreement = Some(exact_disagreement(e, f, src)?);
        r.method = Some(Method::Exact);
        Ok(r)
    }

    pub fn monte_carlo(
        e: &BooleanFunction,
        f: &BooleanFunction,
        src: &CorrelatedPairSource,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let mut r = Self::spectra(e, f, src)?;
        let est = mc_disagreement(e, f, src, trials, seed)?;
        r.disagreement = Some(est.estimate);
        r.stderr = Some(est.stderr);
        r.method = Some(Method::Mc);
        r.seed = Some(seed);
        r.trials = Some(trials);
        Ok(r)
    }

    pub fn bounds(&self) -> Bounds {
        Bounds { lower: self.lower, upper: self.upper }
    }

    /// Whether the disagreement lies within the raw bounds: `SANDWICH_SLACK`
    /// for exact values, four standard errors for Monte-Carlo ones.
    pub fn sandwich_holds(&self) -> Option<bool> {
        let d = self.disagreement?;
        let slack = match self.method? {
            Method::Exact => SANDWICH_SLACK,
            Method::Mc => 4.0 * self.stderr.unwrap_or(0.0) + SANDWICH_SLACK,
        };
        Some(self.bounds().contains(d, slack))
    }
}
