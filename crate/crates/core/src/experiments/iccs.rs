//! Agreement between two distributed encoders and the gated interference channel.
//!
//! Transmitter 1 sends `X_1 = e_1(X^n)` over a BSC. Transmitter 2 sees
//! `(Y^n, Z^n)` and sends a gate bit `X_22 = e_22(Y^n, Z^n)` alongside a
//! `q`-ary symbol `X_21`; receiver 2 gets `X_21` only when the gate bit matches
//! `X_1`, and an erasure otherwise. Per symbol, the entropy of `Z` that can get
//! through is at most `1 + a·log2 q`, where `a` is the bitwise agreement rate.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlattice::{full_mask, CorrelatedPairSource};
use crate::corrbounds::{McEstimate, MAX_EXACT_DIM};
use crate::error::{check_probability, Error, Result};
use crate::seed;
use crate::slcs::VectorEncoder;

use super::{check_draws, check_experiment_dim, mean_stderr, EncoderFamily};

const TAG_ENC1: u64 = 0xE1;
const TAG_ENC22: u64 = 0xE22;
const TAG_DRAW: u64 = 0xD0;
const TAG_MC: u64 = 0x3C;
const MC_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IccsParams {
    /// BSC crossover on the first link.
    pub delta: f64,
    pub q_ary: u32,
    pub eps: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub n: usize,
}

impl IccsParams {
    /// Parameters with `alpha_y` set to the marginal implied by `alpha_x` and `eps`.
    pub fn new(n: usize, eps: f64, alpha_x: f64, delta: f64, q_ary: u32) -> Result<Self> {
        let alpha_y = alpha_x * (1.0 - eps) + (1.0 - alpha_x) * eps;
        let params = IccsParams { delta, q_ary, eps, alpha_x, alpha_y, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.delta) {
            return Err(Error::InvalidParameter(format!("crossover delta = {} is outside [0, 1/2]", self.delta)));
        }
        if self.q_ary < 2 {
            return Err(Error::InvalidParameter(format!("alphabet size q = {} must be at least 2", self.q_ary)));
        }
        check_probability("alpha_x", self.alpha_x)?;
        let implied = self.alpha_x * (1.0 - self.eps) + (1.0 - self.alpha_x) * self.eps;
        if (self.alpha_y - implied).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "alpha_y = {} is inconsistent with alpha_x and eps (expected {implied})",
                self.alpha_y
            )));
        }
        CorrelatedPairSource::new(self.n, self.alpha_x, self.eps).map(|_| ())
    }

    pub fn source(&self) -> Result<CorrelatedPairSource> {
        CorrelatedPairSource::new(self.n, self.alpha_x, self.eps)
    }
}

/// One channel use: `y1 = x1 ⊕ Bernoulli(delta)`, and `y2 = Some(x21)` when
/// `x22 == x1`, `None` (erasure) otherwise.
pub fn channel_step<R: Rng + ?Sized>(
    x1: bool,
    x21: u32,
    x22: bool,
    params: &IccsParams,
    rng: &mut R,
) -> Result<(bool, Option<u32>)> {
    if x21 >= params.q_ary {
        return Err(Error::InvalidParameter(format!("symbol {x21} is outside the alphabet of size {}", params.q_ary)));
    }
    let y1 = x1 ^ rng.gen_bool(params.delta);
    Ok((y1, (x22 == x1).then_some(x21)))
}

/// `1 + a·log2 q` bits per symbol.
pub fn hz_bound(agreement: f64, q_ary: u32) -> Result<f64> {
    check_probability("agreement", agreement)?;
    if q_ary < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size q = {q_ary} must be at least 2")));
    }
    Ok(1.0 + agreement * (q_ary as f64).log2())
}

fn check_encoders(enc1: &VectorEncoder, enc22: &VectorEncoder, src: &CorrelatedPairSource) -> Result<()> {
    if enc1.dim() != enc22.dim() {
        return Err(Error::DimensionMismatch { left: enc1.dim(), right: enc22.dim() });
    }
    if enc1.dim() != src.dim() {
        return Err(Error::DimensionMismatch { left: enc1.dim(), right: src.dim() });
    }
    Ok(())
}

fn agreeing_bits(a: u32, b: u32, n: usize) -> u32 {
    (!(a ^ b) & full_mask(n)).count_ones()
}

/// `(1/n) Σ_i P(e_1,i(X) = e_22,i(Y))`: exact up to the exact-summation cap,
/// Monte-Carlo with a fixed seed above it.
pub fn agreement_rate(enc1: &VectorEncoder, enc22: &VectorEncoder, src: &CorrelatedPairSource) -> Result<f64> {
    check_encoders(enc1, enc22, src)?;
    let n = enc1.dim();
    if n > MAX_EXACT_DIM {
        return Ok(mc_agreement_rate(enc1, enc22, src, MC_TRIALS, 0)?.estimate);
    }
    let px = src.x_source().probs();
    let pflip = src.flip_source().probs();
    let total: f64 = pflip
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(flip, &w)| {
            let inner: f64 = px
                .iter()
                .enumerate()
                .map(|(x, &p)| p * agreeing_bits(enc1.eval(x as u32), enc22.eval(x as u32 ^ flip as u32), n) as f64)
                .sum();
            w * inner
        })
        .sum();
    Ok(total / n as f64)
}

/// Monte-Carlo agreement rate; `stderr` treats the per-pair agreeing fraction as the sample.
pub fn mc_agreement_rate(
    enc1: &VectorEncoder,
    enc22: &VectorEncoder,
    src: &CorrelatedPairSource,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_encoders(enc1, enc22, src)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = enc1.dim();
    let mut rng = seed::rng(seed, &[TAG_MC]);
    let samples: Vec<f64> = (0..trials)
        .map(|_| {
            let (x, y) = src.sample(&mut rng);
            agreeing_bits(enc1.eval(x), enc22.eval(y), n) as f64 / n as f64
        })
        .collect();
    let (estimate, stderr) = mean_stderr(&samples);
    Ok(McEstimate { estimate, stderr, trials })
}

/// An encoder pair for the two transmitters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IccsScheme {
    pub family: EncoderFamily,
    /// Transmitter 2 reuses transmitter 1's draw instead of a `z`-indexed one.
    pub shared: bool,
}

impl IccsScheme {
    pub fn uncoded() -> Self {
        IccsScheme { family: EncoderFamily::Uncoded, shared: false }
    }

    pub fn constant() -> Self {
        IccsScheme { family: EncoderFamily::Constant, shared: false }
    }

    pub fn slcs(config: crate::slcs::SlcsConfig, shared: bool) -> Self {
        IccsScheme { family: EncoderFamily::Slcs(config), shared }
    }

    pub fn label(&self) -> String {
        match (&self.family, self.shared) {
            (EncoderFamily::Slcs(_), true) => "slcs-shared".to_string(),
            (family, _) => family.label().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IccsReport {
    pub scheme: String,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub q_ary: u32,
    pub draws: usize,
    /// Mean over `z` draws of the agreement rate of `(e_1, e_22,z)`.
    pub agreement_rate: f64,
    pub agreement_stderr: f64,
    pub hz_bound_bits: f64,
    /// Fraction of simulated channel uses erased at receiver 2.
    pub empirical_erasure_rate: f64,
    pub erasure_stderr: f64,
}

/// For each scheme: fixes `e_1`, then per draw samples `z`, realizes `e_22,z`,
/// computes the agreement rate and simulates one block of channel uses. The
/// `(x, y, z)` draws are common to every scheme.
pub fn run_iccs_comparison(
    params: &IccsParams,
    schemes: &[IccsScheme],
    draws: usize,
    seed: u64,
) -> Result<Vec<IccsReport>> {
    params.validate()?;
    check_experiment_dim(&[params.n])?;
    check_draws(draws)?;
    let n = params.n;
    let src = params.source()?;
    schemes
        .iter()
        .map(|scheme| {
            let enc1 = scheme.family.realize(n, seed::derive(seed, &[TAG_ENC1, n as u64]))?;
            let per: Vec<(f64, f64)> = (0..draws as u64)
                .into_par_iter()
                .map(|d| {
                    let mut rng = seed::rng(seed, &[TAG_DRAW, n as u64, d]);
                    let z = rng.gen_range(0..1u32 << n);
                    let (x, y) = src.sample(&mut rng);
                    let enc22 = if scheme.shared {
                        enc1.clone()
                    } else {
                        scheme.family.realize(n, seed::derive(seed, &[TAG_ENC22, n as u64, z as u64]))?
                    };
                    let agreement = agreement_rate(&enc1, &enc22, &src)?;
                    let (x1, x22) = (enc1.eval(x), enc22.eval(y));
                    let mut erased = 0usize;
                    for i in 0..n {
                        let x21 = rng.gen_range(0..params.q_ary);
                        let (_, y2) = channel_step(x1 >> i & 1 == 1, x21, x22 >> i & 1 == 1, params, &mut rng)?;
                        erased += y2.is_none() as usize;
                    }
                    Ok((agreement, erased as f64 / n as f64))
                })
                .collect::<Result<_>>()?;
            let (agreement, agreement_stderr) = mean_stderr(&per.iter().map(|r| r.0).collect::<Vec<_>>());
            let (erasure, erasure_stderr) = mean_stderr(&per.iter().map(|r| r.1).collect::<Vec<_>>());
            Ok(IccsReport {
                scheme: scheme.label(),
                n,
                eps: params.eps,
                delta: params.delta,
                q_ary: params.q_ary,
                draws,
                agreement_rate: agreement,
                agreement_stderr,
                hz_bound_bits: hz_bound(agreement.clamp(0.0, 1.0), params.q_ary)?,
                empirical_erasure_rate: erasure,
                erasure_stderr,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::default_slcs_config;

    #[test]
    fn channel() {
        let p = IccsParams::new(4, 0.1, 0.5, 0.0, 4).unwrap();
        let mut rng = seed::rng(1, &[]);
        assert_eq!(channel_step(true, 3, true, &p, &mut rng).unwrap(), (true, Some(3)));
        assert_eq!(channel_step(false, 2, true, &p, &mut rng).unwrap(), (false, None));
        assert!(channel_step(false, 4, false, &p, &mut rng).is_err());
    }

    #[test]
    fn noisy_first_link_is_uniform_at_half() {
        // χ² with one degree of freedom; 10.83 is the 0.001 critical value
        let p = IccsParams::new(4, 0.1, 0.5, 0.5, 2).unwrap();
        let mut rng = seed::rng(2, &[]);
        let mut counts = [[0f64; 2]; 2];
        let trials = 100_000;
        for t in 0..trials {
            let x1 = t % 2 == 0;
            let (y1, _) = channel_step(x1, 0, x1, &p, &mut rng).unwrap();
            counts[x1 as usize][y1 as usize] += 1.0;
        }
        let expected = trials as f64 / 4.0;
        let chi2: f64 = counts.iter().flatten().map(|c| (c - expected).powi(2) / expected).sum();
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }

    #[test]
    fn hz_bounds() {
        assert_eq!(hz_bound(1.0, 4).unwrap(), 3.0);
        assert_eq!(hz_bound(0.0, 2).unwrap(), 1.0);
        assert!((hz_bound(0.9, 4).unwrap() - 2.8).abs() < 1e-12);
        assert!(hz_bound(1.1, 4).is_err());
        assert!(hz_bound(0.5, 1).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(IccsParams::new(4, 0.1, 0.5, 0.6, 4).is_err());
        assert!(IccsParams::new(4, 0.1, 0.5, 0.1, 1).is_err());
        assert!(IccsParams::new(4, 0.7, 0.5, 0.1, 4).is_err());
        let mut p = IccsParams::new(4, 0.1, 0.3, 0.1, 4).unwrap();
        assert!((p.alpha_y - 0.34).abs() < 1e-12);
        p.alpha_y = 0.3;
        assert!(p.validate().is_err());
    }

    #[test]
    fn agreement_closed_forms() {
        let src = CorrelatedPairSource::new(6, 0.5, 0.1).unwrap();
        let id = VectorEncoder::identity(6).unwrap();
        assert!((agreement_rate(&id, &id, &src).unwrap() - 0.9).abs() < 1e-12);
        let c = VectorEncoder::constant(6, 0b101010).unwrap();
        assert!((agreement_rate(&c, &c, &src).unwrap() - 1.0).abs() < 1e-12);
        let mc = mc_agreement_rate(&id, &id, &src, 20_000, 4).unwrap();
        assert!((mc.estimate - 0.9).abs() < 4.0 * mc.stderr);
        assert!(agreement_rate(&id, &VectorEncoder::identity(5).unwrap(), &src).is_err());
        let big = CorrelatedPairSource::new(11, 0.5, 0.1).unwrap();
        let id11 = VectorEncoder::identity(11).unwrap();
        assert!((agreement_rate(&id11, &id11, &big).unwrap() - 0.9).abs() < 0.01);
    }

    #[test]
    fn comparison() {
        let p = IccsParams::new(6, 0.1, 0.5, 0.1, 4).unwrap();
        let schemes = [
            IccsScheme::uncoded(),
            IccsScheme::constant(),
            IccsScheme::slcs(default_slcs_config(), false),
            IccsScheme::slcs(default_slcs_config(), true),
        ];
        let reports = run_iccs_comparison(&p, &schemes, 100, 8).unwrap();
        let labels: Vec<&str> = reports.iter().map(|r| r.scheme.as_str()).collect();
        assert_eq!(labels, ["uncoded", "constant", "slcs", "slcs-shared"]);
        assert!((reports[0].agreement_rate - 0.9).abs() < 1e-12);
        assert!((reports[1].agreement_rate - 1.0).abs() < 1e-12);
        assert_eq!(reports[1].empirical_erasure_rate, 0.0);
        assert!(reports[2].agreement_rate < reports[0].agreement_rate);
        assert_eq!(reports, run_iccs_comparison(&p, &schemes, 100, 8).unwrap());

        let noiseless = IccsParams::new(6, 0.0, 0.5, 0.3, 4).unwrap();
        let r = run_iccs_comparison(&noiseless, &[IccsScheme::uncoded()], 50, 1).unwrap();
        assert!((r[0].agreement_rate - 1.0).abs() < 1e-12);
        assert_eq!(r[0].empirical_erasure_rate, 0.0);
    }
}
