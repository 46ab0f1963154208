//! Seeded experiment sweeps over encoder draws.
//!
//! - [`run_concentration`]: how much spectral mass of a coordinate function sits
//!   on low-weight masks other than its own coordinate.
//! - [`run_collapse`]: disagreement of two encoders fed correlated inputs,
//!   against the spectral collapse threshold.
//! - [`run_iccs_comparison`]: bitwise agreement of two distributed encoders and
//!   the resulting cap on the rate of a gated interference-channel message.
//!
//! Every draw is seeded from the master seed and its grid coordinates, and
//! aggregation happens in draw order, so results do not depend on the thread
//! count.

mod collapse;
mod concentration;
mod iccs;
mod output;
pub mod trends;

pub use collapse::{run_collapse, CollapseParams, CollapseRow};
pub use concentration::{level_mass_samples, run_concentration, ConcentrationParams, ConcentrationRow};
pub use iccs::{
    agreement_rate, channel_step, hz_bound, mc_agreement_rate, run_iccs_comparison, IccsParams, IccsReport, IccsScheme,
};
pub use output::{to_csv, RunManifest};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::slcs::{build_encoder, SlcsConfig, VectorEncoder};

pub const DEFAULT_NS: [usize; 4] = [4, 6, 8, 10];
pub const DEFAULT_EPS: [f64; 4] = [0.0, 0.05, 0.1, 0.2];
pub const DEFAULT_GAMMAS: [f64; 3] = [0.02, 0.05, 0.1];
pub const DEFAULT_MS: [usize; 3] = [1, 2, 3];
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_DRAWS: usize = 200;
/// Largest blocklength any experiment accepts.
pub const MAX_EXPERIMENT_DIM: usize = 12;

/// The default scheme: rate 1/2, test channel `U = X ⊕ Bernoulli(0.1)`,
/// uniform source, typicality slack 0.2.
pub fn default_slcs_config() -> SlcsConfig {
    SlcsConfig::binary_symmetric(DEFAULT_NS[0], 0.5, 0.1, 0.5, 0.2).expect("valid default")
}

/// A random family of block encoders `{0,1}^n → {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EncoderFamily {
    /// The identity map, whatever the seed.
    Uncoded,
    /// The all-zero word, whatever the seed.
    Constant,
    /// Typicality encoding; `n` and `seed` of the config are overridden per draw.
    Slcs(SlcsConfig),
}

impl EncoderFamily {
    pub fn label(&self) -> &'static str {
        match self {
            EncoderFamily::Uncoded => "uncoded",
            EncoderFamily::Constant => "constant",
            EncoderFamily::Slcs(_) => "slcs",
        }
    }

    /// The member of the family at blocklength `n` for the given seed.
    pub fn realize(&self, n: usize, seed: u64) -> Result<VectorEncoder> {
        match self {
            EncoderFamily::Uncoded => VectorEncoder::identity(n),
            EncoderFamily::Constant => VectorEncoder::constant(n, 0),
            EncoderFamily::Slcs(cfg) => build_encoder(&cfg.clone().with_n(n).with_seed(seed)),
        }
    }
}

pub(crate) fn check_experiment_dim(ns: &[usize]) -> Result<()> {
    use crate::error::Error;
    match ns.iter().find(|&&n| n > MAX_EXPERIMENT_DIM) {
        Some(&n) => Err(Error::DimensionTooLarge { n, max: MAX_EXPERIMENT_DIM, what: "experiments" }),
        None if ns.contains(&0) => Err(Error::InvalidDimension(0)),
        None => Ok(()),
    }
}

pub(crate) fn check_draws(draws: usize) -> Result<()> {
    if draws == 0 {
        return Err(crate::error::Error::InvalidParameter("at least one draw is needed".into()));
    }
    Ok(())
}

/// Mean and standard error of the mean.
pub(crate) fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    // `Sum` for floats starts at -0.0; fold from +0.0 so zero means print as "0"
    let mean = values.iter().fold(0.0, |acc, v| acc + v) / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(EncoderFamily::Uncoded.realize(3, 9).unwrap(), VectorEncoder::identity(3).unwrap());
        assert!(EncoderFamily::Constant.realize(4, 1).unwrap().table().iter().all(|&w| w == 0));
        let slcs = EncoderFamily::Slcs(default_slcs_config());
        assert_eq!(slcs.realize(6, 3).unwrap(), slcs.realize(6, 3).unwrap());
        assert_ne!(slcs.realize(6, 3).unwrap(), slcs.realize(6, 4).unwrap());
        let json = serde_json::to_string(&slcs).unwrap();
        assert!(json.starts_with("{\"kind\":\"slcs\""));
        assert_eq!(serde_json::from_str::<EncoderFamily>(&json).unwrap(), slcs);
    }

    #[test]
    fn caps() {
        assert!(check_experiment_dim(&[4, 13]).is_err());
        assert!(check_experiment_dim(&[0]).is_err());
        assert!(check_experiment_dim(&DEFAULT_NS).is_ok());
    }

    #[test]
    fn mean_and_stderr() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[5.0]), (5.0, 0.0));
    }
}
