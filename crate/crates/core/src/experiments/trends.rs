//! Pass/fail checks over experiment tables.
//!
//! Each check returns the list of violated expectations, empty on success.
//! Monotone trends are one-sided: a later grid point may exceed an earlier
//! one only by sampling noise, taken as [`Z_TOLERANCE`] combined binomial
//! standard errors.

use super::{CollapseRow, ConcentrationRow, IccsReport};

/// Width of every statistical band, in standard errors.
pub const Z_TOLERANCE: f64 = 4.0;
/// Smallest `eps` at which shared encoders should already sit above the threshold.
pub const COLLAPSE_EPS_MIN: f64 = 0.05;
/// Required fraction of draws above the threshold at those `eps`.
pub const COLLAPSE_FRACTION: f64 = 0.9;
/// Slack for values computed by exact summation.
const EXACT_SLACK: f64 = 1e-12;

fn binomial_se(p: f64, draws: usize) -> f64 {
    (p * (1.0 - p) / draws as f64).sqrt()
}

/// Whether `later` is not significantly above `earlier`.
pub fn not_significantly_above(earlier: f64, later: f64, draws_earlier: usize, draws_later: usize) -> bool {
    let se = binomial_se(earlier, draws_earlier).hypot(binomial_se(later, draws_later));
    later - earlier <= Z_TOLERANCE * se
}

/// Exceedance non-increasing in `n` for each `(m, gamma, k)`, and the Markov
/// bound above the empirical frequency in every cell.
pub fn check_concentration(rows: &[ConcentrationRow]) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows {
        if r.markov_bound < r.empirical_prob {
            out.push(format!(
                "n={} m={} gamma={}: Markov bound {} below empirical {}",
                r.n, r.m, r.gamma, r.markov_bound, r.empirical_prob
            ));
        }
    }
    for (i, a) in rows.iter().enumerate() {
        let next = rows[i + 1..].iter().find(|b| b.m == a.m && b.gamma == a.gamma && b.k == a.k && b.n > a.n);
        if let Some(b) = next {
            if !not_significantly_above(a.empirical_prob, b.empirical_prob, a.draws, b.draws) {
                out.push(format!(
                    "m={} gamma={}: exceedance rose from {} at n={} to {} at n={}",
                    a.m, a.gamma, a.empirical_prob, a.n, b.empirical_prob, b.n
                ));
            }
        }
    }
    out
}

/// With shared encoders, zero disagreement at `eps = 0` and at least
/// [`COLLAPSE_FRACTION`] of draws above the threshold for `eps ≥` [`COLLAPSE_EPS_MIN`].
pub fn check_collapse_discontinuity(rows: &[CollapseRow]) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.shared_encoder) {
        if r.eps == 0.0 && r.disagreement_estimate != 0.0 {
            out.push(format!("n={}: disagreement {} at eps=0 with a shared encoder", r.n, r.disagreement_estimate));
        }
        if r.eps >= COLLAPSE_EPS_MIN && r.fraction_above_threshold < COLLAPSE_FRACTION {
            out.push(format!(
                "n={} eps={}: only {} of draws above the threshold (mean disagreement {}, mean threshold {})",
                r.n, r.eps, r.fraction_above_threshold, r.disagreement_estimate, r.collapse_threshold
            ));
        }
    }
    out
}

/// Fraction above the threshold non-decreasing in `n` for each `eps > 0`.
pub fn check_collapse_trend(rows: &[CollapseRow]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, a) in rows.iter().enumerate().filter(|(_, r)| r.eps > 0.0) {
        let next = rows[i + 1..].iter().find(|b| b.eps == a.eps && b.shared_encoder == a.shared_encoder && b.n > a.n);
        if let Some(b) = next {
            // mirror of "not significantly above" for a non-decreasing sequence
            if !not_significantly_above(1.0 - a.fraction_above_threshold, 1.0 - b.fraction_above_threshold, a.draws, b.draws)
            {
                out.push(format!(
                    "eps={}: fraction above fell from {} at n={} to {} at n={}",
                    a.eps, a.fraction_above_threshold, a.n, b.fraction_above_threshold, b.n
                ));
            }
        }
    }
    out
}

fn agreement_gap_se(a: &IccsReport, b: &IccsReport) -> f64 {
    a.agreement_stderr.hypot(b.agreement_stderr)
}

/// Uncoded agreement at `1 - eps`, independent typicality-coded encoders below
/// it by more than the band, the entropy caps ordered the same way, and the
/// constant scheme's erasures at `1 - agreement`.
pub fn check_iccs(reports: &[IccsReport]) -> Vec<String> {
    let mut out = Vec::new();
    let find = |label: &str, n: usize| reports.iter().find(|r| r.scheme == label && r.n == n);
    for r in reports {
        match r.scheme.as_str() {
            "uncoded" => {
                let gap = (r.agreement_rate - (1.0 - r.eps)).abs();
                if gap > Z_TOLERANCE * r.agreement_stderr + EXACT_SLACK {
                    out.push(format!("n={}: uncoded agreement {} is not 1 - eps", r.n, r.agreement_rate));
                }
            }
            "slcs" => {
                if let Some(u) = find("uncoded", r.n) {
                    let margin = u.agreement_rate - r.agreement_rate;
                    if margin <= Z_TOLERANCE * agreement_gap_se(u, r) {
                        out.push(format!(
                            "n={}: coded agreement {} is not below uncoded {} by {} standard errors",
                            r.n, r.agreement_rate, u.agreement_rate, Z_TOLERANCE
                        ));
                    }
                    if r.hz_bound_bits >= u.hz_bound_bits {
                        out.push(format!("n={}: coded entropy cap {} is not below uncoded {}", r.n, r.hz_bound_bits, u.hz_bound_bits));
                    }
                }
            }
            "constant" => {
                let gap = (r.empirical_erasure_rate - (1.0 - r.agreement_rate)).abs();
                if gap > Z_TOLERANCE * r.erasure_stderr + EXACT_SLACK {
                    out.push(format!(
                        "n={}: constant-scheme erasure rate {} is not 1 - agreement {}",
                        r.n, r.empirical_erasure_rate, r.agreement_rate
                    ));
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrbounds::Method;

    fn conc(n: usize, p: f64) -> ConcentrationRow {
        ConcentrationRow { n, m: 2, gamma: 0.05, k: 1, empirical_prob: p, markov_bound: 1.0, draws: 200, seed: 0 }
    }

    fn coll(n: usize, eps: f64, d: f64, frac: f64) -> CollapseRow {
        CollapseRow {
            n,
            eps,
            delta: 0.05,
            shared_encoder: true,
            draws: 100,
            disagreement_estimate: d,
            disagreement_stderr: 0.0,
            collapse_threshold: 0.0,
            fraction_above_threshold: frac,
            method: Method::Exact,
        }
    }

    #[test]
    fn one_sided_tolerance() {
        assert!(not_significantly_above(0.5, 0.5, 200, 200));
        assert!(not_significantly_above(0.5, 0.55, 200, 200));
        assert!(!not_significantly_above(0.1, 0.5, 200, 200));
        assert!(!not_significantly_above(0.0, 0.2, 200, 200));
    }

    #[test]
    fn concentration_checks() {
        assert!(check_concentration(&[conc(4, 0.8), conc(6, 0.82), conc(8, 0.3)]).is_empty());
        assert_eq!(check_concentration(&[conc(4, 0.1), conc(6, 0.5)]).len(), 1);
        let mut weak = conc(4, 0.5);
        weak.markov_bound = 0.4;
        assert_eq!(check_concentration(&[weak]).len(), 1);
    }

    #[test]
    fn collapse_checks() {
        assert!(check_collapse_discontinuity(&[coll(10, 0.0, 0.0, 0.0), coll(10, 0.1, 0.2, 0.95)]).is_empty());
        assert_eq!(check_collapse_discontinuity(&[coll(10, 0.0, 0.01, 0.0)]).len(), 1);
        assert_eq!(check_collapse_discontinuity(&[coll(10, 0.05, 0.2, 0.5)]).len(), 1);
        assert!(check_collapse_trend(&[coll(4, 0.1, 0.2, 0.5), coll(6, 0.1, 0.2, 0.9)]).is_empty());
        assert_eq!(check_collapse_trend(&[coll(4, 0.1, 0.2, 0.9), coll(6, 0.1, 0.2, 0.2)]).len(), 1);
    }
}
