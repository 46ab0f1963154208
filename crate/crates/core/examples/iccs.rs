//! Agreement and erasures of uncoded, typicality-coded and constant encoders
//! on the gated interference channel.

use depspec::experiments::{default_slcs_config, run_iccs_comparison, IccsParams, IccsScheme};

fn main() -> depspec::Result<()> {
    let schemes = [
        IccsScheme::uncoded(),
        IccsScheme::slcs(default_slcs_config(), false),
        IccsScheme::slcs(default_slcs_config(), true),
        IccsScheme::constant(),
    ];
    let params = IccsParams::new(6, 0.1, 0.5, 0.1, 4)?;
    for r in run_iccs_comparison(&params, &schemes, 40, 9)? {
        println!(
            "{:>12}: agreement {:.3} ± {:.3}, entropy cap {:.3} bits, erasures {:.3}",
            r.scheme, r.agreement_rate, r.agreement_stderr, r.hz_bound_bits, r.empirical_erasure_rate
        );
    }
    Ok(())
}
