//! Shared-encoder disagreement against the collapse threshold.

use depspec::experiments::{default_slcs_config, run_collapse, to_csv, CollapseParams, EncoderFamily};

fn main() -> depspec::Result<()> {
    let params = CollapseParams {
        family: EncoderFamily::Slcs(default_slcs_config()),
        p: 0.5,
        ns: vec![4, 6, 8],
        eps: vec![0.0, 0.05, 0.2],
        delta: 0.05,
        draws: 40,
        shared: true,
        seed: 2,
        mc_trials: 1 << 14,
    };
    print!("{}", to_csv(&run_collapse(&params)?)?);
    Ok(())
}
