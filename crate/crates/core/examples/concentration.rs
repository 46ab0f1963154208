//! Low-weight mass of a coordinate function across typicality-coded encoder draws.

use depspec::experiments::{default_slcs_config, run_concentration, trends, ConcentrationParams, EncoderFamily};

fn main() -> depspec::Result<()> {
    let params = ConcentrationParams {
        family: EncoderFamily::Slcs(default_slcs_config()),
        p: 0.5,
        ns: vec![4, 6, 8],
        ms: vec![2],
        gammas: vec![0.05],
        k: 1,
        draws: 60,
        seed: 1,
    };
    let rows = run_concentration(&params)?;
    for r in &rows {
        println!("n={:>2} m={} gamma={}: P(mass >= gamma) = {:.3}, Markov {:.3}", r.n, r.m, r.gamma, r.empirical_prob, r.markov_bound);
    }
    println!("trend violations: {:?}", trends::check_concentration(&rows));
    Ok(())
}
