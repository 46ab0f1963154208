//! Spectral disagreement bounds against exact and Monte-Carlo disagreement.

use depspec::{BooleanFunction, CorrelatedPairSource, CorrelationReport};

fn main() -> depspec::Result<()> {
    let n = 7;
    let e = BooleanFunction::majority(n)?;
    let f = BooleanFunction::threshold(n, 3)?;
    println!("{:>5} {:>8} {:>8} {:>8}", "eps", "lower", "exact", "upper");
    for eps in [0.0, 0.05, 0.1, 0.2, 0.3, 0.5] {
        let src = CorrelatedPairSource::new(n, 0.5, eps)?;
        let r = CorrelationReport::exact(&e, &f, &src)?;
        let b = r.bounds();
        println!("{eps:>5} {:>8.4} {:>8.4} {:>8.4}", b.lower_clamped(), r.disagreement.unwrap(), b.upper_clamped());
    }

    let src = CorrelatedPairSource::new(n, 0.5, 0.1)?;
    let mc = CorrelationReport::monte_carlo(&e, &f, &src, 200_000, 7)?;
    println!(
        "monte carlo at eps=0.1: {:.4} ± {:.4}, sandwich holds: {:?}",
        mc.disagreement.unwrap(),
        mc.stderr.unwrap(),
        mc.sandwich_holds()
    );
    Ok(())
}
