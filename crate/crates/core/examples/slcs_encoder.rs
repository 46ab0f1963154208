//! One typicality-coded encoder draw, its failure rate and a structural check.

use depspec::slcs::{build_encoder, check_pairwise_independence, single_letter_gap, SlcsConfig};

fn main() -> depspec::Result<()> {
    let config = SlcsConfig::binary_symmetric(8, 0.5, 0.1, 0.5, 0.2)?.with_seed(11);
    println!("codebook size {}", config.codebook_size());

    let enc = build_encoder(&config)?;
    println!("encoding failure rate {:.4}", enc.failure_rate());
    for x in [0b0000_0000, 0b1010_1010, 0b1111_0000] {
        println!("  {x:08b} -> {:08b}", enc.eval(x));
    }

    let report = check_pairwise_independence(&config.clone().with_rate(0.9), 2000, 3)?;
    println!(
        "pairwise output correlation at rate 0.9: max |r| = {:.4} (stderr {:.4}), within tolerance: {}",
        report.max_abs_correlation, report.stderr, report.within_tolerance
    );

    for m in [4, 8, 12, 16] {
        let gap = single_letter_gap(&config.clone().with_n(m))?;
        println!("m={m:>2}: single-letter gap max {:.4}, mean {:.4}", gap.gap, gap.mean_gap);
    }
    Ok(())
}
