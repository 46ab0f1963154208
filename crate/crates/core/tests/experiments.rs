//! Statistical properties of the experiment drivers.

use depspec::experiments::{default_slcs_config, run_concentration, trends, ConcentrationParams, EncoderFamily};

#[test]
fn concentration_does_not_depend_on_the_coordinate() {
    let params = |k| ConcentrationParams {
        family: EncoderFamily::Slcs(default_slcs_config()),
        p: 0.5,
        ns: vec![6],
        ms: vec![1, 2],
        gammas: vec![0.02, 0.05],
        k,
        draws: 200,
        seed: 77,
    };
    let first = run_concentration(&params(1)).unwrap();
    let other = run_concentration(&params(4)).unwrap();
    for (a, b) in first.iter().zip(&other) {
        let pooled = (a.empirical_prob + b.empirical_prob) / 2.0;
        let se = (2.0 * pooled * (1.0 - pooled) / a.draws as f64).sqrt();
        let diff = (a.empirical_prob - b.empirical_prob).abs();
        assert!(diff <= trends::Z_TOLERANCE * se, "m={} gamma={}: {} vs {}", a.m, a.gamma, a.empirical_prob, b.empirical_prob);
    }
}
