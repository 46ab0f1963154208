//! Dependency spectra of a few standard functions under a biased source.

use depspec::{center, BooleanFunction, ProductSource};

fn main() -> depspec::Result<()> {
    let n = 5;
    let src = ProductSource::new(n, 0.3)?;
    let functions = [
        ("dictator", BooleanFunction::dictator(n, 1)?),
        ("majority", BooleanFunction::majority(n)?),
        ("parity", BooleanFunction::parity(n)?),
        ("and", BooleanFunction::and(n)?),
    ];
    for (name, f) in &functions {
        let g = center(f, &src)?;
        let spectrum = g.spectrum()?;
        let profile: Vec<String> = spectrum.weight_profile().iter().map(|v| format!("{v:.4}")).collect();
        println!("{name:>9}  q={:.4}  var={:.4}  by weight [{}]", g.q(), spectrum.total(), profile.join(", "));
    }

    // the decomposition reassembles the function exactly
    let g = center(&functions[1].1, &src)?;
    let d = g.decompose()?;
    let err = d.reconstruct().iter().zip(g.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("majority reconstruction error {err:.2e}, max cross moment {:.2e}", d.max_cross_moment());
    Ok(())
}
