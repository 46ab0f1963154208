//! Additive decomposition and dependency spectrum of Boolean functions.
//!
//! A Boolean function `e` is first centered under a product source: with
//! `q = P(e(X) = 1)` the real form takes `1 - q` where `e = 1` and `-q`
//! elsewhere. The decomposition writes it as a sum of components indexed by
//! masks, each depending only on the coordinates in its mask:
//!
//! ```text
//! e_i = E[e~ | X_i] - Σ_{j < i} e_j
//! ```
//!
//! The dependency spectrum is the vector of component variances `P_i`. It can
//! be computed without materializing components from the recursion
//! `P_i = E[(E[e~ | X_i])²] - Σ_{j < i} P_j` with `P_0 = 0`.
//!
//! Conditional expectation tables are kept in packed form: the table for mask
//! `i` has `2^|i|` entries indexed by [`SubsetMask::compress`] of the input.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitlattice::{
    bit_string, check_dim, compress, full_mask, weight_powers, Permutation, ProductSource, SubsetMask,
};
use crate::error::{Error, Result};

/// Largest dimension for which every component is stored.
pub const MAX_DECOMPOSE_DIM: usize = 10;
/// Largest dimension for the spectrum recursion.
pub const MAX_SPECTRUM_DIM: usize = 16;

/// Variances in `(-NEGATIVE_TOLERANCE, 0)` are rounding noise and clamp to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// A Boolean function `{0,1}^n → {0,1}` stored as a truth table indexed by
/// the input word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        check_dim(n)?;
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch { left: table.len(), right: 1 << n });
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        check_dim(n)?;
        Ok(BooleanFunction { n, table: (0..1u32 << n).map(f).collect() })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// `x ↦ x_k` for the 1-based coordinate `k`.
    pub fn dictator(n: usize, k: usize) -> Result<Self> {
        let bit = SubsetMask::basis(n, k)?.bits();
        Self::from_fn(n, |x| x & bit != 0)
    }

    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x.count_ones() % 2 == 1)
    }

    pub fn and(n: usize) -> Result<Self> {
        let all = full_mask(n);
        Self::from_fn(n, |x| x == all)
    }

    /// Strict majority: more than half of the coordinates are 1.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| 2 * x.count_ones() as usize > n)
    }

    /// `x ↦ [w_H(x) ≥ k]`.
    pub fn threshold(n: usize, k: usize) -> Result<Self> {
        Self::from_fn(n, |x| x.count_ones() as usize >= k)
    }

    /// Each table entry is an independent fair bit.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_dim(n)?;
        Ok(BooleanFunction { n, table: (0..1u32 << n).map(|_| rng.gen()).collect() })
    }

    /// Each table entry is 1 with probability `bias`.
    pub fn random_biased<R: Rng + ?Sized>(n: usize, bias: f64, rng: &mut R) -> Result<Self> {
        crate::error::check_probability("bias", bias)?;
        check_dim(n)?;
        Ok(BooleanFunction { n, table: (0..1u32 << n).map(|_| rng.gen_bool(bias)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> bool {
        self.table[x as usize]
    }

    /// `x ↦ self(π(x))`.
    pub fn permuted(&self, pi: &Permutation) -> Result<Self> {
        if pi.dim() != self.n {
            return Err(Error::DimensionMismatch { left: pi.dim(), right: self.n });
        }
        Self::from_fn(self.n, |x| self.eval(pi.apply(x)))
    }

    /// Probability that the output is 1 under `src`.
    pub fn output_prob(&self, src: &ProductSource) -> Result<f64> {
        if src.dim() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: src.dim() });
        }
        let pw = weight_powers(src.p(), self.n);
        Ok(self
            .table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(x, _)| pw[x.count_ones() as usize])
            .sum())
    }

    /// Plain-text truth table: a header line `n=<k>` followed by one `0`/`1`
    /// line per input in increasing word order.
    pub fn to_truth_table_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for &v in &self.table {
            s.push(if v { '1' } else { '0' });
            s.push('\n');
        }
        s
    }

    pub fn parse_truth_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim_end);
        let header = lines.next().ok_or_else(|| Error::Parse("empty truth table".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected header `n=<k>`, found {header:?}")))?;
        check_dim(n)?;
        let mut table = Vec::with_capacity(1 << n);
        for (lineno, line) in lines.enumerate() {
            match line {
                "0" => table.push(false),
                "1" => table.push(true),
                "" if table.len() == 1 << n => continue,
                other => {
                    return Err(Error::Parse(format!("line {}: expected 0 or 1, found {other:?}", lineno + 2)))
                }
            }
        }
        if table.len() != 1 << n {
            return Err(Error::Parse(format!("expected {} rows for n={n}, found {}", 1 << n, table.len())));
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn read_truth_table(path: &Path) -> Result<Self> {
        Self::parse_truth_table(&std::fs::read_to_string(path)?)
    }
}

/// The centered real form of a Boolean function under a product source.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCenteredFunction {
    source: ProductSource,
    q: f64,
    values: Vec<f64>,
}

/// Centers `e` under `src`.
pub fn center(e: &BooleanFunction, src: &ProductSource) -> Result<RealCenteredFunction> {
    let q = e.output_prob(src)?;
    let values = e.table.iter().map(|&v| if v { 1.0 - q } else { -q }).collect();
    Ok(RealCenteredFunction { source: *src, q, values })
}

impl RealCenteredFunction {
    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &ProductSource {
        &self.source
    }

    /// `P(e(X) = 1)`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `q (1 - q)`.
    pub fn variance(&self) -> f64 {
        self.q * (1.0 - self.q)
    }

    /// `x_i ↦ E[e~ | X_i = x_i]`, packed over the coordinates of `mask`.
    pub fn conditional_expectation(&self, mask: SubsetMask) -> Result<Vec<f64>> {
        conditional_expectation_of(&self.values, mask, &self.source)
    }

    /// Components of the additive decomposition, computed mask by mask in
    /// increasing order.
    pub fn decompose(&self) -> Result<Decomposition> {
        let n = self.dim();
        if n > MAX_DECOMPOSE_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_DECOMPOSE_DIM, what: "decompose" });
        }
        let mut cond: Vec<Vec<f64>> = vec![Vec::new(); 1 << n];
        walk_conditionals(&self.values, n, self.source.p(), &mut |mask, table| {
            cond[mask as usize] = table.to_vec();
        });

        let mut components: Vec<Vec<f64>> = Vec::with_capacity(1 << n);
        for i in 0..1u32 << n {
            let mut comp = std::mem::take(&mut cond[i as usize]);
            // every strict submask j of i is numerically smaller, so already done
            let mut j = 0u32;
            while j != i {
                let packed_j = compress(j, i);
                let lower = &components[j as usize];
                for (a, c) in comp.iter_mut().enumerate() {
                    *c -= lower[compress(a as u32, packed_j) as usize];
                }
                j = (j | !i).wrapping_add(1) & i;
            }
            components.push(comp);
        }
        Ok(Decomposition { source: self.source, components })
    }

    /// Dependency spectrum from the variance recursion, without materializing
    /// components.
    pub fn spectrum(&self) -> Result<DependencySpectrum> {
        let n = self.dim();
        if n > MAX_SPECTRUM_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_SPECTRUM_DIM, what: "spectrum" });
        }
        let pows: Vec<Vec<f64>> = (0..=n).map(|len| weight_powers(self.source.p(), len)).collect();
        let mut second_moments = vec![0.0; 1 << n];
        walk_conditionals(&self.values, n, self.source.p(), &mut |mask, table| {
            let pw = &pows[mask.count_ones() as usize];
            second_moments[mask as usize] =
                table.iter().enumerate().map(|(a, v)| pw[a.count_ones() as usize] * v * v).sum();
        });

        let mut variances = vec![0.0; 1 << n];
        for i in 1..1u32 << n {
            let mut acc = second_moments[i as usize];
            let mut j = 0u32;
            while j != i {
                acc -= variances[j as usize];
                j = (j | !i).wrapping_add(1) & i;
            }
            variances[i as usize] = clamp_variance(i, acc)?;
        }
        Ok(DependencySpectrum::from_variances(n, variances))
    }
}

fn clamp_variance(mask: u32, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value > -NEGATIVE_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NegativeVariance { mask, value })
    }
}

/// Conditional expectation of an arbitrary real function of `x` given the
/// coordinates in `mask`, by exact summation over the remaining coordinates.
pub fn conditional_expectation_of(values: &[f64], mask: SubsetMask, src: &ProductSource) -> Result<Vec<f64>> {
    let n = src.dim();
    if mask.dim() != n {
        return Err(Error::DimensionMismatch { left: mask.dim(), right: n });
    }
    if values.len() != 1 << n {
        return Err(Error::DimensionMismatch { left: values.len(), right: 1 << n });
    }
    let rest = mask.complement().bits();
    let pw = weight_powers(src.p(), rest.count_ones() as usize);
    let mut out = vec![0.0; 1 << mask.weight()];
    for (x, v) in values.iter().enumerate() {
        let x = x as u32;
        out[mask.compress(x) as usize] += pw[(x & rest).count_ones() as usize] * v;
    }
    Ok(out)
}

/// Visits the packed conditional expectation table of every mask.
///
/// Masks form a tree where the parent of `i` is `i` plus its lowest missing
/// bit; a child therefore drops one of the trailing set bits of its parent, and
/// in packed coordinates that bit keeps its own position. Total work is `3^n`.
fn walk_conditionals(values: &[f64], n: usize, p: f64, visit: &mut dyn FnMut(u32, &[f64])) {
    fn recurse(table: &[f64], mask: u32, p: f64, visit: &mut dyn FnMut(u32, &[f64])) {
        visit(mask, table);
        let trailing = (!mask).trailing_zeros();
        for b in 0..trailing {
            let low = (1usize << b) - 1;
            let child: Vec<f64> = (0..table.len() / 2)
                .map(|a| {
                    let i0 = ((a >> b) << (b + 1)) | (a & low);
                    (1.0 - p) * table[i0] + p * table[i0 | 1 << b]
                })
                .collect();
            recurse(&child, mask ^ (1 << b), p, visit);
        }
    }
    recurse(values, full_mask(n), p, visit);
}

/// The components `e~_i` of an additive decomposition, each packed over the
/// coordinates of its mask.
#[derive(Debug, Clone)]
pub struct Decomposition {
    source: ProductSource,
    components: Vec<Vec<f64>>,
}

impl Decomposition {
    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &ProductSource {
        &self.source
    }

    /// Packed table of the component at `mask`.
    pub fn component(&self, mask: SubsetMask) -> &[f64] {
        &self.components[mask.bits() as usize]
    }

    /// `e~_i(x)`.
    pub fn eval(&self, mask: SubsetMask, x: u32) -> f64 {
        self.components[mask.bits() as usize][mask.compress(x) as usize]
    }

    /// The component at `mask` as a function on all of `{0,1}^n`.
    pub fn component_full(&self, mask: SubsetMask) -> Vec<f64> {
        let comp = self.component(mask);
        (0..1u32 << self.dim()).map(|x| comp[mask.compress(x) as usize]).collect()
    }

    /// `Σ_i e~_i`, pointwise.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; 1 << n];
        for (i, comp) in self.components.iter().enumerate() {
            let i = i as u32;
            for (x, o) in out.iter_mut().enumerate() {
                *o += comp[compress(x as u32, i) as usize];
            }
        }
        out
    }

    /// Largest `|E[e~_i e~_k]|` over pairs of distinct masks.
    pub fn max_cross_moment(&self) -> f64 {
        let n = self.dim();
        let sqrt_probs: Vec<f64> = self.source.probs().iter().map(|p| p.sqrt()).collect();
        let weighted: Vec<Vec<f64>> = (0..1u32 << n)
            .map(|i| {
                let comp = &self.components[i as usize];
                sqrt_probs.iter().enumerate().map(|(x, w)| w * comp[compress(x as u32, i) as usize]).collect()
            })
            .collect();
        let mut worst = 0.0f64;
        for (i, a) in weighted.iter().enumerate() {
            for b in &weighted[i + 1..] {
                let dot: f64 = a.iter().zip(b).map(|(u, v)| u * v).sum();
                worst = worst.max(dot.abs());
            }
        }
        worst
    }

    /// Spectrum as the variance of each stored component.
    pub fn spectrum(&self) -> Result<DependencySpectrum> {
        let n = self.dim();
        let pows: Vec<Vec<f64>> = (0..=n).map(|len| weight_powers(self.source.p(), len)).collect();
        let mut variances = vec![0.0; 1 << n];
        for (i, comp) in self.components.iter().enumerate().skip(1) {
            let pw = &pows[i.count_ones() as usize];
            let (mut mean, mut second) = (0.0, 0.0);
            for (a, v) in comp.iter().enumerate() {
                let w = pw[a.count_ones() as usize];
                mean += w * v;
                second += w * v * v;
            }
            variances[i] = clamp_variance(i as u32, second - mean * mean)?;
        }
        Ok(DependencySpectrum::from_variances(n, variances))
    }
}

/// Alias for [`Decomposition::spectrum`].
pub fn spectrum_from_components(d: &Decomposition) -> Result<DependencySpectrum> {
    d.spectrum()
}

const SPECTRUM_HEADER: [&str; 3] = ["mask", "weight", "variance"];

#[derive(Serialize, Deserialize)]
struct SpectrumRecord {
    mask: String,
    weight: u32,
    variance: f64,
}

/// Component variances indexed by mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencySpectrum {
    n: usize,
    variances: Vec<f64>,
    total: f64,
}

impl DependencySpectrum {
    pub fn from_variances(n: usize, variances: Vec<f64>) -> Self {
        let total = variances.iter().sum();
        DependencySpectrum { n, variances, total }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn variance(&self, mask: SubsetMask) -> f64 {
        self.variances[mask.bits() as usize]
    }

    /// `Σ_i P_i`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Variance on the single-coordinate mask of coordinate `k`.
    pub fn single_letter(&self, k: usize) -> Result<f64> {
        Ok(self.variance(SubsetMask::basis(self.n, k)?))
    }

    /// `Σ P_i` over masks of weight at most `max_weight`, skipping `exclude`.
    pub fn level_mass(&self, max_weight: usize, exclude: SubsetMask) -> f64 {
        self.variances
            .iter()
            .enumerate()
            .filter(|&(i, _)| i as u32 != exclude.bits() && i.count_ones() as usize <= max_weight)
            .fold(0.0, |acc, (_, v)| acc + v)
    }

    /// Total variance at each weight `0..=n`.
    pub fn weight_profile(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for (i, v) in self.variances.iter().enumerate() {
            out[i.count_ones() as usize] += v;
        }
        out
    }

    /// The spectrum of `e∘π` given that `self` is the spectrum of `e`.
    pub fn permuted(&self, pi: &Permutation) -> Self {
        let variances = (0..1u32 << self.n).map(|i| self.variances[pi.apply(i) as usize]).collect();
        Self::from_variances(self.n, variances)
    }

    fn row_order(&self) -> Vec<u32> {
        let mut masks: Vec<u32> = (0..1u32 << self.n).collect();
        masks.sort_by_key(|&i| (i.count_ones(), i));
        masks
    }

    /// CSV with columns `mask,weight,variance`, rows ordered by weight then
    /// mask value.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for i in self.row_order() {
            let row = SpectrumRecord { mask: bit_string(i, self.n), weight: i.count_ones(), variance: self.variances[i as usize] };
            w.serialize(row).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        if reader.headers()?.iter().collect::<Vec<_>>() != SPECTRUM_HEADER {
            return Err(Error::Parse(format!("spectrum header must be {}", SPECTRUM_HEADER.join(","))));
        }
        let mut n = None;
        let mut rows = Vec::new();
        for record in reader.deserialize() {
            let record: SpectrumRecord = record?;
            let mask = SubsetMask::parse(&record.mask)?;
            match n {
                None => n = Some(mask.dim()),
                Some(d) if d != mask.dim() => return Err(Error::Parse(format!("mixed mask widths at {}", record.mask))),
                _ => {}
            }
            if mask.weight() != record.weight as usize {
                return Err(Error::Parse(format!("weight {} does not match mask {}", record.weight, record.mask)));
            }
            rows.push((mask.bits(), record.variance));
        }
        let n = n.ok_or_else(|| Error::Parse("spectrum has no rows".into()))?;
        if n > MAX_SPECTRUM_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_SPECTRUM_DIM, what: "spectrum" });
        }
        let mut variances = vec![0.0; 1 << n];
        let mut seen = vec![false; 1 << n];
        for (i, v) in rows {
            if std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::Parse(format!("duplicate mask {}", bit_string(i, n))));
            }
            variances[i as usize] = v;
        }
        Ok(Self::from_variances(n, variances))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn half(n: usize) -> ProductSource {
        ProductSource::uniform(n).unwrap()
    }

    fn m(s: &str) -> SubsetMask {
        SubsetMask::parse(s).unwrap()
    }

    #[test]
    fn centering() {
        let c = center(&BooleanFunction::constant(3, false).unwrap(), &half(3)).unwrap();
        assert_eq!(c.q(), 0.0);
        assert!(c.values().iter().all(|&v| v == 0.0));

        let d = center(&BooleanFunction::dictator(2, 1).unwrap(), &half(2)).unwrap();
        assert_eq!(d.q(), 0.5);
        assert!(d.values().iter().all(|&v| v.abs() == 0.5));

        let a = center(&BooleanFunction::and(2).unwrap(), &half(2)).unwrap();
        assert_eq!(a.q(), 0.25);
        assert_eq!(a.values(), &[-0.25, -0.25, -0.25, 0.75]);
    }

    #[test]
    fn conditional_expectations() {
        let par = center(&BooleanFunction::parity(2).unwrap(), &half(2)).unwrap();
        assert_eq!(par.conditional_expectation(m("10")).unwrap(), vec![0.0, 0.0]);
        let src = ProductSource::new(3, 0.3).unwrap();
        let f = center(&BooleanFunction::majority(3).unwrap(), &src).unwrap();
        assert_eq!(f.conditional_expectation(m("111")).unwrap(), f.values());
        let mean = f.conditional_expectation(m("000")).unwrap();
        assert_eq!(mean.len(), 1);
        assert!(mean[0].abs() < 1e-15);
    }

    #[test]
    fn walk_matches_direct_conditionals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let src = ProductSource::new(5, 0.3).unwrap();
        let f = center(&BooleanFunction::random(5, &mut rng).unwrap(), &src).unwrap();
        let mut visited = 0;
        walk_conditionals(f.values(), 5, 0.3, &mut |mask, table| {
            visited += 1;
            let direct = f.conditional_expectation(SubsetMask::new(mask, 5).unwrap()).unwrap();
            for (a, b) in table.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-14);
            }
        });
        assert_eq!(visited, 32);
    }

    #[test]
    fn decompose_parity_dictator_and() {
        let par = center(&BooleanFunction::parity(2).unwrap(), &half(2)).unwrap().decompose().unwrap();
        assert!(par.component_full(m("01")).iter().all(|v| v.abs() < 1e-15));
        assert!(par.component_full(m("10")).iter().all(|v| v.abs() < 1e-15));
        assert_eq!(par.component_full(m("11")), vec![-0.5, 0.5, 0.5, -0.5]);

        let dict = center(&BooleanFunction::dictator(2, 1).unwrap(), &half(2)).unwrap();
        let dd = dict.decompose().unwrap();
        assert_eq!(dd.component_full(m("10")), dict.values());
        for mask in ["00", "01", "11"] {
            assert!(dd.component_full(m(mask)).iter().all(|v| v.abs() < 1e-15));
        }

        // inputs in word order 00, 01, 10, 11
        let and = center(&BooleanFunction::and(2).unwrap(), &half(2)).unwrap().decompose().unwrap();
        assert_eq!(and.component_full(m("10")), vec![-0.25, -0.25, 0.25, 0.25]);
        assert_eq!(and.component_full(m("01")), vec![-0.25, 0.25, -0.25, 0.25]);
        assert_eq!(and.component_full(m("11")), vec![0.25, -0.25, -0.25, 0.25]);
    }

    #[test]
    fn spectra_of_named_functions() {
        let par = center(&BooleanFunction::parity(2).unwrap(), &half(2)).unwrap().spectrum().unwrap();
        assert_eq!(par.variances(), &[0.0, 0.0, 0.0, 0.25]);
        assert_eq!(par.total(), 0.25);

        let dict = center(&BooleanFunction::dictator(3, 1).unwrap(), &half(3)).unwrap().spectrum().unwrap();
        assert_eq!(dict.variance(m("100")), 0.25);
        assert_eq!(dict.total(), 0.25);

        let and = center(&BooleanFunction::and(2).unwrap(), &half(2)).unwrap().spectrum().unwrap();
        for mask in ["01", "10", "11"] {
            assert!((and.variance(m(mask)) - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!((and.total() - 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn constant_function_has_zero_spectrum() {
        let c = center(&BooleanFunction::constant(4, true).unwrap(), &half(4)).unwrap();
        assert!(c.spectrum().unwrap().variances().iter().all(|&v| v == 0.0));
        assert!(c.decompose().unwrap().spectrum().unwrap().variances().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn level_masses() {
        let dict = center(&BooleanFunction::dictator(3, 1).unwrap(), &half(3)).unwrap().spectrum().unwrap();
        assert_eq!(dict.level_mass(1, SubsetMask::basis(3, 1).unwrap()), 0.0);
        let par = center(&BooleanFunction::parity(4).unwrap(), &half(4)).unwrap().spectrum().unwrap();
        assert!(par.level_mass(3, SubsetMask::basis(4, 1).unwrap()).abs() < 1e-15);
        let and = center(&BooleanFunction::and(2).unwrap(), &half(2)).unwrap().spectrum().unwrap();
        assert!((and.level_mass(1, m("10")) - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn caps_are_enforced() {
        let big = center(&BooleanFunction::parity(11).unwrap(), &half(11)).unwrap();
        assert!(matches!(big.decompose(), Err(Error::DimensionTooLarge { .. })));
        let huge = center(&BooleanFunction::parity(17).unwrap(), &half(17)).unwrap();
        assert!(matches!(huge.spectrum(), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn negative_variances_clamp_or_fail() {
        assert_eq!(clamp_variance(1, -1e-12).unwrap(), 0.0);
        assert!(matches!(clamp_variance(1, -1e-6), Err(Error::NegativeVariance { .. })));
    }

    #[test]
    fn truth_table_text_round_trip_and_errors() {
        let f = BooleanFunction::majority(3).unwrap();
        let text = f.to_truth_table_text();
        assert!(text.starts_with("n=3\n"));
        assert_eq!(BooleanFunction::parse_truth_table(&text).unwrap(), f);
        assert!(BooleanFunction::parse_truth_table("n=2\n0\n1\n1\n").is_err());
        assert!(BooleanFunction::parse_truth_table("n=2\n0\n1\n2\n1\n").is_err());
        assert!(BooleanFunction::parse_truth_table("2\n0\n1\n1\n1\n").is_err());
        assert!(BooleanFunction::parse_truth_table("").is_err());
    }

    #[test]
    fn spectrum_csv_layout() {
        let par = center(&BooleanFunction::parity(3).unwrap(), &half(3)).unwrap().spectrum().unwrap();
        let csv = par.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "mask,weight,variance");
        assert_eq!(lines[1], "000,0,0.0");
        assert_eq!(lines[2], "001,1,0.0");
        assert_eq!(lines[4], "100,1,0.0");
        assert_eq!(lines[5], "011,2,0.0");
        assert_eq!(lines[8], "111,3,0.25");
        assert_eq!(DependencySpectrum::from_csv(&csv).unwrap(), par);
        assert!(DependencySpectrum::from_csv("mask,weight,variance\n01,1,0\n01,1,0\n").is_err());
        assert!(DependencySpectrum::from_csv("mask,weight,variance\n01,2,0\n").is_err());
        assert!(DependencySpectrum::from_csv("mask,variance\n01,0\n").is_err());
    }
}
