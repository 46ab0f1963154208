//! Single-letter random codes built by typicality encoding.
//!
//! A scheme is fixed by a test channel `P(U|X)`, a source bias `P(X = 1)`, a
//! rate `R` and a typicality slack `eps`. A draw from the scheme picks a
//! codebook of `⌈2^{nR}⌉` words, either uniformly from the `eps`-typical set
//! of `U` or i.i.d. from `P_U`, and then maps each input `x` to a uniformly
//! chosen codeword whose joint type with `x` is within `eps` of `P(U, X)` in
//! every entry. Inputs with no such codeword fall back to a uniform codeword
//! and are flagged.
//!
//! Randomness for input `x` is derived from the encoder seed and `x`, so an
//! encoder evaluated lazily agrees with its tabulated truth table.

mod checks;
mod marginal;

pub use checks::{
    check_pairwise_independence, check_permutation_invariance, output_bit_correlations, PairwiseReport,
    PermutationReport,
};
pub use marginal::{
    conditional_typical_count, single_letter_gap, single_letter_marginal, single_letter_marginal_enumerated,
    SingleLetterGap, MAX_MARGINAL_DIM,
};

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bitlattice::{bit_string, check_dim, full_mask, parse_bit_string, sample_bits, SubsetMask};
use crate::decomposition::BooleanFunction;
use crate::error::{check_probability, Error, Result};
use crate::seed;

/// Largest blocklength for tabulated encoders.
pub const MAX_ENCODER_DIM: usize = 12;
/// Largest codebook the generator will allocate.
pub const MAX_CODEBOOK_SIZE: usize = 1 << 24;

const TAG_CODEBOOK: u64 = 0xC0DE;
const TAG_SELECT: u64 = 0x5E1E;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodebookMode {
    /// Codewords drawn with replacement, uniformly from the typical set.
    UniformTypical,
    /// Codewords drawn i.i.d. from the product law `P_U^n`.
    IidProduct,
}

/// Parameters of a typicality-encoding scheme, plus the seed of one draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlcsConfig {
    pub n: usize,
    /// Bits per symbol; rate 0 gives a single codeword.
    pub rate: f64,
    /// `p_u_given_x[x][u] = P(U = u | X = x)`.
    pub p_u_given_x: [[f64; 2]; 2],
    /// `P(X = 1)`.
    pub p_x: f64,
    pub eps_typ: f64,
    pub codebook_mode: CodebookMode,
    pub seed: u64,
}

impl SlcsConfig {
    pub fn new(n: usize, rate: f64, p_u_given_x: [[f64; 2]; 2], p_x: f64, eps_typ: f64) -> Result<Self> {
        let cfg = SlcsConfig { n, rate, p_u_given_x, p_x, eps_typ, codebook_mode: CodebookMode::UniformTypical, seed: 0 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Test channel `U = X ⊕ Bernoulli(crossover)`.
    pub fn binary_symmetric(n: usize, rate: f64, crossover: f64, p_x: f64, eps_typ: f64) -> Result<Self> {
        Self::new(n, rate, [[1.0 - crossover, crossover], [crossover, 1.0 - crossover]], p_x, eps_typ)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: CodebookMode) -> Self {
        self.codebook_mode = mode;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::InvalidParameter(format!("rate must be non-negative, got {}", self.rate)));
        }
        for row in &self.p_u_given_x {
            check_probability("P(U|X)", row[0])?;
            check_probability("P(U|X)", row[1])?;
            if (row[0] + row[1] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("row {row:?} of P(U|X) does not sum to 1")));
            }
        }
        check_probability("p_x", self.p_x)?;
        if !(self.eps_typ.is_finite() && self.eps_typ > 0.0) {
            return Err(Error::InvalidParameter(format!("eps_typ must be positive, got {}", self.eps_typ)));
        }
        let size = self.n as f64 * self.rate;
        if size > (MAX_CODEBOOK_SIZE as f64).log2() {
            return Err(Error::InvalidParameter(format!("codebook of 2^{size} words is too large")));
        }
        Ok(())
    }

    /// `P_U(1) = Σ_x P_X(x) P(U = 1 | X = x)`.
    pub fn p_u1(&self) -> f64 {
        (1.0 - self.p_x) * self.p_u_given_x[0][1] + self.p_x * self.p_u_given_x[1][1]
    }

    /// `P(U = u, X = x)`.
    pub fn joint(&self, u: usize, x: usize) -> f64 {
        let px = if x == 1 { self.p_x } else { 1.0 - self.p_x };
        px * self.p_u_given_x[x][u]
    }

    /// `⌈2^{nR}⌉`.
    pub fn codebook_size(&self) -> usize {
        // n·R is formed in floating point; 1e-9 keeps e.g. 10·0.3 from rounding up
        ((self.n as f64 * self.rate).exp2() - 1e-9).ceil().max(1.0) as usize
    }

    /// Whether `|w/n - P_U(1)| < eps`.
    pub fn is_typical(&self, u: u32) -> bool {
        (u.count_ones() as f64 / self.n as f64 - self.p_u1()).abs() < self.eps_typ
    }

    /// Whether `u` and `x` (words of length `self.n`) are jointly typical.
    pub fn is_jointly_typical(&self, u: u32, x: u32) -> bool {
        JointType::of(u, x, self.n).is_typical(self)
    }
}

/// Counts `l[u][x]` of coordinate pairs taking each value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointType {
    pub counts: [[usize; 2]; 2],
}

impl JointType {
    pub fn of(u: u32, x: u32, m: usize) -> Self {
        let full = full_mask(m);
        let l11 = (u & x).count_ones() as usize;
        let l10 = (u & !x & full).count_ones() as usize;
        let l01 = (!u & x & full).count_ones() as usize;
        JointType { counts: [[m - l11 - l10 - l01, l01], [l10, l11]] }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|l[s][t]/m - P(U = s, X = t)| < eps` for all four entries.
    pub fn is_typical(&self, cfg: &SlcsConfig) -> bool {
        let m = self.len() as f64;
        (0..2).all(|s| (0..2).all(|t| (self.counts[s][t] as f64 / m - cfg.joint(s, t)).abs() < cfg.eps_typ))
    }
}

/// The `eps`-typical set of `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypicalSet {
    n: usize,
    members: Vec<u32>,
}

impl TypicalSet {
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: u32) -> bool {
        self.members.binary_search(&u).is_ok()
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

/// Scans all `2^n` words for typicality.
pub fn build_typical_set(config: &SlcsConfig) -> Result<TypicalSet> {
    config.validate()?;
    let members = (0..1u32 << config.n).filter(|&u| config.is_typical(u)).collect();
    Ok(TypicalSet { n: config.n, members })
}

/// A scheme with its typical set cached, ready to produce encoder draws.
#[derive(Debug, Clone)]
pub struct SlcsScheme {
    config: SlcsConfig,
    typical: TypicalSet,
}

impl SlcsScheme {
    pub fn new(config: SlcsConfig) -> Result<Self> {
        let typical = build_typical_set(&config)?;
        Ok(SlcsScheme { config, typical })
    }

    pub fn config(&self) -> &SlcsConfig {
        &self.config
    }

    pub fn typical_set(&self) -> &TypicalSet {
        &self.typical
    }

    /// The codebook of the draw with the given seed.
    pub fn codebook(&self, seed: u64) -> Result<Vec<u32>> {
        let size = self.config.codebook_size();
        let mut rng = seed::rng(seed, &[TAG_CODEBOOK]);
        match self.config.codebook_mode {
            CodebookMode::UniformTypical => {
                let members = self.typical.members();
                if members.is_empty() {
                    return Err(Error::EmptyTypicalSet);
                }
                Ok((0..size).map(|_| members[rng.gen_range(0..members.len())]).collect())
            }
            CodebookMode::IidProduct => {
                let p = self.config.p_u1();
                Ok((0..size).map(|_| sample_bits(&mut rng, self.config.n, p)).collect())
            }
        }
    }

    pub fn draw(&self, seed: u64) -> Result<SlcsEncoder> {
        let codebook = self.codebook(seed)?;
        Ok(SlcsEncoder { config: self.config.clone().with_seed(seed), codebook })
    }
}

/// Codebook for `config.seed`.
pub fn generate_codebook(config: &SlcsConfig) -> Result<Vec<u32>> {
    SlcsScheme::new(config.clone())?.codebook(config.seed)
}

/// Output of one encoding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Encoded {
    pub word: u32,
    /// No codeword was jointly typical with the input.
    pub failed: bool,
}

/// Maps `x` to a uniformly chosen jointly typical codeword (counted with
/// multiplicity), or to a uniform codeword with `failed` set.
pub fn typicality_encode(codebook: &[u32], x: u32, config: &SlcsConfig, input_seed: u64) -> Result<Encoded> {
    if codebook.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    let mut rng = seed::Rng::seed_from_u64(input_seed);
    let candidates: Vec<u32> = codebook.iter().copied().filter(|&u| config.is_jointly_typical(u, x)).collect();
    Ok(if candidates.is_empty() {
        Encoded { word: codebook[rng.gen_range(0..codebook.len())], failed: true }
    } else {
        Encoded { word: candidates[rng.gen_range(0..candidates.len())], failed: false }
    })
}

/// One realized encoder of a scheme, evaluated on demand.
#[derive(Debug, Clone)]
pub struct SlcsEncoder {
    config: SlcsConfig,
    codebook: Vec<u32>,
}

impl SlcsEncoder {
    pub fn config(&self) -> &SlcsConfig {
        &self.config
    }

    pub fn codebook(&self) -> &[u32] {
        &self.codebook
    }

    pub fn encode(&self, x: u32) -> Encoded {
        let input_seed = seed::derive(self.config.seed, &[TAG_SELECT, x as u64]);
        // the codebook is never empty for a drawn encoder
        typicality_encode(&self.codebook, x, &self.config, input_seed).expect("non-empty codebook")
    }

    pub fn tabulate(&self) -> Result<VectorEncoder> {
        let n = self.config.n;
        if n > MAX_ENCODER_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_ENCODER_DIM, what: "encoder tables" });
        }
        let (table, failures) = (0..1u32 << n).map(|x| self.encode(x)).map(|e| (e.word, e.failed)).unzip();
        Ok(VectorEncoder { n, table, failures })
    }
}

/// Tabulates the encoder drawn with `config.seed` over all inputs.
pub fn build_encoder(config: &SlcsConfig) -> Result<VectorEncoder> {
    if config.n > MAX_ENCODER_DIM {
        return Err(Error::DimensionTooLarge { n: config.n, max: MAX_ENCODER_DIM, what: "encoder tables" });
    }
    SlcsScheme::new(config.clone())?.draw(config.seed)?.tabulate()
}

/// A block code `{0,1}^n → {0,1}^n` as a truth table of output words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorEncoder {
    n: usize,
    table: Vec<u32>,
    failures: Vec<bool>,
}

impl VectorEncoder {
    pub fn new(n: usize, table: Vec<u32>, failures: Vec<bool>) -> Result<Self> {
        check_dim(n)?;
        if table.len() != 1 << n || failures.len() != 1 << n {
            return Err(Error::DimensionMismatch { left: table.len(), right: 1 << n });
        }
        if let Some(&w) = table.iter().find(|&&w| w & !full_mask(n) != 0) {
            return Err(Error::MaskOutOfRange { bits: w, n });
        }
        Ok(VectorEncoder { n, table, failures })
    }

    /// Uncoded transmission.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, (0..1u32 << n).collect(), vec![false; 1 << n])
    }

    pub fn constant(n: usize, word: u32) -> Result<Self> {
        Self::new(n, vec![word; 1 << n], vec![false; 1 << n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn failures(&self) -> &[bool] {
        &self.failures
    }

    pub fn failure_rate(&self) -> f64 {
        self.failures.iter().filter(|&&f| f).count() as f64 / self.failures.len() as f64
    }

    /// The Boolean function giving output coordinate `k` (1-based).
    pub fn coordinate_function(&self, k: usize) -> Result<BooleanFunction> {
        let bit = SubsetMask::basis(self.n, k)?.bits();
        BooleanFunction::new(self.n, self.table.iter().map(|&w| w & bit != 0).collect())
    }

    /// Text dump: a JSON header line, then `x_bits u_bits failure_flag` per input.
    pub fn to_dump(&self, config: Option<&SlcsConfig>) -> Result<String> {
        #[derive(Serialize)]
        struct Header<'a> {
            n: usize,
            seed: Option<u64>,
            config: Option<&'a SlcsConfig>,
        }
        let header = Header { n: self.n, seed: config.map(|c| c.seed), config };
        let mut s = serde_json::to_string(&header)?;
        s.push('\n');
        for (x, (&u, &f)) in self.table.iter().zip(&self.failures).enumerate() {
            let _ = writeln!(s, "{} {} {}", bit_string(x as u32, self.n), bit_string(u, self.n), f as u8);
        }
        Ok(s)
    }

    pub fn parse_dump(text: &str) -> Result<(Self, Option<SlcsConfig>)> {
        #[derive(Deserialize)]
        struct Header {
            n: usize,
            config: Option<SlcsConfig>,
        }
        let mut lines = text.lines();
        let header: Header =
            serde_json::from_str(lines.next().ok_or_else(|| Error::Parse("empty encoder dump".into()))?)?;
        let n = header.n;
        check_dim(n)?;
        let mut table = vec![0; 1 << n];
        let mut failures = vec![false; 1 << n];
        let mut seen = 0usize;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("expected `x u flag`, found {line:?}")));
            }
            let (x, nx) = parse_bit_string(fields[0])?;
            let (u, nu) = parse_bit_string(fields[1])?;
            if nx != n || nu != n || x as usize != seen {
                return Err(Error::Parse(format!("out-of-order or malformed row {line:?}")));
            }
            table[seen] = u;
            failures[seen] = match fields[2] {
                "0" => false,
                "1" => true,
                other => return Err(Error::Parse(format!("bad failure flag {other:?}"))),
            };
            seen += 1;
        }
        if seen != 1 << n {
            return Err(Error::Parse(format!("expected {} rows, found {seen}", 1 << n)));
        }
        Ok((VectorEncoder { n, table, failures }, header.config))
    }
}
