//! Subset-lattice primitives and product measures on `{0,1}^n`.
//!
//! Words and masks are dense `u32` values. Coordinate `k` (1-based) lives in
//! bit `n - k`, so the usual MSB-first binary rendering of a word lists the
//! coordinates in order: for `n = 5`, the single-coordinate mask of
//! coordinate 1 prints as `10000`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Largest dimension supported anywhere in the crate.
pub const MAX_DIM: usize = 24;

/// Renders the low `n` bits of `bits` MSB first.
pub fn bit_string(bits: u32, n: usize) -> String {
    (0..n).rev().map(|b| if bits >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses an MSB-first `0`/`1` string.
pub fn parse_bit_string(s: &str) -> Result<(u32, usize)> {
    let n = s.len();
    if n == 0 || n > MAX_DIM {
        return Err(Error::Parse(format!("bit string {s:?} must have 1..={MAX_DIM} characters")));
    }
    let mut bits = 0u32;
    for c in s.chars() {
        bits = (bits << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Parse(format!("bit string {s:?} contains {c:?}"))),
            };
    }
    Ok((bits, n))
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidDimension(n))
    } else if n > MAX_DIM {
        Err(Error::DimensionTooLarge { n, max: MAX_DIM, what: "the bit lattice" })
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// An element of the subset lattice `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_dim(n)?;
        if bits & !full_mask(n) != 0 {
            return Err(Error::MaskOutOfRange { bits, n });
        }
        Ok(SubsetMask { bits, n: n as u8 })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    /// The all-ones mask.
    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(SubsetMask { bits: full_mask(n), n: n as u8 })
    }

    /// The single-coordinate mask of coordinate `k` (1-based).
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_dim(n)?;
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("coordinate {k} is outside 1..={n}")));
        }
        Ok(SubsetMask { bits: 1 << (n - k), n: n as u8 })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (bits, n) = parse_bit_string(s)?;
        Self::new(bits, n)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.n as usize
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(self) -> Self {
        SubsetMask { bits: !self.bits & full_mask(self.dim()), n: self.n }
    }

    /// Lattice order: every coordinate of `self` is also in `other`.
    pub fn leq(self, other: Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self.bits & other.bits == self.bits)
    }

    /// Whether coordinate `k` (1-based) is in the mask.
    pub fn contains(self, k: usize) -> bool {
        k >= 1 && k <= self.dim() && self.bits >> (self.dim() - k) & 1 == 1
    }

    /// Every `j` with `j ≤ self`, `j ≠ self`, in increasing bit order.
    pub fn strict_submasks(self) -> Vec<SubsetMask> {
        let mut out = Vec::with_capacity((1usize << self.weight()) - 1);
        let mut j = 0u32;
        loop {
            if j == self.bits {
                break;
            }
            out.push(SubsetMask { bits: j, n: self.n });
            // next submask in increasing order
            j = (j | !self.bits).wrapping_add(1) & self.bits;
        }
        out
    }

    /// Packs the coordinates of `word` selected by the mask into the low bits,
    /// keeping their relative order.
    #[inline]
    pub fn compress(self, word: u32) -> u32 {
        compress(word, self.bits)
    }

    /// Inverse of [`compress`](Self::compress).
    #[inline]
    pub fn expand(self, packed: u32) -> u32 {
        expand(packed, self.bits)
    }

    pub fn to_bit_string(self) -> String {
        bit_string(self.bits, self.dim())
    }
}

impl std::fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Software parallel-bit-extract.
#[inline]
pub(crate) fn compress(word: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if word & low != 0 {
            out |= 1 << k;
        }
        k += 1;
        mask ^= low;
    }
    out
}

/// Software parallel-bit-deposit.
#[inline]
pub(crate) fn expand(packed: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if packed >> k & 1 != 0 {
            out |= low;
        }
        k += 1;
        mask ^= low;
    }
    out
}

/// A coordinate permutation. `apply` moves coordinate `k` to coordinate `perm[k]`
/// (both 1-based in the public constructor, stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// `images[k-1]` is the 1-based image of coordinate `k`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &k in images {
            if k == 0 || k > n || seen[k - 1] {
                return Err(Error::InvalidParameter(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[k - 1] = true;
        }
        Ok(Permutation { images: images.iter().map(|k| k - 1).collect() })
    }

    /// Transposition of coordinates `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidParameter(format!("cannot swap {a} and {b} in dimension {n}")));
        }
        images.swap(a - 1, b - 1);
        Self::from_images(&images)
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn apply(&self, word: u32) -> u32 {
        let n = self.dim();
        let mut out = 0;
        for (k, &img) in self.images.iter().enumerate() {
            if word >> (n - 1 - k) & 1 == 1 {
                out |= 1 << (n - 1 - img);
            }
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.dim()];
        for (k, &img) in self.images.iter().enumerate() {
            images[img] = k;
        }
        Permutation { images }
    }
}

/// Per-coordinate weights `p^w (1-p)^(len-w)` indexed by `w`.
pub(crate) fn weight_powers(p: f64, len: usize) -> Vec<f64> {
    (0..=len).map(|w| p.powi(w as i32) * (1.0 - p).powi((len - w) as i32)).collect()
}

/// I.i.d. Bernoulli(p) coordinates on `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSource {
    n: usize,
    p: f64,
}

impl ProductSource {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_dim(n)?;
        check_probability("p", p)?;
        Ok(ProductSource { n, p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(n, 0.5)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Probability that a coordinate equals 1.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn prob(&self, word: u32) -> f64 {
        let w = word.count_ones() as i32;
        self.p.powi(w) * (1.0 - self.p).powi(self.n as i32 - w)
    }

    /// The full mass function, indexed by word.
    pub fn probs(&self) -> Vec<f64> {
        let pw = weight_powers(self.p, self.n);
        (0..1u32 << self.n).map(|x| pw[x.count_ones() as usize]).collect()
    }

    /// Marginal probability of the restricted assignment `assignment` on the
    /// coordinates of `mask`. The assignment is a full-width word whose bits
    /// outside the mask must be zero.
    pub fn marginal_prob(&self, mask: SubsetMask, assignment: u32) -> Result<f64> {
        if mask.dim() != self.n {
            return Err(Error::DimensionMismatch { left: mask.dim(), right: self.n });
        }
        if assignment & !mask.bits() != 0 {
            return Err(Error::AssignmentMismatch { mask: mask.bits(), assignment });
        }
        let ones = assignment.count_ones() as i32;
        Ok(self.p.powi(ones) * (1.0 - self.p).powi(mask.weight() as i32 - ones))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        sample_bits(rng, self.n, self.p)
    }
}

pub(crate) fn sample_bits<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> u32 {
    let mut w = 0;
    for _ in 0..n {
        w = (w << 1) | rng.gen_bool(p) as u32;
    }
    w
}

/// A pair `(X^n, Y^n)` where `X` is i.i.d. Bernoulli(p) and `Y = X ⊕ N` with
/// `N` i.i.d. Bernoulli(eps) independent of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedPairSource {
    n: usize,
    p: f64,
    eps: f64,
}

impl CorrelatedPairSource {
    pub fn new(n: usize, p: f64, eps: f64) -> Result<Self> {
        check_dim(n)?;
        check_probability("p", p)?;
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::EpsOutOfRange(eps));
        }
        Ok(CorrelatedPairSource { n, p, eps })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Law of `X^n`.
    pub fn x_source(&self) -> ProductSource {
        ProductSource { n: self.n, p: self.p }
    }

    /// Law of `Y^n`; its per-coordinate bias is `p(1-eps) + (1-p)eps`.
    pub fn y_source(&self) -> ProductSource {
        ProductSource { n: self.n, p: self.p * (1.0 - self.eps) + (1.0 - self.p) * self.eps }
    }

    /// Law of the flip pattern `X ⊕ Y`.
    pub fn flip_source(&self) -> ProductSource {
        ProductSource { n: self.n, p: self.eps }
    }

    pub fn pair_prob(&self, x: u32, y: u32) -> f64 {
        self.x_source().prob(x) * self.flip_source().prob(x ^ y)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        let x = sample_bits(rng, self.n, self.p);
        let flips = sample_bits(rng, self.n, self.eps);
        (x, x ^ flips)
    }
}
