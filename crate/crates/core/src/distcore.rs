//! Bit-string distributions and the measurement theory the rest of the crate
//! checks itself against: total variation, relative entropy, Shannon and
//! collision (Rényi-2) entropies, the optimal indicator distinguisher, and
//! Hoeffding sample counts.
//!
//! All entropic quantities are in nats. Bit-string convention: qubit `q` of an
//! `n`-bit string is bit `n - 1 - q` of its integer index, so `"100"` is
//! index 4 and has qubit 0 set.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::Witness;

/// Largest width a dense table may have (2^20 doubles = 8 MB).
pub const MAX_DENSE_WIDTH: usize = 20;

/// Absolute tolerance on the normalization of a [`DensePmf`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

pub(crate) fn check_width(width: usize, limit: usize, what: &'static str) -> Result<()> {
    if width == 0 {
        return Err(Error::param(format!("{what}: width must be at least 1")));
    }
    if width > limit {
        return Err(Error::Capacity {
            what,
            requested: width,
            limit,
        });
    }
    Ok(())
}

pub(crate) fn same_width(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// An `n`-bit outcome, `n <= 20`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    bits: u32,
    width: u8,
}

impl BitString {
    pub fn new(bits: u32, width: usize) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "bit string")?;
        if (bits as u64) >> width != 0 {
            return Err(Error::param(format!(
                "value {bits} does not fit in {width} bits"
            )));
        }
        Ok(BitString {
            bits,
            width: width as u8,
        })
    }

    /// Parses a string of `'0'`/`'1'` characters, qubit 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u32;
        for c in s.chars() {
            bits = match c {
                '0' => bits << 1,
                '1' => (bits << 1) | 1,
                _ => return Err(Error::param(format!("not a bit string: {s:?}"))),
            };
        }
        BitString::new(bits, s.len())
    }

    pub(crate) fn from_index_unchecked(index: usize, width: usize) -> Self {
        BitString {
            bits: index as u32,
            width: width as u8,
        }
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Value of qubit `q` (qubit 0 is the leftmost character).
    pub fn bit(&self, q: usize) -> bool {
        debug_assert!(q < self.width());
        (self.bits >> (self.width() - 1 - q)) & 1 == 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width() {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Explicit probability table over `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPmf")]
pub struct DensePmf {
    width: usize,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPmf {
    width: usize,
    probs: Vec<f64>,
}

impl TryFrom<RawPmf> for DensePmf {
    type Error = Error;

    fn try_from(raw: RawPmf) -> Result<Self> {
        DensePmf::new(raw.width, raw.probs)
    }
}

impl DensePmf {
    /// Validates and wraps a probability table.
    pub fn new(width: usize, probs: Vec<f64>) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "dense pmf")?;
        if probs.len() != 1 << width {
            return Err(Error::InvalidPmf(format!(
                "expected {} entries for width {width}, got {}",
                1usize << width,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidPmf(format!("entry {p} is not a probability")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidPmf(format!("entries sum to {total}")));
        }
        Ok(DensePmf { width, probs })
    }

    /// Normalizes non-negative weights into a pmf.
    pub fn from_weights(width: usize, mut weights: Vec<f64>) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "dense pmf")?;
        if weights.len() != 1 << width {
            return Err(Error::InvalidPmf(format!(
                "expected {} weights, got {}",
                1usize << width,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPmf("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidPmf("weights sum to zero".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(DensePmf {
            width,
            probs: weights,
        })
    }

    pub fn uniform(width: usize) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "dense pmf")?;
        let len = 1usize << width;
        Ok(DensePmf {
            width,
            probs: vec![1.0 / len as f64; len],
        })
    }

    pub fn point_mass(x: BitString) -> Self {
        let mut probs = vec![0.0; 1 << x.width()];
        probs[x.index()] = 1.0;
        DensePmf {
            width: x.width(),
            probs,
        }
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mixture(&self, other: &DensePmf, lambda: f64) -> Result<Self> {
        same_width(self.width, other.width)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param(format!("mixture weight {lambda} outside [0,1]")));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(DensePmf {
            width: self.width,
            probs,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: BitString) -> f64 {
        self.probs[x.index()]
    }

    pub fn outcomes(&self) -> impl Iterator<Item = BitString> + '_ {
        let w = self.width;
        (0..self.probs.len()).map(move |i| BitString::from_index_unchecked(i, w))
    }

    /// `E_self(f)` by exhaustive summation.
    pub fn expectation(&self, f: &Witness) -> Result<f64> {
        same_width(self.width, f.width())?;
        Ok(self
            .outcomes()
            .zip(&self.probs)
            .map(|(x, p)| if *p == 0.0 { 0.0 } else { p * f.eval_unchecked(x) })
            .sum())
    }

    /// Collision probability `sum_x p(x)^2`.
    pub fn collision(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    /// Empirical pmf of a sample list.
    pub fn empirical(width: usize, samples: &[BitString]) -> Result<Self> {
        check_width(width, MAX_DENSE_WIDTH, "dense pmf")?;
        if samples.is_empty() {
            return Err(Error::param("empirical pmf of an empty sample list"));
        }
        let mut counts = vec![0.0; 1 << width];
        for s in samples {
            same_width(width, s.width())?;
            counts[s.index()] += 1.0;
        }
        DensePmf::from_weights(width, counts)
    }

    /// Alias-free inverse-CDF sampler over this table.
    pub fn sampler(&self) -> PmfSampler {
        PmfSampler {
            width: self.width,
            index: WeightedIndex::new(&self.probs).expect("validated pmf has positive mass"),
        }
    }
}

/// Draws outcomes from a [`DensePmf`].
#[derive(Clone, Debug)]
pub struct PmfSampler {
    width: usize,
    index: WeightedIndex<f64>,
}

impl PmfSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        BitString::from_index_unchecked(self.index.sample(rng), self.width)
    }
}

/// `||a - b||_TV = (1/2) sum_x |a(x) - b(x)|`.
pub fn tv_distance(a: &DensePmf, b: &DensePmf) -> Result<f64> {
    same_width(a.width, b.width)?;
    Ok(0.5
        * a.probs
            .iter()
            .zip(&b.probs)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>())
}

/// `D(a||b)` in nats; `+inf` when `a` puts mass outside the support of `b`.
pub fn relative_entropy(a: &DensePmf, b: &DensePmf) -> Result<f64> {
    same_width(a.width, b.width)?;
    let mut total = 0.0;
    for (p, q) in a.probs.iter().zip(&b.probs) {
        if *p == 0.0 {
            continue;
        }
        if *q == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += p * (p.ln() - q.ln());
    }
    // Rounding can produce tiny negatives for a == b.
    Ok(total.max(0.0))
}

pub fn shannon_entropy(a: &DensePmf) -> f64 {
    -a.probs
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

/// Collision entropy `-ln sum_x a(x)^2`.
pub fn renyi2_entropy(a: &DensePmf) -> f64 {
    -a.collision().ln()
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

/// Divergence summary of `nu` against a guess `mu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub tv: f64,
    pub kl_nats: f64,
    pub shannon_nats: f64,
    pub renyi2_nats: f64,
}

impl DivergenceReport {
    pub fn compute(nu: &DensePmf, mu: &DensePmf) -> Result<Self> {
        Ok(DivergenceReport {
            tv: tv_distance(nu, mu)?,
            kl_nats: relative_entropy(nu, mu)?,
            shannon_nats: shannon_entropy(nu),
            renyi2_nats: renyi2_entropy(nu),
        })
    }
}

/// Indicator of `S = {x : a(x) >= b(x)}` together with its gap
/// `E_a(chi_S) - E_b(chi_S)`, which equals `tv_distance(a, b)`.
///
/// The dual formulation is often quoted with a factor 2 in front of the
/// supremum; with the half-L1 normalization used here the supremum over
/// `[0,1]`-valued functions is the distance itself.
pub fn optimal_distinguisher(a: &DensePmf, b: &DensePmf) -> Result<(Witness, f64)> {
    same_width(a.width, b.width)?;
    let members: Vec<bool> = a.probs.iter().zip(&b.probs).map(|(p, q)| p >= q).collect();
    let gap = a
        .probs
        .iter()
        .zip(&b.probs)
        .zip(&members)
        .filter(|(_, m)| **m)
        .map(|((p, q), _)| p - q)
        .sum();
    Ok((Witness::indicator(a.width, members)?, gap))
}

/// `ceil(2 eps^-2 ln(2/delta))` samples per side put every empirical mean of a
/// `[0,1]`-valued function within `eps/2` of its expectation with probability
/// at least `1 - delta`.
pub fn hoeffding_samples(eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps = {eps} outside (0,1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta = {delta} outside (0,1)")));
    }
    Ok((2.0 / (eps * eps) * (2.0 / delta).ln()).ceil() as u64)
}
