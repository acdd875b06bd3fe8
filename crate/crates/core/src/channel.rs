//! Memoryless binary channels: erasure, symmetric, and exact-weight error.
//!
//! Channels hold no state; every call draws from the caller's stream.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitlin::BitVec;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("error weight {weight} exceeds block length {len}")]
    WeightTooLarge { weight: usize, len: usize },
    #[error("cannot transmit an empty word")]
    EmptyWord,
}

/// Channel model; `p` is the erasure or crossover probability, `w` the exact
/// number of flipped positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelModel {
    Bec { p: f64 },
    Bsc { p: f64 },
    FixedWeight { w: usize },
}

impl ChannelModel {
    pub fn bec(p: f64) -> Result<Self, ChannelError> {
        check_probability(p)?;
        Ok(Self::Bec { p })
    }

    pub fn bsc(p: f64) -> Result<Self, ChannelError> {
        check_probability(p)?;
        Ok(Self::Bsc { p })
    }

    pub fn fixed_weight(w: usize) -> Self {
        Self::FixedWeight { w }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        match *self {
            Self::Bec { p } | Self::Bsc { p } => check_probability(p),
            Self::FixedWeight { .. } => Ok(()),
        }
    }

    pub fn is_erasure(&self) -> bool {
        matches!(self, Self::Bec { .. })
    }

    pub fn transmit<R: Rng + ?Sized>(&self, word: &BitVec, rng: &mut R) -> Result<ReceivedWord, ChannelError> {
        self.validate()?;
        let n = word.len();
        if n == 0 {
            return Err(ChannelError::EmptyWord);
        }
        match *self {
            Self::Bec { p } => {
                let mut erased = BitVec::zeros(n);
                for i in 0..n {
                    if rng.gen_bool(p) {
                        erased.set(i, true);
                    }
                }
                let mut bits = word.clone();
                for i in erased.iter_ones() {
                    bits.set(i, false);
                }
                Ok(ReceivedWord { bits, erased })
            }
            Self::Bsc { p } => {
                let mut bits = word.clone();
                for i in 0..n {
                    if rng.gen_bool(p) {
                        bits.flip(i);
                    }
                }
                Ok(ReceivedWord { bits, erased: BitVec::zeros(n) })
            }
            Self::FixedWeight { w } => {
                if w > n {
                    return Err(ChannelError::WeightTooLarge { weight: w, len: n });
                }
                let mut bits = word.clone();
                for i in rng::subset(rng, n, w) {
                    bits.flip(i);
                }
                Ok(ReceivedWord { bits, erased: BitVec::zeros(n) })
            }
        }
    }
}

fn check_probability(p: f64) -> Result<(), ChannelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ChannelError::InvalidProbability(p))
    }
}

/// One received symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Zero,
    One,
    Erased,
}

/// Channel output. Erased positions read as zero in `bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedWord {
    bits: BitVec,
    erased: BitVec,
}

impl ReceivedWord {
    /// A received word with nothing erased.
    pub fn clean(bits: BitVec) -> Self {
        let erased = BitVec::zeros(bits.len());
        Self { bits, erased }
    }

    /// Erases `positions` of `bits`.
    pub fn with_erasures(bits: &BitVec, positions: &[usize]) -> Self {
        let mut out = Self::clean(bits.clone());
        for &i in positions {
            out.erased.set(i, true);
            out.bits.set(i, false);
        }
        out
    }

    /// Parses `'0'`, `'1'` and `'?'` (erasure).
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = BitVec::zeros(0);
        let mut erased = BitVec::zeros(0);
        for ch in s.chars() {
            let (b, e) = match ch {
                '0' => (false, false),
                '1' => (true, false),
                '?' => (false, true),
                _ => return None,
            };
            bits.push(b);
            erased.push(e);
        }
        Some(Self { bits, erased })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        match (self.erased.get(i), self.bits.get(i)) {
            (true, _) => Symbol::Erased,
            (false, true) => Symbol::One,
            (false, false) => Symbol::Zero,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len()).map(|i| self.symbol(i))
    }

    /// Hard bits with erasures read as zero.
    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Indicator of erased positions.
    pub fn erasure_mask(&self) -> &BitVec {
        &self.erased
    }

    /// The erased index set `I`.
    pub fn erased_set(&self) -> Vec<usize> {
        self.erased.iter_ones().collect()
    }

    /// The unerased index set, ascending.
    pub fn unerased_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.erased.get(i)).collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.weight()
    }

    /// Whether `word` agrees with every unerased symbol.
    pub fn is_consistent_with(&self, word: &BitVec) -> bool {
        assert_eq!(word.len(), self.len());
        self.bits
            .words()
            .iter()
            .zip(word.words())
            .zip(self.erased.words())
            .all(|((r, w), e)| (r ^ w) & !e == 0)
    }
}

impl std::fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in self.symbols() {
            f.write_str(match s {
                Symbol::Zero => "0",
                Symbol::One => "1",
                Symbol::Erased => "?",
            })?;
        }
        Ok(())
    }
}

/// Empirical mean and variance of the BEC(p) erasure count on `n` symbols over
/// `trials` seeded draws (trial `i` uses substream `i`).
pub fn erasure_count_distribution_check(p: f64, n: usize, trials: u64, seed: u64) -> Result<(f64, f64), ChannelError> {
    let channel = ChannelModel::bec(p)?;
    let zero = BitVec::zeros(n);
    let counts = (0..trials)
        .map(|i| {
            let mut rng = rng::substream(seed, i);
            channel.transmit(&zero, &mut rng).map(|r| r.erasure_count() as f64)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(crate::stats::mean_variance(&counts))
}
