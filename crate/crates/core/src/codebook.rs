//! Exhaustive enumeration of the row space of a generator, with explicit
//! size budgets.

use serde::{Deserialize, Serialize};

use crate::bitlin::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// Limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest `k` for which all `2^k` messages may be enumerated.
    pub max_message_bits: usize,
    /// Largest `n - k` for which the dual code may be enumerated.
    pub max_redundancy: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_message_bits: 20, max_redundancy: 24 }
    }
}

impl Budget {
    pub fn check_messages(&self, k: usize) -> Result<()> {
        if k > self.max_message_bits || k >= 63 {
            return Err(Error::BudgetExceeded(format!(
                "2^{k} messages exceed the limit of 2^{}",
                self.max_message_bits
            )));
        }
        Ok(())
    }

    pub fn allows_dual(&self, redundancy: usize) -> bool {
        redundancy <= self.max_redundancy && redundancy < 63
    }
}

/// All `2^k` codewords of a generator with at most 64 columns, indexed by the
/// MSB-first message value.
pub fn packed_codewords(g: &BitMatrix) -> Vec<u64> {
    assert!(g.cols() <= 64 && g.rows() < 40);
    let k = g.rows();
    let rows: Vec<u64> = (0..k).map(|i| g.row_u64(i)).collect();
    let mut out = vec![0u64; 1usize << k];
    for v in 1..out.len() {
        // lowest set bit of v is message entry k-1-tz
        let tz = v.trailing_zeros() as usize;
        out[v] = out[v & (v - 1)] ^ rows[k - 1 - tz];
    }
    out
}

/// Visits every codeword once in Gray-code order as `(message value, word)`.
pub fn for_each_codeword(g: &BitMatrix, mut visit: impl FnMut(u64, &BitVec)) {
    let k = g.rows();
    assert!(k < 63);
    let rows = g.row_vecs();
    let mut word = BitVec::zeros(g.cols());
    visit(0, &word);
    for i in 1u64..(1u64 << k) {
        let tz = i.trailing_zeros() as usize;
        word.xor_assign(&rows[k - 1 - tz]);
        visit(i ^ (i >> 1), &word);
    }
}

/// Packed variant of [`for_each_codeword`].
pub fn for_each_packed_codeword(g: &BitMatrix, mut visit: impl FnMut(u64, u64)) {
    let k = g.rows();
    assert!(g.cols() <= 64 && k < 63);
    let rows: Vec<u64> = (0..k).map(|i| g.row_u64(i)).collect();
    let mut word = 0u64;
    visit(0, word);
    for i in 1u64..(1u64 << k) {
        word ^= rows[k - 1 - i.trailing_zeros() as usize];
        visit(i ^ (i >> 1), word);
    }
}
