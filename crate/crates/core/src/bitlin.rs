//! Dense linear algebra over GF(2).
//!
//! [`BitVec`] and [`BitMatrix`] store bits word-packed, row-major, with column
//! `c` held in bit `c % 64` of word `c / 64`. Gaussian elimination always pivots
//! on the lowest-index column that still has a nonzero entry, taking the
//! lowest-index row that carries it, so every echelon form is deterministic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitlinError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("rows have differing lengths")]
    RaggedRows,
    #[error("invalid bit character {0:?}; expected '0' or '1'")]
    InvalidBit(char),
    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("column index {index} out of range for {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self { len, words: vec![u64::MAX; words_for(len)] };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from its low `len` bits, bit `i` of `value` becoming entry `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    /// Message-index convention used throughout the crate: entry 0 is the most
    /// significant bit of `value`.
    pub fn from_index_msb(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Inverse of [`BitVec::from_index_msb`].
    pub fn to_index_msb(&self) -> u64 {
        assert!(self.len <= WORD_BITS);
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    /// Low 64 entries as a word (entry `i` in bit `i`).
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn push(&mut self, value: bool) {
        if self.len % WORD_BITS == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Hamming distance.
    pub fn distance(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND (inner product over GF(2)).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the nonzero entries, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    /// Restriction to the given coordinates, in the given order.
    pub fn select(&self, indices: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    pub fn concat(parts: &[BitVec]) -> BitVec {
        let mut out = BitVec::zeros(0);
        for p in parts {
            for b in p.iter() {
                out.push(b);
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = BitlinError;

    /// Parses `'0'`/`'1'` characters; the leftmost character is entry 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BitVec::zeros(0);
        for ch in s.chars() {
            match ch {
                '0' => v.push(false),
                '1' => v.push(true),
                other => return Err(BitlinError::InvalidBit(other)),
            }
        }
        Ok(v)
    }
}

/// Outcome of solving `xᵀA = b` for `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeftSolution {
    Unique(BitVec),
    /// Consistent, but `rank(A)` is below the number of rows; `particular` is
    /// one solution among `2^(rows - rank)`.
    Ambiguous { particular: BitVec, rank: usize },
    Inconsistent,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    /// Nonzero rows of the reduced matrix, in pivot order.
    pub reduced: Vec<BitVec>,
    /// `pivots[i]` is the pivot column of `reduced[i]`; strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// A row-equivalent matrix carrying an identity on its information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicForm {
    /// Same row space as the input; column `info_set[i]` is the unit vector `e_i`.
    pub matrix: BitMatrix,
    pub info_set: Vec<usize>,
    /// Column order that moves the information set to the front: column `j` of
    /// the `[I | P]` layout is column `permutation[j]` of `matrix`.
    pub permutation: Vec<usize>,
}

impl SystematicForm {
    /// The `[I | P]` layout obtained by applying `permutation` to the columns.
    pub fn permuted(&self) -> BitMatrix {
        self.matrix.select_columns(&self.permutation).expect("permutation covers all columns")
    }
}

/// A dense `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "BitMatrix dimensions must be positive");
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec]) -> Result<Self, BitlinError> {
        let first = rows.first().ok_or(BitlinError::EmptyMatrix)?;
        if first.is_empty() {
            return Err(BitlinError::EmptyMatrix);
        }
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(BitlinError::RaggedRows);
        }
        let mut m = Self::zeros(rows.len(), first.len());
        for (i, r) in rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S]) -> Result<Self, BitlinError> {
        let parsed = rows.iter().map(|s| s.as_ref().parse::<BitVec>()).collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(&parsed)
    }

    /// Rows given as 0/1 integers; convenient in tests.
    pub fn from_bits(rows: &[&[u8]]) -> Result<Self, BitlinError> {
        let parsed: Vec<BitVec> = rows.iter().map(|r| BitVec::from_bools(r.iter().map(|&b| b != 0))).collect();
        Self::from_rows(&parsed)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(i).to_vec() }
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Row `i` as a single word; only meaningful when `cols <= 64`.
    #[inline]
    pub fn row_u64(&self, i: usize) -> u64 {
        debug_assert!(self.cols <= WORD_BITS);
        self.data[i * self.stride]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_weight(i)).collect()
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|i| self.row_weight(i)).max().unwrap_or(0)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&w| w == 0)
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_bools((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        (0..self.rows).map(|i| self.row(i).to_string()).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `xᵀ · self`, the encoding map when `self` is a generator matrix.
    pub fn left_mul(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.rows, "message length must equal row count");
        let mut out = BitVec::zeros(self.cols);
        for i in x.iter_ones() {
            for (a, b) in out.words.iter_mut().zip(self.row_words(i)) {
                *a ^= *b;
            }
        }
        out
    }

    /// `self · otherᵀ`; entry `(i, j)` is the inner product of row `i` of `self`
    /// with row `j` of `other`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix, BitlinError> {
        if self.cols != other.cols {
            return Err(BitlinError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let ones: u32 =
                    self.row_words(i).iter().zip(other.row_words(j)).map(|(a, b)| (a & b).count_ones()).sum();
                if ones & 1 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Columns `indices` in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<BitMatrix, BitlinError> {
        if indices.is_empty() {
            return Err(BitlinError::EmptyMatrix);
        }
        if let Some(&bad) = indices.iter().find(|&&c| c >= self.cols) {
            return Err(BitlinError::ColumnOutOfRange { index: bad, cols: self.cols });
        }
        let mut out = BitMatrix::zeros(self.rows, indices.len());
        for r in 0..self.rows {
            let src = self.row_words(r);
            let dst_off = r * out.stride;
            for (j, &c) in indices.iter().enumerate() {
                if (src[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1 {
                    out.data[dst_off + j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
                }
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, indices: &[usize]) -> Result<BitMatrix, BitlinError> {
        let rows: Vec<BitVec> = indices.iter().map(|&i| self.row(i)).collect();
        BitMatrix::from_rows(&rows)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix, BitlinError> {
        if self.cols != other.cols {
            return Err(BitlinError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, data })
    }

    /// `I_copies ⊗ self`: a block-diagonal matrix holding `copies` copies of `self`.
    ///
    /// # Panics
    ///
    /// Panics if `copies == 0`.
    pub fn kron_identity(&self, copies: usize) -> BitMatrix {
        assert!(copies >= 1, "kron_identity needs at least one copy");
        let mut out = BitMatrix::zeros(self.rows * copies, self.cols * copies);
        for b in 0..copies {
            for r in 0..self.rows {
                for c in self.row(r).iter_ones() {
                    out.set(b * self.rows + r, b * self.cols + c, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form of the row space.
    pub fn echelon(&self) -> Echelon {
        let mut rows = self.row_vecs();
        let (pivots, _) = reduce(&mut rows, None, true);
        rows.truncate(pivots.len());
        Echelon { reduced: rows, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row_words(i).to_vec()).collect();
        rank_of_words(&mut rows, self.cols)
    }

    /// Solves `xᵀ · self = b`.
    pub fn solve_left(&self, b: &BitVec) -> Result<LeftSolution, BitlinError> {
        self.solve_left_masked(&BitVec::ones(self.cols), b)
    }

    /// Solves `xᵀ · self = b` on the columns set in `mask` only.
    pub fn solve_left_masked(&self, mask: &BitVec, b: &BitVec) -> Result<LeftSolution, BitlinError> {
        for v in [mask, b] {
            if v.len() != self.cols {
                return Err(BitlinError::DimensionMismatch { expected: self.cols, found: v.len() });
            }
        }
        // each row is [row & mask | e_i], so row operations track the combination
        let (left, right) = (self.stride, words_for(self.rows));
        let mut rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<u64> = self.row_words(i).iter().zip(mask.words()).map(|(a, m)| a & m).collect();
                row.resize(left + right, 0);
                row[left + i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        for c in mask.iter_ones() {
            let rank = pivots.len();
            if rank == self.rows {
                break;
            }
            let (w, bit) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let Some(p) = (rank..self.rows).find(|&r| rows[r][w] & bit != 0) else { continue };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut().filter(|row| row[w] & bit != 0) {
                for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *a ^= *b;
                }
            }
            pivots.push(c);
        }
        let mut residual: Vec<u64> = b.words().iter().zip(mask.words()).map(|(a, m)| a & m).collect();
        let mut x = vec![0u64; right];
        for (row, &c) in rows.iter().zip(&pivots) {
            if (residual[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1 {
                residual.iter_mut().zip(&row[..left]).for_each(|(a, b)| *a ^= b);
                x.iter_mut().zip(&row[left..]).for_each(|(a, b)| *a ^= b);
            }
        }
        if residual.iter().any(|&w| w != 0) {
            return Ok(LeftSolution::Inconsistent);
        }
        let x = BitVec { len: self.rows, words: x };
        let rank = pivots.len();
        if rank == self.rows {
            Ok(LeftSolution::Unique(x))
        } else {
            Ok(LeftSolution::Ambiguous { particular: x, rank })
        }
    }

    pub fn row_space_equal(&self, other: &BitMatrix) -> Result<bool, BitlinError> {
        if self.cols != other.cols {
            return Err(BitlinError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let (ra, rb) = (self.rank(), other.rank());
        Ok(ra == rb && self.stack(other)?.rank() == ra)
    }

    pub fn systematic_form(&self) -> Result<SystematicForm, BitlinError> {
        let ech = self.echelon();
        if ech.rank() < self.rows {
            return Err(BitlinError::RankDeficient { rank: ech.rank(), rows: self.rows });
        }
        let matrix = BitMatrix::from_rows(&ech.reduced)?;
        let mut permutation = ech.pivots.clone();
        permutation.extend((0..self.cols).filter(|c| !ech.pivots.contains(c)));
        Ok(SystematicForm { matrix, info_set: ech.pivots, permutation })
    }

    /// Basis of `{x : self · xᵀ = 0}`, or `None` when only the zero vector qualifies.
    pub fn null_space(&self) -> Option<BitMatrix> {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        if free.is_empty() {
            return None;
        }
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (j, &f) in free.iter().enumerate() {
            basis.set(j, f, true);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.reduced[i].get(f) {
                    basis.set(j, p, true);
                }
            }
        }
        Some(basis)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// In-place elimination on `rows`, mirroring every row operation onto `track`.
/// Nonzero reduced rows end up at the front in pivot order. With `full` set the
/// result is fully reduced (zeros above pivots as well as below).
fn reduce(rows: &mut [BitVec], mut track: Option<&mut Vec<BitVec>>, full: bool) -> (Vec<usize>, usize) {
    let n_rows = rows.len();
    let cols = rows.first().map_or(0, BitVec::len);
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == n_rows {
            break;
        }
        let Some(p) = (next..n_rows).find(|&r| rows[r].get(c)) else { continue };
        rows.swap(next, p);
        if let Some(t) = track.as_deref_mut() {
            t.swap(next, p);
        }
        let (pivot_row, pivot_track) = (rows[next].clone(), track.as_deref().map(|t| t[next].clone()));
        let start = if full { 0 } else { next + 1 };
        for r in start..n_rows {
            if r != next && rows[r].get(c) {
                rows[r].xor_assign(&pivot_row);
                if let (Some(t), Some(pt)) = (track.as_deref_mut(), pivot_track.as_ref()) {
                    t[r].xor_assign(pt);
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    (pivots, next)
}

/// Forward elimination on raw word rows; destroys `rows`.
pub(crate) fn rank_of_words(rows: &mut [Vec<u64>], cols: usize) -> usize {
    let n_rows = rows.len();
    let mut rank = 0;
    for c in 0..cols {
        if rank == n_rows {
            break;
        }
        let (w, bit) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        let Some(p) = (rank..n_rows).find(|&r| rows[r][w] & bit != 0) else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & bit != 0 {
                for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *a ^= *b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Incrementally built echelon basis used by greedy basis selection.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    // (pivot column, reduced vector)
    reduced: Vec<(usize, BitVec)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reduced.is_empty()
    }

    /// Adds `v` if it is independent of the vectors already inserted.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        for (p, r) in &self.reduced {
            if w.get(*p) {
                w.xor_assign(r);
            }
        }
        let pivot = w.iter_ones().next();
        match pivot {
            Some(p) => {
                self.reduced.push((p, w));
                true
            }
            None => false,
        }
    }
}

/// Same as [`IncrementalBasis`] for vectors of length at most 64.
#[derive(Debug, Clone, Copy)]
pub struct WordBasis {
    // slot `b` holds a vector whose highest set bit is `b`, or 0
    slots: [u64; 64],
    len: usize,
}

impl Default for WordBasis {
    fn default() -> Self {
        Self { slots: [0; 64], len: 0 }
    }
}

impl WordBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, mut v: u64) -> bool {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if self.slots[top] == 0 {
                self.slots[top] = v;
                self.len += 1;
                return true;
            }
            v ^= self.slots[top];
        }
        false
    }
}
