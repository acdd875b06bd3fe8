//! Code families: Hamming (sparse and systematic bases), block-diagonal
//! concatenation, regular LDPC base codes, the fixed-row-weight and Bernoulli
//! LDGM ensembles, and the nonlinear positional code.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitlin::{BitMatrix, BitVec};
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Anything that maps `k`-bit messages to `n`-bit codewords.
///
/// Messages are addressed either as bit vectors or as MSB-first integers
/// (entry 0 of the message is the most significant bit).
pub trait Encoder: Sync {
    fn message_len(&self) -> usize;
    fn block_len(&self) -> usize;
    fn encode(&self, message: &BitVec) -> BitVec;

    /// The generator matrix when the map is linear.
    fn generator(&self) -> Option<&BitMatrix> {
        None
    }

    fn encode_index(&self, value: u64) -> BitVec {
        self.encode(&BitVec::from_index_msb(value, self.message_len()))
    }
}

impl Encoder for BitMatrix {
    fn message_len(&self) -> usize {
        self.rows()
    }

    fn block_len(&self) -> usize {
        self.cols()
    }

    fn encode(&self, message: &BitVec) -> BitVec {
        self.left_mul(message)
    }

    fn generator(&self) -> Option<&BitMatrix> {
        Some(self)
    }
}

/// A binary linear `[n, k]` code with a full-rank generator and, optionally,
/// a parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    parity_check: Option<BitMatrix>,
}

impl LinearCode {
    /// Validates `rank(G) = k`, and for a parity check `H`: `(n-k) × n` shape,
    /// full rank, and `G·Hᵀ = 0`.
    pub fn new(generator: BitMatrix, parity_check: Option<BitMatrix>) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        let rank = generator.rank();
        if rank != k {
            return Err(Error::InvalidCode(format!("generator has rank {rank} but {k} rows")));
        }
        if let Some(h) = &parity_check {
            if h.cols() != n || h.rows() != n - k {
                return Err(Error::InvalidCode(format!(
                    "parity check is {}x{}, expected {}x{n}",
                    h.rows(),
                    h.cols(),
                    n - k
                )));
            }
            if h.rank() != n - k {
                return Err(Error::InvalidCode("parity check is rank deficient".into()));
            }
            if !generator.mul_transpose(h)?.is_zero() {
                return Err(Error::InvalidCode("generator is not orthogonal to parity check".into()));
            }
        }
        Ok(Self { generator, parity_check })
    }

    /// Code with a parity check derived from the generator's null space.
    pub fn with_derived_parity_check(generator: BitMatrix) -> Result<Self> {
        let h = generator.null_space();
        Self::new(generator, h)
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator_matrix(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> Option<&BitMatrix> {
        self.parity_check.as_ref()
    }

    /// A basis of the dual code: the parity check if present, otherwise the
    /// generator's null space. `None` when the dual is `{0}`.
    pub fn dual_basis(&self) -> Option<BitMatrix> {
        match &self.parity_check {
            Some(h) => Some(h.clone()),
            None => self.generator.null_space(),
        }
    }

    /// Same code, different generator (must span the same row space).
    pub fn with_generator(&self, generator: BitMatrix) -> Result<Self> {
        if !generator.row_space_equal(&self.generator)? {
            return Err(Error::InvalidCode("replacement generator spans a different code".into()));
        }
        Self::new(generator, self.parity_check.clone())
    }
}

impl Encoder for LinearCode {
    fn message_len(&self) -> usize {
        self.k()
    }

    fn block_len(&self) -> usize {
        self.n()
    }

    fn encode(&self, message: &BitVec) -> BitVec {
        self.generator.left_mul(message)
    }

    fn generator(&self) -> Option<&BitMatrix> {
        Some(&self.generator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HammingForm {
    /// Weight-3 rows `(i, 2^j, i + 2^j)`.
    #[serde(alias = "sparse")]
    SparseTriples,
    Systematic,
}

/// The `[2^m - 1, 2^m - 1 - m, 3]` Hamming code.
///
/// The parity check has column `c` (1-indexed) equal to the binary expansion of
/// `c`, least significant bit in row 0.
pub fn hamming(m: usize, form: HammingForm) -> Result<LinearCode> {
    if m < 2 {
        return Err(invalid(format!("Hamming code needs m >= 2, got {m}")));
    }
    if m > 16 {
        return Err(invalid(format!("Hamming code with m = {m} is too large")));
    }
    let n = (1usize << m) - 1;
    let k = n - m;
    let mut g = BitMatrix::zeros(k, n);
    let mut row = 0;
    for j in 1..m {
        let p = 1usize << j;
        for i in 1..p {
            // 1-indexed columns i, 2^j, i + 2^j
            for col in [i, p, i + p] {
                g.set(row, col - 1, true);
            }
            row += 1;
        }
    }
    debug_assert_eq!(row, k);
    let mut h = BitMatrix::zeros(m, n);
    for c in 1..=n {
        for b in 0..m {
            if (c >> b) & 1 == 1 {
                h.set(b, c - 1, true);
            }
        }
    }
    let g = match form {
        HammingForm::SparseTriples => g,
        HammingForm::Systematic => g.systematic_form()?.matrix,
    };
    LinearCode::new(g, Some(h))
}

/// The `[n, 1, n]` repetition code.
pub fn repetition(n: usize) -> Result<LinearCode> {
    if n == 0 {
        return Err(invalid("repetition code needs n >= 1"));
    }
    LinearCode::with_derived_parity_check(BitMatrix::from_rows(&[BitVec::ones(n)])?)
}

/// The `[n, n-1, 2]` single-parity-check code.
pub fn single_parity_check(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(invalid("single-parity-check code needs n >= 2"));
    }
    let mut g = BitMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        g.set(i, i, true);
        g.set(i, n - 1, true);
    }
    LinearCode::new(g, Some(BitMatrix::from_rows(&[BitVec::ones(n)])?))
}

/// The whole space `F_2^n` with generator `I_n`.
pub fn full_space(n: usize) -> Result<LinearCode> {
    if n == 0 {
        return Err(invalid("full space needs n >= 1"));
    }
    LinearCode::new(BitMatrix::identity(n), None)
}

/// `copies` codewords of `base` side by side: generator `I_copies ⊗ G`, and a
/// block-diagonal parity check when `base` has one.
pub fn concatenated(base: &LinearCode, copies: usize) -> Result<LinearCode> {
    if copies == 0 {
        return Err(invalid("concatenation needs at least one copy"));
    }
    let g = base.generator_matrix().kron_identity(copies);
    let h = base.parity_check().map(|h| h.kron_identity(copies));
    LinearCode::new(g, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleMode {
    /// Every row uniform over weight-`t` vectors.
    FixedWeight,
    /// Entries i.i.d. with `P(1) = t/n`.
    Bernoulli,
}

/// Parameters of the LDGM ensemble `k × n`, row weight `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub mode: EnsembleMode,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn fixed(n: usize, k: usize, t: usize, seed: u64) -> Self {
        Self { n, k, t, mode: EnsembleMode::FixedWeight, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n == 0 {
            return Err(invalid("ensemble needs n >= 1 and k >= 1"));
        }
        if self.t == 0 || self.t > self.n {
            return Err(invalid(format!("row weight t = {} must lie in 1..={}", self.t, self.n)));
        }
        Ok(())
    }

    /// One matrix from the ensemble using the caller's stream.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BitMatrix> {
        self.validate()?;
        let mut g = BitMatrix::zeros(self.k, self.n);
        match self.mode {
            EnsembleMode::FixedWeight => {
                for r in 0..self.k {
                    for c in rng::subset(rng, self.n, self.t) {
                        g.set(r, c, true);
                    }
                }
            }
            EnsembleMode::Bernoulli => {
                let q = self.t as f64 / self.n as f64;
                for r in 0..self.k {
                    for c in 0..self.n {
                        if rng.gen_bool(q) {
                            g.set(r, c, true);
                        }
                    }
                }
            }
        }
        Ok(g)
    }
}

/// A generator drawn from the LDGM ensemble, kept even when rank deficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdgmSample {
    pub spec: EnsembleSpec,
    pub generator: BitMatrix,
    pub rank: usize,
}

impl LdgmSample {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.spec.k
    }

    pub fn into_code(self) -> Result<LinearCode> {
        LinearCode::with_derived_parity_check(self.generator)
    }
}

impl Encoder for LdgmSample {
    fn message_len(&self) -> usize {
        self.generator.rows()
    }

    fn block_len(&self) -> usize {
        self.generator.cols()
    }

    fn encode(&self, message: &BitVec) -> BitVec {
        self.generator.left_mul(message)
    }

    fn generator(&self) -> Option<&BitMatrix> {
        Some(&self.generator)
    }
}

/// Draws from the ensemble with stream 0 of `spec.seed`.
pub fn sample_ldgm(spec: &EnsembleSpec) -> Result<LdgmSample> {
    let mut rng = rng::substream(spec.seed, 0);
    let generator = spec.draw(&mut rng)?;
    let rank = generator.rank();
    Ok(LdgmSample { spec: *spec, generator, rank })
}

/// Resampling limit for [`sample_regular_ldpc`].
pub const LDPC_MAX_ATTEMPTS: usize = 100;

/// A random LDPC code of length `m` with `round((1 - rate)·m)` parity checks of
/// weight at most `check_degree`.
///
/// Ones are dealt from a shuffled list of column sockets in which every column
/// appears either `⌊E/m⌋` or `⌈E/m⌉` times (`E` = checks × degree), so column
/// degrees are balanced and every column is covered. When that would make all
/// column degrees equal and even (which forces the checks to sum to zero) one
/// socket is dropped. Rank-deficient draws are redrawn up to
/// [`LDPC_MAX_ATTEMPTS`] times. The generator is the systematic form of the
/// parity check's null space.
pub fn sample_regular_ldpc(m: usize, rate: f64, check_degree: usize, seed: u64) -> Result<LinearCode> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(invalid(format!("rate must lie in (0, 1), got {rate}")));
    }
    if check_degree < 2 {
        return Err(invalid("check degree must be at least 2"));
    }
    let checks = ((1.0 - rate) * m as f64).round() as usize;
    if checks == 0 || checks >= m {
        return Err(invalid(format!("length {m} at rate {rate} gives {checks} parity checks")));
    }
    if check_degree * checks < m {
        return Err(invalid(format!(
            "{checks} checks of degree {check_degree} cannot cover {m} columns"
        )));
    }
    let check_degree = check_degree.min(m);
    let mut sockets_total = checks * check_degree;
    if sockets_total % m == 0 && (sockets_total / m) % 2 == 0 {
        sockets_total -= 1;
    }

    let mut rng = rng::substream(seed, 0);
    for _ in 0..LDPC_MAX_ATTEMPTS {
        let mut columns: Vec<usize> = (0..m).collect();
        shuffle(&mut columns, &mut rng);
        let (base, extra) = (sockets_total / m, sockets_total % m);
        let mut sockets: Vec<usize> = Vec::with_capacity(sockets_total);
        for (rank, &c) in columns.iter().enumerate() {
            let deg = base + usize::from(rank < extra);
            sockets.extend(std::iter::repeat_n(c, deg));
        }
        shuffle(&mut sockets, &mut rng);

        let mut h = BitMatrix::zeros(checks, m);
        for (s, &c) in sockets.iter().enumerate() {
            h.set(s / check_degree, c, true);
        }
        if h.rank() < checks {
            continue;
        }
        let kernel = h.null_space().ok_or_else(|| invalid("parity check has trivial null space"))?;
        let g = kernel.systematic_form()?.matrix;
        return LinearCode::new(g, Some(h));
    }
    Err(Error::SamplingFailed { attempts: LDPC_MAX_ATTEMPTS })
}

fn shuffle<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng::index(rng, i + 1);
        items.swap(i, j);
    }
}

/// Largest positional-code dimension accepted.
pub const POSITIONAL_MAX_K: usize = 20;

/// Nonlinear encoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "encoder", rename_all = "snake_case")]
pub enum NonlinearEncoder {
    /// Message `x` maps to the length-`2^k` indicator of position `x` (MSB-first
    /// integer value, blocks 0-indexed), each symbol repeated `repetition` times.
    Positional { k: usize, repetition: usize },
}

impl NonlinearEncoder {
    /// Largest codeword change caused by flipping one message bit.
    pub fn declared_update_efficiency(&self) -> usize {
        match *self {
            Self::Positional { repetition, .. } => 2 * repetition,
        }
    }
}

impl Encoder for NonlinearEncoder {
    fn message_len(&self) -> usize {
        match *self {
            Self::Positional { k, .. } => k,
        }
    }

    fn block_len(&self) -> usize {
        match *self {
            Self::Positional { k, repetition } => repetition << k,
        }
    }

    fn encode(&self, message: &BitVec) -> BitVec {
        assert_eq!(message.len(), self.message_len());
        self.encode_index(message.to_index_msb())
    }

    fn encode_index(&self, value: u64) -> BitVec {
        match *self {
            Self::Positional { repetition, .. } => {
                let mut out = BitVec::zeros(self.block_len());
                let start = value as usize * repetition;
                for i in start..start + repetition {
                    out.set(i, true);
                }
                out
            }
        }
    }
}

pub fn positional_code(k: usize, repetition: usize) -> Result<NonlinearEncoder> {
    if k == 0 || repetition == 0 {
        return Err(invalid("positional code needs k >= 1 and c >= 1"));
    }
    if k > POSITIONAL_MAX_K {
        return Err(Error::BudgetExceeded(format!(
            "positional code with k = {k} exceeds k <= {POSITIONAL_MAX_K}"
        )));
    }
    Ok(NonlinearEncoder::Positional { k, repetition })
}

/// Calls `visit` once for every systematic code `[I_k | P]` of length `n` whose
/// redundancy columns are listed in nondecreasing order (as `k`-bit integers).
///
/// Minimum distance, update-efficiency and local recoverability are invariant
/// under coordinate permutations, and every linear code is permutation
/// equivalent to such a code, so this walk covers every `[n, k]` code up to
/// equivalence. Requires `1 <= k <= n <= 64` and `k <= 20`.
pub fn for_each_systematic_class(n: usize, k: usize, mut visit: impl FnMut(&LinearCode)) -> Result<()> {
    if k == 0 || k > n || n > 64 || k > 20 {
        return Err(invalid(format!("systematic enumeration needs 1 <= k <= n <= 64, k <= 20 (n={n}, k={k})")));
    }
    let r = n - k;
    let values = 1u64 << k;
    let mut cols = vec![0u64; r];
    loop {
        let mut g = BitMatrix::zeros(k, n);
        for i in 0..k {
            g.set(i, i, true);
            for (j, &col) in cols.iter().enumerate() {
                if (col >> i) & 1 == 1 {
                    g.set(i, k + j, true);
                }
            }
        }
        let h = (r > 0).then(|| {
            let mut h = BitMatrix::zeros(r, n);
            for (j, &col) in cols.iter().enumerate() {
                for i in 0..k {
                    if (col >> i) & 1 == 1 {
                        h.set(j, i, true);
                    }
                }
                h.set(j, k + j, true);
            }
            h
        });
        visit(&LinearCode::new(g, h)?);

        // next nondecreasing sequence
        let Some(pos) = (0..r).rev().find(|&j| cols[j] + 1 < values) else { break };
        let v = cols[pos] + 1;
        for c in &mut cols[pos..] {
            *c = v;
        }
    }
    Ok(())
}
