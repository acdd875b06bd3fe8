//! Exact maximum-likelihood decoding on the erasure and symmetric channels, and
//! single-symbol local repair through low-weight dual codewords.

use serde::Serialize;

use crate::bitlin::{BitMatrix, BitVec, LeftSolution};
use crate::channel::ReceivedWord;
use crate::codebook::{self, Budget};
use crate::construct::{Encoder, LinearCode};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeStatus {
    Decoded,
    /// Several messages explain the received word equally well (BEC).
    Ambiguous,
    /// No codeword is consistent with the received word.
    DetectedFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub message: Option<BitVec>,
    /// BSC: another message attained the same distance.
    pub tie_broken: bool,
    /// Probability that a uniform pick among the consistent messages is the
    /// transmitted one: 1 when decoded, `1/M` for `M` consistent messages.
    pub random_pick_success: f64,
}

impl DecodeOutcome {
    fn decoded(message: BitVec) -> Self {
        Self { status: DecodeStatus::Decoded, message: Some(message), tie_broken: false, random_pick_success: 1.0 }
    }

    fn ambiguous(candidates: f64) -> Self {
        Self { status: DecodeStatus::Ambiguous, message: None, tie_broken: false, random_pick_success: 1.0 / candidates }
    }

    fn failure() -> Self {
        Self { status: DecodeStatus::DetectedFailure, message: None, tie_broken: false, random_pick_success: 0.0 }
    }

    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }

    /// Whether the decoder output equals `message`.
    pub fn recovers(&self, message: &BitVec) -> bool {
        self.message.as_ref() == Some(message)
    }
}

/// ML decoding on the BEC. Linear maps solve `x·G_I = y_I` over the unerased
/// columns `I`; the answer is unique iff `rank(G_I) = k`. Nonlinear encoders
/// are searched exhaustively within `budget`.
pub fn bec_ml_decode(encoder: &dyn Encoder, received: &ReceivedWord, budget: &Budget) -> Result<DecodeOutcome> {
    check_len(encoder, received.len())?;
    match encoder.generator() {
        Some(g) => Ok(bec_linear(g, received)),
        None => bec_exhaustive(encoder, received, budget),
    }
}

fn bec_linear(g: &BitMatrix, received: &ReceivedWord) -> DecodeOutcome {
    let k = g.rows();
    let mut unerased = received.erasure_mask().clone();
    for i in 0..unerased.len() {
        unerased.flip(i);
    }
    if unerased.is_zero() {
        return DecodeOutcome::ambiguous(2f64.powi(k as i32));
    }
    match g.solve_left_masked(&unerased, received.bits()).expect("lengths agree") {
        LeftSolution::Unique(x) => DecodeOutcome::decoded(x),
        LeftSolution::Ambiguous { rank, .. } => DecodeOutcome::ambiguous(2f64.powi((k - rank) as i32)),
        LeftSolution::Inconsistent => DecodeOutcome::failure(),
    }
}

fn bec_exhaustive(encoder: &dyn Encoder, received: &ReceivedWord, budget: &Budget) -> Result<DecodeOutcome> {
    let k = encoder.message_len();
    budget.check_messages(k)?;
    let mut first = None;
    let mut count = 0u64;
    for v in 0..1u64 << k {
        if received.is_consistent_with(&encoder.encode_index(v)) {
            count += 1;
            first.get_or_insert(v);
        }
    }
    Ok(match (count, first) {
        (1, Some(v)) => DecodeOutcome::decoded(BitVec::from_index_msb(v, k)),
        (0, _) => DecodeOutcome::failure(),
        _ => DecodeOutcome::ambiguous(count as f64),
    })
}

/// ML decoding on the BSC: the message whose codeword is nearest to `received`,
/// ties going to the numerically smallest (MSB-first) message.
pub fn bsc_ml_decode(encoder: &dyn Encoder, received: &BitVec, budget: &Budget) -> Result<DecodeOutcome> {
    check_len(encoder, received.len())?;
    let k = encoder.message_len();
    budget.check_messages(k)?;

    // (distance, message) of the best candidate and whether its distance is shared
    let mut best = (usize::MAX, u64::MAX);
    let mut tied = false;
    let mut consider = |v: u64, d: usize| {
        if d < best.0 {
            best = (d, v);
            tied = false;
        } else if d == best.0 {
            tied = true;
            best.1 = best.1.min(v);
        }
    };
    match encoder.generator() {
        Some(g) if g.cols() <= 64 => {
            let y = received.as_u64();
            for (v, w) in codebook::packed_codewords(g).into_iter().enumerate() {
                consider(v as u64, (w ^ y).count_ones() as usize);
            }
        }
        Some(g) => codebook::for_each_codeword(g, |v, w| consider(v, w.distance(received))),
        None => {
            for v in 0..1u64 << k {
                consider(v, encoder.encode_index(v).distance(received));
            }
        }
    }
    let mut out = DecodeOutcome::decoded(BitVec::from_index_msb(best.1, k));
    out.tie_broken = tied;
    Ok(out)
}

fn check_len(encoder: &dyn Encoder, len: usize) -> Result<()> {
    if len != encoder.block_len() {
        return Err(invalid(format!("received length {len}, block length {}", encoder.block_len())));
    }
    Ok(())
}

/// How to rebuild one symbol: `x[position] = ⊕ x[query]`, read off the dual
/// codeword `combination`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    pub position: usize,
    pub query: Vec<usize>,
    pub combination: BitVec,
}

impl RepairPlan {
    fn from_dual_word(position: usize, word: BitVec) -> Self {
        let query = word.iter_ones().filter(|&i| i != position).collect();
        Self { position, query, combination: word }
    }

    pub fn locality(&self) -> usize {
        self.query.len()
    }
}

/// Lowest-weight dual codeword covering each position (`None` when the
/// position is unconstrained).
///
/// The dual is enumerated when `n - k` fits `budget.max_redundancy`; otherwise
/// only the rows of the dual basis are searched, which gives an upper bound.
pub fn repair_plans(code: &LinearCode, budget: &Budget) -> Vec<Option<RepairPlan>> {
    let n = code.n();
    let Some(dual) = code.dual_basis() else { return vec![None; n] };
    let mut best: Vec<Option<BitVec>> = vec![None; n];
    let mut offer = |w: &BitVec, weight: usize| {
        for i in w.iter_ones() {
            if best[i].as_ref().is_none_or(|b| b.weight() > weight) {
                best[i] = Some(w.clone());
            }
        }
    };
    if budget.allows_dual(dual.rows()) && dual.rank() == dual.rows() {
        if n <= 64 {
            let mut min_weight = vec![usize::MAX; n];
            let mut chosen = vec![0u64; n];
            codebook::for_each_packed_codeword(&dual, |_, w| {
                let weight = w.count_ones() as usize;
                let mut bits = w;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    if weight < min_weight[i] {
                        min_weight[i] = weight;
                        chosen[i] = w;
                    }
                    bits &= bits - 1;
                }
            });
            for i in 0..n {
                if min_weight[i] != usize::MAX {
                    best[i] = Some(BitVec::from_u64(chosen[i], n));
                }
            }
        } else {
            codebook::for_each_codeword(&dual, |_, w| {
                if !w.is_zero() {
                    offer(w, w.weight());
                }
            });
        }
    } else {
        for w in dual.row_vecs() {
            let weight = w.weight();
            offer(&w, weight);
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(i, w)| w.map(|w| RepairPlan::from_dual_word(i, w)))
        .collect()
}

/// The minimum-size query set for one position.
pub fn repair_plan(code: &LinearCode, position: usize, budget: &Budget) -> Result<RepairPlan> {
    if position >= code.n() {
        return Err(invalid(format!("position {position} outside block length {}", code.n())));
    }
    repair_plans(code, budget)
        .swap_remove(position)
        .ok_or(Error::NotRepairable { position })
}

/// Rebuilds the erased symbol at `plan.position` from its query positions.
pub fn local_repair(received: &ReceivedWord, plan: &RepairPlan) -> Result<bool> {
    if plan.position >= received.len() {
        return Err(invalid("repair position outside received word"));
    }
    let mut bit = false;
    for &q in &plan.query {
        if received.erasure_mask().get(q) {
            return Err(Error::QueryErased(q));
        }
        bit ^= received.bits().get(q);
    }
    Ok(bit)
}

/// Erasure decoding of `copies` concatenated blocks of `base`, block by block.
/// Exact ML for block-diagonal generators; returns one outcome per block.
pub fn bec_decode_blocks(base: &LinearCode, received: &ReceivedWord) -> Result<Vec<DecodeOutcome>> {
    let m = base.n();
    if received.is_empty() || received.len() % m != 0 {
        return Err(invalid(format!("received length {} is not a multiple of {m}", received.len())));
    }
    let budget = Budget::default();
    (0..received.len() / m)
        .map(|b| {
            let erased: Vec<usize> =
                (0..m).filter(|&i| received.erasure_mask().get(b * m + i)).collect();
            let bits = BitVec::from_bools((0..m).map(|i| received.bits().get(b * m + i)));
            bec_ml_decode(base, &ReceivedWord::with_erasures(&bits, &erased), &budget)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{concatenated, full_space, hamming, positional_code, repetition, single_parity_check, HammingForm};

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn bec_examples() {
        let b = Budget::default();
        let id = full_space(5).unwrap();
        let out = bec_ml_decode(&id, &ReceivedWord::clean(bv("10110")), &b).unwrap();
        assert_eq!(out.message, Some(bv("10110")));

        let rep = repetition(3).unwrap();
        let out = bec_ml_decode(&rep, &ReceivedWord::parse("?1?").unwrap(), &b).unwrap();
        assert_eq!(out.message, Some(bv("1")));

        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let x = h.encode(&bv("1011"));
        let out = bec_ml_decode(&h, &ReceivedWord::with_erasures(&x, &[2, 4, 5, 6]), &b).unwrap();
        assert_eq!(out.status, DecodeStatus::Ambiguous);
        assert!(out.random_pick_success <= 0.5);

        let out = bec_ml_decode(&rep, &ReceivedWord::parse("01?").unwrap(), &b).unwrap();
        assert_eq!(out.status, DecodeStatus::DetectedFailure);
        assert!(bec_ml_decode(&rep, &ReceivedWord::parse("01").unwrap(), &b).is_err());
    }

    #[test]
    fn bec_agrees_with_rank_on_every_erasure_pattern() {
        let h = hamming(3, HammingForm::Systematic).unwrap();
        let b = Budget::default();
        let x = h.encode(&bv("0110"));
        for mask in 0u32..128 {
            let erased: Vec<usize> = (0..7).filter(|i| mask >> i & 1 == 1).collect();
            let unerased: Vec<usize> = (0..7).filter(|i| mask >> i & 1 == 0).collect();
            let out = bec_ml_decode(&h, &ReceivedWord::with_erasures(&x, &erased), &b).unwrap();
            let full_rank = !unerased.is_empty()
                && h.generator_matrix().select_columns(&unerased).unwrap().rank() == 4;
            assert_eq!(out.is_decoded(), full_rank);
            if out.is_decoded() {
                assert!(ReceivedWord::with_erasures(&x, &erased).is_consistent_with(&h.encode(out.message.as_ref().unwrap())));
            }
        }
    }

    #[test]
    fn bec_nonlinear_positional() {
        let p = positional_code(2, 2).unwrap();
        let b = Budget::default();
        let x = p.encode(&bv("10"));
        let out = bec_ml_decode(&p, &ReceivedWord::with_erasures(&x, &[0, 4]), &b).unwrap();
        assert_eq!(out.message, Some(bv("10")));
        // both ones erased: the two zero-blocks that are also erased stay possible
        let out = bec_ml_decode(&p, &ReceivedWord::with_erasures(&x, &[0, 1, 4, 5]), &b).unwrap();
        assert_eq!(out.status, DecodeStatus::Ambiguous);
        assert_eq!(out.random_pick_success, 0.5);
    }

    #[test]
    fn bsc_examples() {
        let b = Budget::default();
        let out = bsc_ml_decode(&repetition(3).unwrap(), &bv("110"), &b).unwrap();
        assert_eq!(out.message, Some(bv("1")));
        assert!(!out.tie_broken);
        let out = bsc_ml_decode(&repetition(2).unwrap(), &bv("10"), &b).unwrap();
        assert_eq!(out.message, Some(bv("0")));
        assert!(out.tie_broken);
    }

    #[test]
    fn bsc_hamming_corrects_single_errors() {
        let b = Budget::default();
        for form in [HammingForm::SparseTriples, HammingForm::Systematic] {
            let h = hamming(3, form).unwrap();
            for v in 0..16 {
                let m = BitVec::from_index_msb(v, 4);
                let x = h.encode(&m);
                for i in 0..7 {
                    let mut y = x.clone();
                    y.flip(i);
                    assert_eq!(bsc_ml_decode(&h, &y, &b).unwrap().message, Some(m.clone()));
                }
            }
        }
    }

    #[test]
    fn bsc_matches_syndrome_decoding() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let pc = h.parity_check().unwrap();
        let b = Budget::default();
        for y in 0u64..128 {
            let y = BitVec::from_u64(y, 7);
            // syndrome read as an integer names the flipped column
            let s: usize = (0..3).map(|r| (pc.row(r).dot(&y) as usize) << r).sum();
            let mut c = y.clone();
            if s > 0 {
                c.flip(s - 1);
            }
            let out = bsc_ml_decode(&h, &y, &b).unwrap();
            assert!(!out.tie_broken);
            assert_eq!(h.encode(out.message.as_ref().unwrap()), c);
        }
    }

    #[test]
    fn bsc_wide_path_matches_brute_force() {
        // hamming(4) generator tiled five times side by side: n = 75 > 64
        let h = hamming(4, HammingForm::SparseTriples).unwrap();
        let rows: Vec<BitVec> = h.generator_matrix().row_vecs().iter().map(|r| BitVec::concat(&[r.clone(), r.clone(), r.clone(), r.clone(), r.clone()])).collect();
        let g = BitMatrix::from_rows(&rows).unwrap();
        let b = Budget::default();
        let mut rng = crate::rng::substream(11, 0);
        for _ in 0..20 {
            let y = BitVec::from_bools((0..75).map(|_| rand::Rng::gen_bool(&mut rng, 0.5)));
            let out = bsc_ml_decode(&g, &y, &b).unwrap();
            let best = (0..1u64 << 11)
                .min_by_key(|&v| (g.left_mul(&BitVec::from_index_msb(v, 11)).distance(&y), v))
                .unwrap();
            assert_eq!(out.message.unwrap().to_index_msb(), best);
        }
    }

    #[test]
    fn repair_plan_examples() {
        let b = Budget::default();
        let spc = single_parity_check(3).unwrap();
        let plan = repair_plan(&spc, 0, &b).unwrap();
        assert_eq!(plan.query, vec![1, 2]);
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        for i in 0..7 {
            assert_eq!(repair_plan(&h, i, &b).unwrap().locality(), 3);
        }
        let id = full_space(4).unwrap();
        assert_eq!(repair_plan(&id, 2, &b), Err(Error::NotRepairable { position: 2 }));
    }

    #[test]
    fn local_repair_is_exact_on_hamming() {
        let b = Budget::default();
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let plans = repair_plans(&h, &b);
        for v in 0..16 {
            let x = h.encode_index(v);
            for (i, plan) in plans.iter().enumerate() {
                let r = ReceivedWord::with_erasures(&x, &[i]);
                assert_eq!(local_repair(&r, plan.as_ref().unwrap()).unwrap(), x.get(i));
            }
        }
        let spc = single_parity_check(3).unwrap();
        let plan = repair_plan(&spc, 0, &b).unwrap();
        assert!(local_repair(&ReceivedWord::parse("?01").unwrap(), &plan).unwrap());
        assert_eq!(local_repair(&ReceivedWord::parse("??1").unwrap(), &plan), Err(Error::QueryErased(1)));
    }

    #[test]
    fn concatenated_repair_stays_in_block() {
        let c = concatenated(&single_parity_check(3).unwrap(), 4).unwrap();
        for (i, plan) in repair_plans(&c, &Budget::default()).into_iter().enumerate() {
            let plan = plan.unwrap();
            assert!(plan.query.iter().all(|q| q / 3 == i / 3));
        }
    }

    #[test]
    fn wide_dual_enumeration_matches_rows_bound() {
        // n = 70 exercises the unpacked dual walk
        let c = concatenated(&single_parity_check(7).unwrap(), 10).unwrap();
        let plans = repair_plans(&c, &Budget::default());
        assert!(plans.iter().all(|p| p.as_ref().unwrap().locality() == 6));
    }

    #[test]
    fn block_decoding_matches_joint_decoding() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let c = concatenated(&h, 3).unwrap();
        let x = c.encode_index(0b1010_0110_1111);
        let r = ReceivedWord::with_erasures(&x, &[0, 1, 2, 7, 8, 20]);
        let blocks = bec_decode_blocks(&h, &r).unwrap();
        let joint = bec_ml_decode(&c, &r, &Budget::default()).unwrap();
        assert_eq!(joint.is_decoded(), blocks.iter().all(|b| b.is_decoded()));
        assert!(!blocks[0].is_decoded() && blocks[1].is_decoded() && blocks[2].is_decoded());
    }
}
