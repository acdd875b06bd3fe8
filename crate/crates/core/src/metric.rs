//! Figures of merit of a concrete code: update-efficiency with a witnessing
//! sparse basis, minimum distance, local recoverability and update cost.

use serde::{Serialize, Serializer};

use crate::bitlin::{BitMatrix, BitVec, IncrementalBasis, WordBasis};
use crate::codebook::{self, Budget};
use crate::construct::{Encoder, LinearCode};
use crate::decode::repair_plans;
use crate::error::{Error, Result};

/// Local recoverability of a code, or the fact that some position has no
/// repair group at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recoverability {
    Finite(usize),
    NotRecoverable,
}

impl Recoverability {
    pub fn value(self) -> Option<usize> {
        match self {
            Self::Finite(r) => Some(r),
            Self::NotRecoverable => None,
        }
    }
}

impl Serialize for Recoverability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(r) => s.serialize_u64(*r as u64),
            Self::NotRecoverable => s.serialize_str("not-recoverable"),
        }
    }
}

/// Codewords sorted by weight (ties by enumeration order), zero word excluded.
enum SortedWords {
    Packed(Vec<u64>),
    Wide,
}

fn sorted_packed(g: &BitMatrix) -> Vec<u64> {
    let mut words = codebook::packed_codewords(g);
    words.retain(|&w| w != 0);
    words.sort_by_key(|w| w.count_ones());
    words
}

fn sorted_words(g: &BitMatrix) -> SortedWords {
    if g.cols() <= 64 {
        SortedWords::Packed(sorted_packed(g))
    } else {
        SortedWords::Wide
    }
}

/// Greedy over codewords in nondecreasing weight order: keep every codeword
/// independent of those already kept. The kept set is a basis whose sorted
/// weight profile is lexicographically minimal, so its largest weight is the
/// least possible over all bases.
pub fn min_max_weight_basis(code: &LinearCode, budget: &Budget) -> Result<BitMatrix> {
    let g = code.generator_matrix();
    let (k, n) = (code.k(), code.n());
    budget.check_messages(k)?;
    let rows = match sorted_words(g) {
        SortedWords::Packed(words) => {
            let mut basis = WordBasis::new();
            let mut rows = Vec::with_capacity(k);
            for w in words {
                if basis.insert(w) {
                    rows.push(BitVec::from_u64(w, n));
                    if rows.len() == k {
                        break;
                    }
                }
            }
            rows
        }
        SortedWords::Wide => {
            // one pass over the code per weight class, lightest first
            let mut basis = IncrementalBasis::new();
            let mut rows = Vec::with_capacity(k);
            for weight in 1..=n {
                codebook::for_each_codeword(g, |_, w| {
                    if rows.len() < k && w.weight() == weight && basis.insert(w) {
                        rows.push(w.clone());
                    }
                });
                if rows.len() == k {
                    break;
                }
            }
            rows
        }
    };
    debug_assert_eq!(rows.len(), k);
    Ok(BitMatrix::from_rows(&rows)?)
}

/// `t(C)`, with a basis achieving it.
pub fn update_efficiency(code: &LinearCode, budget: &Budget) -> Result<(usize, BitMatrix)> {
    let basis = min_max_weight_basis(code, budget)?;
    Ok((basis.max_row_weight(), basis))
}

/// A basis made only of weight-`d` codewords, or `None` when they do not span.
pub fn weight_d_basis(code: &LinearCode, d: usize, budget: &Budget) -> Result<Option<BitMatrix>> {
    let g = code.generator_matrix();
    let (k, n) = (code.k(), code.n());
    budget.check_messages(k)?;
    let mut rows = Vec::with_capacity(k);
    if n <= 64 {
        let mut basis = WordBasis::new();
        for w in codebook::packed_codewords(g) {
            if rows.len() < k && w.count_ones() as usize == d && basis.insert(w) {
                rows.push(BitVec::from_u64(w, n));
            }
        }
    } else {
        let mut basis = IncrementalBasis::new();
        codebook::for_each_codeword(g, |_, w| {
            if rows.len() < k && w.weight() == d && basis.insert(w) {
                rows.push(w.clone());
            }
        });
    }
    if rows.len() < k {
        return Ok(None);
    }
    Ok(Some(BitMatrix::from_rows(&rows)?))
}

/// Minimum nonzero codeword weight.
pub fn min_distance(code: &LinearCode, budget: &Budget) -> Result<usize> {
    let g = code.generator_matrix();
    budget.check_messages(code.k())?;
    let mut d = usize::MAX;
    if g.cols() <= 64 {
        for w in codebook::packed_codewords(g).into_iter().skip(1) {
            d = d.min(w.count_ones() as usize);
        }
    } else {
        codebook::for_each_codeword(g, |v, w| {
            if v != 0 {
                d = d.min(w.weight());
            }
        });
    }
    Ok(d)
}

/// Both locality figures for a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locality {
    /// Largest dual-basis row weight minus one; valid when those rows cover
    /// every position.
    pub r_upper: Recoverability,
    /// From the lightest covering dual codeword of each position.
    pub r_exact: Option<Recoverability>,
}

pub fn local_recoverability(code: &LinearCode, budget: &Budget) -> Locality {
    let n = code.n();
    let Some(dual) = code.dual_basis() else {
        return Locality { r_upper: Recoverability::NotRecoverable, r_exact: Some(Recoverability::NotRecoverable) };
    };
    let mut covered = BitVec::zeros(n);
    for i in 0..dual.rows() {
        for c in dual.row(i).iter_ones() {
            covered.set(c, true);
        }
    }
    let r_upper = if covered.weight() == n {
        Recoverability::Finite(dual.max_row_weight() - 1)
    } else {
        Recoverability::NotRecoverable
    };
    let r_exact = budget.allows_dual(n - code.k()).then(|| {
        let plans = repair_plans(code, budget);
        plans
            .iter()
            .try_fold(0, |acc, p| p.as_ref().map(|p| acc.max(p.locality())))
            .map_or(Recoverability::NotRecoverable, Recoverability::Finite)
    });
    Locality { r_upper, r_exact }
}

/// Hamming distance between the encodings of `x` and `x ⊕ e`.
pub fn update_cost(encoder: &dyn Encoder, x: &BitVec, e: &BitVec) -> usize {
    encoder.encode(&x.xor(e)).distance(&encoder.encode(x))
}

/// Summary of a code's figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub t: usize,
    pub r_upper: Recoverability,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_exact: Option<Recoverability>,
    #[serde(serialize_with = "bitstrings")]
    pub basis_used: BitMatrix,
}

fn bitstrings<S: Serializer>(m: &BitMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.to_bitstrings())
}

impl MetricsReport {
    /// Exact metrics within `budget`. With `allow_partial`, a code whose `2^k`
    /// codewords exceed the budget is reported with `d` omitted and `t` taken
    /// as the largest row weight of its own generator (an upper bound).
    pub fn compute(code: &LinearCode, budget: &Budget, allow_partial: bool) -> Result<Self> {
        let (d, t, basis_used) = match update_efficiency(code, budget) {
            Ok((t, basis)) => (Some(min_distance(code, budget)?), t, basis),
            Err(Error::BudgetExceeded(_)) if allow_partial => {
                let g = code.generator_matrix().clone();
                (None, g.max_row_weight(), g)
            }
            Err(e) => return Err(e),
        };
        let Locality { r_upper, r_exact } = local_recoverability(code, budget);
        Ok(Self { n: code.n(), k: code.k(), d, t, r_upper, r_exact, basis_used })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        concatenated, for_each_systematic_class, full_space, hamming, positional_code, repetition,
        sample_regular_ldpc, single_parity_check, HammingForm,
    };

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn basis_examples() {
        let id = full_space(5).unwrap();
        let basis = min_max_weight_basis(&id, &b()).unwrap();
        assert_eq!(basis.max_row_weight(), 1);
        assert!(basis.row_space_equal(id.generator_matrix()).unwrap());

        let rep = repetition(3).unwrap();
        assert_eq!(min_max_weight_basis(&rep, &b()).unwrap().to_bitstrings(), vec!["111"]);

        let h = hamming(3, HammingForm::Systematic).unwrap();
        let basis = min_max_weight_basis(&h, &b()).unwrap();
        assert_eq!(basis.max_row_weight(), 3);
        assert!(basis.row_space_equal(h.generator_matrix()).unwrap());
    }

    #[test]
    fn update_efficiency_examples() {
        for m in 2..=4 {
            for form in [HammingForm::SparseTriples, HammingForm::Systematic] {
                assert_eq!(update_efficiency(&hamming(m, form).unwrap(), &b()).unwrap().0, 3);
            }
        }
        let base = hamming(3, HammingForm::Systematic).unwrap();
        assert_eq!(update_efficiency(&concatenated(&base, 3).unwrap(), &b()).unwrap().0, 3);
        assert_eq!(update_efficiency(&repetition(3).unwrap(), &b()).unwrap().0, 3);
        let big = full_space(21).unwrap();
        assert!(matches!(update_efficiency(&big, &b()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn wide_path_matches_packed_path() {
        // n = 70 goes through the per-weight passes
        let base = hamming(3, HammingForm::Systematic).unwrap();
        let c = concatenated(&base, 10).unwrap();
        let budget = Budget { max_message_bits: 12, ..b() };
        assert!(update_efficiency(&c, &budget).is_err());
        let spc = concatenated(&single_parity_check(7).unwrap(), 10).unwrap();
        assert!(update_efficiency(&spc, &b()).is_err());
        let rep = concatenated(&repetition(7).unwrap(), 10).unwrap();
        let (t, basis) = update_efficiency(&rep, &b()).unwrap();
        assert_eq!(t, 7);
        assert!(basis.row_space_equal(rep.generator_matrix()).unwrap());
        assert_eq!(min_distance(&rep, &b()).unwrap(), 7);
    }

    #[test]
    fn weight_d_basis_examples() {
        let h = hamming(3, HammingForm::Systematic).unwrap();
        let basis = weight_d_basis(&h, 3, &b()).unwrap().unwrap();
        assert!(basis.row_weights().iter().all(|&w| w == 3));
        assert!(basis.row_space_equal(h.generator_matrix()).unwrap());
        let unit = weight_d_basis(&full_space(4).unwrap(), 1, &b()).unwrap().unwrap();
        assert!(unit.row_weights().iter().all(|&w| w == 1));
        assert_eq!(unit.rank(), 4);
        let even = single_parity_check(4).unwrap();
        assert!(weight_d_basis(&even, 2, &b()).unwrap().is_some());
        // weight-4 words lie in the 3-dimensional even-weight subcode
        assert!(weight_d_basis(&h, 4, &b()).unwrap().is_none());
        assert!(weight_d_basis(&h, 7, &b()).unwrap().is_none());
    }

    #[test]
    fn distance_examples() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        assert_eq!(min_distance(&h, &b()).unwrap(), 3);
        assert_eq!(min_distance(&repetition(6).unwrap(), &b()).unwrap(), 6);
        assert_eq!(min_distance(&concatenated(&h, 4).unwrap(), &b()).unwrap(), 3);
    }

    #[test]
    fn locality_examples() {
        let spc = local_recoverability(&single_parity_check(3).unwrap(), &b());
        assert_eq!((spc.r_upper, spc.r_exact), (Recoverability::Finite(2), Some(Recoverability::Finite(2))));
        let h = local_recoverability(&hamming(3, HammingForm::SparseTriples).unwrap(), &b());
        assert_eq!(h.r_exact, Some(Recoverability::Finite(3)));
        let id = local_recoverability(&full_space(3).unwrap(), &b());
        assert_eq!(id.r_exact, Some(Recoverability::NotRecoverable));
        let ldpc = sample_regular_ldpc(12, 0.5, 4, 3).unwrap();
        let l = local_recoverability(&ldpc, &b());
        assert!(l.r_upper.value().unwrap() <= 3);
        assert!(l.r_exact.unwrap().value().unwrap() <= l.r_upper.value().unwrap());
    }

    #[test]
    fn update_cost_examples() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let x: BitVec = "0110".parse().unwrap();
        assert_eq!(update_cost(&h, &x, &"1000".parse().unwrap()), 3);
        assert_eq!(update_cost(&h, &x, &"1100".parse().unwrap()), 4);
        for c in [1, 2, 4] {
            let p = positional_code(3, c).unwrap();
            for v in 0..8 {
                for bit in 0..3 {
                    let x = BitVec::from_index_msb(v, 3);
                    let e = BitVec::from_index_msb(1 << bit, 3);
                    assert_eq!(update_cost(&p, &x, &e), 2 * c);
                }
            }
        }
    }

    #[test]
    fn report_serialization() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let r = MetricsReport::compute(&h, &b(), false).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["t"], 3);
        assert_eq!(json["d"], 3);
        assert_eq!(json["r_exact"], 3);
        assert_eq!(json.as_object().unwrap().len(), 7);
        let id = MetricsReport::compute(&full_space(3).unwrap(), &b(), false).unwrap();
        assert_eq!(serde_json::to_value(&id).unwrap()["r_exact"], "not-recoverable");

        let big = concatenated(&h, 6).unwrap(); // k = 24
        assert!(MetricsReport::compute(&big, &b(), false).is_err());
        let partial = MetricsReport::compute(&big, &b(), true).unwrap();
        assert_eq!((partial.d, partial.t), (None, 3));
        assert!(serde_json::to_value(&partial).unwrap().get("d").is_none());
    }

    /// Smallest possible max row weight by trying every k-subset of nonzero
    /// codewords.
    fn brute_force_t(code: &LinearCode) -> usize {
        let words: Vec<u64> = codebook::packed_codewords(code.generator_matrix()).into_iter().skip(1).collect();
        let k = code.k();
        let mut best = usize::MAX;
        let mut pick = vec![0usize; k];
        fn rec(words: &[u64], k: usize, start: usize, pick: &mut Vec<usize>, depth: usize, best: &mut usize) {
            if depth == k {
                let mut basis = WordBasis::new();
                if pick.iter().all(|&i| basis.insert(words[i])) {
                    let t = pick.iter().map(|&i| words[i].count_ones() as usize).max().unwrap();
                    *best = (*best).min(t);
                }
                return;
            }
            for i in start..words.len() {
                pick[depth] = i;
                rec(words, k, i + 1, pick, depth + 1, best);
            }
        }
        rec(&words, k, 0, &mut pick, 0, &mut best);
        best
    }

    #[test]
    fn greedy_basis_is_optimal_on_small_codes() {
        for (n, k) in [(5, 2), (6, 3), (6, 2), (7, 3)] {
            for_each_systematic_class(n, k, |code| {
                let t = update_efficiency(code, &b()).unwrap().0;
                assert_eq!(t, brute_force_t(code));
                assert!(t >= min_distance(code, &b()).unwrap());
            })
            .unwrap();
        }
    }

    #[test]
    fn u_bit_updates_cost_at_most_u_t() {
        use rand::Rng;
        let h = hamming(4, HammingForm::SparseTriples).unwrap();
        let t = update_efficiency(&h, &b()).unwrap().0;
        let mut rng = crate::rng::substream(5, 0);
        for u in 1..=4 {
            for _ in 0..1000 {
                let x = BitVec::from_bools((0..11).map(|_| rng.gen_bool(0.5)));
                let mut e = BitVec::zeros(11);
                for i in crate::rng::subset(&mut rng, 11, u) {
                    e.set(i, true);
                }
                assert!(update_cost(&h, &x, &e) <= u * t);
            }
        }
    }
}
