//! Bound and threshold calculators: Griesmer slack, locality-aware Singleton,
//! exact `A₂(n,d)` and `B(n,d,t)` by maximum-clique search, and the converse
//! thresholds for linear, general and LDGM codes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// `s = n - Σ_{j<k} ⌈d / 2^j⌉`; negative when `[n, k, d]` violates Griesmer.
pub fn griesmer_slack(n: usize, k: usize, d: usize) -> i64 {
    let sum: i64 = (0..k).map(|j| ceil_div_pow2(d, j) as i64).sum();
    n as i64 - sum
}

fn ceil_div_pow2(d: usize, j: usize) -> usize {
    if j >= usize::BITS as usize {
        return usize::from(d > 0);
    }
    d.div_ceil(1 << j)
}

/// Range `d ≤ t ≤ d + s` of update-efficiency for any linear `[n, k, d]` code.
pub fn update_efficiency_range(n: usize, k: usize, d: usize) -> Result<(usize, usize)> {
    if k == 0 || d == 0 {
        return Err(invalid("need k >= 1 and d >= 1"));
    }
    let s = griesmer_slack(n, k, d);
    if s < 0 {
        return Err(invalid(format!("[{n}, {k}, {d}] violates the Griesmer bound (slack {s})")));
    }
    Ok((d, d + s as usize))
}

/// `n - k - ⌈k/r⌉ + 2`, the largest distance of an `[n, k]` code with locality `r`.
pub fn locality_singleton(n: usize, k: usize, r: usize) -> Result<i64> {
    if r == 0 || k == 0 || n < k {
        return Err(invalid("need r >= 1, k >= 1 and n >= k"));
    }
    Ok(n as i64 - k as i64 - k.div_ceil(r) as i64 + 2)
}

/// Largest block length accepted by the exhaustive searches.
pub const EXHAUSTIVE_MAX_LEN: usize = 12;
/// Branch-and-bound nodes allowed per clique search.
pub const CLIQUE_NODE_BUDGET: u64 = 200_000_000;

/// Exact `A₂(n, d)`: the largest binary code of length `n` and minimum distance
/// `d`. `A₂(n, d) = 1` when `n <= 0` or `d > n`.
pub fn a2_exact(n: i64, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(invalid("distance must be at least 1"));
    }
    if n <= 0 || d as i64 > n {
        return Ok(1);
    }
    let n = n as usize;
    if d == 1 {
        return Ok(1u64 << n);
    }
    if d == n {
        return Ok(2);
    }
    if d % 2 == 0 {
        // puncture one coordinate / extend by parity
        return a2_exact(n as i64 - 1, d - 1);
    }
    if n > EXHAUSTIVE_MAX_LEN {
        return Err(Error::BudgetExceeded(format!("A2({n}, {d}) needs n <= {EXHAUSTIVE_MAX_LEN}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&(n, d)) {
        return Ok(v);
    }
    let v = a2_search(n, d)?;
    cache.lock().unwrap().insert((n, d), v);
    Ok(v)
}

/// Any code can be translated to contain 0 and permuted so that a lightest
/// nonzero codeword is `1^w 0^{n-w}`; the rest lies among words of weight
/// `>= w` far from both.
fn a2_search(n: usize, d: usize) -> Result<u64> {
    let mut best = 1u64;
    for w in d..=n {
        let anchor = (1u64 << w) - 1;
        let candidates: Vec<u64> = (1u64..1 << n)
            .filter(|&x| x != anchor && x.count_ones() as usize >= w && (x ^ anchor).count_ones() as usize >= d)
            .collect();
        let extra = max_clique_size(&candidates, d, best.saturating_sub(2) as usize)?;
        best = best.max(2 + extra as u64);
    }
    Ok(best)
}

/// Exact `B(n, d, t)`: the largest distance-`d` code whose words have weight at
/// most `t`.
pub fn b_max_weight(n: usize, d: usize, t: usize) -> Result<u64> {
    if d == 0 {
        return Err(invalid("distance must be at least 1"));
    }
    if n > EXHAUSTIVE_MAX_LEN {
        return Err(Error::BudgetExceeded(format!("B({n}, {d}, {t}) needs n <= {EXHAUSTIVE_MAX_LEN}")));
    }
    let t = t.min(n);
    if t == n {
        return a2_exact(n as i64, d);
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&(n, d, t)) {
        return Ok(v);
    }
    let words: Vec<u64> = (0u64..1 << n).filter(|x| x.count_ones() as usize <= t).collect();
    let v = max_clique_size(&words, d, 0)? as u64;
    cache.lock().unwrap().insert((n, d, t), v);
    Ok(v)
}

/// `dn / (dn - 2tn + 2t²)` when the denominator is positive and `2t <= n`.
/// Above `n/2` the weight cap stops constraining the code and the ratio is no
/// longer an upper bound (e.g. `B(3, 2, 2) = 4 > 3`).
pub fn johnson_upper(n: usize, d: usize, t: usize) -> Option<f64> {
    if 2 * t > n {
        return None;
    }
    let (n, d, t) = (n as f64, d as f64, t as f64);
    let denom = d * n - 2.0 * t * n + 2.0 * t * t;
    (denom > 0.0).then(|| d * n / denom)
}

/// Necessary condition for a `(u, t)`-update-efficient `[n, k, d]` code:
/// `Σ_{i≤u} C(k, i) ≤ B(n, d, t)`.
pub fn ut_feasible(n: usize, k: usize, d: usize, u: usize, t: usize) -> Result<bool> {
    let mut sum = 0u128;
    let mut binom = 1u128;
    for i in 0..=u.min(k) {
        if i > 0 {
            binom = binom * (k - i + 1) as u128 / i as u128;
        }
        sum += binom;
    }
    if u == 0 {
        return Ok(true);
    }
    Ok(sum <= b_max_weight(n, d, t)? as u128)
}

/// `min_{1≤τ≤⌈n/(r+1)⌉} [τr + log₂ A₂(n - τ(r+1), d)]`, an upper bound on
/// `log₂ M` for a length-`n` code with locality `r` and distance `d`.
pub fn cm_bound(n: usize, r: usize, d: usize) -> Result<f64> {
    if n == 0 || r == 0 || d == 0 {
        return Err(invalid("need n, r, d >= 1"));
    }
    let mut best = f64::INFINITY;
    for tau in 1..=n.div_ceil(r + 1) {
        let rest = n as i64 - (tau * (r + 1)) as i64;
        let value = (tau * r) as f64 + (a2_exact(rest, d)? as f64).log2();
        best = best.min(value);
    }
    Ok(best)
}

/// Size of a maximum set of `words` with pairwise distance at least `d`, or
/// `floor` if nothing larger exists.
fn max_clique_size(words: &[u64], d: usize, floor: usize) -> Result<usize> {
    let v = words.len();
    if v == 0 {
        return Ok(floor);
    }
    // high-degree vertices first makes the colouring bound tighter
    let degree = |a: u64| words.iter().filter(|&&b| (a ^ b).count_ones() as usize >= d).count();
    let mut words = words.to_vec();
    words.sort_by_key(|&w| (std::cmp::Reverse(degree(w)), w));
    let blocks = v.div_ceil(64);
    let mut adj = vec![0u64; v * blocks];
    for i in 0..v {
        for j in 0..v {
            if i != j && (words[i] ^ words[j]).count_ones() as usize >= d {
                adj[i * blocks + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut search = Clique { adj: &adj, blocks, best: floor, nodes: 0 };
    let mut all = vec![0u64; blocks];
    for i in 0..v {
        all[i / 64] |= 1 << (i % 64);
    }
    search.expand(all, 0)?;
    Ok(search.best)
}

struct Clique<'a> {
    adj: &'a [u64],
    blocks: usize,
    best: usize,
    nodes: u64,
}

impl Clique<'_> {
    fn neighbours(&self, i: usize) -> &[u64] {
        &self.adj[i * self.blocks..(i + 1) * self.blocks]
    }

    /// Greedy colouring of `cands`; returns vertices in colour order with the
    /// colour count so far (an upper bound on the clique within the prefix).
    fn colour(&self, cands: &[u64]) -> Vec<(usize, usize)> {
        let mut order = Vec::new();
        let mut left = cands.to_vec();
        let mut colour = 0;
        while left.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = left.clone();
            while let Some(i) = first_set(&q) {
                left[i / 64] &= !(1 << (i % 64));
                q[i / 64] &= !(1 << (i % 64));
                for (qb, nb) in q.iter_mut().zip(self.neighbours(i)) {
                    *qb &= !nb;
                }
                order.push((i, colour));
            }
        }
        order
    }

    fn expand(&mut self, mut cands: Vec<u64>, size: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > CLIQUE_NODE_BUDGET {
            return Err(Error::BudgetExceeded(format!("clique search exceeded {CLIQUE_NODE_BUDGET} nodes")));
        }
        let order = self.colour(&cands);
        for &(v, colour) in order.iter().rev() {
            if size + colour <= self.best {
                return Ok(());
            }
            let next: Vec<u64> = cands.iter().zip(self.neighbours(v)).map(|(c, n)| c & n).collect();
            if next.iter().all(|&w| w == 0) {
                self.best = self.best.max(size + 1);
            } else {
                self.expand(next, size + 1)?;
            }
            cands[v / 64] &= !(1 << (v % 64));
        }
        Ok(())
    }
}

fn first_set(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, &w)| w != 0).map(|(b, w)| b * 64 + w.trailing_zeros() as usize)
}

/// A threshold that may be a number, infinite, or absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold {
    Finite(f64),
    Unbounded,
    NoPositiveThreshold,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v:.6}"),
            Self::Unbounded => f.write_str("unbounded"),
            Self::NoPositiveThreshold => f.write_str("no positive threshold"),
        }
    }
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {x} must lie in (0, 1)")))
    }
}

/// Row weight below which every linear `[n, k]` code with those generator rows
/// fails on BEC(p) with probability at least `1/2 - ε`:
/// `ln(k² / (2n ln(1/ε))) / (2 ln(1/p))` (natural logs).
pub fn linear_bec_threshold(n: f64, k: f64, p: f64, eps: f64) -> Result<Threshold> {
    open_unit("p", p)?;
    open_unit("eps", eps)?;
    if n < 1.0 || k < 1.0 {
        return Err(invalid("need n, k >= 1"));
    }
    let ratio = k * k / (2.0 * n * (1.0 / eps).ln());
    if ratio < 1.0 {
        return Ok(Threshold::NoPositiveThreshold);
    }
    Ok(Threshold::Finite(ratio.ln() / (2.0 * (1.0 / p).ln())))
}

/// Update-efficiency at or below which any code of dimension `k` fails on
/// BSC(p) with probability `1 - o(1)`: `(1 - α) log₂ k / log₂((1 - p)/p)`.
pub fn general_bsc_threshold(k: f64, p: f64, alpha: f64) -> Result<Threshold> {
    open_unit("p", p)?;
    open_unit("alpha", alpha)?;
    if k < 1.0 {
        return Err(invalid("need k >= 1"));
    }
    if p >= 0.5 {
        return Ok(Threshold::Unbounded);
    }
    Ok(Threshold::Finite((1.0 - alpha) * k.log2() / ((1.0 - p) / p).log2()))
}

/// `λ_p = -1 - ½ log₂ p - ½ log₂(1 - p)`.
pub fn lambda_p(p: f64) -> Result<f64> {
    open_unit("p", p)?;
    Ok(-1.0 - 0.5 * p.log2() - 0.5 * (1.0 - p).log2())
}

/// Converse predictions for the LDGM ensemble with row weight `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LdgmConverse {
    /// Lower bound on the fraction of matrices with `n^α` disjoint-support rows.
    pub ensemble_fraction_lb: f64,
    /// `min(1, n^α 2^{-λ_p t} / √t)`.
    pub error_prob_lb: f64,
    /// Uncapped `n^α 2^{-λ_p t} / √t`.
    pub error_prob_raw: f64,
    /// `(α / λ_p) log₂ n`; row weights below it cannot give vanishing error.
    pub weight_threshold: Threshold,
}

pub fn ldgm_converse(n: f64, k: f64, t: f64, p: f64, alpha: f64) -> Result<LdgmConverse> {
    open_unit("p", p)?;
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(invalid(format!("alpha = {alpha} must lie in (0, 1/2)")));
    }
    if t < 1.0 || t >= n {
        return Err(invalid("need 1 <= t < n"));
    }
    if k < n.powf(alpha) {
        return Err(invalid(format!("k = {k} is below n^alpha = {}", n.powf(alpha))));
    }
    let lambda = lambda_p(p)?;
    let ensemble_fraction_lb = 1.0 - t * t * n.powf(2.0 * alpha) / (n - t);
    let error_prob_raw = n.powf(alpha) * (-lambda * t).exp2() / t.sqrt();
    let weight_threshold =
        if lambda > 0.0 { Threshold::Finite(alpha / lambda * n.log2()) } else { Threshold::Unbounded };
    Ok(LdgmConverse { ensemble_fraction_lb, error_prob_lb: error_prob_raw.min(1.0), error_prob_raw, weight_threshold })
}

/// Locality at or below which codes of rate `1 - p - ε` fail on BEC(p):
/// `log₂(1/(3ε)) / log₂(2/(1 - p))`, and 0 once `ε ≥ 1/3`.
pub fn locality_threshold(p: f64, eps: f64) -> Result<f64> {
    open_unit("p", p)?;
    if eps <= 0.0 {
        return Err(invalid("eps must be positive"));
    }
    if eps >= 1.0 / 3.0 {
        return Ok(0.0);
    }
    if eps >= (1.0 - p) / 2.0 {
        return Err(invalid(format!("eps = {eps} must be below (1 - p)/2 = {}", (1.0 - p) / 2.0)));
    }
    Ok((1.0 / (3.0 * eps)).log2() / (2.0 / (1.0 - p)).log2())
}

/// `n(1-p) - (1-p)^r n/(r+1)`, the stated bound on `E log₂ S` for a length-`n`
/// code with locality `r` on BEC(p).
pub fn projection_mean_bound(n: f64, p: f64, r: f64) -> f64 {
    n * (1.0 - p) - (1.0 - p).powf(r) * n / (r + 1.0)
}

/// `exp(-ε²n/2)`: concentration of a 1-Lipschitz function of `n` independent
/// erasures.
pub fn azuma_tail(n: f64, eps: f64) -> f64 {
    (-eps * eps * n / 2.0).exp()
}

/// Per-`ln n` constants of the three row-weight thresholds at one `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseCoefficients {
    pub p: f64,
    /// `1 / (2 ln(1/p))`
    pub coeff_thm5: f64,
    /// `1 / ln((1-p)/p)`
    pub coeff_thm6: f64,
    /// `1 / (2 λ_p ln 2)`
    pub coeff_thm8: f64,
    pub flags: String,
}

pub fn converse_coefficients(p: f64) -> Result<ConverseCoefficients> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(invalid(format!("p = {p} must lie in (0, 1/2]")));
    }
    let coeff_thm5 = 1.0 / (2.0 * (1.0 / p).ln());
    if p == 0.5 {
        return Ok(ConverseCoefficients {
            p,
            coeff_thm5,
            coeff_thm6: f64::INFINITY,
            coeff_thm8: f64::INFINITY,
            flags: "diverges".into(),
        });
    }
    Ok(ConverseCoefficients {
        p,
        coeff_thm5,
        coeff_thm6: 1.0 / ((1.0 - p) / p).ln(),
        coeff_thm8: 1.0 / (2.0 * lambda_p(p)? * std::f64::consts::LN_2),
        flags: String::new(),
    })
}

pub fn fig1_curves(grid: &[f64]) -> Result<Vec<ConverseCoefficients>> {
    grid.iter().map(|&p| converse_coefficients(p)).collect()
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive, rounded to 12 decimals.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    let round = |x: f64| (x * 1e12).round() / 1e12;
    match steps {
        0 => Err(invalid("grid needs at least one step")),
        1 => Ok(vec![lo]),
        _ => Ok((0..steps).map(|i| round(lo + (hi - lo) * i as f64 / (steps - 1) as f64)).collect()),
    }
}

pub fn fig1_csv(rows: &[ConverseCoefficients]) -> String {
    let mut out = String::from("p,coeff_thm5,coeff_thm6,coeff_thm8,flags\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.6},{:.6},{:.6},{}", r.p, r.coeff_thm5, r.coeff_thm6, r.coeff_thm8, r.flags);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// A₂ by trying every subset of words of length `n <= 4`.
    fn brute_a2(n: usize, d: usize) -> u64 {
        let words = 1usize << n;
        let mut best = 0;
        for set in 0u32..(1u32 << words) {
            let members: Vec<usize> = (0..words).filter(|&w| set >> w & 1 == 1).collect();
            let ok = members
                .iter()
                .enumerate()
                .all(|(i, &a)| members[i + 1..].iter().all(|&b| (a ^ b).count_ones() as usize >= d));
            if ok {
                best = best.max(members.len() as u64);
            }
        }
        best
    }

    #[test]
    fn griesmer_examples() {
        assert_eq!(griesmer_slack(7, 4, 3), 0);
        assert_eq!(griesmer_slack(15, 11, 3), 1);
        assert_eq!(griesmer_slack(9, 1, 4), 5);
        assert_eq!(update_efficiency_range(7, 4, 3).unwrap(), (3, 3));
        assert_eq!(update_efficiency_range(15, 11, 3).unwrap(), (3, 4));
        assert_eq!(update_efficiency_range(3, 1, 3).unwrap(), (3, 3));
        assert!(update_efficiency_range(6, 4, 3).is_err());
    }

    #[test]
    fn locality_singleton_examples() {
        assert_eq!(locality_singleton(10, 6, 3).unwrap(), 4);
        assert_eq!(locality_singleton(9, 4, 7).unwrap(), 6);
        assert_eq!(locality_singleton(7, 4, 3).unwrap(), 3);
    }

    #[test]
    fn a2_examples() {
        assert_eq!(a2_exact(6, 1).unwrap(), 64);
        assert_eq!(a2_exact(4, 3).unwrap(), 2);
        assert_eq!(a2_exact(5, 3).unwrap(), 4);
        assert_eq!(a2_exact(0, 3).unwrap(), 1);
        assert_eq!(a2_exact(-2, 3).unwrap(), 1);
        assert_eq!(a2_exact(2, 3).unwrap(), 1);
        // known values
        assert_eq!(a2_exact(6, 3).unwrap(), 8);
        assert_eq!(a2_exact(7, 3).unwrap(), 16);
        assert_eq!(a2_exact(8, 4).unwrap(), 16);
        assert_eq!(a2_exact(8, 5).unwrap(), 4);
    }

    #[test]
    fn a2_matches_subset_search() {
        for n in 1..=4 {
            for d in 1..=n + 1 {
                assert_eq!(a2_exact(n as i64, d).unwrap(), brute_a2(n, d), "A2({n},{d})");
            }
        }
    }

    #[test]
    fn a2_monotone_and_doubling() {
        for n in 1..=7i64 {
            for d in 1..=8 {
                let a = a2_exact(n, d).unwrap();
                assert!(a >= a2_exact(n, d + 1).unwrap());
                assert!(a <= 2 * a2_exact(n - 1, d).unwrap());
            }
        }
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_max_weight(4, 2, 1).unwrap(), 4);
        assert_eq!(johnson_upper(4, 2, 1), Some(4.0));
        assert_eq!(b_max_weight(6, 3, 6).unwrap(), a2_exact(6, 3).unwrap());
        assert_eq!(b_max_weight(7, 3, 3).unwrap(), 8); // 0 plus the seven weight-3 Hamming words
        for n in 2..=7 {
            for d in 1..=n {
                for t in 0..=n {
                    let b = b_max_weight(n, d, t).unwrap();
                    if let Some(j) = johnson_upper(n, d, t) {
                        assert!(b as f64 <= j + 1e-9, "B({n},{d},{t}) = {b} > {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn ut_examples() {
        assert!(ut_feasible(4, 4, 2, 0, 1).unwrap());
        assert!(!ut_feasible(4, 4, 2, 1, 1).unwrap());
        assert!(ut_feasible(7, 4, 3, 1, 3).unwrap());
    }

    #[test]
    fn cm_examples() {
        assert_eq!(cm_bound(8, 2, 3).unwrap(), 4.0);
        // d = 1: n - ⌊n/(r+1)⌋, which is n - ⌈n/(r+1)⌉ when r+1 divides n
        assert_eq!(cm_bound(9, 2, 1).unwrap(), 6.0);
        assert_eq!(cm_bound(8, 2, 1).unwrap(), 6.0);
        assert_eq!(cm_bound(7, 3, 1).unwrap(), 6.0);
        assert!(cm_bound(6, 6, 2).unwrap() >= 5.0);
    }

    #[test]
    fn threshold_examples() {
        let t = linear_bec_threshold(2048.0, 1024.0, 0.5, 0.1).unwrap().value().unwrap();
        let oracle = (256.0 / 10f64.ln()).ln() / (2.0 * 2f64.ln());
        assert!((t - oracle).abs() < 1e-12 && (t - 3.40).abs() < 0.005);
        // k² = 2n ln(1/ε) with ε = e^{-1}, n = 8, k = 4
        let b = linear_bec_threshold(8.0, 4.0, 0.3, (-1f64).exp()).unwrap().value().unwrap();
        assert!(b.abs() < 1e-12);
        assert_eq!(linear_bec_threshold(100.0, 2.0, 0.3, 0.1).unwrap(), Threshold::NoPositiveThreshold);
        let lo = linear_bec_threshold(2048.0, 1024.0, 0.3, 0.1).unwrap().value().unwrap();
        let hi = linear_bec_threshold(2048.0, 1024.0, 0.9, 0.1).unwrap().value().unwrap();
        assert!(lo < hi);

        let g = general_bsc_threshold(1024.0, 0.25, 0.1).unwrap().value().unwrap();
        assert!((g - 9.0 / 3f64.log2()).abs() < 1e-12 && (g - 5.678).abs() < 1e-3);
        assert_eq!(general_bsc_threshold(1024.0, 0.5, 0.1).unwrap(), Threshold::Unbounded);
        assert!(general_bsc_threshold(1024.0, 0.25, 0.999_999).unwrap().value().unwrap() < 1e-4);

        assert_eq!(lambda_p(0.5).unwrap(), 0.0);
        assert!((lambda_p(0.25).unwrap() - (-0.5 * 0.75f64.log2())).abs() < 1e-12);
        assert!((lambda_p(0.25).unwrap() - 0.2075).abs() < 1e-4);
        assert!((lambda_p(0.1).unwrap() - lambda_p(0.9).unwrap()).abs() < 1e-12);

        assert_eq!(locality_threshold(0.5, 1.0 / 24.0).unwrap(), 1.5);
        assert_eq!(locality_threshold(0.5, 1.0 / 3.0).unwrap(), 0.0);
        assert!(locality_threshold(0.2, 0.05).unwrap() > locality_threshold(0.6, 0.05).unwrap());
    }

    #[test]
    fn ldgm_converse_examples() {
        let c = ldgm_converse(4096.0, 64.0, 8.0, 0.25, 0.2).unwrap();
        let oracle = 1.0 - 64.0 * 4096f64.powf(0.4) / 4088.0;
        assert!((c.ensemble_fraction_lb - oracle).abs() < 1e-12);
        let half = ldgm_converse(4096.0, 64.0, 4.0, 0.5, 0.2).unwrap();
        assert!((half.error_prob_raw - 4096f64.powf(0.2) / 2.0).abs() < 1e-9);
        assert_eq!(half.error_prob_lb, 1.0);
        assert_eq!(half.weight_threshold, Threshold::Unbounded);
        let c = ldgm_converse(4096.0, 64.0, 8.0, 0.25, 0.4).unwrap();
        let w = c.weight_threshold.value().unwrap();
        assert!((w - 0.4 / lambda_p(0.25).unwrap() * 12.0).abs() < 1e-12 && (w - 23.1).abs() < 0.05);
        assert!(ldgm_converse(4096.0, 64.0, 8.0, 0.25, 0.5).is_err());
    }

    #[test]
    fn fig1_examples() {
        let grid = linear_grid(0.05, 0.45, 9).unwrap();
        assert_eq!(grid.len(), 9);
        let rows = fig1_curves(&grid).unwrap();
        assert!(rows.iter().all(|r| r.coeff_thm5 < r.coeff_thm6));
        let q = converse_coefficients(0.25).unwrap();
        assert!((q.coeff_thm5 - 1.0 / (2.0 * 4f64.ln())).abs() < 1e-12);
        assert!((q.coeff_thm6 - 1.0 / 3f64.ln()).abs() < 1e-12);
        assert!((q.coeff_thm8 - 1.0 / (-(0.75f64.ln()))).abs() < 1e-12);
        let half = converse_coefficients(0.5).unwrap();
        assert!(half.coeff_thm6.is_infinite() && half.flags == "diverges");
        assert!(converse_coefficients(0.0).is_err());
        assert_eq!(fig1_csv(&rows).lines().count(), 10);
    }

    #[test]
    #[ignore = "about a minute of clique search"]
    fn a2_eight_three() {
        assert_eq!(a2_exact(8, 3).unwrap(), 20);
    }

    proptest! {
        #[test]
        fn lambda_symmetric_and_nonnegative(p in 0.001f64..0.999) {
            let a = lambda_p(p).unwrap();
            prop_assert!(a >= -1e-15);
            prop_assert!((a - lambda_p(1.0 - p).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn thm5_below_thm6_coefficient(p in 0.001f64..0.4999) {
            let c = converse_coefficients(p).unwrap();
            prop_assert!(c.coeff_thm5 < c.coeff_thm6);
        }

        #[test]
        fn griesmer_single_row(n in 1usize..100, d in 1usize..100) {
            prop_assert_eq!(griesmer_slack(n, 1, d), n as i64 - d as i64);
        }
    }
}
