//! Monte Carlo experiments. Trial `i` of an experiment seeded with `s` always
//! draws from substream `(s, i)`, and results are aggregated in trial order, so
//! reports do not depend on the number of worker threads.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlin::{rank_of_words, BitMatrix, BitVec};
use crate::bound::{azuma_tail, ldgm_converse, lambda_p, projection_mean_bound, LdgmConverse};
use crate::channel::{ChannelModel, ReceivedWord};
use crate::codebook::Budget;
use crate::construct::{Encoder, EnsembleSpec, LinearCode};
use crate::decode::{bec_ml_decode, bsc_ml_decode, repair_plans, DecodeStatus};
use crate::error::{invalid, Error, Result};
use crate::rng::{self, derive_seed, substream};
use crate::stats::{wilson_interval, EventFrequency, Z95};

/// Fans trials out over a rayon pool.
#[derive(Clone, Default)]
pub struct Runner {
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Runner {
    /// `None` uses the global pool.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = match threads {
            None => None,
            Some(0) => return Err(invalid("thread count must be positive")),
            Some(n) => Some(Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| invalid(format!("thread pool: {e}")))?,
            )),
        };
        Ok(Self { pool })
    }

    /// `f(0), ..., f(count - 1)` in index order.
    pub fn map<T, F>(&self, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let run = || (0..count).into_par_iter().map(&f).collect();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }

    fn try_map<T, F>(&self, count: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send,
    {
        self.map(count, f).into_iter().collect()
    }
}

/// Failure counts of a decoding experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// BEC: fraction of trials where several messages remained consistent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambiguity_rate: Option<f64>,
    /// BEC: success rate of a decoder that picks uniformly among the
    /// consistent messages instead of declaring failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pick_success: Option<f64>,
    /// BSC: fraction of trials where the nearest codeword was not unique.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_rate: Option<f64>,
}

impl TrialReport {
    pub fn from_counts(failures: u64, trials: u64, seed: u64) -> Self {
        let f = EventFrequency::new(failures, trials, seed);
        Self {
            trials,
            failures,
            estimate: f.estimate,
            ci_low: f.ci_low,
            ci_high: f.ci_high,
            seed,
            ambiguity_rate: None,
            random_pick_success: None,
            tie_rate: None,
        }
    }

    pub fn standard_error(&self) -> f64 {
        crate::stats::standard_error(self.estimate, self.trials)
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    Ok(())
}

/// Uniform `k`-bit message.
pub fn random_message<R: Rng + ?Sized>(rng: &mut R, k: usize) -> BitVec {
    BitVec::from_bools((0..k).map(|_| rng.gen::<bool>()))
}

struct TrialOutcome {
    failed: bool,
    ambiguous: bool,
    tie: bool,
    pick: f64,
}

fn one_trial<R: Rng + ?Sized>(
    encoder: &dyn Encoder,
    channel: &ChannelModel,
    budget: &Budget,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let message = random_message(rng, encoder.message_len());
    let word = encoder.encode(&message);
    let received = channel.transmit(&word, rng)?;
    let out = if channel.is_erasure() {
        bec_ml_decode(encoder, &received, budget)?
    } else {
        bsc_ml_decode(encoder, received.bits(), budget)?
    };
    let failed = !out.recovers(&message);
    Ok(TrialOutcome {
        failed,
        ambiguous: out.status == DecodeStatus::Ambiguous,
        tie: out.tie_broken,
        pick: if out.is_decoded() { f64::from(u8::from(!failed)) } else { out.random_pick_success },
    })
}

fn summarize(outcomes: &[TrialOutcome], seed: u64, erasure: bool) -> TrialReport {
    let trials = outcomes.len() as u64;
    let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
    let mut r = TrialReport::from_counts(failures, trials, seed);
    let rate = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / trials as f64;
    if erasure {
        r.ambiguity_rate = Some(rate(&|o| o.ambiguous));
        r.random_pick_success = Some(outcomes.iter().map(|o| o.pick).sum::<f64>() / trials as f64);
    } else {
        r.tie_rate = Some(rate(&|o| o.tie));
    }
    r
}

/// Per trial: uniform message, encode, transmit, ML decode, compare. Decoding
/// failures (including BEC ambiguity) count as errors.
pub fn run_trials(
    encoder: &dyn Encoder,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    runner: &Runner,
    budget: &Budget,
) -> Result<TrialReport> {
    check_trials(trials)?;
    channel.validate()?;
    let outcomes = runner.try_map(trials, |i| one_trial(encoder, channel, budget, &mut substream(seed, i)))?;
    Ok(summarize(&outcomes, seed, channel.is_erasure()))
}

/// Rank collapse of an LDGM generator on the BEC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCollapseReport {
    /// Failure = `rank(G_I) < k`.
    pub rank_deficient: TrialReport,
    pub full_rank: EventFrequency,
    pub mean_zero_rows: f64,
    pub zero_rows_std_error: f64,
    /// `k·p^t`, the expected number of fully erased rows.
    pub expected_zero_rows: f64,
    pub generator_rank: usize,
}

/// Draws one generator from `spec`, then for each trial erases columns with
/// probability `p` and records how many rows vanish and whether `G_I` keeps
/// rank `k`.
pub fn rank_collapse_experiment(
    spec: &EnsembleSpec,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<RankCollapseReport> {
    check_trials(trials)?;
    let channel = ChannelModel::bec(p)?;
    let sample = crate::construct::sample_ldgm(spec)?;
    let g = &sample.generator;
    let (k, n) = (g.rows(), g.cols());
    let zero = BitVec::zeros(n);
    let per_trial = runner.try_map(trials, |i| -> Result<(usize, bool)> {
        let erased = channel.transmit(&zero, &mut substream(seed, i))?.erasure_mask().clone();
        let mut masked: Vec<Vec<u64>> = (0..k)
            .map(|r| g.row_words(r).iter().zip(erased.words()).map(|(a, e)| a & !e).collect())
            .collect();
        let zero_rows = masked.iter().filter(|row| row.iter().all(|&w| w == 0)).count();
        // any vanished row already forces rank < k
        let full = zero_rows == 0 && rank_of_words(&mut masked, n) == k;
        Ok((zero_rows, full))
    })?;
    let counts: Vec<f64> = per_trial.iter().map(|&(z, _)| z as f64).collect();
    let (mean, var) = crate::stats::mean_variance(&counts);
    let full = per_trial.iter().filter(|&&(_, f)| f).count() as u64;
    Ok(RankCollapseReport {
        rank_deficient: TrialReport::from_counts(trials - full, trials, seed),
        full_rank: EventFrequency::new(full, trials, seed),
        mean_zero_rows: mean,
        zero_rows_std_error: (var / trials as f64).sqrt(),
        expected_zero_rows: k as f64 * p.powi(spec.t as i32),
        generator_rank: sample.rank,
    })
}

/// `log₂` of the number of distinct codeword restrictions to `unerased`.
pub fn projection_log2(encoder: &dyn Encoder, unerased: &[usize], budget: &Budget) -> Result<f64> {
    if unerased.is_empty() {
        return Ok(0.0);
    }
    if let Some(g) = encoder.generator() {
        return Ok(g.select_columns(unerased)?.rank() as f64);
    }
    Ok((projection_count(encoder, unerased, budget)? as f64).log2())
}

/// Number of distinct codeword restrictions to `unerased`.
pub fn projection_count(encoder: &dyn Encoder, unerased: &[usize], budget: &Budget) -> Result<u64> {
    if unerased.is_empty() {
        return Ok(1);
    }
    if let Some(g) = encoder.generator() {
        let rank = g.select_columns(unerased)?.rank();
        if rank >= 64 {
            return Err(Error::BudgetExceeded(format!("2^{rank} projections do not fit a count")));
        }
        return Ok(1 << rank);
    }
    let k = encoder.message_len();
    budget.check_messages(k)?;
    let distinct: HashSet<BitVec> = (0..1u64 << k).map(|v| encoder.encode_index(v).select(unerased)).collect();
    Ok(distinct.len() as u64)
}

/// A coordinate ordering and the positions `T` whose whole repair group
/// precedes them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOrdering {
    pub permutation: Vec<usize>,
    pub recoverable: Vec<usize>,
    /// Largest repair group size used.
    pub locality: usize,
    pub attempts: u64,
}

/// Best of `attempts` uniformly random orderings by `|T|`.
pub fn recovery_ordering(code: &LinearCode, attempts: u64, seed: u64, budget: &Budget) -> Result<RecoveryOrdering> {
    if attempts == 0 {
        return Err(invalid("need at least one attempt"));
    }
    let n = code.n();
    let plans = repair_plans(code, budget)
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or(Error::NotRepairable { position: i }))
        .collect::<Result<Vec<_>>>()?;
    let locality = plans.iter().map(|p| p.locality()).max().unwrap_or(0);
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for a in 0..attempts {
        let mut rng = substream(seed, a);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng::index(&mut rng, i + 1));
        }
        let mut pos = vec![0; n];
        for (slot, &c) in perm.iter().enumerate() {
            pos[c] = slot;
        }
        let t: Vec<usize> = (0..n).filter(|&i| plans[i].query.iter().all(|&q| pos[q] < pos[i])).collect();
        if best.as_ref().is_none_or(|(_, bt)| t.len() > bt.len()) {
            best = Some((perm, t));
        }
    }
    let (permutation, recoverable) = best.expect("at least one attempt");
    Ok(RecoveryOrdering { permutation, recoverable, locality, attempts })
}

/// Distribution of `log₂ S` over random erasure patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionStats {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub eps: f64,
    pub locality: usize,
    pub samples: Vec<f64>,
    pub mean: f64,
    pub max: f64,
    /// Per draw, `|Ī| - u` where `u` counts positions of `T` that are unerased
    /// together with their repair group.
    pub draw_bounds: Vec<f64>,
    /// Draws with `log₂ S` above their own bound (always 0 for a sound bound).
    pub draw_bound_violations: u64,
    /// `n(1-p) - (1-p)^r n/(r+1)`.
    pub mean_bound: f64,
    /// `mean_bound + εn`.
    pub threshold: f64,
    pub exceedance: EventFrequency,
    /// `exp(-ε²n/2)`.
    pub azuma_tail: f64,
    pub ordering_size: usize,
}

pub fn projection_experiment(
    code: &LinearCode,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
    budget: &Budget,
) -> Result<ProjectionStats> {
    check_trials(trials)?;
    let channel = ChannelModel::bec(p)?;
    let n = code.n();
    let ordering = recovery_ordering(code, 64, derive_seed(seed, "ordering"), budget)?;
    let plans = repair_plans(code, budget);
    let groups: Vec<(usize, Vec<usize>)> = ordering
        .recoverable
        .iter()
        .map(|&i| (i, plans[i].as_ref().expect("ordering found plans").query.clone()))
        .collect();
    let zero = BitVec::zeros(n);
    let draws = runner.try_map(trials, |i| -> Result<(f64, f64)> {
        let received = channel.transmit(&zero, &mut substream(seed, i))?;
        let erased = received.erasure_mask();
        let unerased = received.unerased_set();
        let log_s = projection_log2(code, &unerased, budget)?;
        let u = groups
            .iter()
            .filter(|(i, q)| !erased.get(*i) && q.iter().all(|&j| !erased.get(j)))
            .count();
        Ok((log_s, (unerased.len() - u) as f64))
    })?;
    let samples: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let draw_bounds: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let r = ordering.locality as f64;
    let mean_bound = projection_mean_bound(n as f64, p, r);
    let threshold = mean_bound + eps * n as f64;
    let exceed = samples.iter().filter(|&&s| s > threshold).count() as u64;
    Ok(ProjectionStats {
        n,
        k: code.k(),
        p,
        eps,
        locality: ordering.locality,
        mean: samples.iter().sum::<f64>() / trials as f64,
        max: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        draw_bound_violations: draws.iter().filter(|d| d.0 > d.1 + 1e-9).count() as u64,
        samples,
        draw_bounds,
        mean_bound,
        threshold,
        exceedance: EventFrequency::new(exceed, trials, seed),
        azuma_tail: azuma_tail(n as f64, eps),
        ordering_size: ordering.recoverable.len(),
    })
}

/// Frequency with which `count` independent uniform weight-`t` vectors of
/// length `n` have pairwise disjoint supports.
pub fn disjoint_support_stats(
    n: usize,
    t: usize,
    count: usize,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<EventFrequency> {
    check_trials(trials)?;
    if t == 0 || t > n || count == 0 {
        return Err(invalid("need 1 <= t <= n and count >= 1"));
    }
    let hits = runner.map(trials, |i| {
        let mut rng = substream(seed, i);
        let mut used = BitVec::zeros(n);
        let mut disjoint = true;
        for _ in 0..count {
            for c in rng::subset(&mut rng, n, t) {
                disjoint &= !used.get(c);
                used.set(c, true);
            }
        }
        disjoint
    });
    Ok(EventFrequency::new(hits.iter().filter(|&&h| h).count() as u64, trials, seed))
}

/// The zero word sent over BSC(p) against a fixed weight-`t` competitor `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionStats {
    /// `wt(y) > d(x, y)`: the competitor is strictly closer.
    pub strict: EventFrequency,
    /// `wt(y) >= d(x, y)`: closer or tied.
    pub with_ties: EventFrequency,
    /// `2^{-λ_p t} / √t`.
    pub tail_bound: f64,
}

pub fn confusion_experiment(n: usize, t: usize, p: f64, trials: u64, seed: u64, runner: &Runner) -> Result<ConfusionStats> {
    check_trials(trials)?;
    if t == 0 || t > n {
        return Err(invalid("need 1 <= t <= n"));
    }
    let channel = ChannelModel::bsc(p)?;
    let zero = BitVec::zeros(n);
    let pairs = runner.try_map(trials, |i| -> Result<(bool, bool)> {
        let mut rng = substream(seed, i);
        let mut x = BitVec::zeros(n);
        for c in rng::subset(&mut rng, n, t) {
            x.set(c, true);
        }
        let y = channel.transmit(&zero, &mut rng)?;
        let (w, d) = (y.bits().weight(), y.bits().distance(&x));
        Ok((w > d, w >= d))
    })?;
    let strict = pairs.iter().filter(|p| p.0).count() as u64;
    let ties = pairs.iter().filter(|p| p.1).count() as u64;
    Ok(ConfusionStats {
        strict: EventFrequency::new(strict, trials, seed),
        with_ties: EventFrequency::new(ties, trials, seed),
        tail_bound: (-lambda_p(p)? * t as f64).exp2() / (t as f64).sqrt(),
    })
}

/// Parameters of the LDGM converse experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdgmConverseParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub p: f64,
    pub alpha: f64,
    pub matrices: u64,
    /// BSC trials per matrix; 0 skips decoding.
    pub trials_per_matrix: u64,
}

/// Largest `k` decoded exhaustively in the converse experiment.
pub const CONVERSE_MAX_K: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LdgmConverseReport {
    pub params: LdgmConverseParams,
    /// `⌈n^α⌉` rows checked for pairwise disjoint supports.
    pub rows_checked: usize,
    /// Fraction of matrices whose first `rows_checked` rows are disjoint.
    pub disjoint_fraction: EventFrequency,
    /// ML error pooled over matrices with the disjoint rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ml_error: Option<TrialReport>,
    /// ML error pooled over all matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ml_error_all: Option<TrialReport>,
    pub predictions: LdgmConverse,
    /// `1 - (1 - 2^{-λ_p t}/√t)^{n^α}`, the union form before approximation.
    pub union_form: f64,
}

/// Matrix `j` comes from substream `j` of a seed derived from `seed`; its
/// decoding trials use substreams `j·trials_per_matrix + i` of `seed`.
pub fn ldgm_converse_experiment(
    params: &LdgmConverseParams,
    seed: u64,
    runner: &Runner,
    budget: &Budget,
) -> Result<LdgmConverseReport> {
    let LdgmConverseParams { n, k, t, p, alpha, matrices, trials_per_matrix } = *params;
    check_trials(matrices)?;
    let predictions = ldgm_converse(n as f64, k as f64, t as f64, p, alpha)?;
    let rows_checked = ((n as f64).powf(alpha).ceil() as usize).min(k);
    let decode = trials_per_matrix > 0;
    if decode && k > CONVERSE_MAX_K {
        return Err(Error::BudgetExceeded(format!("exhaustive ML needs k <= {CONVERSE_MAX_K}, got {k}")));
    }
    let channel = ChannelModel::bsc(p)?;
    let spec = EnsembleSpec::fixed(n, k, t, 0);
    let matrix_seed = derive_seed(seed, "matrix");
    let per_matrix = runner.try_map(matrices, |j| -> Result<(bool, u64)> {
        let g = spec.draw(&mut substream(matrix_seed, j))?;
        let disjoint = first_rows_disjoint(&g, rows_checked);
        let mut failures = 0;
        for i in 0..trials_per_matrix {
            let mut rng = substream(seed, j * trials_per_matrix + i);
            failures += u64::from(one_trial(&g, &channel, budget, &mut rng)?.failed);
        }
        Ok((disjoint, failures))
    })?;
    let good: Vec<&(bool, u64)> = per_matrix.iter().filter(|m| m.0).collect();
    let (ml_error, ml_error_all) = if decode {
        let pooled = |ms: &[&(bool, u64)]| {
            TrialReport::from_counts(ms.iter().map(|m| m.1).sum(), ms.len() as u64 * trials_per_matrix, seed)
        };
        let all: Vec<&(bool, u64)> = per_matrix.iter().collect();
        ((!good.is_empty()).then(|| pooled(&good)), Some(pooled(&all)))
    } else {
        (None, None)
    };
    let q = (-lambda_p(p)? * t as f64).exp2() / (t as f64).sqrt();
    Ok(LdgmConverseReport {
        params: *params,
        rows_checked,
        disjoint_fraction: EventFrequency::new(good.len() as u64, matrices, seed),
        ml_error,
        ml_error_all,
        predictions,
        union_form: 1.0 - (1.0 - q).powf((n as f64).powf(alpha)),
    })
}

fn first_rows_disjoint(g: &BitMatrix, rows: usize) -> bool {
    let mut used = vec![0u64; g.row_words(0).len()];
    for r in 0..rows {
        for (u, w) in used.iter_mut().zip(g.row_words(r)) {
            if *u & w != 0 {
                return false;
            }
            *u |= w;
        }
    }
    true
}

/// One row of [`concat_error_decay`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatRow {
    pub copies: usize,
    pub overall: TrialReport,
    /// `1 - (1 - q̂)^copies` and the same map applied to the ends of q̂'s interval.
    pub predicted: f64,
    pub predicted_low: f64,
    pub predicted_high: f64,
    /// `copies · q̂`.
    pub union_bound: f64,
    /// The predicted interval meets the measured interval.
    pub consistent: bool,
    /// Measured lower end does not exceed `copies` times the upper end of q̂.
    pub below_union: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcatDecayReport {
    pub base: TrialReport,
    pub rows: Vec<ConcatRow>,
}

/// Measures the block error q̂ of `base`, then the error of `copies` blocks side
/// by side (generator `I_copies ⊗ G`) decoded block by block, which is exact ML
/// for a block-diagonal generator. A trial fails when any block fails.
pub fn concat_error_decay(
    base: &LinearCode,
    copies_list: &[usize],
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    runner: &Runner,
    budget: &Budget,
) -> Result<ConcatDecayReport> {
    check_trials(trials)?;
    if matches!(channel, ChannelModel::FixedWeight { .. }) {
        return Err(invalid("block errors are independent only on the BEC and BSC"));
    }
    let base_report = concat_trials(base, 1, channel, trials, derive_seed(seed, "base"), runner, budget)?;
    let q = base_report.estimate;
    let rows = copies_list
        .iter()
        .map(|&c| {
            if c == 0 {
                return Err(invalid("copies must be positive"));
            }
            let overall = concat_trials(base, c, channel, trials, derive_seed(seed, &format!("copies-{c}")), runner, budget)?;
            let lift = |x: f64| 1.0 - (1.0 - x).powi(c as i32);
            let (predicted_low, predicted_high) = (lift(base_report.ci_low), lift(base_report.ci_high));
            Ok(ConcatRow {
                copies: c,
                predicted: lift(q),
                predicted_low,
                predicted_high,
                union_bound: c as f64 * q,
                consistent: predicted_low <= overall.ci_high && overall.ci_low <= predicted_high,
                below_union: overall.ci_low <= c as f64 * base_report.ci_high,
                overall,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcatDecayReport { base: base_report, rows })
}

fn concat_trials(
    base: &LinearCode,
    copies: usize,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    runner: &Runner,
    budget: &Budget,
) -> Result<TrialReport> {
    let (m, k) = (base.n(), base.k());
    let outcomes = runner.try_map(trials, |i| -> Result<bool> {
        let mut rng = substream(seed, i);
        let message = random_message(&mut rng, copies * k);
        let blocks: Vec<BitVec> = (0..copies)
            .map(|b| base.encode(&message.select(&(b * k..(b + 1) * k).collect::<Vec<_>>())))
            .collect();
        let received = channel.transmit(&BitVec::concat(&blocks), &mut rng)?;
        let mut failed = false;
        for b in 0..copies {
            let cols: Vec<usize> = (b * m..(b + 1) * m).collect();
            let erased: Vec<usize> = (0..m).filter(|&j| received.erasure_mask().get(b * m + j)).collect();
            let block = ReceivedWord::with_erasures(&received.bits().select(&cols), &erased);
            let sent = message.select(&(b * k..(b + 1) * k).collect::<Vec<_>>());
            let out = if channel.is_erasure() {
                bec_ml_decode(base, &block, budget)?
            } else {
                bsc_ml_decode(base, block.bits(), budget)?
            };
            failed |= !out.recovers(&sent);
        }
        Ok(failed)
    })?;
    let failures = outcomes.iter().filter(|&&f| f).count() as u64;
    Ok(TrialReport::from_counts(failures, trials, seed))
}

/// Wilson interval with the crate's 95% quantile.
pub fn wilson95(events: u64, trials: u64) -> (f64, f64) {
    wilson_interval(events, trials, Z95)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        concatenated, full_space, hamming, positional_code, repetition, sample_ldgm, single_parity_check,
        HammingForm,
    };

    fn runner() -> Runner {
        Runner::default()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn noiseless_channels_never_fail() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let r = run_trials(&h, &ChannelModel::bec(0.0).unwrap(), 200, 1, &runner(), &b()).unwrap();
        assert_eq!((r.failures, r.estimate), (0, 0.0));
        let r = run_trials(&h, &ChannelModel::bsc(0.0).unwrap(), 200, 1, &runner(), &b()).unwrap();
        assert_eq!(r.failures, 0);
        assert!(r.ci_low <= r.estimate && r.estimate <= r.ci_high);
    }

    #[test]
    fn hamming_bsc_word_error_matches_perfect_code_formula() {
        let h = hamming(3, HammingForm::Systematic).unwrap();
        let r = run_trials(&h, &ChannelModel::bsc(0.1).unwrap(), 20_000, 3, &runner(), &b()).unwrap();
        // perfect single-error-correcting code: errors iff two or more flips
        let exact = 1.0 - 0.9f64.powi(7) - 7.0 * 0.1 * 0.9f64.powi(6);
        let (lo, hi) = crate::stats::wilson_interval(r.failures, r.trials, 3.5);
        assert!(lo <= exact && exact <= hi, "{exact} outside [{lo}, {hi}]");
    }

    #[test]
    fn positional_bec_error_below_erasure_of_all_ones() {
        let pc = positional_code(3, 4).unwrap();
        let r = run_trials(&pc, &ChannelModel::bec(0.5).unwrap(), 20_000, 9, &runner(), &b()).unwrap();
        assert!(r.estimate <= 0.0625 + 3.0 * r.standard_error().max(1e-3));
    }

    #[test]
    fn bec_failure_is_rank_deficiency_every_trial() {
        let h = hamming(4, HammingForm::SparseTriples).unwrap();
        let ch = ChannelModel::bec(0.3).unwrap();
        for i in 0..500 {
            let mut rng = substream(21, i);
            let m = random_message(&mut rng, h.k());
            let rec = ch.transmit(&h.encode(&m), &mut rng).unwrap();
            let out = bec_ml_decode(&h, &rec, &b()).unwrap();
            let unerased = rec.unerased_set();
            let full = !unerased.is_empty() && h.generator_matrix().select_columns(&unerased).unwrap().rank() == h.k();
            assert_eq!(out.recovers(&m), full);
            assert_eq!(out.status == DecodeStatus::Ambiguous, !full);
        }
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let ch = ChannelModel::bsc(0.2).unwrap();
        let one = run_trials(&h, &ch, 3000, 5, &Runner::new(Some(1)).unwrap(), &b()).unwrap();
        let many = run_trials(&h, &ch, 3000, 5, &Runner::new(Some(8)).unwrap(), &b()).unwrap();
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&many).unwrap());
        assert!(Runner::new(Some(0)).is_err());
    }

    #[test]
    fn rank_collapse_all_ones_rows() {
        let spec = EnsembleSpec::fixed(16, 4, 16, 3);
        let r = rank_collapse_experiment(&spec, 0.3, 300, 4, &runner()).unwrap();
        // a row vanishes only if all 16 columns are erased: 0.3^16
        assert_eq!(r.mean_zero_rows, 0.0);
        assert_eq!(r.generator_rank, 1);
        assert_eq!(r.full_rank.events, 0);
    }

    #[test]
    fn rank_collapse_zero_rows_match_expectation() {
        let spec = EnsembleSpec::fixed(256, 128, 3, 3);
        let r = rank_collapse_experiment(&spec, 0.5, 400, 8, &runner()).unwrap();
        assert_eq!(r.expected_zero_rows, 16.0);
        assert!((r.mean_zero_rows - 16.0).abs() <= 4.0 * r.zero_rows_std_error);
        assert!(r.full_rank.estimate < 0.01);
    }

    #[test]
    fn projection_examples() {
        let rep = repetition(3).unwrap();
        assert_eq!(projection_count(&rep, &[], &b()).unwrap(), 1);
        assert_eq!(projection_count(&rep, &[0, 1], &b()).unwrap(), 2);
        let f = full_space(2).unwrap();
        assert_eq!(projection_count(&f, &[0], &b()).unwrap(), 2);
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        assert_eq!(projection_count(&h, &(0..7).collect::<Vec<_>>(), &b()).unwrap(), 16);
        // nonlinear path agrees with direct enumeration
        let p = positional_code(2, 1).unwrap();
        assert_eq!(projection_count(&p, &[0, 1], &b()).unwrap(), 3);
    }

    #[test]
    fn projection_experiment_extremes() {
        let c = concatenated(&single_parity_check(3).unwrap(), 4).unwrap();
        let s = projection_experiment(&c, 0.0, 0.05, 20, 1, &runner(), &b()).unwrap();
        assert!(s.samples.iter().all(|&x| x == 8.0));
        let s = projection_experiment(&c, 1.0, 0.05, 20, 1, &runner(), &b()).unwrap();
        assert!(s.samples.iter().all(|&x| x == 0.0));
        let s = projection_experiment(&c, 0.5, 0.05, 500, 1, &runner(), &b()).unwrap();
        assert_eq!(s.draw_bound_violations, 0);
        assert!(s.samples.iter().all(|&x| (0.0..=8.0).contains(&x)));
        assert_eq!(s.locality, 2);
    }

    #[test]
    fn recovery_ordering_examples() {
        let spc = single_parity_check(3).unwrap();
        for seed in 0..10 {
            assert!(!recovery_ordering(&spc, 1, seed, &b()).unwrap().recoverable.is_empty());
        }
        let c = concatenated(&spc, 5).unwrap();
        assert!(recovery_ordering(&c, 1, 3, &b()).unwrap().recoverable.len() >= 5);
        let id = full_space(3).unwrap();
        assert_eq!(recovery_ordering(&id, 4, 0, &b()), Err(Error::NotRepairable { position: 0 }));
    }

    #[test]
    fn disjoint_support_examples() {
        let f = disjoint_support_stats(50, 1, 2, 20_000, 2, &runner()).unwrap();
        let exact = 1.0 - 1.0 / 50.0;
        assert!(crate::stats::wilson_interval(f.events, f.trials, 3.5).0 <= exact);
        assert!(crate::stats::wilson_interval(f.events, f.trials, 3.5).1 >= exact);
        assert_eq!(disjoint_support_stats(10, 4, 1, 50, 2, &runner()).unwrap().events, 50);
        assert_eq!(disjoint_support_stats(10, 4, 3, 50, 2, &runner()).unwrap().events, 0);
    }

    #[test]
    fn confusion_matches_binomial_tails() {
        let s = confusion_experiment(32, 8, 0.25, 20_000, 6, &runner()).unwrap();
        let pmf = |i: i32| {
            let c = (1..=8).product::<u64>() as f64
                / ((1..=i as u64).product::<u64>() as f64 * (1..=(8 - i) as u64).product::<u64>() as f64);
            c * 0.25f64.powi(i) * 0.75f64.powi(8 - i)
        };
        let strict: f64 = (5..=8).map(pmf).sum();
        let ties: f64 = (4..=8).map(pmf).sum();
        for (f, exact) in [(&s.strict, strict), (&s.with_ties, ties)] {
            let (lo, hi) = crate::stats::wilson_interval(f.events, f.trials, 3.5);
            assert!(lo <= exact && exact <= hi, "{exact} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn converse_experiment_shapes() {
        let params = LdgmConverseParams { n: 64, k: 8, t: 3, p: 0.1, alpha: 0.3, matrices: 6, trials_per_matrix: 50 };
        let r = ldgm_converse_experiment(&params, 4, &runner(), &b()).unwrap();
        assert_eq!(r.rows_checked, 4);
        assert_eq!(r.ml_error_all.as_ref().unwrap().trials, 300);
        let big = LdgmConverseParams { k: 20, ..params };
        assert!(ldgm_converse_experiment(&big, 4, &runner(), &b()).is_err());
        let no_decode = LdgmConverseParams { k: 20, trials_per_matrix: 0, ..params };
        assert!(ldgm_converse_experiment(&no_decode, 4, &runner(), &b()).unwrap().ml_error.is_none());
    }

    #[test]
    fn concat_decay_examples() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let clean = concat_error_decay(&h, &[1, 4], &ChannelModel::bsc(0.0).unwrap(), 100, 1, &runner(), &b()).unwrap();
        assert!(clean.rows.iter().all(|r| r.overall.failures == 0));
        let r = concat_error_decay(&h, &[1, 16], &ChannelModel::bsc(0.05).unwrap(), 4000, 2, &runner(), &b()).unwrap();
        assert!(r.rows.iter().all(|row| row.consistent && row.below_union));
        assert!(concat_error_decay(&h, &[2], &ChannelModel::fixed_weight(1), 10, 0, &runner(), &b()).is_err());
    }

    #[test]
    fn blockwise_encoding_matches_concatenated_generator() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let c = concatenated(&h, 3).unwrap();
        let mut rng = substream(1, 1);
        let m = random_message(&mut rng, 12);
        let blocks: Vec<BitVec> = (0..3).map(|b| h.encode(&m.select(&(b * 4..b * 4 + 4).collect::<Vec<_>>()))).collect();
        assert_eq!(BitVec::concat(&blocks), c.encode(&m));
        let _ = sample_ldgm;
    }
}
