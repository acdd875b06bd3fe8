//! JSON experiment configs and their dispatch onto [`crate::lab`].
//!
//! ```json
//! {
//!   "experiment": "trials",
//!   "code_source": {"constructor": "hamming", "params": {"m": 3, "form": "sparse"}},
//!   "channel": {"kind": "bsc", "p": 0.1},
//!   "trials": 10000,
//!   "seed": 7
//! }
//! ```
//!
//! `code_source` is one of `{"inline": <code file>}`, `{"file": "path"}` or a
//! constructor with params. Experiment-specific values go in `params`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::ChannelModel;
use crate::codebook::Budget;
use crate::codefile::StoredCode;
use crate::construct::{
    concatenated, hamming, positional_code, repetition, sample_ldgm, sample_regular_ldpc, single_parity_check,
    EnsembleMode, EnsembleSpec, HammingForm, LinearCode,
};
use crate::error::{invalid, Error, Result};
use crate::lab::{self, Runner};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Encode, transmit, ML decode.
    Trials,
    RankCollapse,
    Projection,
    DisjointSupport,
    Confusion,
    LdgmConverse,
    ConcatDecay,
}

/// A named code constructor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constructor", content = "params", rename_all = "snake_case")]
pub enum Constructor {
    Hamming {
        m: usize,
        #[serde(default = "default_form")]
        form: HammingForm,
    },
    Repetition {
        n: usize,
    },
    SingleParityCheck {
        n: usize,
    },
    Concatenated {
        base: Box<Constructor>,
        copies: usize,
    },
    Ldpc {
        m: usize,
        rate: f64,
        check_degree: usize,
        seed: u64,
    },
    Ldgm {
        n: usize,
        k: usize,
        t: usize,
        seed: u64,
        #[serde(default = "default_mode")]
        mode: EnsembleMode,
    },
    Positional {
        k: usize,
        c: usize,
    },
}

fn default_form() -> HammingForm {
    HammingForm::SparseTriples
}

fn default_mode() -> EnsembleMode {
    EnsembleMode::FixedWeight
}

impl Constructor {
    pub fn build(&self) -> Result<StoredCode> {
        Ok(match self {
            Self::Positional { k, c } => StoredCode::Positional(positional_code(*k, *c)?),
            Self::Ldgm { n, k, t, seed, mode } => {
                let spec = EnsembleSpec { n: *n, k: *k, t: *t, mode: *mode, seed: *seed };
                StoredCode::from_generator(sample_ldgm(&spec)?.generator)?
            }
            linear => StoredCode::Linear(linear.build_linear()?),
        })
    }

    pub fn build_linear(&self) -> Result<LinearCode> {
        match self {
            Self::Hamming { m, form } => hamming(*m, *form),
            Self::Repetition { n } => repetition(*n),
            Self::SingleParityCheck { n } => single_parity_check(*n),
            Self::Concatenated { base, copies } => concatenated(&base.build_linear()?, *copies),
            Self::Ldpc { m, rate, check_degree, seed } => sample_regular_ldpc(*m, *rate, *check_degree, *seed),
            other => match other.build()? {
                StoredCode::Linear(c) => Ok(c),
                _ => Err(Error::InvalidCode("constructor does not give a full-rank linear code".into())),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeSource {
    Inline { inline: Value },
    File { file: PathBuf },
    Constructor(Constructor),
}

impl CodeSource {
    /// Relative file paths resolve against `base_dir`.
    pub fn load(&self, base_dir: &Path) -> Result<StoredCode> {
        match self {
            Self::Inline { inline } => StoredCode::from_json(inline),
            Self::File { file } => {
                let path = base_dir.join(file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
                StoredCode::from_json_str(&text)
            }
            Self::Constructor(c) => c.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_source: Option<CodeSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelModel>,
    pub trials: u64,
    /// Filled in by the caller when absent so outputs always carry it.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleParams {
    n: usize,
    k: usize,
    t: usize,
    /// Defaults to a value derived from the experiment seed.
    #[serde(default)]
    ensemble_seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EpsParams {
    eps: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DisjointParams {
    n: usize,
    t: usize,
    count: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfusionParams {
    n: usize,
    t: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConverseParams {
    n: usize,
    k: usize,
    t: usize,
    alpha: f64,
    matrices: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CopiesParams {
    copies: Vec<usize>,
}

/// Result of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentResult {
    Trials(lab::TrialReport),
    RankCollapse(lab::RankCollapseReport),
    Projection(lab::ProjectionStats),
    Frequency(crate::stats::EventFrequency),
    Confusion(lab::ConfusionStats),
    LdgmConverse(lab::LdgmConverseReport),
    ConcatDecay(lab::ConcatDecayReport),
}

impl ExperimentResult {
    /// Plot-ready CSV for experiments with per-sample or per-row data.
    pub fn csv(&self) -> Option<String> {
        match self {
            Self::Projection(s) => {
                let mut out = String::from("trial,log2_s,draw_bound\n");
                for (i, (s, b)) in s.samples.iter().zip(&s.draw_bounds).enumerate() {
                    out.push_str(&format!("{i},{s},{b}\n"));
                }
                Some(out)
            }
            Self::ConcatDecay(r) => {
                let mut out = String::from("copies,trials,failures,estimate,ci_low,ci_high,predicted,union_bound\n");
                for row in &r.rows {
                    let o = &row.overall;
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        row.copies, o.trials, o.failures, o.estimate, o.ci_low, o.ci_high, row.predicted, row.union_bound
                    ));
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let freq = |f: &crate::stats::EventFrequency| {
            format!("{}/{} = {:.6} [{:.6}, {:.6}]", f.events, f.trials, f.estimate, f.ci_low, f.ci_high)
        };
        match self {
            Self::Trials(r) => format!(
                "failures {}/{} = {:.6} [{:.6}, {:.6}]",
                r.failures, r.trials, r.estimate, r.ci_low, r.ci_high
            ),
            Self::RankCollapse(r) => format!(
                "rank deficient {} ; mean zero rows {:.3} (k p^t = {:.3})",
                freq(&crate::stats::EventFrequency::new(r.rank_deficient.failures, r.rank_deficient.trials, r.rank_deficient.seed)),
                r.mean_zero_rows,
                r.expected_zero_rows
            ),
            Self::Projection(s) => format!(
                "mean log2 S {:.3} (bound {:.3}); exceeding {:.3}: {}",
                s.mean,
                s.mean_bound,
                s.threshold,
                freq(&s.exceedance)
            ),
            Self::Frequency(f) => freq(f),
            Self::Confusion(c) => format!(
                "strict {} ; with ties {} ; bound {:.6}",
                freq(&c.strict),
                freq(&c.with_ties),
                c.tail_bound
            ),
            Self::LdgmConverse(r) => {
                let ml = r
                    .ml_error
                    .as_ref()
                    .map(|m| format!("{:.6} [{:.6}, {:.6}]", m.estimate, m.ci_low, m.ci_high))
                    .unwrap_or_else(|| "not run".into());
                format!(
                    "disjoint rows {} ; ML error {ml} ; predicted >= {:.6}",
                    freq(&r.disjoint_fraction),
                    r.predictions.error_prob_lb
                )
            }
            Self::ConcatDecay(r) => r
                .rows
                .iter()
                .map(|row| format!("copies {}: {:.6} (predicted {:.6})", row.copies, row.overall.estimate, row.predicted))
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

fn params<T: serde::de::DeserializeOwned>(config: &ExperimentConfig) -> Result<T> {
    serde_json::from_value(config.params.clone()).map_err(|e| Error::Format(format!("params: {e}")))
}

fn channel(config: &ExperimentConfig) -> Result<ChannelModel> {
    let ch = config.channel.ok_or_else(|| invalid("experiment needs a channel"))?;
    ch.validate()?;
    Ok(ch)
}

fn channel_p(config: &ExperimentConfig, erasure: bool) -> Result<f64> {
    match (channel(config)?, erasure) {
        (ChannelModel::Bec { p }, true) | (ChannelModel::Bsc { p }, false) => Ok(p),
        _ => Err(invalid(if erasure { "experiment needs a bec channel" } else { "experiment needs a bsc channel" })),
    }
}

fn code(config: &ExperimentConfig, base_dir: &Path) -> Result<StoredCode> {
    config.code_source.as_ref().ok_or_else(|| invalid("experiment needs a code_source"))?.load(base_dir)
}

fn linear(config: &ExperimentConfig, base_dir: &Path) -> Result<LinearCode> {
    match code(config, base_dir)? {
        StoredCode::Linear(c) => Ok(c),
        _ => Err(Error::InvalidCode("experiment needs a full-rank linear code".into())),
    }
}

/// Runs `config`, whose seed must already be resolved.
pub fn run_experiment(config: &ExperimentConfig, base_dir: &Path, runner: &Runner, budget: &Budget) -> Result<ExperimentResult> {
    let seed = config.seed.ok_or_else(|| invalid("experiment seed must be resolved before running"))?;
    let trials = config.trials;
    Ok(match config.experiment {
        ExperimentKind::Trials => {
            let stored = code(config, base_dir)?;
            ExperimentResult::Trials(lab::run_trials(stored.encoder(), &channel(config)?, trials, seed, runner, budget)?)
        }
        ExperimentKind::RankCollapse => {
            let p: EnsembleParams = params(config)?;
            let ensemble_seed = p.ensemble_seed.unwrap_or_else(|| derive_seed(seed, "ensemble"));
            let spec = EnsembleSpec::fixed(p.n, p.k, p.t, ensemble_seed);
            ExperimentResult::RankCollapse(lab::rank_collapse_experiment(
                &spec,
                channel_p(config, true)?,
                trials,
                seed,
                runner,
            )?)
        }
        ExperimentKind::Projection => {
            let p: EpsParams = params(config)?;
            ExperimentResult::Projection(lab::projection_experiment(
                &linear(config, base_dir)?,
                channel_p(config, true)?,
                p.eps,
                trials,
                seed,
                runner,
                budget,
            )?)
        }
        ExperimentKind::DisjointSupport => {
            let p: DisjointParams = params(config)?;
            ExperimentResult::Frequency(lab::disjoint_support_stats(p.n, p.t, p.count, trials, seed, runner)?)
        }
        ExperimentKind::Confusion => {
            let p: ConfusionParams = params(config)?;
            ExperimentResult::Confusion(lab::confusion_experiment(
                p.n,
                p.t,
                channel_p(config, false)?,
                trials,
                seed,
                runner,
            )?)
        }
        ExperimentKind::LdgmConverse => {
            let p: ConverseParams = params(config)?;
            let lp = lab::LdgmConverseParams {
                n: p.n,
                k: p.k,
                t: p.t,
                p: channel_p(config, false)?,
                alpha: p.alpha,
                matrices: p.matrices,
                trials_per_matrix: trials,
            };
            ExperimentResult::LdgmConverse(lab::ldgm_converse_experiment(&lp, seed, runner, budget)?)
        }
        ExperimentKind::ConcatDecay => {
            let p: CopiesParams = params(config)?;
            ExperimentResult::ConcatDecay(lab::concat_error_decay(
                &linear(config, base_dir)?,
                &p.copies,
                &channel(config)?,
                trials,
                seed,
                runner,
                budget,
            )?)
        }
    })
}
