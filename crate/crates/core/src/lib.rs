//! Update-efficient and locally repairable binary codes: GF(2) linear algebra,
//! code constructions, channels, ML decoding, metrics, bounds and Monte Carlo
//! experiments.

pub mod bitlin;
pub mod bound;
pub mod channel;
pub mod codebook;
pub mod codefile;
pub mod construct;
pub mod decode;
pub mod error;
pub mod experiment;
pub mod lab;
pub mod metric;
pub mod rng;
pub mod stats;

pub use bitlin::{BitMatrix, BitVec, BitlinError, LeftSolution};
pub use bound::Threshold;
pub use channel::{ChannelError, ChannelModel, ReceivedWord, Symbol};
pub use codebook::Budget;
pub use codefile::StoredCode;
pub use construct::{
    concatenated, hamming, positional_code, sample_ldgm, sample_regular_ldpc, Encoder, EnsembleMode,
    EnsembleSpec, HammingForm, LdgmSample, LinearCode, NonlinearEncoder,
};
pub use decode::{DecodeOutcome, DecodeStatus, RepairPlan};
pub use error::{Error, Result};
pub use lab::{Runner, TrialReport};
pub use metric::{MetricsReport, Recoverability};
pub use stats::EventFrequency;
