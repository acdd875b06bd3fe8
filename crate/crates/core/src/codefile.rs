//! JSON code files.
//!
//! Linear codes: `{"n", "k", "generator": [row bitstrings], "parity_check"?}`
//! with the leftmost character as column 1. Positional codes:
//! `{"encoder": "positional", "n", "k", "c", "declared_update_efficiency"}`.
//! Either may carry a free-form `"provenance"` object.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bitlin::BitMatrix;
use crate::construct::{positional_code, Encoder, LinearCode, NonlinearEncoder};
use crate::error::{Error, Result};

/// A code read from or written to a code file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoredCode {
    Linear(LinearCode),
    /// A generator whose rows are dependent (kept as drawn, e.g. from the LDGM
    /// ensemble).
    RankDeficient { generator: BitMatrix, rank: usize },
    Positional(NonlinearEncoder),
}

#[derive(Serialize, Deserialize)]
struct LinearFile {
    n: usize,
    k: usize,
    generator: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity_check: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

#[derive(Serialize, Deserialize)]
struct PositionalFile {
    encoder: String,
    n: usize,
    k: usize,
    c: usize,
    declared_update_efficiency: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

impl StoredCode {
    pub fn encoder(&self) -> &dyn Encoder {
        match self {
            Self::Linear(c) => c,
            Self::RankDeficient { generator, .. } => generator,
            Self::Positional(p) => p,
        }
    }

    pub fn as_linear(&self) -> Option<&LinearCode> {
        match self {
            Self::Linear(c) => Some(c),
            _ => None,
        }
    }

    /// From a generator that may be rank deficient.
    pub fn from_generator(generator: BitMatrix) -> Result<Self> {
        let rank = generator.rank();
        if rank == generator.rows() {
            Ok(Self::Linear(LinearCode::with_derived_parity_check(generator)?))
        } else {
            Ok(Self::RankDeficient { generator, rank })
        }
    }

    pub fn to_json(&self, provenance: Option<Value>) -> Value {
        let v = match self {
            Self::Linear(c) => serde_json::to_value(LinearFile {
                n: c.n(),
                k: c.k(),
                generator: c.generator_matrix().to_bitstrings(),
                parity_check: c.parity_check().map(BitMatrix::to_bitstrings),
                rank: None,
                provenance,
            }),
            Self::RankDeficient { generator, rank } => serde_json::to_value(LinearFile {
                n: generator.cols(),
                k: generator.rows(),
                generator: generator.to_bitstrings(),
                parity_check: None,
                rank: Some(*rank),
                provenance,
            }),
            Self::Positional(p) => serde_json::to_value(PositionalFile {
                encoder: "positional".into(),
                n: p.block_len(),
                k: p.message_len(),
                c: match *p {
                    NonlinearEncoder::Positional { repetition, .. } => repetition,
                },
                declared_update_efficiency: p.declared_update_efficiency(),
                provenance,
            }),
        };
        v.expect("code files always serialize")
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json_string(&self, provenance: Option<Value>) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json(provenance)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        if value.get("encoder").is_some() {
            let f: PositionalFile = serde_json::from_value(value.clone()).map_err(format_err)?;
            if f.encoder != "positional" {
                return Err(Error::Format(format!("unknown encoder {:?}", f.encoder)));
            }
            let p = positional_code(f.k, f.c)?;
            if p.block_len() != f.n {
                return Err(Error::Format(format!("positional code has n = {}, file says {}", p.block_len(), f.n)));
            }
            return Ok(Self::Positional(p));
        }
        let f: LinearFile = serde_json::from_value(value.clone()).map_err(format_err)?;
        let g = BitMatrix::from_bitstrings(&f.generator)?;
        if g.rows() != f.k || g.cols() != f.n {
            return Err(Error::Format(format!(
                "generator is {}x{}, header says k = {}, n = {}",
                g.rows(),
                g.cols(),
                f.k,
                f.n
            )));
        }
        match f.parity_check {
            Some(rows) => {
                let h = BitMatrix::from_bitstrings(&rows)?;
                Ok(Self::Linear(LinearCode::new(g, Some(h))?))
            }
            None => Self::from_generator(g),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(format_err)?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{hamming, sample_ldgm, EnsembleSpec, HammingForm};

    #[test]
    fn linear_round_trip() {
        let h = hamming(3, HammingForm::SparseTriples).unwrap();
        let stored = StoredCode::Linear(h.clone());
        let json = stored.to_json(None);
        assert_eq!(json["n"], 7);
        assert_eq!(json["k"], 4);
        assert_eq!(json["generator"][0], "1110000");
        assert_eq!(StoredCode::from_json(&json).unwrap(), stored);
    }

    #[test]
    fn rank_deficient_round_trip() {
        let s = sample_ldgm(&EnsembleSpec::fixed(8, 3, 8, 1)).unwrap();
        let stored = StoredCode::from_generator(s.generator).unwrap();
        assert!(matches!(stored, StoredCode::RankDeficient { rank: 1, .. }));
        let back = StoredCode::from_json_str(&stored.to_json_string(None)).unwrap();
        assert_eq!(back, stored);
    }

    #[test]
    fn positional_round_trip() {
        let stored = StoredCode::Positional(positional_code(2, 2).unwrap());
        let json = stored.to_json(Some(serde_json::json!({"seed": null})));
        assert_eq!(json["n"], 8);
        assert_eq!(json["declared_update_efficiency"], 4);
        assert_eq!(StoredCode::from_json(&json).unwrap(), stored);
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(StoredCode::from_json_str("{").is_err());
        assert!(StoredCode::from_json_str(r#"{"n":3,"k":1,"generator":["11"]}"#).is_err());
        assert!(StoredCode::from_json_str(r#"{"n":3,"k":1,"generator":["1a1"]}"#).is_err());
        assert!(StoredCode::from_json_str(r#"{"n":3,"k":1,"generator":["111"],"parity_check":["100","010"]}"#).is_err());
        assert!(StoredCode::from_json_str(r#"{"encoder":"other","n":8,"k":2,"c":2,"declared_update_efficiency":4}"#).is_err());
    }
}
