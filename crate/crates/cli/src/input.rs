use std::path::{Path, PathBuf};

use limithodge_core::corpus::assembled_model;
use limithodge_core::random::unimodular;
use limithodge_core::serial::{parse_factor_kind, DatumFile};
use limithodge_core::sl2rep::{FactorKind, Model};
use limithodge_core::QiMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const CORPUS_VAR: &str = "LIMITHODGE_CORPUS";

/// An input file as named on the command line, with its raw bytes.
#[derive(Clone, Debug)]
pub struct InputFile {
    pub label: String,
    pub bytes: Vec<u8>,
}

impl InputFile {
    pub fn json(&self) -> Result<Value, CliError> {
        serde_json::from_slice(&self.bytes).map_err(|e| CliError::invalid(format!("not valid JSON: {e}")))
    }
}

/// Relative paths that do not exist are looked up under `$LIMITHODGE_CORPUS`.
pub fn resolve(label: &str, corpus: Option<&Path>) -> PathBuf {
    let direct = PathBuf::from(label);
    match corpus {
        Some(dir) if !direct.exists() && direct.is_relative() => dir.join(&direct),
        _ => direct,
    }
}

pub fn read_inputs(labels: &[String]) -> Result<Vec<InputFile>, CliError> {
    let corpus = std::env::var_os(CORPUS_VAR).map(PathBuf::from);
    labels
        .iter()
        .map(|label| {
            let path = resolve(label, corpus.as_deref());
            std::fs::read(&path)
                .map(|bytes| InputFile { label: label.clone(), bytes })
                .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())).with_input(label))
        })
        .collect()
}

/// SHA-256 over the command, its canonical options and every input in
/// order, each field terminated by a zero byte.
pub fn digest(command: &str, options: &Value, inputs: &[InputFile]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(options.to_string().as_bytes());
    h.update([0]);
    for input in inputs {
        h.update(input.label.as_bytes());
        h.update([0]);
        h.update(&input.bytes);
        h.update([0]);
    }
    hex::encode(h.finalize())
}

pub fn datum_file(v: &Value) -> Result<DatumFile, CliError> {
    Ok(DatumFile::from_json(v)?)
}

/// A model experiment: `{"factors": [kind, …], "conjugate": bool}`.
pub struct Experiment {
    pub factors: Vec<FactorKind>,
    pub model: Model,
    pub conjugated: bool,
}

pub fn experiment(v: &Value, seed: u64) -> Result<Experiment, CliError> {
    let items = v
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::invalid("$.factors: expected an array of factor kinds"))?;
    if items.is_empty() {
        return Err(CliError::invalid("$.factors: at least one factor is required"));
    }
    let factors = items
        .iter()
        .enumerate()
        .map(|(i, f)| parse_factor_kind(f, &format!("$.factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let conjugated = match v.get("conjugate") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(CliError::invalid("$.conjugate: expected a boolean")),
    };
    let weight = factors[0].weight();
    if factors.iter().any(|f| f.weight() != weight) {
        return Err(CliError::invalid("$.factors: all factors must have the same weight"));
    }
    let g: Option<QiMatrix> = conjugated.then(|| {
        let dim: usize = factors.iter().map(FactorKind::dim).sum();
        unimodular(dim, 3 * dim, &mut ChaCha8Rng::seed_from_u64(seed))
    });
    let model = assembled_model(&factors, g.as_ref())?;
    Ok(Experiment { factors, model, conjugated })
}
