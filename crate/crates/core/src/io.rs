//! JSON files for models, contexts and pseudo-sphere models.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::context::{Context, OrderedDefaultSet, SequenceContext};
use crate::lewis_v::{PseudoSphereModel, VError};
use crate::model::{Model, ModelError};
use crate::worlds::WorldSet;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    V(#[from] VError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        IoError::Json { line: e.line(), column: e.column(), message }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    worlds: Vec<String>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum ContextFile {
    #[serde(rename = "ordered-set")]
    Ordered {
        defaults: BTreeMap<String, Vec<String>>,
        #[serde(default)]
        order: Vec<(String, String)>,
    },
    #[serde(rename = "sequence")]
    Sequence { sequence: Vec<Vec<String>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SphereFile {
    worlds: Vec<String>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    spheres: Vec<Vec<String>>,
}

fn names(model: &Model, set: WorldSet) -> Vec<String> {
    model.names(set).into_iter().map(String::from).collect()
}

pub fn model_from_value(v: Value) -> Result<Model, IoError> {
    let file: ModelFile = serde_json::from_value(v).map_err(|e| IoError::Schema(format!("model: {e}")))?;
    Ok(Model::new(file.worlds, file.valuation)?)
}

pub fn model_from_json(text: &str) -> Result<Model, IoError> {
    model_from_value(serde_json::from_str(text)?)
}

pub fn model_to_value(m: &Model) -> Value {
    let file = ModelFile {
        worlds: m.worlds().to_vec(),
        valuation: m.valuation().iter().map(|(k, &s)| (k.clone(), names(m, s))).collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn model_to_json(m: &Model) -> String {
    serde_json::to_string_pretty(&model_to_value(m)).expect("serializable")
}

pub fn context_from_value(v: Value, model: &Model) -> Result<Context, IoError> {
    let file: ContextFile = serde_json::from_value(v).map_err(|e| IoError::Schema(format!("context: {e}")))?;
    match file {
        ContextFile::Ordered { defaults, order } => {
            let mut ext = BTreeMap::new();
            for (name, worlds) in defaults {
                let s = model.world_set(worlds.iter().map(String::as_str), &format!("default '{name}'"))?;
                ext.insert(name, s);
            }
            Ok(OrderedDefaultSet::new(ext, order)?.into())
        }
        ContextFile::Sequence { sequence } => {
            let mut seq = Vec::new();
            for (i, worlds) in sequence.iter().enumerate() {
                seq.push(model.world_set(worlds.iter().map(String::as_str), &format!("sequence element {i}"))?);
            }
            Ok(SequenceContext::new(seq)?.into())
        }
    }
}

pub fn context_from_json(text: &str, model: &Model) -> Result<Context, IoError> {
    context_from_value(serde_json::from_str(text)?, model)
}

pub fn context_to_value(c: &Context, model: &Model) -> Value {
    let file = match c {
        Context::Ordered(c) => ContextFile::Ordered {
            defaults: c.defaults().iter().map(|(k, &s)| (k.clone(), names(model, s))).collect(),
            order: c.order().iter().cloned().collect(),
        },
        Context::Sequence(c) => ContextFile::Sequence {
            sequence: c.defaults().iter().map(|&s| names(model, s)).collect(),
        },
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn context_to_json(c: &Context, model: &Model) -> String {
    serde_json::to_string_pretty(&context_to_value(c, model)).expect("serializable")
}

pub fn pseudo_sphere_from_json(text: &str) -> Result<PseudoSphereModel, IoError> {
    let file: SphereFile = serde_json::from_str::<Value>(text)
        .map_err(IoError::from)
        .and_then(|v| serde_json::from_value(v).map_err(|e| IoError::Schema(format!("pseudo-sphere model: {e}"))))?;
    let model = Model::new(file.worlds, file.valuation)?;
    let mut spheres = Vec::new();
    for (i, worlds) in file.spheres.iter().enumerate() {
        spheres.push(model.world_set(worlds.iter().map(String::as_str), &format!("sphere {i}"))?);
    }
    Ok(PseudoSphereModel::new(model, spheres)?)
}

pub fn pseudo_sphere_to_value(m: &PseudoSphereModel) -> Value {
    let file = SphereFile {
        worlds: m.model.worlds().to_vec(),
        valuation: m.model.valuation().iter().map(|(k, &s)| (k.clone(), names(&m.model, s))).collect(),
        spheres: m.spheres().iter().map(|&s| names(&m.model, s)).collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn pseudo_sphere_to_json(m: &PseudoSphereModel) -> String {
    serde_json::to_string_pretty(&pseudo_sphere_to_value(m)).expect("serializable")
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODEL: &str = r#"{"worlds": ["w2", "w1"], "valuation": {"p": ["w1"], "q": []}}"#;

    #[test]
    fn model_round_trip() {
        let m = model_from_json(MODEL).unwrap();
        assert_eq!(m.worlds(), ["w1", "w2"]);
        assert_eq!(model_from_json(&model_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn context_round_trip() {
        let m = model_from_json(MODEL).unwrap();
        let text = r#"{"kind": "ordered-set", "defaults": {"A": ["w1"], "B": ["w1", "w2"], "C": []},
                       "order": [["A", "B"], ["B", "C"]]}"#;
        let c = context_from_json(text, &m).unwrap();
        let Context::Ordered(o) = &c else { panic!() };
        assert!(o.is_above("A", "C"));
        assert_eq!(context_from_json(&context_to_json(&c, &m), &m).unwrap(), c);
        let seq = context_from_json(r#"{"kind": "sequence", "sequence": [["w2"], []]}"#, &m).unwrap();
        assert_eq!(context_from_json(&context_to_json(&seq, &m), &m).unwrap(), seq);
    }

    #[test]
    fn diagnostics() {
        let m = model_from_json(MODEL).unwrap();
        let cyc = r#"{"kind": "ordered-set", "defaults": {"D1": ["w1"]}, "order": [["D1", "D1"]]}"#;
        assert!(context_from_json(cyc, &m).unwrap_err().to_string().contains("irreflexive"));
        let unknown = r#"{"kind": "ordered-set", "defaults": {"D1": ["w9"]}}"#;
        let e = context_from_json(unknown, &m).unwrap_err().to_string();
        assert!(e.contains("w9") && e.contains("D1"), "{e}");
        assert!(matches!(model_from_json(r#"{"worlds": []}"#), Err(IoError::Model(ModelError::NoWorlds))));
        assert!(matches!(model_from_json("{\"worlds\": [\n"), Err(IoError::Json { line: 2, .. })));
        assert!(matches!(context_from_json(r#"{"kind": "sequence", "sequence": []}"#, &m), Err(IoError::Model(_))));
    }

    #[test]
    fn sphere_round_trip() {
        let text = r#"{"worlds": ["w1", "w2"], "valuation": {"p": ["w1"]}, "spheres": [["w2"], [], ["w1"]]}"#;
        let ps = pseudo_sphere_from_json(text).unwrap();
        assert_eq!(ps.spheres().len(), 3);
        assert_eq!(pseudo_sphere_from_json(&pseudo_sphere_to_json(&ps)).unwrap(), ps);
        let overlap = r#"{"worlds": ["w1"], "spheres": [["w1"], ["w1"]]}"#;
        assert!(pseudo_sphere_from_json(overlap).is_err());
    }
}
