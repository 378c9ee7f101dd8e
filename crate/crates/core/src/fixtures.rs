//! Worked examples bundled as JSON, so they can be loaded offline.

use crate::context::Context;
use crate::formula::{parse_formula, Dialect, Formula};
use crate::io;
use crate::lewis_v::RelationalModel;
use crate::model::Model;

pub const TIGER_MODEL: &str = r#"{
  "worlds": ["w1", "w2", "w3", "w4", "w5", "w6"],
  "valuation": {
    "f_t": ["w1", "w2", "w3", "w4"],
    "f_d": ["w1", "w2", "w5", "w6"],
    "f_g": ["w3", "w4", "w5", "w6"],
    "a_t": ["w1", "w3", "w5", "w6"],
    "a_d": ["w2", "w3", "w4", "w5"],
    "a_g": ["w1", "w2", "w4", "w6"]
  }
}"#;

pub const TIGER_CONTEXT: &str = r#"{
  "kind": "ordered-set",
  "defaults": {
    "D1": ["w1", "w3", "w4", "w5", "w6"],
    "D2": ["w1", "w2", "w3", "w5", "w6"],
    "D3": ["w1", "w2", "w3", "w4", "w5"]
  },
  "order": [["D2", "D1"], ["D2", "D3"]]
}"#;

pub const REAGAN_MODEL: &str = r#"{
  "worlds": ["w1", "w2", "w3", "w4"],
  "valuation": {"r": ["w1"], "a": ["w2"], "c": ["w3"]}
}"#;

pub const REAGAN_CONTEXT: &str = r#"{
  "kind": "ordered-set",
  "defaults": {"D1": ["w1", "w3"], "D2": ["w1"]},
  "order": [["D1", "D2"]]
}"#;

pub const FIGURE1_MODEL: &str = r#"{
  "worlds": ["w1", "w2", "w3", "w4"],
  "valuation": {"p": ["w1"], "q": ["w4"]}
}"#;

pub const FIGURE1_CONTEXT: &str = r#"{
  "kind": "ordered-set",
  "defaults": {"D1": ["w1", "w2"], "D2": ["w1", "w2", "w3"], "D3": ["w4"]},
  "order": [["D1", "D2"], ["D2", "D3"]]
}"#;

pub const NONMONO_MODEL: &str = r#"{
  "worlds": ["w1", "w2"],
  "valuation": {"p": ["w1", "w2"], "q": ["w2"]}
}"#;

pub const NONMONO_CONTEXT: &str = r#"{
  "kind": "ordered-set",
  "defaults": {"D": ["w2"]}
}"#;

/// A ConWON example: model, context, world and formula.
#[derive(Debug, Clone)]
pub struct Example {
    pub name: &'static str,
    pub model: Model,
    pub context: Context,
    pub world: &'static str,
    pub formulas: Vec<Formula>,
}

fn load(name: &'static str, model: &str, context: &str, world: &'static str, formulas: &[&str]) -> Example {
    let model = io::model_from_json(model).expect("bundled model");
    let context = io::context_from_json(context, &model).expect("bundled context");
    let formulas = formulas.iter().map(|f| parse_formula(f, Dialect::ConWon).expect("bundled formula")).collect();
    Example { name, model, context, world, formulas }
}

pub fn tiger() -> Example {
    load("tiger", TIGER_MODEL, TIGER_CONTEXT, "w3", &["[a_g] ~a_d"])
}

pub fn reagan() -> Example {
    load("reagan", REAGAN_MODEL, REAGAN_CONTEXT, "w1", &["[~r][r | a] r"])
}

pub fn figure1() -> Example {
    load("figure1", FIGURE1_MODEL, FIGURE1_CONTEXT, "w1", &[])
}

pub fn nonmono() -> Example {
    load("nonmono", NONMONO_MODEL, NONMONO_CONTEXT, "w1", &["[p] q", "[p & ~q] q"])
}

pub const FACT_V_FORMULA: &str = "E (p & q) -> (p |> (q |> p & q))";
pub const FACT_CONWON_FORMULA: &str = "E (p & q) -> [p][q](p & q)";

/// Two worlds, both seeing `(W, <)` with `w2 < w1`; `p` at w1, `q` everywhere.
pub fn fact_relational() -> RelationalModel {
    let model = io::model_from_json(r#"{"worlds": ["w1", "w2"], "valuation": {"p": ["w1"], "q": ["w1", "w2"]}}"#)
        .expect("bundled model");
    RelationalModel::uniform(model, &[("w2".into(), "w1".into())]).expect("bundled order")
}

pub const NAMES: [&str; 5] = ["tiger", "reagan", "nonmono", "fact16", "figure1"];
