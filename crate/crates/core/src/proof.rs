//! Hilbert-style derivations in ConWON and in the flat fragment of V.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, parse_formula, render_pretty, Dialect, Formula, FormulaError};
use crate::lewis_v;
use crate::search::{self, Bounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Conwon,
    V1,
}

impl System {
    pub fn dialect(self) -> Dialect {
        match self {
            System::Conwon => Dialect::ConWon,
            System::V1 => Dialect::V,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Conwon => "conwon",
            System::V1 => "v1",
        })
    }
}

impl FromStr for System {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "conwon" => Ok(System::Conwon),
            "v1" | "v" => Ok(System::V1),
            _ => Err(format!("unknown system '{s}' (expected conwon or v1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    Propositional,
    Closed,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::Propositional => "propositional",
            Requirement::Closed => "closed",
        })
    }
}

/// An axiom schema. Every atom of `template` is a metavariable.
#[derive(Debug, Clone)]
pub struct Schema {
    pub id: &'static str,
    pub system: System,
    pub text: &'static str,
    pub template: Formula,
    pub conditions: Vec<(&'static str, Requirement)>,
}

impl Schema {
    pub fn metavariables(&self) -> Vec<String> {
        self.template.atoms().into_iter().map(String::from).collect()
    }

    pub fn requirement(&self, meta: &str) -> Option<Requirement> {
        self.conditions.iter().find(|(m, _)| *m == meta).map(|&(_, r)| r)
    }
}

const PL: Requirement = Requirement::Propositional;
const CLOSED: Requirement = Requirement::Closed;

type RawSchema = (&'static str, System, &'static str, &'static [(&'static str, Requirement)]);

const RAW: &[RawSchema] = &[
    ("conwon.2a", System::Conwon, "[alpha](phi & psi) <-> [alpha]phi & [alpha]psi", &[("alpha", PL)]),
    ("conwon.2b", System::Conwon, "[alpha](phi | chi) <-> [alpha]phi | [alpha]chi", &[("alpha", PL), ("chi", CLOSED)]),
    (
        "conwon.2c",
        System::Conwon,
        "[alpha][beta]gamma <-> (E alpha -> ((E(alpha & beta) & [alpha & beta]gamma) | (~E(alpha & beta) & A(beta -> gamma))))",
        &[("alpha", PL), ("beta", PL), ("gamma", PL)],
    ),
    (
        "conwon.2d",
        System::Conwon,
        "[alpha]<beta>gamma <-> (E alpha -> ((E(alpha & beta) & <alpha & beta>gamma) | (~E(alpha & beta) & E(beta & gamma))))",
        &[("alpha", PL), ("beta", PL), ("gamma", PL)],
    ),
    ("conwon.3a", System::Conwon, "[alpha]alpha", &[("alpha", PL)]),
    ("conwon.3b", System::Conwon, "[alpha]gamma -> [alpha](gamma | delta)", &[("alpha", PL), ("gamma", PL), ("delta", PL)]),
    (
        "conwon.3c",
        System::Conwon,
        "[alpha]beta & [alpha]gamma -> [alpha & beta]gamma",
        &[("alpha", PL), ("beta", PL), ("gamma", PL)],
    ),
    (
        "conwon.3d",
        System::Conwon,
        "[alpha]gamma & [beta]gamma -> [alpha | beta]gamma",
        &[("alpha", PL), ("beta", PL), ("gamma", PL)],
    ),
    (
        "conwon.3e",
        System::Conwon,
        "<alpha>beta & [alpha]gamma -> [alpha & beta]gamma",
        &[("alpha", PL), ("beta", PL), ("gamma", PL)],
    ),
    ("v.rhd.1", System::V1, "phi |> phi", &[]),
    ("v.rhd.2", System::V1, "(phi |> chi) & (phi |> xi) -> (phi |> chi & xi)", &[]),
    ("v.rhd.3", System::V1, "(phi |> chi) -> (phi |> chi | xi)", &[]),
    ("v.rhd.4", System::V1, "(phi |> psi) & (phi |> chi) -> (phi & psi |> chi)", &[]),
    ("v.rhd.5", System::V1, "(phi |> chi) & (psi |> chi) -> (phi | psi |> chi)", &[]),
    ("v.rhd.6", System::V1, "~(phi |> ~psi) & (phi |> chi) -> (phi & psi |> chi)", &[]),
];

/// Every axiom schema of both systems.
pub fn schemas() -> &'static [Schema] {
    static CELL: OnceLock<Vec<Schema>> = OnceLock::new();
    CELL.get_or_init(|| {
        RAW.iter()
            .map(|&(id, system, text, conds)| Schema {
                id,
                system,
                text,
                template: parse_formula(text, system.dialect()).expect("schema templates parse"),
                conditions: conds.to_vec(),
            })
            .collect()
    })
}

pub fn schema(id: &str) -> Option<&'static Schema> {
    schemas().iter().find(|s| s.id == id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    ModusPonens,
    Rcea,
    Rcec,
}

/// Axioms and rules of a system as listed in its definition.
#[derive(Debug, Clone)]
pub struct Inventory {
    /// The propositional base, realized as the tautological-consequence rule.
    pub propositional: bool,
    pub schemas: Vec<&'static Schema>,
    pub rules: Vec<Rule>,
}

impl Inventory {
    pub fn len(&self) -> usize {
        usize::from(self.propositional) + self.schemas.len() + self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn inventory(system: System) -> Inventory {
    Inventory {
        propositional: true,
        schemas: schemas().iter().filter(|s| s.system == system).collect(),
        rules: vec![Rule::ModusPonens, Rule::Rcea, Rule::Rcec],
    }
}

pub type Substitution = BTreeMap<String, Formula>;

fn match_into(pattern: &Formula, f: &Formula, subst: &mut Substitution) -> bool {
    match (pattern, f) {
        (Formula::Atom(m), _) => match subst.get(m) {
            Some(bound) => bound == f,
            None => {
                subst.insert(m.clone(), f.clone());
                true
            }
        },
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Not(a), Formula::Not(b)) => match_into(a, b, subst),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Cond(a1, b1), Formula::Cond(a2, b2))
        | (Formula::Corner(a1, b1), Formula::Corner(a2, b2)) => match_into(a1, a2, subst) && match_into(b1, b2, subst),
        _ => false,
    }
}

/// First metavariable whose binding violates a side condition.
fn side_condition_violation(s: &Schema, subst: &Substitution) -> Option<(&'static str, Requirement)> {
    s.conditions.iter().copied().find(|&(m, req)| {
        subst.get(m).is_some_and(|f| match req {
            Requirement::Propositional => !f.is_propositional(),
            Requirement::Closed => !f.is_closed(),
        })
    })
}

/// Substitution making `s` equal to `f` with side conditions satisfied.
pub fn match_schema(s: &Schema, f: &Formula) -> Option<Substitution> {
    let mut subst = Substitution::new();
    (match_into(&s.template, f, &mut subst) && side_condition_violation(s, &subst).is_none()).then_some(subst)
}

pub fn instantiate(template: &Formula, subst: &Substitution) -> Formula {
    match template {
        Formula::Atom(m) => subst.get(m).cloned().unwrap_or_else(|| template.clone()),
        Formula::Falsum => Formula::Falsum,
        Formula::Not(a) => formula::not(instantiate(a, subst)),
        Formula::And(a, b) => formula::and(instantiate(a, subst), instantiate(b, subst)),
        Formula::Cond(a, b) => formula::cond(instantiate(a, subst), instantiate(b, subst)),
        Formula::Corner(a, b) => formula::corner(instantiate(a, subst), instantiate(b, subst)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom { id: String, subst: Option<Substitution> },
    /// `ModusPonens(i, j)`: step `j` is `step_i -> this`. Indices are 0-based.
    ModusPonens(usize, usize),
    Rcea(usize),
    Rcec(usize),
    Tautology(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub system: System,
    pub steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Problem {
    UnknownSchema { id: String },
    WrongSystem { id: String },
    SchemaMismatch { id: String },
    SideCondition { id: String, metavariable: String, requirement: String },
    UnknownMetavariable { id: String, metavariable: String },
    BadReference { index: usize },
    PremiseShape { rule: String, detail: String },
    NotTautology,
    TooManyAtoms { count: usize },
    NotFlat,
    WrongDialect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// 1-based step number.
    pub step: usize,
    pub problem: Problem,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub system: System,
    pub accepted: bool,
    pub conclusion: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Maximum number of opaque atoms the truth-table oracle accepts.
pub const MAX_TAUTOLOGY_ATOMS: usize = 20;

fn skeleton_atoms<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Atom(_) | Formula::Cond(..) | Formula::Corner(..) => {
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Formula::Falsum => {}
        Formula::Not(a) => skeleton_atoms(a, out),
        Formula::And(a, b) => {
            skeleton_atoms(a, out);
            skeleton_atoms(b, out);
        }
    }
}

fn skeleton_eval(f: &Formula, atoms: &HashMap<&Formula, usize>, assignment: u64) -> bool {
    match f {
        Formula::Falsum => false,
        Formula::Not(a) => !skeleton_eval(a, atoms, assignment),
        Formula::And(a, b) => skeleton_eval(a, atoms, assignment) && skeleton_eval(b, atoms, assignment),
        _ => assignment >> atoms[f] & 1 == 1,
    }
}

/// Whether `f` is a propositional tautology when conditionals are read as
/// opaque atoms. `Err(n)` if the skeleton has too many atoms.
pub fn is_tautology(f: &Formula) -> Result<bool, usize> {
    let mut list = Vec::new();
    skeleton_atoms(f, &mut list);
    if list.len() > MAX_TAUTOLOGY_ATOMS {
        return Err(list.len());
    }
    let index: HashMap<&Formula, usize> = list.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    Ok((0..1u64 << list.len()).all(|a| skeleton_eval(f, &index, a)))
}

fn diag(step: usize, problem: Problem) -> Diagnostic {
    let message = match &problem {
        Problem::UnknownSchema { id } => format!("unknown axiom schema '{id}'"),
        Problem::WrongSystem { id } => format!("schema '{id}' does not belong to this system"),
        Problem::SchemaMismatch { id } => format!("formula is not an instance of {id}"),
        Problem::SideCondition { id, metavariable, requirement } => {
            format!("{id}: {metavariable} must be {requirement}")
        }
        Problem::UnknownMetavariable { id, metavariable } => format!("{id} has no metavariable '{metavariable}'"),
        Problem::BadReference { index } => format!("reference to step {index}, which does not precede this step"),
        Problem::PremiseShape { rule, detail } => format!("{rule}: {detail}"),
        Problem::NotTautology => "formula is not a tautological consequence of the cited steps".to_string(),
        Problem::TooManyAtoms { count } => {
            format!("truth-table check needs {count} opaque atoms; at most {MAX_TAUTOLOGY_ATOMS} are supported")
        }
        Problem::NotFlat => "step is not flat; V-1 derivations must stay in the flat fragment".to_string(),
        Problem::WrongDialect => "step formula is not in this system's language".to_string(),
    };
    Diagnostic { step: step + 1, problem, message }
}

fn shape(rule: &str, detail: impl Into<String>) -> Problem {
    Problem::PremiseShape { rule: rule.to_string(), detail: detail.into() }
}

/// Antecedent and consequent of a conditional in either dialect.
fn conditional_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Cond(a, b) | Formula::Corner(a, b) => Some((a, b)),
        _ => None,
    }
}

fn check_step(system: System, steps: &[ProofStep], i: usize) -> Result<(), Problem> {
    let step = &steps[i];
    let f = &step.formula;
    if !f.is_in_dialect(system.dialect()) {
        return Err(Problem::WrongDialect);
    }
    if system == System::V1 && !f.is_flat() {
        return Err(Problem::NotFlat);
    }
    let premise = |j: usize| -> Result<&Formula, Problem> {
        if j < i {
            Ok(&steps[j].formula)
        } else {
            Err(Problem::BadReference { index: j + 1 })
        }
    };
    match &step.by {
        Justification::Axiom { id, subst } => {
            let s = schema(id).ok_or_else(|| Problem::UnknownSchema { id: id.clone() })?;
            if s.system != system {
                return Err(Problem::WrongSystem { id: id.clone() });
            }
            let mut bound = Substitution::new();
            if let Some(given) = subst {
                let metas = s.metavariables();
                for (m, v) in given {
                    if !metas.contains(m) {
                        return Err(Problem::UnknownMetavariable { id: id.clone(), metavariable: m.clone() });
                    }
                    bound.insert(m.clone(), v.clone());
                }
            }
            if let Some((m, req)) = side_condition_violation(s, &bound) {
                return Err(Problem::SideCondition { id: id.clone(), metavariable: m.into(), requirement: req.to_string() });
            }
            if !match_into(&s.template, f, &mut bound) {
                return Err(Problem::SchemaMismatch { id: id.clone() });
            }
            if let Some((m, req)) = side_condition_violation(s, &bound) {
                return Err(Problem::SideCondition { id: id.clone(), metavariable: m.into(), requirement: req.to_string() });
            }
            Ok(())
        }
        Justification::ModusPonens(a, b) => {
            let (pa, pb) = (premise(*a)?, premise(*b)?);
            match pb.as_implies() {
                Some((ante, cons)) if ante == pa && cons == f => Ok(()),
                Some(_) => Err(shape(
                    "modus ponens",
                    format!("step {} must be step {} -> this formula", b + 1, a + 1),
                )),
                None => Err(shape("modus ponens", format!("step {} is not an implication", b + 1))),
            }
        }
        Justification::Rcea(j) => {
            let p = premise(*j)?;
            let (a, b) = p.as_iff().ok_or_else(|| shape("rcea", format!("step {} is not a biconditional", j + 1)))?;
            let (l, r) = f.as_iff().ok_or_else(|| shape("rcea", "conclusion is not a biconditional"))?;
            let (la, lg) = conditional_parts(l).ok_or_else(|| shape("rcea", "left side is not a conditional"))?;
            let (ra, rg) = conditional_parts(r).ok_or_else(|| shape("rcea", "right side is not a conditional"))?;
            if la != a || ra != b || lg != rg {
                return Err(shape("rcea", "conclusion must replace the antecedent by the premise's equivalent"));
            }
            if system == System::Conwon && ![a, b, lg].iter().all(|x| x.is_propositional()) {
                return Err(shape("rcea", "antecedents and consequent must be propositional"));
            }
            Ok(())
        }
        Justification::Rcec(j) => {
            let p = premise(*j)?;
            let (g, d) = p.as_iff().ok_or_else(|| shape("rcec", format!("step {} is not a biconditional", j + 1)))?;
            let (l, r) = f.as_iff().ok_or_else(|| shape("rcec", "conclusion is not a biconditional"))?;
            let (la, lg) = conditional_parts(l).ok_or_else(|| shape("rcec", "left side is not a conditional"))?;
            let (ra, rd) = conditional_parts(r).ok_or_else(|| shape("rcec", "right side is not a conditional"))?;
            if la != ra || lg != g || rd != d {
                return Err(shape("rcec", "conclusion must replace the consequent by the premise's equivalent"));
            }
            if system == System::Conwon && !(g.is_propositional() && d.is_propositional()) {
                return Err(shape("rcec", "consequents must be propositional"));
            }
            Ok(())
        }
        Justification::Tautology(refs) => {
            let mut premises = Vec::new();
            for &j in refs {
                premises.push(premise(j)?.clone());
            }
            let goal = match formula::and_all(premises) {
                Some(p) => formula::implies(p, f.clone()),
                None => f.clone(),
            };
            match is_tautology(&goal) {
                Ok(true) => Ok(()),
                Ok(false) => Err(Problem::NotTautology),
                Err(count) => Err(Problem::TooManyAtoms { count }),
            }
        }
    }
}

/// Check every step; all problems are reported, not only the first.
pub fn check_proof(proof: &Proof) -> ProofReport {
    let diagnostics: Vec<Diagnostic> = (0..proof.steps.len())
        .filter_map(|i| check_step(proof.system, &proof.steps, i).err().map(|p| diag(i, p)))
        .collect();
    ProofReport {
        system: proof.system,
        accepted: diagnostics.is_empty() && !proof.steps.is_empty(),
        conclusion: proof.steps.last().map(|s| render_pretty(&s.formula)),
        diagnostics,
    }
}

impl Proof {
    /// Concatenation; references in `other` are shifted past `self`.
    pub fn concat(&self, other: &Proof) -> Proof {
        let off = self.steps.len();
        let shift = |j: &Justification| match j {
            Justification::Axiom { .. } => j.clone(),
            Justification::ModusPonens(a, b) => Justification::ModusPonens(a + off, b + off),
            Justification::Rcea(a) => Justification::Rcea(a + off),
            Justification::Rcec(a) => Justification::Rcec(a + off),
            Justification::Tautology(v) => Justification::Tautology(v.iter().map(|a| a + off).collect()),
        };
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().map(|s| ProofStep { formula: s.formula.clone(), by: shift(&s.by) }));
        Proof { system: self.system, steps }
    }
}

// ---- proof files ----

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("invalid proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {step}: {field}: {source}")]
    Formula { step: usize, field: String, source: FormulaError },
    #[error("step {step}: {message}")]
    Step { step: usize, message: String },
    #[error("{0}")]
    System(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FileBy {
    Axiom(String),
    #[serde(rename = "mp")]
    Mp([usize; 2]),
    Rcea(usize),
    Rcec(usize),
    Tautology(Vec<usize>),
}

#[derive(Debug, Serialize, Deserialize)]
struct FileByObject {
    #[serde(flatten)]
    by: FileBy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subst: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileProofRaw {
    system: String,
    steps: Vec<FileStepRaw>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileStepRaw {
    formula: String,
    by: FileByObject,
}

impl Proof {
    /// Parse the JSON proof format. Step references are 1-based in files.
    pub fn from_json(text: &str, system_override: Option<System>) -> Result<Proof, ProofFileError> {
        let raw: FileProofRaw = serde_json::from_str(text)?;
        let system = match system_override {
            Some(s) => s,
            None => raw.system.parse().map_err(ProofFileError::System)?,
        };
        let dialect = system.dialect();
        let mut steps = Vec::new();
        for (i, s) in raw.steps.iter().enumerate() {
            let n = i + 1;
            let parse = |text: &str, field: &str| {
                parse_formula(text, dialect).map_err(|source| ProofFileError::Formula { step: n, field: field.to_string(), source })
            };
            let formula = parse(&s.formula, "formula")?;
            let index = |r: usize| {
                r.checked_sub(1).ok_or_else(|| ProofFileError::Step { step: n, message: "step references are 1-based".into() })
            };
            let by = match &s.by.by {
                FileBy::Axiom(id) => {
                    let subst = match &s.by.subst {
                        Some(m) => {
                            let mut out = Substitution::new();
                            for (k, v) in m {
                                out.insert(k.clone(), parse(v, &format!("subst.{k}"))?);
                            }
                            Some(out)
                        }
                        None => None,
                    };
                    Justification::Axiom { id: id.clone(), subst }
                }
                FileBy::Mp([a, b]) => Justification::ModusPonens(index(*a)?, index(*b)?),
                FileBy::Rcea(a) => Justification::Rcea(index(*a)?),
                FileBy::Rcec(a) => Justification::Rcec(index(*a)?),
                FileBy::Tautology(v) => Justification::Tautology(v.iter().map(|&a| index(a)).collect::<Result<_, _>>()?),
            };
            steps.push(ProofStep { formula, by });
        }
        Ok(Proof { system, steps })
    }

    pub fn to_json(&self) -> String {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let (by, subst) = match &s.by {
                    Justification::Axiom { id, subst } => (
                        FileBy::Axiom(id.clone()),
                        subst.as_ref().map(|m| m.iter().map(|(k, v)| (k.clone(), render_pretty(v))).collect()),
                    ),
                    Justification::ModusPonens(a, b) => (FileBy::Mp([a + 1, b + 1]), None),
                    Justification::Rcea(a) => (FileBy::Rcea(a + 1), None),
                    Justification::Rcec(a) => (FileBy::Rcec(a + 1), None),
                    Justification::Tautology(v) => (FileBy::Tautology(v.iter().map(|a| a + 1).collect()), None),
                };
                FileStepRaw { formula: render_pretty(&s.formula), by: FileByObject { by, subst } }
            })
            .collect();
        serde_json::to_string_pretty(&FileProofRaw { system: self.system.to_string(), steps }).expect("serializable")
    }
}

// ---- soundness sweep ----

/// Propositional formulas over `atoms` up to `depth` (¬ and ∧ over atoms and
/// ⊥), one per truth function, in generation order.
pub fn propositional_pool(atoms: &[&str], depth: usize) -> Vec<Formula> {
    let n = atoms.len();
    assert!(n <= 5);
    let rows = 1usize << n;
    let table = |f: &Formula| -> u32 {
        let mut bits = 0u32;
        for r in 0..rows {
            let assignment: BTreeMap<&str, bool> = atoms.iter().enumerate().map(|(i, &a)| (a, r >> i & 1 == 1)).collect();
            if pl_eval(f, &assignment) {
                bits |= 1 << r;
            }
        }
        bits
    };
    let mut levels: Vec<Formula> = atoms.iter().map(|a| formula::atom(*a)).collect();
    levels.push(formula::falsum());
    let mut all = levels.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for a in &all {
            next.push(formula::not(a.clone()));
            for b in &all {
                next.push(formula::and(a.clone(), b.clone()));
            }
        }
        all.extend(next);
    }
    let mut seen = std::collections::HashSet::new();
    all.into_iter().filter(|f| seen.insert(table(f))).collect()
}

fn pl_eval(f: &Formula, v: &BTreeMap<&str, bool>) -> bool {
    match f {
        Formula::Atom(p) => v[p.as_str()],
        Formula::Falsum => false,
        Formula::Not(a) => !pl_eval(a, v),
        Formula::And(a, b) => pl_eval(a, v) && pl_eval(b, v),
        _ => unreachable!("propositional pool"),
    }
}

/// Closed flat formulas used for closed-only and unrestricted slots.
pub fn closed_pool() -> Vec<Formula> {
    ["[p] q", "~[q] p", "[p] q & [q] p", "[true] p", "[p & q] false", "[p] q | ~[q] ~p"]
        .iter()
        .map(|s| parse_formula(s, Dialect::ConWon).expect("pool parses"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub schema: String,
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub system: System,
    pub instances: usize,
    pub failures: Vec<SweepFailure>,
}

fn instances(s: &Schema, pl: &[Formula], any: &[Formula], closed: &[Formula]) -> Vec<Formula> {
    let metas = s.metavariables();
    let pools: Vec<&[Formula]> = metas
        .iter()
        .map(|m| match s.requirement(m) {
            Some(Requirement::Propositional) => pl,
            Some(Requirement::Closed) => closed,
            None => any,
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; metas.len()];
    loop {
        let subst: Substitution = metas.iter().cloned().zip(idx.iter().zip(&pools).map(|(&i, p)| p[i].clone())).collect();
        out.push(instantiate(&s.template, &subst));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < pools[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Instantiate every schema of `system` from the generated pools and search
/// for countermodels within `bounds`.
pub fn soundness_sweep(system: System, bounds: &Bounds) -> Result<SweepReport, lewis_v::VError> {
    let pl = propositional_pool(&["p", "q"], 2);
    let mut failures = Vec::new();
    let mut count = 0;
    for s in schemas().iter().filter(|s| s.system == system) {
        let batch = match system {
            System::Conwon => {
                let closed = closed_pool();
                let any: Vec<Formula> = pl.iter().chain(closed.iter()).cloned().collect();
                instances(s, &pl, &any, &closed)
            }
            System::V1 => instances(s, &pl, &pl, &pl),
        };
        for inst in batch {
            count += 1;
            let bad = match system {
                System::Conwon => search::find_countermodel(&inst, bounds)?.is_some(),
                System::V1 => lewis_v::find_v_satisfying(&formula::not(inst.clone()), bounds.max_worlds)?.is_some(),
            };
            if bad {
                failures.push(SweepFailure { schema: s.id.to_string(), instance: render_pretty(&inst) });
            }
        }
    }
    Ok(SweepReport { system, instances: count, failures })
}
