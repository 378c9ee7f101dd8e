//! Conditional weak ontic necessity: formulas, contextualized models,
//! evaluation, countermodel search, the reduction to depth one, the
//! comparison with Lewis's V and a Hilbert-style proof checker.

pub mod battery;
pub mod compiled;
pub mod context;
pub mod fixtures;
pub mod formula;
pub mod io;
pub mod lewis_v;
pub mod model;
pub mod proof;
pub mod reduction;
pub mod search;
pub mod semantics;
pub mod worlds;

pub use context::{Context, ExpectedDetail, Hierarchy, OrderedDefaultSet, SequenceContext};
pub use formula::{parse_formula, render, render_pretty, Classification, Dialect, Formula, FormulaError};
pub use model::{Model, ModelError};
pub use semantics::{eval, eval_traced, extension, truth_set, ContextualizedPointedModel, EvalTrace, SemanticsError};
pub use worlds::WorldSet;
pub use search::{find_countermodel, Bounds, Countermodel, SearchError};
pub use reduction::{rewrite_step, sigma, ConditionalClause, ReductionError};
pub use lewis_v::{flat_equivalence_check, FlatReport, PseudoSphereModel, RelationalModel, SphereModel, UniversalModel, VError, VModel};
pub use proof::{check_proof, Proof, ProofReport, System};
