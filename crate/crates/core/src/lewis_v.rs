//! Lewis's logic V: relational, universal, sphere and pseudo-sphere models,
//! the transformations between sphere systems and sequence contexts, and a
//! bounded harness comparing the flat fragments of V and ConWON.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::context::{Context, SequenceContext};
use crate::formula::{render_pretty, translate_flat, Dialect, Formula, FormulaError};
use crate::model::{Model, ModelError};
use crate::search::{self, Bounds, Countermodel, SearchError};
use crate::semantics;
use crate::worlds::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VError {
    #[error("formula is not in the V dialect: {0}")]
    WrongDialect(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("ordering {location} is not {property}")]
    BadOrder { location: String, property: &'static str },
    #[error("{0}")]
    BadPartition(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Strict order as `below[u] = {z | z < u}`, restricted to `domain`.
fn check_order(below: &[WorldSet], domain: WorldSet, location: &str) -> Result<(), VError> {
    let bad = |property| Err(VError::BadOrder { location: location.to_string(), property });
    for u in 0..below.len() {
        if !domain.contains(u) {
            if !below[u].is_empty() {
                return bad("confined to its domain");
            }
            continue;
        }
        if !below[u].is_subset(domain) {
            return bad("confined to its domain");
        }
        if below[u].contains(u) {
            return bad("irreflexive");
        }
        for z in below[u].iter() {
            if !below[z].is_subset(below[u]) {
                return bad("transitive");
            }
        }
    }
    // almost connected: z < u implies z < v or v < u
    for u in domain.iter() {
        for z in below[u].iter() {
            for v in domain.iter() {
                if !(below[v].contains(z) || below[u].contains(v)) {
                    return bad("almost connected");
                }
            }
        }
    }
    Ok(())
}

fn order_from_pairs(model: &Model, pairs: &[(String, String)]) -> Result<Vec<WorldSet>, VError> {
    let mut below = vec![WorldSet::EMPTY; model.len()];
    for (lo, hi) in pairs {
        let l = model.world_index(lo).ok_or_else(|| VError::UnknownWorld(lo.clone()))?;
        let h = model.world_index(hi).ok_or_else(|| VError::UnknownWorld(hi.clone()))?;
        below[h].insert(l);
    }
    Ok(below)
}

/// `(W, Γ, V)`; `gamma[w] = (W_w, below)` with `below[u] = {z | z <_w u}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalModel {
    pub model: Model,
    gamma: Vec<(WorldSet, Vec<WorldSet>)>,
}

impl RelationalModel {
    pub fn new(model: Model, gamma: Vec<(WorldSet, Vec<WorldSet>)>) -> Result<Self, VError> {
        if gamma.len() != model.len() {
            return Err(VError::BadPartition(format!(
                "Γ must have one entry per world ({} given for {} worlds)",
                gamma.len(),
                model.len()
            )));
        }
        for (w, (dom, below)) in gamma.iter().enumerate() {
            if !dom.is_subset(model.universe()) || below.len() != model.len() {
                return Err(VError::BadPartition(format!("Γ({}) is not over the model's worlds", model.world_name(w))));
            }
            check_order(below, *dom, &format!("<_{}", model.world_name(w)))?;
        }
        Ok(RelationalModel { model, gamma })
    }

    /// Every world sees `(W, <)` for one shared order given as `(lower, higher)` pairs.
    pub fn uniform(model: Model, pairs: &[(String, String)]) -> Result<Self, VError> {
        let below = order_from_pairs(&model, pairs)?;
        let gamma = vec![(model.universe(), below); model.len()];
        RelationalModel::new(model, gamma)
    }

    pub fn gamma(&self, w: usize) -> (WorldSet, &[WorldSet]) {
        (self.gamma[w].0, &self.gamma[w].1)
    }
}

/// `(W, <, V)` with one global order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalModel {
    pub model: Model,
    below: Vec<WorldSet>,
}

impl UniversalModel {
    pub fn new(model: Model, below: Vec<WorldSet>) -> Result<Self, VError> {
        if below.len() != model.len() {
            return Err(VError::BadPartition("order must have one entry per world".into()));
        }
        check_order(&below, model.universe(), "<")?;
        Ok(UniversalModel { model, below })
    }

    /// Order given as `(lower, higher)` pairs of world names.
    pub fn from_pairs(model: Model, pairs: &[(String, String)]) -> Result<Self, VError> {
        let below = order_from_pairs(&model, pairs)?;
        UniversalModel::new(model, below)
    }

    pub fn below(&self) -> &[WorldSet] {
        &self.below
    }
}

/// `(W, Δ_W, ≪, V)`; blocks listed ≪-least first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereModel {
    pub model: Model,
    blocks: Vec<WorldSet>,
}

fn check_cover(blocks: &[WorldSet], universe: WorldSet, allow_empty: bool) -> Result<(), VError> {
    let mut seen = WorldSet::EMPTY;
    for (i, &b) in blocks.iter().enumerate() {
        if b.is_empty() && !allow_empty {
            return Err(VError::BadPartition(format!("block {i} is empty")));
        }
        if !b.is_subset(universe) {
            return Err(VError::BadPartition(format!("block {i} mentions worlds outside the model")));
        }
        if b.intersects(seen) {
            return Err(VError::BadPartition(format!("block {i} overlaps an earlier block")));
        }
        seen |= b;
    }
    if seen != universe {
        return Err(VError::BadPartition("blocks do not cover every world".into()));
    }
    Ok(())
}

impl SphereModel {
    pub fn new(model: Model, blocks: Vec<WorldSet>) -> Result<Self, VError> {
        check_cover(&blocks, model.universe(), false)?;
        Ok(SphereModel { model, blocks })
    }

    pub fn blocks(&self) -> &[WorldSet] {
        &self.blocks
    }
}

/// `(W, Π, V)`; `Π[0]` is the least element, blocks may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoSphereModel {
    pub model: Model,
    spheres: Vec<WorldSet>,
}

impl PseudoSphereModel {
    pub fn new(model: Model, spheres: Vec<WorldSet>) -> Result<Self, VError> {
        check_cover(&spheres, model.universe(), true)?;
        Ok(PseudoSphereModel { model, spheres })
    }

    pub fn spheres(&self) -> &[WorldSet] {
        &self.spheres
    }

    /// Same model with empty blocks dropped.
    pub fn without_empty(&self) -> PseudoSphereModel {
        PseudoSphereModel {
            model: self.model.clone(),
            spheres: self.spheres.iter().copied().filter(|s| !s.is_empty()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VModel {
    Relational(RelationalModel),
    Universal(UniversalModel),
    Sphere(SphereModel),
    PseudoSphere(PseudoSphereModel),
}

impl VModel {
    pub fn model(&self) -> &Model {
        match self {
            VModel::Relational(m) => &m.model,
            VModel::Universal(m) => &m.model,
            VModel::Sphere(m) => &m.model,
            VModel::PseudoSphere(m) => &m.model,
        }
    }

    /// Worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula) -> Result<WorldSet, VError> {
        if !f.is_in_dialect(Dialect::V) {
            return Err(VError::WrongDialect(render_pretty(f)));
        }
        Ok(self.ts(f))
    }

    pub fn eval(&self, world: usize, f: &Formula) -> Result<bool, VError> {
        Ok(self.truth_set(f)?.contains(world))
    }

    fn ts(&self, f: &Formula) -> WorldSet {
        let universe = self.model().universe();
        match f {
            Formula::Atom(p) => self.model().atom(p),
            Formula::Falsum => WorldSet::EMPTY,
            Formula::Not(g) => universe - self.ts(g),
            Formula::And(a, b) => self.ts(a) & self.ts(b),
            Formula::Corner(a, b) => {
                let (p, q) = (self.ts(a), self.ts(b));
                match self {
                    VModel::Relational(m) => (0..m.model.len())
                        .filter(|&w| {
                            let (dom, below) = m.gamma(w);
                            relational_clause(dom, below, p, q)
                        })
                        .collect(),
                    VModel::Universal(m) => global(minimal_clause(&m.below, p, q), universe),
                    VModel::Sphere(m) => global(sphere_clause(&m.blocks, p, q), universe),
                    VModel::PseudoSphere(m) => global(sphere_clause(&m.spheres, p, q), universe),
                }
            }
            Formula::Cond(..) => unreachable!("dialect checked"),
        }
    }
}

fn global(holds: bool, universe: WorldSet) -> WorldSet {
    if holds {
        universe
    } else {
        WorldSet::EMPTY
    }
}

/// For every φ-world in `W_w` there is a φ-world `v` in `W_w` such that every
/// φ-world `z` of `W_w` with `z ≤ v` (that is, not `v < z`) is a ψ-world.
fn relational_clause(dom: WorldSet, below: &[WorldSet], p: WorldSet, q: WorldSet) -> bool {
    let p = p & dom;
    if p.is_empty() {
        return true;
    }
    p.iter().any(|v| {
        let above_v: WorldSet = dom.iter().filter(|&z| below[z].contains(v)).collect();
        let upto_v = dom - above_v;
        (upto_v & p).is_subset(q)
    })
}

/// Every `<`-minimal φ-world is a ψ-world.
fn minimal_clause(below: &[WorldSet], p: WorldSet, q: WorldSet) -> bool {
    p.iter().filter(|&u| !below[u].intersects(p)).all(|u| q.contains(u))
}

/// The least block meeting φ has its φ-part inside ψ.
fn sphere_clause(blocks: &[WorldSet], p: WorldSet, q: WorldSet) -> bool {
    match blocks.iter().find(|b| b.intersects(p)) {
        Some(&b) => (b & p).is_subset(q),
        None => true,
    }
}

/// Blocks are the `≡`-classes of `<`, listed `≪`-least first.
pub fn universal_to_sphere(m: &UniversalModel) -> SphereModel {
    let mut classes: Vec<WorldSet> = Vec::new();
    for u in 0..m.model.len() {
        let equiv = |v: usize| !m.below[u].contains(v) && !m.below[v].contains(u);
        match classes.iter_mut().find(|c| equiv(c.iter().next().unwrap())) {
            Some(c) => c.insert(u),
            None => classes.push(WorldSet::singleton(u)),
        }
    }
    // Blocks of a strict weak order are ranked by how many worlds lie below them.
    classes.sort_by_key(|c| m.below[c.iter().next().unwrap()].len());
    SphereModel { model: m.model.clone(), blocks: classes }
}

/// `X_j = Y_j ∪ ... ∪ Y_k`.
pub fn partition_to_context(y: &[WorldSet], universe: WorldSet) -> Result<Vec<WorldSet>, VError> {
    if y.is_empty() {
        return Err(VError::BadPartition("partition has no blocks".into()));
    }
    check_cover(y, universe, false)?;
    let mut x = vec![WorldSet::EMPTY; y.len()];
    let mut acc = WorldSet::EMPTY;
    for j in (0..y.len()).rev() {
        acc |= y[j];
        x[j] = acc;
    }
    Ok(x)
}

/// `Y_i = (X_0 ∩ ... ∩ X_i) − X_{i+1}` and `Y_k = X_0 ∩ ... ∩ X_k`; requires `X_0 = W`.
pub fn context_to_partition(x: &[WorldSet], universe: WorldSet) -> Result<Vec<WorldSet>, VError> {
    match x.first() {
        Some(&x0) if x0 == universe => {}
        _ => return Err(VError::BadPartition("the first element of the sequence must be the whole world set".into())),
    }
    let mut y = Vec::with_capacity(x.len());
    let mut acc = universe;
    for i in 0..x.len() {
        acc &= x[i];
        y.push(match x.get(i + 1) {
            Some(&next) => acc - next,
            None => acc,
        });
    }
    Ok(y)
}

/// All ordered partitions of `{0..n}` into nonempty blocks.
pub fn ordered_partitions(n: usize) -> Vec<Vec<WorldSet>> {
    fn go(rest: WorldSet, cur: &mut Vec<WorldSet>, out: &mut Vec<Vec<WorldSet>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        // every nonempty subset of `rest`, in ascending bit order
        let bits = rest.bits();
        let mut sub = bits;
        let mut subs = Vec::new();
        while sub != 0 {
            subs.push(sub);
            sub = (sub - 1) & bits;
        }
        for s in subs.into_iter().rev() {
            cur.push(WorldSet::from_bits(s));
            go(rest - WorldSet::from_bits(s), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(WorldSet::full(n), &mut Vec::new(), &mut out);
    out
}

/// First pseudo-sphere model and world (ordered partitions, no empty blocks)
/// where `f` holds.
pub fn find_v_satisfying(f: &Formula, max_worlds: usize) -> Result<Option<(PseudoSphereModel, usize)>, VError> {
    if !f.is_in_dialect(Dialect::V) {
        return Err(VError::WrongDialect(render_pretty(f)));
    }
    let atoms: Vec<String> = f.atoms().into_iter().map(String::from).collect();
    if max_worlds * atoms.len() >= 40 {
        return Err(SearchError::BoundOverflow { estimate: 1u128 << (max_worlds * atoms.len()).min(127), cap: 1u128 << 40 }.into());
    }
    for n in 1..=max_worlds {
        let partitions = ordered_partitions(n);
        for v in 0..1u64 << (n * atoms.len()) {
            let val = search::valuation(v, atoms.len(), n);
            let map: BTreeMap<String, WorldSet> = atoms.iter().cloned().zip(val).collect();
            let model = Model::from_sets(n, map)?;
            for part in &partitions {
                let m = VModel::PseudoSphere(PseudoSphereModel { model: model.clone(), spheres: part.clone() });
                if let Some(w) = m.ts(f).iter().next() {
                    let VModel::PseudoSphere(ps) = m else { unreachable!() };
                    return Ok(Some((ps, w)));
                }
            }
        }
    }
    Ok(None)
}

/// Sequence context built from a pseudo-sphere system: empty blocks are
/// dropped, `Y_i` is the `i`-th block from the top, and `X = partition_to_context(Y)`.
pub fn spheres_to_context(m: &PseudoSphereModel) -> SequenceContext {
    let mut y: Vec<WorldSet> = m.spheres.iter().copied().filter(|s| !s.is_empty()).collect();
    y.reverse();
    let x = partition_to_context(&y, m.model.universe()).expect("spheres cover W");
    SequenceContext::new(x).expect("nonempty")
}

/// Pseudo-sphere system built from a sequence context: `C' = W ; C`,
/// `Y = context_to_partition(C')` and `Π = (Y_k, ..., Y_0)`.
pub fn context_to_spheres(model: &Model, c: &SequenceContext) -> PseudoSphereModel {
    let prefixed = c.update(model.universe());
    let mut y = context_to_partition(prefixed.defaults(), model.universe()).expect("starts with W");
    y.reverse();
    PseudoSphereModel { model: model.clone(), spheres: y }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportCheck {
    /// "conwon->v" or "v->conwon".
    pub direction: &'static str,
    pub world: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub conwon: Option<Countermodel>,
    pub v: Option<(PseudoSphereModel, usize)>,
    pub transports: Vec<TransportCheck>,
}

impl SatResult {
    pub fn agree(&self) -> bool {
        self.conwon.is_some() == self.v.is_some()
    }

    pub fn transports_ok(&self) -> bool {
        self.transports.iter().all(|t| t.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatReport {
    pub conwon_formula: Formula,
    pub v_formula: Formula,
    pub satisfiable: SatResult,
    /// Satisfiability of the negation; `None` means valid up to bound.
    pub falsifiable: SatResult,
}

impl FlatReport {
    pub fn agree(&self) -> bool {
        self.satisfiable.agree() && self.falsifiable.agree()
    }

    pub fn transports_ok(&self) -> bool {
        self.satisfiable.transports_ok() && self.falsifiable.transports_ok()
    }

    pub fn valid_conwon(&self) -> bool {
        self.falsifiable.conwon.is_none()
    }

    pub fn valid_v(&self) -> bool {
        self.falsifiable.v.is_none()
    }
}

fn single_conditional(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Cond(a, _) => Some(a),
        _ => None,
    }
}

fn sat_both(conwon_f: &Formula, v_f: &Formula, bounds: &Bounds) -> Result<SatResult, VError> {
    let conwon = search::find_satisfying(conwon_f, bounds)?;
    let v = find_v_satisfying(v_f, bounds.max_worlds)?;
    let mut transports = Vec::new();
    if let Some(cm) = &conwon {
        let ps = context_to_spheres(&cm.model, &cm.context);
        let holds = VModel::PseudoSphere(ps).eval(cm.world, v_f)?;
        transports.push(TransportCheck { direction: "conwon->v", world: cm.model.world_name(cm.world).into(), holds });
    }
    if let Some((ps, w)) = &v {
        // For a lone conditional with an empty antecedent the θ context suffices.
        let ctx = match single_conditional(conwon_f) {
            Some(a) if semantics::extension(&ps.model, a).map_err(SearchError::from)?.is_empty() => SequenceContext::theta(ps.model.universe()),
            _ => spheres_to_context(ps),
        };
        let holds = semantics::eval(&ps.model, &Context::Sequence(ctx), *w, conwon_f).map_err(SearchError::from)?;
        transports.push(TransportCheck { direction: "v->conwon", world: ps.model.world_name(*w).into(), holds });
    }
    Ok(SatResult { conwon, v, transports })
}

/// Bounded satisfiability and validity of a flat formula in both logics,
/// with every witness carried across and re-checked on the other side.
pub fn flat_equivalence_check(f: &Formula, bounds: &Bounds) -> Result<FlatReport, VError> {
    if !f.is_flat() {
        return Err(FormulaError::NotFlat(render_pretty(f)).into());
    }
    let conwon_f = translate_flat(f, Dialect::ConWon)?;
    let v_f = translate_flat(f, Dialect::V)?;
    let satisfiable = sat_both(&conwon_f, &v_f, bounds)?;
    let falsifiable = sat_both(&crate::formula::not(conwon_f.clone()), &crate::formula::not(v_f.clone()), bounds)?;
    Ok(FlatReport { conwon_formula: conwon_f, v_formula: v_f, satisfiable, falsifiable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn fact_model() -> RelationalModel {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), vec!["w1"]);
        val.insert("q".to_string(), vec!["w1", "w2"]);
        let m = Model::new(["w1", "w2"], val).unwrap();
        RelationalModel::uniform(m, &[("w2".into(), "w1".into())]).unwrap()
    }

    #[test]
    fn fact_countermodel() {
        let m = VModel::Relational(fact_model());
        let f = parse_formula("E (p & q) -> (p |> (q |> p & q))", Dialect::V).unwrap();
        assert!(!m.eval(0, &f).unwrap());
        assert!(m.eval(0, &parse_formula("E (p & q)", Dialect::V).unwrap()).unwrap());
        assert!(!m.eval(0, &parse_formula("q |> p & q", Dialect::V).unwrap()).unwrap());
    }

    #[test]
    fn order_validation() {
        let m = Model::from_sets(3, BTreeMap::new()).unwrap();
        // 0 < 1 but 2 unrelated to both: not almost connected
        let below = vec![WorldSet::EMPTY, WorldSet::singleton(0), WorldSet::EMPTY];
        assert!(matches!(
            UniversalModel::new(m.clone(), below),
            Err(VError::BadOrder { property: "almost connected", .. })
        ));
        let cyc = vec![WorldSet::singleton(1), WorldSet::singleton(0), WorldSet::EMPTY];
        assert!(UniversalModel::new(m, cyc).is_err());
    }

    #[test]
    fn sphere_conversion() {
        let m = Model::from_sets(3, BTreeMap::new()).unwrap();
        // w3 < w1, w3 < w2
        let below = vec![WorldSet::singleton(2), WorldSet::singleton(2), WorldSet::EMPTY];
        let s = universal_to_sphere(&UniversalModel::new(m.clone(), below).unwrap());
        assert_eq!(s.blocks(), [WorldSet::singleton(2), WorldSet::from_bits(0b011)]);
        let s = universal_to_sphere(&UniversalModel::new(m, vec![WorldSet::EMPTY; 3]).unwrap());
        assert_eq!(s.blocks(), [WorldSet::full(3)]);
    }

    #[test]
    fn transformations() {
        let u = WorldSet::full(3);
        let y = [WorldSet::singleton(0), WorldSet::singleton(1), WorldSet::singleton(2)];
        let x = partition_to_context(&y, u).unwrap();
        assert_eq!(x, [u, WorldSet::from_bits(0b110), WorldSet::singleton(2)]);
        assert_eq!(context_to_partition(&x, u).unwrap(), y);
        assert_eq!(partition_to_context(&[u], u).unwrap(), [u]);
        assert!(context_to_partition(&[WorldSet::singleton(0)], u).is_err());
        assert_eq!(ordered_partitions(3).len(), 13);
        assert_eq!(ordered_partitions(4).len(), 75);
    }

    #[test]
    fn flat_check_single_conditional() {
        let f = parse_formula("[p] q", Dialect::ConWon).unwrap();
        let r = flat_equivalence_check(&f, &Bounds::new(3, 5)).unwrap();
        assert!(r.agree() && r.transports_ok());
        assert!(r.satisfiable.conwon.is_some());
        assert!(!r.valid_conwon());
    }
}
