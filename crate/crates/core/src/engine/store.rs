//! The fact store: classes, linear systems, structural facts and the DAG.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use num_traits::Zero;

use super::classes::{self, pair, CircleClasses, FactId, LineClasses, Member, Pt};
use super::lattice::{Constant, LatticeSystem, RowId, Var};
use super::rational::{int_vector, RationalSystem};
use super::rules::RuleId;
use crate::construction::{seed_facts, Construction};
use crate::fact::{Fact, Predicate};
use crate::label::Label;
use crate::numeric::{eval_fact, NumericModel, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    Direction,
    Length,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Direction => "direction",
            System::Length => "length",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    ConstructionSemantics { step: usize },
    RuleApplication { rule: RuleId, premises: Vec<FactId> },
    /// `Σ mᵢ·rowᵢ = scale·(queried equation)`.
    LinearCertificate { system: System, rows: Vec<(RowId, i64)>, scale: i64 },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub fact: Fact,
    pub justification: Justification,
    pub level: usize,
}

/// Facts in insertion order with their justifications. Row sources map each
/// linear-system row to the fact that contributed it.
#[derive(Clone, Debug, Default)]
pub struct ProofDag {
    nodes: Vec<Node>,
    direction_rows: Vec<FactId>,
    length_rows: Vec<FactId>,
}

impl ProofDag {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: FactId) -> &Node {
        &self.nodes[id]
    }

    pub fn get(&self, id: FactId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn row_source(&self, system: System, row: RowId) -> Option<FactId> {
        match system {
            System::Direction => self.direction_rows.get(row).copied(),
            System::Length => self.length_rows.get(row).copied(),
        }
    }

    /// Fact ids a node directly depends on.
    pub fn premises(&self, id: FactId) -> Vec<FactId> {
        match &self.nodes[id].justification {
            Justification::ConstructionSemantics { .. } => Vec::new(),
            Justification::RuleApplication { premises, .. } => premises.clone(),
            Justification::LinearCertificate { system, rows, .. } => {
                let mut out: Vec<FactId> =
                    rows.iter().filter_map(|&(r, _)| self.row_source(*system, r)).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    New(FactId),
    Known,
    RejectedNumeric,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("fact store capacity of {0} facts exceeded")]
    Capacity(usize),
    #[error("seeded fact {0} is false on the witness")]
    SeedRejected(Fact),
    #[error("fact {0} mentions a label that is not a point of the construction")]
    UnknownLabel(Fact),
}

/// Derivability answer from [`FactStore::query`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Handle {
    Stored(FactId),
    Derived(Justification),
}

/// Relations that rules read; used to skip rules whose inputs did not change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lines,
    Circles,
    Directions,
    Lengths,
    Midp,
    Simtri,
}

#[derive(Clone, Debug)]
pub struct Rejection {
    pub fact: Fact,
    pub rule: Option<RuleId>,
    pub premises: Vec<FactId>,
}

#[derive(Clone, Debug)]
pub struct FactStore {
    labels: Vec<Label>,
    index: HashMap<Label, Pt>,
    witnesses: Vec<NumericModel>,
    tol: Tolerances,
    dag: ProofDag,
    known: HashMap<Fact, FactId>,
    lines: LineClasses,
    circles: CircleClasses,
    directions: LatticeSystem,
    lengths: RationalSystem,
    structural: BTreeMap<Predicate, Vec<FactId>>,
    rejected: Vec<Rejection>,
    pub(crate) touched: BTreeSet<Relation>,
    pub(crate) level: usize,
    pub(crate) max_facts: usize,
}

pub(crate) fn half() -> Constant {
    Ratio::new(1, 2)
}

impl FactStore {
    /// An empty store over the points of `w` (in witness order). Further
    /// witnesses act as an additional numeric firewall.
    pub fn empty(w: NumericModel, checks: Vec<NumericModel>, tol: Tolerances) -> FactStore {
        let labels: Vec<Label> = w.points().map(|(l, _)| l.clone()).collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut witnesses = vec![w];
        witnesses.extend(checks);
        FactStore {
            labels,
            index,
            witnesses,
            tol,
            dag: ProofDag::default(),
            known: HashMap::new(),
            lines: LineClasses::default(),
            circles: CircleClasses::default(),
            directions: LatticeSystem::new(),
            lengths: RationalSystem::new(),
            structural: BTreeMap::new(),
            rejected: Vec::new(),
            touched: BTreeSet::new(),
            level: 0,
            max_facts: super::SaturationLimits::default().max_facts,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, p: Pt) -> &Label {
        &self.labels[p]
    }

    pub fn point(&self, l: &Label) -> Option<Pt> {
        self.index.get(l).copied()
    }

    pub fn witness(&self) -> &NumericModel {
        &self.witnesses[0]
    }

    pub fn witnesses(&self) -> &[NumericModel] {
        &self.witnesses
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn dag(&self) -> &ProofDag {
        &self.dag
    }

    pub fn into_dag(self) -> ProofDag {
        self.dag
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn rejected(&self) -> &[Rejection] {
        &self.rejected
    }

    pub fn lines(&self) -> &LineClasses {
        &self.lines
    }

    pub fn circles(&self) -> &CircleClasses {
        &self.circles
    }

    pub fn directions(&self) -> &LatticeSystem {
        &self.directions
    }

    pub fn lengths(&self) -> &RationalSystem {
        &self.lengths
    }

    pub fn structural(&self, pred: Predicate) -> &[FactId] {
        self.structural.get(&pred).map_or(&[], Vec::as_slice)
    }

    pub fn id_of(&self, f: &Fact) -> Option<FactId> {
        self.known.get(f).copied()
    }

    /// Variable of the direction (or log-length) of the segment `ab`.
    pub fn var(&self, a: Pt, b: Pt) -> Var {
        let (a, b) = pair(a, b);
        a * self.labels.len() + b
    }

    pub fn var_pair(&self, v: Var) -> (Pt, Pt) {
        (v / self.labels.len(), v % self.labels.len())
    }

    fn pts(&self, f: &Fact) -> Option<Vec<Pt>> {
        f.args().iter().map(|l| self.point(l)).collect()
    }

    /// Whether `f` holds on every witness.
    pub fn holds(&self, f: &Fact) -> bool {
        self.witnesses.iter().all(|w| eval_fact(w, f, &self.tol))
    }

    /// Direction-system row of a para/perp/eqangle fact.
    pub fn direction_equation(&self, f: &Fact) -> Option<(BTreeMap<Var, i64>, Constant)> {
        let p = self.pts(f)?;
        let mut v = BTreeMap::new();
        let mut add = |var: Var, a: i64| *v.entry(var).or_insert(0) += a;
        let constant = match f.predicate() {
            Predicate::Para | Predicate::Perp => {
                add(self.var(p[0], p[1]), 1);
                add(self.var(p[2], p[3]), -1);
                if f.predicate() == Predicate::Perp { half() } else { Constant::zero() }
            }
            Predicate::Eqangle => {
                add(self.var(p[0], p[1]), -1);
                add(self.var(p[2], p[3]), 1);
                add(self.var(p[4], p[5]), 1);
                add(self.var(p[6], p[7]), -1);
                Constant::zero()
            }
            _ => return None,
        };
        v.retain(|_, a| *a != 0);
        Some((v, constant))
    }

    /// Length-system row of a cong/eqratio fact.
    pub fn length_equation(&self, f: &Fact) -> Option<BTreeMap<Var, i64>> {
        let p = self.pts(f)?;
        let mut v = BTreeMap::new();
        let mut add = |var: Var, a: i64| *v.entry(var).or_insert(0) += a;
        match f.predicate() {
            Predicate::Cong => {
                add(self.var(p[0], p[1]), 1);
                add(self.var(p[2], p[3]), -1);
            }
            Predicate::Eqratio => {
                add(self.var(p[0], p[1]), 1);
                add(self.var(p[2], p[3]), -1);
                add(self.var(p[4], p[5]), -1);
                add(self.var(p[6], p[7]), 1);
            }
            _ => return None,
        }
        v.retain(|_, a| *a != 0);
        Some(v)
    }

    fn line_members(&self, class: usize) -> Vec<Member> {
        self.lines
            .facts(class)
            .iter()
            .map(|&id| Member {
                fact: id,
                points: self.pts(&self.dag.nodes[id].fact).unwrap_or_default().into_iter().collect(),
                center: None,
            })
            .collect()
    }

    fn circle_members(&self, facts: &[FactId]) -> Vec<Member> {
        facts
            .iter()
            .map(|&id| {
                let f = &self.dag.nodes[id].fact;
                let p = self.pts(f).unwrap_or_default();
                if f.predicate() == Predicate::Circle {
                    Member { fact: id, points: p[1..].iter().copied().collect(), center: Some(p[0]) }
                } else {
                    Member { fact: id, points: p.into_iter().collect(), center: None }
                }
            })
            .collect()
    }

    /// Whether `f` follows from the current store, and why.
    pub fn query(&self, f: &Fact) -> Option<Handle> {
        if let Some(&id) = self.known.get(f) {
            return Some(Handle::Stored(id));
        }
        if f.is_degenerate() {
            return None;
        }
        let p = self.pts(f)?;
        match f.predicate() {
            Predicate::Coll => {
                let class = self.lines.class_of(p[0], p[1])?;
                if !self.lines.points(class).contains(&p[2]) {
                    return None;
                }
                let premises = classes::explain(&self.line_members(class), &p, None, true)?;
                Some(Handle::Derived(Justification::RuleApplication { rule: RuleId::CollClosure, premises }))
            }
            Predicate::Cyclic | Predicate::Circle => {
                let (center, on) = if f.predicate() == Predicate::Circle {
                    (Some(p[0]), &p[1..])
                } else {
                    (None, &p[..])
                };
                let class = self.circles.find(center, on)?;
                let premises = classes::explain(&self.circle_members(&class.facts), on, center, false)?;
                Some(Handle::Derived(Justification::RuleApplication { rule: RuleId::CircleClosure, premises }))
            }
            Predicate::Para | Predicate::Perp | Predicate::Eqangle => {
                if f.is_trivial() {
                    return None;
                }
                let (v, k) = self.direction_equation(f)?;
                let combo = self.directions.certify(&v, k)?;
                Some(Handle::Derived(Justification::LinearCertificate {
                    system: System::Direction,
                    rows: combo.0.into_iter().collect(),
                    scale: 1,
                }))
            }
            Predicate::Cong | Predicate::Eqratio => {
                if f.is_trivial() {
                    return None;
                }
                let v = self.length_equation(f)?;
                let c = self.lengths.certify(&int_vector(v))?;
                Some(Handle::Derived(Justification::LinearCertificate {
                    system: System::Length,
                    rows: c.multipliers.into_iter().collect(),
                    scale: c.scale,
                }))
            }
            Predicate::Midp | Predicate::Simtri | Predicate::Contri => None,
        }
    }

    pub fn is_known(&self, f: &Fact) -> bool {
        self.query(f).is_some()
    }

    fn add_node(&mut self, f: Fact, j: Justification) -> Result<FactId, EngineError> {
        if self.dag.nodes.len() >= self.max_facts {
            return Err(EngineError::Capacity(self.max_facts));
        }
        let id = self.dag.nodes.len();
        self.dag.nodes.push(Node { fact: f.clone(), justification: j, level: self.level });
        self.known.insert(f, id);
        Ok(id)
    }

    /// Returns a stored id for a derivable fact, recording the derivation as
    /// a node when it was only implied.
    pub fn materialize(&mut self, f: &Fact) -> Result<Option<FactId>, EngineError> {
        match self.query(f) {
            None => Ok(None),
            Some(Handle::Stored(id)) => Ok(Some(id)),
            Some(Handle::Derived(j)) => {
                if !self.holds(f) {
                    log::warn!("derivable fact {f} fails numerically; not recorded");
                    return Ok(None);
                }
                self.add_node(f.clone(), j).map(Some)
            }
        }
    }

    pub fn insert_fact(&mut self, f: Fact, j: Justification) -> Result<InsertOutcome, EngineError> {
        if f.is_trivial() || self.is_known(&f) {
            return Ok(InsertOutcome::Known);
        }
        let Some(p) = self.pts(&f) else {
            return Err(EngineError::UnknownLabel(f));
        };
        if !self.holds(&f) {
            let (rule, premises) = match &j {
                Justification::RuleApplication { rule, premises } => (Some(*rule), premises.clone()),
                _ => (None, Vec::new()),
            };
            log::debug!("rejected {f} from {rule:?} on premises {premises:?}");
            self.rejected.push(Rejection { fact: f, rule, premises });
            return Ok(InsertOutcome::RejectedNumeric);
        }
        let pred = f.predicate();
        let id = self.add_node(f.clone(), j)?;
        match pred {
            Predicate::Coll => {
                for ((a, b), (c, d)) in self.lines.add_coll(p[0], p[1], p[2], id) {
                    let row = [(self.var(a, b), 1), (self.var(c, d), -1)];
                    self.directions.add_row(row, Constant::zero());
                    self.dag.direction_rows.push(id);
                    self.touched.insert(Relation::Directions);
                }
                self.touched.insert(Relation::Lines);
            }
            Predicate::Para | Predicate::Perp | Predicate::Eqangle => {
                let (v, k) = self.direction_equation(&f).expect("direction fact");
                self.directions.add_row(v, k);
                self.dag.direction_rows.push(id);
                self.touched.insert(Relation::Directions);
            }
            Predicate::Cong | Predicate::Eqratio => {
                let v = self.length_equation(&f).expect("length fact");
                self.lengths.add_row(v);
                self.dag.length_rows.push(id);
                self.touched.insert(Relation::Lengths);
            }
            Predicate::Cyclic => {
                self.circles.add(None, &p, id);
                self.touched.insert(Relation::Circles);
            }
            Predicate::Circle => {
                self.circles.add(Some(p[0]), &p[1..], id);
                self.structural.entry(pred).or_default().push(id);
                self.touched.insert(Relation::Circles);
            }
            Predicate::Midp => {
                self.structural.entry(pred).or_default().push(id);
                self.touched.insert(Relation::Midp);
            }
            Predicate::Simtri | Predicate::Contri => {
                self.structural.entry(pred).or_default().push(id);
                self.touched.insert(Relation::Simtri);
            }
        }
        Ok(InsertOutcome::New(id))
    }
}

/// Seeds a store with the construction semantics of `c`.
pub fn init_store_with(
    c: &Construction,
    w: NumericModel,
    checks: Vec<NumericModel>,
    tol: &Tolerances,
) -> Result<FactStore, EngineError> {
    let mut s = FactStore::empty(w, checks, *tol);
    for seeded in seed_facts(c) {
        let j = Justification::ConstructionSemantics { step: seeded.step };
        match s.insert_fact(seeded.fact.clone(), j)? {
            InsertOutcome::RejectedNumeric => return Err(EngineError::SeedRejected(seeded.fact)),
            InsertOutcome::New(_) | InsertOutcome::Known => {}
        }
    }
    Ok(s)
}

pub fn init_store(c: &Construction, w: &NumericModel) -> Result<FactStore, EngineError> {
    init_store_with(c, w.clone(), Vec::new(), &Tolerances::default())
}
