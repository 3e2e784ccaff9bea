//! Deduction database: a fact store with line and circle classes, an angle
//! lattice and a log-length system, a fixed rule catalog and a level-wise
//! saturation loop recording every derivation.

pub mod classes;
pub mod lattice;
pub mod rational;
mod rules;
mod store;

use std::time::{Duration, Instant};

pub use classes::FactId;
pub use rules::RuleId;
pub use store::{
    init_store, init_store_with, EngineError, FactStore, Handle, InsertOutcome, Justification, Node, ProofDag,
    Rejection, Relation, System,
};

use crate::construction::{Construction, GoalStatement};
use crate::fact::Fact;
use crate::numeric::{derive_seed, instantiate, NumericError, NumericModel, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationLimits {
    pub max_levels: usize,
    pub max_facts: usize,
    pub time_budget: Duration,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits { max_levels: 12, max_facts: 100_000, time_budget: Duration::from_secs(10) }
    }
}

impl SaturationLimits {
    pub fn is_valid(&self) -> bool {
        self.max_levels > 0 && self.max_facts > 0 && !self.time_budget.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Fixpoint,
    LevelCap,
    FactCap,
    TimeCap,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::Fixpoint => "fixpoint",
            StopReason::LevelCap => "levelcap",
            StopReason::FactCap => "factcap",
            StopReason::TimeCap => "timecap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    /// Deepest level at which a new fact was derived.
    pub levels: usize,
    pub fact_count: usize,
    pub new_facts: usize,
    pub stopped: StopReason,
    pub elapsed: Duration,
}

/// Runs rule levels until nothing new is derived or a limit is hit.
pub fn saturate(s: &mut FactStore, lim: &SaturationLimits) -> SaturationReport {
    let start = Instant::now();
    s.max_facts = lim.max_facts;
    let before = s.len();
    let mut changed = std::mem::take(&mut s.touched);
    let mut levels_run = 0;
    let mut deepest = 0;
    let mut new_facts = 0;
    let stopped = 'outer: loop {
        if changed.is_empty() {
            break StopReason::Fixpoint;
        }
        if levels_run >= lim.max_levels {
            s.touched.extend(changed);
            break StopReason::LevelCap;
        }
        if start.elapsed() > lim.time_budget {
            s.touched.extend(changed);
            break StopReason::TimeCap;
        }
        levels_run += 1;
        s.level += 1;
        let candidates = rules::candidates(s, &changed);
        log::debug!("level {}: {} candidates", s.level, candidates.len());
        for (i, cand) in candidates.into_iter().enumerate() {
            if i % 32 == 0 && start.elapsed() > lim.time_budget {
                s.touched.extend(changed);
                break 'outer StopReason::TimeCap;
            }
            if cand.conclusions.iter().all(|f| s.is_known(f)) {
                continue;
            }
            let mut premises = Vec::with_capacity(cand.premises.len());
            for p in &cand.premises {
                match s.materialize(p) {
                    Ok(Some(id)) => premises.push(id),
                    Ok(None) => {
                        log::debug!("{}: premise {p} not derivable; match skipped", cand.rule);
                        break;
                    }
                    Err(_) => {
                        s.touched.extend(changed);
                        break 'outer StopReason::FactCap;
                    }
                }
            }
            if premises.len() != cand.premises.len() {
                continue;
            }
            premises.sort_unstable();
            premises.dedup();
            for f in cand.conclusions {
                let j = Justification::RuleApplication { rule: cand.rule, premises: premises.clone() };
                match s.insert_fact(f, j) {
                    Ok(InsertOutcome::New(_)) => {
                        new_facts += 1;
                        deepest = s.level;
                    }
                    Ok(_) => {}
                    Err(_) => {
                        s.touched.extend(changed);
                        break 'outer StopReason::FactCap;
                    }
                }
            }
        }
        changed = std::mem::take(&mut s.touched);
    };
    let report = SaturationReport {
        levels: deepest,
        fact_count: s.len(),
        new_facts,
        stopped,
        elapsed: start.elapsed(),
    };
    log::debug!("saturation: {} facts ({} new), {:?}", report.fact_count, s.len() - before, stopped);
    report
}

/// Checks that `conclusion` follows from `premises` alone by the step kind
/// `how`: the premises are loaded into a fresh store over the same
/// witnesses, then the rule is matched again or the query answered again.
pub fn rederive(
    witnesses: &[NumericModel],
    tol: &Tolerances,
    premises: &[Fact],
    how: &Justification,
    conclusion: &Fact,
) -> bool {
    let Some((w, checks)) = witnesses.split_first() else { return false };
    let mut s = FactStore::empty(w.clone(), checks.to_vec(), *tol);
    for p in premises {
        let j = Justification::ConstructionSemantics { step: 0 };
        if !matches!(s.insert_fact(p.clone(), j), Ok(InsertOutcome::New(_) | InsertOutcome::Known)) {
            return false;
        }
    }
    match how {
        Justification::ConstructionSemantics { .. } => premises.contains(conclusion),
        Justification::LinearCertificate { .. }
        | Justification::RuleApplication { rule: RuleId::CollClosure | RuleId::CircleClosure, .. } => {
            s.is_known(conclusion)
        }
        Justification::RuleApplication { rule, .. } => {
            let all = [
                Relation::Lines,
                Relation::Circles,
                Relation::Directions,
                Relation::Lengths,
                Relation::Midp,
                Relation::Simtri,
            ]
            .into_iter()
            .collect();
            rules::candidates(&s, &all)
                .iter()
                .any(|c| c.rule == *rule && c.conclusions.contains(conclusion))
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProveError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A saturated store and, when the goal was derived, its node.
#[derive(Debug)]
pub struct ProofRun {
    pub store: FactStore,
    pub report: SaturationReport,
    pub root: Option<FactId>,
}

/// Number of extra witnesses every inserted fact is checked against.
pub const CHECK_WITNESSES: u64 = 2;
const CHECK_SEED_BASE: u64 = 1 << 32;

pub fn prove(
    c: &Construction,
    g: &GoalStatement,
    lim: &SaturationLimits,
    seed: u64,
    tol: &Tolerances,
) -> Result<ProofRun, ProveError> {
    let w = instantiate(c, seed, tol)?;
    let checks = (0..CHECK_WITNESSES)
        .filter_map(|i| instantiate(c, derive_seed(seed, CHECK_SEED_BASE + i), tol).ok())
        .collect();
    let mut store = init_store_with(c, w, checks, tol)?;
    let report = saturate(&mut store, lim);
    let goal = g.to_fact();
    let root = store.materialize(&goal).unwrap_or(None);
    Ok(ProofRun { store, report, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::parse_source;
    use crate::fact::Predicate;
    use crate::numeric::eval_fact;

    pub(crate) fn run(src: &str) -> ProofRun {
        let s = parse_source(src).unwrap();
        prove(&s.construction, &s.goals[0], &SaturationLimits::default(), 0, &Tolerances::default()).unwrap()
    }

    fn f(pred: Predicate, args: &[&str]) -> Fact {
        Fact::parse_args(pred, args)
    }

    const EULER: &str = "point A, B, C\ncircumcenter O A B C\ncentroid G A B C\northocenter H A B C\ngoal coll O G H\n";

    fn store_for(src: &str) -> FactStore {
        let s = parse_source(src).unwrap();
        let w = instantiate(&s.construction, 0, &Tolerances::default()).unwrap();
        init_store(&s.construction, &w).unwrap()
    }

    fn assert_sound(s: &FactStore, c: &Construction) {
        let t = Tolerances::default().with_eq_tol(1e-7);
        for seed in 100..105 {
            let w = instantiate(c, seed, &t).unwrap();
            for n in s.dag().nodes() {
                assert!(eval_fact(&w, &n.fact, &t), "{} fails on seed {seed}", n.fact);
            }
        }
    }

    #[test]
    fn euler_line_is_derived() {
        let r = run(EULER);
        assert!(r.root.is_some());
        assert_eq!(r.report.stopped, StopReason::Fixpoint);
        assert!(r.store.rejected().is_empty());
        let c = parse_source(EULER).unwrap().construction;
        assert_sound(&r.store, &c);
    }

    #[test]
    fn theorem_suite() {
        let cases = [
            "point A, B, C\nmidpoint M A B\nmidpoint N A C\ngoal para M N B C",
            "point A, B, C\ncircumcenter O A B C\ngoal cong O A O C",
            "point A, B\nmidpoint O A B\ncircle c O A\non C c\ngoal perp C A C B",
            "point A, B, C\ncircumcircle c A B C\non D c\ngoal eqangle C A C B D A D B",
            "point O, A\ncircle c O A\non B c\ngoal eqangle A O A B A B B O",
            "point A, B, X, Y\ncircumcenter P A B X\ncircumcenter Q A B Y\ngoal perp P Q A B",
        ];
        for src in cases {
            let r = run(src);
            assert!(r.root.is_some(), "not proved: {src}");
        }
    }

    #[test]
    fn midline_at_level_one() {
        let r = run("point A, B, C\nmidpoint M A B\nmidpoint N A C\ngoal para M N B C");
        let root = r.root.unwrap();
        let node = r.store.dag().node(root);
        assert_eq!(node.level, 1);
        assert!(matches!(node.justification, Justification::RuleApplication { rule: RuleId::R03, .. }));
    }

    #[test]
    fn circumcenter_circle_and_radius() {
        let mut s = store_for("point A, B, C\ncircumcenter O A B C");
        saturate(&mut s, &SaturationLimits::default());
        let circle = s.id_of(&f(Predicate::Circle, &["O", "A", "B", "C"])).expect("R05 fired");
        assert!(matches!(
            s.dag().node(circle).justification,
            Justification::RuleApplication { rule: RuleId::R05, .. }
        ));
        assert!(s.is_known(&f(Predicate::Cong, &["O", "A", "O", "C"])));
    }

    #[test]
    fn second_saturation_is_a_fixpoint() {
        let mut s = store_for(EULER);
        saturate(&mut s, &SaturationLimits::default());
        let again = saturate(&mut s, &SaturationLimits::default());
        assert_eq!(again.stopped, StopReason::Fixpoint);
        assert_eq!(again.new_facts, 0);
    }

    #[test]
    fn level_cap_is_reported() {
        let mut s = store_for(EULER);
        let lim = SaturationLimits { max_levels: 1, ..Default::default() };
        assert_eq!(saturate(&mut s, &lim).stopped, StopReason::LevelCap);
        let cap = s.len() + 1;
        let lim = SaturationLimits { max_facts: cap, ..Default::default() };
        assert_eq!(saturate(&mut s, &lim).stopped, StopReason::FactCap);
        assert_eq!(s.len(), cap);
    }

    #[test]
    fn midpoint_seed_store() {
        let s = store_for("point A, B\nmidpoint M A B");
        assert!(matches!(
            s.query(&f(Predicate::Coll, &["M", "A", "B"])),
            Some(Handle::Stored(_))
        ));
        assert!(s.is_known(&f(Predicate::Cong, &["M", "A", "M", "B"])));
        assert_eq!(s.structural(Predicate::Midp).len(), 1);
    }

    #[test]
    fn insert_outcomes() {
        let mut s = store_for("point A, B, C, D\nline l A B\non E l");
        let j = || Justification::ConstructionSemantics { step: 0 };
        // Collinear by construction: A, B, E.
        assert!(s.is_known(&f(Predicate::Coll, &["A", "B", "E"])));
        let cong = f(Predicate::Cong, &["A", "B", "C", "D"]);
        // False on the witness: rejected, not stored.
        assert_eq!(s.insert_fact(cong.clone(), j()).unwrap(), InsertOutcome::RejectedNumeric);
        assert!(!s.is_known(&cong));
        assert_eq!(s.rejected().len(), 1);
        let para = f(Predicate::Para, &["A", "B", "C", "D"]);
        assert_eq!(s.insert_fact(para, j()).unwrap(), InsertOutcome::RejectedNumeric);
    }

    #[test]
    fn class_growth_and_duplicates() {
        let mut s = store_for("point A, B\nline l A B\non C l\non X l");
        let j = || Justification::ConstructionSemantics { step: 3 };
        let coll = f(Predicate::Coll, &["A", "B", "X"]);
        // Already implied by the carrier.
        assert_eq!(s.insert_fact(coll, j()).unwrap(), InsertOutcome::Known);
        assert!(s.is_known(&f(Predicate::Coll, &["C", "X", "A"])));
        let a = s.point(&crate::Label::new("A").unwrap()).unwrap();
        let b = s.point(&crate::Label::new("B").unwrap()).unwrap();
        let class = s.lines().class_of(a, b).unwrap();
        assert_eq!(s.lines().points(class).len(), 4);
        let cong = f(Predicate::Cong, &["A", "C", "A", "C"]);
        assert_eq!(s.insert_fact(cong, j()).unwrap(), InsertOutcome::Known);
    }

    #[test]
    fn chase_certificate_for_perp() {
        let s = store_for("point A, B, C\nline l B C\nfoot D A l");
        assert!(s.is_known(&f(Predicate::Perp, &["A", "D", "B", "C"])));
        // AD ⊥ BC and D on BC gives AD ⊥ DC.
        let derived = f(Predicate::Perp, &["A", "D", "D", "C"]);
        match s.query(&derived) {
            Some(Handle::Derived(Justification::LinearCertificate { system, rows, scale })) => {
                assert_eq!(system, System::Direction);
                assert_eq!(scale, 1);
                assert!(rows.len() >= 2);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn scalene_triangle_has_no_isosceles_proof() {
        let r = run("point A, B, C\ngoal cong A B A C");
        assert!(r.root.is_none());
    }
}
