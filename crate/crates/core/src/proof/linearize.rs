use std::collections::HashMap;
use std::hash::Hash;

use super::{AngleMark, CircleMark, DocFact, Highlight, ParallelMark, ProofStep, PrunedDag, TickMark};
use crate::engine::{Justification, ProofDag, RuleId, System};
use crate::fact::{Fact, Predicate};
use crate::label::Label;
use crate::numeric::NumericModel;

/// Short caption title for a step's rule.
pub fn caption_title(rule: &str) -> &'static str {
    match RuleId::from_code(rule) {
        Some(RuleId::R01) => "Midpoint",
        Some(RuleId::R02) => "Midpoint from equal distances",
        Some(RuleId::R03) => "Midsegment",
        Some(RuleId::R04) => "Perpendicular bisector",
        Some(RuleId::R05) => "Equidistant points lie on a circle",
        Some(RuleId::R06) => "Radius",
        Some(RuleId::R07) => "Angle in a semicircle",
        Some(RuleId::R08) => "Right angle on a diameter",
        Some(RuleId::R09) => "Inscribed angles",
        Some(RuleId::R10) => "Equal angles over a chord",
        Some(RuleId::R11) => "Isosceles base angles",
        Some(RuleId::R12) => "Equal base angles",
        Some(RuleId::R13) => "Similar triangles (two angles)",
        Some(RuleId::R14) => "Similar triangles",
        Some(RuleId::R15) => "Similar triangles (angle and sides)",
        Some(RuleId::R16) => "Congruent triangles",
        Some(RuleId::R17) => "One parallel through a point",
        Some(RuleId::CollClosure) => "Collinear",
        Some(RuleId::CircleClosure) => "Concyclic",
        None if rule == "construction" => "Given",
        None => "Chase",
    }
}

/// Union-find keyed by arbitrary values.
struct Classes<K> {
    index: HashMap<K, usize>,
    parent: Vec<usize>,
    numbers: HashMap<usize, usize>,
}

impl<K: Hash + Eq + Clone> Classes<K> {
    fn new() -> Self {
        Classes { index: HashMap::new(), parent: Vec::new(), numbers: HashMap::new() }
    }

    fn id(&mut self, k: &K) -> usize {
        if let Some(&i) = self.index.get(k) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.index.insert(k.clone(), i);
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: &K, b: &K) {
        let (x, y) = (self.id(a), self.id(b));
        let (x, y) = (self.find(x), self.find(y));
        if x != y {
            self.parent[y.max(x)] = x.min(y);
        }
    }

    /// Display number of `k`'s class, numbered in order of first request.
    fn number(&mut self, k: &K) -> usize {
        let i = self.id(k);
        let root = self.find(i);
        let next = self.numbers.len();
        *self.numbers.entry(root).or_insert(next)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum AngleKey {
    At(Label, Label, Label),
    Right,
}

fn seg(a: &Label, b: &Label) -> [Label; 2] {
    if a <= b { [a.clone(), b.clone()] } else { [b.clone(), a.clone()] }
}

/// The vertex shared by two segments and the two other endpoints.
fn corner(p: &[Label], q: &[Label]) -> Option<(Label, Label, Label)> {
    for i in 0..2 {
        for j in 0..2 {
            if p[i] == q[j] && p[1 - i] != q[1 - j] {
                let (r1, r2) = (p[1 - i].clone(), q[1 - j].clone());
                let (r1, r2) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
                return Some((p[i].clone(), r1, r2));
            }
        }
    }
    None
}

struct Marks {
    angles: Classes<AngleKey>,
    ticks: Classes<[Label; 2]>,
    parallels: Classes<[Label; 2]>,
}

impl Marks {
    fn learn(&mut self, f: &Fact) {
        let a = f.args();
        match f.predicate() {
            Predicate::Eqangle => {
                let (x, y) = (corner(&a[0..2], &a[2..4]), corner(&a[4..6], &a[6..8]));
                match (x, y) {
                    (Some(x), Some(y)) => self.angles.union(&AngleKey::At(x.0, x.1, x.2), &AngleKey::At(y.0, y.1, y.2)),
                    (Some(x), None) | (None, Some(x)) => {
                        self.angles.id(&AngleKey::At(x.0, x.1, x.2));
                    }
                    (None, None) => {}
                }
            }
            Predicate::Perp => {
                if let Some(x) = corner(&a[0..2], &a[2..4]) {
                    self.angles.union(&AngleKey::Right, &AngleKey::At(x.0, x.1, x.2));
                }
            }
            Predicate::Cong => self.ticks.union(&seg(&a[0], &a[1]), &seg(&a[2], &a[3])),
            Predicate::Midp => self.ticks.union(&seg(&a[0], &a[1]), &seg(&a[0], &a[2])),
            Predicate::Contri => {
                for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                    self.ticks.union(&seg(&a[i], &a[j]), &seg(&a[i + 3], &a[j + 3]));
                }
            }
            Predicate::Para => self.parallels.union(&seg(&a[0], &a[1]), &seg(&a[2], &a[3])),
            _ => {}
        }
    }

    fn highlight(&mut self, facts: &[&Fact], w: &NumericModel) -> Highlight {
        let mut h = Highlight::default();
        for f in facts {
            let a = f.args();
            h.points.extend(a.iter().cloned());
            match f.predicate() {
                Predicate::Coll => {
                    let pairs = [(0, 1), (0, 2), (1, 2)];
                    let dist = |&(i, j): &(usize, usize)| {
                        match (w.point(&a[i]), w.point(&a[j])) {
                            (Some(p), Some(q)) => (p - q).norm(),
                            _ => 0.0,
                        }
                    };
                    let (i, j) = pairs.iter().copied().max_by(|x, y| dist(x).total_cmp(&dist(y))).unwrap_or((0, 1));
                    h.lines.push(seg(&a[i], &a[j]));
                }
                Predicate::Para => {
                    for k in [0, 2] {
                        let l = seg(&a[k], &a[k + 1]);
                        let mark_class = self.parallels.number(&l);
                        h.lines.push(l.clone());
                        h.segments.push(l.clone());
                        h.parallel_marks.push(ParallelMark { line: l, mark_class });
                    }
                }
                Predicate::Perp | Predicate::Eqangle => {
                    for k in (0..a.len()).step_by(2) {
                        h.segments.push(seg(&a[k], &a[k + 1]));
                    }
                    for k in (0..a.len()).step_by(4) {
                        if let Some((v, r1, r2)) = corner(&a[k..k + 2], &a[k + 2..k + 4]) {
                            let key = AngleKey::At(v.clone(), r1.clone(), r2.clone());
                            let mark_class = self.angles.number(&key);
                            h.angle_marks.push(AngleMark { vertex: v, ray1: r1, ray2: r2, mark_class });
                        }
                    }
                }
                Predicate::Cong => {
                    for k in [0, 2] {
                        let s = seg(&a[k], &a[k + 1]);
                        let tick_class = self.ticks.number(&s);
                        h.segments.push(s.clone());
                        h.tick_marks.push(TickMark { segment: s, tick_class });
                    }
                }
                Predicate::Midp => {
                    h.segments.push(seg(&a[1], &a[2]));
                    for k in [1, 2] {
                        let s = seg(&a[0], &a[k]);
                        let tick_class = self.ticks.number(&s);
                        h.tick_marks.push(TickMark { segment: s, tick_class });
                    }
                }
                Predicate::Eqratio => {
                    for k in (0..8).step_by(2) {
                        h.segments.push(seg(&a[k], &a[k + 1]));
                    }
                }
                Predicate::Cyclic => h.circles.push(CircleMark { center: None, through: a.to_vec() }),
                Predicate::Circle => {
                    h.circles.push(CircleMark { center: Some(a[0].clone()), through: a[1..].to_vec() })
                }
                Predicate::Simtri | Predicate::Contri => {
                    for t in [0, 3] {
                        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                            let s = seg(&a[t + i], &a[t + j]);
                            if f.predicate() == Predicate::Contri {
                                let tick_class = self.ticks.number(&s);
                                h.tick_marks.push(TickMark { segment: s.clone(), tick_class });
                            }
                            h.segments.push(s);
                        }
                    }
                }
            }
        }
        dedup(&mut h.points);
        dedup(&mut h.segments);
        dedup(&mut h.lines);
        dedup(&mut h.circles);
        dedup(&mut h.angle_marks);
        dedup(&mut h.tick_marks);
        dedup(&mut h.parallel_marks);
        h
    }
}

fn dedup<T: PartialEq + Clone>(v: &mut Vec<T>) {
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v.drain(..) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    *v = out;
}

/// One step per pruned node in (level, insertion) order. A chase step
/// highlights the relations its certificate combines.
pub fn linearize(dag: &ProofDag, pruned: &PrunedDag, w: &NumericModel) -> Vec<ProofStep> {
    let mut order = pruned.nodes.clone();
    order.sort_by_key(|&id| (dag.node(id).level, id));
    let mut marks = Marks { angles: Classes::new(), ticks: Classes::new(), parallels: Classes::new() };
    for &id in &order {
        marks.learn(&dag.node(id).fact);
    }
    let mut steps: Vec<ProofStep> = Vec::new();
    let mut step_of: HashMap<usize, usize> = HashMap::new();
    for &id in &order {
        let node = dag.node(id);
        let premises = dag.premises(id);
        let dep_steps = |ids: &[usize], step_of: &HashMap<usize, usize>| {
            let mut d: Vec<usize> = ids.iter().filter_map(|p| step_of.get(p).copied()).collect();
            d.sort_unstable();
            d.dedup();
            d
        };
        let fact_text = node.fact.render_placeholders();
        match &node.justification {
            Justification::LinearCertificate { system, .. } => {
                let what = match system {
                    System::Direction => "Angle chase",
                    System::Length => "Ratio chase",
                };
                let sources: Vec<&Fact> = premises.iter().map(|&p| &dag.node(p).fact).collect();
                let mut shown = vec![&node.fact];
                shown.extend(sources.iter().copied());
                let sid = steps.len();
                steps.push(ProofStep {
                    id: sid,
                    rule: "chase".into(),
                    facts: vec![DocFact::from(&node.fact)],
                    deps: dep_steps(&premises, &step_of),
                    highlight: marks.highlight(&shown, w),
                    caption: format!("{what} over {} relations: {fact_text}", sources.len()),
                });
                step_of.insert(id, sid);
            }
            j => {
                let rule = match j {
                    Justification::RuleApplication { rule, .. } => rule.code().to_string(),
                    _ => "construction".to_string(),
                };
                let sid = steps.len();
                steps.push(ProofStep {
                    id: sid,
                    caption: format!("{}: {fact_text}", caption_title(&rule)),
                    rule,
                    facts: vec![DocFact::from(&node.fact)],
                    deps: dep_steps(&premises, &step_of),
                    highlight: marks.highlight(&[&node.fact], w),
                });
                step_of.insert(id, sid);
            }
        }
    }
    steps
}
