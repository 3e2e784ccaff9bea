//! Defining facts of each construction step.
//!
//! | step                         | facts                                              |
//! |------------------------------|----------------------------------------------------|
//! | `midpoint M A B`             | `midp(M,A,B)`, `coll(M,A,B)`, `cong(MA,MB)`        |
//! | points `P0,P1,..` on a line  | `coll(P0,P1,Pk)` for every later `Pk`              |
//! | `perpbisector l A B`, P on l | `cong(PA,PB)`; `perp(PQ,AB)` once two points on l  |
//! | `parallel`/`perpendicular`   | `para`/`perp` between carriers with two points     |
//! | `circumcircle c A B C`, D on c | `cyclic(A,B,C,D)`                                |
//! | `circle c O A`, P on c       | `cong(OA,OP)`                                      |
//!
//! Incidence from `intersect` and `on` attaches points to carriers; a carrier
//! contributes point facts only once enough points lie on it.

use std::collections::{BTreeSet, HashMap};

use super::{Construction, ObjectType, StepKind};
use crate::fact::Fact;
use crate::label::Label;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeededFact {
    pub fact: Fact,
    /// Index of the latest step the fact depends on.
    pub step: usize,
}

/// Union-find over line directions. The weight to the parent is `true` when
/// the two directions differ by a quarter turn.
struct DirectionClasses {
    parent: Vec<usize>,
    perp_to_parent: Vec<bool>,
}

impl DirectionClasses {
    fn new() -> Self {
        DirectionClasses { parent: Vec::new(), perp_to_parent: Vec::new() }
    }

    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.perp_to_parent.push(false);
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, off) = self.find(p);
        self.parent[x] = root;
        self.perp_to_parent[x] ^= off;
        (root, self.perp_to_parent[x])
    }

    /// Records `dir(a) = dir(b) + (perp ? quarter turn : 0)`.
    fn union(&mut self, a: usize, b: usize, perp: bool) {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
            self.perp_to_parent[ra] = oa ^ ob ^ perp;
        }
    }
}

struct DirMember {
    node: usize,
    rep: [Label; 2],
    available: usize,
}

/// Points lying on carrier `label` (in attachment order), plus the center for
/// a circle given by center and point. Empty for points and unknown labels.
pub fn carrier_points(c: &Construction, label: &Label) -> Vec<Label> {
    let mut out = Vec::new();
    for step in c.steps() {
        let a = &step.args;
        if &step.label == label {
            match step.kind {
                StepKind::LineThrough | StepKind::Circumcircle => out.extend(a.iter().cloned()),
                StepKind::ParallelLine | StepKind::PerpLine => out.push(a[0].clone()),
                StepKind::CircleCenterThrough => out.extend([a[1].clone(), a[0].clone()]),
                _ => {}
            }
        } else if matches!(step.kind, StepKind::PointOn | StepKind::Intersect) && a.contains(label) {
            out.push(step.label.clone());
        }
    }
    out
}

pub fn seed_facts(c: &Construction) -> Vec<SeededFact> {
    let mut out: Vec<SeededFact> = Vec::new();
    let mut on_carrier: HashMap<&Label, Vec<(Label, usize)>> = HashMap::new();
    let mut dirs = DirectionClasses::new();
    let mut dir_node: HashMap<&Label, usize> = HashMap::new();
    let mut dir_edges: Vec<(usize, usize)> = Vec::new(); // (node, step)
    let mut pseudo: Vec<(usize, [Label; 2], usize)> = Vec::new();
    let mut bisectors: Vec<(&Label, &Label, &Label)> = Vec::new();
    let mut centered: Vec<(&Label, &Label)> = Vec::new();
    let mut circumcircles: Vec<&Label> = Vec::new();

    for (i, step) in c.steps().iter().enumerate() {
        let a = &step.args;
        if step.kind.defines() == ObjectType::Line {
            let n = dirs.add();
            dir_node.insert(&step.label, n);
        }
        match step.kind {
            StepKind::FreePoint => {}
            StepKind::PointOn => {
                on_carrier.entry(&a[0]).or_default().push((step.label.clone(), i));
            }
            StepKind::Midpoint => {
                let m = &step.label;
                out.push(SeededFact { fact: Fact::midp(m, &a[0], &a[1]), step: i });
                out.push(SeededFact { fact: Fact::coll(m, &a[0], &a[1]), step: i });
                out.push(SeededFact { fact: Fact::cong(m, &a[0], m, &a[1]), step: i });
            }
            StepKind::LineThrough => {
                on_carrier.insert(&step.label, vec![(a[0].clone(), i), (a[1].clone(), i)]);
            }
            StepKind::ParallelLine | StepKind::PerpLine => {
                on_carrier.insert(&step.label, vec![(a[0].clone(), i)]);
                let l = dir_node[&step.label];
                let m = dir_node[&a[1]];
                dirs.union(l, m, step.kind == StepKind::PerpLine);
                dir_edges.push((l, i));
            }
            StepKind::PerpBisector => {
                on_carrier.insert(&step.label, Vec::new());
                let l = dir_node[&step.label];
                let p = dirs.add();
                dirs.union(p, l, true);
                dir_edges.push((l, i));
                pseudo.push((p, [a[0].clone(), a[1].clone()], i));
                bisectors.push((&step.label, &a[0], &a[1]));
            }
            StepKind::Intersect => {
                for carrier in a {
                    on_carrier.entry(carrier).or_default().push((step.label.clone(), i));
                }
            }
            StepKind::Circumcircle => {
                on_carrier.insert(&step.label, a.iter().map(|p| (p.clone(), i)).collect());
                circumcircles.push(&step.label);
            }
            StepKind::CircleCenterThrough => {
                on_carrier.insert(&step.label, vec![(a[1].clone(), i)]);
                centered.push((&step.label, &a[0]));
            }
        }
    }

    let points_on = |l: &Label| on_carrier.get(l).map(Vec::as_slice).unwrap_or(&[]);

    for step in c.steps() {
        if step.kind.defines() != ObjectType::Line {
            continue;
        }
        let pts = points_on(&step.label);
        for (p, s) in pts.iter().skip(2) {
            out.push(SeededFact { fact: Fact::coll(&pts[0].0, &pts[1].0, p), step: *s });
        }
    }

    for (l, a, b) in bisectors {
        for (p, s) in points_on(l) {
            out.push(SeededFact { fact: Fact::cong(p, a, p, b), step: *s });
        }
    }

    for c in circumcircles {
        let pts = points_on(c);
        for (p, s) in pts.iter().skip(3) {
            out.push(SeededFact {
                fact: Fact::cyclic(&pts[0].0, &pts[1].0, &pts[2].0, p),
                step: *s,
            });
        }
    }

    for (c, o) in centered {
        let pts = points_on(c);
        for (p, s) in pts.iter().skip(1) {
            out.push(SeededFact { fact: Fact::cong(o, &pts[0].0, o, p), step: *s });
        }
    }

    // Direction relations between carriers that carry two points.
    let mut members: Vec<DirMember> = Vec::new();
    for step in c.steps() {
        if let Some(&node) = dir_node.get(&step.label) {
            let pts = points_on(&step.label);
            if pts.len() >= 2 {
                members.push(DirMember {
                    node,
                    rep: [pts[0].0.clone(), pts[1].0.clone()],
                    available: pts[1].1.max(pts[0].1),
                });
            }
        }
    }
    for (node, rep, step) in pseudo {
        members.push(DirMember { node, rep, available: step });
    }
    let mut classes: HashMap<usize, Vec<(usize, bool)>> = HashMap::new();
    for (idx, m) in members.iter().enumerate() {
        let (root, off) = dirs.find(m.node);
        classes.entry(root).or_default().push((idx, off));
    }
    let mut class_step: HashMap<usize, usize> = HashMap::new();
    for (node, s) in dir_edges {
        let (root, _) = dirs.find(node);
        let e = class_step.entry(root).or_insert(0);
        *e = (*e).max(s);
    }
    let mut roots: Vec<_> = classes.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        let mut list = classes[&root].clone();
        list.sort_by_key(|&(idx, _)| (members[idx].available, idx));
        let (first, first_off) = list[0];
        let edge_step = class_step.get(&root).copied().unwrap_or(0);
        for &(idx, off) in &list[1..] {
            let a = &members[first].rep;
            let b = &members[idx].rep;
            let fact = if off == first_off {
                Fact::para(&a[0], &a[1], &b[0], &b[1])
            } else {
                Fact::perp(&a[0], &a[1], &b[0], &b[1])
            };
            let step = members[first].available.max(members[idx].available).max(edge_step);
            out.push(SeededFact { fact, step });
        }
    }

    let mut seen = BTreeSet::new();
    out.sort_by_key(|f| f.step);
    out.retain(|f| !f.fact.is_degenerate() && !f.fact.is_trivial() && seen.insert(f.fact.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::parse_construction;

    fn facts(src: &str) -> Vec<String> {
        seed_facts(&parse_construction(src).unwrap()).into_iter().map(|f| f.fact.to_string()).collect()
    }

    #[test]
    fn midpoint_seed() {
        assert_eq!(facts("point A\npoint B\nmidpoint M A B"), vec!["midp(M,A,B)", "coll(A,B,M)", "cong(AM,BM)"]);
    }

    #[test]
    fn circumcenter_from_bisectors() {
        let f = facts("point A B C\nperpbisector p1 A B\nperpbisector p2 B C\nintersect O p1 p2");
        assert_eq!(f, vec!["cong(AO,BO)", "cong(BO,CO)"]);
    }

    #[test]
    fn circumcircle_membership() {
        let f = facts("point A B C\ncircumcircle c A B C\non D c");
        assert_eq!(f, vec!["cyclic(A,B,C,D)"]);
    }

    #[test]
    fn centered_circle_membership() {
        let f = facts("point O A\ncircle c O A\non P c\non Q c");
        assert_eq!(f, vec!["cong(AO,OP)", "cong(AO,OQ)"]);
    }

    #[test]
    fn euler_seeds() {
        let f = facts("point A B C\ncircumcenter O A B C\ncentroid G A B C\northocenter H A B C");
        for expected in [
            "cong(AO,BO)",
            "cong(BO,CO)",
            "midp(_Ma,B,C)",
            "midp(_Mb,A,C)",
            "coll(A,G,_Ma)",
            "coll(B,G,_Mb)",
            "perp(AH,BC)",
            "perp(AC,BH)",
        ] {
            assert!(f.contains(&expected.to_string()), "missing {expected} in {f:?}");
        }
    }

    #[test]
    fn parallel_chain_through_carriers() {
        // n is parallel to l only through the one-point carrier m.
        let f = facts(
            "point A B P Q\nline l A B\nparallel m P l\nperpendicular k Q m\nperpendicular n P k\nintersect X m k\nline t A Q\nintersect Y n t",
        );
        assert!(f.contains(&"para(AB,PX)".to_string()), "{f:?}");
        assert!(f.contains(&"perp(AB,QX)".to_string()), "{f:?}");
    }

    #[test]
    fn seeds_reference_only_defined_labels() {
        let c = parse_construction("point A B C\ncircumcenter O A B C\northocenter H A B C").unwrap();
        let labels: Vec<_> = c.steps().iter().map(|s| s.label.clone()).collect();
        for s in seed_facts(&c) {
            assert!(s.fact.args().iter().all(|a| labels.contains(a)));
            assert!(s.step < c.len());
        }
    }
}
