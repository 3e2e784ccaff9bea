//! Numeric check of conjectures and relation discovery over a selection.

use std::collections::BTreeSet;

use super::{derive_seed, eval_fact, instantiate, NumericError, NumericModel, Tolerances};
use crate::construction::{carrier_points, Construction, GoalStatement, ObjectType};
use crate::fact::Fact;
use crate::label::Label;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// True on every sampled witness.
    HoldsNumerically,
    /// False on this witness (the first failing sample).
    Fails(Box<NumericModel>),
    Degenerate(NumericError),
}

/// Seeds of the independent witnesses used for a check.
pub fn sample_seeds(seed: u64, samples: usize) -> impl Iterator<Item = u64> {
    (0..samples as u64).map(move |i| derive_seed(seed, i))
}

pub fn check_conjecture(c: &Construction, g: &GoalStatement, t: &Tolerances, seed: u64) -> Verdict {
    let fact = g.to_fact();
    for s in sample_seeds(seed, t.samples) {
        match instantiate(c, s, t) {
            Ok(w) => {
                if !eval_fact(&w, &fact, t) {
                    return Verdict::Fails(Box::new(w));
                }
            }
            Err(e) => return Verdict::Degenerate(e),
        }
    }
    Verdict::HoldsNumerically
}

/// Largest point set for which 8-ary predicates are enumerated.
const MAX_POINTS_FOR_QUADS: usize = 6;
const MAX_POINTS_FOR_TRIANGLES: usize = 8;

fn candidates(points: &[Label]) -> BTreeSet<Fact> {
    let n = points.len();
    let p = points;
    let mut out = BTreeSet::new();
    let mut add = |f: Fact| {
        if !f.is_degenerate() && !f.is_trivial() {
            out.insert(f);
        }
    };
    let segments: Vec<[&Label; 2]> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| [&p[i], &p[j]])).collect();

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                add(Fact::coll(&p[i], &p[j], &p[k]));
            }
        }
    }
    for (x, s) in segments.iter().enumerate() {
        for t in &segments[x + 1..] {
            add(Fact::para(s[0], s[1], t[0], t[1]));
            add(Fact::perp(s[0], s[1], t[0], t[1]));
            add(Fact::cong(s[0], s[1], t[0], t[1]));
        }
    }
    for m in p {
        for s in &segments {
            add(Fact::midp(m, s[0], s[1]));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for q in k + 1..n {
                    add(Fact::cyclic(&p[i], &p[j], &p[k], &p[q]));
                }
                for o in p {
                    add(Fact::circle(o, &p[i], &p[j], &p[k]));
                }
            }
        }
    }
    if n <= MAX_POINTS_FOR_QUADS {
        for a in &segments {
            for b in &segments {
                for c in &segments {
                    for d in &segments {
                        add(Fact::eqangle([*a, *b, *c, *d]));
                        add(Fact::eqratio([*a, *b, *c, *d]));
                    }
                }
            }
        }
    }
    if n <= MAX_POINTS_FOR_TRIANGLES {
        let triples: Vec<[&Label; 3]> = (0..n)
            .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [&p[i], &p[j], &p[k]])))
            .collect();
        for t1 in &triples {
            for t2 in &triples {
                for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    let t2p = perm.map(|i| t2[i]);
                    add(Fact::simtri(*t1, t2p));
                    add(Fact::contri(*t1, t2p));
                }
            }
        }
    }
    out
}

/// All relations among the selected objects that hold on every sample,
/// ordered by predicate, then arguments.
///
/// Selected lines and circles contribute the points lying on them.
pub fn relate(c: &Construction, selection: &[Label], t: &Tolerances, seed: u64) -> Vec<GoalStatement> {
    let mut pts: BTreeSet<Label> = BTreeSet::new();
    for label in selection {
        match c.object_type(label) {
            Some(ObjectType::Point) => {
                pts.insert(label.clone());
            }
            Some(_) => pts.extend(carrier_points(c, label)),
            None => {}
        }
    }
    let pts: Vec<Label> = pts.into_iter().collect();
    let mut live: Vec<Fact> = candidates(&pts).into_iter().collect();
    for s in sample_seeds(seed, t.samples) {
        let Ok(w) = instantiate(c, s, t) else {
            return Vec::new();
        };
        live.retain(|f| eval_fact(&w, f, t));
    }
    live.sort();
    live.iter().map(GoalStatement::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{parse_construction, parse_goal};
    use crate::label::l;

    use crate::fact::Predicate;

    const EULER: &str = "point A B C\ncircumcenter O A B C\ncentroid G A B C\northocenter H A B C";

    fn contains(found: &[GoalStatement], c: &Construction, goal: &str) -> bool {
        let want = parse_goal(goal, c).unwrap().to_fact();
        found.iter().any(|g| g.to_fact() == want)
    }

    #[test]
    fn euler_line_holds() {
        let c = parse_construction(EULER).unwrap();
        let g = parse_goal("coll O G H", &c).unwrap();
        assert_eq!(check_conjecture(&c, &g, &Tolerances::default(), 0), Verdict::HoldsNumerically);
    }

    #[test]
    fn false_conjecture_has_witness() {
        let c = parse_construction("point A B C\nmidpoint M A C").unwrap();
        let g = parse_goal("coll A B M", &c).unwrap();
        match check_conjecture(&c, &g, &Tolerances::default(), 1) {
            Verdict::Fails(w) => assert!(!eval_fact(&w, &g.to_fact(), &Tolerances::default())),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn midpoint_equidistance_holds() {
        let c = parse_construction("point A B\nmidpoint M A B").unwrap();
        let g = parse_goal("cong M A M B", &c).unwrap();
        assert_eq!(check_conjecture(&c, &g, &Tolerances::default(), 0), Verdict::HoldsNumerically);
    }

    #[test]
    fn degenerate_construction_is_reported() {
        let c = parse_construction(
            "point A B P Q\nline l A B\nparallel m P l\nparallel n Q l\nintersect X m n",
        )
        .unwrap();
        let g = parse_goal("coll A B X", &c).unwrap();
        assert!(matches!(check_conjecture(&c, &g, &Tolerances::default(), 0), Verdict::Degenerate(_)));
    }

    #[test]
    fn relate_finds_euler_line() {
        let c = parse_construction(EULER).unwrap();
        let found = relate(&c, &[l("O"), l("G"), l("H")], &Tolerances::default(), 0);
        assert!(contains(&found, &c, "coll O G H"));
    }

    #[test]
    fn relate_through_a_line() {
        let c = parse_construction(&format!("{EULER}\nline e O G")).unwrap();
        let found = relate(&c, &[l("e"), l("H")], &Tolerances::default(), 0);
        assert!(contains(&found, &c, "coll O G H"));
    }

    #[test]
    fn relate_midpoint() {
        let c = parse_construction("point A B\nmidpoint M A B").unwrap();
        let found = relate(&c, &[l("M"), l("A"), l("B")], &Tolerances::default(), 0);
        for g in ["midp M A B", "cong M A M B", "coll M A B"] {
            assert!(contains(&found, &c, g), "{g}");
        }
        let mut sorted = found.clone();
        sorted.sort_by_key(|g| g.to_fact());
        assert_eq!(sorted, found);
    }

    #[test]
    fn relate_two_free_points_is_empty() {
        let c = parse_construction("point A B").unwrap();
        assert!(relate(&c, &[l("A"), l("B")], &Tolerances::default(), 0).is_empty());
    }

    #[test]
    fn coll_predicate_order_first() {
        let c = parse_construction("point A B\nmidpoint M A B").unwrap();
        let found = relate(&c, &[l("M"), l("A"), l("B")], &Tolerances::default(), 0);
        assert_eq!(found[0].predicate, Predicate::Coll);
    }
}
