//! Geometric predicates over points and their canonical forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::label::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Coll,
    Para,
    Perp,
    Cong,
    Midp,
    Cyclic,
    Circle,
    Eqangle,
    Eqratio,
    Simtri,
    Contri,
}

impl Predicate {
    pub const ALL: [Predicate; 11] = [
        Predicate::Coll,
        Predicate::Para,
        Predicate::Perp,
        Predicate::Cong,
        Predicate::Midp,
        Predicate::Cyclic,
        Predicate::Circle,
        Predicate::Eqangle,
        Predicate::Eqratio,
        Predicate::Simtri,
        Predicate::Contri,
    ];

    pub fn arity(self) -> usize {
        match self {
            Predicate::Coll | Predicate::Midp => 3,
            Predicate::Para | Predicate::Perp | Predicate::Cong => 4,
            Predicate::Cyclic | Predicate::Circle => 4,
            Predicate::Eqangle | Predicate::Eqratio => 8,
            Predicate::Simtri | Predicate::Contri => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Coll => "coll",
            Predicate::Para => "para",
            Predicate::Perp => "perp",
            Predicate::Cong => "cong",
            Predicate::Midp => "midp",
            Predicate::Cyclic => "cyclic",
            Predicate::Circle => "circle",
            Predicate::Eqangle => "eqangle",
            Predicate::Eqratio => "eqratio",
            Predicate::Simtri => "simtri",
            Predicate::Contri => "contri",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown predicate `{0}`")]
pub struct UnknownPredicate(pub String);

impl FromStr for Predicate {
    type Err = UnknownPredicate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownPredicate(s.to_string()))
    }
}

/// A predicate applied to point labels, always held in canonical form.
///
/// Two facts compare equal exactly when they state the same relation, so a
/// `Fact` can be used directly as a deduplication key.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fact {
    pred: Predicate,
    args: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pred} expects {expected} points, got {got}")]
pub struct ArityMismatch {
    pub pred: Predicate,
    pub expected: usize,
    pub got: usize,
}

fn sorted_pair(a: &Label, b: &Label) -> [Label; 2] {
    if a <= b {
        [a.clone(), b.clone()]
    } else {
        [b.clone(), a.clone()]
    }
}

fn flatten<const N: usize>(parts: &[[Label; N]]) -> Vec<Label> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn min_variant(variants: impl IntoIterator<Item = Vec<Label>>) -> Vec<Label> {
    variants.into_iter().min().expect("at least one variant")
}

impl Fact {
    pub fn new(pred: Predicate, args: Vec<Label>) -> Result<Fact, ArityMismatch> {
        if args.len() != pred.arity() {
            return Err(ArityMismatch { pred, expected: pred.arity(), got: args.len() });
        }
        Ok(Fact { pred, args: canonicalize(pred, args) })
    }

    /// Builds a fact from string labels; panics on arity or label errors.
    /// Intended for tests and fixed rule tables.
    pub fn parse_args(pred: Predicate, names: &[&str]) -> Fact {
        let args = names.iter().map(|n| Label::new(n).expect("valid label")).collect();
        Fact::new(pred, args).expect("arity")
    }

    pub fn coll(a: &Label, b: &Label, c: &Label) -> Fact {
        Fact::new(Predicate::Coll, vec![a.clone(), b.clone(), c.clone()]).unwrap()
    }

    pub fn para(a: &Label, b: &Label, c: &Label, d: &Label) -> Fact {
        Fact::new(Predicate::Para, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap()
    }

    pub fn perp(a: &Label, b: &Label, c: &Label, d: &Label) -> Fact {
        Fact::new(Predicate::Perp, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap()
    }

    pub fn cong(a: &Label, b: &Label, c: &Label, d: &Label) -> Fact {
        Fact::new(Predicate::Cong, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap()
    }

    pub fn midp(m: &Label, a: &Label, b: &Label) -> Fact {
        Fact::new(Predicate::Midp, vec![m.clone(), a.clone(), b.clone()]).unwrap()
    }

    pub fn cyclic(a: &Label, b: &Label, c: &Label, d: &Label) -> Fact {
        Fact::new(Predicate::Cyclic, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap()
    }

    pub fn circle(o: &Label, a: &Label, b: &Label, c: &Label) -> Fact {
        Fact::new(Predicate::Circle, vec![o.clone(), a.clone(), b.clone(), c.clone()]).unwrap()
    }

    pub fn eqangle(lines: [[&Label; 2]; 4]) -> Fact {
        let args = lines.iter().flat_map(|p| p.iter().map(|l| (*l).clone())).collect();
        Fact::new(Predicate::Eqangle, args).unwrap()
    }

    pub fn eqratio(segments: [[&Label; 2]; 4]) -> Fact {
        let args = segments.iter().flat_map(|p| p.iter().map(|l| (*l).clone())).collect();
        Fact::new(Predicate::Eqratio, args).unwrap()
    }

    pub fn simtri(t1: [&Label; 3], t2: [&Label; 3]) -> Fact {
        let args = t1.iter().chain(t2.iter()).map(|l| (*l).clone()).collect();
        Fact::new(Predicate::Simtri, args).unwrap()
    }

    pub fn contri(t1: [&Label; 3], t2: [&Label; 3]) -> Fact {
        let args = t1.iter().chain(t2.iter()).map(|l| (*l).clone()).collect();
        Fact::new(Predicate::Contri, args).unwrap()
    }

    pub fn predicate(&self) -> Predicate {
        self.pred
    }

    pub fn args(&self) -> &[Label] {
        &self.args
    }

    /// Arguments grouped as point pairs (para, perp, cong, eqangle, eqratio).
    pub fn pairs(&self) -> Vec<[&Label; 2]> {
        self.args.chunks(2).map(|c| [&c[0], &c[1]]).collect()
    }

    /// A fact whose point tuples repeat a label where the predicate needs
    /// distinct points (e.g. `coll(A, A, B)`, a segment `AA`).
    pub fn is_degenerate(&self) -> bool {
        let a = &self.args;
        let distinct = |xs: &[&Label]| {
            xs.iter().enumerate().all(|(i, x)| xs[..i].iter().all(|y| y != x))
        };
        match self.pred {
            Predicate::Coll | Predicate::Midp => !distinct(&[&a[0], &a[1], &a[2]]),
            Predicate::Cyclic | Predicate::Circle => !distinct(&[&a[0], &a[1], &a[2], &a[3]]),
            Predicate::Para | Predicate::Perp | Predicate::Cong | Predicate::Eqangle
            | Predicate::Eqratio => self.pairs().iter().any(|[x, y]| x == y),
            Predicate::Simtri | Predicate::Contri => {
                !distinct(&[&a[0], &a[1], &a[2]]) || !distinct(&[&a[3], &a[4], &a[5]])
            }
        }
    }

    /// True when the fact holds by the symmetry of its own arguments alone,
    /// e.g. `cong(AB, AB)` or `eqangle(AB, CD, AB, CD)`.
    pub fn is_trivial(&self) -> bool {
        match self.pred {
            Predicate::Para | Predicate::Cong => self.args[..2] == self.args[2..],
            Predicate::Eqangle | Predicate::Eqratio => {
                let p = self.pairs();
                (p[0] == p[2] && p[1] == p[3]) || (p[0] == p[1] && p[2] == p[3])
            }
            Predicate::Simtri | Predicate::Contri => self.args[..3] == self.args[3..],
            _ => false,
        }
    }

    /// Human-oriented rendering used in reports.
    pub fn render(&self) -> String {
        self.render_with(|l| l.to_string())
    }

    /// Like [`Fact::render`] with every label written as `{A}`, the caption
    /// placeholder form.
    pub fn render_placeholders(&self) -> String {
        self.render_with(|l| format!("{{{l}}}"))
    }

    fn render_with(&self, name: impl Fn(&Label) -> String) -> String {
        let a: Vec<String> = self.args.iter().map(name).collect();
        let seg = |i: usize| format!("{}{}", a[i], a[i + 1]);
        match self.pred {
            Predicate::Coll => format!("{}, {}, {} are collinear", a[0], a[1], a[2]),
            Predicate::Para => format!("{} ∥ {}", seg(0), seg(2)),
            Predicate::Perp => format!("{} ⊥ {}", seg(0), seg(2)),
            Predicate::Cong => format!("|{}| = |{}|", seg(0), seg(2)),
            Predicate::Midp => format!("{} is the midpoint of {}{}", a[0], a[1], a[2]),
            Predicate::Cyclic => format!("{}, {}, {}, {} are concyclic", a[0], a[1], a[2], a[3]),
            Predicate::Circle => {
                format!("{} is the center of the circle through {}, {}, {}", a[0], a[1], a[2], a[3])
            }
            Predicate::Eqangle => {
                format!("∠({},{}) = ∠({},{})", seg(0), seg(2), seg(4), seg(6))
            }
            Predicate::Eqratio => {
                format!("{}:{} = {}:{}", seg(0), seg(2), seg(4), seg(6))
            }
            Predicate::Simtri => {
                format!("△{}{}{} ∼ △{}{}{}", a[0], a[1], a[2], a[3], a[4], a[5])
            }
            Predicate::Contri => {
                format!("△{}{}{} ≅ △{}{}{}", a[0], a[1], a[2], a[3], a[4], a[5])
            }
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        match self.pred {
            Predicate::Para | Predicate::Perp | Predicate::Cong | Predicate::Eqangle
            | Predicate::Eqratio => {
                let pairs: Vec<String> =
                    self.args.chunks(2).map(|c| format!("{}{}", c[0], c[1])).collect();
                write!(f, "{}", pairs.join(","))?;
            }
            _ => {
                let names: Vec<&str> = self.args.iter().map(Label::as_str).collect();
                write!(f, "{}", names.join(","))?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn canonicalize(pred: Predicate, mut args: Vec<Label>) -> Vec<Label> {
    match pred {
        Predicate::Coll | Predicate::Cyclic => {
            args.sort();
            args
        }
        Predicate::Midp | Predicate::Circle => {
            args[1..].sort();
            args
        }
        Predicate::Para | Predicate::Perp | Predicate::Cong => {
            let mut pairs = [sorted_pair(&args[0], &args[1]), sorted_pair(&args[2], &args[3])];
            pairs.sort();
            flatten(&pairs)
        }
        Predicate::Eqangle => {
            let l: Vec<[Label; 2]> =
                args.chunks(2).map(|c| sorted_pair(&c[0], &c[1])).collect();
            let (a, b, c, d) = (&l[0], &l[1], &l[2], &l[3]);
            min_variant([
                flatten(&[a.clone(), b.clone(), c.clone(), d.clone()]),
                flatten(&[c.clone(), d.clone(), a.clone(), b.clone()]),
                flatten(&[b.clone(), a.clone(), d.clone(), c.clone()]),
                flatten(&[d.clone(), c.clone(), b.clone(), a.clone()]),
            ])
        }
        Predicate::Eqratio => {
            let s: Vec<[Label; 2]> =
                args.chunks(2).map(|c| sorted_pair(&c[0], &c[1])).collect();
            let (a, b, c, d) = (&s[0], &s[1], &s[2], &s[3]);
            let v = |w: [&[Label; 2]; 4]| flatten(&w.map(|x| x.clone()));
            min_variant([
                v([a, b, c, d]),
                v([c, d, a, b]),
                v([b, a, d, c]),
                v([d, c, b, a]),
                v([a, c, b, d]),
                v([b, d, a, c]),
                v([c, a, d, b]),
                v([d, b, c, a]),
            ])
        }
        Predicate::Simtri | Predicate::Contri => {
            const PERMS: [[usize; 3]; 6] =
                [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
            let (t1, t2) = args.split_at(3);
            let mut variants = Vec::with_capacity(12);
            for p in PERMS {
                let x: Vec<Label> = p.iter().map(|&i| t1[i].clone()).collect();
                let y: Vec<Label> = p.iter().map(|&i| t2[i].clone()).collect();
                variants.push([x.clone(), y.clone()].concat());
                variants.push([y, x].concat());
            }
            min_variant(variants)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Predicate::*;

    fn f(pred: Predicate, names: &[&str]) -> Fact {
        Fact::parse_args(pred, names)
    }

    #[test]
    fn coll_is_order_free() {
        assert_eq!(f(Coll, &["C", "A", "B"]), f(Coll, &["A", "B", "C"]));
    }

    #[test]
    fn segment_pairs_are_unordered() {
        assert_eq!(f(Para, &["D", "C", "B", "A"]), f(Para, &["A", "B", "C", "D"]));
        assert_eq!(f(Cong, &["M", "B", "A", "M"]), f(Cong, &["A", "M", "B", "M"]));
    }

    #[test]
    fn eqangle_symmetry_group() {
        let base = f(Eqangle, &["A", "B", "A", "C", "P", "Q", "P", "R"]);
        assert_eq!(base, f(Eqangle, &["P", "Q", "P", "R", "A", "B", "A", "C"]));
        assert_eq!(base, f(Eqangle, &["A", "C", "A", "B", "P", "R", "P", "Q"]));
        assert_eq!(base, f(Eqangle, &["R", "P", "Q", "P", "C", "A", "B", "A"]));
        // Flipping only one side is a different statement.
        assert_ne!(base, f(Eqangle, &["A", "C", "A", "B", "P", "Q", "P", "R"]));
    }

    #[test]
    fn eqratio_cross_multiplication() {
        let base = f(Eqratio, &["A", "B", "C", "D", "E", "F", "G", "H"]);
        assert_eq!(base, f(Eqratio, &["A", "B", "E", "F", "C", "D", "G", "H"]));
        assert_eq!(base, f(Eqratio, &["D", "C", "B", "A", "H", "G", "F", "E"]));
    }

    #[test]
    fn simtri_rotation_and_swap() {
        let base = f(Simtri, &["A", "B", "C", "P", "Q", "R"]);
        assert_eq!(base, f(Simtri, &["B", "C", "A", "Q", "R", "P"]));
        assert_eq!(base, f(Simtri, &["P", "Q", "R", "A", "B", "C"]));
        assert_ne!(base, f(Simtri, &["A", "B", "C", "Q", "P", "R"]));
    }

    #[test]
    fn degenerate_and_trivial() {
        assert!(f(Coll, &["A", "A", "B"]).is_degenerate());
        assert!(f(Cong, &["A", "A", "B", "C"]).is_degenerate());
        assert!(f(Cong, &["A", "B", "B", "A"]).is_trivial());
        assert!(f(Eqangle, &["A", "B", "A", "B", "C", "D", "C", "D"]).is_trivial());
        assert!(!f(Midp, &["M", "A", "B"]).is_degenerate());
    }

    #[test]
    fn arity_is_checked() {
        let args = vec![Label::new("A").unwrap()];
        assert!(Fact::new(Coll, args).is_err());
    }

    #[test]
    fn predicate_names_round_trip() {
        for p in Predicate::ALL {
            assert_eq!(p.name().parse::<Predicate>().unwrap(), p);
        }
        assert!("ellipse".parse::<Predicate>().is_err());
    }
}
