//! Scale-normalized predicate formulas.

use std::f64::consts::PI;

use super::{NumericModel, Tolerances, Vec2};
use crate::fact::{Fact, Predicate};
use crate::label::Label;

/// Wraps an angle to `(-π/2, π/2]`, i.e. compares directions of lines.
fn wrap_half_turn(x: f64) -> f64 {
    let mut r = x.rem_euclid(PI);
    if r > PI / 2.0 {
        r -= PI;
    }
    r
}

/// Directed angle from `u` to `v`, in `(-π, π]`.
fn angle(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

fn normalized_cross(u: Vec2, v: Vec2) -> f64 {
    (u.cross(v) / (u.norm() * v.norm())).abs()
}

/// Not collinear beyond the degeneracy threshold.
pub fn is_ncoll(w: &NumericModel, a: &Label, b: &Label, c: &Label, t: &Tolerances) -> bool {
    let (a, b, c) = (w.at(a), w.at(b), w.at(c));
    let (u, v) = (b - a, c - a);
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return false;
    }
    normalized_cross(u, v) > t.deg_tol
}

fn complex_ratio(u: Vec2, v: Vec2) -> Vec2 {
    // u / v as complex numbers
    let d = v.dot(v);
    Vec2::new(u.dot(v) / d, v.cross(u) / d)
}

/// Evaluates `f` on the witness. All labels of `f` must be points of `w`.
pub fn eval_fact(w: &NumericModel, f: &Fact, t: &Tolerances) -> bool {
    if f.is_degenerate() {
        return false;
    }
    let p: Vec<Vec2> = f.args().iter().map(|l| w.at(l)).collect();
    let seg = |i: usize| p[i + 1] - p[i];
    let nonzero = |v: &[Vec2]| v.iter().all(|x| x.norm() > 0.0);
    let eps = t.eq_tol;
    match f.predicate() {
        Predicate::Coll => {
            let (u, v) = (p[1] - p[0], p[2] - p[0]);
            nonzero(&[u, v]) && normalized_cross(u, v) < eps
        }
        Predicate::Para => {
            let (u, v) = (seg(0), seg(2));
            nonzero(&[u, v]) && normalized_cross(u, v) < eps
        }
        Predicate::Perp => {
            let (u, v) = (seg(0), seg(2));
            nonzero(&[u, v]) && (u.dot(v) / (u.norm() * v.norm())).abs() < eps
        }
        Predicate::Cong => {
            let (a, b) = (seg(0).norm(), seg(2).norm());
            a > 0.0 && b > 0.0 && (a - b).abs() / a.max(b) < eps
        }
        Predicate::Midp => {
            let ab = (p[2] - p[1]).norm();
            ab > 0.0 && (p[0] - (p[1] + p[2]) * 0.5).norm() / ab < eps
        }
        Predicate::Cyclic => {
            let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
            let (ca, cb, da, db) = (a - c, b - c, a - d, b - d);
            nonzero(&[b - a, ca, cb, da, db])
                && normalized_cross(b - a, c - a) > t.deg_tol
                && wrap_half_turn(angle(ca, cb) - angle(da, db)).abs() < eps
        }
        Predicate::Circle => {
            let r: Vec<f64> = p[1..].iter().map(|q| (*q - p[0]).norm()).collect();
            let max = r.iter().cloned().fold(0.0, f64::max);
            let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
            min > 0.0 && (max - min) / max < eps
        }
        Predicate::Eqangle => {
            let s = [seg(0), seg(2), seg(4), seg(6)];
            nonzero(&s) && wrap_half_turn(angle(s[0], s[1]) - angle(s[2], s[3])).abs() < eps
        }
        Predicate::Eqratio => {
            let s = [seg(0), seg(2), seg(4), seg(6)];
            if !nonzero(&s) {
                return false;
            }
            let ln: Vec<f64> = s.iter().map(|v| v.norm().ln()).collect();
            ((ln[0] - ln[1]) - (ln[2] - ln[3])).abs() < eps
        }
        Predicate::Simtri | Predicate::Contri => {
            let (a, b, c, q, r, s) = (p[0], p[1], p[2], p[3], p[4], p[5]);
            let sides = [b - a, c - a, r - q, s - q];
            if !nonzero(&sides) || normalized_cross(b - a, c - a) <= t.deg_tol {
                return false;
            }
            // Direct similarity: (B−A)/(C−A) = (Q'−P')/(R'−P') as complex numbers.
            let z1 = complex_ratio(b - a, c - a);
            let z2 = complex_ratio(r - q, s - q);
            let similar = (z1 - z2).norm() / z1.norm().max(z2.norm()) < eps;
            if f.predicate() == Predicate::Simtri {
                similar
            } else {
                let (x, y) = ((b - a).norm(), (r - q).norm());
                similar && (x - y).abs() / x.max(y) < eps
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::l;

    fn model(points: &[(&str, f64, f64)]) -> NumericModel {
        NumericModel::from_points(points.iter().map(|(n, x, y)| (l(n), Vec2::new(*x, *y))))
    }

    fn holds(w: &NumericModel, pred: Predicate, args: &[&str]) -> bool {
        eval_fact(w, &Fact::parse_args(pred, args), &Tolerances::default())
    }

    #[test]
    fn collinear_points() {
        let w = model(&[("A", 0.0, 0.0), ("B", 2.0, 1.0), ("C", 4.0, 2.0), ("D", 4.0, 2.1)]);
        assert!(holds(&w, Predicate::Coll, &["A", "B", "C"]));
        assert!(!holds(&w, Predicate::Coll, &["A", "B", "D"]));
    }

    #[test]
    fn perpendicular_axes() {
        let w = model(&[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 0.0, 3.0)]);
        assert!(holds(&w, Predicate::Perp, &["A", "B", "A", "C"]));
        assert!(!holds(&w, Predicate::Para, &["A", "B", "A", "C"]));
    }

    #[test]
    fn equal_angles_scaled_copy() {
        let w = model(&[
            ("A", 1.0, 0.0),
            ("B", 0.0, 0.0),
            ("C", 1.0, 1.0),
            ("D", 2.0, 0.0),
            ("E", 0.0, 0.0),
            ("F", 2.0, 2.0),
        ]);
        assert!(holds(&w, Predicate::Eqangle, &["B", "A", "B", "C", "E", "D", "E", "F"]));
        assert!(!holds(&w, Predicate::Eqangle, &["B", "A", "B", "C", "E", "F", "E", "D"]));
    }

    #[test]
    fn cong_and_midpoint() {
        let w = model(&[("A", 0.0, 0.0), ("B", 4.0, 0.0), ("M", 2.0, 0.0), ("P", 2.0, 5.0)]);
        assert!(holds(&w, Predicate::Midp, &["M", "A", "B"]));
        assert!(holds(&w, Predicate::Cong, &["P", "A", "P", "B"]));
        assert!(!holds(&w, Predicate::Cong, &["P", "A", "A", "B"]));
        assert!(holds(&w, Predicate::Eqratio, &["M", "A", "A", "B", "M", "B", "A", "B"]));
    }

    #[test]
    fn cyclic_square() {
        let w = model(&[("A", 1.0, 0.0), ("B", 0.0, 1.0), ("C", -1.0, 0.0), ("D", 0.0, -1.0), ("O", 0.0, 0.0)]);
        assert!(holds(&w, Predicate::Cyclic, &["A", "B", "C", "D"]));
        assert!(holds(&w, Predicate::Circle, &["O", "A", "B", "C"]));
        assert!(!holds(&w, Predicate::Cyclic, &["A", "B", "C", "O"]));
    }

    #[test]
    fn direct_similarity() {
        let w = model(&[
            ("A", 0.0, 0.0),
            ("B", 1.0, 0.0),
            ("C", 0.0, 1.0),
            ("P", 1.0, 1.0),
            ("Q", 1.0, 3.0),
            ("R", -1.0, 1.0),
            ("S", 3.0, 1.0),
        ]);
        // P,Q,R is A,B,C rotated a quarter turn and scaled by 2.
        assert!(holds(&w, Predicate::Simtri, &["A", "B", "C", "P", "Q", "R"]));
        // P,Q,S is the mirror image.
        assert!(!holds(&w, Predicate::Simtri, &["A", "B", "C", "P", "Q", "S"]));
        assert!(!holds(&w, Predicate::Contri, &["A", "B", "C", "P", "Q", "R"]));
    }

    #[test]
    fn degenerate_facts_are_false() {
        let w = model(&[("A", 0.0, 0.0), ("B", 1.0, 0.0)]);
        assert!(!holds(&w, Predicate::Cong, &["A", "A", "A", "B"]));
    }
}
