//! The pattern-rule catalog and its matcher.
//!
//! Matching reads a snapshot of the store: normal forms of every segment
//! direction and log-length are computed once per level, so equal angles and
//! equal ratios are found by hashing instead of searching.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;

use super::classes::Pt;
use super::lattice::{mod_one, Constant, Var};
use super::rational::Vector;
use super::store::{half, FactStore, Relation};
use crate::fact::{Fact, Predicate};
use crate::label::Label;
use crate::numeric::is_ncoll;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R01,
    R02,
    R03,
    R04,
    R05,
    R06,
    R07,
    R08,
    R09,
    R10,
    R11,
    R12,
    R13,
    R14,
    R15,
    R16,
    /// para(AB, AC) ⟹ coll(A, B, C)
    R17,
    /// Collinearity that follows from overlapping collinear triples.
    CollClosure,
    /// Concyclicity that follows from overlapping circles.
    CircleClosure,
}

impl RuleId {
    pub const ALL: [RuleId; 19] = [
        RuleId::R01,
        RuleId::R02,
        RuleId::R03,
        RuleId::R04,
        RuleId::R05,
        RuleId::R06,
        RuleId::R07,
        RuleId::R08,
        RuleId::R09,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
        RuleId::R14,
        RuleId::R15,
        RuleId::R16,
        RuleId::R17,
        RuleId::CollClosure,
        RuleId::CircleClosure,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RuleId::R01 => "R01",
            RuleId::R02 => "R02",
            RuleId::R03 => "R03",
            RuleId::R04 => "R04",
            RuleId::R05 => "R05",
            RuleId::R06 => "R06",
            RuleId::R07 => "R07",
            RuleId::R08 => "R08",
            RuleId::R09 => "R09",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::R13 => "R13",
            RuleId::R14 => "R14",
            RuleId::R15 => "R15",
            RuleId::R16 => "R16",
            RuleId::R17 => "R17",
            RuleId::CollClosure => "COLL",
            RuleId::CircleClosure => "CYCLIC",
        }
    }

    pub fn from_code(code: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.code() == code)
    }

    /// Relations whose change can enable a new match.
    fn reads(self) -> &'static [Relation] {
        use Relation::*;
        match self {
            RuleId::R01 | RuleId::R03 => &[Midp],
            RuleId::R02 => &[Lines, Lengths],
            RuleId::R04 | RuleId::R05 | RuleId::R11 => &[Lengths],
            RuleId::R06 | RuleId::R09 => &[Circles],
            RuleId::R07 => &[Circles, Lines],
            RuleId::R08 => &[Circles, Directions],
            RuleId::R10 | RuleId::R12 | RuleId::R13 | RuleId::R17 => &[Directions],
            RuleId::R14 => &[Simtri],
            RuleId::R15 => &[Directions, Lengths],
            RuleId::R16 => &[Simtri, Lengths],
            RuleId::CollClosure | RuleId::CircleClosure => &[],
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Candidate {
    pub rule: RuleId,
    pub conclusions: Vec<Fact>,
    pub premises: Vec<Fact>,
}

type DirKey = (BTreeMap<Var, i64>, Constant);

struct View<'a> {
    s: &'a FactStore,
    n: usize,
    dir: HashMap<Var, DirKey>,
    len: HashMap<Var, Vector>,
    angles: RefCell<HashMap<(Var, Var), DirKey>>,
    out: Vec<Candidate>,
}

impl<'a> View<'a> {
    fn new(s: &'a FactStore) -> View<'a> {
        let n = s.labels().len();
        let mut dir = HashMap::new();
        let mut len = HashMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = s.var(a, b);
                dir.insert(v, s.directions().normal_form(&BTreeMap::from([(v, 1)])));
                len.insert(v, s.lengths().normal_form(&super::rational::int_vector([(v, 1)])));
            }
        }
        View { s, n, dir, len, angles: RefCell::new(HashMap::new()), out: Vec::new() }
    }

    fn l(&self, p: Pt) -> &Label {
        self.s.label(p)
    }

    fn v(&self, a: Pt, b: Pt) -> Var {
        self.s.var(a, b)
    }

    /// Key of the directed angle from line `ab` to line `cd`.
    fn angle(&self, (a, b): (Pt, Pt), (c, d): (Pt, Pt)) -> DirKey {
        let (v1, v2) = (self.v(a, b), self.v(c, d));
        if let Some(k) = self.angles.borrow().get(&(v1, v2)) {
            return k.clone();
        }
        let (x, kx) = &self.dir[&v1];
        let (y, ky) = &self.dir[&v2];
        let mut diff = y.clone();
        for (&k, &a) in x {
            let e = diff.entry(k).or_insert(0);
            *e -= a;
            if *e == 0 {
                diff.remove(&k);
            }
        }
        let (nf, k) = self.s.directions().normal_form(&diff);
        let key = (nf, mod_one(k + ky - kx));
        self.angles.borrow_mut().insert((v1, v2), key.clone());
        key
    }

    fn is_para(&self, a: (Pt, Pt), b: (Pt, Pt)) -> bool {
        self.dir[&self.v(a.0, a.1)] == self.dir[&self.v(b.0, b.1)]
    }

    fn is_perp(&self, a: (Pt, Pt), b: (Pt, Pt)) -> bool {
        let (nf, k) = self.angle(a, b);
        nf.is_empty() && k == half()
    }

    fn length(&self, a: Pt, b: Pt) -> &Vector {
        &self.len[&self.v(a, b)]
    }

    fn is_cong(&self, a: (Pt, Pt), b: (Pt, Pt)) -> bool {
        self.length(a.0, a.1) == self.length(b.0, b.1)
    }

    fn ratio(&self, a: (Pt, Pt), b: (Pt, Pt)) -> Vector {
        let mut r = self.length(a.0, a.1).clone();
        for (&k, x) in self.length(b.0, b.1) {
            let e = r.entry(k).or_insert_with(num_rational::BigRational::zero);
            *e -= x;
            if e.is_zero() {
                r.remove(&k);
            }
        }
        r
    }

    fn ncoll(&self, a: Pt, b: Pt, c: Pt) -> bool {
        let (a, b, c) = (self.l(a), self.l(b), self.l(c));
        self.s.witnesses().iter().all(|w| is_ncoll(w, a, b, c, self.s.tolerances()))
    }

    fn same_orientation(&self, t1: [Pt; 3], t2: [Pt; 3]) -> bool {
        self.s.witnesses().iter().all(|w| {
            let o = |t: [Pt; 3]| {
                let [a, b, c] = t.map(|p| w.at(self.l(p)));
                (b - a).cross(c - a).signum()
            };
            o(t1) == o(t2)
        })
    }

    fn emit(&mut self, rule: RuleId, conclusions: Vec<Fact>, premises: Vec<Fact>) {
        let conclusions: Vec<Fact> =
            conclusions.into_iter().filter(|f| !f.is_degenerate() && !f.is_trivial()).collect();
        if !conclusions.is_empty() {
            self.out.push(Candidate { rule, conclusions, premises });
        }
    }

    /// Points grouped by their distance to `o`, in first-seen order.
    fn equidistant(&self, o: Pt) -> Vec<Vec<Pt>> {
        let mut groups: Vec<(Vector, Vec<Pt>)> = Vec::new();
        let mut at: HashMap<Vector, usize> = HashMap::new();
        for x in (0..self.n).filter(|&x| x != o) {
            let key = self.length(o, x).clone();
            match at.get(&key) {
                Some(&i) => groups[i].1.push(x),
                None => {
                    at.insert(key.clone(), groups.len());
                    groups.push((key, vec![x]));
                }
            }
        }
        groups.into_iter().map(|(_, g)| g).filter(|g| g.len() >= 2).collect()
    }

    fn structural(&self, pred: Predicate) -> Vec<Vec<Pt>> {
        self.s
            .structural(pred)
            .iter()
            .map(|&id| {
                let f = &self.s.dag().node(id).fact;
                f.args().iter().map(|l| self.s.point(l).expect("store point")).collect()
            })
            .collect()
    }

    fn f_coll(&self, a: Pt, b: Pt, c: Pt) -> Fact {
        Fact::coll(self.l(a), self.l(b), self.l(c))
    }

    fn f_cong(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Fact {
        Fact::cong(self.l(a), self.l(b), self.l(c), self.l(d))
    }

    fn f_para(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Fact {
        Fact::para(self.l(a), self.l(b), self.l(c), self.l(d))
    }

    fn f_perp(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Fact {
        Fact::perp(self.l(a), self.l(b), self.l(c), self.l(d))
    }

    fn f_eqangle(&self, p: [Pt; 8]) -> Fact {
        let l = |i: usize| self.l(p[i]);
        Fact::eqangle([[l(0), l(1)], [l(2), l(3)], [l(4), l(5)], [l(6), l(7)]])
    }

    fn f_eqratio(&self, p: [Pt; 8]) -> Fact {
        let l = |i: usize| self.l(p[i]);
        Fact::eqratio([[l(0), l(1)], [l(2), l(3)], [l(4), l(5)], [l(6), l(7)]])
    }

    fn f_circle(&self, o: Pt, a: Pt, b: Pt, c: Pt) -> Fact {
        Fact::circle(self.l(o), self.l(a), self.l(b), self.l(c))
    }

    fn f_cyclic(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Fact {
        Fact::cyclic(self.l(a), self.l(b), self.l(c), self.l(d))
    }

    fn f_simtri(&self, t: [Pt; 3], u: [Pt; 3]) -> Fact {
        Fact::simtri(t.map(|p| self.l(p)), u.map(|p| self.l(p)))
    }

    fn f_contri(&self, t: [Pt; 3], u: [Pt; 3]) -> Fact {
        Fact::contri(t.map(|p| self.l(p)), u.map(|p| self.l(p)))
    }

    fn r01(&mut self) {
        for m in self.structural(Predicate::Midp) {
            let (c, a, b) = (m[0], m[1], m[2]);
            let concl = vec![self.f_coll(c, a, b), self.f_cong(c, a, c, b)];
            let prem = vec![Fact::midp(self.l(c), self.l(a), self.l(b))];
            self.emit(RuleId::R01, concl, prem);
        }
    }

    fn r02(&mut self) {
        for m in 0..self.n {
            for g in self.equidistant(m) {
                for (i, &a) in g.iter().enumerate() {
                    for &b in &g[i + 1..] {
                        if self.s.lines().collinear(m, a, b) {
                            let concl = vec![Fact::midp(self.l(m), self.l(a), self.l(b))];
                            let prem = vec![self.f_coll(m, a, b), self.f_cong(m, a, m, b)];
                            self.emit(RuleId::R02, concl, prem);
                        }
                    }
                }
            }
        }
    }

    fn r03(&mut self) {
        let mids = self.structural(Predicate::Midp);
        for (i, f1) in mids.iter().enumerate() {
            for f2 in &mids[i + 1..] {
                let (m, n) = (f1[0], f2[0]);
                for &a in &f1[1..] {
                    if !f2[1..].contains(&a) || m == n {
                        continue;
                    }
                    let b = if f1[1] == a { f1[2] } else { f1[1] };
                    let c = if f2[1] == a { f2[2] } else { f2[1] };
                    if b == c || !self.ncoll(a, b, c) {
                        continue;
                    }
                    let concl = vec![self.f_para(m, n, b, c), self.f_eqratio([m, n, b, c, a, m, a, b])];
                    let prem = vec![
                        Fact::midp(self.l(m), self.l(a), self.l(b)),
                        Fact::midp(self.l(n), self.l(a), self.l(c)),
                    ];
                    self.emit(RuleId::R03, concl, prem);
                }
            }
        }
    }

    fn r04(&mut self) {
        let mut centers: BTreeMap<(Pt, Pt), Vec<Pt>> = BTreeMap::new();
        for p in 0..self.n {
            for g in self.equidistant(p) {
                for (i, &a) in g.iter().enumerate() {
                    for &b in &g[i + 1..] {
                        centers.entry((a.min(b), a.max(b))).or_default().push(p);
                    }
                }
            }
        }
        for ((a, b), ps) in centers {
            for (i, &p) in ps.iter().enumerate() {
                for &q in &ps[i + 1..] {
                    let concl = vec![self.f_perp(p, q, a, b)];
                    let prem = vec![self.f_cong(p, a, p, b), self.f_cong(q, a, q, b)];
                    self.emit(RuleId::R04, concl, prem);
                }
            }
        }
    }

    fn r05(&mut self) {
        for o in 0..self.n {
            for g in self.equidistant(o) {
                for i in 0..g.len() {
                    for j in i + 1..g.len() {
                        for k in j + 1..g.len() {
                            let (a, b, c) = (g[i], g[j], g[k]);
                            if !self.ncoll(a, b, c) || self.s.circles().find(Some(o), &[a, b, c]).is_some() {
                                continue;
                            }
                            let concl = vec![self.f_circle(o, a, b, c)];
                            let prem = vec![self.f_cong(o, a, o, b), self.f_cong(o, b, o, c)];
                            self.emit(RuleId::R05, concl, prem);
                        }
                    }
                }
            }
        }
    }

    /// Centered circle classes as (center, sorted points).
    fn centered(&self) -> Vec<(Pt, Vec<Pt>)> {
        self.s
            .circles()
            .iter()
            .filter_map(|k| k.center.map(|o| (o, k.points.iter().copied().filter(|&p| p != o).collect())))
            .collect()
    }

    fn r06(&mut self) {
        for (o, pts) in self.centered() {
            if pts.len() < 4 {
                continue;
            }
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            for &d in &pts[3..] {
                let concl = vec![self.f_cong(o, a, o, d)];
                let prem = vec![self.f_circle(o, a, b, c), self.f_cyclic(a, b, c, d)];
                self.emit(RuleId::R06, concl, prem);
            }
        }
    }

    fn r07(&mut self) {
        for (o, pts) in self.centered() {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    if !self.s.lines().collinear(a, o, b) {
                        continue;
                    }
                    for &c in pts.iter().filter(|&&c| c != a && c != b) {
                        let concl = vec![self.f_perp(c, a, c, b)];
                        let prem = vec![self.f_circle(o, a, b, c), self.f_coll(a, o, b)];
                        self.emit(RuleId::R07, concl, prem);
                    }
                }
            }
        }
    }

    fn r08(&mut self) {
        for (o, pts) in self.centered() {
            for &c in &pts {
                for (i, &a) in pts.iter().enumerate() {
                    for &b in &pts[i + 1..] {
                        if a == c || b == c || self.s.lines().collinear(a, o, b) || !self.is_perp((c, a), (c, b)) {
                            continue;
                        }
                        let concl = vec![self.f_coll(a, o, b)];
                        let prem = vec![self.f_circle(o, a, b, c), self.f_perp(c, a, c, b)];
                        self.emit(RuleId::R08, concl, prem);
                    }
                }
            }
        }
    }

    fn r09(&mut self) {
        let classes: Vec<Vec<Pt>> = self
            .s
            .circles()
            .iter()
            .map(|k| k.points.iter().copied().filter(|&p| Some(p) != k.center).collect::<Vec<_>>())
            .filter(|p| p.len() >= 4)
            .collect();
        for pts in classes {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    let rest: Vec<Pt> = pts.iter().copied().filter(|&x| x != a && x != b).collect();
                    for (j, &c) in rest.iter().enumerate() {
                        for &d in &rest[j + 1..] {
                            let concl = vec![self.f_eqangle([c, a, c, b, d, a, d, b])];
                            let prem = vec![self.f_cyclic(a, b, c, d)];
                            self.emit(RuleId::R09, concl, prem);
                        }
                    }
                }
            }
        }
    }

    fn r10(&mut self) {
        for a in 0..self.n {
            for b in a + 1..self.n {
                let mut groups: BTreeMap<usize, Vec<Pt>> = BTreeMap::new();
                let mut at: HashMap<DirKey, usize> = HashMap::new();
                for x in (0..self.n).filter(|&x| x != a && x != b) {
                    if !self.ncoll(a, b, x) {
                        continue;
                    }
                    let key = self.angle((x, a), (x, b));
                    let next = at.len();
                    groups.entry(*at.entry(key).or_insert(next)).or_default().push(x);
                }
                for g in groups.into_values() {
                    for (i, &c) in g.iter().enumerate() {
                        for &d in &g[i + 1..] {
                            if self.s.circles().find(None, &[a, b, c, d]).is_some() {
                                continue;
                            }
                            let concl = vec![self.f_cyclic(a, b, c, d)];
                            let prem = vec![self.f_eqangle([c, a, c, b, d, a, d, b])];
                            self.emit(RuleId::R10, concl, prem);
                        }
                    }
                }
            }
        }
    }

    fn r11(&mut self) {
        for o in 0..self.n {
            for g in self.equidistant(o) {
                for (i, &a) in g.iter().enumerate() {
                    for &b in &g[i + 1..] {
                        if !self.ncoll(o, a, b) {
                            continue;
                        }
                        let concl = vec![self.f_eqangle([a, o, a, b, a, b, b, o])];
                        let prem = vec![self.f_cong(o, a, o, b)];
                        self.emit(RuleId::R11, concl, prem);
                    }
                }
            }
        }
    }

    fn r12(&mut self) {
        for o in 0..self.n {
            for a in (0..self.n).filter(|&a| a != o) {
                for b in (a + 1..self.n).filter(|&b| b != o) {
                    if self.is_cong((o, a), (o, b)) || !self.ncoll(o, a, b) {
                        continue;
                    }
                    if self.angle((a, o), (a, b)) == self.angle((a, b), (b, o)) {
                        let concl = vec![self.f_cong(o, a, o, b)];
                        let prem = vec![self.f_eqangle([a, o, a, b, a, b, b, o])];
                        self.emit(RuleId::R12, concl, prem);
                    }
                }
            }
        }
    }

    /// Ordered non-degenerate triangles bucketed by `key`.
    fn triangle_buckets<K: std::hash::Hash + Eq>(&self, key: impl Fn(&Self, [Pt; 3]) -> K) -> Vec<Vec<[Pt; 3]>> {
        let mut buckets: Vec<Vec<[Pt; 3]>> = Vec::new();
        let mut at: HashMap<K, usize> = HashMap::new();
        for a in 0..self.n {
            for b in (0..self.n).filter(|&b| b != a) {
                for c in (0..self.n).filter(|&c| c != a && c != b) {
                    if !self.ncoll(a, b, c) {
                        continue;
                    }
                    let k = key(self, [a, b, c]);
                    match at.get(&k) {
                        Some(&i) => buckets[i].push([a, b, c]),
                        None => {
                            at.insert(k, buckets.len());
                            buckets.push(vec![[a, b, c]]);
                        }
                    }
                }
            }
        }
        buckets.retain(|b| b.len() >= 2);
        buckets
    }

    fn similar_pairs(&mut self, rule: RuleId, buckets: Vec<Vec<[Pt; 3]>>) {
        let mut seen = BTreeSet::new();
        for bucket in buckets {
            for (i, &t) in bucket.iter().enumerate() {
                for &u in &bucket[i + 1..] {
                    let mut st = t;
                    let mut su = u;
                    st.sort_unstable();
                    su.sort_unstable();
                    if st == su {
                        continue;
                    }
                    let fact = self.f_simtri(t, u);
                    if self.s.id_of(&fact).is_some() || !seen.insert(fact.clone()) {
                        continue;
                    }
                    let ([a, b, c], [p, q, r]) = (t, u);
                    let prem = if rule == RuleId::R13 {
                        vec![self.f_eqangle([a, b, a, c, p, q, p, r]), self.f_eqangle([b, a, b, c, q, p, q, r])]
                    } else {
                        if !self.same_orientation(t, u) {
                            continue;
                        }
                        vec![self.f_eqangle([a, b, a, c, p, q, p, r]), self.f_eqratio([a, b, a, c, p, q, p, r])]
                    };
                    self.emit(rule, vec![fact], prem);
                }
            }
        }
    }

    fn r13(&mut self) {
        let buckets = self.triangle_buckets(|v, [a, b, c]| (v.angle((a, b), (a, c)), v.angle((b, a), (b, c))));
        self.similar_pairs(RuleId::R13, buckets);
    }

    fn r15(&mut self) {
        let buckets = self.triangle_buckets(|v, [a, b, c]| (v.angle((a, b), (a, c)), v.ratio((a, b), (a, c))));
        self.similar_pairs(RuleId::R15, buckets);
    }

    fn similar_facts(&self) -> Vec<([Pt; 3], [Pt; 3])> {
        self.structural(Predicate::Simtri)
            .into_iter()
            .map(|p| ([p[0], p[1], p[2]], [p[3], p[4], p[5]]))
            .collect()
    }

    fn r14(&mut self) {
        for (t, u) in self.similar_facts() {
            for perm in PERMS {
                let [a, b, c] = perm.map(|i| t[i]);
                let [p, q, r] = perm.map(|i| u[i]);
                let concl = vec![
                    self.f_eqratio([a, b, p, q, a, c, p, r]),
                    self.f_eqratio([a, b, p, q, b, c, q, r]),
                    self.f_eqangle([a, b, a, c, p, q, p, r]),
                ];
                self.emit(RuleId::R14, concl, vec![self.f_simtri(t, u)]);
            }
        }
    }

    fn r16(&mut self) {
        for (t, u) in self.similar_facts() {
            for perm in PERMS {
                let [a, b, c] = perm.map(|i| t[i]);
                let [p, q, r] = perm.map(|i| u[i]);
                if !self.is_cong((a, b), (p, q)) {
                    continue;
                }
                let concl =
                    vec![self.f_contri([a, b, c], [p, q, r]), self.f_cong(a, c, p, r), self.f_cong(b, c, q, r)];
                self.emit(RuleId::R16, concl, vec![self.f_simtri(t, u), self.f_cong(a, b, p, q)]);
            }
        }
    }

    fn r17(&mut self) {
        for a in 0..self.n {
            let others: Vec<Pt> = (0..self.n).filter(|&x| x != a).collect();
            for (i, &b) in others.iter().enumerate() {
                for &c in &others[i + 1..] {
                    if self.s.lines().collinear(a, b, c) || !self.is_para((a, b), (a, c)) {
                        continue;
                    }
                    self.emit(RuleId::R17, vec![self.f_coll(a, b, c)], vec![self.f_para(a, b, a, c)]);
                }
            }
        }
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

/// All rule matches whose inputs changed, sorted by rule id then conclusion.
pub(crate) fn candidates(s: &FactStore, changed: &BTreeSet<Relation>) -> Vec<Candidate> {
    let mut v = View::new(s);
    let fires = |r: RuleId| r.reads().iter().any(|x| changed.contains(x));
    for rule in RuleId::ALL.into_iter().filter(|&r| fires(r)) {
        match rule {
            RuleId::R01 => v.r01(),
            RuleId::R02 => v.r02(),
            RuleId::R03 => v.r03(),
            RuleId::R04 => v.r04(),
            RuleId::R05 => v.r05(),
            RuleId::R06 => v.r06(),
            RuleId::R07 => v.r07(),
            RuleId::R08 => v.r08(),
            RuleId::R09 => v.r09(),
            RuleId::R10 => v.r10(),
            RuleId::R11 => v.r11(),
            RuleId::R12 => v.r12(),
            RuleId::R13 => v.r13(),
            RuleId::R14 => v.r14(),
            RuleId::R15 => v.r15(),
            RuleId::R16 => v.r16(),
            RuleId::R17 => v.r17(),
            RuleId::CollClosure | RuleId::CircleClosure => {}
        }
    }
    let mut out = v.out;
    out.sort();
    out.dedup_by(|a, b| a.rule == b.rule && a.conclusions == b.conclusions);
    out
}
