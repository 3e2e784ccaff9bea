//! Union-find structures for lines (maximal collinear point sets) and
//! circles (maximal concyclic point sets, optionally with a known center).

use std::collections::{BTreeSet, HashMap};

pub type Pt = usize;
pub type Pair = (Pt, Pt);
pub type FactId = usize;

pub fn pair(a: Pt, b: Pt) -> Pair {
    if a <= b { (a, b) } else { (b, a) }
}

#[derive(Clone, Debug)]
struct LineClass {
    points: BTreeSet<Pt>,
    rep: Pair,
    facts: Vec<FactId>,
}

/// Lines as point sets. Every point pair that lies on a class is recorded;
/// whenever a pair joins a class, the direction of that pair is tied to the
/// class representative, and the caller receives that identity.
#[derive(Clone, Debug, Default)]
pub struct LineClasses {
    parent: Vec<usize>,
    classes: Vec<LineClass>,
    of_pair: HashMap<Pair, usize>,
}

impl LineClasses {
    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    pub fn class_of(&self, a: Pt, b: Pt) -> Option<usize> {
        self.of_pair.get(&pair(a, b)).map(|&c| self.find(c))
    }

    pub fn collinear(&self, a: Pt, b: Pt, c: Pt) -> bool {
        if a == b || b == c || a == c {
            return true;
        }
        self.class_of(a, b).is_some_and(|k| self.classes[k].points.contains(&c))
    }

    pub fn points(&self, class: usize) -> &BTreeSet<Pt> {
        &self.classes[self.find(class)].points
    }

    pub fn facts(&self, class: usize) -> &[FactId] {
        &self.classes[self.find(class)].facts
    }

    /// Root classes with at least three points.
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.classes.len()).filter(|&i| self.parent[i] == i && self.classes[i].points.len() >= 3)
    }

    fn ensure(&mut self, a: Pt, b: Pt) -> usize {
        if let Some(c) = self.class_of(a, b) {
            return c;
        }
        let id = self.classes.len();
        self.parent.push(id);
        self.classes.push(LineClass { points: BTreeSet::from([a, b]), rep: pair(a, b), facts: Vec::new() });
        self.of_pair.insert(pair(a, b), id);
        id
    }

    /// Records `coll(a, b, c)` and returns the pair-direction identities it
    /// implies.
    pub fn add_coll(&mut self, a: Pt, b: Pt, c: Pt, fact: FactId) -> Vec<(Pair, Pair)> {
        let root = self.ensure(a, b);
        self.classes[root].facts.push(fact);
        let mut identities = Vec::new();
        let mut work = vec![c];
        while let Some(q) = work.pop() {
            if self.classes[root].points.contains(&q) {
                continue;
            }
            let members: Vec<Pt> = self.classes[root].points.iter().copied().collect();
            for p in members {
                let pr = pair(p, q);
                match self.of_pair.get(&pr).copied() {
                    Some(z) => {
                        let z = self.find(z);
                        if z != root {
                            self.parent[z] = root;
                            identities.push((self.classes[z].rep, self.classes[root].rep));
                            let moved = std::mem::take(&mut self.classes[z].facts);
                            self.classes[root].facts.extend(moved);
                            work.extend(self.classes[z].points.iter().copied());
                        }
                    }
                    None => {
                        self.of_pair.insert(pr, root);
                        identities.push((pr, self.classes[root].rep));
                    }
                }
            }
            self.classes[root].points.insert(q);
        }
        self.classes[root].facts.sort_unstable();
        identities
    }
}

#[derive(Clone, Debug)]
pub struct CircleClass {
    pub points: BTreeSet<Pt>,
    pub center: Option<Pt>,
    pub facts: Vec<FactId>,
    alive: bool,
}

fn circles_join(a: &BTreeSet<Pt>, ac: Option<Pt>, b: &BTreeSet<Pt>, bc: Option<Pt>) -> bool {
    let shared = a.intersection(b).count();
    shared >= 3 || (ac.is_some() && ac == bc && shared >= 1)
}

#[derive(Clone, Debug, Default)]
pub struct CircleClasses {
    classes: Vec<CircleClass>,
}

impl CircleClasses {
    pub fn iter(&self) -> impl Iterator<Item = &CircleClass> {
        self.classes.iter().filter(|c| c.alive)
    }

    pub fn add(&mut self, center: Option<Pt>, points: &[Pt], fact: FactId) {
        let mut cur = CircleClass {
            points: points.iter().copied().collect(),
            center,
            facts: vec![fact],
            alive: true,
        };
        loop {
            let hit = self
                .classes
                .iter()
                .position(|k| k.alive && circles_join(&k.points, k.center, &cur.points, cur.center));
            let Some(i) = hit else { break };
            let k = &mut self.classes[i];
            k.alive = false;
            cur.points.extend(k.points.iter().copied());
            cur.center = cur.center.or(k.center);
            cur.facts.append(&mut k.facts);
        }
        cur.facts.sort_unstable();
        self.classes.push(cur);
    }

    pub fn find(&self, center: Option<Pt>, points: &[Pt]) -> Option<&CircleClass> {
        self.iter().find(|k| {
            (center.is_none() || k.center == center) && points.iter().all(|p| k.points.contains(p))
        })
    }
}

/// A fact viewed as a point set for closure explanations.
#[derive(Clone, Debug)]
pub struct Member {
    pub fact: FactId,
    pub points: BTreeSet<Pt>,
    pub center: Option<Pt>,
}

/// Whether the members, merged under the join rule, form one set covering
/// `target` (with center `center` when given).
fn closes(members: &[&Member], target: &[Pt], center: Option<Pt>, line: bool) -> bool {
    let mut comps: Vec<(BTreeSet<Pt>, Option<Pt>)> =
        members.iter().map(|m| (m.points.clone(), m.center)).collect();
    let joins = |a: &(BTreeSet<Pt>, Option<Pt>), b: &(BTreeSet<Pt>, Option<Pt>)| {
        if line { a.0.intersection(&b.0).count() >= 2 } else { circles_join(&a.0, a.1, &b.0, b.1) }
    };
    loop {
        let mut merged = false;
        'outer: for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                if joins(&comps[i], &comps[j]) {
                    let (pts, c) = comps.swap_remove(j);
                    comps[i].0.extend(pts);
                    comps[i].1 = comps[i].1.or(c);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    comps
        .iter()
        .any(|(pts, c)| target.iter().all(|p| pts.contains(p)) && (center.is_none() || *c == center))
}

/// Picks a small subset of `members` whose closure still covers the target.
/// `line` selects the collinearity join rule; otherwise circles are joined.
pub fn explain(members: &[Member], target: &[Pt], center: Option<Pt>, line: bool) -> Option<Vec<FactId>> {
    let mut keep: Vec<&Member> = members.iter().collect();
    if !closes(&keep, target, center, line) {
        return None;
    }
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let mut trial = keep.clone();
        trial.remove(i);
        if !trial.is_empty() && closes(&trial, target, center, line) {
            keep = trial;
        }
    }
    let mut ids: Vec<FactId> = keep.iter().map(|m| m.fact).collect();
    ids.sort_unstable();
    ids.dedup();
    Some(ids)
}
