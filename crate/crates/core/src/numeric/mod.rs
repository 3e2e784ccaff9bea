//! Numeric witnesses: concrete coordinates for a construction, predicate
//! evaluation with tolerances, and the numeric check of conjectures.

mod conjecture;
mod eval;
mod geom;

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construction::{Construction, Step, StepKind};
use crate::label::Label;

pub use conjecture::{check_conjecture, relate, Verdict};
pub use eval::{eval_fact, is_ncoll};
pub use geom::Vec2;

/// Resampling attempts before a construction is declared degenerate.
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Predicate truth threshold on normalized residuals.
    pub eq_tol: f64,
    /// Degeneracy rejection threshold.
    pub deg_tol: f64,
    /// Independent witnesses used by the numeric check.
    pub samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eq_tol: 1e-9, deg_tol: 1e-6, samples: 10 }
    }
}

impl Tolerances {
    pub fn with_eq_tol(self, eq_tol: f64) -> Self {
        Tolerances { eq_tol, ..self }
    }

    pub fn is_valid(&self) -> bool {
        0.0 < self.eq_tol && self.eq_tol < self.deg_tol && self.deg_tol < 1.0
    }
}

/// Value of one construction object in a witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry {
    Point(Vec2),
    /// A line through `point` with unit direction `dir`.
    Line { point: Vec2, dir: Vec2 },
    Circle { center: Vec2, radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Object {
    pub geometry: Geometry,
    /// Free points (and points on carriers) are sampled; everything else is
    /// computed from earlier objects.
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("degenerate construction: {reason} (after {attempts} attempts)")]
    Degenerate { reason: String, attempts: usize },
    #[error("construction is not well formed: {0}")]
    Invalid(String),
}

/// One concrete coordinate assignment for a construction.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericModel {
    seed: u64,
    objects: BTreeMap<Label, Object>,
    order: Vec<Label>,
}

/// Mixes a base seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

enum Sampler<'a> {
    Random(&'a mut ChaCha8Rng),
    Hint(&'a HashMap<Label, Vec2>),
}

impl NumericModel {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn object(&self, label: &Label) -> Option<&Object> {
        self.objects.get(label)
    }

    pub fn point(&self, label: &Label) -> Option<Vec2> {
        match self.objects.get(label)?.geometry {
            Geometry::Point(p) => Some(p),
            _ => None,
        }
    }

    /// Point coordinate; panics when `label` is not a point of the model.
    pub fn at(&self, label: &Label) -> Vec2 {
        self.point(label).unwrap_or_else(|| panic!("`{label}` is not a point of the witness"))
    }

    pub fn is_free(&self, label: &Label) -> bool {
        self.objects.get(label).is_some_and(|o| o.free)
    }

    /// Labels in construction order.
    pub fn labels(&self) -> &[Label] {
        &self.order
    }

    /// Point labels with coordinates, in construction order.
    pub fn points(&self) -> impl Iterator<Item = (&Label, Vec2)> {
        self.order.iter().filter_map(|l| self.point(l).map(|p| (l, p)))
    }

    /// Applies `p ↦ scale·R(angle)·p + shift` to every object.
    pub fn transformed(&self, scale: f64, angle: f64, shift: Vec2) -> NumericModel {
        let map = |p: Vec2| p.rotate(angle) * scale + shift;
        let objects = self
            .objects
            .iter()
            .map(|(l, o)| {
                let geometry = match o.geometry {
                    Geometry::Point(p) => Geometry::Point(map(p)),
                    Geometry::Line { point, dir } => Geometry::Line { point: map(point), dir: dir.rotate(angle) },
                    Geometry::Circle { center, radius } => {
                        Geometry::Circle { center: map(center), radius: radius * scale }
                    }
                };
                (l.clone(), Object { geometry, free: o.free })
            })
            .collect();
        NumericModel { seed: self.seed, objects, order: self.order.clone() }
    }

    /// A witness made of free points only, with no degeneracy checks.
    pub fn from_points(points: impl IntoIterator<Item = (Label, Vec2)>) -> NumericModel {
        let mut objects = BTreeMap::new();
        let mut order = Vec::new();
        for (label, p) in points {
            order.push(label.clone());
            objects.insert(label, Object { geometry: Geometry::Point(p), free: true });
        }
        NumericModel { seed: 0, objects, order }
    }

    /// Recomputes a witness from given coordinates of the sampled points.
    /// Points on carriers are projected onto their carrier.
    pub fn from_hint(
        c: &Construction,
        hint: &HashMap<Label, Vec2>,
        tol: &Tolerances,
    ) -> Result<NumericModel, NumericError> {
        realize(c, 0, Sampler::Hint(hint), tol)
            .map_err(|reason| NumericError::Degenerate { reason, attempts: 1 })
    }
}

/// Samples free points uniformly from `[-1,1]²` and computes every other
/// object in closed form, resampling degenerate draws.
pub fn instantiate(c: &Construction, seed: u64, tol: &Tolerances) -> Result<NumericModel, NumericError> {
    let diags = crate::construction::validate(c);
    if let Some(d) = diags.first() {
        return Err(NumericError::Invalid(d.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..MAX_ATTEMPTS {
        match realize(c, seed, Sampler::Random(&mut rng), tol) {
            Ok(model) => return Ok(model),
            Err(reason) => last = reason,
        }
    }
    Err(NumericError::Degenerate { reason: last, attempts: MAX_ATTEMPTS })
}

fn realize(c: &Construction, seed: u64, mut sampler: Sampler<'_>, tol: &Tolerances) -> Result<NumericModel, String> {
    let mut objects: BTreeMap<Label, Object> = BTreeMap::new();
    let mut order = Vec::with_capacity(c.len());

    let mut free_pts = Vec::new();
    for step in c.steps().iter().filter(|s| s.kind == StepKind::FreePoint) {
        let p = match &mut sampler {
            Sampler::Random(rng) => Vec2::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
            Sampler::Hint(h) => *h.get(&step.label).ok_or_else(|| format!("no coordinates for `{}`", step.label))?,
        };
        free_pts.push((step.label.clone(), p));
    }
    let scale = free_pts
        .iter()
        .flat_map(|(_, p)| free_pts.iter().map(move |(_, q)| (*p - *q).norm()))
        .fold(0.0_f64, f64::max)
        .max(1.0e-3);
    let free_map: HashMap<Label, Vec2> = free_pts.into_iter().collect();

    let point = |objects: &BTreeMap<Label, Object>, l: &Label| match objects[l].geometry {
        Geometry::Point(p) => p,
        _ => unreachable!("validated construction"),
    };
    let line = |objects: &BTreeMap<Label, Object>, l: &Label| match objects[l].geometry {
        Geometry::Line { point, dir } => (point, dir),
        _ => unreachable!("validated construction"),
    };
    let apart = |a: Vec2, b: Vec2, what: &Step| {
        if (a - b).norm() < tol.deg_tol * scale {
            Err(format!("coincident points in `{what}`"))
        } else {
            Ok(())
        }
    };

    for step in c.steps() {
        let a = &step.args;
        let (geometry, free) = match step.kind {
            StepKind::FreePoint => (Geometry::Point(free_map[&step.label]), true),
            StepKind::PointOn => {
                let p = match objects[&a[0]].geometry {
                    Geometry::Line { point, dir } => match &mut sampler {
                        Sampler::Random(rng) => point + dir * (rng.gen_range(-1.0..=1.0) * scale),
                        Sampler::Hint(h) => {
                            let q = *h.get(&step.label).ok_or_else(|| format!("no coordinates for `{}`", step.label))?;
                            point + dir * (q - point).dot(dir)
                        }
                    },
                    Geometry::Circle { center, radius } => match &mut sampler {
                        Sampler::Random(rng) => {
                            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                            center + Vec2::new(t.cos(), t.sin()) * radius
                        }
                        Sampler::Hint(h) => {
                            let q = *h.get(&step.label).ok_or_else(|| format!("no coordinates for `{}`", step.label))?;
                            let d = q - center;
                            if d.norm() < tol.deg_tol * scale {
                                return Err(format!("point `{}` at circle center", step.label));
                            }
                            center + d * (radius / d.norm())
                        }
                    },
                    Geometry::Point(_) => unreachable!("validated construction"),
                };
                (Geometry::Point(p), true)
            }
            StepKind::Midpoint => {
                let (p, q) = (point(&objects, &a[0]), point(&objects, &a[1]));
                apart(p, q, step)?;
                (Geometry::Point((p + q) * 0.5), false)
            }
            StepKind::LineThrough => {
                let (p, q) = (point(&objects, &a[0]), point(&objects, &a[1]));
                apart(p, q, step)?;
                (Geometry::Line { point: p, dir: (q - p).unit() }, false)
            }
            StepKind::ParallelLine => {
                let (_, d) = line(&objects, &a[1]);
                (Geometry::Line { point: point(&objects, &a[0]), dir: d }, false)
            }
            StepKind::PerpLine => {
                let (_, d) = line(&objects, &a[1]);
                (Geometry::Line { point: point(&objects, &a[0]), dir: d.perp() }, false)
            }
            StepKind::PerpBisector => {
                let (p, q) = (point(&objects, &a[0]), point(&objects, &a[1]));
                apart(p, q, step)?;
                (Geometry::Line { point: (p + q) * 0.5, dir: (q - p).unit().perp() }, false)
            }
            StepKind::Intersect => {
                let (p1, d1) = line(&objects, &a[0]);
                let (p2, d2) = line(&objects, &a[1]);
                let denom = d1.cross(d2);
                if denom.abs() < tol.deg_tol {
                    return Err(format!("parallel lines in `{step}`"));
                }
                let t = (p2 - p1).cross(d2) / denom;
                (Geometry::Point(p1 + d1 * t), false)
            }
            StepKind::Circumcircle => {
                let (p, q, r) = (point(&objects, &a[0]), point(&objects, &a[1]), point(&objects, &a[2]));
                let diam = (p - q).norm().max((q - r).norm()).max((r - p).norm());
                let area = (q - p).cross(r - p).abs() / 2.0;
                if area < tol.deg_tol * diam * diam {
                    return Err(format!("collinear triple in `{step}`"));
                }
                let center = geom::circumcenter(p, q, r);
                (Geometry::Circle { center, radius: (p - center).norm() }, false)
            }
            StepKind::CircleCenterThrough => {
                let (o, p) = (point(&objects, &a[0]), point(&objects, &a[1]));
                apart(o, p, step)?;
                (Geometry::Circle { center: o, radius: (p - o).norm() }, false)
            }
        };
        if let Geometry::Point(p) = geometry {
            if !p.is_finite() {
                return Err(format!("non-finite coordinates in `{step}`"));
            }
            for (other, obj) in &objects {
                if let Geometry::Point(q) = obj.geometry {
                    if (p - q).norm() < tol.deg_tol * scale {
                        return Err(format!("`{}` coincides with `{other}`", step.label));
                    }
                }
            }
        }
        objects.insert(step.label.clone(), Object { geometry, free });
        order.push(step.label.clone());
    }
    Ok(NumericModel { seed, objects, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::parse_construction;
    use crate::label::l;

    const EULER: &str = "point A B C\ncircumcenter O A B C\ncentroid G A B C\northocenter H A B C";

    #[test]
    fn midpoint_is_exact() {
        let c = parse_construction("point A\npoint B\nmidpoint M A B").unwrap();
        let w = instantiate(&c, 1, &Tolerances::default()).unwrap();
        let (a, b, m) = (w.at(&l("A")), w.at(&l("B")), w.at(&l("M")));
        assert_eq!(m, (a + b) * 0.5);
        assert!(w.is_free(&l("A")) && !w.is_free(&l("M")));
        for p in [a, b] {
            assert!(p.x.abs() <= 1.0 && p.y.abs() <= 1.0);
        }
    }

    #[test]
    fn forced_parallel_intersection_is_degenerate() {
        let c = parse_construction(
            "point A B P Q\nline l A B\nparallel m P l\nparallel n Q l\nintersect X m n",
        )
        .unwrap();
        let err = instantiate(&c, 3, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, NumericError::Degenerate { attempts: MAX_ATTEMPTS, .. }), "{err}");
    }

    #[test]
    fn euler_triangles_are_not_thin() {
        let c = parse_construction(EULER).unwrap();
        let tol = Tolerances::default();
        for seed in 0..200 {
            let w = instantiate(&c, seed, &tol).unwrap();
            let (a, b, cc) = (w.at(&l("A")), w.at(&l("B")), w.at(&l("C")));
            let diam = (a - b).norm().max((b - cc).norm()).max((cc - a).norm());
            let area = (b - a).cross(cc - a).abs() / 2.0;
            assert!(area / (diam * diam) >= tol.deg_tol, "seed {seed}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let c = parse_construction(EULER).unwrap();
        let tol = Tolerances::default();
        let a = instantiate(&c, 42, &tol).unwrap();
        let b = instantiate(&c, 42, &tol).unwrap();
        for (x, y) in a.points().zip(b.points()) {
            assert_eq!(x.1.x.to_bits(), y.1.x.to_bits());
            assert_eq!(x.1.y.to_bits(), y.1.y.to_bits());
        }
        assert_ne!(a, instantiate(&c, 43, &tol).unwrap());
    }

    #[test]
    fn points_on_carriers_lie_on_them() {
        let c = parse_construction("point A B O\nline l A B\non P l\ncircle k O A\non Q k").unwrap();
        let w = instantiate(&c, 9, &Tolerances::default()).unwrap();
        let (a, b, p) = (w.at(&l("A")), w.at(&l("B")), w.at(&l("P")));
        assert!((b - a).cross(p - a).abs() < 1e-12);
        let (o, q) = (w.at(&l("O")), w.at(&l("Q")));
        assert!(((q - o).norm() - (a - o).norm()).abs() < 1e-12);
    }

    #[test]
    fn hint_reproduces_witness() {
        let c = parse_construction("point A B O\nline l A B\non P l\nmidpoint M A P").unwrap();
        let tol = Tolerances::default();
        let w = instantiate(&c, 5, &tol).unwrap();
        let hint: HashMap<Label, Vec2> =
            w.points().filter(|(l, _)| w.is_free(l)).map(|(l, p)| (l.clone(), p)).collect();
        let v = NumericModel::from_hint(&c, &hint, &tol).unwrap();
        for ((_, p), (_, q)) in w.points().zip(v.points()) {
            assert!((p - q).norm() < 1e-12);
        }
    }
}
