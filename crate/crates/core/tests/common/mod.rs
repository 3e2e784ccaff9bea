//! Random primitive constructions for property tests.

use pww_core::construction::parse_construction;
use pww_core::numeric::instantiate;
use pww_core::{Construction, Tolerances};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A well-formed, non-degenerate construction built from primitive steps
/// only. Steps that would make the figure degenerate are skipped.
pub fn random_construction(seed: u64, max_steps: usize) -> Construction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerances::default();
    let free = rng.gen_range(3..=4);
    let mut points: Vec<String> = (0..free).map(|i| format!("P{i}")).collect();
    let mut lines: Vec<String> = Vec::new();
    let mut circles: Vec<String> = Vec::new();
    let mut text = format!("point {}\n", points.join(", "));
    let steps = rng.gen_range(max_steps / 2..=max_steps);
    let mut tries = 0;
    let mut added = 0;
    while added < steps && tries < 6 * max_steps {
        tries += 1;
        let pick = |rng: &mut ChaCha8Rng, v: &[String], k: usize| -> Vec<String> {
            v.choose_multiple(rng, k).cloned().collect()
        };
        // Weighted toward steps that create points on existing carriers.
        const WEIGHTS: [(u32, u32); 9] = [(0, 3), (1, 3), (2, 2), (3, 2), (4, 2), (5, 5), (6, 1), (7, 1), (8, 2)];
        let kind = WEIGHTS.choose_weighted(&mut rng, |w| w.1).unwrap().0;
        let new = added;
        let (line, label) = match kind {
            0 => {
                let p = pick(&mut rng, &points, 2);
                (format!("midpoint Q{new} {} {}", p[0], p[1]), Some(('p', format!("Q{new}"))))
            }
            1 => {
                let p = pick(&mut rng, &points, 2);
                (format!("line l{new} {} {}", p[0], p[1]), Some(('l', format!("l{new}"))))
            }
            2 | 3 if !lines.is_empty() => {
                let p = pick(&mut rng, &points, 1);
                let l = pick(&mut rng, &lines, 1);
                let kw = if kind == 2 { "parallel" } else { "perpendicular" };
                (format!("{kw} l{new} {} {}", p[0], l[0]), Some(('l', format!("l{new}"))))
            }
            4 => {
                let p = pick(&mut rng, &points, 2);
                (format!("perpbisector l{new} {} {}", p[0], p[1]), Some(('l', format!("l{new}"))))
            }
            5 if lines.len() >= 2 => {
                let l = pick(&mut rng, &lines, 2);
                (format!("intersect Q{new} {} {}", l[0], l[1]), Some(('p', format!("Q{new}"))))
            }
            6 if points.len() >= 3 => {
                let p = pick(&mut rng, &points, 3);
                (format!("circumcircle c{new} {} {} {}", p[0], p[1], p[2]), Some(('c', format!("c{new}"))))
            }
            7 => {
                let p = pick(&mut rng, &points, 2);
                (format!("circle c{new} {} {}", p[0], p[1]), Some(('c', format!("c{new}"))))
            }
            8 if !lines.is_empty() || !circles.is_empty() => {
                let carriers: Vec<String> = lines.iter().chain(&circles).cloned().collect();
                let k = pick(&mut rng, &carriers, 1);
                (format!("on Q{new} {}", k[0]), Some(('p', format!("Q{new}"))))
            }
            _ => (String::new(), None),
        };
        let Some((ty, label)) = label else { continue };
        let candidate = format!("{text}{line}\n");
        let Ok(c) = parse_construction(&candidate) else { continue };
        if instantiate(&c, 0, &tol).is_err() {
            continue;
        }
        text = candidate;
        added += 1;
        match ty {
            'p' => points.push(label),
            'l' => lines.push(label),
            _ => circles.push(label),
        }
    }
    parse_construction(&text).expect("generated text parses")
}
