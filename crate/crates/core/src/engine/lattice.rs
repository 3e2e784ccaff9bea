//! Direction system: integer relations between line directions, with
//! constants taken modulo a half-turn.
//!
//! Every stored row states `Σ aᵢ·dᵢ ≡ c (mod 1)` where `dᵢ` is a direction in
//! half-turn units and the `aᵢ` are integers. Only integer combinations of
//! rows are sound modulo 1 (from `2x ≡ 0` nothing follows about `x`), so the
//! rows are kept in an echelon basis of the lattice they span, built with
//! unimodular (extended-gcd) row operations. A query is derivable exactly
//! when the target vector lies in that lattice and the accumulated constant
//! matches.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

pub type Var = usize;
pub type RowId = usize;
pub type Constant = Ratio<i64>;

/// Reduces a constant into `[0, 1)`.
pub fn mod_one(c: Constant) -> Constant {
    c - c.floor()
}

/// `q·c mod 1` without overflowing for large `q`.
fn scale_mod_one(c: Constant, q: i64) -> Constant {
    let d = *c.denom();
    let n = (q.rem_euclid(d) as i128 * c.numer().rem_euclid(d) as i128).rem_euclid(d as i128);
    Ratio::new(n as i64, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: BTreeMap<Var, i64>,
    pub constant: Constant,
}

/// An integer combination of stored rows.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Combination(pub BTreeMap<RowId, i64>);

#[derive(Clone, Debug)]
struct Basis {
    coeffs: BTreeMap<Var, i64>,
    constant: Constant,
    combo: BTreeMap<RowId, i64>,
}

fn axpy(dst: &BTreeMap<usize, i64>, q: i64, src: &BTreeMap<usize, i64>) -> Option<BTreeMap<usize, i64>> {
    let mut out = dst.clone();
    for (&k, &v) in src {
        let e = out.entry(k).or_insert(0);
        *e = e.checked_add(q.checked_mul(v)?)?;
        if *e == 0 {
            out.remove(&k);
        }
    }
    Some(out)
}

fn scaled(src: &BTreeMap<usize, i64>, q: i64) -> Option<BTreeMap<usize, i64>> {
    axpy(&BTreeMap::new(), q, src)
}

impl Basis {
    /// `self + q·other`
    fn plus(&self, q: i64, other: &Basis) -> Option<Basis> {
        Some(Basis {
            coeffs: axpy(&self.coeffs, q, &other.coeffs)?,
            constant: mod_one(self.constant + scale_mod_one(other.constant, q)),
            combo: axpy(&self.combo, q, &other.combo)?,
        })
    }

    /// `a·self + b·other`
    fn combine(&self, a: i64, b: i64, other: &Basis) -> Option<Basis> {
        let base = Basis {
            coeffs: scaled(&self.coeffs, a)?,
            constant: scale_mod_one(self.constant, a),
            combo: scaled(&self.combo, a)?,
        };
        base.plus(b, other)
    }

    fn negated(&self) -> Basis {
        Basis {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, -v)).collect(),
            constant: mod_one(-self.constant),
            combo: self.combo.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LatticeSystem {
    rows: Vec<Row>,
    pivots: BTreeMap<Var, Basis>,
    dropped: usize,
}

impl LatticeSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, id: RowId) -> &Row {
        &self.rows[id]
    }

    /// Rows whose reduction overflowed; they are not part of the basis, which
    /// keeps the system sound but possibly incomplete.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (Var, i64)>, constant: Constant) -> RowId {
        let mut map = BTreeMap::new();
        for (v, a) in coeffs {
            *map.entry(v).or_insert(0i64) += a;
        }
        map.retain(|_, a| *a != 0);
        let id = self.rows.len();
        let constant = mod_one(constant);
        self.rows.push(Row { coeffs: map.clone(), constant });
        let basis = Basis { coeffs: map, constant, combo: BTreeMap::from([(id, 1)]) };
        if self.insert(basis).is_none() {
            self.dropped += 1;
            log::warn!("direction row {id} dropped after coefficient overflow");
        }
        id
    }

    fn insert(&mut self, mut r: Basis) -> Option<()> {
        loop {
            let Some((&col, &b)) = r.coeffs.iter().next() else {
                if !r.constant.is_zero() {
                    log::warn!("inconsistent direction rows: 0 ≡ {}", r.constant);
                }
                return Some(());
            };
            let Some(p) = self.pivots.get(&col) else {
                self.pivots.insert(col, if b < 0 { r.negated() } else { r });
                return Some(());
            };
            let a = p.coeffs[&col];
            if b % a == 0 {
                r = r.plus(-(b / a), p)?;
                continue;
            }
            let e = a.extended_gcd(&b);
            let (g, u, v) = (e.gcd, e.x, e.y);
            let new_pivot = p.combine(u, v, &r)?;
            let rest = p.combine(b / g, -(a / g), &r)?;
            let new_pivot = if new_pivot.coeffs[&col] < 0 { new_pivot.negated() } else { new_pivot };
            self.pivots.insert(col, new_pivot);
            r = rest;
        }
    }

    /// Finds an integer combination of rows equal to `target` whose constant
    /// is congruent to `constant`.
    pub fn certify(&self, target: &BTreeMap<Var, i64>, constant: Constant) -> Option<Combination> {
        let mut v = Basis { coeffs: target.clone(), constant: Constant::zero(), combo: BTreeMap::new() };
        v.coeffs.retain(|_, a| *a != 0);
        while let Some((&col, &b)) = v.coeffs.iter().next() {
            let p = self.pivots.get(&col)?;
            let a = p.coeffs[&col];
            if b % a != 0 {
                return None;
            }
            // v.combo accumulates the rows subtracted, so track with +q.
            let q = b / a;
            let next = Basis {
                coeffs: axpy(&v.coeffs, -q, &p.coeffs)?,
                constant: mod_one(v.constant + scale_mod_one(p.constant, q)),
                combo: axpy(&v.combo, q, &p.combo)?,
            };
            v = next;
        }
        (mod_one(v.constant - constant)).is_zero().then_some(Combination(v.combo))
    }

    /// Canonical representative of `v` modulo the lattice, with the constant
    /// `K` such that `v·d ≡ nf·d + K`.
    pub fn normal_form(&self, v: &BTreeMap<Var, i64>) -> (BTreeMap<Var, i64>, Constant) {
        let mut coeffs = v.clone();
        coeffs.retain(|_, a| *a != 0);
        let mut constant = Constant::zero();
        let mut cursor = 0;
        loop {
            let next = coeffs.range(cursor..).map(|(&c, &a)| (c, a)).find(|(c, _)| self.pivots.contains_key(c));
            let Some((col, b)) = next else { break };
            let p = &self.pivots[&col];
            let q = b.div_euclid(p.coeffs[&col]);
            if q != 0 {
                match axpy(&coeffs, -q, &p.coeffs) {
                    Some(c) => coeffs = c,
                    None => break,
                }
                constant = mod_one(constant + scale_mod_one(p.constant, q));
            }
            cursor = col + 1;
        }
        (coeffs, constant)
    }

    /// Checks a combination against the stored rows: the weighted sum equals
    /// `target` exactly and the constants agree modulo 1.
    pub fn verify(&self, combo: &Combination, target: &BTreeMap<Var, i64>, constant: Constant) -> bool {
        let mut sum: BTreeMap<Var, i64> = BTreeMap::new();
        let mut k = Constant::zero();
        for (&id, &q) in &combo.0 {
            let Some(row) = self.rows.get(id) else { return false };
            for (&v, &a) in &row.coeffs {
                *sum.entry(v).or_insert(0) += q * a;
            }
            k = mod_one(k + scale_mod_one(row.constant, q));
        }
        sum.retain(|_, a| *a != 0);
        let mut t = target.clone();
        t.retain(|_, a| *a != 0);
        sum == t && mod_one(k - constant).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Constant {
        Ratio::new(1, 2)
    }

    fn vecmap(entries: &[(Var, i64)]) -> BTreeMap<Var, i64> {
        entries.iter().copied().collect()
    }

    #[test]
    fn perp_then_para_gives_perp() {
        // d_AB − d_CD = ½, d_CD − d_EF = 0  ⟹  d_AB − d_EF = ½
        let mut s = LatticeSystem::new();
        let r0 = s.add_row([(0, 1), (1, -1)], half());
        let r1 = s.add_row([(1, 1), (2, -1)], Constant::zero());
        let target = vecmap(&[(0, 1), (2, -1)]);
        let cert = s.certify(&target, half()).expect("derivable");
        assert_eq!(cert.0, BTreeMap::from([(r0, 1), (r1, 1)]));
        assert!(s.verify(&cert, &target, half()));
        assert!(s.certify(&target, Constant::zero()).is_none());
    }

    #[test]
    fn halving_is_not_sound() {
        let mut s = LatticeSystem::new();
        s.add_row([(0, 2)], Constant::zero());
        assert!(s.certify(&vecmap(&[(0, 1)]), Constant::zero()).is_none());
        assert!(s.certify(&vecmap(&[(0, 4)]), Constant::zero()).is_some());
    }

    #[test]
    fn gcd_merge_recovers_unit_generator() {
        // 2x ≡ 0 and 3x ≡ ½ give x ≡ 3x − 2x ≡ ½.
        let mut s = LatticeSystem::new();
        s.add_row([(0, 2)], Constant::zero());
        s.add_row([(0, 3)], half());
        let target = vecmap(&[(0, 1)]);
        let cert = s.certify(&target, half()).expect("x is in the lattice");
        assert!(s.verify(&cert, &target, half()));
    }

    #[test]
    fn normal_forms_identify_equal_angles() {
        let mut s = LatticeSystem::new();
        s.add_row([(0, 1), (1, -1)], Constant::zero());
        s.add_row([(2, 1), (3, -1)], half());
        let a = s.normal_form(&vecmap(&[(2, 1), (0, -1)]));
        let b = s.normal_form(&vecmap(&[(3, 1), (1, -1)]));
        // d2 − d0 = (d3 + ½) − d1
        assert_eq!(a.0, b.0);
        assert_eq!(mod_one(a.1 - b.1), half());
        let (nf, k) = s.normal_form(&vecmap(&[(0, 1), (1, -1)]));
        assert!(nf.is_empty() && k.is_zero());
    }

    #[test]
    fn constants_wrap_modulo_one() {
        let mut s = LatticeSystem::new();
        s.add_row([(0, 1), (1, -1)], half());
        s.add_row([(1, 1), (2, -1)], half());
        // Two perpendiculars give a parallel.
        assert!(s.certify(&vecmap(&[(0, 1), (2, -1)]), Constant::zero()).is_some());
    }
}
