//! Length system: homogeneous rational relations between log-lengths.
//!
//! `cong(AB,CD)` is `ℓ_AB − ℓ_CD = 0` and `eqratio(AB,CD,EF,GH)` is
//! `ℓ_AB − ℓ_CD − ℓ_EF + ℓ_GH = 0`. Rows are kept in fully reduced row
//! echelon form over the rationals, each basis row remembering which stored
//! rows it came from.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use super::lattice::{RowId, Var};

pub type Vector = BTreeMap<Var, BigRational>;

#[derive(Clone, Debug)]
struct Basis {
    coeffs: Vector,
    combo: BTreeMap<RowId, BigRational>,
}

/// `Σ multipliers[i]·row_i = scale·target`, all integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub multipliers: BTreeMap<RowId, i64>,
    pub scale: i64,
}

fn axpy(dst: &mut BTreeMap<usize, BigRational>, q: &BigRational, src: &BTreeMap<usize, BigRational>) {
    for (&k, v) in src {
        let e = dst.entry(k).or_insert_with(BigRational::zero);
        *e += q * v;
        if e.is_zero() {
            dst.remove(&k);
        }
    }
}

pub fn int_vector(entries: impl IntoIterator<Item = (Var, i64)>) -> Vector {
    let mut v = Vector::new();
    for (k, a) in entries {
        axpy(&mut v, &BigRational::from_integer(a.into()), &BTreeMap::from([(k, BigRational::one())]));
    }
    v
}

#[derive(Clone, Debug, Default)]
pub struct RationalSystem {
    rows: Vec<BTreeMap<Var, i64>>,
    pivots: BTreeMap<Var, Basis>,
}

impl RationalSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&self, id: RowId) -> &BTreeMap<Var, i64> {
        &self.rows[id]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, b: &mut Basis) {
        let cols: Vec<Var> = b.coeffs.keys().copied().filter(|c| self.pivots.contains_key(c)).collect();
        for c in cols {
            let Some(q) = b.coeffs.get(&c).cloned() else { continue };
            let p = &self.pivots[&c];
            let neg = -q.clone();
            axpy(&mut b.coeffs, &neg, &p.coeffs);
            axpy(&mut b.combo, &q, &p.combo);
        }
    }

    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (Var, i64)>) -> RowId {
        let id = self.rows.len();
        let mut ints = BTreeMap::new();
        for (v, a) in coeffs {
            *ints.entry(v).or_insert(0i64) += a;
        }
        ints.retain(|_, a| *a != 0);
        self.rows.push(ints.clone());
        let mut b = Basis {
            coeffs: int_vector(ints),
            combo: BTreeMap::from([(id, BigRational::one())]),
        };
        // combo tracks b = row_id − Σ q·pivots, so negate the accumulated part.
        let cols: Vec<Var> = b.coeffs.keys().copied().filter(|c| self.pivots.contains_key(c)).collect();
        for c in cols {
            let Some(q) = b.coeffs.get(&c).cloned() else { continue };
            let p = &self.pivots[&c];
            let neg = -q;
            axpy(&mut b.coeffs, &neg, &p.coeffs);
            axpy(&mut b.combo, &neg, &p.combo);
        }
        let Some((&lead, lv)) = b.coeffs.iter().next() else { return id };
        let inv = lv.recip();
        for v in b.coeffs.values_mut() {
            *v *= &inv;
        }
        for v in b.combo.values_mut() {
            *v *= &inv;
        }
        for p in self.pivots.values_mut() {
            if let Some(q) = p.coeffs.get(&lead).cloned() {
                let neg = -q;
                axpy(&mut p.coeffs, &neg, &b.coeffs);
                axpy(&mut p.combo, &neg, &b.combo);
            }
        }
        self.pivots.insert(lead, b);
        id
    }

    /// Canonical representative of `v` modulo the row space.
    pub fn normal_form(&self, v: &Vector) -> Vector {
        let mut b = Basis { coeffs: v.clone(), combo: BTreeMap::new() };
        self.reduce(&mut b);
        b.coeffs
    }

    pub fn certify(&self, target: &Vector) -> Option<Combination> {
        let mut b = Basis { coeffs: target.clone(), combo: BTreeMap::new() };
        b.coeffs.retain(|_, a| !a.is_zero());
        self.reduce(&mut b);
        if !b.coeffs.is_empty() {
            return None;
        }
        let lcm = b.combo.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = lcm.to_i64()?;
        let mut multipliers = BTreeMap::new();
        for (&id, q) in &b.combo {
            let m = (q * BigRational::from_integer(lcm.clone())).to_integer();
            multipliers.insert(id, m.to_i64()?);
        }
        Some(Combination { multipliers, scale })
    }

    pub fn verify(&self, combo: &Combination, target: &Vector) -> bool {
        if combo.scale <= 0 {
            return false;
        }
        let mut sum = Vector::new();
        for (&id, &m) in &combo.multipliers {
            let Some(row) = self.rows.get(id) else { return false };
            axpy(&mut sum, &BigRational::from_integer(m.into()), &int_vector(row.iter().map(|(&k, &a)| (k, a))));
        }
        let mut scaled = Vector::new();
        axpy(&mut scaled, &BigRational::from_integer(combo.scale.into()), target);
        sum == scaled
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cong_chain() {
        let mut s = RationalSystem::new();
        let a = s.add_row([(0, 1), (1, -1)]);
        let b = s.add_row([(1, 1), (2, -1)]);
        let t = int_vector([(0, 1), (2, -1)]);
        let c = s.certify(&t).unwrap();
        assert_eq!(c.multipliers, BTreeMap::from([(a, 1), (b, 1)]));
        assert_eq!(c.scale, 1);
        assert!(s.verify(&c, &t));
        assert_eq!(s.normal_form(&int_vector([(0, 1)])), s.normal_form(&int_vector([(2, 1)])));
    }

    #[test]
    fn halving_is_sound_over_rationals() {
        let mut s = RationalSystem::new();
        s.add_row([(0, 2), (1, -2)]);
        let t = int_vector([(0, 1), (1, -1)]);
        let c = s.certify(&t).unwrap();
        assert_eq!(c.scale, 2);
        assert!(s.verify(&c, &t));
    }

    #[test]
    fn independent_target_is_rejected() {
        let mut s = RationalSystem::new();
        s.add_row([(0, 1), (1, -1)]);
        assert!(s.certify(&int_vector([(0, 1), (2, -1)])).is_none());
    }

    #[test]
    fn ratio_from_two_cong() {
        // ℓ0 = ℓ1, ℓ2 = ℓ3 ⟹ ℓ0 − ℓ2 = ℓ1 − ℓ3
        let mut s = RationalSystem::new();
        s.add_row([(0, 1), (1, -1)]);
        s.add_row([(2, 1), (3, -1)]);
        let t = int_vector([(0, 1), (2, -1), (1, -1), (3, 1)]);
        let c = s.certify(&t).unwrap();
        assert!(s.verify(&c, &t));
    }
}
