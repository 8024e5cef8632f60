//! Structural certificates that a grouped torus system has no zero.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::GroupedSystem;
use crate::gaussian::Rational;
use crate::linalg::{nullspace, primitive_integer};
use crate::poly::Poly;

pub type GroupKey = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Certificate {
    /// R1: a group is a single monomial `ε c^α c̄^β`.
    SingleMonomial { group: GroupKey },
    /// R2: a group is `Σ λ_k |c^{γ_k}|²` with all `λ_k` of one sign.
    SquaredModuli { group: GroupKey },
    /// R3: a self-conjugate group is a strictly diagonally dominant Hermitian
    /// form in the monomials `c^α`.
    DiagonallyDominant { group: GroupKey },
    /// R4: the modulus equations of the binomial groups are inconsistent:
    /// `Π r_k^{m_k} ≠ 1` although `Σ m_k s_k = 0`.
    ModulusInconsistency {
        groups: Vec<GroupKey>,
        multipliers: Vec<i64>,
    },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::SingleMonomial { .. } => "R1",
            Certificate::SquaredModuli { .. } => "R2",
            Certificate::DiagonallyDominant { .. } => "R3",
            Certificate::ModulusInconsistency { .. } => "R4",
        }
    }
}

fn single_monomial(g: &Poly) -> bool {
    g.len() == 1
}

fn squared_moduli(g: &Poly) -> bool {
    let mut sign = 0;
    for (e, c) in g.terms() {
        if e.alpha != e.beta || !c.is_real() {
            return false;
        }
        let s = if c.re.is_positive() { 1 } else { -1 };
        if sign != 0 && s != sign {
            return false;
        }
        sign = s;
    }
    sign != 0
}

fn diagonally_dominant(g: &Poly) -> bool {
    let mut rows: BTreeMap<&Vec<u32>, (Rational, Rational)> = BTreeMap::new();
    for (e, c) in g.terms() {
        let entry = rows
            .entry(&e.alpha)
            .or_insert_with(|| (Rational::zero(), Rational::zero()));
        if e.alpha == e.beta {
            if !c.is_real() {
                return false;
            }
            entry.0 = c.re.clone();
        } else {
            entry.1 += c.l1_norm();
        }
    }
    // every column index must also be a row index with its own diagonal
    if g.terms().any(|(e, _)| !rows.contains_key(&e.beta)) {
        return false;
    }
    let positive = rows.values().all(|(d, off)| d.is_positive() && *d > *off);
    let negative = rows.values().all(|(d, off)| d.is_negative() && -d.clone() > *off);
    positive || negative
}

fn modulus_inconsistency(sys: &GroupedSystem) -> Option<Certificate> {
    let n = sys.nvars;
    let mut keys = Vec::new();
    let mut shifts: Vec<Vec<i64>> = Vec::new();
    let mut ratios: Vec<Rational> = Vec::new();
    for (k, g) in &sys.groups {
        if g.len() != 2 {
            continue;
        }
        let mut it = g.terms();
        let (e1, b1) = it.next().expect("two terms");
        let (e2, b2) = it.next().expect("two terms");
        let (s1, s2) = (e1.support_point(), e2.support_point());
        shifts.push((0..n).map(|j| s1[j] as i64 - s2[j] as i64).collect());
        ratios.push(b2.norm_sqr() / b1.norm_sqr());
        keys.push(*k);
    }
    if keys.is_empty() {
        return None;
    }
    // left kernel of the shift matrix = kernel of its transpose
    let transposed: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            shifts
                .iter()
                .map(|s| Rational::from_integer(s[j].into()))
                .collect()
        })
        .collect();
    for v in nullspace(&transposed, keys.len()) {
        let m = primitive_integer(&v);
        let mut prod = Rational::one();
        for (r, mk) in ratios.iter().zip(&m) {
            let e: i32 = mk.try_into().ok()?;
            prod *= r.pow(e);
        }
        if !prod.is_one() {
            let mut groups = Vec::new();
            let mut multipliers = Vec::new();
            for (k, mk) in keys.iter().zip(&m) {
                if !mk.is_zero() {
                    groups.push(*k);
                    multipliers.push(mk.try_into().ok()?);
                }
            }
            return Some(Certificate::ModulusInconsistency {
                groups,
                multipliers,
            });
        }
    }
    None
}

/// First structural rule proving the system has no torus zero.
pub fn certify(sys: &GroupedSystem) -> Option<Certificate> {
    for (k, g) in &sys.groups {
        if single_monomial(g) {
            return Some(Certificate::SingleMonomial { group: *k });
        }
    }
    for (k, g) in &sys.groups {
        if squared_moduli(g) {
            return Some(Certificate::SquaredModuli { group: *k });
        }
    }
    for (k, g) in &sys.groups {
        if k.0 == k.1 && diagonally_dominant(g) {
            return Some(Certificate::DiagonallyDominant { group: *k });
        }
    }
    modulus_inconsistency(sys)
}
