//! Real-valued Taylor jets `F(z, z̄) = Σ C_{αβ} z^α z̄^β`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{fmt_rational, GaussianRational, Rational};
use crate::poly::{ExponentPair, HoloPoly, Poly};

/// Pure coefficient sequence `c_j` for `j` beyond the stored truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientRule {
    /// `c_j = ρ^j`
    Geometric(Rational),
    /// `c_j = (j!)^s`
    PowerFactorial(u32),
    /// `c_j = j^d`
    PolynomialRate(u32),
    /// Pure terms whose values are not known.
    Unspecified,
}

impl CoefficientRule {
    pub fn coefficient(&self, j: u32) -> Option<Rational> {
        Some(match self {
            CoefficientRule::Geometric(rho) => num_traits::pow(rho.clone(), j as usize),
            CoefficientRule::PowerFactorial(s) => {
                let mut f = Rational::one();
                for k in 2..=j {
                    f *= Rational::from_integer((k as i64).into());
                }
                num_traits::pow(f, *s as usize)
            }
            CoefficientRule::PolynomialRate(d) => {
                Rational::from_integer((j as i64).into()).pow(*d as i32)
            }
            CoefficientRule::Unspecified => return None,
        })
    }

    /// Convergence radius of `Σ c_j z^j`.
    pub fn radius(&self) -> RuleRadius {
        match self {
            CoefficientRule::Geometric(rho) if rho.is_zero() => RuleRadius::Infinite,
            CoefficientRule::Geometric(rho) => RuleRadius::Positive(Rational::one() / rho.abs()),
            CoefficientRule::PowerFactorial(0) | CoefficientRule::PolynomialRate(_) => {
                RuleRadius::Positive(Rational::one())
            }
            CoefficientRule::PowerFactorial(_) => RuleRadius::Zero,
            CoefficientRule::Unspecified => RuleRadius::Unknown,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CoefficientRule::Geometric(r) => format!("geometric({})", fmt_rational(r)),
            CoefficientRule::PowerFactorial(s) => format!("factorial({s})"),
            CoefficientRule::PolynomialRate(d) => format!("polyrate({d})"),
            CoefficientRule::Unspecified => "unknown".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleRadius {
    Zero,
    Positive(Rational),
    Infinite,
    Unknown,
}

/// A rule attached to one variable: the pure coefficient of `z_var^j` is `c_j`
/// for every `j` above `after` (the jet truncation when `None`), and no other
/// unseen terms exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailRule {
    pub var: usize,
    pub rule: CoefficientRule,
    pub after: Option<u32>,
}

impl TailRule {
    pub fn new(var: usize, rule: CoefficientRule) -> Self {
        Self {
            var,
            rule,
            after: None,
        }
    }

    /// Last exponent stored in the jet itself.
    pub fn start(&self, truncation: u32) -> u32 {
        self.after.unwrap_or(truncation)
    }
}

/// What is known about the Taylor coefficients above the truncation order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Tail {
    /// Nothing: the jet is only faithful up to `truncation`.
    #[default]
    Unknown,
    /// All higher Taylor coefficients vanish (a polynomial, or a flat remainder).
    Exact,
    /// Higher coefficients are exactly the pure single-variable series given.
    Rules(Vec<TailRule>),
}

impl Tail {
    /// True when every Taylor coefficient of the germ is determined.
    pub fn is_determined(&self) -> bool {
        match self {
            Tail::Unknown => false,
            Tail::Exact => true,
            Tail::Rules(rs) => rs.iter().all(|r| r.rule != CoefficientRule::Unspecified),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Tail::Unknown => "unknown".into(),
            Tail::Exact => "exact".into(),
            Tail::Rules(rs) => rs
                .iter()
                .map(|r| match r.after {
                    Some(a) => format!("{}@var{}>{a}", r.rule.describe(), r.var + 1),
                    None => format!("{}@var{}", r.rule.describe(), r.var + 1),
                })
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// Vanishing order of a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingOrder {
    Finite(u32),
    /// No nonzero term up to the given order (the jet may still be nonzero beyond it).
    Infinite { witnessed_to: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianJet {
    poly: Poly,
    truncation: u32,
    tail: Tail,
}

impl HermitianJet {
    /// Builds a jet from explicit coefficient slots.
    ///
    /// With `symmetrize`, a slot `(α, β)` without its partner `(β, α)` gets the
    /// conjugate coefficient filled in; otherwise a missing or mismatched partner
    /// is rejected.
    pub fn build(
        n: usize,
        entries: impl IntoIterator<Item = (ExponentPair, GaussianRational)>,
        truncation: u32,
        symmetrize: bool,
    ) -> Result<Self> {
        let mut raw: std::collections::BTreeMap<ExponentPair, GaussianRational> =
            Default::default();
        for (e, c) in entries {
            if e.alpha.len() != n || e.beta.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.alpha.len().max(e.beta.len()),
                });
            }
            if e.degree() > truncation {
                return Err(Error::DegreeOverflow {
                    degree: e.degree(),
                    limit: truncation,
                });
            }
            let slot = raw.entry(e).or_insert_with(GaussianRational::zero);
            *slot += &c;
        }
        let mut poly = Poly::zero(n);
        for (e, c) in &raw {
            let partner = e.swapped();
            match raw.get(&partner) {
                Some(pc) => {
                    if *pc != c.conj() {
                        return Err(Error::NonRealInput {
                            slot: format!("{:?}/{:?}", e.alpha, e.beta),
                        });
                    }
                    poly.add_term(e.clone(), c.clone());
                }
                None if symmetrize => {
                    poly.add_term(e.clone(), c.clone());
                    if partner != *e {
                        poly.add_term(partner, c.conj());
                    }
                }
                None => {
                    return Err(Error::NonRealInput {
                        slot: format!("{:?}/{:?}", e.alpha, e.beta),
                    })
                }
            }
        }
        Self::from_poly(poly, truncation, Tail::Unknown)
    }

    /// Wraps a Hermitian polynomial. Terms above `truncation` are rejected.
    pub fn from_poly(poly: Poly, truncation: u32, tail: Tail) -> Result<Self> {
        if let Some(e) = poly.hermitian_violation() {
            return Err(Error::NonRealInput {
                slot: format!("{:?}/{:?}", e.alpha, e.beta),
            });
        }
        if let Some(d) = poly.max_degree() {
            if d > truncation {
                return Err(Error::DegreeOverflow {
                    degree: d,
                    limit: truncation,
                });
            }
        }
        if let Tail::Rules(rs) = &tail {
            if let Some(r) = rs.iter().find(|r| r.var >= poly.nvars()) {
                return Err(Error::DimensionMismatch {
                    expected: poly.nvars(),
                    found: r.var + 1,
                });
            }
            for r in rs {
                let start = r.start(truncation);
                if start > truncation {
                    return Err(Error::DegreeOverflow {
                        degree: start,
                        limit: truncation,
                    });
                }
                // pure terms governed by the rule may not also be stored
                let clash = poly.terms().find(|(e, _)| {
                    e.is_pure()
                        && e.degree() > start
                        && e.support_point()
                            .iter()
                            .enumerate()
                            .all(|(j, &x)| (j == r.var) == (x > 0))
                });
                if let Some((e, _)) = clash {
                    return Err(Error::DegreeOverflow {
                        degree: e.degree(),
                        limit: start,
                    });
                }
            }
        }
        Ok(Self {
            poly,
            truncation: truncation.max(1),
            tail,
        })
    }

    /// A polynomial germ: every coefficient above its degree is zero.
    pub fn exact(poly: Poly) -> Result<Self> {
        let t = poly.max_degree().unwrap_or(1).max(1);
        Self::from_poly(poly, t, Tail::Exact)
    }

    pub fn zero(n: usize, truncation: u32, tail: Tail) -> Self {
        Self {
            poly: Poly::zero(n),
            truncation: truncation.max(1),
            tail,
        }
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, e: &ExponentPair) -> GaussianRational {
        self.poly.coeff(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &GaussianRational)> {
        self.poly.terms()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    /// First degree at which unseen terms may live, `None` if none can.
    fn unknown_from(&self) -> Option<u32> {
        match self.tail {
            Tail::Exact => None,
            _ => Some(self.truncation + 1),
        }
    }

    fn order_u32(&self) -> u32 {
        self.poly.min_degree().unwrap_or(self.truncation + 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let sum = self.poly.add(&other.poly)?;
        let (tail, t) = match (&self.tail, &other.tail) {
            (Tail::Exact, Tail::Exact) => (Tail::Exact, sum.max_degree().unwrap_or(1)),
            (Tail::Exact, Tail::Rules(r)) | (Tail::Rules(r), Tail::Exact) => {
                let (rt, et) = if matches!(self.tail, Tail::Exact) {
                    (other.truncation, self.poly.max_degree().unwrap_or(0))
                } else {
                    (self.truncation, other.poly.max_degree().unwrap_or(0))
                };
                if et <= rt {
                    (Tail::Rules(r.clone()), rt)
                } else {
                    (Tail::Unknown, rt)
                }
            }
            _ => {
                let t = [self.unknown_from(), other.unknown_from()]
                    .into_iter()
                    .flatten()
                    .min()
                    .expect("at least one inexact operand")
                    - 1;
                (Tail::Unknown, t)
            }
        };
        Self::from_poly(sum.truncated(t), t, tail)
    }

    /// Product; the result is faithful to `min(T_F + ord G, T_G + ord F)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars() != other.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        let bad_from = [
            self.unknown_from().map(|u| u + other.order_u32()),
            other.unknown_from().map(|u| u + self.order_u32()),
        ]
        .into_iter()
        .flatten()
        .min();
        match bad_from {
            None => Self::exact(self.poly.mul(&other.poly)?),
            Some(b) => {
                let t = b - 1;
                let prod = self.poly.mul_bounded(&other.poly, Some(t))?;
                Self::from_poly(prod, t, Tail::Unknown)
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            poly: self.poly.scale(&GaussianRational::from_rational(r.clone())),
            truncation: self.truncation,
            tail: if r.is_zero() { Tail::Exact } else { self.tail.clone() },
        }
    }

    /// Splits into pure (`α = 0` or `β = 0`) and mixed terms.
    pub fn pure_mixed_split(&self) -> (Self, Self) {
        let pure = self.poly.filtered(ExponentPair::is_pure);
        let mixed = self.poly.filtered(|e| !e.is_pure());
        // rule tails are pure, so the mixed part of such a germ is fully known
        let mixed_tail = match self.tail {
            Tail::Unknown => Tail::Unknown,
            _ => Tail::Exact,
        };
        (
            Self {
                poly: pure,
                truncation: self.truncation,
                tail: self.tail.clone(),
            },
            Self {
                poly: mixed,
                truncation: self.truncation,
                tail: mixed_tail,
            },
        )
    }

    pub fn vanishing_order(&self) -> VanishingOrder {
        match self.poly.min_degree() {
            Some(d) => VanishingOrder::Finite(d),
            None => VanishingOrder::Infinite {
                witnessed_to: self.truncation,
            },
        }
    }

    pub fn eval(&self, p: &[GaussianRational]) -> GaussianRational {
        self.poly.eval(p)
    }

    /// Pure coefficient of `z_var^j` including the tail rule, if known.
    pub fn pure_axis_coefficient(&self, var: usize, j: u32) -> Option<GaussianRational> {
        if let Tail::Rules(rs) = &self.tail {
            if let Some(r) = rs
                .iter()
                .find(|r| r.var == var && j > r.start(self.truncation))
            {
                return r.rule.coefficient(j).map(GaussianRational::from_rational);
            }
        }
        if j <= self.truncation {
            let mut a = vec![0; self.nvars()];
            a[var] = j;
            return Some(self.poly.coeff(&ExponentPair::holomorphic(a)));
        }
        match &self.tail {
            Tail::Unknown => None,
            Tail::Exact => Some(GaussianRational::zero()),
            Tail::Rules(_) => Some(GaussianRational::zero()),
        }
    }

    /// Largest coefficient modulus as a float, for diagnostics.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms()
            .map(|(_, c)| c.norm_sqr().to_f64().unwrap_or(f64::INFINITY).sqrt())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for HermitianJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `h · h̄` for a holomorphic polynomial.
pub fn squared_modulus(h: &HoloPoly) -> HermitianJet {
    let p = h.poly().mul(&h.poly().conj()).expect("same dimension");
    HermitianJet::exact(p).expect("h h̄ is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rat, GaussianRational as G};

    fn ep(a: &[u32], b: &[u32]) -> ExponentPair {
        ExponentPair::new(a.to_vec(), b.to_vec())
    }

    #[test]
    fn build_abs_z_squared() {
        let j = HermitianJet::build(1, [(ep(&[1], &[1]), G::one())], 4, false).unwrap();
        assert_eq!(j.len(), 1);
        assert_eq!(j.coeff(&ep(&[1], &[1])), G::one());
    }

    #[test]
    fn build_symmetrize_or_reject() {
        let e = [(ep(&[2], &[0]), G::i())];
        assert!(matches!(
            HermitianJet::build(1, e.clone(), 4, false),
            Err(Error::NonRealInput { .. })
        ));
        let j = HermitianJet::build(1, e, 4, true).unwrap();
        assert_eq!(j.coeff(&ep(&[0], &[2])), -G::i());
        let bad = [(ep(&[2], &[0]), G::i()), (ep(&[0], &[2]), G::i())];
        assert!(HermitianJet::build(1, bad, 4, false).is_err());
    }

    #[test]
    fn build_cusp_expansion() {
        // (z1^3 - z2^2)(z̄1^3 - z̄2^2) by hand
        let entries = [
            (ep(&[3, 0], &[3, 0]), G::one()),
            (ep(&[3, 0], &[0, 2]), G::from_int(-1)),
            (ep(&[0, 2], &[3, 0]), G::from_int(-1)),
            (ep(&[0, 2], &[0, 2]), G::one()),
        ];
        let j = HermitianJet::build(2, entries, 12, false).unwrap();
        let h = HoloPoly::from_coeffs(2, [(vec![3, 0], G::one()), (vec![0, 2], G::from_int(-1))])
            .unwrap();
        assert_eq!(squared_modulus(&h).poly(), j.poly());
        let (pure, mixed) = j.pure_mixed_split();
        assert!(pure.is_zero());
        assert_eq!(mixed.poly(), j.poly());
    }

    #[test]
    fn build_rejects_dimension_and_degree() {
        assert!(matches!(
            HermitianJet::build(2, [(ep(&[1], &[1]), G::one())], 4, false),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            HermitianJet::build(1, [(ep(&[3], &[3]), G::one())], 4, false),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn add_and_mul() {
        let z = HermitianJet::build(1, [(ep(&[1], &[1]), G::one())], 4, false).unwrap();
        let s = z.add(&z).unwrap();
        assert_eq!(s.coeff(&ep(&[1], &[1])), G::from_int(2));
        let x = HermitianJet::build(1, [(ep(&[1], &[0]), G::one())], 4, true).unwrap();
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.coeff(&ep(&[2], &[0])), G::one());
        assert_eq!(sq.coeff(&ep(&[1], &[1])), G::from_int(2));
        assert_eq!(sq.coeff(&ep(&[0], &[2])), G::one());
        // faithful to min(4 + 1, 4 + 1)
        assert_eq!(sq.truncation(), 5);
    }

    #[test]
    fn phase_invariance() {
        let h = HoloPoly::from_coeffs(1, [(vec![1], G::i())]).unwrap();
        let m = squared_modulus(&h);
        assert_eq!(m.coeff(&ep(&[1], &[1])), G::one());
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn pure_mixed() {
        let j = HermitianJet::build(
            1,
            [(ep(&[3], &[0]), G::one()), (ep(&[2], &[2]), G::one())],
            6,
            true,
        )
        .unwrap();
        let (p, m) = j.pure_mixed_split();
        assert_eq!(p.len(), 2);
        assert_eq!(m.len(), 1);
        assert_eq!(p.add(&m).unwrap().poly(), j.poly());
        let zero = HermitianJet::zero(1, 4, Tail::Unknown);
        let (p0, m0) = zero.pure_mixed_split();
        assert!(p0.is_zero() && m0.is_zero());
    }

    #[test]
    fn vanishing_orders() {
        let j = HermitianJet::build(1, [(ep(&[3], &[3]), G::one())], 6, false).unwrap();
        assert_eq!(j.vanishing_order(), VanishingOrder::Finite(6));
        let w = HermitianJet::build(
            2,
            [(ep(&[0, 1], &[0, 0]), G::one()), (ep(&[3, 0], &[3, 0]), G::one())],
            6,
            true,
        )
        .unwrap();
        assert_eq!(w.vanishing_order(), VanishingOrder::Finite(1));
        assert_eq!(
            HermitianJet::zero(1, 12, Tail::Unknown).vanishing_order(),
            VanishingOrder::Infinite { witnessed_to: 12 }
        );
    }

    #[test]
    fn rules() {
        assert_eq!(CoefficientRule::PowerFactorial(1).coefficient(5), Some(rat(120, 1)));
        assert_eq!(CoefficientRule::Geometric(rat(1, 2)).coefficient(3), Some(rat(1, 8)));
        assert_eq!(CoefficientRule::PolynomialRate(2).coefficient(3), Some(rat(9, 1)));
    }
}
