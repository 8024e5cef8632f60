//! Holomorphic curve jets, contact orders, type search and the 𝒮-series.

mod compose;
mod search;
mod sseries;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

pub use compose::{compose, contact_order, BiSeries, ContactOrder, ContactResult, Ratio};
pub use search::{ladder, type_search, TypeBound, TypeSearch, TypeSearchOptions};
pub(crate) use search::face_curve;
pub use sseries::{
    compose_s, extract_s, model_z_part, radius_verdict, tangency_witness, Radius, SSeries,
};

use crate::error::{Error, Result};
use crate::expr::{lex, Parser, Tok, DEFAULT_DEGREE_CAP};
use crate::gaussian::GaussianRational;
use crate::linalg::gcd_i64;

/// Univariate polynomial in `t` over Gaussian rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly {
    coeffs: BTreeMap<u32, GaussianRational>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: u32, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, GaussianRational)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: u32, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u32) -> GaussianRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &GaussianRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    /// Product keeping degrees `≤ bound`.
    pub fn mul_trunc(&self, other: &Self, bound: Option<u32>) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if bound.is_some_and(|bd| a + b > bd) {
                    break;
                }
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    pub fn truncated(&self, bound: u32) -> Self {
        Self::from_terms(self.terms().filter(|(k, _)| *k <= bound).map(|(k, c)| (k, c.clone())))
    }

    fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{k}"),
                };
                let one = GaussianRational::from_int(1);
                if mono.is_empty() {
                    format!("({c})")
                } else if *c == one {
                    mono
                } else {
                    format!("({c})*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("t"))
    }
}

impl Serialize for TPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `γ(t) = (γ₁(t), …, γ_m(t))`, faithful up to degree `validity` (`None`: exact).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveJet {
    pub components: Vec<TPoly>,
    pub validity: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    Singular,
}

impl CurveJet {
    /// Checks `γ(0) = 0`, nonconstancy and the good-parametrization gcd.
    pub fn new(components: Vec<TPoly>, validity: Option<u32>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidCurve("no components".into()));
        }
        let mut g = 0i64;
        for (i, c) in components.iter().enumerate() {
            if !c.coeff(0).is_zero() {
                return Err(Error::InvalidCurve(format!(
                    "component {} has a constant term",
                    i + 1
                )));
            }
            if let (Some(v), Some(d)) = (validity, c.degree()) {
                if d > v {
                    return Err(Error::InvalidCurve(format!(
                        "component {} has degree {d} above validity {v}",
                        i + 1
                    )));
                }
            }
            for (k, _) in c.terms() {
                g = gcd_i64(g, k as i64);
            }
        }
        if g == 0 {
            return Err(Error::InvalidCurve("constant curve".into()));
        }
        if g > 1 {
            return Err(Error::InvalidCurve(format!(
                "not a good parametrization (exponent gcd {g})"
            )));
        }
        Ok(Self {
            components,
            validity,
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `ord(γ)`: the smallest exponent over all components.
    pub fn order(&self) -> u32 {
        self.components
            .iter()
            .filter_map(TPoly::order)
            .min()
            .expect("nonconstant curve")
    }

    pub fn regularity(&self) -> Regularity {
        if self.order() == 1 {
            Regularity::Regular
        } else {
            Regularity::Singular
        }
    }

    /// The axis curve `t ↦ t e_j`.
    pub fn axis(dim: usize, j: usize) -> Self {
        let mut components = vec![TPoly::zero(); dim];
        components[j] = TPoly::monomial(1, GaussianRational::from_int(1));
        Self {
            components,
            validity: None,
        }
    }
}

pub fn curve_regularity_check(gamma: &CurveJet) -> Regularity {
    gamma.regularity()
}

impl fmt::Display for CurveJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))?;
        if let Some(v) = self.validity {
            write!(f, " valid {v}")?;
        }
        Ok(())
    }
}

/// Parses `gamma = (t^2, t^3, -(t^16+t^18+t^20)) valid 40`; the `gamma =`
/// prefix and the `valid` suffix are optional.
pub fn parse_curve(src: &str) -> Result<CurveJet> {
    let (body, validity) = match src.rfind("valid") {
        Some(at) => {
            let v = src[at + 5..].trim();
            let v: u32 = v
                .parse()
                .map_err(|_| Error::InvalidCurve(format!("bad validity '{v}'")))?;
            (&src[..at], Some(v))
        }
        None => (src, None),
    };
    let mut start = 0;
    let trimmed = body.trim_start();
    if let Some(rest) = trimmed.strip_prefix("gamma") {
        let eq = rest
            .trim_start()
            .strip_prefix('=')
            .ok_or_else(|| Error::InvalidCurve("expected '=' after 'gamma'".into()))?;
        start = body.len() - eq.len();
    }
    let toks = lex(body, start, true)?;
    let mut p = Parser::for_curve(&toks, DEFAULT_DEGREE_CAP);
    p.expect_tok(Tok::LParen, "'('")?;
    let mut comps = Vec::new();
    loop {
        let pos = p.peek_pos();
        let e = p.expr()?;
        let mut c = TPoly::zero();
        for (ex, k) in e.terms() {
            if ex.beta[0] > 0 {
                return Err(Error::InvalidCurve(format!(
                    "component starting at {pos} is not holomorphic"
                )));
            }
            c.add_term(ex.alpha[0], k.clone());
        }
        comps.push(c);
        match p.peek_tok() {
            Tok::Comma => {
                p.advance();
            }
            _ => break,
        }
    }
    p.expect_tok(Tok::RParen, "')'")?;
    p.expect_tok(Tok::Eof, "end of curve")?;
    CurveJet::new(comps, validity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = parse_curve("gamma = (t^2, t^3, -(t^16+t^18+t^20)) valid 40").unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.validity, Some(40));
        assert_eq!(g.order(), 2);
        assert_eq!(g.regularity(), Regularity::Singular);
        assert_eq!(g.components[2].coeff(18), GaussianRational::from_int(-1));
        let again = parse_curve(&g.to_string()).unwrap();
        assert_eq!(again, g);
        let h = parse_curve("(t, -t^3)").unwrap();
        assert_eq!(curve_regularity_check(&h), Regularity::Regular);
        assert_eq!(h.validity, None);
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(matches!(parse_curve("(t^2, t^4)"), Err(Error::InvalidCurve(_))));
        assert!(matches!(parse_curve("(1 + t)"), Err(Error::InvalidCurve(_))));
        assert!(matches!(parse_curve("(0, 0)"), Err(Error::InvalidCurve(_))));
        assert!(matches!(parse_curve("(conj(t))"), Err(Error::InvalidCurve(_))));
        assert!(matches!(parse_curve("(t^9) valid 4"), Err(Error::InvalidCurve(_))));
        assert!(matches!(parse_curve("(t, z1)"), Err(Error::Syntax { .. })));
    }
}
