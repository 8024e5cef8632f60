//! The holomorphic series `𝒮(z) = Σ c_α z^α` of pure coefficients, its
//! composition with z-curves, tangency witnesses and radius verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

use super::compose::{compose, series_validity, ContactOrder, Powers};
use super::{CurveJet, TPoly};
use crate::error::{Error, Result};
use crate::expr::{recognize_form, DefiningFunction, FormTag};
use crate::gaussian::{GaussianRational, Rational};
use crate::jet::{HermitianJet, RuleRadius, Tail, TailRule, VanishingOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSeries {
    pub nvars: usize,
    /// `c_α` for `α ≠ 0`, stored part only.
    pub coeffs: BTreeMap<Vec<u32>, GaussianRational>,
    pub truncation: u32,
    pub tail: Tail,
    /// Mixed part of `F`; nonzero means finite Bloom-Graham type.
    pub mixed: HermitianJet,
    pub mixed_order: VanishingOrder,
}

impl SSeries {
    pub fn rules(&self) -> &[TailRule] {
        match &self.tail {
            Tail::Rules(rs) => rs,
            _ => &[],
        }
    }
}

/// `F` of a model-form `r = 2Re(w) + F(z, z̄)`.
pub fn model_z_part(df: &DefiningFunction) -> Result<HermitianJet> {
    if recognize_form(df)? != FormTag::Model {
        return Err(Error::NotModelForm);
    }
    let w = df.w_index().ok_or(Error::NotModelForm)?;
    if let Tail::Rules(rs) = df.jet.tail() {
        if rs.iter().any(|r| r.var == w) {
            return Err(Error::NotModelForm);
        }
    }
    let f = df
        .jet
        .poly()
        .filtered(|e| e.alpha[w] == 0 && e.beta[w] == 0)
        .project_vars(df.n);
    HermitianJet::from_poly(f, df.jet.truncation(), df.jet.tail().clone())
}

pub fn extract_s(f: &HermitianJet) -> SSeries {
    let (pure, mixed) = f.pure_mixed_split();
    let coeffs = pure
        .terms()
        .filter(|(e, _)| e.is_holomorphic() && !e.is_constant())
        .map(|(e, c)| (e.alpha.clone(), c.clone()))
        .collect();
    SSeries {
        nvars: f.nvars(),
        coeffs,
        truncation: f.truncation(),
        tail: f.tail().clone(),
        mixed_order: mixed.vanishing_order(),
        mixed,
    }
}

/// `𝒮 ∘ γ̂` truncated at its validity bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoloSeries {
    pub series: TPoly,
    pub validity: Option<u32>,
}

pub fn compose_s(s: &SSeries, gamma: &CurveJet) -> Result<HoloSeries> {
    if gamma.dim() != s.nvars {
        return Err(Error::DimensionMismatch {
            expected: s.nvars,
            found: gamma.dim(),
        });
    }
    let bound = series_validity(s.truncation, &s.tail, gamma);
    let mut pw = Powers::new(gamma, bound);
    let mut out = TPoly::zero();
    for (alpha, c) in &s.coeffs {
        out = out.add(&pw.monomial(alpha).scale(c));
    }
    for rule in s.rules() {
        let (Some(o), Some(b)) = (gamma.components[rule.var].order(), bound) else {
            continue;
        };
        let mut j = rule.start(s.truncation) + 1;
        while j * o <= b {
            let Some(cj) = rule.rule.coefficient(j) else {
                break;
            };
            out = out.add(&pw.get(rule.var, j).scale(&GaussianRational::from_rational(cj)));
            j += 1;
        }
    }
    Ok(HoloSeries {
        series: out,
        validity: bound,
    })
}

/// `γ = (γ̂, −h)` with `h` the degree-`N` truncation of `𝒮 ∘ γ̂`; then
/// `r ∘ γ = 2Re(𝒮∘γ̂ − h) + F_mixed∘γ̂` vanishes to order `N + 1`.
pub fn tangency_witness(f: &HermitianJet, gamma_hat: &CurveJet, n: u32) -> Result<CurveJet> {
    let s = extract_s(f);
    let mixed = compose(&s.mixed, gamma_hat)?;
    match mixed.order() {
        ContactOrder::Exact(d) if d <= n => return Err(Error::Obstruction { degree: d }),
        ContactOrder::AtLeast(k) if k <= n => {
            return Err(Error::InsufficientValidity {
                validity: k - 1,
                requested: n,
            })
        }
        _ => {}
    }
    let sc = compose_s(&s, gamma_hat)?;
    if let Some(v) = sc.validity {
        if v < n {
            return Err(Error::InsufficientValidity {
                validity: v,
                requested: n,
            });
        }
    }
    let mut comps = gamma_hat.components.clone();
    comps.push(sc.series.truncated(n).neg());
    CurveJet::new(comps, gamma_hat.validity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Radius {
    /// A polynomial: converges everywhere.
    Infinite,
    Positive {
        #[serde(serialize_with = "ser_rational")]
        value: Rational,
    },
    /// Positive, value not computed.
    PositiveUnspecified,
    Zero,
    UnknownFiniteJet,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&crate::gaussian::fmt_rational(r))
}

/// Convergence radius of `𝒮` (or of `𝒮 ∘ γ̂`) from the tail rules.
///
/// Along a curve only the rules of coordinates where `γ̂_k ≢ 0` matter; a
/// factorial rule there makes the composed series diverge as well.
pub fn radius_verdict(s: &SSeries, gamma_hat: Option<&CurveJet>) -> Radius {
    if matches!(s.tail, Tail::Unknown) {
        return Radius::UnknownFiniteJet;
    }
    let relevant: Vec<&TailRule> = s
        .rules()
        .iter()
        .filter(|r| gamma_hat.is_none_or(|g| !g.components[r.var].is_zero() || g.validity.is_some()))
        .collect();
    let radii: Vec<RuleRadius> = relevant.iter().map(|r| r.rule.radius()).collect();
    if radii.contains(&RuleRadius::Zero) {
        return Radius::Zero;
    }
    if radii.contains(&RuleRadius::Unknown) {
        return Radius::UnknownFiniteJet;
    }
    let finite: Vec<Rational> = radii
        .into_iter()
        .filter_map(|r| match r {
            RuleRadius::Positive(v) => Some(v),
            _ => None,
        })
        .collect();
    if finite.is_empty() {
        return Radius::Infinite;
    }
    if gamma_hat.is_some() {
        return Radius::PositiveUnspecified;
    }
    Radius::Positive {
        value: finite.into_iter().min().expect("nonempty"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{contact_order, parse_curve};
    use crate::expr::parse;
    use crate::gaussian::rat;
    use num_traits::One;

    fn zpart(s: &str) -> HermitianJet {
        model_z_part(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn extraction() {
        let s = extract_s(&parse("2*Re(z1^3) + 2*Re(z1^5)").unwrap().jet);
        assert_eq!(s.coeffs.len(), 2);
        assert!(s.mixed.is_zero());
        let s = extract_s(&zpart("2*Re(w + z1^8 + z1^9 + z1^10) + |z1^3 - z2^2|^2"));
        assert_eq!(s.coeffs.keys().cloned().collect::<Vec<_>>(), vec![vec![8, 0], vec![9, 0], vec![10, 0]]);
        assert_eq!(s.mixed_order, VanishingOrder::Finite(4));
        let s = extract_s(&parse("|z1|^2").unwrap().jet);
        assert!(s.coeffs.is_empty());
        assert_eq!(s.mixed_order, VanishingOrder::Finite(2));
        assert!(matches!(model_z_part(&parse("2*Re(w) + Im(w)*|z1|^2").unwrap()), Err(Error::NotModelForm)));
    }

    #[test]
    fn composition_examples() {
        let s = extract_s(&parse("2*Re(z1*z2)").unwrap().jet);
        let c = compose_s(&s, &parse_curve("(t, t^2)").unwrap()).unwrap();
        assert_eq!(c.series, TPoly::monomial(3, GaussianRational::one()));
        let s = extract_s(&zpart("2*Re(w + z1^8 + z1^9 + z1^10) + |z1^3 - z2^2|^2"));
        let c = compose_s(&s, &parse_curve("(t^2, t^3)").unwrap()).unwrap();
        let one = GaussianRational::one();
        assert_eq!(c.series, TPoly::from_terms([(16, one.clone()), (18, one.clone()), (20, one)]));
        let s = extract_s(&parse("|z1|^2").unwrap().jet);
        assert!(compose_s(&s, &parse_curve("(t)").unwrap()).unwrap().series.is_zero());
    }

    #[test]
    fn witnesses() {
        let f = parse("2*Re(z1^3)").unwrap().jet;
        let g = tangency_witness(&f, &parse_curve("(t)").unwrap(), 20).unwrap();
        assert_eq!(g, parse_curve("(t, -t^3)").unwrap());
        let r = parse("2*Re(w + z1^3)").unwrap().jet;
        assert_eq!(contact_order(&r, &g).unwrap().order, ContactOrder::Infinite);

        let f = zpart("2*Re(w + z1^8 + z1^9 + z1^10) + |z1^3 - z2^2|^2");
        let g = tangency_witness(&f, &parse_curve("(t^2, t^3)").unwrap(), 20).unwrap();
        assert_eq!(g, parse_curve("(t^2, t^3, -(t^16 + t^18 + t^20))").unwrap());

        let f = parse("|z1|^2").unwrap().jet;
        assert!(matches!(
            tangency_witness(&f, &parse_curve("(t)").unwrap(), 2),
            Err(Error::Obstruction { degree: 2 })
        ));
        let f = parse("# T=6\n2*Re(z1^3)").unwrap().jet;
        assert!(matches!(
            tangency_witness(&f, &parse_curve("(t)").unwrap(), 20),
            Err(Error::InsufficientValidity { validity: 6, requested: 20 })
        ));
    }

    #[test]
    fn radii() {
        let fac = extract_s(&parse("# n=1 T=3 tail=factorial(1)@z1\n0").unwrap().jet);
        assert_eq!(radius_verdict(&fac, None), Radius::Zero);
        let geo = extract_s(&parse("# n=1 T=3 tail=geometric(1)@z1\n0").unwrap().jet);
        assert_eq!(radius_verdict(&geo, None), Radius::Positive { value: rat(1, 1) });
        let geo = extract_s(&parse("# n=1 T=3 tail=geometric(3/2)@z1\n0").unwrap().jet);
        assert_eq!(radius_verdict(&geo, None), Radius::Positive { value: rat(2, 3) });
        let fin = extract_s(&parse("# T=3\n2*Re(z1^2)").unwrap().jet);
        assert_eq!(radius_verdict(&fin, None), Radius::UnknownFiniteJet);
        let two = extract_s(&parse("# n=2 T=3 tail=factorial(1)@z1\n0").unwrap().jet);
        let along = parse_curve("(0, t)").unwrap();
        assert_eq!(radius_verdict(&two, Some(&along)), Radius::Infinite);
        let along = parse_curve("(t, t)").unwrap();
        assert_eq!(radius_verdict(&two, Some(&along)), Radius::Zero);
        let rule = TailRule::new(0, crate::jet::CoefficientRule::Geometric(rat(0, 1)));
        let zero = extract_s(&HermitianJet::zero(1, 3, Tail::Rules(vec![rule])));
        assert_eq!(radius_verdict(&zero, None), Radius::Infinite);
    }
}
