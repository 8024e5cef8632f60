//! `r ∘ γ` as a series in `(t, t̄)` and its order of vanishing.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::{CurveJet, TPoly};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rational};
use crate::jet::{CoefficientRule, HermitianJet, Tail};

/// Multiple of `(T+1)·ord(γ)` used as the horizon when a known coefficient
/// rule makes `r ∘ γ` an infinite series along an exact curve.
const RULE_HORIZON: u32 = 4;

/// `Σ a_{pq} tᵖ t̄^q`, faithful for `p + q ≤ validity` (`None`: exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    pub terms: BTreeMap<(u32, u32), GaussianRational>,
    pub validity: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ContactOrder {
    Exact(u32),
    /// Vanishes through the validity bound; the true order is at least this.
    AtLeast(u32),
    Infinite,
}

impl ContactOrder {
    /// The certified lower bound (`None` for infinite).
    pub fn lower_bound(&self) -> Option<u32> {
        match self {
            ContactOrder::Exact(k) | ContactOrder::AtLeast(k) => Some(*k),
            ContactOrder::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Ratio {
    Exact(#[serde(serialize_with = "ser_rational")] Rational),
    AtLeast(#[serde(serialize_with = "ser_rational")] Rational),
    Infinite,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&crate::gaussian::fmt_rational(r))
}

impl Ratio {
    /// Sort key: lower bound, infinite last.
    pub fn key(&self) -> Option<&Rational> {
        match self {
            Ratio::Exact(r) | Ratio::AtLeast(r) => Some(r),
            Ratio::Infinite => None,
        }
    }

    pub fn exceeds(&self, other: &Ratio) -> bool {
        match (self.key(), other.key()) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactResult {
    pub order: ContactOrder,
    pub curve_order: u32,
    pub ratio: Ratio,
}

impl BiSeries {
    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty() && self.validity.is_none()
    }

    pub fn order(&self) -> ContactOrder {
        match self.terms.keys().map(|(p, q)| p + q).min() {
            Some(d) => ContactOrder::Exact(d),
            None => match self.validity {
                Some(b) => ContactOrder::AtLeast(b + 1),
                None => ContactOrder::Infinite,
            },
        }
    }

    /// Terms of the lowest total degree.
    pub fn lowest(&self) -> Vec<((u32, u32), &GaussianRational)> {
        let Some(d) = self.terms.keys().map(|(p, q)| p + q).min() else {
            return Vec::new();
        };
        self.terms
            .iter()
            .filter(|((p, q), _)| p + q == d)
            .map(|(k, c)| (*k, c))
            .collect()
    }

    fn add(&mut self, key: (u32, u32), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(GaussianRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }
}

/// Degree through which `r ∘ γ` is determined by the stored data.
pub(crate) fn validity_bound(r: &HermitianJet, gamma: &CurveJet) -> Option<u32> {
    series_validity(r.truncation(), r.tail(), gamma)
}

/// Validity of a jet with truncation `t` and the given tail composed with `γ`.
pub(crate) fn series_validity(t: u32, tail: &Tail, gamma: &CurveJet) -> Option<u32> {
    let m = gamma.order();
    let mut bound = gamma.validity;
    fn tighten(bound: &mut Option<u32>, b: u32) {
        *bound = Some(bound.map_or(b, |x| x.min(b)));
    }
    match tail {
        Tail::Unknown => tighten(&mut bound, (t + 1) * m - 1),
        Tail::Exact => {}
        Tail::Rules(rs) => {
            let mut known_rule = false;
            for rule in rs {
                let Some(o) = gamma.components[rule.var].order() else {
                    continue;
                };
                if rule.rule == CoefficientRule::Unspecified {
                    tighten(&mut bound, (rule.start(t) + 1) * o - 1);
                } else {
                    known_rule = true;
                }
            }
            if known_rule && bound.is_none() {
                tighten(&mut bound, RULE_HORIZON * (t + 1) * m);
            }
        }
    }
    bound
}

pub(crate) struct Powers<'a> {
    gamma: &'a CurveJet,
    bound: Option<u32>,
    cache: HashMap<(usize, u32), TPoly>,
}

impl<'a> Powers<'a> {
    pub(crate) fn new(gamma: &'a CurveJet, bound: Option<u32>) -> Self {
        Self {
            gamma,
            bound,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, j: usize, e: u32) -> TPoly {
        if e == 0 {
            return TPoly::monomial(0, GaussianRational::from_int(1));
        }
        if let Some(p) = self.cache.get(&(j, e)) {
            return p.clone();
        }
        let prev = self.get(j, e - 1);
        let p = prev.mul_trunc(&self.gamma.components[j], self.bound);
        self.cache.insert((j, e), p.clone());
        p
    }

    pub(crate) fn monomial(&mut self, exps: &[u32]) -> TPoly {
        let mut acc = TPoly::monomial(0, GaussianRational::from_int(1));
        for (j, &e) in exps.iter().enumerate() {
            if e > 0 {
                let p = self.get(j, e);
                acc = acc.mul_trunc(&p, self.bound);
            }
        }
        acc
    }
}

/// Expands `r(γ(t), conj γ(t))`.
pub fn compose(r: &HermitianJet, gamma: &CurveJet) -> Result<BiSeries> {
    compose_capped(r, gamma, None)
}

/// Like [`compose`] but only through degree `cap`.
fn compose_capped(r: &HermitianJet, gamma: &CurveJet, cap: Option<u32>) -> Result<BiSeries> {
    if r.nvars() != gamma.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.nvars(),
            found: gamma.dim(),
        });
    }
    let bound = match (validity_bound(r, gamma), cap) {
        (Some(v), Some(c)) => Some(v.min(c)),
        (v, c) => v.or(c),
    };
    let ords: Vec<Option<u32>> = gamma.components.iter().map(TPoly::order).collect();
    let mut out = BiSeries {
        terms: BTreeMap::new(),
        validity: bound,
    };
    let mut pw = Powers::new(gamma, bound);
    for (e, c) in r.terms() {
        // skip terms that vanish on γ or start past the bound
        let mut low = 0u32;
        let mut vanishes = false;
        for j in 0..gamma.dim() {
            let k = e.alpha[j] + e.beta[j];
            if k > 0 {
                match ords[j] {
                    Some(o) => low += k * o,
                    None => vanishes = true,
                }
            }
        }
        if vanishes || bound.is_some_and(|b| low > b) {
            continue;
        }
        let h = pw.monomial(&e.alpha);
        let a = pw.monomial(&e.beta);
        for (p, x) in h.terms() {
            for (q, y) in a.terms() {
                if bound.is_some_and(|b| p + q > b) {
                    break;
                }
                out.add((p, q), &(c * x) * &y.conj());
            }
        }
    }
    if let Tail::Rules(rs) = r.tail() {
        for rule in rs {
            let (Some(o), Some(b)) = (ords[rule.var], bound) else {
                continue;
            };
            let mut j = rule.start(r.truncation()) + 1;
            while j * o <= b {
                let Some(cj) = rule.rule.coefficient(j) else {
                    break;
                };
                let cj = GaussianRational::from_rational(cj);
                let pj = pw.get(rule.var, j);
                for (p, x) in pj.terms() {
                    out.add((p, 0), &cj * x);
                    out.add((0, p), (&cj * x).conj());
                }
                j += 1;
            }
        }
    }
    Ok(out)
}

/// [`compose`] through the lowest nonzero degree only, doubling the
/// working degree until a term shows up or the validity bound is reached.
pub(crate) fn compose_lowest(r: &HermitianJet, gamma: &CurveJet) -> Result<BiSeries> {
    compose_from(r, gamma, 4 * gamma.order().max(1))
}

/// [`compose_lowest`] with the working degree starting at `start`.
pub(crate) fn compose_from(r: &HermitianJet, gamma: &CurveJet, start: u32) -> Result<BiSeries> {
    let Some(full) = validity_bound(r, gamma) else {
        return compose(r, gamma);
    };
    let mut cap = full.min(start.max(1));
    loop {
        let comp = compose_capped(r, gamma, Some(cap))?;
        if cap >= full || !comp.terms.is_empty() {
            return Ok(comp);
        }
        cap = full.min(cap * 2);
    }
}

pub fn contact_order(r: &HermitianJet, gamma: &CurveJet) -> Result<ContactResult> {
    let comp = compose_lowest(r, gamma)?;
    let order = comp.order();
    let m = gamma.order();
    let frac = |k: u32| Rational::new((k as i64).into(), (m as i64).into());
    let ratio = match order {
        ContactOrder::Exact(k) => Ratio::Exact(frac(k)),
        ContactOrder::AtLeast(k) => Ratio::AtLeast(frac(k)),
        ContactOrder::Infinite => Ratio::Infinite,
    };
    Ok(ContactResult {
        order,
        curve_order: m,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;
    use crate::expr::parse;
    use crate::gaussian::rat;

    fn order(r: &str, g: &str) -> ContactResult {
        contact_order(&parse(r).unwrap().jet, &parse_curve(g).unwrap()).unwrap()
    }

    #[test]
    fn sextic_axis() {
        let r = parse("2*Re(w) + |z1|^6").unwrap().jet;
        let c = compose(&r, &parse_curve("(t, 0)").unwrap()).unwrap();
        assert_eq!(c.terms.len(), 1);
        assert_eq!(c.terms[&(3, 3)], GaussianRational::from_int(1));
        let res = order("2*Re(w) + |z1|^6", "(t, 0)");
        assert_eq!(res.order, ContactOrder::Exact(6));
        assert_eq!(res.ratio, Ratio::Exact(rat(6, 1)));
    }

    #[test]
    fn levi_flat_diagonal() {
        let r = parse("2*Re(w)").unwrap().jet;
        let c = compose(&r, &parse_curve("(t)").unwrap()).unwrap();
        assert_eq!(c.terms.len(), 2);
        assert_eq!(c.order(), ContactOrder::Exact(1));
    }

    #[test]
    fn cusp_examples() {
        let r = "2*Re(w + z1^8 + z1^9 + z1^10) + |z1^3 - z2^2|^2";
        let res = order(r, "(t^2, t^3, 0)");
        assert_eq!(res.order, ContactOrder::Exact(16));
        assert_eq!(res.ratio, Ratio::Exact(rat(8, 1)));
        assert_eq!(order(r, "(0, t, 0)").order, ContactOrder::Exact(4));
        let c = compose(
            &parse(r).unwrap().jet,
            &parse_curve("(t^2, t^3, -(t^16+t^18+t^20))").unwrap(),
        )
        .unwrap();
        assert!(c.is_identically_zero());
    }

    #[test]
    fn validity_from_unknown_pure_tail() {
        for n in 8..=10u32 {
            let pure: Vec<String> = (8..=n).map(|j| format!("z1^{j}")).collect();
            let src = format!(
                "# T=12 tail=unknown@z1>{n}\n2*Re(w + {}) + |z1^3 - z2^2|^2",
                pure.join(" + ")
            );
            let h: Vec<String> = (8..=n).map(|j| format!("t^{}", 2 * j)).collect();
            let g = format!("(t^2, t^3, -({}))", h.join(" + "));
            let res = order(&src, &g);
            assert_eq!(res.order, ContactOrder::AtLeast(2 * n + 2));
        }
    }

    #[test]
    fn unknown_tail_censors() {
        let res = order("# T=6\n2*Re(w) + |z1|^6", "(t, 0)");
        assert_eq!(res.order, ContactOrder::Exact(6));
        // (6+1)*2 - 1 = 13 is the validity bound
        let res = order("# T=6\n2*Re(w) + |z1|^4", "(t^2 + t^3, 0)");
        assert_eq!(res.order, ContactOrder::Exact(8));
        let res = order("# T=6\n2*Re(w) + |z1|^4", "(t^2, -t^5)");
        assert_eq!(res.order, ContactOrder::Exact(5));
        let res = order("# T=4\n2*Re(w + z1^2)", "(t, -t^2)");
        assert_eq!(res.order, ContactOrder::AtLeast(5));
    }

    #[test]
    fn factorial_rule_terms() {
        let r = parse("# n=1 T=2 tail=factorial(1)@z1\n2*Re(w)").unwrap().jet;
        let c = compose(&r, &parse_curve("(t, 0)").unwrap()).unwrap();
        assert_eq!(c.terms[&(3, 0)], GaussianRational::from_int(6));
        assert_eq!(c.order(), ContactOrder::Exact(3));
    }
}
