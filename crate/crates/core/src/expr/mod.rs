//! The defining-function expression language: parsing, printing and
//! recognition of standard / model forms.

mod lexer;
mod parser;

pub use lexer::{lex, Spanned, Tok};
pub use parser::{Parser, DEFAULT_DEGREE_CAP};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{fmt_rational, GaussianRational, Rational};
use crate::jet::{CoefficientRule, HermitianJet, Tail, TailRule};
use crate::poly::{ExponentPair, Poly};

/// A parsed defining function over `z_1..z_n` and, when present, a trailing `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefiningFunction {
    pub n: usize,
    pub has_w: bool,
    pub jet: HermitianJet,
    pub source_text: String,
}

impl DefiningFunction {
    pub fn nvars(&self) -> usize {
        self.n + usize::from(self.has_w)
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.n).map(|j| format!("z{j}")).collect();
        if self.has_w {
            names.push("w".into());
        }
        names
    }

    pub fn w_index(&self) -> Option<usize> {
        self.has_w.then_some(self.n)
    }

    /// Canonical text form: directive line plus the expanded polynomial.
    pub fn to_text(&self) -> String {
        let mut header = format!("# n={} T={} tail=", self.n, self.jet.truncation());
        header.push_str(&tail_to_text(self.jet.tail()));
        format!("{header}\n{}", self.jet.poly().display_with(&self.var_names()))
    }
}

fn tail_to_text(tail: &Tail) -> String {
    match tail {
        Tail::Unknown => "unknown".into(),
        Tail::Exact => "exact".into(),
        Tail::Rules(rs) => rs
            .iter()
            .map(|r| {
                let rule = match &r.rule {
                    CoefficientRule::Geometric(q) => format!("geometric({})", fmt_rational(q)),
                    CoefficientRule::PowerFactorial(s) => format!("factorial({s})"),
                    CoefficientRule::PolynomialRate(d) => format!("polyrate({d})"),
                    CoefficientRule::Unspecified => "unknown".into(),
                };
                match r.after {
                    Some(a) => format!("{rule}@z{}>{a}", r.var + 1),
                    None => format!("{rule}@z{}", r.var + 1),
                }
            })
            .collect::<Vec<_>>()
            .join(","),
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Truncation order overriding the directive.
    pub truncation: Option<u32>,
}

#[derive(Default)]
struct Directive {
    n: Option<usize>,
    t: Option<u32>,
    tail: Option<Tail>,
}

fn directive_err(msg: impl Into<String>) -> Error {
    Error::Directive(msg.into())
}

fn parse_tail(spec: &str) -> Result<Tail> {
    match spec {
        "exact" => return Ok(Tail::Exact),
        "unknown" => return Ok(Tail::Unknown),
        _ => {}
    }
    let mut rules = Vec::new();
    for part in spec.split(',') {
        let (rule, var) = part
            .split_once('@')
            .ok_or_else(|| directive_err(format!("tail rule '{part}' lacks '@z<k>'")))?;
        let (var, after) = match var.split_once('>') {
            Some((v, a)) => (
                v,
                Some(
                    a.parse::<u32>()
                        .map_err(|_| directive_err(format!("bad tail start '{a}'")))?,
                ),
            ),
            None => (var, None),
        };
        let var = var
            .strip_prefix('z')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| directive_err(format!("bad tail variable '{var}'")))?;
        if rule == "unknown" {
            rules.push(TailRule {
                var: var - 1,
                rule: CoefficientRule::Unspecified,
                after,
            });
            continue;
        }
        let (name, arg) = rule
            .strip_suffix(')')
            .and_then(|r| r.split_once('('))
            .ok_or_else(|| directive_err(format!("bad tail rule '{rule}'")))?;
        let rule = match name {
            "factorial" => CoefficientRule::PowerFactorial(
                arg.parse().map_err(|_| directive_err("factorial(s) needs an integer"))?,
            ),
            "polyrate" => CoefficientRule::PolynomialRate(
                arg.parse().map_err(|_| directive_err("polyrate(d) needs an integer"))?,
            ),
            "geometric" => {
                let q = parse_rational(arg)
                    .filter(|q| q > &Rational::zero())
                    .ok_or_else(|| directive_err("geometric(p/q) needs a positive rational"))?;
                CoefficientRule::Geometric(q)
            }
            _ => return Err(directive_err(format!("unknown tail rule '{name}'"))),
        };
        if matches!(rule, CoefficientRule::PowerFactorial(0)) {
            return Err(directive_err("factorial(s) needs s >= 1"));
        }
        rules.push(TailRule {
            var: var - 1,
            rule,
            after,
        });
    }
    Ok(Tail::Rules(rules))
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: num_bigint::BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p.parse().ok()?, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn parse_directive(line: &str) -> Result<Directive> {
    let mut d = Directive::default();
    for item in line.trim_start_matches('#').split_whitespace() {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| directive_err(format!("expected key=value, found '{item}'")))?;
        match k {
            "n" => {
                d.n = Some(
                    v.parse()
                        .ok()
                        .filter(|&n: &usize| n >= 1)
                        .ok_or_else(|| directive_err("n must be a positive integer"))?,
                )
            }
            "T" => {
                d.t = Some(
                    v.parse()
                        .ok()
                        .filter(|&t: &u32| t >= 1)
                        .ok_or_else(|| directive_err("T must be a positive integer"))?,
                )
            }
            "tail" => d.tail = Some(parse_tail(v)?),
            _ => return Err(directive_err(format!("unknown directive key '{k}'"))),
        }
    }
    Ok(d)
}

pub fn parse(text: &str) -> Result<DefiningFunction> {
    parse_with(text, &ParseOptions::default())
}

/// Parses an expression, optionally preceded by a `# n=<int> T=<int>` line.
///
/// Without a truncation order the input is taken as an exact polynomial germ;
/// with one (and no explicit `tail=`) it is a jet faithful only up to `T`.
pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<DefiningFunction> {
    let (directive, body_start) = match text.strip_prefix('#') {
        Some(_) => {
            let end = text.find('\n').unwrap_or(text.len());
            (parse_directive(&text[..end])?, end)
        }
        None => (Directive::default(), 0),
    };
    let toks = lex(text, body_start, false)?;
    let max_z = toks
        .iter()
        .filter_map(|t| match t.tok {
            Tok::Z(k) => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let has_w = toks.iter().any(|t| t.tok == Tok::W);
    let n = match directive.n {
        Some(n) if n < max_z => {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: max_z,
            })
        }
        Some(n) => n,
        None => max_z.max(usize::from(!has_w)),
    };
    let nvars = n + usize::from(has_w);
    let truncation = opts.truncation.or(directive.t);
    let cap = truncation.unwrap_or(DEFAULT_DEGREE_CAP);
    let poly = Parser::new(&toks, nvars, has_w.then_some(n), cap.max(DEFAULT_DEGREE_CAP))
        .parse_all()?;
    if let Some(e) = poly.hermitian_violation() {
        let names = names_for(n, has_w);
        return Err(Error::NonRealExpression {
            slot: Poly::monomial(e, GaussianRational::one()).display_with(&names),
        });
    }
    let degree = poly.max_degree().unwrap_or(0);
    let (t, tail) = match truncation {
        Some(t) => {
            if degree > t {
                return Err(Error::DegreeOverflow { degree, limit: t });
            }
            (t, directive.tail.unwrap_or(Tail::Unknown))
        }
        None => (degree.max(1), directive.tail.unwrap_or(Tail::Exact)),
    };
    let jet = HermitianJet::from_poly(poly, t, tail)?;
    Ok(DefiningFunction {
        n,
        has_w,
        jet,
        source_text: text.to_string(),
    })
}

fn names_for(n: usize, has_w: bool) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
    if has_w {
        names.push("w".into());
    }
    names
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormTag {
    General,
    Standard,
    Model,
}

/// Classifies `r` as model `2Re(w) + F(z, z̄)`, standard
/// `2Re(w) + F + R₁·Im(w) + R₂` (with `ord R₁ ≥ 1`, `R₂ = O(|Im w|²)`), or general.
pub fn recognize_form(df: &DefiningFunction) -> Result<FormTag> {
    let jet = &df.jet;
    let linear: Vec<_> = jet.terms().filter(|(e, _)| e.degree() == 1).collect();
    if linear.is_empty() {
        return Err(Error::NotAHypersurface);
    }
    let Some(w) = df.w_index() else {
        return Ok(FormTag::General);
    };
    let nv = df.nvars();
    let mut ew = vec![0; nv];
    ew[w] = 1;
    let w_slot = ExponentPair::holomorphic(ew);
    let linear_ok = linear.len() == 2
        && jet.coeff(&w_slot).is_one()
        && jet.coeff(&w_slot.swapped()).is_one();
    if !linear_ok {
        return Ok(FormTag::General);
    }
    let involves_w = |e: &ExponentPair| e.alpha[w] + e.beta[w] > 0;
    let rest = jet.poly().filtered(|e| involves_w(e) && e.degree() > 1);
    if rest.is_zero() {
        return Ok(FormTag::Model);
    }
    // substitute w = u + i v with u, v real and inspect the v-degrees
    let uv = substitute_real_w(&rest, w);
    let (u, v) = (nv, nv + 1);
    let standard = uv.terms().all(|(e, _)| {
        let vdeg = e.alpha[v];
        vdeg >= 2 || (vdeg == 1 && e.alpha[u] == 0 && e.degree() >= 2)
    });
    Ok(if standard {
        FormTag::Standard
    } else {
        FormTag::General
    })
}

/// Rewrites `p(z, w)` over `(z, w̃, u, v)` with `w = u + i v`; `u`, `v` are
/// stored as holomorphic-only extra variables and `w̃` stays unused.
fn substitute_real_w(p: &Poly, w: usize) -> Poly {
    let nv = p.nvars();
    let ext = nv + 2;
    let u = Poly::var(ext, nv);
    let v = Poly::var(ext, nv + 1);
    let iv = v.scale(&GaussianRational::i());
    let w_sub = u.add(&iv).expect("dim");
    let wbar_sub = u.sub(&iv).expect("dim");
    let mut out = Poly::zero(ext);
    for (e, c) in p.terms() {
        let mut alpha = e.alpha.clone();
        let mut beta = e.beta.clone();
        let (a, b) = (alpha[w], beta[w]);
        alpha[w] = 0;
        beta[w] = 0;
        alpha.resize(ext, 0);
        beta.resize(ext, 0);
        let mono = Poly::monomial(ExponentPair::new(alpha, beta), c.clone());
        let term = mono
            .mul(&w_sub.pow(a))
            .and_then(|m| m.mul(&wbar_sub.pow(b)))
            .expect("dim");
        out = out.add(&term).expect("dim");
    }
    out
}
