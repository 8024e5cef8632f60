//! Bounded search for curves of high contact order.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::compose::{compose_from, contact_order, ContactResult, Ratio};
use super::{CurveJet, TPoly};
use crate::error::Result;
use crate::face::{is_canonical, SearchBudget, Verdict};
use crate::gaussian::{GaussianRational, Rational};
use crate::jet::HermitianJet;
use crate::newton::{rho1, Rho1};
use crate::poly::ExponentPair;

#[derive(Clone, Debug)]
pub struct TypeSearchOptions {
    pub max_degree: u32,
    pub regular_only: bool,
    pub random_curves: usize,
    pub ladder_steps: usize,
    pub seed: u64,
    pub face_budget: SearchBudget,
}

impl Default for TypeSearchOptions {
    fn default() -> Self {
        Self {
            max_degree: 8,
            regular_only: false,
            random_curves: 64,
            ladder_steps: 64,
            seed: 0,
            face_budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeBound {
    /// `Δ₁` (or `Δ₁ʳᵉᵍ`) equals the value, by canonicity.
    Exact(Ratio),
    /// The value is at least this much.
    LowerBound(Ratio),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSearch {
    pub bound: TypeBound,
    /// Best ratio found along the search family.
    pub best: ContactResult,
    pub witness: CurveJet,
    /// How the witness was seeded: "axis", "face:<id>" or "random".
    pub origin: String,
    pub curves_tried: usize,
    pub seed: u64,
}

/// Linear holomorphic variables `z_j` with nonzero coefficient in `r`.
fn linear_vars(r: &HermitianJet) -> Vec<(usize, GaussianRational)> {
    (0..r.nvars())
        .filter_map(|j| {
            let mut a = vec![0; r.nvars()];
            a[j] = 1;
            let c = r.coeff(&ExponentPair::holomorphic(a));
            (!c.is_zero()).then_some((j, c))
        })
        .collect()
}

/// Greedily removes the pure terms `C tᵖ` of `r ∘ γ` below its lowest mixed
/// term by adding `−C/λ tᵖ` to a linear coordinate, all known ones at once
/// per step; stops when the lowest term is mixed.
pub fn ladder(r: &HermitianJet, gamma: CurveJet, steps: usize) -> Result<CurveJet> {
    let lin = linear_vars(r);
    let Some((j, lambda)) = lin.last().cloned() else {
        return Ok(gamma);
    };
    let inv = lambda.inv().expect("nonzero");
    let mut gamma = gamma;
    let mut start = 4 * gamma.order().max(1);
    for _ in 0..steps {
        let comp = compose_from(r, &gamma, start)?;
        let mixed = comp
            .terms
            .keys()
            .filter(|(p, q)| *p > 0 && *q > 0)
            .map(|(p, q)| p + q)
            .min();
        let pure: Vec<(u32, GaussianRational)> = comp
            .terms
            .iter()
            .filter(|((p, q), _)| *q == 0 && mixed.is_none_or(|m| *p < m))
            .filter(|((p, _), _)| !gamma.validity.is_some_and(|v| *p > v))
            .map(|((p, _), c)| (*p, c.clone()))
            .collect();
        if pure.is_empty() || comp.lowest().iter().any(|((p, q), _)| *p > 0 && *q > 0) {
            break;
        }
        let mut comps = gamma.components.clone();
        for (p, c) in &pure {
            comps[j] = comps[j].add(&TPoly::monomial(*p, -(c * &inv)));
        }
        match CurveJet::new(comps, gamma.validity) {
            Ok(g) if g.order() == gamma.order() => gamma = g,
            _ => break,
        }
        if let Some(v) = comp.validity {
            start = start.max(v);
        }
    }
    Ok(gamma)
}

fn random_component(rng: &mut ChaCha8Rng, d: u32) -> TPoly {
    let mut p = TPoly::zero();
    let terms = rng.gen_range(0..=3);
    for _ in 0..terms {
        let k = rng.gen_range(1..=d);
        let c = GaussianRational::from_ints(rng.gen_range(-2..=2), rng.gen_range(-1..=1));
        p.add_term(k, c);
    }
    p
}

fn random_curve(rng: &mut ChaCha8Rng, dim: usize, d: u32, regular: bool) -> Option<CurveJet> {
    let mut comps: Vec<TPoly> = (0..dim).map(|_| random_component(rng, d)).collect();
    if regular {
        let j = rng.gen_range(0..dim);
        if comps[j].coeff(1).is_zero() {
            comps[j].add_term(1, GaussianRational::from_int(1));
        }
    }
    let g = CurveJet::new(comps, None).ok()?;
    (!regular || g.order() == 1).then_some(g)
}

/// Monomial curve `c_j t^{a_j / g}` on the coordinates of a degenerate face.
pub(crate) fn face_curve(dim: usize, weight: &[i64], c: &[GaussianRational], free: &[usize]) -> Option<CurveJet> {
    let active: Vec<usize> = (0..dim).filter(|j| !free.contains(&(j + 1))).collect();
    let g = active
        .iter()
        .fold(0i64, |g, &j| crate::linalg::gcd_i64(g, weight[j]));
    if g == 0 {
        return None;
    }
    let mut comps = vec![TPoly::zero(); dim];
    for &j in &active {
        comps[j] = TPoly::monomial((weight[j] / g) as u32, c[j].clone());
    }
    CurveJet::new(comps, None).ok()
}

/// Lower bound for `Δ₁` (or `Δ₁ʳᵉᵍ` with `regular_only`) over axis curves,
/// degenerate-face monomial curves and random curves, each refined by the
/// ladder. Exact when the coordinate is canonical.
pub fn type_search(r: &HermitianJet, names: &[String], opts: &TypeSearchOptions) -> Result<TypeSearch> {
    let dim = r.nvars();
    let mut seeds: Vec<(String, CurveJet)> = (0..dim)
        .map(|j| ("axis".to_string(), CurveJet::axis(dim, j)))
        .collect();

    let canon = is_canonical(r, names, &opts.face_budget)?;
    for fa in &canon.faces {
        if let Verdict::Degenerate { witness } = &fa.verdict {
            if let Some(g) = face_curve(dim, &fa.face.weight, &witness.c, &witness.free) {
                if !opts.regular_only || g.order() == 1 {
                    seeds.push((format!("face:{}", fa.face.id), g));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_curves {
        if let Some(g) = random_curve(&mut rng, dim, opts.max_degree.max(1), opts.regular_only) {
            seeds.push(("random".to_string(), g));
        }
    }

    let evaluated: Vec<Result<(String, CurveJet, ContactResult)>> = seeds
        .into_par_iter()
        .map(|(origin, g)| {
            let g = ladder(r, g, opts.ladder_steps)?;
            let res = contact_order(r, &g)?;
            Ok((origin, g, res))
        })
        .collect();
    let mut best: Option<(String, CurveJet, ContactResult)> = None;
    let mut tried = 0;
    for item in evaluated {
        let (origin, g, res) = item?;
        tried += 1;
        if best.as_ref().is_none_or(|(_, _, b)| res.ratio.exceeds(&b.ratio)) {
            best = Some((origin, g, res));
        }
    }
    let (origin, witness, best) = best.expect("axis curves are always present");

    let bound = match (canon.canonical, rho1(r)) {
        (Some(true), Rho1::Finite(v)) => TypeBound::Exact(Ratio::Exact(Rational::from_integer(v.into()))),
        (Some(true), Rho1::Infinite { .. }) => TypeBound::Exact(Ratio::Infinite),
        _ if best.ratio == Ratio::Infinite => TypeBound::Exact(Ratio::Infinite),
        _ => TypeBound::LowerBound(best.ratio.clone()),
    };
    Ok(TypeSearch {
        bound,
        best,
        witness,
        origin,
        curves_tried: tried,
        seed: opts.seed,
    })
}
