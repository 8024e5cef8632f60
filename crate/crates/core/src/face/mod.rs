//! κ-parts, the torus systems they induce, and the nondegeneracy test.

mod rules;
mod search;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use rules::{Certificate, GroupKey};
pub use search::{approx_rational, SearchBudget};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::jet::HermitianJet;
use crate::newton::{
    determined_by_jet, newton_polyhedron, rho1, support, Face, NewtonPolyhedron, Rho1,
};
use crate::poly::Poly;

/// `F_κ`: the terms of `F` whose support point lies on `κ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePart {
    pub face_id: String,
    pub poly: Poly,
}

pub fn face_part(f: &HermitianJet, face: &Face) -> Result<FacePart> {
    let s = support(f);
    let mismatch = || Error::FaceMismatch {
        face: face.id.clone(),
    };
    if face.generators.is_empty()
        || s.points.iter().any(|p| !face.generators.iter().all(|g| g.contains(p)))
    {
        return Err(mismatch());
    }
    let on_face: Vec<&Vec<u32>> = s.points.iter().filter(|p| face.contains_point(p)).collect();
    if on_face.len() != face.support_points.len()
        || on_face.iter().zip(&face.support_points).any(|(a, b)| *a != b)
    {
        return Err(mismatch());
    }
    Ok(FacePart {
        face_id: face.id.clone(),
        poly: f.poly().filtered(|e| face.contains_point(&e.support_point())),
    })
}

/// `F_κ(c₁t^{a₁}, …, c_nt^{a_n}) = Σ G_{pq}(c, c̄) tᵖ t̄^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedSystem {
    pub nvars: usize,
    pub weight: Vec<i64>,
    pub groups: BTreeMap<GroupKey, Poly>,
}

impl GroupedSystem {
    /// Groups `poly` by weighted bidegree without checking the weight.
    pub fn new(poly: &Poly, weight: &[i64]) -> Self {
        let mut groups: BTreeMap<GroupKey, Poly> = BTreeMap::new();
        for (e, c) in poly.terms() {
            groups
                .entry(e.weighted_degrees(weight))
                .or_insert_with(|| Poly::zero(poly.nvars()))
                .add_term(e.clone(), c.clone());
        }
        groups.retain(|_, g| !g.is_zero());
        Self {
            nvars: poly.nvars(),
            weight: weight.to_vec(),
            groups,
        }
    }

    /// Variables occurring in some group.
    pub fn active_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&j| {
                self.groups
                    .values()
                    .any(|g| g.terms().any(|(e, _)| e.alpha[j] + e.beta[j] > 0))
            })
            .collect()
    }
}

pub fn grouped_system(
    p: &NewtonPolyhedron,
    face: &Face,
    part: &FacePart,
    weight: &[i64],
) -> Result<GroupedSystem> {
    if !p.determines(weight, face) {
        return Err(Error::WeightDoesNotDetermineFace {
            weight: weight.to_vec(),
            face: face.id.clone(),
        });
    }
    Ok(GroupedSystem::new(&part.poly, weight))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub c: Vec<GaussianRational>,
    /// 1-based coordinates absent from the face part, set to 1.
    pub free: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Nondegenerate { certificate: Certificate },
    Degenerate { witness: Witness },
    Unknown {
        budget: SearchBudget,
        candidate: Option<Vec<(f64, f64)>>,
    },
}

impl Verdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Verdict::Degenerate { .. })
    }

    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Verdict::Nondegenerate { .. })
    }
}

/// Verdict for a grouped system: structural rules first, then a witness search.
pub fn system_verdict(sys: &GroupedSystem, budget: &SearchBudget) -> Verdict {
    if let Some(certificate) = rules::certify(sys) {
        return Verdict::Nondegenerate { certificate };
    }
    let active = sys.active_vars();
    let free: Vec<usize> = (0..sys.nvars)
        .filter(|j| !active.contains(j))
        .map(|j| j + 1)
        .collect();
    match search::find_zero(sys, &active, budget) {
        search::SearchOutcome::Exact(c) => Verdict::Degenerate {
            witness: Witness { c, free },
        },
        search::SearchOutcome::Candidate(c) => Verdict::Unknown {
            budget: *budget,
            candidate: Some(c),
        },
        search::SearchOutcome::Nothing => Verdict::Unknown {
            budget: *budget,
            candidate: None,
        },
    }
}

/// A structural certificate that `p(c, c̄) ≠ 0` on the whole torus, which
/// covers the grouped system of every weight at once.
pub fn torus_nonvanishing(p: &Poly) -> Option<Certificate> {
    if p.is_zero() {
        return None;
    }
    let sys = GroupedSystem::new(p, &vec![0; p.nvars()]);
    rules::certify(&sys)
}

pub fn nondegeneracy_verdict(
    f: &HermitianJet,
    p: &NewtonPolyhedron,
    face: &Face,
    budget: &SearchBudget,
) -> Result<Verdict> {
    let part = face_part(f, face)?;
    let sys = grouped_system(p, face, &part, &face.weight)?;
    Ok(system_verdict(&sys, budget))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceAnalysis {
    pub face: Face,
    pub groups: Vec<(GroupKey, String)>,
    pub verdict: Verdict,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalReport {
    /// `None` when undecided.
    pub canonical: Option<bool>,
    /// Whether the stored jet fixes the polyhedron of the germ.
    pub determined: bool,
    pub faces: Vec<FaceAnalysis>,
}

fn face_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn analyze_faces(
    f: &HermitianJet,
    p: &NewtonPolyhedron,
    names: &[String],
    budget: &SearchBudget,
) -> Result<Vec<FaceAnalysis>> {
    p.compact_faces
        .par_iter()
        .enumerate()
        .map(|(i, face)| {
            let b = SearchBudget {
                seed: face_seed(budget.seed, i),
                ..*budget
            };
            let part = face_part(f, face)?;
            let sys = grouped_system(p, face, &part, &face.weight)?;
            let groups = sys
                .groups
                .iter()
                .map(|(k, g)| (*k, g.display_with(names)))
                .collect();
            Ok(FaceAnalysis {
                face: face.clone(),
                groups,
                verdict: system_verdict(&sys, &b),
                seed: b.seed,
            })
        })
        .collect()
}

/// Nondegeneracy of every compact face.
pub fn is_canonical(f: &HermitianJet, names: &[String], budget: &SearchBudget) -> Result<CanonicalReport> {
    let determined = determined_by_jet(f);
    if f.is_zero() {
        return Ok(CanonicalReport {
            canonical: determined.then_some(true),
            determined,
            faces: Vec::new(),
        });
    }
    let p = newton_polyhedron(f)?;
    let faces = analyze_faces(f, &p, names, budget)?;
    let canonical = if !determined {
        None
    } else if faces.iter().any(|a| a.verdict.is_degenerate()) {
        Some(false)
    } else if faces.iter().all(|a| a.verdict.is_nondegenerate()) {
        Some(true)
    } else {
        None
    };
    Ok(CanonicalReport {
        canonical,
        determined,
        faces,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSummary {
    pub delta1: Rho1,
    pub delta1_reg: Rho1,
    pub rho1: Rho1,
}

/// `Δ₁ = Δ₁ʳᵉᵍ = ρ₁` on a canonical coordinate.
pub fn type_if_canonical(f: &HermitianJet, names: &[String], budget: &SearchBudget) -> Result<TypeSummary> {
    match is_canonical(f, names, budget)?.canonical {
        Some(true) => {
            let r = rho1(f);
            Ok(TypeSummary {
                delta1: r,
                delta1_reg: r,
                rho1: r,
            })
        }
        Some(false) => Err(Error::NotCanonical),
        None => Err(Error::UnknownCanonicity),
    }
}
