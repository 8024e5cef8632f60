//! Certificates for model-form germs `2Re(w) + F(z, z̄)`, built from the split
//! `F = 2Re 𝒮 + Q` into pure and mixed parts.
//!
//! Along `γ = (γ̂, w)` the pure part of `r ∘ γ` in `(t, t̄)` is
//! `2Re(w + 𝒮∘γ̂)` and the mixed part is `Q∘γ̂`; the two never cancel.

use serde::Serialize;

use crate::curve::{compose, face_curve, CurveJet};
use crate::error::Result;
use crate::face::{analyze_faces, torus_nonvanishing, Certificate, SearchBudget, Verdict};
use crate::jet::{HermitianJet, RuleRadius, Tail};
use crate::newton::{is_convenient, newton_polyhedron, rho1, Face};
use crate::curve::{extract_s, SSeries};

/// A compact face of `𝒩₊(Q)` and, if found, a proof that `Q_κ` has no zero
/// on the torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedFace {
    pub face: Face,
    pub certificate: Option<Certificate>,
}

pub(crate) struct ModelParts {
    pub f: HermitianJet,
    pub s: SSeries,
    /// `Q` as an exact polynomial when the tail fixes every mixed coefficient.
    pub q_exact: Option<HermitianJet>,
    pub faces: Vec<MixedFace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeBoundCert {
    pub bound: u32,
    pub regular: bool,
    /// Faces skipped because no regular curve can lead on them.
    pub skipped_faces: Vec<String>,
}

impl ModelParts {
    pub fn new(f: HermitianJet) -> Result<Self> {
        let s = extract_s(&f);
        let q_exact = match f.tail() {
            Tail::Unknown => None,
            _ => Some(HermitianJet::exact(s.mixed.poly().clone())?),
        };
        let faces = if s.mixed.is_zero() {
            Vec::new()
        } else {
            newton_polyhedron(&s.mixed)?
                .compact_faces
                .into_iter()
                .map(|face| {
                    let part = s
                        .mixed
                        .poly()
                        .filtered(|e| face.contains_point(&e.support_point()));
                    MixedFace {
                        certificate: torus_nonvanishing(&part),
                        face,
                    }
                })
                .collect()
        };
        Ok(Self {
            f,
            s,
            q_exact,
            faces,
        })
    }

    pub fn n(&self) -> usize {
        self.f.nvars()
    }

    fn q(&self) -> &HermitianJet {
        &self.s.mixed
    }

    /// A facet of full support whose only determining weights have every
    /// entry at least 2 cannot carry the leading term along a regular curve.
    fn regular_irrelevant(&self, face: &Face) -> bool {
        face.dim + 1 == self.n()
            && face.generators.len() == 1
            && face.generators[0].normal.iter().all(|&a| a >= 2)
    }

    /// Upper bound `max(1, ρ₁(Q))` for `Δ₁` (or `Δ₁ʳᵉᵍ`): if `Q` is convenient
    /// and the leading face along every curve is torus-nonvanishing then
    /// `ord(Q∘γ̂) = ℓ(a) ≤ ρ₁(Q)·ord γ̂`, and a lower-order `w` only lowers
    /// the ratio.
    pub fn type_bound(&self, regular: bool) -> Option<TypeBoundCert> {
        let q = self.q();
        if q.is_zero() || !is_convenient(q).convenient {
            return None;
        }
        let r = rho1(q).finite()?;
        // unseen mixed terms have degree above T ≥ ρ₁, so they never lead
        let mut skipped = Vec::new();
        for mf in &self.faces {
            if mf.certificate.is_some() {
                continue;
            }
            if regular && self.regular_irrelevant(&mf.face) {
                skipped.push(mf.face.id.clone());
                continue;
            }
            return None;
        }
        Some(TypeBoundCert {
            bound: r.max(1),
            regular,
            skipped_faces: skipped,
        })
    }

    /// Curves `γ̂` with `Q∘γ̂ ≡ 0` exactly: coordinate axes and monomial
    /// curves on degenerate faces of `Q`.
    pub fn annihilating_curves(&self, budget: &SearchBudget) -> Result<Vec<CurveJet>> {
        let Some(q) = &self.q_exact else {
            return Ok(Vec::new());
        };
        let n = self.n();
        let mut cands: Vec<CurveJet> = (0..n).map(|j| CurveJet::axis(n, j)).collect();
        if !q.is_zero() {
            let names: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
            let p = newton_polyhedron(q)?;
            for fa in analyze_faces(q, &p, &names, budget)? {
                if let Verdict::Degenerate { witness } = &fa.verdict {
                    if let Some(g) = face_curve(n, &fa.face.weight, &witness.c, &witness.free) {
                        cands.push(g);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for g in cands {
            if compose(q, &g)?.is_identically_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Coordinate subsets `I` (1-based) that could carry a curve with
    /// `Q∘γ̂ ≡ 0`, when each of them forces `𝒮∘γ̂` to diverge; `None` if
    /// divergence cannot be certified this way.
    ///
    /// One factorial coordinate in `I` makes `𝒮∘γ̂` diverge (reparametrize
    /// `γ̂_k = τᵃ`). With `Q ≡ 0` and a factorial rule on every coordinate,
    /// `𝒮` diverges at every nonzero point, which rules out all curves.
    pub fn divergence_subsets(&self) -> Option<Vec<Vec<usize>>> {
        if matches!(self.f.tail(), Tail::Unknown) {
            return None;
        }
        let n = self.n();
        if n == 0 || n > 16 {
            return None;
        }
        let mut radius = vec![RuleRadius::Infinite; n];
        for rule in self.s.rules() {
            radius[rule.var] = rule.rule.radius();
        }
        let divergent: Vec<bool> = radius.iter().map(|r| *r == RuleRadius::Zero).collect();
        let q = self.q();
        let all = (1..=n).collect::<Vec<_>>();
        if q.is_zero() && divergent.iter().all(|&d| d) {
            return Some(vec![all]);
        }
        let mut subsets = Vec::new();
        for mask in 1u32..(1 << n) {
            let inside = |j: usize| mask & (1 << j) != 0;
            let q_i = q
                .poly()
                .filtered(|e| (0..n).all(|j| inside(j) || e.alpha[j] + e.beta[j] == 0));
            let possible = q_i.is_zero()
                || self.faces.iter().any(|mf| {
                    mf.certificate.is_none()
                        && mf
                            .face
                            .support_points
                            .iter()
                            .all(|p| (0..n).all(|j| inside(j) || p[j] == 0))
                });
            if !possible {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&j| inside(j)).collect();
            let hits = members.iter().filter(|&&j| divergent[j]).count();
            if hits != 1 || members.iter().any(|&j| radius[j] == RuleRadius::Unknown) {
                return None;
            }
            subsets.push(members.iter().map(|j| j + 1).collect());
        }
        Some(subsets)
    }
}
