//! Three-valued verdicts for the eight hypersurface conditions, Bloom-Graham
//! type of model germs, and the built-in example corpus.
//!
//! Conditions, for `M = {r = 0}` at the origin:
//! 1. `Δ₁ = ∞`; 2. `Δ₁ʳᵉᵍ = ∞`; 3. a regular curve is tangent to infinite
//! order; 4. some curve is; 5. some coordinate makes `r` non-convenient;
//! 6. some coordinate makes `𝒩₊(r)` the slab `{ξ_w ≥ 1}`; 7. Bloom-Graham
//! type is infinite; 8. `M` is Levi-flat (never evaluated).

pub mod arrows;
mod corpus;
mod levi;
mod model;

use serde::Serialize;

pub use corpus::{corpus, run_corpus, run_entry, CorpusEntry, CorpusOutcome, Expected};
pub use levi::{levi_spot_check, LeviSample};
pub use model::{MixedFace, TypeBoundCert};

use model::ModelParts;

use crate::curve::{
    compose, compose_s, contact_order, model_z_part, radius_verdict, tangency_witness,
    type_search, ContactOrder, CurveJet, Radius, Ratio, Regularity, TPoly, TypeBound,
    TypeSearch, TypeSearchOptions,
};
use crate::error::Result;
use crate::expr::{recognize_form, DefiningFunction, FormTag};
use crate::face::{is_canonical, SearchBudget, Verdict};
use crate::jet::{HermitianJet, Tail};
use crate::newton::{is_convenient, rho1, slab_axis, Convenience, Rho1};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    Unknown,
    NotEvaluated,
}

/// Why a condition holds or fails. Every variant can be re-checked by
/// [`replay`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// 1-based axis missing from the support; `r` vanishes on the axis curve.
    MissingAxis { axis: usize, curve: CurveJet },
    /// `𝒩₊(r) = {ξ_axis ≥ 1}`.
    SlabAxis { axis: usize },
    /// The mixed part of `F` has this order: finite Bloom-Graham type.
    MixedOrder { order: u32 },
    /// `F` has no mixed terms at all.
    PureOnly,
    /// `r ∘ γ ≡ 0` for this polynomial curve.
    TangentCurve { curve: CurveJet },
    /// `Q∘γ̂ ≡ 0` and `𝒮∘γ̂` converges, so `(γ̂, −𝒮∘γ̂)` is tangent to
    /// infinite order.
    AnalyticTangent { base: CurveJet, radius: Radius },
    /// `Q∘γ̂ ≡ 0`, so `(γ̂, −h_N)` reaches order `N + 1` for every `N`; shown
    /// here for `N = budget`.
    Ladder {
        base: CurveJet,
        budget: u32,
        witness: CurveJet,
        order: ContactOrder,
    },
    /// Every coordinate subset that can carry a curve annihilating the mixed
    /// part forces `𝒮∘γ̂` to diverge.
    Divergence { subsets: Vec<Vec<usize>> },
    TypeBound(TypeBoundCert),
    /// Canonical coordinate with finite `ρ₁`, hence `Δ₁ = ρ₁`.
    Canonical { rho1: u32 },
    Implied { from: u8, arrow: (u8, u8) },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub condition: u8,
    pub status: Status,
    pub certificate: Option<Evidence>,
    pub note: Option<String>,
}

impl ConditionVerdict {
    pub fn unknown(condition: u8) -> Self {
        Self {
            condition,
            status: if condition == 8 {
                Status::NotEvaluated
            } else {
                Status::Unknown
            },
            certificate: None,
            note: None,
        }
    }

    fn decided(condition: u8, status: Status, ev: Evidence) -> Self {
        Self {
            condition,
            status,
            certificate: Some(ev),
            note: None,
        }
    }

    fn noted(condition: u8, note: &str) -> Self {
        Self {
            note: Some(note.into()),
            ..Self::unknown(condition)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BloomGraham {
    Finite(u32),
    /// Censored by the bound or by the jet truncation.
    AtLeast(u32),
    Infinite,
}

/// Bloom-Graham type of a model germ: the order of the mixed part of `F`,
/// since `w ↦ w − 𝒮` absorbs the pure part.
pub fn bloom_graham(df: &DefiningFunction, bound: u32) -> Result<BloomGraham> {
    let f = model_z_part(df)?;
    let (_, mixed) = f.pure_mixed_split();
    let censor = bound.min(f.truncation());
    Ok(match mixed.vanishing_order() {
        crate::jet::VanishingOrder::Finite(m) if m <= bound => BloomGraham::Finite(m),
        crate::jet::VanishingOrder::Finite(_) => BloomGraham::AtLeast(bound + 1),
        crate::jet::VanishingOrder::Infinite { .. } => match f.tail() {
            Tail::Unknown => BloomGraham::AtLeast(censor + 1),
            _ => BloomGraham::Infinite,
        },
    })
}

fn tail_spares_axis(f: &HermitianJet, k: usize) -> bool {
    match f.tail() {
        Tail::Exact => true,
        Tail::Rules(rs) => rs.iter().all(|r| r.var != k),
        Tail::Unknown => false,
    }
}

/// Condition 5 on the given coordinate: proved by an axis the polyhedron
/// misses (and that the tail cannot reach).
pub fn check_condition5(df: &DefiningFunction) -> ConditionVerdict {
    let conv = is_convenient(&df.jet);
    for &axis in &conv.missing_axes {
        if tail_spares_axis(&df.jet, axis - 1) {
            let curve = CurveJet::axis(df.nvars(), axis - 1);
            return ConditionVerdict::decided(5, Status::Proved, Evidence::MissingAxis { axis, curve });
        }
    }
    if conv.convenient {
        ConditionVerdict::noted(5, "convenient on this coordinate")
    } else {
        ConditionVerdict::noted(5, "axis missing from the stored jet only")
    }
}

/// Condition 6 on the given coordinate.
pub fn check_condition6(df: &DefiningFunction) -> ConditionVerdict {
    match slab_axis(&df.jet) {
        Some(k) => {
            let settled = match df.jet.tail() {
                Tail::Exact => true,
                Tail::Rules(rs) => rs.iter().all(|r| r.var == k),
                Tail::Unknown => false,
            };
            if settled {
                ConditionVerdict::decided(6, Status::Proved, Evidence::SlabAxis { axis: k + 1 })
            } else {
                ConditionVerdict::noted(6, "slab only within the stored jet")
            }
        }
        None => ConditionVerdict::noted(6, "not a slab on this coordinate"),
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Ladder depth `N` for tangency witnesses.
    pub budget: u32,
    pub max_degree: u32,
    pub random_curves: usize,
    pub seed: u64,
    pub face_budget: SearchBudget,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            budget: 10,
            max_degree: 8,
            random_curves: 32,
            seed: 0,
            face_budget: SearchBudget::default(),
        }
    }
}

impl ClassifyOptions {
    fn search(&self, regular_only: bool) -> TypeSearchOptions {
        TypeSearchOptions {
            max_degree: self.max_degree,
            regular_only,
            random_curves: self.random_curves,
            seed: self.seed,
            face_budget: SearchBudget {
                seed: self.seed,
                ..self.face_budget
            },
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeEstimate {
    pub lower: Ratio,
    /// `None` when no finite upper bound is known.
    pub upper: Option<u32>,
    pub exact: bool,
    pub witness: Option<CurveJet>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateFace {
    pub id: String,
    pub weight: Vec<i64>,
    pub support_points: Vec<Vec<u32>>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub corpus_id: Option<String>,
    pub input: String,
    /// How non-polynomial germs were encoded, when relevant.
    pub representation: Option<String>,
    pub form: FormTag,
    pub ambient_dim: usize,
    pub tail: String,
    pub conditions: Vec<ConditionVerdict>,
    pub convenience: Convenience,
    pub rho1: Rho1,
    pub canonical: Option<bool>,
    pub degenerate_faces: Vec<DegenerateFace>,
    pub delta1: TypeEstimate,
    pub delta1_reg: TypeEstimate,
    pub bloom_graham: Option<BloomGraham>,
    /// Arrows with a proved source and a refuted target (always empty
    /// unless something is wrong).
    pub violations: Vec<(u8, u8)>,
    /// Direct checks that disagreed with each other.
    pub conflicts: Vec<String>,
    pub budget: u32,
    pub seed: u64,
}

impl ClassificationReport {
    pub fn status(&self, c: u8) -> Status {
        self.conditions[usize::from(c) - 1].status
    }

    /// Conditions 1–7 left undecided.
    pub fn unknowns(&self) -> usize {
        self.conditions
            .iter()
            .filter(|v| v.status == Status::Unknown)
            .count()
    }

    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty() && self.conflicts.is_empty()
    }
}

struct Board {
    v: Vec<ConditionVerdict>,
    conflicts: Vec<String>,
}

impl Board {
    fn set(&mut self, c: u8, status: Status, ev: Evidence) {
        let slot = &mut self.v[usize::from(c) - 1];
        match slot.status {
            Status::Unknown => *slot = ConditionVerdict::decided(c, status, ev),
            s if s != status => self
                .conflicts
                .push(format!("condition {c}: {s:?} and {status:?} ({ev:?})")),
            _ => {}
        }
    }

    fn put(&mut self, v: ConditionVerdict) {
        match (v.status, v.certificate.clone()) {
            (Status::Proved | Status::Refuted, Some(ev)) => self.set(v.condition, v.status, ev),
            _ => {
                let slot = &mut self.v[usize::from(v.condition) - 1];
                if slot.status == Status::Unknown && slot.note.is_none() {
                    slot.note = v.note;
                }
            }
        }
    }
}

/// `(γ̂, −𝒮∘γ̂)` when the composition is a polynomial.
fn polynomial_tangent(parts: &ModelParts, base: &CurveJet) -> Result<Option<CurveJet>> {
    let hs = compose_s(&parts.s, base)?;
    if hs.validity.is_some() {
        return Ok(None);
    }
    let mut comps = base.components.clone();
    comps.push(hs.series.neg());
    Ok(CurveJet::new(comps, None).ok())
}

fn ladder_evidence(
    df: &DefiningFunction,
    parts: &ModelParts,
    base: &CurveJet,
    budget: u32,
) -> Result<Option<Evidence>> {
    let hs = compose_s(&parts.s, base)?;
    let n = match hs.validity {
        Some(v) => v.min(budget),
        None => budget.max(hs.series.degree().unwrap_or(0)),
    };
    let witness = match tangency_witness(&parts.f, base, n) {
        Ok(w) => w,
        Err(_) => return Ok(None),
    };
    let order = contact_order(&df.jet, &witness)?.order;
    Ok(Some(Evidence::Ladder {
        base: base.clone(),
        budget: n,
        witness,
        order,
    }))
}

fn estimate(search: &TypeSearch, proved: bool, upper: Option<u32>) -> TypeEstimate {
    if proved {
        return TypeEstimate {
            lower: Ratio::Infinite,
            upper: None,
            exact: true,
            witness: Some(search.witness.clone()).filter(|_| search.best.ratio == Ratio::Infinite),
        };
    }
    let lower = search.best.ratio.clone();
    let by_bound = matches!((&lower, upper), (Ratio::Exact(v), Some(u)) if *v == crate::gaussian::Rational::from_integer(u.into()));
    TypeEstimate {
        exact: by_bound || matches!(search.bound, TypeBound::Exact(_)),
        upper,
        lower,
        witness: Some(search.witness.clone()),
    }
}

pub fn classify(df: &DefiningFunction, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let form = recognize_form(df)?;
    if df.n == 0 {
        // the hypersurface needs at least one z coordinate
        return Err(crate::error::Error::DimensionMismatch {
            expected: 2,
            found: df.nvars(),
        });
    }
    let names = df.var_names();
    let mut b = Board {
        v: (1..=8).map(ConditionVerdict::unknown).collect(),
        conflicts: Vec::new(),
    };
    b.v[7].note = Some("Levi-flatness is not decidable from a jet".into());
    b.put(check_condition5(df));
    b.put(check_condition6(df));

    let face_budget = SearchBudget {
        seed: opts.seed,
        ..opts.face_budget
    };
    let canon = is_canonical(&df.jet, &names, &face_budget)?;
    let rho = rho1(&df.jet);
    let mut upper1 = None;
    let mut upper_reg = None;
    if canon.canonical == Some(true) {
        if let Some(v) = rho.finite() {
            b.set(1, Status::Refuted, Evidence::Canonical { rho1: v });
            upper1 = Some(v);
            upper_reg = Some(v);
        }
    }

    let full = type_search(&df.jet, &names, &opts.search(false))?;
    let reg = type_search(&df.jet, &names, &opts.search(true))?;
    for s in [&full, &reg] {
        if s.best.order == ContactOrder::Infinite {
            let ev = Evidence::TangentCurve {
                curve: s.witness.clone(),
            };
            if s.witness.regularity() == Regularity::Regular {
                b.set(3, Status::Proved, ev.clone());
            }
            b.set(4, Status::Proved, ev);
        }
    }

    let mut bg = None;
    if form == FormTag::Model && df.n > 0 {
        let parts = ModelParts::new(model_z_part(df)?)?;
        let g = bloom_graham(df, opts.budget.max(df.jet.truncation()))?;
        match g {
            BloomGraham::Finite(m) => b.set(7, Status::Refuted, Evidence::MixedOrder { order: m }),
            BloomGraham::Infinite => b.set(7, Status::Proved, Evidence::PureOnly),
            BloomGraham::AtLeast(k) => {
                b.v[6].note = Some(format!("no mixed terms through the truncation; type at least {k}"))
            }
        }
        bg = Some(g);

        for base in parts.annihilating_curves(&face_budget)? {
            let regular = base.regularity() == Regularity::Regular;
            if let Some(ev) = ladder_evidence(df, &parts, &base, opts.budget)? {
                if regular {
                    b.set(2, Status::Proved, ev.clone());
                }
                b.set(1, Status::Proved, ev);
            }
            let ev = match radius_verdict(&parts.s, Some(&base)) {
                Radius::Infinite => polynomial_tangent(&parts, &base)?
                    .filter(|g| compose(&df.jet, g).is_ok_and(|c| c.is_identically_zero()))
                    .map(|curve| Evidence::TangentCurve { curve }),
                Radius::Positive { .. } | Radius::PositiveUnspecified => Some(Evidence::AnalyticTangent {
                    base: base.clone(),
                    radius: Radius::PositiveUnspecified,
                }),
                Radius::Zero | Radius::UnknownFiniteJet => None,
            };
            if let Some(ev) = ev {
                if regular {
                    b.set(3, Status::Proved, ev.clone());
                }
                b.set(4, Status::Proved, ev);
            }
        }
        if let Some(c) = parts.type_bound(true) {
            upper_reg = Some(upper_reg.map_or(c.bound, |u: u32| u.min(c.bound)));
            b.set(2, Status::Refuted, Evidence::TypeBound(c));
        }
        if let Some(c) = parts.type_bound(false) {
            upper1 = Some(upper1.map_or(c.bound, |u: u32| u.min(c.bound)));
            b.set(1, Status::Refuted, Evidence::TypeBound(c));
        }
        if let Some(subsets) = parts.divergence_subsets() {
            b.set(4, Status::Refuted, Evidence::Divergence { subsets });
        }
    } else if form != FormTag::Model {
        b.v[6].note = Some("Bloom-Graham type is computed for model forms only".into());
    }

    let violations = arrows::propagate(&mut b.v, &arrows::arrows(df.nvars()));
    let delta1 = estimate(&full, b.v[0].status == Status::Proved, upper1);
    let delta1_reg = estimate(&reg, b.v[1].status == Status::Proved, upper_reg);
    let degenerate_faces = canon
        .faces
        .iter()
        .filter(|a| !a.verdict.is_nondegenerate())
        .map(|a| DegenerateFace {
            id: a.face.id.clone(),
            weight: a.face.weight.clone(),
            support_points: a.face.support_points.clone(),
            verdict: a.verdict.clone(),
        })
        .collect();
    Ok(ClassificationReport {
        corpus_id: None,
        input: df.to_text(),
        representation: None,
        form,
        ambient_dim: df.nvars(),
        tail: df.jet.tail().describe(),
        conditions: b.v,
        convenience: is_convenient(&df.jet),
        rho1: rho,
        canonical: canon.canonical,
        degenerate_faces,
        delta1,
        delta1_reg,
        bloom_graham: bg,
        violations,
        conflicts: b.conflicts,
        budget: opts.budget,
        seed: opts.seed,
    })
}

/// Verdicts for conditions 1–4 after propagation through the diagram.
pub fn check_conditions_1_to_4(df: &DefiningFunction, opts: &ClassifyOptions) -> Result<Vec<ConditionVerdict>> {
    Ok(classify(df, opts)?.conditions.into_iter().take(4).collect())
}

/// Re-derives a certificate from scratch.
pub fn replay(df: &DefiningFunction, ev: &Evidence, opts: &ClassifyOptions) -> Result<bool> {
    let r = &df.jet;
    let parts = || -> Result<ModelParts> { ModelParts::new(model_z_part(df)?) };
    Ok(match ev {
        Evidence::MissingAxis { axis, curve } => {
            *curve == CurveJet::axis(df.nvars(), axis - 1)
                && is_convenient(r).missing_axes.contains(axis)
                && compose(r, curve)?.is_identically_zero()
        }
        Evidence::SlabAxis { axis } => slab_axis(r) == Some(axis - 1),
        Evidence::MixedOrder { order } => bloom_graham(df, *order)? == BloomGraham::Finite(*order),
        Evidence::PureOnly => bloom_graham(df, r.truncation())? == BloomGraham::Infinite,
        Evidence::TangentCurve { curve } => compose(r, curve)?.is_identically_zero(),
        Evidence::AnalyticTangent { base, .. } => {
            let p = parts()?;
            p.q_exact
                .as_ref()
                .map_or(Ok(false), |q| compose(q, base).map(|c| c.is_identically_zero()))?
                && matches!(
                    radius_verdict(&p.s, Some(base)),
                    Radius::Infinite | Radius::Positive { .. } | Radius::PositiveUnspecified
                )
        }
        Evidence::Ladder {
            base,
            budget,
            witness,
            ..
        } => {
            let p = parts()?;
            let base_ok = p
                .q_exact
                .as_ref()
                .map_or(Ok(false), |q| compose(q, base).map(|c| c.is_identically_zero()))?;
            let prefix_ok = witness.components[..base.dim()] == base.components[..];
            let reached = match contact_order(r, witness)?.order {
                ContactOrder::Infinite => true,
                o => o.lower_bound().is_some_and(|k| k > *budget),
            };
            base_ok && prefix_ok && reached
        }
        Evidence::Divergence { subsets } => parts()?.divergence_subsets().as_ref() == Some(subsets),
        Evidence::TypeBound(c) => parts()?.type_bound(c.regular).as_ref() == Some(c),
        Evidence::Canonical { rho1: v } => {
            let budget = SearchBudget {
                seed: opts.seed,
                ..opts.face_budget
            };
            is_canonical(r, &df.var_names(), &budget)?.canonical == Some(true)
                && rho1(r) == Rho1::Finite(*v)
        }
        Evidence::Implied { .. } => true,
    })
}

/// Pads a z-curve with a zero `w` component.
pub fn lift_curve(base: &CurveJet) -> Result<CurveJet> {
    let mut comps = base.components.clone();
    comps.push(TPoly::zero());
    CurveJet::new(comps, base.validity)
}
