//! The built-in examples: eight separations between the conditions, the
//! finite-type germ without infinitely tangent curves, and a sum of
//! one-variable flat-type functions.

use rayon::prelude::*;
use serde::Serialize;

use super::{classify, BloomGraham, ClassificationReport, ClassifyOptions, Status};
use crate::error::Result;
use crate::expr::parse;

/// Rendering of a smooth `f` with divergent Taylor series `Σ j! z^j`.
const F_REPR: &str = "f is a smooth subharmonic function whose Taylor series diverges; \
                      encoded by its jet through the truncation order plus the tail rule c_j = j!";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expected {
    /// One character per condition 1..8: `P`, `R`, `?` or `-`.
    pub table: &'static str,
    pub bloom_graham: Option<BloomGraham>,
    pub delta1_reg: Option<u32>,
    pub canonical: Option<bool>,
    pub degenerate_faces: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub title: &'static str,
    /// Number of `z` variables; the ambient space is `ℂ^{n+1}`.
    pub n: usize,
    pub text: String,
    pub representation: Option<&'static str>,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusOutcome {
    pub entry: CorpusEntry,
    pub report: ClassificationReport,
    pub mismatches: Vec<String>,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn factorial_terms(var: &str, from: u32, to: u32) -> String {
    let mut f = 1u64;
    let mut parts = Vec::new();
    for j in 1..=to {
        f *= u64::from(j);
        if j >= from {
            parts.push(format!("{f}*{var}^{j}"));
        }
    }
    parts.join(" + ")
}

fn exp(table: &'static str, bg: Option<BloomGraham>) -> Expected {
    Expected {
        table,
        bloom_graham: bg,
        delta1_reg: None,
        canonical: None,
        degenerate_faces: None,
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    let cusp = "2*Re(w) + |z1^3 - z2^2|^2".to_string();
    let f1 = format!("# n=2 T=6 tail=factorial(1)@z1\n2*Re(w + {}) + |z2|^2", factorial_terms("z1", 2, 6));
    let slab2 = "# n=2\n2*Re(w) + |z2|^2".to_string();
    vec![
        CorpusEntry {
            id: "E1",
            title: "(1) does not imply (2)",
            n: 2,
            text: cusp.clone(),
            representation: None,
            expected: Expected {
                delta1_reg: Some(6),
                ..exp("PRRPRRR-", Some(BloomGraham::Finite(4)))
            },
        },
        CorpusEntry {
            id: "E2",
            title: "(2) does not imply (3)",
            n: 2,
            text: f1.clone(),
            representation: Some(F_REPR),
            expected: exp("PPRRRRR-", Some(BloomGraham::Finite(2))),
        },
        CorpusEntry {
            id: "E3",
            title: "(1) does not imply (4)",
            n: 2,
            text: f1,
            representation: Some(F_REPR),
            expected: exp("PPRRRRR-", Some(BloomGraham::Finite(2))),
        },
        CorpusEntry {
            id: "E4",
            title: "(4) does not imply (3)",
            n: 2,
            text: cusp,
            representation: None,
            expected: exp("PRRPRRR-", Some(BloomGraham::Finite(4))),
        },
        CorpusEntry {
            id: "E5",
            title: "(5) does not imply (6)",
            n: 2,
            text: slab2.clone(),
            representation: None,
            expected: exp("PPPPPRR-", Some(BloomGraham::Finite(2))),
        },
        CorpusEntry {
            id: "E6",
            title: "(2) does not imply (7)",
            n: 2,
            text: slab2,
            representation: None,
            expected: exp("PPPPPRR-", Some(BloomGraham::Finite(2))),
        },
        CorpusEntry {
            id: "E7",
            title: "(7) does not imply (6)",
            n: 1,
            text: format!("# n=1 T=6 tail=factorial(1)@z1\n2*Re(w + {})", factorial_terms("z1", 2, 6)),
            representation: Some(F_REPR),
            expected: exp("PPRRRRP-", Some(BloomGraham::Infinite)),
        },
        CorpusEntry {
            id: "E8",
            title: "(6) does not imply (8)",
            n: 1,
            text: "# n=1\n2*Re(w)".into(),
            representation: Some("exp(-|z1|^-2) is flat at the origin; encoded as its Taylor jet, exactly zero"),
            expected: exp("PPPPPPP-", Some(BloomGraham::Infinite)),
        },
        CorpusEntry {
            id: "E9",
            title: "finite Bloom-Graham type, infinite Δ₁, no infinitely tangent curve",
            n: 2,
            text: format!(
                "# n=2 T=12 tail=factorial(1)@z1\n2*Re(w + {}) + |z1^3 - z2^2|^2",
                factorial_terms("z1", 8, 12)
            ),
            representation: Some(
                "f has Taylor series 2Re(Σ_{j≥8} j! z1^j); encoded through degree 12 plus the tail rule c_j = j!",
            ),
            expected: Expected {
                delta1_reg: Some(6),
                canonical: Some(false),
                degenerate_faces: Some(1),
                ..exp("PRRRRRR-", Some(BloomGraham::Finite(4)))
            },
        },
        CorpusEntry {
            id: "E10",
            title: "sum of one-variable functions: infinite Bloom-Graham type, no infinitely tangent curve",
            n: 2,
            text: format!(
                "# n=2 T=6 tail=factorial(1)@z1,factorial(1)@z2\n2*Re(w + {} + {})",
                factorial_terms("z1", 2, 6),
                factorial_terms("z2", 2, 6)
            ),
            representation: Some("f1, f2 as for f, one per coordinate"),
            expected: exp("PPRRRRP-", Some(BloomGraham::Infinite)),
        },
    ]
}

fn table(r: &ClassificationReport) -> String {
    r.conditions
        .iter()
        .map(|v| match v.status {
            Status::Proved => 'P',
            Status::Refuted => 'R',
            Status::Unknown => '?',
            Status::NotEvaluated => '-',
        })
        .collect()
}

fn check(e: &CorpusEntry, r: &ClassificationReport) -> Vec<String> {
    let mut bad = Vec::new();
    let got = table(r);
    if got != e.expected.table {
        bad.push(format!("verdicts {got}, expected {}", e.expected.table));
    }
    if e.expected.bloom_graham.is_some() && r.bloom_graham != e.expected.bloom_graham {
        bad.push(format!("Bloom-Graham type {:?}", r.bloom_graham));
    }
    if let Some(v) = e.expected.delta1_reg {
        let want = crate::curve::Ratio::Exact(crate::gaussian::rat(v.into(), 1));
        if !(r.delta1_reg.exact && r.delta1_reg.lower == want) {
            bad.push(format!("regular type {:?}", r.delta1_reg));
        }
    }
    if e.expected.canonical.is_some() && r.canonical != e.expected.canonical {
        bad.push(format!("canonical {:?}", r.canonical));
    }
    if let Some(k) = e.expected.degenerate_faces {
        if r.degenerate_faces.len() != k {
            bad.push(format!("{} degenerate faces", r.degenerate_faces.len()));
        }
    }
    if !r.is_consistent() {
        bad.push(format!("inconsistent: {:?} {:?}", r.violations, r.conflicts));
    }
    bad
}

pub fn run_entry(e: &CorpusEntry, opts: &ClassifyOptions) -> Result<CorpusOutcome> {
    let df = parse(&e.text)?;
    let mut report = classify(&df, opts)?;
    report.corpus_id = Some(e.id.into());
    report.representation = e.representation.map(Into::into);
    Ok(CorpusOutcome {
        mismatches: check(e, &report),
        entry: e.clone(),
        report,
    })
}

/// Runs the selected entries (all when `id` is `None`) in parallel; results
/// keep corpus order.
pub fn run_corpus(id: Option<&str>, opts: &ClassifyOptions) -> Result<Vec<CorpusOutcome>> {
    corpus()
        .into_par_iter()
        .filter(|e| id.is_none_or(|i| i.eq_ignore_ascii_case(e.id)))
        .map(|e| run_entry(&e, opts))
        .collect()
}
