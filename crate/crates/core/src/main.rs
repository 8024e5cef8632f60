use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperjet::classify::{classify, run_corpus, ClassifyOptions, Status};
use hyperjet::curve::{compose_s, contact_order, extract_s, parse_curve, radius_verdict, type_search, TypeSearchOptions};
use hyperjet::expr::{parse_with, DefiningFunction, ParseOptions};
use hyperjet::face::{is_canonical, SearchBudget};
use hyperjet::newton::{is_convenient, newton_polyhedron, rho1};
use hyperjet::report::{envelope, error_envelope, parse_view, render};
use hyperjet::Error;

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperjet", version, about = "Newton polyhedra, curve contact orders and finite-type conditions for real hypersurface germs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Truncation order, overriding the input's directive.
    #[arg(long, global = true)]
    trunc: Option<u32>,
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: parse, polyhedron, faces, classification.
    Analyze { file: String },
    /// Newton polyhedron.
    Hull { file: String },
    /// Compact faces with nondegeneracy verdicts.
    Faces { file: String },
    /// Search for a lower bound on the (regular) type.
    Type {
        file: String,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        #[arg(long)]
        regular: bool,
    },
    /// Contact order along a curve such as "(t^2, t^3, 0)".
    CurveOrd {
        file: String,
        #[arg(long)]
        curve: String,
    },
    /// Pure holomorphic series of a model-form input.
    SSeries {
        file: String,
        #[arg(long)]
        compose: Option<String>,
    },
    /// Verdicts for the eight conditions.
    Classify {
        file: String,
        #[arg(long, default_value_t = 10)]
        budget: u32,
    },
    /// Built-in example corpus.
    Corpus {
        #[arg(long)]
        id: Option<String>,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Analyze { .. } => "analyze",
            Cmd::Hull { .. } => "hull",
            Cmd::Faces { .. } => "faces",
            Cmd::Type { .. } => "type",
            Cmd::CurveOrd { .. } => "curve-ord",
            Cmd::SSeries { .. } => "s-series",
            Cmd::Classify { .. } => "classify",
            Cmd::Corpus { .. } => "corpus",
        }
    }
}

/// A failure and the exit code it maps to.
struct Failure(Error, u8);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e, EXIT_OTHER)
    }
}

fn load(path: &str, g: &Global) -> Result<DefiningFunction, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure(Error::Directive(format!("stdin: {e}")), EXIT_OTHER))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure(Error::Directive(format!("{path}: {e}")), EXIT_OTHER))?
    };
    let opts = ParseOptions { truncation: g.trunc };
    parse_with(text.trim_end(), &opts).map_err(|e| Failure(e, EXIT_PARSE))
}

fn curve_arg(src: &str) -> Result<hyperjet::curve::CurveJet, Failure> {
    parse_curve(src).map_err(|e| Failure(e, EXIT_PARSE))
}

fn budget(g: &Global) -> SearchBudget {
    SearchBudget {
        seed: g.seed,
        ..SearchBudget::default()
    }
}

fn classify_opts(g: &Global, budget_n: u32) -> ClassifyOptions {
    ClassifyOptions {
        budget: budget_n,
        seed: g.seed,
        ..ClassifyOptions::default()
    }
}

fn unknowns(conds: &[hyperjet::classify::ConditionVerdict]) -> usize {
    conds.iter().filter(|v| v.status == Status::Unknown).count()
}

fn run(cmd: &Cmd, g: &Global) -> Result<(Value, u8), Failure> {
    Ok(match cmd {
        Cmd::Analyze { file } => {
            let df = load(file, g)?;
            let names = df.var_names();
            let hull = newton_polyhedron(&df.jet)?;
            let canon = is_canonical(&df.jet, &names, &budget(g))?;
            let report = classify(&df, &classify_opts(g, 10))?;
            let code = if report.unknowns() > 0 { EXIT_UNKNOWN } else { 0 };
            let v = json!({
                "parse": parse_view(&df),
                "hull": hull,
                "convenience": is_convenient(&df.jet),
                "rho1": rho1(&df.jet),
                "canonical": canon,
                "classification": report,
            });
            (v, code)
        }
        Cmd::Hull { file } => {
            let df = load(file, g)?;
            (serde_json::to_value(newton_polyhedron(&df.jet)?).expect("serializable"), 0)
        }
        Cmd::Faces { file } => {
            let df = load(file, g)?;
            let canon = is_canonical(&df.jet, &df.var_names(), &budget(g))?;
            (serde_json::to_value(canon).expect("serializable"), 0)
        }
        Cmd::Type {
            file,
            max_degree,
            regular,
        } => {
            let df = load(file, g)?;
            let opts = TypeSearchOptions {
                max_degree: *max_degree,
                regular_only: *regular,
                seed: g.seed,
                face_budget: budget(g),
                ..TypeSearchOptions::default()
            };
            let s = type_search(&df.jet, &df.var_names(), &opts)?;
            let v = json!({
                "bound": s.bound,
                "best": s.best,
                "witness": s.witness.to_string(),
                "origin": s.origin,
                "curves_tried": s.curves_tried,
            });
            (v, 0)
        }
        Cmd::CurveOrd { file, curve } => {
            let df = load(file, g)?;
            let gamma = curve_arg(curve)?;
            let res = contact_order(&df.jet, &gamma)?;
            (json!({ "curve": gamma.to_string(), "contact": res }), 0)
        }
        Cmd::SSeries { file, compose } => {
            let df = load(file, g)?;
            let f = hyperjet::curve::model_z_part(&df)?;
            let s = extract_s(&f);
            let names: Vec<String> = (1..=df.n).map(|j| format!("z{j}")).collect();
            let coeffs: Vec<Value> = s
                .coeffs
                .iter()
                .map(|(a, c)| json!({ "alpha": a, "coeff": c }))
                .collect();
            let mut v = json!({
                "coefficients": coeffs,
                "truncation": s.truncation,
                "tail": s.tail.describe(),
                "mixed_part": s.mixed.poly().display_with(&names),
                "mixed_order": s.mixed_order,
                "radius": radius_verdict(&s, None),
            });
            if let Some(src) = compose {
                let gamma = curve_arg(src)?;
                v["composition"] = serde_json::to_value(compose_s(&s, &gamma)?).expect("serializable");
                v["radius_along_curve"] = serde_json::to_value(radius_verdict(&s, Some(&gamma))).expect("serializable");
            }
            (v, 0)
        }
        Cmd::Classify { file, budget } => {
            let df = load(file, g)?;
            let report = classify(&df, &classify_opts(g, *budget))?;
            let code = if unknowns(&report.conditions) > 0 { EXIT_UNKNOWN } else { 0 };
            (serde_json::to_value(report).expect("serializable"), code)
        }
        Cmd::Corpus { id } => {
            let outs = run_corpus(id.as_deref(), &classify_opts(g, 10))?;
            if outs.is_empty() {
                return Err(Failure(Error::Directive(format!("no corpus entry {:?}", id)), EXIT_OTHER));
            }
            let failed = outs.iter().any(|o| !o.passed());
            let rows: Vec<Value> = outs
                .iter()
                .map(|o| {
                    json!({
                        "id": o.entry.id,
                        "title": o.entry.title,
                        "passed": o.passed(),
                        "mismatches": o.mismatches,
                        "expected": o.entry.expected,
                        "report": o.report,
                    })
                })
                .collect();
            (Value::Array(rows), if failed { EXIT_OTHER } else { 0 })
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.cmd.name();
    let (out, code) = match run(&cli.cmd, &cli.global) {
        Ok((v, code)) => (envelope(name, v), code),
        Err(Failure(e, code)) => (error_envelope(name, &e), code),
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = writeln!(stdout, "{}", render(&out, cli.global.pretty));
    ExitCode::from(code)
}
