//! Parser golden suite: `parser_cases.tsv` holds `<error byte or ->\t<input>`
//! per line (`\n` escaped), `parser_expected.jsonl` the JSON for each.

use std::path::PathBuf;

use hyperjet::expr::parse;
use hyperjet::report::parse_json;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Case {
    pub line: usize,
    pub error_at: Option<usize>,
    pub input: String,
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(dir().join("parser_cases.tsv")).expect("golden cases");
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            let (pos, input) = l.split_once('\t').expect("tab-separated");
            Case {
                line: i + 1,
                error_at: pos.parse().ok(),
                input: input.replace("\\n", "\n"),
            }
        })
        .collect()
}

/// Checks every case; with `update` rewrites the expected file first.
pub fn check(update: bool) -> Result<usize, String> {
    let cases = cases();
    let outputs: Vec<String> = cases.iter().map(|c| parse_json(&c.input)).collect();
    let expected_path = dir().join("parser_expected.jsonl");
    if update {
        std::fs::write(&expected_path, outputs.join("\n") + "\n").map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&expected_path).map_err(|e| format!("{e}; run with UPDATE_GOLDEN=1"))?;
    let expected: Vec<&str> = expected.lines().collect();
    if expected.len() != cases.len() {
        return Err(format!("{} expected lines for {} cases", expected.len(), cases.len()));
    }
    for (c, (got, want)) in cases.iter().zip(outputs.iter().zip(&expected)) {
        if got != want {
            return Err(format!("case {}: {got}\n  expected {want}", c.line));
        }
        if parse_json(&c.input) != *got {
            return Err(format!("case {}: output not stable", c.line));
        }
        if let Some(at) = c.error_at {
            match parse(&c.input) {
                Ok(_) => return Err(format!("case {}: parsed, expected error at byte {at}", c.line)),
                Err(e) if e.position() != Some(at) => {
                    return Err(format!("case {}: error {e:?}, expected byte {at}", c.line))
                }
                Err(_) => {}
            }
        }
    }
    Ok(cases.len())
}
