//! JSON envelopes shared by the CLI and the golden tests.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::expr::{recognize_form, DefiningFunction};

pub const SCHEMA: u32 = 1;

pub fn envelope(command: &str, result: impl Serialize) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "result": result,
    })
}

pub fn error_envelope(command: &str, err: &Error) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": {
            "kind": err.kind(),
            "message": err.to_string(),
            "position": err.position(),
        },
    })
}

/// The parsed jet: dimensions, tail, recognized form and every stored term.
pub fn parse_view(df: &DefiningFunction) -> Value {
    let names = df.var_names();
    let terms: Vec<Value> = df
        .jet
        .terms()
        .map(|(e, c)| json!({ "alpha": e.alpha, "beta": e.beta, "coeff": c }))
        .collect();
    json!({
        "n": df.n,
        "has_w": df.has_w,
        "vars": names,
        "truncation": df.jet.truncation(),
        "tail": df.jet.tail().describe(),
        "form": recognize_form(df).ok(),
        "terms": terms,
        "text": df.to_text(),
    })
}

/// Parses `text` and renders either the parse view or the error, compactly.
pub fn parse_json(text: &str) -> String {
    let v = match crate::expr::parse(text) {
        Ok(df) => envelope("parse", parse_view(&df)),
        Err(e) => error_envelope("parse", &e),
    };
    render(&v, false)
}

pub fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("json values always serialize")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_error_views() {
        let out = parse_json("2*Re(w) + |z1|^2");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["result"]["form"], "Model");
        assert_eq!(v["result"]["terms"].as_array().unwrap().len(), 3);
        let v: Value = serde_json::from_str(&parse_json("2*Re(w) + |z1|^")).unwrap();
        assert_eq!(v["error"]["kind"], "syntax");
        assert_eq!(v["error"]["position"], 15);
        assert_eq!(parse_json("z1 + z1_bar"), parse_json("z1 + z1_bar"));
    }
}
