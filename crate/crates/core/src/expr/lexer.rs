use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gaussian::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(Rational),
    I,
    /// `z<k>` with `k >= 1`
    Z(usize),
    W,
    /// `t`, only in curve syntax
    T,
    Re,
    Im,
    Conj,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Pipe,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Num(r) => format!("number {r}"),
            Tok::I => "'i'".into(),
            Tok::Z(k) => format!("variable z{k}"),
            Tok::W => "variable w".into(),
            Tok::T => "parameter t".into(),
            Tok::Re => "'Re'".into(),
            Tok::Im => "'Im'".into(),
            Tok::Conj => "'conj'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

fn syntax(pos: usize, expected: &[&str], found: String) -> Error {
    Error::Syntax {
        pos,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

/// Tokenizes `src[start..]`; positions are byte offsets into `src`.
pub fn lex(src: &str, start: usize, allow_t: bool) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'|' => Some(Tok::Pipe),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, pos });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let num: BigInt = src[i..j].parse().expect("digits");
            // `p/q` with no spaces is a single rational literal
            if j + 1 < bytes.len() && bytes[j] == b'/' && bytes[j + 1].is_ascii_digit() {
                let mut k = j + 1;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let den: BigInt = src[j + 1..k].parse().expect("digits");
                if den == BigInt::from(0) {
                    return Err(syntax(j + 1, &["nonzero denominator"], "0".into()));
                }
                out.push(Spanned {
                    tok: Tok::Num(Rational::new(num, den)),
                    pos,
                });
                i = k;
            } else {
                out.push(Spanned {
                    tok: Tok::Num(Rational::from_integer(num)),
                    pos,
                });
                i = j;
            }
            continue;
        }
        if b.is_ascii_alphabetic() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                j += 1;
            }
            let word = &src[i..j];
            let tok = match word {
                "i" => Tok::I,
                "w" => Tok::W,
                "t" if allow_t => Tok::T,
                "Re" => Tok::Re,
                "Im" => Tok::Im,
                "conj" => Tok::Conj,
                _ => {
                    if let Some(idx) = word.strip_prefix('z') {
                        match idx.parse::<usize>() {
                            Ok(k) if k >= 1 && !idx.starts_with('0') => Tok::Z(k),
                            _ => {
                                return Err(syntax(
                                    pos,
                                    &["variable z<k> with k >= 1"],
                                    format!("'{word}'"),
                                ))
                            }
                        }
                    } else {
                        return Err(syntax(
                            pos,
                            &["number", "variable", "'Re'", "'Im'", "'conj'", "'i'"],
                            format!("'{word}'"),
                        ));
                    }
                }
            };
            out.push(Spanned { tok, pos });
            i = j;
            continue;
        }
        let ch = src[i..].chars().next().expect("in bounds");
        return Err(syntax(
            pos,
            &["number", "variable", "operator", "'('", "'|'"],
            format!("'{ch}'"),
        ));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        pos: bytes.len(),
    });
    Ok(out)
}
