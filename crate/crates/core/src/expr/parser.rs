//! Recursive-descent parser for defining-function expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' posint)*
//! atom   := number | 'i' | var | 'conj(' expr ')' | 'Re(' expr ')' | 'Im(' expr ')'
//!         | '|' expr '|' '^' even-int | '(' expr ')'
//! var    := 'z' index | 'w'
//! ```

use num_traits::ToPrimitive;

use super::lexer::{Spanned, Tok};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Poly;

/// Hard cap on exponents and expansion degree when no truncation is configured.
pub const DEFAULT_DEGREE_CAP: u32 = 256;

pub struct Parser<'a> {
    toks: &'a [Spanned],
    at: usize,
    nvars: usize,
    /// index of `w` in the variable list, if present
    w_index: Option<usize>,
    degree_cap: u32,
    t_var: bool,
}

fn syntax(pos: usize, expected: &[&str], found: &Tok) -> Error {
    Error::Syntax {
        pos,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.describe(),
    }
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Spanned], nvars: usize, w_index: Option<usize>, degree_cap: u32) -> Self {
        Self {
            toks,
            at: 0,
            nvars,
            w_index,
            degree_cap,
            t_var: false,
        }
    }

    /// Parser for univariate expressions in the curve parameter `t`.
    pub fn for_curve(toks: &'a [Spanned], degree_cap: u32) -> Self {
        Self {
            toks,
            at: 0,
            nvars: 1,
            w_index: None,
            degree_cap,
            t_var: true,
        }
    }

    pub fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    pub fn peek_pos(&self) -> usize {
        self.peek().pos
    }

    pub fn advance(&mut self) -> Spanned {
        self.bump()
    }

    pub fn expect_tok(&mut self, tok: Tok, name: &str) -> Result<Spanned> {
        self.expect(tok, name)
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.at].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Spanned> {
        let t = self.peek().clone();
        if t.tok == tok {
            Ok(self.bump())
        } else {
            Err(syntax(t.pos, &[name], &t.tok))
        }
    }

    pub fn parse_all(&mut self) -> Result<Poly> {
        let p = self.expr()?;
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(syntax(t.pos, &["operator", "end of input"], &t.tok));
        }
        Ok(p)
    }

    fn check_degree(&self, p: &Poly) -> Result<()> {
        if let Some(d) = p.max_degree() {
            if d > self.degree_cap {
                return Err(Error::DegreeOverflow {
                    degree: d,
                    limit: self.degree_cap,
                });
            }
        }
        Ok(())
    }

    pub fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.nvars);
        let mut sign = match self.peek().tok {
            Tok::Plus => {
                self.bump();
                1
            }
            Tok::Minus => {
                self.bump();
                -1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 {
                acc.add(&t)?
            } else {
                acc.sub(&t)?
            };
            sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
            self.check_degree(&acc)?;
        }
        Ok(acc)
    }

    fn posint(&mut self) -> Result<(u32, usize)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Num(r) if r.is_integer() => {
                let v = r.to_integer().to_u32().filter(|&v| v >= 1);
                match v {
                    Some(v) if v <= self.degree_cap => {
                        self.bump();
                        Ok((v, t.pos))
                    }
                    _ => Err(syntax(t.pos, &["positive integer exponent"], &t.tok)),
                }
            }
            _ => Err(syntax(t.pos, &["positive integer exponent"], &t.tok)),
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let mut base = self.atom()?;
        while self.peek().tok == Tok::Caret {
            self.bump();
            let (k, _) = self.posint()?;
            if let Some(d) = base.max_degree() {
                if d.saturating_mul(k) > self.degree_cap {
                    return Err(Error::DegreeOverflow {
                        degree: d.saturating_mul(k),
                        limit: self.degree_cap,
                    });
                }
            }
            base = base.pow(k);
            self.check_degree(&base)?;
        }
        Ok(base)
    }

    fn paren_call(&mut self) -> Result<Poly> {
        self.expect(Tok::LParen, "'('")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Poly> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(r) => {
                self.bump();
                Ok(Poly::constant(self.nvars, GaussianRational::from_rational(r)))
            }
            Tok::I => {
                self.bump();
                Ok(Poly::constant(self.nvars, GaussianRational::i()))
            }
            Tok::Z(k) if !self.t_var && k <= self.nvars => {
                self.bump();
                Ok(Poly::var(self.nvars, k - 1))
            }
            Tok::T if self.t_var => {
                self.bump();
                Ok(Poly::var(1, 0))
            }
            Tok::W if self.w_index.is_some() => {
                self.bump();
                Ok(Poly::var(self.nvars, self.w_index.expect("checked")))
            }
            Tok::Conj => {
                self.bump();
                Ok(self.paren_call()?.conj())
            }
            Tok::Re => {
                self.bump();
                Ok(self.paren_call()?.real_part())
            }
            Tok::Im => {
                self.bump();
                Ok(self.paren_call()?.imag_part())
            }
            Tok::LParen => self.paren_call(),
            Tok::Pipe => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::Pipe, "'|'")?;
                self.expect(Tok::Caret, "'^'")?;
                let et = self.peek().clone();
                let (k, _) = self.posint()?;
                if k % 2 != 0 {
                    return Err(syntax(et.pos, &["even exponent"], &et.tok));
                }
                let sq = inner.mul(&inner.conj())?;
                self.check_degree(&sq)?;
                if let Some(d) = sq.max_degree() {
                    if d.saturating_mul(k / 2) > self.degree_cap {
                        return Err(Error::DegreeOverflow {
                            degree: d.saturating_mul(k / 2),
                            limit: self.degree_cap,
                        });
                    }
                }
                Ok(if k == 2 { sq } else { sq.pow(k / 2) })
            }
            _ => Err(syntax(
                t.pos,
                &["number", "variable", "'Re'", "'Im'", "'conj'", "'('", "'|'"],
                &t.tok,
            )),
        }
    }
}
