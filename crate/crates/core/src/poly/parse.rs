//! Text form of polynomials: explicit sums of monomials such as
//! `z - x*y` or `3/2*x^2*y - 1`. Printing is canonical (descending
//! graded-lex, coefficient 1 omitted) so `print(parse(s)) == s` holds for
//! canonical `s`. The parser also accepts parentheses and powers of
//! parenthesized expressions.

use num_traits::{One, Signed};

use super::{canonical_var_order, parse_rational, MultiPoly, PolyError, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].to_string())));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
            }
            _ => {
                return Err(PolyError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    vars: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.power()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = match n.parse() {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut lit = n;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            lit = format!("{lit}/{d}");
                        }
                        _ => return self.err("expected denominator"),
                    }
                }
                let q = parse_rational(&lit)?;
                Ok(MultiPoly::constant(self.vars, q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                MultiPoly::var(self.vars, &name)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            _ => self.err("expected number, variable or `(`"),
        }
    }
}

impl MultiPoly {
    /// Parses text, inferring the variable list from the names used
    /// (sorted under the global order).
    pub fn parse(s: &str) -> Result<MultiPoly, PolyError> {
        let toks = tokenize(s)?;
        let names: Vec<String> = toks
            .iter()
            .filter_map(|(_, t)| match t {
                Tok::Ident(n) => Some(n.clone()),
                _ => None,
            })
            .collect();
        let vars = canonical_var_order(&names);
        parse_tokens(&toks, &vars, s.len())
    }

    /// Parses text over an explicit variable list.
    pub fn parse_with_vars<S: AsRef<str>>(s: &str, vars: &[S]) -> Result<MultiPoly, PolyError> {
        let toks = tokenize(s)?;
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        parse_tokens(&toks, &vars, s.len())
    }
}

fn parse_tokens(
    toks: &[(usize, Tok)],
    vars: &[String],
    end: usize,
) -> Result<MultiPoly, PolyError> {
    if toks.is_empty() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        end,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

fn format_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(super) fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> =
            m.0.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        p.vars()[j].clone()
                    } else {
                        format!("{}^{}", p.vars()[j], e)
                    }
                })
                .collect();
        if factors.is_empty() {
            out.push_str(&format_coeff(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_coeff(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}
