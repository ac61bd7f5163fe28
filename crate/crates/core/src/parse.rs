//! Expression parser shared by polynomials and operators.
//!
//! Grammar: sums and differences of products of factors, where a factor is
//! an integer, a variable name or a parenthesised expression, optionally
//! raised to a non-negative integer power. Products are evaluated in the
//! given algebra, so `d1*t1` yields `t1*d1 + 1` in the Weyl algebra.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::monomial::{ModuleOrder, Monomial};
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((col, Tok::Num(chars[s..i].iter().collect())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[s..i].iter().collect())));
        } else if "+-*^()".contains(c) {
            out.push((col, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    alg: &'a Algebra,
    ord: &'a ModuleOrder,
    resolve: &'a dyn Fn(&str) -> Option<Vector>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn constant(&self, c: u32) -> Vector {
        Vector::monomial(Monomial::one(self.alg.nvars()), 0, c)
    }

    fn expr(&mut self) -> Result<Vector> {
        let f = self.alg.field;
        let mut neg = false;
        match self.peek() {
            Some(Tok::Sym('-')) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Sym('+')) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.product()?;
        if neg {
            acc = acc.scale(f, f.p() - 1);
        }
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.add(&t, f, self.ord);
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.sub(&t, f, self.ord);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Vector> {
        let mut acc = self.power()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.right_mul(self.alg, &rhs, self.ord);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Vector> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(s)) => match s.parse::<u32>() {
                    Ok(e) if e <= 1000 => e,
                    _ => return self.err("exponent out of range"),
                },
                _ => return self.err("expected an integer exponent"),
            };
            self.pos += 1;
            let mut acc = self.constant(1);
            for _ in 0..e {
                acc = acc.right_mul(self.alg, &base, self.ord);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Vector> {
        let f = self.alg.field;
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let mut c = 0u32;
                for ch in s.chars() {
                    c = f.add(f.mul(c, f.from_u64(10)), ch.to_digit(10).unwrap());
                }
                Ok(self.constant(c))
            }
            Some(Tok::Ident(name)) => match (self.resolve)(&name) {
                Some(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                None => self.err(format!("undeclared variable `{name}`")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `text` into a rank-one vector of `alg`. `resolve` maps a variable
/// name to its value (which may itself be a product, e.g. a log derivation).
pub fn parse_expr(
    text: &str,
    alg: &Algebra,
    ord: &ModuleOrder,
    resolve: &dyn Fn(&str) -> Option<Vector>,
) -> Result<Vector> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
        alg,
        ord,
        resolve,
    };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::monomial::MonomialOrder;

    #[test]
    fn error_columns() {
        let alg = Algebra::commutative(Field::new(5).unwrap(), 1);
        let ord = ModuleOrder::ideal(MonomialOrder::DegRevLex);
        let res = |s: &str| (s == "x").then(|| Vector::monomial(Monomial::var(1, 0), 0, 1));
        match parse_expr("x + y", &alg, &ord, &res) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        match parse_expr("x +", &alg, &ord, &res) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("x $", &alg, &ord, &res).is_err());
        assert!(parse_expr("(x", &alg, &ord, &res).is_err());
    }
}
