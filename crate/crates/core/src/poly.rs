//! Commutative polynomial rings with named variables and their text syntax.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{ModuleOrder, Monomial, MonomialOrder};
use crate::parse;
use crate::vector::{Term, Vector};
use std::fmt;
use std::sync::Arc;

/// Ring context: coefficient field, variable names and monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: Field,
    pub names: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Field, names: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing {
            field,
            names,
            order,
        })
    }

    /// `k[t1..td, xi1..xid]` with the cotangent weighted order.
    pub fn cotangent(field: Field, d: usize) -> Arc<Self> {
        Self::new(field, cotangent_names(d), MonomialOrder::cotangent(d))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn algebra(&self) -> Algebra {
        Algebra::commutative(self.field, self.nvars())
    }

    pub fn ideal_order(&self) -> ModuleOrder {
        ModuleOrder::ideal(self.order.clone())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same ring under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Self::new(self.field, self.names.clone(), order)
    }

    /// Grading weights used for homogeneity (all ones for lex/degrevlex).
    pub fn weights(&self) -> Vec<u32> {
        self.order
            .weights(self.nvars())
            .unwrap_or_else(|| vec![1; self.nvars()])
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial> {
        let alg = self.algebra();
        let ord = self.ideal_order();
        let n = self.nvars();
        let v = parse::parse_expr(text, &alg, &ord, &|name| {
            self.var_index(name).map(|i| Vector::monomial(Monomial::var(n, i), 0, 1))
        })?;
        Ok(Polynomial {
            ring: self.clone(),
            v,
        })
    }
}

pub fn cotangent_names(d: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=d).map(|i| format!("t{i}")).collect();
    names.extend((1..=d).map(|i| format!("xi{i}")));
    names
}

/// An exact polynomial; terms are kept sorted decreasingly for the ring's
/// order.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub ring: Arc<PolyRing>,
    pub v: Vector,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.v == other.v
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            v: Vector::zero(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        Polynomial {
            ring: ring.clone(),
            v: Vector::monomial(Monomial::one(ring.nvars()), 0, c),
        }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            v: Vector::monomial(Monomial::var(ring.nvars(), i), 0, 1),
        }
    }

    /// Builds from `(coefficient, exponents)` pairs.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: &[(i64, Vec<u32>)]) -> Self {
        let f = ring.field;
        let v = Vector::from_terms(
            terms
                .iter()
                .map(|(c, e)| Term {
                    m: Monomial::from_exponents(e),
                    pos: 0,
                    c: f.from_i64(*c),
                })
                .collect(),
            f,
            &ring.ideal_order(),
        );
        Polynomial {
            ring: ring.clone(),
            v,
        }
    }

    /// Wraps a rank-one vector, re-sorting for the ring's order.
    pub fn from_vector(ring: &Arc<PolyRing>, v: &Vector) -> Self {
        let v = v.map_positions(ring.field, &ring.ideal_order(), |_| 0);
        Polynomial {
            ring: ring.clone(),
            v,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.v.terms.iter().map(|t| (&t.m, t.c))
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.v.lead().map(|t| &t.m)
    }

    pub fn is_monomial(&self) -> bool {
        self.v.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.v.terms.iter().all(|t| t.m.is_one())
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if *self.ring != *other.ring {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ring.names, other.ring.names
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            v: self.v.add(&other.v, self.ring.field, &self.ring.ideal_order()),
        })
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            v: self.v.sub(&other.v, self.ring.field, &self.ring.ideal_order()),
        })
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            v: other
                .v
                .left_mul(&self.ring.algebra(), &self.v, &self.ring.ideal_order()),
        })
    }

    pub fn scale(&self, c: i64) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            v: self.v.scale(self.ring.field, self.ring.field.from_i64(c)),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::constant(&self.ring, 1);
        for _ in 0..e {
            r = r.mul(self).expect("same ring");
        }
        r
    }

    /// Homogeneous for the ring's grading weights.
    pub fn is_homogeneous(&self) -> bool {
        let w = self.ring.weights();
        let mut it = self.v.terms.iter().map(|t| t.m.weighted_degree(&w));
        match it.next() {
            None => true,
            Some(d0) => it.all(|d| d == d0),
        }
    }

    /// Total degree (or `-1` for zero).
    pub fn degree(&self) -> i64 {
        self.v
            .terms
            .iter()
            .map(|t| t.m.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Evaluates at a point of `F_p^n`.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.ring.field;
        let mut acc = 0;
        for t in &self.v.terms {
            let mut x = t.c;
            for (e, &p) in t.m.exps().iter().zip(point) {
                x = f.mul(x, f.pow(p, *e as u64));
            }
            acc = f.add(acc, x);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.ring.field, &self.ring.names, &self.v))
    }
}

/// Renders a rank-one vector in the shared text syntax, e.g.
/// `3*t1^2*xi1 - 2`. Coefficients use the symmetric representative.
pub fn format_terms(field: Field, names: &[String], v: &Vector) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, t) in v.terms.iter().enumerate() {
        let c = field.symmetric(t.c);
        let (neg, a) = (c < 0, c.unsigned_abs());
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(names, &t.m);
        match (a, mono.is_empty()) {
            (_, true) => out.push_str(&a.to_string()),
            (1, false) => out.push_str(&mono),
            (_, false) => {
                out.push_str(&a.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

pub fn format_monomial(names: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::cotangent(Field::new(7).unwrap(), 1)
    }

    #[test]
    fn print_parse_roundtrip() {
        let r = ring();
        let p = r.parse("3*t1^2*xi1 - 2 + xi1").unwrap();
        assert_eq!(p.to_string(), "3*t1^2*xi1 + xi1 - 2");
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn symmetric_coefficients() {
        let r = ring();
        assert_eq!(r.parse("5*t1").unwrap().to_string(), "-2*t1");
        assert_eq!(r.parse("7*t1").unwrap().to_string(), "0");
    }

    #[test]
    fn context_mismatch() {
        let a = ring();
        let b = PolyRing::cotangent(Field::new(5).unwrap(), 1);
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&b, 0);
        assert!(matches!(x.add(&y), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn multiplication_and_homogeneity() {
        let r = ring();
        let p = r.parse("(t1*xi1 - 1)*(t1 + 2)").unwrap();
        assert_eq!(p, r.parse("t1^2*xi1 + 2*t1*xi1 - t1 - 2").unwrap());
        assert!(!p.is_homogeneous());
        assert!(r.parse("t1^3*xi1 + xi1").unwrap().is_homogeneous());
    }
}
