//! Sparse elements of free modules `A^n` over an [`Algebra`].
//!
//! A [`Vector`] stores its terms sorted decreasingly for a [`ModuleOrder`]
//! that the caller keeps alongside it. Rank-one vectors at position 0 double
//! as polynomials / operators.

use crate::algebra::Algebra;
use crate::field::Field;
use crate::monomial::{ModuleOrder, Monomial};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub m: Monomial,
    pub pos: u32,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn unit(nvars: usize, pos: usize) -> Self {
        Vector {
            terms: vec![Term {
                m: Monomial::one(nvars),
                pos: pos as u32,
                c: 1,
            }],
        }
    }

    pub fn monomial(m: Monomial, pos: usize, c: u32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Vector {
            terms: vec![Term {
                m,
                pos: pos as u32,
                c,
            }],
        }
    }

    /// Sorts and merges arbitrary terms.
    pub fn from_terms(mut terms: Vec<Term>, f: Field, ord: &ModuleOrder) -> Self {
        terms.sort_by(|a, b| ord.compare(&b.m, b.pos, &a.m, a.pos));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.pos == t.pos && last.m == t.m {
                    last.c = f.add(last.c, t.c);
                    if last.c == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if t.c != 0 {
                out.push(t);
            }
        }
        Vector { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Re-sorts for another order.
    pub fn resort(&self, f: Field, ord: &ModuleOrder) -> Self {
        Self::from_terms(self.terms.clone(), f, ord)
    }

    /// Highest weighted degree of a term (`None` for the zero vector).
    pub fn weight(&self, w: &[u32], pos_deg: &[i64]) -> Option<i64> {
        self.terms
            .iter()
            .map(|t| t.m.weighted_degree(w) + pos_deg.get(t.pos as usize).copied().unwrap_or(0))
            .max()
    }

    /// Terms of maximal weighted degree.
    pub fn top_part(&self, w: &[u32], pos_deg: &[i64]) -> Vector {
        match self.weight(w, pos_deg) {
            None => Vector::zero(),
            Some(top) => Vector {
                terms: self
                    .terms
                    .iter()
                    .filter(|t| {
                        t.m.weighted_degree(w) + pos_deg.get(t.pos as usize).copied().unwrap_or(0)
                            == top
                    })
                    .cloned()
                    .collect(),
            },
        }
    }

    pub fn max_pos(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.pos).max()
    }

    pub fn scale(&self, f: Field, c: u32) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    m: t.m.clone(),
                    pos: t.pos,
                    c: f.mul(t.c, c),
                })
                .collect(),
        }
    }

    pub fn make_monic(&mut self, f: Field) {
        if let Some(l) = self.terms.first() {
            if l.c != 1 {
                let inv = f.inv(l.c);
                for t in &mut self.terms {
                    t.c = f.mul(t.c, inv);
                }
            }
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Vector, c: u32, f: Field, ord: &ModuleOrder) -> Vector {
        if c == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match ord.compare(&a[i].m, a[i].pos, &b[j].m, b[j].pos) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        m: b[j].m.clone(),
                        pos: b[j].pos,
                        c: f.mul(b[j].c, c),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a[i].c, f.mul(b[j].c, c));
                    if s != 0 {
                        out.push(Term {
                            m: a[i].m.clone(),
                            pos: a[i].pos,
                            c: s,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            out.push(Term {
                m: t.m.clone(),
                pos: t.pos,
                c: f.mul(t.c, c),
            });
        }
        Vector { terms: out }
    }

    pub fn add(&self, other: &Vector, f: Field, ord: &ModuleOrder) -> Vector {
        self.add_scaled(other, 1, f, ord)
    }

    pub fn sub(&self, other: &Vector, f: Field, ord: &ModuleOrder) -> Vector {
        self.add_scaled(other, f.p() - 1, f, ord)
    }

    /// `c·m ⋆ self` (left multiplication by a term).
    pub fn left_mul_term(&self, alg: &Algebra, c: u32, m: &Monomial, ord: &ModuleOrder) -> Vector {
        let f = alg.field;
        if c == 0 {
            return Vector::zero();
        }
        if alg.is_commutative() {
            // multiplication by a monomial preserves the order
            return Vector {
                terms: self
                    .terms
                    .iter()
                    .map(|t| Term {
                        m: m.mul(&t.m),
                        pos: t.pos,
                        c: f.mul(c, t.c),
                    })
                    .collect(),
            };
        }
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            for (pm, pc) in alg.mul_monomials(m, &t.m) {
                terms.push(Term {
                    m: pm,
                    pos: t.pos,
                    c: f.mul(f.mul(c, pc), t.c),
                });
            }
        }
        Vector::from_terms(terms, f, ord)
    }

    /// `p ⋆ self` for a rank-one vector `p` (its positions are ignored).
    pub fn left_mul(&self, alg: &Algebra, p: &Vector, ord: &ModuleOrder) -> Vector {
        let mut acc = Vector::zero();
        for t in &p.terms {
            let prod = self.left_mul_term(alg, t.c, &t.m, ord);
            acc = acc.add(&prod, alg.field, ord);
        }
        acc
    }

    /// `self ⋆ p` where `p` is rank one (right multiplication of every entry).
    pub fn right_mul(&self, alg: &Algebra, p: &Vector, ord: &ModuleOrder) -> Vector {
        let f = alg.field;
        let mut terms = Vec::new();
        for t in &self.terms {
            for s in &p.terms {
                for (pm, pc) in alg.mul_monomials(&t.m, &s.m) {
                    terms.push(Term {
                        m: pm,
                        pos: t.pos,
                        c: f.mul(f.mul(t.c, s.c), pc),
                    });
                }
            }
        }
        Vector::from_terms(terms, f, ord)
    }

    /// Entry at `pos`, as a rank-one vector at position 0.
    pub fn component(&self, pos: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| t.pos as usize == pos)
                .map(|t| Term {
                    m: t.m.clone(),
                    pos: 0,
                    c: t.c,
                })
                .collect(),
        }
    }

    /// Relabels positions; the caller supplies the order for re-sorting.
    pub fn map_positions(&self, f: Field, ord: &ModuleOrder, map: impl Fn(u32) -> u32) -> Vector {
        Vector::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    m: t.m.clone(),
                    pos: map(t.pos),
                    c: t.c,
                })
                .collect(),
            f,
            ord,
        )
    }

    /// Builds a vector from rank-one entries placed at consecutive positions.
    pub fn from_entries(entries: &[Vector], f: Field, ord: &ModuleOrder) -> Vector {
        let mut terms = Vec::new();
        for (j, e) in entries.iter().enumerate() {
            for t in &e.terms {
                terms.push(Term {
                    m: t.m.clone(),
                    pos: j as u32,
                    c: t.c,
                });
            }
        }
        Vector::from_terms(terms, f, ord)
    }

    /// Applies the anti-involution of the algebra entrywise.
    pub fn anti_involution(&self, alg: &Algebra, ord: &ModuleOrder) -> Vector {
        let f = alg.field;
        let mut terms = Vec::new();
        for t in &self.terms {
            for (m, c) in alg.anti_involution_term(&t.m) {
                terms.push(Term {
                    m,
                    pos: t.pos,
                    c: f.mul(c, t.c),
                });
            }
        }
        Vector::from_terms(terms, f, ord)
    }
}

/// Image of `v = Σ c·m e_j` under the left-linear map `e_j ↦ images[j]`.
pub fn apply_map(
    alg: &Algebra,
    v: &Vector,
    images: &[Vector],
    target_ord: &ModuleOrder,
) -> Vector {
    let mut acc = Vector::zero();
    for t in &v.terms {
        let img = &images[t.pos as usize];
        let prod = img.left_mul_term(alg, t.c, &t.m, target_ord);
        acc = acc.add(&prod, alg.field, target_ord);
    }
    acc
}
