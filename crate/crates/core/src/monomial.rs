//! Exponent vectors and the monomial orders used throughout the engine.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;

/// Exponent vector, one entry per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, w: &[u32]) -> i64 {
        self.0
            .iter()
            .zip(w)
            .map(|(&e, &wi)| e as i64 * wi as i64)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| b - a).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Monomial orders on a polynomial ring.
///
/// `Weighted(w)` compares `w·a` first and breaks ties with degrevlex. With
/// weight 0 on the `t` variables and 1 on the `ξ` (or `∂`) variables this is
/// the order compatible with the order filtration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    Weighted(Vec<u32>),
}

impl MonomialOrder {
    /// Weight 0 on the first `d` variables, 1 on the next `d`.
    pub fn cotangent(d: usize) -> Self {
        let mut w = vec![0; d];
        w.extend(std::iter::repeat_n(1, d));
        MonomialOrder::Weighted(w)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Weighted(w) => a
                .weighted_degree(w)
                .cmp(&b.weighted_degree(w))
                .then_with(|| degrevlex(a, b)),
        }
    }

    /// The grading used for "degree" by this order, if any.
    pub fn weights(&self, nvars: usize) -> Option<Vec<u32>> {
        match self {
            MonomialOrder::Lex => None,
            MonomialOrder::DegRevLex => Some(vec![1; nvars]),
            MonomialOrder::Weighted(w) => Some(w.clone()),
        }
    }

    /// The same order on a ring with one extra variable appended (weight 0
    /// for weighted orders; last, hence smallest, for lex).
    pub fn extended(&self) -> Self {
        match self {
            MonomialOrder::Weighted(w) => {
                let mut w = w.clone();
                w.push(0);
                MonomialOrder::Weighted(w)
            }
            o => o.clone(),
        }
    }
}

fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// An order on the monomials `x^a e_j` of a free module.
///
/// Comparison proceeds by: block (positions below `split` dominate),
/// position if `pot`, weighted degree including the per-position degree,
/// the monomial order's own tie-break, and finally position (lower index
/// dominates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: MonomialOrder,
    pub pos_degrees: Vec<i64>,
    pub split: Option<usize>,
    pub pot: bool,
}

impl ModuleOrder {
    /// Term-over-position order with a degree attached to each position.
    pub fn top(mono: MonomialOrder, pos_degrees: Vec<i64>) -> Self {
        ModuleOrder {
            mono,
            pos_degrees,
            split: None,
            pot: false,
        }
    }

    /// Order for ideals (rank one, degree 0).
    pub fn ideal(mono: MonomialOrder) -> Self {
        Self::top(mono, vec![0])
    }

    pub fn pot(mono: MonomialOrder, rank: usize) -> Self {
        ModuleOrder {
            mono,
            pos_degrees: vec![0; rank],
            split: None,
            pot: true,
        }
    }

    #[inline]
    fn pos_degree(&self, pos: u32) -> i64 {
        self.pos_degrees.get(pos as usize).copied().unwrap_or(0)
    }

    /// Weighted degree of a module monomial (`None` for lex orders).
    pub fn degree(&self, m: &Monomial, pos: u32) -> Option<i64> {
        self.mono
            .weights(m.nvars())
            .map(|w| m.weighted_degree(&w) + self.pos_degree(pos))
    }

    pub fn compare(&self, a: &Monomial, pa: u32, b: &Monomial, pb: u32) -> Ordering {
        if let Some(s) = self.split {
            let (ba, bb) = (pa as usize >= s, pb as usize >= s);
            if ba != bb {
                return if ba { Ordering::Less } else { Ordering::Greater };
            }
        }
        if self.pot && pa != pb {
            return pb.cmp(&pa);
        }
        let tie = match &self.mono {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => (a.degree() as i64 + self.pos_degree(pa))
                .cmp(&(b.degree() as i64 + self.pos_degree(pb)))
                .then_with(|| degrevlex(a, b)),
            MonomialOrder::Weighted(w) => (a.weighted_degree(w) + self.pos_degree(pa))
                .cmp(&(b.weighted_degree(w) + self.pos_degree(pb)))
                .then_with(|| degrevlex(a, b)),
        };
        tie.then_with(|| pb.cmp(&pa))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x
        assert_eq!(o.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[0, 2]), &m(&[1, 0])), Ordering::Greater);
        // x^2 z vs x y^2 in 3 vars: revlex looks at z first
        assert_eq!(o.compare(&m(&[2, 0, 1]), &m(&[1, 2, 0])), Ordering::Less);
    }

    #[test]
    fn cotangent_weights_dominate() {
        let o = MonomialOrder::cotangent(1);
        // xi beats any power of t
        assert_eq!(o.compare(&m(&[0, 1]), &m(&[9, 0])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_upper_positions() {
        let o = ModuleOrder {
            mono: MonomialOrder::DegRevLex,
            pos_degrees: vec![0, 0, 0],
            split: Some(1),
            pot: false,
        };
        assert_eq!(
            o.compare(&m(&[0]), 0, &m(&[5]), 2),
            Ordering::Greater
        );
    }
}
