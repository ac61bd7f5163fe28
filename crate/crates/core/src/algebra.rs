//! The two coefficient algebras of the engine: commutative polynomial rings
//! and the level-0 Weyl algebra in normal form `t^a ∂^b`.

use crate::field::Field;
use crate::monomial::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Commutative { nvars: usize },
    /// Variables `t_1..t_d, ∂_1..∂_d` in that order.
    Weyl { d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Algebra {
    pub field: Field,
    pub kind: AlgebraKind,
}

impl Algebra {
    pub fn commutative(field: Field, nvars: usize) -> Self {
        Algebra {
            field,
            kind: AlgebraKind::Commutative { nvars },
        }
    }

    pub fn weyl(field: Field, d: usize) -> Self {
        Algebra {
            field,
            kind: AlgebraKind::Weyl { d },
        }
    }

    pub fn nvars(&self) -> usize {
        match self.kind {
            AlgebraKind::Commutative { nvars } => nvars,
            AlgebraKind::Weyl { d } => 2 * d,
        }
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.kind, AlgebraKind::Commutative { .. })
    }

    /// Normal-ordered product of two monomials, as `(monomial, coefficient)`
    /// pairs with nonzero coefficients. The first entry is always the
    /// leading term `a + b` with coefficient 1.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Vec<(Monomial, u32)> {
        match self.kind {
            AlgebraKind::Commutative { .. } => vec![(a.mul(b), 1)],
            AlgebraKind::Weyl { d } => weyl_product(self.field, d, a, b),
        }
    }

    /// The anti-involution `t ↦ t, ∂ ↦ -∂` applied to a single term.
    /// On commutative rings it is the identity.
    pub fn anti_involution_term(&self, m: &Monomial) -> Vec<(Monomial, u32)> {
        match self.kind {
            AlgebraKind::Commutative { .. } => vec![(m.clone(), 1)],
            AlgebraKind::Weyl { d } => {
                let mut dpart = Monomial::one(2 * d);
                let mut tpart = Monomial::one(2 * d);
                let mut order = 0u64;
                for i in 0..d {
                    tpart.0[i] = m.0[i];
                    dpart.0[d + i] = m.0[d + i];
                    order += m.0[d + i] as u64;
                }
                let sign = if order % 2 == 1 {
                    self.field.p() - 1
                } else {
                    1
                };
                weyl_product(self.field, d, &dpart, &tpart)
                    .into_iter()
                    .map(|(mm, c)| (mm, self.field.mul(c, sign)))
                    .collect()
            }
        }
    }
}

/// `t^a ∂^b · t^c ∂^e = Σ_k Π_i (b_i)_k (c_i)_k / k! · t^{a+c-k} ∂^{b+e-k}`.
fn weyl_product(f: Field, d: usize, x: &Monomial, y: &Monomial) -> Vec<(Monomial, u32)> {
    let p = f.p() as u64;
    // per coordinate, the list of (k, coefficient) with nonzero coefficient
    let mut per_coord: Vec<Vec<(u32, u32)>> = Vec::with_capacity(d);
    for i in 0..d {
        let b = x.0[d + i];
        let c = y.0[i];
        let kmax = b.min(c) as u64;
        let mut list = vec![(0u32, 1u32)];
        let mut fall_b = 1u32;
        let mut fall_c = 1u32;
        let mut fact = 1u32;
        for k in 1..=kmax {
            if k >= p {
                break;
            }
            fall_b = f.mul(fall_b, f.from_u64(b as u64 - k + 1));
            fall_c = f.mul(fall_c, f.from_u64(c as u64 - k + 1));
            fact = f.mul(fact, f.from_u64(k));
            let coef = f.mul(f.mul(fall_b, fall_c), f.inv(fact));
            if coef != 0 {
                list.push((k as u32, coef));
            }
        }
        per_coord.push(list);
    }
    let base = x.mul(y);
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let mut m = base.clone();
        let mut c = 1u32;
        for i in 0..d {
            let (k, ci) = per_coord[i][idx[i]];
            m.0[i] -= k;
            m.0[d + i] -= k;
            c = f.mul(c, ci);
        }
        if c != 0 {
            out.push((m, c));
        }
        // odometer
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            idx[i] += 1;
            if idx[i] < per_coord[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn leibniz_d_t() {
        let a = Algebra::weyl(Field::new(7).unwrap(), 1);
        let mut r = a.mul_monomials(&m(&[0, 1]), &m(&[1, 0]));
        r.sort();
        assert_eq!(r, vec![(m(&[0, 0]), 1), (m(&[1, 1]), 1)]);
    }

    #[test]
    fn d_squared_t_mod_2_loses_middle_term() {
        let a = Algebra::weyl(Field::new(2).unwrap(), 1);
        let r = a.mul_monomials(&m(&[0, 2]), &m(&[1, 0]));
        assert_eq!(r, vec![(m(&[1, 2]), 1)]);
        let a7 = Algebra::weyl(Field::new(7).unwrap(), 1);
        let mut r7 = a7.mul_monomials(&m(&[0, 2]), &m(&[1, 0]));
        r7.sort();
        assert_eq!(r7, vec![(m(&[0, 1]), 2), (m(&[1, 2]), 1)]);
    }

    #[test]
    fn anti_involution_of_d() {
        let a = Algebra::weyl(Field::new(5).unwrap(), 1);
        // τ(t∂) = -∂t = -t∂ - 1
        let mut r = a.anti_involution_term(&m(&[1, 1]));
        r.sort();
        assert_eq!(r, vec![(m(&[0, 0]), 4), (m(&[1, 1]), 4)]);
    }
}
