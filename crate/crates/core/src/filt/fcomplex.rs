//! Finite cochain complexes of `F_p`-vector spaces with increasing
//! filtrations, and the comparison between `gr_i H^r` and `H^r(gr_i K)`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Quotient, Subspace};

/// `K^0 → K^1 → … → K^n`. Basis vector `e` of `K^r` lies in `F_i K^r` iff
/// `levels[r][e] ≤ i`.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub field: Field,
    pub dims: Vec<usize>,
    /// `diffs[r]` is the matrix of `d^r: K^r → K^{r+1}`.
    pub diffs: Vec<Matrix>,
    pub levels: Vec<Vec<i64>>,
}

impl FilteredComplex {
    pub fn new(field: Field, diffs: Vec<Matrix>, levels: Vec<Vec<i64>>) -> Result<Self> {
        let dims: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} differentials for {} terms",
                diffs.len(),
                dims.len()
            )));
        }
        for (r, d) in diffs.iter().enumerate() {
            if d.cols != dims[r] || d.rows != dims[r + 1] {
                return Err(Error::DimensionMismatch(format!("d^{r} has the wrong shape")));
            }
            for k in 0..d.rows {
                for j in 0..d.cols {
                    if d.get(k, j) != 0 && levels[r + 1][k] > levels[r][j] {
                        return Err(Error::Precondition(format!(
                            "d^{r} does not preserve the filtration"
                        )));
                    }
                }
            }
        }
        for r in 1..diffs.len() {
            if !diffs[r].mul(field, &diffs[r - 1]).is_zero() {
                return Err(Error::Precondition(format!("d^{r} ∘ d^{} ≠ 0", r - 1)));
            }
        }
        Ok(FilteredComplex {
            field,
            dims,
            diffs,
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn piece(&self, r: usize, i: i64) -> Subspace {
        let lv = &self.levels[r];
        Subspace::coordinate(self.dims[r], (0..lv.len()).filter(|&e| lv[e] <= i))
    }

    fn d(&self, r: usize) -> Matrix {
        match self.diffs.get(r) {
            Some(m) => m.clone(),
            None => Matrix::zero(0, self.dims[r]),
        }
    }

    /// `F_i K^{r+1}`, or zero past the end.
    fn next_piece(&self, r: usize, i: i64) -> Subspace {
        if r + 1 < self.len() {
            self.piece(r + 1, i)
        } else {
            Subspace::zero(0)
        }
    }
}

/// The two graded groups and the intermediate space
/// `L = (ker d ∩ F_i) / (d(F_i K^{r-1}) + ker d ∩ F_{i-1})`.
#[derive(Debug, Clone)]
pub struct SubquotientWitness {
    pub gr_h: Quotient,
    pub h_gr: Quotient,
    pub l: Quotient,
    /// `L → H^r(gr_i K)` in the lift bases.
    pub mono: Matrix,
    /// `L → gr_i H^r` in the lift bases.
    pub epi: Matrix,
    pub mono_injective: bool,
    pub epi_surjective: bool,
}

impl SubquotientWitness {
    pub fn certifies(&self) -> bool {
        self.mono_injective && self.epi_surjective
    }
}

pub fn filtered_complex_homology(k: &FilteredComplex, r: usize, i: i64) -> Result<SubquotientWitness> {
    if r >= k.len() {
        return Err(Error::DimensionMismatch(format!("no term K^{r}")));
    }
    let f = k.field;
    let n = k.dims[r];
    let d = k.d(r);
    let full = Subspace::full(n);
    let fi = k.piece(r, i);
    let fi1 = k.piece(r, i - 1);
    let z = full.preimage(f, &d, &Subspace::zero(d.rows));
    let (b, dfi) = if r == 0 {
        (Subspace::zero(n), Subspace::zero(n))
    } else {
        let prev = &k.diffs[r - 1];
        (prev.image(f), k.piece(r - 1, i).image(f, prev))
    };
    let zi = z.intersect(f, &fi);
    let zi1 = z.intersect(f, &fi1);
    let y = fi.preimage(f, &d, &k.next_piece(r, i - 1));

    let gr_h = Quotient::new(f, &zi.sum(f, &b), &zi1.sum(f, &b));
    let h_gr = Quotient::new(f, &y, &dfi.sum(f, &fi1));
    let l = Quotient::new(f, &zi, &dfi.sum(f, &zi1));

    let column_matrix = |q: &Quotient| {
        let cols: Vec<Vec<u32>> = l.lifts.iter().map(|x| q.coords(f, x)).collect();
        Matrix::from_rows(l.dim(), Matrix::from_rows(q.dim(), cols).transpose().data)
    };
    let mono = column_matrix(&h_gr);
    let epi = column_matrix(&gr_h);
    let mono_injective = mono.rank(f) == l.dim();
    let epi_surjective = epi.rank(f) == gr_h.dim();
    Ok(SubquotientWitness {
        gr_h,
        h_gr,
        l,
        mono,
        epi,
        mono_injective,
        epi_surjective,
    })
}
