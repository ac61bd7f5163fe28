//! Dense linear algebra over `F_p`: row reduction, kernels, and subspace
//! arithmetic. Vectors are `Vec<u32>` of a fixed length; subspaces are kept
//! as reduced row-echelon bases.

use crate::field::Field;

/// A dense matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u32>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<u32>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols));
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i][j] = v;
    }

    /// `self · x` for a column vector `x`.
    pub fn apply(&self, f: Field, x: &[u32]) -> Vec<u32> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, f: Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] = f.add(out.data[i][j], f.mul(a, other.data[k][j]));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn rank(&self, f: Field) -> usize {
        rref(f, self.data.clone(), self.cols).0.len()
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn kernel(&self, f: Field) -> Vec<Vec<u32>> {
        let (basis, pivots) = rref(f, self.data.clone(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0; self.cols];
                x[fc] = 1;
                for (row, &pc) in basis.iter().zip(&pivots) {
                    x[pc] = f.neg(row[fc]);
                }
                x
            })
            .collect()
    }

    /// Basis of the column space (the image of `x ↦ self · x`).
    pub fn image(&self, f: Field) -> Subspace {
        Subspace::span(f, self.rows, self.transpose().data)
    }
}

/// Reduced row-echelon form of the given rows; returns the nonzero rows
/// and their pivot columns.
pub fn rref(f: Field, mut rows: Vec<Vec<u32>>, cols: usize) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..cols {
                    let v = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace of `F_p^n` in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            basis: vec![],
            pivots: vec![],
        }
    }

    pub fn full(n: usize) -> Self {
        Self::coordinate(n, 0..n)
    }

    pub fn span(f: Field, n: usize, vectors: Vec<Vec<u32>>) -> Self {
        let (basis, pivots) = rref(f, vectors, n);
        Subspace { n, basis, pivots }
    }

    /// Coordinate subspace spanned by the given unit vectors.
    pub fn coordinate(n: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let mut c: Vec<usize> = coords.into_iter().collect();
        c.sort_unstable();
        c.dedup();
        let basis = c
            .iter()
            .map(|&i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            n,
            basis,
            pivots: c,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, f: Field, v: &[u32]) -> Vec<u32> {
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                for j in 0..self.n {
                    let x = f.mul(c, row[j]);
                    out[j] = f.sub(out[j], x);
                }
            }
        }
        out
    }

    pub fn contains(&self, f: Field, v: &[u32]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, f: Field, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn sum(&self, f: Field, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(f, self.n, v)
    }

    pub fn intersect(&self, f: Field, other: &Subspace) -> Subspace {
        // x = Σ a_k u_k = Σ b_l v_l  ⟺  (a, -b) in the kernel of [U^T | V^T]
        let a = self.dim();
        let b = other.dim();
        if a == 0 || b == 0 {
            return Subspace::zero(self.n);
        }
        let mut m = Matrix::zero(self.n, a + b);
        for (k, u) in self.basis.iter().enumerate() {
            for i in 0..self.n {
                m.data[i][k] = u[i];
            }
        }
        for (l, v) in other.basis.iter().enumerate() {
            for i in 0..self.n {
                m.data[i][a + l] = f.neg(v[i]);
            }
        }
        let vecs = m
            .kernel(f)
            .into_iter()
            .map(|x| {
                let mut out = vec![0; self.n];
                for (k, u) in self.basis.iter().enumerate() {
                    for i in 0..self.n {
                        out[i] = f.add(out[i], f.mul(x[k], u[i]));
                    }
                }
                out
            })
            .collect();
        Self::span(f, self.n, vecs)
    }

    /// `{x ∈ self : m·x ∈ target}`.
    pub fn preimage(&self, f: Field, m: &Matrix, target: &Subspace) -> Subspace {
        if self.dim() == 0 {
            return self.clone();
        }
        // columns: reduced images of the basis vectors modulo target
        let imgs: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|u| target.reduce(f, &m.apply(f, u)))
            .collect();
        let coeffs = Matrix::from_rows(self.dim(), Matrix::from_rows(m.rows, imgs).transpose().data);
        let vecs = coeffs
            .kernel(f)
            .into_iter()
            .map(|x| combine(f, &self.basis, &x, self.n))
            .collect();
        Self::span(f, self.n, vecs)
    }

    /// Image under `m`.
    pub fn image(&self, f: Field, m: &Matrix) -> Subspace {
        Self::span(f, m.rows, self.basis.iter().map(|u| m.apply(f, u)).collect())
    }
}

fn combine(f: Field, basis: &[Vec<u32>], coeffs: &[u32], n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for (u, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for i in 0..n {
            out[i] = f.add(out[i], f.mul(c, u[i]));
        }
    }
    out
}

/// The quotient `num / den` (with `den ⊆ num`), with a basis of lifts.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub num: Subspace,
    pub den: Subspace,
    /// Representatives in `num` of a basis of the quotient.
    pub lifts: Vec<Vec<u32>>,
}

impl Quotient {
    pub fn new(f: Field, num: &Subspace, den: &Subspace) -> Self {
        let mut acc = den.clone();
        let mut lifts = Vec::new();
        for v in &num.basis {
            if !acc.contains(f, v) {
                lifts.push(v.clone());
                acc = acc.sum(f, &Subspace::span(f, num.n, vec![v.clone()]));
            }
        }
        Quotient {
            num: num.clone(),
            den: den.clone(),
            lifts,
        }
    }

    pub fn dim(&self) -> usize {
        self.lifts.len()
    }

    /// Coordinates of the class of `x ∈ num` in the lift basis.
    pub fn coords(&self, f: Field, x: &[u32]) -> Vec<u32> {
        let n = self.num.n;
        let k = self.lifts.len();
        let d = self.den.dim();
        // solve x = Σ a_k lift_k + Σ b_l den_l
        let mut m = Matrix::zero(n, k + d);
        for (j, v) in self.lifts.iter().chain(&self.den.basis).enumerate() {
            for i in 0..n {
                m.data[i][j] = v[i];
            }
        }
        let sol = solve(f, &m, x).expect("element lies outside the numerator");
        sol[..k].to_vec()
    }
}

/// Some solution of `m · x = b`, if one exists.
pub fn solve(f: Field, m: &Matrix, b: &[u32]) -> Option<Vec<u32>> {
    let mut aug: Vec<Vec<u32>> = m
        .data
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![0; m.cols]);
    }
    let (rows, pivots) = rref(f, std::mem::take(&mut aug), m.cols + 1);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0; m.cols];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[m.cols];
    }
    Some(x)
}
