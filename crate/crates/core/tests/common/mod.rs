//! Random generators and fixture modules shared by the integration tests.
#![allow(dead_code)]

use charvar_core::filt::{FilteredComplex, FilteredMorphism, FilteredRing, GoodFilteredModule};
use charvar_core::gb;
use charvar_core::linalg::Matrix;
use charvar_core::vector::{Term, Vector};
use charvar_core::weyl::{self, WeylPresentation};
use charvar_core::{Field, Monomial};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64) -> Field {
    Field::new(p).unwrap()
}

/// The two rings the filtered-module suites run over.
pub fn test_rings() -> Vec<(&'static str, FilteredRing)> {
    vec![
        ("weyl d=1 p=7", FilteredRing::order(field(7), 1)),
        ("k[x1,x2] p=5", FilteredRing::degree(field(5), 2)),
    ]
}

/// A monomial of weight at most `cap`; weight-0 variables get exponent ≤ 1.
pub fn random_monomial(rng: &mut Rng8, w: &[u32], cap: u32) -> Monomial {
    let mut e = vec![0u32; w.len()];
    let mut budget = rng.gen_range(0..=cap);
    for k in 0..w.len() {
        if w[k] == 0 {
            e[k] = rng.gen_range(0..=1);
        }
    }
    let graded: Vec<usize> = (0..w.len()).filter(|&k| w[k] > 0).collect();
    while budget > 0 && !graded.is_empty() {
        let k = *graded.choose(rng).unwrap();
        if w[k] > budget {
            break;
        }
        e[k] += 1;
        budget -= w[k];
    }
    Monomial::from_exponents(&e)
}

/// A vector in the free module with the given generator degrees whose
/// terms have filtration degree at most `deg_l + cap` in position `l`.
pub fn random_vector(rng: &mut Rng8, ring: &FilteredRing, rank: usize, cap: u32, terms: usize) -> Vector {
    let f = ring.field();
    let w = ring.weights();
    let ord = charvar_core::monomial::ModuleOrder::top(ring.mono(), vec![0; rank]);
    let ts: Vec<Term> = (0..terms)
        .map(|_| Term {
            m: random_monomial(rng, &w, cap),
            pos: rng.gen_range(0..rank) as u32,
            c: rng.gen_range(1..f.p()),
        })
        .collect();
    Vector::from_terms(ts, f, &ord)
}

pub fn random_module(rng: &mut Rng8, ring: &FilteredRing) -> GoodFilteredModule {
    let rank = rng.gen_range(1..=2);
    let shifts: Vec<i64> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
    let nrel = rng.gen_range(0..=2);
    let rels = (0..nrel)
        .map(|_| {
            let terms = rng.gen_range(1..=2);
            random_vector(rng, ring, rank, 2, terms)
        })
        .collect();
    GoodFilteredModule::new(ring.clone(), shifts, rels)
}

/// Kernel of `L_M → N`, `e_j ↦ images[j]`, for the given source degrees.
pub fn kernel_of(target: &GoodFilteredModule, images: &[Vector], degrees: &[i64]) -> Vec<Vector> {
    let ring = &target.ring;
    let alg = ring.algebra();
    let m = images.len();
    let rels = target.groebner().unwrap().to_vec();
    let mut gens = images.to_vec();
    let mut deg = degrees.to_vec();
    for r in &rels {
        deg.push(target.weight_of(r));
        gens.push(r.clone());
    }
    let sord = charvar_core::monomial::ModuleOrder::top(ring.mono(), degrees.to_vec());
    gb::kernel(&alg, &gens, target.rank(), &target.degrees(), &deg, &ring.mono())
        .unwrap()
        .into_iter()
        .map(|v| {
            Vector::from_terms(
                v.terms.into_iter().filter(|t| (t.pos as usize) < m).collect(),
                ring.field(),
                &sord,
            )
        })
        .filter(|v| !v.is_zero())
        .collect()
}

/// A random well-defined filtered morphism into `target`. Source relations
/// are a random part of the kernel, so the map may or may not be injective;
/// source degrees are the image degrees or one more.
pub fn random_into(rng: &mut Rng8, target: &GoodFilteredModule) -> FilteredMorphism {
    let ring = target.ring.clone();
    let m = rng.gen_range(1..=2);
    let tdeg = target.degrees();
    let lo = tdeg.iter().copied().min().unwrap_or(0);
    let mut images = Vec::with_capacity(m);
    let mut degrees = Vec::with_capacity(m);
    for _ in 0..m {
        let img = if target.rank() == 0 || rng.gen_bool(0.15) {
            Vector::zero()
        } else {
            let terms = rng.gen_range(1..=2);
            let v = random_vector(rng, &ring, target.rank(), 1, terms);
            target.normal_form(&v.resort(ring.field(), &target.order())).unwrap()
        };
        let base = if img.is_zero() { lo + rng.gen_range(0..=1) } else { target.weight_of(&img) };
        let bump = if rng.gen_bool(0.7) { 0 } else { 1 };
        degrees.push(base + bump);
        images.push(img);
    }
    let kernel = kernel_of(target, &images, &degrees);
    let keep_all = rng.gen_bool(0.5);
    let rels: Vec<Vector> = kernel
        .into_iter()
        .filter(|_| keep_all || rng.gen_bool(0.5))
        .collect();
    let source = GoodFilteredModule::new(ring, degrees.iter().map(|d| -d).collect(), rels);
    FilteredMorphism::new(source, target.clone(), images).unwrap()
}

/// `N → N ⊕ P` on generators.
pub fn inclusion_into_sum(n: &GoodFilteredModule, p: &GoodFilteredModule) -> FilteredMorphism {
    let sum = direct_sum(n, p);
    let nv = n.ring.nvars();
    FilteredMorphism::new(n.clone(), sum, (0..n.rank()).map(|j| Vector::unit(nv, j)).collect()).unwrap()
}

pub fn direct_sum(a: &GoodFilteredModule, b: &GoodFilteredModule) -> GoodFilteredModule {
    let f = a.ring.field();
    let mut shifts = a.shifts.clone();
    shifts.extend(b.shifts.iter().copied());
    let ord = charvar_core::monomial::ModuleOrder::top(a.ring.mono(), vec![0; shifts.len()]);
    let off = a.rank() as u32;
    let mut rels = a.relations.clone();
    rels.extend(b.relations.iter().map(|r| r.map_positions(f, &ord, |p| p + off)));
    GoodFilteredModule::new(a.ring.clone(), shifts, rels)
}

/// `M → N` on generators where `M` keeps a random subset of the relations
/// of `N`: a strict epimorphism.
pub fn cover_of(rng: &mut Rng8, n: &GoodFilteredModule) -> FilteredMorphism {
    let rels: Vec<Vector> = n.relations.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let m = GoodFilteredModule::new(n.ring.clone(), n.shifts.clone(), rels);
    FilteredMorphism::on_generators(&m, n).unwrap()
}

/// `N → N / (extra relations)` on generators: a strict epimorphism.
pub fn quotient_of(rng: &mut Rng8, n: &GoodFilteredModule) -> FilteredMorphism {
    let mut rels = n.relations.clone();
    if n.rank() > 0 {
        rels.push(random_vector(rng, &n.ring, n.rank(), 1, 1));
    }
    let q = GoodFilteredModule::new(n.ring.clone(), n.shifts.clone(), rels);
    FilteredMorphism::on_generators(n, &q).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Generic,
    StrictMonoAfter,
    StrictEpiBefore,
    EpiChain,
    MonoChain,
    QuotientAfter,
}

pub const PAIR_KINDS: [PairKind; 6] = [
    PairKind::Generic,
    PairKind::StrictMonoAfter,
    PairKind::StrictEpiBefore,
    PairKind::EpiChain,
    PairKind::MonoChain,
    PairKind::QuotientAfter,
];

/// A composable pair `u: M → N`, `v: N → O`.
pub fn random_pair(rng: &mut Rng8, ring: &FilteredRing, kind: PairKind) -> (FilteredMorphism, FilteredMorphism) {
    match kind {
        PairKind::Generic => {
            let o = random_module(rng, ring);
            let v = random_into(rng, &o);
            let u = random_into(rng, &v.source);
            (u, v)
        }
        PairKind::StrictMonoAfter => {
            let n = random_module(rng, ring);
            let p = random_module(rng, ring);
            let v = inclusion_into_sum(&n, &p);
            let u = if rng.gen_bool(0.5) { random_into(rng, &n) } else { cover_of(rng, &n) };
            (u, v)
        }
        PairKind::StrictEpiBefore => {
            let o = random_module(rng, ring);
            let v = random_into(rng, &o);
            let u = cover_of(rng, &v.source);
            (u, v)
        }
        PairKind::EpiChain => {
            let o = random_module(rng, ring);
            let v = cover_of(rng, &o);
            let u = cover_of(rng, &v.source);
            (u, v)
        }
        PairKind::MonoChain => {
            let m = random_module(rng, ring);
            let u = inclusion_into_sum(&m, &random_module(rng, ring));
            let v = inclusion_into_sum(&u.target, &random_module(rng, ring));
            (u, v)
        }
        PairKind::QuotientAfter => {
            let n = random_module(rng, ring);
            let v = quotient_of(rng, &n);
            let u = random_into(rng, &n);
            (u, v)
        }
    }
}

/// Same presentation with every generator degree raised by `by`.
pub fn raise_degrees(m: &GoodFilteredModule, by: i64) -> GoodFilteredModule {
    GoodFilteredModule::new(
        m.ring.clone(),
        m.shifts.iter().map(|s| s - by).collect(),
        m.relations.clone(),
    )
}

/// Rebuilds `u` between re-filtered copies of its source and target.
pub fn refilter(u: &FilteredMorphism, source: GoodFilteredModule, target: GoodFilteredModule) -> Option<FilteredMorphism> {
    FilteredMorphism::new(source, target, u.images.clone()).ok()
}

/// A random filtered complex `K^0 → … → K^n` over `F_p`: a direct sum of
/// elementary pieces `x ↦ y` with `level(y) ≤ level(x)` and isolated
/// vectors, conjugated by random filtered automorphisms.
pub fn random_filtered_complex(rng: &mut Rng8, f: Field) -> FilteredComplex {
    let len = rng.gen_range(2..=4);
    let mut levels: Vec<Vec<i64>> = vec![Vec::new(); len];
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); len - 1];
    for r in 0..len {
        for _ in 0..rng.gen_range(0..=2) {
            levels[r].push(rng.gen_range(-2..=2));
        }
    }
    for r in 0..len - 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let lx = rng.gen_range(-2..=2);
            let ly = lx - rng.gen_range(0..=2);
            levels[r].push(lx);
            levels[r + 1].push(ly);
            edges[r].push((levels[r].len() - 1, levels[r + 1].len() - 1));
        }
    }
    let autos: Vec<(Matrix, Matrix)> = levels.iter().map(|l| filtered_automorphism(rng, f, l)).collect();
    let diffs = (0..len - 1)
        .map(|r| {
            let mut d = Matrix::zero(levels[r + 1].len(), levels[r].len());
            for &(x, y) in &edges[r] {
                d.set(y, x, rng.gen_range(1..f.p()));
            }
            autos[r + 1].0.mul(f, &d).mul(f, &autos[r].1)
        })
        .collect();
    FilteredComplex::new(f, diffs, levels).unwrap()
}

/// `(A, A^{-1})` with `A = I + N`, `N` supported on pairs `(k, j)` with
/// `k < j` and `level[k] ≤ level[j]`, so both preserve the filtration.
fn filtered_automorphism(rng: &mut Rng8, f: Field, levels: &[i64]) -> (Matrix, Matrix) {
    let n = levels.len();
    let mut a = Matrix::identity(n);
    for j in 0..n {
        for k in 0..j {
            if levels[k] <= levels[j] && rng.gen_bool(0.5) {
                a.set(k, j, rng.gen_range(0..f.p()));
            }
        }
    }
    // unipotent upper triangular: back substitution column by column
    let mut inv = Matrix::identity(n);
    for j in 0..n {
        for k in (0..j).rev() {
            let mut s = 0;
            for l in k + 1..=j {
                s = f.add(s, f.mul(a.get(k, l), inv.get(l, j)));
            }
            inv.set(k, j, f.neg(s));
        }
    }
    (a, inv)
}

/// A named Weyl module together with its known characteristic ideal.
pub struct Fixture {
    pub name: String,
    pub module: WeylPresentation,
    pub char_ideal: Vec<String>,
}

fn cyclic(name: &str, p: u64, d: usize, ops: &[&str], char_ideal: &[&str]) -> Fixture {
    Fixture {
        name: name.to_string(),
        module: WeylPresentation::cyclic(field(p), d, ops).unwrap(),
        char_ideal: char_ideal.iter().map(|s| s.to_string()).collect(),
    }
}

/// The nonzero fixture corpus (the free module `D` is kept separately).
pub fn fixtures() -> Vec<Fixture> {
    let mut out = vec![
        cyclic("D/Dd", 7, 1, &["d1"], &["xi1"]),
        cyclic("D/Dt", 7, 1, &["t1"], &["t1"]),
        cyclic("D/(Dd1+Dd2)", 7, 2, &["d1", "d2"], &["xi1", "xi2"]),
    ];
    for p in [5, 7] {
        for a in 0..=2 {
            out.push(cyclic(
                &format!("D/D(t*d-{a}) p={p}"),
                p,
                1,
                &[&format!("t1*d1 - {a}")],
                &["t1*xi1"],
            ));
        }
    }
    out.extend(log_fixtures().into_iter().map(|(name, m, _, ideal)| Fixture {
        name,
        module: m,
        char_ideal: ideal,
    }));
    out
}

pub fn free_control() -> WeylPresentation {
    WeylPresentation::free(field(7), 1, vec![0])
}

fn scalar_matrix(f: Field, d: usize, a: i64) -> weyl::TMatrix {
    vec![vec![weyl::parse_operator(f, d, &a.to_string()).unwrap()]]
}

/// Log-induced rank-one modules: `(name, module, r, char ideal)`.
pub fn log_fixtures() -> Vec<(String, WeylPresentation, usize, Vec<String>)> {
    let f = field(5);
    let mut out = Vec::new();
    let mut push = |name: String, d: usize, a: Vec<i64>, b: Vec<i64>, ideal: &[&str]| {
        let am: Vec<_> = a.iter().map(|&x| scalar_matrix(f, d, x)).collect();
        let bm: Vec<_> = b.iter().map(|&x| scalar_matrix(f, d, x)).collect();
        let m = weyl::log_induce(f, d, 1, &am, &bm, weyl::DEFAULT_INTEGRABILITY_TRUNCATION).unwrap();
        out.push((name, m.presentation, a.len(), ideal.iter().map(|s| s.to_string()).collect()));
    };
    for a in 0..5 {
        push(format!("kummer a={a}"), 1, vec![a], vec![], &["t1*xi1"]);
    }
    for a in [0, 1, 3] {
        push(format!("d=2 r=1 ({a},0)"), 2, vec![a], vec![0], &["t1*xi1", "xi2"]);
    }
    for (a, b) in [(0, 0), (1, 2), (3, 4)] {
        push(format!("d=2 r=2 ({a},{b})"), 2, vec![a, b], vec![], &["t1*xi1", "t2*xi2"]);
    }
    out
}

/// A random operator in `d` variables of order ≤ 2 with a nonzero symbol.
pub fn random_operator(rng: &mut Rng8, f: Field, d: usize) -> Vector {
    let ring = FilteredRing::order(f, d);
    loop {
        let terms = rng.gen_range(1..=3);
        let v = random_vector(rng, &ring, 1, 2, terms);
        if !v.is_zero() && v.terms.iter().any(|t| t.m.0[d..].iter().any(|&x| x > 0)) {
            return v;
        }
    }
}

/// Membership of `f` in the homogeneous ideal `(gens)` decided in degree
/// `deg f` by Gaussian elimination on the products `x^a g`.
pub struct TruncatedMembership {
    pub p: u64,
    pub nvars: usize,
}

impl TruncatedMembership {
    fn monomials(&self, deg: u32) -> Vec<Vec<u32>> {
        fn go(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if prefix.len() + 1 == n {
                prefix.push(deg);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for e in 0..=deg {
                prefix.push(e);
                go(n, deg - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self.nvars, deg, &mut Vec::new(), &mut out);
        out
    }

    /// Polynomials are maps from exponent vectors to coefficients in `[0, p)`.
    pub fn contains(&self, gens: &[Vec<(Vec<u32>, u64)>], f: &[(Vec<u32>, u64)]) -> bool {
        let p = self.p;
        let deg = |m: &Vec<u32>| m.iter().sum::<u32>();
        let Some(df) = f.first().map(|(m, _)| deg(m)) else {
            return true;
        };
        let basis = self.monomials(df);
        let col = |m: &Vec<u32>| basis.iter().position(|b| b == m).unwrap();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for g in gens {
            let Some(dg) = g.first().map(|(m, _)| deg(m)) else { continue };
            if dg > df {
                continue;
            }
            for a in self.monomials(df - dg) {
                let mut row = vec![0u64; basis.len()];
                for (m, c) in g {
                    let prod: Vec<u32> = m.iter().zip(&a).map(|(x, y)| x + y).collect();
                    let k = col(&prod);
                    row[k] = (row[k] + c) % p;
                }
                rows.push(row);
            }
        }
        let rank = |mut rows: Vec<Vec<u64>>| -> usize {
            let ncols = basis.len();
            let mut r = 0;
            for c in 0..ncols {
                let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
                rows.swap(r, piv);
                let inv = mod_pow(rows[r][c], p - 2, p);
                for x in rows[r].iter_mut() {
                    *x = *x * inv % p;
                }
                for i in 0..rows.len() {
                    if i != r && rows[i][c] != 0 {
                        let k = rows[i][c];
                        for j in 0..ncols {
                            rows[i][j] = (rows[i][j] + p * p - k * rows[r][j] % p) % p;
                        }
                    }
                }
                r += 1;
            }
            r
        };
        let mut frow = vec![0u64; basis.len()];
        for (m, c) in f {
            let k = col(m);
            frow[k] = (frow[k] + c) % p;
        }
        let before = rank(rows.clone());
        rows.push(frow);
        rank(rows) == before
    }
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}
