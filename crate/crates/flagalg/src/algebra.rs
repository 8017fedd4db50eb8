//! The algebra generated by the location projectors `E*_mu`, the weights
//! `K_m` and the lowering/raising matrices `L_m`, `R_m` acting on the
//! standard module `V = C P`, and the decomposition of `V` into irreducible
//! modules.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use num_traits::{One, Zero};

use crate::combin::{self, admissible_shapes, column_full, kappa, row_full, Shape};
use crate::exactnum::{q_half_pow, rat, rat_pow, CycRational, Field, Rational, SqrtExt};
use crate::gf::{FqElem, GaloisField};
use crate::lattice::{Lattice, Location, MatrixForm};
use crate::linalg::{commutant_dimension, same_span, span_basis, CoordinateSolver, DenseMatrix, SparseMatrix};

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn from_result(name: impl Into<String>, r: Result<(), String>) -> Self {
        let name = name.into();
        match r {
            Ok(()) => Check { name, passed: true, witness: None },
            Err(w) => Check { name, passed: false, witness: Some(w) },
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn lift(m: &SparseMatrix<Rational>) -> SparseMatrix<SqrtExt> {
    m.map(|x| SqrtExt::from_rational(x.clone()))
}

pub fn lift_vec(v: &[Rational]) -> Vec<SqrtExt> {
    v.iter().map(|x| SqrtExt::from_rational(x.clone())).collect()
}

/// Generators of the algebra as matrices indexed by the points of the
/// lattice in enumeration order.
#[derive(Clone, Debug)]
pub struct Generators {
    q: u64,
    n: usize,
    dim: usize,
    pub locations: Vec<Location>,
    pub buckets: Vec<(Location, Range<usize>)>,
    /// Indexed by the lexicographic index of the location.
    pub e_star: Vec<SparseMatrix<Rational>>,
    pub k: Vec<SparseMatrix<SqrtExt>>,
    pub k_inv: Vec<SparseMatrix<SqrtExt>>,
    pub l: Vec<SparseMatrix<Rational>>,
    pub r: Vec<SparseMatrix<Rational>>,
}

pub fn build_generators(lat: &Lattice) -> Generators {
    let (q, n, dim) = (lat.q(), lat.n(), lat.len());
    let locations: Vec<Location> = lat.subspaces().iter().map(|s| s.location).collect();
    let buckets = lat.buckets().to_vec();
    let e_star = buckets
        .iter()
        .map(|(_, range)| SparseMatrix::from_triplets(dim, dim, range.clone().map(|i| (i, i, Rational::one()))))
        .collect();
    let weight = |m: usize, sign: i64| {
        SparseMatrix::diagonal(locations.iter().map(|mu| q_half_pow(q, sign * (1 - 2 * mu.get(m) as i64))).collect())
    };
    let k = (1..=n).map(|m| weight(m, 1)).collect();
    let k_inv = (1..=n).map(|m| weight(m, -1)).collect();
    let l: Vec<SparseMatrix<Rational>> = (1..=n)
        .map(|m| {
            SparseMatrix::from_triplets(
                dim,
                dim,
                lat.cover_pairs(m).into_iter().map(|(lo, up)| (lo, up, Rational::one())),
            )
        })
        .collect();
    let r = l.iter().map(|x| x.transpose()).collect();
    Generators { q, n, dim, locations, buckets, e_star, k, k_inv, l, r }
}

impl Generators {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn l(&self, m: usize) -> &SparseMatrix<Rational> {
        &self.l[m - 1]
    }

    pub fn r(&self, m: usize) -> &SparseMatrix<Rational> {
        &self.r[m - 1]
    }

    pub fn k(&self, m: usize) -> &SparseMatrix<SqrtExt> {
        &self.k[m - 1]
    }

    pub fn k_inv(&self, m: usize) -> &SparseMatrix<SqrtExt> {
        &self.k_inv[m - 1]
    }

    pub fn e_star(&self, mu: Location) -> &SparseMatrix<Rational> {
        &self.e_star[mu.lex_index()]
    }

    pub fn bucket(&self, mu: Location) -> Range<usize> {
        self.buckets[mu.lex_index()].1.clone()
    }

    pub fn q_rational(&self) -> Rational {
        rat(self.q as i64)
    }

    /// `R_m L_m + L_m R_m`.
    pub fn casimir(&self, m: usize) -> SparseMatrix<Rational> {
        self.r(m).mul(self.l(m)).add(&self.l(m).mul(self.r(m)))
    }
}

pub fn compare<T: Field>(
    lhs: &SparseMatrix<T>,
    rhs: &SparseMatrix<T>,
    label: impl Fn() -> String,
) -> Result<(), String> {
    match lhs.first_difference(rhs) {
        None => Ok(()),
        Some((i, j, a, b)) => Err(format!("{}: entry ({i},{j}) is {a} on the left and {b} on the right", label())),
    }
}

/// The commutation relations between `L_m`, `R_m` and `K_m`, one check per
/// family, plus the transpose and location-shift identities.
pub fn verify_h_relations(g: &Generators) -> Vec<Check> {
    let n = g.n;
    let q = g.q_rational();
    let qs = SqrtExt::from_rational(q.clone());
    let ls: Vec<SparseMatrix<SqrtExt>> = g.l.iter().map(lift).collect();
    let rs: Vec<SparseMatrix<SqrtExt>> = g.r.iter().map(lift).collect();
    let pairs = |strict: bool| {
        (1..=n)
            .flat_map(move |m| (1..=n).map(move |k| (m, k)))
            .filter(move |&(m, k)| if strict { m < k } else { m != k })
    };
    let mut out = Vec::new();
    let family = |name: &str, f: &dyn Fn() -> Result<(), String>| Check::from_result(name, f());
    out.push(family("R_m = L_m^T", &|| {
        (1..=n).try_for_each(|m| compare(g.r(m), &g.l(m).transpose(), || format!("m={m}")))
    }));
    out.push(family("L_m E*_mu = E*_(mu-e_m) L_m and R_m E*_mu = E*_(mu+e_m) R_m", &|| {
        for m in 1..=n {
            for (mu, _) in &g.buckets {
                let down =
                    mu.shifted(m, -1).map(|x| g.e_star(x).clone()).unwrap_or_else(|| SparseMatrix::zeros(g.dim, g.dim));
                let up =
                    mu.shifted(m, 1).map(|x| g.e_star(x).clone()).unwrap_or_else(|| SparseMatrix::zeros(g.dim, g.dim));
                compare(&g.l(m).mul(g.e_star(*mu)), &down.mul(g.l(m)), || format!("L, m={m} mu={mu}"))?;
                compare(&g.r(m).mul(g.e_star(*mu)), &up.mul(g.r(m)), || format!("R, m={m} mu={mu}"))?;
            }
        }
        Ok(())
    }));
    out.push(family("L_m K_n = K_n L_m (m != n)", &|| {
        pairs(false)
            .try_for_each(|(m, k)| compare(&ls[m - 1].mul(g.k(k)), &g.k(k).mul(&ls[m - 1]), || format!("m={m} n={k}")))
    }));
    out.push(family("R_m K_n = K_n R_m (m != n)", &|| {
        pairs(false)
            .try_for_each(|(m, k)| compare(&rs[m - 1].mul(g.k(k)), &g.k(k).mul(&rs[m - 1]), || format!("m={m} n={k}")))
    }));
    out.push(family("q L_m K_m = K_m L_m", &|| {
        (1..=n)
            .try_for_each(|m| compare(&ls[m - 1].mul(g.k(m)).scale(&qs), &g.k(m).mul(&ls[m - 1]), || format!("m={m}")))
    }));
    out.push(family("R_m K_m = q K_m R_m", &|| {
        (1..=n)
            .try_for_each(|m| compare(&rs[m - 1].mul(g.k(m)), &g.k(m).mul(&rs[m - 1]).scale(&qs), || format!("m={m}")))
    }));
    out.push(family("L_m^2 = R_m^2 = 0", &|| {
        let zero = SparseMatrix::zeros(g.dim, g.dim);
        (1..=n).try_for_each(|m| {
            compare(&g.l(m).mul(g.l(m)), &zero, || format!("L, m={m}"))?;
            compare(&g.r(m).mul(g.r(m)), &zero, || format!("R, m={m}"))
        })
    }));
    out.push(family("q L_m L_n = L_n L_m (m < n)", &|| {
        pairs(true).try_for_each(|(m, k)| {
            compare(&g.l(m).mul(g.l(k)).scale(&q), &g.l(k).mul(g.l(m)), || format!("m={m} n={k}"))
        })
    }));
    out.push(family("R_m R_n = q R_n R_m (m < n)", &|| {
        pairs(true).try_for_each(|(m, k)| {
            compare(&g.r(m).mul(g.r(k)), &g.r(k).mul(g.r(m)).scale(&q), || format!("m={m} n={k}"))
        })
    }));
    out.push(family("L_m R_n = R_n L_m (m != n)", &|| {
        pairs(false).try_for_each(|(m, k)| compare(&g.l(m).mul(g.r(k)), &g.r(k).mul(g.l(m)), || format!("m={m} n={k}")))
    }));
    out
}

/// `q^{sum_m (nu_m/2 - mu_m nu_m)}`, the coefficient of `E*_mu` in
/// `K_1^{nu_1} ... K_N^{nu_N}`.
fn monomial_coefficient(q: u64, nu: Location, mu: Location) -> SqrtExt {
    let twice: i64 = (1..=nu.n()).map(|m| nu.get(m) as i64 * (1 - 2 * mu.get(m) as i64)).sum();
    q_half_pow(q, twice)
}

/// Expresses every `E*_mu` as a combination of the monomials
/// `K_1^{nu_1} ... K_N^{nu_N}` by inverting the coefficient matrix, and
/// returns the resulting matrices in location order.
pub fn reconstruct_projectors_from_k(g: &Generators) -> Result<Vec<SparseMatrix<SqrtExt>>, String> {
    let locs = Location::all(g.n);
    let size = locs.len();
    let mut coeff = DenseMatrix::zeros(size, size);
    for (i, &nu) in locs.iter().enumerate() {
        for (j, &mu) in locs.iter().enumerate() {
            coeff.set(i, j, monomial_coefficient(g.q, nu, mu));
        }
    }
    let inv = coeff.inverse().ok_or_else(|| "coefficient matrix is singular".to_string())?;
    let monomials: Vec<SparseMatrix<SqrtExt>> = locs
        .iter()
        .map(|nu| (1..=g.n).filter(|&m| nu.get(m) == 1).fold(SparseMatrix::identity(g.dim), |acc, m| acc.mul(g.k(m))))
        .collect();
    // K^nu = sum_mu coeff[nu][mu] E*_mu, so E*_mu = sum_nu inv[mu][nu] K^nu.
    Ok((0..size)
        .map(|j| {
            (0..size).fold(SparseMatrix::zeros(g.dim, g.dim), |acc, i| acc.add(&monomials[i].scale(inv.get(j, i))))
        })
        .collect())
}

pub fn check_projectors_from_k(g: &Generators) -> Check {
    Check::from_result(
        "E*_mu recovered from monomials in K_m",
        reconstruct_projectors_from_k(g).and_then(|rec| {
            for (mu, _) in &g.buckets {
                let built = lift(g.e_star(*mu));
                compare(&rec[mu.lex_index()], &built, || format!("mu={mu}"))?;
                compare(&rec[mu.lex_index()].mul(&rec[mu.lex_index()]), &built, || format!("idempotent, mu={mu}"))?;
            }
            Ok(())
        }),
    )
}

/// A joint eigenspace `E*_mu E_lambda V` of `{R_m L_m + L_m R_m}`.
#[derive(Clone, Debug)]
pub struct Block {
    pub mu: Location,
    pub lambda: Shape,
    /// Eigenvalue of `R_m L_m + L_m R_m`, `m = 1..N`.
    pub eigenvalues: Vec<Rational>,
    /// Basis vectors of length `|P|`.
    pub basis: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    pub blocks: Vec<Block>,
    pub projectors: BTreeMap<Shape, SparseMatrix<Rational>>,
}

impl ProjectorFamily {
    pub fn block(&self, mu: Location, lambda: &Shape) -> Option<&Block> {
        self.blocks.iter().find(|b| b.mu == mu && &b.lambda == lambda)
    }

    pub fn block_dim(&self, mu: Location, lambda: &Shape) -> usize {
        self.block(mu, lambda).map_or(0, |b| b.basis.len())
    }

    pub fn projector(&self, lambda: &Shape) -> Option<&SparseMatrix<Rational>> {
        self.projectors.get(lambda)
    }
}

/// Restriction of `a` to the rows and columns in `range`.
fn restrict_block(a: &SparseMatrix<Rational>, range: &Range<usize>) -> DenseMatrix<Rational> {
    let d = range.len();
    let mut out = DenseMatrix::zeros(d, d);
    for i in range.clone() {
        for (j, v) in a.row(i) {
            if range.contains(j) {
                out.set(i - range.start, j - range.start, v.clone());
            }
        }
    }
    out
}

fn orthogonal_projector(basis: &[Vec<Rational>]) -> DenseMatrix<Rational> {
    let b = DenseMatrix::from_columns(basis[0].len(), basis);
    let gram = b.transpose().mul(&b);
    let inv = gram.inverse().expect("independent basis");
    b.mul(&inv).mul(&b.transpose())
}

fn embed(block: &DenseMatrix<Rational>, range: &Range<usize>, dim: usize) -> SparseMatrix<Rational> {
    let mut trip = Vec::new();
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j);
            if !v.is_zero() {
                trip.push((range.start + i, range.start + j, v.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(dim, dim, trip)
}

/// Splits each location block into joint eigenspaces of the commuting
/// symmetric family `R_m L_m + L_m R_m`, labels each by the shape of zero
/// eigenvalues, and assembles the projectors `E_lambda`.
pub fn build_e_lambda(g: &Generators) -> Result<ProjectorFamily, String> {
    let n = g.n;
    let q = g.q_rational();
    let candidates: Vec<Rational> =
        std::iter::once(Rational::zero()).chain((0..=n as i64).map(|k| rat_pow(&q, k))).collect();
    let casimirs: Vec<SparseMatrix<Rational>> = (1..=n).map(|m| g.casimir(m)).collect();
    let mut blocks = Vec::new();
    for (mu, range) in &g.buckets {
        let d = range.len();
        let restricted: Vec<DenseMatrix<Rational>> = casimirs.iter().map(|a| restrict_block(a, range)).collect();
        // Each piece: eigenvalues so far and a basis in block coordinates.
        let identity: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        let mut pieces: Vec<(Vec<Rational>, Vec<Vec<Rational>>)> = vec![(Vec::new(), identity)];
        for a in &restricted {
            let mut next = Vec::new();
            for (vals, basis) in pieces {
                let solver = CoordinateSolver::new(d, &basis).ok_or("dependent eigenspace basis")?;
                let k = basis.len();
                let mut local = DenseMatrix::zeros(k, k);
                for (j, b) in basis.iter().enumerate() {
                    let image = a.mul_vec(b);
                    let c =
                        solver.coordinates(&image).ok_or_else(|| format!("mu={mu}: eigenspace is not invariant"))?;
                    for (i, x) in c.into_iter().enumerate() {
                        local.set(i, j, x);
                    }
                }
                let mut found = 0;
                for theta in &candidates {
                    let shifted = local.sub(&DenseMatrix::identity(k).scale(theta));
                    let null = shifted.nullspace();
                    if null.is_empty() {
                        continue;
                    }
                    found += null.len();
                    let sub: Vec<Vec<Rational>> = null
                        .iter()
                        .map(|c| {
                            let mut v = vec![Rational::zero(); d];
                            for (ci, bi) in c.iter().zip(&basis) {
                                if !ci.is_zero() {
                                    for (x, y) in v.iter_mut().zip(bi) {
                                        *x += ci * y;
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    let mut vals = vals.clone();
                    vals.push(theta.clone());
                    next.push((vals, sub));
                }
                if found != k {
                    return Err(format!("mu={mu}: eigenvalues outside {{0, 1, q, ..., q^N}}"));
                }
            }
            pieces = next;
        }
        for (vals, basis) in pieces {
            let lambda = Shape::new((1..=n).filter(|&m| vals[m - 1].is_zero()).collect());
            if !combin::admissible_type(*mu, &lambda) {
                return Err(format!("mu={mu}: eigenvalue pattern gives inadmissible shape {lambda}"));
            }
            for m in (1..=n).filter(|&m| !lambda.contains(m)) {
                let want = rat_pow(&q, kappa(m, *mu, &lambda).map_err(|e| e.to_string())?);
                if vals[m - 1] != want {
                    return Err(format!(
                        "mu={mu} lambda={lambda} m={m}: eigenvalue {} but q^kappa = {want}",
                        vals[m - 1]
                    ));
                }
            }
            let full: Vec<Vec<Rational>> = basis
                .into_iter()
                .map(|b| {
                    let mut v = vec![Rational::zero(); g.dim];
                    v[range.clone()].clone_from_slice(&b);
                    v
                })
                .collect();
            blocks.push(Block { mu: *mu, lambda, eigenvalues: vals, basis: full });
        }
    }
    blocks.sort_by(|a, b| (a.mu, a.lambda.mask()).cmp(&(b.mu, b.lambda.mask())));
    let mut projectors: BTreeMap<Shape, SparseMatrix<Rational>> = BTreeMap::new();
    for b in &blocks {
        let range = g.bucket(b.mu);
        let local: Vec<Vec<Rational>> = b.basis.iter().map(|v| v[range.clone()].to_vec()).collect();
        let p = embed(&orthogonal_projector(&local), &range, g.dim);
        let entry = projectors.entry(b.lambda.clone()).or_insert_with(|| SparseMatrix::zeros(g.dim, g.dim));
        *entry = entry.add(&p);
    }
    Ok(ProjectorFamily { blocks, projectors })
}

/// `E*_mu E_lambda` as a product of Lagrange interpolation factors in the
/// matrices `R_m L_m + L_m R_m`, certifying that the projectors lie in the
/// algebra generated by `L_m`, `R_m` and `E*_mu`.
pub fn lagrange_projector(
    g: &Generators,
    fam: &ProjectorFamily,
    mu: Location,
    lambda: &Shape,
) -> SparseMatrix<Rational> {
    let target = fam.block(mu, lambda).expect("block exists");
    let mut acc = g.e_star(mu).clone();
    for m in 1..=g.n {
        let theta = &target.eigenvalues[m - 1];
        let realized: BTreeSet<Rational> =
            fam.blocks.iter().filter(|b| b.mu == mu).map(|b| b.eigenvalues[m - 1].clone()).collect();
        let a = g.casimir(m);
        for other in realized.iter().filter(|x| *x != theta) {
            let factor = a.sub(&SparseMatrix::identity(g.dim).scale(other)).scale(&(theta - other).recip());
            acc = acc.mul(&factor);
        }
    }
    acc
}

pub fn verify_projectors(g: &Generators, fam: &ProjectorFamily) -> Vec<Check> {
    let dim = g.dim;
    let zero = SparseMatrix::zeros(dim, dim);
    let mut out = Vec::new();
    out.push(Check::from_result("E_lambda idempotent", {
        fam.projectors.iter().try_for_each(|(l, p)| compare(&p.mul(p), p, || format!("lambda={l}")))
    }));
    out.push(Check::from_result("E_lambda E_lambda' = 0", {
        let mut r = Ok(());
        'outer: for (a, pa) in &fam.projectors {
            for (b, pb) in &fam.projectors {
                if a != b {
                    r = compare(&pa.mul(pb), &zero, || format!("lambda={a} lambda'={b}"));
                    if r.is_err() {
                        break 'outer;
                    }
                }
            }
        }
        r
    }));
    out.push(Check::from_result("sum of E_lambda = I", {
        let sum = fam.projectors.values().fold(zero.clone(), |acc, p| acc.add(p));
        compare(&sum, &SparseMatrix::identity(dim), || "sum".into())
    }));
    out.push(Check::from_result("E_lambda commutes with E*_mu, L_m, R_m", {
        let mut r = Ok(());
        for (l, p) in &fam.projectors {
            for (mu, _) in &g.buckets {
                r = r.and_then(|_| {
                    compare(&p.mul(g.e_star(*mu)), &g.e_star(*mu).mul(p), || format!("lambda={l} mu={mu}"))
                });
            }
            for m in 1..=g.n {
                r = r.and_then(|_| compare(&p.mul(g.l(m)), &g.l(m).mul(p), || format!("lambda={l} L_{m}")));
                r = r.and_then(|_| compare(&p.mul(g.r(m)), &g.r(m).mul(p), || format!("lambda={l} R_{m}")));
            }
        }
        r
    }));
    out.push(Check::from_result("E*_mu E_lambda nonzero exactly for admissible shapes", {
        let mut r = Ok(());
        for (mu, range) in &g.buckets {
            let mut total = 0;
            for lambda in admissible_shapes(*mu) {
                if fam.block_dim(*mu, &lambda) == 0 {
                    r = Err(format!("mu={mu} lambda={lambda}: empty block"));
                }
                total += fam.block_dim(*mu, &lambda);
            }
            if total != range.len() {
                r = Err(format!("mu={mu}: block dimensions sum to {total}, |P_mu| = {}", range.len()));
            }
        }
        r
    }));
    out.push(Check::from_result("E*_mu E_lambda is a polynomial in the generators", {
        fam.blocks.iter().try_for_each(|b| {
            let range = g.bucket(b.mu);
            let local: Vec<Vec<Rational>> = b.basis.iter().map(|v| v[range.clone()].to_vec()).collect();
            let direct = embed(&orthogonal_projector(&local), &range, dim);
            compare(&lagrange_projector(g, fam, b.mu, &b.lambda), &direct, || {
                format!("mu={} lambda={}", b.mu, b.lambda)
            })
        })
    }));
    out.push(check_eigenvalue_tables(g, fam));
    out
}

/// `R_m L_m` acts as `q^kappa` on a block when `m in T_mu \ lambda` and as 0
/// otherwise; `L_m R_m` likewise with `S_mu`.
pub fn check_eigenvalue_tables(g: &Generators, fam: &ProjectorFamily) -> Check {
    let q = g.q_rational();
    Check::from_result("R_m L_m and L_m R_m eigenvalues are q^kappa or 0", {
        let mut r = Ok(());
        'outer: for b in &fam.blocks {
            for m in 1..=g.n {
                let k = rat_pow(&q, kappa(m, b.mu, &b.lambda).unwrap());
                let free = !b.lambda.contains(m);
                let (rl, lr) = if b.mu.get(m) == 1 {
                    (if free { k } else { Rational::zero() }, Rational::zero())
                } else {
                    (Rational::zero(), if free { k } else { Rational::zero() })
                };
                for v in &b.basis {
                    let a = g.r(m).mul_vec(&g.l(m).mul_vec(v));
                    let c = g.l(m).mul_vec(&g.r(m).mul_vec(v));
                    let sa: Vec<Rational> = v.iter().map(|x| x * &rl).collect();
                    let sc: Vec<Rational> = v.iter().map(|x| x * &lr).collect();
                    if a != sa || c != sc {
                        r = Err(format!("mu={} lambda={} m={m}", b.mu, b.lambda));
                        break 'outer;
                    }
                }
            }
        }
        r
    })
}

/// Character vectors `chi_y` for the additive character
/// `a -> zeta_p^{c Tr(a)}`.
#[derive(Clone, Debug)]
pub struct ChiFamily {
    pub p: u32,
    pub c: u32,
    pub vectors: Vec<Vec<CycRational>>,
}

fn pairing(gf: &GaloisField, y: &MatrixForm, z: &MatrixForm, cells: &[(usize, usize)]) -> FqElem {
    cells.iter().fold(FqElem::ZERO, |acc, &(s, t)| gf.add(acc, gf.mul(y.get(s, t), z.get(s, t))))
}

fn char_value(gf: &GaloisField, c: u32, a: FqElem, scale: i64) -> CycRational {
    let p = gf.p();
    let mut counts = vec![0i64; p as usize];
    counts[((gf.trace_to_prime(a) * c) % p) as usize] = scale;
    CycRational::from_exponent_counts(p, &counts)
}

pub fn build_chi_basis(lat: &Lattice, c: u32) -> ChiFamily {
    let gf = lat.gf();
    let p = gf.p();
    assert!(c % p != 0, "character must be nontrivial");
    let n = lat.n();
    let (zero, one) = (Location::zero(n), Location::ones(n));
    let mut vectors = Vec::with_capacity(lat.len());
    for y in lat.subspaces() {
        let mut v = vec![CycRational::zero_in(p); lat.len()];
        let mu = y.location;
        if mu == zero || mu == one {
            v[y.id] = CycRational::from_rational(p, Rational::one());
        } else {
            let cells = mu.cells();
            for z in lat.bucket(mu) {
                let a = pairing(gf, &y.matrix_form, &lat.get(z).matrix_form, &cells);
                v[z] = char_value(gf, c, a, 1);
            }
        }
        vectors.push(v);
    }
    ChiFamily { p, c, vectors }
}

fn apply_to_cyc(m: &SparseMatrix<Rational>, v: &[CycRational], p: u32) -> Vec<CycRational> {
    (0..m.n_rows())
        .map(|i| {
            m.row(i).iter().fold(
                CycRational::zero_in(p),
                |acc, (j, a)| {
                    if v[*j].is_zero() {
                        acc
                    } else {
                        &acc + &v[*j].scale(a)
                    }
                },
            )
        })
        .collect()
}

pub fn check_chi_orthogonality(lat: &Lattice, chi: &ChiFamily) -> Check {
    Check::from_result("chi_y orthogonal with norm |P_mu|", {
        let mut r = Ok(());
        'outer: for (mu, range) in lat.buckets() {
            let size = CycRational::from_rational(chi.p, rat(range.len() as i64));
            for a in range.clone() {
                for b in range.clone() {
                    let ip = crate::exactnum::hermitian_inner(&chi.vectors[a], &chi.vectors[b]);
                    let want = if a == b { size.clone() } else { CycRational::zero_in(chi.p) };
                    if ip != want {
                        r = Err(format!("mu={mu}: <chi_{a}, chi_{b}> = {ip}"));
                        break 'outer;
                    }
                }
            }
        }
        r
    })
}

/// Types of all points, in enumeration order.
pub fn point_types(lat: &Lattice) -> Vec<Shape> {
    lat.subspaces().iter().map(|y| combin::type_of_subspace(lat.gf(), y)).collect()
}

/// Compares the character basis with the projector family and checks the
/// vanishing criteria and entry formulas for `L_m chi_y`, `R_m chi_z`.
pub fn chi_cross_check(lat: &Lattice, g: &Generators, fam: &ProjectorFamily, chi: &ChiFamily) -> Vec<Check> {
    let types = point_types(lat);
    let p = chi.p;
    let n = g.n;
    let mut out = Vec::new();
    out.push(Check::from_result(format!("span of chi_y by type equals range of E_lambda (c={})", chi.c), {
        let mut r = Ok(());
        for (y, ty) in types.iter().enumerate() {
            for (l, proj) in &fam.projectors {
                let image = apply_to_cyc(proj, &chi.vectors[y], p);
                let want = if l == ty { chi.vectors[y].clone() } else { vec![CycRational::zero_in(p); g.dim] };
                if image != want {
                    r = Err(format!("E_{l} chi_{y} with type(y) = {ty}"));
                }
            }
        }
        for l in fam.projectors.keys() {
            let rank: usize = fam.blocks.iter().filter(|b| &b.lambda == l).map(|b| b.basis.len()).sum();
            let count = types.iter().filter(|t| *t == l).count();
            if rank != count {
                r = Err(format!("rank E_{l} = {rank} but {count} points have that type"));
            }
        }
        r
    }));
    let mut lower = Ok(());
    let mut upper = Ok(());
    for (y, ty) in types.iter().enumerate() {
        let mu = g.locations[y];
        for m in 1..=n {
            let lv = apply_to_cyc(g.l(m), &chi.vectors[y], p).iter().all(|x| x.is_zero());
            let want = mu.get(m) == 0 || ty.contains(m);
            if lv != want && lower.is_ok() {
                lower = Err(format!("y={y} mu={mu} type={ty} m={m}: L_m chi_y zero is {lv}"));
            }
            let rv = apply_to_cyc(g.r(m), &chi.vectors[y], p).iter().all(|x| x.is_zero());
            let want = mu.get(m) == 1 || ty.contains(m);
            if rv != want && upper.is_ok() {
                upper = Err(format!("z={y} nu={mu} type={ty} m={m}: R_m chi_z zero is {rv}"));
            }
        }
    }
    out.push(Check::from_result(format!("L_m chi_y = 0 iff m in S_mu or m in type (c={})", chi.c), lower));
    out.push(Check::from_result(format!("R_m chi_z = 0 iff m in T_nu or m in type (c={})", chi.c), upper));
    out.push(Check::from_result(
        format!("entries of L_m chi_y and R_m chi_z (c={})", chi.c),
        check_chi_entries(lat, g, chi),
    ));
    out
}

fn check_chi_entries(lat: &Lattice, g: &Generators, chi: &ChiFamily) -> Result<(), String> {
    let gf = lat.gf();
    let n = g.n;
    let q = g.q as i64;
    let (zero, one) = (Location::zero(n), Location::ones(n));
    for (mu, yr) in lat.buckets() {
        for m in mu.t_set() {
            let nu = mu.shifted(m, -1).unwrap();
            if *mu == one || nu == zero {
                continue;
            }
            let zr = lat.bucket(nu);
            let s_mu = mu.s_set();
            let t_nu = nu.t_set();
            let cells: Vec<(usize, usize)> =
                s_mu.iter().flat_map(|&s| t_nu.iter().map(move |&t| (s, t))).filter(|&(s, t)| s < t).collect();
            for y in yr.clone() {
                let lchi = apply_to_cyc(g.l(m), &chi.vectors[y], chi.p);
                let yf = &lat.get(y).matrix_form;
                for z in zr.clone() {
                    let zf = &lat.get(z).matrix_form;
                    let inner = pairing(gf, yf, zf, &cells);
                    let ok = s_mu.iter().filter(|&&s| s < m).all(|&s| {
                        let sum = t_nu.iter().fold(FqElem::ZERO, |acc, &t| {
                            let ys = if s < t { yf.get(s, t) } else { FqElem::ZERO };
                            let zm = if m < t { zf.get(m, t) } else { FqElem::ZERO };
                            gf.add(acc, gf.mul(ys, zm))
                        });
                        yf.get(s, m) == sum
                    });
                    let want = if ok {
                        let e = s_mu.iter().filter(|&&s| s <= m - 1).count() as u32;
                        char_value(gf, chi.c, inner, q.pow(e))
                    } else {
                        CycRational::zero_in(chi.p)
                    };
                    if lchi[z] != want {
                        return Err(format!("(L_{m} chi_{y})({z}) = {}, formula {want}", lchi[z]));
                    }
                }
            }
            for z in zr.clone() {
                let rchi = apply_to_cyc(g.r(m), &chi.vectors[z], chi.p);
                let zf = &lat.get(z).matrix_form;
                for y in yr.clone() {
                    let yf = &lat.get(y).matrix_form;
                    let inner = pairing(gf, yf, zf, &cells);
                    let ok = t_nu.iter().filter(|&&t| t > m).all(|&t| {
                        let sum = s_mu.iter().fold(FqElem::ZERO, |acc, &s| {
                            let zs = if s < t { zf.get(s, t) } else { FqElem::ZERO };
                            let ym = if s < m { yf.get(s, m) } else { FqElem::ZERO };
                            gf.add(acc, gf.mul(zs, ym))
                        });
                        zf.get(m, t) == gf.neg(sum)
                    });
                    let want = if ok {
                        let e = t_nu.iter().filter(|&&t| t > m).count() as u32;
                        char_value(gf, chi.c, inner, q.pow(e))
                    } else {
                        CycRational::zero_in(chi.p)
                    };
                    if rchi[y] != want {
                        return Err(format!("(R_{m} chi_{z})({y}) = {}, formula {want}", rchi[y]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// An irreducible submodule `H v` with `v in E*_mu E_lambda V`, described
/// by its endpoint and shape.
#[derive(Clone, Debug)]
pub struct IrredDescriptor {
    pub endpoint: Location,
    pub shape: Shape,
    pub dim: usize,
    pub multiplicity: usize,
    pub formula: u128,
    pub generator: Vec<Rational>,
    /// `(epsilon, w(epsilon))` with `w(epsilon) = R_N^{e_N} ... R_1^{e_1} v`.
    pub basis: Vec<(Location, Vec<Rational>)>,
}

impl IrredDescriptor {
    pub fn matches(&self) -> bool {
        self.multiplicity as u128 == self.formula
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|(_, v)| v.clone()).collect()
    }

    /// `d_m = 1` exactly when `m` is outside the shape.
    pub fn d(&self) -> Vec<u8> {
        (1..=self.endpoint.n()).map(|m| u8::from(!self.shape.contains(m))).collect()
    }
}

/// Grid of `epsilon` in `{0,1}^N` vanishing on `lambda`, in lexicographic order.
pub fn epsilon_grid(n: usize, lambda: &Shape) -> Vec<Location> {
    Location::all(n).into_iter().filter(|e| lambda.elems().iter().all(|&m| e.get(m) == 0)).collect()
}

pub fn raise(g: &Generators, eps: Location, v: &[Rational]) -> Vec<Rational> {
    (1..=g.n).filter(|&m| eps.get(m) == 1).fold(v.to_vec(), |acc, m| g.r(m).mul_vec(&acc))
}

pub fn decompose_standard_module(g: &Generators, fam: &ProjectorFamily) -> Vec<IrredDescriptor> {
    let mut out = Vec::new();
    for mu in Location::all(g.n) {
        for lambda in admissible_shapes(mu).into_iter().filter(|l| column_full(mu, l)) {
            let formula = combin::multiplicity_formula(mu, &lambda, g.q).expect("column-full admissible shape");
            let Some(block) = fam.block(mu, &lambda) else {
                out.push(IrredDescriptor {
                    endpoint: mu,
                    shape: lambda.clone(),
                    dim: 1 << (g.n - lambda.len()),
                    multiplicity: 0,
                    formula,
                    generator: Vec::new(),
                    basis: Vec::new(),
                });
                continue;
            };
            let v = block.basis[0].clone();
            let basis = epsilon_grid(g.n, &lambda).into_iter().map(|e| (e, raise(g, e, &v))).collect::<Vec<_>>();
            out.push(IrredDescriptor {
                endpoint: mu,
                shape: lambda.clone(),
                dim: basis.len(),
                multiplicity: block.basis.len(),
                formula,
                generator: v,
                basis,
            });
        }
    }
    out
}

/// Matrices of `ops` on the span of `basis`, or `None` when the span is
/// not invariant.
pub fn restrict<T: Field>(ops: &[SparseMatrix<T>], basis: &[Vec<T>]) -> Option<Vec<DenseMatrix<T>>> {
    let n = basis.first()?.len();
    let solver = CoordinateSolver::new(n, basis)?;
    let d = basis.len();
    ops.iter()
        .map(|op| {
            let mut m = DenseMatrix::zeros(d, d);
            for (j, b) in basis.iter().enumerate() {
                let c = solver.coordinates(&op.mul_vec(b))?;
                for (i, x) in c.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            Some(m)
        })
        .collect()
}

fn check_descriptor_action(g: &Generators, d: &IrredDescriptor) -> Result<(), String> {
    let q = g.q_rational();
    let mu = d.endpoint;
    let lookup: BTreeMap<Location, &Vec<Rational>> = d.basis.iter().map(|(e, v)| (*e, v)).collect();
    let zero = vec![Rational::zero(); g.dim];
    let label = |e: &Location, what: &str| format!("endpoint={mu} shape={} eps={e}: {what}", d.shape);
    for (eps, w) in &d.basis {
        if w.iter().all(|x| x.is_zero()) {
            return Err(label(eps, "w(eps) = 0"));
        }
        for m in 1..=g.n {
            let before: i64 = (1..m).map(|i| eps.get(i) as i64).sum();
            let after: i64 = (m + 1..=g.n).map(|i| eps.get(i) as i64).sum();
            let lw = g.l(m).mul_vec(w);
            let want_l = match eps.shifted(m, -1).and_then(|e| lookup.get(&e)) {
                Some(target) if eps.get(m) == 1 => {
                    let c = rat_pow(&q, kappa(m, mu, &d.shape).unwrap() - before);
                    target.iter().map(|x| x * &c).collect()
                }
                _ => zero.clone(),
            };
            if lw != want_l {
                return Err(label(eps, &format!("L_{m} coefficient")));
            }
            let rw = g.r(m).mul_vec(w);
            let want_r = match eps.shifted(m, 1).and_then(|e| lookup.get(&e)) {
                Some(target) => {
                    let c = rat_pow(&q, after);
                    target.iter().map(|x| x * &c).collect()
                }
                None => zero.clone(),
            };
            if rw != want_r {
                return Err(label(eps, &format!("R_{m} coefficient")));
            }
            let kw = g.k(m).mul_vec(&lift_vec(w));
            let scalar = q_half_pow(g.q, 1 - 2 * (mu.get(m) as i64 + eps.get(m) as i64));
            let want_k: Vec<SqrtExt> = lift_vec(w).iter().map(|x| x.clone() * scalar.clone()).collect();
            if kw != want_k {
                return Err(label(eps, &format!("K_{m} eigenvalue")));
            }
        }
    }
    Ok(())
}

/// Commutant dimension of the generators restricted to `H v`.
pub fn module_commutant_dimension(g: &Generators, d: &IrredDescriptor) -> Option<usize> {
    let basis: Vec<Vec<SqrtExt>> = d.basis.iter().map(|(_, v)| lift_vec(v)).collect();
    let mut ops: Vec<SparseMatrix<SqrtExt>> = g.k.clone();
    ops.extend(g.l.iter().map(lift));
    ops.extend(g.r.iter().map(lift));
    let mats = restrict(&ops, &basis)?;
    Some(commutant_dimension(&mats))
}

pub fn verify_decomposition(lat: &Lattice, g: &Generators, descs: &[IrredDescriptor]) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::from_result("multiplicity equals the closed-form count", {
        descs.iter().try_for_each(|d| {
            if d.matches() {
                Ok(())
            } else {
                Err(format!(
                    "endpoint={} shape={}: multiplicity {} formula {}",
                    d.endpoint, d.shape, d.multiplicity, d.formula
                ))
            }
        })
    }));
    out.push(Check::from_result("sum of dim * multiplicity = |P|", {
        let total: usize = descs.iter().map(|d| d.dim * d.multiplicity).sum();
        if total == lat.len() {
            Ok(())
        } else {
            Err(format!("{total} != {}", lat.len()))
        }
    }));
    out.push(Check::from_result("w(eps) basis: dimension 2^(N - |lambda|) and independence", {
        descs.iter().filter(|d| d.multiplicity > 0).try_for_each(|d| {
            let want = 1usize << (g.n - d.shape.len());
            let rank = crate::linalg::rank_of(g.dim, &d.basis_vectors());
            if d.dim == want && rank == want {
                Ok(())
            } else {
                Err(format!("endpoint={} shape={}: dim {} rank {rank}", d.endpoint, d.shape, d.dim))
            }
        })
    }));
    out.push(Check::from_result("L_m, R_m, K_m act on w(eps) by the closed-form coefficients", {
        descs.iter().filter(|d| d.multiplicity > 0).try_for_each(|d| check_descriptor_action(g, d))
    }));
    out.push(Check::from_result("each H v has commutant dimension 1", {
        descs.iter().filter(|d| d.multiplicity > 0).try_for_each(|d| match module_commutant_dimension(g, d) {
            Some(1) => Ok(()),
            Some(k) => Err(format!("endpoint={} shape={}: commutant dimension {k}", d.endpoint, d.shape)),
            None => Err(format!("endpoint={} shape={}: span is not invariant", d.endpoint, d.shape)),
        })
    }));
    out
}

/// `V_new = ∩ ker L_m` and `V_old = ∩ ker R_m`, per location block.
#[derive(Clone, Debug)]
pub struct KernelSpaces {
    pub new: Vec<(Location, Vec<Vec<Rational>>)>,
    pub old: Vec<(Location, Vec<Vec<Rational>>)>,
}

impl KernelSpaces {
    pub fn new_dim(&self) -> usize {
        self.new.iter().map(|(_, b)| b.len()).sum()
    }

    pub fn old_dim(&self) -> usize {
        self.old.iter().map(|(_, b)| b.len()).sum()
    }
}

fn joint_kernel(g: &Generators, ops: &[SparseMatrix<Rational>], range: &Range<usize>) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for op in ops {
        let t = op.transpose();
        // Row i of op restricted to the block columns.
        let mut local: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for j in range.clone() {
            for (i, v) in t.row(j) {
                local.entry(*i).or_insert_with(|| vec![Rational::zero(); range.len()])[j - range.start] = v.clone();
            }
        }
        rows.extend(local.into_values());
    }
    let null = if rows.is_empty() {
        (0..range.len())
            .map(|i| (0..range.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        DenseMatrix::from_rows(rows).nullspace()
    };
    null.into_iter()
        .map(|c| {
            let mut v = vec![Rational::zero(); g.dim];
            v[range.clone()].clone_from_slice(&c);
            v
        })
        .collect()
}

pub fn kernel_spaces(g: &Generators) -> KernelSpaces {
    let new = g.buckets.iter().map(|(mu, r)| (*mu, joint_kernel(g, &g.l, r))).collect();
    let old = g.buckets.iter().map(|(mu, r)| (*mu, joint_kernel(g, &g.r, r))).collect();
    KernelSpaces { new, old }
}

/// `V_new` is the sum of the blocks with column-full shape and `V_old` the
/// sum of the blocks with row-full shape.
pub fn verify_kernel_spaces(g: &Generators, fam: &ProjectorFamily, ks: &KernelSpaces) -> Vec<Check> {
    let side = |spaces: &Vec<(Location, Vec<Vec<Rational>>)>, full: &dyn Fn(Location, &Shape) -> bool| {
        for (mu, basis) in spaces {
            let expected: Vec<Vec<Rational>> = fam
                .blocks
                .iter()
                .filter(|b| b.mu == *mu && full(*mu, &b.lambda))
                .flat_map(|b| b.basis.iter().cloned())
                .collect();
            if !same_span(g.dim, basis, &expected) {
                return Err(format!(
                    "mu={mu}: kernel dimension {} vs block sum {}",
                    basis.len(),
                    span_basis(g.dim, &expected).len()
                ));
            }
        }
        Ok(())
    };
    vec![
        Check::from_result("intersection of ker L_m = sum of column-full blocks", side(&ks.new, &column_full)),
        Check::from_result("intersection of ker R_m = sum of row-full blocks", side(&ks.old, &row_full)),
    ]
}
