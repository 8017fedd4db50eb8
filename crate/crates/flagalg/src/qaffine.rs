//! The quantum affine algebra `U_{q^(1/2)}(sl_2^)` acting on the standard
//! module through the Chevalley generators, evaluation-module tensor
//! products, and the isomorphisms between them.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{compare, lift, restrict, Check, Generators, IrredDescriptor, ProjectorFamily};
use crate::combin::{self, kappa};
use crate::exactnum::{q_half_pow, quantum_int, rat, rat_pow, Rational, SqrtExt};
use crate::lattice::Location;
use crate::linalg::{commutant_dimension, rank_of, CoordinateSolver, DenseMatrix, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QaffineError {
    #[error("alpha_{0} must be nonzero")]
    ZeroAlpha(usize),
    #[error("expected {expected} evaluation parameters, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("block mu={mu} lambda={lambda}: {what}")]
    Block { mu: Location, lambda: String, what: String },
}

/// `alpha_m = q^(2m)`.
pub fn default_alphas(q: u64, n: usize) -> Vec<Rational> {
    (1..=n).map(|m| rat_pow(&rat(q as i64), 2 * m as i64)).collect()
}

/// The operators `(L_m R_m)^{-1} L_m` and `(R_m L_m)^{-1} R_m`.
#[derive(Clone, Debug)]
pub struct PseudoInvAction {
    pub l: Vec<SparseMatrix<Rational>>,
    pub r: Vec<SparseMatrix<Rational>>,
}

impl PseudoInvAction {
    pub fn l(&self, m: usize) -> &SparseMatrix<Rational> {
        &self.l[m - 1]
    }

    pub fn r(&self, m: usize) -> &SparseMatrix<Rational> {
        &self.r[m - 1]
    }
}

/// On each block `E*_mu E_lambda V` the operator is `q^(-kappa) L_m` when
/// `L_m` acts nonzero there and zero otherwise; likewise for `R_m`.
pub fn build_pseudo_inverse_actions(g: &Generators, fam: &ProjectorFamily) -> Result<PseudoInvAction, QaffineError> {
    let (n, dim) = (g.n(), g.dim());
    let q = g.q_rational();
    let mut l = vec![SparseMatrix::zeros(dim, dim); n];
    let mut r = vec![SparseMatrix::zeros(dim, dim); n];
    for b in &fam.blocks {
        let proj = fam.projector(&b.lambda).expect("projector for every block shape");
        let piece = g.e_star(b.mu).mul(proj);
        let t = b.mu.t_set();
        let s = b.mu.s_set();
        for m in 1..=n {
            if b.lambda.contains(m) {
                continue;
            }
            let k = kappa(m, b.mu, &b.lambda).map_err(|e| QaffineError::Block {
                mu: b.mu,
                lambda: b.lambda.to_string(),
                what: e.to_string(),
            })?;
            let scale = rat_pow(&q, -k);
            let err = |what: &str| QaffineError::Block { mu: b.mu, lambda: b.lambda.to_string(), what: what.into() };
            if t.contains(&m) {
                let rl = g.r(m).mul(g.l(m)).mul(&piece);
                if rl != piece.scale(&rat_pow(&q, k)) {
                    return Err(err(&format!("L_{m} acts nonzero but R_{m}L_{m} is not q^kappa")));
                }
                l[m - 1] = l[m - 1].add(&g.l(m).mul(&piece).scale(&scale));
            }
            if s.contains(&m) {
                let lr = g.l(m).mul(g.r(m)).mul(&piece);
                if lr != piece.scale(&rat_pow(&q, k)) {
                    return Err(err(&format!("R_{m} acts nonzero but L_{m}R_{m} is not q^kappa")));
                }
                r[m - 1] = r[m - 1].add(&g.r(m).mul(&piece).scale(&scale));
            }
        }
    }
    Ok(PseudoInvAction { l, r })
}

fn blocks_where(
    g: &Generators,
    fam: &ProjectorFamily,
    pred: impl Fn(Location, &combin::Shape) -> bool,
) -> SparseMatrix<Rational> {
    let dim = g.dim();
    fam.blocks
        .iter()
        .filter(|b| pred(b.mu, &b.lambda))
        .fold(SparseMatrix::zeros(dim, dim), |acc, b| acc.add(&g.e_star(b.mu).mul(fam.projector(&b.lambda).unwrap())))
}

pub fn verify_pseudo_inverse(g: &Generators, fam: &ProjectorFamily, p: &PseudoInvAction) -> Vec<Check> {
    let n = g.n();
    let mut out = Vec::new();
    out.push(Check::from_result("(L_m R_m) (L_m R_m)^{-1} L_m = L_m", {
        (1..=n).try_for_each(|m| compare(&g.l(m).mul(g.r(m)).mul(p.l(m)), g.l(m), || format!("m={m}")))
    }));
    out.push(Check::from_result("(R_m L_m) (R_m L_m)^{-1} R_m = R_m", {
        (1..=n).try_for_each(|m| compare(&g.r(m).mul(g.l(m)).mul(p.r(m)), g.r(m), || format!("m={m}")))
    }));
    out.push(Check::from_result("(L_m R_m)^{-1} L_m R_m projects onto blocks with m in S_mu outside lambda", {
        (1..=n).try_for_each(|m| {
            let want = blocks_where(g, fam, |mu, lambda| mu.get(m) == 0 && !lambda.contains(m));
            compare(&p.l(m).mul(g.r(m)), &want, || format!("m={m}"))
        })
    }));
    out.push(Check::from_result("(R_m L_m)^{-1} R_m L_m projects onto blocks with m in T_mu outside lambda", {
        (1..=n).try_for_each(|m| {
            let want = blocks_where(g, fam, |mu, lambda| mu.get(m) == 1 && !lambda.contains(m));
            compare(&p.r(m).mul(g.l(m)), &want, || format!("m={m}"))
        })
    }));
    out
}

/// Names of the six Chevalley generators in the order used throughout.
pub const GENERATOR_NAMES: [&str; 6] = ["e0+", "e1+", "e0-", "e1-", "k0", "k1"];

/// Six generator matrices plus the inverses of `k0`, `k1`.
#[derive(Clone, Debug)]
pub struct UqMatrices {
    pub q: u64,
    pub e0_plus: SparseMatrix<SqrtExt>,
    pub e1_plus: SparseMatrix<SqrtExt>,
    pub e0_minus: SparseMatrix<SqrtExt>,
    pub e1_minus: SparseMatrix<SqrtExt>,
    pub k0: SparseMatrix<SqrtExt>,
    pub k1: SparseMatrix<SqrtExt>,
    pub k0_inv: SparseMatrix<SqrtExt>,
    pub k1_inv: SparseMatrix<SqrtExt>,
}

impl UqMatrices {
    pub fn generators(&self) -> [&SparseMatrix<SqrtExt>; 6] {
        [&self.e0_plus, &self.e1_plus, &self.e0_minus, &self.e1_minus, &self.k0, &self.k1]
    }

    pub fn dim(&self) -> usize {
        self.k0.n_rows()
    }

    fn e(&self, i: usize, plus: bool) -> &SparseMatrix<SqrtExt> {
        match (i, plus) {
            (0, true) => &self.e0_plus,
            (1, true) => &self.e1_plus,
            (0, false) => &self.e0_minus,
            _ => &self.e1_minus,
        }
    }

    fn k(&self, i: usize) -> (&SparseMatrix<SqrtExt>, &SparseMatrix<SqrtExt>) {
        if i == 0 {
            (&self.k0, &self.k0_inv)
        } else {
            (&self.k1, &self.k1_inv)
        }
    }
}

/// The Chevalley generators acting on the standard module.
#[derive(Clone, Debug)]
pub struct ChevalleyAction {
    pub alphas: Vec<Rational>,
    pub mats: UqMatrices,
}

fn check_alphas(n: usize, alphas: &[Rational]) -> Result<(), QaffineError> {
    if alphas.len() != n {
        return Err(QaffineError::WrongLength { expected: n, got: alphas.len() });
    }
    match alphas.iter().position(|a| a.is_zero()) {
        Some(i) => Err(QaffineError::ZeroAlpha(i + 1)),
        None => Ok(()),
    }
}

pub fn build_chevalley(
    g: &Generators,
    p: &PseudoInvAction,
    alphas: &[Rational],
) -> Result<ChevalleyAction, QaffineError> {
    let (q, n, dim) = (g.q(), g.n(), g.dim());
    check_alphas(n, alphas)?;
    let zero = SparseMatrix::<Rational>::zeros(dim, dim);
    let sum = |f: &dyn Fn(usize) -> SparseMatrix<Rational>| (1..=n).fold(zero.clone(), |acc, m| acc.add(&f(m)));
    let shift = n as i64 - 1;
    let e0_plus = lift(&sum(&|m| g.r(m).scale(&alphas[m - 1]))).scale(&q_half_pow(q, -shift));
    let e1_plus = lift(&sum(&|m| p.l(m).clone())).scale(&q_half_pow(q, shift));
    let e0_minus = lift(&sum(&|m| g.l(m).scale(&alphas[m - 1].recip())));
    let e1_minus = lift(&sum(&|m| p.r(m).clone()));
    let prod = |ks: &[SparseMatrix<SqrtExt>]| ks.iter().fold(SparseMatrix::identity(dim), |acc, k| acc.mul(k));
    let k1 = prod(&g.k);
    let k0 = prod(&g.k_inv);
    let mats = UqMatrices { q, e0_plus, e1_plus, e0_minus, e1_minus, k0_inv: k1.clone(), k1_inv: k0.clone(), k0, k1 };
    Ok(ChevalleyAction { alphas: alphas.to_vec(), mats })
}

/// The defining relations at parameter `Q = q^(1/2)`, one check per family.
pub fn verify_uq_relations(a: &UqMatrices) -> Vec<Check> {
    let dim = a.dim();
    let id = SparseMatrix::<SqrtExt>::identity(dim);
    let zero = SparseMatrix::<SqrtExt>::zeros(dim, dim);
    let qs = SqrtExt::from_int(a.q as i64);
    let qs_inv = SqrtExt::from_rational(Rational::new(1.into(), (a.q as i64).into()));
    let sign = |plus: bool| if plus { "+" } else { "-" };
    let mut out = Vec::new();
    out.push(Check::from_result("k_i k_i^-1 = k_i^-1 k_i = 1", {
        (0..2).try_for_each(|i| {
            let (k, ki) = a.k(i);
            compare(&k.mul(ki), &id, || format!("i={i}"))?;
            compare(&ki.mul(k), &id, || format!("i={i}, reversed"))
        })
    }));
    out.push(Check::from_result("k_0 k_1 = k_1 k_0", compare(&a.k0.mul(&a.k1), &a.k1.mul(&a.k0), String::new)));
    out.push(Check::from_result("k_i e_i^(+-) = q^(+-1) e_i^(+-) k_i", {
        (0..2).try_for_each(|i| {
            [true, false].into_iter().try_for_each(|plus| {
                let e = a.e(i, plus);
                let c = if plus { &qs } else { &qs_inv };
                compare(&a.k(i).0.mul(e), &e.mul(a.k(i).0).scale(c), || format!("i={i} e{i}{}", sign(plus)))
            })
        })
    }));
    out.push(Check::from_result("k_i e_j^(+-) = q^(-+1) e_j^(+-) k_i (i != j)", {
        (0..2).try_for_each(|i| {
            [true, false].into_iter().try_for_each(|plus| {
                let j = 1 - i;
                let e = a.e(j, plus);
                let c = if plus { &qs_inv } else { &qs };
                compare(&a.k(i).0.mul(e), &e.mul(a.k(i).0).scale(c), || format!("i={i} e{j}{}", sign(plus)))
            })
        })
    }));
    let denom_inv = (q_half_pow(a.q, 1) - q_half_pow(a.q, -1)).inverse().expect("q > 1");
    out.push(Check::from_result("e_i^+ e_i^- - e_i^- e_i^+ = (k_i - k_i^-1)/(Q - Q^-1)", {
        (0..2).try_for_each(|i| {
            let (ep, em) = (a.e(i, true), a.e(i, false));
            let (k, ki) = a.k(i);
            compare(&ep.mul(em).sub(&em.mul(ep)), &k.sub(ki).scale(&denom_inv), || format!("i={i}"))
        })
    }));
    out.push(Check::from_result("e_0^(+-) e_1^(-+) = e_1^(-+) e_0^(+-)", {
        [true, false].into_iter().try_for_each(|plus| {
            let (x, y) = (a.e(0, plus), a.e(1, !plus));
            compare(&x.mul(y), &y.mul(x), || format!("e0{} e1{}", sign(plus), sign(!plus)))
        })
    }));
    let three = quantum_int(a.q, 3);
    out.push(Check::from_result("q-Serre relations", {
        [(0, 1), (1, 0)].into_iter().try_for_each(|(i, j)| {
            [true, false].into_iter().try_for_each(|plus| {
                let (x, y) = (a.e(i, plus), a.e(j, plus));
                let x2 = x.mul(x);
                let x3 = x2.mul(x);
                let lhs = x3
                    .mul(y)
                    .sub(&x2.mul(y).mul(x).scale(&three))
                    .add(&x.mul(y).mul(&x2).scale(&three))
                    .sub(&y.mul(&x3));
                compare(&lhs, &zero, || format!("i={i} j={j} sign {}", sign(plus)))
            })
        })
    }));
    out
}

/// Re-derives the scalar by which `e_0^+ e_0^- - e_0^- e_0^+` acts on each
/// block and compares it with the `q^kappa` identity and with `k_0`.
pub fn check_commutator_scalars(g: &Generators, fam: &ProjectorFamily, act: &ChevalleyAction) -> Check {
    let a = &act.mats;
    let q = g.q();
    let n = g.n() as i64;
    let comm = a.e0_plus.mul(&a.e0_minus).sub(&a.e0_minus.mul(&a.e0_plus));
    let denom_inv = (q_half_pow(q, 1) - q_half_pow(q, -1)).inverse().expect("q > 1");
    let result = fam.blocks.iter().try_for_each(|b| {
        let label = format!("mu={} lambda={}", b.mu, b.lambda);
        let (lhs, rhs) =
            combin::kappa_q_identity(b.mu, &b.lambda, &g.q_rational()).map_err(|e| format!("{label}: {e}"))?;
        if lhs != rhs {
            return Err(format!("{label}: q^kappa identity {lhs} != {rhs}"));
        }
        // e0+e0- - e0-e0+ = Q^(1-N) sum_m (R_m L_m - L_m R_m), and on the
        // block R_m L_m - L_m R_m = -(-1)^{mu_m} q^kappa for m outside lambda.
        let scalar = SqrtExt::from_rational(-lhs) * q_half_pow(q, 1 - n);
        let k_scalar = (q_half_pow(q, 2 * b.mu.weight() as i64 - n) - q_half_pow(q, n - 2 * b.mu.weight() as i64))
            * denom_inv.clone();
        if scalar != k_scalar {
            return Err(format!("{label}: scalar {scalar} but k_0 gives {k_scalar}"));
        }
        for v in &b.basis {
            let lv: Vec<SqrtExt> = v.iter().map(|x| SqrtExt::from_rational(x.clone())).collect();
            let got = comm.mul_vec(&lv);
            if got.iter().zip(&lv).any(|(x, y)| *x != y.clone() * scalar.clone()) {
                return Err(format!("{label}: commutator is not the scalar {scalar}"));
            }
        }
        Ok(())
    });
    Check::from_result("e_0 commutator scalar matches the q^kappa identity on every block", result)
}

/// `V_{d_1}(alpha_1) ⊗ ... ⊗ V_{d_N}(alpha_N)` on the basis `u(epsilon)`,
/// `0 <= epsilon_m <= d_m`, with the first coordinate most significant.
#[derive(Clone, Debug)]
pub struct EvalTensor {
    pub d: Vec<u32>,
    pub alphas: Vec<Rational>,
    pub basis: Vec<Vec<u32>>,
    pub mats: UqMatrices,
}

impl EvalTensor {
    pub fn index_of(&self, eps: &[u32]) -> Option<usize> {
        if eps.len() != self.d.len() || eps.iter().zip(&self.d).any(|(e, d)| e > d) {
            return None;
        }
        Some(eps.iter().zip(&self.d).fold(0, |acc, (&e, &d)| acc * (d as usize + 1) + e as usize))
    }
}

fn grid(d: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &dm in d {
        out = out.into_iter().flat_map(|p| (0..=dm).map(move |e| [p.clone(), vec![e]].concat())).collect();
    }
    out
}

pub fn build_eval_tensor(d: &[u32], alphas: &[Rational], q: u64) -> Result<EvalTensor, QaffineError> {
    let n = d.len();
    check_alphas(n, alphas)?;
    let basis = grid(d);
    let dim = basis.len();
    let mut t = EvalTensor {
        d: d.to_vec(),
        alphas: alphas.to_vec(),
        basis: basis.clone(),
        mats: UqMatrices {
            q,
            e0_plus: SparseMatrix::zeros(dim, dim),
            e1_plus: SparseMatrix::zeros(dim, dim),
            e0_minus: SparseMatrix::zeros(dim, dim),
            e1_minus: SparseMatrix::zeros(dim, dim),
            k0: SparseMatrix::zeros(dim, dim),
            k1: SparseMatrix::zeros(dim, dim),
            k0_inv: SparseMatrix::zeros(dim, dim),
            k1_inv: SparseMatrix::zeros(dim, dim),
        },
    };
    let total_d: i64 = d.iter().map(|&x| x as i64).sum();
    let (mut e0p, mut e1p, mut e0m, mut e1m) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut k0 = Vec::new();
    for (j, eps) in basis.iter().enumerate() {
        let e: Vec<i64> = eps.iter().map(|&x| x as i64).collect();
        let dd: Vec<i64> = d.iter().map(|&x| x as i64).collect();
        let sum = |v: &[i64], r: std::ops::Range<usize>| -> i64 { v[r].iter().sum() };
        for m in 0..n {
            let (e_lt, d_lt) = (sum(&e, 0..m), sum(&dd, 0..m));
            let (e_gt, d_gt) = (sum(&e, m + 1..n), sum(&dd, m + 1..n));
            let alpha = SqrtExt::from_rational(alphas[m].clone());
            let alpha_inv = SqrtExt::from_rational(alphas[m].recip());
            if e[m] < dd[m] {
                let mut up = eps.clone();
                up[m] += 1;
                let i = t.index_of(&up).unwrap();
                let raise = quantum_int(q, (e[m] + 1) as u32);
                e0p.push((i, j, alpha * raise.clone() * q_half_pow(q, 2 * e_gt - d_gt)));
                e1m.push((i, j, raise * q_half_pow(q, 2 * e_lt - d_lt)));
            }
            if e[m] > 0 {
                let mut down = eps.clone();
                down[m] -= 1;
                let i = t.index_of(&down).unwrap();
                let lower = quantum_int(q, (dd[m] - e[m] + 1) as u32);
                e1p.push((i, j, lower.clone() * q_half_pow(q, d_gt - 2 * e_gt)));
                e0m.push((i, j, alpha_inv * lower * q_half_pow(q, d_lt - 2 * e_lt)));
            }
        }
        k0.push(2 * e.iter().sum::<i64>() - total_d);
    }
    let m = &mut t.mats;
    m.e0_plus = SparseMatrix::from_triplets(dim, dim, e0p);
    m.e1_plus = SparseMatrix::from_triplets(dim, dim, e1p);
    m.e0_minus = SparseMatrix::from_triplets(dim, dim, e0m);
    m.e1_minus = SparseMatrix::from_triplets(dim, dim, e1m);
    m.k0 = SparseMatrix::diagonal(k0.iter().map(|&x| q_half_pow(q, x)).collect());
    m.k1 = SparseMatrix::diagonal(k0.iter().map(|&x| q_half_pow(q, -x)).collect());
    m.k0_inv = m.k1.clone();
    m.k1_inv = m.k0.clone();
    Ok(t)
}

/// `gamma(epsilon) = q^(|epsilon|(1-N)/2) prod_{epsilon_m = 1} q^((d_{m+1}+...+d_N)/2)`.
pub fn gamma(eps: &[u32], d: &[u32], q: u64) -> SqrtExt {
    let n = d.len() as i64;
    let weight: i64 = eps.iter().map(|&x| x as i64).sum();
    let tail: i64 =
        (0..d.len()).filter(|&m| eps[m] == 1).map(|m| d[m + 1..].iter().map(|&x| x as i64).sum::<i64>()).sum();
    q_half_pow(q, weight * (1 - n) + tail)
}

/// The six generators restricted to `H v`, in the `w(epsilon)` basis.
pub fn restrict_to_descriptor(a: &UqMatrices, desc: &IrredDescriptor) -> Option<Vec<DenseMatrix<SqrtExt>>> {
    let basis: Vec<Vec<SqrtExt>> =
        desc.basis.iter().map(|(_, v)| v.iter().map(|x| SqrtExt::from_rational(x.clone())).collect()).collect();
    let ops: Vec<SparseMatrix<SqrtExt>> = a.generators().into_iter().cloned().collect();
    restrict(&ops, &basis)
}

/// The map `u(epsilon) -> gamma(epsilon) w(epsilon)` from the tensor
/// product onto `H v`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub d: Vec<u32>,
    pub gammas: Vec<SqrtExt>,
}

impl Intertwiner {
    pub fn matrix(&self) -> DenseMatrix<SqrtExt> {
        let k = self.gammas.len();
        let mut m = DenseMatrix::zeros(k, k);
        for (i, g) in self.gammas.iter().enumerate() {
            m.set(i, i, g.clone());
        }
        m
    }
}

/// Builds the isomorphism for `desc` and checks that it commutes with all
/// six generators.
pub fn build_intertwiner(act: &ChevalleyAction, desc: &IrredDescriptor) -> Result<Intertwiner, String> {
    let q = act.mats.q;
    let d: Vec<u32> = desc.d().into_iter().map(u32::from).collect();
    let tensor = build_eval_tensor(&d, &act.alphas, q).map_err(|e| e.to_string())?;
    if tensor.basis.len() != desc.basis.len() {
        return Err(format!("dimension {} versus {}", tensor.basis.len(), desc.basis.len()));
    }
    for ((eps, _), u) in desc.basis.iter().zip(&tensor.basis) {
        let e: Vec<u32> = eps.to_vec().into_iter().map(u32::from).collect();
        if e != *u {
            return Err(format!("basis order differs at epsilon={eps}"));
        }
    }
    let gammas: Vec<SqrtExt> = tensor.basis.iter().map(|e| gamma(e, &d, q)).collect();
    let phi = Intertwiner { d, gammas };
    let on_w = restrict_to_descriptor(&act.mats, desc).ok_or_else(|| "H v is not invariant".to_string())?;
    let p = phi.matrix();
    for (k, (w, u)) in on_w.iter().zip(tensor.mats.generators()).enumerate() {
        let lhs = w.mul(&p);
        let rhs = p.mul(&u.to_dense());
        for j in 0..lhs.cols() {
            if (0..lhs.rows()).any(|i| lhs.get(i, j) != rhs.get(i, j)) {
                return Err(format!("generator {} fails at epsilon={:?}", GENERATOR_NAMES[k], tensor.basis[j]));
            }
        }
    }
    if phi.gammas.iter().any(|g| g.is_zero()) {
        return Err("gamma vanishes".into());
    }
    Ok(phi)
}

/// Every eigenvalue of `k_0` and `k_1` on every irreducible block is a
/// positive integral power of `q^(1/2)`.
pub fn check_type_one_one(act: &ChevalleyAction, descs: &[IrredDescriptor]) -> Check {
    let q = act.mats.q;
    let n = act.alphas.len() as i64;
    let result = descs.iter().filter(|d| d.multiplicity > 0).try_for_each(|d| {
        let mats = restrict_to_descriptor(&act.mats, d).ok_or("H v is not invariant")?;
        for (i, (eps, _)) in d.basis.iter().enumerate() {
            let e = (d.endpoint.weight() + eps.weight()) as i64;
            for (k, sign) in [(4usize, 1i64), (5, -1)] {
                let m = &mats[k];
                if (0..m.rows()).any(|j| j != i && !m.get(j, i).is_zero()) {
                    return Err(format!("{} is not diagonal on w({eps})", GENERATOR_NAMES[k]));
                }
                let x = m.get(i, i);
                let exact = (-2 * n..=2 * n).any(|j| *x == q_half_pow(q, j));
                let want = q_half_pow(q, sign * (2 * e - n));
                if !exact || *x != want {
                    return Err(format!(
                        "{} eigenvalue {x} on w({eps}) in endpoint {} shape {}",
                        GENERATOR_NAMES[k], d.endpoint, d.shape
                    ));
                }
            }
        }
        Ok(())
    });
    Check::from_result("k eigenvalues are positive integral powers of q^(1/2)", result)
}

/// `S_d(alpha) = {alpha Q^(d-1), alpha Q^(d-3), ..., alpha Q^(1-d)}` with `Q = q^(1/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QString {
    pub q: u64,
    pub center: SqrtExt,
    pub len: u32,
}

impl QString {
    pub fn new(q: u64, center: SqrtExt, len: u32) -> Self {
        QString { q, center, len }
    }

    pub fn elements(&self) -> Vec<SqrtExt> {
        let d = self.len as i64;
        (0..d).map(|j| self.center.clone() * q_half_pow(self.q, d - 1 - 2 * j)).collect()
    }
}

fn dedup(v: Vec<SqrtExt>) -> Vec<SqrtExt> {
    let mut out: Vec<SqrtExt> = Vec::new();
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Whether a finite set is a string: some element lacks a predecessor
/// `x/q`, and multiplying by `q` from there walks through the whole set.
pub fn is_q_string(set: &[SqrtExt], q: u64) -> bool {
    let set = dedup(set.to_vec());
    if set.is_empty() {
        return false;
    }
    let qs = SqrtExt::from_int(q as i64);
    let q_inv = SqrtExt::from_rational(Rational::new(1.into(), (q as i64).into()));
    set.iter().any(|start| {
        if set.contains(&(start.clone() * q_inv.clone())) {
            return false;
        }
        let mut x = start.clone();
        let mut seen = 1;
        while set.contains(&(x.clone() * qs.clone())) {
            x = x * qs.clone();
            seen += 1;
        }
        seen == set.len()
    })
}

/// Two strings are in general position when their union is not a string
/// or one contains the other.
pub fn strings_in_general_position(a: &QString, b: &QString) -> bool {
    let (ea, eb) = (a.elements(), b.elements());
    if ea.iter().all(|x| eb.contains(x)) || eb.iter().all(|x| ea.contains(x)) {
        return true;
    }
    !is_q_string(&[ea, eb].concat(), a.q)
}

pub fn check_general_position(d: &[u32], alphas: &[Rational], q: u64) -> bool {
    let strings: Vec<QString> = d
        .iter()
        .zip(alphas)
        .filter(|(&dm, _)| dm > 0)
        .map(|(&dm, a)| QString::new(q, SqrtExt::from_rational(a.clone()), dm))
        .collect();
    strings.iter().enumerate().all(|(i, a)| strings[i + 1..].iter().all(|b| strings_in_general_position(a, b)))
}

/// Dimension of the commutant of the given operators.
pub fn module_commutant(mats: &[DenseMatrix<SqrtExt>]) -> usize {
    commutant_dimension(mats)
}

pub fn check_module_irreducible(mats: &[DenseMatrix<SqrtExt>]) -> bool {
    module_commutant(mats) == 1
}

/// Smallest invariant subspace containing `v`.
pub fn cyclic_submodule(mats: &[DenseMatrix<SqrtExt>], v: &[SqrtExt]) -> Vec<Vec<SqrtExt>> {
    let n = v.len();
    let mut basis = vec![v.to_vec()];
    let mut queue = vec![v.to_vec()];
    while let Some(x) = queue.pop() {
        for m in mats {
            let y = m.mul_vec(&x);
            let mut trial = basis.clone();
            trial.push(y.clone());
            if rank_of(n, &trial) > basis.len() {
                basis.push(y.clone());
                queue.push(y);
            }
        }
    }
    basis
}

/// A proper nonzero invariant subspace of a module given by the six
/// generator matrices in `GENERATOR_NAMES` order, with `k_0` diagonal. Any
/// nonzero submodule contains a vector of extremal `k_0`-weight killed by
/// the raising operators `e_0^+`, `e_1^-` (or the lowering ones); the
/// search tries a basis of each such kernel.
pub fn proper_submodule(mats: &[DenseMatrix<SqrtExt>]) -> Option<Vec<Vec<SqrtExt>>> {
    let d = mats[4].rows();
    let mut weights: Vec<SqrtExt> = Vec::new();
    for i in 0..d {
        let w = mats[4].get(i, i).clone();
        if !weights.contains(&w) {
            weights.push(w);
        }
    }
    for pair in [[0usize, 3], [2, 1]] {
        for w in &weights {
            let idx: Vec<usize> = (0..d).filter(|&i| mats[4].get(i, i) == w).collect();
            let mut rows = Vec::new();
            for &k in &pair {
                for i in 0..d {
                    rows.push(idx.iter().map(|&j| mats[k].get(i, j).clone()).collect::<Vec<_>>());
                }
            }
            for coeffs in DenseMatrix::from_rows(rows).nullspace() {
                let mut v = vec![SqrtExt::zero(); d];
                for (c, &j) in coeffs.into_iter().zip(&idx) {
                    v[j] = c;
                }
                let sub = cyclic_submodule(mats, &v);
                if sub.len() < d {
                    return Some(sub);
                }
            }
        }
    }
    None
}

/// Checks that a claimed subspace is invariant under every operator.
pub fn is_invariant(mats: &[DenseMatrix<SqrtExt>], sub: &[Vec<SqrtExt>]) -> bool {
    let Some(n) = sub.first().map(|v| v.len()) else { return true };
    let Some(solver) = CoordinateSolver::new(n, sub) else { return false };
    mats.iter().all(|m| sub.iter().all(|v| solver.coordinates(&m.mul_vec(v)).is_some()))
}

/// Per-descriptor outcome of the quantum affine checks.
#[derive(Clone, Debug)]
pub struct DescriptorReport {
    pub endpoint: Location,
    pub shape: combin::Shape,
    pub intertwiner: Result<(), String>,
    pub general_position: bool,
    pub commutant: Option<usize>,
}

impl DescriptorReport {
    pub fn irreducible(&self) -> bool {
        self.commutant == Some(1)
    }
}

pub fn descriptor_reports(act: &ChevalleyAction, descs: &[IrredDescriptor]) -> Vec<DescriptorReport> {
    descs
        .iter()
        .filter(|d| d.multiplicity > 0)
        .map(|desc| {
            let d: Vec<u32> = desc.d().into_iter().map(u32::from).collect();
            DescriptorReport {
                endpoint: desc.endpoint,
                shape: desc.shape.clone(),
                intertwiner: build_intertwiner(act, desc).map(|_| ()),
                general_position: check_general_position(&d, &act.alphas, act.mats.q),
                commutant: restrict_to_descriptor(&act.mats, desc).map(|m| module_commutant(&m)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_e_lambda, build_generators, decompose_standard_module};
    use crate::gf::GaloisField;
    use crate::lattice::enumerate_lattice;
    use num_traits::One;

    fn setup(q: u64, n: usize) -> (Generators, ProjectorFamily) {
        let lat = enumerate_lattice(&GaloisField::builtin(q).unwrap(), n, None).unwrap();
        let g = build_generators(&lat);
        let fam = build_e_lambda(&g).unwrap();
        (g, fam)
    }

    #[test]
    fn pseudo_inverse_scale_on_top_block() {
        let (g, fam) = setup(2, 2);
        let p = build_pseudo_inverse_actions(&g, &fam).unwrap();
        let top = g.bucket(Location::ones(2)).start;
        let col: Vec<(usize, Rational)> = (0..g.dim())
            .filter_map(|i| {
                let x = p.l(1).get(i, top);
                (!x.is_zero()).then_some((i, x))
            })
            .collect();
        assert!(!col.is_empty());
        assert!(col.iter().all(|(_, x)| *x == Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn chevalley_examples() {
        let (g, fam) = setup(2, 2);
        let p = build_pseudo_inverse_actions(&g, &fam).unwrap();
        let act = build_chevalley(&g, &p, &default_alphas(2, 2)).unwrap();
        let y = g.bucket(Location::zero(2)).start;
        assert_eq!(act.mats.k1.get(y, y), q_half_pow(2, 2));
        assert!(build_chevalley(&g, &p, &[rat(1), rat(0)]).is_err());
        let (g3, fam3) = setup(2, 3);
        let p3 = build_pseudo_inverse_actions(&g3, &fam3).unwrap();
        let act3 = build_chevalley(&g3, &p3, &default_alphas(2, 3)).unwrap();
        assert!(act3.mats.generators()[..4].iter().all(|m| m.entries().all(|(_, _, x)| x.is_rational())));
        let y3 = g3.bucket(Location::zero(3)).start;
        assert_eq!(act3.mats.k1.get(y3, y3), q_half_pow(2, 3));
    }

    #[test]
    fn eval_tensor_examples() {
        let t = build_eval_tensor(&[1], &[rat(5)], 2).unwrap();
        assert_eq!(t.mats.e0_plus.get(1, 0), SqrtExt::from_int(5));
        assert!(t.mats.e0_plus.get(0, 1).is_zero());
        let t0 = build_eval_tensor(&[0, 0], &[rat(1), rat(2)], 3).unwrap();
        assert_eq!(t0.basis.len(), 1);
        assert!(t0.mats.e0_plus.is_zero() && t0.mats.e1_minus.is_zero());
        assert_eq!(t0.mats.k0.get(0, 0), SqrtExt::one());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&[0, 0], &[1, 1], 2), SqrtExt::one());
        assert_eq!(gamma(&[1, 0], &[1, 1], 2), SqrtExt::one());
        assert_eq!(gamma(&[1, 1], &[1, 1], 2), q_half_pow(2, -1));
    }

    #[test]
    fn general_position_examples() {
        assert!(check_general_position(&[1, 1], &[rat(4), rat(16)], 2));
        assert!(!check_general_position(&[1, 1], &[rat(1), rat(2)], 2));
        assert!(check_general_position(&[1, 0], &[rat(1), rat(2)], 2));
    }

    #[test]
    fn small_module_irreducibility() {
        let (g, fam) = setup(2, 2);
        let p = build_pseudo_inverse_actions(&g, &fam).unwrap();
        let descs = decompose_standard_module(&g, &fam);
        let act = build_chevalley(&g, &p, &[rat(4), rat(16)]).unwrap();
        for d in &descs {
            let mats = restrict_to_descriptor(&act.mats, d).unwrap();
            assert!(check_module_irreducible(&mats));
            assert!(proper_submodule(&mats).is_none());
        }
    }
}
