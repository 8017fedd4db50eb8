//! Ferrers boards of 0/1 shape, rook placements and their statistics, the
//! rook placement of a matrix form, and the closed-form counts built on them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{rat, rat_pow, Rational};
use crate::gf::{FqMatrix, GaloisField};
use crate::lattice::{Location, MatrixForm, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinError {
    #[error("cell ({0},{1}) is not on the board")]
    CellOffBoard(usize, usize),
    #[error("shape {lambda} is not admissible for location {mu}")]
    Inadmissible { mu: Location, lambda: Shape },
    #[error("shape {lambda} is not column-full for location {mu}")]
    NotColumnFull { mu: Location, lambda: Shape },
    #[error("cell ({0},{1}) is not in the placement")]
    CellNotInPlacement(usize, usize),
    #[error("q must differ from 0 and 1")]
    DegenerateQ,
}

/// A subset of `{1..N}`, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Shape(elems)
    }

    pub fn empty() -> Self {
        Shape(Vec::new())
    }

    /// Subset of `{1..n}` encoded by bit `m-1` of `mask`.
    pub fn from_mask(n: usize, mask: u32) -> Self {
        Shape((1..=n).filter(|m| mask >> (m - 1) & 1 == 1).collect())
    }

    pub fn mask(&self) -> u32 {
        self.0.iter().fold(0, |acc, m| acc | 1 << (m - 1))
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, m: usize) -> bool {
        self.0.binary_search(&m).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersect(&self, set: &[usize]) -> Vec<usize> {
        self.0.iter().copied().filter(|m| set.contains(m)).collect()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerrersBoard {
    pub mu: Location,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub cells: Vec<(usize, usize)>,
}

pub fn board(mu: Location) -> FerrersBoard {
    FerrersBoard { mu, s: mu.s_set(), t: mu.t_set(), cells: mu.cells() }
}

impl FerrersBoard {
    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.cells.contains(&(s, t))
    }

    /// `S_mu(m) = {s in S_mu : s <= m}`.
    pub fn s_upto(&self, m: usize) -> Vec<usize> {
        self.s.iter().copied().filter(|&s| s <= m).collect()
    }

    /// `T_mu(m) = {t in T_mu : t >= m}`.
    pub fn t_from(&self, m: usize) -> Vec<usize> {
        self.t.iter().copied().filter(|&t| t >= m).collect()
    }

    /// Previous element of `S_mu`, or 0.
    pub fn s_minus(&self, s: usize) -> usize {
        self.s.iter().copied().filter(|&x| x < s).max().unwrap_or(0)
    }

    /// Next element of `T_mu`, or `N+1`.
    pub fn t_plus(&self, t: usize) -> usize {
        self.t.iter().copied().filter(|&x| x > t).min().unwrap_or(self.mu.n() + 1)
    }
}

/// The rectangle `S_mu(s0) x T_mu(t0)` of cells of `B_mu`.
pub fn rectangle(b: &FerrersBoard, s0: usize, t0: usize) -> Result<Vec<(usize, usize)>, CombinError> {
    if !b.contains(s0, t0) {
        return Err(CombinError::CellOffBoard(s0, t0));
    }
    Ok(b.cells.iter().copied().filter(|&(s, t)| s <= s0 && t >= t0).collect())
}

/// `|lambda ∩ S| = |lambda ∩ T|` and the i-th smallest element of
/// `lambda ∩ S` is below the i-th smallest of `lambda ∩ T`.
pub fn admissible_type(mu: Location, lambda: &Shape) -> bool {
    let ls = lambda.intersect(&mu.s_set());
    let lt = lambda.intersect(&mu.t_set());
    ls.len() == lt.len() && ls.iter().zip(&lt).all(|(s, t)| s < t)
}

pub fn column_full(mu: Location, lambda: &Shape) -> bool {
    mu.t_set().iter().all(|&t| lambda.contains(t))
}

pub fn row_full(mu: Location, lambda: &Shape) -> bool {
    mu.s_set().iter().all(|&s| lambda.contains(s))
}

/// Every admissible shape for `mu`, in increasing mask order.
pub fn admissible_shapes(mu: Location) -> Vec<Shape> {
    let n = mu.n();
    let mut v: Vec<Shape> = (0u32..1 << n).map(|m| Shape::from_mask(n, m)).filter(|l| admissible_type(mu, l)).collect();
    v.sort_by_key(|l| l.mask());
    v
}

fn require_admissible(mu: Location, lambda: &Shape) -> Result<(), CombinError> {
    if admissible_type(mu, lambda) {
        Ok(())
    } else {
        Err(CombinError::Inadmissible { mu, lambda: lambda.clone() })
    }
}

/// A set of non-attacking rooks on `B_mu`, cells sorted by row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RookPlacement {
    pub mu: Location,
    pub cells: Vec<(usize, usize)>,
}

impl RookPlacement {
    pub fn new(mu: Location, mut cells: Vec<(usize, usize)>) -> Self {
        cells.sort_unstable();
        RookPlacement { mu, cells }
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.cells.contains(&(s, t))
    }

    pub fn rows(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.0).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells.iter().map(|c| c.1).collect();
        v.sort_unstable();
        v
    }

    /// `pi_1(sigma) ∪ pi_2(sigma)`.
    pub fn type_of(&self) -> Shape {
        Shape::new(self.cells.iter().flat_map(|&(s, t)| [s, t]).collect())
    }

    /// `|{(s',t') in sigma : s' < s, t' > t}|` for a cell `(s,t)` of sigma.
    pub fn local_inversion(&self, s: usize, t: usize) -> Result<usize, CombinError> {
        if !self.contains(s, t) {
            return Err(CombinError::CellNotInPlacement(s, t));
        }
        Ok(self.cells.iter().filter(|&&(a, b)| a < s && b > t).count())
    }

    pub fn inversion(&self) -> usize {
        self.cells.iter().map(|&(s, t)| self.local_inversion(s, t).unwrap()).sum()
    }

    pub fn is_column_full(&self) -> bool {
        column_full(self.mu, &self.type_of())
    }
}

impl fmt::Display for RookPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|(s, t)| format!("({s},{t})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Every placement of type `lambda`: bijections from `lambda ∩ S` to
/// `lambda ∩ T` inside `B_mu`, in lexicographic order of column choices.
pub fn enumerate_placements(b: &FerrersBoard, lambda: &Shape) -> Result<Vec<RookPlacement>, CombinError> {
    require_admissible(b.mu, lambda)?;
    let rows = lambda.intersect(&b.s);
    let cols = lambda.intersect(&b.t);
    let mut out = Vec::new();
    let mut used = vec![false; cols.len()];
    let mut current = Vec::new();
    fn go(
        i: usize,
        rows: &[usize],
        cols: &[usize],
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        mu: Location,
        out: &mut Vec<RookPlacement>,
    ) {
        if i == rows.len() {
            out.push(RookPlacement::new(mu, current.clone()));
            return;
        }
        for j in 0..cols.len() {
            if !used[j] && rows[i] < cols[j] {
                used[j] = true;
                current.push((rows[i], cols[j]));
                go(i + 1, rows, cols, used, current, mu, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    go(0, &rows, &cols, &mut used, &mut current, b.mu, &mut out);
    Ok(out)
}

/// Every rook placement on the board, grouped by type in mask order.
pub fn all_placements(b: &FerrersBoard) -> Vec<RookPlacement> {
    admissible_shapes(b.mu).iter().flat_map(|l| enumerate_placements(b, l).unwrap()).collect()
}

fn rank_rect(gf: &GaloisField, form: &MatrixForm, s0: usize, t0: usize) -> usize {
    let b = board(form.location());
    let rows: Vec<usize> = b.s_upto(s0).iter().map(|s| b.s.iter().position(|x| x == s).unwrap()).collect();
    let cols: Vec<usize> = b.t_from(t0).iter().map(|t| b.t.iter().position(|x| x == t).unwrap()).collect();
    gf.rank(&form.entries().select(&rows, &cols))
}

/// `rank M(s,t)`, the rank of the rectangle below-left of `(s,t)`.
pub fn rect_rank(gf: &GaloisField, form: &MatrixForm, s: usize, t: usize) -> usize {
    rank_rect(gf, form, s, t)
}

/// `sigma(M)`: cells where `rank M(s^-,t)`, `rank M(s,t^+)` and
/// `rank M(s^-,t^+)` all equal `rank M(s,t) - 1`, with the rectangles at
/// `s^- = 0` or `t^+ = N+1` taken to have rank 0.
pub fn sigma_of_matrix(gf: &GaloisField, form: &MatrixForm) -> RookPlacement {
    let mu = form.location();
    let b = board(mu);
    let n = mu.n();
    let mut cells = Vec::new();
    for &(s, t) in &b.cells {
        let r = rank_rect(gf, form, s, t);
        if r == 0 {
            continue;
        }
        let (sm, tp) = (b.s_minus(s), b.t_plus(t));
        let r_minus = if sm == 0 { 0 } else { rank_rect(gf, form, sm, t) };
        let r_plus = if tp == n + 1 { 0 } else { rank_rect(gf, form, s, tp) };
        let r_both = if sm == 0 || tp == n + 1 { 0 } else { rank_rect(gf, form, sm, tp) };
        if r_minus == r - 1 && r_plus == r - 1 && r_both == r - 1 {
            cells.push((s, t));
        }
    }
    RookPlacement::new(mu, cells)
}

/// Type of a point: the type of the placement of its matrix form.
pub fn type_of_subspace(gf: &GaloisField, y: &Subspace) -> Shape {
    sigma_of_matrix(gf, &y.matrix_form).type_of()
}

/// `|lambda ∩ S_mu(m)| + |lambda ∩ T_mu(m)| - |lambda|/2`.
pub fn rho(m: usize, mu: Location, lambda: &Shape) -> Result<i64, CombinError> {
    require_admissible(mu, lambda)?;
    let b = board(mu);
    Ok(lambda.intersect(&b.s_upto(m)).len() as i64 + lambda.intersect(&b.t_from(m)).len() as i64
        - lambda.len() as i64 / 2)
}

fn check_q(q: &Rational) -> Result<(), CombinError> {
    if q.is_zero() || q.is_one() {
        Err(CombinError::DegenerateQ)
    } else {
        Ok(())
    }
}

/// `(sum over placements of type lambda of q^inv, prod_{s in lambda ∩ S} [rho(s)]_q)`.
pub fn gen_function_check(mu: Location, lambda: &Shape, q: &Rational) -> Result<(Rational, Rational), CombinError> {
    check_q(q)?;
    let b = board(mu);
    let lhs = enumerate_placements(&b, lambda)?
        .iter()
        .fold(Rational::zero(), |acc, p| acc + rat_pow(q, p.inversion() as i64));
    let mut rhs = Rational::one();
    for s in lambda.intersect(&b.s) {
        let r = rho(s, mu, lambda)?;
        rhs *= (rat_pow(q, r) - Rational::one()) / (q - Rational::one());
    }
    Ok((lhs, rhs))
}

/// `|S_mu(m-1) \ lambda| + |T_mu(m+1) \ lambda| + |lambda|/2`.
pub fn kappa(m: usize, mu: Location, lambda: &Shape) -> Result<i64, CombinError> {
    require_admissible(mu, lambda)?;
    let b = board(mu);
    let below = b.s_upto(m.saturating_sub(1)).iter().filter(|&&s| !lambda.contains(s)).count();
    let above = b.t_from(m + 1).iter().filter(|&&t| !lambda.contains(t)).count();
    Ok((below + above + lambda.len() / 2) as i64)
}

/// `(sum_{m not in lambda} (-1)^{mu_m} kappa(m), (N-1)(N-2|mu|)/2)`.
pub fn kappa_sum_identity(mu: Location, lambda: &Shape) -> Result<(i64, i64), CombinError> {
    require_admissible(mu, lambda)?;
    let n = mu.n() as i64;
    let mut lhs = 0;
    for m in (1..=mu.n()).filter(|&m| !lambda.contains(m)) {
        let k = kappa(m, mu, lambda)?;
        lhs += if mu.get(m) == 1 { -k } else { k };
    }
    Ok((lhs, (n - 1) * (n - 2 * mu.weight() as i64) / 2))
}

/// `(sum_{m not in lambda} (-1)^{mu_m} q^kappa(m), (q^{N-|mu|} - q^{|mu|})/(q-1))`.
pub fn kappa_q_identity(mu: Location, lambda: &Shape, q: &Rational) -> Result<(Rational, Rational), CombinError> {
    check_q(q)?;
    require_admissible(mu, lambda)?;
    let mut lhs = Rational::zero();
    for m in (1..=mu.n()).filter(|&m| !lambda.contains(m)) {
        let v = rat_pow(q, kappa(m, mu, lambda)?);
        if mu.get(m) == 1 {
            lhs -= v;
        } else {
            lhs += v;
        }
    }
    let (n, w) = (mu.n() as i64, mu.weight() as i64);
    let rhs = (rat_pow(q, n - w) - rat_pow(q, w)) / (q - Rational::one());
    Ok((lhs, rhs))
}

/// `n(X) = sum_{s in X} |S_mu(s)|`.
pub fn n_of_rows(mu: Location, rows: &[usize]) -> usize {
    let b = board(mu);
    rows.iter().map(|&s| b.s_upto(s).len()).sum()
}

/// Number of forms `M` with `sigma(M) = sigma`, for column-full `sigma`:
/// `(q-1)^{|mu|} q^{inv + |B_mu| - n(pi_1)}`.
pub fn count_matrices_for_placement(sigma: &RookPlacement, q: u64) -> Result<u128, CombinError> {
    let mu = sigma.mu;
    if !sigma.is_column_full() {
        return Err(CombinError::NotColumnFull { mu, lambda: sigma.type_of() });
    }
    let q = q as u128;
    let e = sigma.inversion() + mu.board_size() - n_of_rows(mu, &sigma.rows());
    Ok((q - 1).pow(mu.weight() as u32) * q.pow(e as u32))
}

/// Number of forms whose placement has type `lambda` (column-full):
/// `q^{|B_mu| - n(lambda ∩ S)} prod_{s in lambda ∩ S} (q^{rho(s)} - 1)`.
pub fn multiplicity_formula(mu: Location, lambda: &Shape, q: u64) -> Result<u128, CombinError> {
    require_admissible(mu, lambda)?;
    if !column_full(mu, lambda) {
        return Err(CombinError::NotColumnFull { mu, lambda: lambda.clone() });
    }
    let rows = lambda.intersect(&mu.s_set());
    let q = q as u128;
    let mut v = q.pow((mu.board_size() - n_of_rows(mu, &rows)) as u32);
    for s in rows {
        v *= q.pow(rho(s, mu, lambda)? as u32) - 1;
    }
    Ok(v)
}

/// Every matrix form over `F_q` at location `mu`, in enumeration order.
pub fn all_forms(gf: &GaloisField, mu: Location) -> impl Iterator<Item = MatrixForm> + '_ {
    let cells = mu.board_size();
    let q = gf.q() as usize;
    (0..q.pow(cells as u32)).map(move |code| {
        let vals = (0..cells).map(|c| gf.elem(((code / q.pow((cells - 1 - c) as u32)) % q) as u16)).collect::<Vec<_>>();
        MatrixForm::from_cells(mu, &vals)
    })
}

/// Exhaustive classification of the forms at `mu` by their placement.
pub fn classify_forms(gf: &GaloisField, mu: Location) -> BTreeMap<RookPlacement, u128> {
    let mut counts = BTreeMap::new();
    for f in all_forms(gf, mu) {
        *counts.entry(sigma_of_matrix(gf, &f)).or_insert(0) += 1;
    }
    counts
}

/// The 0/1 indicator form of a placement.
pub fn indicator_form(sigma: &RookPlacement) -> MatrixForm {
    let mut f = MatrixForm::zero(sigma.mu);
    for &(s, t) in &sigma.cells {
        f.set(s, t, crate::gf::FqElem::ONE);
    }
    f
}

/// Rank of `M(s,t)` equals the local inversion number plus one at each cell
/// of `sigma(M)`; returns the first violation.
pub fn check_rank_inversion(gf: &GaloisField, form: &MatrixForm) -> Result<(), String> {
    let sigma = sigma_of_matrix(gf, form);
    for &(s, t) in &sigma.cells {
        let r = rank_rect(gf, form, s, t);
        let li = sigma.local_inversion(s, t).unwrap();
        if r != li + 1 {
            return Err(format!("form {:?} at ({s},{t}): rank {r}, local inversion {li}", form.cell_values()));
        }
    }
    Ok(())
}

/// Convenience for tests and reports: placements as plain cell lists.
pub fn placement_cells(p: &[RookPlacement]) -> Vec<Vec<(usize, usize)>> {
    p.iter().map(|x| x.cells.clone()).collect()
}

/// Whether every cell of a plain `F_q` matrix on `S x T` positions lies on
/// the board.
pub fn supported_on_board(mu: Location, m: &FqMatrix) -> bool {
    let b = board(mu);
    for (i, &s) in b.s.iter().enumerate() {
        for (j, &t) in b.t.iter().enumerate() {
            if s > t && !m.get(i, j).is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn q_rational(q: u64) -> Rational {
    rat(q as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use crate::gf::FqElem;

    fn loc(s: &str) -> Location {
        Location::parse(s).unwrap()
    }

    fn shape(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    #[test]
    fn board_examples() {
        let b = board(loc("0110110110010"));
        assert_eq!(b.s, vec![1, 4, 7, 10, 11, 13]);
        assert_eq!(b.t, vec![2, 3, 5, 6, 8, 9, 12]);
        assert_eq!(b.cells.len(), 17);
        assert!(board(loc("111")).cells.is_empty());
        assert_eq!(board(loc("01")).cells, vec![(1, 2)]);
    }

    #[test]
    fn rectangle_examples() {
        let b = board(loc("0110110110010"));
        let r = rectangle(&b, 4, 6).unwrap();
        assert_eq!(r, vec![(1, 6), (1, 8), (1, 9), (1, 12), (4, 6), (4, 8), (4, 9), (4, 12)]);
        assert_eq!(rectangle(&b, 1, 12).unwrap(), vec![(1, 12)]);
        let b = board(loc("0011"));
        assert_eq!(rectangle(&b, 2, 3).unwrap(), vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
        assert_eq!(rectangle(&b, 3, 4), Err(CombinError::CellOffBoard(3, 4)));
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible_type(loc("01"), &shape(&[1, 2])));
        assert!(!admissible_type(loc("10"), &shape(&[1, 2])));
        assert!(admissible_type(loc("101"), &Shape::empty()));
    }

    #[test]
    fn placement_examples() {
        let b = board(loc("0011"));
        let ps = enumerate_placements(&b, &shape(&[1, 2, 3, 4])).unwrap();
        assert_eq!(placement_cells(&ps), vec![vec![(1, 3), (2, 4)], vec![(1, 4), (2, 3)]]);
        assert_eq!(
            placement_cells(&enumerate_placements(&b, &Shape::empty()).unwrap()),
            vec![Vec::<(usize, usize)>::new()]
        );
        let b = board(loc("01"));
        assert_eq!(placement_cells(&enumerate_placements(&b, &shape(&[1, 2])).unwrap()), vec![vec![(1, 2)]]);
        assert!(enumerate_placements(&board(loc("10")), &shape(&[1, 2])).is_err());
    }

    #[test]
    fn inversion_examples() {
        let mu = loc("0110110110010");
        let sigma = RookPlacement::new(mu, vec![(1, 9), (4, 6), (10, 12)]);
        assert_eq!(sigma.inversion(), 1);
        assert_eq!(RookPlacement::new(mu, vec![]).inversion(), 0);
        let sigma = RookPlacement::new(loc("0011"), vec![(1, 4), (2, 3)]);
        assert_eq!(sigma.inversion(), 1);
        assert_eq!(sigma.local_inversion(2, 3), Ok(1));
        assert!(sigma.local_inversion(1, 3).is_err());
    }

    #[test]
    fn sigma_examples() {
        let gf = GaloisField::builtin(2).unwrap();
        assert!(sigma_of_matrix(&gf, &MatrixForm::zero(loc("0011"))).cells.is_empty());
        let gf3 = GaloisField::builtin(3).unwrap();
        for c in 1..3 {
            let f = MatrixForm::from_cells(loc("01"), &[FqElem(c)]);
            assert_eq!(sigma_of_matrix(&gf3, &f).cells, vec![(1, 2)]);
        }
        let ones = MatrixForm::from_cells(loc("0011"), &[FqElem::ONE; 4]);
        assert_eq!(sigma_of_matrix(&gf, &ones).cells, vec![(1, 4)]);
    }

    #[test]
    fn rho_and_generating_function_examples() {
        assert_eq!(rho(1, loc("01"), &shape(&[1, 2])), Ok(1));
        assert_eq!(rho(3, loc("0101"), &Shape::empty()), Ok(0));
        assert_eq!(rho(2, loc("0011"), &shape(&[1, 2, 3, 4])), Ok(2));
        assert_eq!(gen_function_check(loc("01"), &shape(&[1, 2]), &rat(2)).unwrap(), (rat(1), rat(1)));
        assert_eq!(gen_function_check(loc("0011"), &shape(&[1, 2, 3, 4]), &rat(3)).unwrap(), (rat(4), rat(4)));
        assert_eq!(gen_function_check(loc("011"), &Shape::empty(), &rat(5)).unwrap(), (rat(1), rat(1)));
        assert_eq!(gen_function_check(loc("01"), &Shape::empty(), &rat(1)), Err(CombinError::DegenerateQ));
    }

    #[test]
    fn kappa_examples() {
        for n in 1..=5 {
            for m in 1..=n {
                assert_eq!(kappa(m, Location::ones(n), &Shape::empty()), Ok((n - m) as i64));
                assert_eq!(kappa(m, Location::unit(n, m), &Shape::empty()), Ok((m - 1) as i64));
            }
        }
        assert_eq!(kappa(1, loc("00"), &Shape::empty()), Ok(0));
        assert_eq!(kappa(2, loc("00"), &Shape::empty()), Ok(1));
        assert_eq!(kappa_sum_identity(loc("00"), &Shape::empty()), Ok((1, 1)));
        assert_eq!(kappa_sum_identity(loc("111"), &Shape::empty()), Ok((-3, -3)));
        assert_eq!(kappa_sum_identity(loc("0101"), &shape(&[1, 2, 3, 4])), Ok((0, 0)));
        assert_eq!(kappa_q_identity(loc("00"), &Shape::empty(), &rat(2)).unwrap(), (rat(3), rat(3)));
        assert_eq!(kappa_q_identity(loc("0011"), &shape(&[1, 2, 3, 4]), &rat(3)).unwrap(), (rat(0), rat(0)));
        assert_eq!(kappa_q_identity(loc("01"), &shape(&[1, 2]), &rat(5)).unwrap(), (rat(0), rat(0)));
        let (l, r) = kappa_q_identity(loc("010"), &Shape::empty(), &ratio(7, 2)).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn counting_examples() {
        let s = RookPlacement::new(loc("01"), vec![(1, 2)]);
        assert_eq!(count_matrices_for_placement(&s, 2), Ok(1));
        assert_eq!(count_matrices_for_placement(&s, 3), Ok(2));
        let s = RookPlacement::new(loc("0011"), vec![(1, 3), (2, 4)]);
        assert_eq!(count_matrices_for_placement(&s, 2), Ok(2));
        assert!(count_matrices_for_placement(&RookPlacement::new(loc("01"), vec![]), 2).is_err());
        assert_eq!(multiplicity_formula(loc("01"), &shape(&[1, 2]), 2), Ok(1));
        assert_eq!(multiplicity_formula(loc("00"), &Shape::empty(), 7), Ok(1));
        assert_eq!(multiplicity_formula(loc("01"), &shape(&[1, 2]), 3), Ok(2));
    }
}
