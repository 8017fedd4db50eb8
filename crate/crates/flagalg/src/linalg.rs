//! Dense and sparse matrices over an exact [`Field`], with Gaussian elimination.

use std::fmt;

use crate::exactnum::Field;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vec<T>]) -> Self {
        let mut m = DenseMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::<T>::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &T) -> Self {
        let data = self.data.iter().map(|a| a.clone() * s.clone()).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form with the lowest available pivot column
    /// chosen first. Returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if !rv.is_zero() {
                        let v = m.get(i, j).clone() - f.clone() * rv.clone();
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(DenseMatrix::zeros(0, 0));
        }
        let mut aug = DenseMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, T::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Unique solution of `A x = b` when `A` has full column rank and the
    /// system is consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) || pivots.len() < self.cols {
            return None;
        }
        Some((0..self.cols).map(|i| r.get(i, self.cols).clone()).collect())
    }
}

impl<T: Field> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Basis of the span of `vectors`, as the nonzero rows of their echelon form.
pub fn span_basis<T: Field>(n: usize, vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = DenseMatrix::from_rows(vectors.to_vec());
    assert_eq!(m.cols(), n);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Rank of a family of vectors.
pub fn rank_of<T: Field>(n: usize, vectors: &[Vec<T>]) -> usize {
    span_basis(n, vectors).len()
}

/// Whether two families of vectors span the same subspace.
pub fn same_span<T: Field>(n: usize, a: &[Vec<T>], b: &[Vec<T>]) -> bool {
    span_basis(n, a) == span_basis(n, b)
}

/// Coordinates of `v` in the basis given by the columns of `basis`, if `v`
/// lies in their span. Reuse with [`CoordinateSolver`] for many vectors.
pub struct CoordinateSolver<T> {
    reduced: DenseMatrix<T>,
    transform: DenseMatrix<T>,
    pivots: Vec<usize>,
    dim: usize,
}

impl<T: Field> CoordinateSolver<T> {
    /// `basis` holds linearly independent vectors of length `n`.
    pub fn new(n: usize, basis: &[Vec<T>]) -> Option<Self> {
        let d = basis.len();
        // Row-reduce [B^T | I]; the left block gives pivot coordinates and
        // the right block records the combination of basis vectors used.
        let mut aug = DenseMatrix::zeros(d, n + d);
        for (i, b) in basis.iter().enumerate() {
            assert_eq!(b.len(), n);
            for (j, x) in b.iter().enumerate() {
                aug.set(i, j, x.clone());
            }
            aug.set(i, n + i, T::one());
        }
        let (r, pivots) = aug.rref();
        if d > 0 && pivots[d - 1] >= n {
            return None;
        }
        let mut reduced = DenseMatrix::zeros(d, n);
        let mut transform = DenseMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..n {
                reduced.set(i, j, r.get(i, j).clone());
            }
            for j in 0..d {
                transform.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(CoordinateSolver { reduced, transform, pivots, dim: d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        // v = sum_i c_i * reduced_row_i; c_i is read off at the pivot.
        let c: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let n = v.len();
        for j in 0..n {
            let mut acc = T::zero();
            for (i, ci) in c.iter().enumerate() {
                let r = self.reduced.get(i, j);
                if !ci.is_zero() && !r.is_zero() {
                    acc = acc + ci.clone() * r.clone();
                }
            }
            if acc != v[j] {
                return None;
            }
        }
        // reduced = transform * B^T, so v^T = c^T transform B^T.
        let mut out = vec![T::zero(); self.dim];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let t = self.transform.get(i, k);
                if !t.is_zero() {
                    *o = o.clone() + ci.clone() * t.clone();
                }
            }
        }
        Some(out)
    }
}

/// Sparse matrix stored as sorted `(column, value)` lists per row, with no
/// explicit zeros, so structural equality is value equality.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Field> SparseMatrix<T> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix { n_rows, n_cols, rows: vec![Vec::new(); n_rows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::diagonal((0..n).map(|_| T::one()).collect())
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let rows =
            d.into_iter().enumerate().map(|(i, x)| if x.is_zero() { Vec::new() } else { vec![(i, x)] }).collect();
        SparseMatrix { n_rows: n, n_cols: n, rows }
    }

    pub fn from_triplets(n_rows: usize, n_cols: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut acc: Vec<Vec<(usize, T)>> = vec![Vec::new(); n_rows];
        for (i, j, v) in entries {
            assert!(i < n_rows && j < n_cols, "entry out of range");
            acc[i].push((j, v));
        }
        let rows = acc
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, T)> = Vec::with_capacity(r.len());
                for (j, v) in r {
                    match merged.last_mut() {
                        Some((lj, lv)) if *lj == j => *lv = lv.clone() + v,
                        _ => merged.push((j, v)),
                    }
                }
                merged.retain(|e| !e.1.is_zero());
                merged
            })
            .collect();
        SparseMatrix { n_rows, n_cols, rows }
    }

    pub fn from_dense(m: &DenseMatrix<T>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    entries.push((i, j, m.get(i, j).clone()));
                }
            }
        }
        SparseMatrix::from_triplets(m.rows(), m.cols(), entries)
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries().map(|(i, j, v)| (j, i, v.clone())).collect::<Vec<_>>();
        SparseMatrix::from_triplets(self.n_cols, self.n_rows, entries)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        let entries = self.entries().map(|(i, j, v)| (i, j, f(v))).collect::<Vec<_>>();
        SparseMatrix::from_triplets(self.n_rows, self.n_cols, entries)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (o.n_rows, o.n_cols), "dimension mismatch in sum");
        let entries = self.entries().chain(o.entries()).map(|(i, j, v)| (i, j, v.clone())).collect::<Vec<_>>();
        SparseMatrix::from_triplets(self.n_rows, self.n_cols, entries)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n_cols, o.n_rows, "dimension mismatch in product");
        let mut acc: Vec<Option<T>> = vec![None; o.n_cols];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.n_rows);
        for r in &self.rows {
            for (k, a) in r {
                for (j, b) in &o.rows[*k] {
                    let prod = a.clone() * b.clone();
                    match &mut acc[*j] {
                        Some(x) => *x = x.clone() + prod,
                        slot @ None => {
                            *slot = Some(prod);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = acc[j].take().expect("touched");
                if !v.is_zero() {
                    out.push((j, v));
                }
            }
            touched.clear();
            rows.push(out);
        }
        SparseMatrix { n_rows: self.n_rows, n_cols: o.n_cols, rows }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n_cols);
        self.rows
            .iter()
            .map(|r| {
                let mut acc = T::zero();
                for (j, a) in r {
                    if !v[*j].is_zero() {
                        acc = acc + a.clone() * v[*j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// First entry where `self` and `o` differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize, T, T)> {
        assert_eq!((self.n_rows, self.n_cols), (o.n_rows, o.n_cols));
        for i in 0..self.n_rows {
            if self.rows[i] == o.rows[i] {
                continue;
            }
            let mut cols: Vec<usize> = self.rows[i].iter().chain(&o.rows[i]).map(|e| e.0).collect();
            cols.sort_unstable();
            cols.dedup();
            for j in cols {
                let (a, b) = (self.get(i, j), o.get(i, j));
                if a != b {
                    return Some((i, j, a, b));
                }
            }
        }
        None
    }
}

impl<T: Field> fmt::Debug for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.n_rows, self.n_cols, self.nnz())
    }
}

/// Incrementally maintained reduced row echelon form.
struct Echelon<T> {
    width: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Field> Echelon<T> {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    /// Adds a row; returns whether the rank grew.
    fn insert(&mut self, mut row: Vec<T>) -> bool {
        for (pc, prow) in &self.rows {
            let f = row[*pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(prow) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inv().expect("nonzero pivot");
        for x in row.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, prow) in self.rows.iter_mut() {
            let f = prow[pc].clone();
            if !f.is_zero() {
                for (x, y) in prow.iter_mut().zip(&row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.rows.push((pc, row));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn full(&self) -> bool {
        self.rows.len() == self.width
    }
}

fn is_diagonal<T: Field>(m: &DenseMatrix<T>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
}

/// Dimension of `{X : X G = G X for every G in gens}`. Diagonal generators
/// first restrict `X` to blocks of equal diagonal values.
pub fn commutant_dimension<T: Field>(gens: &[DenseMatrix<T>]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let d = first.rows();
    let diag: Vec<&DenseMatrix<T>> = gens.iter().filter(|g| is_diagonal(g)).collect();
    let others: Vec<&DenseMatrix<T>> = gens.iter().filter(|g| !is_diagonal(g)).collect();
    let mut unknown = vec![vec![None; d]; d];
    let mut count = 0;
    for i in 0..d {
        for j in 0..d {
            if diag.iter().all(|g| g.get(i, i) == g.get(j, j)) {
                unknown[i][j] = Some(count);
                count += 1;
            }
        }
    }
    let mut ech = Echelon::new(count);
    'outer: for g in others {
        for i in 0..d {
            for j in 0..d {
                // (X G - G X)_{ij} = sum_k X_ik G_kj - G_ik X_kj
                let mut row = vec![T::zero(); count];
                let mut any = false;
                for k in 0..d {
                    if let Some(u) = unknown[i][k] {
                        let c = g.get(k, j);
                        if !c.is_zero() {
                            row[u] = row[u].clone() + c.clone();
                            any = true;
                        }
                    }
                    if let Some(u) = unknown[k][j] {
                        let c = g.get(i, k);
                        if !c.is_zero() {
                            row[u] = row[u].clone() - c.clone();
                            any = true;
                        }
                    }
                }
                if any {
                    ech.insert(row);
                    if ech.full() {
                        break 'outer;
                    }
                }
            }
        }
    }
    count - ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Rational};

    fn m(rows: &[&[i64]]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(|x| *x == rat(0)));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), DenseMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn coordinates_in_basis() {
        let basis = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]];
        let s = CoordinateSolver::new(3, &basis).unwrap();
        let v = vec![rat(2), rat(5), rat(3)];
        assert_eq!(s.coordinates(&v), Some(vec![rat(2), rat(3)]));
        assert_eq!(s.coordinates(&[rat(1), rat(0), rat(0)]), None);
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 0, 2], &[0, 0, 3], &[4, 5, 0]]);
        let b = m(&[&[0, 1, 0], &[1, 0, 0], &[2, 0, -1]]);
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b));
        assert_eq!(sa.add(&sb).to_dense(), a.add(&b));
        assert_eq!(sa.sub(&sa), SparseMatrix::zeros(3, 3));
        assert_eq!(sa.transpose().to_dense(), a.transpose());
    }
}
