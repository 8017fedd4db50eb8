//! Finite fields `F_q`, `q = p^e`, with table-driven arithmetic, matrices
//! over `F_q`, and the flag-adapted echelon form.

use std::fmt;

use thiserror::Error;

/// Field sizes with a built-in modulus.
pub const SUPPORTED_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("q must be a prime power in the supported set {SUPPORTED_Q:?}, got {0}")]
    UnsupportedQ(u64),
    #[error("modulus must be monic of degree {expected} over F_{p}")]
    BadModulus { p: u32, expected: u32 },
    #[error("modulus {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// `F_p[t]/(modulus)` with a monic irreducible modulus of degree `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients low to high.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl FieldSpec {
    pub fn new(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        if !is_prime(p) || e == 0 {
            return Err(GfError::UnsupportedQ((p as u64).pow(e)));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus { p, expected: e });
        }
        // Exhaustive search for a monic factor of degree 1..=e/2.
        for d in 1..=e / 2 {
            for code in 0..p.pow(d) {
                let mut f: Vec<u32> = (0..d).map(|i| code / p.pow(i) % p).collect();
                f.push(1);
                if poly_rem(p, &modulus, &f).iter().all(|&c| c == 0) {
                    return Err(GfError::Reducible(modulus));
                }
            }
        }
        Ok(FieldSpec { p, e, modulus })
    }

    /// The default field of size `q`: prime fields, `F_4 = t^2+t+1`,
    /// `F_8 = t^3+t+1`, `F_9 = t^2+1`.
    pub fn builtin(q: u64) -> Result<Self, GfError> {
        match q {
            2 | 3 | 5 | 7 => FieldSpec::new(q as u32, 1, vec![0, 1]),
            4 => FieldSpec::new(2, 2, vec![1, 1, 1]),
            8 => FieldSpec::new(2, 3, vec![1, 1, 0, 1]),
            9 => FieldSpec::new(3, 2, vec![1, 0, 1]),
            _ => Err(GfError::UnsupportedQ(q)),
        }
    }

    /// Field of size `q` with a user-chosen modulus, coefficients low to high.
    pub fn with_modulus(q: u64, modulus: Vec<u32>) -> Result<Self, GfError> {
        let base = FieldSpec::builtin(q)?;
        FieldSpec::new(base.p, base.e, modulus)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// An element of `F_q`, encoded as `sum_i c_i p^i` over its polynomial
/// coefficients. Arithmetic goes through the owning [`GaloisField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u16);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    spec: FieldSpec,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u32>,
}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q() as usize;
        let (p, e) = (spec.p, spec.e as usize);
        let coeffs =
            |x: usize| -> Vec<u32> { (0..e).map(|i| (x / (p as usize).pow(i as u32) % p as usize) as u32).collect() };
        let encode = |c: &[u32]| -> u16 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16 };
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let ca = coeffs(a);
            for b in 0..q {
                let cb = coeffs(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0u32; 2 * e - 1];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(p, &prod, &spec.modulus);
                r.resize(e, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16).collect();
        let inv =
            (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u16 }).collect();
        // Tr(x) = x + x^p + ... + x^(p^(e-1)) lies in the prime field.
        let trace = (0..q)
            .map(|a| {
                let mut acc = 0u16;
                let mut frob = a as u16;
                for _ in 0..e {
                    acc = add[acc as usize * q + frob as usize];
                    let mut pw = 1u16;
                    for _ in 0..p {
                        pw = mul[pw as usize * q + frob as usize];
                    }
                    frob = pw;
                }
                assert!((acc as u32) < p, "trace must land in the prime field");
                acc as u32
            })
            .collect();
        GaloisField { spec, q, add, mul, neg, inv, trace }
    }

    pub fn builtin(q: u64) -> Result<Self, GfError> {
        Ok(GaloisField::new(FieldSpec::builtin(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q as u16).map(FqElem)
    }

    pub fn elem(&self, code: u16) -> FqElem {
        assert!((code as usize) < self.q, "element code out of range");
        FqElem(code)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.add[a.0 as usize * self.q + b.0 as usize])
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.mul[a.0 as usize * self.q + b.0 as usize])
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        (!a.is_zero()).then(|| FqElem(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Polynomial coefficients `c_0..c_{e-1}`.
    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let p = self.spec.p;
        (0..self.spec.e).map(|i| a.0 as u32 / p.pow(i) % p).collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FqElem, GfError> {
        let p = self.spec.p;
        if c.len() != self.spec.e as usize || c.iter().any(|&x| x >= p) {
            return Err(GfError::Parse(format!("{c:?}")));
        }
        Ok(FqElem(c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16))
    }

    /// `Tr_{F_q/F_p}(x)` as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: FqElem) -> u32 {
        self.trace[a.0 as usize]
    }

    /// Prime-field integers for `e = 1`, coefficient tuples `c0,c1,..` otherwise.
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.spec.e == 1 {
            a.0.to_string()
        } else {
            self.coeffs(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<FqElem, GfError> {
        let parts: Result<Vec<u32>, _> = s.trim().split(',').map(|x| x.trim().parse::<u32>()).collect();
        let parts = parts.map_err(|_| GfError::Parse(s.to_string()))?;
        if self.spec.e == 1 && parts.len() == 1 {
            if parts[0] >= self.spec.p {
                return Err(GfError::Parse(s.to_string()));
            }
            return Ok(FqElem(parts[0] as u16));
        }
        self.from_coeffs(&parts).map_err(|_| GfError::Parse(s.to_string()))
    }

    pub fn format_matrix(&self, m: &FqMatrix) -> String {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|&x| self.format_elem(x)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse_matrix(&self, text: &str) -> Result<FqMatrix, GfError> {
        let rows: Vec<Vec<FqElem>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(|t| self.parse_elem(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GfError::Shape("ragged rows".into()));
        }
        Ok(FqMatrix::from_rows(cols, rows))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, m: &FqMatrix) -> usize {
        let mut a = m.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = self.inv(a.get(r, c)).unwrap();
            for i in r + 1..a.rows {
                let f = self.mul(a.get(i, c), inv);
                if !f.is_zero() {
                    for j in c..a.cols {
                        let v = self.sub(a.get(i, j), self.mul(f, a.get(r, j)));
                        a.set(i, j, v);
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Canonical basis of the row space with trailing ("bottom") pivots:
    /// each row's highest nonzero coordinate is 1, the pivots are distinct,
    /// and every row vanishes at the other rows' pivots. Rows are returned in
    /// increasing pivot order.
    pub fn bottom_pivot_reduce(&self, m: &FqMatrix) -> Result<FqMatrix, GfError> {
        let mut a = m.clone();
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; a.rows];
        for c in (0..a.cols).rev() {
            let Some(r) = (0..a.rows).find(|&i| pivot_of_row[i].is_none() && !a.get(i, c).is_zero()) else {
                continue;
            };
            let inv = self.inv(a.get(r, c)).unwrap();
            for j in 0..a.cols {
                let v = self.mul(a.get(r, j), inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c);
                if !f.is_zero() {
                    for j in 0..a.cols {
                        let v = self.sub(a.get(i, j), self.mul(f, a.get(r, j)));
                        a.set(i, j, v);
                    }
                }
            }
            pivot_of_row[r] = Some(c);
        }
        if pivot_of_row.iter().any(|p| p.is_none()) {
            return Err(GfError::DependentRows);
        }
        let mut order: Vec<usize> = (0..a.rows).collect();
        order.sort_by_key(|&i| pivot_of_row[i]);
        let rows = order.into_iter().map(|i| a.row(i).to_vec()).collect();
        Ok(FqMatrix::from_rows(a.cols, rows))
    }

    /// Pivot columns (0-based) of a matrix already in bottom-pivot form.
    pub fn bottom_pivots(&self, m: &FqMatrix) -> Vec<usize> {
        (0..m.rows()).map(|i| (0..m.cols()).rev().find(|&j| !m.get(i, j).is_zero()).expect("nonzero row")).collect()
    }

    /// `sum_i c_i * row_i` of `m`.
    pub fn combine_rows(&self, m: &FqMatrix, c: &[FqElem]) -> Vec<FqElem> {
        let mut out = vec![FqElem::ZERO; m.cols()];
        for (i, &ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(m.row(i)) {
                *o = self.add(*o, self.mul(ci, x));
            }
        }
        out
    }
}

/// Row-major matrix over `F_q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![FqElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<FqElem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        FqMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_codes(rows: &[&[u16]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        FqMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&c| FqElem(c)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn codes(&self) -> Vec<u16> {
        self.data.iter().map(|x| x.0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Submatrix on the given row and column positions.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FqMatrix {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        FqMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Rows of `self` followed by rows of `o`.
    pub fn stack(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        FqMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i).iter().map(|x| x.0).collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_moduli_are_irreducible() {
        for q in SUPPORTED_Q {
            let f = FieldSpec::builtin(q).unwrap();
            assert_eq!(f.q(), q);
        }
        assert!(matches!(FieldSpec::builtin(6), Err(GfError::UnsupportedQ(6))));
        assert!(matches!(FieldSpec::new(2, 2, vec![1, 0, 1]), Err(GfError::Reducible(_))));
        assert!(matches!(FieldSpec::new(3, 2, vec![2, 0, 1]), Err(GfError::Reducible(_))));
        assert!(FieldSpec::new(3, 2, vec![2, 1, 1]).is_ok());
    }

    #[test]
    fn trace_examples() {
        let f2 = GaloisField::builtin(2).unwrap();
        assert_eq!(f2.trace_to_prime(FqElem(1)), 1);
        let f4 = GaloisField::builtin(4).unwrap();
        assert_eq!(f4.trace_to_prime(FqElem::ONE), 0);
        let t = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.trace_to_prime(t), 1);
    }

    #[test]
    fn rank_examples() {
        let f2 = GaloisField::builtin(2).unwrap();
        let f3 = GaloisField::builtin(3).unwrap();
        assert_eq!(f2.rank(&FqMatrix::zeros(2, 2)), 0);
        assert_eq!(f3.rank(&FqMatrix::identity(3)), 3);
        assert_eq!(f2.rank(&FqMatrix::from_codes(&[&[1, 1], &[1, 1]])), 1);
        assert_eq!(f2.rank(&FqMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn bottom_pivot_examples() {
        let f2 = GaloisField::builtin(2).unwrap();
        let f3 = GaloisField::builtin(3).unwrap();
        let a = FqMatrix::from_codes(&[&[1, 1]]);
        assert_eq!(f2.bottom_pivot_reduce(&a).unwrap(), a);
        let b = FqMatrix::from_codes(&[&[1, 0], &[1, 1]]);
        assert_eq!(f2.bottom_pivot_reduce(&b).unwrap(), FqMatrix::identity(2));
        let c = FqMatrix::from_codes(&[&[1, 2, 0], &[0, 1, 1]]);
        let r = f3.bottom_pivot_reduce(&c).unwrap();
        assert_eq!(r, FqMatrix::from_codes(&[&[2, 1, 0], &[1, 0, 1]]));
        assert_eq!(f3.bottom_pivots(&r), vec![1, 2]);
        let dep = FqMatrix::from_codes(&[&[1, 1], &[1, 1]]);
        assert_eq!(f2.bottom_pivot_reduce(&dep), Err(GfError::DependentRows));
    }

    #[test]
    fn text_roundtrip() {
        let f4 = GaloisField::builtin(4).unwrap();
        let m = f4.parse_matrix("1,0 0,1\n1,1 0,0").unwrap();
        assert_eq!(f4.format_matrix(&m), "1,0 0,1\n1,1 0,0");
        let f3 = GaloisField::builtin(3).unwrap();
        let m = f3.parse_matrix("1 2 0\n0 1 1\n").unwrap();
        assert_eq!(f3.format_matrix(&m), "1 2 0\n0 1 1");
        assert!(f3.parse_matrix("1 3").is_err());
    }
}
