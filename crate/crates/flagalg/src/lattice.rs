//! The subspace lattice of `F_q^N` with the standard flag
//! `x_i = span(v_1, ..., v_i)`: locations, matrix forms and m-covers.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::gf::{FqElem, FqMatrix, GaloisField, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice has {size} points, above the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("N must be between 1 and {max}, got {n}")]
    BadDimension { n: usize, max: usize },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("matrix form shape mismatch: {0}")]
    Shape(String),
}

pub const MAX_N: usize = 16;

/// A vertex `mu` of the N-cube; bit `m-1` of `bits` is `mu_m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Location {
    n: usize,
    bits: u32,
}

impl Location {
    pub fn new(n: usize, bits: u32) -> Self {
        assert!(n <= MAX_N && (n == 32 || bits >> n == 0), "location bits out of range");
        Location { n, bits }
    }

    /// From `mu_1, ..., mu_N`.
    pub fn from_slice(mu: &[u8]) -> Self {
        let bits = mu.iter().enumerate().fold(0u32, |acc, (i, &b)| {
            assert!(b <= 1, "location entries are 0 or 1");
            acc | ((b as u32) << i)
        });
        Location::new(mu.len(), bits)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let v: Option<Vec<u8>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        v.filter(|v| !v.is_empty()).map(|v| Location::from_slice(&v))
    }

    pub fn zero(n: usize) -> Self {
        Location::new(n, 0)
    }

    pub fn ones(n: usize) -> Self {
        Location::new(n, ((1u64 << n) - 1) as u32)
    }

    /// The unit vector at coordinate `m`.
    pub fn unit(n: usize, m: usize) -> Self {
        assert!((1..=n).contains(&m));
        Location::new(n, 1 << (m - 1))
    }

    /// All of `{0,1}^N` in lexicographic order of `(mu_1, ..., mu_N)`.
    pub fn all(n: usize) -> Vec<Location> {
        (0u32..1 << n)
            .map(|k| {
                let mu: Vec<u8> = (1..=n).map(|m| ((k >> (n - m)) & 1) as u8).collect();
                Location::from_slice(&mu)
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `mu_m` for `1 <= m <= N`.
    pub fn get(&self, m: usize) -> u8 {
        assert!((1..=self.n).contains(&m), "coordinate {m} out of range");
        ((self.bits >> (m - 1)) & 1) as u8
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (1..=self.n).map(|m| self.get(m)).collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// `S_mu`: coordinates equal to 0, ascending.
    pub fn s_set(&self) -> Vec<usize> {
        (1..=self.n).filter(|&m| self.get(m) == 0).collect()
    }

    /// `T_mu`: coordinates equal to 1, ascending.
    pub fn t_set(&self) -> Vec<usize> {
        (1..=self.n).filter(|&m| self.get(m) == 1).collect()
    }

    /// `B_mu = {(s,t) in S x T : s < t}` in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let t = self.t_set();
        self.s_set().into_iter().flat_map(|s| t.iter().filter(move |&&t| s < t).map(move |&t| (s, t))).collect()
    }

    pub fn board_size(&self) -> usize {
        self.cells().len()
    }

    /// `mu + delta * e_m`, or `None` when that leaves `{0,1}^N`.
    pub fn shifted(&self, m: usize, delta: i8) -> Option<Location> {
        match (self.get(m), delta) {
            (_, 0) => Some(*self),
            (0, 1) => Some(Location::new(self.n, self.bits | 1 << (m - 1))),
            (1, -1) => Some(Location::new(self.n, self.bits & !(1 << (m - 1)))),
            _ => None,
        }
    }

    /// Coordinatewise order.
    pub fn le(&self, o: &Location) -> bool {
        self.n == o.n && self.bits & !o.bits == 0
    }

    /// Position in [`Location::all`].
    pub fn lex_index(&self) -> usize {
        (1..=self.n).fold(0usize, |acc, m| acc * 2 + self.get(m) as usize)
    }
}

impl PartialOrd for Location {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Location {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.n, self.lex_index()).cmp(&(o.n, o.lex_index()))
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in 1..=self.n {
            write!(f, "{}", self.get(m))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Location({self})")
    }
}

/// Entries of a matrix form on `S_mu x T_mu`, addressed by coordinate labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixForm {
    location: Location,
    s: Vec<usize>,
    t: Vec<usize>,
    entries: FqMatrix,
}

impl MatrixForm {
    pub fn zero(location: Location) -> Self {
        let (s, t) = (location.s_set(), location.t_set());
        let entries = FqMatrix::zeros(s.len(), t.len());
        MatrixForm { location, s, t, entries }
    }

    /// Builds a form from values on `B_mu` in row-major cell order.
    pub fn from_cells(location: Location, values: &[FqElem]) -> Self {
        let mut f = MatrixForm::zero(location);
        let cells = location.cells();
        assert_eq!(cells.len(), values.len(), "one value per board cell");
        for (&(s, t), &v) in cells.iter().zip(values) {
            f.set(s, t, v);
        }
        f
    }

    pub fn location(&self) -> Location {
        self.location
    }

    pub fn s_labels(&self) -> &[usize] {
        &self.s
    }

    pub fn t_labels(&self) -> &[usize] {
        &self.t
    }

    pub fn entries(&self) -> &FqMatrix {
        &self.entries
    }

    fn pos(&self, s: usize, t: usize) -> (usize, usize) {
        let i = self.s.iter().position(|&x| x == s).unwrap_or_else(|| panic!("{s} is not a row label"));
        let j = self.t.iter().position(|&x| x == t).unwrap_or_else(|| panic!("{t} is not a column label"));
        (i, j)
    }

    /// `Y_{s,t}` for `s in S_mu`, `t in T_mu`.
    pub fn get(&self, s: usize, t: usize) -> FqElem {
        let (i, j) = self.pos(s, t);
        self.entries.get(i, j)
    }

    pub fn set(&mut self, s: usize, t: usize, v: FqElem) {
        assert!(s < t || v.is_zero(), "support must lie in B_mu");
        let (i, j) = self.pos(s, t);
        self.entries.set(i, j, v);
    }

    /// Values on `B_mu` in row-major cell order.
    pub fn cell_values(&self) -> Vec<FqElem> {
        self.location.cells().into_iter().map(|(s, t)| self.get(s, t)).collect()
    }

    /// Basis `w_t = sum_s Y_{s,t} v_s + v_t`, `t in T_mu`, as rows of an
    /// `|T| x N` matrix.
    pub fn basis(&self) -> FqMatrix {
        let n = self.location.n();
        let rows = self
            .t
            .iter()
            .map(|&t| {
                let mut row = vec![FqElem::ZERO; n];
                row[t - 1] = FqElem::ONE;
                for &s in &self.s {
                    if s < t {
                        row[s - 1] = self.get(s, t);
                    }
                }
                row
            })
            .collect();
        FqMatrix::from_rows(n, rows)
    }

    /// Reads the form back from a canonical (bottom-pivot) basis.
    pub fn from_canonical(location: Location, canon: &FqMatrix) -> Self {
        let mut f = MatrixForm::zero(location);
        let t = location.t_set();
        for (row, &tt) in t.iter().enumerate() {
            for &s in location.s_set().iter().filter(|&&s| s < tt) {
                f.set(s, tt, canon.get(row, s - 1));
            }
        }
        f
    }
}

/// A point of the lattice.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub id: usize,
    pub location: Location,
    /// Canonical bottom-pivot basis, rows in increasing pivot order.
    pub canon: FqMatrix,
    pub matrix_form: MatrixForm,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.canon.rows()
    }
}

/// Number of subspaces of `F_q^N`, summing Gaussian binomials.
pub fn lattice_size(q: u64, n: usize) -> u128 {
    let q = q as u128;
    let mut total = 0u128;
    for k in 0..=n {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= q.pow((n - i) as u32) - 1;
            den *= q.pow((i + 1) as u32) - 1;
        }
        total += num / den;
    }
    total
}

/// Location of the row space of `basis` against the standard flag.
pub fn location_of(gf: &GaloisField, basis: &FqMatrix) -> Result<Location, LatticeError> {
    let n = basis.cols();
    let k = basis.rows();
    let all_rows: Vec<usize> = (0..k).collect();
    if gf.rank(basis) != k {
        return Err(GfError::DependentRows.into());
    }
    // dim(y ∩ x_m) = k - rank of the coordinates m+1..N.
    let dim_meet = |m: usize| k - gf.rank(&basis.select(&all_rows, &(m..n).collect::<Vec<_>>()));
    let mu: Vec<u8> = (1..=n).map(|m| (dim_meet(m) - dim_meet(m - 1)) as u8).collect();
    Ok(Location::from_slice(&mu))
}

pub struct Lattice {
    gf: GaloisField,
    n: usize,
    subspaces: Vec<Subspace>,
    buckets: Vec<(Location, Range<usize>)>,
    index: HashMap<Vec<u16>, usize>,
    /// `lower[m-1][y]`: the points m-covered by `y`.
    lower: Vec<Vec<Vec<usize>>>,
    /// `upper[m-1][z]`: the points that m-cover `z`.
    upper: Vec<Vec<Vec<usize>>>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(q={}, N={}, |P|={})", self.q(), self.n, self.subspaces.len())
    }
}

/// Enumerates every subspace of `F_q^N`. Points are ordered by location
/// (lexicographic), then by matrix form with cells of `B_mu` in row-major
/// order, last cell varying fastest.
pub fn enumerate_lattice(gf: &GaloisField, n: usize, cap: Option<u128>) -> Result<Lattice, LatticeError> {
    if n == 0 || n > MAX_N {
        return Err(LatticeError::BadDimension { n, max: MAX_N });
    }
    let q = gf.q();
    let size = lattice_size(q, n);
    if let Some(cap) = cap {
        if size > cap {
            return Err(LatticeError::TooLarge { size, cap });
        }
    }
    let mut subspaces = Vec::with_capacity(size as usize);
    let mut buckets = Vec::new();
    let mut index = HashMap::with_capacity(size as usize);
    for mu in Location::all(n) {
        let start = subspaces.len();
        let cells = mu.cells().len();
        let count = (q as usize).pow(cells as u32);
        for code in 0..count {
            let values: Vec<FqElem> = (0..cells)
                .map(|c| FqElem(((code / (q as usize).pow((cells - 1 - c) as u32)) % q as usize) as u16))
                .collect();
            let form = MatrixForm::from_cells(mu, &values);
            let canon = form.basis();
            let id = subspaces.len();
            index.insert(canon.codes(), id);
            subspaces.push(Subspace { id, location: mu, canon, matrix_form: form });
        }
        buckets.push((mu, start..subspaces.len()));
    }
    let mut lat = Lattice {
        gf: gf.clone(),
        n,
        subspaces,
        buckets,
        index,
        lower: vec![Vec::new(); n],
        upper: vec![Vec::new(); n],
    };
    lat.build_covers();
    Ok(lat)
}

impl Lattice {
    fn build_covers(&mut self) {
        let total = self.subspaces.len();
        let mut lower = vec![vec![Vec::new(); total]; self.n];
        let mut upper = vec![vec![Vec::new(); total]; self.n];
        for y in 0..total {
            for z in self.hyperplanes(y) {
                let m = self.cover_coordinate(y, z);
                lower[m - 1][y].push(z);
                upper[m - 1][z].push(y);
            }
        }
        for per_m in lower.iter_mut().chain(upper.iter_mut()) {
            for list in per_m.iter_mut() {
                list.sort_unstable();
            }
        }
        self.lower = lower;
        self.upper = upper;
    }

    /// Ids of all codimension-one subspaces of `y`.
    fn hyperplanes(&self, y: usize) -> Vec<usize> {
        let gf = &self.gf;
        let canon = &self.subspaces[y].canon;
        let k = canon.rows();
        let q = gf.q() as usize;
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        // One hyperplane per functional with leading coefficient 1.
        for lead in 0..k {
            for code in 0..q.pow((k - lead - 1) as u32) {
                let mut f = vec![FqElem::ZERO; k];
                f[lead] = FqElem::ONE;
                for (j, slot) in f.iter_mut().enumerate().skip(lead + 1) {
                    *slot = FqElem((code / q.pow((k - 1 - j) as u32) % q) as u16);
                }
                let kernel: Vec<Vec<FqElem>> = (0..k)
                    .filter(|&i| i != lead)
                    .map(|i| {
                        let mut c = vec![FqElem::ZERO; k];
                        c[i] = FqElem::ONE;
                        c[lead] = gf.neg(f[i]);
                        gf.combine_rows(canon, &c)
                    })
                    .collect();
                let h = FqMatrix::from_rows(self.n, kernel);
                let h = gf.bottom_pivot_reduce(&h).expect("kernel rows are independent");
                out.push(self.index[&h.codes()]);
            }
        }
        out
    }

    fn cover_coordinate(&self, y: usize, z: usize) -> usize {
        let diff = self.subspaces[y].location.bits() ^ self.subspaces[z].location.bits();
        assert_eq!(diff.count_ones(), 1, "a cover changes exactly one location bit");
        diff.trailing_zeros() as usize + 1
    }

    pub fn gf(&self) -> &GaloisField {
        &self.gf
    }

    pub fn q(&self) -> u64 {
        self.gf.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn get(&self, id: usize) -> &Subspace {
        &self.subspaces[id]
    }

    /// `(mu, id range of P_mu)` in lexicographic order of `mu`.
    pub fn buckets(&self) -> &[(Location, Range<usize>)] {
        &self.buckets
    }

    pub fn bucket(&self, mu: Location) -> Range<usize> {
        self.buckets[mu.lex_index()].1.clone()
    }

    /// Id of the subspace spanned by the rows of `basis`.
    pub fn find(&self, basis: &FqMatrix) -> Result<usize, LatticeError> {
        if basis.cols() != self.n {
            return Err(LatticeError::Shape(format!("expected {} columns", self.n)));
        }
        let canon = self.gf.bottom_pivot_reduce(basis)?;
        Ok(self.index[&canon.codes()])
    }

    pub fn find_form(&self, form: &MatrixForm) -> usize {
        self.index[&form.basis().codes()]
    }

    /// Points m-covered by `y`.
    pub fn lower_covers(&self, y: usize, m: usize) -> &[usize] {
        &self.lower[m - 1][y]
    }

    /// Points that m-cover `z`.
    pub fn upper_covers(&self, z: usize, m: usize) -> &[usize] {
        &self.upper[m - 1][z]
    }

    /// All `(lower, upper)` pairs of the m-cover relation.
    pub fn cover_pairs(&self, m: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.lower[m - 1].iter().enumerate().flat_map(|(y, zs)| zs.iter().map(move |&z| (z, y))).collect();
        out.sort_unstable();
        out
    }

    /// Whether `z` is contained in `y`, by rank.
    pub fn contains(&self, y: usize, z: usize) -> bool {
        let (a, b) = (&self.subspaces[y].canon, &self.subspaces[z].canon);
        self.gf.rank(&a.stack(b)) == a.rows()
    }

    /// `y` m-covers `z`: `z ⊂ y`, `dim y = dim z + 1`, `loc(y) = loc(z) + e_m`.
    pub fn m_covers(&self, y: usize, z: usize, m: usize) -> bool {
        let (sy, sz) = (&self.subspaces[y], &self.subspaces[z]);
        sy.dim() == sz.dim() + 1 && sz.location.shifted(m, 1) == Some(sy.location) && self.contains(y, z)
    }

    /// Whether `y` covers `z` in the lattice.
    pub fn covers(&self, y: usize, z: usize) -> bool {
        (1..=self.n).any(|m| self.lower_covers(y, m).contains(&z))
    }
}

/// Number of points m-covered by a point at location `mu`.
pub fn count_m_covered(q: u64, mu: Location, m: usize) -> u128 {
    if mu.get(m) == 0 {
        return 0;
    }
    let e: u32 = (m + 1..=mu.n()).map(|i| mu.get(i) as u32).sum();
    (q as u128).pow(e)
}

/// Number of points that m-cover a point at location `mu`.
pub fn count_m_covering(q: u64, mu: Location, m: usize) -> u128 {
    if mu.get(m) == 1 {
        return 0;
    }
    let below: u32 = (1..m).map(|i| mu.get(i) as u32).sum();
    (q as u128).pow((m as u32 - 1) - below)
}

/// Matrix-form test for `y` m-covering `z`, where `Y` has location `mu`
/// and `Z` has location `mu - e_m`: `Z_{s,t} = Y_{s,t} + Y_{s,m} Z_{m,t}`
/// for all `s in S_mu`, `t in T_{mu - e_m}`.
pub fn matrix_cover_criterion(
    gf: &GaloisField,
    y: &MatrixForm,
    z: &MatrixForm,
    m: usize,
) -> Result<bool, LatticeError> {
    let mu = y.location();
    let nu = z.location();
    if mu.n() != nu.n() || !(1..=mu.n()).contains(&m) || mu.shifted(m, -1) != Some(nu) {
        return Err(LatticeError::Shape(format!("locations {mu} and {nu} are not related by e_{m}")));
    }
    let (n, zero, one) = (mu.n(), Location::zero(mu.n()), Location::ones(mu.n()));
    if mu == one || nu == zero || n < 2 {
        return Err(LatticeError::Shape("criterion needs locations other than 0 and 1".into()));
    }
    for &s in mu.s_set().iter() {
        for &t in nu.t_set().iter() {
            let lhs = if s < t { z.get(s, t) } else { FqElem::ZERO };
            let yst = if s < t { y.get(s, t) } else { FqElem::ZERO };
            let ysm = if s < m { y.get(s, m) } else { FqElem::ZERO };
            let zmt = if m < t { z.get(m, t) } else { FqElem::ZERO };
            if lhs != gf.add(yst, gf.mul(ysm, zmt)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks both covering counts against the adjacency lists for every
/// point and coordinate. Returns the first mismatch.
pub fn check_cover_counts(lat: &Lattice) -> Result<(), String> {
    for y in lat.subspaces() {
        for m in 1..=lat.n() {
            let below = lat.lower_covers(y.id, m).len() as u128;
            let want = count_m_covered(lat.q(), y.location, m);
            if below != want {
                return Err(format!("y={} mu={} m={m}: {below} m-covered, formula {want}", y.id, y.location));
            }
            let above = lat.upper_covers(y.id, m).len() as u128;
            let want = count_m_covering(lat.q(), y.location, m);
            if above != want {
                return Err(format!("y={} mu={} m={m}: {above} m-covering, formula {want}", y.id, y.location));
            }
        }
    }
    Ok(())
}

/// For `m < n`, `z in P_mu` with `mu_m = mu_n = 1` and `y in P_{mu-e_m-e_n}`
/// below `z`: exactly one point of `P_{mu-e_n}` lies between them, and
/// exactly `q` points of `P_{mu-e_m}` do.
pub fn check_interval_counts(lat: &Lattice) -> Result<(), String> {
    let n = lat.n();
    for z in lat.subspaces() {
        let mu = z.location;
        for m in 1..=n {
            for nn in m + 1..=n {
                if mu.get(m) != 1 || mu.get(nn) != 1 {
                    continue;
                }
                let bottom = mu.shifted(m, -1).and_then(|l| l.shifted(nn, -1)).unwrap();
                for y in lat.bucket(bottom) {
                    if !lat.contains(z.id, y) {
                        continue;
                    }
                    // Middle points through P_{mu - e_n}: m-cover y, n-covered by z.
                    let via_n =
                        lat.upper_covers(y, m).iter().filter(|w| lat.lower_covers(z.id, nn).contains(w)).count();
                    if via_n != 1 {
                        return Err(format!("z={} y={y} (m,n)=({m},{nn}): {via_n} points in P_(mu-e_n)", z.id));
                    }
                    let via_m =
                        lat.upper_covers(y, nn).iter().filter(|w| lat.lower_covers(z.id, m).contains(w)).count();
                    if via_m as u64 != lat.q() {
                        return Err(format!("z={} y={y} (m,n)=({m},{nn}): {via_m} points in P_(mu-e_m)", z.id));
                    }
                }
            }
        }
    }
    Ok(())
}

fn all_lower(lat: &Lattice, y: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=lat.n()).flat_map(|m| lat.lower_covers(y, m).iter().copied()).collect();
    v.sort_unstable();
    v
}

fn all_upper(lat: &Lattice, y: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=lat.n()).flat_map(|m| lat.upper_covers(y, m).iter().copied()).collect();
    v.sort_unstable();
    v
}

/// For `y in P_{mu-e_m}`, `z in P_{mu-e_n}` (`m != n`): a common lower cover
/// forces a unique common upper cover, and a common upper cover forces a
/// unique common lower cover.
pub fn check_diamonds(lat: &Lattice) -> Result<(), String> {
    let n = lat.n();
    for mu in Location::all(n) {
        for m in 1..=n {
            for nn in 1..=n {
                if m == nn {
                    continue;
                }
                let (Some(a), Some(b)) = (mu.shifted(m, -1), mu.shifted(nn, -1)) else {
                    continue;
                };
                for y in lat.bucket(a) {
                    let (ly, uy) = (all_lower(lat, y), all_upper(lat, y));
                    for z in lat.bucket(b) {
                        let (lz, uz) = (all_lower(lat, z), all_upper(lat, z));
                        let common_lower = ly.iter().filter(|w| lz.binary_search(w).is_ok()).count();
                        let common_upper = uy.iter().filter(|w| uz.binary_search(w).is_ok()).count();
                        if common_lower > 0 && common_upper != 1 {
                            return Err(format!(
                                "y={y} z={z}: common lower cover but {common_upper} common upper covers"
                            ));
                        }
                        if common_upper > 0 && common_lower != 1 {
                            return Err(format!(
                                "y={y} z={z}: common upper cover but {common_lower} common lower covers"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `|P_mu| = q^{|B_mu|}` for every `mu`, and the total matches the Gaussian
/// binomial count.
pub fn check_bucket_sizes(lat: &Lattice) -> Result<(), String> {
    for (mu, range) in lat.buckets() {
        let want = (lat.q() as u128).pow(mu.board_size() as u32);
        if range.len() as u128 != want {
            return Err(format!("|P_{mu}| = {}, expected {want}", range.len()));
        }
        for id in range.clone() {
            let s = lat.get(id);
            let loc = location_of(lat.gf(), &s.canon).map_err(|e| e.to_string())?;
            if loc != *mu {
                return Err(format!("point {id} stored at {mu} but has location {loc}"));
            }
        }
    }
    if lat.len() as u128 != lattice_size(lat.q(), lat.n()) {
        return Err(format!("|P| = {}, expected {}", lat.len(), lattice_size(lat.q(), lat.n())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(q: u64, n: usize) -> Lattice {
        enumerate_lattice(&GaloisField::builtin(q).unwrap(), n, None).unwrap()
    }

    #[test]
    fn small_lattice_buckets() {
        let l = lat(2, 2);
        assert_eq!(l.len(), 5);
        let sizes: Vec<(String, usize)> = l.buckets().iter().map(|(m, r)| (m.to_string(), r.len())).collect();
        assert_eq!(sizes, vec![("00".into(), 1), ("01".into(), 2), ("10".into(), 1), ("11".into(), 1)]);
        assert_eq!(lat(2, 3).len(), 16);
        assert_eq!(lat(3, 2).bucket(Location::parse("01").unwrap()).len(), 3);
    }

    #[test]
    fn location_examples() {
        let gf = GaloisField::builtin(2).unwrap();
        let y = FqMatrix::from_codes(&[&[1, 1]]);
        assert_eq!(location_of(&gf, &y).unwrap().to_string(), "01");
        assert_eq!(location_of(&gf, &FqMatrix::zeros(0, 2)).unwrap().to_string(), "00");
        assert_eq!(location_of(&gf, &FqMatrix::identity(2)).unwrap().to_string(), "11");
        assert!(location_of(&gf, &FqMatrix::from_codes(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn cover_examples() {
        let l = lat(2, 2);
        let h = l.find(&FqMatrix::identity(2)).unwrap();
        let v1 = l.find(&FqMatrix::from_codes(&[&[1, 0]])).unwrap();
        assert!(l.m_covers(h, v1, 2));
        assert!(!l.m_covers(h, v1, 1));
        assert!(!l.m_covers(h, h, 1));
        assert_eq!(l.lower_covers(h, 1).len(), 2);
        assert_eq!(count_m_covered(2, l.get(h).location, 1), 2);
        let zero = l.find(&FqMatrix::zeros(0, 2)).unwrap();
        for m in 1..=2 {
            assert_eq!(count_m_covered(2, l.get(zero).location, m), 0);
        }
        let l3 = lat(3, 2);
        let mu = Location::parse("01").unwrap();
        for y in l3.bucket(mu) {
            assert_eq!(l3.upper_covers(y, 1).len(), 1);
            assert_eq!(count_m_covering(3, mu, 1), 1);
        }
    }

    #[test]
    fn criterion_examples() {
        let gf = GaloisField::builtin(2).unwrap();
        let mu = Location::parse("011").unwrap();
        let nu = Location::parse("001").unwrap();
        let zero_y = MatrixForm::zero(mu);
        let zero_z = MatrixForm::zero(nu);
        assert!(matrix_cover_criterion(&gf, &zero_y, &zero_z, 2).unwrap());
        let mut y = MatrixForm::zero(mu);
        y.set(1, 2, FqElem::ONE);
        let mut z = MatrixForm::zero(nu);
        z.set(2, 3, FqElem::ONE);
        assert!(!matrix_cover_criterion(&gf, &y, &z, 2).unwrap());
        z.set(1, 3, FqElem::ONE);
        assert!(matrix_cover_criterion(&gf, &y, &z, 2).unwrap());
        assert!(matrix_cover_criterion(&gf, &y, &MatrixForm::zero(Location::parse("010").unwrap()), 3).is_ok());
        assert!(matrix_cover_criterion(&gf, &y, &zero_y, 2).is_err());
    }

    #[test]
    fn canonical_basis_roundtrip() {
        let l = lat(3, 3);
        for s in l.subspaces() {
            assert_eq!(l.gf().bottom_pivot_reduce(&s.canon).unwrap(), s.canon);
            assert_eq!(MatrixForm::from_canonical(s.location, &s.canon), s.matrix_form);
        }
    }
}
