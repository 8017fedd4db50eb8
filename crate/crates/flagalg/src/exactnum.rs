//! Exact scalar rings: rationals, the quadratic extension `Q[sqrt q]` and the
//! cyclotomic field `Q(zeta_p)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Arithmetic needed by the exact linear algebra routines.
pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One + Sub<Output = Self> + Neg<Output = Self> + Send + Sync
{
    fn inv(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^k` for an integer exponent of either sign.
pub fn rat_pow(base: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(base.clone(), k as usize)
    } else {
        num_traits::pow(base.recip(), k.unsigned_abs() as usize)
    }
}

fn perfect_square_root(q: u64) -> Option<u64> {
    let r = q.isqrt();
    (r * r == q).then_some(r)
}

/// An element `a + b*sqrt(q)` with rational `a`, `b`.
///
/// The base `q` is only retained while the irrational part is nonzero, so a
/// rational value has a single representation regardless of where it came
/// from. Perfect-square bases are folded into the rational part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtExt {
    q: u64,
    a: Rational,
    b: Rational,
}

impl SqrtExt {
    pub fn new(q: u64, a: Rational, b: Rational) -> Self {
        assert!(q >= 1, "quadratic extension base must be positive");
        if b.is_zero() {
            return SqrtExt::from_rational(a);
        }
        if let Some(r) = perfect_square_root(q) {
            return SqrtExt::from_rational(a + b * rat(r as i64));
        }
        SqrtExt { q, a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        SqrtExt { q: 0, a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        SqrtExt::from_rational(rat(n))
    }

    /// `sqrt(q)` itself.
    pub fn sqrt(q: u64) -> Self {
        SqrtExt::new(q, Rational::zero(), Rational::one())
    }

    /// The extension base, or `None` when the value is rational.
    pub fn base_q(&self) -> Option<u64> {
        (self.q != 0).then_some(self.q)
    }

    pub fn rat_part(&self) -> &Rational {
        &self.a
    }

    pub fn irr_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn join_base(&self, other: &SqrtExt) -> u64 {
        match (self.q, other.q) {
            (0, q) | (q, 0) => q,
            (p, q) if p == q => p,
            (p, q) => panic!("mixing incompatible quadratic extensions sqrt({p}) and sqrt({q})"),
        }
    }

    /// Galois conjugate `a - b*sqrt(q)`.
    pub fn conjugate(&self) -> SqrtExt {
        SqrtExt { q: self.q, a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a^2 - q b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(self.q as i64) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<SqrtExt> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(SqrtExt::new(self.q.max(1), c.a / &n, c.b / &n))
    }

    pub fn scale(&self, r: &Rational) -> SqrtExt {
        SqrtExt::new(self.q.max(1), &self.a * r, &self.b * r)
    }
}

impl Zero for SqrtExt {
    fn zero() -> Self {
        SqrtExt::from_rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for SqrtExt {
    fn one() -> Self {
        SqrtExt::from_rational(Rational::one())
    }
}

impl<'a> Add<&'a SqrtExt> for &'a SqrtExt {
    type Output = SqrtExt;
    fn add(self, o: &SqrtExt) -> SqrtExt {
        let q = self.join_base(o);
        SqrtExt::new(q.max(1), &self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a SqrtExt> for &'a SqrtExt {
    type Output = SqrtExt;
    fn sub(self, o: &SqrtExt) -> SqrtExt {
        let q = self.join_base(o);
        SqrtExt::new(q.max(1), &self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a SqrtExt> for &'a SqrtExt {
    type Output = SqrtExt;
    fn mul(self, o: &SqrtExt) -> SqrtExt {
        let q = self.join_base(o);
        let qr = rat(q as i64);
        let a = &self.a * &o.a + qr * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        SqrtExt::new(q.max(1), a, b)
    }
}

impl Add for SqrtExt {
    type Output = SqrtExt;
    fn add(self, o: SqrtExt) -> SqrtExt {
        &self + &o
    }
}

impl Sub for SqrtExt {
    type Output = SqrtExt;
    fn sub(self, o: SqrtExt) -> SqrtExt {
        &self - &o
    }
}

impl Mul for SqrtExt {
    type Output = SqrtExt;
    fn mul(self, o: SqrtExt) -> SqrtExt {
        &self * &o
    }
}

impl AddAssign<&SqrtExt> for SqrtExt {
    fn add_assign(&mut self, o: &SqrtExt) {
        *self = &*self + o;
    }
}

impl Neg for SqrtExt {
    type Output = SqrtExt;
    fn neg(self) -> SqrtExt {
        SqrtExt { q: self.q, a: -self.a, b: -self.b }
    }
}

impl Field for SqrtExt {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_int(n: i64) -> Self {
        SqrtExt::from_int(n)
    }
}

impl From<Rational> for SqrtExt {
    fn from(a: Rational) -> Self {
        SqrtExt::from_rational(a)
    }
}

impl fmt::Display for SqrtExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let irr = if self.b.is_one() {
            format!("√{}", self.q)
        } else if (-self.b.clone()).is_one() {
            format!("-√{}", self.q)
        } else {
            format!("{}√{}", self.b, self.q)
        };
        if self.a.is_zero() {
            write!(f, "{irr}")
        } else if self.b.is_negative() {
            write!(f, "{} - {}", self.a, irr.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}", self.a, irr)
        }
    }
}

impl fmt::Debug for SqrtExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `q^(k/2)` exactly.
pub fn q_half_pow(q: u64, k: i64) -> SqrtExt {
    assert!(q >= 2, "q must be at least 2");
    let qr = rat(q as i64);
    if k.rem_euclid(2) == 0 {
        SqrtExt::from_rational(rat_pow(&qr, k / 2))
    } else {
        SqrtExt::new(q, Rational::zero(), rat_pow(&qr, (k - 1).div_euclid(2)))
    }
}

/// The quantum integer `[n]` at deformation parameter `q^(1/2)`.
pub fn quantum_int(q: u64, n: u32) -> SqrtExt {
    let n = n as i64;
    let mut acc = SqrtExt::zero();
    for j in 0..n {
        acc += &q_half_pow(q, n - 1 - 2 * j);
    }
    acc
}

/// An element of `Q(zeta_p)` in the power basis `1, zeta, ..., zeta^(p-2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycRational {
    p: u32,
    coeffs: Vec<Rational>,
}

impl CycRational {
    pub fn zero_in(p: u32) -> Self {
        assert!(p >= 2);
        CycRational { p, coeffs: vec![Rational::zero(); (p - 1) as usize] }
    }

    pub fn from_rational(p: u32, r: Rational) -> Self {
        let mut c = CycRational::zero_in(p);
        c.coeffs[0] = r;
        c
    }

    /// `zeta^k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut full = vec![Rational::zero(); p as usize];
        full[k.rem_euclid(p as i64) as usize] = Rational::one();
        CycRational::reduce(p, full)
    }

    /// Builds from an exponent histogram: `sum_k counts[k] * zeta^k`.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        CycRational::reduce(p, counts.iter().map(|&c| rat(c)).collect())
    }

    fn reduce(p: u32, mut full: Vec<Rational>) -> Self {
        let top = full.pop().expect("length p");
        for c in full.iter_mut() {
            *c -= &top;
        }
        CycRational { p, coeffs: full }
    }

    fn expand(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        v.push(Rational::zero());
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Complex conjugation `zeta^k -> zeta^(p-k)`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let e = self.expand();
        let mut out = vec![Rational::zero(); p];
        for (k, c) in e.into_iter().enumerate() {
            out[(p - k) % p] += c;
        }
        CycRational::reduce(self.p, out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycRational { p: self.p, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }
}

impl<'a> Add<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn add(self, o: &CycRational) -> CycRational {
        assert_eq!(self.p, o.p, "mixing cyclotomic fields");
        CycRational { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn sub(self, o: &CycRational) -> CycRational {
        assert_eq!(self.p, o.p, "mixing cyclotomic fields");
        CycRational { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn mul(self, o: &CycRational) -> CycRational {
        assert_eq!(self.p, o.p, "mixing cyclotomic fields");
        let p = self.p as usize;
        let mut out = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % p] += a * b;
                }
            }
        }
        CycRational::reduce(self.p, out)
    }
}

impl Neg for CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        CycRational { p: self.p, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}ζ"),
                _ => format!("{c}ζ^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (p={})", self.p)
    }
}

/// The additive character `a -> zeta_p^a` of `F_p`.
pub fn character_value(p: u32, a: u32) -> CycRational {
    assert!(a < p, "character argument must be reduced mod p");
    CycRational::zeta_pow(p, a as i64)
}

/// `sum_i u_i * conj(v_i)`.
pub fn hermitian_inner(u: &[CycRational], v: &[CycRational]) -> CycRational {
    assert_eq!(u.len(), v.len());
    let p = u.first().map(|x| x.p()).unwrap_or(2);
    let mut acc = CycRational::zero_in(p);
    for (a, b) in u.iter().zip(v) {
        acc = &acc + &(a * &b.conj());
    }
    acc
}
