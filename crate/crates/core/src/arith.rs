//! Exact rational arithmetic, lattice vectors and small dense linear algebra.
//!
//! Everything here is exact. [`Rational`] wraps a gcd-reduced big rational and
//! serializes as the string `"p/q"` (or `"p"` for integers), which is the
//! only numeric representation that appears in machine-readable output.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Lossy conversion for human-facing text output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Rational::one(), |acc, _| &acc * self)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(p, q))
            }
            None => Ok(Rational::from_integer(
                s.parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<&BigInt> for Rational {
    fn from(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

/// A point of an integer lattice `Z^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn gcd(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd().is_one()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(Rational::from).collect())
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a point of the dual space.
    pub fn pair(&self, u: &RationalVector) -> Rational {
        debug_assert_eq!(self.dim(), u.dim());
        self.0
            .iter()
            .zip(&u.0)
            .map(|(a, b)| b * &Rational::from(a))
            .sum()
    }

    /// Coordinates as machine integers, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Lattice coordinates are JSON integers; anything beyond i64 falls back to a string.
impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coord {
            Int(i64),
            Text(String),
        }

        let raw = Vec::<Coord>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|c| match c {
                Coord::Int(v) => Ok(BigInt::from(v)),
                Coord::Text(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| de::Error::custom(format!("not an integer: {s:?}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(LatticeVector)
    }
}

/// A point of the real dual space with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RationalVector(self.0.iter().map(|c| c * k).collect())
    }

    /// The lattice point with these coordinates, if all are integers.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Divides a nonzero lattice vector by the gcd of its entries.
pub fn primitive_vector(v: &LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(Error::NotADirection);
    }
    let g = v.gcd();
    Ok(LatticeVector(v.0.iter().map(|c| c / &g).collect()))
}

/// Rows of rationals. Small and dense.
pub type Matrix = Vec<Vec<Rational>>;

pub fn to_matrix(rows: &[LatticeVector]) -> Matrix {
    rows.iter().map(|r| r.to_rational().0).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip().expect("pivot is nonzero");
        for c in &mut m[row] {
            *c = &*c * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &Matrix) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.clone();
    row_reduce(&mut m, ncols).len()
}

/// Solves a square system exactly. `None` when the matrix is singular.
pub fn solve_exact(a: &Matrix, b: &RationalVector) -> Result<Option<RationalVector>> {
    let n = a.len();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    if rank(a) < n {
        return Ok(None);
    }
    solve_unique(a, b)
}

/// Solves a possibly overdetermined system `A x = b` with `A` of shape m×n.
///
/// Returns the solution when it exists and is unique; `None` when the system is
/// inconsistent or underdetermined.
pub fn solve_unique(a: &Matrix, b: &RationalVector) -> Result<Option<RationalVector>> {
    if a.len() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.dim(),
        });
    }
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b.coords())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, ncols + 1);
    if pivots.contains(&ncols) || pivots.len() < ncols {
        return Ok(None);
    }
    Ok(Some(RationalVector(
        (0..ncols).map(|i| aug[i][ncols].clone()).collect(),
    )))
}

/// Determinant by elimination with first-nonzero pivoting.
pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].recip().expect("pivot is nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &(&factor * p);
            }
        }
    }
    det
}

pub fn lattice_determinant(rows: &[LatticeVector]) -> BigInt {
    determinant(&to_matrix(rows)).numer().clone()
}

/// Generalized cross product of `n - 1` vectors in `Z^n`.
///
/// The result is orthogonal to every input row and is zero exactly when the
/// rows are linearly dependent.
pub fn normal_vector(rows: &[LatticeVector], dim: usize) -> LatticeVector {
    debug_assert_eq!(rows.len() + 1, dim);
    let m = to_matrix(rows);
    let coords = (0..dim)
        .map(|j| {
            let minor: Matrix = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = determinant(&minor).numer().clone();
            if (j + dim) % 2 == 1 {
                d
            } else {
                -d
            }
        })
        .collect();
    LatticeVector(coords)
}

/// Whether the vectors positively span `R^dim`, i.e. no nonzero `u` has
/// `<u, v> >= 0` for every `v`.
pub fn positively_spans(vectors: &[LatticeVector], dim: usize) -> bool {
    if rank(&to_matrix(vectors)) < dim {
        return false;
    }
    // With full rank the dual cone is pointed; it is nonzero iff it has an
    // extreme ray, which is cut out by dim - 1 independent vectors.
    !subsets(vectors.len(), dim - 1).into_iter().any(|subset| {
        let rows: Vec<LatticeVector> = subset.iter().map(|&i| vectors[i].clone()).collect();
        let h = normal_vector(&rows, dim);
        if h.is_zero() {
            return false;
        }
        let signs: Vec<Ordering> = vectors
            .iter()
            .map(|v| v.dot(&h).cmp(&BigInt::zero()))
            .collect();
        signs.iter().all(|&s| s != Ordering::Less) || signs.iter().all(|&s| s != Ordering::Greater)
    })
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
