//! Exact rational polytopes in H-representation.
//!
//! Vertices are found by intersecting every `n`-subset of facet hyperplanes
//! and keeping the feasible points. Volumes, barycenters and integrals of
//! affine functions all go through one deterministic triangulation: the star
//! (pulling) triangulation from the lexicographically smallest vertex, applied
//! recursively to the facets that avoid it.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{
    determinant, factorial, positively_spans, rank, solve_exact, subsets, LatticeVector, Matrix,
    Rational, RationalVector,
};
use crate::error::{Error, Result};
use crate::fan::{Fan, ToricDivisor};

/// The half-space `<u, normal> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: LatticeVector, offset: Rational) -> Self {
        Facet { normal, offset }
    }

    /// `<u, normal> >= offset` for a rational normal, rescaled to an integral one.
    pub fn from_rational(normal: &RationalVector, offset: &Rational) -> Self {
        let lcm = normal.coords().iter().fold(BigInt::from(1), |acc, c| {
            num_integer::lcm(acc, c.denom().clone())
        });
        let scale = Rational::from(&lcm);
        let coords = normal
            .coords()
            .iter()
            .map(|c| (c * &scale).numer().clone())
            .collect();
        Facet {
            normal: LatticeVector::new(coords),
            offset: offset * &scale,
        }
    }

    pub fn slack(&self, u: &RationalVector) -> Rational {
        self.normal.pair(u) - &self.offset
    }
}

/// An affine function `u ↦ <linear, u> + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunction {
    pub linear: RationalVector,
    pub constant: Rational,
}

impl AffineFunction {
    pub fn new(linear: RationalVector, constant: Rational) -> Self {
        AffineFunction { linear, constant }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        AffineFunction::new(RationalVector::zero(dim), c)
    }

    pub fn eval(&self, u: &RationalVector) -> Rational {
        self.linear.dot(u) + &self.constant
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: OnceLock<Result<Vec<RationalVector>>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets
    }
}

#[derive(Serialize)]
struct PolytopeView<'a> {
    facets: &'a [Facet],
    vertices: Option<&'a [RationalVector]>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeView {
            facets: &self.facets,
            vertices: self.vertices().ok(),
        }
        .serialize(s)
    }
}

impl Polytope {
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if let Some(f) = facets.iter().find(|f| f.normal.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.normal.dim(),
            });
        }
        Ok(Polytope {
            dim,
            facets,
            vertices: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// The polytope with one more half-space.
    pub fn with_facet(&self, facet: Facet) -> Result<Self> {
        let mut facets = self.facets.clone();
        facets.push(facet);
        Polytope::new(self.dim, facets)
    }

    /// `k·P` for `k >= 0`, by scaling the offsets.
    pub fn dilate(&self, k: &Rational) -> Self {
        Polytope {
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| Facet::new(f.normal.clone(), &f.offset * k))
                .collect(),
            vertices: OnceLock::new(),
        }
    }

    pub fn contains(&self, u: &RationalVector) -> bool {
        self.facets.iter().all(|f| !f.slack(u).is_negative())
    }

    pub fn is_bounded(&self) -> bool {
        let normals: Vec<LatticeVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        positively_spans(&normals, self.dim)
    }

    /// Lexicographically sorted vertex list, computed once.
    pub fn vertices(&self) -> Result<&[RationalVector]> {
        self.vertices
            .get_or_init(|| self.compute_vertices())
            .as_deref()
            .map_err(Clone::clone)
    }

    fn compute_vertices(&self) -> Result<Vec<RationalVector>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let n = self.dim;
        let mut found = BTreeSet::new();
        for subset in subsets(self.facets.len(), n) {
            let a: Matrix = subset
                .iter()
                .map(|&k| self.facets[k].normal.to_rational().coords().to_vec())
                .collect();
            let b = RationalVector::new(
                subset
                    .iter()
                    .map(|&k| self.facets[k].offset.clone())
                    .collect(),
            );
            if let Some(u) = solve_exact(&a, &b)? {
                if self.contains(&u) {
                    found.insert(u);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Dimension of the affine hull of the vertices; `None` when empty.
    pub fn affine_dim(&self) -> Result<Option<usize>> {
        let verts = self.vertices()?;
        Ok(affine_rank(verts, &(0..verts.len()).collect::<Vec<_>>()))
    }

    fn is_full_dimensional(&self) -> Result<bool> {
        Ok(self.affine_dim()? == Some(self.dim))
    }

    /// Indices into [`Polytope::vertices`] of each simplex in the star
    /// triangulation. Empty for lower-dimensional or empty polytopes.
    pub fn triangulate(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_full_dimensional()? {
            return Ok(Vec::new());
        }
        let verts = self.vertices()?;
        let tight: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| f.slack(v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        Ok(triangulate_face(verts, &tight, &all, self.dim))
    }

    fn simplices(&self) -> Result<Vec<(Rational, Vec<&RationalVector>)>> {
        let verts = self.vertices()?;
        let norm = Rational::from(factorial(self.dim));
        Ok(self
            .triangulate()?
            .into_iter()
            .map(|s| {
                let pts: Vec<&RationalVector> = s.iter().map(|&i| &verts[i]).collect();
                let edges: Matrix = pts[1..]
                    .iter()
                    .map(|p| (*p - pts[0]).coords().to_vec())
                    .collect();
                (determinant(&edges).abs() / &norm, pts)
            })
            .collect())
    }

    /// Exact Euclidean volume; zero when not full-dimensional.
    pub fn volume(&self) -> Result<Rational> {
        Ok(self.simplices()?.into_iter().map(|(v, _)| v).sum())
    }

    /// Normalized volume `n!·vol(P)`.
    pub fn normalized_volume(&self) -> Result<Rational> {
        Ok(self.volume()? * Rational::from(factorial(self.dim)))
    }

    pub fn barycenter(&self) -> Result<RationalVector> {
        let simplices = self.simplices()?;
        let total: Rational = simplices.iter().map(|(v, _)| v.clone()).sum();
        if total.is_zero() {
            return Err(Error::DegeneratePolytope);
        }
        let k = Rational::from(self.dim as i64 + 1);
        let mut acc = RationalVector::zero(self.dim);
        for (vol, pts) in &simplices {
            let weight = vol / &k;
            for p in pts {
                acc = &acc + &p.scale(&weight);
            }
        }
        Ok(acc.scale(&total.recip().expect("nonzero")))
    }

    /// `∫_P ℓ(u) du`, exact.
    pub fn integrate_affine(&self, f: &AffineFunction) -> Result<Rational> {
        let k = Rational::from(self.dim as i64 + 1);
        Ok(self
            .simplices()?
            .into_iter()
            .map(|(vol, pts)| {
                let mean: Rational = pts.iter().map(|p| f.eval(p)).sum::<Rational>() / &k;
                vol * mean
            })
            .sum())
    }

    /// Integer points of `P`, sorted lexicographically.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        Ok(self
            .lattice_points_i64()?
            .into_iter()
            .map(|p| LatticeVector::from_i64(&p))
            .collect())
    }

    /// Integer points as machine integers; the bounding box must fit in `i64`.
    pub fn lattice_points_i64(&self) -> Result<Vec<Vec<i64>>> {
        let verts = self.vertices()?;
        if verts.is_empty() {
            return Ok(Vec::new());
        }
        let n = self.dim;
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for c in 0..n {
            let min = verts.iter().map(|v| &v[c]).min().expect("nonempty");
            let max = verts.iter().map(|v| &v[c]).max().expect("nonempty");
            lo.push(min.ceil().to_i64().ok_or(Error::Overflow)?);
            hi.push(max.floor().to_i64().ok_or(Error::Overflow)?);
        }
        // For integer points, <x, a> >= b is <x, a> >= ceil(b).
        let rows: Vec<(Vec<i64>, i64)> = self
            .facets
            .iter()
            .map(|f| {
                let normal = f.normal.to_i64().ok_or(Error::Overflow)?;
                let bound = f.offset.ceil().to_i64().ok_or(Error::Overflow)?;
                Ok((normal, bound))
            })
            .collect::<Result<_>>()?;
        let mut points = Vec::new();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(points);
        }
        let mut x = lo.clone();
        loop {
            if rows
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum::<i64>() >= *b)
            {
                points.push(x.clone());
            }
            let mut c = n;
            loop {
                if c == 0 {
                    return Ok(points);
                }
                c -= 1;
                if x[c] < hi[c] {
                    x[c] += 1;
                    for (xj, lj) in x[c + 1..].iter_mut().zip(&lo[c + 1..]) {
                        *xj = *lj;
                    }
                    break;
                }
            }
        }
    }
}

/// Affine rank of the listed points, `None` for an empty list.
fn affine_rank(verts: &[RationalVector], ids: &[usize]) -> Option<usize> {
    let (&first, rest) = ids.split_first()?;
    let rows: Matrix = rest
        .iter()
        .map(|&i| (&verts[i] - &verts[first]).coords().to_vec())
        .collect();
    Some(if rows.is_empty() { 0 } else { rank(&rows) })
}

fn triangulate_face(
    verts: &[RationalVector],
    tight: &[BTreeSet<usize>],
    face: &[usize],
    dim: usize,
) -> Vec<Vec<usize>> {
    let apex = face[0];
    if dim == 0 {
        return vec![vec![apex]];
    }
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in tight {
        let sub: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
        if sub.len() < dim || sub.contains(&apex) || sub.len() == face.len() {
            continue;
        }
        if affine_rank(verts, &sub) == Some(dim - 1) {
            subfaces.insert(sub);
        }
    }
    subfaces
        .iter()
        .flat_map(|sub| triangulate_face(verts, tight, sub, dim - 1))
        .map(|s| std::iter::once(apex).chain(s).collect())
        .collect()
}

/// `P_D = { u : <u, v_i> >= -a_i for all i }`.
pub fn divisor_polytope(fan: &Fan, divisor: &ToricDivisor) -> Result<Polytope> {
    if divisor.len() != fan.ray_count() {
        return Err(Error::DivisorLength {
            expected: fan.ray_count(),
            found: divisor.len(),
        });
    }
    let facets = fan
        .rays()
        .iter()
        .zip(divisor.coefficients())
        .map(|(v, a)| Facet::new(v.clone(), -a))
        .collect();
    Polytope::new(fan.dim(), facets)
}
