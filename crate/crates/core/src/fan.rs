//! Complete fans, their validation, and torus-invariant divisors.
//!
//! A [`Fan`] is stored as its list of primitive ray generators together with
//! its maximal cones, each given by the indices of the rays that span it.
//! Ray `i` corresponds to the torus-invariant prime divisor `D_i`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    lattice_determinant, normal_vector, positively_spans, primitive_vector, rank, solve_unique,
    subsets, to_matrix, LatticeVector, Rational, RationalVector,
};
use crate::error::{Error, Result};

/// A cone of the fan, given by sorted ray indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Cone {
            ray_indices: set.into_iter().collect(),
        }
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.ray_indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ray_indices.is_empty()
    }
}

/// A facet of a full-dimensional cone: an inward primitive normal and the rays on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    pub normal: LatticeVector,
    pub rays: Vec<usize>,
}

/// A cone of the fan (any dimension), as a face of some maximal cone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Face {
    pub rays: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

/// A fan in `N_R = R^dim`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    #[serde(skip)]
    faces: OnceLock<Vec<Face>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl TryFrom<FanJson> for Fan {
    type Error = Error;

    fn try_from(json: FanJson) -> Result<Fan> {
        let cones = json.max_cones.into_iter().map(Cone::new).collect();
        Fan::new(json.dim, json.rays, cones)
    }
}

impl From<Fan> for FanJson {
    fn from(fan: Fan) -> FanJson {
        FanJson {
            dim: fan.dim,
            rays: fan.rays,
            max_cones: fan.max_cones.into_iter().map(|c| c.ray_indices).collect(),
        }
    }
}

impl Fan {
    /// Checks the structural invariants: dimensions agree, rays are primitive
    /// and distinct, cones reference existing rays.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Cone>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::MalformedFan("dimension must be positive".into()));
        }
        if rays.is_empty() || max_cones.is_empty() {
            return Err(Error::MalformedFan(
                "a fan needs at least one ray and one maximal cone".into(),
            ));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::MalformedFan(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.dim()
                )));
            }
        }
        let non_primitive: Vec<usize> = rays
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_primitive())
            .map(|(i, _)| i)
            .collect();
        if !non_primitive.is_empty() {
            return Err(Error::NonPrimitiveRays(non_primitive));
        }
        let mut seen: BTreeMap<&LatticeVector, usize> = BTreeMap::new();
        let mut duplicates = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if let Some(&j) = seen.get(r) {
                duplicates.push((j, i));
            } else {
                seen.insert(r, i);
            }
        }
        if !duplicates.is_empty() {
            return Err(Error::DuplicateRays(duplicates));
        }
        for (c, cone) in max_cones.iter().enumerate() {
            if cone.is_empty() {
                return Err(Error::MalformedFan(format!("cone {c} is empty")));
            }
            if let Some(&bad) = cone.ray_indices.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::MalformedFan(format!(
                    "cone {c} references ray {bad}, but there are only {} rays",
                    rays.len()
                )));
            }
        }
        Ok(Fan {
            dim,
            rays,
            max_cones,
            faces: OnceLock::new(),
        })
    }

    /// Convenience constructor from small integer data.
    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            dim,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            max_cones
                .iter()
                .map(|c| Cone::new(c.iter().copied()))
                .collect(),
        )
    }

    /// The complete fan in the plane whose rays are `rays`, with consecutive
    /// rays (by angle) spanning the maximal cones.
    pub fn planar(rays: Vec<LatticeVector>) -> Result<Fan> {
        if rays.iter().any(|r| r.dim() != 2) {
            return Err(Error::MalformedFan("planar fans need 2D rays".into()));
        }
        let mut order: Vec<usize> = (0..rays.len()).collect();
        order.sort_by(|&a, &b| angle_cmp(&rays[a], &rays[b]));
        let sorted: Vec<LatticeVector> = order.iter().map(|&i| rays[i].clone()).collect();
        let d = sorted.len();
        let cones = (0..d).map(|i| Cone::new([i, (i + 1) % d])).collect();
        Fan::new(2, sorted, cones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Result<&LatticeVector> {
        self.rays.get(i).ok_or(Error::RayIndex {
            index: i,
            count: self.rays.len(),
        })
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<LatticeVector> {
        cone.ray_indices
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect()
    }

    /// Facets of a full-dimensional cone with inward normals. Empty if the cone
    /// is not full-dimensional.
    pub fn cone_facets(&self, cone: &Cone) -> Vec<ConeFacet> {
        let n = self.dim;
        let rays = self.cone_rays(cone);
        if rank(&to_matrix(&rays)) < n {
            return Vec::new();
        }
        let mut found: BTreeMap<Vec<usize>, LatticeVector> = BTreeMap::new();
        for subset in subsets(rays.len(), n - 1) {
            let rows: Vec<LatticeVector> = subset.iter().map(|&k| rays[k].clone()).collect();
            let h = normal_vector(&rows, n);
            if h.is_zero() {
                continue;
            }
            let pairings: Vec<BigInt> = rays.iter().map(|r| r.dot(&h)).collect();
            let h = if pairings.iter().all(|p| !p.is_negative()) {
                h
            } else if pairings.iter().all(|p| !p.is_positive()) {
                -&h
            } else {
                continue;
            };
            let tight: Vec<usize> = pairings
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_zero())
                .map(|(k, _)| cone.ray_indices[k])
                .collect();
            let h = primitive_vector(&h).expect("nonzero normal");
            found.entry(tight).or_insert(h);
        }
        found
            .into_iter()
            .map(|(rays, normal)| ConeFacet { normal, rays })
            .collect()
    }

    /// Whether `v` lies in the (closed) maximal cone.
    pub fn cone_contains(&self, cone: &Cone, v: &LatticeVector) -> bool {
        let facets = self.cone_facets(cone);
        !facets.is_empty() && facets.iter().all(|f| !f.normal.dot(v).is_negative())
    }

    /// Index of some maximal cone containing `v`.
    pub fn locate(&self, v: &LatticeVector) -> Option<usize> {
        self.max_cones.iter().position(|c| self.cone_contains(c, v))
    }

    /// Every cone of the fan except the zero cone: all faces of all maximal
    /// cones, deduplicated, sorted by dimension and then by rays.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| {
            let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
            for cone in &self.max_cones {
                let facets: Vec<BTreeSet<usize>> = self
                    .cone_facets(cone)
                    .into_iter()
                    .map(|f| f.rays.into_iter().collect())
                    .collect();
                let mut closure: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
                closure.insert(cone.ray_indices.iter().copied().collect());
                let mut frontier: Vec<BTreeSet<usize>> = closure.iter().cloned().collect();
                while let Some(face) = frontier.pop() {
                    for facet in &facets {
                        let meet: BTreeSet<usize> = face.intersection(facet).copied().collect();
                        if closure.insert(meet.clone()) {
                            frontier.push(meet);
                        }
                    }
                }
                all.extend(
                    closure
                        .into_iter()
                        .filter(|f| !f.is_empty())
                        .map(|f| f.into_iter().collect()),
                );
            }
            let mut faces: Vec<Face> = all
                .into_iter()
                .map(|rays| {
                    let vecs: Vec<LatticeVector> =
                        rays.iter().map(|&i| self.rays[i].clone()).collect();
                    Face {
                        dim: rank(&to_matrix(&vecs)),
                        rays,
                    }
                })
                .collect();
            faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
            faces
        })
    }

    /// Star subdivision at `v`, which must lie in the relative interior of a
    /// cone of this simplicial fan. Returns the new fan; the new ray is last.
    pub fn star_subdivide(&self, v: &LatticeVector) -> Result<Fan> {
        let v = primitive_vector(v)?;
        if self.rays.contains(&v) {
            return Err(Error::MalformedFan(format!("{v} is already a ray")));
        }
        let mut center: Option<Vec<usize>> = None;
        for face in self.faces() {
            let gens: Vec<LatticeVector> =
                face.rays.iter().map(|&i| self.rays[i].clone()).collect();
            if gens.len() != face.dim {
                return Err(Error::MalformedFan(
                    "star subdivision needs a simplicial fan".into(),
                ));
            }
            let a = transpose(&to_matrix(&gens));
            if let Some(coeffs) = solve_unique(&a, &v.to_rational())? {
                if coeffs.coords().iter().all(Rational::is_positive) {
                    center = Some(face.rays.clone());
                    break;
                }
            }
        }
        let center = center.ok_or_else(|| {
            Error::MalformedFan(format!("{v} is not in the relative interior of any cone"))
        })?;
        let new_index = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(v);
        let mut cones = Vec::new();
        for cone in &self.max_cones {
            if center.iter().all(|&i| cone.contains_ray(i)) {
                for &dropped in &center {
                    cones.push(Cone::new(
                        cone.ray_indices
                            .iter()
                            .copied()
                            .filter(|&i| i != dropped)
                            .chain([new_index]),
                    ));
                }
            } else {
                cones.push(cone.clone());
            }
        }
        Fan::new(self.dim, rays, cones)
    }

    /// The product fan in `N_R ⊕ N'_R`.
    pub fn product(&self, other: &Fan) -> Fan {
        let dim = self.dim + other.dim;
        let mut rays: Vec<LatticeVector> = self
            .rays
            .iter()
            .map(|r| {
                let mut c = r.coords().to_vec();
                c.resize(dim, BigInt::zero());
                LatticeVector::new(c)
            })
            .collect();
        rays.extend(other.rays.iter().map(|r| {
            let mut c = vec![BigInt::zero(); self.dim];
            c.extend(r.coords().iter().cloned());
            LatticeVector::new(c)
        }));
        let offset = self.rays.len();
        let cones = self
            .max_cones
            .iter()
            .flat_map(|a| {
                other.max_cones.iter().map(move |b| {
                    Cone::new(
                        a.ray_indices
                            .iter()
                            .copied()
                            .chain(b.ray_indices.iter().map(|&j| j + offset)),
                    )
                })
            })
            .collect();
        Fan::new(dim, rays, cones).expect("product of valid fans is structurally valid")
    }
}

fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| m.iter().map(|row| row[c].clone()).collect())
        .collect()
}

fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    let half = |v: &LatticeVector| {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        BigInt::zero().cmp(&cross)
    })
}

/// Outcome of [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanDiagnostics {
    pub complete: bool,
    pub simplicial: bool,
    pub smooth: bool,
    pub failures: Vec<String>,
}

impl FanDiagnostics {
    /// A genuine complete fan: complete and no structural failure.
    pub fn is_complete_fan(&self) -> bool {
        self.complete && self.failures.is_empty()
    }
}

/// Checks completeness, simpliciality and smoothness.
///
/// Completeness is certified combinatorially: every facet of a maximal cone
/// is shared by exactly two maximal cones lying on opposite sides of it, the
/// rays positively span the space, and no maximal cone's interior meets
/// another maximal cone.
pub fn validate_fan(fan: &Fan) -> FanDiagnostics {
    let n = fan.dim;
    let mut failures = Vec::new();
    let mut full_dimensional = true;
    let mut simplicial = true;
    let mut smooth = true;

    let mut facet_owners: BTreeMap<Vec<usize>, Vec<(usize, LatticeVector)>> = BTreeMap::new();
    for (c, cone) in fan.max_cones.iter().enumerate() {
        let rays = fan.cone_rays(cone);
        let r = rank(&to_matrix(&rays));
        if r < n {
            full_dimensional = false;
            failures.push(format!(
                "cone {c} {:?} is not full-dimensional",
                cone.ray_indices
            ));
            simplicial = false;
            smooth = false;
            continue;
        }
        if rays.len() != n {
            simplicial = false;
            smooth = false;
        } else if !lattice_determinant(&rays).abs().is_one() {
            smooth = false;
        }
        let facets = fan.cone_facets(cone);
        let normals: Vec<LatticeVector> = facets.iter().map(|f| f.normal.clone()).collect();
        if rank(&to_matrix(&normals)) < n {
            failures.push(format!(
                "cone {c} {:?} is not strongly convex",
                cone.ray_indices
            ));
        }
        for f in facets {
            facet_owners.entry(f.rays).or_default().push((c, f.normal));
        }
    }

    for i in 0..fan.rays.len() {
        if !fan.max_cones.iter().any(|c| c.contains_ray(i)) {
            failures.push(format!("ray {i} lies in no maximal cone"));
        }
    }

    let mut paired = full_dimensional;
    for (face, owners) in &facet_owners {
        match owners.as_slice() {
            [(_, a), (_, b)] if *a == -b => {}
            [(c1, _), (c2, _)] => {
                paired = false;
                failures.push(format!(
                    "face {face:?} is shared by cones {c1} and {c2} on the same side"
                ));
            }
            _ => {
                paired = false;
                let cones: Vec<usize> = owners.iter().map(|(c, _)| *c).collect();
                failures.push(format!(
                    "unpaired face {face:?}: belongs to {} maximal cone(s) {cones:?}, expected exactly 2",
                    owners.len()
                ));
            }
        }
    }

    let spans = positively_spans(&fan.rays, n);
    if !spans {
        failures.push("rays do not positively span the ambient space".into());
    }

    let mut disjoint_interiors = true;
    if full_dimensional {
        for (c, cone) in fan.max_cones.iter().enumerate() {
            let interior = cone
                .ray_indices
                .iter()
                .skip(1)
                .fold(fan.rays[cone.ray_indices[0]].clone(), |acc, &i| {
                    &acc + &fan.rays[i]
                });
            for (o, other) in fan.max_cones.iter().enumerate() {
                if o != c && fan.cone_contains(other, &interior) {
                    disjoint_interiors = false;
                    failures.push(format!("cones {c} and {o} overlap"));
                }
            }
        }
    }

    FanDiagnostics {
        complete: paired && spans && disjoint_interiors,
        simplicial,
        smooth,
        failures,
    }
}

/// A torus-invariant Q-divisor `Σ a_i D_i`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToricDivisor {
    coefficients: Vec<Rational>,
}

impl ToricDivisor {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        ToricDivisor { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        ToricDivisor::new(coefficients.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(rays: usize) -> Self {
        ToricDivisor::new(vec![Rational::zero(); rays])
    }

    /// The prime divisor `D_i`.
    pub fn prime(rays: usize, i: usize) -> Self {
        let mut d = ToricDivisor::zero(rays);
        d.coefficients[i] = Rational::one();
        d
    }

    /// `Σ D_i` over the listed indices, with multiplicity.
    pub fn sum_of(rays: usize, indices: &[usize]) -> Self {
        let mut d = ToricDivisor::zero(rays);
        for &i in indices {
            d.coefficients[i] += Rational::one();
        }
        d
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(Rational::is_integer)
    }

    /// Indices with positive coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.len() == fan.ray_count() {
            Ok(())
        } else {
            Err(Error::DivisorLength {
                expected: fan.ray_count(),
                found: self.len(),
            })
        }
    }
}

/// `-K_X = D_1 + ... + D_d`.
pub fn anticanonical_divisor(fan: &Fan) -> ToricDivisor {
    ToricDivisor::new(vec![Rational::one(); fan.ray_count()])
}

/// Cartier data of `-K_X`: per maximal cone, the point `u_σ` with
/// `<u_σ, v_i> = -1` on the rays of σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoData {
    pub cartier_vertices: Vec<RationalVector>,
    pub ample: bool,
}

/// `None` when some maximal cone admits no `u_σ`, i.e. `-K_X` is not Q-Cartier.
///
/// `ample` holds when the support function is strictly convex: for every cone
/// σ and every ray outside it, `<u_σ, v> > -1`.
pub fn fano_vertex_data(fan: &Fan) -> Option<FanoData> {
    let mut cartier_vertices = Vec::with_capacity(fan.max_cones.len());
    for cone in &fan.max_cones {
        let a = to_matrix(&fan.cone_rays(cone));
        let b = RationalVector::new(vec![-Rational::one(); cone.len()]);
        cartier_vertices.push(solve_unique(&a, &b).ok()??);
    }
    let minus_one = -Rational::one();
    let ample = fan
        .max_cones
        .iter()
        .zip(&cartier_vertices)
        .all(|(cone, u)| {
            (0..fan.rays.len())
                .filter(|&i| !cone.contains_ray(i))
                .all(|i| fan.rays[i].pair(u) > minus_one)
        });
    Some(FanoData {
        cartier_vertices,
        ample,
    })
}

/// Rational witness `u` with `<u, v_i> = d_i - e_i` for all rays, if one exists.
pub fn q_linear_equivalence(
    fan: &Fan,
    d: &ToricDivisor,
    e: &ToricDivisor,
) -> Result<Option<RationalVector>> {
    d.check_len(fan)?;
    e.check_len(fan)?;
    let rhs = RationalVector::new(
        d.coefficients
            .iter()
            .zip(&e.coefficients)
            .map(|(a, b)| a - b)
            .collect(),
    );
    solve_unique(&to_matrix(&fan.rays), &rhs)
}

/// Lattice witness `u ∈ M` with `D - E = div(χ^u)`, if `D ~ E`.
pub fn linear_equivalence(
    fan: &Fan,
    d: &ToricDivisor,
    e: &ToricDivisor,
) -> Result<Option<LatticeVector>> {
    Ok(q_linear_equivalence(fan, d, e)?.and_then(|u| u.to_lattice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[2, 0]],
        )
        .unwrap()
    }

    fn f1() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap()
    }

    fn p1xp1() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn p2_is_complete_and_smooth() {
        let diag = validate_fan(&p2());
        assert!(diag.complete && diag.simplicial && diag.smooth, "{diag:?}");
        assert!(diag.failures.is_empty());
    }

    #[test]
    fn deleting_a_cone_breaks_pairing() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        let diag = validate_fan(&fan);
        assert!(!diag.complete);
        assert!(diag
            .failures
            .iter()
            .any(|f| f.contains("unpaired face [0]")));
        assert!(diag
            .failures
            .iter()
            .any(|f| f.contains("unpaired face [2]")));
    }

    #[test]
    fn lone_cone_with_determinant_two() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]).unwrap();
        let diag = validate_fan(&fan);
        assert!(!diag.complete);
        assert!(!diag.smooth);
        assert!(diag.simplicial);
    }

    #[test]
    fn double_cover_is_not_complete() {
        // Six rays wound twice around the origin, each cone still convex.
        let rays: Vec<&[i64]> = vec![&[1, 0], &[0, 1], &[-1, 0], &[0, -1]];
        let fan = Fan::from_i64(
            2,
            &rays,
            &[
                &[0, 1],
                &[1, 2],
                &[2, 3],
                &[3, 0],
                &[0, 1],
                &[1, 2],
                &[2, 3],
                &[3, 0],
            ],
        )
        .unwrap();
        assert!(!validate_fan(&fan).complete);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            Fan::from_i64(2, &[&[2, 0], &[0, 1], &[-1, -1]], &[&[0, 1]]).unwrap_err(),
            Error::NonPrimitiveRays(vec![0])
        );
        assert_eq!(
            Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 0]], &[&[0, 1]]).unwrap_err(),
            Error::DuplicateRays(vec![(0, 2)])
        );
        assert!(matches!(
            Fan::from_i64(2, &[&[1, 0]], &[&[0, 3]]),
            Err(Error::MalformedFan(_))
        ));
    }

    #[test]
    fn anticanonical_is_all_ones() {
        assert_eq!(
            anticanonical_divisor(&p2()),
            ToricDivisor::from_i64(&[1, 1, 1])
        );
        assert_eq!(
            anticanonical_divisor(&f1()),
            ToricDivisor::from_i64(&[1, 1, 1, 1])
        );
    }

    #[test]
    fn fano_data_examples() {
        let data = fano_vertex_data(&p2()).unwrap();
        assert!(data.ample);
        assert_eq!(
            data.cartier_vertices[0],
            RationalVector::new(vec![q(-1, 1), q(-1, 1)])
        );

        let data = fano_vertex_data(&f1()).unwrap();
        assert!(data.ample);
        let distinct: BTreeSet<_> = data.cartier_vertices.iter().collect();
        assert_eq!(distinct.len(), 4);

        let data = fano_vertex_data(&p1xp1()).unwrap();
        assert!(data.ample);
        let expected = [(-1, -1), (1, -1), (1, 1), (-1, 1)];
        for (u, (a, b)) in data.cartier_vertices.iter().zip(expected) {
            assert_eq!(u, &RationalVector::new(vec![q(a, 1), q(b, 1)]));
        }
    }

    #[test]
    fn hirzebruch_f2_is_not_ample() {
        let f2 = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap();
        assert!(validate_fan(&f2).smooth);
        assert!(!fano_vertex_data(&f2).unwrap().ample);
    }

    #[test]
    fn linear_equivalence_examples() {
        let fan = p2();
        let u = linear_equivalence(
            &fan,
            &ToricDivisor::from_i64(&[1, 0, 0]),
            &ToricDivisor::from_i64(&[0, 1, 0]),
        )
        .unwrap();
        assert_eq!(u, Some(LatticeVector::from_i64(&[1, -1])));

        let d = ToricDivisor::from_i64(&[2, 0, 1]);
        assert_eq!(
            linear_equivalence(&fan, &d, &d).unwrap(),
            Some(LatticeVector::zero(2))
        );

        let fan = p1xp1();
        assert_eq!(
            linear_equivalence(
                &fan,
                &ToricDivisor::from_i64(&[1, 0, 0, 0]),
                &ToricDivisor::from_i64(&[0, 1, 0, 0]),
            )
            .unwrap(),
            None
        );
        assert!(matches!(
            linear_equivalence(&fan, &d, &d),
            Err(Error::DivisorLength { .. })
        ));
    }

    #[test]
    fn linear_equivalence_is_symmetric_and_transitive() {
        let fan = f1();
        let ds: Vec<ToricDivisor> = (0..4).map(|i| ToricDivisor::prime(4, i)).collect();
        let witness = |a: &ToricDivisor, b: &ToricDivisor| linear_equivalence(&fan, a, b).unwrap();
        for a in &ds {
            for b in &ds {
                let ab = witness(a, b);
                let ba = witness(b, a);
                assert_eq!(ab.as_ref().map(|u| -u), ba);
                for c in &ds {
                    if let (Some(x), Some(y)) = (witness(a, b), witness(b, c)) {
                        assert_eq!(witness(a, c), Some(&x + &y));
                    }
                }
            }
        }
        // D_0 ~ D_2 on F_1, D_0 and D_1 are not equivalent.
        assert!(witness(&ds[0], &ds[2]).is_some());
        assert!(witness(&ds[0], &ds[1]).is_none());
    }

    #[test]
    fn planar_construction_sorts_by_angle() {
        let fan = Fan::planar(vec![
            LatticeVector::from_i64(&[0, -1]),
            LatticeVector::from_i64(&[-1, 1]),
            LatticeVector::from_i64(&[1, 0]),
            LatticeVector::from_i64(&[0, 1]),
        ])
        .unwrap();
        assert_eq!(fan, f1());
    }

    #[test]
    fn faces_of_p2() {
        let fan = p2();
        let faces = fan.faces();
        assert_eq!(faces.len(), 6);
        assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.dim == 2).count(), 3);
    }

    #[test]
    fn star_subdivision_of_p2_gives_f1() {
        let fan = p2()
            .star_subdivide(&LatticeVector::from_i64(&[1, 1]))
            .unwrap();
        let diag = validate_fan(&fan);
        assert!(diag.complete && diag.smooth, "{diag:?}");
        assert_eq!(fan.ray_count(), 4);
        assert_eq!(fan.max_cones().len(), 4);
    }

    #[test]
    fn non_simplicial_cube_fan() {
        let mut rays = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    rays.push(LatticeVector::from_i64(&[x, y, z]));
                }
            }
        }
        let mut cones = Vec::new();
        for axis in 0..3 {
            for sign in [-1, 1] {
                cones.push(Cone::new(
                    (0..8).filter(|&i| rays[i].coords()[axis] == BigInt::from(sign)),
                ));
            }
        }
        let fan = Fan::new(3, rays, cones).unwrap();
        let diag = validate_fan(&fan);
        assert!(diag.complete, "{diag:?}");
        assert!(!diag.simplicial && !diag.smooth);
        let data = fano_vertex_data(&fan).unwrap();
        assert!(data.ample);
        // 6 square cones, 12 two-dimensional faces, 8 rays.
        assert_eq!(fan.faces().len(), 26);
    }

    #[test]
    fn fan_json_round_trip() {
        let fan = f1();
        let json = serde_json::to_string(&fan).unwrap();
        assert_eq!(
            json,
            r#"{"dim":2,"rays":[[1,0],[0,1],[-1,1],[0,-1]],"max_cones":[[0,1],[1,2],[2,3],[0,3]]}"#
        );
        let back: Fan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fan);
        let bad = r#"{"dim":2,"rays":[[2,0],[0,1]],"max_cones":[[0,1]]}"#;
        assert!(serde_json::from_str::<Fan>(bad).is_err());
    }
}
