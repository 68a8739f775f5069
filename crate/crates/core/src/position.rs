//! Proper intersection and general position for torus-invariant prime divisors.
//!
//! On `X_Δ` the supports `D_j` for `j ∈ J` meet in the union of the orbit
//! closures `V(σ)` over cones σ containing every ray of `J`, and
//! `dim V(σ) = n - dim σ`. Both conditions are therefore scans over the cones
//! of the fan.

use serde::{Serialize, Serializer};

use crate::arith::subsets;
use crate::error::{Error, Result};
use crate::fan::{validate_fan, Face, Fan};

/// Dimension of an intersection of divisor supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionDim {
    Empty,
    Dim(usize),
}

impl Serialize for IntersectionDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IntersectionDim::Empty => s.serialize_str("EMPTY"),
            IntersectionDim::Dim(d) => s.serialize_u64(*d as u64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionWitness {
    pub subset: Vec<usize>,
    pub minimal_cones: Vec<Vec<usize>>,
    pub dimension: IntersectionDim,
}

/// A cone of the fan holding more chosen rays than its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperIntersectionFailure {
    pub cone: Vec<usize>,
    pub cone_dim: usize,
    pub chosen_in_cone: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    pub rays: Vec<usize>,
    pub intersect_properly: bool,
    pub general_position_strict: bool,
    pub general_position_lenient: bool,
    pub witnesses: Vec<PositionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_intersection_failure: Option<ProperIntersectionFailure>,
}

fn check_indices(fan: &Fan, rays: &[usize]) -> Result<Vec<usize>> {
    for &i in rays {
        fan.ray(i)?;
    }
    let mut sorted = rays.to_vec();
    sorted.sort_unstable();
    let repeated: Vec<usize> = sorted
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    if !repeated.is_empty() {
        return Err(Error::RepeatedComponents(repeated));
    }
    Ok(sorted)
}

/// `Ok(None)` when the divisors intersect properly, otherwise the first
/// offending cone: one containing more of the chosen rays than its dimension.
pub fn intersect_properly(fan: &Fan, rays: &[usize]) -> Result<Option<ProperIntersectionFailure>> {
    let rays = check_indices(fan, rays)?;
    let failure = fan.faces().iter().find_map(|face| {
        let inside: Vec<usize> = rays
            .iter()
            .copied()
            .filter(|i| face.rays.binary_search(i).is_ok())
            .collect();
        (inside.len() > face.dim).then(|| ProperIntersectionFailure {
            cone: face.rays.clone(),
            cone_dim: face.dim,
            chosen_in_cone: inside,
        })
    });
    debug_assert!(
        failure.is_none() || !validate_fan(fan).simplicial,
        "distinct rays always intersect properly on a simplicial fan"
    );
    Ok(failure)
}

fn minimal_cones_containing<'a>(faces: &'a [Face], subset: &[usize]) -> Vec<&'a Face> {
    let containing: Vec<&Face> = faces
        .iter()
        .filter(|f| subset.iter().all(|i| f.rays.binary_search(i).is_ok()))
        .collect();
    let Some(min_dim) = containing.iter().map(|f| f.dim).min() else {
        return Vec::new();
    };
    containing
        .into_iter()
        .filter(|f| f.dim == min_dim)
        .collect()
}

/// Dimension of `⋂_{j∈J} D_j`.
pub fn intersection_dim(fan: &Fan, subset: &[usize]) -> IntersectionDim {
    match minimal_cones_containing(fan.faces(), subset).first() {
        Some(face) => IntersectionDim::Dim(fan.dim() - face.dim),
        None => IntersectionDim::Empty,
    }
}

/// Evaluates both readings of general position.
///
/// Strict: every `J` with `|J| <= n` meets in dimension exactly `n - |J|`, and
/// every larger `J` is empty. Lenient: every nonempty intersection has
/// dimension `n - |J|`. Subsets beyond size `n + 1` are implied: their
/// intersections sit inside those of their `(n + 1)`-subsets.
pub fn general_position_report(fan: &Fan, rays: &[usize]) -> Result<PositionReport> {
    let sorted = check_indices(fan, rays)?;
    let n = fan.dim();
    let faces = fan.faces();
    let mut strict = true;
    let mut lenient = true;
    let mut witnesses = Vec::new();
    for size in 1..=sorted.len().min(n + 1) {
        for pick in subsets(sorted.len(), size) {
            let subset: Vec<usize> = pick.iter().map(|&k| sorted[k]).collect();
            let minimal = minimal_cones_containing(faces, &subset);
            let dimension = match minimal.first() {
                Some(face) => IntersectionDim::Dim(n - face.dim),
                None => IntersectionDim::Empty,
            };
            match dimension {
                IntersectionDim::Empty => {
                    if size <= n {
                        strict = false;
                    }
                }
                IntersectionDim::Dim(d) => {
                    if size > n || d != n - size {
                        strict = false;
                        lenient = false;
                    }
                }
            }
            witnesses.push(PositionWitness {
                subset,
                minimal_cones: minimal.iter().map(|f| f.rays.clone()).collect(),
                dimension,
            });
        }
    }
    let failure = intersect_properly(fan, &sorted)?;
    Ok(PositionReport {
        rays: sorted,
        intersect_properly: failure.is_none(),
        general_position_strict: strict,
        general_position_lenient: lenient,
        witnesses,
        proper_intersection_failure: failure,
    })
}
