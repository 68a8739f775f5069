//! Built-in fans of smooth toric Fano surfaces and threefolds.
//!
//! Blow-ups are modelled by star subdivisions at torus-fixed centers, and
//! products by products of maximal cones.

use serde::Serialize;

use crate::arith::LatticeVector;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::kstability::Verdict;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub fan: Fan,
    pub expected_verdict: Option<Verdict>,
    pub provenance: String,
}

type Builder = fn() -> Fan;

const ENTRIES: &[(&str, Builder, Verdict, &str)] = &[
    (
        "F1",
        f1,
        Verdict::KUnstable,
        "Hirzebruch surface F_1, the blow-up of P^2 at one point",
    ),
    ("P1cubed", p1_cubed, Verdict::KSemistable, "P^1 x P^1 x P^1"),
    (
        "P1xP1",
        p1xp1,
        Verdict::KSemistable,
        "smooth toric del Pezzo surface of degree 8",
    ),
    (
        "P1xP2",
        p1xp2,
        Verdict::KSemistable,
        "product threefold P^1 x P^2",
    ),
    (
        "P1xdP6",
        p1xdp6,
        Verdict::KSemistable,
        "P^1 x S with S the toric del Pezzo surface of degree 6",
    ),
    ("P2", p2, Verdict::KSemistable, "projective plane"),
    (
        "P3",
        p3,
        Verdict::KSemistable,
        "projective space of dimension 3",
    ),
    (
        "P3_blowup_two_lines",
        p3_blowup_two_lines,
        Verdict::KSemistable,
        "blow-up of P^3 along two disjoint torus-invariant lines",
    ),
    (
        "dP6",
        dp6,
        Verdict::KSemistable,
        "blow-up of P^2 at the three torus-fixed points",
    ),
    (
        "dP7",
        dp7,
        Verdict::KUnstable,
        "blow-up of P^2 at two torus-fixed points",
    ),
];

fn v(xs: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(xs)
}

fn p1() -> Fan {
    Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).expect("P1 fan")
}

fn p2() -> Fan {
    Fan::planar(vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])]).expect("P2 fan")
}

fn p1xp1() -> Fan {
    p1().product(&p1())
}

fn f1() -> Fan {
    Fan::planar(vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 1]), v(&[0, -1])]).expect("F1 fan")
}

fn dp7() -> Fan {
    p2().star_subdivide(&v(&[1, 1]))
        .and_then(|f| f.star_subdivide(&v(&[0, -1])))
        .expect("dP7 fan")
}

fn dp6() -> Fan {
    Fan::planar(vec![
        v(&[1, 0]),
        v(&[1, 1]),
        v(&[0, 1]),
        v(&[-1, 0]),
        v(&[-1, -1]),
        v(&[0, -1]),
    ])
    .expect("dP6 fan")
}

fn p3() -> Fan {
    Fan::from_i64(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
    .expect("P3 fan")
}

fn p1xp2() -> Fan {
    p1().product(&p2())
}

fn p1_cubed() -> Fan {
    p1().product(&p1()).product(&p1())
}

fn p3_blowup_two_lines() -> Fan {
    // The lines V(cone{e1, e2}) and V(cone{e3, -e1-e2-e3}) are disjoint.
    p3().star_subdivide(&v(&[1, 1, 0]))
        .and_then(|f| f.star_subdivide(&v(&[-1, -1, 0])))
        .expect("P3 blow-up fan")
}

fn p1xdp6() -> Fan {
    p1().product(&dp6())
}

/// Sorted names of the built-in entries.
pub fn catalog_list() -> Vec<String> {
    let mut names: Vec<String> = ENTRIES.iter().map(|e| e.0.to_string()).collect();
    names.sort();
    names
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let &(name, build, verdict, provenance) =
        ENTRIES
            .iter()
            .find(|e| e.0 == name)
            .ok_or_else(|| Error::UnknownCatalogEntry {
                name: name.to_string(),
                available: catalog_list(),
            })?;
    Ok(CatalogEntry {
        name: name.to_string(),
        fan: build(),
        expected_verdict: Some(verdict),
        provenance: provenance.to_string(),
    })
}
