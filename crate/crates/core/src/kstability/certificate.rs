//! Machine-checked hypothesis records for the toric Vojta-type theorems.
//!
//! Two routes are supported. Route B takes a reference ray `E` with
//! `β(-K_X, E) >= 1` and divisors `D_1, …, D_q` linearly equivalent to it that
//! intersect properly. Route C takes distinct rays in general position on a
//! K-semistable variety. Only the hypotheses are checked; nothing arithmetic
//! is computed.

use serde::{Deserialize, Serialize};

use crate::arith::{LatticeVector, Rational};
use crate::error::{Error, Result};
use crate::fan::{linear_equivalence, ToricDivisor};
use crate::filtration::beta_exact_general;
use crate::position::{general_position_report, PositionReport};

use super::{ToricFano, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "THEOREM_B")]
    TheoremB,
    #[serde(rename = "THEOREM_C")]
    TheoremC,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::TheoremB => "THEOREM_B",
            Route::TheoremC => "THEOREM_C",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRequest {
    pub route: Route,
    /// Ray indices of the divisors `D_1, …, D_q`; repeats allowed for route B.
    pub chosen_rays: Vec<usize>,
    pub reference_ray: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub ray: usize,
    pub witness: Option<LatticeVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaValue {
    pub divisor: ToricDivisor,
    pub beta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Eligibility {
        ray: usize,
        beta: Rational,
        eligible_rays: Vec<usize>,
    },
    LinearEquivalence {
        reference_ray: usize,
        equivalences: Vec<Equivalence>,
    },
    Position {
        reading: String,
        report: Option<PositionReport>,
        repeated_rays: Vec<usize>,
    },
    Beta {
        values: Vec<BetaValue>,
    },
    Verdict {
        delta: Rational,
        verdict: Verdict,
    },
    Distinct {
        repeated_rays: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VojtaCertificate {
    pub route: Route,
    pub chosen_rays: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_ray: Option<usize>,
    pub valid: bool,
    pub checks: Vec<HypothesisCheck>,
    /// `β(-K_X, D_i)` for each chosen ray, in request order.
    pub component_betas: Vec<Rational>,
    /// `β(-K_X, D_1 + … + D_q)` for the summed divisor. Recorded, not gated on.
    pub sum_divisor_beta: Rational,
    pub general_position_reading: String,
    pub smooth: bool,
    pub unchecked_assumptions: Vec<String>,
    /// The position report of the distinct chosen rays.
    pub position: PositionReport,
}

impl VojtaCertificate {
    pub fn failed_checks(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const LENIENT: &str = "lenient";

fn repeated(rays: &[usize]) -> Vec<usize> {
    let mut sorted = rays.to_vec();
    sorted.sort_unstable();
    let mut reps: Vec<usize> = sorted
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    reps.dedup();
    reps
}

fn distinct(rays: &[usize]) -> Vec<usize> {
    let mut d = rays.to_vec();
    d.sort_unstable();
    d.dedup();
    d
}

fn beta_check(tf: &ToricFano, id: &str, rays: &[usize], what: &str) -> Result<HypothesisCheck> {
    let d = tf.fan().ray_count();
    let values = distinct(rays)
        .into_iter()
        .map(|i| {
            let divisor = ToricDivisor::prime(d, i);
            let beta = beta_exact_general(tf, &divisor)?;
            Ok(BetaValue { divisor, beta })
        })
        .collect::<Result<Vec<_>>>()?;
    let low: Vec<String> = values
        .iter()
        .filter(|v| v.beta < Rational::one())
        .map(|v| format!("β = {} < 1 for {:?}", v.beta, v.divisor.support()))
        .collect();
    Ok(HypothesisCheck {
        id: id.into(),
        name: format!("β(-K_X, ·) >= 1 for {what}, by exact integration"),
        passed: low.is_empty(),
        detail: if low.is_empty() {
            "every β is at least 1".into()
        } else {
            low.join("; ")
        },
        witness: Witness::Beta { values },
    })
}

/// Checks the hypotheses of the requested route and records every witness.
///
/// The gating β check evaluates `β(-K_X, ·)` per prime component by exact
/// integration (the reference divisor for route B, each chosen divisor for
/// route C). The β of the summed divisor is computed and recorded alongside.
pub fn vojta_certificate(tf: &ToricFano, request: &CertificateRequest) -> Result<VojtaCertificate> {
    let fan = tf.fan();
    let d = fan.ray_count();
    for &i in request.chosen_rays.iter().chain(&request.reference_ray) {
        fan.ray(i)?;
    }
    if request.chosen_rays.is_empty() {
        return Err(Error::EmptySupport);
    }
    let unique = distinct(&request.chosen_rays);
    let repeats = repeated(&request.chosen_rays);
    let position = general_position_report(fan, &unique)?;
    let mut checks = Vec::new();

    match request.route {
        Route::TheoremB => {
            let e = request.reference_ray.ok_or(Error::MissingReference)?;
            let eligible = tf.eligible_rays();
            let beta_e = tf.beta_ray(e)?;
            checks.push(HypothesisCheck {
                id: "b1".into(),
                name: "reference ray is Vojta-eligible (β >= 1 via the barycenter)".into(),
                passed: eligible.contains(&e),
                detail: format!("β(-K_X, D_{e}) = {beta_e}"),
                witness: Witness::Eligibility {
                    ray: e,
                    beta: beta_e,
                    eligible_rays: eligible,
                },
            });

            let reference = ToricDivisor::prime(d, e);
            let equivalences = request
                .chosen_rays
                .iter()
                .map(|&i| {
                    Ok(Equivalence {
                        ray: i,
                        witness: linear_equivalence(fan, &ToricDivisor::prime(d, i), &reference)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let missing: Vec<usize> = equivalences
                .iter()
                .filter(|q| q.witness.is_none())
                .map(|q| q.ray)
                .collect();
            checks.push(HypothesisCheck {
                id: "b2".into(),
                name: "every chosen divisor is linearly equivalent to the reference".into(),
                passed: missing.is_empty(),
                detail: if missing.is_empty() {
                    "each D_i - E = div(χ^u) for the recorded u".into()
                } else {
                    format!("no u ∈ M with D_i - E = div(χ^u) for rays {missing:?}")
                },
                witness: Witness::LinearEquivalence {
                    reference_ray: e,
                    equivalences,
                },
            });

            let proper = repeats.is_empty() && position.intersect_properly;
            checks.push(HypothesisCheck {
                id: "b3".into(),
                name: "chosen divisors intersect properly".into(),
                passed: proper,
                detail: if !repeats.is_empty() {
                    format!("repeated components {repeats:?} cannot form a regular sequence")
                } else if let Some(f) = &position.proper_intersection_failure {
                    format!(
                        "cone {:?} of dimension {} contains {} chosen rays",
                        f.cone,
                        f.cone_dim,
                        f.chosen_in_cone.len()
                    )
                } else {
                    "no cone contains more chosen rays than its dimension".into()
                },
                witness: Witness::Position {
                    reading: "proper intersection".into(),
                    report: Some(position.clone()),
                    repeated_rays: repeats.clone(),
                },
            });

            checks.push(beta_check(tf, "b4", &[e], "the reference divisor E")?);
        }
        Route::TheoremC => {
            let (delta, _) = tf.delta();
            let verdict = tf.verdict();
            checks.push(HypothesisCheck {
                id: "c1".into(),
                name: "X is K-semistable".into(),
                passed: verdict == Verdict::KSemistable,
                detail: format!("δ = {delta}, verdict {verdict}"),
                witness: Witness::Verdict { delta, verdict },
            });

            checks.push(HypothesisCheck {
                id: "c2".into(),
                name: "chosen rays are distinct".into(),
                passed: repeats.is_empty(),
                detail: if repeats.is_empty() {
                    "no repeats".into()
                } else {
                    format!("repeated rays {repeats:?}")
                },
                witness: Witness::Distinct {
                    repeated_rays: repeats.clone(),
                },
            });

            checks.push(HypothesisCheck {
                id: "c3".into(),
                name: "chosen divisors lie in general position".into(),
                passed: position.general_position_lenient,
                detail: format!(
                    "lenient reading {}, strict reading {}",
                    position.general_position_lenient, position.general_position_strict
                ),
                witness: Witness::Position {
                    reading: LENIENT.into(),
                    report: Some(position.clone()),
                    repeated_rays: repeats.clone(),
                },
            });

            checks.push(beta_check(
                tf,
                "c4",
                &request.chosen_rays,
                "each chosen divisor",
            )?);
        }
    }

    let component_betas = request
        .chosen_rays
        .iter()
        .map(|&i| tf.beta_ray(i))
        .collect::<Result<Vec<_>>>()?;
    let sum_divisor_beta = beta_exact_general(tf, &ToricDivisor::sum_of(d, &request.chosen_rays))?;

    Ok(VojtaCertificate {
        route: request.route,
        chosen_rays: request.chosen_rays.clone(),
        reference_ray: match request.route {
            Route::TheoremB => request.reference_ray,
            Route::TheoremC => None,
        },
        valid: checks.iter().all(|c| c.passed),
        checks,
        component_betas,
        sum_divisor_beta,
        general_position_reading: LENIENT.into(),
        smooth: tf.diagnostics().smooth,
        unchecked_assumptions: vec![
            "simple normal crossings of the divisor on a model (not constructed)".into(),
            "the arithmetic conclusion over number fields is not computed".into(),
        ],
        position,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;

    fn p2() -> ToricFano {
        ToricFano::new(
            Fan::from_i64(
                2,
                &[&[1, 0], &[0, 1], &[-1, -1]],
                &[&[0, 1], &[1, 2], &[2, 0]],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn f1() -> ToricFano {
        ToricFano::new(
            Fan::from_i64(
                2,
                &[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]],
                &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn request(route: Route, rays: &[usize], reference: Option<usize>) -> CertificateRequest {
        CertificateRequest {
            route,
            chosen_rays: rays.to_vec(),
            reference_ray: reference,
        }
    }

    #[test]
    fn p2_route_c_is_valid() {
        let cert = vojta_certificate(&p2(), &request(Route::TheoremC, &[0, 1, 2], None)).unwrap();
        assert!(cert.valid, "{:?}", cert.failed_checks().collect::<Vec<_>>());
        assert_eq!(cert.component_betas, vec![Rational::one(); 3]);
        assert!(cert.position.general_position_strict);
        assert_eq!(cert.sum_divisor_beta, Rational::new(1, 3));
    }

    #[test]
    fn f1_route_c_fails_at_semistability() {
        for rays in [vec![0, 1, 2, 3], vec![0], vec![1, 2]] {
            let cert = vojta_certificate(&f1(), &request(Route::TheoremC, &rays, None)).unwrap();
            assert!(!cert.valid);
            let c1 = &cert.checks[0];
            assert_eq!(c1.id, "c1");
            assert!(!c1.passed);
        }
    }

    #[test]
    fn p2_route_b_single_divisor() {
        let cert = vojta_certificate(&p2(), &request(Route::TheoremB, &[0], Some(0))).unwrap();
        assert!(cert.valid);
        let Witness::LinearEquivalence { equivalences, .. } = &cert.checks[1].witness else {
            panic!("b2 carries equivalence witnesses");
        };
        assert_eq!(equivalences[0].witness, Some(LatticeVector::zero(2)));
    }

    #[test]
    fn f1_route_b_with_equivalent_rays() {
        // D_0 ~ D_2 on F_1 and the two never share a cone.
        let cert = vojta_certificate(&f1(), &request(Route::TheoremB, &[0, 2], Some(0))).unwrap();
        assert!(cert.valid, "{:?}", cert.failed_checks().collect::<Vec<_>>());

        let cert = vojta_certificate(&f1(), &request(Route::TheoremB, &[1], Some(0))).unwrap();
        assert!(!cert.valid);
        assert_eq!(
            cert.failed_checks()
                .map(|c| c.id.as_str())
                .collect::<Vec<_>>(),
            ["b2"]
        );

        // The ray (0,-1) has β = 5/6.
        let cert = vojta_certificate(&f1(), &request(Route::TheoremB, &[3], Some(3))).unwrap();
        let failed: Vec<&str> = cert.failed_checks().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["b1", "b4"]);
    }

    #[test]
    fn repeated_components_do_not_intersect_properly() {
        let cert = vojta_certificate(&p2(), &request(Route::TheoremB, &[0, 0], Some(0))).unwrap();
        let failed: Vec<&str> = cert.failed_checks().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["b3"]);

        let cert = vojta_certificate(&p2(), &request(Route::TheoremC, &[1, 1], None)).unwrap();
        let failed: Vec<&str> = cert.failed_checks().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["c2"]);
    }

    #[test]
    fn request_errors() {
        assert_eq!(
            vojta_certificate(&p2(), &request(Route::TheoremB, &[0], None)).unwrap_err(),
            Error::MissingReference
        );
        assert!(matches!(
            vojta_certificate(&p2(), &request(Route::TheoremC, &[5], None)),
            Err(Error::RayIndex { .. })
        ));
        assert!(matches!(
            vojta_certificate(&p2(), &request(Route::TheoremB, &[0], Some(9))),
            Err(Error::RayIndex { .. })
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let cert = vojta_certificate(&p2(), &request(Route::TheoremC, &[0, 1, 2], None)).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["route"], "THEOREM_C");
        assert_eq!(json["valid"], true);
        assert_eq!(json["checks"][0]["witness"]["kind"], "verdict");
        assert_eq!(json["checks"][0]["witness"]["verdict"], "K_SEMISTABLE");
        assert_eq!(json["sum_divisor_beta"], "1/3");
        assert!(json.get("reference_ray").is_none());
        assert_eq!(json["position"]["general_position_strict"], true);
    }
}
