//! K-stability invariants of toric Q-Fano varieties.
//!
//! Everything is read off the anticanonical polytope
//! `P = { u : <u, v_i> >= -1 }` and its barycenter `ū`:
//!
//! * `β(-K_X, D_i) = <ū, v_i> + 1`,
//! * `δ(X) = min_i 1 / β(-K_X, D_i)`,
//! * `X` is K-semistable iff `δ = 1` iff `ū = 0`.
//!
//! For an arbitrary toric valuation `ord_v` the same data gives
//! `β(ord_v) = <ū, v> - min_P <·, v>` and the log discrepancy
//! `A(ord_v) = -<u_σ, v>` for any maximal cone σ containing `v`.

mod certificate;

pub use certificate::{
    vojta_certificate, CertificateRequest, HypothesisCheck, Route, VojtaCertificate, Witness,
};

use serde::{Deserialize, Serialize};

use crate::arith::{factorial, LatticeVector, Rational, RationalVector};
use crate::error::{Error, Result};
use crate::fan::{
    anticanonical_divisor, fano_vertex_data, validate_fan, Fan, FanDiagnostics, FanoData,
};
use crate::polytope::{divisor_polytope, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "K_SEMISTABLE")]
    KSemistable,
    #[serde(rename = "K_UNSTABLE")]
    KUnstable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::KSemistable => "K_SEMISTABLE",
            Verdict::KUnstable => "K_UNSTABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KStabilityReport {
    pub barycenter: RationalVector,
    pub betas: Vec<Rational>,
    pub delta: Rational,
    pub verdict: Verdict,
    pub minimizing_rays: Vec<usize>,
    pub eligible_rays: Vec<usize>,
    /// `(-K_X)^n = n!·vol(P_{-K})`.
    pub anticanonical_volume: Rational,
}

/// A fan that has been certified complete with `-K_X` ample and Q-Cartier,
/// together with its anticanonical polytope data.
#[derive(Clone, Debug)]
pub struct ToricFano {
    fan: Fan,
    diagnostics: FanDiagnostics,
    fano: FanoData,
    polytope: Polytope,
    volume: Rational,
    barycenter: RationalVector,
}

impl ToricFano {
    pub fn new(fan: Fan) -> Result<Self> {
        let diagnostics = validate_fan(&fan);
        if !diagnostics.is_complete_fan() {
            let mut failures = diagnostics.failures.clone();
            if failures.is_empty() {
                failures.push("fan is not complete".into());
            }
            return Err(Error::InvalidFan(failures));
        }
        let fano = fano_vertex_data(&fan)
            .ok_or_else(|| Error::NotQFano("-K_X is not Q-Cartier".into()))?;
        if !fano.ample {
            return Err(Error::NotQFano("-K_X is not ample".into()));
        }
        let polytope = divisor_polytope(&fan, &anticanonical_divisor(&fan))?;
        let volume = polytope.volume()?;
        let barycenter = polytope.barycenter()?;
        Ok(ToricFano {
            fan,
            diagnostics,
            fano,
            polytope,
            volume,
            barycenter,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn diagnostics(&self) -> &FanDiagnostics {
        &self.diagnostics
    }

    pub fn fano_data(&self) -> &FanoData {
        &self.fano
    }

    /// `P_{-K_X}`.
    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Euclidean volume of `P_{-K_X}`.
    pub fn polytope_volume(&self) -> &Rational {
        &self.volume
    }

    pub fn anticanonical_volume(&self) -> Rational {
        &self.volume * &Rational::from(factorial(self.fan.dim()))
    }

    pub fn barycenter(&self) -> &RationalVector {
        &self.barycenter
    }

    /// `β(-K_X, D_i) = <ū, v_i> + 1`.
    pub fn beta_ray(&self, i: usize) -> Result<Rational> {
        Ok(self.fan.ray(i)?.pair(&self.barycenter) + Rational::one())
    }

    pub fn betas(&self) -> Vec<Rational> {
        (0..self.fan.ray_count())
            .map(|i| self.beta_ray(i).expect("index in range"))
            .collect()
    }

    /// `β` of the valuation `ord_v`: `<ū, v> - min_{w ∈ P} <w, v>`.
    pub fn beta_toric_valuation(&self, v: &LatticeVector) -> Result<Rational> {
        self.check_direction(v)?;
        let min = self
            .polytope
            .vertices()?
            .iter()
            .map(|w| v.pair(w))
            .min()
            .expect("P_{-K} has vertices");
        Ok(v.pair(&self.barycenter) - min)
    }

    /// `A_X(ord_v) = -<u_σ, v>` for a maximal cone σ containing `v`.
    pub fn log_discrepancy(&self, v: &LatticeVector) -> Result<Rational> {
        self.check_direction(v)?;
        let cone = self
            .fan
            .locate(v)
            .expect("a complete fan covers every vector");
        Ok(-v.pair(&self.fano.cartier_vertices[cone]))
    }

    fn check_direction(&self, v: &LatticeVector) -> Result<()> {
        if v.dim() != self.fan.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.fan.dim(),
                found: v.dim(),
            });
        }
        if v.is_zero() {
            return Err(Error::NotADirection);
        }
        Ok(())
    }

    /// `δ` and every ray attaining it. Ties are all reported.
    pub fn delta(&self) -> (Rational, Vec<usize>) {
        let betas = self.betas();
        // min 1/β is attained at max β; β is positive since ū is interior.
        let max_beta = betas.iter().max().expect("fan has rays").clone();
        let minimizing = betas
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == max_beta)
            .map(|(i, _)| i)
            .collect();
        let delta = max_beta.recip().expect("β is positive");
        (delta, minimizing)
    }

    pub fn verdict(&self) -> Verdict {
        let (delta, _) = self.delta();
        assert!(
            delta <= Rational::one(),
            "internal error: δ = {delta} > 1 is impossible for a toric Q-Fano variety"
        );
        if delta == Rational::one() {
            debug_assert!(self.barycenter.is_zero());
            Verdict::KSemistable
        } else {
            Verdict::KUnstable
        }
    }

    /// Rays with `β(-K_X, D_i) >= 1`, i.e. `<ū, v_i> >= 0`.
    pub fn eligible_rays(&self) -> Vec<usize> {
        self.fan
            .rays()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.pair(&self.barycenter).is_negative())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn analyze(&self) -> KStabilityReport {
        let (delta, minimizing_rays) = self.delta();
        KStabilityReport {
            barycenter: self.barycenter.clone(),
            betas: self.betas(),
            verdict: self.verdict(),
            delta,
            minimizing_rays,
            eligible_rays: self.eligible_rays(),
            anticanonical_volume: self.anticanonical_volume(),
        }
    }
}

/// Validates `fan` and produces its full report.
pub fn analyze(fan: &Fan) -> Result<KStabilityReport> {
    Ok(ToricFano::new(fan.clone())?.analyze())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

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

    fn quad(rays: &[&[i64]]) -> ToricFano {
        ToricFano::new(Fan::from_i64(2, rays, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]).unwrap())
            .unwrap()
    }

    fn f1() -> ToricFano {
        quad(&[&[1, 0], &[0, 1], &[-1, 1], &[0, -1]])
    }

    fn p1xp1() -> ToricFano {
        quad(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])
    }

    fn v(xs: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(xs)
    }

    #[test]
    fn beta_ray_examples() {
        let p2 = p2();
        for i in 0..3 {
            assert_eq!(p2.beta_ray(i).unwrap(), q(1, 1));
        }
        let f1 = f1();
        assert_eq!(f1.beta_ray(3).unwrap(), q(5, 6));
        assert_eq!(f1.beta_ray(1).unwrap(), q(7, 6));
        assert!(matches!(f1.beta_ray(4), Err(Error::RayIndex { .. })));
    }

    #[test]
    fn toric_valuation_examples() {
        assert_eq!(p2().beta_toric_valuation(&v(&[1, 0])).unwrap(), q(1, 1));
        assert_eq!(p1xp1().beta_toric_valuation(&v(&[1, 1])).unwrap(), q(2, 1));
        assert_eq!(f1().beta_toric_valuation(&v(&[0, -1])).unwrap(), q(5, 6));
        assert_eq!(
            p2().beta_toric_valuation(&v(&[0, 0])).unwrap_err(),
            Error::NotADirection
        );
    }

    #[test]
    fn log_discrepancy_examples() {
        assert_eq!(p2().log_discrepancy(&v(&[1, 0])).unwrap(), q(1, 1));
        assert_eq!(p2().log_discrepancy(&v(&[1, 1])).unwrap(), q(2, 1));
        assert_eq!(f1().log_discrepancy(&v(&[1, 1])).unwrap(), q(2, 1));
    }

    #[test]
    fn log_discrepancy_agrees_on_shared_faces() {
        for tf in [p2(), f1(), p1xp1()] {
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    if (x, y) == (0, 0) {
                        continue;
                    }
                    let w = v(&[x, y]);
                    let values: Vec<Rational> = tf
                        .fan()
                        .max_cones()
                        .iter()
                        .zip(&tf.fano_data().cartier_vertices)
                        .filter(|(c, _)| tf.fan().cone_contains(c, &w))
                        .map(|(_, u)| -w.pair(u))
                        .collect();
                    assert!(!values.is_empty());
                    assert!(values.windows(2).all(|p| p[0] == p[1]));
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(p2().delta(), (q(1, 1), vec![0, 1, 2]));
        assert_eq!(f1().delta(), (q(6, 7), vec![1]));
    }

    #[test]
    fn verdicts() {
        assert_eq!(p1xp1().verdict(), Verdict::KSemistable);
        assert_eq!(f1().verdict(), Verdict::KUnstable);
    }

    #[test]
    fn eligible_examples() {
        assert_eq!(p2().eligible_rays(), vec![0, 1, 2]);
        assert_eq!(f1().eligible_rays(), vec![0, 1, 2]);
    }

    #[test]
    fn analyze_reports() {
        let r = p2().analyze();
        assert_eq!(r.barycenter, RationalVector::zero(2));
        assert_eq!(r.betas, vec![q(1, 1); 3]);
        assert_eq!(r.delta, q(1, 1));
        assert_eq!(r.verdict, Verdict::KSemistable);
        assert_eq!(r.anticanonical_volume, q(9, 1));

        let r = f1().analyze();
        assert_eq!(r.barycenter, RationalVector::new(vec![q(1, 12), q(1, 6)]));
        assert_eq!(r.betas, vec![q(13, 12), q(7, 6), q(13, 12), q(5, 6)]);
        assert_eq!(r.delta, q(6, 7));
        assert_eq!(r.verdict, Verdict::KUnstable);

        let r = p1xp1().analyze();
        assert_eq!(r.delta, q(1, 1));
        assert_eq!(r.anticanonical_volume, q(8, 1));
    }

    #[test]
    fn report_json_shape() {
        let json = serde_json::to_value(f1().analyze()).unwrap();
        assert_eq!(json["delta"], "6/7");
        assert_eq!(json["verdict"], "K_UNSTABLE");
        assert_eq!(json["barycenter"][0], "1/12");
        assert_eq!(json["minimizing_rays"], serde_json::json!([1]));
    }

    #[test]
    fn non_fano_inputs_are_rejected() {
        let f2 = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .unwrap();
        assert!(matches!(ToricFano::new(f2), Err(Error::NotQFano(_))));

        let incomplete =
            Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        assert!(matches!(
            ToricFano::new(incomplete),
            Err(Error::InvalidFan(_))
        ));
    }
}
