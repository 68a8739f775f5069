use proptest::prelude::*;

use toric_kstab::catalog::{catalog_get, catalog_list};
use toric_kstab::fan::{linear_equivalence, validate_fan, ToricDivisor};
use toric_kstab::{Fan, LatticeVector, Rational, ToricFano, Verdict};

fn fano(name: &str) -> ToricFano {
    ToricFano::new(catalog_get(name).unwrap().fan).unwrap()
}

#[test]
fn every_entry_is_smooth_complete_and_matches_its_expected_verdict() {
    for name in catalog_list() {
        let entry = catalog_get(&name).unwrap();
        let diag = validate_fan(&entry.fan);
        assert!(
            diag.is_complete_fan() && diag.smooth,
            "{name}: {:?}",
            diag.failures
        );
        let report = ToricFano::new(entry.fan).unwrap().analyze();
        assert_eq!(Some(report.verdict), entry.expected_verdict, "{name}");
    }
}

#[test]
fn entries_round_trip_through_json() {
    for name in catalog_list() {
        let fan = catalog_get(&name).unwrap().fan;
        let text = serde_json::to_string(&fan).unwrap();
        let back: Fan = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rays(), fan.rays());
        assert_eq!(back.max_cones(), fan.max_cones());
    }
}

#[test]
fn betas_are_barycenter_pairings_shifted_by_one() {
    let tf = fano("P1xP1");
    for b in tf.betas() {
        assert_eq!(b, Rational::one());
    }
    let tf = fano("dP7");
    let report = tf.analyze();
    assert_eq!(report.verdict, Verdict::KUnstable);
    for (i, b) in report.betas.iter().enumerate() {
        let v = &tf.fan().rays()[i];
        assert_eq!(b, &(v.pair(&report.barycenter) + Rational::one()));
    }
}

#[test]
fn anticanonical_divisor_moves_by_principal_divisors() {
    let tf = fano("F1");
    let d = tf.fan().ray_count();
    let a = ToricDivisor::sum_of(d, &[0, 1, 2, 3]);
    let b = ToricDivisor::from_i64(&[2, 2, 1, 0]);
    let u = linear_equivalence(tf.fan(), &a, &b)
        .unwrap()
        .expect("equivalent");
    assert_eq!(u, LatticeVector::from_i64(&[-1, -1]));
    assert!(
        linear_equivalence(tf.fan(), &a, &ToricDivisor::from_i64(&[2, 3, 0, 0]))
            .unwrap()
            .is_none()
    );
}

fn direction(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_and_log_discrepancy_scale_linearly(raw in direction(3), k in 1i64..6) {
        let tf = fano("P3_blowup_two_lines");
        let v = LatticeVector::from_i64(&raw);
        let kv = LatticeVector::from_i64(&raw.iter().map(|x| x * k).collect::<Vec<_>>());
        let k = Rational::from_integer(k);
        prop_assert_eq!(tf.beta_toric_valuation(&kv).unwrap(), &k * &tf.beta_toric_valuation(&v).unwrap());
        prop_assert_eq!(tf.log_discrepancy(&kv).unwrap(), &k * &tf.log_discrepancy(&v).unwrap());
    }

    #[test]
    fn delta_bounds_every_toric_valuation(raw in direction(2)) {
        for name in ["F1", "dP7", "dP6"] {
            let tf = fano(name);
            let v = LatticeVector::from_i64(&raw);
            let ratio = tf.log_discrepancy(&v).unwrap() / tf.beta_toric_valuation(&v).unwrap();
            prop_assert!(ratio >= tf.delta().0);
        }
    }
}
