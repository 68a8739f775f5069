//! Volumes of the vanishing-order filtration of `-K_X` along a toric divisor.
//!
//! For an effective `D = Σ c_i D_i`, the character `χ^u` with `u ∈ m·P_{-K}`
//! lies in `H^0(-mK_X - s·D)` iff `<u, v_i> + m >= s·c_i` for every `i`. So the
//! filtration is governed by
//!
//! ```text
//! g(u) = min_{c_i > 0} (<u, v_i> + 1) / c_i,
//! ```
//!
//! and `β(-K_X, D) = (1 / vol P) ∫_P g`. This module evaluates that number in
//! three independent ways: exact integration of `g` over the cells where each
//! linear form is minimal, exact piecewise integration of the slice volumes
//! `t ↦ vol{g >= t}`, and finite lattice sums at dilation `N`.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{Rational, RationalVector};
use crate::error::{Error, Result};
use crate::fan::ToricDivisor;
use crate::kstability::ToricFano;
use crate::polytope::{AffineFunction, Facet, Polytope};

/// Finite-`N` truncation of the asymptotic volume constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaEstimate {
    pub dilation: u32,
    pub estimate: Rational,
    pub section_count: u64,
}

/// One row of a convergence sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub dilation: u32,
    pub section_count: u64,
    pub estimate: Rational,
    pub exact_target: Rational,
    pub abs_error: Rational,
}

fn check_effective(tf: &ToricFano, divisor: &ToricDivisor) -> Result<Vec<usize>> {
    if divisor.len() != tf.fan().ray_count() {
        return Err(Error::DivisorLength {
            expected: tf.fan().ray_count(),
            found: divisor.len(),
        });
    }
    if !divisor.is_effective() {
        return Err(Error::NotEffectiveIntegral(format!(
            "negative coefficient in {:?}",
            divisor.coefficients()
        )));
    }
    let support = divisor.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(support)
}

/// `ℓ_i(u) = (<u, v_i> + 1) / c_i`.
fn vanishing_form(tf: &ToricFano, i: usize, c: &Rational) -> AffineFunction {
    let inv = c.recip().expect("support coefficients are positive");
    AffineFunction::new(tf.fan().rays()[i].to_rational().scale(&inv), inv)
}

/// `β(-K_X, D)` by exact integration of `g` over `P_{-K}`.
///
/// `P` is cut into cells `{ℓ_i <= ℓ_j for all j}`; each cell is a polytope on
/// which `g = ℓ_i` is affine. Shared walls have measure zero.
pub fn beta_exact_general(tf: &ToricFano, divisor: &ToricDivisor) -> Result<Rational> {
    let support = check_effective(tf, divisor)?;
    let coeffs = divisor.coefficients();
    let forms: Vec<(usize, AffineFunction)> = support
        .iter()
        .map(|&i| (i, vanishing_form(tf, i, &coeffs[i])))
        .collect();
    let mut integral = Rational::zero();
    for (i, li) in &forms {
        let mut cell: Polytope = tf.polytope().clone();
        let mut empty = false;
        for (j, lj) in &forms {
            if i == j {
                continue;
            }
            // ℓ_j - ℓ_i >= 0
            let normal = &lj.linear - &li.linear;
            let offset = &li.constant - &lj.constant;
            if normal.is_zero() {
                empty |= offset.is_positive();
                continue;
            }
            cell = cell.with_facet(Facet::from_rational(&normal, &offset))?;
        }
        if !empty {
            integral += cell.integrate_affine(li)?;
        }
    }
    Ok(integral / tf.polytope_volume())
}

/// `n!·vol{u ∈ P_{-K} : g(u) >= t}`, the volume of the `t`-th piece of the
/// filtration by vanishing order along `D`.
pub fn divisor_slice_volume(
    tf: &ToricFano,
    divisor: &ToricDivisor,
    t: &Rational,
) -> Result<Rational> {
    let support = check_effective(tf, divisor)?;
    if t.is_negative() {
        return Err(Error::NegativeSlice(t.to_string()));
    }
    let mut slice = tf.polytope().clone();
    for i in support {
        // <u, v_i> + 1 >= t·c_i
        let offset = t * &divisor.coefficients()[i] - Rational::one();
        slice = slice.with_facet(Facet::new(tf.fan().rays()[i].clone(), offset))?;
    }
    slice.normalized_volume()
}

/// Slice volume for the prime divisor `D_i`.
pub fn filtration_slice_volume(tf: &ToricFano, ray: usize, t: &Rational) -> Result<Rational> {
    tf.fan().ray(ray)?;
    divisor_slice_volume(tf, &ToricDivisor::prime(tf.fan().ray_count(), ray), t)
}

/// Points where the slice volume can change polynomial form: the `t`
/// coordinates of the vertices of `{(u, t) : u ∈ P, 0 <= t <= g(u)}`.
fn slice_breakpoints(tf: &ToricFano, divisor: &ToricDivisor) -> Result<Vec<Rational>> {
    let n = tf.fan().dim();
    let mut facets = Vec::new();
    for (v, c) in tf.fan().rays().iter().zip(divisor.coefficients()) {
        // <u, v> - c·t >= -1
        let mut normal: Vec<Rational> = v.to_rational().coords().to_vec();
        normal.push(-c);
        facets.push(Facet::from_rational(
            &RationalVector::new(normal),
            &-Rational::one(),
        ));
    }
    let mut t_axis = vec![Rational::zero(); n];
    t_axis.push(Rational::one());
    facets.push(Facet::from_rational(
        &RationalVector::new(t_axis),
        &Rational::zero(),
    ));
    let region = Polytope::new(n + 1, facets)?;
    let mut ts: Vec<Rational> = region.vertices()?.iter().map(|p| p[n].clone()).collect();
    ts.sort();
    ts.dedup();
    Ok(ts)
}

/// Weights of the closed Newton–Cotes rule with `m + 1` equally spaced nodes
/// on `[0, 1]`; exact for polynomials of degree `<= m`.
fn newton_cotes_weights(m: usize) -> Vec<Rational> {
    let nodes: Vec<Rational> = (0..=m).map(|k| Rational::new(k as i64, m as i64)).collect();
    (0..=m)
        .map(|k| {
            // Expand L_k(s) = Π_{j≠k} (s - s_j) / (s_k - s_j) and integrate.
            let mut poly = vec![Rational::one()];
            for (j, sj) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                let denom = (&nodes[k] - sj).recip().expect("distinct nodes");
                let mut next = vec![Rational::zero(); poly.len() + 1];
                for (p, a) in poly.iter().enumerate() {
                    next[p + 1] += a * &denom;
                    let shifted = -(a * sj) * &denom;
                    next[p] += shifted;
                }
                poly = next;
            }
            poly.iter()
                .enumerate()
                .map(|(p, a)| a / &Rational::from(p as i64 + 1))
                .sum()
        })
        .collect()
}

/// `β(-K_X, D) = (1 / vol(-K)) ∫_0^∞ vol(F^(t)) dt`, integrating the slice
/// volumes exactly: they are polynomials of degree `<= n` in `t` between
/// consecutive breakpoints.
pub fn beta_by_slice_integration(tf: &ToricFano, divisor: &ToricDivisor) -> Result<Rational> {
    check_effective(tf, divisor)?;
    let n = tf.fan().dim();
    let weights = newton_cotes_weights(n.max(1));
    let m = weights.len() - 1;
    let breaks = slice_breakpoints(tf, divisor)?;
    let mut integral = Rational::zero();
    for w in breaks.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let width = b - a;
        let mut acc = Rational::zero();
        for (k, wk) in weights.iter().enumerate() {
            let t = a + &(&width * &Rational::new(k as i64, m as i64));
            acc += wk * &divisor_slice_volume(tf, divisor, &t)?;
        }
        integral += width * acc;
    }
    Ok(integral / tf.anticanonical_volume())
}

/// `(Σ_u m(u)) / (N · #(N·P ∩ M))` with `m(u) = min_i floor((<u, v_i> + N) / c_i)`,
/// which equals `Σ_{m>=1} h^0(-NK - mD) / (N · h^0(-NK))`.
pub fn beta_estimate_lattice(
    tf: &ToricFano,
    divisor: &ToricDivisor,
    dilation: u32,
) -> Result<BetaEstimate> {
    let support = check_effective(tf, divisor)?;
    if !divisor.is_integral() {
        return Err(Error::NotEffectiveIntegral(format!(
            "fractional coefficient in {:?}",
            divisor.coefficients()
        )));
    }
    if dilation == 0 {
        return Err(Error::NotEffectiveIntegral(
            "dilation must be positive".into(),
        ));
    }
    let big_n = i64::from(dilation);
    let forms: Vec<(Vec<i64>, i64)> = support
        .iter()
        .map(|&i| {
            let ray = tf.fan().rays()[i].to_i64().ok_or(Error::Overflow)?;
            let c = divisor.coefficients()[i]
                .numer()
                .to_i64()
                .ok_or(Error::Overflow)?;
            Ok((ray, c))
        })
        .collect::<Result<_>>()?;
    let points = tf
        .polytope()
        .dilate(&Rational::from(big_n))
        .lattice_points_i64()?;
    let mut total: i128 = 0;
    for u in &points {
        let m = forms
            .iter()
            .map(|(v, c)| {
                let order: i64 = u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() + big_n;
                debug_assert!(order >= 0);
                order / c
            })
            .min()
            .expect("nonempty support");
        total += i128::from(m);
    }
    let count = points.len() as i64;
    Ok(BetaEstimate {
        dilation,
        estimate: Rational::new(total, big_n * count),
        section_count: count as u64,
    })
}

/// Lattice estimates for `D_i` at `N = 1..=max_n` against the exact value.
pub fn beta_sweep(tf: &ToricFano, ray: usize, max_n: u32) -> Result<Vec<SweepRow>> {
    tf.fan().ray(ray)?;
    let divisor = ToricDivisor::prime(tf.fan().ray_count(), ray);
    let exact = beta_exact_general(tf, &divisor)?;
    (1..=max_n)
        .map(|n| {
            let est = beta_estimate_lattice(tf, &divisor, n)?;
            Ok(SweepRow {
                dilation: n,
                section_count: est.section_count,
                abs_error: (&est.estimate - &exact).abs(),
                estimate: est.estimate,
                exact_target: exact.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;

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

    #[test]
    fn newton_cotes_rules() {
        assert_eq!(newton_cotes_weights(1), vec![q(1, 2), q(1, 2)]);
        assert_eq!(newton_cotes_weights(2), vec![q(1, 6), q(2, 3), q(1, 6)]);
        assert_eq!(
            newton_cotes_weights(3),
            vec![q(1, 8), q(3, 8), q(3, 8), q(1, 8)]
        );
    }

    #[test]
    fn lattice_estimate_examples() {
        let est = beta_estimate_lattice(&p2(), &ToricDivisor::prime(3, 0), 3).unwrap();
        assert_eq!(est.section_count, 55);
        assert_eq!(est.estimate, q(1, 1));

        let est = beta_estimate_lattice(&p1xp1(), &ToricDivisor::prime(4, 0), 1).unwrap();
        assert_eq!(est.section_count, 9);
        assert_eq!(est.estimate, q(1, 1));
    }

    #[test]
    fn lattice_estimate_rejects_bad_divisors() {
        let tf = p2();
        assert!(matches!(
            beta_estimate_lattice(&tf, &ToricDivisor::from_i64(&[1, -1, 0]), 2),
            Err(Error::NotEffectiveIntegral(_))
        ));
        assert!(matches!(
            beta_estimate_lattice(&tf, &ToricDivisor::new(vec![q(1, 2), q(0, 1), q(0, 1)]), 2),
            Err(Error::NotEffectiveIntegral(_))
        ));
        assert_eq!(
            beta_estimate_lattice(&tf, &ToricDivisor::zero(3), 2).unwrap_err(),
            Error::EmptySupport
        );
    }

    #[test]
    fn f1_sweep_approaches_closed_form() {
        let rows = beta_sweep(&f1(), 3, 40).unwrap();
        assert_eq!(rows[0].exact_target, q(5, 6));
        assert!(rows[39].abs_error < q(1, 20));
        assert!(rows[39].abs_error < rows[0].abs_error);
    }

    #[test]
    fn exact_general_examples() {
        assert_eq!(
            beta_exact_general(&p2(), &ToricDivisor::prime(3, 0)).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            beta_exact_general(&f1(), &ToricDivisor::prime(4, 3)).unwrap(),
            q(5, 6)
        );
        // D_1 + D_3 on P¹×P¹: rays (1,0) and (-1,0).
        assert_eq!(
            beta_exact_general(&p1xp1(), &ToricDivisor::from_i64(&[1, 0, 1, 0])).unwrap(),
            q(1, 2)
        );
        assert_eq!(
            beta_exact_general(&p2(), &ToricDivisor::zero(3)).unwrap_err(),
            Error::EmptySupport
        );
    }

    #[test]
    fn p2_anticanonical_sum_is_a_pyramid() {
        // g = min_i (<u, v_i> + 1) is the pyramid of height 1 over P.
        let d = ToricDivisor::from_i64(&[1, 1, 1]);
        assert_eq!(beta_exact_general(&p2(), &d).unwrap(), q(1, 3));
        assert_eq!(beta_by_slice_integration(&p2(), &d).unwrap(), q(1, 3));
    }

    #[test]
    fn slice_volume_examples() {
        assert_eq!(
            filtration_slice_volume(&p2(), 0, &q(0, 1)).unwrap(),
            q(9, 1)
        );
        assert_eq!(
            filtration_slice_volume(&p2(), 0, &q(3, 1)).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            filtration_slice_volume(&p1xp1(), 0, &q(1, 1)).unwrap(),
            q(4, 1)
        );
        assert!(matches!(
            filtration_slice_volume(&p2(), 0, &q(-1, 2)),
            Err(Error::NegativeSlice(_))
        ));
    }

    #[test]
    fn slice_volume_is_nonincreasing() {
        let tf = f1();
        for ray in 0..4 {
            let vols: Vec<Rational> = (0..=16)
                .map(|k| filtration_slice_volume(&tf, ray, &q(k, 4)).unwrap())
                .collect();
            assert!(vols.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(vols.last().unwrap(), &q(0, 1));
        }
    }

    #[test]
    fn slice_integration_matches_cells() {
        for tf in [p2(), f1(), p1xp1()] {
            let d = tf.fan().ray_count();
            for i in 0..d {
                let div = ToricDivisor::prime(d, i);
                assert_eq!(
                    beta_by_slice_integration(&tf, &div).unwrap(),
                    tf.beta_ray(i).unwrap()
                );
            }
            let mixed = ToricDivisor::new((0..d).map(|i| q(i as i64 % 3, 2)).collect());
            assert_eq!(
                beta_by_slice_integration(&tf, &mixed).unwrap(),
                beta_exact_general(&tf, &mixed).unwrap()
            );
        }
    }
}
