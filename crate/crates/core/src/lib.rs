//! Exact K-stability invariants of toric Q-Fano varieties.
//!
//! Given a complete fan whose anticanonical divisor is ample and Q-Cartier,
//! this crate computes the barycenter of the anticanonical polytope, the
//! values `β(-K_X, D_i)` for every torus-invariant prime divisor, the
//! δ-invariant and the K-semistability verdict, all in exact rational
//! arithmetic. Independent routes through the filtration volume (cell
//! integration, slice integration, lattice counts) cross-check the closed
//! forms, and [`kstability::vojta_certificate`] records whether a choice of
//! divisors meets the hypotheses of the toric Vojta-type theorems.
//!
//! ```
//! use toric_kstab::{catalog::catalog_get, kstability::{ToricFano, Verdict}, Rational};
//!
//! let f1 = ToricFano::new(catalog_get("F1")?.fan)?;
//! let report = f1.analyze();
//! assert_eq!(report.delta, Rational::new(6, 7));
//! assert_eq!(report.verdict, Verdict::KUnstable);
//! # Ok::<(), toric_kstab::Error>(())
//! ```

pub mod arith;
pub mod catalog;
pub mod error;
pub mod fan;
pub mod filtration;
pub mod kstability;
pub mod polytope;
pub mod position;

pub use arith::{LatticeVector, Rational, RationalVector};
pub use error::{Error, Result};
pub use fan::{Fan, ToricDivisor};
pub use kstability::{KStabilityReport, ToricFano, Verdict};
pub use polytope::Polytope;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/fans.md")]
    mod fans {}
    #[doc = include_str!("../../../book/src/polytope.md")]
    mod polytope {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/filtration.md")]
    mod filtration {}
    #[doc = include_str!("../../../book/src/position.md")]
    mod position {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
