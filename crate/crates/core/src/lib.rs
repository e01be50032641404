//! Character sums over Bohr sets in F_p.
//!
//! The crate builds the objects used by the Pólya–Vinogradov and Burgess
//! arguments for Bohr sets: characters and Gauss sums, Fourier transforms,
//! Bohr sets with their regular radii, multiplicative energies and
//! root-specified polynomials. Set decisions are exact (integers and
//! rationals); complex sums use double precision.
//!
//! ```
//! use bohrsum::{bohr::BohrNormTable, zp::FieldCtx, Rational};
//!
//! let ctx = FieldCtx::new(101).unwrap();
//! let table = BohrNormTable::build(&ctx, &[3, 7]).unwrap();
//! let eps = table.find_regular_value(&Rational::new(1, 10)).unwrap();
//! let chi = ctx.character(1);
//! let s = chi.sum_over(&table.bohr_set(&eps));
//! assert!(s.norm() <= table.size(&eps) as f64);
//! ```

pub mod additive;
pub mod bohr;
pub mod burgess;
pub mod characters;
pub mod error;
pub mod fourier;
pub mod recurrence;
pub mod sets;
pub mod zp;

pub use error::{Error, Result};
pub use sets::ResidueSet;

/// Exact radii, κ values and ratios.
pub type Rational = num_rational::Ratio<i128>;
