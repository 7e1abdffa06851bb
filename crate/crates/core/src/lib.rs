//! Exact computation of orbifold Hurwitz numbers of three flavours (monotone,
//! strictly monotone and usual), together with machinery that checks their
//! structural properties.
//!
//! Three independent routes produce the numbers:
//!
//! * the **character route** ([`hurwitz::disconnected_series_character`]) sums
//!   over irreducible representations of the symmetric group, weighting each by
//!   the symmetric-function eigenvalue of its contents;
//! * the **group-algebra oracle** ([`hurwitz::oracle_group_algebra`]) multiplies
//!   Jucys–Murphy elements in `Q[S_d]` directly, for small `d`;
//! * the **Fock route** ([`fock::a_correlator`]) evaluates vacuum expectations of
//!   `A`-operators in the charge-zero sector of the semi-infinite wedge.
//!
//! On top of that, [`polycheck`] interpolates the numbers as exact polynomials in
//! `[μ₁], …, [μₙ]` per residue class, and [`spectral`] performs the series
//! computations on the three spectral curves.
//!
//! All arithmetic is exact ([`num_rational::BigRational`]); there is no floating
//! point anywhere in the crate.

pub mod exactmath;
pub mod fock;
pub mod hurwitz;
pub mod partitions;
pub mod polycheck;
pub mod spectral;

mod error;

pub use error::{Error, Result};
pub use exactmath::{BigRational, ExtendedRational, MultiPolynomial, TruncatedSeries};
pub use hurwitz::{HurwitzKind, Profile};
pub use partitions::Partition;
