//! The charge-zero sector of the semi-infinite wedge, truncated to what a
//! finite correlator can reach.
//!
//! Operators `𝓔_a(z)` act on basis vectors `v_λ` by moving one particle of the
//! Maya diagram. Coefficients are kept as integer combinations of
//! exponentials `e^{c·z}` (and `1/ζ(z)` factors from `𝓔₀`), so a vacuum
//! expectation is exact and only expanded into a series at the very end.
//!
//! On top of this sit the `A`-operators, whose correlators produce Hurwitz
//! numbers of all three kinds.

mod aop;
mod state;

pub use aop::{a_correlator, a_operator_terms, fock_hurwitz_number, folded_correlator_series, ATerm};
pub use state::{
    apply_e, expsum_to_series, vacuum_expectation, vacuum_expsum, EOpSpec, ExpKey, ExpSum, FockBasisState, StateVector,
};
