//! Integers with few nonzero digits in a base `b` and prime factors in a
//! fixed finite set `S`.
//!
//! - [`sparse_digits`]: digit expansions and increasing enumeration of
//!   integers with at most `k` nonzero digits, plus `a^m + c^n + 1`.
//! - [`arithmetic`]: S-parts, valuations, greatest prime factor, radical,
//!   smoothness.
//! - [`rigorous`]: outward-rounded dyadic interval arithmetic and logarithms.
//! - [`lfl_bounds`]: explicit Matveev and Yu bounds for linear forms in
//!   logarithms of rationals.
//! - [`effective_bounds`]: bound certificates for three-digit S-unit
//!   relations `d_3 b^m + d_2 b^n + d_1 = q_1^{r_1} ... q_s^{r_s} M`.
//! - [`sunit_solver`]: exhaustive search for those relations below a cap,
//!   the `2^m + 2^n + 1` checker and empirical tables.
//! - [`reports`]: the command-line front end.

pub mod arithmetic;
pub mod effective_bounds;
pub mod error;
pub mod lfl_bounds;
pub mod reports;
pub mod rigorous;
pub mod serde_big;
pub mod sparse_digits;
pub mod sunit_solver;

pub use error::{Error, Result};
