//! Koszul–Tate towers of Noether identities for differential operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] – exact graded-commutative polynomials in jets and antifields,
//!   with total derivatives.
//! * [`derivation`] – contact graded derivations, Koszul–Tate differentials and
//!   their nilpotency check.
//! * [`syzygy`] – Gröbner bases and syzygies of modules over `Q[D_1..D_n]`,
//!   plus a brute-force linear-algebra oracle.
//! * [`resolver`] – the stage-by-stage tower for linear constant-coefficient
//!   operators and verification of supplied towers for general operators.
//! * [`dsl`] and [`report`] – the operator description language and report
//!   serialization used by the `kt` binary.

pub mod algebra;
pub mod corpus;
pub mod derivation;
pub mod dsl;
mod error;
pub mod linalg;
pub mod report;
pub mod resolver;
pub mod syzygy;

pub use error::{AlgebraError, DerivationError, ResolveError};
