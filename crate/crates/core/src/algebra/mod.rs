//! Graded commutative ring of jet and antifield polynomials in a single chart.
//!
//! Base coordinates `x^λ` and jets `y^i_Λ` are even; antifields `c^{r_k}_Λ`
//! of stage `k` carry parity `k mod 2` (stage `-1` is odd) and antifield
//! number `k + 2` (stage `-1` has antifield number 1). Coefficients are exact
//! rationals.

mod multi_index;
mod poly;
mod var;

pub use multi_index::MultiIndex;
pub use poly::{Grade, GradedPoly, Homogeneity, Monomial};
pub use var::{
    stage_antifield_number, stage_parity, DefaultNames, FieldNames, Generator, Parity, Var,
};

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parity and antifield number of `p`, with mixed flags.
pub fn grade_of(p: &GradedPoly) -> Grade {
    p.grade()
}
