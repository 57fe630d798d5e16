//! Exact scalar arithmetic: arbitrary-precision rationals, the field of
//! rational functions in the level symbol `k`, and multivariate polynomials
//! over that field.
//!
//! - [`Rational`]: reduced `p/q` with `q > 0`, parsed and printed exactly as `p/q`
//! - [`UniPoly`]: dense univariate polynomials over [`Rational`]
//! - [`RatFunc`]: quotients of [`UniPoly`] in canonical form (monic denominator,
//!   common factors removed)
//! - [`MPoly`]: sparse polynomials in the variables of [`Var`] with [`RatFunc`]
//!   coefficients, supporting substitution, partial derivatives, and exact
//!   evaluation at a rational level
//! - [`rational_roots_cubic`]: exact rational-root extraction for cubics with
//!   the root-free cofactor returned alongside
//!
//! Everything here is immutable after construction and uses no floating point.

mod mpoly;
mod rat;
mod ratfunc;
mod roots;

pub use mpoly::{Bindings, MPoly, Var, ALL_VARS};
pub use rat::Rational;
pub use ratfunc::{RatFunc, UniPoly};
pub use roots::{rational_roots, rational_roots_cubic, CubicRoots};

use thiserror::Error;

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    /// Division of a rational or rational function by zero.
    #[error("division by zero")]
    DivisionByZero,
    /// A rational literal had denominator zero.
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    /// A string did not parse as `p` or `p/q`.
    #[error("malformed rational literal `{0}`")]
    ParseRational(String),
    /// Evaluation of a rational function at a pole of its denominator.
    #[error("level {0} is a pole of a rational-function coefficient")]
    LevelPole(Rational),
    /// Evaluation of a polynomial with a variable left unbound.
    #[error("variable `{0}` is unbound")]
    UnboundVariable(Var),
    /// Root extraction on the zero polynomial.
    #[error("root extraction on the zero polynomial")]
    ZeroPolynomial,
    /// Root extraction expected a cubic leading coefficient.
    #[error("cubic root extraction requires a nonzero leading coefficient")]
    NotCubic,
}
