//! Exact arithmetic for Hodge and Newton polygons of the twisted Kloosterman
//! family
//!
//! ```text
//! F̄(λ̄, x) = x₁^{a₁} + ⋯ + xₙ^{aₙ} + λ̄ / (x₁^{d₁} ⋯ xₙ^{dₙ}),   λ̄ ∈ F_p*.
//! ```
//!
//! The crate computes, with no floating point anywhere in the mathematical
//! path:
//!
//! * the weight function on Zⁿ induced by the Newton polytope Δ(F̄), the
//!   monomial basis 𝓑 of the associated graded quotient, and the counting
//!   combinatorics behind `|𝓑| = Π aᵢ + Σ_j d_j Π_{i≠j} aᵢ` ([`lattice`]);
//! * reduction of an arbitrary monomial to 𝓑 modulo the ideal generated by
//!   the logarithmic partials `F̄_l = x_l ∂F̄/∂x_l` ([`graded`]);
//! * the Hodge polygon from basis weights and Newton polygons from exact
//!   p-adic valuation data, plus polygon comparison ([`polygon`]);
//! * sufficient ordinarity criteria via face matrices and their Smith normal
//!   forms ([`ordinarity`]);
//! * a brute-force verification oracle: toric exponential sums over F_{p^k},
//!   the L-polynomial over Z[ζ_p] via Newton's identities, and exact
//!   (1−ζ_p)-adic valuations of its coefficients ([`ffield`], [`lfunc`]).
//!
//! Everything is exact: weights and polygon coordinates are `Ratio<i64>`,
//! L-coefficients are arbitrary-precision cyclotomic integers.

pub mod ffield;
pub mod graded;
pub mod lattice;
pub mod lfunc;
pub mod ordinarity;
pub mod polygon;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use lattice::{BasisSet, KloostermanFamily};
pub use polygon::{Comparison, Polygon, SlopeSequence};

use std::fmt;

/// Exact rational scalar used for weights and polygon coordinates.
pub type Rat = num::rational::Ratio<i64>;

/// An integer exponent vector v ∈ Zⁿ.
pub type LatticePoint = Vec<i64>;

/// Convenience constructor for [`Rat`].
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Crate-wide error type.
///
/// The split mirrors how failures must be reported to a caller: bad input,
/// a prime incompatible with the family, a refusal to start an enumeration
/// that is too large, and internal invariant violations (which indicate a
/// bug, never a user error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters outside the supported domain (non-positive exponents,
    /// length mismatches, points outside an operation's domain set, ...).
    InvalidInput(String),
    /// p is not an odd prime, or p divides some aᵢdᵢ.
    Degenerate(String),
    /// An exponential sum would need more point evaluations than allowed.
    BudgetExceeded { needed: u128, budget: u128 },
    /// A proof-backed invariant failed at run time.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate: {msg}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: {needed} point evaluations needed, budget is {budget}")
            }
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
