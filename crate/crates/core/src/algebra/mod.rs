//! Exact arithmetic in F_p and F_{p^k}, and sparse polynomials over them.

mod coeff;
mod field;
pub(crate) mod fp_poly;
mod poly;

pub use coeff::{placeholders, Bindings};
pub use field::{is_prime, FieldCtx, FieldElement, MAX_PRIME};
pub use poly::{Degree, Exponents, Grading, MultiPoly};
