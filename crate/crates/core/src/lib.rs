//! p-ranks, a-numbers and ordinariness of curves over finite fields.
//!
//! The entry point for most uses is [`curve::Curve`] together with
//! [`report::invariants`]. The lower layers ([`algebra`], [`cohomology`],
//! [`frobenius`], [`cartier`], [`semilinear`]) can be used directly; the
//! point counter in [`zeta`] is an independent check.

pub mod algebra;
pub mod cartier;
pub mod cohomology;
pub mod curve;
pub mod error;
pub mod frobenius;
pub mod gjacobian;
pub mod linalg;
pub mod report;
pub mod semilinear;
pub mod sweep;
pub mod zeta;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/frobenius.md")]
    mod frobenius {}
    #[doc = include_str!("../../../book/src/semilinear.md")]
    mod semilinear {}
    #[doc = include_str!("../../../book/src/cartier.md")]
    mod cartier {}
    #[doc = include_str!("../../../book/src/singular.md")]
    mod singular {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
