//! Exact rotation numbers of piecewise-linear circle homeomorphisms with
//! rational data.
//!
//! The renormalization operator `f ↦ f*` (a first-return map of `f⁻¹`,
//! rescaled) produces one continued-fraction partial quotient of the
//! rotation number per step. Running it in exact rational arithmetic either
//! stops at a map with a fixed point, which pins down a rational rotation
//! number, or revisits a previous map exactly, which pins down a quadratic
//! irrational.
//!
//! ```
//! use rotlab::fixtures::theorem_main;
//! use rotlab::renorm::{rotation_number_exact, Budgets, RotationNumber};
//!
//! let result = rotation_number_exact(&theorem_main(), &Budgets::default()).unwrap();
//! let RotationNumber::Quadratic(x) = &result.rotation else { panic!() };
//! assert_eq!(x.to_string(), "(-1+1*sqrt(2))/1");
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod arith;
pub mod fixtures;
pub mod obstruction;
pub mod plmap;
pub mod renorm;
pub mod scan;

pub use arith::{ContinuedFraction, Number, QuadraticIrrational, Rational};
pub use plmap::{PLCircleMap, PLIntervalMap};
pub use renorm::{rotation_number_exact, Budgets, RotationNumber};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/pl-maps.md")]
    mod pl_maps {}
    #[doc = include_str!("../../../book/src/renormalization.md")]
    mod renormalization {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/scans.md")]
    mod scans {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
