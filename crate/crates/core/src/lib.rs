//! Newton-polyhedral invariants of real hypersurface germs in ℂⁿ and contact
//! orders of holomorphic curve jets, all in exact rational arithmetic.

pub mod error;
pub mod classify;
pub mod curve;
pub mod expr;
pub mod face;
pub mod gaussian;
pub mod jet;
pub mod linalg;
pub mod newton;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use gaussian::{GaussianRational, Rational};
pub use jet::{CoefficientRule, HermitianJet, RuleRadius, Tail, TailRule, VanishingOrder};
pub use poly::{ExponentPair, HoloPoly, Poly};
