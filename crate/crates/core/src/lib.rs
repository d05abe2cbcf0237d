//! Exact arithmetic for contact surgery on Legendrian knots: Farey graph
//! paths, surgery diagrams, intersection forms and the `d3` invariant.

pub mod error;
pub mod exact_arith;
pub mod exact_linalg;
pub mod cosmetic;
pub mod farey;
pub mod invariants;
pub mod surgery_diagram;
pub mod verification;

pub use error::{Error, Result};
pub use exact_arith::{NegContinuedFraction, Rational, Slope};
pub use cosmetic::{CosmeticVerdict, Family, Outcome, SlopePair, UnknotSurgeryClass};
pub use exact_linalg::IntMatrix;
pub use farey::{DecoratedPath, Sign, Tightness};
pub use invariants::D3Result;
pub use surgery_diagram::{KnotMeta, LegendrianData};
