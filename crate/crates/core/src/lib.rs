//! Multiple Dirichlet series over Lucas sequences.
//!
//! For `U_n = U_n(P, Q)` this crate evaluates the multiple Lucas zeta
//! function, its shifted form `ζ(s | r)` over arithmetic progressions,
//! multiple L-functions twisted by Dirichlet characters, and additive
//! L-functions twisted by `n ↦ f(1)^n`. Each family is available by direct
//! summation where it converges and by analytic continuation everywhere
//! else, with explicit error bounds, pole hyperplanes, closed-form residues
//! and exact values at non-positive integers in `ℚ(√D)`.
//!
//! ```
//! use lucas_dirichlet::{shifted_zeta_cont, LucasParams, MultiComplexPoint, ShiftSpec, TruncationPolicy};
//!
//! let fib = LucasParams::from_integers(1, -1).unwrap();
//! let shift = ShiftSpec::new(1, vec![1, 1]).unwrap();
//! let s = MultiComplexPoint::from_f64(128, &[(-1.0, 0.5), (0.5, 0.0)]).unwrap();
//! let v = shifted_zeta_cont(&fib, &shift, &s, &TruncationPolicy::default(), 128).unwrap();
//! assert!(v.error_bound() < 1e-15);
//! ```
//!
//! The guide in `book/` walks through each part.

pub mod additive;
pub mod characters;
pub mod continuation;
pub mod cyclotomic;
pub mod error;
pub mod lucas;
pub mod numeric;
pub mod poles;
pub mod quadratic;
pub mod rational;
pub mod residues;
pub mod series;
pub mod special;
pub mod verify;

pub use additive::{AdditiveCharacter, AdditiveTuple};
pub use characters::DirichletCharacter;
pub use continuation::{additive_l_cont, dirichlet_l_cont, shifted_zeta_cont, TruncationPolicy};
pub use error::{Error, Result};
pub use lucas::LucasParams;
pub use numeric::MultiComplexPoint;
pub use quadratic::QuadExt;
pub use series::{EvalResult, ShiftSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/parameters.md")]
    mod parameters {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/poles.md")]
    mod poles {}
    #[doc = include_str!("../../../book/src/special-values.md")]
    mod special_values {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
