//! Numerical and asymptotic laboratory for energy decay of damped waves on
//! the two-torus.
//!
//! The crate has two halves that cross-check each other:
//!
//! * a symbolic side ([`expr`], [`rate`], [`golden`]) that manipulates the
//!   closed family of growth expressions `C·x^β·log^γ·exp(±c·x^∓α)` and
//!   turns derivative-bound data for the damping into resolvent bounds
//!   `M(h)` and energy decay rates `r(t)`;
//! * a numerical side ([`damping`], [`averaging`], [`resolvent`],
//!   [`quasimode`], [`wave`]) that evaluates damping profiles on the torus,
//!   averages them along closed geodesics, measures stationary resolvent
//!   norms and quasimode residuals, and evolves the damped wave equation,
//!   verifying the symbolic predictions at desk scale.

pub mod averaging;
pub mod damping;
pub mod error;
pub mod expr;
pub mod fit;
pub mod fourier;
pub mod golden;
pub mod quasimode;
pub mod rate;
pub mod resolvent;
pub mod scalar;
pub mod wave;

pub use error::{Error, Result};
pub use expr::{GrowthExpr, Orientation};
pub use scalar::Scalar;
