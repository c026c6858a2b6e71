//! Finite-volume schemes for the 1D transport equation `u_t + u_x = 0` on a
//! unit grid, together with the tools used to study their long-time behavior.
//!
//! Four steppers are provided: upwind, Lax-Wendroff, the anti-diffusive
//! reconstruction scheme on a fixed grid, and the variant whose grid is
//! shifted alternately left and right. Every routine is generic over a
//! [`Scalar`] so the same code runs in exact rational arithmetic (used to
//! check structural statements bit-exactly) or in binary64.
//!
//! Modules:
//! - [`state`]: grid states with arithmetic tails, jumps, cell averaging.
//! - [`schemes`]: reconstruction and the four time steppers.
//! - [`analysis`]: error norms, plateau metric, configuration classifiers.
//! - [`experiments`]: presets, experiment runner, CSV output, property suites.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod scalar;
pub mod schemes;
pub mod state;

pub use error::{Error, Result};
pub use scalar::{Arithmetic, Cfl, Rational, Scalar};
pub use schemes::{SchemeKind, SchemeParams};
pub use state::{Extent, GridState, JumpSequence, Phase, PiecewiseDatum, Tail};
