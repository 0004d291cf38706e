//! Exact computation for the coupled rational difference system
//!
//! ```text
//! x_{n+1} = x_n y_{n-1} / (y_n (a_n + b_n x_n y_{n-1}))
//! y_{n+1} = x_{n-1} y_n / (x_n (c_n + d_n x_{n-1} y_n))
//! ```
//!
//! * [`engine`] iterates the system directly and is the reference for
//!   everything else.
//! * [`reduction`] maps trajectories to the invariants `U_n, V_n`, which
//!   satisfy first-order linear recurrences, and back.
//! * [`closed_form`] evaluates the explicit solution families.
//! * [`symmetry`] checks scaling generators against the system.
//! * [`cli`] is the `radex` command-line front end.

pub mod cli;
pub mod closed_form;
pub mod coefficients;
pub mod engine;
pub mod error;
pub mod numeric;
pub mod reduction;
pub mod symmetry;

pub use coefficients::{CoefficientQuad, Coeffs, Component, SequenceKind};
pub use engine::{simulate, InitialState, Status, Trajectory};
pub use error::{Error, Factor, Forbidden, Result, Singularity};
pub use numeric::{DualScalar, ExactRational};
pub use reduction::InvariantSeq;
pub use symmetry::GeneratorSpec;
