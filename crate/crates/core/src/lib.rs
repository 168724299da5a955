//! Numerical laboratory for pathwise Hamilton–Jacobi equations `du = H(Du)·dW`.
//!
//! * [`grid_convex`]: envelopes, Legendre transforms and second-difference moduli on uniform grids.
//! * [`dc_toolkit`]: difference-of-convex decompositions and K-functional diagnostics for Hamiltonians.
//! * [`paths`]: driving-path generators and their regularity functionals.
//! * [`solver`]: exact conjugate-space propagation, a monotone finite-difference scheme and closed forms.
//! * [`expcli`]: configuration, experiment runners and artifact output behind the `pathwise-hj` binary.

pub mod dc_toolkit;
pub mod error;
pub mod expcli;
pub mod grid_convex;
pub mod par;
pub mod paths;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
