//! Numerical library for the affine Hardy-Littlewood-Sobolev (HLS) theory:
//! star bodies and dual mixed volumes, autocorrelation functionals, the
//! star-shaped sets H_alpha f and fractional L^2 polar projection bodies,
//! radial mean bodies of convex sets and of functions, and a harness of
//! named inequality checks that reports quantitative margins.
//!
//! Everything is deterministic at desk scale: integration budgets live in
//! [`numerics::QuadratureSpec`], Monte Carlo streams are seeded, and repeated
//! runs with the same spec are bit-identical.

pub mod autocorr;
pub mod error;
pub mod numerics;
pub mod radialmean;
pub mod report;
pub mod funcspace;
pub mod hlsbody;
pub mod starbody;
pub mod verify;

pub use error::{HlsError, Result};
pub use numerics::QuadratureSpec;
