//! Deterministic numerical integration engines: power-weighted half-line
//! integrals (including the analytic-continuation regime for exponents in
//! (-1,0)), sphere grids with weights, and seeded Monte Carlo expectations.

mod gauss;
mod montecarlo;
mod quadrature;
mod sphere;

pub use gauss::gauss_legendre as gauss_legendre_nodes;
pub use montecarlo::{box_sampler, box_volume, mc_expectation};
pub use quadrature::{
    adaptive_integral, integrate_powerweight, integrate_powerweight_detailed,
    integrate_powerweight_split, QuadOutcome,
};
pub use sphere::{sphere_grid, sphere_surface, unit_ball_volume, GridStructure, SphereGrid};

use serde::{Deserialize, Serialize};

use crate::error::{HlsError, Result};

/// Integration budgets shared by every numerical routine.
///
/// Two runs with an identical spec and identical inputs produce bit-identical
/// results: sums are reduced in fixed order and the Monte Carlo stream is a
/// counter-based generator driven solely by `seed`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order used per panel in adaptive radial integration.
    pub radial_nodes: usize,
    /// Truncation point of half-line integrals after the tail transform.
    /// The integrand must be negligible there, otherwise the integral is
    /// reported as non-convergent or divergent.
    pub tail_cut: f64,
    /// Resolution parameter for sphere grids (meaning depends on dimension).
    pub sphere_resolution: usize,
    /// Sample count for Monte Carlo estimates.
    pub mc_samples: usize,
    /// Seed for the counter-based random stream.
    pub seed: u64,
    /// Relative tolerance target of adaptive quadrature.
    pub rel_tol: f64,
    /// Absolute floor below which contributions are considered negligible.
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 16,
            tail_cut: 1e8,
            sphere_resolution: 256,
            mc_samples: 1_000_000,
            seed: 1,
            rel_tol: 1e-6,
            abs_tol: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 1 || self.sphere_resolution < 1 || self.mc_samples < 1 {
            return Err(HlsError::PreconditionFailed(
                "all quadrature counts must be >= 1".into(),
            ));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || !(self.tail_cut > 0.0) {
            return Err(HlsError::PreconditionFailed(
                "rel_tol, abs_tol and tail_cut must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Convenience: same spec with a different seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
