//! The star-shaped set H_alpha f, the fractional L^2 polar projection body,
//! radial mean bodies of functions R_alpha f for alpha in (-1, inf)
//! including the logarithmic case alpha = 0, the anisotropic HLS functional,
//! and the normalized moment-ratio profile zeta.

use std::sync::Arc;

use crate::autocorr::autocorrelation;
use crate::error::{HlsError, Result};
use crate::funcspace::TestFunction;
use crate::numerics::{
    integrate_powerweight_detailed, mc_expectation, QuadratureSpec, SphereGrid,
};
use crate::starbody::{dot, dual_mixed_volume, StarBody};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Spec for autocorrelation values evaluated inside an outer radial
/// quadrature: one digit tighter, so the outer adaptive refinement does not
/// chase the noise floor of the inner integral.
fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: (0.05 * spec.rel_tol).max(1e-13),
        abs_tol: (0.05 * spec.abs_tol).max(1e-15),
        ..spec.clone()
    }
}

/// Per-direction integration diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DirectionDiag {
    pub converged: bool,
    pub divergent: bool,
    pub est_error: f64,
}

impl DirectionDiag {
    fn clean(est_error: f64) -> Self {
        DirectionDiag {
            converged: true,
            divergent: false,
            est_error,
        }
    }

    pub fn flagged(&self) -> bool {
        !self.converged || self.divergent
    }
}

/// A sampled star body with the exponent it was built for and per-direction
/// diagnostics. Directions whose defining integral diverged or failed to
/// converge carry a zero radius and a flag; callers exclude such bodies from
/// inequality checks.
#[derive(Debug, Clone)]
pub struct HlsBodyResult {
    pub body: StarBody,
    pub alpha: f64,
    pub diagnostics: Vec<DirectionDiag>,
}

impl HlsBodyResult {
    pub fn all_converged(&self) -> bool {
        self.diagnostics.iter().all(|d| !d.flagged())
    }

    pub fn flagged_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.flagged()).count()
    }

    /// Sum of the per-direction error estimates relative to the radii scale.
    pub fn relative_error_estimate(&self) -> f64 {
        let radii = self.body.sampled_radii().unwrap_or(&[]);
        let scale = radii.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
        let err: f64 = self.diagnostics.iter().map(|d| d.est_error).sum();
        err / scale
    }
}

fn build_sampled(
    grid: &Arc<SphereGrid>,
    alpha: f64,
    radii: Vec<f64>,
    diags: Vec<DirectionDiag>,
) -> Result<HlsBodyResult> {
    let body = StarBody::sampled(grid.clone(), radii)?;
    Ok(HlsBodyResult {
        body,
        alpha,
        diagnostics: diags,
    })
}

/// H_alpha f: the star-shaped set with
/// rho(xi)^alpha = int_0^inf t^{alpha-1} G f(t xi) dt.
///
/// For radially symmetric f the profile does not depend on the direction and
/// a single integral is broadcast across the grid.
pub fn hls_body(
    f: &TestFunction,
    alpha: f64,
    grid: &Arc<SphereGrid>,
    spec: &QuadratureSpec,
) -> Result<HlsBodyResult> {
    if !(alpha > 0.0) {
        return Err(HlsError::PreconditionFailed(
            "hls_body needs alpha > 0".into(),
        ));
    }
    if grid.dimension() != f.dimension() {
        return Err(HlsError::PreconditionFailed("grid dimension mismatch".into()));
    }
    let count = grid.len();
    let mut radii = vec![0.0; count];
    let mut diags = vec![DirectionDiag::clean(0.0); count];
    if f.is_radially_symmetric() {
        let e1 = unit_dir(f.dimension(), 0);
        let (rho, diag) = direction_radius(f, alpha, &e1, spec)?;
        radii.fill(rho);
        diags.fill(diag);
        return build_sampled(grid, alpha, radii, diags);
    }
    for i in 0..count {
        let (rho, diag) = direction_radius(f, alpha, grid.dir(i), spec)?;
        radii[i] = rho;
        diags[i] = diag;
    }
    build_sampled(grid, alpha, radii, diags)
}

fn unit_dir(n: usize, axis: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[axis] = 1.0;
    e
}

fn direction_radius(
    f: &TestFunction,
    alpha: f64,
    xi: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, DirectionDiag)> {
    let fc = f.clone();
    let dir = xi.to_vec();
    let sp = inner_spec(spec);
    let g = move |t: f64| {
        let y: Vec<f64> = dir.iter().map(|d| d * t).collect();
        autocorrelation(&fc, &y, &sp).unwrap_or(f64::NAN)
    };
    let out = integrate_powerweight_detailed(g, alpha, None, spec)?;
    if out.divergent || !out.converged {
        return Ok((
            0.0,
            DirectionDiag {
                converged: out.converged,
                divergent: out.divergent,
                est_error: f64::INFINITY,
            },
        ));
    }
    let rho = out.value.powf(1.0 / alpha);
    let est = if out.value > 0.0 {
        rho * out.est_error / (alpha * out.value)
    } else {
        0.0
    };
    Ok((rho, DirectionDiag::clean(est)))
}

/// Fractional L^2 polar projection body:
/// rho(xi)^{-2 alpha} = int_0^inf t^{-2 alpha - 1} D f(t xi) dt with
/// D f = 2 (G f(0) - G f), evaluated through the analytic continuation of
/// the power-weighted integral of G f (exponent -2 alpha in (-1, 0)).
pub fn polar_projection_body(
    f: &TestFunction,
    alpha: f64,
    grid: &Arc<SphereGrid>,
    spec: &QuadratureSpec,
) -> Result<HlsBodyResult> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(HlsError::PreconditionFailed(
            "polar projection body needs 0 < alpha < 1/2".into(),
        ));
    }
    if grid.dimension() != f.dimension() {
        return Err(HlsError::PreconditionFailed("grid dimension mismatch".into()));
    }
    let n = f.dimension();
    let g0 = autocorrelation(f, &vec![0.0; n], spec)?;
    let count = grid.len();
    let mut radii = vec![0.0; count];
    let mut diags = vec![DirectionDiag::clean(0.0); count];
    let fill = |i: usize, xi: &[f64]| -> Result<(f64, DirectionDiag)> {
        let _ = i;
        polar_direction_radius(f, alpha, g0, xi, spec)
    };
    if f.is_radially_symmetric() {
        let e1 = unit_dir(n, 0);
        let (rho, diag) = fill(0, &e1)?;
        radii.fill(rho);
        diags.fill(diag);
        return build_sampled(grid, alpha, radii, diags);
    }
    for i in 0..count {
        let (rho, diag) = fill(i, grid.dir(i))?;
        radii[i] = rho;
        diags[i] = diag;
    }
    build_sampled(grid, alpha, radii, diags)
}

fn polar_direction_radius(
    f: &TestFunction,
    alpha: f64,
    g0: f64,
    xi: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, DirectionDiag)> {
    let fc = f.clone();
    let dir = xi.to_vec();
    let sp = inner_spec(spec);
    let g = move |t: f64| {
        let y: Vec<f64> = dir.iter().map(|d| d * t).collect();
        autocorrelation(&fc, &y, &sp).unwrap_or(f64::NAN)
    };
    let beta = -2.0 * alpha;
    let out = integrate_powerweight_detailed(g, beta, Some(g0), spec)?;
    if out.divergent || !out.converged {
        return Ok((
            0.0,
            DirectionDiag {
                converged: out.converged,
                divergent: out.divergent,
                est_error: f64::INFINITY,
            },
        ));
    }
    // int t^{beta-1} (G - g0) dt = -(1/2) int t^{-2 alpha - 1} D dt
    let rho_pow = -2.0 * out.value;
    if !(rho_pow > 0.0) {
        return Ok((
            0.0,
            DirectionDiag {
                converged: false,
                divergent: false,
                est_error: f64::INFINITY,
            },
        ));
    }
    let rho = rho_pow.powf(1.0 / beta);
    let est = rho * (2.0 * out.est_error) / (beta.abs() * rho_pow);
    Ok((rho, DirectionDiag::clean(est)))
}

/// Radial mean body of a function, stitched from the three regimes:
/// a scaled H_alpha f for alpha > 0, a scaled polar projection body for
/// -1 < alpha < 0, and the logarithmic formula
/// log rho(xi) = -gamma + int (G(t xi)/||f||_2^2 - e^{-t}) dt/t at alpha = 0.
pub fn radial_mean_function_body(
    f: &TestFunction,
    alpha: f64,
    grid: &Arc<SphereGrid>,
    spec: &QuadratureSpec,
) -> Result<HlsBodyResult> {
    if !(alpha > -1.0) {
        return Err(HlsError::PreconditionFailed(
            "radial mean body needs alpha > -1".into(),
        ));
    }
    let n = f.dimension();
    let g0 = autocorrelation(f, &vec![0.0; n], spec)?;
    if !(g0 > 0.0) {
        return Err(HlsError::PreconditionFailed("f must be non-zero".into()));
    }
    if alpha != 0.0 {
        // rho = (alpha I / g0)^{1/alpha} with I the (continued) power
        // integral of the autocorrelation; for alpha > 0 this is the scaled
        // H-body radius and for alpha < 0 the scaled polar projection body
        // radius, but combining before exponentiating stays stable as
        // alpha -> 0 where the separate factors overflow.
        let count = grid.len();
        let mut radii = vec![0.0; count];
        let mut diags = vec![DirectionDiag::clean(0.0); count];
        if f.is_radially_symmetric() {
            let e1 = unit_dir(n, 0);
            let (rho, diag) = mean_radius(f, alpha, g0, &e1, spec)?;
            radii.fill(rho);
            diags.fill(diag);
            return build_sampled(grid, alpha, radii, diags);
        }
        for i in 0..count {
            let (rho, diag) = mean_radius(f, alpha, g0, grid.dir(i), spec)?;
            radii[i] = rho;
            diags[i] = diag;
        }
        return build_sampled(grid, alpha, radii, diags);
    }
    // alpha = 0
    let count = grid.len();
    let mut radii = vec![0.0; count];
    let mut diags = vec![DirectionDiag::clean(0.0); count];
    if f.is_radially_symmetric() {
        let e1 = unit_dir(n, 0);
        let (rho, diag) = log_mean_radius(f, g0, &e1, spec)?;
        radii.fill(rho);
        diags.fill(diag);
        return build_sampled(grid, alpha, radii, diags);
    }
    for i in 0..count {
        let (rho, diag) = log_mean_radius(f, g0, grid.dir(i), spec)?;
        radii[i] = rho;
        diags[i] = diag;
    }
    build_sampled(grid, alpha, radii, diags)
}

fn mean_radius(
    f: &TestFunction,
    alpha: f64,
    g0: f64,
    xi: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, DirectionDiag)> {
    let fc = f.clone();
    let dir = xi.to_vec();
    let sp = inner_spec(spec);
    let g = move |t: f64| {
        let y: Vec<f64> = dir.iter().map(|d| d * t).collect();
        autocorrelation(&fc, &y, &sp).unwrap_or(f64::NAN)
    };
    let sub = if alpha < 0.0 { Some(g0) } else { None };
    let out = integrate_powerweight_detailed(g, alpha, sub, spec)?;
    if out.divergent || !out.converged {
        return Ok((
            0.0,
            DirectionDiag {
                converged: out.converged,
                divergent: out.divergent,
                est_error: f64::INFINITY,
            },
        ));
    }
    let ratio = alpha * out.value / g0;
    if !(ratio > 0.0) {
        return Ok((
            0.0,
            DirectionDiag {
                converged: false,
                divergent: false,
                est_error: f64::INFINITY,
            },
        ));
    }
    let rho = ratio.powf(1.0 / alpha);
    let est = rho * out.est_error / (g0 * ratio);
    Ok((rho, DirectionDiag::clean(est)))
}

fn log_mean_radius(
    f: &TestFunction,
    g0: f64,
    xi: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, DirectionDiag)> {
    let fc = f.clone();
    let dir = xi.to_vec();
    let sp = inner_spec(spec);
    let abs_tol = spec.abs_tol;
    let integrand = move |t: f64| {
        let y: Vec<f64> = dir.iter().map(|d| d * t).collect();
        let g = autocorrelation(&fc, &y, &sp).unwrap_or(f64::NAN);
        let diff = g / g0 - (-t).exp();
        // removable singularity at t = 0
        if diff.abs() < abs_tol {
            0.0
        } else {
            diff / t
        }
    };
    let out = integrate_powerweight_detailed(integrand, 1.0, None, spec)?;
    if out.divergent || !out.converged {
        return Ok((
            0.0,
            DirectionDiag {
                converged: out.converged,
                divergent: out.divergent,
                est_error: f64::INFINITY,
            },
        ));
    }
    let log_rho = -EULER_GAMMA + out.value;
    let rho = log_rho.exp();
    Ok((rho, DirectionDiag::clean(rho * out.est_error)))
}

/// The anisotropic functional
/// iint f(x) f(y) / ||x - y||_K^{n - alpha} dx dy = n tilde V_alpha(K, H_alpha f).
pub fn anisotropic_hls_functional(
    f: &TestFunction,
    k: &StarBody,
    alpha: f64,
    grid: &Arc<SphereGrid>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let h = hls_body(f, alpha, grid, spec)?;
    if !h.all_converged() {
        return Err(HlsError::DivergentIntegral(format!(
            "{} directions flagged while building the body",
            h.flagged_count()
        )));
    }
    let n = f.dimension() as f64;
    let v = dual_mixed_volume(k, &h.body, alpha, spec)?;
    if !v.finite {
        return Err(HlsError::NonFinite("anisotropic functional".into()));
    }
    Ok(n * v.value)
}

/// Direct double-integral Monte Carlo estimate of the anisotropic
/// functional; the quadrature path must agree within a few standard errors.
pub fn anisotropic_hls_mc(
    f: &TestFunction,
    k: &StarBody,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let n = f.dimension();
    let bounds = crate::autocorr::integration_box(f)?;
    let mut pair_bounds = bounds.clone();
    pair_bounds.extend_from_slice(&bounds);
    let vol = crate::numerics::box_volume(&pair_bounds);
    let fc = f.clone();
    let kc = k.clone();
    let nf = n as f64;
    let (mean, stderr) = mc_expectation(
        2 * n,
        crate::numerics::box_sampler(pair_bounds),
        move |xy| {
            let (x, y) = xy.split_at(n);
            let fx = fc.eval(x);
            if fx == 0.0 {
                return 0.0;
            }
            let fy = fc.eval(y);
            if fy == 0.0 {
                return 0.0;
            }
            let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            if crate::starbody::norm2(&z) < 1e-9 {
                return 0.0;
            }
            let gauge = kc.gauge(&z).unwrap_or(f64::INFINITY);
            if !gauge.is_finite() || gauge == 0.0 {
                return 0.0;
            }
            fx * fy * gauge.powf(alpha - nf)
        },
        spec,
    )?;
    Ok((vol * mean, vol * stderr))
}

/// Normalized moment-ratio profile with omega and phi descriptors.
#[derive(Debug, Clone)]
pub struct ZetaProfile {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
}

/// zeta(alpha) for a decreasing weight omega and a gauge-like phi
/// (phi(0) = 0, phi and phi(t)/t non-decreasing):
///
///   alpha > 0:  ( int t^{a-1} omega(phi(t)) / int t^{a-1} omega(t) )^{1/a}
///   alpha = 0:  exp( int (omega(phi(t)) - omega(t)) / (t omega(0)) dt )
///   alpha < 0:  the same ratio with omega - omega(0) in both integrals.
///
/// The profile is non-increasing in alpha; hypotheses are validated by
/// sampling on a logarithmic grid.
pub fn zeta_profile<W, P>(
    omega: W,
    phi: P,
    alphas: &[f64],
    spec: &QuadratureSpec,
) -> Result<ZetaProfile>
where
    W: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    validate_zeta_inputs(&omega, &phi)?;
    let w0 = omega(0.0);
    let mut values = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(alpha > -1.0) {
            return Err(HlsError::PreconditionFailed(
                "zeta profile needs alpha > -1".into(),
            ));
        }
        let v = if alpha == 0.0 {
            let abs_tol = spec.abs_tol;
            let num = integrate_powerweight_detailed(
                |t| {
                    let diff = omega(phi(t)) - omega(t);
                    if diff.abs() < abs_tol {
                        0.0
                    } else {
                        diff / (t * w0)
                    }
                },
                1.0,
                None,
                spec,
            )?;
            ensure_converged(&num)?;
            num.value.exp()
        } else {
            let g0 = if alpha < 0.0 { Some(w0) } else { None };
            let num =
                integrate_powerweight_detailed(|t| omega(phi(t)), alpha, g0, spec)?;
            let den = integrate_powerweight_detailed(|t| omega(t), alpha, g0, spec)?;
            ensure_converged(&num)?;
            ensure_converged(&den)?;
            (num.value / den.value).powf(1.0 / alpha)
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(HlsError::NonFinite(format!("zeta({alpha})")));
        }
        values.push(v);
    }
    Ok(ZetaProfile {
        alphas: alphas.to_vec(),
        values,
    })
}

fn ensure_converged(out: &crate::numerics::QuadOutcome) -> Result<()> {
    if out.divergent {
        return Err(HlsError::DivergentIntegral("zeta integral".into()));
    }
    if !out.converged {
        return Err(HlsError::NonConvergent("zeta integral".into()));
    }
    Ok(())
}

fn validate_zeta_inputs<W: Fn(f64) -> f64, P: Fn(f64) -> f64>(omega: &W, phi: &P) -> Result<()> {
    if phi(0.0).abs() > 1e-9 {
        return Err(HlsError::AssumptionViolated("phi(0) must be 0".into()));
    }
    let samples: Vec<f64> = (0..64)
        .map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 63.0))
        .collect();
    let mut prev_phi = 0.0;
    let mut prev_ratio = f64::NEG_INFINITY;
    let mut prev_omega = f64::INFINITY;
    for &t in &samples {
        let p = phi(t);
        let w = omega(t);
        if p < prev_phi - 1e-9 * (1.0 + p.abs()) {
            return Err(HlsError::AssumptionViolated(
                "phi must be non-decreasing".into(),
            ));
        }
        let ratio = p / t;
        if ratio < prev_ratio - 1e-9 * (1.0 + ratio.abs()) {
            return Err(HlsError::AssumptionViolated(
                "phi(t)/t must be non-decreasing".into(),
            ));
        }
        if w > prev_omega + 1e-9 * (1.0 + w.abs()) {
            return Err(HlsError::AssumptionViolated(
                "omega must be decreasing".into(),
            ));
        }
        prev_phi = p;
        prev_ratio = ratio;
        prev_omega = w;
    }
    Ok(())
}

/// n tilde V_alpha(K, H) evaluated on H's own grid; K is any star body.
pub fn functional_against_body(
    k: &StarBody,
    h: &HlsBodyResult,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let n = k.dimension() as f64;
    let v = dual_mixed_volume(k, &h.body, h.alpha, spec)?;
    if !v.finite {
        return Err(HlsError::NonFinite("anisotropic functional".into()));
    }
    Ok(n * v.value)
}

/// Picks the grid direction closest to `target` and returns its index.
pub fn nearest_grid_direction(grid: &SphereGrid, target: &[f64]) -> usize {
    let mut best = 0;
    let mut best_dot = f64::NEG_INFINITY;
    for i in 0..grid.len() {
        let d = dot(grid.dir(i), target);
        if d > best_dot {
            best_dot = d;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sphere_grid;
    use statrs::function::gamma::gamma;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn grid(n: usize, res: usize) -> Arc<SphereGrid> {
        Arc::new(sphere_grid(n, res))
    }

    #[test]
    fn interval_indicator_body_beta_oracle() {
        // rho^{1/2} = B(1/2, 2) = 4/3, so rho = 16/9
        let sp = spec();
        let f = TestFunction::indicator(StarBody::unit_cube(1));
        let h = hls_body(&f, 0.5, &grid(1, 1), &sp).unwrap();
        assert!(h.all_converged());
        let radii = h.body.sampled_radii().unwrap();
        for r in radii {
            assert!((r - 16.0 / 9.0).abs() < 1e-8, "{r}");
        }
    }

    #[test]
    fn simplex_exponential_body_gamma_oracle() {
        let sp = spec();
        let f = TestFunction::simplex_exponential(1);
        for alpha in [0.5, 1.0, 2.0] {
            let h = hls_body(&f, alpha, &grid(1, 1), &sp).unwrap();
            let expect = (gamma(alpha) / 2.0).powf(1.0 / alpha);
            let radii = h.body.sampled_radii().unwrap();
            for r in radii {
                assert!(
                    (r - expect).abs() < 1e-7 * expect,
                    "alpha={alpha}: {r} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn cube_body_volume_identity_at_alpha_n() {
        // vol(H_n f) = ||f||_1^2 / n for the unit square
        let sp = QuadratureSpec {
            sphere_resolution: 128,
            ..spec()
        };
        let f = TestFunction::indicator(StarBody::unit_cube(2));
        let h = hls_body(&f, 2.0, &grid(2, 128), &sp).unwrap();
        let vol = h.body.volume(&sp).unwrap();
        assert!((vol - 0.5).abs() < 1e-3 * 0.5, "{vol}");
    }

    #[test]
    fn radially_symmetric_f_gives_constant_radii() {
        let sp = spec();
        let f = TestFunction::hls_extremal(2, 1.0);
        // constancy is checked against independently computed directions
        let dirs = [
            vec![1.0, 0.0],
            vec![0.6, 0.8],
            vec![-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
        ];
        let mut values = Vec::new();
        for d in &dirs {
            let (rho, diag) = direction_radius(&f, 1.0, d, &sp).unwrap();
            assert!(!diag.flagged());
            values.push(rho);
        }
        let spread = values.iter().fold(0.0f64, |m, v| m.max((v - values[0]).abs()));
        assert!(spread <= sp.rel_tol * values[0], "spread {spread}");
    }

    #[test]
    fn polar_projection_of_interval() {
        // rho = (alpha (1 - 2 alpha))^{1/(2 alpha)} = 1/64 at alpha = 1/4
        let sp = spec();
        let f = TestFunction::indicator(StarBody::unit_cube(1));
        let p = polar_projection_body(&f, 0.25, &grid(1, 1), &sp).unwrap();
        assert!(p.all_converged());
        for r in p.body.sampled_radii().unwrap() {
            assert!((r - 1.0 / 64.0).abs() < 1e-6 / 64.0, "{r}");
        }
    }

    #[test]
    fn radial_mean_body_of_exponential_is_gamma_normalized() {
        let sp = spec();
        let f = TestFunction::simplex_exponential(1);
        let g = grid(1, 1);
        for alpha in [-0.5, 0.5, 1.0, 2.0] {
            let r = radial_mean_function_body(&f, alpha, &g, &sp).unwrap();
            assert!(r.all_converged(), "alpha={alpha}");
            let expect = gamma(alpha + 1.0).powf(1.0 / alpha);
            let radii = r.body.sampled_radii().unwrap();
            assert!(
                (radii[0] - expect).abs() < 2e-6 * expect,
                "alpha={alpha}: {} vs {expect}",
                radii[0]
            );
        }
        // alpha = 0: the integrand vanishes identically along the axis and
        // the radius is exp(-gamma)
        let r0 = radial_mean_function_body(&f, 0.0, &g, &sp).unwrap();
        let expect = (-EULER_GAMMA).exp();
        assert!((r0.body.sampled_radii().unwrap()[0] - expect).abs() < 1e-9);
    }

    #[test]
    fn radial_mean_body_continuous_at_zero() {
        let sp = spec();
        let f = TestFunction::indicator(StarBody::unit_cube(1));
        let g = grid(1, 1);
        let r0 = radial_mean_function_body(&f, 0.0, &g, &sp).unwrap();
        let rp = radial_mean_function_body(&f, 1e-3, &g, &sp).unwrap();
        let rm = radial_mean_function_body(&f, -1e-3, &g, &sp).unwrap();
        let v0 = r0.body.sampled_radii().unwrap()[0];
        for r in [&rp, &rm] {
            let v = r.body.sampled_radii().unwrap()[0];
            assert!((v - v0).abs() < 1e-3 * v0, "{v} vs {v0}");
        }
    }

    #[test]
    fn anisotropic_functional_interval_oracle() {
        // iint |x-y|^{-1/2} over the unit square = 2/(a(a+1)) with a = 1/2
        let sp = spec();
        let f = TestFunction::indicator(StarBody::unit_cube(1));
        let v = anisotropic_hls_functional(&f, &StarBody::ball(1, 1.0), 0.5, &grid(1, 1), &sp)
            .unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-7, "{v}");
    }

    #[test]
    fn anisotropic_functional_scaling_in_k() {
        let sp = spec();
        let f = TestFunction::simplex_exponential(2);
        let g = grid(2, 64);
        let base =
            anisotropic_hls_functional(&f, &StarBody::ball(2, 1.0), 1.0, &g, &sp).unwrap();
        let doubled =
            anisotropic_hls_functional(&f, &StarBody::ball(2, 2.0), 1.0, &g, &sp).unwrap();
        // gauge of 2K scales by 1/2, so the functional scales by 2^{n-alpha}
        assert!((doubled - 2.0 * base).abs() < 1e-9 * base);
    }

    #[test]
    fn anisotropic_functional_against_direct_mc() {
        let sp = QuadratureSpec {
            mc_samples: 600_000,
            ..spec()
        };
        let f = TestFunction::indicator(StarBody::unit_cube(1));
        let k = StarBody::ball(1, 1.0);
        let quad = anisotropic_hls_functional(&f, &k, 0.75, &grid(1, 1), &sp).unwrap();
        let (mc, stderr) = anisotropic_hls_mc(&f, &k, 0.75, &sp).unwrap();
        assert!(
            (quad - mc).abs() <= 3.0 * stderr,
            "{quad} vs {mc} +- {stderr}"
        );
    }

    #[test]
    fn optimal_body_is_the_hls_body_dilate() {
        // among normalized bodies the H-body dilate maximizes the
        // functional for alpha < n and minimizes it for alpha > n
        let sp = spec();
        let f = TestFunction::simplex_exponential(2);
        let g = grid(2, 96);
        for (alpha, maximize) in [(1.0, true), (3.0, false)] {
            let h = hls_body(&f, alpha, &g, &sp).unwrap();
            let omega2 = std::f64::consts::PI;
            let mut candidates: Vec<(&str, StarBody)> = vec![
                ("ball", StarBody::ball(2, 1.0)),
                ("cross", StarBody::cross_polytope(2)),
            ];
            let hv = h.body.volume(&sp).unwrap();
            let hscale = (omega2 / hv).powf(0.5);
            let scaled_h = StarBody::linear_image(
                crate::starbody::LinearMap::scaling(2, &[hscale, hscale]).unwrap(),
                h.body.clone(),
            );
            candidates.push(("h-dilate", scaled_h));
            let mut best: Option<(&str, f64)> = None;
            for (name, k) in &candidates {
                let vol = k.volume(&sp).unwrap();
                let s = (omega2 / vol).powf(0.5);
                let kn = StarBody::linear_image(
                    crate::starbody::LinearMap::scaling(2, &[s, s]).unwrap(),
                    k.clone(),
                );
                let val = functional_against_body(&kn, &h, &sp).unwrap();
                let better = match &best {
                    None => true,
                    Some((_, b)) => {
                        if maximize {
                            val > *b
                        } else {
                            val < *b
                        }
                    }
                };
                if better {
                    best = Some((name, val));
                }
            }
            assert_eq!(best.unwrap().0, "h-dilate", "alpha={alpha}");
        }
    }

    #[test]
    fn affine_equivariance_of_volume() {
        // vol(H_alpha (f o phi^{-1})) = vol(H_alpha f) for volume-preserving phi
        let sp = spec();
        let g = grid(2, 128);
        let f = TestFunction::simplex_exponential(2);
        let base = hls_body(&f, 1.0, &g, &sp).unwrap().body.volume(&sp).unwrap();
        let shear = crate::starbody::LinearMap::new(2, &[1.0, 0.7, 0.0, 1.0]).unwrap();
        let sheared_simplex =
            StarBody::linear_image(shear, StarBody::simplex(2));
        let fs = TestFunction::SimplexExponential {
            a: 1.0,
            x0: vec![0.0, 0.0],
            simplex: sheared_simplex,
        };
        let sheared = hls_body(&fs, 1.0, &g, &sp).unwrap().body.volume(&sp).unwrap();
        assert!(
            (base - sheared).abs() < 1e-3 * base,
            "{base} vs {sheared}"
        );
    }

    #[test]
    fn zeta_constant_for_linear_phi() {
        let sp = spec();
        let alphas = [-0.5, -0.1, 0.0, 0.5, 1.0, 2.0];
        let z = zeta_profile(|t| (-t).exp(), |t| 2.0 * t, &alphas, &sp).unwrap();
        for v in &z.values {
            assert!((v - 0.5).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn zeta_for_exponential_profile_is_one() {
        let sp = spec();
        let f = TestFunction::simplex_exponential(2);
        let g0 = autocorrelation(&f, &[0.0, 0.0], &sp).unwrap();
        let fc = f.clone();
        let spc = sp.clone();
        let phi = move |t: f64| {
            let g = autocorrelation(&fc, &[t, 0.0], &spc).unwrap();
            -(g / g0).ln()
        };
        let z = zeta_profile(|t| (-t).exp(), phi, &[0.5, 1.0, 2.0], &sp).unwrap();
        for v in &z.values {
            assert!((v - 1.0).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn zeta_is_decreasing() {
        let sp = spec();
        // omega = e^{-t}, phi(t) = t^2 (phi/t = t increasing)
        let alphas = [-0.5, 0.0, 0.5, 1.0, 2.0, 3.0];
        let z = zeta_profile(|t| (-t).exp(), |t| t * t, &alphas, &sp).unwrap();
        for w in z.values.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-6), "{:?}", z.values);
        }
    }

    #[test]
    fn zeta_rejects_bad_phi() {
        let sp = spec();
        let err = zeta_profile(|t| (-t).exp(), |t| (t - 1.0).max(0.0) + 1.0, &[1.0], &sp)
            .unwrap_err();
        assert!(matches!(err, HlsError::AssumptionViolated(_)));
    }

    #[test]
    fn divergent_direction_is_flagged_not_fatal() {
        // alpha beyond the polynomial decay order diverges
        let sp = spec();
        let f = TestFunction::hls_extremal(1, 0.5);
        // decay order n + alpha = 1.5; choose alpha = 2 > 1.5
        let h = hls_body(&f, 2.0, &grid(1, 1), &sp).unwrap();
        assert!(!h.all_converged());
        assert!(h.flagged_count() > 0);
    }
}
