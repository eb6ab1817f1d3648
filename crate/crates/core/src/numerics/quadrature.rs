//! Power-weighted half-line integrals.
//!
//! The central routine evaluates
//!   I(alpha) = int_0^inf t^{alpha-1} g(t) dt           for alpha > 0,
//!   I(alpha) = int_0^inf t^{alpha-1} (g(t) - g(0)) dt  for -1 < alpha < 0,
//! the second line being the analytic continuation of the first across the
//! pole at alpha = 0. The continuation is computed through the split
//!   I = int_0^t0 t^{a-1}(g - g0) dt + int_t0^inf t^{a-1} g dt + g0 t0^a / a,
//! whose value is independent of the split point t0.
//!
//! Half-line tails are mapped through the rational substitution u = t/(1+t)
//! and truncated at `tail_cut`; algebraic endpoint singularities t^{alpha-1}
//! are removed by a power substitution t = v^m before adaptive
//! Gauss-Legendre refinement.

use super::gauss::gauss_legendre;
use super::QuadratureSpec;
use crate::error::{HlsError, Result};

/// Result of one half-line integration with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub est_error: f64,
    pub converged: bool,
    pub divergent: bool,
}

impl QuadOutcome {
    fn divergent() -> Self {
        QuadOutcome {
            value: f64::INFINITY,
            est_error: f64::INFINITY,
            converged: false,
            divergent: true,
        }
    }
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Adaptive Gauss-Legendre integration of `f` over [a, b].
///
/// A panel is accepted when the defect against its bisection refinement is
/// below a tolerance proportional to the panel's share of the interval.
/// Returns (value, error estimate, converged flag).
pub fn adaptive_integral<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_target: f64,
    order: usize,
    max_depth: usize,
) -> Result<(f64, f64, bool)> {
    if !(b > a) {
        return Ok((0.0, 0.0, true));
    }
    let gl = gauss_legendre(order.max(4));
    let (nodes, weights) = (&gl.0, &gl.1);
    let total_width = b - a;

    let mut stack: Vec<(f64, f64, f64, usize)> = Vec::with_capacity(64);
    let coarse = gl_panel(&f, a, b, nodes, weights);
    if !coarse.is_finite() {
        return Err(HlsError::NonFinite("integrand produced NaN/inf".into()));
    }
    stack.push((a, b, coarse, 0));

    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut forced = 0.0;
    while let Some((pa, pb, pcoarse, depth)) = stack.pop() {
        let mid = 0.5 * (pa + pb);
        let left = gl_panel(&f, pa, mid, nodes, weights);
        let right = gl_panel(&f, mid, pb, nodes, weights);
        if !(left.is_finite() && right.is_finite()) {
            return Err(HlsError::NonFinite("integrand produced NaN/inf".into()));
        }
        let refined = left + right;
        let defect = (refined - pcoarse).abs();
        let local_tol = abs_target * ((pb - pa) / total_width).max(1e-300);
        if defect <= local_tol || (pb - pa) < 1e-15 * total_width {
            value += refined;
            est_error += defect;
        } else if depth >= max_depth {
            value += refined;
            est_error += defect;
            forced += defect;
        } else {
            stack.push((pa, mid, left, depth + 1));
            stack.push((mid, pb, right, depth + 1));
        }
        if value.abs() > 1e250 {
            return Err(HlsError::DivergentIntegral(
                "partial sums exceed 1e250".into(),
            ));
        }
    }
    let converged = forced == 0.0 || est_error <= 10.0 * abs_target;
    Ok((value, est_error, converged))
}

/// int_{t_lo}^{t_hi} t^{alpha-1} f(t) dt where f(t) ~ t^vanish near 0.
///
/// The substitution t = v^m with m chosen so that the transformed integrand
/// vanishes at least quadratically removes the algebraic singularity.
fn graded_power_integral<F: Fn(f64) -> f64>(
    f: &F,
    alpha: f64,
    vanish: f64,
    t_lo: f64,
    t_hi: f64,
    abs_target: f64,
    order: usize,
) -> Result<(f64, f64, bool)> {
    let eff = alpha + vanish;
    debug_assert!(eff > 0.0);
    let m = (3.0 / eff).ceil().max(1.0);
    let mi = m as i32;
    let v_lo = if t_lo > 0.0 { t_lo.powf(1.0 / m) } else { 0.0 };
    let v_hi = t_hi.powf(1.0 / m);
    let expo = m * alpha - 1.0;
    let transformed = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let t = v.powi(mi);
        let w = m * v.powf(expo);
        let fv = f(t);
        if fv == 0.0 {
            0.0
        } else {
            w * fv
        }
    };
    adaptive_integral(transformed, v_lo, v_hi, abs_target, order, 60)
}

/// int_0^{t_lin} t^{alpha-1} (g(t) - g0) dt for a short head interval, via a
/// quadratic fit to g - g0.
///
/// Near zero the subtraction loses all significant bits once g(t) - g0 drops
/// below machine epsilon times g0; for alpha close to -1 that region still
/// carries mass of order t^{alpha+1}, so it is integrated in closed form from
/// a two-node fit g(t) - g0 = d1 t + d2 t^2 + O(t^3) instead of pointwise.
fn continuation_head<F: Fn(f64) -> f64>(g: &F, g0: f64, alpha: f64, t_lin: f64) -> f64 {
    let y1 = g(t_lin) - g0;
    let y2 = g(0.5 * t_lin) - g0;
    let d1 = (4.0 * y2 - y1) / t_lin;
    let d2 = (2.0 * y1 - 4.0 * y2) / (t_lin * t_lin);
    d1 * t_lin.powf(alpha + 1.0) / (alpha + 1.0) + d2 * t_lin.powf(alpha + 2.0) / (alpha + 2.0)
}

/// int_{t_lo}^{tail_cut} t^{alpha-1} g(t) dt through u = t/(1+t).
fn tail_power_integral<F: Fn(f64) -> f64>(
    g: &F,
    alpha: f64,
    t_lo: f64,
    tail_cut: f64,
    abs_target: f64,
    order: usize,
) -> Result<(f64, f64, bool)> {
    let u_lo = t_lo / (1.0 + t_lo);
    let u_hi = tail_cut / (1.0 + tail_cut);
    let integrand = |u: f64| {
        let om = 1.0 - u;
        let t = u / om;
        t.powf(alpha - 1.0) * g(t) / (om * om)
    };
    adaptive_integral(integrand, u_lo, u_hi, abs_target, order, 60)
}

/// Classifies the weighted integrand at the truncation point: negligible,
/// decaying-but-not-negligible (undersized cut), or growing (divergent).
enum TailState {
    Negligible,
    Undersized,
    Growing,
}

fn tail_state<F: Fn(f64) -> f64>(g: &F, alpha: f64, spec: &QuadratureSpec) -> TailState {
    let t = spec.tail_cut;
    let at_cut = (t.powf(alpha - 1.0) * g(t)).abs();
    if at_cut <= spec.abs_tol {
        return TailState::Negligible;
    }
    let half = 0.5 * t;
    let at_half = (half.powf(alpha - 1.0) * g(half)).abs();
    if at_cut >= at_half {
        TailState::Growing
    } else {
        TailState::Undersized
    }
}

/// Power-weighted half-line integral with analytic continuation for
/// -1 < alpha < 0. See the module docs for the exact value computed.
///
/// For alpha < 0 the value g(0) must be supplied as `g0`.
pub fn integrate_powerweight<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    g0: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let out = integrate_powerweight_detailed(g, alpha, g0, spec)?;
    if out.divergent {
        return Err(HlsError::DivergentIntegral(format!(
            "t^{{{:.3}-1}} g(t) does not decay below abs_tol by t = {:.3e}",
            alpha, spec.tail_cut
        )));
    }
    if !out.converged {
        return Err(HlsError::NonConvergent(format!(
            "estimated error {:.3e} above tolerance",
            out.est_error
        )));
    }
    Ok(out.value)
}

/// As [`integrate_powerweight`], but reports diagnostics instead of failing
/// on divergence or slow convergence. NaN from the integrand is still an
/// error.
pub fn integrate_powerweight_detailed<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    g0: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<QuadOutcome> {
    integrate_powerweight_split(g, alpha, g0, 1.0, spec)
}

/// Continuation integral with an explicit split point t0; the result is
/// independent of t0 up to quadrature error, which the tests exercise.
pub fn integrate_powerweight_split<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    g0: Option<f64>,
    t0: f64,
    spec: &QuadratureSpec,
) -> Result<QuadOutcome> {
    spec.validate()?;
    if !(alpha > -1.0) || alpha == 0.0 {
        return Err(HlsError::PreconditionFailed(format!(
            "alpha must lie in (-1,0) or (0,inf), got {alpha}"
        )));
    }
    if alpha < 0.0 && g0.is_none() {
        return Err(HlsError::PreconditionFailed(
            "g(0) required for the continuation regime alpha < 0".into(),
        ));
    }
    if !(t0 > 0.0 && t0 < spec.tail_cut) {
        return Err(HlsError::PreconditionFailed(
            "split point must satisfy 0 < t0 < tail_cut".into(),
        ));
    }

    match tail_state(&g, alpha, spec) {
        TailState::Negligible => {}
        TailState::Undersized => {
            return Ok(QuadOutcome {
                value: f64::NAN,
                est_error: f64::INFINITY,
                converged: false,
                divergent: false,
            })
        }
        TailState::Growing => return Ok(QuadOutcome::divergent()),
    }

    let order = spec.radial_nodes;
    if alpha > 0.0 {
        let split = t0.min(0.5 * spec.tail_cut);
        // Rough scale for the relative target.
        let rough_low = graded_power_integral(&g, alpha, 0.0, 0.0, split, 1e-2, order)?;
        let rough_high = tail_power_integral(&g, alpha, split, spec.tail_cut, 1e-2, order)?;
        let scale = rough_low.0.abs() + rough_high.0.abs();
        let target = (spec.rel_tol * scale).max(spec.abs_tol);
        let (v1, e1, c1) = graded_power_integral(&g, alpha, 0.0, 0.0, split, 0.5 * target, order)?;
        let (v2, e2, c2) =
            tail_power_integral(&g, alpha, split, spec.tail_cut, 0.5 * target, order)?;
        let value = v1 + v2;
        if !value.is_finite() {
            return Err(HlsError::NonFinite("power-weight integral".into()));
        }
        Ok(QuadOutcome {
            value,
            est_error: e1 + e2,
            converged: c1 && c2,
            divergent: false,
        })
    } else {
        let g0 = g0.expect("checked above");
        let sub = |t: f64| g(t) - g0;
        let t_lin = 1e-6 * t0;
        let head = continuation_head(&g, g0, alpha, t_lin);
        let rough_low = graded_power_integral(&sub, alpha, 1.0, t_lin, t0, 1e-2, order)?;
        let rough_high = tail_power_integral(&g, alpha, t0, spec.tail_cut, 1e-2, order)?;
        let boundary = g0 * t0.powf(alpha) / alpha;
        let scale = rough_low.0.abs() + rough_high.0.abs() + boundary.abs();
        let target = (spec.rel_tol * scale).max(spec.abs_tol);
        let (v1, e1, c1) =
            graded_power_integral(&sub, alpha, 1.0, t_lin, t0, 0.5 * target, order)?;
        let (v2, e2, c2) = tail_power_integral(&g, alpha, t0, spec.tail_cut, 0.5 * target, order)?;
        let value = head + v1 + v2 + boundary;
        if !value.is_finite() {
            return Err(HlsError::NonFinite("continuation integral".into()));
        }
        Ok(QuadOutcome {
            value,
            est_error: e1 + e2,
            converged: c1 && c2,
            divergent: false,
        })
    }
}
