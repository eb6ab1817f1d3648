//! The autocorrelation functional G f(y) = int f(x) f(x+y) dx and the L^2
//! difference functional D f(y) = int |f(x+y) - f(x)|^2 dx = 2 (G f(0) - G f(y)).
//!
//! Dispatch per family:
//!   - simplex exponentials: closed form (a^2 |det phi| / 2^n) e^{-||phi^{-1} y||_1},
//!   - indicators of axis boxes: products of one-dimensional hat functions,
//!   - indicators of balls and ellipsoids: ball-overlap (lens) volumes,
//!   - s-concave simplex powers on the mean-zero hyperplane:
//!     a (1 - ||y||_1 / 2)_+^{n + 2/s} with a = B(n, 1 + 2/s) / (n-1)!,
//!   - Euclidean-radial families: deterministic zonal-polar quadrature of the
//!     one-dimensional core,
//!   - everything else: direct grid convolution for n <= 2, seeded Monte
//!     Carlo with reported standard error for n >= 3.

use statrs::function::beta::beta_reg;
use statrs::function::gamma::gamma;

use crate::error::{HlsError, Result};
use crate::funcspace::{ProfileKind, TestFunction};
use crate::numerics::{
    box_sampler, box_volume, gauss_legendre_nodes, integrate_powerweight, mc_expectation,
    sphere_surface, unit_ball_volume, QuadratureSpec,
};
use crate::starbody::norm2;

/// Value with an error proxy: 0 for closed forms, a grid-refinement defect
/// for grid convolution, the standard error for Monte Carlo.
#[derive(Debug, Clone, Copy)]
pub struct AutocorrEval {
    pub value: f64,
    pub stderr: f64,
}

/// Decay of t -> G f(t xi) along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    Compact { support_radius: f64 },
    Exponential,
    Polynomial { order: f64 },
}

/// G f(y).
pub fn autocorrelation(f: &TestFunction, y: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    Ok(autocorrelation_with_err(f, y, spec)?.value)
}

/// G f(y) with the numeric-path error proxy.
pub fn autocorrelation_with_err(
    f: &TestFunction,
    y: &[f64],
    spec: &QuadratureSpec,
) -> Result<AutocorrEval> {
    let n = f.dimension();
    if y.len() != n {
        return Err(HlsError::PreconditionFailed(
            "shift dimension mismatch".into(),
        ));
    }
    match f {
        TestFunction::SimplexExponential { a, simplex, .. } => {
            let (map, core) = simplex.peel_linear();
            if !core.is_standard_simplex() {
                return Err(HlsError::PreconditionFailed(
                    "simplex exponential must be built over the standard simplex".into(),
                ));
            }
            let (det, z) = match map {
                Some(m) => (m.det().abs(), m.apply_inverse(y)),
                None => (1.0, y.to_vec()),
            };
            let l1: f64 = z.iter().map(|v| v.abs()).sum();
            let value = a * a * det / 2f64.powi(n as i32) * (-l1).exp();
            Ok(AutocorrEval { value, stderr: 0.0 })
        }
        TestFunction::SConcaveSimplex { n, s } => {
            let l1: f64 = y.iter().map(|v| v.abs()).sum();
            let mean: f64 = y.iter().sum();
            if mean.abs() <= 1e-12 * l1.max(1.0) {
                let value = sconcave_hyperplane_closed_form(*n, *s, l1);
                Ok(AutocorrEval { value, stderr: 0.0 })
            } else if *n <= 2 {
                grid_convolution(f, y, spec)
            } else {
                mc_autocorrelation(f, y, spec)
            }
        }
        TestFunction::Indicator { body } => {
            if let Some(sides) = body.as_axis_box() {
                let mut value = 1.0;
                for (d, yi) in sides.iter().zip(y) {
                    value *= (d - yi.abs()).max(0.0);
                }
                return Ok(AutocorrEval { value, stderr: 0.0 });
            }
            // centered balls (including similarity images) via the lens volume
            if let Some(r) = body.as_ball() {
                let value = lens_volume(n, r, norm2(y));
                return Ok(AutocorrEval { value, stderr: 0.0 });
            }
            // general ellipsoids: map back to the ball
            let (map, core) = body.peel_linear();
            if let (Some(m), Some(r)) = (&map, core.as_ball()) {
                let value =
                    m.det().abs() * lens_volume(n, r, norm2(&m.apply_inverse(y)));
                return Ok(AutocorrEval { value, stderr: 0.0 });
            }
            if n <= 2 {
                grid_convolution(f, y, spec)
            } else {
                mc_autocorrelation(f, y, spec)
            }
        }
        _ => {
            if let Some((profile, map, amp)) = f.euclidean_radial_core() {
                let (det, arg) = match &map {
                    Some(m) => (m.det().abs(), norm2(&m.apply(y))),
                    None => (1.0, norm2(y)),
                };
                let value = amp * amp / det * radial_autocorr(&profile, n, arg, spec)?;
                return Ok(AutocorrEval { value, stderr: 0.0 });
            }
            if n <= 2 {
                grid_convolution(f, y, spec)
            } else {
                mc_autocorrelation(f, y, spec)
            }
        }
    }
}

/// Autocorrelation of (1 - ||x||_{Delta_n})_+^{1/s} on the hyperplane
/// y_1 + ... + y_n = 0.
pub fn sconcave_hyperplane_closed_form(n: usize, s: f64, l1_norm: f64) -> f64 {
    let nf = n as f64;
    let a = beta_fn(nf, 1.0 + 2.0 / s) / gamma(nf);
    let base = 1.0 - 0.5 * l1_norm;
    if base <= 0.0 {
        0.0
    } else {
        a * base.powf(nf + 2.0 / s)
    }
}

fn beta_fn(a: f64, b: f64) -> f64 {
    gamma(a) * gamma(b) / gamma(a + b)
}

/// Volume of the intersection of two n-balls of radius r at center distance d.
pub fn lens_volume(n: usize, r: f64, d: f64) -> f64 {
    if d >= 2.0 * r {
        return 0.0;
    }
    if d <= 0.0 {
        return unit_ball_volume(n) * r.powi(n as i32);
    }
    // two equal spherical caps of height h = r - d/2
    let h = r - 0.5 * d;
    let x = ((2.0 * r * h - h * h) / (r * r)).clamp(0.0, 1.0);
    let cap = 0.5 * unit_ball_volume(n) * r.powi(n as i32) * beta_reg(0.5 * (n as f64 + 1.0), 0.5, x);
    2.0 * cap
}

/// G_h(r) = int h(|x|) h(|x + r e_1|) dx for a radial core h, reduced to a
/// radial integral with a zonal inner integral over the sphere.
pub(crate) fn radial_autocorr(
    h: &ProfileKind,
    n: usize,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let r = r.abs();
    if let Some(rs) = h.support_radius() {
        if r >= 2.0 * rs {
            return Ok(0.0);
        }
    }
    if let ProfileKind::InversePower { .. } = h {
        // far tail: the mass concentrates near the two profile centers, so
        // G(r) = 2 ||h||_{L^1} h(r) (1 + O(1/r)). The asymptotic takes over
        // through a smooth ramp; a hard switch would leave a ~1e-4 relative
        // jump that outer adaptive quadratures grind against.
        const ASYM_LO: f64 = 1e4;
        const ASYM_HI: f64 = 2e4;
        if r >= ASYM_LO {
            let hc = h.clone();
            let radial = integrate_powerweight(move |t| hc.eval(t), n as f64, None, spec)?;
            let asym = 2.0 * sphere_surface(n) * radial * h.eval(r);
            if r >= ASYM_HI {
                return Ok(asym);
            }
            let u = (r - ASYM_LO) / (ASYM_HI - ASYM_LO);
            let w = u * u * (3.0 - 2.0 * u);
            let exact = radial_autocorr_exact(h, n, r, spec)?;
            return Ok((1.0 - w) * exact + w * asym);
        }
    }
    radial_autocorr_exact(h, n, r, spec)
}

fn radial_autocorr_exact(
    h: &ProfileKind,
    n: usize,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n == 1 {
        let h1 = h.clone();
        let h2 = h.clone();
        return integrate_powerweight(
            move |x| h1.eval(x) * (h2.eval(x + r) + h2.eval((x - r).abs())),
            1.0,
            None,
            spec,
        );
    }
    // inner zonal integral: surf(S^{n-2}) int_0^pi h(sqrt(rho^2+r^2+2 rho r cos t)) sin^{n-2} t dt
    let zonal_order = 64;
    let gl = gauss_legendre_nodes(zonal_order);
    let surf = sphere_surface(n - 1);
    let nexp = (n as i32) - 2;
    let hz = h.clone();
    let zonal = move |rho: f64| {
        let mut acc = 0.0;
        for (x, w) in gl.0.iter().zip(&gl.1) {
            // t = pi (x+1)/2
            let t = std::f64::consts::FRAC_PI_2 * (x + 1.0);
            let c = t.cos();
            let s = t.sin();
            let dist2 = rho * rho + r * r + 2.0 * rho * r * c;
            let dist = dist2.max(0.0).sqrt();
            acc += w * hz.eval(dist) * s.powi(nexp);
        }
        surf * std::f64::consts::FRAC_PI_2 * acc
    };
    let houter = h.clone();
    integrate_powerweight(
        move |rho| houter.eval(rho) * zonal(rho),
        n as f64,
        None,
        spec,
    )
}

/// Deterministic direct-sum convolution over a midpoint grid (n <= 2).
/// Continuous one-dimensional functions take an adaptive overlap integral
/// instead (far cheaper at equal accuracy).
fn grid_convolution(f: &TestFunction, y: &[f64], spec: &QuadratureSpec) -> Result<AutocorrEval> {
    let n = f.dimension();
    debug_assert!(n <= 2);
    let bounds = integration_box(f)?;
    if n == 1 && !matches!(f, TestFunction::Indicator { .. }) {
        let (lo, hi) = bounds[0];
        let a = lo.max(lo - y[0]);
        let b = hi.min(hi - y[0]);
        if b <= a {
            return Ok(AutocorrEval {
                value: 0.0,
                stderr: 0.0,
            });
        }
        let fy = y[0];
        let integrand = |x: f64| {
            let v = f.eval(&[x]);
            if v == 0.0 {
                0.0
            } else {
                v * f.eval(&[x + fy])
            }
        };
        let rough = crate::numerics::adaptive_integral(integrand, a, b, 1e-2, spec.radial_nodes, 60)?;
        let target = (spec.rel_tol * rough.0.abs()).max(spec.abs_tol);
        let (value, est, _) =
            crate::numerics::adaptive_integral(integrand, a, b, target, spec.radial_nodes, 60)?;
        return Ok(AutocorrEval { value, stderr: est });
    }
    let cells = if n == 1 { 1 << 16 } else { 1 << 10 };
    let coarse = grid_convolution_pass(f, y, &bounds, cells / 2);
    let fine = grid_convolution_pass(f, y, &bounds, cells);
    let _ = spec;
    Ok(AutocorrEval {
        value: fine,
        stderr: (fine - coarse).abs(),
    })
}

fn grid_convolution_pass(f: &TestFunction, y: &[f64], bounds: &[(f64, f64)], cells: usize) -> f64 {
    let n = y.len();
    let mut acc = 0.0;
    if n == 1 {
        let (lo, hi) = bounds[0];
        let h = (hi - lo) / cells as f64;
        for i in 0..cells {
            let x = lo + h * (i as f64 + 0.5);
            let v = f.eval(&[x]);
            if v != 0.0 {
                acc += v * f.eval(&[x + y[0]]);
            }
        }
        acc * h
    } else {
        let (lo0, hi0) = bounds[0];
        let (lo1, hi1) = bounds[1];
        let h0 = (hi0 - lo0) / cells as f64;
        let h1 = (hi1 - lo1) / cells as f64;
        for i in 0..cells {
            let x0 = lo0 + h0 * (i as f64 + 0.5);
            for j in 0..cells {
                let x1 = lo1 + h1 * (j as f64 + 0.5);
                let v = f.eval(&[x0, x1]);
                if v != 0.0 {
                    acc += v * f.eval(&[x0 + y[0], x1 + y[1]]);
                }
            }
        }
        acc * h0 * h1
    }
}

/// Seeded Monte Carlo fallback over a bounding box of the support.
fn mc_autocorrelation(
    f: &TestFunction,
    y: &[f64],
    spec: &QuadratureSpec,
) -> Result<AutocorrEval> {
    let bounds = integration_box(f)?;
    let vol = box_volume(&bounds);
    let n = f.dimension();
    let fy = y.to_vec();
    let fc = f.clone();
    let (mean, stderr) = mc_expectation(
        n,
        box_sampler(bounds),
        move |x| {
            let v = fc.eval(x);
            if v == 0.0 {
                return 0.0;
            }
            let shifted: Vec<f64> = x.iter().zip(&fy).map(|(a, b)| a + b).collect();
            v * fc.eval(&shifted)
        },
        spec,
    )?;
    Ok(AutocorrEval {
        value: vol * mean,
        stderr: vol * stderr,
    })
}

/// Box that carries the integral mass of f (exact for compact supports,
/// exponentially safe for the exponential family).
pub(crate) fn integration_box(f: &TestFunction) -> Result<Vec<(f64, f64)>> {
    let n = f.dimension();
    match f {
        TestFunction::Indicator { body } => {
            let mut out = Vec::with_capacity(n);
            for d in 0..n {
                let mut e = vec![0.0; n];
                e[d] = 1.0;
                let hi = body.support_value(&e);
                e[d] = -1.0;
                let lo = -body.support_value(&e);
                out.push((lo - 1e-9, hi + 1e-9));
            }
            Ok(out)
        }
        TestFunction::SConcaveSimplex { .. } => Ok(vec![(0.0, 1.0); n]),
        TestFunction::SimplexExponential { x0, simplex, .. } => {
            let r = 42.0 * simplex.bounding_radius();
            Ok(x0.iter().map(|c| (*c, c + r)).collect())
        }
        TestFunction::CustomRadialDecreasing { profile, .. } => {
            let r = profile.support_radius();
            Ok(vec![(-r, r); n])
        }
        TestFunction::HlsExtremal { .. } => Err(HlsError::PreconditionFailed(
            "no finite integration box for polynomial tails; use the radial core".into(),
        )),
    }
}

/// One-dimensional trace of the autocorrelation along a unit direction.
pub struct AutocorrProfile {
    f: TestFunction,
    direction: Vec<f64>,
    spec: QuadratureSpec,
    pub g0: f64,
    pub decay: DecayClass,
}

impl AutocorrProfile {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let y: Vec<f64> = self.direction.iter().map(|d| d * t).collect();
        autocorrelation(&self.f, &y, &self.spec)
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
}

/// Packages t -> G f(t xi) with its decay class and the value at the origin.
pub fn autocorr_profile(
    f: &TestFunction,
    xi: &[f64],
    spec: &QuadratureSpec,
) -> Result<AutocorrProfile> {
    let nrm = norm2(xi);
    if (nrm - 1.0).abs() > 1e-9 {
        return Err(HlsError::PreconditionFailed(
            "direction must be a unit vector".into(),
        ));
    }
    let g0 = autocorrelation(f, &vec![0.0; f.dimension()], spec)?;
    let decay = decay_class(f, xi);
    Ok(AutocorrProfile {
        f: f.clone(),
        direction: xi.to_vec(),
        spec: spec.clone(),
        g0,
        decay,
    })
}

fn decay_class(f: &TestFunction, xi: &[f64]) -> DecayClass {
    match f {
        TestFunction::Indicator { body } => {
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            DecayClass::Compact {
                support_radius: body.support_value(xi) + body.support_value(&neg),
            }
        }
        TestFunction::SConcaveSimplex { n, .. } => {
            let simplex = crate::starbody::StarBody::simplex(*n);
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            DecayClass::Compact {
                support_radius: simplex.support_value(xi) + simplex.support_value(&neg),
            }
        }
        TestFunction::SimplexExponential { .. } => DecayClass::Exponential,
        TestFunction::HlsExtremal { n, alpha, .. } => DecayClass::Polynomial {
            order: *n as f64 + alpha,
        },
        TestFunction::CustomRadialDecreasing { profile, .. } => DecayClass::Compact {
            support_radius: 2.0 * profile.support_radius(),
        },
    }
}

/// D f(y) = int |f(x+y) - f(x)|^2 dx via the identity D = 2 (G(0) - G(y)).
pub fn l2_difference(f: &TestFunction, y: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let zero = vec![0.0; f.dimension()];
    let g0 = autocorrelation(f, &zero, spec)?;
    let gy = autocorrelation(f, y, spec)?;
    Ok((2.0 * (g0 - gy)).max(0.0))
}

/// Direct Monte Carlo evaluation of D f(y) for the self-check mode.
pub fn l2_difference_mc(
    f: &TestFunction,
    y: &[f64],
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let mut bounds = integration_box(f)?;
    // widen so that both x and x+y ranges are covered
    for (b, yi) in bounds.iter_mut().zip(y) {
        if *yi > 0.0 {
            b.0 -= yi;
        } else {
            b.1 -= yi;
        }
    }
    let vol = box_volume(&bounds);
    let n = f.dimension();
    let fy = y.to_vec();
    let fc = f.clone();
    let (mean, stderr) = mc_expectation(
        n,
        box_sampler(bounds),
        move |x| {
            let shifted: Vec<f64> = x.iter().zip(&fy).map(|(a, b)| a + b).collect();
            let d = fc.eval(&shifted) - fc.eval(x);
            d * d
        },
        spec,
    )?;
    Ok((vol * mean, vol * stderr))
}
