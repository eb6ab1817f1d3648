//! Star-shaped sets represented through their radial functions.
//!
//! A closed set K is star-shaped with respect to the origin when it contains
//! the segment [0, x] for each of its points; it is described by the radial
//! function rho_K(x) = sup{ lambda >= 0 : lambda x in K } and the gauge
//! ||x||_K = 1 / rho_K(x). Bodies here are either analytic rules (balls,
//! simplices, cubes, cross-polytopes and linear images of those) or sampled
//! radial profiles on a sphere grid.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{HlsError, Result};
use crate::numerics::{sphere_grid, unit_ball_volume, GridStructure, QuadratureSpec, SphereGrid};

/// Invertible linear map together with its inverse and determinant.
#[derive(Clone)]
pub struct LinearMap {
    mat: DMatrix<f64>,
    inv: DMatrix<f64>,
    det: f64,
}

impl LinearMap {
    pub fn new(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(HlsError::PreconditionFailed(format!(
                "expected {} matrix entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let mat = DMatrix::from_row_slice(n, n, entries);
        let det = mat.determinant();
        if det.abs() < 1e-300 {
            return Err(HlsError::DegenerateBody("singular linear map".into()));
        }
        let inv = mat
            .clone()
            .try_inverse()
            .ok_or_else(|| HlsError::DegenerateBody("singular linear map".into()))?;
        Ok(LinearMap { mat, inv, det })
    }

    pub fn scaling(n: usize, factors: &[f64]) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for (i, f) in factors.iter().enumerate() {
            entries[i * n + i] = *f;
        }
        Self::new(n, &entries)
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.mat, x)
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.inv, x)
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut out = vec![0.0; n];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, xi) in x.iter().enumerate() {
                acc += self.mat[(i, j)] * xi;
            }
            *o = acc;
        }
        out
    }

    /// True when the map is diagonal with the given tolerance.
    pub fn diagonal(&self) -> Option<Vec<f64>> {
        let n = self.mat.nrows();
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.mat[(i, j)];
                if i == j {
                    d.push(v);
                } else if v.abs() > 1e-14 {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// True when the map is a positive multiple of an orthogonal matrix, in
    /// which case the multiple is returned. Such maps send balls to balls.
    pub fn similarity_scale(&self) -> Option<f64> {
        let n = self.mat.nrows();
        let gram = self.mat.transpose() * &self.mat;
        let s2 = gram[(0, 0)];
        if s2 <= 0.0 {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { s2 } else { 0.0 };
                if (gram[(i, j)] - expect).abs() > 1e-12 * s2.max(1.0) {
                    return None;
                }
            }
        }
        Some(s2.sqrt())
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap(det {})", self.det)
    }
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, xj) in x.iter().enumerate() {
            acc += m[(i, j)] * xj;
        }
        *o = acc;
    }
    out
}

#[derive(Clone)]
enum Shape {
    Ball(f64),
    /// Convex hull of the origin and the standard basis vectors.
    Simplex,
    /// { x : |x_1| + ... + |x_n| <= 1 }
    CrossPolytope,
    /// [0, 1]^n
    UnitCube,
    LinearImage {
        map: Arc<LinearMap>,
        inner: Box<StarBody>,
    },
    Sampled {
        grid: Arc<SphereGrid>,
        radii: Arc<Vec<f64>>,
    },
    /// Radial rule evaluated on unit directions, extended by homogeneity.
    RadialRule {
        rule: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        label: &'static str,
    },
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ball(r) => write!(f, "Ball({r})"),
            Shape::Simplex => write!(f, "Simplex"),
            Shape::CrossPolytope => write!(f, "CrossPolytope"),
            Shape::UnitCube => write!(f, "UnitCube"),
            Shape::LinearImage { map, inner } => {
                write!(f, "LinearImage({map:?}, {inner:?})")
            }
            Shape::Sampled { grid, .. } => write!(f, "Sampled({} dirs)", grid.len()),
            Shape::RadialRule { label, .. } => write!(f, "RadialRule({label})"),
        }
    }
}

/// A star-shaped set with an evaluable radial function.
#[derive(Clone, Debug)]
pub struct StarBody {
    n: usize,
    shape: Shape,
}

impl StarBody {
    pub fn ball(n: usize, radius: f64) -> Self {
        assert!(radius >= 0.0);
        StarBody {
            n,
            shape: Shape::Ball(radius),
        }
    }

    /// Simplex with vertices at the origin and the standard basis vectors.
    pub fn simplex(n: usize) -> Self {
        StarBody {
            n,
            shape: Shape::Simplex,
        }
    }

    pub fn cross_polytope(n: usize) -> Self {
        StarBody {
            n,
            shape: Shape::CrossPolytope,
        }
    }

    /// The cube [0, 1]^n (a vertex at the origin).
    pub fn unit_cube(n: usize) -> Self {
        StarBody {
            n,
            shape: Shape::UnitCube,
        }
    }

    pub fn centered_ellipsoid(n: usize, matrix_entries: &[f64]) -> Result<Self> {
        Ok(Self::linear_image(
            LinearMap::new(n, matrix_entries)?,
            StarBody::ball(n, 1.0),
        ))
    }

    pub fn linear_image(map: LinearMap, body: StarBody) -> Self {
        let n = body.n;
        StarBody {
            n,
            shape: Shape::LinearImage {
                map: Arc::new(map),
                inner: Box::new(body),
            },
        }
    }

    pub fn sampled(grid: Arc<SphereGrid>, radii: Vec<f64>) -> Result<Self> {
        if grid.len() != radii.len() {
            return Err(HlsError::PreconditionFailed(
                "radii count must match grid size".into(),
            ));
        }
        if radii.iter().any(|r| !(*r >= 0.0)) {
            return Err(HlsError::PreconditionFailed(
                "radial values must be non-negative".into(),
            ));
        }
        let n = grid.dimension();
        Ok(StarBody {
            n,
            shape: Shape::Sampled {
                grid,
                radii: Arc::new(radii),
            },
        })
    }

    pub fn from_radial_rule<F>(n: usize, label: &'static str, rule: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        StarBody {
            n,
            shape: Shape::RadialRule {
                rule: Arc::new(rule),
                label,
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Radial function rho_K(x); homogeneous of degree -1 in x.
    /// Returns +inf where the ray never leaves K and 0 where K has no
    /// extent in that direction.
    pub fn radial(&self, x: &[f64]) -> Result<f64> {
        let norm = norm2(x);
        if norm == 0.0 || !norm.is_finite() {
            return Err(HlsError::ZeroVector);
        }
        Ok(self.radial_unit_scaled(x, norm))
    }

    fn radial_unit_scaled(&self, x: &[f64], norm: f64) -> f64 {
        match &self.shape {
            Shape::Ball(r) => r / norm,
            Shape::Simplex => {
                let mut s = 0.0;
                for xi in x {
                    if *xi < 0.0 {
                        return 0.0;
                    }
                    s += *xi;
                }
                if s > 0.0 {
                    1.0 / s
                } else {
                    f64::INFINITY
                }
            }
            Shape::CrossPolytope => {
                let s: f64 = x.iter().map(|v| v.abs()).sum();
                if s > 0.0 {
                    1.0 / s
                } else {
                    f64::INFINITY
                }
            }
            Shape::UnitCube => {
                let mut m = 0.0f64;
                for xi in x {
                    if *xi < 0.0 {
                        return 0.0;
                    }
                    m = m.max(*xi);
                }
                if m > 0.0 {
                    1.0 / m
                } else {
                    f64::INFINITY
                }
            }
            Shape::LinearImage { map, inner } => {
                // rho_{phi K}(x) = rho_K(phi^{-1} x)
                let y = map.apply_inverse(x);
                let ny = norm2(&y);
                if ny == 0.0 {
                    return f64::INFINITY;
                }
                inner.radial_unit_scaled(&y, ny)
            }
            Shape::Sampled { grid, radii } => {
                let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
                interpolate_radii(grid, radii, &unit) / norm
            }
            Shape::RadialRule { rule, .. } => {
                let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
                rule(&unit) / norm
            }
        }
    }

    /// Gauge ||x||_K = 1 / rho_K(x), with the 0 <-> inf convention.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        let r = self.radial(x)?;
        if r == 0.0 {
            Ok(f64::INFINITY)
        } else if r.is_infinite() {
            Ok(0.0)
        } else {
            Ok(1.0 / r)
        }
    }

    /// Closed-form volume when the shape admits one.
    pub fn exact_volume(&self) -> Option<f64> {
        match &self.shape {
            Shape::Ball(r) => Some(unit_ball_volume(self.n) * r.powi(self.n as i32)),
            Shape::Simplex => Some(1.0 / factorial(self.n)),
            Shape::CrossPolytope => Some(2f64.powi(self.n as i32) / factorial(self.n)),
            Shape::UnitCube => Some(1.0),
            Shape::LinearImage { map, inner } => {
                inner.exact_volume().map(|v| v * map.det().abs())
            }
            _ => None,
        }
    }

    /// Volume via (1/n) int_{S^{n-1}} rho^n; sampled bodies integrate on
    /// their own grid, analytic ones on a grid from the spec.
    pub fn volume(&self, spec: &QuadratureSpec) -> Result<f64> {
        let grid = self.grid_for_integration(spec);
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..grid.len() {
            let rho = self.radial(grid.dir(i))?;
            if rho.is_infinite() {
                return Err(HlsError::NonFinite(
                    "radial function infinite on a set of positive weight".into(),
                ));
            }
            acc += grid.weight(i) * rho.powi(n as i32);
        }
        Ok(acc / n as f64)
    }

    pub(crate) fn grid_for_integration(&self, spec: &QuadratureSpec) -> Arc<SphereGrid> {
        match &self.shape {
            Shape::Sampled { grid, .. } => grid.clone(),
            _ => Arc::new(sphere_grid(self.n, spec.sphere_resolution)),
        }
    }

    pub fn sampled_grid(&self) -> Option<&SphereGrid> {
        match &self.shape {
            Shape::Sampled { grid, .. } => Some(grid),
            _ => None,
        }
    }

    pub fn sampled_radii(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Sampled { radii, .. } => Some(radii),
            _ => None,
        }
    }

    /// Support function value h_K(eta) = sup{ <x, eta> : x in K } for the
    /// convex standard shapes; estimated from a coarse grid otherwise.
    pub fn support_value(&self, eta: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball(r) => r * norm2(eta),
            Shape::Simplex => eta.iter().fold(0.0f64, |m, v| m.max(*v)),
            Shape::CrossPolytope => eta.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            Shape::UnitCube => eta.iter().map(|v| v.max(0.0)).sum(),
            Shape::LinearImage { map, inner } => inner.support_value(&map.apply_transpose(eta)),
            Shape::Sampled { grid, radii } => {
                let mut m = 0.0f64;
                for i in 0..grid.len() {
                    let d = dot(grid.dir(i), eta);
                    m = m.max(radii[i] * d);
                }
                m
            }
            Shape::RadialRule { rule, .. } => {
                let probe = sphere_grid(self.n, 512);
                let mut m = 0.0f64;
                for i in 0..probe.len() {
                    let xi = probe.dir(i);
                    m = m.max(rule(xi) * dot(xi, eta));
                }
                m
            }
        }
    }

    /// Largest radial value over the sphere; used for bounding boxes.
    pub fn bounding_radius(&self) -> f64 {
        match &self.shape {
            Shape::Ball(r) => *r,
            Shape::Simplex | Shape::UnitCube => (self.n as f64).sqrt().max(1.0),
            Shape::CrossPolytope => 1.0,
            Shape::LinearImage { map, inner } => {
                // crude but safe: operator norm bound via column norms
                let r = inner.bounding_radius();
                let n = self.n;
                let mut bound = 0.0f64;
                for j in 0..n {
                    let mut col = 0.0;
                    for i in 0..n {
                        col += map.mat[(i, j)] * map.mat[(i, j)];
                    }
                    bound += col.sqrt();
                }
                bound * r
            }
            Shape::Sampled { radii, .. } => radii.iter().fold(0.0f64, |m, r| m.max(*r)),
            Shape::RadialRule { rule, .. } => {
                let probe = sphere_grid(self.n, 512);
                (0..probe.len()).fold(0.0f64, |m, i| m.max(rule(probe.dir(i))))
            }
        }
    }

    /// Side lengths when the body is an axis-aligned box [0,d_1]x...x[0,d_n].
    pub fn as_axis_box(&self) -> Option<Vec<f64>> {
        match &self.shape {
            Shape::UnitCube => Some(vec![1.0; self.n]),
            // the one-dimensional simplex is the unit interval
            Shape::Simplex if self.n == 1 => Some(vec![1.0]),
            Shape::Ball(r) if self.n == 1 => {
                // [-r, r] is not anchored at the origin; handled by the
                // interval overlap in autocorrelation instead.
                let _ = r;
                None
            }
            Shape::LinearImage { map, inner } => {
                if let (Some(d), Shape::UnitCube) = (map.diagonal(), &inner.shape) {
                    if d.iter().all(|v| *v > 0.0) {
                        return Some(d);
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Ball radius when the body is a centered ball (possibly via a
    /// similarity linear image).
    pub fn as_ball(&self) -> Option<f64> {
        match &self.shape {
            Shape::Ball(r) => Some(*r),
            Shape::LinearImage { map, inner } => inner
                .as_ball()
                .and_then(|r| map.similarity_scale().map(|s| s * r)),
            _ => None,
        }
    }

    /// Splits off the outermost linear map: returns (map, core body).
    pub fn peel_linear(&self) -> (Option<Arc<LinearMap>>, &StarBody) {
        match &self.shape {
            Shape::LinearImage { map, inner } => (Some(map.clone()), inner),
            _ => (None, self),
        }
    }

    pub fn is_standard_simplex(&self) -> bool {
        matches!(self.shape, Shape::Simplex)
    }

    /// Writes the radial profile as CSV with header dir_1,...,dir_n,rho and
    /// shortest round-trip decimal formatting.
    pub fn write_radial_csv<W: Write>(&self, grid: &SphereGrid, out: &mut W) -> Result<()> {
        let n = self.n;
        let mut header = String::new();
        for i in 1..=n {
            header.push_str(&format!("dir_{i},"));
        }
        header.push_str("rho");
        writeln!(out, "{header}")?;
        for i in 0..grid.len() {
            let d = grid.dir(i);
            let rho = self.radial(d)?;
            let mut row = String::new();
            for v in d {
                row.push_str(&format!("{v},"));
            }
            row.push_str(&format!("{rho}"));
            writeln!(out, "{row}")?;
        }
        Ok(())
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Interpolates sampled radii at a unit direction: exact lookup for n = 1,
/// angular-linear on the circle, bilinear on the n = 3 product grid, and
/// nearest-neighbor in higher dimensions.
fn interpolate_radii(grid: &SphereGrid, radii: &[f64], unit: &[f64]) -> f64 {
    match grid.structure() {
        GridStructure::TwoPoint => {
            if unit[0] >= 0.0 {
                radii[0]
            } else {
                radii[1]
            }
        }
        GridStructure::Circle { resolution } => {
            let res = *resolution;
            let theta = unit[1].atan2(unit[0]).rem_euclid(2.0 * std::f64::consts::PI);
            let pos = theta / (2.0 * std::f64::consts::PI) * res as f64 - 0.5;
            let base = pos.floor();
            let frac = pos - base;
            let k0 = (base.rem_euclid(res as f64)) as usize % res;
            let k1 = (k0 + 1) % res;
            radii[k0] * (1.0 - frac) + radii[k1] * frac
        }
        GridStructure::ProductGl { n_polar, n_azimuth } => {
            let (np, na) = (*n_polar, *n_azimuth);
            let z = unit[2].clamp(-1.0, 1.0);
            let phi = unit[1].atan2(unit[0]).rem_euclid(2.0 * std::f64::consts::PI);
            let gl = crate::numerics::sphere_grid(3, np);
            // polar nodes are the distinct z-values in grid order (rows of
            // length na); reconstruct them from the stored grid directions.
            let _ = gl;
            let mut row_z = Vec::with_capacity(np);
            for row in 0..np {
                row_z.push(grid.dir(row * na)[2]);
            }
            let (r0, r1, tz) = bracket(&row_z, z);
            let dphi = 2.0 * std::f64::consts::PI / na as f64;
            let pos = phi / dphi - 0.5;
            let base = pos.floor();
            let tphi = pos - base;
            let j0 = (base.rem_euclid(na as f64)) as usize % na;
            let j1 = (j0 + 1) % na;
            let v00 = radii[r0 * na + j0];
            let v01 = radii[r0 * na + j1];
            let v10 = radii[r1 * na + j0];
            let v11 = radii[r1 * na + j1];
            let a = v00 * (1.0 - tphi) + v01 * tphi;
            let b = v10 * (1.0 - tphi) + v11 * tphi;
            a * (1.0 - tz) + b * tz
        }
        GridStructure::LowDiscrepancy => {
            let mut best = 0usize;
            let mut best_dot = f64::NEG_INFINITY;
            for i in 0..grid.len() {
                let d = dot(grid.dir(i), unit);
                if d > best_dot {
                    best_dot = d;
                    best = i;
                }
            }
            radii[best]
        }
    }
}

/// Bracketing indices and interpolation weight within a monotone slice.
fn bracket(xs: &[f64], x: f64) -> (usize, usize, f64) {
    let m = xs.len();
    if m == 1 {
        return (0, 0, 0.0);
    }
    let ascending = xs[m - 1] >= xs[0];
    let key = |v: f64| if ascending { v } else { -v };
    let target = key(x);
    let mut lo = 0usize;
    let mut hi = m - 1;
    if target <= key(xs[0]) {
        return (0, 0, 0.0);
    }
    if target >= key(xs[m - 1]) {
        return (m - 1, m - 1, 0.0);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if key(xs[mid]) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let denom = key(xs[hi]) - key(xs[lo]);
    let t = if denom.abs() < 1e-300 {
        0.0
    } else {
        (target - key(xs[lo])) / denom
    };
    (lo, hi, t)
}

/// Dual mixed volume value with its exponent and a finiteness flag.
#[derive(Debug, Clone, Copy)]
pub struct DualMixedVolumeValue {
    pub value: f64,
    pub alpha: f64,
    pub finite: bool,
}

/// tilde V_alpha(K, L) = (1/n) int rho_K^{n-alpha} rho_L^alpha.
///
/// With alpha in (0, n) this is at most V(K)^{(n-alpha)/n} V(L)^{alpha/n},
/// with equality exactly for dilates; for alpha > n the inequality reverses.
pub fn dual_mixed_volume(
    k: &StarBody,
    l: &StarBody,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<DualMixedVolumeValue> {
    if k.dimension() != l.dimension() {
        return Err(HlsError::PreconditionFailed(
            "dual mixed volume requires equal dimensions".into(),
        ));
    }
    let n = k.dimension() as f64;
    if alpha == 0.0 || alpha == n {
        return Err(HlsError::PreconditionFailed(
            "alpha must avoid {0, n}".into(),
        ));
    }
    let grid = if k.sampled_grid().is_some() {
        k.grid_for_integration(spec)
    } else {
        l.grid_for_integration(spec)
    };
    let mut acc = 0.0;
    let mut finite = true;
    for i in 0..grid.len() {
        let d = grid.dir(i);
        let rk = k.radial(d)?;
        let rl = l.radial(d)?;
        let term = powext(rk, n - alpha) * powext(rl, alpha);
        if term.is_nan() {
            return Err(HlsError::NonFinite(
                "indeterminate 0 * inf in dual mixed volume integrand".into(),
            ));
        }
        if term.is_infinite() {
            finite = false;
        } else {
            acc += grid.weight(i) * term;
        }
    }
    let value = if finite { acc / n } else { f64::INFINITY };
    Ok(DualMixedVolumeValue {
        value,
        alpha,
        finite,
    })
}

/// x^p with the star-body conventions 0^negative = inf, inf^negative = 0.
fn powext(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        return 1.0;
    }
    if x == 0.0 {
        if p > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if x.is_infinite() {
        if p > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        x.powf(p)
    }
}

/// Centered ball with the same volume as K.
pub fn schwarz_symmetral_body(k: &StarBody, spec: &QuadratureSpec) -> Result<StarBody> {
    let n = k.dimension();
    let vol = match k.exact_volume() {
        Some(v) => v,
        None => k.volume(spec)?,
    };
    let r = (vol / unit_ball_volume(n)).powf(1.0 / n as f64);
    Ok(StarBody::ball(n, r))
}

/// True when rho_K = c rho_L across the grid for a single c >= 0 within tol,
/// with c the weighted median of the radial ratios. Directions where both
/// radial values are below an absolute floor are ignored.
pub fn is_dilate(k: &StarBody, l: &StarBody, tol: f64) -> Result<bool> {
    if k.dimension() != l.dimension() {
        return Ok(false);
    }
    let spec = QuadratureSpec::default();
    let grid = if k.sampled_grid().is_some() {
        k.grid_for_integration(&spec)
    } else {
        l.grid_for_integration(&spec)
    };
    let floor = 1e-12;
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    let mut rk_all = Vec::with_capacity(grid.len());
    let mut rl_all = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let d = grid.dir(i);
        let rk = k.radial(d)?;
        let rl = l.radial(d)?;
        rk_all.push(rk);
        rl_all.push(rl);
        if rk > floor && rl > floor && rk.is_finite() && rl.is_finite() {
            ratios.push((rk / rl, grid.weight(i)));
        }
    }
    if ratios.is_empty() {
        // both bodies vanish everywhere sampled; degenerate but proportional
        return Ok(true);
    }
    let c = weighted_median(&mut ratios);
    let scale_k = rk_all.iter().cloned().fold(0.0f64, f64::max);
    let scale_l = rl_all.iter().cloned().fold(0.0f64, f64::max);
    let scale = scale_k.max(c * scale_l).max(floor);
    for (rk, rl) in rk_all.iter().zip(&rl_all) {
        if rk.is_infinite() || rl.is_infinite() {
            if rk.is_infinite() != rl.is_infinite() {
                return Ok(false);
            }
            continue;
        }
        if (rk - c * rl).abs() > tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

fn weighted_median(values: &mut [(f64, f64)]) -> f64 {
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN ratios"));
    let total: f64 = values.iter().map(|(_, w)| w).sum();
    let mut acc = 0.0;
    for (v, w) in values.iter() {
        acc += w;
        if acc >= 0.5 * total {
            return *v;
        }
    }
    values[values.len() - 1].0
}

/// Sampled sufficient test of convexity: the gauge must be midpoint-convex
/// on pairs of boundary points, up to a small relative slack that absorbs
/// interpolation error of sampled bodies. Dense pair sampling is only
/// feasible for n <= 3.
pub fn convexity_check(k: &StarBody, spec: &QuadratureSpec) -> Result<bool> {
    let n = k.dimension();
    if n > 3 {
        return Err(HlsError::PreconditionFailed(
            "dense convexity check limited to n <= 3".into(),
        ));
    }
    if n == 1 {
        // every star-shaped subset of the line is an interval
        return Ok(true);
    }
    const TOL: f64 = 1e-3;
    let res = if n == 2 { 192 } else { 14 };
    let grid = sphere_grid(n, res.min(spec.sphere_resolution.max(16)));
    let mut pts: Vec<Vec<f64>> = Vec::new();
    for i in 0..grid.len() {
        let d = grid.dir(i);
        let rho = k.radial(d)?;
        if rho.is_finite() && rho > 1e-12 {
            pts.push(d.iter().map(|v| v * rho).collect());
        }
    }
    let stride = (pts.len() * pts.len() / 40_000).max(1);
    let mut idx = 0usize;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            idx += 1;
            if idx % stride != 0 {
                continue;
            }
            let mid: Vec<f64> = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            if norm2(&mid) < 1e-12 {
                continue;
            }
            let gauge = k.gauge(&mid)?;
            if gauge > 1.0 + TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn unit_ball_radial_is_one() {
        let b = StarBody::ball(3, 1.0);
        let g = sphere_grid(3, 8);
        for i in 0..g.len() {
            assert!((b.radial(g.dir(i)).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn simplex_in_one_dimension_is_unit_interval() {
        let s = StarBody::simplex(1);
        assert_eq!(s.radial(&[1.0]).unwrap(), 1.0);
        assert_eq!(s.radial(&[-1.0]).unwrap(), 0.0);
    }

    #[test]
    fn cross_polytope_diagonal() {
        let b = StarBody::cross_polytope(2);
        let d = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        let expect = 1.0 / (d[0].abs() + d[1].abs());
        assert!((b.radial(&d).unwrap() - expect).abs() < 1e-14);
        assert!((expect - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn radial_homogeneity() {
        let bodies = [
            StarBody::ball(2, 1.5),
            StarBody::unit_cube(2),
            StarBody::simplex(2),
        ];
        let x = [0.3, 0.4];
        for b in &bodies {
            let base = b.radial(&x).unwrap();
            for c in [0.5, 2.0, 10.0] {
                let scaled = b.radial(&[c * x[0], c * x[1]]).unwrap();
                assert!(
                    (scaled * c - base).abs() < 1e-12 * (1.0 + base),
                    "{b:?} c={c}"
                );
            }
        }
    }

    #[test]
    fn gauge_radial_duality() {
        let b = StarBody::unit_cube(2);
        let x = [0.7, 0.2];
        let rho = b.radial(&x).unwrap();
        let gauge = b.gauge(&x).unwrap();
        assert!((rho * gauge - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_area() {
        let b = StarBody::ball(2, 1.0);
        let v = b.volume(&spec()).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-10 * std::f64::consts::PI);
    }

    #[test]
    fn simplex_area_half() {
        let b = StarBody::simplex(2);
        let sp = QuadratureSpec {
            sphere_resolution: 1 << 16,
            rel_tol: 1e-4,
            ..spec()
        };
        let v = b.volume(&sp).unwrap();
        assert!((v - 0.5).abs() < 1e-4 * 0.5, "{v}");
        assert_eq!(b.exact_volume().unwrap(), 0.5);
    }

    #[test]
    fn scaled_ball_volume_in_3d() {
        let b = StarBody::ball(3, 2.0);
        let v = b.volume(&spec()).unwrap();
        let exact = 8.0 * 4.0 * std::f64::consts::PI / 3.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn linear_equivariance_of_volume() {
        let sp = spec();
        let phi = LinearMap::new(2, &[1.2, 0.4, -0.3, 0.9]).unwrap();
        let det = phi.det().abs();
        let ball = StarBody::ball(2, 1.0);
        let img = StarBody::linear_image(phi, ball.clone());
        let v_img = img.volume(&sp).unwrap();
        let v = ball.volume(&sp).unwrap();
        assert!(
            (v_img - det * v).abs() < sp.rel_tol * det * v,
            "{v_img} vs {}",
            det * v
        );
    }

    #[test]
    fn dual_mixed_volume_of_equal_bodies_is_volume() {
        let sp = spec();
        let b = StarBody::ball(2, 1.0);
        for alpha in [0.5, 1.0, 1.7] {
            let v = dual_mixed_volume(&b, &b, alpha, &sp).unwrap();
            assert!(v.finite);
            assert!((v.value - std::f64::consts::PI).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_mixed_volume_concentric_balls() {
        let sp = spec();
        let k = StarBody::ball(2, 1.0);
        let l = StarBody::ball(2, 2.0);
        let v = dual_mixed_volume(&k, &l, 1.0, &sp).unwrap();
        assert!((v.value - 2.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn dual_mixed_volume_cube_ball() {
        let sp = QuadratureSpec {
            sphere_resolution: 1 << 15,
            ..spec()
        };
        let cube = StarBody::unit_cube(2);
        let ball = StarBody::ball(2, 1.0);
        let v = dual_mixed_volume(&cube, &ball, 1.0, &sp).unwrap();
        // (1/2) int rho_cube = 2 * int_0^{pi/4} sec = 2 ln(1 + sqrt 2), halved
        let exact = (1.0 + 2f64.sqrt()).ln();
        assert!((v.value - exact).abs() < 1e-4 * exact, "{} vs {exact}", v.value);
    }

    #[test]
    fn dual_mixed_volume_inequality_and_dilates() {
        let sp = spec();
        let k = StarBody::ball(2, 1.0);
        let l = StarBody::centered_ellipsoid(2, &[1.4, 0.0, 0.0, 0.6]).unwrap();
        let alpha = 1.2;
        let v = dual_mixed_volume(&k, &l, alpha, &sp).unwrap();
        let bound = k.volume(&sp).unwrap().powf((2.0 - alpha) / 2.0)
            * l.volume(&sp).unwrap().powf(alpha / 2.0);
        assert!(v.value <= bound * (1.0 + 1e-9));
        assert!(v.value < bound * (1.0 - 1e-3), "strict for non-dilates");

        let l2 = StarBody::ball(2, 3.0);
        let v2 = dual_mixed_volume(&k, &l2, alpha, &sp).unwrap();
        let bound2 = k.volume(&sp).unwrap().powf((2.0 - alpha) / 2.0)
            * l2.volume(&sp).unwrap().powf(alpha / 2.0);
        assert!((v2.value - bound2).abs() < 1e-9 * bound2, "equality for dilates");
    }

    #[test]
    fn reverse_dual_mixed_volume_above_n() {
        let sp = spec();
        let k = StarBody::ball(2, 1.0);
        let l = StarBody::centered_ellipsoid(2, &[1.3, 0.0, 0.0, 0.8]).unwrap();
        let alpha = 3.5;
        let v = dual_mixed_volume(&k, &l, alpha, &sp).unwrap();
        let bound = k.volume(&sp).unwrap().powf((2.0 - alpha) / 2.0)
            * l.volume(&sp).unwrap().powf(alpha / 2.0);
        assert!(v.value >= bound * (1.0 - 1e-9));
    }

    #[test]
    fn schwarz_symmetral_examples() {
        let sp = spec();
        let b = schwarz_symmetral_body(&StarBody::ball(2, 3.0), &sp).unwrap();
        assert!((b.as_ball().unwrap() - 3.0).abs() < 1e-12);

        let c = schwarz_symmetral_body(&StarBody::unit_cube(2), &sp).unwrap();
        assert!((c.as_ball().unwrap() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);

        let s = schwarz_symmetral_body(&StarBody::simplex(2), &sp).unwrap();
        assert!((s.as_ball().unwrap() - (0.5 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dilate_detection() {
        assert!(is_dilate(&StarBody::ball(2, 1.0), &StarBody::ball(2, 5.0), 1e-9).unwrap());
        let cube = StarBody::unit_cube(2);
        assert!(is_dilate(&cube, &cube, 1e-9).unwrap());
        assert!(!is_dilate(&cube, &StarBody::ball(2, 1.0), 1e-2).unwrap());
    }

    #[test]
    fn convexity_examples() {
        let sp = spec();
        assert!(convexity_check(&StarBody::ball(2, 1.0), &sp).unwrap());
        assert!(convexity_check(&StarBody::cross_polytope(2), &sp).unwrap());
        let petal = StarBody::from_radial_rule(2, "four-petal", |d| {
            let theta = d[1].atan2(d[0]);
            1.0 + 0.5 * (4.0 * theta).cos()
        });
        assert!(!convexity_check(&petal, &sp).unwrap());
    }

    #[test]
    fn sampled_interpolation_on_circle() {
        let grid = Arc::new(sphere_grid(2, 64));
        let radii: Vec<f64> = (0..grid.len())
            .map(|i| {
                let d = grid.dir(i);
                2.0 + d[0]
            })
            .collect();
        let body = StarBody::sampled(grid, radii).unwrap();
        // at a grid node the value is exact
        let g = sphere_grid(2, 64);
        let v = body.radial(g.dir(3)).unwrap();
        assert!((v - (2.0 + g.dir(3)[0])).abs() < 1e-12);
        // between nodes the error is O(h^2)
        let v = body.radial(&[1.0, 0.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-2);
    }

    #[test]
    fn csv_export_round_trips() {
        let body = StarBody::ball(2, 1.0);
        let grid = sphere_grid(2, 8);
        let mut buf = Vec::new();
        body.write_radial_csv(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "dir_1,dir_2,rho");
        let mut count = 0;
        for (i, line) in lines.enumerate() {
            let parts: Vec<&str> = line.split(',').collect();
            assert_eq!(parts.len(), 3);
            let d0: f64 = parts[0].parse().unwrap();
            assert_eq!(d0.to_bits(), grid.dir(i)[0].to_bits(), "round-trip");
            let rho: f64 = parts[2].parse().unwrap();
            assert_eq!(
                rho.to_bits(),
                body.radial(grid.dir(i)).unwrap().to_bits(),
                "rho round-trip"
            );
            assert!((rho - 1.0).abs() < 1e-14);
            count += 1;
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn zero_vector_rejected() {
        let b = StarBody::ball(2, 1.0);
        assert!(matches!(
            b.radial(&[0.0, 0.0]).unwrap_err(),
            HlsError::ZeroVector
        ));
    }
}
