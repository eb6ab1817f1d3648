//! Sphere grids: directions and weights for integration over S^{n-1}
//! with respect to the (n-1)-dimensional Hausdorff measure.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use super::gauss::gauss_legendre;

/// Volume of the n-dimensional unit ball, pi^{n/2} / Gamma(n/2 + 1).
pub fn unit_ball_volume(n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * nf * std::f64::consts::PI.ln() - ln_gamma(0.5 * nf + 1.0)).exp()
}

/// Surface measure of S^{n-1}, which equals n * omega_n. For n = 1 this is
/// the counting measure of the two-point sphere, 2.
pub fn sphere_surface(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// How the grid was built; sampled-body interpolation keys off this.
#[derive(Debug, Clone, PartialEq)]
pub enum GridStructure {
    /// n = 1: exactly {+1, -1}.
    TwoPoint,
    /// n = 2: equal angles theta_k = 2 pi (k + 1/2) / res.
    Circle { resolution: usize },
    /// n = 3: Gauss-Legendre in cos(theta) x uniform midpoint azimuths.
    ProductGl { n_polar: usize, n_azimuth: usize },
    /// n >= 4: deterministic low-discrepancy points, equal weights.
    LowDiscrepancy,
}

/// Unit directions with positive weights summing to the surface measure.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    n: usize,
    dirs: Vec<f64>,
    weights: Vec<f64>,
    structure: GridStructure,
}

impl SphereGrid {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dir(&self, i: usize) -> &[f64] {
        &self.dirs[i * self.n..(i + 1) * self.n]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn structure(&self) -> &GridStructure {
        &self.structure
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        (0..self.len()).map(move |i| (self.dir(i), self.weight(i)))
    }

    /// Integral over the sphere of a function of the direction.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            acc += self.weight(i) * f(self.dir(i));
        }
        acc
    }
}

/// Builds the grid for S^{n-1} at the requested resolution.
///
/// n = 1 ignores the resolution and returns the exact two-point grid; n = 2
/// uses `resolution` equally spaced angles at midpoint offsets so that jump
/// discontinuities on the coordinate axes fall on cell boundaries; n = 3 uses
/// `resolution` polar nodes and 2*resolution azimuths; n >= 4 falls back to
/// a Halton-driven equal-weight point set.
pub fn sphere_grid(n: usize, resolution: usize) -> SphereGrid {
    assert!(n >= 1, "dimension must be at least 1");
    let resolution = resolution.max(1);
    match n {
        1 => SphereGrid {
            n,
            dirs: vec![1.0, -1.0],
            weights: vec![1.0, 1.0],
            structure: GridStructure::TwoPoint,
        },
        2 => {
            let mut dirs = Vec::with_capacity(2 * resolution);
            let w = 2.0 * std::f64::consts::PI / resolution as f64;
            for k in 0..resolution {
                let theta = w * (k as f64 + 0.5);
                dirs.push(theta.cos());
                dirs.push(theta.sin());
            }
            SphereGrid {
                n,
                dirs,
                weights: vec![w; resolution],
                structure: GridStructure::Circle { resolution },
            }
        }
        3 => {
            let n_polar = resolution;
            let n_azimuth = 2 * resolution;
            let gl = gauss_legendre(n_polar);
            let dphi = 2.0 * std::f64::consts::PI / n_azimuth as f64;
            let mut dirs = Vec::with_capacity(3 * n_polar * n_azimuth);
            let mut weights = Vec::with_capacity(n_polar * n_azimuth);
            for (c, wc) in gl.0.iter().zip(&gl.1) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..n_azimuth {
                    let phi = dphi * (j as f64 + 0.5);
                    dirs.push(s * phi.cos());
                    dirs.push(s * phi.sin());
                    dirs.push(*c);
                    weights.push(wc * dphi);
                }
            }
            SphereGrid {
                n,
                dirs,
                weights,
                structure: GridStructure::ProductGl { n_polar, n_azimuth },
            }
        }
        _ => {
            let count = resolution;
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            let primes = first_primes(n);
            let mut dirs = Vec::with_capacity(n * count);
            for k in 1..=count {
                let mut v = vec![0.0; n];
                let mut norm = 0.0;
                for (j, p) in primes.iter().enumerate() {
                    let u = radical_inverse(k as u64, *p);
                    let z = normal.inverse_cdf(u.clamp(1e-12, 1.0 - 1e-12));
                    v[j] = z;
                    norm += z * z;
                }
                let norm = norm.sqrt().max(1e-300);
                for z in &mut v {
                    *z /= norm;
                }
                dirs.extend_from_slice(&v);
            }
            let w = sphere_surface(n) / count as f64;
            SphereGrid {
                n,
                dirs,
                weights: vec![w; count],
                structure: GridStructure::LowDiscrepancy,
            }
        }
    }
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate: u64 = 2;
    while primes.len() < count {
        if primes.iter().all(|p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut denom = 1.0;
    let b = base as f64;
    while k > 0 {
        denom *= b;
        inv += (k % base) as f64 / denom;
        k /= base;
    }
    inv
}
