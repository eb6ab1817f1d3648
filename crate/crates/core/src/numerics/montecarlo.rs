//! Seeded Monte Carlo expectations with a counter-based stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::QuadratureSpec;
use crate::error::{HlsError, Result};

/// Mean and standard error of `integrand` under the sampler's distribution.
///
/// The sampler fills `point` with the next sample using only the provided
/// generator, which is seeded from `spec.seed`; identical specs give
/// bit-identical results. Sums are accumulated with Kahan compensation in
/// sample order.
pub fn mc_expectation<S, F>(
    dim: usize,
    sampler: S,
    integrand: F,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)>
where
    S: Fn(&mut ChaCha8Rng, &mut [f64]),
    F: Fn(&[f64]) -> f64,
{
    spec.validate()?;
    if spec.mc_samples < 2 {
        return Err(HlsError::PreconditionFailed(
            "mc_samples must be at least 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut point = vec![0.0; dim];
    let n = spec.mc_samples;

    let mut sum = 0.0;
    let mut sum_c = 0.0;
    let mut sq = 0.0;
    let mut sq_c = 0.0;
    for _ in 0..n {
        sampler(&mut rng, &mut point);
        let v = integrand(&point);
        if !v.is_finite() {
            return Err(HlsError::NonFinite(
                "Monte Carlo integrand produced NaN/inf".into(),
            ));
        }
        kahan_add(&mut sum, &mut sum_c, v);
        kahan_add(&mut sq, &mut sq_c, v * v);
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok((mean, (var / nf).sqrt()))
}

fn kahan_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let y = v - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Uniform sampler on an axis-aligned box given by (lo, hi) per coordinate.
pub fn box_sampler(bounds: Vec<(f64, f64)>) -> impl Fn(&mut ChaCha8Rng, &mut [f64]) {
    move |rng, point| {
        for (x, (lo, hi)) in point.iter_mut().zip(&bounds) {
            *x = lo + (hi - lo) * rand::Rng::random::<f64>(rng);
        }
    }
}

/// Volume of the box accepted by [`box_sampler`].
pub fn box_volume(bounds: &[(f64, f64)]) -> f64 {
    bounds.iter().map(|(lo, hi)| hi - lo).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(samples: usize) -> QuadratureSpec {
        QuadratureSpec {
            mc_samples: samples,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn constant_integrands() {
        let sp = spec(1000);
        let (m, s) = mc_expectation(1, box_sampler(vec![(0.0, 1.0)]), |_| 1.0, &sp).unwrap();
        assert_eq!(m, 1.0);
        assert_eq!(s, 0.0);
        let (m, s) = mc_expectation(1, box_sampler(vec![(0.0, 1.0)]), |_| 0.0, &sp).unwrap();
        assert_eq!(m, 0.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn second_moment_of_uniform() {
        let sp = spec(1_000_000);
        let (m, s) =
            mc_expectation(1, box_sampler(vec![(0.0, 1.0)]), |x| x[0] * x[0], &sp).unwrap();
        assert!((m - 1.0 / 3.0).abs() <= 3.0 * s, "mean {m} stderr {s}");
        assert!(s < 1e-3);
    }

    #[test]
    fn identical_seeds_identical_bits() {
        let sp = spec(10_000);
        let run = || {
            mc_expectation(2, box_sampler(vec![(0.0, 1.0), (0.0, 1.0)]), |x| {
                (x[0] + x[1]).sin()
            }, &sp)
            .unwrap()
        };
        let (a, ae) = run();
        let (b, be) = run();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(ae.to_bits(), be.to_bits());
    }

    #[test]
    fn nan_sample_is_error() {
        let sp = spec(100);
        let err = mc_expectation(1, box_sampler(vec![(0.0, 1.0)]), |x| {
            if x[0] > 0.0 {
                f64::NAN
            } else {
                0.0
            }
        }, &sp)
        .unwrap_err();
        assert!(matches!(err, HlsError::NonFinite(_)));
    }
}
