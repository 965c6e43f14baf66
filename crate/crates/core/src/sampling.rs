//! Deterministic sample layouts: norm balls, ray directions, domain points.
//!
//! Every generator is a pure function of its seed (and index), so sampled
//! suites are reproducible and independent of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::norms::{norm, NormSpec};
use crate::sites::Domain;

/// The golden angle, `pi (3 - sqrt 5)`.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// SplitMix64 finalizer; decorrelates `(seed, index)` streams.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for trial `index` under `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed ^ mix(index)))
}

/// Rescale `v` (nonzero) to `lp` length `len`.
fn with_length(v: &mut [f64], len: f64, n: NormSpec) {
    let s = len / norm(v, n);
    v.iter_mut().for_each(|c| *c *= s);
}

/// Gaussian direction, Euclidean unit length.
pub fn random_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let l = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if l > 1e-12 {
            return v.into_iter().map(|c| c / l).collect();
        }
    }
}

/// `count` points of the open `lp` ball `B(center, radius)`.
///
/// In the plane this is a sunflower (Vogel) spiral rotated by a seed-derived
/// angle, with each point pushed radially onto the `lp` circle of its
/// radius. In other dimensions points come from the seeded generator.
pub fn ball(center: &[f64], radius: f64, count: usize, n: NormSpec, seed: u64) -> Vec<Vec<f64>> {
    let dim = center.len();
    if dim == 2 {
        let rot = std::f64::consts::TAU * (seed as f64 * INV_PHI).fract();
        return (0..count)
            .map(|i| {
                let r = radius * ((i as f64 + 0.5) / count as f64).sqrt();
                let th = rot + i as f64 * GOLDEN_ANGLE;
                let mut v = [th.cos(), th.sin()];
                with_length(&mut v, r, n);
                vec![center[0] + v[0], center[1] + v[1]]
            })
            .collect();
    }
    let mut rng = rng_for(seed, 0xBA11);
    (0..count)
        .map(|_| {
            let mut v = random_direction(&mut rng, dim);
            let u: f64 = rng.random::<f64>();
            // Strictly inside: u < 1.
            with_length(&mut v, radius * u.powf(1.0 / dim as f64), n);
            center.iter().zip(&v).map(|(c, d)| c + d).collect()
        })
        .collect()
}

/// Base-2 radical inverse; any prefix of the sequence is evenly spread.
fn van_der_corput(mut k: u64) -> f64 {
    let mut x = 0.0;
    let mut f = 0.5;
    while k > 0 {
        if k & 1 == 1 {
            x += f;
        }
        k >>= 1;
        f *= 0.5;
    }
    x
}

/// Direction number `k` of a ray fan. Planar fans use van der Corput
/// angles offset by half a slot; other dimensions use seeded Gaussian
/// directions. All directions have Euclidean unit length.
pub fn ray_direction(dim: usize, k: u64, seed: u64) -> Vec<f64> {
    if dim == 2 {
        let th = std::f64::consts::TAU * (van_der_corput(k) + 1.0 / 4096.0);
        vec![th.cos(), th.sin()]
    } else if dim == 1 {
        vec![if k.is_multiple_of(2) { 1.0 } else { -1.0 }]
    } else {
        random_direction(&mut rng_for(seed, k), dim)
    }
}

/// Uniform point of the domain box.
pub fn domain_point<R: Rng>(rng: &mut R, domain: &Domain) -> Vec<f64> {
    domain
        .min
        .iter()
        .zip(&domain.max)
        .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_points_lie_inside() {
        for n in [NormSpec::L1, NormSpec::L2, NormSpec::LINF, NormSpec::new(3.0).unwrap()] {
            for dim in [2, 3, 7] {
                let c = vec![0.5; dim];
                let pts = ball(&c, 0.25, 300, n, 9);
                assert_eq!(pts.len(), 300);
                for p in pts {
                    let d = crate::norms::dist(&p, &c, n);
                    assert!(d < 0.25 * (1.0 + 1e-12), "{n} {dim} {d}");
                }
            }
        }
    }

    #[test]
    fn ball_is_deterministic() {
        let a = ball(&[0.0, 0.0, 0.0], 1.0, 50, NormSpec::L2, 3);
        let b = ball(&[0.0, 0.0, 0.0], 1.0, 50, NormSpec::L2, 3);
        assert_eq!(a, b);
        let c = ball(&[0.0, 0.0, 0.0], 1.0, 50, NormSpec::L2, 4);
        assert_ne!(a, c);
    }

    #[test]
    fn planar_fan_covers_both_half_planes() {
        let dirs: Vec<_> = (0..16).map(|k| ray_direction(2, k, 0)).collect();
        assert!(dirs.iter().any(|d| d[0] > 0.9));
        assert!(dirs.iter().any(|d| d[0] < -0.9));
        for d in dirs {
            assert!(((d[0] * d[0] + d[1] * d[1]).sqrt() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn van_der_corput_prefix() {
        assert_eq!(van_der_corput(0), 0.0);
        assert_eq!(van_der_corput(1), 0.5);
        assert_eq!(van_der_corput(2), 0.25);
        assert_eq!(van_der_corput(3), 0.75);
    }
}
