//! `lp` norms, Clarkson's angle, the modulus of convexity and the strong
//! triangle inequality.

use std::fmt;

use crate::error::{Error, Result};
use crate::{par, ZERO_TOL};

/// The exponent `p` of an `lp` norm, `1 <= p <= inf`.
///
/// `p = inf` is stored as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    p: f64,
}

impl NormSpec {
    pub const L1: NormSpec = NormSpec { p: 1.0 };
    pub const L2: NormSpec = NormSpec { p: 2.0 };
    pub const LINF: NormSpec = NormSpec { p: f64::INFINITY };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("norm exponent p must lie in [1, inf], got {p}")));
        }
        Ok(NormSpec { p })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    /// True iff `1 < p < inf`.
    pub fn is_uniformly_convex(&self) -> bool {
        self.p > 1.0 && self.p.is_finite()
    }

    pub fn modulus_profile(&self) -> ModulusProfile {
        ModulusProfile::analytic(*self)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "l_inf")
        } else {
            write!(f, "l_{}", self.p)
        }
    }
}

#[inline]
fn lp_fold<I>(values: I, p: f64) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    if p == 1.0 {
        values.map(f64::abs).sum()
    } else if p == 2.0 {
        values.map(|v| v * v).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        values.fold(0.0, |m, v| m.max(v.abs()))
    } else {
        // Scale by the largest entry so powf neither overflows nor underflows.
        let m = values.clone().fold(0.0, |m: f64, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * values.map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `lp` norm of a lazily produced coordinate sequence. The iterator is
/// cloned when `p` needs a scaling pass.
#[inline]
pub fn norm_iter<I>(values: I, n: NormSpec) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    lp_fold(values, n.p)
}

/// `|v|_p`.
pub fn norm(v: &[f64], n: NormSpec) -> f64 {
    lp_fold(v.iter().copied(), n.p)
}

/// `|a - b|_p`. Both slices must have the same length.
#[inline]
pub fn dist(a: &[f64], b: &[f64], n: NormSpec) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    lp_fold(a.iter().zip(b).map(|(x, y)| x - y), n.p)
}

fn check_same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

/// Clarkson's angle `| x/|x| - y/|y| |`, a value in `[0, 2]`.
pub fn clarkson_angle(x: &[f64], y: &[f64], n: NormSpec) -> Result<f64> {
    check_same_dim(x, y)?;
    let nx = norm(x, n);
    let ny = norm(y, n);
    if nx <= ZERO_TOL || ny <= ZERO_TOL {
        return Err(Error::ZeroVector);
    }
    let a = lp_fold(x.iter().zip(y).map(|(u, v)| u / nx - v / ny), n.p);
    Ok(a.min(2.0))
}

/// Where the values of a [`ModulusProfile`] come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusSource {
    /// `1 - (1 - (e/2)^p)^(1/p)` for `p >= 2`, and `0` for `p` in `{1, inf}`.
    ClosedForm,
    /// `(p - 1) e^2 / 8`, capped at 1, for `1 < p < 2`.
    LowerBound,
    /// Brute-force minimum over pairs of unit vectors in the plane.
    NumericEstimate { resolution: usize },
}

/// A modulus of convexity `e -> delta(e)` on `[0, 2]`.
///
/// The analytic profiles never exceed the true modulus, which is what makes
/// the strong triangle residual a valid inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusProfile {
    pub norm: NormSpec,
    pub source: ModulusSource,
}

impl ModulusProfile {
    pub fn analytic(n: NormSpec) -> Self {
        let source = if n.p > 1.0 && n.p < 2.0 {
            ModulusSource::LowerBound
        } else {
            ModulusSource::ClosedForm
        };
        ModulusProfile { norm: n, source }
    }

    pub fn numeric(n: NormSpec, resolution: usize) -> Self {
        ModulusProfile { norm: n, source: ModulusSource::NumericEstimate { resolution } }
    }

    pub fn eval(&self, eps: f64) -> Result<f64> {
        match self.source {
            ModulusSource::NumericEstimate { resolution } => {
                if eps == 0.0 {
                    return Ok(0.0);
                }
                modulus_numeric(self.norm, eps, resolution)
            }
            _ => modulus(self.norm, eps),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::Domain(format!("modulus argument must lie in [0, 2], got {eps}")));
    }
    Ok(())
}

/// Modulus of convexity of `lp`: exact for `p >= 2`, the quadratic lower
/// bound for `1 < p < 2`, and identically zero for `p = 1` and `p = inf`.
pub fn modulus(n: NormSpec, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let p = n.p;
    if !n.is_uniformly_convex() {
        return Ok(0.0);
    }
    let d = if p >= 2.0 {
        -((-(eps / 2.0).powf(p)).ln_1p() / p).exp_m1()
    } else {
        ((p - 1.0) * eps * eps / 8.0).min(1.0)
    };
    Ok(d.clamp(0.0, 1.0))
}

#[inline]
fn pow_sum2(a: f64, b: f64, p: f64) -> f64 {
    if p == 1.0 {
        a.abs() + b.abs()
    } else if p == 2.0 {
        a * a + b * b
    } else if p.is_infinite() {
        a.abs().max(b.abs())
    } else {
        a.abs().powf(p) + b.abs().powf(p)
    }
}

/// Brute-force modulus of convexity in the `lp` plane.
///
/// Takes `resolution` directions uniformly spaced in angle, normalizes them
/// onto the unit sphere, and minimizes `1 - |(x + y)/2|` over all pairs with
/// `|x - y| >= eps`. The grid only sees a subset of unit pairs, so the result
/// over-approximates the planar modulus; it converges as `resolution` grows.
pub fn modulus_numeric(n: NormSpec, eps: f64, resolution: usize) -> Result<f64> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::Domain(format!("numeric modulus needs eps in (0, 2], got {eps}")));
    }
    if resolution < 16 {
        return Err(Error::Domain(format!("resolution must be >= 16, got {resolution}")));
    }
    let p = n.p;
    let units: Vec<[f64; 2]> = (0..resolution)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / resolution as f64;
            let v = [theta.cos(), theta.sin()];
            let len = norm(&v, n);
            [v[0] / len, v[1] / len]
        })
        .collect();

    // Compare in "powered" form to skip the root on every pair. The slack of
    // a few ulps keeps exactly antipodal pairs at eps = 2; anything wider
    // admits near-antipodal pairs on the flat parts of the sphere for large p.
    let eps_floor = eps * (1.0 - 8.0 * f64::EPSILON);
    let threshold = if p.is_infinite() { eps_floor } else { eps_floor.powf(p) };
    let row_best = par::map_indexed(resolution, |i| {
        let x = units[i];
        let mut best = f64::NEG_INFINITY;
        for y in &units[i + 1..] {
            if pow_sum2(x[0] - y[0], x[1] - y[1], p) >= threshold {
                let m = pow_sum2((x[0] + y[0]) / 2.0, (x[1] + y[1]) / 2.0, p);
                if m > best {
                    best = m;
                }
            }
        }
        best
    });
    let best = row_best.into_iter().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        // No admissible pair on this grid; the planar modulus is at most 1.
        return Ok(1.0);
    }
    let mid_norm = if p == 1.0 || p.is_infinite() {
        best
    } else {
        best.powf(1.0 / p)
    };
    Ok((1.0 - mid_norm).clamp(0.0, 1.0))
}

/// `(|x1| + |x2| - 2 delta(a1)|x1| - 2 delta(a2)|x2|) - |x1 + x2|` with
/// `a_l = angle(x_l, x1 + x2)` and `delta` the analytic modulus profile.
///
/// Non-negative for every admissible pair (Clarkson's strong triangle
/// inequality), up to rounding.
pub fn strong_triangle_residual(x1: &[f64], x2: &[f64], n: NormSpec) -> Result<f64> {
    check_same_dim(x1, x2)?;
    let n1 = norm(x1, n);
    let n2 = norm(x2, n);
    if n1 <= ZERO_TOL || n2 <= ZERO_TOL {
        return Err(Error::ZeroVector);
    }
    let sum: Vec<f64> = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
    let ns = norm(&sum, n);
    if ns <= ZERO_TOL {
        return Err(Error::ZeroSum);
    }
    let a1 = clarkson_angle(x1, &sum, n)?;
    let a2 = clarkson_angle(x2, &sum, n)?;
    let d1 = modulus(n, a1)?;
    let d2 = modulus(n, a2)?;
    Ok((n1 + n2 - 2.0 * d1 * n1 - 2.0 * d2 * n2) - ns)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = crate::figures::FIG2_P;

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&[3.0, 4.0], NormSpec::L2), 5.0);
        assert_eq!(norm(&[3.0, -4.0], NormSpec::LINF), 4.0);
        assert_eq!(norm(&[3.0, -4.0], NormSpec::L1), 7.0);
        let p3 = NormSpec::new(3.0).unwrap();
        assert!((norm(&[1.0, 1.0], p3) - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(norm(&[0.0, 0.0], p3), 0.0);
    }

    #[test]
    fn rejects_p_below_one() {
        assert!(NormSpec::new(0.5).is_err());
        assert!(NormSpec::new(f64::NAN).is_err());
        assert!(NormSpec::new(f64::INFINITY).is_ok());
        assert!(!NormSpec::L1.is_uniformly_convex());
        assert!(!NormSpec::LINF.is_uniformly_convex());
        assert!(NormSpec::new(1.0001).unwrap().is_uniformly_convex());
    }

    #[test]
    fn angle_examples() {
        let n = NormSpec::L2;
        assert_eq!(clarkson_angle(&[5.0, 0.0], &[2.0, 0.0], n).unwrap(), 0.0);
        assert_eq!(clarkson_angle(&[1.0, 0.0], &[-3.0, 0.0], n).unwrap(), 2.0);
        let a = clarkson_angle(&[1.0, 0.0], &[0.0, 1.0], n).unwrap();
        assert!((a - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(matches!(clarkson_angle(&[0.0, 0.0], &[1.0, 0.0], n), Err(Error::ZeroVector)));
        assert!(matches!(
            clarkson_angle(&[1.0], &[1.0, 0.0], n),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus(NormSpec::L2, 0.0).unwrap(), 0.0);
        assert!((modulus(NormSpec::L2, 2.0).unwrap() - 1.0).abs() < 1e-15);
        // 1 - (7/8)^(1/3)
        let m3 = modulus(NormSpec::new(3.0).unwrap(), 1.0).unwrap();
        assert!((m3 - 0.043_534_408_613_805_42).abs() < 1e-12);
        assert_eq!(modulus(NormSpec::L1, 1.3).unwrap(), 0.0);
        assert_eq!(modulus(NormSpec::LINF, 2.0).unwrap(), 0.0);
        assert_eq!(modulus(NormSpec::new(1.5).unwrap(), 1.0).unwrap(), 0.0625);
        assert!(modulus(NormSpec::L2, 2.5).is_err());
        assert!(modulus(NormSpec::L2, -0.1).is_err());
    }

    #[test]
    fn modulus_profile_sources() {
        assert_eq!(NormSpec::L2.modulus_profile().source, ModulusSource::ClosedForm);
        assert_eq!(
            NormSpec::new(1.5).unwrap().modulus_profile().source,
            ModulusSource::LowerBound
        );
        let num = ModulusProfile::numeric(NormSpec::L2, 256);
        assert_eq!(num.eval(0.0).unwrap(), 0.0);
        assert!(num.eval(1.0).unwrap() > 0.13);
    }

    #[test]
    fn modulus_is_monotone_and_positive() {
        for p in [1.5, 2.0, E, 3.0, 5.0] {
            let n = NormSpec::new(p).unwrap();
            let mut prev = 0.0;
            for k in 0..=100 {
                let eps = 2.0 * k as f64 / 100.0;
                let d = modulus(n, eps).unwrap();
                assert!(d >= prev, "p={p} eps={eps}");
                if k > 0 {
                    assert!(d > 0.0);
                }
                prev = d;
            }
        }
    }

    #[test]
    fn numeric_modulus_examples() {
        let d = modulus_numeric(NormSpec::L2, 1.0, 2048).unwrap();
        assert!((d - (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-3, "{d}");
        assert_eq!(modulus_numeric(NormSpec::LINF, 1.0, 2048).unwrap(), 0.0);
        let d2 = modulus_numeric(NormSpec::L2, 2.0, 2048).unwrap();
        assert!((d2 - 1.0).abs() < 1e-3, "{d2}");
        assert!(modulus_numeric(NormSpec::L2, 0.0, 64).is_err());
        assert!(modulus_numeric(NormSpec::L2, 1.0, 8).is_err());
    }

    #[test]
    fn residual_examples() {
        let n = NormSpec::L2;
        let r = strong_triangle_residual(&[1.0, 0.0], &[1.0, 0.0], n).unwrap();
        assert!(r.abs() < 1e-15);

        // a1 = a2 = |(1,0) - (1,1)/sqrt 2|, residual = 2 - sqrt 2 - 2 sqrt 2 delta(a1)
        let r = strong_triangle_residual(&[1.0, 0.0], &[0.0, 1.0], n).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = ((1.0 - s) * (1.0 - s) + s * s).sqrt();
        let d = 1.0 - (1.0 - a * a / 4.0).sqrt();
        let expected = 2.0 - 2f64.sqrt() - 2.0 * d * 2.0;
        assert!((r - expected).abs() < 1e-12);
        assert!(r > 0.0);

        let r = strong_triangle_residual(&[1.0, 0.0], &[-1.0, 1e-6], n).unwrap();
        assert!(r >= 0.0);

        assert!(matches!(
            strong_triangle_residual(&[1.0, 0.0], &[-1.0, 0.0], n),
            Err(Error::ZeroSum)
        ));
        assert!(matches!(
            strong_triangle_residual(&[0.0, 0.0], &[1.0, 0.0], n),
            Err(Error::ZeroVector)
        ));
    }
}
