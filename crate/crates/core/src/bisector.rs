//! Locating and probing points of the bisector `{x : d(x, P) = d(x, A)}`.
//!
//! Boundary points come from sign-change bisection along rays shot out of
//! the strict interior. A probe then classifies a quasi-uniform sample of a
//! small ball around each point: a thin bisector shows both signs of `f`,
//! a fat one shows only the zero band.

use serde::Serialize;

use crate::dominance::{distance_tol, f_value, Classification};
use crate::error::{Error, Result};
use crate::norms::{dist, modulus, NormSpec};
use crate::par;
use crate::sampling;
use crate::sites::{dist_point_site, nearest_point, Domain, Site};

/// Number of march steps across the domain diagonal.
pub const RAY_STEPS: f64 = 256.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub point: Vec<f64>,
    pub f_residual: f64,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RayOutcome {
    Hit(BoundaryPoint),
    NoCrossing,
}

impl RayOutcome {
    pub fn hit(self) -> Option<BoundaryPoint> {
        match self {
            RayOutcome::Hit(b) => Some(b),
            RayOutcome::NoCrossing => None,
        }
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Bisect `[x_in, x_out]` (with `f(x_in) < 0 < f(x_out)`) down to a point
/// with `|f| <= tol`.
///
/// `f` is 2-Lipschitz, so once the bracket is shorter than `tol` its
/// midpoint qualifies; that takes `ceil(log2(|x_out - x_in| / tol))` halvings.
pub fn bisect_boundary(
    x_in: &[f64],
    x_out: &[f64],
    p: &Site,
    a: &Site,
    n: NormSpec,
    tol: f64,
) -> Result<BoundaryPoint> {
    if x_in.len() != x_out.len() {
        return Err(Error::DimensionMismatch { expected: x_in.len(), found: x_out.len() });
    }
    let dtol = distance_tol(tol);
    let f = |x: &[f64]| f_value(x, p, a, n, dtol);
    let (f_in, f_out) = (f(x_in)?, f(x_out)?);
    if !(f_in < 0.0 && f_out > 0.0) {
        return Err(Error::NoSignChange { f_in, f_out });
    }
    let len = dist(x_in, x_out, n);
    let steps = ((len / tol).log2().ceil().max(0.0) as usize + 2).min(200);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut last = (lerp(x_in, x_out, 0.5), f64::INFINITY);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        let x = lerp(x_in, x_out, mid);
        let fm = f(&x)?;
        if fm.abs() <= tol {
            return Ok(BoundaryPoint { point: x, f_residual: fm, bracket_width: (hi - lo) * len });
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        last = (x, fm);
    }
    Err(Error::NotConverged { residual: last.1.abs(), tol })
}

/// March from `origin` (where `f < 0`) along `direction` in steps of the
/// domain diagonal / 256 until `f > 0`, then bisect the last step. A sign
/// change thinner than one step can be missed.
#[allow(clippy::too_many_arguments)]
pub fn ray_shoot(
    origin: &[f64],
    direction: &[f64],
    domain: &Domain,
    p: &Site,
    a: &Site,
    n: NormSpec,
    tol: f64,
) -> Result<RayOutcome> {
    let dim = domain.dimension();
    for v in [origin, direction] {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
    }
    let len = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(len > 0.0) {
        return Err(Error::Domain("ray direction must be nonzero".into()));
    }
    let dir: Vec<f64> = direction.iter().map(|c| c / len).collect();
    let dtol = distance_tol(tol);
    let f = |x: &[f64]| f_value(x, p, a, n, dtol);
    let f0 = f(origin)?;
    if !(f0 < 0.0) {
        return Err(Error::BadOrigin(f0));
    }
    let step = domain.diagonal() / RAY_STEPS;
    let t_exit = domain.exit_parameter(origin, &dir);
    let at = |t: f64| -> Vec<f64> { origin.iter().zip(&dir).map(|(o, d)| o + t * d).collect() };

    let mut last_neg = 0.0;
    let mut k = 1u64;
    loop {
        let t = (k as f64 * step).min(t_exit);
        let x = at(t);
        let fx = f(&x)?;
        if fx > 0.0 {
            return bisect_boundary(&at(last_neg), &x, p, a, n, tol).map(RayOutcome::Hit);
        }
        if fx < 0.0 {
            last_neg = t;
        }
        if t >= t_exit {
            return Ok(RayOutcome::NoCrossing);
        }
        k += 1;
    }
}

/// Shoot rays out of `origins` until `target` boundary points are found or
/// `max_rays` rays are spent. Ray `k` leaves origin `k mod m` along fan
/// direction `k / m`. Origins with `f >= 0` are skipped. Output order is
/// the ray order, so results do not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn harvest(
    origins: &[Vec<f64>],
    domain: &Domain,
    p: &Site,
    a: &Site,
    n: NormSpec,
    tol: f64,
    target: usize,
    max_rays: usize,
    seed: u64,
) -> Result<Vec<BoundaryPoint>> {
    let dtol = distance_tol(tol);
    let mut usable = Vec::new();
    for o in origins {
        if f_value(o, p, a, n, dtol)? < 0.0 {
            usable.push(o.clone());
        }
    }
    if usable.is_empty() || target == 0 {
        return Ok(Vec::new());
    }
    let m = usable.len();
    let dim = domain.dimension();
    let mut found = Vec::with_capacity(target);
    let mut next = 0usize;
    while found.len() < target && next < max_rays {
        let batch = (target - found.len()).max(64).min(max_rays - next);
        let base = next;
        let outcomes = par::map_indexed(batch, |i| {
            let k = base + i;
            let dir = sampling::ray_direction(dim, (k / m) as u64, seed ^ k as u64);
            ray_shoot(&usable[k % m], &dir, domain, p, a, n, tol)
        });
        for o in outcomes {
            if let Some(b) = o?.hit() {
                if found.len() < target {
                    found.push(b);
                }
            }
        }
        next += batch;
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    /// Both signs of `f` occur in the ball.
    ThinEvidence,
    /// Every sample lies in the zero band.
    FatEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FatProbeReport {
    pub center: Vec<f64>,
    pub radius: f64,
    pub n_samples: usize,
    pub count_neg: usize,
    pub count_zero: usize,
    pub count_pos: usize,
    pub verdict: ProbeVerdict,
}

/// Classify `n_samples` quasi-uniform points of `B(z, radius)` around a
/// bisector point `z`.
#[allow(clippy::too_many_arguments)]
pub fn fat_probe(
    z: &[f64],
    radius: f64,
    n_samples: usize,
    p: &Site,
    a: &Site,
    n: NormSpec,
    tau: f64,
    seed: u64,
) -> Result<FatProbeReport> {
    if !(radius > 0.0) || n_samples < 10 {
        return Err(Error::Domain(format!(
            "probe needs radius > 0 and at least 10 samples (radius {radius}, samples {n_samples})"
        )));
    }
    let dtol = distance_tol(tau);
    let fz = f_value(z, p, a, n, dtol)?;
    if fz.abs() > tau {
        return Err(Error::NotOnBisector { f: fz, tau });
    }
    let (mut neg, mut zero, mut pos) = (0, 0, 0);
    for x in sampling::ball(z, radius, n_samples, n, seed) {
        let f = f_value(&x, p, a, n, dtol)?;
        match Classification::from_f(f, tau).verdict {
            crate::dominance::Verdict::StrictInterior => neg += 1,
            crate::dominance::Verdict::NearBisector => zero += 1,
            crate::dominance::Verdict::StrictExterior => pos += 1,
        }
    }
    let verdict = if neg > 0 && pos > 0 {
        ProbeVerdict::ThinEvidence
    } else if zero == n_samples {
        ProbeVerdict::FatEvidence
    } else {
        ProbeVerdict::Inconclusive
    };
    Ok(FatProbeReport {
        center: z.to_vec(),
        radius,
        n_samples,
        count_neg: neg,
        count_zero: zero,
        count_pos: pos,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum EscapeOutcome {
    /// A point of `[z, a')` near `z` with `f > 0`.
    Escaped { point: Vec<f64>, step: f64, f: f64 },
    /// No point of the schedule left `dom(P, A)`, or `A` has no (approximate)
    /// nearest point to aim at.
    Failure { reason: String },
}

/// Number of halvings of the initial step.
pub const ESCAPE_HALVINGS: u32 = 16;

/// Look for points outside `dom(P, A)` on the segment from a bisector point
/// `z` toward a nearest point `a'` of `A`, at distances
/// `r0, r0/2, ..., r0/2^16` from `z`. `r0` defaults to `d(z, A) / 10`.
pub fn escape_point(
    z: &[f64],
    p: &Site,
    a: &Site,
    n: NormSpec,
    tau: f64,
    r0: Option<f64>,
) -> Result<EscapeOutcome> {
    const ETA: f64 = 1e-9;
    let dtol = distance_tol(tau);
    let fz = f_value(z, p, a, n, dtol)?;
    if fz.abs() > tau {
        return Err(Error::NotOnBisector { f: fz, tau });
    }
    let Some((target, _)) = nearest_point(z, a, n, ETA)? else {
        return Ok(EscapeOutcome::Failure {
            reason: "d(z, A) is not attained by any point of A".into(),
        });
    };
    let target = {
        let mut t = target;
        t.resize(z.len().max(t.len()), 0.0);
        t
    };
    let mut z_ext = z.to_vec();
    z_ext.resize(target.len(), 0.0);
    let gap = dist(&z_ext, &target, n);
    if gap == 0.0 {
        return Ok(EscapeOutcome::Failure { reason: "z lies in A".into() });
    }
    let r0 = r0.unwrap_or(dist_point_site(z, a, n, dtol)? / 10.0);
    for k in 0..=ESCAPE_HALVINGS {
        let s = r0 / f64::from(1u32 << k);
        let x = lerp(&z_ext, &target, (s / gap).min(1.0));
        let fx = f_value(&x, p, a, n, dtol)?;
        if fx > 0.0 {
            return Ok(EscapeOutcome::Escaped { point: x, step: s, f: fx });
        }
    }
    Ok(EscapeOutcome::Failure { reason: "f <= 0 at every step of the schedule".into() })
}

/// The radius `r = min{ sigma, d(P,A)/4, (eps/2) delta(w) }` with
/// `w = d(P,A) / (4 (sigma + d(z,A)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofRadius {
    pub radius: f64,
    /// `w`, the argument handed to the modulus.
    pub witness: f64,
    /// The three candidates of the minimum, in order.
    pub terms: [f64; 3],
}

impl ProofRadius {
    /// `w < 2` always; `w < 0.5` whenever `d(P,A) <= 2 d(z,A)`, which holds
    /// at every bisector point.
    pub fn witness_admissible(&self, d_pa: f64, d_za: f64) -> bool {
        let bound = if d_pa <= 2.0 * d_za { 0.5 } else { 2.0 };
        self.witness < bound
    }
}

pub fn proof_radius(sigma: f64, eps: f64, d_pa: f64, d_za: f64, n: NormSpec) -> Result<ProofRadius> {
    if !(sigma > 0.0 && eps > 0.0 && d_pa > 0.0 && d_za >= 0.0)
        || ![sigma, eps, d_pa, d_za].iter().all(|v| v.is_finite())
    {
        return Err(Error::Domain(format!(
            "proof radius needs sigma, eps, d(P,A) > 0 and d(z,A) >= 0 \
             (got {sigma}, {eps}, {d_pa}, {d_za})"
        )));
    }
    let witness = d_pa / (4.0 * (sigma + d_za));
    if witness > 2.0 {
        return Err(Error::Domain(format!("modulus argument {witness} exceeds 2")));
    }
    let terms = [sigma, d_pa / 4.0, eps / 2.0 * modulus(n, witness)?];
    let radius = terms.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ProofRadius { radius, witness, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Site {
        Site::points(vec![vec![x, y]]).unwrap()
    }

    #[test]
    fn bisect_midpoint() {
        let (p, a) = (pt(0.0, 0.0), pt(2.0, 0.0));
        for n in [NormSpec::L2, NormSpec::L1] {
            let b = bisect_boundary(&[0.1, 0.0], &[1.9, 0.0], &p, &a, n, 1e-10).unwrap();
            assert!((b.point[0] - 1.0).abs() < 1e-9);
            assert!(b.f_residual.abs() <= 1e-10);
        }
        assert!(matches!(
            bisect_boundary(&[1.9, 0.0], &[0.1, 0.0], &p, &a, NormSpec::L2, 1e-10),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn ray_examples() {
        let (p, a) = (pt(0.0, 0.0), pt(2.0, 0.0));
        let d = Domain::cube(2, 5.0).unwrap();
        let hit = ray_shoot(&[0.0, 0.0], &[1.0, 0.0], &d, &p, &a, NormSpec::L2, 1e-10)
            .unwrap()
            .hit()
            .unwrap();
        assert!((hit.point[0] - 1.0).abs() < 1e-9 && hit.point[1].abs() < 1e-12);
        let miss = ray_shoot(&[0.0, 0.0], &[-1.0, 0.0], &d, &p, &a, NormSpec::L2, 1e-10).unwrap();
        assert_eq!(miss, RayOutcome::NoCrossing);
        assert!(matches!(
            ray_shoot(&[2.0, 0.0], &[-1.0, 0.0], &d, &p, &a, NormSpec::L2, 1e-10),
            Err(Error::BadOrigin(_))
        ));
    }

    #[test]
    fn thin_probe_on_perpendicular_bisector() {
        let (p, a) = (pt(0.0, 0.0), pt(2.0, 0.0));
        let r = fat_probe(&[1.0, 0.0], 1e-2, 200, &p, &a, NormSpec::L2, 1e-9, 0).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::ThinEvidence);
        assert_eq!(r.count_neg + r.count_zero + r.count_pos, 200);
        assert!(matches!(
            fat_probe(&[0.5, 0.0], 1e-2, 200, &p, &a, NormSpec::L2, 1e-9, 0),
            Err(Error::NotOnBisector { .. })
        ));
        assert!(fat_probe(&[1.0, 0.0], 1e-2, 5, &p, &a, NormSpec::L2, 1e-9, 0).is_err());
    }

    #[test]
    fn escape_toward_a() {
        let (p, a) = (pt(0.0, 0.0), pt(2.0, 0.0));
        match escape_point(&[1.0, 0.0], &p, &a, NormSpec::L2, 1e-9, None).unwrap() {
            EscapeOutcome::Escaped { point, f, .. } => {
                assert!(point[0] > 1.0 && point[1] == 0.0);
                assert!(f > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn proof_radius_example() {
        let r = proof_radius(1.0, 0.5, 1.0, 1.0, NormSpec::L2).unwrap();
        // 0.25 (1 - sqrt(1 - 0.125^2 / 4))
        assert!((r.radius - 4.887_590_207_607_595e-4).abs() < 1e-15);
        assert_eq!(r.witness, 0.125);
        assert!(r.witness_admissible(1.0, 1.0));
        assert!(proof_radius(0.0, 0.5, 1.0, 1.0, NormSpec::L2).is_err());
        assert!(proof_radius(0.01, 0.5, 100.0, 0.0, NormSpec::L2).is_err());
    }

    #[test]
    fn witness_approaches_half() {
        let d_pa = 3.0;
        let mut prev = 0.0;
        for sigma in [1e-1, 1e-3, 1e-6, 1e-9] {
            let r = proof_radius(sigma, 1.0, d_pa, d_pa / 2.0, NormSpec::L2).unwrap();
            assert!(r.witness < 0.5 && r.witness > prev);
            prev = r.witness;
        }
        assert!(0.5 - prev < 1e-8);
    }
}
