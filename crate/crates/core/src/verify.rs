//! Seeded verification programs with JSON reports.
//!
//! * [`verify_clarkson`]: the strong triangle inequality on random pairs.
//! * [`verify_theorem`]: boundary, interior and closure identities of one
//!   Voronoi cell, as three sampled sub-suites.
//! * [`verify_not_attained`]: the sequence-site counterexample.
//! * [`verify_remark_1d`]: boundary/equality and closure/sublevel mismatches
//!   of two explicit functions on a line.
//!
//! Trials are evaluated in parallel and aggregated by trial index, so a
//! report depends only on its inputs and seed.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bisector::{fat_probe, harvest, ProbeVerdict};
use crate::dominance::{distance_tol, f_value};
use crate::error::{Error, Result};
use crate::norms::{self, strong_triangle_residual, NormSpec};
use crate::par;
use crate::sampling::{self, rng_for};
use crate::scene_file;
use crate::sites::{check_positive_separation, Scene, SequenceSite, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn of(failures: u64) -> Self {
        if failures == 0 {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubSuite {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    pub worst_residual: f64,
    pub verdict: Outcome,
}

impl SubSuite {
    fn new(name: &str, trials: u64, failures: u64, worst_residual: f64) -> Self {
        SubSuite { name: name.into(), trials, failures, worst_residual, verdict: Outcome::of(failures) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub scene_digest: Option<String>,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub worst_residual: f64,
    pub verdict: Outcome,
    pub sub_suites: Vec<SubSuite>,
    /// Names of the sub-suites predicted to fail when gates were bypassed.
    pub expected_failures: Option<Vec<String>>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn from_suites(check: &str, seed: u64, digest: Option<String>, sub_suites: Vec<SubSuite>) -> Self {
        let trials = sub_suites.iter().map(|s| s.trials).sum();
        let failures: u64 = sub_suites.iter().map(|s| s.failures).sum();
        let worst_residual = sub_suites.iter().map(|s| s.worst_residual).fold(f64::NEG_INFINITY, f64::max);
        VerificationReport {
            check: check.into(),
            scene_digest: digest,
            seed,
            trials,
            failures,
            worst_residual,
            verdict: Outcome::of(failures),
            sub_suites,
            expected_failures: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    pub fn failing_suites(&self) -> Vec<&str> {
        self.sub_suites.iter().filter(|s| s.verdict == Outcome::Fail).map(|s| s.name.as_str()).collect()
    }

    /// True when the report fails in exactly the predicted sub-suites.
    pub fn reproduces_expected_failure(&self) -> bool {
        match &self.expected_failures {
            Some(expected) => self.failing_suites() == expected.iter().map(String::as_str).collect::<Vec<_>>(),
            None => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Gaussian directions with log-uniform lengths.
    Uniform,
    /// Pairs whose directions differ by about `1e-8`.
    NearCollinear,
}

fn gaussian<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

fn clarkson_pair(dim: usize, ensemble: Ensemble, seed: u64, i: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = rng_for(seed, i);
    let s1 = rng.random_range(-2.0f64..2.0).exp();
    let s2 = rng.random_range(-2.0f64..2.0).exp();
    match ensemble {
        Ensemble::Uniform => {
            let x1 = gaussian(&mut rng, dim).into_iter().map(|c| c * s1).collect();
            let x2 = gaussian(&mut rng, dim).into_iter().map(|c| c * s2).collect();
            (x1, x2)
        }
        Ensemble::NearCollinear => {
            let u = sampling::random_direction(&mut rng, dim);
            let w = sampling::random_direction(&mut rng, dim);
            let x1 = u.iter().map(|c| c * s1).collect();
            let x2 = u.iter().zip(&w).map(|(a, b)| s2 * (a + 1e-8 * b)).collect();
            (x1, x2)
        }
    }
}

pub const CLARKSON_FLOOR: f64 = -1e-12;

/// Trial `i` draws a pair in dimension `dims[i % dims.len()]`; a residual
/// below `-1e-12` is a failure. `worst_residual` is the smallest residual.
pub fn verify_clarkson(
    n: NormSpec,
    dims: &[usize],
    trials: u64,
    seed: u64,
    ensemble: Ensemble,
) -> Result<VerificationReport> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Domain(format!("dimensions must be positive, got {dims:?}")));
    }
    let residuals = par::map_indexed(trials as usize, |i| {
        let dim = dims[i % dims.len()];
        let (x1, x2) = clarkson_pair(dim, ensemble, seed, i as u64);
        strong_triangle_residual(&x1, &x2, n).ok()
    });
    let mut suites = Vec::with_capacity(dims.len());
    let mut skipped = 0u64;
    for (slot, &dim) in dims.iter().enumerate() {
        let (mut count, mut failures, mut worst) = (0, 0, f64::INFINITY);
        for r in residuals.iter().skip(slot).step_by(dims.len()) {
            match r {
                Some(r) => {
                    count += 1;
                    if *r < CLARKSON_FLOOR {
                        failures += 1;
                    }
                    worst = worst.min(*r);
                }
                None => skipped += 1,
            }
        }
        let worst = if count == 0 { 0.0 } else { worst };
        suites.push(SubSuite::new(&format!("dim{dim}"), count, failures, worst));
    }
    let name = match ensemble {
        Ensemble::Uniform => "clarkson",
        Ensemble::NearCollinear => "clarkson-near-collinear",
    };
    let mut report = VerificationReport::from_suites(name, seed, None, suites);
    report.worst_residual = report.sub_suites.iter().map(|s| s.worst_residual).fold(f64::INFINITY, f64::min);
    report.notes.push(format!("norm {n}"));
    if !n.is_uniformly_convex() {
        report.notes.push(
            "not uniformly convex; residual check degenerates to the ordinary triangle inequality (delta = 0)".into(),
        );
    }
    if skipped > 0 {
        report.notes.push(format!("{skipped} degenerate pairs skipped"));
    }
    Ok(report)
}

/// Sampling parameters of [`verify_theorem`].
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremConfig {
    /// Run the suites even when the separation or convexity gate fails.
    pub allow_gate_bypass: bool,
    pub tau: f64,
    pub probe_radius: f64,
    pub probe_samples: usize,
    pub neighborhood_samples: usize,
    pub closure_radii: Vec<f64>,
    pub closure_samples: usize,
    pub strict_origins: usize,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            allow_gate_bypass: false,
            tau: 1e-9,
            probe_radius: 1e-2,
            probe_samples: 200,
            neighborhood_samples: 32,
            closure_radii: vec![1e-1, 1e-2],
            closure_samples: 64,
            strict_origins: 16,
        }
    }
}

pub const SUITE_BOUNDARY: &str = "boundary";
pub const SUITE_INTERIOR: &str = "interior";
pub const SUITE_CLOSURE: &str = "closure";

const DOMAIN_SALT: u64 = 0x5eed_d0a1;
const PROBE_SALT: u64 = 0x5eed_fa7e;
const BALL_SALT: u64 = 0x5eed_ba11;

/// Three sub-suites on the cell of site `p_index` against the other sites.
///
/// * `boundary`: every harvested boundary point, and every sampled domain
///   point with `|f| <= tau`, has both strict signs within the probe radius.
///   `worst_residual` is the largest fraction of zero-band probe samples.
/// * `interior`: every sampled point with `f < -tau` has an all-negative
///   sampled neighborhood of radius `tau / 4`. `worst_residual` is the
///   largest sampled `f`.
/// * `closure`: every sampled point of the region and every harvested point
///   has a sample with `f < -tau` within each closure radius.
///   `worst_residual` is the largest best-`f` found near a tested point.
///
/// `trials` sets both the number of harvested points and of domain samples.
/// When a gate fails and is bypassed, the report predicts that `boundary`
/// and `closure` fail while `interior` (forced by continuity of `f`) holds.
pub fn verify_theorem(
    scene: &Scene,
    p_index: usize,
    trials: u64,
    seed: u64,
    config: &TheoremConfig,
) -> Result<VerificationReport> {
    let (p, a) = scene.cell_pair(p_index)?;
    let n = scene.norm;
    let tau = config.tau;

    let mut gate_notes = Vec::new();
    if !n.is_uniformly_convex() {
        gate_notes.push(format!("convexity gate failed: {n} is not uniformly convex"));
    }
    if !check_positive_separation(&p, &a, n, tau) {
        gate_notes.push(format!("separation gate failed: site {p_index} is not positively separated from the others"));
    }
    if !gate_notes.is_empty() && !config.allow_gate_bypass {
        return Err(Error::PreconditionFailed(gate_notes.join("; ")));
    }

    let dtol = distance_tol(tau);
    let f = |x: &[f64]| f_value(x, &p, &a, n, dtol);

    let samples = par::map_indexed(trials as usize, |i| -> Result<(Vec<f64>, f64)> {
        let x = sampling::domain_point(&mut rng_for(seed ^ DOMAIN_SALT, i as u64), &scene.domain);
        let fx = f(&x)?;
        Ok((x, fx))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut origins = p.anchors(scene.dimension());
    origins.extend(samples.iter().filter(|(_, fx)| *fx < -tau).take(config.strict_origins).map(|(x, _)| x.clone()));
    let target = trials as usize;
    let boundary = harvest(&origins, &scene.domain, &p, &a, n, tau, target, 16 * target.max(1), seed)?;

    // Boundary sub-suite.
    let mut probe_centers: Vec<Vec<f64>> = boundary.iter().map(|b| b.point.clone()).collect();
    probe_centers.extend(samples.iter().filter(|(_, fx)| fx.abs() <= tau).map(|(x, _)| x.clone()));
    let probes = par::map_indexed(probe_centers.len(), |i| {
        fat_probe(&probe_centers[i], config.probe_radius, config.probe_samples, &p, &a, n, tau, seed ^ PROBE_SALT ^ i as u64)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let fat = probes.iter().filter(|r| r.verdict == ProbeVerdict::FatEvidence).count();
    let boundary_suite = SubSuite::new(
        SUITE_BOUNDARY,
        probes.len() as u64,
        probes.iter().filter(|r| r.verdict != ProbeVerdict::ThinEvidence).count() as u64,
        probes.iter().map(|r| r.count_zero as f64 / r.n_samples as f64).fold(0.0, f64::max),
    );

    // Interior sub-suite.
    let strict: Vec<&Vec<f64>> = samples.iter().filter(|(_, fx)| *fx < -tau).map(|(x, _)| x).collect();
    let interior = par::map_indexed(strict.len(), |i| -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for y in sampling::ball(strict[i], tau / 4.0, config.neighborhood_samples, n, seed ^ BALL_SALT ^ i as u64) {
            worst = worst.max(f(&y)?);
        }
        Ok(worst)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let interior_suite = SubSuite::new(
        SUITE_INTERIOR,
        interior.len() as u64,
        interior.iter().filter(|w| **w >= 0.0).count() as u64,
        interior.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(-f64::MAX),
    );

    // Closure sub-suite.
    let mut region: Vec<(Vec<f64>, f64)> = samples.iter().filter(|(_, fx)| *fx <= tau).cloned().collect();
    region.extend(boundary.iter().map(|b| (b.point.clone(), b.f_residual)));
    let jobs = region.len() * config.closure_radii.len();
    let closure = par::map_indexed(jobs, |j| -> Result<f64> {
        let (x, fx) = &region[j / config.closure_radii.len()];
        if *fx < -tau {
            return Ok(*fx);
        }
        let rho = config.closure_radii[j % config.closure_radii.len()];
        let mut best = *fx;
        for y in sampling::ball(x, rho, config.closure_samples, n, seed ^ BALL_SALT ^ j as u64) {
            best = best.min(f(&y)?);
            if best < -tau {
                break;
            }
        }
        Ok(best)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let closure_suite = SubSuite::new(
        SUITE_CLOSURE,
        closure.len() as u64,
        closure.iter().filter(|b| **b >= -tau).count() as u64,
        closure.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(-f64::MAX),
    );

    let mut report = VerificationReport::from_suites(
        "theorem",
        seed,
        Some(scene_file::digest(scene)),
        vec![boundary_suite, interior_suite, closure_suite],
    );
    report.notes.push(format!("cell {p_index}, {} harvested boundary points, {fat} fat probes", boundary.len()));
    if !gate_notes.is_empty() {
        report.notes.extend(gate_notes);
        report.expected_failures = Some(vec![SUITE_BOUNDARY.into(), SUITE_CLOSURE.into()]);
    }
    Ok(report)
}

/// The sequence sites in `l2`: `f(0) = 0`, yet `f <= 0` on sampled points of
/// `B(0, 0.1)` whose support has at most `support_dim` coordinates, so `0`
/// is an interior point of the region lying on the equality set.
pub fn verify_not_attained(support_dim: usize, trials: u64, seed: u64) -> Result<VerificationReport> {
    if support_dim < 2 {
        return Err(Error::Domain(format!("support dimension must be at least 2, got {support_dim}")));
    }
    let p = Site::sequence(SequenceSite::P);
    let a = Site::sequence(SequenceSite::A);
    let n = NormSpec::L2;
    let f = |x: &[f64]| f_value(x, &p, &a, n, crate::ZERO_TOL);

    let origin = vec![0.0; support_dim];
    let f0 = f(&origin)?;
    let mut e = vec![0.0; support_dim];
    e[0] = 0.05;
    let fe = f(&e)?;
    let fe_expected = 0.95 - 1.0025f64.sqrt();

    let values = par::map_indexed(trials as usize, |i| -> Result<f64> {
        let mut rng = rng_for(seed, i as u64);
        let support = rng.random_range(1..=support_dim);
        let idx = sample_indices(&mut rng, support_dim, support);
        let dir = sampling::random_direction(&mut rng, support);
        let radius = 0.1 * rng.random::<f64>().powf(1.0 / support as f64);
        let mut x = vec![0.0; support_dim];
        for (k, j) in idx.iter().enumerate() {
            x[j] = radius * dir[k];
        }
        debug_assert!(norms::norm(&x, n) < 0.1);
        f(&x)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let sampled = SubSuite::new(
        "ball-in-region",
        values.len() as u64,
        values.iter().filter(|v| **v > crate::ZERO_TOL).count() as u64,
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let positives = values.iter().filter(|v| **v > 0.0).count();
    let origin_suite = SubSuite::new("equality-at-origin", 1, u64::from(f0 != 0.0), f0.abs());
    let point_suite = SubSuite::new("closed-form-point", 1, u64::from((fe - fe_expected).abs() > 1e-15), (fe - fe_expected).abs());
    let sign_suite = SubSuite::new("no-positive-side", 1, u64::from(positives > 0), positives as f64);

    let mut report =
        VerificationReport::from_suites("not-attained", seed, None, vec![origin_suite, point_suite, sampled, sign_suite]);
    report.notes.push(format!("support dimension <= {support_dim}"));
    report.notes.push(
        "f(0) = 0 while every sampled point near 0 has f <= 0: the origin is interior to the region yet on the equality set, so the boundary identity fails".into(),
    );
    report.notes.push("d(P, A) = 0: the sites are disjoint but not positively separated".into());
    Ok(report)
}

/// On `[-4, 4]`, `f(x) = -|x|` for `|x| <= 1` and `|x| - 2` otherwise, and
/// `g = -f`. For `f`, `{f <= 0}` is the closure of `{f < 0}` but its
/// boundary `{-2, 2}` misses the zero at the origin. For `g` the boundary
/// of `{g <= 0}` is the whole zero set `{-2, 0, 2}`, while the closure of
/// `{g < 0}` omits the origin.
///
/// The grid has `8m + 1` points with `8m >= grid`, so `0` and `+-2` are grid
/// points; discrete closure and boundary use index neighbors.
pub fn verify_remark_1d(grid: usize) -> Result<VerificationReport> {
    if grid < 1000 {
        return Err(Error::Domain(format!("grid must have at least 1000 points, got {grid}")));
    }
    let m = grid.div_ceil(8);
    let len = 8 * m + 1;
    let xs: Vec<f64> = (0..len).map(|i| (i as f64 - 4.0 * m as f64) / m as f64).collect();
    let f = |x: f64| if x.abs() <= 1.0 { -x.abs() } else { x.abs() - 2.0 };
    let fv: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let gv: Vec<f64> = fv.iter().map(|v| -v).collect();

    // Interior grid points only; the window edges are not boundary.
    let inner = 1..len - 1;
    let boundary = |v: &[f64]| -> Vec<usize> {
        inner.clone().filter(|&i| v[i] <= 0.0 && (v[i - 1] > 0.0 || v[i + 1] > 0.0)).collect()
    };
    let zeros = |v: &[f64]| -> Vec<usize> { inner.clone().filter(|&i| v[i] == 0.0).collect() };
    let closure_eq_sublevel = |v: &[f64]| -> bool {
        inner.clone().all(|i| {
            let in_closure = v[i] < 0.0 || v[i - 1] < 0.0 || v[i + 1] < 0.0;
            in_closure == (v[i] <= 0.0)
        })
    };
    let at = |x: f64| (x * m as f64 + 4.0 * m as f64).round() as usize;
    let (i0, im2, ip2) = (at(0.0), at(-2.0), at(2.0));

    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool| checks.push(SubSuite::new(name, 1, u64::from(!ok), 0.0));
    check("f-closure-equals-sublevel", closure_eq_sublevel(&fv));
    check("f-boundary-is-plus-minus-2", boundary(&fv) == vec![im2, ip2]);
    check("f-zero-set-contains-origin", zeros(&fv) == vec![im2, i0, ip2] && fv[i0 - 1] < 0.0 && fv[i0 + 1] < 0.0);
    check("g-boundary-equals-zero-set", boundary(&gv) == zeros(&gv) && zeros(&gv) == vec![im2, i0, ip2]);
    check("g-closure-omits-origin", !closure_eq_sublevel(&gv) && gv[i0 - 1] > 0.0 && gv[i0 + 1] > 0.0);

    let mut report = VerificationReport::from_suites("remark-1d", 0, None, checks);
    report.worst_residual = 0.0;
    report.notes.push(format!("{len} grid points on [-4, 4], spacing 1/{m}"));
    Ok(report)
}
