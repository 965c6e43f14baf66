//! The sign function `f(x) = d(x, P) - d(x, A)`, the strict-interior /
//! bisector / strict-exterior trichotomy, and nearest-site assignment.

use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::norms::NormSpec;
use crate::sites::{dist_point_site, Scene, Site};

/// Distance tolerance used under a classification tolerance `tau`.
///
/// Segment distances are certified to this value, well inside the band.
pub fn distance_tol(tau: f64) -> f64 {
    (tau * 1e-3).min(crate::ZERO_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    StrictInterior,
    NearBisector,
    StrictExterior,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::StrictInterior => "StrictInterior",
            Verdict::NearBisector => "NearBisector",
            Verdict::StrictExterior => "StrictExterior",
        };
        f.write_str(s)
    }
}

impl Verdict {
    /// Strict interior or bisector band, i.e. inside `dom(P, A)` up to `tau`.
    pub fn in_region(self) -> bool {
        self != Verdict::StrictExterior
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub f_value: f64,
    pub tolerance: f64,
}

impl Classification {
    pub fn from_f(f_value: f64, tolerance: f64) -> Self {
        let verdict = if f_value < -tolerance {
            Verdict::StrictInterior
        } else if f_value > tolerance {
            Verdict::StrictExterior
        } else {
            Verdict::NearBisector
        };
        Classification { verdict, f_value, tolerance }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} f={}", self.verdict, self.f_value)
    }
}

/// `d(x, P) - d(x, A)`. 2-Lipschitz in `x`.
pub fn f_value(x: &[f64], p: &Site, a: &Site, n: NormSpec, tol: f64) -> Result<f64> {
    Ok(dist_point_site(x, p, n, tol)? - dist_point_site(x, a, n, tol)?)
}

pub fn classify(x: &[f64], p: &Site, a: &Site, n: NormSpec, tau: f64) -> Result<Classification> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("classification tolerance must be positive, got {tau}")));
    }
    let f = f_value(x, p, a, n, distance_tol(tau))?;
    Ok(Classification::from_f(f, tau))
}

/// Sites whose distance is within `tau` of the minimum. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiAssignment {
    pub nearest: SmallVec<[u32; 2]>,
    pub on_boundary: bool,
}

/// Assign `x` to every site `k` with `d(x, P_k) - min_j d(x, P_j) <= tau`.
///
/// `x` is on the boundary of cell `k` iff `k` is nearest and some other site
/// is as well. Written with the same subtraction as [`classify`] so that
/// `k in nearest` coincides exactly with `classify(x, P_k, U_{j != k} P_j)`
/// landing in the region.
pub fn voronoi_assign(x: &[f64], scene: &Scene, tau: f64) -> Result<VoronoiAssignment> {
    if x.len() != scene.dimension() {
        return Err(Error::DimensionMismatch { expected: scene.dimension(), found: x.len() });
    }
    let tol = distance_tol(tau);
    let mut dists: SmallVec<[f64; 8]> = SmallVec::with_capacity(scene.sites.len());
    for s in &scene.sites {
        dists.push(dist_point_site(x, s, scene.norm, tol)?);
    }
    Ok(assign_from_distances(&dists, tau))
}

pub(crate) fn assign_from_distances(dists: &[f64], tau: f64) -> VoronoiAssignment {
    // min over j != k is the global minimum, except at the (first) argmin
    // where it is the runner-up.
    let (mut first, mut lo, mut runner_up) = (0, f64::INFINITY, f64::INFINITY);
    for (k, &d) in dists.iter().enumerate() {
        if d < lo {
            runner_up = lo;
            lo = d;
            first = k;
        } else if d < runner_up {
            runner_up = d;
        }
    }
    let mut nearest = SmallVec::new();
    for (k, &dk) in dists.iter().enumerate() {
        let others = if k == first { runner_up } else { lo };
        if dk - others <= tau {
            nearest.push(k as u32);
        }
    }
    let on_boundary = nearest.len() >= 2;
    VoronoiAssignment { nearest, on_boundary }
}
