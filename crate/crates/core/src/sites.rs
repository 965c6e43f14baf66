//! Sites, scenes, and point-to-site / site-to-site distances.

use crate::error::{Error, Result};
use crate::golden;
use crate::norms::{self, dist, NormSpec};

/// A segment `[a, b]` with distinct endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Segment {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        if a == b {
            return Err(Error::InvalidSite(format!("degenerate segment at {a:?}")));
        }
        Ok(Segment { a, b })
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a + t * (b - a)).collect()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.point_at(0.5)
    }
}

/// The two closed-form sequence sites in `l2`:
/// `P = {e1} U {((n+1)/n) e_n : n >= 2}` and `A = {((n+2)/n) e_n : n >= 2}`.
///
/// Both accumulate at the unit sphere without reaching it, so distances to
/// them are infima that may not be attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceSite {
    P,
    A,
}

impl SequenceSite {
    /// Coefficient of `e_n` (1-based `n`), or `None` if `n` is not used.
    pub fn coefficient(self, n: usize) -> Option<f64> {
        let nf = n as f64;
        match (self, n) {
            (_, 0) => None,
            (SequenceSite::P, 1) => Some(1.0),
            (SequenceSite::A, 1) => None,
            (SequenceSite::P, _) => Some((nf + 1.0) / nf),
            (SequenceSite::A, _) => Some((nf + 2.0) / nf),
        }
    }

    /// Exact `l2` distance from a finitely supported `x` (coordinates beyond
    /// `x.len()` are zero), and the 1-based index of the attaining term if
    /// one attains it. `None` means only the tail limit `sqrt(|x|^2 + 1)`
    /// reaches the infimum.
    pub fn distance(self, x: &[f64]) -> (f64, Option<usize>) {
        let sq: f64 = x.iter().map(|v| v * v).sum();
        let mut best = sq + 1.0;
        let mut arg = None;
        for (i, &xi) in x.iter().enumerate() {
            let Some(c) = self.coefficient(i + 1) else { continue };
            let d = (sq - xi * xi).max(0.0) + (xi - c) * (xi - c);
            if d < best || (d == best && arg.is_none()) {
                best = d;
                arg = Some(i + 1);
            }
        }
        // e1 lies outside a zero-length x as well.
        if x.is_empty() && self == SequenceSite::P {
            arg = Some(1);
        }
        (best.sqrt(), arg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SitePrimitive {
    Points(Vec<Vec<f64>>),
    Segments(Vec<Segment>),
    Sequence(SequenceSite),
}

fn check_coords(v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidSite(format!("non-finite coordinate in {v:?}")));
    }
    Ok(())
}

impl SitePrimitive {
    pub fn points(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidSite("empty point set".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidSite("zero-dimensional point".into()));
        }
        for p in &points {
            check_coords(p, dim)?;
        }
        Ok(SitePrimitive::Points(points))
    }

    pub fn segments(segments: Vec<Segment>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(Error::InvalidSite("empty segment set".into()));
        };
        let dim = first.a.len();
        if dim == 0 {
            return Err(Error::InvalidSite("zero-dimensional segment".into()));
        }
        for s in &segments {
            check_coords(&s.a, dim)?;
            check_coords(&s.b, dim)?;
            if s.a == s.b {
                return Err(Error::InvalidSite(format!("degenerate segment at {:?}", s.a)));
            }
        }
        Ok(SitePrimitive::Segments(segments))
    }

    /// Ambient dimension, or `None` for the dimension-free sequence sites.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SitePrimitive::Points(p) => p.first().map(Vec::len),
            SitePrimitive::Segments(s) => s.first().map(|s| s.a.len()),
            SitePrimitive::Sequence(_) => None,
        }
    }

    fn distance(&self, x: &[f64], n: NormSpec, tol: f64) -> f64 {
        match self {
            SitePrimitive::Points(points) => {
                points.iter().map(|p| dist(x, p, n)).fold(f64::INFINITY, f64::min)
            }
            SitePrimitive::Segments(segs) => segs
                .iter()
                .map(|s| segment_distance(x, s, n, tol).value)
                .fold(f64::INFINITY, f64::min),
            SitePrimitive::Sequence(seq) => seq.distance(x).0,
        }
    }
}

/// A nonempty finite union of primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    primitives: Vec<SitePrimitive>,
}

impl Site {
    pub fn new(primitives: Vec<SitePrimitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::InvalidSite("a site needs at least one primitive".into()));
        }
        let mut dim = None;
        for p in &primitives {
            match (dim, p.dimension()) {
                (None, d) => dim = d,
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::DimensionMismatch { expected: a, found: b })
                }
                _ => {}
            }
        }
        Ok(Site { primitives })
    }

    pub fn points(points: Vec<Vec<f64>>) -> Result<Self> {
        Site::new(vec![SitePrimitive::points(points)?])
    }

    pub fn segments(segments: Vec<Segment>) -> Result<Self> {
        Site::new(vec![SitePrimitive::segments(segments)?])
    }

    pub fn sequence(which: SequenceSite) -> Self {
        Site { primitives: vec![SitePrimitive::Sequence(which)] }
    }

    /// Union of several sites, keeping every primitive.
    pub fn union<'a, I>(sites: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Site>,
    {
        Site::new(sites.into_iter().flat_map(|s| s.primitives.iter().cloned()).collect())
    }

    pub fn primitives(&self) -> &[SitePrimitive] {
        &self.primitives
    }

    pub fn dimension(&self) -> Option<usize> {
        self.primitives.iter().find_map(SitePrimitive::dimension)
    }

    pub fn has_sequence(&self) -> bool {
        self.primitives.iter().any(|p| matches!(p, SitePrimitive::Sequence(_)))
    }

    /// Concrete points of the site usable as ray origins in a `dim`-dimensional
    /// scene: every listed point, every segment midpoint, and `e1` for the
    /// sequence site that contains it.
    pub fn anchors(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for p in &self.primitives {
            match p {
                SitePrimitive::Points(pts) => out.extend(pts.iter().cloned()),
                SitePrimitive::Segments(segs) => out.extend(segs.iter().map(Segment::midpoint)),
                SitePrimitive::Sequence(SequenceSite::P) => {
                    let mut e1 = vec![0.0; dim.max(1)];
                    e1[0] = 1.0;
                    out.push(e1);
                }
                SitePrimitive::Sequence(SequenceSite::A) => {}
            }
        }
        out
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        match self.dimension() {
            Some(d) if d != x.len() => Err(Error::DimensionMismatch { expected: d, found: x.len() }),
            _ => Ok(()),
        }
    }
}

/// Axis-aligned box `[min, max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Domain {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.is_empty() {
            return Err(Error::InvalidScene("domain needs at least one coordinate".into()));
        }
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch { expected: min.len(), found: max.len() });
        }
        if min.iter().zip(&max).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(Error::InvalidScene(format!("empty domain {min:?} .. {max:?}")));
        }
        Ok(Domain { min, max })
    }

    /// `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Result<Self> {
        Domain::new(vec![-half; dim], vec![half; dim])
    }

    pub fn dimension(&self) -> usize {
        self.min.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter().zip(self.min.iter().zip(&self.max)).all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Euclidean length of the diagonal.
    pub fn diagonal(&self) -> f64 {
        self.min.iter().zip(&self.max).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }

    /// Largest `t >= 0` with `origin + t dir` in the box, for an origin
    /// inside it.
    pub fn exit_parameter(&self, origin: &[f64], dir: &[f64]) -> f64 {
        let mut t = f64::INFINITY;
        for i in 0..self.dimension() {
            if dir[i] > 0.0 {
                t = t.min((self.max[i] - origin[i]) / dir[i]);
            } else if dir[i] < 0.0 {
                t = t.min((self.min[i] - origin[i]) / dir[i]);
            }
        }
        t.max(0.0)
    }
}

/// A bounded box domain, a list of sites, and the norm measuring distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub domain: Domain,
    pub sites: Vec<Site>,
    pub norm: NormSpec,
}

impl Scene {
    pub fn new(domain: Domain, sites: Vec<Site>, norm: NormSpec) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidScene("a scene needs at least one site".into()));
        }
        let dim = domain.dimension();
        for (k, s) in sites.iter().enumerate() {
            if let Some(d) = s.dimension() {
                if d != dim {
                    return Err(Error::InvalidScene(format!(
                        "site {k} has dimension {d}, domain has {dim}"
                    )));
                }
            }
            if s.has_sequence() && norm.p() != 2.0 {
                return Err(Error::InvalidScene(format!(
                    "site {k} is a sequence site, which lives in l2 (scene norm is {norm})"
                )));
            }
        }
        Ok(Scene { domain, sites, norm })
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    /// `(P_k, union of the other sites)`, the pair whose dominance region is
    /// the Voronoi cell of site `k`.
    pub fn cell_pair(&self, k: usize) -> Result<(Site, Site)> {
        if k >= self.sites.len() {
            return Err(Error::Domain(format!("site index {k} out of range ({} sites)", self.sites.len())));
        }
        if self.sites.len() < 2 {
            return Err(Error::PreconditionFailed("a Voronoi cell needs at least two sites".into()));
        }
        let others = Site::union(self.sites.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, s)| s))?;
        Ok((self.sites[k].clone(), others))
    }
}

/// Distance from `x` to the segment, by golden-section search on the convex
/// map `t -> |x - (a + t(b - a))|`. The returned value is within `tol` of the
/// true minimum.
pub fn segment_distance(x: &[f64], s: &Segment, n: NormSpec, tol: f64) -> golden::Minimum {
    let len = dist(&s.a, &s.b, n);
    let f = |t: f64| {
        norms::norm_iter(
            x.iter().zip(s.a.iter().zip(&s.b)).map(move |(xi, (ai, bi))| xi - (ai + t * (bi - ai))),
            n,
        )
    };
    golden::minimize(f, 0.0, 1.0, tol / len)
}

/// `d(x, S)`: exact for point sets and sequence sites, within `tol` for
/// segments. Sequence sites are always measured in `l2`.
pub fn dist_point_site(x: &[f64], site: &Site, n: NormSpec, tol: f64) -> Result<f64> {
    site.check_query(x)?;
    Ok(site
        .primitives
        .iter()
        .map(|p| p.distance(x, n, tol))
        .fold(f64::INFINITY, f64::min))
}

/// A point of the site realizing `d(x, S)` (within `tol` for segments), if
/// one exists. Sequence sites only yield a point when an explicit term
/// attains the infimum.
pub fn nearest_point(x: &[f64], site: &Site, n: NormSpec, tol: f64) -> Result<Option<(Vec<f64>, f64)>> {
    site.check_query(x)?;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let consider = |pt: Vec<f64>, d: f64, best: &mut Option<(Vec<f64>, f64)>| {
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            *best = Some((pt, d));
        }
    };
    let mut infimum = f64::INFINITY;
    for prim in &site.primitives {
        match prim {
            SitePrimitive::Points(pts) => {
                for p in pts {
                    let d = dist(x, p, n);
                    infimum = infimum.min(d);
                    consider(p.clone(), d, &mut best);
                }
            }
            SitePrimitive::Segments(segs) => {
                for s in segs {
                    let m = segment_distance(x, s, n, tol);
                    infimum = infimum.min(m.value);
                    consider(s.point_at(m.arg), m.value, &mut best);
                }
            }
            SitePrimitive::Sequence(seq) => {
                let (d, arg) = seq.distance(x);
                infimum = infimum.min(d);
                if let Some(k) = arg {
                    let mut pt = x.iter().map(|_| 0.0).collect::<Vec<_>>();
                    if pt.len() < k {
                        pt.resize(k, 0.0);
                    }
                    pt[k - 1] = seq.coefficient(k).unwrap_or(0.0);
                    consider(pt, d, &mut best);
                }
            }
        }
    }
    // A candidate only counts if it attains the infimum over the whole site.
    Ok(best.filter(|(_, d)| *d <= infimum + tol))
}

/// Separation of two segments: alternating golden-section descent over the
/// two parameters, a 64x64 parameter grid, and a nested golden-section
/// minimization of `s -> min_t g(s, t)` (convex, since partial minimization
/// of a jointly convex function is convex). The smallest value wins.
fn segment_separation(s1: &Segment, s2: &Segment, n: NormSpec, tol: f64) -> f64 {
    let d1 = s1.a.len();
    let g = |s: f64, t: f64| {
        norms::norm_iter(
            (0..d1).map(move |i| {
                (s1.a[i] + s * (s1.b[i] - s1.a[i])) - (s2.a[i] + t * (s2.b[i] - s2.a[i]))
            }),
            n,
        )
    };
    let len1 = dist(&s1.a, &s1.b, n);
    let len2 = dist(&s2.a, &s2.b, n);
    let xtol1 = tol / (2.0 * len1);
    let xtol2 = tol / (2.0 * len2);

    let (mut s, mut t) = (0.5, 0.5);
    let mut best = g(s, t);
    for _ in 0..100 {
        t = golden::minimize(|t| g(s, t), 0.0, 1.0, xtol2).arg;
        let m = golden::minimize(|s| g(s, t), 0.0, 1.0, xtol1);
        s = m.arg;
        let improvement = best - m.value;
        best = best.min(m.value);
        if improvement < tol {
            break;
        }
    }

    const GRID: usize = 64;
    for i in 0..=GRID {
        for j in 0..=GRID {
            best = best.min(g(i as f64 / GRID as f64, j as f64 / GRID as f64));
        }
    }

    let inner = |s: f64| golden::minimize(|t| g(s, t), 0.0, 1.0, xtol2).value;
    best.min(golden::minimize(inner, 0.0, 1.0, xtol1).value)
}

fn primitive_separation(a: &SitePrimitive, b: &SitePrimitive, n: NormSpec, tol: f64) -> Result<f64> {
    use SitePrimitive::*;
    let v = match (a, b) {
        (Points(pa), other) => pa.iter().map(|p| other.distance(p, n, tol)).fold(f64::INFINITY, f64::min),
        (other, Points(pb)) => pb.iter().map(|p| other.distance(p, n, tol)).fold(f64::INFINITY, f64::min),
        (Segments(sa), Segments(sb)) => {
            let mut best = f64::INFINITY;
            for x in sa {
                for y in sb {
                    best = best.min(segment_separation(x, y, n, tol));
                }
            }
            best
        }
        // Both sequence sites accumulate at the unit sphere: the (n+1)/n and
        // (n+2)/n terms on e_n are 1/n apart, so the infimum is 0.
        (Sequence(_), Sequence(_)) => 0.0,
        (Segments(_), Sequence(_)) | (Sequence(_), Segments(_)) => {
            return Err(Error::Unsupported("separation between segments and a sequence site".into()))
        }
    };
    Ok(v)
}

/// `d(P, A) = inf { d(p, a) }`, exact except for segment pairs (within `tol`).
pub fn site_separation(p: &Site, a: &Site, n: NormSpec, tol: f64) -> Result<f64> {
    if let (Some(dp), Some(da)) = (p.dimension(), a.dimension()) {
        if dp != da {
            return Err(Error::DimensionMismatch { expected: dp, found: da });
        }
    }
    let mut best = f64::INFINITY;
    for x in &p.primitives {
        for y in &a.primitives {
            best = best.min(primitive_separation(x, y, n, tol)?);
        }
    }
    Ok(best)
}

/// True iff `d(P, A) >= tau_sep`. Pairs whose separation cannot be
/// evaluated count as not separated.
pub fn check_positive_separation(p: &Site, a: &Site, n: NormSpec, tau_sep: f64) -> bool {
    let tol = (tau_sep * 1e-3).min(1e-12);
    matches!(site_separation(p, a, n, tol), Ok(d) if d >= tau_sep)
}
