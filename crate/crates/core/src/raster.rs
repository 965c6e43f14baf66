//! Pixel-center rasterization of planar Voronoi diagrams, boundary-fraction
//! measurement, and deterministic PPM / PGM / SVG export.
//!
//! A two-site scene `[P, A]` rasterizes to the dominance region of `P`
//! against `A`: a pixel is on the boundary exactly when `|f| <= tau`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use smallvec::SmallVec;

use crate::bisector::BoundaryPoint;
use crate::dominance::{assign_from_distances, distance_tol};
use crate::error::{Error, Result};
use crate::par;
use crate::sites::{dist_point_site, Domain, Scene};

/// How the equality band `tau` is chosen for a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauPolicy {
    /// `max(1e-9, factor * pitch * sqrt(dimension))`, which shrinks with
    /// the pixel size.
    PitchScaled(f64),
    /// The same `tau` at every resolution; exposes bisectors with area.
    Fixed(f64),
}

impl Default for TauPolicy {
    fn default() -> Self {
        TauPolicy::PitchScaled(0.25)
    }
}

impl TauPolicy {
    pub fn tau(&self, pitch: f64, dimension: usize) -> f64 {
        match *self {
            TauPolicy::PitchScaled(k) => (k * pitch * (dimension as f64).sqrt()).max(1e-9),
            TauPolicy::Fixed(t) => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelLabel {
    pub nearest: SmallVec<[u32; 2]>,
    pub boundary: bool,
}

/// Row-major labels; row 0 is the top (largest `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabelGrid {
    pub width: usize,
    pub height: usize,
    pub domain: Domain,
    pub pitch: [f64; 2],
    pub tau: f64,
    pub num_sites: usize,
    pub labels: Vec<PixelLabel>,
}

impl LabelGrid {
    pub fn pixel_center(&self, col: usize, row: usize) -> [f64; 2] {
        pixel_center(&self.domain, self.pitch, col, row)
    }

    pub fn label(&self, col: usize, row: usize) -> &PixelLabel {
        &self.labels[row * self.width + col]
    }
}

fn pixel_center(domain: &Domain, pitch: [f64; 2], col: usize, row: usize) -> [f64; 2] {
    [
        domain.min[0] + (col as f64 + 0.5) * pitch[0],
        domain.max[1] - (row as f64 + 0.5) * pitch[1],
    ]
}

pub fn rasterize(scene: &Scene, width: usize, height: usize, policy: TauPolicy) -> Result<LabelGrid> {
    if scene.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: scene.dimension() });
    }
    if width < 2 || height < 2 {
        return Err(Error::Domain(format!("raster needs at least 2x2 pixels, got {width}x{height}")));
    }
    let d = &scene.domain;
    let pitch = [(d.max[0] - d.min[0]) / width as f64, (d.max[1] - d.min[1]) / height as f64];
    let tau = policy.tau(pitch[0].max(pitch[1]), 2);
    let tol = distance_tol(tau);

    let rows = par::map_indexed(height, |row| -> Result<Vec<PixelLabel>> {
        let mut out = Vec::with_capacity(width);
        let mut dists = Vec::with_capacity(scene.sites.len());
        for col in 0..width {
            let x = pixel_center(d, pitch, col, row);
            dists.clear();
            for s in &scene.sites {
                dists.push(dist_point_site(&x, s, scene.norm, tol)?);
            }
            let a = assign_from_distances(&dists, tau);
            out.push(PixelLabel { nearest: a.nearest, boundary: a.on_boundary });
        }
        Ok(out)
    });
    let mut labels = Vec::with_capacity(width * height);
    for r in rows {
        labels.extend(r?);
    }
    Ok(LabelGrid {
        width,
        height,
        domain: d.clone(),
        pitch,
        tau,
        num_sites: scene.sites.len(),
        labels,
    })
}

/// Fraction of pixels flagged as boundary.
pub fn boundary_fraction(grid: &LabelGrid) -> f64 {
    if grid.labels.is_empty() {
        return 0.0;
    }
    grid.labels.iter().filter(|l| l.boundary).count() as f64 / grid.labels.len() as f64
}

/// Colors for site indices and for boundary pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    pub sites: Vec<[u8; 3]>,
    pub boundary: [u8; 3],
}

impl Palette {
    /// Muted colors spaced by the golden angle in hue; black boundaries.
    pub fn default_for(num_sites: usize) -> Self {
        let sites = (0..num_sites.max(1))
            .map(|k| {
                let h = (k as f64 * 0.618_033_988_749_895).fract() * 6.0;
                let (s, v) = (0.45, 0.92);
                let c = v * s;
                let x = c * (1.0 - ((h % 2.0) - 1.0).abs());
                let (r, g, b) = match h as u32 {
                    0 => (c, x, 0.0),
                    1 => (x, c, 0.0),
                    2 => (0.0, c, x),
                    3 => (0.0, x, c),
                    4 => (x, 0.0, c),
                    _ => (c, 0.0, x),
                };
                let m = v - c;
                let q = |u: f64| ((u + m) * 255.0).round() as u8;
                [q(r), q(g), q(b)]
            })
            .collect();
        Palette { sites, boundary: [0, 0, 0] }
    }

    fn color(&self, label: &PixelLabel) -> [u8; 3] {
        if label.boundary {
            return self.boundary;
        }
        let k = label.nearest.first().copied().unwrap_or(0) as usize;
        self.sites[k % self.sites.len()]
    }
}

/// Binary PPM (P6).
pub fn write_ppm<W: Write>(grid: &LabelGrid, palette: &Palette, mut w: W) -> std::io::Result<()> {
    write!(w, "P6\n{} {}\n255\n", grid.width, grid.height)?;
    let mut buf = Vec::with_capacity(grid.labels.len() * 3);
    for l in &grid.labels {
        buf.extend_from_slice(&palette.color(l));
    }
    w.write_all(&buf)?;
    w.flush()
}

/// Plain PGM (P2): boundary pixels 0, cells in evenly spaced gray levels.
pub fn write_pgm<W: Write>(grid: &LabelGrid, mut w: W) -> std::io::Result<()> {
    write!(w, "P2\n{} {}\n255\n", grid.width, grid.height)?;
    let k = grid.num_sites.max(1) as u32;
    for row in 0..grid.height {
        let line: Vec<String> = (0..grid.width)
            .map(|col| {
                let l = grid.label(col, row);
                let g = if l.boundary {
                    0
                } else {
                    64 + 191 * l.nearest.first().copied().unwrap_or(0) / k.max(2).saturating_sub(1).max(1)
                };
                g.min(255).to_string()
            })
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()
}

pub fn export_image(grid: &LabelGrid, path: &Path, palette: &Palette) -> Result<()> {
    write_ppm(grid, palette, BufWriter::new(File::create(path)?))?;
    Ok(())
}

pub fn export_graymap(grid: &LabelGrid, path: &Path) -> Result<()> {
    write_pgm(grid, BufWriter::new(File::create(path)?))?;
    Ok(())
}

/// SVG 1.1 with one circle per point; coordinates are mapped from the
/// domain box onto a `size` x `size` canvas (y up) with 4 decimals.
pub fn write_bisector_svg<W: Write>(
    points: &[BoundaryPoint],
    domain: &Domain,
    size: f64,
    mut w: W,
) -> Result<()> {
    if domain.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: domain.dimension() });
    }
    let sx = size / (domain.max[0] - domain.min[0]);
    let sy = size / (domain.max[1] - domain.min[1]);
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#)?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.4}" height="{size:.4}" viewBox="0 0 {size:.4} {size:.4}">"#
    )?;
    writeln!(w, r#"<rect x="0" y="0" width="{size:.4}" height="{size:.4}" fill="white" stroke="black"/>"#)?;
    writeln!(w, r##"<g fill="#1f4e9e" stroke="none">"##)?;
    for b in points {
        if b.point.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: b.point.len() });
        }
        let cx = (b.point[0] - domain.min[0]) * sx;
        let cy = (domain.max[1] - b.point[1]) * sy;
        writeln!(w, r#"<circle cx="{cx:.4}" cy="{cy:.4}" r="1.5000"/>"#)?;
    }
    writeln!(w, "</g>")?;
    writeln!(w, "</svg>")?;
    w.flush()?;
    Ok(())
}

pub fn export_bisector_svg(points: &[BoundaryPoint], domain: &Domain, path: &Path) -> Result<()> {
    write_bisector_svg(points, domain, 512.0, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::NormSpec;
    use crate::sites::Site;

    fn two_points() -> Scene {
        Scene::new(
            Domain::cube(2, 5.0).unwrap(),
            vec![
                Site::points(vec![vec![0.0, 0.0]]).unwrap(),
                Site::points(vec![vec![2.0, 0.0]]).unwrap(),
            ],
            NormSpec::L2,
        )
        .unwrap()
    }

    #[test]
    fn band_follows_perpendicular_bisector() {
        let g = rasterize(&two_points(), 256, 256, TauPolicy::default()).unwrap();
        for row in 0..g.height {
            for col in 0..g.width {
                if g.label(col, row).boundary {
                    let x = g.pixel_center(col, row)[0];
                    assert!((x - 1.0).abs() <= 1.5 * g.pitch[0], "boundary at x={x}");
                }
            }
            // Every row crosses the bisector.
            assert!((0..g.width).any(|c| g.label(c, row).boundary));
        }
    }

    #[test]
    fn single_site_has_no_boundary() {
        let s = Scene::new(
            Domain::cube(2, 1.0).unwrap(),
            vec![Site::points(vec![vec![0.0, 0.0]]).unwrap()],
            NormSpec::L2,
        )
        .unwrap();
        let g = rasterize(&s, 16, 16, TauPolicy::default()).unwrap();
        assert_eq!(boundary_fraction(&g), 0.0);
    }

    #[test]
    fn rejects_small_or_non_planar() {
        assert!(rasterize(&two_points(), 1, 8, TauPolicy::default()).is_err());
        let s = Scene::new(
            Domain::cube(3, 1.0).unwrap(),
            vec![Site::points(vec![vec![0.0; 3]]).unwrap()],
            NormSpec::L2,
        )
        .unwrap();
        assert!(matches!(
            rasterize(&s, 8, 8, TauPolicy::default()),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn ppm_layout() {
        let g = rasterize(&two_points(), 2, 2, TauPolicy::Fixed(1e-9)).unwrap();
        let mut out = Vec::new();
        write_ppm(&g, &Palette::default_for(2), &mut out).unwrap();
        assert!(out.starts_with(b"P6\n"));
        let header = b"P6\n2 2\n255\n";
        assert_eq!(&out[..header.len()], header);
        assert_eq!(out.len() - header.len(), 12);
    }

    #[test]
    fn pgm_layout() {
        let g = rasterize(&two_points(), 4, 3, TauPolicy::Fixed(1e-9)).unwrap();
        let mut out = Vec::new();
        write_pgm(&g, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "P2");
        assert_eq!(lines[1], "4 3");
        assert_eq!(lines.len(), 3 + 3);
        assert!(lines[3..].iter().all(|l| l.split(' ').count() == 4));
    }

    #[test]
    fn svg_markers() {
        let d = Domain::cube(2, 5.0).unwrap();
        let mut out = Vec::new();
        write_bisector_svg(&[], &d, 512.0, &mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert!(s.contains("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 0);

        let pts: Vec<_> = [-1.0, 0.0, 1.0]
            .iter()
            .map(|&t| BoundaryPoint { point: vec![t, t], f_residual: 0.0, bracket_width: 0.0 })
            .collect();
        let mut out = Vec::new();
        write_bisector_svg(&pts, &d, 512.0, &mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s.matches("<circle").count(), 3);
        assert!(s.contains(r#"cx="256.0000" cy="256.0000""#));
        assert!(s.contains(r#"cx="204.8000" cy="307.2000""#));
    }
}
