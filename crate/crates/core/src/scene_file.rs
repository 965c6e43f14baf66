//! JSON scene documents.
//!
//! ```json
//! // comment lines are allowed
//! {
//!   "norm": { "p": 2 },
//!   "domain": { "min": [-5, -5], "max": [5, 5] },
//!   "sites": [
//!     { "type": "points", "payload": [[0, 0], [1, 2]] },
//!     { "type": "segments", "payload": [[[0, 1], [2, 1]]] },
//!     { "type": "union", "payload": [ ... ] }
//!   ]
//! }
//! ```
//!
//! `p` is a number `>= 1` or the string `"inf"`. The `sequence_example` type
//! takes `"P"` or `"A"` and denotes the corresponding closed-form sequence
//! site. Unknown keys are rejected, and every error carries a line and column.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::norms::NormSpec;
use crate::sites::{Domain, Scene, Segment, SequenceSite, Site, SitePrimitive};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub norm: NormEntry,
    pub domain: DomainEntry,
    pub sites: Vec<SiteEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormEntry {
    #[serde(deserialize_with = "checked_exponent")]
    pub p: Exponent,
}

fn checked_exponent<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Exponent, D::Error> {
    let e = Exponent::deserialize(d)?;
    e.norm().map_err(serde::de::Error::custom)?;
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainEntry {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceName {
    P,
    A,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "snake_case", deny_unknown_fields)]
pub enum SiteEntry {
    Points(Vec<Vec<f64>>),
    Segments(Vec<[Vec<f64>; 2]>),
    SequenceExample(SequenceName),
    Union(Vec<SiteEntry>),
}

impl Exponent {
    pub fn norm(&self) -> Result<NormSpec> {
        match self {
            Exponent::Finite(p) => NormSpec::new(*p),
            Exponent::Named(s) if s == "inf" => Ok(NormSpec::LINF),
            Exponent::Named(s) => Err(Error::InvalidScene(format!("norm.p must be a number or \"inf\", got {s:?}"))),
        }
    }
}

impl SiteEntry {
    fn collect_primitives(&self, out: &mut Vec<SitePrimitive>) -> Result<()> {
        match self {
            SiteEntry::Points(p) => out.push(SitePrimitive::points(p.clone())?),
            SiteEntry::Segments(s) => {
                let segs = s
                    .iter()
                    .map(|[a, b]| Segment::new(a.clone(), b.clone()))
                    .collect::<Result<Vec<_>>>()?;
                out.push(SitePrimitive::segments(segs)?);
            }
            SiteEntry::SequenceExample(SequenceName::P) => out.push(SitePrimitive::Sequence(SequenceSite::P)),
            SiteEntry::SequenceExample(SequenceName::A) => out.push(SitePrimitive::Sequence(SequenceSite::A)),
            SiteEntry::Union(parts) => {
                for part in parts {
                    part.collect_primitives(out)?;
                }
            }
        }
        Ok(())
    }

    fn from_primitive(p: &SitePrimitive) -> Self {
        match p {
            SitePrimitive::Points(pts) => SiteEntry::Points(pts.clone()),
            SitePrimitive::Segments(segs) => {
                SiteEntry::Segments(segs.iter().map(|s| [s.a.clone(), s.b.clone()]).collect())
            }
            SitePrimitive::Sequence(SequenceSite::P) => SiteEntry::SequenceExample(SequenceName::P),
            SitePrimitive::Sequence(SequenceSite::A) => SiteEntry::SequenceExample(SequenceName::A),
        }
    }
}

impl TryFrom<SceneFile> for Scene {
    type Error = Error;

    fn try_from(file: SceneFile) -> Result<Scene> {
        let norm = file.norm.p.norm()?;
        let domain = Domain::new(file.domain.min, file.domain.max)?;
        let sites = file
            .sites
            .iter()
            .map(|e| {
                let mut prims = Vec::new();
                e.collect_primitives(&mut prims)?;
                Site::new(prims)
            })
            .collect::<Result<Vec<_>>>()?;
        Scene::new(domain, sites, norm)
    }
}

impl From<&Scene> for SceneFile {
    fn from(scene: &Scene) -> Self {
        let p = if scene.norm.is_infinite() {
            Exponent::Named("inf".into())
        } else {
            Exponent::Finite(scene.norm.p())
        };
        let sites = scene
            .sites
            .iter()
            .map(|s| match s.primitives() {
                [one] => SiteEntry::from_primitive(one),
                many => SiteEntry::Union(many.iter().map(SiteEntry::from_primitive).collect()),
            })
            .collect();
        SceneFile {
            norm: NormEntry { p },
            domain: DomainEntry { min: scene.domain.min.clone(), max: scene.domain.max.clone() },
            sites,
        }
    }
}

/// Blank out full-line `//` comments, keeping line and column positions.
fn strip_comments(text: &str) -> String {
    text.split_inclusive('\n')
        .map(|line| {
            if line.trim_start().starts_with("//") {
                line.chars().map(|c| if c == '\n' || c == '\r' { c } else { ' ' }).collect()
            } else {
                line.to_string()
            }
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(try_from = "SceneFile")]
struct Checked(Scene);

impl TryFrom<SceneFile> for Checked {
    type Error = Error;
    fn try_from(file: SceneFile) -> Result<Self> {
        Scene::try_from(file).map(Checked)
    }
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let cleaned = strip_comments(text);
    serde_json::from_str::<Checked>(&cleaned).map(|c| c.0).map_err(|e| {
        let message = e.to_string().split(" at line ").next().unwrap_or_default().to_string();
        let (line, column) = if e.line() == 0 { end_position(&cleaned) } else { (e.line(), e.column()) };
        Error::Parse { line, column, message }
    })
}

/// 1-based position of the last non-blank character. Whole-document
/// validation errors are reported there.
fn end_position(text: &str) -> (usize, usize) {
    let end = text.trim_end();
    let line = end.lines().count().max(1);
    let column = end.rsplit('\n').next().map_or(0, |l| l.chars().count());
    (line, column)
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    parse_scene(&std::fs::read_to_string(path)?)
}

/// Pretty-printed document, optionally preceded by `//` comment lines.
pub fn to_string(scene: &Scene, header: &[&str]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("// ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string_pretty(&SceneFile::from(scene)).expect("scene serializes"));
    out.push('\n');
    out
}

/// Hex SHA-256 of the compact canonical document.
pub fn digest(scene: &Scene) -> String {
    let canonical = serde_json::to_string(&SceneFile::from(scene)).expect("scene serializes");
    Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}
