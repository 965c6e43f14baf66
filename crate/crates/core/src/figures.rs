//! Built-in scenes: the illustrated diagrams and the counterexamples.
//!
//! Site coordinates for the two illustrated diagrams are representative
//! values chosen to give the described structure (six point sites in `l2`;
//! four two-point sites in `l_p` with `p = 2.718281828`).

use crate::norms::NormSpec;
use crate::sites::{Domain, Scene, SequenceSite, Site};

#[allow(clippy::approx_constant)]
pub const FIG2_P: f64 = 2.718281828;

fn pts(coords: &[[f64; 2]]) -> Site {
    Site::points(coords.iter().map(|c| c.to_vec()).collect()).expect("static site")
}

fn scene(half: f64, sites: Vec<Site>, norm: NormSpec) -> Scene {
    Scene::new(Domain::cube(2, half).expect("static domain"), sites, norm).expect("static scene")
}

/// Six point sites in `[-5, 5]^2` under `l2`. The point `(1, 1)` lies on
/// the bisector of sites 0 and 1.
pub fn fig1() -> Scene {
    let sites = [
        [0.0, 0.0],
        [2.0, 2.0],
        [-3.0, 2.5],
        [3.5, -2.5],
        [-2.5, -3.5],
        [3.0, 4.5],
    ];
    scene(5.0, sites.iter().map(|c| pts(&[*c])).collect(), NormSpec::L2)
}

/// Four sites of two points each; the two points of a site sit far apart so
/// cells are not connected.
pub fn fig2() -> Scene {
    let sites = [
        [[-3.0, 3.0], [2.5, -1.0]],
        [[3.0, 3.5], [-1.5, -3.0]],
        [[-3.5, -0.5], [0.5, 1.5]],
        [[3.5, -3.5], [-0.5, -0.5]],
    ];
    let norm = NormSpec::new(FIG2_P).expect("p > 1");
    scene(5.0, sites.iter().map(|s| pts(s)).collect(), norm)
}

/// `P = {(0,0)}` against `A = {(-2,0), (2,0), (0,-2)}` in `l_inf`.
pub fn fig3() -> Scene {
    scene(
        5.0,
        vec![pts(&[[0.0, 0.0]]), pts(&[[-2.0, 0.0], [2.0, 0.0], [0.0, -2.0]])],
        NormSpec::LINF,
    )
}

/// `P = {(-1,-1)}`, `A = {(1,1)}` in `l1`.
pub fn l1_pair() -> Scene {
    scene(5.0, vec![pts(&[[-1.0, -1.0]]), pts(&[[1.0, 1.0]])], NormSpec::L1)
}

/// `P = {(-10,0), (0,0)}`, `A = {(0,0), (10,0)}` in `l2`: the sites share
/// the origin and `f` vanishes on the whole strip `|x| <= 5`.
pub fn overlap() -> Scene {
    scene(
        12.0,
        vec![pts(&[[-10.0, 0.0], [0.0, 0.0]]), pts(&[[0.0, 0.0], [10.0, 0.0]])],
        NormSpec::L2,
    )
}

/// The two sequence sites, viewed through the first `dim` coordinates.
pub fn sequence(dim: usize) -> Scene {
    Scene::new(
        Domain::cube(dim, 2.0).expect("dim >= 1"),
        vec![Site::sequence(SequenceSite::P), Site::sequence(SequenceSite::A)],
        NormSpec::L2,
    )
    .expect("static scene")
}

pub fn two_points() -> Scene {
    scene(5.0, vec![pts(&[[0.0, 0.0]]), pts(&[[2.0, 0.0]])], NormSpec::L2)
}

/// Two point sites under `l_p`, `p = 2.718281828`.
pub fn two_points_fig2_norm() -> Scene {
    let norm = NormSpec::new(FIG2_P).expect("p > 1");
    scene(5.0, vec![pts(&[[-1.0, 0.5]]), pts(&[[1.5, -0.5]])], norm)
}

pub fn single_site() -> Scene {
    scene(5.0, vec![pts(&[[0.0, 0.0]])], NormSpec::L2)
}

/// `(0,0)` against a 41 x 11 patch of the lattice spanned by `(2,0)` and
/// `(0,8)` in `l_inf`. Inside `[-6, 6]^2` every omitted lattice point is
/// farther than every kept neighbor, so the truncation is exact there.
pub fn horvath_lattice() -> Scene {
    let mut others = Vec::with_capacity(41 * 11 - 1);
    for j in -5i32..=5 {
        for i in -20i32..=20 {
            if i != 0 || j != 0 {
                others.push([2.0 * i as f64, 8.0 * j as f64]);
            }
        }
    }
    scene(6.0, vec![pts(&[[0.0, 0.0]]), pts(&others)], NormSpec::LINF)
}

/// Every built-in scene with its fixture name.
pub fn catalog() -> Vec<(&'static str, Scene)> {
    vec![
        ("fig1", fig1()),
        ("fig2", fig2()),
        ("fig3", fig3()),
        ("l1_pair", l1_pair()),
        ("overlap", overlap()),
        ("sequence", sequence(8)),
        ("two_points", two_points()),
        ("two_points_e", two_points_fig2_norm()),
        ("single_site", single_site()),
        ("horvath_lattice", horvath_lattice()),
    ]
}
