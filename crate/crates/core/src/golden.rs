//! Golden-section minimization of convex functions on a closed interval.
//!
//! For a convex objective the minimizer never leaves the bracket, including
//! when the minimum is a flat plateau (segment distances under `l1` or
//! `l_inf`), so the best value seen converges to the minimum value.

/// `(3 - sqrt 5) / 2`, the fraction of the bracket cut off on each side.
const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
    /// Width of the final bracket, which contains a true minimizer.
    pub bracket: f64,
}

/// Minimize a convex `f` on `[lo, hi]` until the bracket is at most `xtol`
/// wide (or 200 iterations). Returns the best evaluated point, which always
/// includes both endpoints.
pub fn minimize<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let (mut a, mut b) = (lo, hi);
    let mut best = {
        let fa = f(a);
        let fb = f(b);
        if fa <= fb {
            (a, fa)
        } else {
            (b, fb)
        }
    };
    let mut c = a + INV_PHI_SQ * (b - a);
    let mut d = b - INV_PHI_SQ * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if b - a <= xtol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = a + INV_PHI_SQ * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = b - INV_PHI_SQ * (b - a);
            fd = f(d);
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    Minimum { arg: best.0, value: best.1, bracket: b - a }
}
