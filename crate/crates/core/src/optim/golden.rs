use crate::error::{Error, Result};

use super::{Method, MinResult};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
const MAX_ITER: usize = 500;

/// Golden-section search for a convex objective on `[a, b]`.
///
/// The returned `argmin` is the best point evaluated (endpoints included), so
/// `value == objective(argmin)` exactly and flat minima are handled.
pub fn minimize_1d_convex<F>(mut objective: F, a: f64, b: f64, tol: f64) -> Result<MinResult<f64>>
where
    F: FnMut(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidSpec(format!("bad bracket [{a}, {b}]")));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = objective(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("objective({x}) = {v}")))
        }
    };

    let (mut lo, mut hi) = (a, b);
    let mut best = (lo, eval(lo)?);
    let fb = eval(hi)?;
    if fb < best.1 {
        best = (hi, fb);
    }

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_ITER {
        iterations += 1;
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.1 {
                best = (x, f);
            }
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f < best.1 {
            best = (x, f);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = eval(mid)?;
    if fm < best.1 {
        best = (mid, fm);
    }

    Ok(MinResult {
        argmin: best.0,
        value: best.1,
        iterations,
        converged: hi - lo <= tol,
        method: Method::GoldenSection,
    })
}
