//! Bracketed scalar root finding (Brent's method) and monotone inversion.

use super::ToleranceConfig;
use crate::{Error, Result};

/// Number of bracket doublings `bisect_monotone` attempts before giving up.
pub const MAX_BRACKET_EXPANSIONS: usize = 64;

struct Stop {
    /// Accept any iterate with `|f| <= f_tol`.
    f_tol: f64,
    x_abs: f64,
    x_rel: f64,
    max_iterations: usize,
}

/// Brent's method on a bracket `[xa, xb]` whose endpoint values are known.
fn brent<F>(mut f: F, xa: f64, xb: f64, fa: f64, fb: f64, stop: &Stop) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracketing(format!(
            "function is NaN at a bracket endpoint ({xa}, {xb})"
        )));
    }
    if fa == 0.0 {
        return Ok(xa);
    }
    if fb == 0.0 {
        return Ok(xb);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing(format!(
            "no sign change on [{xa}, {xb}]: f = ({fa:e}, {fb:e})"
        )));
    }

    let (mut xpre, mut xcur, mut fpre, mut fcur) = (xa, xb, fa, fb);
    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0, 0.0);

    for _ in 0..stop.max_iterations {
        if fpre != 0.0 && fcur != 0.0 && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = 0.5 * (stop.x_abs + stop.x_rel * xcur.abs());
        let sbis = 0.5 * (xblk - xcur);
        if fcur == 0.0 || fcur.abs() <= stop.f_tol || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                // secant
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                // inverse quadratic interpolation
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur)?;
        if fcur.is_nan() {
            return Err(Error::numerical(
                format!("function returned NaN at x = {xcur}"),
                xcur,
                (xblk - xcur).abs(),
            ));
        }
    }
    Err(Error::numerical(
        format!("root search exceeded {} iterations", stop.max_iterations),
        xcur,
        (xblk - xcur).abs(),
    ))
}

/// Root of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite signs.
///
/// Terminates when `|f(x)| <= abs_tol` or the bracket is narrower than
/// `rel_tol·|x| + abs_tol`. The iteration is deterministic.
pub fn find_root_bracketed<F>(f: F, lo: f64, hi: f64, tol: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    try_find_root_bracketed(|x| Ok(f(x)), lo, hi, tol)
}

/// [`find_root_bracketed`] for a fallible function; errors from `f` are
/// returned unchanged.
pub fn try_find_root_bracketed<F>(mut f: F, lo: f64, hi: f64, tol: &ToleranceConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Bracketing(format!(
            "bracket [{lo}, {hi}] is not finite"
        )));
    }
    let flo = f(lo)?;
    let fhi = f(hi)?;
    let stop = Stop {
        f_tol: tol.abs_tol,
        x_abs: tol.abs_tol,
        x_rel: tol.rel_tol,
        max_iterations: tol.max_iterations,
    };
    brent(f, lo, hi, flo, fhi, &stop)
}

/// Solves `f(x) = target` for strictly monotone `f`.
///
/// If `target` is not bracketed by `[f(lo), f(hi)]` the bracket is pushed
/// outward on the appropriate side, doubling its width each time, up to
/// [`MAX_BRACKET_EXPANSIONS`] times. On success
/// `|f(x) - target| <= rel_tol·|target| + abs_tol`, unless the bracket
/// collapsed to machine resolution first.
pub fn bisect_monotone<F>(f: F, target: f64, lo: f64, hi: f64, tol: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    try_bisect_monotone(|x| Ok(f(x)), target, lo, hi, tol)
}

/// [`bisect_monotone`] for a fallible function.
pub fn try_bisect_monotone<F>(
    mut f: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: &ToleranceConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    tol.validate()?;
    if !target.is_finite() {
        return Err(Error::domain(format!(
            "target must be finite, got {target}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Bracketing(format!(
            "invalid initial bracket [{lo}, {hi}]"
        )));
    }
    let mut glo = f(lo)? - target;
    let mut ghi = f(hi)? - target;
    if glo.is_nan() || ghi.is_nan() {
        return Err(Error::Bracketing(
            "function is NaN on the initial bracket".into(),
        ));
    }
    if glo == ghi && glo != 0.0 {
        return Err(Error::Bracketing(format!(
            "function is not strictly monotone on [{lo}, {hi}]"
        )));
    }
    let increasing = ghi > glo;

    let mut width = hi - lo;
    let mut expansions = 0;
    while glo.signum() == ghi.signum() && glo != 0.0 && ghi != 0.0 {
        if expansions == MAX_BRACKET_EXPANSIONS {
            return Err(Error::Bracketing(format!(
                "target {target} not reached after {MAX_BRACKET_EXPANSIONS} bracket expansions \
                 (bracket [{lo:e}, {hi:e}], residuals ({glo:e}, {ghi:e}))"
            )));
        }
        expansions += 1;
        // Both residuals below target on an increasing function: move right.
        let move_right = (ghi < 0.0) == increasing;
        if move_right {
            lo = hi;
            glo = ghi;
            hi += width;
        } else {
            hi = lo;
            ghi = glo;
            lo -= width;
        }
        width *= 2.0;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Bracketing(format!(
                "bracket for target {target} overflowed during expansion"
            )));
        }
        let g = f(if move_right { hi } else { lo })? - target;
        if g.is_nan() {
            return Err(Error::Bracketing(
                "function is NaN during bracket expansion".into(),
            ));
        }
        if move_right {
            ghi = g;
        } else {
            glo = g;
        }
    }

    let stop = Stop {
        f_tol: tol.rel_tol * target.abs() + tol.abs_tol,
        x_abs: f64::MIN_POSITIVE,
        x_rel: 4.0 * f64::EPSILON,
        max_iterations: tol.max_iterations,
    };
    brent(|x| Ok(f(x)? - target), lo, hi, glo, ghi, &stop)
}
