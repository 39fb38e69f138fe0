//! Branch-safe trigonometric kernels and bracketed scalar root finding.
//!
//! The kernels take the squared wavenumber `zeta = E - h` as the fundamental
//! variable, so a layer that flips between barrier (`zeta < 0`) and well
//! (`zeta > 0`) is evaluated by a single real-valued entire function instead
//! of a complex square root. Near `zeta = 0` both kernels switch to a short
//! Taylor series in `zeta * l^2`.

use crate::error::{Error, Result};

/// Switch to the Taylor series when `|zeta * l^2|` falls below this.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Default absolute tolerance for [`find_root`].
pub const DEFAULT_TOL_ABS: f64 = 1e-12;
/// Default iteration cap for [`find_root`].
pub const DEFAULT_MAX_ITER: usize = 200;

/// cos(l sqrt(zeta)), continued to cosh(l sqrt(-zeta)) for zeta < 0.
///
/// Entire in `zeta`; `C(zeta, 0) = 1` and `C(0, l) = 1`.
pub fn cos_kernel(zeta: f64, l: f64) -> Result<f64> {
    validate_kernel_args(zeta, l)?;
    Ok(cosk(zeta, l))
}

/// sin(l sqrt(zeta))/sqrt(zeta), continued to sinh(l sqrt(-zeta))/sqrt(-zeta).
///
/// Entire in `zeta`; `S(zeta, 0) = 0`, `S(0, l) = l`, and `C^2 + zeta S^2 = 1`.
pub fn sinc_kernel(zeta: f64, l: f64) -> Result<f64> {
    validate_kernel_args(zeta, l)?;
    Ok(sink(zeta, l))
}

fn validate_kernel_args(zeta: f64, l: f64) -> Result<()> {
    if !zeta.is_finite() {
        return Err(Error::NonFinite("zeta"));
    }
    if !l.is_finite() {
        return Err(Error::NonFinite("l"));
    }
    if l < 0.0 {
        return Err(Error::InvalidParameter(format!("length l = {l} must be >= 0")));
    }
    Ok(())
}

/// Unchecked cosine kernel; callers guarantee finite arguments.
pub(crate) fn cosk(zeta: f64, l: f64) -> f64 {
    let x = zeta * l * l;
    if x.abs() < SERIES_THRESHOLD {
        1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0))
    } else if zeta > 0.0 {
        (l * zeta.sqrt()).cos()
    } else {
        (l * (-zeta).sqrt()).cosh()
    }
}

/// Unchecked sinc kernel; callers guarantee finite arguments.
pub(crate) fn sink(zeta: f64, l: f64) -> f64 {
    let x = zeta * l * l;
    if x.abs() < SERIES_THRESHOLD {
        l * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)))
    } else if zeta > 0.0 {
        (l * zeta.sqrt()).sin() / zeta.sqrt()
    } else {
        (l * (-zeta).sqrt()).sinh() / (-zeta).sqrt()
    }
}

/// A root bracket `[lo, hi]` with an absolute width tolerance and iteration cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub tol_abs: f64,
    pub max_iter: usize,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite("bracket endpoint"));
        }
        if lo >= hi {
            return Err(Error::InvalidBracket { lo, hi });
        }
        Ok(Bracket { lo, hi, tol_abs: DEFAULT_TOL_ABS, max_iter: DEFAULT_MAX_ITER })
    }

    pub fn with_tol(mut self, tol_abs: f64) -> Result<Self> {
        if !tol_abs.is_finite() || tol_abs <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol_abs = {tol_abs} must be > 0")));
        }
        self.tol_abs = tol_abs;
        Ok(self)
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Result<Self> {
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        self.max_iter = max_iter;
        Ok(self)
    }
}

/// Bracketed root search: bisection with a guarded secant step.
///
/// Requires a sign change of `f` over the bracket. The returned abscissa
/// always lies inside `[lo, hi]`. Each iteration halves the bracket, so the
/// bisection convergence guarantee is kept; the secant probe only tightens
/// the bracket further when it lands strictly inside.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: &Bracket) -> Result<f64> {
    let Bracket { mut lo, mut hi, tol_abs, max_iter } = *bracket;
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NonFinite("function value at bracket endpoint"));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lo, hi, flo, fhi });
    }

    for _ in 0..max_iter {
        if hi - lo <= tol_abs {
            return Ok(0.5 * (lo + hi));
        }

        // Secant probe; falls back to pure bisection when it degenerates.
        let xs = hi - fhi * (hi - lo) / (fhi - flo);
        if xs.is_finite() && xs > lo && xs < hi {
            let fs = f(xs);
            if !fs.is_finite() {
                return Err(Error::NonFinite("function value"));
            }
            if fs == 0.0 {
                return Ok(xs);
            }
            if fs.signum() == flo.signum() {
                lo = xs;
                flo = fs;
            } else {
                hi = xs;
                fhi = fs;
            }
            if hi - lo <= tol_abs {
                return Ok(0.5 * (lo + hi));
            }
        }

        let xm = 0.5 * (lo + hi);
        if xm <= lo || xm >= hi {
            // Bracket no longer representable any tighter.
            return Ok(xm.clamp(lo, hi));
        }
        let fm = f(xm);
        if !fm.is_finite() {
            return Err(Error::NonFinite("function value"));
        }
        if fm == 0.0 {
            return Ok(xm);
        }
        if fm.signum() == flo.signum() {
            lo = xm;
            flo = fm;
        } else {
            hi = xm;
            fhi = fm;
        }
    }

    if hi - lo <= tol_abs {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::NoConvergence { iterations: max_iter, lo, hi })
    }
}
