//! The two-delta comb obtained by squeezing the layers to delta profiles
//! before closing the gap: its transfer matrix at finite separation, the
//! transition classification in the rate exponent, and the bound state of the
//! attractive limit.

use crate::error::{Error, Result};
use crate::scattering::TransferMatrix;

/// Two delta wells of strengths `a1`, `a2` separated by `r`, with the common
/// amplitude prefactor `(c/r)^vartheta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoDeltaModel {
    pub a1: f64,
    pub a2: f64,
    pub c: f64,
    pub vartheta: f64,
    pub r: f64,
}

impl TwoDeltaModel {
    pub fn new(a1: f64, a2: f64, c: f64, vartheta: f64, r: f64) -> Result<Self> {
        for (v, name) in [(a1, "a1"), (a2, "a2"), (c, "c"), (vartheta, "vartheta"), (r, "r")] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if c <= 0.0 {
            return Err(Error::InvalidParameter(format!("c = {c} must be > 0")));
        }
        if !(vartheta > 0.0 && vartheta <= 1.0) {
            return Err(Error::InvalidParameter(format!("vartheta = {vartheta} must lie in (0, 1]")));
        }
        if r <= 0.0 {
            return Err(Error::InvalidParameter(format!("r = {r} must be > 0")));
        }
        Ok(TwoDeltaModel { a1, a2, c, vartheta, r })
    }
}

/// Transfer matrix of the comb at separation `r`; unimodular identically.
pub fn two_delta_matrix(m: &TwoDeltaModel) -> TransferMatrix {
    let g = m.c.powf(m.vartheta) * m.r.powf(1.0 - m.vartheta);
    let q = (m.c / m.r).powf(m.vartheta);
    TransferMatrix {
        lam11: 1.0 + g * m.a1,
        lam12: m.r,
        lam21: q * (m.a1 + m.a2 + g * m.a1 * m.a2),
        lam22: 1.0 + g * m.a2,
    }
}

/// The `r -> 0` behavior as a function of the rate exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionRegime {
    /// `vartheta < 1/2`: limit matrix is the identity.
    Reflectionless,
    /// `vartheta = 1/2`: partially transparent delta well on `a1 + a2 = 0`.
    DeltaS,
    /// `1/2 < vartheta < 1`: separated, fully reflecting halves.
    Dirichlet,
    /// `vartheta = 1`: the first-kind resonance condition applies.
    KurasovPlane,
}

impl std::fmt::Display for TransitionRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TransitionRegime::Reflectionless => "Reflectionless",
            TransitionRegime::DeltaS => "DeltaS",
            TransitionRegime::Dirichlet => "Dirichlet",
            TransitionRegime::KurasovPlane => "KurasovPlane",
        })
    }
}

/// Classifies the `r -> 0` limit by the rate exponent `vartheta` in `(0, 1]`.
pub fn transition_classify(vartheta: f64) -> Result<TransitionRegime> {
    if !vartheta.is_finite() || vartheta <= 0.0 || vartheta > 1.0 {
        return Err(Error::InvalidParameter(format!("vartheta = {vartheta} must lie in (0, 1]")));
    }
    Ok(if vartheta < 0.5 {
        TransitionRegime::Reflectionless
    } else if vartheta == 0.5 {
        TransitionRegime::DeltaS
    } else if vartheta < 1.0 {
        TransitionRegime::Dirichlet
    } else {
        TransitionRegime::KurasovPlane
    })
}

/// Bound-state energy of an attractive delta interaction of strength `alpha`:
/// `E = -alpha^2 / 4`.
pub fn bound_state_energy(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha >= 0.0 {
        return Err(Error::NoBoundState { alpha });
    }
    Ok(-alpha * alpha / 4.0)
}
