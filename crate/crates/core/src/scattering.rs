//! Exact transfer matrices of the finite-range double-layer potential by three
//! independent routes (closed form, slab product, fixed-step integration of the
//! Schrodinger equation), plus plane-wave scattering amplitudes.
//!
//! All matrix entries are built from the entire kernels of [`crate::numerics`],
//! never from raw wavenumber divisions, so threshold energies (`E = h_j`,
//! `E = 0`) are ordinary points.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{cosk, sink};

/// Tolerance used by the perfect-transmission condition checks.
const CONDITION_TOL: f64 = 1e-10;
/// Relative determinant defect accepted by [`transmission`].
const UNIMODULAR_TOL: f64 = 1e-8;

/// The piecewise-constant double-layer profile: a layer of height `h1` and
/// width `l1`, a free gap of width `r`, then a layer of height `h2`, width `l2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleLayerPotential {
    pub h1: f64,
    pub l1: f64,
    pub r: f64,
    pub h2: f64,
    pub l2: f64,
}

impl DoubleLayerPotential {
    pub fn new(h1: f64, l1: f64, r: f64, h2: f64, l2: f64) -> Result<Self> {
        for (v, name) in [(h1, "h1"), (l1, "l1"), (r, "r"), (h2, "h2"), (l2, "l2")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(match name {
                    "h1" => "h1",
                    "l1" => "l1",
                    "r" => "r",
                    "h2" => "h2",
                    _ => "l2",
                }));
            }
        }
        if l1 <= 0.0 || l2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "layer widths must be positive, got l1 = {l1}, l2 = {l2}"
            )));
        }
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!("gap r = {r} must be >= 0")));
        }
        Ok(DoubleLayerPotential { h1, l1, r, h2, l2 })
    }

    /// Total support length `l1 + r + l2`.
    pub fn total_length(&self) -> f64 {
        self.l1 + self.r + self.l2
    }
}

/// Real 2x2 transfer matrix connecting `(psi, psi')` at the left edge of a
/// potential to the right edge. Unimodular for any real energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub lam11: f64,
    pub lam12: f64,
    pub lam21: f64,
    pub lam22: f64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix =
        TransferMatrix { lam11: 1.0, lam12: 0.0, lam21: 0.0, lam22: 1.0 };

    pub fn det(&self) -> f64 {
        self.lam11 * self.lam22 - self.lam12 * self.lam21
    }

    /// `|det - 1|` relative to the magnitude of the products entering it;
    /// the natural scale for Wronskian conservation in floating point.
    pub fn det_defect(&self) -> f64 {
        let scale = (self.lam11 * self.lam22).abs() + (self.lam12 * self.lam21).abs();
        (self.det() - 1.0).abs() / scale.max(1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.lam11
            .abs()
            .max(self.lam12.abs())
            .max(self.lam21.abs())
            .max(self.lam22.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.lam11.is_finite()
            && self.lam12.is_finite()
            && self.lam21.is_finite()
            && self.lam22.is_finite()
    }

    /// Largest entrywise deviation from `other`, relative to the common scale
    /// `max(1, max_abs)` of the two matrices.
    pub fn entrywise_distance(&self, other: &TransferMatrix) -> f64 {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        let d = (self.lam11 - other.lam11)
            .abs()
            .max((self.lam12 - other.lam12).abs())
            .max((self.lam21 - other.lam21).abs())
            .max((self.lam22 - other.lam22).abs());
        d / scale
    }
}

impl std::ops::Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            lam11: self.lam11 * rhs.lam11 + self.lam12 * rhs.lam21,
            lam12: self.lam11 * rhs.lam12 + self.lam12 * rhs.lam22,
            lam21: self.lam21 * rhs.lam11 + self.lam22 * rhs.lam21,
            lam22: self.lam21 * rhs.lam12 + self.lam22 * rhs.lam22,
        }
    }
}

/// Scattering amplitudes and probabilities for a plane wave crossing the
/// region `[0, L]` described by a transfer matrix.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringResult {
    /// Transmission amplitude.
    pub t: Complex64,
    /// Reflection amplitude.
    pub r: Complex64,
    /// Transmission probability `|t|^2`.
    pub transmission: f64,
    /// Reflection probability `|r|^2`.
    pub reflection: f64,
}

/// Which family of perfect-transmission conditions a double-well profile satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerfectTransmissionFamily {
    /// `sqrt(-h1) l1 = m pi` and `sqrt(-h2) l2 = n pi`.
    SineNodes { m: u32, n: u32 },
    /// `h1 = h2` and `sqrt(-h1) l1 = (n + 1/2) pi`.
    EqualDepthAntinodes { n: u32 },
}

/// Squared wavenumber `zeta = E - h` of a layer of height `h` at energy `E`.
pub fn wavenumber_squared(energy: f64, h: f64) -> f64 {
    energy - h
}

/// Transfer matrix of a single constant slab of height `h` and width `l`.
pub fn slab_matrix(h: f64, l: f64, energy: f64) -> TransferMatrix {
    let zeta = wavenumber_squared(energy, h);
    let c = cosk(zeta, l);
    let s = sink(zeta, l);
    TransferMatrix { lam11: c, lam12: s, lam21: -zeta * s, lam22: c }
}

/// Transfer matrix of a free segment of width `r`.
pub fn free_matrix(r: f64, energy: f64) -> TransferMatrix {
    slab_matrix(0.0, r, energy)
}

/// Transfer matrix of the double-layer profile, written out as a single
/// closed-form expression in the entire kernels.
pub fn double_layer_closed_form(pot: &DoubleLayerPotential, energy: f64) -> TransferMatrix {
    let z1 = wavenumber_squared(energy, pot.h1);
    let z2 = wavenumber_squared(energy, pot.h2);
    let zr = energy;
    let c1 = cosk(z1, pot.l1);
    let s1 = sink(z1, pot.l1);
    let c2 = cosk(z2, pot.l2);
    let s2 = sink(z2, pot.l2);
    let cr = cosk(zr, pot.r);
    let sr = sink(zr, pot.r);
    TransferMatrix {
        lam11: (c1 * c2 - z1 * s1 * s2) * cr - (z1 * s1 * c2 + zr * c1 * s2) * sr,
        lam12: (s1 * c2 + c1 * s2) * cr + (c1 * c2 - zr * s1 * s2) * sr,
        lam21: -(z1 * s1 * c2 + z2 * c1 * s2) * cr - (zr * c1 * c2 - z1 * z2 * s1 * s2) * sr,
        lam22: (c1 * c2 - z2 * s1 * s2) * cr - (zr * s1 * c2 + z2 * c1 * s2) * sr,
    }
}

/// The same matrix by composition `slab(h2, l2) * free(r) * slab(h1, l1)`;
/// serves as an independent check of the closed form.
pub fn double_layer_product(pot: &DoubleLayerPotential, energy: f64) -> TransferMatrix {
    slab_matrix(pot.h2, pot.l2, energy)
        * free_matrix(pot.r, energy)
        * slab_matrix(pot.h1, pot.l1, energy)
}

/// Transfer matrix by direct fixed-step 4th-order integration of
/// `-psi'' + V psi = E psi` for the two fundamental solutions.
///
/// Refuses steps coarser than a tenth of the shortest segment.
pub fn ode_matrix(pot: &DoubleLayerPotential, energy: f64, step: f64) -> Result<TransferMatrix> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidParameter(format!("step = {step} must be > 0")));
    }
    let mut max_step = pot.l1.min(pot.l2);
    if pot.r > 0.0 {
        max_step = max_step.min(pot.r);
    }
    max_step /= 10.0;
    if step > max_step {
        return Err(Error::StepTooLarge { step, max_step });
    }

    // State: two columns (psi, psi') with initial data (1, 0) and (0, 1).
    let mut y = [1.0, 0.0, 0.0, 1.0];
    for (h, len) in [(pot.h1, pot.l1), (0.0, pot.r), (pot.h2, pot.l2)] {
        if len == 0.0 {
            continue;
        }
        let n = (len / step).ceil() as usize;
        let dx = len / n as f64;
        let q = h - energy; // psi'' = q psi
        for _ in 0..n {
            y = rk4_step(y, q, dx);
        }
    }
    Ok(TransferMatrix { lam11: y[0], lam12: y[2], lam21: y[1], lam22: y[3] })
}

fn rk4_step(y: [f64; 4], q: f64, dx: f64) -> [f64; 4] {
    let f = |y: [f64; 4]| [y[1], q * y[0], y[3], q * y[2]];
    let k1 = f(y);
    let k2 = f(advance(y, k1, dx / 2.0));
    let k3 = f(advance(y, k2, dx / 2.0));
    let k4 = f(advance(y, k3, dx));
    let mut out = y;
    for i in 0..4 {
        out[i] += dx / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn advance(y: [f64; 4], k: [f64; 4], dx: f64) -> [f64; 4] {
    [y[0] + dx * k[0], y[1] + dx * k[1], y[2] + dx * k[2], y[3] + dx * k[3]]
}

/// Plane-wave scattering amplitudes for the region `[0, L]` whose boundary
/// data are connected by `m`, at energy `E > 0`.
///
/// `L = 0` gives the amplitudes of a point interaction; `L = l1 + r + l2`
/// references the phases to the physical edges of a finite profile.
pub fn transmission(m: &TransferMatrix, energy: f64, length: f64) -> Result<ScatteringResult> {
    if !energy.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    if energy <= 0.0 {
        return Err(Error::NonPositiveEnergy { energy });
    }
    let defect = m.det_defect();
    if !defect.is_finite() || defect > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { defect });
    }
    let k = energy.sqrt();
    let denom = Complex64::new(k * k * m.lam12 - m.lam21, k * (m.lam11 + m.lam22));
    let phase = Complex64::new(0.0, -k * length).exp();
    let t = Complex64::new(0.0, 2.0 * k) * phase / denom;
    let r = Complex64::new(k * k * m.lam12 + m.lam21, k * (m.lam22 - m.lam11)) / denom;
    Ok(ScatteringResult { t, r, transmission: t.norm_sqr(), reflection: r.norm_sqr() })
}

/// Tests whether a double-well profile (`h1, h2 <= 0`, `r = 0`) satisfies one
/// of the two perfect-transmission families, within tolerance 1e-10.
pub fn perfect_transmission_conditions(
    pot: &DoubleLayerPotential,
) -> Option<PerfectTransmissionFamily> {
    if pot.h1 > 0.0 || pot.h2 > 0.0 || pot.r.abs() > CONDITION_TOL {
        return None;
    }
    let x1 = (-pot.h1).sqrt() * pot.l1;
    let x2 = (-pot.h2).sqrt() * pot.l2;

    let near_multiple = |x: f64| -> Option<u32> {
        let n = (x / std::f64::consts::PI).round();
        if n >= 0.0 && (x - n * std::f64::consts::PI).abs() <= CONDITION_TOL {
            Some(n as u32)
        } else {
            None
        }
    };

    if let (Some(m), Some(n)) = (near_multiple(x1), near_multiple(x2)) {
        return Some(PerfectTransmissionFamily::SineNodes { m, n });
    }

    if (pot.h1 - pot.h2).abs() <= CONDITION_TOL * pot.h1.abs().max(1.0) {
        let half = x1 / std::f64::consts::PI - 0.5;
        let n = half.round();
        if n >= 0.0 && (half - n).abs() * std::f64::consts::PI <= CONDITION_TOL {
            return Some(PerfectTransmissionFamily::EqualDepthAntinodes { n: n as u32 });
        }
    }
    None
}
