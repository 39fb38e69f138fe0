//! Three-scale squeezing of the double-layer profile: the power
//! parametrization of widths, heights and gap, classification of the
//! `(mu, nu, tau)` power space, the realized point interactions in the
//! squeezing limit, and epsilon-sweep convergence verification.

use crate::error::{Error, Result};
use crate::numerics::{cosk, sink};
use crate::resonance::{residual, BaseSet, POLE_MARGIN};
use crate::scattering::{double_layer_closed_form, DoubleLayerPotential, TransferMatrix};

/// Absolute tolerance for equality comparisons against the set manifolds.
pub const REGION_TOL: f64 = 1e-12;
/// Default gate on the resonance residual when deciding the limit interaction.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// A swept `|lam21|` above this, still growing, is reported as divergence.
pub const DIVERGENCE_GATE: f64 = 1e3;
/// `|S|` below this counts as a sine-node when testing lattice resonances.
const LATTICE_TOL: f64 = 1e-10;

/// The squeezing parametrization: widths `l1 = eps`, `l2 = eta eps^(1-mu+nu)`,
/// heights `h1 = a1 eps^(-mu)`, `h2 = a2 eps^(-nu)`, gap `r = c eps^tau`
/// (prefactor `c0` on the `tau = 2(mu-1)` face).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeSpec {
    pub mu: f64,
    pub nu: f64,
    pub tau: f64,
    pub eta: f64,
    pub a1: f64,
    pub a2: f64,
    pub c: f64,
    pub c0: f64,
}

impl SqueezeSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: f64,
        nu: f64,
        tau: f64,
        eta: f64,
        a1: f64,
        a2: f64,
        c: f64,
        c0: f64,
    ) -> Result<Self> {
        for (v, name) in [
            (mu, "mu"),
            (nu, "nu"),
            (tau, "tau"),
            (eta, "eta"),
            (a1, "a1"),
            (a2, "a2"),
            (c, "c"),
            (c0, "c0"),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if mu < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mu = {mu} must be >= 1 (mu = 1 is the delta-profile regime)"
            )));
        }
        if nu <= 0.0 || tau <= 0.0 || eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nu = {nu}, tau = {tau}, eta = {eta} must all be > 0"
            )));
        }
        if 1.0 - mu + nu <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "1 - mu + nu = {} must be > 0 so the second layer shrinks",
                1.0 - mu + nu
            )));
        }
        if c < 0.0 || c0 < 0.0 {
            return Err(Error::InvalidParameter(format!("c = {c}, c0 = {c0} must be >= 0")));
        }
        Ok(SqueezeSpec { mu, nu, tau, eta, a1, a2, c, c0 })
    }

    /// True when `tau` sits on the `tau = 2(mu-1)` face, where the gap is
    /// realized with the `c0` prefactor.
    fn on_second_face(&self) -> bool {
        self.mu > 1.0 && (self.tau - 2.0 * (self.mu - 1.0)).abs() <= REGION_TOL
    }

    /// The prefactor actually used for `r = prefactor * eps^tau`.
    pub fn distance_prefactor(&self) -> f64 {
        if self.on_second_face() {
            self.c0
        } else {
            self.c
        }
    }
}

/// Where a `(mu, nu, tau)` triple sits in the classified power space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParameterRegion {
    /// Vertex of the first-kind face over B0.
    P1,
    /// First-kind edge over B1.
    K1,
    /// First-kind edge over B2.
    L1,
    /// First-kind plane over the open base set (`tau = mu - 1`).
    QK,
    /// Vertex of the second-kind face over B0.
    P2,
    /// Second-kind edge over B1.
    K2,
    /// Second-kind edge over B2.
    L2,
    /// Second-kind plane over the open base set (`tau = 2(mu - 1)`).
    QS,
    /// Opaque volume between the two faces.
    V1,
    /// Reflectionless volume above the second face.
    V2,
    /// Boundary walls of V1 / V2 over B0.
    N1,
    N2,
    /// Boundary walls over B1.
    Q1,
    Q2,
    /// Boundary walls over B2.
    O1,
    O2,
    /// Anything else in the admissible domain.
    Outside,
}

impl ParameterRegion {
    /// The base set of the `(mu, nu)` plane beneath this region.
    pub fn base_set(&self) -> Option<BaseSet> {
        use ParameterRegion::*;
        match self {
            QK | QS | V1 | V2 => Some(BaseSet::Omega),
            P1 | P2 | N1 | N2 => Some(BaseSet::B0),
            K1 | K2 | Q1 | Q2 => Some(BaseSet::B1),
            L1 | L2 | O1 | O2 => Some(BaseSet::B2),
            Outside => None,
        }
    }

    pub fn label(&self) -> &'static str {
        use ParameterRegion::*;
        match self {
            P1 => "P1",
            K1 => "K1",
            L1 => "L1",
            QK => "Q_K",
            P2 => "P2",
            K2 => "K2",
            L2 => "L2",
            QS => "Q_S",
            V1 => "V1",
            V2 => "V2",
            N1 => "N1",
            N2 => "N2",
            Q1 => "Q1",
            Q2 => "Q2",
            O1 => "O1",
            O2 => "O2",
            Outside => "Outside",
        }
    }
}

impl std::fmt::Display for ParameterRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies a `(mu, nu, tau)` triple, with tolerance [`REGION_TOL`] on the
/// set manifolds. Total on `mu > 1`, `nu > 0`, `tau > 0`.
pub fn classify_region(mu: f64, nu: f64, tau: f64) -> Result<ParameterRegion> {
    if !mu.is_finite() || !nu.is_finite() || !tau.is_finite() {
        return Err(Error::NonFinite("classification input"));
    }
    if mu <= 1.0 || nu <= 0.0 || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "classification needs mu > 1, nu > 0, tau > 0; got ({mu}, {nu}, {tau})"
        )));
    }
    use ParameterRegion::*;

    let base = if (mu - 2.0).abs() <= REGION_TOL {
        if (nu - 2.0).abs() <= REGION_TOL {
            Some(BaseSet::B0)
        } else if nu > 2.0 {
            Some(BaseSet::B2)
        } else {
            None
        }
    } else if mu < 2.0 {
        let edge = 2.0 * (mu - 1.0);
        if (nu - edge).abs() <= REGION_TOL {
            Some(BaseSet::B1)
        } else if nu > edge {
            Some(BaseSet::Omega)
        } else {
            None
        }
    } else {
        None
    };

    let Some(base) = base else { return Ok(Outside) };

    let (lo, hi) = match base {
        BaseSet::B0 | BaseSet::B2 => (1.0, 2.0),
        _ => (mu - 1.0, 2.0 * (mu - 1.0)),
    };
    let region = if (tau - lo).abs() <= REGION_TOL {
        match base {
            BaseSet::Omega => QK,
            BaseSet::B0 => P1,
            BaseSet::B1 => K1,
            BaseSet::B2 => L1,
        }
    } else if (tau - hi).abs() <= REGION_TOL {
        match base {
            BaseSet::Omega => QS,
            BaseSet::B0 => P2,
            BaseSet::B1 => K2,
            BaseSet::B2 => L2,
        }
    } else if tau > lo && tau < hi {
        match base {
            BaseSet::Omega => V1,
            BaseSet::B0 => N1,
            BaseSet::B1 => Q1,
            BaseSet::B2 => O1,
        }
    } else if tau > hi {
        match base {
            BaseSet::Omega => V2,
            BaseSet::B0 => N2,
            BaseSet::B1 => Q2,
            BaseSet::B2 => O2,
        }
    } else {
        Outside
    };
    Ok(region)
}

/// The point interaction realized in the squeezing limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointInteraction {
    /// Continuous wavefunction, `lam21 = alpha`.
    Delta { alpha: f64 },
    /// Diagonal matrix `diag(theta, 1/theta)`.
    DeltaPrimeDiagonal { theta: f64 },
    /// Mixed form `[[theta, 0], [alpha, 1/theta]]`.
    DeltaDeltaPrime { theta: f64, alpha: f64 },
    /// `sign * I`.
    Reflectionless { sign: f64 },
    /// Separated halves, zero transmission; no finite limit matrix.
    Dirichlet,
}

impl PointInteraction {
    pub fn limit_matrix(&self) -> Option<TransferMatrix> {
        match *self {
            PointInteraction::Delta { alpha } => {
                Some(TransferMatrix { lam11: 1.0, lam12: 0.0, lam21: alpha, lam22: 1.0 })
            }
            PointInteraction::DeltaPrimeDiagonal { theta } => {
                Some(TransferMatrix { lam11: theta, lam12: 0.0, lam21: 0.0, lam22: 1.0 / theta })
            }
            PointInteraction::DeltaDeltaPrime { theta, alpha } => {
                Some(TransferMatrix { lam11: theta, lam12: 0.0, lam21: alpha, lam22: 1.0 / theta })
            }
            PointInteraction::Reflectionless { sign } => {
                Some(TransferMatrix { lam11: sign, lam12: 0.0, lam21: 0.0, lam22: sign })
            }
            PointInteraction::Dirichlet => None,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            PointInteraction::Delta { .. } => Some(1.0),
            PointInteraction::DeltaPrimeDiagonal { theta } => Some(theta),
            PointInteraction::DeltaDeltaPrime { theta, .. } => Some(theta),
            PointInteraction::Reflectionless { sign } => Some(sign),
            PointInteraction::Dirichlet => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            PointInteraction::Delta { alpha } => Some(alpha),
            PointInteraction::DeltaPrimeDiagonal { .. } => Some(0.0),
            PointInteraction::DeltaDeltaPrime { alpha, .. } => Some(alpha),
            PointInteraction::Reflectionless { .. } => Some(0.0),
            PointInteraction::Dirichlet => None,
        }
    }

    /// Scale for entrywise comparison against swept matrices.
    pub fn comparison_scale(&self) -> f64 {
        let t = self.theta().map_or(0.0, f64::abs);
        let a = self.alpha().map_or(0.0, f64::abs);
        t.max(a).max(1.0)
    }
}

impl std::fmt::Display for PointInteraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PointInteraction::Delta { alpha } => write!(f, "Delta({alpha})"),
            PointInteraction::DeltaPrimeDiagonal { theta } => {
                write!(f, "DeltaPrimeDiagonal({theta})")
            }
            PointInteraction::DeltaDeltaPrime { theta, alpha } => {
                write!(f, "DeltaDeltaPrime(theta={theta};alpha={alpha})")
            }
            PointInteraction::Reflectionless { sign } => {
                write!(f, "Reflectionless({})", if sign >= 0.0 { "+1" } else { "-1" })
            }
            PointInteraction::Dirichlet => f.write_str("Dirichlet"),
        }
    }
}

/// The finite-size profile realized at squeezing parameter `eps`.
pub fn realize_potential(spec: &SqueezeSpec, eps: f64) -> Result<DoubleLayerPotential> {
    check_eps(eps)?;
    DoubleLayerPotential::new(
        spec.a1 * eps.powf(-spec.mu),
        eps,
        spec.distance_prefactor() * eps.powf(spec.tau),
        spec.a2 * eps.powf(-spec.nu),
        spec.eta * eps.powf(1.0 - spec.mu + spec.nu),
    )
}

/// Squared arguments of the layer trig factors at finite `eps`:
/// `A1^2 = -a1 eps^(2-mu)` and `A2^2 = -eta^2 a2 eps^(2(1-mu)+nu)`.
pub fn a_arguments(spec: &SqueezeSpec, eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let a1sq = -spec.a1 * eps.powf(2.0 - spec.mu);
    let a2sq = -spec.eta * spec.eta * spec.a2 * eps.powf(2.0 * (1.0 - spec.mu) + spec.nu);
    Ok((a1sq, a2sq))
}

fn check_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 || eps > 1.0 {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1]")));
    }
    Ok(())
}

/// Finite-`eps` residual of the resonance condition, scaled by `eps^(1-mu)`
/// so its limit is the region residual of [`crate::resonance::residual`]:
/// `eps^(1-mu) r + C(A1^2)/(a1 S(A1^2)) + C(A2^2)/(eta a2 S(A2^2))`,
/// evaluated at the zero-energy reference scale.
pub fn finite_eps_residual(spec: &SqueezeSpec, eps: f64) -> Result<f64> {
    let (z1, z2) = a_arguments(spec, eps)?;
    if spec.a1 == 0.0 {
        return Err(Error::Pole { factor: "layer 1 kernel (a1 = 0)".into() });
    }
    if spec.a2 == 0.0 {
        return Err(Error::Pole { factor: "layer 2 kernel (a2 = 0)".into() });
    }
    let s1 = sink(z1, 1.0);
    if s1.abs() < POLE_MARGIN {
        return Err(Error::Pole { factor: "layer 1 kernel".into() });
    }
    let s2 = sink(z2, 1.0);
    if s2.abs() < POLE_MARGIN {
        return Err(Error::Pole { factor: "layer 2 kernel".into() });
    }
    let gap = spec.distance_prefactor() * eps.powf(spec.tau + 1.0 - spec.mu);
    Ok(gap + cosk(z1, 1.0) / (spec.a1 * s1) + cosk(z2, 1.0) / (spec.eta * spec.a2 * s2))
}

/// Diagonal element of the limit matrix on a resonance set; `c = 0` gives the
/// second/third-kind form. Falls back to the sine-ratio expression where the
/// cosine denominator vanishes (the two agree on the resonance set).
fn theta_on_set(set: BaseSet, a1: f64, a2: f64, eta: f64, c: f64) -> f64 {
    let c1 = cosk(-a1, 1.0);
    let s1 = sink(-a1, 1.0);
    let c2 = cosk(-a2, eta);
    let s2 = sink(-a2, eta);
    match set {
        BaseSet::Omega => 1.0 + c * a1,
        BaseSet::B0 => {
            if c2.abs() > 1e-6 {
                (c1 + c * a1 * s1) / c2
            } else {
                -(a1 / a2) * s1 / s2
            }
        }
        BaseSet::B1 => {
            if c2.abs() > 1e-6 {
                (1.0 + c * a1) / c2
            } else {
                -a1 / (a2 * s2)
            }
        }
        BaseSet::B2 => c1 + c * a1 * s1,
    }
}

/// Off-diagonal strength of the second-kind limit matrix, proportional to the
/// gap prefactor `c0`.
fn alpha_on_set(set: BaseSet, a1: f64, a2: f64, eta: f64, c0: f64) -> f64 {
    let s1 = sink(-a1, 1.0);
    let s2 = sink(-a2, eta);
    let base = a1 * a2;
    c0 * match set {
        BaseSet::Omega => eta * base,
        BaseSet::B0 => base * s1 * s2,
        BaseSet::B1 => base * s2,
        BaseSet::B2 => eta * base * s1,
    }
}

/// Resonance test with the lattice special cases: a vanished layer (`a = 0`)
/// keeps the system resonant only if the other layer sits on a sine node.
fn on_resonance(set: BaseSet, a1: f64, a2: f64, eta: f64, c: f64, tol: f64) -> bool {
    if a1 == 0.0 && a2 == 0.0 {
        return true;
    }
    if a1 == 0.0 {
        return matches!(set, BaseSet::B0 | BaseSet::B1) && sink(-a2, eta).abs() <= LATTICE_TOL;
    }
    if a2 == 0.0 {
        return matches!(set, BaseSet::B0 | BaseSet::B2) && sink(-a1, 1.0).abs() <= LATTICE_TOL;
    }
    match residual(set, a1, a2, eta, c) {
        Ok(r) => r.abs() <= tol,
        Err(_) => false,
    }
}

/// The limit point interaction of a squeeze parametrization, with the default
/// residual gate [`DEFAULT_RESIDUAL_TOL`].
pub fn limit_interaction(spec: &SqueezeSpec) -> Result<PointInteraction> {
    limit_interaction_with_tol(spec, DEFAULT_RESIDUAL_TOL)
}

/// As [`limit_interaction`] with an explicit residual gate.
pub fn limit_interaction_with_tol(spec: &SqueezeSpec, tol: f64) -> Result<PointInteraction> {
    if (spec.mu - 1.0).abs() <= REGION_TOL {
        // delta-profile regime: both layers keep h*l fixed
        return Ok(PointInteraction::Delta { alpha: spec.a1 + spec.eta * spec.a2 });
    }
    let region = classify_region(spec.mu, spec.nu, spec.tau)?;
    let base = region
        .base_set()
        .ok_or_else(|| Error::UnsupportedRegion { region: region.to_string() })?;
    let (a1, a2, eta) = (spec.a1, spec.a2, spec.eta);
    let rho = spec.distance_prefactor();

    use ParameterRegion::*;
    let interaction = match region {
        QK | P1 | K1 | L1 => {
            if on_resonance(base, a1, a2, eta, rho, tol) {
                PointInteraction::DeltaPrimeDiagonal { theta: theta_on_set(base, a1, a2, eta, rho) }
            } else {
                PointInteraction::Dirichlet
            }
        }
        QS | P2 | K2 | L2 => {
            if on_resonance(base, a1, a2, eta, 0.0, tol) {
                PointInteraction::DeltaDeltaPrime {
                    theta: theta_on_set(base, a1, a2, eta, 0.0),
                    alpha: alpha_on_set(base, a1, a2, eta, rho),
                }
            } else {
                PointInteraction::Dirichlet
            }
        }
        V2 | N2 | Q2 | O2 => {
            if on_resonance(base, a1, a2, eta, 0.0, tol) {
                if base == BaseSet::Omega {
                    PointInteraction::Reflectionless { sign: 1.0 }
                } else {
                    PointInteraction::DeltaPrimeDiagonal {
                        theta: theta_on_set(base, a1, a2, eta, 0.0),
                    }
                }
            } else {
                PointInteraction::Dirichlet
            }
        }
        V1 | N1 | Q1 | O1 => PointInteraction::Dirichlet,
        Outside => unreachable!("Outside has no base set"),
    };
    Ok(interaction)
}

/// The residual governing the parametrization's region, if one applies: the
/// first-kind rows use the realized gap prefactor, all others the `c = 0`
/// rows. `None` for the delta regime, unclassified triples, and residual poles.
pub fn resonance_residual(spec: &SqueezeSpec) -> Result<Option<f64>> {
    if (spec.mu - 1.0).abs() <= REGION_TOL {
        return Ok(None);
    }
    let region = classify_region(spec.mu, spec.nu, spec.tau)?;
    let Some(base) = region.base_set() else { return Ok(None) };
    use ParameterRegion::*;
    let c_eff = match region {
        QK | P1 | K1 | L1 => spec.distance_prefactor(),
        _ => 0.0,
    };
    Ok(residual(base, spec.a1, spec.a2, spec.eta, c_eff).ok())
}

/// `theta = (2 + gamma) / (2 - gamma)`.
pub fn kurasov_theta(gamma: f64) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    if gamma == 2.0 || gamma == -2.0 {
        return Err(Error::ExcludedCoupling { gamma });
    }
    Ok((2.0 + gamma) / (2.0 - gamma))
}

/// The layer intensities realizing coupling `gamma` on the first-kind
/// resonance set: `a1 = 2 gamma / (c (2 - gamma))`,
/// `a2 = -2 gamma / (eta c (2 + gamma))`.
pub fn kurasov_intensities(gamma: f64, c: f64, eta: f64) -> Result<(f64, f64)> {
    if !gamma.is_finite() || !c.is_finite() || !eta.is_finite() {
        return Err(Error::NonFinite("kurasov_intensities argument"));
    }
    if gamma == 2.0 || gamma == -2.0 {
        return Err(Error::ExcludedCoupling { gamma });
    }
    if c <= 0.0 || eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("c = {c} and eta = {eta} must be > 0")));
    }
    let a1 = 2.0 * gamma / (c * (2.0 - gamma));
    let a2 = -2.0 * gamma / (eta * c * (2.0 + gamma));
    Ok((a1, a2))
}

/// Strength of the distributional dipole realized on a boundary set when
/// `a1 + eta a2 = 0`.
pub fn delta_prime_strength(set: BaseSet, a1: f64, eta: f64) -> Result<f64> {
    if !a1.is_finite() || !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidParameter("needs finite a1 and eta > 0".into()));
    }
    let factor = match set {
        BaseSet::B0 => 1.0 + eta,
        BaseSet::B1 => eta,
        BaseSet::B2 => 1.0,
        BaseSet::Omega => {
            return Err(Error::InvalidParameter(
                "delta_prime_strength is defined on the boundary sets".into(),
            ))
        }
    };
    Ok(a1 / 2.0 * factor)
}

/// Limit matrix of two merged delta profiles: `[[1, 0], [alpha1 + alpha2, 1]]`.
pub fn delta_limit(alpha1: f64, alpha2: f64) -> TransferMatrix {
    TransferMatrix { lam11: 1.0, lam12: 0.0, lam21: alpha1 + alpha2, lam22: 1.0 }
}

/// Matrices, errors and fitted order of an epsilon sweep toward the limit
/// interaction.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub eps_values: Vec<f64>,
    pub matrices: Vec<TransferMatrix>,
    pub target: PointInteraction,
    /// Entrywise distance to the limit matrix, scaled by
    /// `max(1, |theta|, |alpha|)`; for a Dirichlet target, `|lam21|` as a
    /// divergence indicator.
    pub errors_per_eps: Vec<f64>,
    /// Log-log slope of the errors against `eps` (NaN when underdetermined).
    pub fitted_order: f64,
    /// Divergence gate: the indicator exceeds [`DIVERGENCE_GATE`] and still
    /// grows at the end of the sweep.
    pub diverged: bool,
}

/// Sweeps the closed-form matrix of the realized profile over a strictly
/// decreasing list of squeezing parameters. Overflow at small `eps` is
/// reported through infinite error entries and the divergence gate, not as a
/// failure.
pub fn epsilon_sweep(spec: &SqueezeSpec, energy: f64, eps_list: &[f64]) -> Result<ConvergenceReport> {
    epsilon_sweep_with_tol(spec, energy, eps_list, DEFAULT_RESIDUAL_TOL)
}

/// As [`epsilon_sweep`] with an explicit residual gate for the target decision.
pub fn epsilon_sweep_with_tol(
    spec: &SqueezeSpec,
    energy: f64,
    eps_list: &[f64],
    tol: f64,
) -> Result<ConvergenceReport> {
    if !energy.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    if eps_list.is_empty() {
        return Err(Error::InvalidParameter("eps_list must not be empty".into()));
    }
    for pair in eps_list.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidParameter("eps_list must be strictly decreasing".into()));
        }
    }
    let target = limit_interaction_with_tol(spec, tol)?;
    let limit = target.limit_matrix();
    let scale = target.comparison_scale();

    let mut matrices = Vec::with_capacity(eps_list.len());
    let mut errors = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let m = double_layer_closed_form(&realize_potential(spec, eps)?, energy);
        let err = match limit {
            Some(lam) if m.is_finite() => {
                let d = (m.lam11 - lam.lam11)
                    .abs()
                    .max((m.lam12 - lam.lam12).abs())
                    .max((m.lam21 - lam.lam21).abs())
                    .max((m.lam22 - lam.lam22).abs());
                d / scale
            }
            Some(_) => f64::INFINITY,
            None if m.lam21.is_finite() => m.lam21.abs(),
            None => f64::INFINITY,
        };
        matrices.push(m);
        errors.push(err);
    }

    Ok(ConvergenceReport {
        eps_values: eps_list.to_vec(),
        fitted_order: log_log_slope(eps_list, &errors),
        diverged: divergence_detected(&errors),
        matrices,
        errors_per_eps: errors,
        target,
    })
}

fn log_log_slope(eps: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(errors)
        .filter(|(e, r)| r.is_finite() && **r > 0.0 && **e > 0.0)
        .map(|(e, r)| (e.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

fn divergence_detected(errors: &[f64]) -> bool {
    let n = errors.len();
    if n == 0 {
        return false;
    }
    let last = errors[n - 1];
    if !(last > DIVERGENCE_GATE) {
        return last.is_infinite()
            || (n >= 2 && errors[n - 2].is_infinite());
    }
    match n {
        1 => true,
        2 => last > errors[0],
        _ => last > errors[n - 2] && errors[n - 2] > errors[n - 3],
    }
}
