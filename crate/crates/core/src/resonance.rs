//! Residuals and solution curves of the squeezing-limit resonance conditions,
//! the characteristic points organizing their branch lattice, and the discrete
//! intersection sets with the line `a1 + eta a2 = 0`.
//!
//! Every cotangent factor is evaluated through the entire kernels,
//! `cot(eta sqrt(-a))/sqrt(-a) = -C(-a, eta) / (a S(-a, eta))`, so wells and
//! barriers are handled by one real expression. Solves for `a2` are bracketed
//! between consecutive zeros of `S(-a2, eta)`, where the multiplied-out form
//! `C + w a S` takes the exact values +-1, making bisection safe.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{cosk, find_root, sink, Bracket};

/// Open exclusion margin around the zeros of `S(-a, eta)`.
pub const POLE_MARGIN: f64 = 1e-9;
/// Residual gate that every traced curve point must satisfy.
pub const RESIDUAL_GATE: f64 = 1e-8;
/// Hyperbolic kernels overflow past this argument.
const OVERFLOW_ARG: f64 = 700.0;
/// Width tolerance that drives bisection to adjacent floats; near band edges
/// the residual magnifies any leftover width by the huge slope of the
/// cotangent factor, so the solves always run to machine precision.
const SOLVE_TOL: f64 = f64::MIN_POSITIVE;

/// The base sets of the squeezing-power plane on which the resonance
/// conditions take distinct forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSet {
    Omega,
    B0,
    B1,
    B2,
}

impl std::fmt::Display for BaseSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaseSet::Omega => "Omega",
            BaseSet::B0 => "B0",
            BaseSet::B1 => "B1",
            BaseSet::B2 => "B2",
        })
    }
}

/// `cot(eta sqrt(-a)) / sqrt(-a)` as an entire-kernel ratio.
fn cot_ratio(a: f64, eta: f64, factor: &str) -> Result<f64> {
    if a == 0.0 {
        return Err(Error::Pole { factor: format!("1/a factor of {factor}") });
    }
    let s = sink(-a, eta);
    if s.abs() < POLE_MARGIN {
        return Err(Error::Pole { factor: format!("sin factor of {factor}") });
    }
    Ok(-cosk(-a, eta) / (a * s))
}

/// Residual of the region's resonance condition: zero exactly on the
/// resonance set, positive or negative off it.
pub fn residual(set: BaseSet, a1: f64, a2: f64, eta: f64, c: f64) -> Result<f64> {
    for (v, name) in [(a1, "a1"), (a2, "a2"), (eta, "eta"), (c, "c")] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
    }
    if eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be > 0")));
    }
    match set {
        BaseSet::Omega => {
            if a1 == 0.0 {
                return Err(Error::Pole { factor: "1/a1".into() });
            }
            if a2 == 0.0 {
                return Err(Error::Pole { factor: "1/(eta a2)".into() });
            }
            Ok(c + 1.0 / a1 + 1.0 / (eta * a2))
        }
        BaseSet::B0 => {
            Ok(c - cot_ratio(a1, 1.0, "cot(sqrt(-a1))")? - cot_ratio(a2, eta, "cot(eta sqrt(-a2))")?)
        }
        BaseSet::B1 => {
            if a1 == 0.0 {
                return Err(Error::Pole { factor: "1/a1".into() });
            }
            Ok(c - cot_ratio(a2, eta, "cot(eta sqrt(-a2))")? + 1.0 / a1)
        }
        BaseSet::B2 => {
            if a2 == 0.0 {
                return Err(Error::Pole { factor: "1/(eta a2)".into() });
            }
            Ok(c - cot_ratio(a1, 1.0, "cot(sqrt(-a1))")? + 1.0 / (eta * a2))
        }
    }
}

/// Zero of `sin(eta sqrt(-a))`: `s_n = -(n pi / eta)^2`.
pub fn s_point(n: usize, eta: f64) -> f64 {
    let x = n as f64 * PI / eta;
    -(x * x)
}

/// Zero of `cos(eta sqrt(-a))`: `d_n = -((n + 1/2) pi / eta)^2`.
pub fn d_point(n: usize, eta: f64) -> f64 {
    let x = (n as f64 + 0.5) * PI / eta;
    -(x * x)
}

/// The lattice roots `b_n`, `d_n`, `s_n` organizing the resonance branches.
#[derive(Clone, Debug)]
pub struct CharacteristicPoints {
    /// Roots of `cot(eta sqrt(-b)) = c sqrt(-b)`, with `b_n` in `(d_n, s_n)`.
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub s: Vec<f64>,
    pub eta: f64,
    pub c: f64,
}

/// Computes `b_n`, `d_n`, `s_n` for `n = 0..=nmax`.
pub fn characteristic_points(nmax: usize, eta: f64, c: f64) -> Result<CharacteristicPoints> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be > 0")));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidParameter(format!("c = {c} must be >= 0")));
    }
    let d: Vec<f64> = (0..=nmax).map(|n| d_point(n, eta)).collect();
    let s: Vec<f64> = (0..=nmax).map(|n| s_point(n, eta)).collect();
    let mut b = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if c == 0.0 {
            b.push(d[n]);
            continue;
        }
        // Multiplied-out form C(-b,eta) + c b S(-b,eta): finite at both ends,
        // opposite signs at (d_n, s_n) and at (d_0, 0).
        let hi = if n == 0 { 0.0 } else { s[n] };
        let bracket = Bracket::new(d[n], hi)?.with_tol(SOLVE_TOL)?;
        let root = find_root(|x| cosk(-x, eta) + c * x * sink(-x, eta), &bracket)?;
        b.push(root);
    }
    Ok(CharacteristicPoints { b, d, s, eta, c })
}

/// Closed-form resonance curve on the open base set:
/// `a2 = -a1 / (eta (1 + c a1))`, with a pole at `a1 = -1/c`.
pub fn omega_curve(a1: f64, eta: f64, c: f64) -> Result<f64> {
    if !a1.is_finite() || !eta.is_finite() || !c.is_finite() {
        return Err(Error::NonFinite("omega_curve argument"));
    }
    if eta <= 0.0 || c < 0.0 {
        return Err(Error::InvalidParameter("omega_curve needs eta > 0, c >= 0".into()));
    }
    let denom = 1.0 + c * a1;
    if denom == 0.0 {
        return Err(Error::Pole { factor: "asymptote a1 = -1/c".into() });
    }
    Ok(-a1 / (eta * denom))
}

/// One solved point of a resonance curve.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub a1: f64,
    pub a2: f64,
    pub residual: f64,
}

/// An analytically known point a branch passes through (or crosses in the
/// closure sense at a kernel pole, in which case `residual` is `None`).
#[derive(Clone, Debug)]
pub struct CharacteristicPoint {
    pub a1: f64,
    pub a2: f64,
    pub label: String,
    pub residual: Option<f64>,
}

/// A traced branch of a resonance set.
#[derive(Clone, Debug)]
pub struct ResonanceCurve {
    pub region: BaseSet,
    pub branch: usize,
    pub c: f64,
    pub eta: f64,
    pub points: Vec<CurvePoint>,
    pub characteristic: Vec<CharacteristicPoint>,
    /// Sampled abscissas that produced no point on this branch, with reasons.
    pub skipped: Vec<(f64, String)>,
}

/// Solves the branch-`n` resonance curve of a boundary set over an `a1` range.
///
/// For each sampled `a1` the `a2` unknown is bracketed between consecutive
/// zeros of `S(-a2, eta)` dictated by the branch index, or solved in closed
/// form where the condition is algebraic in `a2`. Every returned point is
/// re-verified against [`residual`] at the gate [`RESIDUAL_GATE`].
pub fn trace_curve(
    region: BaseSet,
    branch: usize,
    eta: f64,
    c: f64,
    a1_range: (f64, f64),
    npts: usize,
) -> Result<ResonanceCurve> {
    trace_curve_with_tol(region, branch, eta, c, a1_range, npts, RESIDUAL_GATE)
}

/// As [`trace_curve`] with an explicit residual gate.
#[allow(clippy::too_many_arguments)]
pub fn trace_curve_with_tol(
    region: BaseSet,
    branch: usize,
    eta: f64,
    c: f64,
    a1_range: (f64, f64),
    npts: usize,
    tol: f64,
) -> Result<ResonanceCurve> {
    if region == BaseSet::Omega {
        return Err(Error::InvalidParameter(
            "trace_curve handles the boundary sets; use omega_curve for the open set".into(),
        ));
    }
    if !eta.is_finite() || eta <= 0.0 || !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidParameter("trace_curve needs eta > 0 and c >= 0".into()));
    }
    let (lo, hi) = a1_range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if npts < 2 {
        return Err(Error::InvalidParameter(format!("npts = {npts} must be >= 2")));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("residual gate {tol} must be > 0")));
    }

    // Lattice points of the a1 variable (eta = 1 on B0/B2) used for branch gating.
    let tilde = match region {
        BaseSet::B0 | BaseSet::B2 => Some(characteristic_points(branch + 1, 1.0, c)?),
        _ => None,
    };

    let mut curve = ResonanceCurve {
        region,
        branch,
        c,
        eta,
        points: Vec::with_capacity(npts),
        characteristic: characteristic_rows(region, branch, eta, c, lo, hi)?,
        skipped: Vec::new(),
    };

    for i in 0..npts {
        let a1 = lo + (hi - lo) * i as f64 / (npts - 1) as f64;
        match solve_branch_point(region, branch, eta, c, a1, tilde.as_ref()) {
            Ok(Some(a2)) => match residual(region, a1, a2, eta, c) {
                Ok(res) if res.abs() <= tol => {
                    curve.points.push(CurvePoint { a1, a2, residual: res })
                }
                Ok(res) => curve
                    .skipped
                    .push((a1, format!("residual {res:e} above gate at solved a2 = {a2}"))),
                Err(e) => curve.skipped.push((a1, format!("solution at kernel pole: {e}"))),
            },
            Ok(None) => curve.skipped.push((a1, "no solution on this branch".into())),
            Err(e) => curve.skipped.push((a1, e.to_string())),
        }
    }
    Ok(curve)
}

/// Solves the branch's `a2` for one abscissa; `Ok(None)` means the branch has
/// no point there.
fn solve_branch_point(
    region: BaseSet,
    branch: usize,
    eta: f64,
    c: f64,
    a1: f64,
    tilde: Option<&CharacteristicPoints>,
) -> Result<Option<f64>> {
    match region {
        BaseSet::Omega => unreachable!("rejected above"),
        BaseSet::B1 => {
            if a1 == 0.0 {
                return Ok(None);
            }
            let w = c + 1.0 / a1;
            if branch == 0 {
                if a1 > 0.0 {
                    solve_band(w, eta, 0).map(Some)
                } else if c > 0.0 && a1 <= -1.0 / c {
                    Ok(None)
                } else {
                    solve_positive(w, eta)
                }
            } else if a1 < 0.0 {
                solve_band(w, eta, branch - 1).map(Some)
            } else {
                solve_band(w, eta, branch).map(Some)
            }
        }
        BaseSet::B2 => {
            let k1 = match cot_ratio(a1, 1.0, "cot(sqrt(-a1))") {
                Ok(v) => v,
                Err(_) => return Ok(None),
            };
            let tilde = tilde.expect("tilde lattice prepared for B2");
            let in_domain = if branch == 0 {
                a1 > tilde.b[0]
            } else {
                a1 > tilde.b[branch] && a1 < tilde.b[branch - 1]
            };
            if !in_domain {
                return Ok(None);
            }
            let denom = k1 - c;
            if denom == 0.0 {
                return Ok(None);
            }
            Ok(Some(1.0 / (eta * denom)))
        }
        BaseSet::B0 => {
            if a1 == 0.0 {
                return Ok(None);
            }
            let w = match cot_ratio(a1, 1.0, "cot(sqrt(-a1))") {
                Ok(k1) => c - k1,
                Err(_) => return Ok(None),
            };
            if a1 > 0.0 {
                return solve_band(w, eta, branch).map(Some);
            }
            let i = ((-a1).sqrt() / PI).floor() as usize;
            if i < branch {
                solve_band(w, eta, branch - i - 1).map(Some)
            } else if i == branch && w < 0.0 {
                let tilde = tilde.expect("tilde lattice prepared for B0");
                if a1 > tilde.b[branch] {
                    solve_positive(w, eta)
                } else {
                    Ok(None)
                }
            } else {
                Ok(None)
            }
        }
    }
}

/// Root of `C(-a, eta) + w a S(-a, eta) = 0` for `a` in `(s_{m+1}, s_m)`.
///
/// The endpoints evaluate to `(-1)^{m+1}` and `(-1)^m`, so a sign change is
/// guaranteed for every `w`, and the band holds exactly one solution.
fn solve_band(w: f64, eta: f64, m: usize) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::NonFinite("band weight"));
    }
    let lo = s_point(m + 1, eta);
    let hi = s_point(m, eta);
    let bracket = Bracket::new(lo, hi)?.with_tol(SOLVE_TOL)?;
    find_root(|a| cosk(-a, eta) + w * a * sink(-a, eta), &bracket)
}

/// Root of the same equation on `a > 0`; exists only for `w < 0`.
fn solve_positive(w: f64, eta: f64) -> Result<Option<f64>> {
    if w >= 0.0 {
        return Ok(None);
    }
    let y = (2.0 / eta).max(2.0 / w.abs());
    if eta * y > OVERFLOW_ARG {
        // Solution sits beyond hyperbolic overflow; the branch is at its asymptote.
        return Ok(None);
    }
    let mut hi = y * y;
    let h = |a: f64| cosk(-a, eta) + w * a * sink(-a, eta);
    let mut guard = 0;
    while h(hi) >= 0.0 {
        hi *= 4.0;
        guard += 1;
        if guard > 60 || eta * hi.sqrt() > OVERFLOW_ARG {
            return Ok(None);
        }
    }
    let bracket = Bracket::new(0.0, hi)?.with_tol(SOLVE_TOL)?;
    find_root(h, &bracket).map(Some)
}

/// The analytically known points of this branch inside `[lo, hi]`.
fn characteristic_rows(
    region: BaseSet,
    branch: usize,
    eta: f64,
    c: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<CharacteristicPoint>> {
    let mut rows = Vec::new();
    let mut push = |a1: f64, a2: f64, label: String| {
        if a1 >= lo && a1 <= hi {
            let res = residual(region, a1, a2, eta, c).ok();
            rows.push(CharacteristicPoint { a1, a2, label, residual: res });
        }
    };

    match region {
        BaseSet::Omega => {}
        BaseSet::B1 => {
            if branch == 0 {
                push(0.0, 0.0, "origin".into());
            } else {
                if c > 0.0 {
                    push(-1.0 / c, d_point(branch - 1, eta), format!("(-1/c, d[{}])", branch - 1));
                }
                push(0.0, s_point(branch, eta), format!("(0, s[{branch}])"));
            }
        }
        BaseSet::B2 => {
            if branch == 0 {
                push(0.0, 0.0, "origin".into());
            } else {
                if c > 0.0 {
                    push(
                        d_point(branch - 1, 1.0),
                        -1.0 / (eta * c),
                        format!("(d~[{}], -1/(eta c))", branch - 1),
                    );
                }
                push(s_point(branch, 1.0), 0.0, format!("(s~[{branch}], 0)"));
            }
        }
        BaseSet::B0 => {
            if branch == 0 {
                push(0.0, 0.0, "origin".into());
            } else {
                let pts = characteristic_points(branch, eta, c)?;
                let pts1 = characteristic_points(branch, 1.0, c)?;
                for i in 0..=branch {
                    push(
                        s_point(i, 1.0),
                        s_point(branch - i, eta),
                        format!("(s~[{i}], s[{}])", branch - i),
                    );
                }
                for i in 0..branch {
                    let j = branch - 1 - i;
                    push(pts1.b[i], pts.d[j], format!("(b~[{i}], d[{j}])"));
                    push(pts1.d[i], pts.b[j], format!("(d~[{i}], b[{j}])"));
                }
            }
        }
    }
    rows.sort_by(|p, q| p.a1.total_cmp(&q.a1));
    Ok(rows)
}

/// One intersection of a resonance branch with the line `a1 + eta a2 = 0`.
#[derive(Clone, Copy, Debug)]
pub struct GammaDeltaPrimePoint {
    pub a1: f64,
    /// Distributional strength of the resulting dipole potential.
    pub gamma: f64,
}

/// Intersections of the boundary-set resonance curves with `a1 + eta a2 = 0`,
/// up to branch `nmax`. The trivial free point `a1 = 0` is always included.
pub fn gamma_delta_prime_points(
    region: BaseSet,
    eta: f64,
    c: f64,
    nmax: usize,
) -> Result<Vec<GammaDeltaPrimePoint>> {
    if !eta.is_finite() || eta <= 0.0 || !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidParameter("needs eta > 0 and c >= 0".into()));
    }
    let mut out = Vec::with_capacity(nmax + 1);
    match region {
        BaseSet::B1 => {
            out.push(GammaDeltaPrimePoint { a1: 0.0, gamma: 0.0 });
            // sqrt(eta a1) cot(sqrt(eta a1)) = 1 + c a1, multiplied by the sinc
            // factor: one root per band ((m pi)^2, ((m+1) pi)^2) of eta*a1.
            for m in 1..=nmax {
                let lo = (m as f64 * PI).powi(2) / eta;
                let hi = ((m + 1) as f64 * PI).powi(2) / eta;
                let bracket = Bracket::new(lo, hi)?.with_tol(SOLVE_TOL)?;
                let root = find_root(
                    |a| cosk(eta * a, 1.0) - (1.0 + c * a) * sink(eta * a, 1.0),
                    &bracket,
                )?;
                out.push(GammaDeltaPrimePoint { a1: root, gamma: eta * root / 2.0 });
            }
        }
        BaseSet::B2 => {
            out.push(GammaDeltaPrimePoint { a1: 0.0, gamma: 0.0 });
            // sqrt(-a1) cot(sqrt(-a1)) = 1 - c a1: one root per band (s~[m+1], s~[m]).
            for m in 1..=nmax {
                let lo = s_point(m + 1, 1.0);
                let hi = s_point(m, 1.0);
                let bracket = Bracket::new(lo, hi)?.with_tol(SOLVE_TOL)?;
                let root = find_root(
                    |a| cosk(-a, 1.0) - (1.0 - c * a) * sink(-a, 1.0),
                    &bracket,
                )?;
                out.push(GammaDeltaPrimePoint { a1: root, gamma: root / 2.0 });
            }
        }
        _ => {
            return Err(Error::InvalidParameter(
                "gamma_delta_prime_points is defined on B1 and B2".into(),
            ))
        }
    }
    Ok(out)
}

/// A lattice point where the limit interaction is perfectly transmitting.
#[derive(Clone, Copy, Debug)]
pub struct PerfectPoint {
    pub a1: f64,
    pub a2: f64,
    /// Diagonal element of the limit matrix, `(-1)^n` for branch `n`.
    pub theta: f64,
}

/// The perfect-transmission points of the boundary-set branches up to `nmax`:
/// `(0, s_n)` on B1, `(s~_n, 0)` on B2, `(s~_i, s_j)` with `i + j = n` on B0,
/// plus the diagonal `(d~_j, d_j)` points of odd B0 branches when `eta = 1`.
pub fn perfect_points(region: BaseSet, eta: f64, nmax: usize) -> Result<Vec<PerfectPoint>> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be > 0")));
    }
    let sign = |n: usize| if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    match region {
        BaseSet::B1 => {
            for n in 0..=nmax {
                out.push(PerfectPoint { a1: 0.0, a2: s_point(n, eta), theta: sign(n) });
            }
        }
        BaseSet::B2 => {
            for n in 0..=nmax {
                out.push(PerfectPoint { a1: s_point(n, 1.0), a2: 0.0, theta: sign(n) });
            }
        }
        BaseSet::B0 => {
            for n in 0..=nmax {
                for i in 0..=n {
                    out.push(PerfectPoint {
                        a1: s_point(i, 1.0),
                        a2: s_point(n - i, eta),
                        theta: sign(n),
                    });
                }
                if eta == 1.0 && n % 2 == 1 {
                    let j = (n - 1) / 2;
                    out.push(PerfectPoint { a1: d_point(j, 1.0), a2: d_point(j, eta), theta: -1.0 });
                }
            }
        }
        BaseSet::Omega => {
            return Err(Error::InvalidParameter(
                "perfect_points is defined on the boundary sets".into(),
            ))
        }
    }
    Ok(out)
}
