//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them on success).

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dlayer::numerics::{cos_kernel, sinc_kernel};
use dlayer::resonance::{
    characteristic_points, d_point, gamma_delta_prime_points, omega_curve, perfect_points,
    residual, s_point, trace_curve, BaseSet,
};
use dlayer::scattering::{
    double_layer_closed_form, double_layer_product, ode_matrix, transmission,
    DoubleLayerPotential, TransferMatrix,
};
use dlayer::seba::{bound_state_energy, two_delta_matrix, TwoDeltaModel};
use dlayer::squeeze::{
    classify_region, epsilon_sweep, kurasov_theta, limit_interaction, realize_potential,
    ParameterRegion, PointInteraction, SqueezeSpec,
};

struct Criterion {
    id: u32,
    name: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str) -> Self {
        Criterion { id, name, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.failures.push(detail.into());
        }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:02} {}: {}", self.id, self.name, verdict);
        for n in &self.notes {
            println!("    note: {n}");
        }
        for f in &self.failures {
            println!("    fail: {f}");
        }
        assert!(
            self.failures.is_empty(),
            "criterion {:02} {} failed:\n{}",
            self.id,
            self.name,
            self.failures.join("\n")
        );
    }
}

fn random_cases(n: usize) -> Vec<(DoubleLayerPotential, f64)> {
    let mut rng = StdRng::seed_from_u64(0x0d1a_7e55);
    (0..n)
        .map(|_| {
            let h1 = rng.gen_range(-50.0..50.0);
            let h2 = rng.gen_range(-50.0..50.0);
            let l1 = rng.gen_range(0.01..2.0);
            let l2 = rng.gen_range(0.01..2.0);
            let r = if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.01..2.0) };
            let e = rng.gen_range(-10.0..10.0);
            (DoubleLayerPotential::new(h1, l1, r, h2, l2).unwrap(), e)
        })
        .collect()
}

fn decades(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 10f64.powi(-k)).collect()
}

#[test]
fn criterion_01_matrix_triple_agreement() {
    let mut crit = Criterion::new(1, "matrix triple agreement");
    let start = Instant::now();
    let cases = random_cases(1000);

    let mut worst_product = 0.0f64;
    let mut worst_ode = 0.0f64;
    for (pot, e) in &cases {
        let closed = double_layer_closed_form(pot, *e);
        let product = double_layer_product(pot, *e);
        worst_product = worst_product.max(closed.entrywise_distance(&product));
        let ode = ode_matrix(pot, *e, 1e-4).expect("step fits every sampled segment");
        worst_ode = worst_ode.max(closed.entrywise_distance(&ode));
    }
    crit.check(
        worst_product <= 1e-9,
        format!("closed vs product worst relative deviation {worst_product:e} > 1e-9"),
    );
    crit.check(
        worst_ode <= 1e-5,
        format!("closed vs integrated worst relative deviation {worst_ode:e} > 1e-5"),
    );
    crit.note(format!("worst closed/product {worst_product:.2e}, closed/integrated {worst_ode:.2e}"));

    // step halving on a representative stiff profile: 4th-order decay
    let pot = DoubleLayerPotential::new(10.0, 0.5, 0.3, -5.0, 0.4).unwrap();
    let exact = double_layer_closed_form(&pot, 2.0);
    let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|h| ode_matrix(&pot, 2.0, *h).unwrap().entrywise_distance(&exact))
        .collect();
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        crit.check(
            ratio > 11.0 && ratio < 23.0,
            format!("step-halving error ratio {ratio:.2} outside the 4th-order window"),
        );
    }

    let elapsed = start.elapsed().as_secs_f64();
    crit.check(elapsed < 10.0, format!("runtime {elapsed:.2} s exceeds 10 s"));
    crit.note(format!("runtime {elapsed:.2} s"));
    crit.finish();
}

#[test]
fn criterion_02_conservation() {
    let mut crit = Criterion::new(2, "wronskian and flux conservation");
    let cases = random_cases(1000);

    let mut worst_det = 0.0f64;
    let mut worst_flux = 0.0f64;
    for (pot, e) in &cases {
        let closed = double_layer_closed_form(pot, *e);
        let product = double_layer_product(pot, *e);
        worst_det = worst_det.max(closed.det_defect()).max(product.det_defect());
        if *e > 0.0 {
            let s = transmission(&closed, *e, pot.total_length()).unwrap();
            worst_flux = worst_flux.max((s.transmission + s.reflection - 1.0).abs());
            crit.check(
                (0.0..=1.0 + 1e-12).contains(&s.transmission),
                format!("T = {} outside [0, 1]", s.transmission),
            );
        }
    }
    for (pot, e) in cases.iter().take(100) {
        worst_det = worst_det.max(ode_matrix(pot, *e, 1e-4).unwrap().det_defect());
    }
    crit.check(worst_det <= 1e-10, format!("determinant defect {worst_det:e} > 1e-10"));
    crit.check(worst_flux <= 1e-12, format!("|T + R - 1| = {worst_flux:e} > 1e-12"));
    crit.note(format!("worst det defect {worst_det:.2e}, worst flux defect {worst_flux:.2e}"));
    crit.finish();
}

#[test]
fn criterion_03_kurasov_limit_sweep() {
    let mut crit = Criterion::new(3, "kurasov limit sweep");
    let spec = SqueezeSpec::new(1.5, 1.2, 0.5, 1.0, 4.0, -4.0 / 3.0, 0.5, 0.0).unwrap();
    let eps = decades(2, 6);
    let report = epsilon_sweep(&spec, 1.0, &eps).unwrap();
    crit.check(
        report.target == PointInteraction::DeltaPrimeDiagonal { theta: 3.0 },
        format!("limit interaction {} is not the theta = 3 diagonal", report.target),
    );

    let d11: Vec<f64> = report.matrices.iter().map(|m| (m.lam11 - 3.0).abs()).collect();
    let d22: Vec<f64> = report.matrices.iter().map(|m| (m.lam22 - 1.0 / 3.0).abs()).collect();
    let d12: Vec<f64> = report.matrices.iter().map(|m| m.lam12.abs()).collect();
    let d21: Vec<f64> = report.matrices.iter().map(|m| m.lam21.abs()).collect();
    for (eps, m) in eps.iter().zip(&report.matrices) {
        crit.note(format!(
            "eps = {eps:.0e}: lam11 = {:.6}, lam22 = {:.6}, lam12 = {:.2e}, lam21 = {:.4e}",
            m.lam11, m.lam22, m.lam12, m.lam21
        ));
    }
    for pair in d11.windows(2) {
        crit.check(pair[1] < pair[0], "lam11 error is not monotone decreasing".to_string());
    }
    for pair in d22.windows(2) {
        crit.check(pair[1] < pair[0], "lam22 error is not monotone decreasing".to_string());
    }
    crit.check(
        *d11.last().unwrap() <= 1e-2,
        format!("final |lam11 - 3| = {:.4} > 1e-2", d11.last().unwrap()),
    );
    crit.check(
        *d22.last().unwrap() <= 1e-2,
        format!("final |lam22 - 1/3| = {:.4} > 1e-2", d22.last().unwrap()),
    );
    crit.check(
        *d12.last().unwrap() < d12[0] && *d12.last().unwrap() < 1e-2,
        format!("|lam12| = {:.3e} does not vanish", d12.last().unwrap()),
    );
    crit.check(
        *d21.last().unwrap() < d21[0] && *d21.last().unwrap() < 1e-2,
        format!("|lam21| = {:.4e} does not vanish (starts at {:.4e})", d21.last().unwrap(), d21[0]),
    );

    // coupling round trip is exact at gamma = 1
    crit.check(kurasov_theta(1.0).unwrap() == 3.0, "theta(1) != 3 exactly".to_string());

    // off resonance the lower-left entry must grow over the decades
    let off = SqueezeSpec::new(1.5, 1.2, 0.5, 1.0, 1.0, 1.0, 0.5, 0.0).unwrap();
    let off_report = epsilon_sweep(&off, 1.0, &eps).unwrap();
    crit.check(
        off_report.target == PointInteraction::Dirichlet,
        format!("off-resonance target {} is not Dirichlet", off_report.target),
    );
    let growth: Vec<f64> = off_report.matrices.iter().map(|m| m.lam21.abs()).collect();
    for pair in growth.windows(2) {
        crit.check(pair[1] > pair[0], "off-resonance |lam21| does not grow".to_string());
    }
    crit.check(off_report.diverged, "off-resonance sweep not flagged as divergent".to_string());
    crit.finish();
}

#[test]
fn criterion_04_delta_limit_sweep() {
    let mut crit = Criterion::new(4, "delta limit sweep");
    let spec = SqueezeSpec::new(1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 0.0, 0.0).unwrap();
    let report = epsilon_sweep(&spec, 1.0, &decades(2, 6)).unwrap();
    crit.check(
        report.target == PointInteraction::Delta { alpha: 5.0 },
        format!("limit interaction {} is not the alpha = 5 delta", report.target),
    );
    let last = report.matrices.last().unwrap();
    crit.check(
        (last.lam21 - 5.0).abs() <= 1e-3,
        format!("final |lam21 - 5| = {:.2e} > 1e-3", (last.lam21 - 5.0).abs()),
    );
    crit.check(
        (last.lam11 - 1.0).abs() <= 1e-3 && (last.lam22 - 1.0).abs() <= 1e-3,
        format!("diagonal ({}, {}) does not settle at 1", last.lam11, last.lam22),
    );
    crit.finish();
}

#[test]
fn criterion_05_perfect_transmission() {
    let mut crit = Criterion::new(5, "perfect transmission points");
    let s1 = s_point(1, 1.0);

    // limit theta = -1 at (0, s_1) on the first-kind B1 edge, swept T -> 1
    let spec_b1 = SqueezeSpec::new(1.5, 1.0, 0.5, 1.0, 0.0, s1, 0.5, 0.0).unwrap();
    match limit_interaction(&spec_b1).unwrap() {
        PointInteraction::DeltaPrimeDiagonal { theta } => crit.check(
            (theta + 1.0).abs() <= 1e-12,
            format!("B1 lattice point theta = {theta} != -1"),
        ),
        other => crit.check(false, format!("B1 lattice point gave {other}")),
    }
    // and at (s~1, 0) on the first-kind B2 edge
    let spec_b2 = SqueezeSpec::new(2.0, 3.0, 1.0, 1.0, s1, 0.0, 0.5, 0.0).unwrap();
    match limit_interaction(&spec_b2).unwrap() {
        PointInteraction::DeltaPrimeDiagonal { theta } => crit.check(
            (theta + 1.0).abs() <= 1e-12,
            format!("B2 lattice point theta = {theta} != -1"),
        ),
        other => crit.check(false, format!("B2 lattice point gave {other}")),
    }
    for (name, spec) in [("B1", &spec_b1), ("B2", &spec_b2)] {
        let pot = realize_potential(spec, 1e-6).unwrap();
        let m = double_layer_closed_form(&pot, 1.0);
        let s = transmission(&m, 1.0, pot.total_length()).unwrap();
        crit.check(
            (s.transmission - 1.0).abs() <= 1e-6,
            format!("{name} swept |T - 1| = {:.2e} > 1e-6", (s.transmission - 1.0).abs()),
        );
        crit.note(format!("{name} lattice point: T(eps = 1e-6) = {:.10}", s.transmission));
    }

    // the perfect-point tables carry theta = (-1)^n
    for p in perfect_points(BaseSet::B1, 1.0, 3).unwrap() {
        crit.check(p.theta.abs() == 1.0, format!("B1 point ({}, {}) theta", p.a1, p.a2));
    }

    // symmetric double-well resonance point: limit matrix -I
    let spec = SqueezeSpec::new(1.5, 2.0, 0.5, 1.0, -4.0, -4.0, 0.5, 0.0).unwrap();
    let m = limit_interaction(&spec).unwrap().limit_matrix().unwrap();
    let minus_i = TransferMatrix { lam11: -1.0, lam12: 0.0, lam21: 0.0, lam22: -1.0 };
    crit.check(
        m.entrywise_distance(&minus_i) <= 1e-12,
        format!("limit at the symmetric double-well point is not -I: {m:?}"),
    );
    crit.finish();
}

#[test]
fn criterion_06_characteristic_points() {
    let mut crit = Criterion::new(6, "characteristic points");
    use std::f64::consts::PI;

    for &eta in &[0.5, 1.0, 2.0] {
        for &c in &[0.1, 0.5, 2.0, 10.0] {
            let pts = characteristic_points(5, eta, c).unwrap();
            for n in 0..=5 {
                let d_expect = -((n as f64 + 0.5) * PI / eta).powi(2);
                let s_expect = -((n as f64) * PI / eta).powi(2);
                crit.check(
                    (pts.d[n] - d_expect).abs() <= 1e-14 * d_expect.abs().max(1.0),
                    format!("d[{n}] mismatch at eta = {eta}"),
                );
                crit.check(
                    (pts.s[n] - s_expect).abs() <= 1e-14 * s_expect.abs().max(1.0),
                    format!("s[{n}] mismatch at eta = {eta}"),
                );
                if n >= 1 {
                    crit.check(
                        pts.d[n] < pts.b[n] && pts.b[n] < pts.s[n],
                        format!("b[{n}] not bracketed at eta = {eta}, c = {c}"),
                    );
                }
                // root verified against plain trigonometry
                let y = (-pts.b[n]).sqrt();
                let defect = 1.0 / (eta * y).tan() - c * y;
                crit.check(
                    defect.abs() <= 1e-8 * (1.0 + c * y),
                    format!("b[{n}] residual {defect:e} at eta = {eta}, c = {c}"),
                );
            }
            crit.check(pts.b[0] > pts.d[0] && pts.b[0] < 0.0, "b[0] outside (d[0], 0)".to_string());
        }
    }

    let pts = characteristic_points(5, 1.0, 1e-6).unwrap();
    for n in 0..=5 {
        crit.check(
            (pts.b[n] - pts.d[n]).abs() <= 1e-3,
            format!("b[{n}] does not collapse onto d[{n}] as c -> 0"),
        );
    }
    crit.finish();
}

#[test]
fn criterion_07_curve_atlases() {
    let mut crit = Criterion::new(7, "resonance curve atlases");

    // B1 branches: residual gate, known crossings
    for n in [1usize, 2] {
        let curve = trace_curve(BaseSet::B1, n, 1.0, 0.5, (-6.0, 6.0), 121).unwrap();
        crit.check(curve.points.len() > 60, format!("B1 branch {n} traced too few points"));
        for p in &curve.points {
            crit.check(
                p.residual.abs() <= 1e-8,
                format!("B1 branch {n} residual {:.2e} at a1 = {}", p.residual, p.a1),
            );
        }
        let dn1 = d_point(n - 1, 1.0);
        let has = curve
            .characteristic
            .iter()
            .any(|p| (p.a1 + 2.0).abs() < 1e-12
                && (p.a2 - dn1).abs() < 1e-12
                && p.residual.map_or(false, |r| r.abs() <= 1e-8));
        crit.check(has, format!("B1 branch {n} misses the (-1/c, d[{}]) point", n - 1));

        let near = trace_curve(BaseSet::B1, n, 1.0, 0.5, (-1e-3, 1e-3), 3).unwrap();
        let sn = s_point(n, 1.0);
        crit.check(
            near.points.len() == 2 && near.points.iter().all(|p| (p.a2 - sn).abs() <= 1e-2),
            format!("B1 branch {n} does not pass (0, s[{n}])"),
        );
    }

    // B2 branches at eta = 2
    let eta = 2.0;
    for (n, range) in [(1usize, (-13.0, -2.0)), (2usize, (-45.0, -14.0))] {
        let curve = trace_curve(BaseSet::B2, n, eta, 0.5, range, 121).unwrap();
        crit.check(!curve.points.is_empty(), format!("B2 branch {n} empty"));
        for p in &curve.points {
            crit.check(
                p.residual.abs() <= 1e-8,
                format!("B2 branch {n} residual {:.2e} at a1 = {}", p.residual, p.a1),
            );
        }
        let dn1 = d_point(n - 1, 1.0);
        let has = curve
            .characteristic
            .iter()
            .any(|p| (p.a1 - dn1).abs() < 1e-12
                && (p.a2 + 1.0).abs() < 1e-12
                && p.residual.map_or(false, |r| r.abs() <= 1e-8));
        crit.check(has, format!("B2 branch {n} misses the (d~[{}], -1/(eta c)) point", n - 1));

        let sn = s_point(n, 1.0);
        let near = trace_curve(BaseSet::B2, n, eta, 0.5, (sn - 1e-6, sn + 1e-6), 3).unwrap();
        crit.check(
            !near.points.is_empty() && near.points.iter().all(|p| p.a2.abs() <= 1e-3),
            format!("B2 branch {n} does not pass (s~[{n}], 0)"),
        );
    }

    // B0 branch 1 with and without a gap prefactor
    for c in [0.0, 0.5] {
        let curve = trace_curve(BaseSet::B0, 1, 1.0, c, (-8.0, 8.0), 121).unwrap();
        crit.check(!curve.points.is_empty(), format!("B0 branch 1 empty at c = {c}"));
        for p in &curve.points {
            crit.check(
                p.residual.abs() <= 1e-8,
                format!("B0 residual {:.2e} at a1 = {}, c = {c}", p.residual, p.a1),
            );
        }
        let s1 = s_point(1, 1.0);
        let near_zero = trace_curve(BaseSet::B0, 1, 1.0, c, (-1e-3, 1e-3), 3).unwrap();
        crit.check(
            near_zero.points.len() == 2
                && near_zero.points.iter().all(|p| (p.a2 - s1).abs() <= 1e-2),
            format!("B0 branch 1 does not pass (0, s[1]) at c = {c}"),
        );
        let near_s1 = trace_curve(BaseSet::B0, 1, 1.0, c, (s1 - 1e-3, s1 + 1e-3), 3).unwrap();
        crit.check(
            near_s1.points.len() == 2 && near_s1.points.iter().all(|p| p.a2.abs() <= 1e-2),
            format!("B0 branch 1 does not pass (s~[1], 0) at c = {c}"),
        );
    }

    // open-set closed form: pinned to the origin, 1% asymptote approach
    crit.check(omega_curve(0.0, 1.0, 0.5).unwrap() == 0.0, "zeroth branch leaves the origin".to_string());
    let a2_far = omega_curve(1e3, 1.0, 0.5).unwrap();
    crit.check(
        (a2_far + 2.0).abs() <= 0.01 * 2.0,
        format!("horizontal asymptote miss: a2(1e3) = {a2_far}"),
    );
    let a2_target = -1e3;
    let a1_far = -1.0 * a2_target / (1.0 + 0.5 * a2_target); // closed-form inverse
    crit.check(
        residual(BaseSet::Omega, a1_far, a2_target, 1.0, 0.5).unwrap().abs() <= 1e-12,
        "inverse point off the resonance set".to_string(),
    );
    crit.check(
        (a1_far + 2.0).abs() <= 0.01 * 2.0,
        format!("vertical asymptote miss: a1(a2 = -1e3) = {a1_far}"),
    );
    crit.finish();
}

#[test]
fn criterion_08_gamma_delta_prime_points() {
    let mut crit = Criterion::new(8, "gamma delta-prime point sets");

    let count_roots = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> usize {
        let n = 40_000;
        let mut count = 0;
        let mut prev = f(lo);
        for i in 1..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = f(x);
            if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
                count += 1;
            }
            prev = v;
        }
        count
    };

    for &eta in &[1.0, 2.0] {
        for &c in &[0.0, 0.5] {
            let b1 = gamma_delta_prime_points(BaseSet::B1, eta, c, 10).unwrap();
            let in_range: Vec<_> =
                b1.iter().filter(|p| p.a1 != 0.0 && p.a1.abs() <= 200.0).collect();
            for p in &in_range {
                let r = residual(BaseSet::B1, p.a1, -p.a1 / eta, eta, c).unwrap();
                crit.check(
                    r.abs() <= 1e-10,
                    format!("B1 point a1 = {} residual {r:e} (eta = {eta}, c = {c})", p.a1),
                );
                crit.check(
                    (p.gamma - eta * p.a1 / 2.0).abs() <= 1e-14 * p.a1.abs().max(1.0),
                    "B1 gamma mismatch".to_string(),
                );
            }
            let g1 = move |a: f64| {
                cos_kernel(eta * a, 1.0).unwrap()
                    - (1.0 + c * a) * sinc_kernel(eta * a, 1.0).unwrap()
            };
            let expect = count_roots(&g1, 1e-3, 200.0);
            crit.check(
                in_range.len() == expect,
                format!("B1 completeness: returned {} vs scanned {expect} (eta = {eta}, c = {c})", in_range.len()),
            );

            let b2 = gamma_delta_prime_points(BaseSet::B2, eta, c, 10).unwrap();
            let in_range: Vec<_> =
                b2.iter().filter(|p| p.a1 != 0.0 && p.a1.abs() <= 200.0).collect();
            for p in &in_range {
                let r = residual(BaseSet::B2, p.a1, -p.a1 / eta, eta, c).unwrap();
                crit.check(
                    r.abs() <= 1e-10,
                    format!("B2 point a1 = {} residual {r:e} (eta = {eta}, c = {c})", p.a1),
                );
            }
            let g2 =
                move |a: f64| cos_kernel(-a, 1.0).unwrap() - (1.0 - c * a) * sinc_kernel(-a, 1.0).unwrap();
            let expect = count_roots(&g2, -200.0, -1e-3);
            crit.check(
                in_range.len() == expect,
                format!("B2 completeness: returned {} vs scanned {expect} (eta = {eta}, c = {c})", in_range.len()),
            );
        }
    }

    // independent bisection oracle for the first free-case point: tan x = x
    let (mut lo, mut hi) = (4.2f64, 4.6f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (mid.tan() - mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let first = gamma_delta_prime_points(BaseSet::B1, 1.0, 0.0, 2).unwrap()[1].a1;
    crit.check(
        (first - x * x).abs() <= 1e-8,
        format!("first free-case point {first} vs oracle {}", x * x),
    );
    crit.note(format!("tan x = x oracle: x = {x:.7}, a1 = {:.5}", x * x));
    crit.finish();
}

#[test]
fn criterion_09_seba_transition() {
    let mut crit = Criterion::new(9, "two-delta transition");

    // partial transparency at the transition exponent: lam21 -> -c a1^2
    let lam = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.5, 1e-10).unwrap());
    crit.check(
        (lam.lam21 + 8.0).abs() <= 1e-6,
        format!("lam21 = {} misses -c a1^2 = -8", lam.lam21),
    );
    let mut prev = f64::INFINITY;
    for k in 2..=10 {
        let m = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.5, 10f64.powi(-k)).unwrap());
        let dev = (m.lam21 + 8.0).abs();
        crit.check(dev <= prev + 1e-12, format!("transition deviation grows at r = 1e-{k}"));
        prev = dev;
    }

    // slow rate: identity trend
    let near = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.4, 1e-2).unwrap());
    let far = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.4, 1e-10).unwrap());
    crit.check(
        far.lam21.abs() < near.lam21.abs() && far.lam21.abs() < 0.1,
        format!("slow-rate lam21 {} does not shrink toward identity", far.lam21),
    );
    crit.check(
        (far.lam11 - 1.0).abs() < 1e-4 && (far.lam22 - 1.0).abs() < 1e-4,
        "slow-rate diagonal does not settle at 1".to_string(),
    );

    // fast rate: divergence
    let near = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.6, 1e-2).unwrap());
    let far = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0, 0.5, 0.6, 1e-10).unwrap());
    crit.check(
        far.lam21.abs() > 30.0 * near.lam21.abs() && far.lam21.abs() > 500.0,
        format!("fast-rate lam21 {} not divergent", far.lam21),
    );

    // rate one: diagonal reproduces 1 + c a1 exactly
    let lam = two_delta_matrix(&TwoDeltaModel::new(4.0, -4.0 / 3.0, 0.5, 1.0, 1e-9).unwrap());
    crit.check(
        (lam.lam11 - 3.0).abs() <= 1e-8,
        format!("rate-one diagonal {} misses 1 + c a1 = 3", lam.lam11),
    );

    // bound state energy is exact
    crit.check(bound_state_energy(-2.0).unwrap() == -1.0, "E(-2) != -1".to_string());
    crit.check(bound_state_energy(1.0).is_err(), "bound state accepted for alpha >= 0".to_string());
    crit.finish();
}

#[test]
fn criterion_10_region_partition() {
    let mut crit = Criterion::new(10, "region partition");

    let mut first = Vec::with_capacity(10_000);
    for i in 1..=20 {
        let mu = 1.0 + 0.1 * i as f64;
        for j in 1..=20 {
            let nu = 0.2 * j as f64;
            for k in 1..=25 {
                let tau = 0.12 * k as f64;
                first.push(classify_region(mu, nu, tau).expect("classification is total"));
            }
        }
    }
    crit.check(first.len() == 10_000, "grid size mismatch".to_string());

    let mut idx = 0;
    for i in 1..=20 {
        let mu = 1.0 + 0.1 * i as f64;
        for j in 1..=20 {
            let nu = 0.2 * j as f64;
            for k in 1..=25 {
                let tau = 0.12 * k as f64;
                let again = classify_region(mu, nu, tau).unwrap();
                if again != first[idx] {
                    crit.check(false, format!("nondeterministic at ({mu}, {nu}, {tau})"));
                }
                idx += 1;
            }
        }
    }

    use ParameterRegion::*;
    let samples = [
        ((1.5, 2.0, 0.5), QK),
        ((1.5, 2.0, 1.0), QS),
        ((1.5, 2.0, 0.75), V1),
        ((1.5, 2.0, 2.0), V2),
        ((2.0, 2.0, 1.0), P1),
        ((2.0, 2.0, 2.0), P2),
        ((2.0, 2.0, 1.5), N1),
        ((2.0, 2.0, 3.0), N2),
        ((1.5, 1.0, 0.5), K1),
        ((1.5, 1.0, 1.0), K2),
        ((1.5, 1.0, 0.75), Q1),
        ((1.5, 1.0, 2.0), Q2),
        ((2.0, 3.0, 1.0), L1),
        ((2.0, 3.0, 2.0), L2),
        ((2.0, 3.0, 1.5), O1),
        ((2.0, 3.0, 3.0), O2),
        ((2.5, 2.0, 1.0), Outside),
        ((1.5, 2.0, 0.25), Outside),
    ];
    for ((mu, nu, tau), expect) in samples {
        let got = classify_region(mu, nu, tau).unwrap();
        crit.check(got == expect, format!("({mu}, {nu}, {tau}) -> {got}, expected {expect}"));
    }
    crit.finish();
}
