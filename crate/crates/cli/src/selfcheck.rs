//! Cross-module invariant suite behind the `selfcheck` command: one quick,
//! self-contained check per module, printed as a pass/fail table. Each check
//! re-derives its expectation independently (closed forms, oracles, or exact
//! identities), so a pass means the installed binary reproduces the library's
//! defining relations, not merely that it runs.

use num_complex::Complex64;
use shellspec_core::bands::{self, Sign};
use shellspec_core::bsop;
use shellspec_core::certify::{self, CertificateInput};
use shellspec_core::curve::{CurveFamily, CurveSpec, SampledCurve};
use shellspec_core::dirac::{self, InteractionParams};
use shellspec_core::linalg::CVector;
use shellspec_core::schrodinger;
use shellspec_core::special::{self, BesselOrder};

type CheckResult = Result<String, String>;

fn params(
    eta: f64,
    tau: f64,
    lambda: f64,
    mass: f64,
    light_speed: f64,
) -> Result<InteractionParams, String> {
    InteractionParams::new(eta, tau, lambda, mass, light_speed).map_err(|e| e.to_string())
}

fn line(npu: f64, l: f64) -> Result<SampledCurve, String> {
    CurveSpec::build(CurveFamily::StraightLine, [0.0, 0.0])
        .map_err(|e| e.to_string())?
        .sample(npu, l)
        .map_err(|e| e.to_string())
}

fn corner(half_angle: f64, npu: f64, l: f64) -> Result<SampledCurve, String> {
    CurveSpec::build(
        CurveFamily::SmoothedCorner { half_angle, transition_width: 1.0 },
        [0.0, 0.0],
    )
    .map_err(|e| e.to_string())?
    .sample(npu, l)
    .map_err(|e| e.to_string())
}

/// K0/K1 against the integral-representation oracle, and the derivative
/// identity K0' = -K1 by central differences.
fn special_function_oracle() -> CheckResult {
    let mut worst = 0.0f64;
    let n = 40;
    for k in 0..n {
        let xi = 1e-3 * (30.0f64 / 1e-3).powf(k as f64 / (n - 1) as f64);
        for order in [BesselOrder::Zero, BesselOrder::One] {
            let got = special::bessel_k(order, Complex64::from(xi));
            let want = special::reference::bessel_k_integral(order, Complex64::from(xi), 0.02);
            worst = worst.max((got - want).norm() / want.norm());
        }
    }
    if worst > 1e-10 {
        return Err(format!("K0/K1 vs integral oracle: worst rel dev {worst:.3e} > 1e-10"));
    }
    let mut worst_d = 0.0f64;
    for xi in [0.05f64, 0.3, 1.0, 4.0] {
        let h = 1e-5 * xi.max(0.1);
        let k0 = |x: f64| special::bessel_k(BesselOrder::Zero, Complex64::from(x)).re;
        let derivative = (k0(xi + h) - k0(xi - h)) / (2.0 * h);
        let want = -special::bessel_k(BesselOrder::One, Complex64::from(xi)).re;
        worst_d = worst_d.max((derivative - want).abs() / want.abs());
    }
    if worst_d > 1e-6 {
        return Err(format!("K0' = -K1 violated: worst rel dev {worst_d:.3e} > 1e-6"));
    }
    Ok(format!("oracle dev {worst:.1e}, derivative dev {worst_d:.1e}"))
}

/// Spectral transition at eta = 2c and containment of the dispersion curves
/// in the reported bands.
fn band_structure_invariants() -> CheckResult {
    let transition = params(2.0, 0.0, 0.0, 1.0, 1.0)?;
    let r = bands::essential_spectrum(&transition);
    if r.isolated_points != vec![0.0] {
        return Err(format!("at the transition: expected point [0.0], got {:?}", r.isolated_points));
    }
    for eta in [2.0 + 1e-3, 2.0 - 1e-3] {
        let q = params(eta, 0.0, 0.0, 1.0, 1.0)?;
        let rq = bands::essential_spectrum(&q);
        if !rq.isolated_points.is_empty() {
            return Err(format!("off the transition: unexpected isolated points {:?}", rq.isolated_points));
        }
        let has_interior_band = rq
            .bands
            .iter()
            .any(|b| b[0].0 > -1.0 && b[1].0 < 1.0 && b[1].0 > b[0].0);
        if !has_interior_band {
            return Err(format!("off the transition at eta = {eta}: no interval band inside the gap"));
        }
    }

    let sets = [
        (1.3, -0.4, 0.2, 1.1, 0.9),
        (0.5, 0.2, -0.7, 0.8, 1.4),
        (2.0, 0.0, 0.0, 1.0, 1.0),
        (0.0, -1.0, 0.0, 1.0, 1.0),
    ];
    for (eta, tau, lambda, mass, c) in sets {
        let p = params(eta, tau, lambda, mass, c)?;
        let report = bands::essential_spectrum(&p);
        for step in 0..=120 {
            let k = step as f64 * 0.1;
            for sign in [Sign::Plus, Sign::Minus] {
                let Ok(z) = bands::z_pm(k, sign, &p) else { continue };
                let contained = report
                    .bands
                    .iter()
                    .any(|b| z >= b[0].0 - 1e-9 && z <= b[1].0 + 1e-9)
                    || report.isolated_points.iter().any(|pt| (z - pt).abs() <= 1e-9);
                if !contained {
                    return Err(format!(
                        "dispersion value {z} at momentum {k} escapes the reported bands for \
                         ({eta}, {tau}, {lambda})"
                    ));
                }
            }
        }
    }
    Ok("transition point and dispersion containment hold".to_string())
}

/// The boundary operator squares to -1/(4c^2) after the normal-direction
/// twist, on the straight line and on a corner.
fn operator_identity() -> CheckResult {
    let p = params(0.0, 0.0, 0.0, 1.0, 1.0)?;
    let mut details = Vec::new();
    for (name, curve) in [
        ("line", line(8.0, 20.5)?),
        ("corner", corner(std::f64::consts::FRAC_PI_6, 8.0, 20.5)?),
    ] {
        let asm = bsop::assemble_cz(&curve, &p, 0.0).map_err(|e| e.to_string())?;
        let residual = bsop::identity_residual(&asm);
        if residual > 5e-2 {
            return Err(format!("{name}: squared-operator identity residual {residual:.3e} > 5e-2"));
        }
        details.push(format!("{name} {residual:.1e}"));
    }
    Ok(format!("identity residuals: {}", details.join(", ")))
}

/// One-sided boundary values of the layer potential reproduce the jump
/// relation against the boundary operator.
fn jump_relation() -> CheckResult {
    let curve = corner(0.05, 16.0, 21.0)?;
    let p = params(0.0, -1.0, 0.0, 1.0, 1.0)?;
    let z = 0.2;
    let asm = bsop::assemble_cz(&curve, &p, z).map_err(|e| e.to_string())?;
    let n = curve.nodes.len();

    let mut phi = CVector::zeros(2 * n);
    for (j, node) in curve.nodes.iter().enumerate() {
        let bump = (-node.s * node.s / 4.0).exp();
        phi[2 * j] = Complex64::new(bump, 0.0);
        phi[2 * j + 1] = Complex64::new(0.6, -0.3) * bump;
    }
    let czphi = &asm.cz_matrix * &phi;
    let half = Complex64::new(0.0, 1.0 / (2.0 * p.light_speed));

    let mut worst = 0.0f64;
    for s_want in [0.35, -0.6, 0.05] {
        let i = (0..n)
            .min_by(|&a, &b| {
                (curve.nodes[a].s - s_want)
                    .abs()
                    .partial_cmp(&(curve.nodes[b].s - s_want).abs())
                    .unwrap()
            })
            .unwrap();
        let node = curve.nodes[i];
        let panel = curve.panels[i / curve.nodes_per_panel];
        let h = panel.b - panel.a;
        for sign in [1.0, -1.0] {
            let grid: Vec<[f64; 2]> = [4.0, 2.0, 1.0]
                .iter()
                .map(|&k| {
                    [
                        node.point[0] + sign * k * h * node.normal[0],
                        node.point[1] + sign * k * h * node.normal[1],
                    ]
                })
                .collect();
            let samples =
                bsop::reconstruct_eigenfunction(&asm, &phi, &grid).map_err(|e| e.to_string())?;
            let at = |k: usize, comp: usize| {
                Complex64::new(samples[k].spinor[comp][0], samples[k].spinor[comp][1])
            };
            let snu = dirac::sigma_dot(node.normal);
            let phi_i = nalgebra::Vector2::new(phi[2 * i], phi[2 * i + 1]);
            let cz_i = nalgebra::Vector2::new(czphi[2 * i], czphi[2 * i + 1]);
            let target = cz_i + snu * phi_i * half * Complex64::from(sign);
            let mut got = nalgebra::Vector2::new(Complex64::from(0.0), Complex64::from(0.0));
            for comp in 0..2 {
                got[comp] = (at(2, comp) * 8.0 - at(1, comp) * 6.0 + at(0, comp)) / 3.0;
            }
            worst = worst.max((got - target).norm() / target.norm());
        }
    }
    if worst > 5e-2 {
        return Err(format!("extrapolated one-sided traces: worst rel err {worst:.3e} > 5e-2"));
    }
    Ok(format!("worst one-sided-trace error {worst:.1e}"))
}

/// The straight line binds nothing: the scan stays away from the
/// Birman-Schwinger singularity across the gap.
fn straight_line_scan_empty() -> CheckResult {
    let curve = line(4.0, 22.0)?;
    let p = params(0.0, -1.0, 0.0, 1.0, 1.0)?;
    let res = bsop::bs_eigenvalue_scan(&curve, &p, (-0.45, 0.45), 8).map_err(|e| e.to_string())?;
    if !res.eigenvalues.is_empty() {
        return Err(format!("spurious eigenvalues on the straight line: {:?}", res.eigenvalues));
    }
    let min_dist = res.scan.iter().map(|s| s.distance).fold(f64::INFINITY, f64::min);
    if min_dist < 0.05 {
        return Err(format!("scan approached the singularity: min distance {min_dist:.3e}"));
    }
    Ok(format!("no roots; min singularity distance {min_dist:.2}"))
}

/// Scalar reference operator: the straight line binds nothing below the
/// known threshold, while the bent curve does.
fn schrodinger_binding() -> CheckResult {
    let straight = line(6.0, 22.0)?;
    let below = schrodinger::schrodinger_eigenvalues(&straight, 1.0, -1.0, (-0.8, -0.505))
        .map_err(|e| e.to_string())?;
    if !below.is_empty() {
        return Err(format!("straight line bound below the threshold: {below:?}"));
    }
    let bent = corner(std::f64::consts::FRAC_PI_6, 6.0, 20.0)?;
    let roots = schrodinger::schrodinger_eigenvalues(&bent, 1.0, -1.0, (-4.0, -0.5000005))
        .map_err(|e| e.to_string())?;
    if roots.is_empty() || roots.iter().any(|r| *r >= -0.5) {
        return Err(format!("corner did not bind strictly below the threshold: {roots:?}"));
    }
    Ok(format!("corner ground state {:.6}", roots[0]))
}

/// Certificate arithmetic: hand-checked bracket values, substitution
/// invariance, and the gap edge against the band module.
fn certificate_arithmetic() -> CheckResult {
    use std::f64::consts::PI;
    let input = CertificateInput {
        tau: -1.0,
        mass: 1.0,
        light_speed: 1.0,
        target_count: 1,
        support_scale: 20.0,
        half_angle: 1e-3,
    };
    let b = certify::bracket(&input).map_err(|e| e.to_string())?;
    let hand = 1e-3f64.tan() * (3.0 + 41.0 / 9.0) * (2.0 * PI * PI + 400.0) - 16.0
        + 205.0 * PI * PI / 360.0;
    if (b - hand).abs() > 1e-12 * hand.abs() {
        return Err(format!("bracket {b} differs from hand arithmetic {hand}"));
    }
    if b >= 0.0 {
        return Err(format!("narrow-angle bracket should certify, got {b}"));
    }
    let scaled = CertificateInput { tau: -0.5, mass: 2.6, light_speed: 1.0, ..input };
    let original = CertificateInput { tau: -1.0, mass: 1.3, light_speed: 2.0, ..input };
    let a = certify::bracket(&original).map_err(|e| e.to_string())?;
    let s = certify::bracket(&scaled).map_err(|e| e.to_string())?;
    if (a - s).abs() > 1e-12 * a.abs().max(s.abs()) {
        return Err(format!("unit-light-speed substitution broke the bracket: {a} vs {s}"));
    }
    let edge = certify::essential_gap_edge(-1.0, 1.0, 1.0);
    if (edge - 0.6).abs() > 1e-15 {
        return Err(format!("gap edge for unit parameters: expected 0.6, got {edge}"));
    }
    Ok(format!("bracket {b:.3} matches hand arithmetic; gap edge {edge}"))
}

/// Run every check, print the table, and report overall success.
pub fn run() -> bool {
    let checks: Vec<(&str, fn() -> CheckResult)> = vec![
        ("special_function_oracle", special_function_oracle),
        ("band_structure_invariants", band_structure_invariants),
        ("operator_identity", operator_identity),
        ("jump_relation", jump_relation),
        ("straight_line_scan_empty", straight_line_scan_empty),
        ("schrodinger_binding", schrodinger_binding),
        ("certificate_arithmetic", certificate_arithmetic),
    ];
    let mut all_ok = true;
    println!("{:<28} {:<6} detail", "check", "status");
    for (name, check) in checks {
        let start = std::time::Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => {
                println!("{name:<28} pass   {detail} ({elapsed:.1?})");
            }
            Err(detail) => {
                all_ok = false;
                println!("{name:<28} FAIL   {detail} ({elapsed:.1?})");
            }
        }
    }
    all_ok
}
