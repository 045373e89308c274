//! Closed-form variational certificate for bound states of the purely
//! Lorentz-scalar shell interaction on a corner-shaped curve.
//!
//! For coupling (0, tau, 0) with tau < 0 on a wedge whose arms make the
//! half-angle `omega` with the symmetry axis, an explicit family of test
//! spinors supported on the straight arm segments between `support_scale`
//! and twice that scale yields a computable bracket. A negative bracket
//! places `target_count` min-max levels strictly below the essential
//! spectrum, certifying at least that many discrete eigenvalues in the
//! spectral gap. The bracket is closed-form arithmetic; no quadrature or
//! discretization enters, so the certificate side is exact up to floating
//! point. `cross_validate` confronts the certificate with the
//! boundary-integral eigenvalue scan on a matching smoothed corner and
//! reports agreement or discrepancy as observed.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::bsop::{self, BsError};
use crate::curve::SampledCurve;
use crate::dirac::InteractionParams;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("Lorentz-scalar coupling must be negative and finite, got {0}")]
    NonNegativeCoupling(f64),
    #[error("coupling tau = {tau} resonates with light speed c = {light_speed}: 4c^2 - tau^2 = 0")]
    ResonantCoupling { tau: f64, light_speed: f64 },
    #[error("mass must be positive and finite, got {0}")]
    BadMass(f64),
    #[error("light speed must be positive and finite, got {0}")]
    BadLightSpeed(f64),
    #[error("certificate needs a target eigenvalue count of at least 1")]
    ZeroTargetCount,
    #[error("half-angle {0} outside (0, pi/2)")]
    BadHalfAngle(f64),
    #[error("support scale must be positive and finite, got {0}")]
    BadSupportScale(f64),
    #[error(
        "support scale {support_scale} does not clear the curve's smoothing \
         region (needs more than {floor})"
    )]
    SupportScaleTooSmall { support_scale: f64, floor: f64 },
    #[error("no support scale on the search grid gives a negative angle-independent part")]
    NotCertifiable,
    #[error("curve arm direction {got} does not match the certified half-angle {want}")]
    GeometryMismatch { want: f64, got: f64 },
    #[error(transparent)]
    Scan(#[from] BsError),
    #[error(transparent)]
    Dirac(#[from] crate::dirac::DiracError),
}

/// Bisection resolution for the admissible half-angle, in radians.
const OMEGA_TOL: f64 = 1e-6;
/// Log-spaced support scales searched by [`find_omega_star`].
const GRID_POINTS: usize = 40;
/// Lower end of the support-scale grid: the standard unit-width smoothed
/// corner bends only within arc distance 1 of the apex, and the test
/// functions need a further unit of clearance.
const GRID_LO: f64 = 3.0;
/// Upper end of the support-scale grid.
const GRID_HI: f64 = 1e4;

/// Parameters of one certificate evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertificateInput {
    /// Lorentz-scalar coupling strength, negative.
    pub tau: f64,
    pub mass: f64,
    pub light_speed: f64,
    /// Number of discrete eigenvalues to certify.
    pub target_count: u32,
    /// Inner edge of the arm segment carrying the test functions.
    pub support_scale: f64,
    /// Half-angle between each arm and the symmetry axis.
    pub half_angle: f64,
}

impl CertificateInput {
    pub fn validate(&self) -> Result<(), CertifyError> {
        validate_couplings(self.tau, self.mass, self.light_speed)?;
        if self.target_count == 0 {
            return Err(CertifyError::ZeroTargetCount);
        }
        if !(self.half_angle > 0.0 && self.half_angle < PI / 2.0) {
            return Err(CertifyError::BadHalfAngle(self.half_angle));
        }
        if !(self.support_scale > 0.0 && self.support_scale.is_finite()) {
            return Err(CertifyError::BadSupportScale(self.support_scale));
        }
        Ok(())
    }

    /// Exponential decay rate of the transverse test-spinor profile,
    /// positive for negative coupling.
    pub fn decay_rate(&self) -> f64 {
        let c2 = self.light_speed * self.light_speed;
        -4.0 * self.mass * c2 * self.tau / (4.0 * c2 + self.tau * self.tau)
    }

    /// Transverse half-width of the wedge at the inner support edge.
    pub fn half_width(&self) -> f64 {
        self.support_scale * self.half_angle.tan()
    }
}

fn validate_couplings(tau: f64, mass: f64, light_speed: f64) -> Result<(), CertifyError> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(CertifyError::BadMass(mass));
    }
    if !(light_speed > 0.0 && light_speed.is_finite()) {
        return Err(CertifyError::BadLightSpeed(light_speed));
    }
    if !(tau < 0.0) || !tau.is_finite() {
        return Err(CertifyError::NonNegativeCoupling(tau));
    }
    let c2 = light_speed * light_speed;
    // the bracket divides by (4c^2 - tau^2)^2
    if (4.0 * c2 - tau * tau).abs() <= 1e-12 * (4.0 * c2 + tau * tau) {
        return Err(CertifyError::ResonantCoupling { tau, light_speed });
    }
    Ok(())
}

/// Coefficient of tan(omega) in the bracket; strictly positive.
fn angle_prefactor(tau: f64, mass: f64, c: f64, n: u32, l: f64) -> f64 {
    let c2 = c * c;
    let t2 = tau * tau;
    let sum = 4.0 * c2 + t2;
    let dif = 4.0 * c2 - t2;
    let n2 = (n as f64) * (n as f64);
    (3.0 + (sum * sum + 16.0 * c2 * t2) / (dif * dif))
        * (2.0 * n2 * PI * PI + mass * mass * c2 * l * l)
}

/// Angle-independent part of the bracket: the attractive term linear in the
/// support scale plus the longitudinal kinetic cost decaying with it.
fn flat_part(tau: f64, mass: f64, c: f64, n: u32, l: f64) -> f64 {
    let c2 = c * c;
    let t2 = tau * tau;
    let sum = 4.0 * c2 + t2;
    let dif = 4.0 * c2 - t2;
    let n2 = (n as f64) * (n as f64);
    let attractive = 4.0 * mass * c2 * l * tau / sum;
    let kinetic =
        -n2 * PI * PI * (sum * sum + 16.0 * t2 * c2) * sum / (2.0 * mass * c2 * l * tau * dif * dif);
    attractive + kinetic
}

/// Evaluate the variational bracket; a negative value certifies
/// `target_count` discrete eigenvalues.
pub fn bracket(input: &CertificateInput) -> Result<f64, CertifyError> {
    input.validate()?;
    let CertificateInput { tau, mass, light_speed: c, target_count: n, support_scale: l, .. } =
        *input;
    Ok(input.half_angle.tan() * angle_prefactor(tau, mass, c, n, l) + flat_part(tau, mass, c, n, l))
}

/// Distance from zero to the essential spectrum of the Lorentz-scalar
/// operator: |m| c^2 |4c^2 - tau^2| / (4c^2 + tau^2).
pub fn essential_gap_edge(tau: f64, mass: f64, light_speed: f64) -> f64 {
    let c2 = light_speed * light_speed;
    let t2 = tau * tau;
    mass.abs() * c2 * (4.0 * c2 - t2).abs() / (4.0 * c2 + t2)
}

/// Outcome of one certificate evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertificateResult {
    pub bracket_value: f64,
    /// True exactly when the bracket is negative.
    pub certified: bool,
    /// Distance from zero to the essential spectrum.
    pub essential_gap_edge: f64,
    /// Largest certifiable half-angle at this support scale, if any angle
    /// is certifiable there.
    pub suggested_omega_star: Option<f64>,
}

/// Evaluate the certificate and report the essential-gap edge and the
/// admissible-angle boundary at the input's support scale.
pub fn evaluate(input: &CertificateInput) -> Result<CertificateResult, CertifyError> {
    let bracket_value = bracket(input)?;
    let CertificateInput { tau, mass, light_speed: c, target_count: n, support_scale: l, .. } =
        *input;
    let flat = flat_part(tau, mass, c, n, l);
    let suggested_omega_star = if flat < 0.0 {
        Some((-flat / angle_prefactor(tau, mass, c, n, l)).atan())
    } else {
        None
    };
    Ok(CertificateResult {
        bracket_value,
        certified: bracket_value < 0.0,
        essential_gap_edge: essential_gap_edge(tau, mass, c),
        suggested_omega_star,
    })
}

/// A certifiable (support scale, half-angle) pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OmegaStar {
    pub support_scale: f64,
    pub omega_star: f64,
    pub bracket_value: f64,
}

/// Search for the support scale admitting the widest certifiable
/// half-angle, then refine that angle by bisection.
///
/// The bracket is tan(omega) times a positive prefactor plus an
/// angle-independent part, so at each support scale the certifiable angles
/// form an interval (0, boundary); the search maximizes the boundary over a
/// log grid of scales and bisects the bracket's sign change in omega at the
/// winning scale.
pub fn find_omega_star(
    tau: f64,
    mass: f64,
    light_speed: f64,
    target_count: u32,
) -> Result<OmegaStar, CertifyError> {
    validate_couplings(tau, mass, light_speed)?;
    if target_count == 0 {
        return Err(CertifyError::ZeroTargetCount);
    }
    let ratio = (GRID_HI / GRID_LO).powf(1.0 / (GRID_POINTS - 1) as f64);
    let mut best: Option<(f64, f64)> = None;
    for k in 0..GRID_POINTS {
        let l = GRID_LO * ratio.powi(k as i32);
        let flat = flat_part(tau, mass, light_speed, target_count, l);
        if flat >= 0.0 {
            continue;
        }
        let boundary = (-flat / angle_prefactor(tau, mass, light_speed, target_count, l)).atan();
        if best.map_or(true, |(_, b)| boundary > b) {
            best = Some((l, boundary));
        }
    }
    // the attractive term grows linearly in the scale while the kinetic
    // cost decays, so sufficiently large scales on the grid are always
    // admissible for negative coupling
    let (support_scale, boundary) = best.ok_or(CertifyError::NotCertifiable)?;

    let eval = |omega: f64| -> f64 {
        omega.tan() * angle_prefactor(tau, mass, light_speed, target_count, support_scale)
            + flat_part(tau, mass, light_speed, target_count, support_scale)
    };
    let mut lo = 0.0f64;
    let mut hi = (2.0 * boundary).min(PI / 2.0 - 1e-9);
    debug_assert!(eval(hi) > 0.0);
    while hi - lo > OMEGA_TOL {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(OmegaStar { support_scale, omega_star: lo, bracket_value: eval(lo) })
}

/// Confrontation of the certificate with the eigenvalue scan.
#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    pub certified: bool,
    pub target_count: u32,
    pub gap_edge: f64,
    /// Gap eigenvalues located by the scan.
    pub found: Vec<f64>,
    /// Whether the scan found at least `target_count` eigenvalues. The
    /// certificate is a sufficient condition only, so `certified = false`
    /// with a nonempty `found` list is not a contradiction; `certified =
    /// true` with too few eigenvalues found indicates a resolution problem
    /// and is reported as-is.
    pub consistent: bool,
}

/// Run the eigenvalue scan for coupling (0, tau, 0) over the full spectral
/// gap on a smoothed corner matching the certificate's half-angle, and
/// report how many discrete eigenvalues it finds.
pub fn cross_validate(
    input: &CertificateInput,
    curve: &SampledCurve,
    scan_steps: usize,
) -> Result<CrossValidation, CertifyError> {
    let result = evaluate(input)?;
    let floor = curve.compact_support_bound + 1.0;
    if input.support_scale <= floor {
        return Err(CertifyError::SupportScaleTooSmall {
            support_scale: input.support_scale,
            floor,
        });
    }
    // the test functions live on the straight arm segments, so the curve
    // must actually open at the certified half-angle
    let last = curve.nodes.last().expect("sampled curve has nodes");
    let got = f64::atan2(last.tangent[1], last.tangent[0]);
    if (got - input.half_angle).abs() > 1e-8 {
        return Err(CertifyError::GeometryMismatch { want: input.half_angle, got });
    }
    let first = curve.nodes.first().expect("sampled curve has nodes");
    let got_first = f64::atan2(first.tangent[1], first.tangent[0]);
    if (got_first - (PI - input.half_angle)).abs() > 1e-8 {
        return Err(CertifyError::GeometryMismatch {
            want: PI - input.half_angle,
            got: got_first,
        });
    }

    let params = InteractionParams::new(0.0, input.tau, 0.0, input.mass, input.light_speed)?;
    let edge = result.essential_gap_edge;
    let scan = bsop::bs_eigenvalue_scan(curve, &params, (-edge, edge), scan_steps)?;
    let found: Vec<f64> = scan.eigenvalues.iter().map(|ev| ev.z).collect();
    let consistent = !result.certified || found.len() >= input.target_count as usize;
    Ok(CrossValidation {
        certified: result.certified,
        target_count: input.target_count,
        gap_edge: edge,
        found,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands;

    fn base() -> CertificateInput {
        CertificateInput {
            tau: -1.0,
            mass: 1.0,
            light_speed: 1.0,
            target_count: 1,
            support_scale: 20.0,
            half_angle: 1e-3,
        }
    }

    #[test]
    fn bracket_matches_hand_arithmetic() {
        // tau = -1, m = c = 1, N = 1, L = 20: the angle prefactor is
        // (3 + 41/9)(2 pi^2 + 400), the attractive term -16, and the
        // kinetic cost 205 pi^2 / 360
        let hand = |omega: f64| {
            omega.tan() * (3.0 + 41.0 / 9.0) * (2.0 * PI * PI + 400.0) - 16.0
                + 205.0 * PI * PI / 360.0
        };

        let input = base();
        let b = bracket(&input).unwrap();
        assert!((b - hand(1e-3)).abs() <= 1e-12 * b.abs());
        assert!((b + 7.208).abs() <= 1e-2, "bracket at the narrow angle: {b}");
        let res = evaluate(&input).unwrap();
        assert!(res.certified);
        assert!((res.essential_gap_edge - 0.6).abs() <= 1e-15);
        let boundary = res.suggested_omega_star.expect("an admissible angle exists here");
        assert!(
            bracket(&CertificateInput { half_angle: boundary - 1e-9, ..input }).unwrap() < 0.0
        );
        assert!(
            bracket(&CertificateInput { half_angle: boundary + 1e-9, ..input }).unwrap() > 0.0
        );

        // a tenfold wider angle tips the balance
        let wide = CertificateInput { half_angle: 1e-2, ..input };
        let bw = bracket(&wide).unwrap();
        assert!((bw - hand(1e-2)).abs() <= 1e-12 * bw.abs());
        assert!(bw > 0.0);
        assert!(!evaluate(&wide).unwrap().certified);

        // too small a support scale: the angle-independent part is already
        // positive (-4 + 205 pi^2 / 90), so no angle can certify
        let short = CertificateInput { support_scale: 5.0, ..input };
        assert!(-4.0 + 205.0 * PI * PI / 90.0 > 0.0);
        assert!(bracket(&short).unwrap() > 0.0);
        assert!(evaluate(&short).unwrap().suggested_omega_star.is_none());
        let tiny = CertificateInput { half_angle: 1e-12, ..short };
        assert!(bracket(&tiny).unwrap() > 0.0);
    }

    #[test]
    fn bracket_is_strictly_increasing_in_the_angle() {
        for (tau, light_speed) in [(-1.0, 1.0), (-0.4, 2.0), (-3.0, 0.7)] {
            let mut prev = f64::NEG_INFINITY;
            for k in 1..40 {
                let input = CertificateInput {
                    tau,
                    mass: 1.3,
                    light_speed,
                    target_count: 2,
                    support_scale: 17.0,
                    half_angle: k as f64 * (PI / 2.0) / 41.0,
                };
                let b = bracket(&input).unwrap();
                assert!(b > prev, "bracket not increasing at {input:?}");
                prev = b;
            }
        }
    }

    #[test]
    fn bracket_is_invariant_under_the_unit_light_speed_substitution() {
        // replacing (mass, tau, c) by (mass * c, tau / c, 1) leaves the
        // bracket unchanged
        for (tau, mass, c, n, l, omega) in [
            (-0.7, 1.3, 2.5, 2, 37.0, 4e-3),
            (-2.2, 0.4, 3.0, 1, 12.0, 0.3),
            (-0.05, 2.0, 0.5, 3, 400.0, 1e-4),
        ] {
            let a = bracket(&CertificateInput {
                tau,
                mass,
                light_speed: c,
                target_count: n,
                support_scale: l,
                half_angle: omega,
            })
            .unwrap();
            let b = bracket(&CertificateInput {
                tau: tau / c,
                mass: mass * c,
                light_speed: 1.0,
                target_count: n,
                support_scale: l,
                half_angle: omega,
            })
            .unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn omega_star_search_matches_independent_arithmetic() {
        let star = find_omega_star(-1.0, 1.0, 1.0, 1).unwrap();
        // independent optimum of atan(-flat/prefactor) over the scale:
        // d/dL [(0.8 L - 205 pi^2/(18 L)) / (2 pi^2 + L^2)] = 0 at
        // L ~ 21.2, where the angle boundary is ~3.3e-3 rad
        assert!(star.omega_star > 2.0e-3 && star.omega_star < 4.5e-3, "{star:?}");
        assert!(star.support_scale > 10.0 && star.support_scale < 40.0, "{star:?}");
        assert!(star.bracket_value < 0.0);
        // the reported angle sits within bisection tolerance of the
        // admissibility boundary
        let over = CertificateInput {
            tau: -1.0,
            mass: 1.0,
            light_speed: 1.0,
            target_count: 1,
            support_scale: star.support_scale,
            half_angle: star.omega_star + 2.0 * OMEGA_TOL,
        };
        assert!(bracket(&over).unwrap() > 0.0);

        // asking for two levels shrinks the admissible angle
        let twice = find_omega_star(-1.0, 1.0, 1.0, 2).unwrap();
        assert!(twice.omega_star < star.omega_star);
        // weak coupling shrinks it as well
        let weak = find_omega_star(-0.1, 1.0, 1.0, 1).unwrap();
        assert!(weak.omega_star < star.omega_star);
    }

    #[test]
    fn certificate_rejects_invalid_parameters() {
        let ok = base();
        assert!(ok.validate().is_ok());
        let cases: Vec<(CertificateInput, fn(&CertifyError) -> bool)> = vec![
            (CertificateInput { tau: 0.0, ..ok }, |e| {
                matches!(e, CertifyError::NonNegativeCoupling(_))
            }),
            (CertificateInput { tau: 1.0, ..ok }, |e| {
                matches!(e, CertifyError::NonNegativeCoupling(_))
            }),
            (CertificateInput { tau: -2.0, ..ok }, |e| {
                matches!(e, CertifyError::ResonantCoupling { .. })
            }),
            (CertificateInput { mass: 0.0, ..ok }, |e| matches!(e, CertifyError::BadMass(_))),
            (CertificateInput { light_speed: -1.0, ..ok }, |e| {
                matches!(e, CertifyError::BadLightSpeed(_))
            }),
            (CertificateInput { target_count: 0, ..ok }, |e| {
                matches!(e, CertifyError::ZeroTargetCount)
            }),
            (CertificateInput { half_angle: 0.0, ..ok }, |e| {
                matches!(e, CertifyError::BadHalfAngle(_))
            }),
            (CertificateInput { half_angle: PI / 2.0, ..ok }, |e| {
                matches!(e, CertifyError::BadHalfAngle(_))
            }),
            (CertificateInput { support_scale: 0.0, ..ok }, |e| {
                matches!(e, CertifyError::BadSupportScale(_))
            }),
            (CertificateInput { support_scale: f64::INFINITY, ..ok }, |e| {
                matches!(e, CertifyError::BadSupportScale(_))
            }),
        ];
        for (input, want) in cases {
            let err = bracket(&input).unwrap_err();
            assert!(want(&err), "unexpected error {err} for {input:?}");
        }
        assert!(matches!(
            find_omega_star(-1.0, 1.0, 1.0, 0),
            Err(CertifyError::ZeroTargetCount)
        ));
        assert!(matches!(
            find_omega_star(-2.0, 1.0, 1.0, 1),
            Err(CertifyError::ResonantCoupling { .. })
        ));
    }

    #[test]
    fn gap_edge_agrees_with_the_band_computation() {
        for (tau, mass, c) in [(-1.0, 1.0, 1.0), (-0.8, 1.2, 1.1), (-3.0, 0.7, 1.0)] {
            let edge = essential_gap_edge(tau, mass, c);
            let p = InteractionParams::new(0.0, tau, 0.0, mass, c).unwrap();
            let report = bands::essential_spectrum(&p);
            assert_eq!(report.gap_complement.len(), 1);
            assert!((report.gap_complement[0][0] + edge).abs() <= 1e-12 * edge.max(1.0));
            assert!((report.gap_complement[0][1] - edge).abs() <= 1e-12 * edge.max(1.0));
        }
        assert!((essential_gap_edge(-1.0, 1.0, 1.0) - 0.6).abs() <= 1e-15);
    }
}
