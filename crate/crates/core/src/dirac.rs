//! Interaction parameters, Pauli algebra, coupling matrices, and the
//! fundamental solution of the two-dimensional free Dirac operator
//! -ic (sigma . grad) + mc^2 sigma_3.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{bessel_k01, sqrt_branch};

pub type CMatrix2 = Matrix2<Complex64>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DiracError {
    #[error("light speed must be positive and finite, got {0}")]
    InvalidLightSpeed(f64),
    #[error("spectral parameter {0} lies on the essential spectrum of the free operator")]
    FreeEssentialSpectrum(Complex64),
    #[error("fundamental solution is singular at x = 0")]
    SingularArgument,
    #[error("isospectral partner is undefined when eta^2 = tau^2 + lambda^2")]
    DegenerateCoupling,
}

/// Coupling strengths of the delta-shell interaction together with the mass
/// and the speed of light. `eta` is the electrostatic strength, `tau` the
/// Lorentz scalar strength, `lambda` the anomalous magnetic strength. The
/// mass may be any real number; formulas that need its magnitude take |m|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionParams {
    pub eta: f64,
    pub tau: f64,
    pub lambda: f64,
    pub mass: f64,
    pub light_speed: f64,
}

/// Relative tolerance for the algebraically exact confinement/criticality
/// conditions; floating-point inputs need a band around exact equality.
const PREDICATE_RTOL: f64 = 1e-12;

impl InteractionParams {
    pub fn new(
        eta: f64,
        tau: f64,
        lambda: f64,
        mass: f64,
        light_speed: f64,
    ) -> Result<Self, DiracError> {
        let p = Self { eta, tau, lambda, mass, light_speed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DiracError> {
        if !(self.light_speed > 0.0) || !self.light_speed.is_finite() {
            return Err(DiracError::InvalidLightSpeed(self.light_speed));
        }
        Ok(())
    }

    /// Combined coupling strength d = eta^2 - tau^2 - lambda^2.
    pub fn d(&self) -> f64 {
        self.eta * self.eta - self.tau * self.tau - self.lambda * self.lambda
    }

    /// Half-width |m| c^2 of the spectral gap of the free operator.
    pub fn gap_radius(&self) -> f64 {
        self.mass.abs() * self.light_speed * self.light_speed
    }

    /// The shell decouples the plane into two independent half-plane
    /// operators exactly when d = -4c^2.
    pub fn is_confined(&self) -> bool {
        let c2 = self.light_speed * self.light_speed;
        let scale = self.d().abs().max(4.0 * c2);
        (self.d() + 4.0 * c2).abs() <= PREDICATE_RTOL * scale
    }

    /// Loss-of-regularity regime (d/4 - c^2)^2 = lambda^2 c^2, where the
    /// transmission problem degenerates and the discretization below loses
    /// accuracy; callers should treat results near criticality with care.
    pub fn is_critical(&self) -> bool {
        let c2 = self.light_speed * self.light_speed;
        let a = self.d() / 4.0 - c2;
        let value = a * a - self.lambda * self.lambda * c2;
        let scale = (self.d().abs() / 4.0 + c2).powi(2) + self.lambda * self.lambda * c2;
        value.abs() <= PREDICATE_RTOL * scale
    }

    /// Coupling transforms that preserve the spectrum: (i) the strengths
    /// scaled by -4/d (undefined for d = 0), same spectrum; (ii) sign flip of
    /// eta and lambda, which mirrors the spectrum through zero.
    pub fn isospectral_partners(
        &self,
    ) -> (Result<IsospectralPartner, DiracError>, IsospectralPartner) {
        let first = if self.d() == 0.0 {
            Err(DiracError::DegenerateCoupling)
        } else {
            let f = -4.0 / self.d();
            Ok(IsospectralPartner {
                params: Self {
                    eta: f * self.eta,
                    tau: f * self.tau,
                    lambda: f * self.lambda,
                    ..*self
                },
                spectrum_negated: false,
            })
        };
        let second = IsospectralPartner {
            params: Self { eta: -self.eta, lambda: -self.lambda, ..*self },
            spectrum_negated: true,
        };
        (first, second)
    }
}

/// An interaction with the same spectrum, up to the stated reflection:
/// z is an eigenvalue of the original operator iff (-1)^{spectrum_negated} z
/// is one of the partner operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsospectralPartner {
    pub params: InteractionParams,
    pub spectrum_negated: bool,
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn sigma0() -> CMatrix2 {
    CMatrix2::new(ONE, ZERO, ZERO, ONE)
}

pub fn sigma1() -> CMatrix2 {
    CMatrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> CMatrix2 {
    CMatrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> CMatrix2 {
    CMatrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// sigma . x = x_1 sigma_1 + x_2 sigma_2 for a real 2-vector x.
pub fn sigma_dot(x: [f64; 2]) -> CMatrix2 {
    let off = Complex64::new(x[0], -x[1]);
    CMatrix2::new(ZERO, off, off.conj(), ZERO)
}

/// Constant coupling matrix F = [[eta+tau, lambda], [lambda, eta-tau]]
/// acting in the flattened boundary space.
pub fn coupling_f(p: &InteractionParams) -> CMatrix2 {
    CMatrix2::new(
        Complex64::new(p.eta + p.tau, 0.0),
        Complex64::new(p.lambda, 0.0),
        Complex64::new(p.lambda, 0.0),
        Complex64::new(p.eta - p.tau, 0.0),
    )
}

/// Pointwise interaction matrix eta sigma_0 + tau sigma_3 + i lambda (sigma . nu) sigma_3
/// at a curve point with unit normal nu.
pub fn interaction_matrix(p: &InteractionParams, normal: [f64; 2]) -> CMatrix2 {
    let mut m = sigma0() * Complex64::new(p.eta, 0.0) + sigma3() * Complex64::new(p.tau, 0.0);
    m += sigma_dot(normal) * sigma3() * Complex64::new(0.0, p.lambda);
    m
}

/// Unitary gauge matrix V = diag(1, conj(t_1 + i t_2)) built from the unit
/// tangent; conjugation by V turns the constant matrix F into the pointwise
/// interaction matrix.
pub fn v_matrix(tangent: [f64; 2]) -> CMatrix2 {
    CMatrix2::new(ONE, ZERO, ZERO, Complex64::new(tangent[0], -tangent[1]))
}

/// Decay rate of the fundamental solution:
/// zeta(z) = -i sqrt(z^2/c^2 - (mc)^2) with the upper-half-plane branch, so
/// Re zeta > 0 off the free essential spectrum, and zeta > 0 for real z in
/// the gap (-|m|c^2, |m|c^2).
pub fn zeta(z: Complex64, p: &InteractionParams) -> Result<Complex64, DiracError> {
    if z.im == 0.0 && z.re.abs() >= p.gap_radius() {
        return Err(DiracError::FreeEssentialSpectrum(z));
    }
    let c = p.light_speed;
    let w = z * z / (c * c) - Complex64::new(p.mass * c * p.mass * c, 0.0);
    Ok(-I * sqrt_branch(w))
}

/// Fundamental solution G_z(x) of the free Dirac operator at energy z:
/// (1/2 pi c) [ sqrt(z^2/c^2 - (mc)^2) K_1(zeta |x|) (sigma . x)/|x|
///              + K_0(zeta |x|) ((z/c) sigma_0 + mc sigma_3) ].
pub fn green_kernel(
    z: Complex64,
    x: [f64; 2],
    p: &InteractionParams,
) -> Result<CMatrix2, DiracError> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(DiracError::SingularArgument);
    }
    let zt = zeta(z, p)?;
    let c = p.light_speed;
    let (k0, k1) = bessel_k01(zt * r);
    let pref = 1.0 / (2.0 * std::f64::consts::PI * c);
    let radial = sigma_dot([x[0] / r, x[1] / r]) * (I * zt * k1 * pref);
    let mass_part = (sigma0() * (z / c) + sigma3() * Complex64::new(p.mass * c, 0.0)) * (k0 * pref);
    Ok(radial + mass_part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(eta: f64, tau: f64, lambda: f64, mass: f64, c: f64) -> InteractionParams {
        InteractionParams::new(eta, tau, lambda, mass, c).unwrap()
    }

    fn mat_close(a: &CMatrix2, b: &CMatrix2, tol: f64) -> bool {
        (a - b).iter().all(|e| e.norm() <= tol)
    }

    #[test]
    fn light_speed_must_be_positive() {
        assert!(InteractionParams::new(1.0, 0.0, 0.0, 1.0, 0.0).is_err());
        assert!(InteractionParams::new(1.0, 0.0, 0.0, 1.0, -2.0).is_err());
        assert!(InteractionParams::new(1.0, 0.0, 0.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn pauli_anticommutation() {
        let sig = [sigma1(), sigma2(), sigma3()];
        for (j, sj) in sig.iter().enumerate() {
            for (k, sk) in sig.iter().enumerate() {
                let anti = sj * sk + sk * sj;
                let expect = if j == k { sigma0() * Complex64::new(2.0, 0.0) } else { CMatrix2::zeros() };
                assert!(mat_close(&anti, &expect, 0.0), "j={j} k={k}");
            }
        }
    }

    #[test]
    fn sigma_dot_squares_to_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let sq = sigma_dot(x) * sigma_dot(x);
            let expect = sigma0() * Complex64::new(x[0] * x[0] + x[1] * x[1], 0.0);
            assert!(mat_close(&sq, &expect, 1e-14));
        }
    }

    #[test]
    fn gauge_identity_vfv() {
        // V* F V equals the pointwise interaction matrix at every tangent
        // direction, with nu = (t_2, -t_1).
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = params(0.7, -1.3, 0.4, 1.0, 1.0);
        for _ in 0..50 {
            let phi: f64 = rng.gen_range(-3.2..3.2);
            let t = [phi.cos(), phi.sin()];
            let nu = [t[1], -t[0]];
            let v = v_matrix(t);
            let lhs = v.adjoint() * coupling_f(&p) * v;
            let rhs = interaction_matrix(&p, nu);
            assert!(mat_close(&lhs, &rhs, 1e-14), "phi = {phi}");
            assert_relative_eq!(v.determinant().norm(), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn zeta_examples() {
        let p = params(1.0, 0.0, 0.0, 1.0, 1.0);
        let z0 = zeta(Complex64::new(0.0, 0.0), &p).unwrap();
        assert!((z0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let zh = zeta(Complex64::new(0.5, 0.0), &p).unwrap();
        assert_relative_eq!(zh.re, 0.75f64.sqrt(), max_relative = 1e-15);
        assert_eq!(zh.im, 0.0);
        let zi = zeta(Complex64::new(0.0, 1.0), &p).unwrap();
        assert!(zi.re > 0.0);
        // domain errors on the free essential spectrum
        assert!(zeta(Complex64::new(1.0, 0.0), &p).is_err());
        assert!(zeta(Complex64::new(-3.5, 0.0), &p).is_err());
        assert!(zeta(Complex64::new(0.999, 0.0), &p).is_ok());
    }

    #[test]
    fn zeta_has_positive_real_part_off_bands() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = params(0.0, 0.0, 0.0, 1.3, 0.7);
        for _ in 0..200 {
            let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            if z.im == 0.0 {
                continue;
            }
            let zt = zeta(z, &p).unwrap();
            assert!(zt.re > 0.0, "z = {z}, zeta = {zt}");
        }
        for i in 0..50 {
            let z = Complex64::new(-0.62 + 1.24 * (i as f64) / 49.0, 0.0);
            let zt = zeta(z, &p).unwrap();
            assert!(zt.re > 0.0 && zt.im.abs() < 1e-15);
        }
    }

    #[test]
    fn green_kernel_reference_point() {
        // z = 0, m = c = 1, x = (1, 0): (i K_1(1)/2 pi) sigma_1 + (K_0(1)/2 pi) sigma_3
        let p = params(0.0, 0.0, 0.0, 1.0, 1.0);
        let g = green_kernel(Complex64::new(0.0, 0.0), [1.0, 0.0], &p).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        let want = sigma1() * Complex64::new(0.0, 0.601907230197234575 / two_pi)
            + sigma3() * Complex64::new(0.421024438240708333 / two_pi, 0.0);
        assert!(mat_close(&g, &want, 1e-14));
        assert_relative_eq!(g[(0, 1)].im, 0.09580, max_relative = 1e-4);
        assert_relative_eq!(g[(0, 0)].re, 0.06701, max_relative = 1e-4);
    }

    #[test]
    fn green_kernel_conjugation_symmetry() {
        // G_{conj z}(-x) = G_z(x)^*
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = params(0.0, 0.0, 0.0, 0.8, 1.4);
        for _ in 0..20 {
            let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0)];
            let lhs = green_kernel(z.conj(), [-x[0], -x[1]], &p).unwrap();
            let rhs = green_kernel(z, x, &p).unwrap().adjoint();
            let scale = rhs.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
            assert!(mat_close(&lhs, &rhs, 1e-12 * scale));
        }
    }

    #[test]
    fn green_kernel_light_speed_scaling() {
        // G with (m, c, z) equals (1/c) G with (mc, 1, z/c) at the same x.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let m = rng.gen_range(0.3..2.0);
            let c = rng.gen_range(0.5..3.0);
            let p = params(0.0, 0.0, 0.0, m, c);
            let p_unit = params(0.0, 0.0, 0.0, m * c, 1.0);
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.05..1.0));
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0)];
            let lhs = green_kernel(z, x, &p).unwrap();
            let rhs = green_kernel(z / c, x, &p_unit).unwrap() / Complex64::new(c, 0.0);
            let scale = rhs.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
            assert!(mat_close(&lhs, &rhs, 1e-12 * scale), "m={m} c={c} z={z}");
        }
    }

    #[test]
    fn green_kernel_rejects_origin() {
        let p = params(0.0, 0.0, 0.0, 1.0, 1.0);
        assert_eq!(
            green_kernel(Complex64::new(0.0, 0.0), [0.0, 0.0], &p),
            Err(DiracError::SingularArgument)
        );
    }

    #[test]
    fn confinement_predicate() {
        let c = 1.7;
        assert!(params(0.0, 2.0 * c, 0.0, 1.0, c).is_confined());
        assert!(params(0.0, 0.0, 2.0 * c, 1.0, c).is_confined());
        assert!(!params(1.0, 0.0, 0.0, 1.0, 1.0).is_confined());
        // relative band: a 1e-13 perturbation still counts as confined
        assert!(params(0.0, 2.0 * c * (1.0 + 4e-14), 0.0, 1.0, c).is_confined());
    }

    #[test]
    fn criticality_predicate() {
        let c = 0.9;
        assert!(params(2.0 * c, 0.0, 0.0, 1.0, c).is_critical());
        assert!(params(0.0, 0.0, 2.0 * c, 1.0, c).is_critical());
        assert!(!params(0.0, 0.0, 0.0, 1.0, c).is_critical());
        assert!(!params(1.0, 0.5, 0.25, 1.0, 1.0).is_critical());
    }

    #[test]
    fn isospectral_partner_examples() {
        let p = params(0.0, -1.0, 0.0, 1.0, 1.0);
        let (first, second) = p.isospectral_partners();
        let first = first.unwrap();
        assert_relative_eq!(first.params.tau, -4.0, max_relative = 1e-15);
        assert_eq!(first.params.eta, 0.0);
        assert!(!first.spectrum_negated);
        assert_eq!(second.params.tau, -1.0);
        assert!(second.spectrum_negated);

        let q = params(1.0, 0.0, 0.0, 1.0, 1.0);
        let (first, _) = q.isospectral_partners();
        assert_relative_eq!(first.unwrap().params.eta, -4.0, max_relative = 1e-15);

        let degenerate = params(1.0, 1.0, 0.0, 1.0, 1.0);
        assert!(degenerate.isospectral_partners().0.is_err());
    }
}
