//! Complex square root with the upper-half-plane branch and modified Bessel
//! functions K_0, K_1 for arguments in the right half-plane, together with the
//! singular/smooth decompositions consumed by the product quadrature.
//!
//! Evaluation strategy: ascending power series for |xi| <= 2 and the
//! Thompson-Barnett continued fraction (CF2) for |xi| > 2. The plain
//! asymptotic series cannot reach 1e-10 relative accuracy near any crossover
//! that the power series can still handle in f64, so the classical two-regime
//! series/asymptotic scheme is replaced by series/CF2; both regimes were
//! validated against the integral-representation oracle in `reference`.

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Square root with Im(result) > 0 for w outside [0, +inf), and the
/// nonnegative root on [0, +inf). Satisfies sqrt_branch(conj w) = -conj(sqrt_branch(w))
/// off the nonnegative real axis.
pub fn sqrt_branch(w: Complex64) -> Complex64 {
    // The principal root has Re >= 0; its imaginary part carries the sign of
    // Im(w), so flipping negative-Im results lands in the upper half-plane.
    // Signed zeros matter: Complex::new(-4.0, -0.0).sqrt() has Im < 0.
    let r = w.sqrt();
    if r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// Bessel order tag for the split kernels (only 0 and 1 occur in the kernels).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

const SERIES_RADIUS: f64 = 2.0;
const CF2_MAX_ITER: usize = 20_000;

fn is_invalid_argument(xi: Complex64) -> bool {
    xi.re == 0.0 && xi.im == 0.0 || xi.re.is_nan() || xi.im.is_nan()
}

/// Modified Bessel function of the second kind, order 0 or 1.
///
/// Intended domain is the right half-plane (all kernel evaluations use
/// xi = zeta * distance with zeta > 0); arguments off the negative real axis
/// with Re(xi) <= 0 fall back to the power series, which converges everywhere
/// but loses accuracy beyond moderate |xi|.
///
/// Panics on xi = 0 (logarithmic respectively polar singularity).
pub fn bessel_k(order: BesselOrder, xi: Complex64) -> Complex64 {
    let (k0, k1) = bessel_k01(xi);
    match order {
        BesselOrder::Zero => k0,
        BesselOrder::One => k1,
    }
}

/// Evaluates K_0 and K_1 at once; the kernels always need the pair.
pub fn bessel_k01(xi: Complex64) -> (Complex64, Complex64) {
    assert!(!is_invalid_argument(xi), "bessel_k: argument must be nonzero and finite");
    if xi.norm_sqr() <= SERIES_RADIUS * SERIES_RADIUS || xi.re <= 0.0 {
        k01_series(xi)
    } else {
        k01_cf2(xi)
    }
}

/// I_0 by its everywhere-convergent series. Accurate for the moderate |xi|
/// (near-diagonal quadrature arguments) it is used with.
pub fn bessel_i0(xi: Complex64) -> Complex64 {
    let u = xi * xi * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term *= u / ((k * k) as f64);
        sum += term;
        if term.norm_sqr() <= 1e-34 * sum.norm_sqr() {
            break;
        }
    }
    sum
}

/// I_1(xi)/xi, entire and safe at xi = 0 (value 1/2).
pub fn bessel_i1_over_xi(xi: Complex64) -> Complex64 {
    let u = xi * xi * 0.25;
    let mut term = Complex64::new(0.5, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term *= u / ((k * (k + 1)) as f64);
        sum += term;
        if term.norm_sqr() <= 1e-34 * sum.norm_sqr() {
            break;
        }
    }
    sum
}

pub fn bessel_i1(xi: Complex64) -> Complex64 {
    xi * bessel_i1_over_xi(xi)
}

/// Entire part of K_0 with the exact logarithm removed:
/// k0_regular(xi) = K_0(xi) + I_0(xi) log(xi), an even entire function.
pub fn k0_regular(xi: Complex64) -> Complex64 {
    if xi.norm_sqr() <= SERIES_RADIUS * SERIES_RADIUS {
        k0_regular_series(xi)
    } else {
        // No cancellation here: both terms are positive for real xi > 1.
        let (k0, _) = k01_cf2(xi);
        k0 + bessel_i0(xi) * xi.ln()
    }
}

/// Entire-series part of K_1 with both singular terms removed:
/// k1_regular(xi) = K_1(xi) - 1/xi - I_1(xi) log(xi), vanishing linearly at 0.
pub fn k1_regular(xi: Complex64) -> Complex64 {
    if xi.norm_sqr() <= SERIES_RADIUS * SERIES_RADIUS {
        k1_regular_series(xi)
    } else {
        let (_, k1) = k01_cf2(xi);
        k1 - xi.inv() - bessel_i1(xi) * xi.ln()
    }
}

fn k0_regular_series(xi: Complex64) -> Complex64 {
    // K_0 = -(log(xi/2) + gamma) I_0 + sum_{k>=1} H_k u^k/(k!)^2, u = xi^2/4,
    // hence K_0 + I_0 log xi = (log 2 - gamma) I_0 + sum_{k>=1} H_k u^k/(k!)^2.
    let u = xi * xi * 0.25;
    let c0 = std::f64::consts::LN_2 - EULER_GAMMA;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(c0, 0.0);
    let mut harmonic = 0.0;
    for k in 1..200 {
        term *= u / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        let add = term * (c0 + harmonic);
        sum += add;
        if add.norm_sqr() <= 1e-34 * sum.norm_sqr().max(1e-60) {
            break;
        }
    }
    sum
}

fn k1_regular_series(xi: Complex64) -> Complex64 {
    // K_1 = 1/xi + (log(xi/2)+gamma) I_1 - (xi/4) sum_{k>=0} (H_k + H_{k+1}) u^k/(k!(k+1)!)
    // with u = xi^2/4 and I_1 = (xi/2) sum_{k>=0} u^k/(k!(k+1)!), so
    // K_1 - 1/xi - I_1 log xi
    //   = xi sum_{k>=0} [(gamma - log 2)/2 - (H_k + H_{k+1})/4] u^k/(k!(k+1)!).
    let u = xi * xi * 0.25;
    let c0 = EULER_GAMMA - std::f64::consts::LN_2;
    let mut fact = Complex64::new(1.0, 0.0); // u^k/(k!(k+1)!)
    let mut hk = 0.0f64;
    let mut hk1 = 1.0f64;
    let mut total = fact * (0.5 * c0 - 0.25 * (hk + hk1));
    for k in 1..200 {
        fact *= u / ((k * (k + 1)) as f64);
        hk += 1.0 / k as f64;
        hk1 += 1.0 / (k + 1) as f64;
        let add = fact * (0.5 * c0 - 0.25 * (hk + hk1));
        total += add;
        if add.norm_sqr() <= 1e-34 * total.norm_sqr().max(1e-60) {
            break;
        }
    }
    xi * total
}

fn k01_series(xi: Complex64) -> (Complex64, Complex64) {
    let ln_xi = xi.ln();
    let k0 = k0_regular_series(xi) - bessel_i0(xi) * ln_xi;
    let k1 = xi.inv() + bessel_i1(xi) * ln_xi + k1_regular_series(xi);
    (k0, k1)
}

/// Thompson-Barnett CF2 evaluation of (K_0, K_1), valid for Re(xi) > 0 and
/// |xi| >~ 2; roughly machine-accurate there.
fn k01_cf2(xi: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let a1 = Complex64::new(0.25, 0.0);
    let mut b = 2.0 * (one + xi);
    let mut d = b.inv();
    let mut delh = d;
    let mut h = delh;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 2..CF2_MAX_ITER {
        a -= Complex64::new(2.0 * (i as f64 - 1.0), 0.0);
        c = -a * c / (i as f64);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = (b + a * d).inv();
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm_sqr() <= 1e-32 * s.norm_sqr() {
            converged = true;
            break;
        }
    }
    debug_assert!(converged, "CF2 failed to converge at xi = {xi}");
    h = a1 * h;
    let k0 = (std::f64::consts::FRAC_PI_2 / xi).sqrt() * (-xi).exp() / s;
    let k1 = k0 * (xi + 0.5 - h) / xi;
    (k0, k1)
}

/// Singular/smooth decomposition of K_0 or K_1 around xi = 0.
///
/// Order 0: K_0(xi) = -log(xi) * 1 + remainder, remainder C^1 with
/// remainder(0) = log 2 - EulerGamma.
/// Order 1: K_1(xi) = 1/xi + remainder, remainder -> 0 like xi log xi.
/// `log_coefficient` is the constant factor multiplying -log(xi) in the
/// singular part (1 for order 0, 0 for order 1, whose leading singularity is
/// the Cauchy pole).
#[derive(Debug, Clone, Copy)]
pub struct BesselSplit {
    pub order: BesselOrder,
    pub log_coefficient: Complex64,
}

pub fn bessel_split(order: BesselOrder) -> BesselSplit {
    let log_coefficient = match order {
        BesselOrder::Zero => Complex64::new(1.0, 0.0),
        BesselOrder::One => Complex64::new(0.0, 0.0),
    };
    BesselSplit { order, log_coefficient }
}

impl BesselSplit {
    pub fn singular_part(&self, xi: Complex64) -> Complex64 {
        match self.order {
            BesselOrder::Zero => -xi.ln() * self.log_coefficient,
            BesselOrder::One => xi.inv(),
        }
    }

    /// The non-singular remainder: g_3(xi) for order 0, and
    /// xi g_4(xi^2) log xi + xi g_5(xi^2) for order 1.
    pub fn smooth_remainder(&self, xi: Complex64) -> Complex64 {
        if is_invalid_argument(xi) {
            // Continuous limits at the singularity.
            return match self.order {
                BesselOrder::Zero => Complex64::new(std::f64::consts::LN_2 - EULER_GAMMA, 0.0),
                BesselOrder::One => Complex64::new(0.0, 0.0),
            };
        }
        match self.order {
            // K_0 + log xi = (1 - I_0) log xi + k0_regular, grouped to stay
            // cancellation-free for small xi.
            BesselOrder::Zero => {
                (Complex64::new(1.0, 0.0) - bessel_i0(xi)) * xi.ln() + k0_regular(xi)
            }
            BesselOrder::One => bessel_i1(xi) * xi.ln() + k1_regular(xi),
        }
    }
}

/// Slow reference evaluators, independent of the series/CF2 implementation.
pub mod reference {
    use super::*;

    /// K_order(xi) via the integral representation
    /// K_nu(xi) = int_0^inf exp(-xi cosh t) cosh(nu t) dt,
    /// evaluated with the trapezoid rule on the symmetric extension (the
    /// integrand is even and analytic, so the trapezoid rule converges
    /// geometrically). Valid for Re(xi) > 0.
    pub fn bessel_k_integral(order: BesselOrder, xi: Complex64, step: f64) -> Complex64 {
        assert!(xi.re > 0.0, "integral representation requires Re(xi) > 0");
        let nu = match order {
            BesselOrder::Zero => 0.0,
            BesselOrder::One => 1.0,
        };
        // Truncate where exp(-Re(xi) (cosh t - 1)) has decayed below 1e-26
        // relative to the peak.
        let reach = 60.0 / xi.re.min(60.0);
        let t_max = (1.0 + reach + (reach * (reach + 2.0)).sqrt()).ln().max(4.0);
        let n = (t_max / step).ceil() as usize;
        let mut sum = 0.5 * (-xi).exp(); // t = 0 term of the half-line trapezoid
        for k in 1..=n {
            let t = step * k as f64;
            sum += (-xi * t.cosh()).exp() * (nu * t).cosh();
        }
        sum * step
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_branch_examples() {
        assert_eq!(sqrt_branch(c(-1.0, 0.0)), c(0.0, 1.0));
        assert_eq!(sqrt_branch(c(4.0, 0.0)), c(2.0, 0.0));
        let r = sqrt_branch(c(-2.0, 0.0));
        assert_relative_eq!(r.im, 2.0f64.sqrt(), max_relative = 1e-15);
        assert!(r.re.abs() < 1e-15);
    }

    #[test]
    fn sqrt_branch_properties() {
        let samples = [
            c(-3.0, 0.5),
            c(2.0, -1.0),
            c(-1.0, -1e-12),
            c(0.3, 4.0),
            c(-5.0, -0.0),
            c(1e-8, -1e-8),
        ];
        for &w in &samples {
            let r = sqrt_branch(w);
            assert_relative_eq!((r * r).re, w.re, max_relative = 1e-13, epsilon = 1e-13);
            assert_relative_eq!((r * r).im, w.im, max_relative = 1e-13, epsilon = 1e-13);
            assert!(r.im > 0.0, "branch violated at {w}: {r}");
            // conjugate rule
            let rc = sqrt_branch(w.conj());
            let expect = -r.conj();
            assert_relative_eq!(rc.re, expect.re, max_relative = 1e-14, epsilon = 1e-14);
            assert_relative_eq!(rc.im, expect.im, max_relative = 1e-14, epsilon = 1e-14);
        }
    }

    #[test]
    fn bessel_frozen_values() {
        // Reference values computed with the integral-representation oracle
        // (cross-checked against 30-digit arbitrary-precision evaluation).
        let cases = [
            (BesselOrder::Zero, c(1.0, 0.0), c(0.421024438240708333, 0.0)),
            (BesselOrder::One, c(1.0, 0.0), c(0.601907230197234575, 0.0)),
            (BesselOrder::Zero, c(0.5, 0.0), c(0.924419071227665862, 0.0)),
            (BesselOrder::One, c(0.5, 0.0), c(1.656441120003300894, 0.0)),
            (BesselOrder::Zero, c(2.5, 0.0), c(0.062347553200366186, 0.0)),
            (BesselOrder::One, c(2.5, 0.0), c(0.073890816347747064, 0.0)),
            (BesselOrder::Zero, c(7.0, 0.0), c(4.24795741869231807e-4, 0.0)),
            (BesselOrder::One, c(7.0, 0.0), c(4.54182486884896971e-4, 0.0)),
            (BesselOrder::Zero, c(25.0, 0.0), c(3.46416156221311436e-12, 0.0)),
            (BesselOrder::One, c(25.0, 0.0), c(3.53277807319993377e-12, 0.0)),
            (BesselOrder::Zero, c(2.0, 3.0), c(-0.0829685265676255149, 0.0279496036351834236)),
            (BesselOrder::One, c(2.0, 3.0), c(-0.0864999764812817292, 0.0390614340052144719)),
            (BesselOrder::Zero, c(0.3, -0.4), c(0.830678709979259029, 0.802988005911301784)),
            (BesselOrder::One, c(0.3, -0.4), c(0.830775401167656033, 1.734969457550387029)),
            (BesselOrder::Zero, c(4.0, -5.0), c(0.00592011077711991966, -0.00672595727352672272)),
            (BesselOrder::One, c(4.0, -5.0), c(0.00660254283992376201, -0.00671154617204910970)),
        ];
        for &(order, xi, want) in &cases {
            let got = bessel_k(order, xi);
            assert_relative_eq!(got.re, want.re, max_relative = 2e-13, epsilon = 1e-280);
            assert_relative_eq!(got.im, want.im, max_relative = 2e-13, epsilon = 1e-280);
        }
    }

    #[test]
    fn bessel_matches_integral_oracle_on_grid() {
        // Log-spaced real grid across both evaluation regimes.
        let n = 60;
        for order in [BesselOrder::Zero, BesselOrder::One] {
            for i in 0..n {
                let x = 1e-3 * (30.0f64 / 1e-3).powf(i as f64 / (n - 1) as f64);
                let xi = c(x, 0.0);
                let got = bessel_k(order, xi);
                let want = reference::bessel_k_integral(order, xi, 0.05);
                assert_relative_eq!(got.re, want.re, max_relative = 1e-11);
                assert!(got.im.abs() <= 1e-14 * got.re.abs());
            }
        }
        // A few complex points with modest argument.
        for order in [BesselOrder::Zero, BesselOrder::One] {
            for &xi in &[c(1.5, 0.7), c(3.0, -2.0), c(9.0, 4.0), c(0.02, 0.01)] {
                let got = bessel_k(order, xi);
                let want = reference::bessel_k_integral(order, xi, 0.02);
                let err = (got - want).norm() / want.norm();
                assert!(err < 1e-11, "order {order:?} xi {xi}: rel err {err:.2e}");
            }
        }
    }

    #[test]
    fn small_argument_logarithmic_limit() {
        // K_0(x) = -log(x/2) - gamma + o(1) as x -> 0+; the remainder is
        // O(x^2 log x).
        for &x in &[1e-3, 1e-4, 1e-5] {
            let k0 = bessel_k(BesselOrder::Zero, c(x, 0.0)).re;
            let lead = -(x / 2.0).ln() - EULER_GAMMA;
            let bound = 2.0 * x * x * (x.ln().abs() + 2.0);
            assert!((k0 - lead).abs() < bound, "x={x}: {k0} vs {lead}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for order in [BesselOrder::Zero, BesselOrder::One] {
            for &xi in &[c(0.8, 0.3), c(2.5, 1.0), c(5.0, -3.0), c(0.01, 0.02)] {
                let a = bessel_k(order, xi.conj());
                let b = bessel_k(order, xi).conj();
                assert!((a - b).norm() <= 1e-14 * b.norm());
            }
        }
    }

    #[test]
    fn derivative_identity_k0_prime_is_minus_k1() {
        // Central differences at 50 points across both regimes.
        for i in 0..50 {
            let x = 0.05 + 0.3 * i as f64;
            let h = 1e-5 * x.max(1.0);
            let kp = (bessel_k(BesselOrder::Zero, c(x + h, 0.0))
                - bessel_k(BesselOrder::Zero, c(x - h, 0.0)))
                / c(2.0 * h, 0.0);
            let k1 = bessel_k(BesselOrder::One, c(x, 0.0));
            assert_relative_eq!(kp.re, -k1.re, max_relative = 1e-6);
        }
    }

    #[test]
    fn decay_envelope() {
        for order in [BesselOrder::Zero, BesselOrder::One] {
            for i in 0..40 {
                let x = 5.0 + 45.0 * i as f64 / 39.0;
                let v = bessel_k(order, c(x, 0.0)).re * x.exp() * x.sqrt();
                assert!((1.0..=1.4).contains(&v), "order {order:?} x={x}: envelope {v}");
            }
        }
    }

    #[test]
    fn split_recomposition() {
        for order in [BesselOrder::Zero, BesselOrder::One] {
            let split = bessel_split(order);
            for i in 0..40 {
                let r = 1e-8 * (1.0f64 / 1e-8).powf(i as f64 / 39.0);
                for &arg in &[0.0, 0.4, -1.1] {
                    let xi = Complex64::from_polar(r, arg);
                    let k = bessel_k(order, xi);
                    let recomposed = split.singular_part(xi) + split.smooth_remainder(xi);
                    let err = (k - recomposed).norm();
                    assert!(
                        err <= 1e-12 * (1.0 + k.norm()),
                        "order {order:?} xi {xi}: err {err:.2e}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_remainder_limits() {
        let g3_0 = bessel_split(BesselOrder::Zero).smooth_remainder(c(0.0, 0.0));
        assert_relative_eq!(g3_0.re, std::f64::consts::LN_2 - EULER_GAMMA, max_relative = 1e-14);
        // order-1 remainder vanishes like xi log xi
        for &x in &[1e-3, 1e-5, 1e-7] {
            let r = bessel_split(BesselOrder::One).smooth_remainder(c(x, 0.0));
            assert!(r.norm() <= 2.0 * x * (x.ln().abs() + 1.0), "x={x}: {r}");
        }
        assert_eq!(bessel_split(BesselOrder::One).smooth_remainder(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn regular_parts_match_decompositions() {
        // K_0 = -I_0 log xi + k0_regular and K_1 = 1/xi + I_1 log xi + k1_regular
        // across the series/CF2 crossover.
        for &x in &[0.05, 0.7, 1.9, 2.1, 3.5] {
            let xi = c(x, 0.0);
            let (k0, k1) = bessel_k01(xi);
            let lhs0 = -bessel_i0(xi) * xi.ln() + k0_regular(xi);
            let lhs1 = xi.inv() + bessel_i1(xi) * xi.ln() + k1_regular(xi);
            assert_relative_eq!(lhs0.re, k0.re, max_relative = 1e-12);
            assert_relative_eq!(lhs1.re, k1.re, max_relative = 1e-12);
        }
    }
}
