//! Essential-spectrum bands of the shell-coupled operator and the
//! straight-line symbol calculus behind them.
//!
//! The essential spectrum is the union of the free bands
//! (−∞, −|m|c²] ∪ [|m|c², ∞) with the closure of two explicit dispersion
//! branches z_±(k) restricted by a sign condition.  Three regimes occur:
//! d = 4c² with λ ≠ 0 fills the whole line, d = 4c² with λ = 0 adds one
//! isolated point inside the gap, and the generic case d ≠ 4c² produces
//! interval hulls of the admissible branch values.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dirac::{interaction_matrix, CMatrix2, InteractionParams};
use crate::roots::{bisect, golden_max, golden_min};

/// Relative tolerance for the regime dispatch d = 4c².
const REGIME_RTOL: f64 = 1e-12;
/// Band endpoints closer than this (relative to the gap radius) are merged.
const MERGE_RTOL: f64 = 1e-10;
/// Number of uniform samples per dispersion branch.
const SWEEP_SAMPLES: usize = 8001;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BandError {
    #[error("dispersion branches are degenerate when d = 4c^2; use the regime formulas")]
    DegenerateDispersion,
    #[error("momentum symbol evaluated on its branch cut")]
    BranchCut,
}

/// Branch selector for two-valued dispersion formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A real number extended with ±∞, serialized as the strings "inf"/"-inf"
/// so that band endpoints survive a JSON round trip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtRealVisitor;
        impl Visitor<'_> for ExtRealVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"/\"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                Ok(ExtReal(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal(f64::INFINITY)),
                    "-inf" => Ok(ExtReal(f64::NEG_INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(ExtRealVisitor)
    }
}

/// Which closed-form case of the essential-spectrum theorem applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "d_eq_4c2_lambda_nonzero")]
    DEq4c2LambdaNonzero,
    #[serde(rename = "d_eq_4c2_lambda_zero")]
    DEq4c2LambdaZero,
    #[serde(rename = "generic")]
    Generic,
}

/// Essential spectrum as sorted disjoint closed bands plus isolated points,
/// together with the open complement inside the spectral gap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Closed intervals, sorted and pairwise disjoint; infinite endpoints allowed.
    pub bands: Vec<[ExtReal; 2]>,
    /// Isolated essential-spectrum points strictly inside the gap.
    #[serde(rename = "points")]
    pub isolated_points: Vec<f64>,
    pub regime: Regime,
    pub critical: bool,
    /// Open intervals of (−|m|c², |m|c²) free of essential spectrum.
    pub gap_complement: Vec<[f64; 2]>,
}

fn d_equals_4c2(p: &InteractionParams) -> bool {
    let c2 = p.light_speed * p.light_speed;
    (p.d() - 4.0 * c2).abs() <= REGIME_RTOL * (p.d().abs() + 4.0 * c2)
}

/// Quadratic under the square root of z_±: A k² − 2 B k + C.  Its
/// discriminant is −m²x²(τ²c² + λ²c² + x²) ≤ 0, so it never goes negative.
struct Dispersion {
    a: f64,
    b: f64,
    c_term: f64,
    /// |d/(4c²) − 1|
    d_abs: f64,
    /// sign(d/(4c²) − 1) folded into the admissibility product
    denom: f64,
    eta: f64,
    lambda: f64,
    tau_m: f64,
    /// d − 4c²
    d_shift: f64,
    c2: f64,
}

impl Dispersion {
    fn new(p: &InteractionParams) -> Self {
        let c2 = p.light_speed * p.light_speed;
        let x = 0.25 * p.d() + c2;
        let dd = p.d() / (4.0 * c2) - 1.0;
        Dispersion {
            a: p.tau * p.tau * c2 + x * x,
            b: p.lambda * p.tau * p.mass * c2,
            c_term: (p.lambda * p.lambda * c2 + x * x) * p.mass * p.mass,
            d_abs: dd.abs(),
            denom: p.eta * p.eta / c2 + dd * dd,
            eta: p.eta,
            lambda: p.lambda,
            tau_m: p.tau * p.mass,
            d_shift: p.d() - 4.0 * c2,
            c2,
        }
    }

    fn radicand(&self, k: f64) -> f64 {
        ((self.a * k - 2.0 * self.b) * k + self.c_term).max(0.0)
    }

    fn z(&self, k: f64, sign: Sign) -> f64 {
        (-self.eta * (self.lambda * k + self.tau_m)
            + sign.factor() * self.d_abs * self.radicand(k).sqrt())
            / self.denom
    }

    /// Strict admissibility condition from the band theorem.
    fn admissible(&self, k: f64, z: f64) -> bool {
        self.product(k, z) > 0.0
    }

    fn product(&self, k: f64, z: f64) -> f64 {
        self.d_shift * (self.eta * z / self.c2 + self.lambda * k + self.tau_m)
    }
}

/// Dispersion branch value z_±(k) in the generic regime d ≠ 4c².
pub fn z_pm(k: f64, sign: Sign, p: &InteractionParams) -> Result<f64, BandError> {
    if d_equals_4c2(p) {
        return Err(BandError::DegenerateDispersion);
    }
    Ok(Dispersion::new(p).z(k, sign))
}

fn full_line_report(regime: Regime, critical: bool) -> SpectrumReport {
    SpectrumReport {
        bands: vec![[ExtReal(f64::NEG_INFINITY), ExtReal(f64::INFINITY)]],
        isolated_points: Vec::new(),
        regime,
        critical,
        gap_complement: Vec::new(),
    }
}

/// Closed-form essential spectrum of the shell-coupled operator.
pub fn essential_spectrum(p: &InteractionParams) -> SpectrumReport {
    let g = p.gap_radius();
    let critical = p.is_critical();

    if d_equals_4c2(p) {
        if p.lambda != 0.0 {
            return full_line_report(Regime::DEq4c2LambdaNonzero, critical);
        }
        if g == 0.0 {
            return full_line_report(Regime::DEq4c2LambdaZero, critical);
        }
        // d = 4c² with λ = 0 forces η² = 4c² + τ², hence η ≠ 0 and the
        // isolated point lies strictly inside the gap.
        assert!(p.eta != 0.0, "eta must not vanish when d = 4c^2 and lambda = 0");
        // The `+ 0.0` normalizes the sign of an IEEE −0.0 (τ = 0 case).
        let point = -(p.tau / p.eta) * p.mass * p.light_speed * p.light_speed + 0.0;
        return SpectrumReport {
            bands: vec![
                [ExtReal(f64::NEG_INFINITY), ExtReal(-g)],
                [ExtReal(g), ExtReal(f64::INFINITY)],
            ],
            isolated_points: vec![point],
            regime: Regime::DEq4c2LambdaZero,
            critical,
            gap_complement: vec![[-g, point], [point, g]],
        };
    }

    if g == 0.0 {
        return full_line_report(Regime::Generic, critical);
    }

    let disp = Dispersion::new(p);
    let kmax = 50.0 * 1.0f64.max(p.mass.abs() * p.light_speed);
    let step = 2.0 * kmax / (SWEEP_SAMPLES - 1) as f64;
    let ks: Vec<f64> = (0..SWEEP_SAMPLES).map(|i| -kmax + step * i as f64).collect();
    let k_tol = 1e-12 * kmax;

    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let zs: Vec<f64> = ks.iter().map(|&k| disp.z(k, sign)).collect();
        let adm: Vec<bool> =
            ks.iter().zip(&zs).map(|(&k, &z)| disp.admissible(k, z)).collect();
        let prod = |k: f64| disp.product(k, disp.z(k, sign));
        let zf = |k: f64| disp.z(k, sign);

        let mut i = 0;
        while i < SWEEP_SAMPLES {
            if !adm[i] {
                i += 1;
                continue;
            }
            let i0 = i;
            while i < SWEEP_SAMPLES && adm[i] {
                i += 1;
            }
            let i1 = i - 1;

            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut jmin, mut jmax) = (i0, i0);
            for j in i0..=i1 {
                if zs[j] < lo {
                    lo = zs[j];
                    jmin = j;
                }
                if zs[j] > hi {
                    hi = zs[j];
                    jmax = j;
                }
            }

            // Refine the run boundaries: the closure includes the branch
            // value where the admissibility product crosses zero.
            let mut left_k = ks[i0];
            if i0 > 0 {
                left_k = bisect(&prod, ks[i0 - 1], ks[i0], k_tol);
                let zb = zf(left_k);
                lo = lo.min(zb);
                hi = hi.max(zb);
            }
            let mut right_k = ks[i1];
            if i1 + 1 < SWEEP_SAMPLES {
                right_k = bisect(&prod, ks[i1], ks[i1 + 1], k_tol);
                let zb = zf(right_k);
                lo = lo.min(zb);
                hi = hi.max(zb);
            }

            // Refine interior extrema around the best grid samples.
            let window = |j: usize| -> (f64, f64) {
                let a = if j == i0 { left_k } else { ks[j - 1] };
                let b = if j == i1 { right_k } else { ks[j + 1] };
                (a, b)
            };
            let (wa, wb) = window(jmin);
            lo = lo.min(golden_min(&zf, wa, wb, k_tol).1);
            let (wa, wb) = window(jmax);
            hi = hi.max(golden_max(&zf, wa, wb, k_tol).1);

            pieces.push((lo, hi));
        }

        // Horizontal asymptotes: when the branch slope cancels as k → ±∞
        // the branch accumulates at a finite limit that the bounded sweep
        // cannot reach; append the tail interval analytically.
        if disp.a > 0.0 {
            let sqrt_a = disp.a.sqrt();
            for dir in [1.0f64, -1.0] {
                let slope_num = -dir * disp.eta * disp.lambda + sign.factor() * disp.d_abs * sqrt_a;
                let scale = (disp.eta * disp.lambda).abs() + disp.d_abs * sqrt_a;
                if slope_num.abs() > 1e-12 * scale {
                    continue;
                }
                let limit = (-disp.eta * disp.tau_m
                    - dir * sign.factor() * disp.d_abs * disp.b / sqrt_a)
                    / disp.denom;
                // Stable tail value: z(k) − limit without the O(k) cancellation.
                let z_tail = |k: f64| {
                    limit
                        + sign.factor() * disp.d_abs
                            * ((disp.c_term - 2.0 * disp.b * k)
                                / (disp.radicand(k).sqrt() + sqrt_a * k.abs())
                                + dir * disp.b / sqrt_a)
                            / disp.denom
                };
                let k_edge = dir * kmax;
                let tail_value = if disp.admissible(k_edge, zf(k_edge)) {
                    // Whole tail beyond the sweep is admissible.
                    Some(z_tail(k_edge))
                } else if disp.d_shift * disp.lambda * dir > 0.0 {
                    // Admissibility starts beyond the sweep; by then the
                    // branch sits within O(1/k) of its limit.
                    let k_far = dir * 1e7 * kmax;
                    Some(z_tail(k_far))
                } else {
                    None
                };
                if let Some(v) = tail_value {
                    pieces.push((v.min(limit), v.max(limit)));
                }
            }
        }
    }

    assemble_report(pieces, g, critical)
}

/// Clamp in-gap pieces, merge with the free bands, split out isolated
/// points, and compute the open complement inside the gap.
fn assemble_report(pieces: Vec<(f64, f64)>, g: f64, critical: bool) -> SpectrumReport {
    let merge_tol = MERGE_RTOL * g;
    let mut items: Vec<(f64, f64)> = vec![(f64::NEG_INFINITY, -g), (g, f64::INFINITY)];
    for (lo, hi) in pieces {
        let (lo, hi) = (lo.max(-g), hi.min(g));
        if lo <= hi {
            items.push((lo, hi));
        }
    }
    items.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut merged: Vec<(f64, f64)> = Vec::new();
    for it in items {
        if let Some(last) = merged.last_mut() {
            if it.0 <= last.1 + merge_tol {
                last.1 = last.1.max(it.1);
                continue;
            }
        }
        merged.push(it);
    }

    let mut bands = Vec::new();
    let mut isolated_points = Vec::new();
    for &(lo, hi) in &merged {
        if hi - lo <= merge_tol {
            isolated_points.push(0.5 * (lo + hi));
        } else {
            bands.push((lo, hi));
        }
    }

    let mut filled: Vec<(f64, f64)> = bands.clone();
    filled.extend(isolated_points.iter().map(|&q| (q, q)));
    filled.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut gap_complement = Vec::new();
    let mut start = -g;
    for &(lo, hi) in &filled {
        if hi <= start {
            continue;
        }
        if lo > start && start < g {
            gap_complement.push([start, lo.min(g)]);
        }
        start = start.max(hi);
        if start >= g {
            break;
        }
    }
    if start < g {
        gap_complement.push([start, g]);
    }

    SpectrumReport {
        bands: bands.into_iter().map(|(lo, hi)| [ExtReal(lo), ExtReal(hi)]).collect(),
        isolated_points,
        regime: Regime::Generic,
        critical,
        gap_complement,
    }
}

/// Fourier symbol of the free resolvent boundary operator on a straight
/// line: c_z(p) = (1/(2√(p²c² + (mc²)² − z²)))·[[z/c + mc, p], [p, z/c − mc]].
pub fn line_symbol(
    momentum: f64,
    z: Complex64,
    params: &InteractionParams,
) -> Result<CMatrix2, BandError> {
    let c = params.light_speed;
    let m = params.mass;
    let w = Complex64::new(momentum * momentum * c * c + m * m * c.powi(4), 0.0) - z * z;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(BandError::BranchCut);
    }
    let root = w.sqrt();
    let zc = z / c;
    let mc = Complex64::new(m * c, 0.0);
    let p = Complex64::new(momentum, 0.0);
    Ok(Matrix2::new(zc + mc, p, p, zc - mc) / (2.0 * root))
}

/// Value of one eigenvalue curve of the line interaction symbol, with
/// boundedness flags for both momentum tails.
#[derive(Clone, Copy, Debug)]
pub struct MuEvaluation {
    pub value: Complex64,
    /// Whether the inner radicand was nonnegative (it always is for real p).
    pub real: bool,
    /// |μ| stays bounded as p → +∞.
    pub bounded_pos: bool,
    /// |μ| stays bounded as p → −∞.
    pub bounded_neg: bool,
}

/// Eigenvalue curves μ_±(p) = √(p²+1)·(η ± √(η² − d + 4p²c²/(p²+(mc)²)
/// + 4pcλ/√(p²+(mc)²))) of the weighted line symbol.  The radicand equals
/// τ² + (λ + 2pc/√(p²+(mc)²))², manifestly nonnegative.  Boundedness of a
/// tail is exactly the criticality mechanism: it happens iff
/// η + (±)√(τ² + (λ ± 2c)²) = 0.
pub fn mu_pm(momentum: f64, sign: Sign, params: &InteractionParams) -> MuEvaluation {
    let c = params.light_speed;
    let pm2 = momentum * momentum + params.mass * params.mass * c * c;
    let w = if pm2 > 0.0 {
        params.lambda + 2.0 * momentum * c / pm2.sqrt()
    } else {
        params.lambda
    };
    let rho = params.tau * params.tau + w * w;
    let value = Complex64::new(
        (momentum * momentum + 1.0).sqrt() * (params.eta + sign.factor() * rho.sqrt()),
        0.0,
    );
    let tail_limit = |w_inf: f64| -> bool {
        let r = params.tau * params.tau + w_inf * w_inf;
        let lim = params.eta + sign.factor() * r.sqrt();
        lim.abs() <= 1e-9 * (params.eta.abs() + r.sqrt() + 1.0)
    };
    MuEvaluation {
        value,
        real: true,
        bounded_pos: tail_limit(params.lambda + 2.0 * c),
        bounded_neg: tail_limit(params.lambda - 2.0 * c),
    }
}

/// Eigenvalues of V·c_z(p), the Fourier symbol of the Birman–Schwinger
/// operator on a straight line (normal (0, −1)), via the 2×2 closed form.
pub fn line_bs_eigenvalues(
    momentum: f64,
    z: Complex64,
    params: &InteractionParams,
) -> Result<(Complex64, Complex64), BandError> {
    let sym = line_symbol(momentum, z, params)?;
    let m = interaction_matrix(params, [0.0, -1.0]) * sym;
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - 4.0 * det).sqrt();
    Ok((0.5 * (tr + disc), 0.5 * (tr - disc)))
}
