//! Unbounded planar curves with straight ends, built from a tangent-angle
//! function that is constant outside a compact arc-length interval. Provides
//! the straight line, a smoothed corner whose rays lie on the broken line
//! { (r cos w, +/- r sin w) : r > 0 }, and compactly perturbed lines, plus
//! panelized quadrature sampling of the truncated curve.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{gauss_legendre, integrate_vec2, map_to_interval};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurveError {
    #[error("corner half-angle must lie strictly between 0 and pi/2, got {0}")]
    InvalidHalfAngle(f64),
    #[error("transition width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("bump halfwidth must be positive and finite, got {0}")]
    InvalidBumpHalfwidth(f64),
    #[error("curve ends are antiparallel")]
    AntiparallelEnds,
    #[error("injectivity check failed: bi-Lipschitz estimate {estimate:.3e} below 1e-6")]
    NotInjective { estimate: f64 },
    #[error("truncation halflength {l_trunc} must exceed the compact support bound {compact_bound}")]
    TruncationTooShort { l_trunc: f64, compact_bound: f64 },
    #[error("node density must be positive, got {0}")]
    InvalidNodeDensity(f64),
}

/// Compactly supported smooth perturbation of the tangent angle:
/// amplitude * exp(-1/(1 - u^2)) with u = (s - center)/halfwidth, zero for
/// |u| >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentBump {
    pub amplitude: f64,
    pub center: f64,
    pub halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurveFamily {
    StraightLine,
    SmoothedCorner {
        #[serde(rename = "omega")]
        half_angle: f64,
        #[serde(rename = "width")]
        transition_width: f64,
    },
    PerturbedLine { bumps: Vec<TangentBump> },
}

/// Odd C-infinity step: -1 for u <= -1, +1 for u >= 1, tanh(u/(1-u^2))
/// between; all derivatives vanish at u = +/-1, so curves built from it are
/// exactly straight outside the transition.
fn smoothstep(u: f64) -> f64 {
    if u <= -1.0 {
        -1.0
    } else if u >= 1.0 {
        1.0
    } else {
        (u / (1.0 - u * u)).tanh()
    }
}

fn smoothstep_derivative(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let g = u / (1.0 - u * u);
        let sech = 1.0 / g.cosh();
        let gp = (1.0 + u * u) / ((1.0 - u * u) * (1.0 - u * u));
        sech * sech * gp
    }
}

fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

fn bump_derivative(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let q = 1.0 - u * u;
        (-1.0 / q).exp() * (-2.0 * u / (q * q))
    } else {
        0.0
    }
}

/// A validated curve: unit-speed, injective, straight outside arc length
/// |s| > compact_support_bound, ends not antiparallel.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    family: CurveFamily,
    base_point: [f64; 2],
    compact_support_bound: f64,
    /// shift applied to the raw integrated curve; for the smoothed corner it
    /// moves the apex of the two asymptote lines to base_point
    translation: [f64; 2],
    anchor_minus: [f64; 2],
    anchor_plus: [f64; 2],
    end_angle_minus: f64,
    end_angle_plus: f64,
    bi_lipschitz_estimate: f64,
}

const INJECTIVITY_FLOOR: f64 = 1e-6;
const GEOMETRY_TOL: f64 = 1e-14;

impl CurveSpec {
    pub fn build(family: CurveFamily, base_point: [f64; 2]) -> Result<Self, CurveError> {
        match &family {
            CurveFamily::StraightLine => {}
            CurveFamily::SmoothedCorner { half_angle, transition_width } => {
                if !(*half_angle > 0.0 && *half_angle < std::f64::consts::FRAC_PI_2) {
                    return Err(CurveError::InvalidHalfAngle(*half_angle));
                }
                if !(*transition_width > 0.0) || !transition_width.is_finite() {
                    return Err(CurveError::InvalidWidth(*transition_width));
                }
            }
            CurveFamily::PerturbedLine { bumps } => {
                for b in bumps {
                    if !(b.halfwidth > 0.0) || !b.halfwidth.is_finite() {
                        return Err(CurveError::InvalidBumpHalfwidth(b.halfwidth));
                    }
                }
            }
        }

        let compact_support_bound = match &family {
            CurveFamily::StraightLine => 1.0,
            CurveFamily::SmoothedCorner { transition_width, .. } => *transition_width,
            CurveFamily::PerturbedLine { bumps } => bumps
                .iter()
                .map(|b| b.center.abs() + b.halfwidth)
                .fold(1.0f64, f64::max),
        };

        let mut spec = CurveSpec {
            family,
            base_point,
            compact_support_bound,
            translation: base_point,
            anchor_minus: [0.0; 2],
            anchor_plus: [0.0; 2],
            end_angle_minus: 0.0,
            end_angle_plus: 0.0,
            bi_lipschitz_estimate: 0.0,
        };
        let m = spec.compact_support_bound;
        spec.end_angle_minus = spec.tangent_angle(-m);
        spec.end_angle_plus = spec.tangent_angle(m);

        let raw_plus = spec.integrate_raw(m);
        let raw_minus = spec.integrate_raw(-m);
        if let CurveFamily::SmoothedCorner { half_angle, .. } = spec.family {
            // Translate so that the apex of the asymptote lines sits at the
            // base point; the straight parts then lie exactly on the rays
            // of the broken line through base_point.
            let apex_x = raw_plus[0] - raw_plus[1] * half_angle.cos() / half_angle.sin();
            spec.translation = [base_point[0] - apex_x, base_point[1]];
        }
        spec.anchor_plus =
            [spec.translation[0] + raw_plus[0], spec.translation[1] + raw_plus[1]];
        spec.anchor_minus =
            [spec.translation[0] + raw_minus[0], spec.translation[1] + raw_minus[1]];

        let t_minus = spec.tangent(-m);
        let t_plus = spec.tangent(m);
        let end_sum =
            ((t_minus[0] + t_plus[0]).powi(2) + (t_minus[1] + t_plus[1]).powi(2)).sqrt();
        if end_sum <= 1e-12 {
            return Err(CurveError::AntiparallelEnds);
        }

        spec.bi_lipschitz_estimate = spec.estimate_bi_lipschitz();
        if spec.bi_lipschitz_estimate < INJECTIVITY_FLOOR {
            return Err(CurveError::NotInjective { estimate: spec.bi_lipschitz_estimate });
        }
        Ok(spec)
    }

    pub fn family(&self) -> &CurveFamily {
        &self.family
    }

    /// Arc length beyond which the tangent angle is constant.
    pub fn compact_support_bound(&self) -> f64 {
        self.compact_support_bound
    }

    pub fn bi_lipschitz_estimate(&self) -> f64 {
        self.bi_lipschitz_estimate
    }

    pub fn tangent_angle(&self, s: f64) -> f64 {
        match &self.family {
            CurveFamily::StraightLine => 0.0,
            CurveFamily::SmoothedCorner { half_angle, transition_width } => {
                let half_pi = std::f64::consts::FRAC_PI_2;
                half_pi - (half_pi - half_angle) * smoothstep(s / transition_width)
            }
            CurveFamily::PerturbedLine { bumps } => bumps
                .iter()
                .map(|b| b.amplitude * bump((s - b.center) / b.halfwidth))
                .sum(),
        }
    }

    /// d(psi)/ds, the signed curvature of the unit-speed curve.
    pub fn turn_rate(&self, s: f64) -> f64 {
        match &self.family {
            CurveFamily::StraightLine => 0.0,
            CurveFamily::SmoothedCorner { half_angle, transition_width } => {
                let half_pi = std::f64::consts::FRAC_PI_2;
                -(half_pi - half_angle) / transition_width
                    * smoothstep_derivative(s / transition_width)
            }
            CurveFamily::PerturbedLine { bumps } => bumps
                .iter()
                .map(|b| {
                    b.amplitude / b.halfwidth * bump_derivative((s - b.center) / b.halfwidth)
                })
                .sum(),
        }
    }

    pub fn tangent(&self, s: f64) -> [f64; 2] {
        let psi = self.tangent_angle(s);
        [psi.cos(), psi.sin()]
    }

    /// Unit normal nu = (t2, -t1).
    pub fn normal(&self, s: f64) -> [f64; 2] {
        let t = self.tangent(s);
        [t[1], -t[0]]
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        let m = self.compact_support_bound;
        if s >= m {
            let d = self.tangent(m);
            [self.anchor_plus[0] + (s - m) * d[0], self.anchor_plus[1] + (s - m) * d[1]]
        } else if s <= -m {
            let d = self.tangent(-m);
            [self.anchor_minus[0] + (s + m) * d[0], self.anchor_minus[1] + (s + m) * d[1]]
        } else {
            let raw = self.integrate_raw(s);
            [self.translation[0] + raw[0], self.translation[1] + raw[1]]
        }
    }

    /// Integral of the tangent from 0 to s, before translation. The smoothed
    /// corner uses its reflection symmetry so that the two halves are exact
    /// mirror images in floating point.
    fn integrate_raw(&self, s: f64) -> [f64; 2] {
        if s == 0.0 {
            return [0.0, 0.0];
        }
        if matches!(self.family, CurveFamily::SmoothedCorner { .. }) && s < 0.0 {
            let p = self.integrate_raw(-s);
            return [p[0], -p[1]];
        }
        let f = |u: f64| {
            let psi = self.tangent_angle(u);
            [psi.cos(), psi.sin()]
        };
        integrate_vec2(&f, 0.0, s, GEOMETRY_TOL)
    }

    /// Directions of the two straight rays, pointing away from the compact
    /// part. For the smoothed corner these are (cos w, -sin w) and
    /// (cos w, sin w).
    pub fn ray_directions(&self) -> ([f64; 2], [f64; 2]) {
        let tm = self.tangent(-self.compact_support_bound);
        let tp = self.tangent(self.compact_support_bound);
        ([-tm[0], -tm[1]], tp)
    }

    /// Lower estimate of inf |gamma(s) - gamma(t)|/|s - t|: the minimum of a
    /// dense-grid search over the compact part and the exact asymptotic
    /// value |t_- + t_+|/2 attained along the two rays.
    fn estimate_bi_lipschitz(&self) -> f64 {
        let m = self.compact_support_bound;
        let reach = m + 40.0;
        let n = 1201usize;
        let pts: Vec<(f64, [f64; 2])> = (0..n)
            .map(|i| {
                let s = -reach + 2.0 * reach * i as f64 / (n - 1) as f64;
                (s, self.point(s))
            })
            .collect();
        let mut min_ratio = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let (si, pi) = pts[i];
                let (sj, pj) = pts[j];
                let chord = (pi[0] - pj[0]).hypot(pi[1] - pj[1]);
                let ratio = chord / (sj - si);
                if ratio < min_ratio {
                    min_ratio = ratio;
                }
            }
        }
        let tm = self.tangent(-m);
        let tp = self.tangent(m);
        let asymptotic = 0.5 * (tm[0] + tp[0]).hypot(tm[1] + tp[1]);
        min_ratio.min(asymptotic)
    }

    /// Discretizes the truncated curve on [-l_trunc, l_trunc] with composite
    /// Gauss-Legendre panels: uniform panels on the straight parts, 4x finer
    /// base panels on the compact part, and further bisection until the
    /// tangent turns by at most PANEL_TURN_LIMIT across each panel.
    pub fn sample(
        &self,
        nodes_per_unit: f64,
        l_trunc: f64,
    ) -> Result<SampledCurve, CurveError> {
        if !(nodes_per_unit > 0.0) {
            return Err(CurveError::InvalidNodeDensity(nodes_per_unit));
        }
        let m = self.compact_support_bound;
        if !(l_trunc > m) {
            return Err(CurveError::TruncationTooShort { l_trunc, compact_bound: m });
        }
        let h_out = NODES_PER_PANEL as f64 / nodes_per_unit;

        let mut breaks: Vec<(f64, f64)> = Vec::new();
        let outer_panels = ((l_trunc - m) / h_out).ceil() as usize;
        let outer_step = (l_trunc - m) / outer_panels as f64;
        for k in 0..outer_panels {
            breaks.push((-l_trunc + k as f64 * outer_step, -l_trunc + (k + 1) as f64 * outer_step));
        }
        let inner_panels = (2.0 * m / (0.25 * h_out)).ceil() as usize;
        let inner_step = 2.0 * m / inner_panels as f64;
        let mut queue: Vec<(f64, f64)> = (0..inner_panels)
            .map(|k| (-m + k as f64 * inner_step, -m + (k + 1) as f64 * inner_step))
            .collect();
        let mut inner: Vec<(f64, f64)> = Vec::new();
        while let Some((a, b)) = queue.pop() {
            if self.panel_turn(a, b) > PANEL_TURN_LIMIT && inner.len() + queue.len() < 100_000 {
                let mid = 0.5 * (a + b);
                queue.push((a, mid));
                queue.push((mid, b));
            } else {
                inner.push((a, b));
            }
        }
        inner.sort_by(|x, y| x.0.total_cmp(&y.0));
        breaks.extend(inner);
        for k in 0..outer_panels {
            breaks.push((m + k as f64 * outer_step, m + (k + 1) as f64 * outer_step));
        }

        let (gl_nodes, gl_weights) = gauss_legendre(NODES_PER_PANEL);
        let mut nodes = Vec::with_capacity(breaks.len() * NODES_PER_PANEL);
        let mut panels = Vec::with_capacity(breaks.len());
        for &(a, b) in &breaks {
            let (s_vals, w_vals) = map_to_interval(&gl_nodes, &gl_weights, a, b);
            panels.push(Panel { a, b, first_node: nodes.len(), node_count: NODES_PER_PANEL });
            for (s, w) in s_vals.into_iter().zip(w_vals) {
                nodes.push(CurveNode {
                    s,
                    point: self.point(s),
                    tangent: self.tangent(s),
                    normal: self.normal(s),
                    turn_rate: self.turn_rate(s),
                    weight: w,
                });
            }
        }

        let mut min_ratio = f64::INFINITY;
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let pi = nodes[i].point;
                let pj = nodes[j].point;
                let chord = (pi[0] - pj[0]).hypot(pi[1] - pj[1]);
                let ratio = chord / (nodes[j].s - nodes[i].s);
                if ratio < min_ratio {
                    min_ratio = ratio;
                }
            }
        }
        let tm = self.tangent(-m);
        let tp = self.tangent(m);
        min_ratio = min_ratio.min(0.5 * (tm[0] + tp[0]).hypot(tm[1] + tp[1]));

        Ok(SampledCurve {
            nodes,
            panels,
            nodes_per_panel: NODES_PER_PANEL,
            truncation_halflength: l_trunc,
            compact_support_bound: m,
            bi_lipschitz_estimate: min_ratio,
        })
    }

    fn panel_turn(&self, a: f64, b: f64) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..5 {
            let psi = self.tangent_angle(a + (b - a) * k as f64 / 4.0);
            lo = lo.min(psi);
            hi = hi.max(psi);
        }
        hi - lo
    }
}

/// Gauss-Legendre nodes per quadrature panel.
pub const NODES_PER_PANEL: usize = 6;

/// Maximum tangent turn across a single panel, chosen so that the
/// chord-to-arc defect (turn/gap)^2/24 between adjacent nodes stays below
/// 1e-4.
const PANEL_TURN_LIMIT: f64 = 0.18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveNode {
    pub s: f64,
    pub point: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    pub turn_rate: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub first_node: usize,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub nodes: Vec<CurveNode>,
    pub panels: Vec<Panel>,
    pub nodes_per_panel: usize,
    pub truncation_halflength: f64,
    /// Arclength bound beyond which the curve is exactly straight.
    pub compact_support_bound: f64,
    pub bi_lipschitz_estimate: f64,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn corner(omega: f64, width: f64) -> CurveSpec {
        CurveSpec::build(
            CurveFamily::SmoothedCorner { half_angle: omega, transition_width: width },
            [0.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn straight_line_geometry() {
        let line = CurveSpec::build(CurveFamily::StraightLine, [0.0, 0.0]).unwrap();
        for &s in &[-7.3, -0.2, 0.0, 2.2, 31.0] {
            let p = line.point(s);
            assert_relative_eq!(p[0], s, epsilon = 1e-13);
            assert!(p[1].abs() < 1e-13);
            assert_eq!(line.normal(s), [0.0, -1.0]);
        }
        assert_relative_eq!(line.bi_lipschitz_estimate(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn corner_preconditions() {
        let build = |omega: f64, width: f64| {
            CurveSpec::build(
                CurveFamily::SmoothedCorner { half_angle: omega, transition_width: width },
                [0.0, 0.0],
            )
        };
        assert!(matches!(
            build(std::f64::consts::FRAC_PI_2, 1.0),
            Err(CurveError::InvalidHalfAngle(_))
        ));
        assert!(matches!(build(0.0, 1.0), Err(CurveError::InvalidHalfAngle(_))));
        assert!(matches!(build(-0.3, 1.0), Err(CurveError::InvalidHalfAngle(_))));
        assert!(matches!(build(0.5, 0.0), Err(CurveError::InvalidWidth(_))));
        assert!(build(std::f64::consts::FRAC_PI_2 - 1e-9, 1.0).is_ok());
    }

    #[test]
    fn near_touching_hairpin_rejected() {
        // the asymptotic ray separation ratio sin(omega) falls below the
        // injectivity floor
        let r = CurveSpec::build(
            CurveFamily::SmoothedCorner { half_angle: 1e-7, transition_width: 0.5 },
            [0.0, 0.0],
        );
        assert!(matches!(r, Err(CurveError::NotInjective { .. })));
    }

    #[test]
    fn corner_rays_lie_on_broken_line() {
        let omega = std::f64::consts::FRAC_PI_4;
        let spec = corner(omega, 1.0);
        let (ray_minus, ray_plus) = spec.ray_directions();
        assert_relative_eq!(ray_plus[0], omega.cos(), max_relative = 1e-14);
        assert_relative_eq!(ray_plus[1], omega.sin(), max_relative = 1e-14);
        assert_relative_eq!(ray_minus[0], omega.cos(), max_relative = 1e-14);
        assert_relative_eq!(ray_minus[1], -omega.sin(), max_relative = 1e-14);
        // points on both straight parts satisfy x2 = +/- x1 tan(omega)
        for &t in &[0.0, 3.0, 17.5] {
            let m = spec.compact_support_bound();
            let up = spec.point(m + t);
            assert!((up[1] - up[0] * omega.tan()).abs() <= 1e-12 * (1.0 + up[0].abs()));
            assert!(up[0] > 0.0);
            let dn = spec.point(-m - t);
            assert!((dn[1] + dn[0] * omega.tan()).abs() <= 1e-12 * (1.0 + dn[0].abs()));
            assert!(dn[0] > 0.0);
        }
    }

    #[test]
    fn corner_tangent_sweep_and_bi_lipschitz() {
        let omega = std::f64::consts::FRAC_PI_6;
        let spec = corner(omega, 1.0);
        let m = spec.compact_support_bound();
        assert_relative_eq!(spec.tangent_angle(-m), std::f64::consts::PI - omega, epsilon = 1e-15);
        assert_relative_eq!(spec.tangent_angle(m), omega, epsilon = 1e-15);
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let psi = spec.tangent_angle(-m + 2.0 * m * i as f64 / 40.0);
            assert!(psi <= prev + 1e-15, "tangent angle must decrease monotonically");
            prev = psi;
        }
        // angle between the asymptote rays is 2*omega
        assert!(spec.bi_lipschitz_estimate() >= omega.sin() / 2.0);
        assert_relative_eq!(spec.bi_lipschitz_estimate(), omega.sin(), max_relative = 1e-12);
    }

    #[test]
    fn corner_reflection_symmetry() {
        let spec = corner(0.4, 0.7);
        for &s in &[0.05, 0.3, 0.69, 0.7, 1.4, 11.0] {
            let p = spec.point(s);
            let q = spec.point(-s);
            assert_relative_eq!(q[0], p[0], epsilon = 1e-12, max_relative = 1e-12);
            assert_relative_eq!(q[1], -p[1], epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn straightness_outside_compact_part() {
        let spec = corner(0.4, 0.7);
        let m = spec.compact_support_bound();
        let samples = [m, m + 0.3, m + 2.0, m + 19.7];
        for (i, &si) in samples.iter().enumerate() {
            for &sj in &samples[i + 1..] {
                let pi = spec.point(si);
                let pj = spec.point(sj);
                let chord = (pi[0] - pj[0]).hypot(pi[1] - pj[1]);
                assert!((chord - (sj - si)).abs() <= 1e-12 * (1.0 + chord));
                let qi = spec.point(-si);
                let qj = spec.point(-sj);
                let chord = (qi[0] - qj[0]).hypot(qi[1] - qj[1]);
                assert!((chord - (sj - si)).abs() <= 1e-12 * (1.0 + chord));
            }
        }
    }

    #[test]
    fn sampled_straight_line_node_count_and_normals() {
        let line = CurveSpec::build(CurveFamily::StraightLine, [0.0, 0.0]).unwrap();
        let sampled = line.sample(10.0, 30.0).unwrap();
        assert!(sampled.len() >= 600, "got {} nodes", sampled.len());
        let mut prev = f64::NEG_INFINITY;
        let mut total = 0.0;
        for node in &sampled.nodes {
            assert_eq!(node.normal, [0.0, -1.0]);
            assert!(node.weight > 0.0);
            assert!(node.s > prev);
            prev = node.s;
            total += node.weight;
        }
        assert_relative_eq!(total, 60.0, max_relative = 1e-12);
        assert!(line.sample(10.0, 0.5).is_err());
        assert!(line.sample(0.0, 30.0).is_err());
    }

    #[test]
    fn sampled_corner_unit_speed_chords() {
        let spec = corner(std::f64::consts::FRAC_PI_6, 1.0);
        let sampled = spec.sample(10.0, 30.0).unwrap();
        for w in sampled.nodes.windows(2) {
            let ds = w[1].s - w[0].s;
            let chord = (w[1].point[0] - w[0].point[0]).hypot(w[1].point[1] - w[0].point[1]);
            let ratio = chord / ds;
            assert!(ratio <= 1.0 + 1e-12, "chord exceeds arc: {ratio}");
            assert!(ratio >= 1.0 - 1e-4, "chord-to-arc ratio {ratio} at s = {}", w[0].s);
        }
        assert!(sampled.bi_lipschitz_estimate >= (std::f64::consts::FRAC_PI_6).sin() / 2.0);
    }

    #[test]
    fn sampled_hairpin_resolves_sharp_turn() {
        // narrow transition forces graded panels; the turn per panel stays
        // bounded and the node count stays moderate
        let spec = corner(0.001, 0.03);
        let sampled = spec.sample(8.0, 25.0).unwrap();
        for p in &sampled.panels {
            assert!(spec.panel_turn(p.a, p.b) <= PANEL_TURN_LIMIT + 1e-12);
        }
        assert!(sampled.len() < 3000);
        for w in sampled.nodes.windows(2) {
            let ds = w[1].s - w[0].s;
            let chord = (w[1].point[0] - w[0].point[0]).hypot(w[1].point[1] - w[0].point[1]);
            assert!(chord / ds >= 1.0 - 1e-4);
        }
    }

    #[test]
    fn perturbed_line_geometry() {
        let spec = CurveSpec::build(
            CurveFamily::PerturbedLine {
                bumps: vec![TangentBump { amplitude: 0.4, center: 1.2, halfwidth: 0.8 }],
            },
            [0.0, 0.0],
        )
        .unwrap();
        assert_relative_eq!(spec.compact_support_bound(), 2.0, epsilon = 1e-15);
        assert_eq!(spec.tangent(3.0), [1.0, 0.0]);
        assert_eq!(spec.tangent(-3.0), [1.0, 0.0]);
        // the height offset is carried by the straight end
        let p5 = spec.point(5.0);
        let p9 = spec.point(9.0);
        assert_relative_eq!(p5[1], p9[1], epsilon = 1e-13);
        assert_relative_eq!(p9[0] - p5[0], 4.0, max_relative = 1e-13);
        assert!(spec.bi_lipschitz_estimate() >= 0.5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn corner_family_properties(
            omega in 0.05f64..1.5,
            width in 0.1f64..2.0,
            s in 0.01f64..20.0,
        ) {
            let spec = corner(omega, width);
            // reflection symmetry
            let p = spec.point(s);
            let q = spec.point(-s);
            prop_assert!((q[0] - p[0]).abs() <= 1e-11 * (1.0 + p[0].abs()));
            prop_assert!((q[1] + p[1]).abs() <= 1e-11 * (1.0 + p[1].abs()));
            // asymptotic bi-Lipschitz constant equals sin(omega)
            prop_assert!((spec.bi_lipschitz_estimate() - omega.sin()).abs() <= 1e-9);
            // unit tangent everywhere
            let t = spec.tangent(s * 0.37);
            prop_assert!((t[0].hypot(t[1]) - 1.0).abs() <= 1e-15);
        }
    }
}
