//! Gauss-Legendre rules and a small adaptive integrator used for curve
//! geometry and reference integrals.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = x;
        weights[k] = w;
        nodes[n - 1 - k] = -x;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
    }
    // ascending order
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Maps a rule on [-1, 1] to [a, b].
pub fn map_to_interval(nodes: &[f64], weights: &[f64], a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        nodes.iter().map(|&t| mid + half * t).collect(),
        weights.iter().map(|&w| w * half).collect(),
    )
}

/// Adaptive integral of an R^2-valued function, by comparing one
/// Gauss-Legendre estimate against the two-half refinement and bisecting
/// until they agree within the tolerance.
pub fn integrate_vec2<F>(f: &F, a: f64, b: f64, tol: f64) -> [f64; 2]
where
    F: Fn(f64) -> [f64; 2],
{
    let (nodes, weights) = gauss_legendre(12);
    let rule = (nodes.as_slice(), weights.as_slice());
    adaptive(f, a, b, tol, rule, gl_apply(f, a, b, rule), 0)
}

pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    integrate_vec2(&|s| [f(s), 0.0], a, b, tol)[0]
}

fn gl_apply<F>(f: &F, a: f64, b: f64, rule: (&[f64], &[f64])) -> [f64; 2]
where
    F: Fn(f64) -> [f64; 2],
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = [0.0, 0.0];
    for (&t, &w) in rule.0.iter().zip(rule.1) {
        let v = f(mid + half * t);
        acc[0] += w * v[0];
        acc[1] += w * v[1];
    }
    [acc[0] * half, acc[1] * half]
}

fn adaptive<F>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    rule: (&[f64], &[f64]),
    whole: [f64; 2],
    depth: usize,
) -> [f64; 2]
where
    F: Fn(f64) -> [f64; 2],
{
    let mid = 0.5 * (a + b);
    let left = gl_apply(f, a, mid, rule);
    let right = gl_apply(f, mid, b, rule);
    let refined = [left[0] + right[0], left[1] + right[1]];
    let err = (refined[0] - whole[0]).abs() + (refined[1] - whole[1]).abs();
    // The minimum depth guards against accepting a spuriously agreeing pair
    // of estimates before any feature of the integrand has been sampled.
    if (err <= tol && depth >= 3) || depth >= 48 {
        return refined;
    }
    // Floor the child tolerance at the rounding noise of the running values;
    // otherwise an unreachable absolute tolerance recurses every branch to
    // the depth cap, which is exponential work.
    let child_tol = (0.5 * tol)
        .max(4.0 * f64::EPSILON * (refined[0].abs() + refined[1].abs()));
    let l = adaptive(f, a, mid, child_tol, rule, left, depth + 1);
    let r = adaptive(f, mid, b, child_tol, rule, right, depth + 1);
    [l[0] + r[0], l[1] + r[1]]
}

/// Product-quadrature moments for a Gauss-Legendre panel on [-1, 1].
///
/// For a smooth density given by its values at the p Gauss-Legendre nodes,
/// these moments integrate the density against 1/(x-t) (principal value) and
/// ln|x-t| exactly for the degree-(p-1) interpolant.  The construction goes
/// through the Legendre expansion of the Lagrange basis: with c_{jn} =
/// (2n+1) w_j P_n(tau_j) / 2 (exact for Gauss-Legendre since the products
/// have degree <= 2p-2), the moments reduce to Legendre functions of the
/// second kind, Q_n(x), whose upward recurrence is stable for the panel
/// geometries used here (targets a bounded multiple of the panel away).
pub struct ProductQuadrature {
    /// Gauss-Legendre nodes on [-1, 1], ascending.
    pub nodes: Vec<f64>,
    /// Gauss-Legendre weights.
    pub weights: Vec<f64>,
    /// legendre[j][n] = P_n(tau_j) for n < p.
    legendre: Vec<Vec<f64>>,
}

impl ProductQuadrature {
    pub fn new(p: usize) -> Self {
        assert!(p >= 2);
        let (nodes, weights) = gauss_legendre(p);
        let legendre = nodes
            .iter()
            .map(|&t| legendre_values(p, t))
            .collect::<Vec<_>>();
        ProductQuadrature {
            nodes,
            weights,
            legendre,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weights m_j such that sum_j m_j f(tau_j) equals the principal-value
    /// integral over [-1, 1] of f(t) / (x - t) for polynomial f of degree < p.
    /// Valid both for x inside (-1, 1) (principal value) and outside.
    pub fn cauchy_moments(&self, x: f64) -> Vec<f64> {
        let p = self.len();
        let q = legendre_q_values(p, x);
        (0..p)
            .map(|j| {
                let mut sum = 0.0;
                for n in 0..p {
                    sum += (2.0 * n as f64 + 1.0) * self.legendre[j][n] * q[n];
                }
                self.weights[j] * sum
            })
            .collect()
    }

    /// Weights m_j such that sum_j m_j f(tau_j) equals the integral over
    /// [-1, 1] of f(t) ln|x - t| for polynomial f of degree < p.
    pub fn log_moments(&self, x: f64) -> Vec<f64> {
        let p = self.len();
        // One extra Q so the n = p-1 term has its Q_{n+1}.
        let q = legendre_q_values(p + 1, x);
        // integral of P_0 ln|x - t| in closed form.
        let l0 = (1.0 - x) * ln_abs(1.0 - x) + (1.0 + x) * ln_abs(1.0 + x) - 2.0;
        (0..p)
            .map(|j| {
                let mut sum = 0.5 * l0;
                for n in 1..p {
                    // integral of P_n(t) ln|x-t| dt = (Q_{n+1} - Q_{n-1}) * 2/(2n+1),
                    // and the (2n+1)/2 from the basis coefficient cancels it.
                    sum += self.legendre[j][n] * (q[n + 1] - q[n - 1]);
                }
                self.weights[j] * sum
            })
            .collect()
    }
}

fn ln_abs(u: f64) -> f64 {
    if u == 0.0 {
        // Limit u ln|u| -> 0 makes the coefficient irrelevant; keep it finite.
        0.0
    } else {
        u.abs().ln()
    }
}

/// P_0(x), ..., P_{count-1}(x).
fn legendre_values(count: usize, x: f64) -> Vec<f64> {
    let mut vals = Vec::with_capacity(count);
    let mut p0 = 1.0;
    let mut p1 = x;
    vals.push(p0);
    if count > 1 {
        vals.push(p1);
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
        vals.push(p2);
        p0 = p1;
        p1 = p2;
    }
    vals
}

/// Q_0(x), ..., Q_{count-1}(x): Legendre functions of the second kind, using
/// the principal-value branch on (-1, 1) and the real branch off the cut.
/// The shared upward recurrence (n+1) Q_{n+1} = (2n+1) x Q_n - n Q_{n-1}
/// holds in both regimes.
fn legendre_q_values(count: usize, x: f64) -> Vec<f64> {
    let mut vals = Vec::with_capacity(count);
    let q0 = 0.5 * (ln_abs(1.0 + x) - ln_abs(1.0 - x));
    let q1 = x * q0 - 1.0;
    vals.push(q0);
    if count > 1 {
        vals.push(q1);
    }
    let mut a = q0;
    let mut b = q1;
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let c = ((2.0 * nf + 1.0) * x * b - nf * a) / (nf + 1.0);
        vals.push(c);
        a = b;
        b = c;
    }
    vals
}
