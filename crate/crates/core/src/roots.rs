//! Scalar bisection and golden-section search used by the band sweep and the
//! eigenvalue scans.

/// Bisection on a bracketing interval; returns the midpoint after the
/// interval has shrunk below `tol` (or 200 iterations). `f(a)` and `f(b)`
/// must have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    debug_assert!(fa * f(b) <= 0.0, "bisect requires a sign change");
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= tol {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization on [a, b]; returns (argmin, min). Assumes f
/// is unimodal on the interval; on merely continuous f it still returns a
/// local minimum no worse than the best golden sample.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    if fm <= f1 && fm <= f2 {
        (xm, fm)
    } else if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(&|t| -f(t), a, b, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bisect_finds_root() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert_relative_eq!(r, 2.0f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn golden_finds_extrema() {
        // Near a quadratic minimum the abscissa is only √ε-accurate, but the
        // value is accurate to ε — the value is what the band sweep consumes.
        let (x, v) = golden_min(&|t: f64| (t - 0.7) * (t - 0.7) + 3.0, -1.0, 2.0, 1e-12);
        assert_relative_eq!(x, 0.7, epsilon = 1e-7);
        assert_relative_eq!(v, 3.0, epsilon = 1e-13);
        let (x, v) = golden_max(&|t: f64| t.sin(), 0.0, 3.0, 1e-12);
        assert_relative_eq!(x, std::f64::consts::FRAC_PI_2, epsilon = 1e-7);
        assert_relative_eq!(v, 1.0, epsilon = 1e-13);
    }
}
