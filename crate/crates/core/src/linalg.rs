//! Dense complex linear algebra helpers: spectral norms and leading singular
//! values by (block) power iteration, and interior eigenvalues by
//! shift-invert Arnoldi with a small shifted-QR eigensolver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Deterministic, generic start vector for iterative methods.
fn start_vector(n: usize) -> CVector {
    let mut v = CVector::from_fn(n, |i, _| {
        let t = i as f64;
        Complex64::new((0.7 * t + 0.3).sin() + 0.05, (1.3 * t + 0.7).cos())
    });
    let nrm = v.norm();
    v /= Complex64::new(nrm, 0.0);
    v
}

/// Largest singular value of `a`, by power iteration on a^H a.
/// Intended for residual-norm measurements (a few digits suffice there);
/// iterates until the Rayleigh quotient stabilizes or a cap is reached.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let mut v = start_vector(n);
    let mut sigma = 0.0f64;
    for _ in 0..400 {
        let w = a * &v;
        let mut u = a.adjoint() * w;
        let nrm = u.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        u /= Complex64::new(nrm, 0.0);
        let new_sigma = nrm.sqrt();
        let done = (new_sigma - sigma).abs() <= 1e-11 * new_sigma.max(1e-300);
        sigma = new_sigma;
        v = u;
        if done {
            break;
        }
    }
    sigma
}

/// Operator 2-norm of a linear map given matrix-free through apply and
/// adjoint-apply callbacks, by power iteration on K^H K.  Useful when the
/// map is a product of large matrices that would be expensive to form.
pub fn operator_norm<F, G>(
    dim: usize,
    apply: F,
    apply_adjoint: G,
    rel_tol: f64,
    max_iters: usize,
) -> f64
where
    F: Fn(&CVector) -> CVector,
    G: Fn(&CVector) -> CVector,
{
    if dim == 0 {
        return 0.0;
    }
    let mut v = start_vector(dim);
    let mut sigma = 0.0f64;
    for _ in 0..max_iters {
        let w = apply(&v);
        let mut u = apply_adjoint(&w);
        let nrm = u.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        u /= Complex64::new(nrm, 0.0);
        let s = nrm.sqrt();
        let done = (s - sigma).abs() <= rel_tol * s.max(1e-300);
        sigma = s;
        v = u;
        if done {
            break;
        }
    }
    sigma
}

/// Orthonormalizes the columns of `x` in place by modified Gram-Schmidt with
/// one reorthogonalization pass.  Columns that collapse to zero are replaced
/// by fresh deterministic directions and re-orthogonalized.
fn orthonormalize(x: &mut CMatrix) {
    let (n, k) = (x.nrows(), x.ncols());
    for j in 0..k {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = x.column(i).dotc(&x.column(j));
                let col_i = x.column(i).into_owned();
                let mut col_j = x.column_mut(j);
                col_j.axpy(-proj, &col_i, ONE);
            }
        }
        let nrm = x.column(j).norm();
        if nrm > 1e-14 {
            let mut col = x.column_mut(j);
            col /= Complex64::new(nrm, 0.0);
        } else {
            // Degenerate direction: reseed deterministically and redo.
            let seed = CVector::from_fn(n, |i, _| {
                let t = (i + 31 * (j + 1)) as f64;
                Complex64::new((0.37 * t + 1.1).sin(), (0.91 * t).cos())
            });
            x.set_column(j, &seed);
            for i in 0..j {
                let proj = x.column(i).dotc(&x.column(j));
                let col_i = x.column(i).into_owned();
                let mut col_j = x.column_mut(j);
                col_j.axpy(-proj, &col_i, ONE);
            }
            let nrm2 = x.column(j).norm().max(1e-300);
            let mut col = x.column_mut(j);
            col /= Complex64::new(nrm2, 0.0);
        }
    }
}

/// Leading `count` singular values of `a` in descending order, by subspace
/// iteration on a^H a with Rayleigh-Ritz extraction.
pub fn top_singular_values(a: &CMatrix, count: usize, iters: usize) -> Vec<f64> {
    let n = a.ncols();
    let count = count.min(n.min(a.nrows()));
    if count == 0 {
        return Vec::new();
    }
    // Guard vectors speed convergence of the trailing wanted value.
    let k = (count + 5).min(n);
    let mut x = CMatrix::from_fn(n, k, |i, j| {
        let t = (i + 17 * j) as f64;
        Complex64::new((0.7 * t + 0.3 + 0.11 * j as f64).sin(), (1.3 * t + 0.7).cos())
    });
    orthonormalize(&mut x);
    for _ in 0..iters {
        let y = a * &x;
        x = a.adjoint() * y;
        orthonormalize(&mut x);
    }
    // Rayleigh-Ritz: eigenvalues of the projected Hermitian matrix x^H a^H a x.
    let b = a * &x;
    let g = b.adjoint() * &b;
    let sym = nalgebra::SymmetricEigen::new(g);
    let mut vals: Vec<f64> = sym
        .eigenvalues
        .iter()
        .map(|&e| e.max(0.0).sqrt())
        .collect();
    vals.sort_by(|p, q| q.partial_cmp(p).unwrap());
    vals.truncate(count);
    vals
}

/// An approximate eigenpair produced by the shift-invert Arnoldi search.
#[derive(Debug, Clone)]
pub struct RitzPair {
    /// Eigenvalue estimate of the original matrix.
    pub value: Complex64,
    /// Unit-norm eigenvector estimate.
    pub vector: CVector,
    /// Relative residual |a v - value v| / (|value| + |a| proxy).
    pub residual: f64,
}

/// Eigenvalues of `a` nearest `shift`, via Arnoldi iteration applied to
/// (a - shift I)^{-1}.  Returns up to `count` pairs ordered by increasing
/// distance to the shift.  `krylov` bounds the subspace dimension.
///
/// If the shift happens to be (numerically) an eigenvalue, the factorization
/// is retried from a slightly perturbed shift, which leaves Ritz values
/// unaffected to first order.
pub fn eigen_near_shift(
    a: &CMatrix,
    shift: Complex64,
    count: usize,
    krylov: usize,
) -> Vec<RitzPair> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    if n == 0 || count == 0 {
        return Vec::new();
    }
    let k_max = krylov.max(count + 2).min(n);

    let scale = matrix_scale(a).max(shift.norm()).max(1e-300);
    let mut effective_shift = shift;
    let mut lu = None;
    for attempt in 0..6 {
        let mut b = a.clone();
        for i in 0..n {
            b[(i, i)] -= effective_shift;
        }
        let fact = b.lu();
        let probe = fact.solve(&start_vector(n));
        match probe {
            Some(sol) if sol.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => {
                lu = Some(fact);
                break;
            }
            _ => {
                let bump = 1e-10 * scale * (10.0f64).powi(attempt);
                effective_shift = shift + Complex64::new(bump, 0.5 * bump);
            }
        }
    }
    let lu = match lu {
        Some(f) => f,
        None => return Vec::new(),
    };

    // Arnoldi on K = (a - shift I)^{-1}: K V_k = V_{k+1} H_k.
    let mut basis: Vec<CVector> = vec![start_vector(n)];
    let mut h = CMatrix::zeros(k_max + 1, k_max);
    let mut m = 0; // number of completed Arnoldi steps
    for j in 0..k_max {
        let mut w = match lu.solve(&basis[j]) {
            Some(sol) => sol,
            None => break,
        };
        if !w.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            break;
        }
        for _pass in 0..2 {
            for (i, vi) in basis.iter().enumerate() {
                let proj = vi.dotc(&w);
                w.axpy(-proj, vi, ONE);
                h[(i, j)] += proj;
            }
        }
        let nrm = w.norm();
        h[(j + 1, j)] = Complex64::new(nrm, 0.0);
        m = j + 1;
        if nrm <= 1e-13 * matrix_scale(&h) {
            // Invariant subspace found; Ritz pairs from it are exact.
            break;
        }
        w /= Complex64::new(nrm, 0.0);
        basis.push(w);
    }
    if m == 0 {
        return Vec::new();
    }

    let h_small = h.view((0, 0), (m, m)).into_owned();
    let mut thetas = hessenberg_eigenvalues(h_small.clone());
    // Dominant eigenvalues of the inverted operator are nearest the shift.
    thetas.sort_by(|p, q| q.norm().partial_cmp(&p.norm()).unwrap());
    thetas.truncate(count.min(m));

    let mut out = Vec::with_capacity(thetas.len());
    for theta in thetas {
        if theta.norm() <= 1e-14 {
            continue;
        }
        let y = hessenberg_eigenvector(&h_small, theta);
        let mut v = CVector::zeros(n);
        for (i, vi) in basis.iter().take(m).enumerate() {
            v.axpy(y[i], vi, ONE);
        }
        let nrm = v.norm().max(1e-300);
        v /= Complex64::new(nrm, 0.0);
        let value = effective_shift + theta.inv();
        let resid_vec = a * &v - &v * value;
        let residual = resid_vec.norm() / scale;
        out.push(RitzPair {
            value,
            vector: v,
            residual,
        });
    }
    out
}

/// Cheap overall magnitude proxy: max row sum of absolute values.
fn matrix_scale(a: &CMatrix) -> f64 {
    let mut best = 0.0f64;
    for i in 0..a.nrows() {
        let mut s = 0.0;
        for j in 0..a.ncols() {
            s += a[(i, j)].norm();
        }
        best = best.max(s);
    }
    best
}

/// Eigenvalues of a small complex upper-Hessenberg matrix by the explicitly
/// shifted QR iteration with Wilkinson shifts and deflation.  The matrix is
/// consumed as workspace.
pub fn hessenberg_eigenvalues(mut h: CMatrix) -> Vec<Complex64> {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return eigs;
    }
    let mut hi = n;
    let mut stagnation = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Deflate negligible subdiagonals, scanning up from the bottom.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * local.max(1e-300) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            stagnation = 0;
            continue;
        }
        // Wilkinson shift: eigenvalue of the trailing 2x2 nearest its corner.
        let a = h[(hi - 2, hi - 2)];
        let b = h[(hi - 2, hi - 1)];
        let c = h[(hi - 1, hi - 2)];
        let d = h[(hi - 1, hi - 1)];
        let tr = a + d;
        let disc = (tr * tr - 4.0 * (a * d - b * c)).sqrt();
        let r1 = 0.5 * (tr + disc);
        let r2 = 0.5 * (tr - disc);
        let mut shift = if (r1 - d).norm() <= (r2 - d).norm() { r1 } else { r2 };
        stagnation += 1;
        if stagnation % 14 == 0 {
            // Exceptional shift to break rare limit cycles.
            shift += Complex64::new(1.5 * c.norm() + 0.5 * b.norm(), 0.0);
        }
        if stagnation > 200 {
            // Give up on further splitting; report the remaining diagonal.
            for i in 0..hi {
                eigs.push(h[(i, i)]);
            }
            break;
        }
        if hi == 2 && lo == 0 {
            // Solve the final 2x2 in closed form.
            eigs.push(r2);
            eigs.push(r1);
            break;
        }
        qr_step(&mut h, lo, hi, shift);
    }
    eigs
}

/// One explicit shifted QR sweep on the active block rows/cols [lo, hi).
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        // Apply G to rows k, k+1 over the active columns.
        for j in k..hi {
            let top = h[(k, j)];
            let bot = h[(k + 1, j)];
            h[(k, j)] = c * top + s * bot;
            h[(k + 1, j)] = -s.conj() * top + c * bot;
        }
        rotations.push((k, c, s));
    }
    // Apply G_k^H to columns k, k+1 over the active rows.
    for &(k, c, s) in &rotations {
        let top_row = (k + 2).min(hi);
        for i in lo..top_row {
            let left = h[(i, k)];
            let right = h[(i, k + 1)];
            h[(i, k)] = left * c + right * s.conj();
            h[(i, k + 1)] = -left * s + right * c;
        }
    }
    for i in lo..hi {
        h[(i, i)] += shift;
    }
}

/// Complex Givens rotation [c, s; -conj(s), c] (c real, c^2 + |s|^2 = 1)
/// mapping (x, y) to (r, 0).
fn givens(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (ONE, ZERO);
    }
    if x.norm() == 0.0 {
        // Pure swap with phase: s y = |y| = r.
        return (ZERO, y.conj() / y.norm());
    }
    let u = x / x.norm();
    let c = Complex64::new(x.norm() / r, 0.0);
    let s = u * y.conj() / r;
    (c, s)
}

/// Eigenvector of a small Hessenberg matrix for an approximate eigenvalue,
/// by inverse iteration with a relative diagonal perturbation to keep the
/// factorization regular.
fn hessenberg_eigenvector(h: &CMatrix, theta: Complex64) -> CVector {
    let m = h.nrows();
    let scale = matrix_scale(h).max(1e-300);
    let mut shifted = h.clone();
    let eps = Complex64::new(1e-12 * scale, 1e-13 * scale);
    for i in 0..m {
        shifted[(i, i)] -= theta + eps;
    }
    let lu = shifted.lu();
    let mut y = start_vector(m);
    for _ in 0..3 {
        match lu.solve(&y) {
            Some(sol) if sol.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => {
                let nrm = sol.norm().max(1e-300);
                y = sol / Complex64::new(nrm, 0.0);
            }
            _ => break,
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Unitary Householder reflector built from a fixed complex vector.
    fn householder(n: usize) -> CMatrix {
        let v = CVector::from_fn(n, |i, _| {
            let t = i as f64;
            c((0.9 * t + 0.2).sin(), (0.4 * t + 1.0).cos())
        });
        let nrm2 = v.norm_squared();
        let mut u = CMatrix::identity(n, n);
        for i in 0..n {
            for j in 0..n {
                u[(i, j)] -= 2.0 * v[i] * v[j].conj() / nrm2;
            }
        }
        u
    }

    fn unitary_conjugated_diag(diag: &[Complex64]) -> CMatrix {
        let n = diag.len();
        let u = householder(n);
        let d = CMatrix::from_diagonal(&CVector::from_row_slice(diag));
        &u * d * u.adjoint()
    }

    #[test]
    fn spectral_norm_examples() {
        let a = unitary_conjugated_diag(&[c(3.0, 0.0), c(-1.0, 0.5), c(0.0, 2.0), c(0.1, 0.0)]);
        assert!((spectral_norm(&a) - 3.0).abs() < 1e-9);
        // Non-normal: nilpotent Jordan-type block has norm = its single entry.
        let b = CMatrix::from_row_slice(2, 2, &[ZERO, c(5.0, 0.0), ZERO, ZERO]);
        assert!((spectral_norm(&b) - 5.0).abs() < 1e-10);
        assert_eq!(spectral_norm(&CMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn operator_norm_matches_spectral_norm() {
        let a = unitary_conjugated_diag(&[c(2.0, 1.0), c(-0.3, 0.0), c(0.0, 1.5), c(0.9, -0.4)]);
        let via_op = operator_norm(
            4,
            |x| &a * x,
            |y| a.ad_mul(y),
            1e-12,
            500,
        );
        assert!((via_op - spectral_norm(&a)).abs() < 1e-9);
        assert!((via_op - c(2.0, 1.0).norm()).abs() < 1e-9);
    }

    #[test]
    fn top_singular_values_of_constructed_matrix() {
        // A = U D W with unitary U, W (Householder of different sizes is not
        // possible here, reuse the same one) has singular values |d_i|.
        let diag = [
            c(4.0, 0.0),
            c(0.0, 2.5),
            c(-1.5, 0.0),
            c(0.7, 0.7),
            c(0.01, 0.0),
            c(0.3, -0.1),
        ];
        let u = householder(6);
        let d = CMatrix::from_diagonal(&CVector::from_row_slice(&diag));
        let a = &u * d * u.adjoint();
        let got = top_singular_values(&a, 4, 60);
        let mut want: Vec<f64> = diag.iter().map(|z| z.norm()).collect();
        want.sort_by(|p, q| q.partial_cmp(p).unwrap());
        for i in 0..4 {
            assert!(
                (got[i] - want[i]).abs() < 1e-8 * want[0],
                "sigma_{i}: {} vs {}",
                got[i],
                want[i]
            );
        }
    }

    #[test]
    fn hessenberg_eigenvalues_known_cases() {
        // Already-triangular input: eigenvalues are the diagonal.
        let t = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(9.0, 1.0),
                c(-2.0, 0.0),
                ZERO,
                c(-4.0, 0.5),
                c(3.0, 0.0),
                ZERO,
                ZERO,
                c(2.0, -1.0),
            ],
        );
        let mut eigs = hessenberg_eigenvalues(t);
        eigs.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap());
        assert!((eigs[0] - c(-4.0, 0.5)).norm() < 1e-12);
        assert!((eigs[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((eigs[2] - c(2.0, -1.0)).norm() < 1e-12);

        // Rotation generator: eigenvalues +/- i.
        let r = CMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), c(-1.0, 0.0), ZERO]);
        let mut eigs = hessenberg_eigenvalues(r);
        eigs.sort_by(|p, q| p.im.partial_cmp(&q.im).unwrap());
        assert!((eigs[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((eigs[1] - c(0.0, 1.0)).norm() < 1e-14);

        // A genuinely Hessenberg 4x4 with eigenvalues checked through the
        // characteristic polynomial evaluated at each returned value.
        let hm = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(1.0, 0.2),
                c(2.0, 0.0),
                c(0.3, 0.0),
                c(0.0, 1.0),
                c(0.5, 0.0),
                c(-1.0, 0.0),
                c(1.0, 0.0),
                c(0.2, 0.0),
                ZERO,
                c(0.8, -0.3),
                c(2.0, 0.0),
                c(1.0, 0.0),
                ZERO,
                ZERO,
                c(0.1, 0.0),
                c(-2.0, 1.0),
            ],
        );
        let eigs = hessenberg_eigenvalues(hm.clone());
        assert_eq!(eigs.len(), 4);
        // Trace and determinant invariants.
        let tr: Complex64 = eigs.iter().sum();
        let want_tr = hm[(0, 0)] + hm[(1, 1)] + hm[(2, 2)] + hm[(3, 3)];
        assert!((tr - want_tr).norm() < 1e-10, "trace {tr} vs {want_tr}");
        let det: Complex64 = eigs.iter().product();
        let want_det = hm.determinant();
        assert!((det - want_det).norm() < 1e-9 * want_det.norm().max(1.0));
        // Each value satisfies det(H - lambda I) ~ 0 relative to the entry scale.
        for &e in &eigs {
            let mut shifted = hm.clone();
            for i in 0..4 {
                shifted[(i, i)] -= e;
            }
            let relative = shifted.determinant().norm() / matrix_scale(&hm).powi(4);
            assert!(relative < 1e-10, "char poly residual {relative} at {e}");
        }
    }

    #[test]
    fn eigen_near_shift_finds_interior_eigenvalues() {
        let diag = [
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
            c(4.0, 1.0),
            c(-0.97, 0.0),
            c(7.0, -2.0),
            c(0.4, 0.0),
            c(-5.0, 0.0),
        ];
        let a = unitary_conjugated_diag(&diag);

        let pairs = eigen_near_shift(&a, c(-1.0, 0.0), 2, 8);
        assert!(!pairs.is_empty());
        assert!((pairs[0].value - c(-0.97, 0.0)).norm() < 1e-9);
        assert!(pairs[0].residual < 1e-9);
        // The eigenvector is genuinely an eigenvector of a.
        let v = &pairs[0].vector;
        let r = &a * v - v * pairs[0].value;
        assert!(r.norm() < 1e-8);

        let pairs = eigen_near_shift(&a, c(3.9, 0.9), 1, 8);
        assert!((pairs[0].value - c(4.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn eigen_near_shift_survives_exact_eigenvalue_shift() {
        let diag = [c(2.0, 0.0), c(5.0, 0.0), c(-3.0, 0.0), c(0.5, 0.5)];
        let a = unitary_conjugated_diag(&diag);
        let pairs = eigen_near_shift(&a, c(2.0, 0.0), 1, 4);
        assert!(!pairs.is_empty());
        assert!(
            (pairs[0].value - c(2.0, 0.0)).norm() < 1e-7,
            "value {}",
            pairs[0].value
        );
    }

    #[test]
    fn eigen_near_shift_handles_small_and_degenerate_matrices() {
        // Identity: every direction is invariant, Arnoldi breaks down at
        // step one; we should still get the eigenvalue.
        let a = CMatrix::identity(5, 5);
        let pairs = eigen_near_shift(&a, c(0.9, 0.0), 3, 5);
        assert!(!pairs.is_empty());
        assert!((pairs[0].value - ONE).norm() < 1e-10);

        // 1x1 matrix.
        let b = CMatrix::from_row_slice(1, 1, &[c(-2.5, 0.3)]);
        let pairs = eigen_near_shift(&b, ZERO, 1, 3);
        assert!((pairs[0].value - c(-2.5, 0.3)).norm() < 1e-11);
    }
}
