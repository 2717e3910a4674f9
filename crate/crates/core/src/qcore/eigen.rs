//! Cyclic Jacobi eigensolver for small complex Hermitian matrices, and the
//! spectral functions built on it (trace norm, PSD square root).

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, C64, ZERO};

/// Inputs must be Hermitian to this tolerance before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// (scaled by the matrix norm when it exceeds one).
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V f(Λ) V†`
    pub fn reassemble<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        self.rebuild(&mapped)
    }

    /// `V diag(values) V†` with replacement eigenvalues.
    pub fn rebuild(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate().take(n) {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<Eigen> {
    let n = h.require_square()?;
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`: `a ← J† a J`, `v ← v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let n = a.nrows();
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = diag(1, e^{-iα}) · [[c, s], [-s, c]] restricted to (p, q)
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|e| e.values)
}

/// Sum of singular values.
///
/// Hermitian input goes through `Σ|λ|` directly; 2×2 input uses the closed
/// form `√(‖O‖_F² + 2|det O|)`; anything else takes `Σ √eig(O†O)`. All three
/// agree mathematically, the first two avoid the square-root amplification
/// of round-off near zero singular values.
pub fn trace_norm(o: &ComplexMatrix) -> Result<f64> {
    let n = o.require_square()?;
    if o.is_hermitian(1e-13) {
        return Ok(hermitian_eigen(o)?.values.iter().map(|x| x.abs()).sum());
    }
    if n == 2 {
        let det = o[(0, 0)] * o[(1, 1)] - o[(0, 1)] * o[(1, 0)];
        let f2 = o.frobenius_norm().powi(2);
        return Ok((f2 + 2.0 * det.norm()).max(0.0).sqrt());
    }
    trace_norm_gram(o)
}

/// `Σ √eig(O†O)`, always via the Gram matrix.
pub fn trace_norm_gram(o: &ComplexMatrix) -> Result<f64> {
    o.require_square()?;
    let gram = &o.dagger() * o;
    Ok(hermitian_eigen(&gram)?
        .values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum())
}

/// Square root of a PSD matrix; eigenvalues below zero (round-off) are clipped.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    let scale = eig
        .values
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(1.0);
    Ok(eig.reassemble(|x| if x <= 1e-15 * scale { 0.0 } else { x.sqrt() }))
}

/// `V sign(Λ) V†`, a subgradient of the trace norm at a Hermitian point.
pub fn sign_matrix(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(h)?.reassemble(|x| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    }))
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && (&u.dagger() * u).max_abs_diff(&ComplexMatrix::identity(u.nrows())) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ONE;
    use crate::testutil::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_sorted_ascending() {
        let e = hermitian_eigen(&ComplexMatrix::from_real_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
    }

    #[test]
    fn sigma_x_spectrum() {
        let sx = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let e = hermitian_eigen(&sx).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 4, 8] {
            for _ in 0..20 {
                let h = random_hermitian(n, &mut rng);
                let e = hermitian_eigen(&h).unwrap();
                let back = e.reassemble(|x| x);
                assert!(h.max_abs_diff(&back) <= 1e-9);
                assert!(is_unitary(&e.vectors, 1e-9));
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn trace_norm_basics() {
        assert_eq!(trace_norm(&ComplexMatrix::identity(2)).unwrap(), 2.0);
        assert!(
            (trace_norm(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15
        );
        assert!(trace_norm(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn trace_norm_two_by_two_closed_form_matches_gram() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.4)],
            vec![C64::new(0.05, 0.0), C64::new(0.7, -0.3)],
        ])
        .unwrap();
        let a = trace_norm(&m).unwrap();
        let b = trace_norm_gram(&m).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(4, &mut rng);
        let psd = &h * &h.dagger();
        let r = sqrt_psd(&psd).unwrap();
        assert!((&r * &r).max_abs_diff(&psd) < 1e-10);
    }
}
