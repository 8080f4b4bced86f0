//! Small dense linear algebra: cyclic Jacobi eigen-decomposition, one-sided
//! Jacobi SVD and Gaussian elimination. Sizes here are tiny (n <= 16 after
//! complex-to-real embedding), so everything is plain O(n^3) loops.

use crate::error::{Error, Result};
use crate::scalar::{self, Matrix, Vector, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric `n x n` matrix (row-major).
/// Returns eigenvalues in ascending order with unit eigenvectors.
pub fn jacobi_eigen_symmetric(a: &[f64], n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- J^T A J acting on rows/cols p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|i| v[i * n + j]).collect())
        .collect();
    (values, vectors)
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vector>,
}

/// Eigen-decomposition of a hermitian matrix. Complex input is mapped to the
/// real symmetric matrix `[[S, -K], [K, S]]` (with `H = S + iK`), whose
/// spectrum is that of `H` with every eigenvalue doubled; one eigenvector per
/// complex dimension is kept.
pub fn hermitian_eigen(h: &Matrix) -> HermitianEigen {
    let n = h.rows();
    assert!(h.is_square());
    if h.is_real() {
        let a: Vec<f64> = h.data().iter().map(|z| z.re).collect();
        let (values, vecs) = jacobi_eigen_symmetric(&a, n);
        return HermitianEigen {
            values,
            vectors: vecs.iter().map(|v| scalar::real_vector(v)).collect(),
        };
    }

    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_eigen_symmetric(&a, m);

    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vector> = Vec::with_capacity(n);
    for (val, v) in vals.iter().zip(&vecs) {
        if vectors.len() == n {
            break;
        }
        let mut z: Vector = (0..n).map(|i| C64::new(v[i], v[i + n])).collect();
        for u in &vectors {
            let c = scalar::inner(u, &z);
            z = scalar::axpy(&z, -c, u);
        }
        let r = scalar::euclid_norm(&z);
        if r > 0.5 {
            vectors.push(scalar::scale_real(&z, 1.0 / r));
            values.push(*val);
        }
    }
    HermitianEigen { values, vectors }
}

/// Singular values of a square or rectangular matrix, descending, by
/// one-sided (Hestenes) Jacobi orthogonalization of the columns.
pub fn singular_values(t: &Matrix) -> Vec<f64> {
    let rows = t.rows();
    let cols = t.cols();
    let mut c: Vec<Vector> = (0..cols).map(|j| t.column(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = c[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = scalar::inner(&c[p], &c[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate column q by the phase of gamma so the pair is real
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let tt = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + tt * tt).sqrt();
                let sn = cs * tt;
                for i in 0..rows {
                    let ap = c[p][i];
                    let bq = c[q][i] * phase;
                    c[p][i] = ap * cs - bq * sn;
                    c[q][i] = ap * sn + bq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|v| scalar::euclid_norm(v)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.truncate(rows.min(cols));
    s
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
pub fn solve(m: &Matrix, b: &[C64]) -> Result<Vector> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: m.cols() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut a = m.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap();
        if a[(piv, k)].norm() <= 1e-13 * scale {
            return Err(Error::InvalidSpec("singular matrix".into()));
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            x.swap(k, piv);
        }
        for i in (k + 1)..n {
            let f = a[(i, k)] / a[(k, k)];
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in (k + 1)..n {
            s -= a[(k, j)] * x[j];
        }
        x[k] = s / a[(k, k)];
    }
    Ok(x)
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        cols.push(solve(m, &scalar::basis_vector(n, j))?);
    }
    let mut inv = Matrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            inv[(i, j)] = c[i];
        }
    }
    Ok(inv)
}

/// Numerical rank of a family of vectors (rows), via elimination with
/// partial pivoting. Pivots below `tol * max|entry|` count as zero.
pub fn rank(vectors: &[Vector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vector> = vectors.to_vec();
    let cols = rows[0].len();
    let scale = rows.iter().map(|r| scalar::max_modulus(r)).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let piv = (r..rows.len())
            .max_by(|&i, &j| rows[i][c].norm().total_cmp(&rows[j][c].norm()))
            .unwrap();
        if rows[piv][c].norm() <= tol * scale {
            continue;
        }
        rows.swap(r, piv);
        for i in (r + 1)..rows.len() {
            let f = rows[i][c] / rows[r][c];
            let pr = rows[r].clone();
            rows[i] = scalar::axpy(&rows[i], -f, &pr);
        }
        r += 1;
    }
    r
}

/// Cholesky test for positive definiteness of a hermitian matrix.
pub fn is_positive_definite(h: &Matrix) -> bool {
    let n = h.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = C64::new(d, 0.0);
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real_vector;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // reversal matrix: eigenvalues -1, 1, 1
        let a = [0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
        let (vals, vecs) = jacobi_eigen_symmetric(&a, 3);
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[2], 1.0, epsilon = 1e-14);
        let v = &vecs[0];
        assert_abs_diff_eq!(v[0].abs(), 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v[0] + v[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_hermitian_eigenpairs() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let i = C64::new(0.0, 1.0);
        let h = Matrix::from_rows(&[
            vec![C64::new(2.0, 0.0), i],
            vec![-i, C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&h);
        assert_eq!(e.values.len(), 2);
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-13);
        for (val, v) in e.values.iter().zip(&e.vectors) {
            let hv = h.mul_vec(v);
            let r = scalar::sub(&hv, &scalar::scale_real(v, *val));
            assert!(scalar::euclid_norm(&r) < 1e-12);
        }
    }

    #[test]
    fn singular_value_examples() {
        let id = Matrix::identity(2);
        assert_eq!(singular_values(&id), vec![1.0, 1.0]);
        let d = Matrix::diag_real(&[3.0, -4.0]);
        assert_eq!(singular_values(&d), vec![4.0, 3.0]);
        // T*T = diag(0, 4)
        let t = Matrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = singular_values(&t);
        assert_abs_diff_eq!(s[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn solve_and_rank() {
        let m = Matrix::from_real_rows(&[vec![0.0, 2.0], vec![1.0, 1.0]]).unwrap();
        let x = solve(&m, &real_vector(&[2.0, 3.0])).unwrap();
        assert_abs_diff_eq!(x[0].re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1].re, 1.0, epsilon = 1e-15);
        let sing = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(solve(&sing, &real_vector(&[1.0, 1.0])).is_err());
        assert_eq!(rank(&sing.to_rows(), 1e-12), 1);
        assert_eq!(rank(&m.to_rows(), 1e-12), 2);
    }

    #[test]
    fn cholesky_classifies() {
        assert!(is_positive_definite(&Matrix::identity(3)));
        assert!(!is_positive_definite(&Matrix::diag_real(&[1.0, -1.0])));
        assert!(!is_positive_definite(&Matrix::diag_real(&[1.0, 0.0])));
    }
}
