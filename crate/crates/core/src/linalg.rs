//! Small dense linear-algebra helpers: the block-isotropic matrix layout
//! shared by every 2d x 2d object in this crate, and a cyclic Jacobi
//! eigensolver used as the independent spectral oracle.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Builds `[[a*I_d, b*I_d], [b*I_d, c*I_d]]`.
pub fn block_matrix(d: usize, a: f64, b: f64, c: f64) -> DMatrix<f64> {
    let n = 2 * d;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..d {
        m[(j, j)] = a;
        m[(j, j + d)] = b;
        m[(j + d, j)] = b;
        m[(j + d, j + d)] = c;
    }
    m
}

/// Maximum absolute deviation from symmetry, `max_ij |A_ij - A_ji|`.
pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn check_square_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let asym = max_asymmetry(m);
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    if asym > tol * scale {
        return Err(Error::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    Ok(())
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come out ascending with matching eigenvector columns. Intended
/// for the small matrices of this problem (n <= 64); accuracy is near machine
/// precision there.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        check_square_symmetric(m, 1e-12)?;
        let n = m.nrows();
        let mut a = m.clone();
        // enforce exact symmetry so rotations stay consistent
        for i in 0..n {
            for j in (i + 1)..n {
                let s = 0.5 * (a[(i, j)] + a[(j, i)]);
                a[(i, j)] = s;
                a[(j, i)] = s;
            }
        }
        let mut v = DMatrix::<f64>::identity(n, n);
        let scale = a
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
            .max(f64::MIN_POSITIVE);

        for _sweep in 0..100 {
            let mut off: f64 = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a[(i, j)].abs());
                }
            }
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (theta * theta + 1.0).sqrt())
                    } else {
                        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;

                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
        let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &v.column(src));
        }
        Ok(Self { values, vectors })
    }
}

/// Sorted eigenvalues of a symmetric matrix (ascending).
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(SymmetricEigen::new(m)?.values)
}

/// Symmetric square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-12, 0)` are clipped to zero; anything below that is
/// rejected as [`Error::NotPsd`].
pub fn symmetric_sqrt_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m)?;
    let n = m.nrows();
    let mut sqrt_diag = DMatrix::zeros(n, n);
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda < -1e-12 {
            return Err(Error::NotPsd { eigenvalue: lambda });
        }
        sqrt_diag[(i, i)] = lambda.max(0.0).sqrt();
    }
    Ok(&eig.vectors * sqrt_diag * eig.vectors.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn block_matrix_layout() {
        let m = block_matrix(2, 1.0, 0.5, 2.0);
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(0, 2)], 0.5);
        assert_eq!(m[(1, 3)], 0.5);
        assert_eq!(m[(2, 2)], 2.0);
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m.transpose(), m);
    }

    #[test]
    fn jacobi_identity() {
        let eig = symmetric_eigenvalues(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(eig, vec![1.0; 4]);
    }

    #[test]
    fn jacobi_2x2_hand_values() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 8.0]);
        let eig = symmetric_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(eig[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 9.0, epsilon = 1e-12);

        let m = DMatrix::from_row_slice(2, 2, &[0.6, 0.4, 0.4, 0.6]);
        let eig = symmetric_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(eig[0], 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            symmetric_eigenvalues(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn jacobi_reconstructs_random_symmetric() {
        // deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [3usize, 5, 8, 16] {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = 4.0 * next();
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            let eig = SymmetricEigen::new(&m).unwrap();
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.values.clone()));
            let rebuilt = &eig.vectors * d * eig.vectors.transpose();
            for i in 0..n {
                for j in 0..n {
                    assert_abs_diff_eq!(rebuilt[(i, j)], m[(i, j)], epsilon = 1e-10);
                }
            }
            // ascending order
            for w in eig.values.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn sqrt_roundtrip_and_clipping() {
        let m = block_matrix(1, 2.0, -1.0, 3.0);
        let r = symmetric_sqrt_psd(&m).unwrap();
        let back = &r * &r;
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(back[(i, j)], m[(i, j)], epsilon = 1e-12);
            }
        }
        // exactly singular PSD matrix is fine
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(symmetric_sqrt_psd(&m).is_ok());
        // clearly indefinite matrix is rejected
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(symmetric_sqrt_psd(&m), Err(Error::NotPsd { .. })));
    }
}
