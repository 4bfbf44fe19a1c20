//! Small dense linear-algebra helpers on row-major `Vec<f64>` storage.

use nalgebra::{DMatrix, SymmetricEigen};

/// Lower Cholesky factor of `a + jitter·I`, or the 1-based order of the
/// first leading minor that is not positive definite.
pub fn cholesky(n: usize, a: &[f64], jitter: f64) -> Result<Vec<f64>, usize> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = a[j * n + j] + jitter;
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(j + 1);
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Eigenvalues (ascending) and the matching unit eigenvectors (columns
/// of the returned row-major matrix) of a real symmetric matrix.
pub fn symmetric_eigen(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = DMatrix::from_row_slice(n, n, a);
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &i) in idx.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = eig.eigenvectors[(row, i)];
        }
    }
    (values, vectors)
}

/// Smallest eigenvalue of a real symmetric matrix and its eigenvector.
pub fn min_eigen(n: usize, a: &[f64]) -> (f64, Vec<f64>) {
    let (values, vectors) = symmetric_eigen(n, a);
    let v = (0..n).map(|row| vectors[row * n]).collect();
    (values[0], v)
}

/// Smallest eigenvalue of the Hermitian matrix `re + i·im` and its
/// eigenvector as `(re, im)`.
///
/// Uses the real embedding `[[A, −B], [B, A]]`, whose spectrum is that of
/// the Hermitian matrix with every eigenvalue doubled in multiplicity.
pub fn min_eigen_hermitian(n: usize, re: &[f64], im: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let m = 2 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let a = re[i * n + j];
            let b = im[i * n + j];
            big[i * m + j] = a;
            big[(i + n) * m + (j + n)] = a;
            big[i * m + (j + n)] = -b;
            big[(i + n) * m + j] = b;
        }
    }
    let (value, v) = min_eigen(m, &big);
    (value, v[..n].to_vec(), v[n..].to_vec())
}

pub fn trace(n: usize, a: &[f64]) -> f64 {
    (0..n).map(|i| a[i * n + i]).sum()
}
