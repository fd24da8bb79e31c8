//! Dense least squares by Householder QR.

use crate::error::{invalid, Result};

/// Solves `min ‖A x − y‖₂` for a row-major `rows × cols` matrix with
/// `rows >= cols` and full column rank.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, y: &[f64]) -> Result<Vec<f64>> {
    if rows < cols || a.len() != rows * cols || y.len() != rows {
        return Err(invalid(format!("least squares shape mismatch: {rows}x{cols}, rhs {}", y.len())));
    }
    let mut r = a.to_vec();
    let mut b = y.to_vec();
    for k in 0..cols {
        let norm = (k..rows).map(|i| r[i * cols + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(invalid("least squares matrix is rank deficient"));
        }
        let alpha = if r[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| r[i * cols + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * r[i * cols + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                r[i * cols + j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..rows {
            b[i] -= f * v[i - k];
        }
    }
    let scale = (0..cols).map(|k| r[k * cols + k].abs()).fold(0.0_f64, f64::max);
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let diag = r[k * cols + k];
        if diag.abs() <= 1e-13 * scale {
            return Err(invalid("least squares matrix is numerically rank deficient"));
        }
        let s: f64 = ((k + 1)..cols).map(|j| r[k * cols + j] * x[j]).sum();
        x[k] = (b[k] - s) / diag;
    }
    Ok(x)
}
