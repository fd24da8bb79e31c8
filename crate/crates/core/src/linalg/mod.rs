//! Real symmetric eigensolvers.
//!
//! Two reduction routes feed one implicit-QL tridiagonal solver: dense
//! Householder for full matrices or when eigenvectors are wanted, and Givens
//! band reduction for the narrow-band Hamiltonians that tensor-product bases
//! produce.

mod band;
mod householder;
mod lstsq;
mod tridiag;

pub use band::{band_to_tridiagonal, SymBand};
pub use householder::tridiagonalize;
pub use lstsq::least_squares;
pub use tridiag::tql;

use crate::error::Result;

/// Eigenvalues (ascending) and optionally eigenvectors of a symmetric band
/// matrix. Vectors are returned row-per-vector: `vectors[k * n + i]` is
/// component `i` of eigenvector `k`.
pub fn symmetric_eigen(a: &SymBand, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = a.dim();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }
    let b = a.effective_bandwidth();
    if !want_vectors && b * 5 < n {
        let (mut d, e) = band_to_tridiagonal(&a.with_bandwidth(b));
        tql(&mut d, &e, None)?;
        return Ok((d, None));
    }

    let mut dense = a.to_dense();
    let (mut d, e) = tridiagonalize(&mut dense, n, want_vectors);
    if !want_vectors {
        tql(&mut d, &e, None)?;
        return Ok((d, None));
    }
    // Rows of Q^T are the columns of Q, which is what tql rotates.
    let mut z = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            z[c * n + r] = dense[r * n + c];
        }
    }
    tql(&mut d, &e, Some((&mut z, n)))?;
    Ok((d, Some(z)))
}
