//! Symmetric band storage and Givens band-to-tridiagonal reduction.

/// Real symmetric matrix stored as its lower band, column-major.
///
/// Element `A[i][j]` with `i >= j` and `i - j <= bandwidth` lives at
/// `data[j * (bandwidth + 1) + (i - j)]`. A dense matrix is the special
/// case `bandwidth == n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bandwidth = bandwidth.min(n.saturating_sub(1));
        Self {
            n,
            bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bandwidth || i >= self.n {
            None
        } else {
            Some(j * (self.bandwidth + 1) + (i - j))
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` to the symmetric pair `(i, j)` / `(j, i)`.
    ///
    /// Panics if the entry lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside bandwidth {}", self.bandwidth));
        self.data[k] += v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm of the full symmetric matrix.
    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.n {
            for d in 0..=self.bandwidth.min(self.n - 1 - j) {
                let v = self.data[j * (self.bandwidth + 1) + d];
                s += if d == 0 { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for j in 0..n {
            for i in j..=(j + self.bandwidth).min(n - 1) {
                let v = self.data[j * (self.bandwidth + 1) + (i - j)];
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for j in 0..n {
            let col = &self.data[j * (self.bandwidth + 1)..];
            y[j] += col[0] * x[j];
            for d in 1..=self.bandwidth.min(n - 1 - j) {
                let v = col[d];
                y[j + d] += v * x[j];
                y[j] += v * x[j + d];
            }
        }
        y
    }

    /// Smallest bandwidth that holds every nonzero entry.
    pub fn effective_bandwidth(&self) -> usize {
        let mut eff = 0;
        for j in 0..self.n {
            for d in (eff + 1)..=self.bandwidth.min(self.n - 1 - j) {
                if self.data[j * (self.bandwidth + 1) + d] != 0.0 {
                    eff = d;
                }
            }
        }
        eff
    }

    /// Copy with storage trimmed (or widened) to `bandwidth`.
    pub fn with_bandwidth(&self, bandwidth: usize) -> Self {
        let mut out = Self::zeros(self.n, bandwidth);
        for j in 0..self.n {
            for d in 0..=out.bandwidth.min(self.bandwidth).min(self.n - 1 - j) {
                out.data[j * (out.bandwidth + 1) + d] = self.data[j * (self.bandwidth + 1) + d];
            }
        }
        out
    }
}

/// Reduces a symmetric band matrix to tridiagonal form by Givens rotations
/// with bulge chasing. Returns `(diagonal, subdiagonal)`; the subdiagonal has
/// length `n - 1`.
///
/// Work is `O(n^2 b)`; the input is not modified.
pub fn band_to_tridiagonal(a: &SymBand) -> (Vec<f64>, Vec<f64>) {
    let n = a.dim();
    let b = a.bandwidth();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    if b <= 1 {
        let d = (0..n).map(|i| a.get(i, i)).collect();
        let e = (0..n - 1).map(|i| a.get(i + 1, i)).collect();
        return (d, e);
    }

    // One extra subdiagonal holds the transient bulge.
    let w = b + 1;
    let ld = w + 1;
    let mut ab = vec![0.0; n * ld];
    for j in 0..n {
        for d in 0..=b.min(n - 1 - j) {
            ab[j * ld + d] = a.get(j + d, j);
        }
    }

    for k in 0..n.saturating_sub(2) {
        for dist in (2..=b.min(n - 1 - k)).rev() {
            // Annihilate A[k + dist][k], then chase the bulge off the end.
            let mut col = k;
            let mut q = k + dist;
            loop {
                let p = q - 1;
                let x = ab[col * ld + (p - col)];
                let y = ab[col * ld + (q - col)];
                if y == 0.0 {
                    break;
                }
                let r = x.hypot(y);
                let c = x / r;
                let s = y / r;

                // Rows p, q over columns col..p (entries A[p][j], A[q][j]).
                for j in col..p {
                    let ip = j * ld + (p - j);
                    let iq = j * ld + (q - j);
                    let xp = ab[ip];
                    let xq = ab[iq];
                    ab[ip] = c * xp + s * xq;
                    ab[iq] = -s * xp + c * xq;
                }
                ab[col * ld + (q - col)] = 0.0;

                // 2x2 diagonal block.
                let app = ab[p * ld];
                let aqq = ab[q * ld];
                let aqp = ab[p * ld + 1];
                let cs = c * s;
                ab[p * ld] = c * c * app + 2.0 * cs * aqp + s * s * aqq;
                ab[q * ld] = s * s * app - 2.0 * cs * aqp + c * c * aqq;
                ab[p * ld + 1] = cs * (aqq - app) + (c * c - s * s) * aqp;

                // Columns p, q below the block (entries A[i][p], A[i][q]).
                let last = (q + b).min(n - 1);
                for i in (q + 1)..=last {
                    let ip = p * ld + (i - p);
                    let iq = q * ld + (i - q);
                    let xp = ab[ip];
                    let xq = ab[iq];
                    ab[ip] = c * xp + s * xq;
                    ab[iq] = -s * xp + c * xq;
                }

                // The bulge now sits at A[q + b][p].
                if q + b >= n {
                    break;
                }
                col = p;
                q += b;
            }
        }
    }

    let d = (0..n).map(|i| ab[i * ld]).collect();
    let e = (0..n - 1).map(|i| ab[i * ld + 1]).collect();
    (d, e)
}
