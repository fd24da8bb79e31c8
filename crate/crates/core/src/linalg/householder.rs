//! Dense Householder tridiagonalization (tred2).

/// Reduces the row-major symmetric matrix `a` (n x n, overwritten) to
/// tridiagonal form. Returns `(d, e)` with `e` of length `n - 1`.
///
/// With `accumulate`, `a` holds the orthogonal transform `Q` on return, with
/// `Q[k][i] = a[k * n + i]` and `A = Q T Q^T`.
pub fn tridiagonalize(a: &mut [f64], n: usize, accumulate: bool) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    if n == 1 {
        let d = vec![a[0]];
        if accumulate {
            a[0] = 1.0;
        }
        return (d, Vec::new());
    }
    let idx = |r: usize, c: usize| r * n + c;
    let mut d: Vec<f64> = (0..n).map(|j| a[idx(n - 1, j)]).collect();
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = a[idx(i - 1, j)];
                a[idx(i, j)] = 0.0;
                a[idx(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                a[idx(j, i)] = f;
                g = e[j] + a[idx(j, j)] * f;
                for k in (j + 1)..i {
                    let akj = a[idx(k, j)];
                    g += akj * d[k];
                    e[k] += akj * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    a[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = a[idx(i - 1, j)];
                a[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        let diag = (0..n).map(|i| a[idx(i, i)]).collect();
        return (diag, e[1..].to_vec());
    }

    for i in 0..(n - 1) {
        a[idx(n - 1, i)] = a[idx(i, i)];
        a[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = a[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += a[idx(k, i + 1)] * a[idx(k, j)];
                }
                for k in 0..=i {
                    a[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            a[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = a[idx(n - 1, j)];
        a[idx(n - 1, j)] = 0.0;
    }
    a[idx(n - 1, n - 1)] = 1.0;
    (d, e[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = ((i * 31 + j * 17) % 13) as f64 / 6.0 - 1.0;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }

    #[test]
    fn transform_reconstructs_input() {
        let n = 9;
        let a0 = sample(n);
        let mut q = a0.clone();
        let (d, e) = tridiagonalize(&mut q, n, true);
        // Q T Q^T == A
        for r in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    let mut tkq = d[k] * q[c * n + k];
                    if k > 0 {
                        tkq += e[k - 1] * q[c * n + k - 1];
                    }
                    if k + 1 < n {
                        tkq += e[k] * q[c * n + k + 1];
                    }
                    s += q[r * n + k] * tkq;
                }
                assert!((s - a0[r * n + c]).abs() < 1e-12, "({r},{c})");
            }
        }
    }

    #[test]
    fn values_only_path_agrees() {
        let n = 11;
        let mut a1 = sample(n);
        let mut a2 = sample(n);
        let (d1, e1) = tridiagonalize(&mut a1, n, true);
        let (d2, e2) = tridiagonalize(&mut a2, n, false);
        for i in 0..n {
            assert!((d1[i] - d2[i]).abs() < 1e-13);
        }
        for i in 0..n - 1 {
            assert!((e1[i] - e2[i]).abs() < 1e-13);
        }
    }
}
