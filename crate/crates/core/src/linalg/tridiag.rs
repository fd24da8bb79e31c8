//! Implicit-shift QL on symmetric tridiagonal matrices.
//!
//! Follows the tql1/tql2 structure of the EISPACK routines. Eigenvectors,
//! when requested, are accumulated into `z` stored row-per-vector so the
//! plane rotations touch two contiguous rows.

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_VALUE: usize = 60;

/// Diagonalizes the tridiagonal matrix `(d, e)` in place.
///
/// `d` has length `n`, `e` has length `n - 1` (`e[i]` couples `i` and
/// `i + 1`). On return `d` holds the eigenvalues in ascending order. If `z`
/// is given it must hold `n` row vectors of length `m` (row `i` belonging to
/// basis index `i`); on return row `k` is the coefficient vector of
/// eigenvalue `d[k]` in the original basis after `z`'s prior transform.
pub fn tql(d: &mut [f64], e: &[f64], mut z: Option<(&mut [f64], usize)>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    assert_eq!(e.len() + 1, n, "subdiagonal length must be n - 1");
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    let mut total_iter = 0usize;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                total_iter += 1;
                if iter > MAX_SWEEPS_PER_VALUE {
                    return Err(Error::NumericFailure {
                        iterations: total_iter,
                        context: format!("implicit QL did not converge for eigenvalue {l}"),
                    });
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some((zz, len)) = z.as_mut() {
                        let len = *len;
                        let (lo, hi) = zz.split_at_mut((i + 1) * len);
                        let zi = &mut lo[i * len..];
                        let zi1 = &mut hi[..len];
                        for k in 0..len {
                            let t = zi1[k];
                            zi1[k] = s * zi[k] + c * t;
                            zi[k] = c * zi[k] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    sort_ascending(d, z);
    Ok(())
}

fn sort_ascending(d: &mut [f64], z: Option<(&mut [f64], usize)>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    d.copy_from_slice(&sorted);
    if let Some((zz, len)) = z {
        let old = zz.to_vec();
        for (dst, &src) in order.iter().enumerate() {
            zz[dst * len..(dst + 1) * len].copy_from_slice(&old[src * len..(src + 1) * len]);
        }
    }
}
