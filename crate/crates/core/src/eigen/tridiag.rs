//! Symmetric tridiagonal eigensolver: implicit-shift QL with eigenvector
//! accumulation (the classical tql2 scheme). m stays at the Lanczos basis
//! size, a few hundred at most, so the dense O(m³) vector update is cheap.

use crate::error::Error;

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and subdiagonal `off` (`off.len() == diag.len() - 1`).
/// Returns eigenvalues ascending and the matching eigenvectors as rows.
pub fn tridiag_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>), Error> {
    let m = diag.len();
    assert!(m >= 1);
    assert_eq!(off.len(), m.saturating_sub(1));
    let mut d = diag.to_vec();
    // e is padded: e[i] couples i and i+1, e[m-1] unused.
    let mut e = vec![0.0; m];
    e[..m - 1].copy_from_slice(off);
    // z[k] is the k-th eigenvector being accumulated; start from identity.
    let mut z: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = vec![0.0; m];
            row[i] = 1.0;
            row
        })
        .collect();

    let eps = f64::EPSILON;
    for l in 0..m {
        let mut iter = 0;
        loop {
            // Find the first small subdiagonal element at or beyond l.
            let mut seg = l;
            while seg + 1 < m {
                let scale = d[seg].abs() + d[seg + 1].abs();
                if e[seg].abs() <= eps * scale {
                    break;
                }
                seg += 1;
            }
            if seg == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence { op: "tridiag_eigen", budget: 50 });
            }
            // Implicit shift from the 2x2 at l.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[seg] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..seg).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[seg] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for zk in z.iter_mut() {
                    f = zk[i + 1];
                    zk[i + 1] = s * zk[i] + c * f;
                    zk[i] = c * zk[i] - s * f;
                }
            }
            d[l] -= p;
            e[l] = g;
            e[seg] = 0.0;
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> =
        order.iter().map(|&i| z.iter().map(|row| row[i]).collect()).collect();
    Ok((values, vectors))
}
