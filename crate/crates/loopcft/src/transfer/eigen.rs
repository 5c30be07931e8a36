//! Leading-eigenvalue computation: accelerated power iteration with an
//! Arnoldi fallback for ties, oscillation and complex-pair dominance.

use super::operator::TransferOperator;
use super::TransferError;
use nalgebra::DMatrix;

#[derive(Clone, Debug)]
pub struct EigenReport {
    pub lambda: f64,
    pub iterations: usize,
    /// `||T v - λ v|| / (|λ| ||v||)` at the returned vector.
    pub residual: f64,
    pub converged: bool,
    /// Dominant eigenvalue is part of a complex pair (power iteration
    /// cannot converge; value taken from the Krylov solve).
    pub complex_pair: bool,
    /// |λ2/λ1| estimate when available.
    pub gap: Option<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration with Aitken-accelerated estimates; falls back to a
/// small Krylov (Arnoldi) solve when the iteration stalls or oscillates.
pub fn leading_eigenvalue(
    t: &TransferOperator<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(EigenReport, Vec<f64>), TransferError> {
    leading_eigenvalue_of(t.dim(), |v| t.apply(v), tol, max_iter)
}

/// Same, for any linear map given as a matvec closure.
pub fn leading_eigenvalue_of(
    dim: usize,
    matvec: impl Fn(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(EigenReport, Vec<f64>), TransferError> {
    if dim == 0 {
        return Err(TransferError::MissingState("empty basis"));
    }
    // fixed positive seed: deterministic and overlaps the Perron vector
    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut lambdas: Vec<f64> = Vec::new();
    let mut iterations = 0;
    while iterations < max_iter {
        let w = matvec(&v);
        iterations += 1;
        let nw = norm(&w);
        if !nw.is_finite() || nw == 0.0 {
            return Err(TransferError::EigenFailure {
                what: "iterate vanished or overflowed".into(),
                gap: None,
            });
        }
        // signed estimate: projection keeps track of eigenvalue sign
        let proj: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        let lambda = if proj >= 0.0 { nw } else { -nw };
        let res = {
            let mut r = 0.0;
            for i in 0..dim {
                let d = w[i] - lambda * v[i];
                r += d * d;
            }
            r.sqrt() / nw
        };
        for (x, y) in v.iter_mut().zip(&w) {
            *x = y / nw;
        }
        lambdas.push(lambda);
        let k = lambdas.len();
        if k >= 3 {
            // Aitken-accelerated value
            let (a, b, c) = (lambdas[k - 3], lambdas[k - 2], lambdas[k - 1]);
            let denom = c - 2.0 * b + a;
            let accel = if denom.abs() > 1e-300 {
                c - (c - b) * (c - b) / denom
            } else {
                c
            };
            let drift = (c - b).abs() / c.abs().max(1e-300);
            if drift < tol && res < tol.sqrt() {
                let gap = if (b - a).abs() > 1e-300 {
                    Some(((c - b) / (b - a)).abs())
                } else {
                    None
                };
                return Ok((
                    EigenReport {
                        lambda: accel,
                        iterations,
                        residual: res,
                        converged: true,
                        complex_pair: false,
                        gap,
                    },
                    v,
                ));
            }
            // oscillation: near-degenerate or complex dominant pair
            let osc = (c - b) * (b - a) < 0.0 && (c - b).abs() > 10.0 * tol * c.abs();
            if (osc && k > 30) || iterations == max_iter {
                return krylov_solve(dim, &matvec, &v, iterations, tol);
            }
        }
    }
    krylov_solve(dim, &matvec, &v, max_iter, tol)
}

/// Arnoldi on a small Krylov subspace with a dense Schur solve.
fn krylov_solve(
    dim: usize,
    matvec: &impl Fn(&[f64]) -> Vec<f64>,
    seed: &[f64],
    iterations: usize,
    tol: f64,
) -> Result<(EigenReport, Vec<f64>), TransferError> {
    let m = 40.min(dim);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut h = DMatrix::<f64>::zeros(m + 1, m);
    let mut q0 = seed.to_vec();
    let n0 = norm(&q0);
    for x in q0.iter_mut() {
        *x /= n0;
    }
    q.push(q0);
    let mut actual = m;
    for j in 0..m {
        let mut w = matvec(&q[j]);
        for i in 0..=j {
            let hij: f64 = w.iter().zip(&q[i]).map(|(a, b)| a * b).sum();
            h[(i, j)] = hij;
            for (x, y) in w.iter_mut().zip(&q[i]) {
                *x -= hij * y;
            }
        }
        let hn = norm(&w);
        h[(j + 1, j)] = hn;
        if hn < 1e-13 {
            actual = j + 1;
            break;
        }
        for x in w.iter_mut() {
            *x /= hn;
        }
        q.push(w);
    }
    let hm = h.view((0, 0), (actual, actual)).into_owned();
    let eigs = hm.complex_eigenvalues();
    let mut top = 0;
    for i in 1..eigs.len() {
        if eigs[i].norm() > eigs[top].norm() {
            top = i;
        }
    }
    let lead = eigs[top];
    let mut second: f64 = 0.0;
    for i in 0..eigs.len() {
        if i != top {
            second = second.max(eigs[i].norm());
        }
    }
    let complex_pair = lead.im.abs() > 1e-8 * lead.norm();
    if complex_pair {
        return Err(TransferError::EigenFailure {
            what: format!(
                "dominant eigenvalue is a complex pair: {} ± {} i",
                lead.re,
                lead.im.abs()
            ),
            gap: Some(second / lead.norm()),
        });
    }
    // real dominant eigenvalue: assemble the Ritz vector
    let lambda = lead.re;
    // inverse-iteration-free estimate: power-iterate within the Krylov basis
    let mut y = vec![1.0; actual];
    for _ in 0..200 {
        let mut z = vec![0.0; actual];
        for i in 0..actual {
            for j in 0..actual {
                z[i] += hm[(i, j)] * y[j];
            }
        }
        let nz = norm(&z);
        if nz == 0.0 {
            break;
        }
        for (a, b) in y.iter_mut().zip(&z) {
            *a = b / nz;
        }
    }
    let mut vec_out = vec![0.0; dim];
    for (j, yj) in y.iter().enumerate() {
        for (x, qx) in vec_out.iter_mut().zip(&q[j]) {
            *x += yj * qx;
        }
    }
    let w = matvec(&vec_out);
    let nv = norm(&vec_out);
    let mut res = 0.0;
    for i in 0..dim {
        let d = w[i] - lambda * vec_out[i];
        res += d * d;
    }
    let res = res.sqrt() / (lambda.abs() * nv).max(1e-300);
    Ok((
        EigenReport {
            lambda,
            iterations,
            residual: res,
            converged: res < tol.sqrt().max(1e-7),
            complex_pair: false,
            gap: Some(second / lambda.abs().max(1e-300)),
        },
        vec_out,
    ))
}

/// Dense spectrum for oracle-grade cross-checks at small sizes.
pub fn dense_spectrum(t: &TransferOperator<f64>) -> Vec<nalgebra::Complex<f64>> {
    let d = t.dim();
    assert!(d <= 3000, "dense solve limited to small sectors");
    let mut m = DMatrix::<f64>::zeros(d, d);
    let mut e = vec![0.0; d];
    for j in 0..d {
        e[j] = 1.0;
        let col = t.apply(&e);
        e[j] = 0.0;
        for i in 0..d {
            m[(i, j)] = col[i];
        }
    }
    let mut eigs: Vec<_> = m.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_gives_its_scale() {
        let (rep, _) = leading_eigenvalue_of(
            5,
            |v| v.iter().map(|x| 2.5 * x).collect(),
            1e-12,
            200,
        )
        .unwrap();
        assert!((rep.lambda - 2.5).abs() < 1e-10);
        assert!(rep.converged);
    }

    #[test]
    fn complex_pair_is_flagged() {
        // 2x2 rotation * scale has a complex dominant pair
        let r = |v: &[f64]| vec![0.6 * v[0] - 1.2 * v[1], 1.2 * v[0] + 0.6 * v[1]];
        let e = leading_eigenvalue_of(2, r, 1e-12, 500);
        match e {
            Err(TransferError::EigenFailure { what, .. }) => {
                assert!(what.contains("complex"), "{what}")
            }
            other => panic!("expected complex-pair failure, got {other:?}"),
        }
    }

    #[test]
    fn nonsymmetric_matrix_converges() {
        // dominant eigenvalue 3 with nontrivial Jordan-ish structure
        let a = [[2.0, 1.0, 0.0], [0.5, 2.2, 0.3], [0.0, 1.0, 1.5]];
        let mv = |v: &[f64]| {
            (0..3)
                .map(|i| (0..3).map(|j| a[i][j] * v[j]).sum())
                .collect::<Vec<f64>>()
        };
        let (rep, v) = leading_eigenvalue_of(3, mv, 1e-12, 2000).unwrap();
        let m = nalgebra::Matrix3::from_fn(|i, j| a[i][j]);
        let want = m
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::MIN, f64::max);
        assert!((rep.lambda - want).abs() < 1e-9, "{} vs {want}", rep.lambda);
        assert!(rep.residual < 1e-6);
        assert_eq!(v.len(), 3);
    }
}
