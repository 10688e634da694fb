use super::{ComplexMatrix, C64};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order together with a unitary whose
/// columns are the matching eigenvectors, so that A = V diag(λ) V†.
/// Adequate for the ≤ 2⁸ dimensions this crate works with.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert!(a.is_square(), "eigendecomposition of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale: f64 = m
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let threshold = 1e-15 * scale;

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= threshold {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / r;

                // Rotate the (p,q) plane: a diagonal phase makes the 2x2
                // block real symmetric, then a classic Jacobi angle zeroes
                // the off-diagonal element.
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // Full rotation R restricted to the (p,q) plane:
                //   R[p][p] = c            R[p][q] = s
                //   R[q][p] = -conj(phase)*s   R[q][q] = conj(phase)*c
                let rp_q = C64::new(s, 0.0);
                let rq_p = -phase.conj() * s;
                let rq_q = phase.conj() * c;

                // Columns: M <- M R, V <- V R.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * rq_p;
                    m[(k, q)] = mkp * rp_q + mkq * rq_q;

                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * rq_p;
                    v[(k, q)] = vkp * rp_q + vkq * rq_q;
                }
                // Rows: M <- R† M.
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * rq_p.conj();
                    m[(q, k)] = mpk * rp_q.conj() + mqk * rq_q.conj();
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());

    let mut sorted_values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        sorted_values.push(values[src]);
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    (sorted_values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    hermitian_eigen(a).0[0]
}
