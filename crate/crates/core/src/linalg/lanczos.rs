//! Matrix-free top eigenpair of a Hermitian operator.

use super::eigen::hermitian_eigen;
use super::matrix::{inner, vector_norm, ComplexMatrix, HermitianMatrix, C64, ZERO};
use crate::error::{Error, Result};

const KRYLOV_DIM: usize = 48;
const MAX_RESTARTS: usize = 200;

/// Largest eigenvalue and a unit eigenvector of the Hermitian map `apply`.
///
/// Restarted Lanczos with full reorthogonalization. The Krylov space always
/// contains `start`, so the returned Rayleigh quotient is never below that of
/// `start` (up to rounding); iteration stops once the residual
/// `‖A y - θ y‖` drops below `tol · max(1, |θ|)`.
pub fn top_eigenpair(
    dim: usize,
    apply: impl Fn(&[C64]) -> Vec<C64>,
    start: &[C64],
    tol: f64,
) -> Result<(f64, Vec<C64>)> {
    if start.len() != dim {
        return Err(Error::dim(format!("start vector has length {}, expected {dim}", start.len())));
    }
    let norm = vector_norm(start);
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::param("Lanczos start vector is zero"));
    }
    let mut y: Vec<C64> = start.iter().map(|v| v / norm).collect();
    let k_max = KRYLOV_DIM.min(dim);

    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<C64>> = vec![y.clone()];
        let mut alpha = Vec::with_capacity(k_max);
        let mut beta: Vec<f64> = Vec::with_capacity(k_max);
        loop {
            let j = basis.len() - 1;
            let mut w = apply(&basis[j]);
            alpha.push(inner(&basis[j], &w).re);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for q in &basis {
                    let c = inner(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
                }
            }
            let b = vector_norm(&w);
            let scale = alpha.iter().fold(1.0f64, |s, a| s.max(a.abs()));
            if basis.len() == k_max || b <= 1e-14 * scale {
                beta.push(b);
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }

        let k = basis.len();
        let t = ComplexMatrix::from_fn(k, k, |r, c| {
            if r == c {
                C64::new(alpha[r], 0.0)
            } else if r + 1 == c {
                C64::new(beta[r], 0.0)
            } else if c + 1 == r {
                C64::new(beta[c], 0.0)
            } else {
                ZERO
            }
        });
        let eig = hermitian_eigen(&HermitianMatrix::hermitian_part(&t))?;
        let s = eig.vector(k - 1);
        let mut next = vec![ZERO; dim];
        for (q, si) in basis.iter().zip(&s) {
            next.iter_mut().zip(q).for_each(|(yi, qi)| *yi += si * qi);
        }
        let n = vector_norm(&next);
        next.iter_mut().for_each(|v| *v /= n);

        let ay = apply(&next);
        let theta = inner(&next, &ay).re;
        let resid = vector_norm(&ay.iter().zip(&next).map(|(a, v)| a - v * theta).collect::<Vec<_>>());
        y = next;
        if resid <= tol * theta.abs().max(1.0) {
            return Ok((theta, y));
        }
    }
    let ay = apply(&y);
    let theta = inner(&y, &ay).re;
    let off = vector_norm(&ay.iter().zip(&y).map(|(a, v)| a - v * theta).collect::<Vec<_>>());
    Err(Error::NoConvergence {
        sweeps: MAX_RESTARTS,
        off,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, random_unit_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in [1, 2, 5, 30, 80, 130] {
            let h = random_hermitian(dim, &mut rng);
            let start = random_unit_vector(dim, &mut rng);
            let (theta, v) = top_eigenpair(dim, |x| h.as_matrix().apply(x), &start, 1e-12).unwrap();
            let dense = hermitian_eigen(&h).unwrap();
            assert!((theta - dense.max()).abs() < 1e-10, "dim {dim}: {theta} vs {}", dense.max());
            assert!((vector_norm(&v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_start_returns_immediately() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 3.0, 2.0]);
        let e = vec![ZERO, C64::new(1.0, 0.0), ZERO];
        let (theta, v) = top_eigenpair(3, |x| h.as_matrix().apply(x), &e, 1e-13).unwrap();
        assert_eq!(theta, 3.0);
        assert_eq!(v, e);
    }

    #[test]
    fn never_worse_than_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let h = random_hermitian(40, &mut rng);
            let start = random_unit_vector(40, &mut rng);
            let r0 = inner(&start, &h.as_matrix().apply(&start)).re;
            let (theta, _) = top_eigenpair(40, |x| h.as_matrix().apply(x), &start, 1e-12).unwrap();
            assert!(theta >= r0 - 1e-12);
        }
    }

    #[test]
    fn zero_start_is_rejected() {
        assert!(top_eigenpair(2, |x| x.to_vec(), &[ZERO, ZERO], 1e-12).is_err());
    }
}
