//! Seeded random matrices used by sampling, see-saw restarts and tests.

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, vector_norm, ComplexMatrix, HermitianMatrix, C64};

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Hermitian part of a complex Gaussian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&gaussian_matrix(dim, dim, rng))
}

/// `G G^† / Tr(G G^†)` for a square complex Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let p = HermitianMatrix::hermitian_part(&g.matmul(&g.adjoint()));
    let t = p.trace();
    p.scale(1.0 / t)
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let n = vector_norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-distributed unitary: Gram–Schmidt (QR with positive `R` diagonal) of a
/// complex Gaussian matrix. Columns are the orthonormal basis.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|r| g[(r, c)]).collect();
        // Two passes of modified Gram–Schmidt keep orthogonality at machine precision.
        for _ in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let n = vector_norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}
