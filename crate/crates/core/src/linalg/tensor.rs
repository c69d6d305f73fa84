//! Bipartite operations on `H_A ⊗ H_B` with composite index `(i, j) ↦ i·dim_b + j`.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, HermitianMatrix, C64, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)])
}

pub fn kron_hermitian(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&kron(a.as_matrix(), b.as_matrix()))
}

pub fn kron_vec(v: &[C64], w: &[C64]) -> Vec<C64> {
    v.iter().flat_map(|a| w.iter().map(move |b| a * b)).collect()
}

fn check_bipartite(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || !m.is_square() || m.rows() != dim_a * dim_b {
        return Err(Error::dim(format!(
            "{}x{} matrix does not factor as {dim_a}·{dim_b}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Partial trace of an arbitrary square operator.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    over: Subsystem,
) -> Result<ComplexMatrix> {
    check_bipartite(m, dim_a, dim_b)?;
    Ok(match over {
        Subsystem::A => ComplexMatrix::from_fn(dim_b, dim_b, |j, l| {
            (0..dim_a).map(|i| m[(i * dim_b + j, i * dim_b + l)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_a, dim_a, |i, k| {
            (0..dim_b).map(|j| m[(i * dim_b + j, k * dim_b + j)]).sum()
        }),
    })
}

pub fn partial_trace(m: &HermitianMatrix, dim_a: usize, dim_b: usize, over: Subsystem) -> Result<HermitianMatrix> {
    let t = partial_trace_matrix(m.as_matrix(), dim_a, dim_b, over)?;
    Ok(HermitianMatrix::hermitian_part(&t))
}

pub fn partial_transpose(m: &HermitianMatrix, dim_a: usize, dim_b: usize, on: Subsystem) -> Result<HermitianMatrix> {
    let mm = m.as_matrix();
    check_bipartite(mm, dim_a, dim_b)?;
    let n = dim_a * dim_b;
    let out = ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / dim_b, r % dim_b);
        let (k, l) = (c / dim_b, c % dim_b);
        match on {
            Subsystem::A => mm[(k * dim_b + j, i * dim_b + l)],
            Subsystem::B => mm[(i * dim_b + l, k * dim_b + j)],
        }
    });
    Ok(HermitianMatrix::hermitian_part(&out))
}

/// `Tr_A((E ⊗ 1_B) ρ)` in `O(D²d²)` without forming the product.
pub fn conditional_state(e: &HermitianMatrix, rho: &HermitianMatrix, dim_b: usize) -> Result<HermitianMatrix> {
    let dim_a = e.dim();
    check_bipartite(rho.as_matrix(), dim_a, dim_b)?;
    let r = rho.as_matrix();
    let out = ComplexMatrix::from_fn(dim_b, dim_b, |j, l| {
        let mut acc = ZERO;
        for i in 0..dim_a {
            for ip in 0..dim_a {
                let eii = e[(i, ip)];
                if eii != ZERO {
                    acc += eii * r[(ip * dim_b + j, i * dim_b + l)];
                }
            }
        }
        acc
    });
    Ok(HermitianMatrix::hermitian_part(&out))
}

/// `Tr_B((1_A ⊗ F) ρ)`, the operator `G` on `H_A` with `Tr(E G) = Tr((E ⊗ F) ρ)`.
pub fn effective_operator(f: &HermitianMatrix, rho: &HermitianMatrix, dim_a: usize) -> Result<HermitianMatrix> {
    let dim_b = f.dim();
    check_bipartite(rho.as_matrix(), dim_a, dim_b)?;
    let r = rho.as_matrix();
    let out = ComplexMatrix::from_fn(dim_a, dim_a, |k, i| {
        let mut acc = ZERO;
        for j in 0..dim_b {
            for l in 0..dim_b {
                let fjl = f[(j, l)];
                if fjl != ZERO {
                    acc += fjl * r[(k * dim_b + l, i * dim_b + j)];
                }
            }
        }
        acc
    });
    Ok(HermitianMatrix::hermitian_part(&out))
}

/// `Tr((E ⊗ F) ρ)` by direct index contraction.
pub fn expectation_product(e: &HermitianMatrix, f: &HermitianMatrix, rho: &HermitianMatrix) -> Result<f64> {
    let (da, db) = (e.dim(), f.dim());
    check_bipartite(rho.as_matrix(), da, db)?;
    let r = rho.as_matrix();
    let mut acc = ZERO;
    for i in 0..da {
        for k in 0..da {
            let eik = e[(i, k)];
            if eik == ZERO {
                continue;
            }
            for j in 0..db {
                for l in 0..db {
                    acc += eik * f[(j, l)] * r[(k * db + l, i * db + j)];
                }
            }
        }
    }
    Ok(acc.re)
}

/// Reshapes `|ψ⟩ = Σ ψ_{ij}|i⟩|j⟩` into the `dim_a x dim_b` coefficient matrix.
pub fn coefficient_matrix(psi: &[C64], dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    if psi.len() != dim_a * dim_b {
        return Err(Error::dim(format!(
            "state of length {} does not factor as {dim_a}·{dim_b}",
            psi.len()
        )));
    }
    ComplexMatrix::from_vec(dim_a, dim_b, psi.to_vec())
}

/// `Tr_A((E ⊗ 1)|ψ⟩⟨ψ|) = Mᵀ Eᵀ M̄` for the coefficient matrix `M`.
pub fn conditional_state_pure(e: &HermitianMatrix, psi: &[C64], dim_b: usize) -> Result<HermitianMatrix> {
    let m = coefficient_matrix(psi, e.dim(), dim_b)?;
    let out = m.transpose().matmul(&e.as_matrix().transpose()).matmul(&m.conj());
    Ok(HermitianMatrix::hermitian_part(&out))
}

/// `Tr_B((1 ⊗ F)|ψ⟩⟨ψ|) = M Fᵀ M^†`.
pub fn effective_operator_pure(f: &HermitianMatrix, psi: &[C64], dim_a: usize) -> Result<HermitianMatrix> {
    let m = coefficient_matrix(psi, dim_a, f.dim())?;
    let out = m.matmul(&f.as_matrix().transpose()).matmul(&m.adjoint());
    Ok(HermitianMatrix::hermitian_part(&out))
}

/// `⟨ψ|E ⊗ F|ψ⟩` by applying `E ⊗ F` to `ψ` one factor at a time.
pub fn expectation_product_pure(e: &HermitianMatrix, f: &HermitianMatrix, psi: &[C64]) -> Result<f64> {
    let (da, db) = (e.dim(), f.dim());
    if psi.len() != da * db {
        return Err(Error::dim("state length does not match E ⊗ F"));
    }
    // (E ⊗ F)ψ as a matrix is E M Fᵀ.
    let m = coefficient_matrix(psi, da, db)?;
    let applied = e.as_matrix().matmul(&m).matmul(&f.as_matrix().transpose());
    let acc: C64 = m.as_slice().iter().zip(applied.as_slice()).map(|(a, b)| a.conj() * b).sum();
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::hermitian_eigen;
    use crate::linalg::matrix::ONE;
    use crate::linalg::random::{random_density, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma_x() -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn max_entangled(d: usize) -> Vec<C64> {
        let mut v = vec![ZERO; d * d];
        for i in 0..d {
            v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        v
    }

    #[test]
    fn kron_small_cases() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let xx = kron(sigma_x().as_matrix(), sigma_x().as_matrix());
        let v = max_entangled(2);
        let w = xx.apply(&v);
        for (a, b) in v.iter().zip(&w) {
            assert!((a - b).norm() < 1e-15);
        }
        let e1 = [ONE, ZERO];
        let e2 = [ZERO, ONE];
        let p = kron(&ComplexMatrix::outer(&e1, &e1), &ComplexMatrix::outer(&e2, &e2));
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == 1 && c == 1 { ONE } else { ZERO };
                assert_eq!(p[(r, c)], expect);
            }
        }
    }

    #[test]
    fn kron_mixed_product_and_partial_trace_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_hermitian(2, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let c = random_hermitian(2, &mut rng);
            let d = random_hermitian(3, &mut rng);
            let lhs = kron(a.as_matrix(), b.as_matrix()).matmul(&kron(c.as_matrix(), d.as_matrix()));
            let rhs = kron(&a.as_matrix().matmul(c.as_matrix()), &b.as_matrix().matmul(d.as_matrix()));
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);

            let ab = kron_hermitian(&a, &b);
            let tb = partial_trace(&ab, 2, 3, Subsystem::B).unwrap();
            assert!(tb.as_matrix().max_abs_diff(a.scale(b.trace()).as_matrix()) < 1e-10);
            let ta = partial_trace(&ab, 2, 3, Subsystem::A).unwrap();
            assert!(ta.as_matrix().max_abs_diff(b.scale(a.trace()).as_matrix()) < 1e-10);
            assert!((ta.trace() - ab.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_maximally_entangled_is_maximally_mixed() {
        let rho = HermitianMatrix::projector(&max_entangled(3));
        let red = partial_trace(&rho, 3, 3, Subsystem::B).unwrap();
        assert!(red.as_matrix().max_abs_diff(HermitianMatrix::identity(3).scale(1.0 / 3.0).as_matrix()) < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_projector() {
        let rho = HermitianMatrix::projector(&max_entangled(2));
        let pt = partial_transpose(&rho, 2, 2, Subsystem::B).unwrap();
        let e = hermitian_eigen(&pt).unwrap().eigenvalues;
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (x, y) in e.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(partial_transpose(&pt, 2, 2, Subsystem::B).unwrap(), rho);
    }

    #[test]
    fn partial_transpose_on_a_and_b_are_globally_transposed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(6, &mut rng);
        let pa = partial_transpose(&rho, 2, 3, Subsystem::A).unwrap();
        let pb = partial_transpose(&rho, 2, 3, Subsystem::B).unwrap();
        assert!(pa.transpose().as_matrix().max_abs_diff(pb.as_matrix()) < 1e-15);
        let sa = hermitian_eigen(&pa).unwrap().eigenvalues;
        let sb = hermitian_eigen(&pb).unwrap().eigenvalues;
        for (x, y) in sa.iter().zip(&sb) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn product_state_partial_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let pt = partial_transpose(&kron_hermitian(&a, &b), 2, 3, Subsystem::B).unwrap();
        assert!(pt.as_matrix().max_abs_diff(kron_hermitian(&a, &b.transpose()).as_matrix()) < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = HermitianMatrix::identity(6);
        assert!(partial_trace(&rho, 4, 2, Subsystem::A).is_err());
        assert!(partial_transpose(&rho, 5, 1, Subsystem::B).is_err());
    }

    #[test]
    fn fast_contractions_match_explicit_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let e = random_hermitian(3, &mut rng);
            let f = random_hermitian(2, &mut rng);
            let rho = random_density(6, &mut rng);
            let ef = kron(e.as_matrix(), f.as_matrix());
            let direct = ef.matmul(rho.as_matrix()).trace().re;
            assert!((expectation_product(&e, &f, &rho).unwrap() - direct).abs() < 1e-12);

            let e1 = kron(e.as_matrix(), &ComplexMatrix::identity(2)).matmul(rho.as_matrix());
            let sigma = partial_trace_matrix(&e1, 3, 2, Subsystem::A).unwrap();
            assert!(conditional_state(&e, &rho, 2).unwrap().as_matrix().max_abs_diff(&sigma) < 1e-12);

            let g = effective_operator(&f, &rho, 3).unwrap();
            assert!((g.trace_product(&e) - direct).abs() < 1e-12);

            let psi: Vec<C64> = (0..6).map(|k| C64::new(k as f64 - 2.5, 0.3 * k as f64)).collect();
            let nrm = crate::linalg::matrix::vector_norm(&psi);
            let psi: Vec<C64> = psi.iter().map(|z| z / nrm).collect();
            let pure = HermitianMatrix::projector(&psi);
            assert!(
                (expectation_product_pure(&e, &f, &psi).unwrap()
                    - expectation_product(&e, &f, &pure).unwrap())
                .abs()
                    < 1e-12
            );
            assert!(
                conditional_state_pure(&e, &psi, 2)
                    .unwrap()
                    .as_matrix()
                    .max_abs_diff(conditional_state(&e, &pure, 2).unwrap().as_matrix())
                    < 1e-12
            );
            assert!(
                effective_operator_pure(&f, &psi, 3)
                    .unwrap()
                    .as_matrix()
                    .max_abs_diff(effective_operator(&f, &pure, 3).unwrap().as_matrix())
                    < 1e-12
            );
        }
    }
}
