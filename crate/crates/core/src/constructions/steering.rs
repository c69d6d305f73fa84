//! Random rank-one steering functional and its matching POVMs.

use super::signs::SignTensor;
use crate::error::{Error, Result};
use crate::linalg::{self, sum_hermitian, ComplexMatrix, HermitianMatrix, C64};
use crate::model::{Completeness, Povm, SteeringFunctional};
use crate::policy::NumericPolicy;

/// Default POVM scale; [`build_paper_povms`] still validates it.
pub const DEFAULT_K: f64 = 4.0;

/// `F_x^a` for `a < n` is the Hermitian part of `(1/n) Σ_k ε_{x,a}^k |0⟩⟨k|`
/// on `H_{n+1}` (basis `0..=n`); `F_x^n = 0`.
///
/// Storing the Hermitian part `(M + M^†)/2` keeps `Tr(F σ) = Re Tr(M σ)` for every
/// Hermitian `σ`, so pairings equal those of the non-Hermitian form on real data.
pub fn build_random_functional(n: usize, signs: &SignTensor) -> Result<SteeringFunctional> {
    if n == 0 {
        return Err(Error::param("functional needs n >= 1"));
    }
    if signs.n != n {
        return Err(Error::dim(format!("sign tensor has size {}, expected {n}", signs.n)));
    }
    let d = n + 1;
    let w = 0.5 / n as f64;
    let entries = (0..n)
        .map(|x| {
            let mut row: Vec<HermitianMatrix> = (0..n)
                .map(|a| {
                    let mut m = ComplexMatrix::zeros(d, d);
                    for (k, e) in signs.vector(x, a).enumerate() {
                        m[(0, k + 1)] = C64::new(w * e, 0.0);
                        m[(k + 1, 0)] = C64::new(w * e, 0.0);
                    }
                    HermitianMatrix::hermitian_part(&m)
                })
                .collect();
            row.push(HermitianMatrix::zeros(d));
            row
        })
        .collect();
    SteeringFunctional::new(entries)
}

/// `v_{x,a} = (1, ε_{x,a}^1, …, ε_{x,a}^n)`.
fn sign_vector(signs: &SignTensor, x: usize, a: usize) -> Vec<C64> {
    std::iter::once(1.0)
        .chain(signs.vector(x, a))
        .map(|v| C64::new(v, 0.0))
        .collect()
}

/// Unvalidated elements `E_x^a = v v^†/(nK)` for `a < n` and `E_x^n = 1 - Σ_a E_x^a`.
///
/// The last element is only positive for large enough `K`; use
/// [`build_paper_povms`] for the validated measurement.
pub fn paper_povm_elements(n: usize, signs: &SignTensor, k: f64) -> Result<Vec<Vec<HermitianMatrix>>> {
    if n == 0 {
        return Err(Error::param("POVM needs n >= 1"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param(format!("K must be positive, got {k}")));
    }
    if signs.n != n {
        return Err(Error::dim(format!("sign tensor has size {}, expected {n}", signs.n)));
    }
    let d = n + 1;
    let scale = 1.0 / (n as f64 * k);
    Ok((0..n)
        .map(|x| {
            let mut row: Vec<HermitianMatrix> = (0..n)
                .map(|a| HermitianMatrix::projector(&sign_vector(signs, x, a)).scale(scale))
                .collect();
            let rest = HermitianMatrix::identity(d).sub(&sum_hermitian(d, &row));
            row.push(rest);
            row
        })
        .collect())
}

/// Complete POVMs on `H_{n+1}` with `n + 1` outcomes per setting.
///
/// Fails with [`Error::KTooSmall`] when some `E_x^n` has an eigenvalue below
/// `-psd`; [`minimal_valid_k`] gives the smallest admissible `K`.
pub fn build_paper_povms(n: usize, signs: &SignTensor, k: f64) -> Result<Povm> {
    let elements = paper_povm_elements(n, signs, k)?;
    let policy = NumericPolicy::DEFAULT;
    for (x, row) in elements.iter().enumerate() {
        let min = linalg::min_eigenvalue(&row[n])?;
        if min < -policy.psd {
            return Err(Error::KTooSmall {
                k,
                setting: x,
                min_eigenvalue: min,
            });
        }
    }
    Povm::new(elements, Completeness::Complete)
}

/// `max_x λ_max(Σ_a v_{x,a} v_{x,a}^†) / n`: the smallest `K` keeping every `E_x^n ⪰ 0`.
pub fn minimal_valid_k(n: usize, signs: &SignTensor) -> Result<f64> {
    let d = n + 1;
    let mut worst = 0.0f64;
    for x in 0..n {
        let g = sum_hermitian(
            d,
            &(0..n).map(|a| HermitianMatrix::projector(&sign_vector(signs, x, a))).collect::<Vec<_>>(),
        );
        worst = worst.max(linalg::hermitian_eigen(&g)?.max());
    }
    Ok(worst / n as f64)
}

/// `K` to use for a sign draw: `preferred` if valid, otherwise the minimal valid `K`
/// (rounded up by a relative `1e-9` so the last element stays within tolerance).
pub fn admissible_k(n: usize, signs: &SignTensor, preferred: f64) -> Result<f64> {
    let k_min = minimal_valid_k(n, signs)?;
    // λ_min(E_x^n) = 1 - λ_max/(nK) ≥ -psd for K = preferred
    if 1.0 - k_min / preferred >= -NumericPolicy::DEFAULT.psd {
        Ok(preferred)
    } else {
        Ok(k_min * (1.0 + 1e-9))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::bernoulli_signs;

    #[test]
    fn n1_functional_and_povm() {
        for sign in [1i8, -1] {
            let signs = SignTensor::new(1, 0, vec![sign]).unwrap();
            let f = build_random_functional(1, &signs).unwrap();
            assert_eq!((f.n(), f.m(), f.d()), (1, 2, 2));
            // Hermitian part of |0⟩⟨1|: weight 1/2 on each of (0,1) and (1,0).
            let e = 0.5 * f64::from(sign);
            assert_eq!(f.get(0, 0)[(0, 1)], C64::new(e, 0.0));
            assert_eq!(f.get(0, 0)[(1, 0)], C64::new(e, 0.0));
            assert!(f.get(0, 1).is_zero());

            let povm = build_paper_povms(1, &signs, 2.0).unwrap();
            let spec = linalg::hermitian_eigen(povm.get(0, 0)).unwrap().eigenvalues;
            assert!((spec[0]).abs() < 1e-15 && (spec[1] - 1.0).abs() < 1e-15);
            assert!(linalg::min_eigenvalue(povm.get(0, 1)).unwrap() > -1e-15);
        }
    }

    #[test]
    fn last_outcome_is_zero_and_support_is_first_row() {
        for n in 1..6 {
            let signs = bernoulli_signs(n, n as u64).unwrap();
            let f = build_random_functional(n, &signs).unwrap();
            for x in 0..n {
                assert!(f.get(x, n).is_zero());
                for a in 0..n {
                    let m = f.get(x, a);
                    for i in 1..=n {
                        for j in 1..=n {
                            assert_eq!(m[(i, j)], linalg::ZERO);
                        }
                    }
                    assert_eq!(m[(0, 0)], linalg::ZERO);
                }
            }
        }
    }

    #[test]
    fn povm_elements_are_rank_one_and_sum_to_identity() {
        let n = 5;
        let signs = bernoulli_signs(n, 3).unwrap();
        let k = admissible_k(n, &signs, DEFAULT_K).unwrap();
        let povm = build_paper_povms(n, &signs, k).unwrap();
        for x in 0..n {
            for a in 0..n {
                let e = povm.get(x, a);
                assert!((e.trace() - (n as f64 + 1.0) / (n as f64 * k)).abs() < 1e-14);
                let spec = linalg::hermitian_eigen(e).unwrap().eigenvalues;
                assert!(spec[..n].iter().all(|l| l.abs() < 1e-13));
            }
            let total = sum_hermitian(n + 1, povm.setting(x));
            assert_eq!(total, HermitianMatrix::identity(n + 1));
        }
    }

    #[test]
    fn too_small_k_is_reported_with_eigenvalue() {
        let signs = bernoulli_signs(4, 1).unwrap();
        match build_paper_povms(4, &signs, 0.5) {
            Err(Error::KTooSmall { min_eigenvalue, .. }) => assert!(min_eigenvalue < 0.0),
            other => panic!("expected KTooSmall, got {other:?}"),
        }
        let k = minimal_valid_k(4, &signs).unwrap();
        assert!(build_paper_povms(4, &signs, k * (1.0 + 1e-9)).is_ok());
    }

    #[test]
    fn invalid_arguments() {
        let signs = bernoulli_signs(2, 0).unwrap();
        assert!(build_random_functional(3, &signs).is_err());
        assert!(build_paper_povms(2, &signs, 0.0).is_err());
        assert!(build_random_functional(0, &signs).is_err());
    }
}
