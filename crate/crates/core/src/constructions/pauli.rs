//! Anticommuting Pauli strings `A_k = Z^{⊗(k-1)} ⊗ X ⊗ 1^{⊗(m-k)}` and the dichotomic
//! functional built from them.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64, ZERO};
use crate::model::DichotomicFunctional;

pub const MAX_PAULI_M: usize = 10;

/// A signed permutation matrix: column `c` has a single entry `sign[c]` at row `perm[c]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn to_matrix(&self) -> HermitianMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for c in 0..d {
            m[(self.perm[c], c)] = C64::new(f64::from(self.sign[c]), 0.0);
        }
        HermitianMatrix::hermitian_part(&m)
    }

    /// `self ⊗ other`, again a signed permutation.
    pub fn kron(&self, other: &Self) -> Self {
        let (d1, d2) = (self.dim(), other.dim());
        let mut perm = Vec::with_capacity(d1 * d2);
        let mut sign = Vec::with_capacity(d1 * d2);
        for i in 0..d1 {
            for j in 0..d2 {
                perm.push(self.perm[i] * d2 + other.perm[j]);
                sign.push(self.sign[i] * other.sign[j]);
            }
        }
        Self { perm, sign }
    }
}

/// The family `A_1 … A_m` on `(C²)^{⊗m}`, stored as signed permutations and densified on demand.
#[derive(Debug, Clone)]
pub struct PauliStringFamily {
    m: usize,
    ops: Vec<SignedPermutation>,
}

pub fn build_pauli_family(m: usize) -> Result<PauliStringFamily> {
    if m == 0 || m > MAX_PAULI_M {
        return Err(Error::param(format!("m must lie in 1..={MAX_PAULI_M}, got {m}")));
    }
    let dim = 1usize << m;
    let ops = (1..=m)
        .map(|k| {
            // Qubit k is bit (m - k) counting from the least significant end.
            let bit = m - k;
            let high_mask = !((1usize << (bit + 1)) - 1) & (dim - 1);
            let mut perm = vec![0; dim];
            let mut sign = vec![0i8; dim];
            for c in 0..dim {
                perm[c] = c ^ (1 << bit);
                sign[c] = if (c & high_mask).count_ones().is_multiple_of(2) { 1 } else { -1 };
            }
            SignedPermutation { perm, sign }
        })
        .collect();
    Ok(PauliStringFamily { m, ops })
}

impl PauliStringFamily {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// `A_k` for `k ∈ 1..=m`.
    pub fn signed(&self, k: usize) -> &SignedPermutation {
        &self.ops[k - 1]
    }

    pub fn matrix(&self, k: usize) -> HermitianMatrix {
        self.signed(k).to_matrix()
    }

    pub fn matrices(&self) -> Vec<HermitianMatrix> {
        (1..=self.m).map(|k| self.matrix(k)).collect()
    }

    /// `Σ_k A_k ⊗ A_k` as a dense matrix of dimension `4^m`.
    pub fn tensor_sum(&self) -> HermitianMatrix {
        let d = self.dim() * self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for op in &self.ops {
            let t = op.kron(op);
            for c in 0..d {
                m[(t.perm[c], c)] += C64::new(f64::from(t.sign[c]), 0.0);
            }
        }
        HermitianMatrix::hermitian_part(&m)
    }

    /// `z = vec(1)/2^{m/2} = Σ_i |ii⟩ / √(2^m)`.
    pub fn witness(&self) -> Vec<C64> {
        let d = self.dim();
        let mut z = vec![ZERO; d * d];
        let w = 1.0 / (d as f64).sqrt();
        for i in 0..d {
            z[i * d + i] = C64::new(w, 0.0);
        }
        z
    }
}

/// `F_x = A_x / √m` embedded in the top-left corner of dimension `embed_dim`.
pub fn build_dichotomic_functional(m: usize, embed_dim: usize) -> Result<DichotomicFunctional> {
    build_dichotomic_functional_with_settings(m, embed_dim, m)
}

/// As [`build_dichotomic_functional`] with `n_settings ≥ m`; settings past `m` are zero.
pub fn build_dichotomic_functional_with_settings(
    m: usize,
    embed_dim: usize,
    n_settings: usize,
) -> Result<DichotomicFunctional> {
    let family = build_pauli_family(m)?;
    if embed_dim < family.dim() {
        return Err(Error::dim(format!(
            "embedding dimension {embed_dim} is smaller than 2^{m} = {}",
            family.dim()
        )));
    }
    if n_settings < m {
        return Err(Error::param(format!("need at least m = {m} settings, got {n_settings}")));
    }
    let s = 1.0 / (m as f64).sqrt();
    let mut entries = Vec::with_capacity(n_settings);
    for k in 1..=m {
        entries.push(family.matrix(k).scale(s).embed_top_left(embed_dim)?);
    }
    entries.resize(n_settings, HermitianMatrix::zeros(embed_dim));
    DichotomicFunctional::new(entries)
}

/// Number of Pauli generators when driven from a setting count: `⌊log₂ n⌋`.
pub fn generators_for_settings(n: usize) -> usize {
    if n == 0 { 0 } else { n.ilog2() as usize }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, kron};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(m: &ComplexMatrix) -> Vec<f64> {
        m.as_slice().iter().map(|c| c.re).collect()
    }

    #[test]
    fn m_one_is_sigma_x() {
        let f = build_pauli_family(1).unwrap();
        assert_eq!(real(f.matrix(1).as_matrix()), vec![0.0, 1.0, 1.0, 0.0]);
        assert!(build_pauli_family(0).is_err());
        assert!(build_pauli_family(11).is_err());
    }

    #[test]
    fn m_two_matches_hand_kron() {
        let f = build_pauli_family(2).unwrap();
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(f.matrix(1).as_matrix(), &kron(&x, &id));
        assert_eq!(f.matrix(2).as_matrix(), &kron(&z, &x));
    }

    #[test]
    fn clifford_relations_hold_exactly() {
        for m in 1..=6 {
            let f = build_pauli_family(m).unwrap();
            let mats = f.matrices();
            let id = ComplexMatrix::identity(f.dim());
            for i in 0..m {
                assert_eq!(mats[i].as_matrix(), &mats[i].transpose().into_matrix());
                for j in 0..m {
                    let (a, b) = (mats[i].as_matrix(), mats[j].as_matrix());
                    let ac = a.matmul(b).add(&b.matmul(a));
                    let want = if i == j { id.scale_real(2.0) } else { ComplexMatrix::zeros(f.dim(), f.dim()) };
                    assert_eq!(ac, want, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn witness_attains_m_on_tensor_sum() {
        for m in 1..=3 {
            let f = build_pauli_family(m).unwrap();
            let t = f.tensor_sum();
            let z = f.witness();
            let tz = t.as_matrix().apply(&z);
            let val = linalg::inner(&z, &tz).re;
            assert!((val - m as f64).abs() < 1e-12);
            assert!((linalg::operator_norm(&t).unwrap() - m as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn dichotomic_functional_shape_and_embedding() {
        let f = build_dichotomic_functional(1, 3).unwrap();
        assert_eq!(f.n(), 1);
        assert_eq!(f.get(0)[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(f.get(0)[(2, 2)], ZERO);
        assert!(build_dichotomic_functional(3, 7).is_err());
        let g = build_dichotomic_functional_with_settings(2, 4, 5).unwrap();
        assert!(g.get(4).is_zero() && !g.get(1).is_zero());
        assert_eq!(generators_for_settings(8), 3);
        assert_eq!(generators_for_settings(11), 3);
    }

    #[test]
    fn phi_is_bounded_by_root_two_sup() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=4 {
            let f = build_dichotomic_functional(m, 1 << m).unwrap();
            for _ in 0..250 {
                let a: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
                let sup = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
                let mut sum = HermitianMatrix::zeros(1 << m);
                for (x, &ax) in a.iter().enumerate() {
                    sum.add_scaled(f.get(x), ax);
                }
                assert!(linalg::operator_norm(&sum).unwrap() <= 2f64.sqrt() * sup + 1e-12);
            }
        }
    }
}
