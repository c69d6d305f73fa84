//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each pivot `(p, q)` is annihilated by a unitary `V = P·R`, where `P` is a
//! diagonal phase making `a_pq` real and `R` is the classical real Jacobi
//! rotation. Sweeps run over all `p < q` in row order until the off-diagonal
//! Frobenius norm drops below `jacobi_threshold · ‖H‖_F`.

use super::matrix::{ComplexMatrix, HermitianMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.eigenvectors[(r, i)]).collect()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// Index of the eigenvalue of largest magnitude; ties go to the positive end.
    pub fn dominant_index(&self) -> usize {
        let last = self.dim() - 1;
        if self.eigenvalues[0].abs() > self.eigenvalues[last].abs() {
            0
        } else {
            last
        }
    }

    /// `V f(Λ) V^†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        });
        HermitianMatrix::hermitian_part(&m)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_spectrum(|l| l)
    }
}

pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    hermitian_eigen_with(h, &NumericPolicy::DEFAULT)
}

pub fn hermitian_eigen_with(h: &HermitianMatrix, policy: &NumericPolicy) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a: Vec<C64> = h.as_matrix().as_slice().to_vec();
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }

    let scale = h.as_matrix().frobenius_norm();
    let target = policy.jacobi_threshold * scale;
    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target {
        if sweeps == policy.jacobi_max_sweeps {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Skip pivots that are negligible against both diagonal entries.
    if r < 1e-300 || (app.abs() + aqq.abs() > 0.0 && r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs())) {
        a[p * n + q] = ZERO;
        a[q * n + p] = ZERO;
        return;
    }
    let phase = (apq / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = phase * (-s);
    let vqq = phase * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * vpp + akq * vqp;
        a[k * n + q] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = vpp.conj() * apk + vqp.conj() * aqk;
        a[q * n + k] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let wkp = v[k * n + p];
        let wkq = v[k * n + q];
        v[k * n + p] = wkp * vpp + wkq * vqp;
        v[k * n + q] = wkp * vpq + wkq * vqq;
    }
}

/// `max_i |λ_i|`.
pub fn operator_norm(h: &HermitianMatrix) -> Result<f64> {
    let e = hermitian_eigen(h)?;
    Ok(e.min().abs().max(e.max().abs()))
}

pub fn min_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.min())
}

/// Spectrum computed on the connected components of the sparsity graph.
///
/// Exact block-diagonalization by index permutation: the Jacobi solver only ever
/// sees the irreducible blocks. Matrices such as sums of Pauli strings split into
/// many small blocks, which makes `1024 x 1024` spectra cheap.
pub fn spectrum_by_blocks(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if h[(i, j)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let mut spectrum = Vec::with_capacity(n);
    for idx in blocks.values() {
        let sub = ComplexMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
        let e = hermitian_eigen(&HermitianMatrix::hermitian_part(&sub))?;
        spectrum.extend(e.eigenvalues);
    }
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}
