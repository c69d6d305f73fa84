//! Schmidt states, the noisy family `ρ_λ`, and the PPT isotropic-/Werner-like families.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, random::gaussian_matrix, ComplexMatrix, HermitianMatrix, Subsystem, C64, ZERO};
use crate::model::BipartiteState;
use crate::policy::NumericPolicy;

/// Schmidt coefficients `α_0 ≥ α_1 ≥ … > 0` with `Σ α_i² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtState {
    coefficients: Vec<f64>,
}

impl SchmidtState {
    /// Validates and sorts descending.
    pub fn new(mut coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::param("Schmidt state needs at least one coefficient"));
        }
        if coefficients.iter().any(|&a| a.is_nan() || a <= 0.0 || !a.is_finite()) {
            return Err(Error::invalid("Schmidt coefficients must be positive"));
        }
        let norm: f64 = coefficients.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("Σ α_i² = {norm}, expected 1")));
        }
        coefficients.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { coefficients })
    }

    /// `α_i = 1/√d`, the maximally entangled state.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("dimension must be positive"));
        }
        Self::new(vec![(1.0 / d as f64).sqrt(); d])
    }

    /// `(α, √((1-α²)/n), …, √((1-α²)/n))` on `H_{n+1}`.
    pub fn paper_family(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param(format!("α must lie in (0, 1), got {alpha}")));
        }
        let rest = ((1.0 - alpha * alpha) / n as f64).sqrt();
        Self::new(std::iter::once(alpha).chain(std::iter::repeat_n(rest, n)).collect())
    }

    /// Random Schmidt vector: normalized absolute Gaussian entries.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        loop {
            let v: Vec<f64> = (0..d)
                .map(|_| linalg::random::gaussian_complex(rng).norm() + 1e-3)
                .collect();
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if let Ok(s) = Self::new(v.iter().map(|a| a / n).collect()) {
                return Ok(s);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `|φ_α⟩ = Σ α_i |ii⟩`.
    pub fn vector(&self) -> Vec<C64> {
        let d = self.dim();
        let mut v = vec![ZERO; d * d];
        for (i, &a) in self.coefficients.iter().enumerate() {
            v[i * d + i] = C64::new(a, 0.0);
        }
        v
    }

    pub fn to_state(&self) -> BipartiteState {
        let d = self.dim();
        BipartiteState::Pure {
            psi: self.vector(),
            dim_a: d,
            dim_b: d,
        }
    }

    /// `(Σ_i α_i)² = Σ_{ij} α_i α_j`.
    pub fn sum_squared(&self) -> f64 {
        let s: f64 = self.coefficients.iter().sum();
        s * s
    }
}

/// `|φ_α⟩⟨φ_α|` on `H_d ⊗ H_d`.
pub fn build_schmidt_state(alpha: &SchmidtState) -> HermitianMatrix {
    HermitianMatrix::projector(&alpha.vector())
}

/// `ρ_λ = (1-λ) 1/d² + λ |φ_α⟩⟨φ_α|`.
pub fn build_rho_lambda(alpha: &SchmidtState, lambda: f64) -> Result<HermitianMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("λ must lie in [0, 1], got {lambda}")));
    }
    let d = alpha.dim();
    let mixed = HermitianMatrix::identity(d * d).scale((1.0 - lambda) / (d * d) as f64);
    Ok(mixed.add(&build_schmidt_state(alpha).scale(lambda)))
}

/// Partial-transpose spectrum of `ρ_λ` in closed form, ascending:
/// `(1-λ)/d² ± λ α_i α_j` for `i < j` and `(1-λ)/d² + λ α_i²`.
pub fn rho_lambda_pt_spectrum(alpha: &SchmidtState, lambda: f64) -> Vec<f64> {
    let a = alpha.coefficients();
    let d = a.len();
    let base = (1.0 - lambda) / (d * d) as f64;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(base + lambda * a[i] * a[i]);
        for j in (i + 1)..d {
            out.push(base + lambda * a[i] * a[j]);
            out.push(base - lambda * a[i] * a[j]);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Largest `λ` for which `ρ_λ` is PPT: `min_{i≠j} 1/(1 + d² α_i α_j)`.
pub fn ppt_threshold(alpha: &SchmidtState) -> Result<f64> {
    let a = alpha.coefficients();
    let d = a.len();
    if d < 2 {
        return Err(Error::param("PPT threshold is undefined for d = 1"));
    }
    // Descending order puts the largest product at (0, 1).
    Ok(1.0 / (1.0 + (d * d) as f64 * a[0] * a[1]))
}

/// Minimum eigenvalue of the partial transpose, by direct eigensolve.
pub fn pt_min_eigenvalue(rho: &HermitianMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    linalg::min_eigenvalue(&linalg::partial_transpose(rho, dim_a, dim_b, Subsystem::B)?)
}

/// Coefficients of a diagonal-symmetric PPT family on `H_n ⊗ H_n`.
///
/// `coherence` is `(a_ij)` for isotropic-like states and `(b_ij)` for Werner-like
/// states; `c[i][j]` (`i ≠ j`) weights `|ij⟩⟨ij|`, diagonal of `c` unused.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSymmetricParams {
    pub coherence: HermitianMatrix,
    pub c: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicLikeParams(pub DiagonalSymmetricParams);

#[derive(Debug, Clone, PartialEq)]
pub struct WernerLikeParams(pub DiagonalSymmetricParams);

impl DiagonalSymmetricParams {
    pub fn new(coherence: HermitianMatrix, c: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self { coherence, c };
        p.validate(&NumericPolicy::DEFAULT)?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.coherence.dim()
    }

    fn validate(&self, policy: &NumericPolicy) -> Result<()> {
        let n = self.n();
        let tol = policy.comparison;
        if self.c.len() != n || self.c.iter().any(|r| r.len() != n) {
            return Err(Error::dim(format!("c must be {n}x{n}")));
        }
        let min = linalg::min_eigenvalue(&self.coherence)?;
        if min < -tol {
            return Err(Error::invalid(format!(
                "constraint (coherence) ⪰ 0 violated: eigenvalue {min:e}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.c[i][j] < -tol {
                    return Err(Error::invalid(format!("constraint c_{i}{j} ≥ 0 violated")));
                }
                let lhs = self.c[i][j] * self.c[j][i];
                let rhs = self.coherence[(i, j)].norm_sqr();
                if lhs - rhs < -tol {
                    return Err(Error::invalid(format!(
                        "constraint c_{i}{j}·c_{j}{i} ≥ |coherence_{i}{j}|² violated ({lhs:e} < {rhs:e})"
                    )));
                }
            }
        }
        let total = self.normalization();
        if (total - 1.0).abs() > tol {
            return Err(Error::invalid(format!(
                "normalization constraint violated: Σ diag + Σ_{{i≠j}} c_ij = {total}"
            )));
        }
        Ok(())
    }

    fn off_diagonal_c(&self) -> f64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.c[i][j])
            .sum()
    }

    fn normalization(&self) -> f64 {
        self.coherence.trace() + self.off_diagonal_c()
    }

    /// `Σ_{ij} |coherence_ij| + Σ_{i≠j} c_ij`.
    pub fn projective_norm_upper_bound(&self) -> f64 {
        let n = self.n();
        let coh: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.coherence[(i, j)].norm())
            .sum();
        coh + self.off_diagonal_c()
    }

    /// Random valid parameters: `(coherence) = G G^†` for complex Gaussian `G`, each
    /// pair `c_ij, c_ji` set to `|coh_ij|·t^{±1}·(1 + u)` with random `t, u`, then the
    /// whole family rescaled to unit normalization.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = gaussian_matrix(n, n, rng);
        let coh = HermitianMatrix::hermitian_part(&g.matmul(&g.adjoint()));
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let mag = coh[(i, j)].norm();
                let t: f64 = rng.random_range(0.25..4.0);
                let (u, v): (f64, f64) = (rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
                c[i][j] = mag * t * (1.0 + u) + rng.random_range(0.0..0.1);
                c[j][i] = mag / t * (1.0 + v);
            }
        }
        let total = coh.trace()
            + (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| c[i][j])
                .sum::<f64>();
        let s = 1.0 / total;
        Self {
            coherence: coh.scale(s),
            c: c.into_iter().map(|r| r.into_iter().map(|v| v * s).collect()).collect(),
        }
    }
}

fn check_ppt_state(rho: HermitianMatrix, n: usize) -> Result<HermitianMatrix> {
    let policy = NumericPolicy::DEFAULT;
    let tr = rho.trace();
    if (tr - 1.0).abs() > policy.comparison {
        return Err(Error::invalid(format!("state has trace {tr}")));
    }
    let min = linalg::min_eigenvalue(&rho)?;
    if min < -policy.psd {
        return Err(Error::invalid(format!("state is not PSD: eigenvalue {min:e}")));
    }
    let pt = pt_min_eigenvalue(&rho, n, n)?;
    if pt < -policy.psd {
        return Err(Error::invalid(format!("state is not PPT: partial transpose eigenvalue {pt:e}")));
    }
    Ok(rho)
}

/// `Σ a_ij |ii⟩⟨jj| + Σ_{i≠j} c_ij |ij⟩⟨ij|`.
pub fn build_isotropic_like(p: &IsotropicLikeParams) -> Result<HermitianMatrix> {
    let p = &p.0;
    let n = p.n();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + i, j * n + j)] = p.coherence[(i, j)];
            if i != j {
                m[(i * n + j, i * n + j)] = C64::new(p.c[i][j], 0.0);
            }
        }
    }
    check_ppt_state(HermitianMatrix::hermitian_part(&m), n)
}

/// `Σ b_ij |ij⟩⟨ji| + Σ_{i≠j} c_ij |ij⟩⟨ij|`.
pub fn build_werner_like(p: &WernerLikeParams) -> Result<HermitianMatrix> {
    let p = &p.0;
    let n = p.n();
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + j, j * n + i)] += p.coherence[(i, j)];
            if i != j {
                m[(i * n + j, i * n + j)] += C64::new(p.c[i][j], 0.0);
            }
        }
    }
    check_ppt_state(HermitianMatrix::hermitian_part(&m), n)
}

impl IsotropicLikeParams {
    pub fn projective_norm_upper_bound(&self) -> f64 {
        self.0.projective_norm_upper_bound()
    }
}

impl WernerLikeParams {
    pub fn projective_norm_upper_bound(&self) -> f64 {
        self.0.projective_norm_upper_bound()
    }
}

/// `ρ_λ` expressed as isotropic-like parameters:
/// `a_ij = (1-λ)/d² δ_ij + λ α_i α_j`, `c_ij = (1-λ)/d²`.
pub fn rho_lambda_as_isotropic(alpha: &SchmidtState, lambda: f64) -> Result<IsotropicLikeParams> {
    let a = alpha.coefficients();
    let d = a.len();
    let base = (1.0 - lambda) / (d * d) as f64;
    let coh = ComplexMatrix::from_fn(d, d, |i, j| {
        C64::new(lambda * a[i] * a[j] + if i == j { base } else { 0.0 }, 0.0)
    });
    let c = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 0.0 } else { base }).collect())
        .collect();
    Ok(IsotropicLikeParams(DiagonalSymmetricParams::new(
        HermitianMatrix::new(coh)?,
        c,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schmidt_validation_and_ordering() {
        assert!(SchmidtState::new(vec![1.0, 0.0]).is_err());
        assert!(SchmidtState::new(vec![0.5, 0.5]).is_err());
        let s = SchmidtState::new(vec![0.6, 0.8]).unwrap();
        assert_eq!(s.coefficients(), &[0.8, 0.6]);
        assert!(SchmidtState::new(vec![1.0]).is_ok());
    }

    #[test]
    fn uniform_schmidt_is_maximally_entangled() {
        let d = 3;
        let rho = build_schmidt_state(&SchmidtState::uniform(d).unwrap());
        let red = linalg::partial_trace(&rho, d, d, Subsystem::A).unwrap();
        let mm = HermitianMatrix::identity(d).scale(1.0 / d as f64);
        assert!(red.as_matrix().max_abs_diff(mm.as_matrix()) < 1e-15);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn paper_family_reduced_spectrum() {
        let n = 4;
        let alpha = 0.8;
        let s = SchmidtState::paper_family(n, alpha).unwrap();
        let rho = build_schmidt_state(&s);
        for over in [Subsystem::A, Subsystem::B] {
            let red = linalg::partial_trace(&rho, n + 1, n + 1, over).unwrap();
            let e = linalg::hermitian_eigen(&red).unwrap().eigenvalues;
            let rest = (1.0 - alpha * alpha) / n as f64;
            for l in &e[..n] {
                assert!((l - rest).abs() < 1e-14);
            }
            assert!((e[n] - alpha * alpha).abs() < 1e-14);
        }
    }

    #[test]
    fn rho_lambda_endpoints_and_pt_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = SchmidtState::random(3, &mut rng).unwrap();
        let r0 = build_rho_lambda(&s, 0.0).unwrap();
        assert!(r0.as_matrix().max_abs_diff(HermitianMatrix::identity(9).scale(1.0 / 9.0).as_matrix()) < 1e-16);
        let r1 = build_rho_lambda(&s, 1.0).unwrap();
        assert_eq!(r1, build_schmidt_state(&s));
        assert!(build_rho_lambda(&s, 1.5).is_err());
        for &lambda in &[0.0, 0.2, 0.5, 0.9] {
            let rho = build_rho_lambda(&s, lambda).unwrap();
            let pt = linalg::partial_transpose(&rho, 3, 3, Subsystem::B).unwrap();
            let direct = linalg::hermitian_eigen(&pt).unwrap().eigenvalues;
            for (x, y) in direct.iter().zip(rho_lambda_pt_spectrum(&s, lambda)) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ppt_threshold_examples() {
        let s = SchmidtState::uniform(2).unwrap();
        let t = ppt_threshold(&s).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-15);
        let rho = build_rho_lambda(&s, 1.0 / 3.0).unwrap();
        assert!(pt_min_eigenvalue(&rho, 2, 2).unwrap().abs() < 1e-12);
        for d in 2..6 {
            let t = ppt_threshold(&SchmidtState::uniform(d).unwrap()).unwrap();
            assert!((t - 1.0 / (1.0 + d as f64)).abs() < 1e-15);
        }
        let eps: f64 = 1e-6;
        let thin = SchmidtState::new(vec![(1.0 - eps * eps).sqrt(), eps]).unwrap();
        assert!(ppt_threshold(&thin).unwrap() > 0.999);
        assert!(ppt_threshold(&SchmidtState::uniform(1).unwrap()).is_err());
    }

    #[test]
    fn trivial_isotropic_state_and_product_bound() {
        let p = IsotropicLikeParams(
            DiagonalSymmetricParams::new(HermitianMatrix::from_real_diagonal(&[1.0]), vec![vec![0.0]]).unwrap(),
        );
        let rho = build_isotropic_like(&p).unwrap();
        assert_eq!(rho.dim(), 1);
        assert_eq!(p.projective_norm_upper_bound(), 1.0);

        let prod = IsotropicLikeParams(
            DiagonalSymmetricParams::new(HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), vec![vec![0.0; 2]; 2])
                .unwrap(),
        );
        assert_eq!(prod.projective_norm_upper_bound(), 1.0);
    }

    #[test]
    fn maximally_mixed_as_isotropic_is_bounded_by_two() {
        for n in 2..5 {
            let v = 1.0 / (n * n) as f64;
            let diag = HermitianMatrix::from_real_diagonal(&vec![v; n]);
            let c = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { v }).collect()).collect();
            let p = IsotropicLikeParams(DiagonalSymmetricParams::new(diag, c).unwrap());
            let rho = build_isotropic_like(&p).unwrap();
            assert!(rho.as_matrix().max_abs_diff(HermitianMatrix::identity(n * n).scale(v).as_matrix()) < 1e-16);
            assert!(p.projective_norm_upper_bound() <= 2.0);
        }
    }

    #[test]
    fn rho_lambda_below_threshold_is_isotropic_like() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in 2..5 {
            let s = SchmidtState::random(d, &mut rng).unwrap();
            let lambda = ppt_threshold(&s).unwrap() * 0.999;
            let p = rho_lambda_as_isotropic(&s, lambda).unwrap();
            let rho = build_isotropic_like(&p).unwrap();
            let direct = build_rho_lambda(&s, lambda).unwrap();
            assert!(rho.as_matrix().max_abs_diff(direct.as_matrix()) < 1e-15);
        }
        // Above the threshold the c_ij c_ji ≥ |a_ij|² constraint fails.
        let s = SchmidtState::uniform(3).unwrap();
        assert!(rho_lambda_as_isotropic(&s, 0.9).is_err());
    }

    #[test]
    fn random_params_are_valid_ppt_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let p = DiagonalSymmetricParams::random(3, &mut rng);
            let p = DiagonalSymmetricParams::new(p.coherence, p.c).unwrap();
            assert!(p.projective_norm_upper_bound() <= 2.0 + 1e-12);
            build_isotropic_like(&IsotropicLikeParams(p.clone())).unwrap();
            build_werner_like(&WernerLikeParams(p)).unwrap();
        }
    }

    #[test]
    fn violated_constraints_are_named() {
        let coh = HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[0.4, 0.3, 0.3, 0.4]).unwrap()).unwrap();
        let err = DiagonalSymmetricParams::new(coh, vec![vec![0.0, 0.1], vec![0.1, 0.0]]).unwrap_err();
        assert!(err.to_string().contains("c_01·c_10"), "{err}");
        let coh = HermitianMatrix::from_real_diagonal(&[0.5, 0.4]);
        let err = DiagonalSymmetricParams::new(coh, vec![vec![0.0; 2]; 2]).unwrap_err();
        assert!(err.to_string().contains("normalization"), "{err}");
    }
}
