use crate::error::{Error, Result};
use crate::linalg::{self, vector_norm, HermitianMatrix, C64};
use crate::policy::NumericPolicy;

/// Shared state on `H_A ⊗ H_B`.
///
/// Pure states are kept as vectors so that large tensor dimensions (e.g. the
/// `4096`-dimensional anticommuting witness) never materialize a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum BipartiteState {
    Pure { psi: Vec<C64>, dim_a: usize, dim_b: usize },
    Mixed { rho: HermitianMatrix, dim_a: usize, dim_b: usize },
}

impl BipartiteState {
    pub fn pure(psi: Vec<C64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        if psi.len() != dim_a * dim_b {
            return Err(Error::dim(format!(
                "state vector of length {} does not factor as {dim_a}·{dim_b}",
                psi.len()
            )));
        }
        let norm = vector_norm(&psi);
        if (norm - 1.0).abs() > NumericPolicy::DEFAULT.comparison {
            return Err(Error::invalid(format!("state vector has norm {norm}")));
        }
        Ok(Self::Pure { psi, dim_a, dim_b })
    }

    pub fn mixed(rho: HermitianMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let policy = NumericPolicy::DEFAULT;
        if rho.dim() != dim_a * dim_b {
            return Err(Error::dim(format!(
                "density matrix of dim {} does not factor as {dim_a}·{dim_b}",
                rho.dim()
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > policy.comparison {
            return Err(Error::invalid(format!("density matrix has trace {tr}")));
        }
        let min = linalg::min_eigenvalue(&rho)?;
        if min < -policy.psd {
            return Err(Error::invalid(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(Self::Mixed { rho, dim_a, dim_b })
    }

    pub fn dim_a(&self) -> usize {
        match self {
            Self::Pure { dim_a, .. } | Self::Mixed { dim_a, .. } => *dim_a,
        }
    }

    pub fn dim_b(&self) -> usize {
        match self {
            Self::Pure { dim_b, .. } | Self::Mixed { dim_b, .. } => *dim_b,
        }
    }

    pub fn density(&self) -> HermitianMatrix {
        match self {
            Self::Pure { psi, .. } => HermitianMatrix::projector(psi),
            Self::Mixed { rho, .. } => rho.clone(),
        }
    }

    /// `Tr_A((E ⊗ 1) ρ)`.
    pub fn conditional_state(&self, e: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_a(e)?;
        match self {
            Self::Pure { psi, dim_b, .. } => linalg::conditional_state_pure(e, psi, *dim_b),
            Self::Mixed { rho, dim_b, .. } => linalg::conditional_state(e, rho, *dim_b),
        }
    }

    /// `Tr_B((1 ⊗ F) ρ)`.
    pub fn effective_operator(&self, f: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_b(f)?;
        match self {
            Self::Pure { psi, dim_a, .. } => linalg::effective_operator_pure(f, psi, *dim_a),
            Self::Mixed { rho, dim_a, .. } => linalg::effective_operator(f, rho, *dim_a),
        }
    }

    /// `Tr((E ⊗ F) ρ)`.
    pub fn expectation(&self, e: &HermitianMatrix, f: &HermitianMatrix) -> Result<f64> {
        self.check_a(e)?;
        self.check_b(f)?;
        match self {
            Self::Pure { psi, .. } => linalg::expectation_product_pure(e, f, psi),
            Self::Mixed { rho, .. } => linalg::expectation_product(e, f, rho),
        }
    }

    fn check_a(&self, e: &HermitianMatrix) -> Result<()> {
        if e.dim() != self.dim_a() {
            return Err(Error::dim(format!(
                "measurement operator of dim {} on a system of dim {}",
                e.dim(),
                self.dim_a()
            )));
        }
        Ok(())
    }

    fn check_b(&self, f: &HermitianMatrix) -> Result<()> {
        if f.dim() != self.dim_b() {
            return Err(Error::dim(format!(
                "functional entry of dim {} on a system of dim {}",
                f.dim(),
                self.dim_b()
            )));
        }
        Ok(())
    }
}
