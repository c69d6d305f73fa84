use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sum_hermitian, HermitianMatrix};
use crate::policy::NumericPolicy;

/// Whether outcome weights must sum to one (`Σ_a E_x^a = 1`, `Σ_a σ_x^a` of trace 1)
/// or may fall short (abstention allowed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Complete,
    Incomplete,
}

/// Per-setting POVMs `{E_x^a}_a` on `H_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    mode: Completeness,
    elements: Vec<Vec<HermitianMatrix>>,
}

impl Povm {
    pub fn new(elements: Vec<Vec<HermitianMatrix>>, mode: Completeness) -> Result<Self> {
        Self::with_policy(elements, mode, &NumericPolicy::DEFAULT)
    }

    pub fn with_policy(elements: Vec<Vec<HermitianMatrix>>, mode: Completeness, policy: &NumericPolicy) -> Result<Self> {
        let dim = elements
            .first()
            .and_then(|s| s.first())
            .map(HermitianMatrix::dim)
            .ok_or_else(|| Error::dim("POVM needs at least one setting and outcome"))?;
        let m = elements[0].len();
        for (x, setting) in elements.iter().enumerate() {
            if setting.len() != m {
                return Err(Error::dim(format!("setting {x} has {} outcomes, expected {m}", setting.len())));
            }
            for (a, e) in setting.iter().enumerate() {
                if e.dim() != dim {
                    return Err(Error::dim(format!("E_{x}^{a} has dim {}, expected {dim}", e.dim())));
                }
                let min = linalg::min_eigenvalue(e)?;
                if min < -policy.psd {
                    return Err(Error::invalid(format!("E_{x}^{a} has eigenvalue {min:e} < 0")));
                }
            }
            let total = sum_hermitian(dim, setting);
            let defect = HermitianMatrix::identity(dim).sub(&total);
            match mode {
                Completeness::Complete => {
                    let dev = defect.as_matrix().as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
                    if dev > policy.comparison {
                        return Err(Error::invalid(format!("Σ_a E_{x}^a deviates from identity by {dev:e}")));
                    }
                }
                Completeness::Incomplete => {
                    let min = linalg::min_eigenvalue(&defect)?;
                    if min < -policy.psd {
                        return Err(Error::invalid(format!("Σ_a E_{x}^a exceeds identity ({min:e})")));
                    }
                }
            }
        }
        Ok(Self { dim, mode, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn m(&self) -> usize {
        self.elements[0].len()
    }

    pub fn mode(&self) -> Completeness {
        self.mode
    }

    pub fn get(&self, x: usize, a: usize) -> &HermitianMatrix {
        &self.elements[x][a]
    }

    pub fn setting(&self, x: usize) -> &[HermitianMatrix] {
        &self.elements[x]
    }

    pub fn elements(&self) -> &[Vec<HermitianMatrix>] {
        &self.elements
    }
}

/// Observables `-1 ⪯ E_x ⪯ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    dim: usize,
    observables: Vec<HermitianMatrix>,
}

impl DichotomicObservable {
    pub fn new(observables: Vec<HermitianMatrix>) -> Result<Self> {
        let policy = NumericPolicy::DEFAULT;
        let dim = observables
            .first()
            .map(HermitianMatrix::dim)
            .ok_or_else(|| Error::dim("need at least one observable"))?;
        for (x, e) in observables.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::dim(format!("E_{x} has dim {}, expected {dim}", e.dim())));
            }
            let spec = linalg::hermitian_eigen(e)?;
            if spec.min() < -1.0 - policy.psd || spec.max() > 1.0 + policy.psd {
                return Err(Error::invalid(format!(
                    "E_{x} has spectrum outside [-1, 1]: [{}, {}]",
                    spec.min(),
                    spec.max()
                )));
            }
        }
        Ok(Self { dim, observables })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.observables.len()
    }

    pub fn get(&self, x: usize) -> &HermitianMatrix {
        &self.observables[x]
    }

    pub fn observables(&self) -> &[HermitianMatrix] {
        &self.observables
    }

    /// `E_x^{±} = (1 ± E_x)/2`, outcome order `(+1, -1)`.
    pub fn to_binary_povm(&self) -> Result<Povm> {
        let id = HermitianMatrix::identity(self.dim);
        let elements = self
            .observables
            .iter()
            .map(|e| vec![id.add(e).scale(0.5), id.sub(e).scale(0.5)])
            .collect();
        Povm::new(elements, Completeness::Complete)
    }
}
