use crate::error::{Error, Result};
use crate::linalg::{self, sum_hermitian, HermitianMatrix};
use crate::model::Completeness;
use crate::policy::NumericPolicy;

/// Family `{σ_x^a}` of positive operators on `H_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    n: usize,
    m: usize,
    d: usize,
    mode: Completeness,
    sigma: Vec<HermitianMatrix>,
}

impl Assemblage {
    /// `sigma[x][a] = σ_x^a`.
    pub fn new(sigma: Vec<Vec<HermitianMatrix>>, mode: Completeness) -> Result<Self> {
        Self::with_policy(sigma, mode, &NumericPolicy::DEFAULT)
    }

    pub fn with_policy(sigma: Vec<Vec<HermitianMatrix>>, mode: Completeness, policy: &NumericPolicy) -> Result<Self> {
        let n = sigma.len();
        let m = sigma.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::dim("assemblage needs at least one setting and outcome"));
        }
        let d = sigma[0][0].dim();
        for (x, row) in sigma.iter().enumerate() {
            if row.len() != m {
                return Err(Error::dim(format!("setting {x} has {} outcomes, expected {m}", row.len())));
            }
            if let Some(a) = row.iter().position(|s| s.dim() != d) {
                return Err(Error::dim(format!("σ_{x}^{a} has dim {}, expected {d}", row[a].dim())));
            }
        }
        let out = Self {
            n,
            m,
            d,
            mode,
            sigma: sigma.into_iter().flatten().collect(),
        };
        out.validate(policy)?;
        Ok(out)
    }

    pub fn validate(&self, policy: &NumericPolicy) -> Result<()> {
        for (k, s) in self.sigma.iter().enumerate() {
            let min = linalg::min_eigenvalue(s)?;
            if min < -policy.psd {
                return Err(Error::invalid(format!(
                    "σ_{}^{} has eigenvalue {min:e} < 0",
                    k / self.m,
                    k % self.m
                )));
            }
        }
        let first = self.marginal(0);
        for x in 0..self.n {
            let marg = self.marginal(x);
            match self.mode {
                Completeness::Complete => {
                    let dev = marg.as_matrix().max_abs_diff(first.as_matrix());
                    if dev > policy.comparison {
                        return Err(Error::invalid(format!(
                            "no-signalling violated: Σ_a σ_{x}^a differs from setting 0 by {dev:e}"
                        )));
                    }
                    if (marg.trace() - 1.0).abs() > policy.comparison {
                        return Err(Error::invalid(format!("Σ_a σ_{x}^a has trace {}", marg.trace())));
                    }
                }
                Completeness::Incomplete => {
                    if marg.trace() > 1.0 + policy.comparison {
                        return Err(Error::invalid(format!("Σ_a σ_{x}^a has trace {} > 1", marg.trace())));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Completeness {
        self.mode
    }

    pub fn get(&self, x: usize, a: usize) -> &HermitianMatrix {
        &self.sigma[x * self.m + a]
    }

    /// `Σ_a σ_x^a`.
    pub fn marginal(&self, x: usize) -> HermitianMatrix {
        sum_hermitian(self.d, &self.sigma[x * self.m..(x + 1) * self.m])
    }

    pub fn rows(&self) -> Vec<Vec<HermitianMatrix>> {
        self.sigma.chunks(self.m).map(|c| c.to_vec()).collect()
    }
}
