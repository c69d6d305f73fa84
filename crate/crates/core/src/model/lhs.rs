use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix};
use crate::model::{Assemblage, Completeness};
use crate::policy::NumericPolicy;

/// Deterministic response `x ↦ a` or abstain (`None`).
///
/// Serialized as an integer array with `-1` for abstain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LhsStrategy {
    pub response: Vec<Option<usize>>,
}

impl LhsStrategy {
    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn abstains(&self) -> bool {
        self.response.iter().any(Option::is_none)
    }

    /// Response probabilities `p(a|x)` laid out as `x·m + a`.
    pub fn probabilities(&self, m: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.n() * m];
        for (x, r) in self.response.iter().enumerate() {
            if let Some(a) = r {
                p[x * m + a] = 1.0;
            }
        }
        p
    }
}

impl Serialize for LhsStrategy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<i64> = self.response.iter().map(|r| r.map_or(-1, |a| a as i64)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LhsStrategy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        let response = v
            .into_iter()
            .map(|a| match a {
                -1 => Ok(None),
                a if a >= 0 => Ok(Some(a as usize)),
                a => Err(serde::de::Error::custom(format!("invalid outcome {a}"))),
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { response })
    }
}

/// `σ_x^a = Σ_λ q_λ p_λ(a|x) σ_λ`.
#[derive(Debug, Clone)]
pub struct LhsModel {
    n: usize,
    m: usize,
    mode: Completeness,
    weights: Vec<f64>,
    /// Per hidden variable, `p_λ(a|x)` at index `x·m + a`.
    responses: Vec<Vec<f64>>,
    states: Vec<HermitianMatrix>,
}

impl LhsModel {
    pub fn new(
        n: usize,
        m: usize,
        mode: Completeness,
        weights: Vec<f64>,
        responses: Vec<Vec<f64>>,
        states: Vec<HermitianMatrix>,
    ) -> Result<Self> {
        let tol = NumericPolicy::DEFAULT;
        if weights.is_empty() || weights.len() != responses.len() || weights.len() != states.len() {
            return Err(Error::dim("weights, responses and states must have equal non-zero length"));
        }
        if weights.iter().any(|&q| q < -tol.comparison) {
            return Err(Error::invalid("negative hidden-variable weight"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.comparison {
            return Err(Error::invalid(format!("weights sum to {total}")));
        }
        let d = states[0].dim();
        for (l, (p, s)) in responses.iter().zip(&states).enumerate() {
            if p.len() != n * m {
                return Err(Error::dim(format!("p_{l} has {} entries, expected {}", p.len(), n * m)));
            }
            if p.iter().any(|&v| v < -tol.comparison) {
                return Err(Error::invalid(format!("p_{l} has a negative entry")));
            }
            for x in 0..n {
                let sum: f64 = p[x * m..(x + 1) * m].iter().sum();
                let ok = match mode {
                    Completeness::Complete => (sum - 1.0).abs() <= tol.comparison,
                    Completeness::Incomplete => sum <= 1.0 + tol.comparison,
                };
                if !ok {
                    return Err(Error::invalid(format!("Σ_a p_{l}(a|{x}) = {sum}")));
                }
            }
            if s.dim() != d {
                return Err(Error::dim("hidden states differ in dimension"));
            }
            if (s.trace() - 1.0).abs() > tol.comparison || linalg::min_eigenvalue(s)? < -tol.psd {
                return Err(Error::invalid(format!("σ_{l} is not a density matrix")));
            }
        }
        Ok(Self {
            n,
            m,
            mode,
            weights,
            responses,
            states,
        })
    }

    /// Model built from deterministic strategies.
    pub fn from_strategies(
        m: usize,
        weights: Vec<f64>,
        strategies: &[LhsStrategy],
        states: Vec<HermitianMatrix>,
    ) -> Result<Self> {
        let n = strategies.first().map_or(0, LhsStrategy::n);
        let mode = if strategies.iter().any(LhsStrategy::abstains) {
            Completeness::Incomplete
        } else {
            Completeness::Complete
        };
        if strategies.iter().flat_map(|s| s.response.iter().flatten()).any(|&a| a >= m) {
            return Err(Error::invalid("strategy outcome out of range"));
        }
        let responses = strategies.iter().map(|s| s.probabilities(m)).collect();
        Self::new(n, m, mode, weights, responses, states)
    }

    pub fn mode(&self) -> Completeness {
        self.mode
    }

    pub fn reconstruct(&self) -> Result<Assemblage> {
        let d = self.states[0].dim();
        let mut sigma = vec![vec![HermitianMatrix::zeros(d); self.m]; self.n];
        for ((q, p), s) in self.weights.iter().zip(&self.responses).zip(&self.states) {
            for (x, row) in sigma.iter_mut().enumerate() {
                for (a, out) in row.iter_mut().enumerate() {
                    let w = q * p[x * self.m + a];
                    if w != 0.0 {
                        out.add_scaled(s, w);
                    }
                }
            }
        }
        Assemblage::new(sigma, self.mode)
    }
}
