use serde::{Deserialize, Serialize};

use crate::bounds::SeesawConfig;
use crate::constructions::DEFAULT_K;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::Completeness;

/// Tolerances of the verification checks, overridable as `key=value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Candidate pairing vs closed form.
    pub eq6: f64,
    /// Minimum POVM eigenvalue allowed below zero.
    pub psd: f64,
    /// Every sign pattern's norm vs 1.
    pub dichotomic_bc: f64,
    /// Witness value vs `√m`.
    pub witness: f64,
    /// `λ_max(Σ A_i ⊗ A_i)` vs `m`.
    pub lambda_max: f64,
    /// Closed-form PPT threshold vs bisection.
    pub ppt_bisection: f64,
    /// Uniform threshold vs `1/(1+n)`.
    pub ppt_uniform: f64,
    /// Slack on the projective-norm bound 2.
    pub projective: f64,
    /// Dichotomic LHS bound vs `‖Σ F_x‖` for positive families.
    pub collapse: f64,
    /// See-saw value above the LHS bound for positive families.
    pub seesaw_slack: f64,
    /// Allowed decrease between see-saw half-steps.
    pub monotone: f64,
    /// Witness re-evaluation vs reported value.
    pub reeval: f64,
    /// Allowed growth of the PPT ratio relative to the smallest `n`.
    pub ppt_growth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq6: 1e-10,
            psd: 1e-10,
            dichotomic_bc: 1e-10,
            witness: 1e-9,
            lambda_max: 1e-9,
            ppt_bisection: 1e-8,
            ppt_uniform: 1e-15,
            projective: 1e-12,
            collapse: 1e-10,
            seesaw_slack: 1e-8,
            monotone: 1e-12,
            reeval: 1e-10,
            ppt_growth: 1.25,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 13] = [
        "eq6",
        "psd",
        "dichotomic_bc",
        "witness",
        "lambda_max",
        "ppt_bisection",
        "ppt_uniform",
        "projective",
        "collapse",
        "seesaw_slack",
        "monotone",
        "reeval",
        "ppt_growth",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "eq6" => &mut self.eq6,
            "psd" => &mut self.psd,
            "dichotomic_bc" => &mut self.dichotomic_bc,
            "witness" => &mut self.witness,
            "lambda_max" => &mut self.lambda_max,
            "ppt_bisection" => &mut self.ppt_bisection,
            "ppt_uniform" => &mut self.ppt_uniform,
            "projective" => &mut self.projective,
            "collapse" => &mut self.collapse,
            "seesaw_slack" => &mut self.seesaw_slack,
            "monotone" => &mut self.monotone,
            "reeval" => &mut self.reeval,
            "ppt_growth" => &mut self.ppt_growth,
            _ => return None,
        })
    }

    /// Applies `key=value[,key=value…]`.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::param(format!("tolerance override `{item}` is not key=value")))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("tolerance `{k}` has non-numeric value `{v}`")))?;
            let slot = self.slot(k.trim()).ok_or_else(|| {
                Error::param(format!("unknown tolerance `{k}`; known: {}", Self::KEYS.join(", ")))
            })?;
            *slot = value;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Setting counts (scaling, ppt).
    pub n_values: Vec<usize>,
    /// Pauli generator counts (dichotomic).
    pub m_values: Vec<usize>,
    pub seeds: Vec<u64>,
    pub alpha: f64,
    /// Preferred POVM scale; raised per sign draw when too small.
    pub k: f64,
    /// `λ` values as fractions of the PPT threshold `λ*`.
    pub lambda_grid: Vec<f64>,
    pub seesaw: SeesawConfig,
    /// Largest `m` for which the dichotomic experiment runs the see-saw.
    pub seesaw_max_m: usize,
    /// Random measurements per quantum lower bound.
    pub samples: usize,
    pub mode: Completeness,
    #[serde(skip)]
    pub exec: Exec,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        let (n_values, m_values) = match experiment {
            "ppt" => ((2..=4).collect(), vec![]),
            "dichotomic" => (vec![], (1..=6).collect()),
            _ => ((2..=7).collect(), vec![]),
        };
        Self {
            experiment: experiment.to_string(),
            n_values,
            m_values,
            seeds: (1..=5).collect(),
            alpha: std::f64::consts::FRAC_1_SQRT_2,
            k: DEFAULT_K,
            lambda_grid: vec![0.0, 1.0],
            seesaw: SeesawConfig::default(),
            seesaw_max_m: 3,
            samples: 64,
            mode: Completeness::Incomplete,
            exec: Exec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::param("seeds must be non-empty"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::param(format!("K must be positive, got {}", self.k)));
        }
        match self.experiment.as_str() {
            "scaling" => {
                if self.n_values.is_empty() || self.n_values.contains(&0) {
                    return Err(Error::param("scaling needs n values ≥ 1"));
                }
            }
            "ppt" => {
                if self.n_values.is_empty() || self.n_values.iter().any(|n| !(2..=4).contains(n)) {
                    return Err(Error::param("ppt supports n ∈ {2, 3, 4}"));
                }
                if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|g| !(0.0..=1.0).contains(g)) {
                    return Err(Error::param("lambda grid entries are fractions of λ* in [0, 1]"));
                }
            }
            "dichotomic" => {
                if self.m_values.is_empty() || self.m_values.iter().any(|m| !(1..=6).contains(m)) {
                    return Err(Error::param("dichotomic supports m ∈ 1..=6"));
                }
            }
            other => return Err(Error::param(format!("unknown experiment `{other}`"))),
        }
        Ok(())
    }
}
