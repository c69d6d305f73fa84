use serde::Serialize;

use super::lhs::{DichotomicLhsBound, LhsBound};
use super::quantum::{quantum_value, quantum_value_dichotomic, SampledBound, WitnessSource};
use super::seesaw::SeesawRun;
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::model::{
    lv_ratio, BipartiteState, Completeness, DichotomicFunctional, DichotomicObservable, LhsStrategy, Povm,
    SteeringFunctional,
};
use crate::policy::NumericPolicy;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StrategyWitness {
    Outcomes { strategy: LhsStrategy },
    Signs { signs: Vec<i8> },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasurementWitness {
    Povm { povm: Povm },
    Observables { observables: DichotomicObservable },
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumWitness {
    pub measurement: MeasurementWitness,
    pub state: BipartiteState,
    pub description: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub strategies_searched: u64,
    pub fast_path: bool,
    pub seesaw_iterations: Option<usize>,
    pub convergence_residual: Option<f64>,
    /// `B_C` restricted to complete strategies, when computed alongside.
    pub complete_mode_b_c: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub b_c: f64,
    pub b_c_strategy: StrategyWitness,
    pub b_c_hidden_state: HermitianMatrix,
    pub b_c_mode: Completeness,
    pub b_q_lower: f64,
    pub witness: QuantumWitness,
    /// `b_q_lower / b_c`, absent when `b_c` is degenerate.
    pub lv: Option<f64>,
    pub dichotomic: bool,
    pub diagnostics: Diagnostics,
}

fn lv_or_none(b_q: f64, b_c: f64) -> Option<f64> {
    lv_ratio(b_q, b_c).ok()
}

impl BoundsReport {
    pub fn general(lhs: &LhsBound, quantum: &SampledBound, state: BipartiteState) -> Self {
        let source = match quantum.source {
            WitnessSource::Injected { index } => format!("injected measurement {index}"),
            WitnessSource::Sampled { index } => format!("sampled measurement {index}"),
        };
        Self {
            b_c: lhs.value,
            b_c_strategy: StrategyWitness::Outcomes {
                strategy: lhs.strategy.clone(),
            },
            b_c_hidden_state: lhs.hidden_state.clone(),
            b_c_mode: lhs.mode,
            b_q_lower: quantum.value,
            witness: QuantumWitness {
                measurement: MeasurementWitness::Povm {
                    povm: quantum.povm.clone(),
                },
                state,
                description: source,
            },
            lv: lv_or_none(quantum.value, lhs.value),
            dichotomic: false,
            diagnostics: Diagnostics {
                strategies_searched: lhs.strategies_searched,
                fast_path: lhs.fast_path,
                ..Default::default()
            },
        }
    }

    pub fn dichotomic(lhs: &DichotomicLhsBound, run: &SeesawRun, d: usize, description: impl Into<String>) -> Result<Self> {
        let state = BipartiteState::pure(run.state.clone(), run.dim_a, d)?;
        Ok(Self {
            b_c: lhs.value,
            b_c_strategy: StrategyWitness::Signs { signs: lhs.signs.clone() },
            b_c_hidden_state: lhs.hidden_state.clone(),
            b_c_mode: Completeness::Complete,
            b_q_lower: run.value,
            witness: QuantumWitness {
                measurement: MeasurementWitness::Observables {
                    observables: run.observables.clone(),
                },
                state,
                description: description.into(),
            },
            lv: lv_or_none(run.value, lhs.value),
            dichotomic: true,
            diagnostics: Diagnostics {
                strategies_searched: lhs.strategies_searched,
                fast_path: false,
                seesaw_iterations: Some(run.iterations),
                convergence_residual: Some(run.residual),
                complete_mode_b_c: None,
            },
        })
    }

    /// Re-evaluates the stored quantum witness; errors if it disagrees with
    /// `b_q_lower` beyond `1e-10`.
    pub fn verify_witness(&self, f: &Functional<'_>) -> Result<f64> {
        let v = match (&self.witness.measurement, f) {
            (MeasurementWitness::Povm { povm }, Functional::General(f)) => {
                quantum_value(f, povm, &self.witness.state)?.abs()
            }
            (MeasurementWitness::Observables { observables }, Functional::Dichotomic(f)) => {
                quantum_value_dichotomic(f, observables, &self.witness.state)?
            }
            _ => return Err(Error::param("witness kind does not match the functional")),
        };
        if (v - self.b_q_lower).abs() > NumericPolicy::DEFAULT.comparison {
            return Err(Error::SelfCheck(format!(
                "witness re-evaluates to {v}, report says {}",
                self.b_q_lower
            )));
        }
        Ok(v)
    }
}

pub enum Functional<'a> {
    General(&'a SteeringFunctional),
    Dichotomic(&'a DichotomicFunctional),
}
