use std::time::Instant;

use serde::Serialize;

use super::{timestamp, ExperimentConfig};
use crate::bounds::{lhs_bound_dichotomic, quantum_value_dichotomic, see_saw_restarts, BoundsReport, SeesawRun};
use crate::constructions::{build_dichotomic_functional, build_pauli_family};
use crate::error::Result;
use crate::model::{lv_ratio, BipartiteState, DichotomicObservable};

#[derive(Debug, Clone, Serialize)]
pub struct DichotomicRow {
    pub m: usize,
    pub dim: usize,
    pub b_c: f64,
    /// `Σ_x ⟨z|A_x ⊗ A_x/√m|z⟩` for `z = vec(1)/2^{m/2}`.
    pub witness_value: f64,
    pub seesaw_value: Option<f64>,
    pub seesaw_iterations: Option<usize>,
    pub lv: f64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomicReport {
    pub experiment: &'static str,
    pub timestamp: String,
    pub config: ExperimentConfig,
    pub rows: Vec<DichotomicRow>,
    pub witnesses: Vec<BoundsReport>,
}

fn dichotomic_row(m: usize, cfg: &ExperimentConfig) -> Result<(DichotomicRow, BoundsReport)> {
    let start = Instant::now();
    let fam = build_pauli_family(m)?;
    let dim = fam.dim();
    let f = build_dichotomic_functional(m, dim)?;
    let lhs = lhs_bound_dichotomic(&f, cfg.exec)?;
    let obs = DichotomicObservable::new(fam.matrices())?;
    let witness_state = BipartiteState::pure(fam.witness(), dim, dim)?;
    let witness_value = quantum_value_dichotomic(&f, &obs, &witness_state)?;
    let mut best = SeesawRun {
        value: witness_value,
        observables: obs,
        state: fam.witness(),
        dim_a: dim,
        history: vec![],
        iterations: 0,
        converged: true,
        residual: 0.0,
    };
    let mut description = "anticommuting witness (A_x, vec(1)/2^{m/2})".to_string();
    let (mut seesaw_value, mut seesaw_iterations) = (None, None);
    if m <= cfg.seesaw_max_m {
        let out = see_saw_restarts(&f, dim, &cfg.seesaw, Some(fam.matrices()), cfg.exec)?;
        seesaw_value = Some(out.best.value);
        seesaw_iterations = Some(out.best.iterations);
        if out.best.value > best.value {
            description = format!("see-saw start {}", out.best_start);
            best = out.best;
        }
    }
    let report = BoundsReport::dichotomic(&lhs, &best, dim, description)?;
    let row = DichotomicRow {
        m,
        dim,
        b_c: lhs.value,
        witness_value,
        seesaw_value,
        seesaw_iterations,
        lv: lv_ratio(best.value, lhs.value)?,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok((row, report))
}

/// Anticommuting Pauli-string family: exact `B_C`, the explicit witness and the see-saw, per `m`.
pub fn run_dichotomic(cfg: &ExperimentConfig) -> Result<DichotomicReport> {
    cfg.validate()?;
    let results = cfg
        .m_values
        .iter()
        .map(|&m| dichotomic_row(m, cfg))
        .collect::<Result<Vec<_>>>()?;
    let (rows, witnesses) = results.into_iter().unzip();
    Ok(DichotomicReport {
        experiment: "dichotomic",
        timestamp: timestamp(),
        config: cfg.clone(),
        rows,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_m_rows() {
        let mut cfg = ExperimentConfig::new("dichotomic");
        cfg.m_values = vec![1, 2, 4];
        cfg.seesaw.restarts = 2;
        cfg.seesaw_max_m = 2;
        let rep = run_dichotomic(&cfg).unwrap();
        let r1 = &rep.rows[0];
        assert!((r1.lv - 1.0).abs() < 1e-12);
        let r2 = &rep.rows[1];
        assert!(r2.seesaw_value.unwrap() >= r2.witness_value - 1e-8);
        let r4 = &rep.rows[2];
        assert!((r4.b_c - 1.0).abs() < 1e-10);
        assert!((r4.witness_value - 2.0).abs() < 1e-12);
        assert!((r4.lv - 2.0).abs() < 1e-10);
        assert!(r4.seesaw_value.is_none());
    }
}
