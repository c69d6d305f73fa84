use std::time::Instant;

use serde::Serialize;

use super::{median, timestamp, ExperimentConfig, SkippedRow};
use crate::bounds::{
    lhs_bound_bruteforce, quantum_lower_bound_sampling, quantum_value, restricted_max_entangled_value, BoundsReport,
};
use crate::constructions::{admissible_k, bernoulli_signs, build_paper_povms, build_random_functional, SchmidtState};
use crate::error::Result;
use crate::model::lv_ratio;

/// One `(n, seed)` row. CSV columns are exactly these fields, in order.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub seed: u64,
    /// POVM scale actually used (the configured `K` unless it was too small).
    pub k_used: f64,
    pub b_c: f64,
    pub strategies: u64,
    /// Explicit candidate: rank-one POVMs on the `α`-weighted Schmidt state.
    pub b_q_candidate: f64,
    /// Best of the candidate and the sampled measurements.
    pub b_q_lower: f64,
    /// Sampled measurements with the state pinned to maximal entanglement.
    pub max_entangled_value: Option<f64>,
    pub lv_candidate: f64,
    pub lv: f64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    pub n: usize,
    pub median_lv_candidate: f64,
    pub median_lv: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub experiment: &'static str,
    pub timestamp: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ScalingRow>,
    pub skipped: Vec<SkippedRow>,
    pub summary: Vec<ScalingSummary>,
    pub witnesses: Vec<BoundsReport>,
}

fn scaling_row(n: usize, seed: u64, cfg: &ExperimentConfig) -> Result<(ScalingRow, BoundsReport)> {
    let start = Instant::now();
    let signs = bernoulli_signs(n, seed)?;
    let f = build_random_functional(n, &signs)?;
    let k_used = admissible_k(n, &signs, cfg.k)?;
    let povm = build_paper_povms(n, &signs, k_used)?;
    let state = SchmidtState::paper_family(n, cfg.alpha)?.to_state();
    let candidate = quantum_value(&f, &povm, &state)?;
    let lhs = lhs_bound_bruteforce(&f, cfg.mode, cfg.exec)?;
    let sampled = quantum_lower_bound_sampling(&f, &state, cfg.samples, seed, &[povm], cfg.exec)?;
    let max_ent = if cfg.samples > 0 {
        Some(restricted_max_entangled_value(&f, cfg.samples, seed, cfg.exec)?.value)
    } else {
        None
    };
    let report = BoundsReport::general(&lhs, &sampled, state);
    let row = ScalingRow {
        n,
        seed,
        k_used,
        b_c: lhs.value,
        strategies: lhs.strategies_searched,
        b_q_candidate: candidate.abs(),
        b_q_lower: sampled.value,
        max_entangled_value: max_ent,
        lv_candidate: lv_ratio(candidate.abs(), lhs.value)?,
        lv: lv_ratio(sampled.value, lhs.value)?,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok((row, report))
}

/// Brute-force `B_C` against the explicit candidate (and sampled measurements)
/// for the random rank-one functional, per `(n, seed)`.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let results = cfg.exec.map(&jobs, |&(n, seed)| scaling_row(n, seed, cfg));
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    let mut skipped = Vec::new();
    for (&(n, seed), r) in jobs.iter().zip(results) {
        match r {
            Ok((row, rep)) => {
                rows.push(row);
                witnesses.push(rep);
            }
            Err(e) => skipped.push(SkippedRow {
                n,
                seed,
                reason: e.to_string(),
            }),
        }
    }
    let summary = cfg
        .n_values
        .iter()
        .filter_map(|&n| {
            let of_n: Vec<&ScalingRow> = rows.iter().filter(|r| r.n == n).collect();
            Some(ScalingSummary {
                n,
                median_lv_candidate: median(&of_n.iter().map(|r| r.lv_candidate).collect::<Vec<_>>())?,
                median_lv: median(&of_n.iter().map(|r| r.lv).collect::<Vec<_>>())?,
            })
        })
        .collect();
    Ok(ScalingReport {
        experiment: "scaling",
        timestamp: timestamp(),
        config: cfg.clone(),
        rows,
        skipped,
        summary,
        witnesses,
    })
}
