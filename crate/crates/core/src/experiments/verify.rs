//! The verification suite behind `steering verify` and the acceptance tests.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{run_ppt, run_scaling, ExperimentConfig, Tolerances};
use crate::bounds::{
    lhs_bound_dichotomic, quantum_value, quantum_value_dichotomic, quantum_value_elements, see_saw_dichotomic,
    see_saw_restarts, BoundsReport, Functional, SeesawConfig, SeesawInit,
};
use crate::constructions::{
    bernoulli_signs, build_dichotomic_functional, build_isotropic_like, build_paper_povms, build_pauli_family,
    build_random_functional, build_rho_lambda, build_werner_like, paper_povm_elements, ppt_threshold,
    pt_min_eigenvalue, DiagonalSymmetricParams, IsotropicLikeParams, SchmidtState, WernerLikeParams, DEFAULT_K,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, random::random_density, random::random_hermitian, sum_hermitian, HermitianMatrix};
use crate::model::{lv_ratio, BipartiteState, Completeness, DichotomicFunctional, Povm};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub criterion: usize,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
    pub budget_s: f64,
    pub elapsed_ms: u64,
}

struct Outcome {
    passed: bool,
    summary: String,
    details: Value,
}

type CheckFn = fn(&Tolerances, Exec) -> Result<Outcome>;

/// `(id, criterion number, runtime budget in seconds, check)`.
const CHECKS: [(&str, usize, f64, CheckFn); 10] = [
    ("eq6-identity", 1, 10.0, eq6_identity),
    ("povm-validity", 2, 10.0, povm_validity),
    ("dichotomic-pauli", 3, 60.0, dichotomic_instance),
    ("tensor-lambda-max", 4, 60.0, tensor_lambda_max),
    ("ppt-threshold", 5, 30.0, ppt_threshold_oracle),
    ("projective-norm", 6, 60.0, projective_norm),
    ("positive-collapse", 7, 120.0, positive_collapse),
    ("scaling-trend", 8, 300.0, scaling_trend),
    ("ppt-boundedness", 9, 180.0, ppt_boundedness),
    ("seesaw-soundness", 10, 60.0, seesaw_soundness),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs one check. A check passes only if its measured values meet their
/// tolerances and it finishes within its runtime budget.
pub fn run_check(id: &str, tol: &Tolerances, exec: Exec) -> Result<CheckResult> {
    let &(id, criterion, budget_s, check) = CHECKS
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::param(format!("unknown check `{id}`; known: {}", check_ids().join(", "))))?;
    let start = Instant::now();
    let outcome = check(tol, exec);
    let elapsed = start.elapsed();
    let elapsed_ms = elapsed.as_millis() as u64;
    let in_budget = elapsed.as_secs_f64() <= budget_s;
    Ok(match outcome {
        Ok(o) => CheckResult {
            id,
            criterion,
            passed: o.passed && in_budget,
            summary: if in_budget {
                o.summary
            } else {
                format!("{} [over budget: {:.1} s > {budget_s} s]", o.summary, elapsed.as_secs_f64())
            },
            details: o.details,
            budget_s,
            elapsed_ms,
        },
        Err(e) => CheckResult {
            id,
            criterion,
            passed: false,
            summary: format!("error: {e}"),
            details: Value::Null,
            budget_s,
            elapsed_ms,
        },
    })
}

/// Runs `only` (or every check) in criterion order.
pub fn run_checks(only: Option<&[String]>, tol: &Tolerances, exec: Exec) -> Result<Vec<CheckResult>> {
    let ids: Vec<&str> = match only {
        Some(list) => {
            for id in list {
                if !check_ids().contains(&id.as_str()) {
                    return Err(Error::param(format!("unknown check `{id}`; known: {}", check_ids().join(", "))));
                }
            }
            check_ids().into_iter().filter(|id| list.iter().any(|l| l == id)).collect()
        }
        None => check_ids(),
    };
    ids.into_iter().map(|id| run_check(id, tol, exec)).collect()
}

/// One line per check: `PASS|FAIL <id> (<elapsed>): <summary>`.
pub fn format_line(r: &CheckResult) -> String {
    format!(
        "{} [{}] {} ({:.2} s): {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.criterion,
        r.id,
        r.elapsed_ms as f64 / 1000.0,
        r.summary
    )
}

fn eq6_closed_form(alpha: &SchmidtState, k: f64) -> f64 {
    let a = alpha.coefficients();
    a[0] * a[1..].iter().sum::<f64>() / k
}

fn eq6_identity(tol: &Tolerances, _exec: Exec) -> Result<Outcome> {
    let k = DEFAULT_K;
    let mut max_err = 0.0f64;
    let mut max_err_validated = 0.0f64;
    let mut validated = 0;
    let mut total = 0;
    for n in 2..=12 {
        let alpha = SchmidtState::paper_family(n, std::f64::consts::FRAC_1_SQRT_2)?;
        let state = alpha.to_state();
        let want = eq6_closed_form(&alpha, k);
        for seed in 1..=5 {
            let signs = bernoulli_signs(n, seed)?;
            let f = build_random_functional(n, &signs)?;
            // The pairing is defined for the measurement operators whether or not
            // the last element is positive; both forms are reported.
            let raw = quantum_value_elements(&f, &paper_povm_elements(n, &signs, k)?, &state)?;
            max_err = max_err.max((raw - want).abs());
            total += 1;
            if let Ok(povm) = build_paper_povms(n, &signs, k) {
                validated += 1;
                let v = quantum_value(&f, &povm, &state)?;
                max_err_validated = max_err_validated.max((v - want).abs());
            }
        }
    }
    Ok(Outcome {
        passed: max_err <= tol.eq6,
        summary: format!(
            "max |pair - α₁Σα_k/K| = {max_err:.3e} (tol {:e}) over {total} (n, seed); \
             {validated}/{total} draws have a valid POVM at K = 4 (their max error {max_err_validated:.3e})",
            tol.eq6
        ),
        details: json!({"max_error": max_err, "validated": validated, "total": total,
                        "max_error_validated": max_err_validated}),
    })
}

fn povm_validity(tol: &Tolerances, _exec: Exec) -> Result<Outcome> {
    let k = DEFAULT_K;
    let mut failures = Vec::new();
    let mut max_sum_dev = 0.0f64;
    let mut total = 0;
    for n in 1..=12 {
        let id = HermitianMatrix::identity(n + 1);
        for seed in 1..=10 {
            total += 1;
            let signs = bernoulli_signs(n, seed)?;
            let elements = paper_povm_elements(n, &signs, k)?;
            let mut min_eig = f64::INFINITY;
            for row in &elements {
                let s = sum_hermitian(n + 1, row);
                max_sum_dev = max_sum_dev.max(s.as_matrix().max_abs_diff(id.as_matrix()));
                for e in row {
                    min_eig = min_eig.min(linalg::min_eigenvalue(e)?);
                }
            }
            let complete = Povm::with_policy(
                elements,
                Completeness::Complete,
                &crate::NumericPolicy {
                    psd: tol.psd,
                    ..Default::default()
                },
            );
            if min_eig < -tol.psd || complete.is_err() {
                failures.push(json!({"n": n, "seed": seed, "min_eigenvalue": min_eig}));
            }
        }
    }
    let fail_ns: Vec<u64> = failures.iter().filter_map(|f| f["n"].as_u64()).collect();
    Ok(Outcome {
        passed: failures.is_empty() && max_sum_dev == 0.0,
        summary: format!(
            "{}/{total} (n, seed) draws fail PSD validation at K = 4 (n values {:?}); max |Σ_a E - 1| = {max_sum_dev:e}",
            failures.len(),
            fail_ns
        ),
        details: json!({"failures": failures, "total": total, "max_sum_deviation": max_sum_dev}),
    })
}

fn dichotomic_instance(tol: &Tolerances, exec: Exec) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut passed = true;
    for m in 2..=6 {
        let fam = build_pauli_family(m)?;
        let dim = fam.dim();
        let f = build_dichotomic_functional(m, dim)?;
        let bc = lhs_bound_dichotomic(&f, exec)?.value;
        let norms = exec.map_range(1 << m, |s| {
            let mut h = HermitianMatrix::zeros(dim);
            for x in 0..m {
                h.add_scaled(f.get(x), if (s >> x) & 1 == 1 { -1.0 } else { 1.0 });
            }
            linalg::operator_norm(&h)
        });
        let pattern_dev = norms.into_iter().collect::<Result<Vec<_>>>()?.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        let obs = crate::model::DichotomicObservable::new(fam.matrices())?;
        let witness = quantum_value_dichotomic(&f, &obs, &BipartiteState::pure(fam.witness(), dim, dim)?)?;
        let root = (m as f64).sqrt();
        let lv = lv_ratio(witness, bc)?;
        let ok = (bc - 1.0).abs() <= tol.dichotomic_bc
            && pattern_dev <= tol.dichotomic_bc
            && (witness - root).abs() <= tol.witness
            && (lv - root).abs() <= tol.witness;
        passed &= ok;
        rows.push(json!({"m": m, "b_c": bc, "max_pattern_deviation": pattern_dev, "witness": witness, "lv": lv}));
    }
    let worst_bc = rows.iter().map(|r| (r["b_c"].as_f64().unwrap() - 1.0).abs()).fold(0.0, f64::max);
    let worst_w = rows
        .iter()
        .map(|r| (r["witness"].as_f64().unwrap() - (r["m"].as_f64().unwrap()).sqrt()).abs())
        .fold(0.0, f64::max);
    Ok(Outcome {
        passed,
        summary: format!("m = 2..6: max |B_C - 1| = {worst_bc:.3e}, max |witness - √m| = {worst_w:.3e}, LV = √m"),
        details: json!({"rows": rows}),
    })
}

fn tensor_lambda_max(tol: &Tolerances, _exec: Exec) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut passed = true;
    for m in 2..=5 {
        let fam = build_pauli_family(m)?;
        let t = fam.tensor_sum();
        let lmax = linalg::spectrum_by_blocks(&t)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
        let z = fam.witness();
        let rayleigh = linalg::inner(&z, &t.as_matrix().apply(&z)).re;
        let ok = (lmax - m as f64).abs() <= tol.lambda_max && (rayleigh - m as f64).abs() <= tol.lambda_max;
        passed &= ok;
        rows.push(json!({"m": m, "lambda_max": lmax, "witness_rayleigh": rayleigh}));
    }
    let worst = rows
        .iter()
        .map(|r| (r["lambda_max"].as_f64().unwrap() - r["m"].as_f64().unwrap()).abs())
        .fold(0.0, f64::max);
    Ok(Outcome {
        passed,
        summary: format!("m = 2..5: max |λ_max - m| = {worst:.3e}; witness attains m"),
        details: json!({"rows": rows}),
    })
}

/// Smallest `λ` where the partial transpose of `ρ_λ` loses positivity, by bisection.
pub fn bisect_ppt_threshold(alpha: &SchmidtState, width: f64) -> Result<f64> {
    let d = alpha.dim();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if pt_min_eigenvalue(&build_rho_lambda(alpha, mid)?, d, d)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ppt_threshold_oracle(tol: &Tolerances, _exec: Exec) -> Result<Outcome> {
    let mut max_err = 0.0f64;
    let mut max_uniform = 0.0f64;
    for n in 2..=4usize {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
        for _ in 0..10 {
            let alpha = SchmidtState::random(n, &mut rng)?;
            let t = ppt_threshold(&alpha)?;
            let b = bisect_ppt_threshold(&alpha, 1e-10)?;
            max_err = max_err.max((t - b).abs());
        }
        let u = ppt_threshold(&SchmidtState::uniform(n)?)?;
        max_uniform = max_uniform.max((u - 1.0 / (1.0 + n as f64)).abs());
    }
    Ok(Outcome {
        passed: max_err <= tol.ppt_bisection && max_uniform <= tol.ppt_uniform,
        summary: format!(
            "n = 2..4, 10 random α each: max |closed form - bisection| = {max_err:.3e}; \
             uniform |λ* - 1/(1+n)| = {max_uniform:e}"
        ),
        details: json!({"max_error": max_err, "max_uniform_error": max_uniform}),
    })
}

fn projective_norm(tol: &Tolerances, _exec: Exec) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let mut max_bound = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..1000 {
        let n = 2 + i % 3;
        for werner in [false, true] {
            let raw = DiagonalSymmetricParams::random(n, &mut rng);
            let built = DiagonalSymmetricParams::new(raw.coherence, raw.c).and_then(|p| {
                if werner {
                    let p = WernerLikeParams(p);
                    build_werner_like(&p).map(|_| p.projective_norm_upper_bound())
                } else {
                    let p = IsotropicLikeParams(p);
                    build_isotropic_like(&p).map(|_| p.projective_norm_upper_bound())
                }
            });
            match built {
                Ok(b) => {
                    max_bound = max_bound.max(b);
                    if b > 2.0 + tol.projective {
                        failures.push(format!("sample {i} ({}) bound {b}", if werner { "werner" } else { "isotropic" }));
                    }
                }
                Err(e) => failures.push(format!("sample {i}: {e}")),
            }
        }
    }
    Ok(Outcome {
        passed: failures.is_empty(),
        summary: format!(
            "1000 isotropic-like + 1000 Werner-like states: {} failures, max bound {max_bound:.6}",
            failures.len()
        ),
        details: json!({"max_bound": max_bound, "failures": failures}),
    })
}

fn positive_collapse(tol: &Tolerances, exec: Exec) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let instances: Vec<DichotomicFunctional> = (0..100)
        .map(|_| {
            let n = rng.random_range(1..=6);
            let d = rng.random_range(1..=8);
            let fs = (0..n).map(|_| random_density(d, &mut rng).scale(rng.random_range(0.1..1.0))).collect();
            DichotomicFunctional::new(fs)
        })
        .collect::<Result<_>>()?;
    let cfg = SeesawConfig {
        restarts: 3,
        ..Default::default()
    };
    let results = exec.map(&instances, |f| -> Result<(f64, f64, f64)> {
        let bc = lhs_bound_dichotomic(f, Exec::Sequential)?.value;
        let norm = linalg::operator_norm(&sum_hermitian(f.d(), f.entries()))?;
        let ss = see_saw_restarts(f, f.d(), &cfg, None, Exec::Sequential)?.best.value;
        Ok((bc, norm, ss))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let max_gap = results.iter().map(|(b, n, _)| (b - n).abs()).fold(0.0, f64::max);
    let max_excess = results.iter().map(|(b, _, s)| s - b).fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome {
        passed: max_gap <= tol.collapse && max_excess <= tol.seesaw_slack,
        summary: format!(
            "100 positive families: max |B_C - ‖ΣF_x‖| = {max_gap:.3e}, max (see-saw - B_C) = {max_excess:.3e}"
        ),
        details: json!({"max_gap": max_gap, "max_seesaw_excess": max_excess}),
    })
}

/// Median candidate LV is nondecreasing, and stays above 1 once it exceeds 1.
pub fn trend_holds(medians: &[f64]) -> (bool, bool) {
    let nondecreasing = medians.windows(2).all(|w| w[1] >= w[0]);
    let crossing = match medians.iter().position(|&v| v > 1.0) {
        Some(i) => medians[i..].iter().all(|&v| v > 1.0),
        None => true,
    };
    (nondecreasing, crossing)
}

fn scaling_trend(_tol: &Tolerances, exec: Exec) -> Result<Outcome> {
    let mut cfg = ExperimentConfig::new("scaling");
    cfg.n_values = (2..=7).collect();
    cfg.seeds = (1..=5).collect();
    cfg.samples = 0;
    cfg.exec = exec;
    let rep = run_scaling(&cfg)?;
    let medians: Vec<f64> = rep.summary.iter().map(|s| s.median_lv_candidate).collect();
    let (nondecreasing, crossing) = trend_holds(&medians);
    let escalated = rep.rows.iter().filter(|r| r.k_used != cfg.k).count();
    let shown: Vec<String> = rep.summary.iter().map(|s| format!("{}:{:.4}", s.n, s.median_lv_candidate)).collect();
    Ok(Outcome {
        passed: nondecreasing && crossing && rep.skipped.is_empty(),
        summary: format!(
            "median LV by n = [{}]; nondecreasing = {nondecreasing}, crossing rule = {crossing}; \
             K raised on {escalated}/{} rows",
            shown.join(", "),
            rep.rows.len()
        ),
        details: json!({"summary": rep.summary, "rows": rep.rows, "skipped": rep.skipped}),
    })
}

fn ppt_boundedness(tol: &Tolerances, exec: Exec) -> Result<Outcome> {
    let mut cfg = ExperimentConfig::new("ppt");
    cfg.samples = 200;
    cfg.exec = exec;
    let rep = run_ppt(&cfg)?;
    let all_within = rep.rows.iter().all(|r| r.within_cap);
    let zero_ok = rep.rows.iter().filter(|r| r.lambda == 0.0).all(|r| r.ratio <= 1.0 + 1e-6);
    let medians: Vec<f64> = rep.summary.iter().filter_map(|s| s.median_ratio_at_threshold).collect();
    let growth_ok = match medians.first() {
        Some(&base) => medians.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) <= tol.ppt_growth * base,
        None => false,
    };
    let max_over_cap = rep.summary.iter().map(|s| s.max_ratio_over_cap).fold(0.0, f64::max);
    let shown: Vec<String> = rep.summary.iter().map(|s| format!("{}:{:.4}", s.n, s.median_ratio_at_threshold.unwrap_or(f64::NAN))).collect();
    Ok(Outcome {
        passed: all_within && zero_ok && growth_ok && rep.skipped.is_empty(),
        summary: format!(
            "median ratio at λ* by n = [{}]; max ratio/cap = {max_over_cap:.4}; rows within cap = {all_within}; \
             λ=0 rows ≤ 1 = {zero_ok}; growth ≤ {} × n=2 value = {growth_ok}",
            shown.join(", "),
            tol.ppt_growth
        ),
        details: json!({"summary": rep.summary, "rows": rep.rows}),
    })
}

fn seesaw_soundness(tol: &Tolerances, exec: Exec) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let instances: Vec<(DichotomicFunctional, usize)> = (0..50)
        .map(|_| {
            let n = rng.random_range(1..=4);
            let d = rng.random_range(2..=4);
            let da = rng.random_range(2..=4);
            DichotomicFunctional::new((0..n).map(|_| random_hermitian(d, &mut rng)).collect()).map(|f| (f, da))
        })
        .collect::<Result<_>>()?;
    let seeds: Vec<usize> = (0..instances.len()).collect();
    let results = exec.map(&seeds, |&i| -> Result<(f64, f64)> {
        let (f, da) = &instances[i];
        let run = see_saw_dichotomic(f, *da, &SeesawInit::Random { seed: i as u64, stream: 0 }, 200, 1e-12)?;
        let worst_drop = run.history.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
        let state = BipartiteState::pure(run.state.clone(), *da, f.d())?;
        let v = quantum_value_dichotomic(f, &run.observables, &state)?;
        let report = BoundsReport::dichotomic(&lhs_bound_dichotomic(f, Exec::Sequential)?, &run, f.d(), "see-saw")?;
        report.verify_witness(&Functional::Dichotomic(f))?;
        Ok((worst_drop, (v - run.value).abs()))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let worst_drop = results.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_reeval = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Outcome {
        passed: worst_drop <= tol.monotone && worst_reeval <= tol.reeval,
        summary: format!(
            "50 random instances: largest decrease between half-steps {worst_drop:.3e}, \
             max witness re-evaluation error {worst_reeval:.3e}"
        ),
        details: json!({"worst_drop": worst_drop, "worst_reeval": worst_reeval}),
    })
}
