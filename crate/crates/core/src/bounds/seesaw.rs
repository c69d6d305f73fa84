//! Alternating (see-saw) ascent for dichotomic functionals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::quantum::spectral_sign;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{
    self, effective_operator_pure, expectation_product_pure,
    random::{haar_unitary, random_unit_vector},
    ComplexMatrix, HermitianMatrix, C64,
};
use crate::model::{DichotomicFunctional, DichotomicObservable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeesawConfig {
    pub max_iter: usize,
    /// Stop once a full round improves the value by less than this.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-10,
            restarts: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SeesawInit {
    /// Random `E_x = U diag(±1) U^†` from ChaCha8 stream `stream` of `seed`.
    Random { seed: u64, stream: u64 },
    Observables(Vec<HermitianMatrix>),
}

#[derive(Debug, Clone)]
pub struct SeesawRun {
    /// Final value `Σ_x ⟨ψ|E_x ⊗ F_x|ψ⟩` of the stored witnesses.
    pub value: f64,
    pub observables: DichotomicObservable,
    /// `ψ` on `H_A ⊗ H_B`, index `i·d + j`.
    pub state: Vec<C64>,
    pub dim_a: usize,
    /// Values after every half-step (state, measurement, state, …).
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Improvement of the last full round.
    pub residual: f64,
}

const EIGEN_TOL: f64 = 1e-12;

/// See-saw from `init`: (i) `ψ ←` top eigenvector of `W = Σ_x E_x ⊗ F_x`,
/// (ii) `E_x ← sign(R_x)` with `R_x = Tr_B((1 ⊗ F_x)|ψ⟩⟨ψ|)`.
///
/// The state step is a Lanczos solve warm-started at the previous `ψ`, so each
/// half-step can only increase the value.
pub fn see_saw_dichotomic(
    f: &DichotomicFunctional,
    dim_a: usize,
    init: &SeesawInit,
    max_iter: usize,
    tol: f64,
) -> Result<SeesawRun> {
    if dim_a == 0 {
        return Err(Error::param("dim_a must be positive"));
    }
    let d = f.d();
    let mut rng = match init {
        SeesawInit::Random { seed, stream } => {
            let mut r = ChaCha8Rng::seed_from_u64(*seed);
            r.set_stream(*stream);
            r
        }
        SeesawInit::Observables(_) => ChaCha8Rng::seed_from_u64(0),
    };
    let mut obs: Vec<HermitianMatrix> = match init {
        SeesawInit::Observables(e) => {
            if e.len() != f.n() || e.iter().any(|m| m.dim() != dim_a) {
                return Err(Error::dim("initial observables do not match the functional"));
            }
            e.clone()
        }
        SeesawInit::Random { .. } => (0..f.n()).map(|_| random_observable(dim_a, &mut rng)).collect(),
    };
    let f_t: Vec<ComplexMatrix> = f.entries().iter().map(|h| h.as_matrix().transpose()).collect();
    let mut psi = random_unit_vector(dim_a * d, &mut rng);

    let mut history = Vec::with_capacity(2 * max_iter);
    let mut last = f64::NEG_INFINITY;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let mut dichotomic = DichotomicObservable::new(obs.clone())?;

    while iterations < max_iter {
        // (i) state step
        let apply = |v: &[C64]| -> Vec<C64> {
            let m = ComplexMatrix::from_vec(dim_a, d, v.to_vec()).expect("finite Lanczos vector");
            let mut acc = ComplexMatrix::zeros(dim_a, d);
            for (e, ft) in obs.iter().zip(&f_t) {
                acc.add_scaled(&e.as_matrix().matmul(&m).matmul(ft), linalg::ONE);
            }
            acc.as_slice().to_vec()
        };
        match linalg::top_eigenpair(dim_a * d, apply, &psi, EIGEN_TOL) {
            Ok((_, v)) => psi = v,
            Err(_) if iterations > 0 => break,
            Err(e) => return Err(e),
        }
        let mut v_state = 0.0;
        for (e, fx) in obs.iter().zip(f.entries()) {
            v_state += expectation_product_pure(e, fx, &psi)?;
        }
        history.push(v_state);

        // (ii) measurement step
        let mut v_meas = 0.0;
        for (x, fx) in f.entries().iter().enumerate() {
            let r = effective_operator_pure(fx, &psi, dim_a)?;
            obs[x] = spectral_sign(&r)?;
            v_meas += obs[x].trace_product(&r);
        }
        history.push(v_meas);
        dichotomic = DichotomicObservable::new(obs.clone())?;
        iterations += 1;

        residual = v_meas - last;
        last = v_meas;
        if residual < tol {
            converged = true;
            break;
        }
    }

    let mut value = 0.0;
    for (e, fx) in dichotomic.observables().iter().zip(f.entries()) {
        value += expectation_product_pure(e, fx, &psi)?;
    }
    Ok(SeesawRun {
        value,
        observables: dichotomic,
        state: psi,
        dim_a,
        history,
        iterations,
        converged,
        residual,
    })
}

fn random_observable<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let u = haar_unitary(dim, rng);
    let signs: Vec<f64> = (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let diag = ComplexMatrix::from_fn(dim, dim, |i, j| if i == j { C64::new(signs[i], 0.0) } else { linalg::ZERO });
    HermitianMatrix::hermitian_part(&u.matmul(&diag).matmul(&u.adjoint()))
}

#[derive(Debug, Clone)]
pub struct SeesawOutcome {
    pub best: SeesawRun,
    /// Index of the winning start; `restarts` denotes the injected start.
    pub best_start: usize,
    pub start_values: Vec<f64>,
}

/// `cfg.restarts` random starts (streams `0..restarts` of `cfg.seed`) plus an
/// optional injected start, run in parallel; the best value wins, ties to the
/// lowest start index.
pub fn see_saw_restarts(
    f: &DichotomicFunctional,
    dim_a: usize,
    cfg: &SeesawConfig,
    injected: Option<Vec<HermitianMatrix>>,
    exec: Exec,
) -> Result<SeesawOutcome> {
    let mut inits: Vec<SeesawInit> = (0..cfg.restarts as u64)
        .map(|stream| SeesawInit::Random {
            seed: cfg.seed,
            stream,
        })
        .collect();
    if let Some(obs) = injected {
        inits.push(SeesawInit::Observables(obs));
    }
    if inits.is_empty() {
        return Err(Error::param("see-saw needs at least one start"));
    }
    let runs = exec
        .map(&inits, |init| see_saw_dichotomic(f, dim_a, init, cfg.max_iter, cfg.tol))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let start_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let mut best_start = 0;
    for (i, v) in start_values.iter().enumerate() {
        if *v > start_values[best_start] {
            best_start = i;
        }
    }
    let best = runs.into_iter().nth(best_start).expect("non-empty");
    Ok(SeesawOutcome {
        best,
        best_start,
        start_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{lhs_bound_dichotomic, quantum_value_dichotomic};
    use crate::constructions::{build_dichotomic_functional, build_pauli_family};
    use crate::linalg::random::{random_density, random_hermitian};
    use crate::model::BipartiteState;

    fn monotone(h: &[f64]) -> bool {
        h.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    }

    #[test]
    fn single_sigma_z_converges_to_one() {
        let f = DichotomicFunctional::new(vec![HermitianMatrix::from_real_diagonal(&[1.0, -1.0])]).unwrap();
        for stream in 0..5 {
            let run = see_saw_dichotomic(&f, 2, &SeesawInit::Random { seed: 1, stream }, 200, 1e-12).unwrap();
            assert!((run.value - 1.0).abs() < 1e-9, "{}", run.value);
            assert!(monotone(&run.history));
        }
    }

    #[test]
    fn anticommuting_family_reaches_root_m() {
        for m in 1..=3 {
            let fam = build_pauli_family(m).unwrap();
            let f = build_dichotomic_functional(m, fam.dim()).unwrap();
            let target = (m as f64).sqrt();
            let hits = (0..10)
                .filter(|&stream| {
                    let run = see_saw_dichotomic(&f, fam.dim(), &SeesawInit::Random { seed: 5, stream }, 200, 1e-12).unwrap();
                    assert!(monotone(&run.history));
                    run.value >= target - 1e-8
                })
                .count();
            assert!(hits >= 8, "m={m}: {hits}/10");
            let out = see_saw_restarts(
                &f,
                fam.dim(),
                &SeesawConfig { restarts: 2, ..Default::default() },
                Some(fam.matrices()),
                Exec::default(),
            )
            .unwrap();
            assert!(out.best.value >= target - 1e-8);
            assert_eq!(out.start_values.len(), 3);
        }
    }

    #[test]
    fn witnesses_reevaluate_and_history_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..10 {
            let (n, d, da) = (1 + k % 3, 2 + k % 2, 2 + (k / 2) % 2);
            let f = DichotomicFunctional::new((0..n).map(|_| random_hermitian(d, &mut rng)).collect()).unwrap();
            let run = see_saw_dichotomic(&f, da, &SeesawInit::Random { seed: k as u64, stream: 0 }, 100, 1e-12).unwrap();
            assert!(monotone(&run.history), "{:?}", run.history);
            let state = BipartiteState::pure(run.state.clone(), da, d).unwrap();
            let v = quantum_value_dichotomic(&f, &run.observables, &state).unwrap();
            assert!((v - run.value).abs() < 1e-10);
        }
    }

    #[test]
    fn positive_family_stays_below_lhs_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let f = DichotomicFunctional::new((0..3).map(|_| random_density(3, &mut rng)).collect()).unwrap();
            let bc = lhs_bound_dichotomic(&f, Exec::Sequential).unwrap().value;
            let out = see_saw_restarts(&f, 3, &SeesawConfig { restarts: 3, ..Default::default() }, None, Exec::Sequential).unwrap();
            assert!(out.best.value <= bc + 1e-8);
        }
    }
}
