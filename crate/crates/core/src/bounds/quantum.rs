//! Quantum values of explicit witnesses and sampled lower bounds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::SchmidtState;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, random::haar_unitary, ComplexMatrix, HermitianMatrix, C64};
use crate::model::{
    pair, pair_dichotomic, realize_assemblage, BipartiteState, Completeness, DichotomicFunctional,
    DichotomicObservable, Povm, SteeringFunctional,
};
use crate::policy::NumericPolicy;

fn self_check(a: f64, b: f64, what: &str) -> Result<()> {
    let tol = NumericPolicy::DEFAULT.comparison * (1.0 + a.abs().max(b.abs()));
    if (a - b).abs() > tol {
        return Err(Error::SelfCheck(format!("{what}: assemblage route {a} vs tensor route {b}")));
    }
    Ok(())
}

fn check_shapes(f: &SteeringFunctional, elements: &[Vec<HermitianMatrix>], state: &BipartiteState) -> Result<()> {
    if elements.len() != f.n() || elements.iter().any(|r| r.len() != f.m()) {
        return Err(Error::dim(format!(
            "measurement has {} settings, functional expects {} settings × {} outcomes",
            elements.len(),
            f.n(),
            f.m()
        )));
    }
    if state.dim_b() != f.d() {
        return Err(Error::dim(format!("state has dim_b = {}, functional has d = {}", state.dim_b(), f.d())));
    }
    Ok(())
}

/// `Σ_{x,a} Tr((E_x^a ⊗ F_x^a) ρ)` for measurement operators that are not validated
/// as a POVM, computed through conditional states and checked against the direct
/// tensor contraction.
pub fn quantum_value_elements(
    f: &SteeringFunctional,
    elements: &[Vec<HermitianMatrix>],
    state: &BipartiteState,
) -> Result<f64> {
    check_shapes(f, elements, state)?;
    let mut via_states = 0.0;
    let mut direct = 0.0;
    for (x, a, fxa) in f.entries() {
        let e = &elements[x][a];
        via_states += fxa.trace_product(&state.conditional_state(e)?);
        direct += state.expectation(e, fxa)?;
    }
    self_check(via_states, direct, "quantum value")?;
    Ok(via_states)
}

/// `⟨F, σ⟩` for the assemblage realized by `povm` on `state`, cross-checked
/// against `Σ Tr((E ⊗ F) ρ)`.
pub fn quantum_value(f: &SteeringFunctional, povm: &Povm, state: &BipartiteState) -> Result<f64> {
    check_shapes(f, povm.elements(), state)?;
    let via_assemblage = pair(f, &realize_assemblage(povm, state)?)?;
    let mut direct = 0.0;
    for (x, a, fxa) in f.entries() {
        direct += state.expectation(povm.get(x, a), fxa)?;
    }
    self_check(via_assemblage, direct, "quantum value")?;
    Ok(via_assemblage)
}

/// `Σ_x Tr((E_x ⊗ F_x) ρ)`, cross-checked through conditional states.
pub fn quantum_value_dichotomic(
    f: &DichotomicFunctional,
    obs: &DichotomicObservable,
    state: &BipartiteState,
) -> Result<f64> {
    if obs.n() != f.n() || state.dim_b() != f.d() {
        return Err(Error::dim("observables, functional and state differ in shape"));
    }
    let states = obs
        .observables()
        .iter()
        .map(|e| state.conditional_state(e))
        .collect::<Result<Vec<_>>>()?;
    let via_states = pair_dichotomic(f, &states)?;
    let mut direct = 0.0;
    for (e, fx) in obs.observables().iter().zip(f.entries()) {
        direct += state.expectation(e, fx)?;
    }
    self_check(via_states, direct, "dichotomic quantum value")?;
    Ok(via_states)
}

/// A quantum lower bound together with the measurement that attains it.
#[derive(Debug, Clone)]
pub struct SampledBound {
    /// `|⟨F, σ⟩|` of the witness.
    pub value: f64,
    pub signed_value: f64,
    pub povm: Povm,
    pub source: WitnessSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessSource {
    Injected { index: usize },
    Sampled { index: usize },
}

/// Best of `samples` random projective measurements plus the `injected` POVMs.
///
/// Sample `s` draws one Haar unitary per setting from the ChaCha8 stream `s` of
/// `seed`, then assigns each basis vector `u` to the outcome maximizing (or, for
/// the negated objective, minimizing) `⟨u|G_x^a|u⟩` with `G_x^a = Tr_B((1 ⊗ F_x^a) ρ)`.
pub fn quantum_lower_bound_sampling(
    f: &SteeringFunctional,
    state: &BipartiteState,
    samples: usize,
    seed: u64,
    injected: &[Povm],
    exec: Exec,
) -> Result<SampledBound> {
    if state.dim_b() != f.d() {
        return Err(Error::dim(format!("state has dim_b = {}, functional has d = {}", state.dim_b(), f.d())));
    }
    let dim = state.dim_a();
    let g: Vec<Vec<HermitianMatrix>> = (0..f.n())
        .map(|x| f.setting(x).iter().map(|fxa| state.effective_operator(fxa)).collect())
        .collect::<Result<_>>()?;

    let mut best: Option<SampledBound> = None;
    let mut consider = |cand: SampledBound| {
        if best.as_ref().is_none_or(|b| cand.value > b.value) {
            best = Some(cand);
        }
    };
    for (index, povm) in injected.iter().enumerate() {
        let v = quantum_value(f, povm, state)?;
        consider(SampledBound {
            value: v.abs(),
            signed_value: v,
            povm: povm.clone(),
            source: WitnessSource::Injected { index },
        });
    }

    if samples > 0 {
        let (_, index) = exec
            .argmax(samples as u64, |s| Some(sample_measurement(&g, dim, seed, s).0))
            .expect("at least one sample");
        let (_, elements) = sample_measurement(&g, dim, seed, index);
        let povm = Povm::new(elements, Completeness::Complete)?;
        let v = quantum_value(f, &povm, state)?;
        consider(SampledBound {
            value: v.abs(),
            signed_value: v,
            povm,
            source: WitnessSource::Sampled { index: index as usize },
        });
    }
    best.ok_or_else(|| Error::param("sampling needs samples ≥ 1 or an injected POVM"))
}

fn sample_measurement(g: &[Vec<HermitianMatrix>], dim: usize, seed: u64, sample: u64) -> (f64, Vec<Vec<HermitianMatrix>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    let bases: Vec<ComplexMatrix> = g.iter().map(|_| haar_unitary(dim, &mut rng)).collect();

    // scores[x][j][a] = ⟨u_j|G_x^a|u_j⟩
    let scores: Vec<Vec<Vec<f64>>> = g
        .iter()
        .zip(&bases)
        .map(|(gx, u)| {
            (0..dim)
                .map(|j| {
                    let col: Vec<C64> = (0..dim).map(|r| u[(r, j)]).collect();
                    gx.iter().map(|ga| linalg::inner(&col, &ga.as_matrix().apply(&col)).re).collect()
                })
                .collect()
        })
        .collect();
    let pick = |row: &[f64], maximize: bool| -> usize {
        let mut k = 0;
        for (a, &v) in row.iter().enumerate() {
            if (maximize && v > row[k]) || (!maximize && v < row[k]) {
                k = a;
            }
        }
        k
    };
    let total = |maximize: bool| -> f64 {
        scores.iter().flatten().map(|row| row[pick(row, maximize)]).sum()
    };
    let (hi, lo) = (total(true), total(false));
    let maximize = hi >= -lo;
    let value = if maximize { hi } else { -lo };

    let elements = scores
        .iter()
        .zip(&bases)
        .map(|(sx, u)| {
            let m = sx.first().map_or(0, Vec::len);
            let mut row = vec![HermitianMatrix::zeros(dim); m];
            for (j, sj) in sx.iter().enumerate() {
                let col: Vec<C64> = (0..dim).map(|r| u[(r, j)]).collect();
                row[pick(sj, maximize)].add_scaled(&HermitianMatrix::projector(&col), 1.0);
            }
            row
        })
        .collect();
    (value, elements)
}

/// Measurement-only lower bound with the state pinned to `|ψ_d⟩ = Σ_i |ii⟩/√d`.
pub fn restricted_max_entangled_value(
    f: &SteeringFunctional,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<SampledBound> {
    let state = SchmidtState::uniform(f.d())?.to_state();
    quantum_lower_bound_sampling(f, &state, samples, seed, &[], exec)
}

/// Optimal dichotomic observables for a fixed state: `E_x = sign(R_x)` with
/// `R_x = Tr_B((1 ⊗ F_x) ρ)`, value `Σ_x ‖R_x‖_1`.
pub fn fixed_state_dichotomic_optimum(
    f: &DichotomicFunctional,
    state: &BipartiteState,
) -> Result<(f64, DichotomicObservable)> {
    let mut value = 0.0;
    let mut obs = Vec::with_capacity(f.n());
    for fx in f.entries() {
        let r = state.effective_operator(fx)?;
        let e = spectral_sign(&r)?;
        value += e.trace_product(&r);
        obs.push(e);
    }
    Ok((value, DichotomicObservable::new(obs)?))
}

/// Spectral sign with `sign(0) = +1`.
pub fn spectral_sign(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(linalg::hermitian_eigen(h)?.map_spectrum(|l| if l >= 0.0 { 1.0 } else { -1.0 }))
}

/// `(1 - λ + λ (Σ_i α_i)²) · B_C`.
pub fn ppt_violation_cap(alpha: &SchmidtState, lambda: f64, b_c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("λ must lie in [0, 1], got {lambda}")));
    }
    Ok((1.0 - lambda + lambda * alpha.sum_squared()) * b_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{bernoulli_signs, build_paper_povms, build_random_functional, SchmidtState};
    use crate::linalg::random::random_density;
    use rand::Rng;

    fn sigma_z() -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn zero_functional_has_zero_value() {
        let f = SteeringFunctional::zeros(2, 2, 2);
        let state = SchmidtState::uniform(2).unwrap().to_state();
        let b = quantum_lower_bound_sampling(&f, &state, 20, 1, &[], Exec::Sequential).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(restricted_max_entangled_value(&f, 5, 2, Exec::Sequential).unwrap().value, 0.0);
    }

    #[test]
    fn injected_paper_povms_give_closed_form() {
        let n = 3;
        let signs = bernoulli_signs(n, 1).unwrap();
        let f = build_random_functional(n, &signs).unwrap();
        let povm = build_paper_povms(n, &signs, 4.0).unwrap();
        let alpha = SchmidtState::paper_family(n, 0.5f64.sqrt()).unwrap();
        let state = alpha.to_state();
        let b = quantum_lower_bound_sampling(&f, &state, 0, 0, &[povm], Exec::Sequential).unwrap();
        let a = alpha.coefficients();
        let want = a[0] * a[1..].iter().sum::<f64>() / 4.0;
        assert!((b.value - want).abs() < 1e-12);
        assert_eq!(b.source, WitnessSource::Injected { index: 0 });
        assert!(quantum_lower_bound_sampling(&f, &state, 0, 0, &[], Exec::Sequential).is_err());
    }

    #[test]
    fn sigma_z_pair_on_bell_state_reaches_one_half() {
        let f = SteeringFunctional::new(vec![vec![sigma_z().scale(0.5), sigma_z().scale(-0.5)]]).unwrap();
        let state = SchmidtState::uniform(2).unwrap().to_state();
        let b = quantum_lower_bound_sampling(&f, &state, 500, 9, &[], Exec::default()).unwrap();
        // Grid oracle over projective measurements: value(θ) = cos θ / 2 ≤ 1/2.
        let grid = (0..=1000).map(|k| (k as f64 * std::f64::consts::PI / 1000.0).cos() / 2.0).fold(0.0, f64::max);
        assert!(b.value <= grid + 1e-12);
        assert!((b.value - 0.5).abs() < 0.02, "{}", b.value);
    }

    #[test]
    fn sampling_is_identical_across_executors() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density(4, &mut rng);
        let state = BipartiteState::mixed(rho, 2, 2).unwrap();
        let f = SteeringFunctional::new(vec![
            vec![linalg::random::random_hermitian(2, &mut rng), linalg::random::random_hermitian(2, &mut rng)];
            2
        ])
        .unwrap();
        let a = quantum_lower_bound_sampling(&f, &state, 64, 3, &[], Exec::Sequential).unwrap();
        let b = quantum_lower_bound_sampling(&f, &state, 64, 3, &[], Exec::Parallel).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.source, b.source);
        assert_eq!(a.povm, b.povm);
    }

    #[test]
    fn dichotomic_witness_value_is_root_m() {
        for m in 1..=4 {
            let fam = crate::constructions::build_pauli_family(m).unwrap();
            let f = crate::constructions::build_dichotomic_functional(m, fam.dim()).unwrap();
            let obs = DichotomicObservable::new(fam.matrices()).unwrap();
            let state = BipartiteState::pure(fam.witness(), fam.dim(), fam.dim()).unwrap();
            let v = quantum_value_dichotomic(&f, &obs, &state).unwrap();
            assert!((v - (m as f64).sqrt()).abs() < 1e-12);
            let (opt, _) = fixed_state_dichotomic_optimum(&f, &state).unwrap();
            assert!((opt - (m as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_state_optimum_dominates_random_observables() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let state = BipartiteState::mixed(random_density(6, &mut rng), 3, 2).unwrap();
            let f = DichotomicFunctional::new(vec![linalg::random::random_hermitian(2, &mut rng); 2]).unwrap();
            let (opt, obs) = fixed_state_dichotomic_optimum(&f, &state).unwrap();
            assert!((quantum_value_dichotomic(&f, &obs, &state).unwrap() - opt).abs() < 1e-12);
            for _ in 0..20 {
                let es: Vec<HermitianMatrix> = (0..2)
                    .map(|_| {
                        let u = haar_unitary(3, &mut rng);
                        let d: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                        let diag = ComplexMatrix::from_fn(3, 3, |i, j| if i == j { C64::new(d[i], 0.0) } else { linalg::ZERO });
                        HermitianMatrix::hermitian_part(&u.matmul(&diag).matmul(&u.adjoint()))
                    })
                    .collect();
                let v = quantum_value_dichotomic(&f, &DichotomicObservable::new(es).unwrap(), &state).unwrap();
                assert!(v <= opt + 1e-12);
            }
        }
    }

    #[test]
    fn cap_examples() {
        let uni = SchmidtState::uniform(3).unwrap();
        assert_eq!(ppt_violation_cap(&uni, 0.0, 0.7).unwrap(), 0.7);
        assert!((ppt_violation_cap(&uni, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-14);
        let t = 1.0 / 4.0;
        let c = ppt_violation_cap(&uni, t, 1.0).unwrap();
        assert!((c - (1.0 + 2.0 / 4.0)).abs() < 1e-14 && c <= 2.0);
        assert!(ppt_violation_cap(&uni, -0.1, 1.0).is_err());
    }
}
