//! Assemblages, steering functionals, measurements and LHS models.

mod assemblage;
mod functional;
mod lhs;
mod measurement;
mod state;

pub use assemblage::Assemblage;
pub use functional::{DichotomicFunctional, SteeringFunctional};
pub use lhs::{LhsModel, LhsStrategy};
pub use measurement::{Completeness, DichotomicObservable, Povm};
pub use state::BipartiteState;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::policy::NumericPolicy;

/// `⟨F, σ⟩ = Σ_{x,a} Tr(F_x^a σ_x^a)`.
pub fn pair(f: &SteeringFunctional, sigma: &Assemblage) -> Result<f64> {
    if (f.n(), f.m(), f.d()) != (sigma.n(), sigma.m(), sigma.d()) {
        return Err(Error::dim(format!(
            "functional (n, m, d) = ({}, {}, {}) vs assemblage ({}, {}, {})",
            f.n(),
            f.m(),
            f.d(),
            sigma.n(),
            sigma.m(),
            sigma.d()
        )));
    }
    let mut acc = crate::linalg::ZERO;
    for (x, a, fxa) in f.entries() {
        acc += fxa.as_matrix().trace_product(sigma.get(x, a).as_matrix());
    }
    let tol = NumericPolicy::DEFAULT.comparison * (1.0 + acc.re.abs());
    if acc.im.abs() > tol {
        return Err(Error::SelfCheck(format!("pairing has imaginary part {:e}", acc.im)));
    }
    Ok(acc.re)
}

/// `Σ_x Tr(F_x σ_x)` for dichotomic conditional states.
pub fn pair_dichotomic(f: &DichotomicFunctional, sigma: &[HermitianMatrix]) -> Result<f64> {
    if sigma.len() != f.n() || sigma.iter().any(|s| s.dim() != f.d()) {
        return Err(Error::dim("dichotomic functional and conditional states differ in shape"));
    }
    Ok(f.entries().iter().zip(sigma).map(|(fx, sx)| fx.trace_product(sx)).sum())
}

/// `σ_x^a = Tr_A((E_x^a ⊗ 1) ρ)`.
pub fn realize_assemblage(povm: &Povm, state: &BipartiteState) -> Result<Assemblage> {
    if povm.dim() != state.dim_a() {
        return Err(Error::dim(format!(
            "POVM acts on dim {}, state has dim_a = {}",
            povm.dim(),
            state.dim_a()
        )));
    }
    let sigma = povm
        .elements()
        .iter()
        .map(|setting| setting.iter().map(|e| state.conditional_state(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Assemblage::new(sigma, povm.mode())
}

/// Binary assemblage from `E_x^{±} = (1 ± E_x)/2`, outcome order `(+1, -1)`.
pub fn realize_dichotomic_assemblage(obs: &DichotomicObservable, state: &BipartiteState) -> Result<Assemblage> {
    realize_assemblage(&obs.to_binary_povm()?, state)
}

/// `σ_x = Tr_A(ρ(E_x ⊗ 1))`.
pub fn dichotomic_conditional_states(obs: &DichotomicObservable, state: &BipartiteState) -> Result<Vec<HermitianMatrix>> {
    obs.observables().iter().map(|e| state.conditional_state(e)).collect()
}

/// `B_Q / B_C`.
pub fn lv_ratio(b_q: f64, b_c: f64) -> Result<f64> {
    if b_c <= NumericPolicy::DEFAULT.comparison {
        return Err(Error::DegenerateDenominator(b_c));
    }
    Ok(b_q / b_c)
}
