//! Numerical toolkit for bipartite steering inequalities.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] — dense complex matrices, a cyclic Jacobi Hermitian eigensolver,
//!   Kronecker products, partial traces and partial transposes.
//! * [`model`] — assemblages, steering functionals, measurements, LHS models and
//!   the pairing `⟨F, σ⟩ = Σ Tr(F_x^a σ_x^a)`.
//! * [`constructions`] — explicit functionals, POVMs and states: the random
//!   rank-one construction, Schmidt states, noisy isotropic families, the
//!   PPT families and the anticommuting Pauli-string family.
//! * [`bounds`] — exact LHS bounds by exhaustive search over deterministic
//!   strategies, quantum lower bounds from explicit witnesses, sampling and
//!   see-saw ascent.
//! * [`experiments`] — reproducible scaling, dichotomic and PPT experiments plus
//!   the verification checks run by the `verify` command.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod model;
pub mod policy;

pub use error::{Error, Result};
pub use exec::Exec;
pub use policy::NumericPolicy;
