//! Explicit functionals, measurements and states.

mod pauli;
mod signs;
mod states;
mod steering;

pub use pauli::*;
pub use signs::*;
pub use states::*;
pub use steering::*;
