//! LHS bounds, quantum lower bounds and the combined report.

mod lhs;
mod quantum;
mod report;
mod seesaw;

pub use lhs::*;
pub use quantum::*;
pub use report::*;
pub use seesaw::*;
