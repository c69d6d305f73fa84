use serde::{Deserialize, Serialize};

/// Every numeric tolerance used by validation and self-checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    /// Max entrywise `|H_ij - conj(H_ji)|` accepted for a Hermitian matrix.
    pub hermiticity: f64,
    /// Minimum eigenvalue accepted for a positive semidefinite operator is `-psd`.
    pub psd: f64,
    /// Relative eigen-residual bound, scaled by `1 + ‖H‖`.
    pub eigen_residual: f64,
    /// Generic comparison tolerance (traces, sums, identities).
    pub comparison: f64,
    /// Jacobi stopping threshold on the off-diagonal Frobenius norm relative to `‖H‖_F`.
    pub jacobi_threshold: f64,
    pub jacobi_max_sweeps: usize,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        hermiticity: 1e-12,
        psd: 1e-10,
        eigen_residual: 1e-9,
        comparison: 1e-10,
        jacobi_threshold: 1e-13,
        jacobi_max_sweeps: 100,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}
