//! Exact LHS bounds by exhaustive search over deterministic strategies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, HermitianMatrix, C64};
use crate::model::{Completeness, DichotomicFunctional, LhsStrategy, SteeringFunctional};

/// Hard cap on the number of strategies enumerated.
pub const SEARCH_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhsBound {
    pub value: f64,
    pub strategy: LhsStrategy,
    /// `|v⟩⟨v|` for the eigenvector of largest `|λ|` of the selected sum.
    pub hidden_state: HermitianMatrix,
    pub strategies_searched: u64,
    pub mode: Completeness,
    pub fast_path: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomicLhsBound {
    pub value: f64,
    pub signs: Vec<i8>,
    pub hidden_state: HermitianMatrix,
    pub strategies_searched: u64,
}

fn checked_count(radix: u128, n: usize) -> Result<u64> {
    let mut count: u128 = 1;
    for _ in 0..n {
        count = count.saturating_mul(radix);
        if count > SEARCH_LIMIT {
            // Report the true size where it fits, otherwise the saturated value.
            let full = radix.checked_pow(n as u32).unwrap_or(u128::MAX);
            return Err(Error::SearchTooLarge {
                count: full,
                limit: SEARCH_LIMIT,
            });
        }
    }
    Ok(count as u64)
}

/// Decodes strategy `index`: setting `n-1` is the least significant digit and
/// digit `m` (incomplete mode only) is ABSTAIN.
pub fn decode_strategy(index: u64, n: usize, m: usize, mode: Completeness) -> LhsStrategy {
    let radix = match mode {
        Completeness::Complete => m,
        Completeness::Incomplete => m + 1,
    } as u64;
    let mut response = vec![None; n];
    let mut rest = index;
    for x in (0..n).rev() {
        let digit = (rest % radix) as usize;
        rest /= radix;
        response[x] = (digit < m).then_some(digit);
    }
    LhsStrategy { response }
}

fn selected_sum(f: &SteeringFunctional, s: &LhsStrategy) -> HermitianMatrix {
    let mut h = HermitianMatrix::zeros(f.d());
    for (x, a) in s.response.iter().enumerate() {
        if let Some(a) = a {
            h.add_scaled(f.get(x, *a), 1.0);
        }
    }
    h
}

fn dominant_projector(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = linalg::hermitian_eigen(h)?;
    Ok(HermitianMatrix::projector(&eig.vector(eig.dominant_index())))
}

/// `F = c e_r e_r^† + e_r u^† + u e_r^†` for every entry (with `u_r = 0`).
#[derive(Debug, Clone)]
pub struct RankOneStructure {
    pub index: usize,
    /// Per `(x, a)` at `x·m + a`: the corner value `c` and the column `u`.
    pub corners: Vec<f64>,
    pub columns: Vec<Vec<C64>>,
}

impl RankOneStructure {
    /// Detects a common row/column support `r`; `None` if there is none.
    pub fn detect(f: &SteeringFunctional) -> Option<Self> {
        let d = f.d();
        let first = f.entries().find_map(|(_, _, h)| {
            (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .find(|&(i, j)| h[(i, j)] != linalg::ZERO)
        });
        let candidates: Vec<usize> = match first {
            None => vec![0],
            Some((i, j)) if i == j => vec![i],
            Some((i, j)) => vec![i, j],
        };
        candidates.into_iter().find_map(|r| Self::with_index(f, r))
    }

    fn with_index(f: &SteeringFunctional, r: usize) -> Option<Self> {
        let d = f.d();
        let mut corners = Vec::with_capacity(f.n() * f.m());
        let mut columns = Vec::with_capacity(f.n() * f.m());
        for (_, _, h) in f.entries() {
            for i in 0..d {
                for j in 0..d {
                    if i != r && j != r && h[(i, j)] != linalg::ZERO {
                        return None;
                    }
                }
            }
            corners.push(h[(r, r)].re);
            columns.push((0..d).map(|i| if i == r { linalg::ZERO } else { h[(i, r)] }).collect());
        }
        Some(Self {
            index: r,
            corners,
            columns,
        })
    }

    /// `‖c e_r e_r^† + e_r u^† + u e_r^†‖ = (|c| + √(c² + 4‖u‖²)) / 2`.
    pub fn norm(c: f64, u_sq: f64) -> f64 {
        0.5 * (c.abs() + (c * c + 4.0 * u_sq).sqrt())
    }

    fn strategy_norm(&self, m: usize, s: &LhsStrategy, d: usize) -> f64 {
        let mut c = 0.0;
        let mut u = vec![linalg::ZERO; d];
        for (x, a) in s.response.iter().enumerate() {
            if let Some(a) = a {
                let k = x * m + a;
                c += self.corners[k];
                u.iter_mut().zip(&self.columns[k]).for_each(|(ui, vi)| *ui += vi);
            }
        }
        Self::norm(c, u.iter().map(|z| z.norm_sqr()).sum())
    }
}

/// `B_C(F) = max_D ‖Σ_{x: D(x) ≠ ⊥} F_x^{D(x)}‖` over deterministic strategies `D`.
///
/// Complete mode forbids ABSTAIN. As the operator norm is sign-symmetric, this
/// already maximizes `|⟨F, σ⟩|`. Ties keep the lowest strategy index.
pub fn lhs_bound_bruteforce(f: &SteeringFunctional, mode: Completeness, exec: Exec) -> Result<LhsBound> {
    lhs_bound_bruteforce_with(f, mode, exec, true)
}

/// As [`lhs_bound_bruteforce`]; `allow_fast_path = false` forces one eigensolve per strategy.
pub fn lhs_bound_bruteforce_with(
    f: &SteeringFunctional,
    mode: Completeness,
    exec: Exec,
    allow_fast_path: bool,
) -> Result<LhsBound> {
    let (n, m, d) = (f.n(), f.m(), f.d());
    let radix = match mode {
        Completeness::Complete => m,
        Completeness::Incomplete => m + 1,
    };
    let count = checked_count(radix as u128, n)?;
    let fast = if allow_fast_path { RankOneStructure::detect(f) } else { None };

    let best = match &fast {
        Some(r1) => exec.argmax(count, |i| Some(r1.strategy_norm(m, &decode_strategy(i, n, m, mode), d))),
        None => {
            let failure = std::sync::Mutex::new(None);
            let best = exec.argmax(count, |i| {
                match linalg::operator_norm(&selected_sum(f, &decode_strategy(i, n, m, mode))) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        None
                    }
                }
            });
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            best
        }
    };
    let (value, index) = best.ok_or_else(|| Error::param("empty strategy space"))?;
    let strategy = decode_strategy(index, n, m, mode);
    let hidden_state = dominant_projector(&selected_sum(f, &strategy))?;
    Ok(LhsBound {
        value,
        strategy,
        hidden_state,
        strategies_searched: count,
        mode,
        fast_path: fast.is_some(),
    })
}

/// `max_{s ∈ {±1}^n} ‖Σ_x s_x F_x‖`. Zero settings are skipped (their sign is `+1`).
pub fn lhs_bound_dichotomic(f: &DichotomicFunctional, exec: Exec) -> Result<DichotomicLhsBound> {
    let active: Vec<usize> = (0..f.n()).filter(|&x| !f.get(x).is_zero()).collect();
    let count = checked_count(2, active.len())?;
    let signs_of = |i: u64| -> Vec<i8> {
        let mut s = vec![1i8; f.n()];
        let k = active.len();
        for (pos, &x) in active.iter().enumerate() {
            // First active setting is the most significant bit; bit set means -1.
            if (i >> (k - 1 - pos)) & 1 == 1 {
                s[x] = -1;
            }
        }
        s
    };
    let sum_of = |s: &[i8]| {
        let mut h = HermitianMatrix::zeros(f.d());
        for (x, &sx) in s.iter().enumerate() {
            h.add_scaled(f.get(x), f64::from(sx));
        }
        h
    };
    let failure = std::sync::Mutex::new(None);
    let best = exec.argmax(count, |i| match linalg::operator_norm(&sum_of(&signs_of(i))) {
        Ok(v) => Some(v),
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            None
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let (value, index) = best.ok_or_else(|| Error::param("empty strategy space"))?;
    let signs = signs_of(index);
    let hidden_state = dominant_projector(&sum_of(&signs))?;
    Ok(DichotomicLhsBound {
        value,
        signs,
        hidden_state,
        strategies_searched: count,
    })
}
