use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// Steering functional `{F_x^a}` with `n` settings, `m` outcomes on `H_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringFunctional {
    n: usize,
    m: usize,
    d: usize,
    entries: Vec<HermitianMatrix>,
}

impl SteeringFunctional {
    /// `entries[x][a] = F_x^a`.
    pub fn new(entries: Vec<Vec<HermitianMatrix>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::dim("functional needs at least one setting"));
        }
        let m = entries[0].len();
        if m == 0 {
            return Err(Error::dim("functional needs at least one outcome"));
        }
        let d = entries[0][0].dim();
        for (x, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::dim(format!("setting {x} has {} outcomes, expected {m}", row.len())));
            }
            if let Some(a) = row.iter().position(|f| f.dim() != d) {
                return Err(Error::dim(format!("F_{x}^{a} has dim {}, expected {d}", row[a].dim())));
            }
        }
        Ok(Self {
            n,
            m,
            d,
            entries: entries.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(n: usize, m: usize, d: usize) -> Self {
        Self {
            n,
            m,
            d,
            entries: vec![HermitianMatrix::zeros(d); n * m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, x: usize, a: usize) -> &HermitianMatrix {
        &self.entries[x * self.m + a]
    }

    pub fn setting(&self, x: usize) -> &[HermitianMatrix] {
        &self.entries[x * self.m..(x + 1) * self.m]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &HermitianMatrix)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, f)| (k / self.m, k % self.m, f))
    }

    pub fn rows(&self) -> Vec<Vec<HermitianMatrix>> {
        self.entries.chunks(self.m).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HermitianMatrix::is_zero)
    }

    /// `s · F`.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|f| f.scale(s)).collect(),
            ..*self
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.n, self.m, self.d) != (other.n, other.m, other.d) {
            return Err(Error::dim("functional shapes differ"));
        }
        Ok(Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
            ..*self
        })
    }
}

/// Dichotomic functional `{F_x}` paired with `σ_x = Tr_A(ρ(E_x ⊗ 1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicFunctional {
    d: usize,
    entries: Vec<HermitianMatrix>,
}

impl DichotomicFunctional {
    pub fn new(entries: Vec<HermitianMatrix>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::dim("dichotomic functional needs at least one setting"));
        };
        let d = first.dim();
        if let Some(x) = entries.iter().position(|f| f.dim() != d) {
            return Err(Error::dim(format!("F_{x} has dim {}, expected {d}", entries[x].dim())));
        }
        Ok(Self { d, entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, x: usize) -> &HermitianMatrix {
        &self.entries[x]
    }

    pub fn entries(&self) -> &[HermitianMatrix] {
        &self.entries
    }

    /// Two-outcome form with `F_x^{+} = F_x`, `F_x^{-} = -F_x`, outcome order `(+1, -1)`.
    pub fn to_steering(&self) -> SteeringFunctional {
        SteeringFunctional {
            n: self.n(),
            m: 2,
            d: self.d,
            entries: self.entries.iter().flat_map(|f| [f.clone(), f.neg()]).collect(),
        }
    }
}
