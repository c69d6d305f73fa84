//! JSON schema for matrices and model objects.
//!
//! Matrices are `{"rows", "cols", "data"}` with `data` a row-major list of
//! `[re, im]` pairs. Composite objects carry a `"kind"` tag plus their shape
//! header (`n`, `m`, `d` or `dim`). Floats are written in shortest round-trip
//! form, so save/load is bit-exact; everything is re-validated on load.

use std::path::Path;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::constructions::PauliStringFamily;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::model::{
    Assemblage, BipartiteState, Completeness, DichotomicFunctional, DichotomicObservable, Povm, SteeringFunctional,
};

#[derive(Serialize)]
struct MatrixOut<'a> {
    rows: usize,
    cols: usize,
    data: &'a [C64],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixIn {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixOut {
            rows: self.rows(),
            cols: self.cols(),
            data: self.as_slice(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixIn::deserialize(d)?;
        ComplexMatrix::from_vec(m.rows, m.cols, m.data).map_err(D::Error::custom)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HermitianMatrix::new(ComplexMatrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

fn expect_kind<E: serde::de::Error>(got: &str, want: &str) -> std::result::Result<(), E> {
    if got == want {
        Ok(())
    } else {
        Err(E::custom(format!("expected kind \"{want}\", found \"{got}\"")))
    }
}

fn expect_shape<E: serde::de::Error>(what: &str, header: usize, actual: usize) -> std::result::Result<(), E> {
    if header == actual {
        Ok(())
    } else {
        Err(E::custom(format!("header says {what} = {header}, data has {actual}")))
    }
}

// ---- steering functional ----

#[derive(Serialize, Deserialize)]
struct FunctionalWire<M> {
    kind: String,
    n: usize,
    m: usize,
    d: usize,
    entries: Vec<Vec<M>>,
}

impl Serialize for SteeringFunctional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionalWire {
            kind: "steering-functional".into(),
            n: self.n(),
            m: self.m(),
            d: self.d(),
            entries: (0..self.n()).map(|x| self.setting(x).iter().collect()).collect::<Vec<Vec<_>>>(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SteeringFunctional {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FunctionalWire::<HermitianMatrix>::deserialize(d)?;
        expect_kind(&w.kind, "steering-functional")?;
        let f = SteeringFunctional::new(w.entries).map_err(D::Error::custom)?;
        expect_shape("n", w.n, f.n())?;
        expect_shape("m", w.m, f.m())?;
        expect_shape("d", w.d, f.d())?;
        Ok(f)
    }
}

// ---- dichotomic functional / observables ----

#[derive(Serialize, Deserialize)]
struct ListWire<M> {
    kind: String,
    n: usize,
    #[serde(alias = "d")]
    dim: usize,
    entries: Vec<M>,
}

impl Serialize for DichotomicFunctional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ListWire {
            kind: "dichotomic-functional".into(),
            n: self.n(),
            dim: self.d(),
            entries: self.entries().iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DichotomicFunctional {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ListWire::<HermitianMatrix>::deserialize(d)?;
        expect_kind(&w.kind, "dichotomic-functional")?;
        let f = DichotomicFunctional::new(w.entries).map_err(D::Error::custom)?;
        expect_shape("n", w.n, f.n())?;
        expect_shape("dim", w.dim, f.d())?;
        Ok(f)
    }
}

impl Serialize for DichotomicObservable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ListWire {
            kind: "dichotomic-observable".into(),
            n: self.n(),
            dim: self.dim(),
            entries: self.observables().iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DichotomicObservable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ListWire::<HermitianMatrix>::deserialize(d)?;
        expect_kind(&w.kind, "dichotomic-observable")?;
        let o = DichotomicObservable::new(w.entries).map_err(D::Error::custom)?;
        expect_shape("n", w.n, o.n())?;
        expect_shape("dim", w.dim, o.dim())?;
        Ok(o)
    }
}

// ---- assemblage / POVM ----

#[derive(Serialize, Deserialize)]
struct FamilyWire<M> {
    kind: String,
    n: usize,
    m: usize,
    #[serde(alias = "d")]
    dim: usize,
    mode: Completeness,
    elements: Vec<Vec<M>>,
}

impl Serialize for Assemblage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyWire {
            kind: "assemblage".into(),
            n: self.n(),
            m: self.m(),
            dim: self.d(),
            mode: self.mode(),
            elements: (0..self.n()).map(|x| (0..self.m()).map(|a| self.get(x, a)).collect()).collect::<Vec<Vec<_>>>(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Assemblage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FamilyWire::<HermitianMatrix>::deserialize(d)?;
        expect_kind(&w.kind, "assemblage")?;
        let a = Assemblage::new(w.elements, w.mode).map_err(D::Error::custom)?;
        expect_shape("n", w.n, a.n())?;
        expect_shape("m", w.m, a.m())?;
        expect_shape("dim", w.dim, a.d())?;
        Ok(a)
    }
}

impl Serialize for Povm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyWire {
            kind: "povm".into(),
            n: self.n(),
            m: self.m(),
            dim: self.dim(),
            mode: self.mode(),
            elements: self.elements().iter().map(|r| r.iter().collect()).collect::<Vec<Vec<_>>>(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FamilyWire::<HermitianMatrix>::deserialize(d)?;
        expect_kind(&w.kind, "povm")?;
        let p = Povm::new(w.elements, w.mode).map_err(D::Error::custom)?;
        expect_shape("n", w.n, p.n())?;
        expect_shape("m", w.m, p.m())?;
        expect_shape("dim", w.dim, p.dim())?;
        Ok(p)
    }
}

// ---- states ----

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum StateWire<V, M> {
    PureState { dim_a: usize, dim_b: usize, psi: V },
    Density { dim_a: usize, dim_b: usize, rho: M },
}

impl Serialize for BipartiteState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: StateWire<&[C64], &HermitianMatrix> = match self {
            BipartiteState::Pure { psi, dim_a, dim_b } => StateWire::PureState {
                dim_a: *dim_a,
                dim_b: *dim_b,
                psi,
            },
            BipartiteState::Mixed { rho, dim_a, dim_b } => StateWire::Density {
                dim_a: *dim_a,
                dim_b: *dim_b,
                rho,
            },
        };
        w.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match StateWire::<Vec<C64>, HermitianMatrix>::deserialize(d)? {
            StateWire::PureState { dim_a, dim_b, psi } => BipartiteState::pure(psi, dim_a, dim_b),
            StateWire::Density { dim_a, dim_b, rho } => BipartiteState::mixed(rho, dim_a, dim_b),
        }
        .map_err(D::Error::custom)
    }
}

// ---- Pauli family (write-only) ----

#[derive(Serialize)]
struct PauliWire {
    kind: &'static str,
    m: usize,
    dim: usize,
    matrices: Vec<HermitianMatrix>,
}

impl Serialize for PauliStringFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PauliWire {
            kind: "pauli-family",
            m: self.m(),
            dim: self.dim(),
            matrices: self.matrices(),
        }
        .serialize(s)
    }
}

// ---- files and hashing ----

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Keys dropped before hashing: they record when or how long, not what.
pub const VOLATILE_KEYS: [&str; 3] = ["timestamp", "wall_time_ms", "elapsed_ms"];

fn strip_volatile(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for k in VOLATILE_KEYS {
                map.remove(k);
            }
            map.values_mut().for_each(strip_volatile);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

/// SHA-256 (hex) of the compact JSON encoding with volatile keys removed.
pub fn canonical_hash<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    strip_volatile(&mut v);
    let bytes = serde_json::to_vec(&v)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
