//! Enumerator vectors: (n+1)-entry distributions tagged by family.

use crate::error::{Error, Result};
use crate::math::{f64_to_rat, rat_to_f64};
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// The six enumerator families of the transform diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    /// Shor-Laflamme distribution (sector lengths).
    Sld,
    /// Weight distribution of the logical Pauli group / MacWilliams dual.
    DualSld,
    /// Averaged purity distribution (Rains' unitary enumerators).
    Apd,
    DualApd,
    /// Triplet probability distribution (Rains' shadow enumerators).
    Tpd,
    DualTpd,
}

impl VectorKind {
    pub const ALL: [VectorKind; 6] = [
        VectorKind::Sld,
        VectorKind::DualSld,
        VectorKind::Apd,
        VectorKind::DualApd,
        VectorKind::Tpd,
        VectorKind::DualTpd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VectorKind::Sld => "sld",
            VectorKind::DualSld => "dual_sld",
            VectorKind::Apd => "apd",
            VectorKind::DualApd => "dual_apd",
            VectorKind::Tpd => "tpd",
            VectorKind::DualTpd => "dual_tpd",
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(
            self,
            VectorKind::DualSld | VectorKind::DualApd | VectorKind::DualTpd
        )
    }

    pub fn dual(self) -> VectorKind {
        match self {
            VectorKind::Sld => VectorKind::DualSld,
            VectorKind::DualSld => VectorKind::Sld,
            VectorKind::Apd => VectorKind::DualApd,
            VectorKind::DualApd => VectorKind::Apd,
            VectorKind::Tpd => VectorKind::DualTpd,
            VectorKind::DualTpd => VectorKind::Tpd,
        }
    }
}

impl FromStr for VectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VectorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown vector kind {s:?}")))
    }
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arithmetic mode of a vector or matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Exact,
    Float64,
}

/// Entry storage; exact vectors hold arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn precision(&self) -> Precision {
        match self {
            Values::Exact(_) => Precision::Exact,
            Values::Float(_) => Precision::Float64,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Values::Exact(v) => v.iter().map(rat_to_f64).collect(),
            Values::Float(v) => v.clone(),
        }
    }
}

/// An (n+1)-entry enumerator vector; entry i refers to Pauli weight,
/// subsystem size, or triplet count i.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratorVector {
    pub n: usize,
    pub kind: VectorKind,
    pub values: Values,
}

impl EnumeratorVector {
    pub fn exact(n: usize, kind: VectorKind, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != n + 1 {
            return Err(Error::contract(format!(
                "enumerator vector for n={n} needs {} entries, got {}",
                n + 1,
                values.len()
            )));
        }
        Ok(Self {
            n,
            kind,
            values: Values::Exact(values),
        })
    }

    pub fn float(n: usize, kind: VectorKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != n + 1 {
            return Err(Error::contract(format!(
                "enumerator vector for n={n} needs {} entries, got {}",
                n + 1,
                values.len()
            )));
        }
        Ok(Self {
            n,
            kind,
            values: Values::Float(values),
        })
    }

    pub fn precision(&self) -> Precision {
        self.values.precision()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.to_f64()
    }

    /// Exact entries, converting floats losslessly (finite doubles are
    /// dyadic rationals).
    pub fn to_exact(&self) -> Result<Vec<BigRational>> {
        match &self.values {
            Values::Exact(v) => Ok(v.clone()),
            Values::Float(v) => v
                .iter()
                .map(|&x| {
                    f64_to_rat(x)
                        .ok_or_else(|| Error::Precision(format!("non-finite entry {x} in vector")))
                })
                .collect(),
        }
    }

    pub fn into_float(self) -> Self {
        let values = Values::Float(self.values.to_f64());
        Self { values, ..self }
    }

    pub fn sum_f64(&self) -> f64 {
        self.to_f64().iter().sum()
    }

    pub fn sum_exact(&self) -> Result<BigRational> {
        Ok(self.to_exact()?.iter().fold(BigRational::zero(), |a, b| a + b))
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    n: usize,
    kind: VectorKind,
    precision: Precision,
    values: Vec<serde_json::Value>,
}

impl Serialize for EnumeratorVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let values = match &self.values {
            Values::Exact(v) => v
                .iter()
                .map(|r| serde_json::Value::String(r.to_string()))
                .collect(),
            Values::Float(v) => v
                .iter()
                .map(|&x| serde_json::json!(x))
                .collect(),
        };
        VectorRepr {
            n: self.n,
            kind: self.kind,
            precision: self.precision(),
            values,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EnumeratorVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VectorRepr::deserialize(deserializer)?;
        if repr.values.len() != repr.n + 1 {
            return Err(D::Error::custom(format!(
                "vector for n={} needs {} entries, got {}",
                repr.n,
                repr.n + 1,
                repr.values.len()
            )));
        }
        let values = match repr.precision {
            Precision::Exact => {
                let mut out = Vec::with_capacity(repr.values.len());
                for v in &repr.values {
                    let s = v
                        .as_str()
                        .ok_or_else(|| D::Error::custom("exact vector entries must be strings"))?;
                    let r = BigRational::from_str(s)
                        .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))?;
                    out.push(r);
                }
                Values::Exact(out)
            }
            Precision::Float64 => {
                let mut out = Vec::with_capacity(repr.values.len());
                for v in &repr.values {
                    let x = v
                        .as_f64()
                        .ok_or_else(|| D::Error::custom("float vector entries must be numbers"))?;
                    out.push(x);
                }
                Values::Float(out)
            }
        };
        Ok(EnumeratorVector {
            n: repr.n,
            kind: repr.kind,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn json_round_trip_exact() {
        let v = EnumeratorVector::exact(
            2,
            VectorKind::Sld,
            vec![
                BigRational::from_f64(0.25).unwrap(),
                BigRational::zero(),
                BigRational::from_f64(0.75).unwrap(),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: EnumeratorVector = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
        assert!(s.contains("\"3/4\""));
    }

    #[test]
    fn json_round_trip_float() {
        let v = EnumeratorVector::float(1, VectorKind::Tpd, vec![0.25, 0.75]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: EnumeratorVector = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(EnumeratorVector::float(3, VectorKind::Apd, vec![1.0, 2.0]).is_err());
    }
}
