//! JSON file formats for complexes, codes and sandwich plans.
//!
//! Matrices are written in the text format of [`F2Matrix`] and bit vectors
//! as strings of `0`/`1`.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chain::{ChainComplex, Component};
use crate::csscode::{CssCode, LogicalBasis};
use crate::f2linalg::{BitVec, F2Matrix};
use crate::surgery::{SandwichPlan, SandwichReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid data: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    components: BTreeMap<i32, Component>,
    differentials: BTreeMap<i32, F2Matrix>,
}

impl Serialize for ChainComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexRepr { components: self.components().clone(), differentials: self.differentials().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ComplexRepr::deserialize(d)?;
        ChainComplex::new(r.components, r.differentials).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeRepr {
    p_x: F2Matrix,
    p_z: F2Matrix,
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    logical_basis: Option<LogicalBasis>,
}

impl Serialize for CssCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CodeRepr {
            p_x: self.p_x(),
            p_z: self.p_z(),
            labels: self.qubit_labels(),
            logical_basis: self.logical_basis().cloned(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CssCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CodeRepr::deserialize(d)?;
        let code = CssCode::from_parity_checks_labeled(&r.p_x, &r.p_z, r.labels).map_err(D::Error::custom)?;
        match r.logical_basis {
            Some(b) => code.with_logical_basis(b).map_err(D::Error::custom),
            None => Ok(code),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRepr {
    code_c: CssCode,
    code_d: CssCode,
    op_c: BitVec,
    op_d: BitVec,
    support_c: Vec<usize>,
    support_d: Vec<usize>,
    sandwiched: CssCode,
    half: ChainComplex,
    intermediate: ChainComplex,
    fresh_qubits: usize,
    new_z_checks: usize,
    rounds: usize,
    gauge_fix_operators: Vec<BitVec>,
    report: SandwichReport,
}

impl Serialize for SandwichPlan {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlanRepr {
            code_c: self.code_c.clone(),
            code_d: self.code_d.clone(),
            op_c: self.op_c.clone(),
            op_d: self.op_d.clone(),
            support_c: self.support_c.clone(),
            support_d: self.support_d.clone(),
            sandwiched: self.sandwiched.clone(),
            half: self.half.clone(),
            intermediate: self.intermediate.clone(),
            fresh_qubits: self.fresh_qubits,
            new_z_checks: self.new_z_checks,
            rounds: self.rounds,
            gauge_fix_operators: self.gauge_fix_operators.clone(),
            report: self.report.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SandwichPlan {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PlanRepr::deserialize(d)?;
        let t = &r.sandwiched;
        let n_cd = r.code_c.n() + r.code_d.n();
        if t.n() != n_cd + r.fresh_qubits
            || t.num_z_checks() != r.code_c.num_z_checks() + r.code_d.num_z_checks() + r.new_z_checks
            || r.op_c.len() != r.code_c.n()
            || r.op_d.len() != r.code_d.n()
            || r.gauge_fix_operators.len() != r.new_z_checks
            || r.gauge_fix_operators.iter().any(|g| g.len() != t.n())
        {
            return Err(D::Error::custom("plan sizes are inconsistent"));
        }
        Ok(SandwichPlan {
            code_c: r.code_c,
            code_d: r.code_d,
            op_c: r.op_c,
            op_d: r.op_d,
            support_c: r.support_c,
            support_d: r.support_d,
            sandwiched: r.sandwiched,
            half: r.half,
            intermediate: r.intermediate,
            fresh_qubits: r.fresh_qubits,
            new_z_checks: r.new_z_checks,
            rounds: r.rounds,
            gauge_fix_operators: r.gauge_fix_operators,
            report: r.report,
        })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads a code file, or a bare complex file supported on degrees 1, 0, −1.
pub fn read_code(text: &str) -> Result<CssCode, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("p_x").is_some() {
        Ok(serde_json::from_value(value)?)
    } else if value.get("components").is_some() {
        let c: ChainComplex = serde_json::from_value(value)?;
        CssCode::from_z_complex(c).map_err(|e| IoError::Invalid(e.to_string()))
    } else {
        Err(IoError::Invalid("neither a code nor a complex".into()))
    }
}
