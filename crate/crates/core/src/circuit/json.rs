//! JSON document format for circuits.
//!
//! ```json
//! {"num_qubits": 3, "num_clbits": 0, "metadata": null,
//!  "gates": [{"kind": "CPhase", "targets": [1], "controls": [0],
//!             "angle_num": 1, "angle_den_pow2": 2, "condition": null, "clbit": null}]}
//! ```
//!
//! Angles are the exact dyadic fraction `angle_num / 2^angle_den_pow2` of a
//! full turn, so documents round-trip bit-exactly.

use serde::{Deserialize, Serialize};

use super::{Angle, BlockMetadata, Circuit, Gate, GateKind, Wires};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct CircuitDocument {
    num_qubits: usize,
    num_clbits: usize,
    #[serde(default)]
    metadata: Option<BlockMetadata>,
    gates: Vec<GateRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GateRecord {
    kind: GateKind,
    targets: Vec<usize>,
    #[serde(default)]
    controls: Vec<usize>,
    #[serde(default)]
    angle_num: Option<i64>,
    #[serde(default)]
    angle_den_pow2: Option<u32>,
    #[serde(default)]
    condition: Option<usize>,
    #[serde(default)]
    clbit: Option<usize>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        GateRecord {
            kind: g.kind,
            targets: g.targets.to_vec(),
            controls: g.controls.to_vec(),
            angle_num: g.angle.map(|a| a.numerator()),
            angle_den_pow2: g.angle.map(|a| a.den_pow2()),
            condition: g.condition,
            clbit: g.clbit,
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Gate> {
        let angle = match (r.angle_num, r.angle_den_pow2) {
            (Some(num), Some(p)) => Some(Angle::turns(num, p)),
            (None, None) => None,
            _ => return Err(Error::MalformedGate("angle_num and angle_den_pow2 must be given together".into())),
        };
        Ok(Gate {
            kind: r.kind,
            targets: Wires::from_vec(r.targets),
            controls: Wires::from_vec(r.controls),
            angle,
            condition: r.condition,
            clbit: r.clbit,
        })
    }
}

fn document(c: &Circuit) -> CircuitDocument {
    CircuitDocument {
        num_qubits: c.num_qubits(),
        num_clbits: c.num_clbits(),
        metadata: c.metadata().cloned(),
        gates: c.gates().iter().map(GateRecord::from).collect(),
    }
}

pub fn to_json(c: &Circuit) -> Result<String> {
    Ok(serde_json::to_string(&document(c))?)
}

pub fn to_json_pretty(c: &Circuit) -> Result<String> {
    Ok(serde_json::to_string_pretty(&document(c))?)
}

/// Parses and validates a circuit document.
pub fn from_json(s: &str) -> Result<Circuit> {
    let doc: CircuitDocument = serde_json::from_str(s)?;
    let mut c = Circuit::new(doc.num_qubits, doc.num_clbits)?;
    for record in doc.gates {
        c.push(Gate::try_from(record)?)?;
    }
    Ok(match doc.metadata {
        Some(m) => c.with_metadata(m),
        None => c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_field_names() {
        let mut c = Circuit::new(2, 1).unwrap();
        c.phase(1, &[0], Angle::rk(2)).unwrap();
        c.measure(0, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&c).unwrap()).unwrap();
        let g = &v["gates"][0];
        assert_eq!(g["kind"], "CPhase");
        assert_eq!(g["angle_num"], 1);
        assert_eq!(g["angle_den_pow2"], 2);
        assert_eq!(v["gates"][1]["clbit"], 0);
        assert!(v["gates"][1]["angle_num"].is_null());
    }

    #[test]
    fn rejects_invalid_gate() {
        let doc = r#"{"num_qubits":1,"num_clbits":0,"gates":[{"kind":"CNOT","targets":[0],"controls":[3]}]}"#;
        assert!(from_json(doc).is_err());
        let half = r#"{"num_qubits":1,"num_clbits":0,"gates":[{"kind":"Phase","targets":[0],"angle_num":1}]}"#;
        assert!(from_json(half).is_err());
    }

    #[test]
    fn metadata_uses_capital_n() {
        let c = Circuit::new(1, 0).unwrap().with_metadata(BlockMetadata {
            block: "qft".into(),
            n: 1,
            a: None,
            modulus: Some(3),
            kmax: 1,
        });
        let s = to_json(&c).unwrap();
        assert!(s.contains("\"N\":3"), "{s}");
        assert_eq!(from_json(&s).unwrap(), c);
    }
}
