//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over a fixed number of qubits
//! and classical bits. Qubit 0 is the least significant bit of the computational
//! basis index. Circuits that measure or use classically conditioned gates are
//! non-unitary and cannot be inverted or control-extended.

mod angle;
mod gate;
pub mod json;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use angle::Angle;
pub use gate::{Gate, GateKind, Wires};

use crate::error::{Error, Result};

/// Builder parameters carried alongside an exported block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMetadata {
    pub block: String,
    pub n: usize,
    pub a: Option<u64>,
    #[serde(rename = "N")]
    pub modulus: Option<u64>,
    pub kmax: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    metadata: Option<BlockMetadata>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Result<Circuit> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter("a circuit needs at least one qubit".into()));
        }
        Ok(Circuit { num_qubits, num_clbits, gates: Vec::new(), metadata: None })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn metadata(&self) -> Option<&BlockMetadata> {
        self.metadata.as_ref()
    }

    pub fn with_metadata(mut self, metadata: BlockMetadata) -> Circuit {
        self.metadata = Some(metadata);
        self
    }

    /// False once the circuit contains a measurement or a conditioned gate.
    pub fn is_unitary(&self) -> bool {
        self.gates.iter().all(|g| !g.kind.is_classical())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits, self.num_clbits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::WidthMismatch { expected: self.num_qubits, actual: other.num_qubits });
        }
        if other.num_clbits > self.num_clbits {
            return Err(Error::ClbitOutOfRange { index: other.num_clbits - 1, width: self.num_clbits });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn x(&mut self, q: usize) -> Result<()> {
        self.push(Gate::x(q))
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.push(Gate::h(q))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::cnot(control, target))
    }

    pub fn toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<()> {
        self.push(Gate::toffoli(c1, c2, target))
    }

    pub fn swap(&mut self, p: usize, q: usize) -> Result<()> {
        self.push(Gate::swap(p, q))
    }

    pub fn cswap(&mut self, control: usize, p: usize, q: usize) -> Result<()> {
        self.push(Gate::cswap(control, p, q))
    }

    pub fn phase(&mut self, target: usize, controls: &[usize], angle: Angle) -> Result<()> {
        if controls.len() > 2 {
            return Err(Error::ControlOverflow { kind: GateKind::Phase, added: controls.len() });
        }
        self.push(Gate::phase(target, controls, angle))
    }

    pub fn measure(&mut self, q: usize, clbit: usize) -> Result<()> {
        self.push(Gate::measure(q, clbit))
    }

    pub fn classical_x(&mut self, q: usize, condition: usize) -> Result<()> {
        self.push(Gate::classical_x(q, condition))
    }

    pub fn classical_phase(&mut self, q: usize, angle: Angle, condition: usize) -> Result<()> {
        self.push(Gate::classical_phase(q, angle, condition))
    }
}

fn require_unitary(c: &Circuit, what: &str) -> Result<()> {
    match c.gates.iter().position(|g| g.kind.is_classical()) {
        None => Ok(()),
        Some(i) => {
            Err(Error::NonUnitary(format!("cannot {what}: gate {i} is a {} instruction", c.gates[i].kind.name())))
        }
    }
}

/// Gate-wise inverse in reverse order. Phase angles are negated; every other
/// kind in the vocabulary is self-inverse.
pub fn invert_circuit(c: &Circuit) -> Result<Circuit> {
    require_unitary(c, "invert")?;
    Ok(Circuit {
        num_qubits: c.num_qubits,
        num_clbits: c.num_clbits,
        gates: c.gates.iter().rev().map(Gate::inverse).collect(),
        metadata: None,
    })
}

/// Adds `ctrls` as extra quantum controls on every gate of `c`.
///
/// The control qubits live in `c`'s index space and must not be touched by
/// any gate of `c`. Fails when a gate would exceed the two-control ceiling
/// of the gate set.
pub fn add_controls(c: &Circuit, ctrls: &[usize]) -> Result<Circuit> {
    require_unitary(c, "add controls")?;
    for (i, &q) in ctrls.iter().enumerate() {
        if q >= c.num_qubits {
            return Err(Error::QubitOutOfRange { index: q, width: c.num_qubits });
        }
        if ctrls[..i].contains(&q) {
            return Err(Error::InvalidParameter(format!("control qubit {q} listed twice")));
        }
    }
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        if let Some(q) = g.qubits().find(|q| ctrls.contains(q)) {
            return Err(Error::InvalidParameter(format!(
                "control qubit {q} is already used by a {} gate",
                g.kind.name()
            )));
        }
        let kind = g.kind.promoted(ctrls.len()).ok_or(Error::ControlOverflow { kind: g.kind, added: ctrls.len() })?;
        let mut ng = g.clone();
        ng.kind = kind;
        ng.controls.extend_from_slice(ctrls);
        gates.push(ng);
    }
    Ok(Circuit { num_qubits: c.num_qubits, num_clbits: c.num_clbits, gates, metadata: None })
}

/// Greedy as-soon-as-possible layering.
///
/// A gate occupies one layer on each of its targets and controls; measurements
/// and conditioned gates additionally occupy a single shared classical lane.
pub fn circuit_depth(c: &Circuit) -> usize {
    let mut tracker = DepthTracker::new(c.num_qubits);
    for g in &c.gates {
        tracker.place(g);
    }
    tracker.depth()
}

/// Incremental form of [`circuit_depth`].
#[derive(Clone, Debug)]
pub struct DepthTracker {
    busy_until: Vec<usize>,
    classical_lane: usize,
    depth: usize,
}

impl DepthTracker {
    pub fn new(num_qubits: usize) -> DepthTracker {
        DepthTracker { busy_until: vec![0; num_qubits], classical_lane: 0, depth: 0 }
    }

    pub fn place(&mut self, g: &Gate) -> usize {
        let mut layer = g.qubits().map(|q| self.busy_until[q]).max().unwrap_or(0);
        let classical = g.kind.is_classical();
        if classical {
            layer = layer.max(self.classical_lane);
        }
        layer += 1;
        for q in g.qubits() {
            self.busy_until[q] = layer;
        }
        if classical {
            self.classical_lane = layer;
        }
        self.depth = self.depth.max(layer);
        layer
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// Per-kind gate totals. Every kind is present, possibly with a zero count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GateCounts(BTreeMap<GateKind, usize>);

impl Default for GateCounts {
    fn default() -> Self {
        GateCounts(GateKind::ALL.iter().map(|&k| (k, 0)).collect())
    }
}

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        self.0.get(&kind).copied().unwrap_or(0)
    }

    pub fn add(&mut self, kind: GateKind, count: usize) {
        *self.0.entry(kind).or_insert(0) += count;
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    /// `self + factor * other`, kind by kind.
    pub fn accumulate(&mut self, other: &GateCounts, factor: usize) {
        for (k, v) in other.iter() {
            self.add(k, v * factor);
        }
    }
}

pub fn count_gates(c: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in &c.gates {
        counts.add(g.kind, 1);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        let mut c = Circuit::new(3, 0).unwrap();
        c.h(0).unwrap();
        c.phase(1, &[], Angle::turns(1, 3)).unwrap();
        c.phase(2, &[0], Angle::turns(-3, 4)).unwrap();
        c.toffoli(0, 1, 2).unwrap();
        c.cswap(2, 0, 1).unwrap();
        c
    }

    #[test]
    fn invert_is_involution() {
        let c = sample();
        assert_eq!(invert_circuit(&invert_circuit(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn invert_negates_phase() {
        let mut c = Circuit::new(1, 0).unwrap();
        let theta = Angle::turns(1, 5);
        c.phase(0, &[], theta).unwrap();
        let inv = invert_circuit(&c).unwrap();
        assert_eq!(inv.gates()[0].angle, Some(-theta));
        assert_eq!(inv.gates()[0].kind, GateKind::Phase);
    }

    #[test]
    fn invert_rejects_measurement() {
        let mut c = Circuit::new(1, 1).unwrap();
        c.measure(0, 0).unwrap();
        let err = invert_circuit(&c).unwrap_err();
        assert!(matches!(err, Error::NonUnitary(_)), "{err}");
        assert!(!c.is_unitary());
    }

    #[test]
    fn add_controls_promotes() {
        let mut c = Circuit::new(3, 0).unwrap();
        c.phase(0, &[], Angle::rk(3)).unwrap();
        c.x(0).unwrap();
        let cc = add_controls(&c, &[1, 2]).unwrap();
        assert_eq!(cc.gates()[0].kind, GateKind::CCPhase);
        assert_eq!(cc.gates()[0].angle, Some(Angle::rk(3)));
        assert_eq!(cc.gates()[1].kind, GateKind::Toffoli);
        assert_eq!(add_controls(&c, &[]).unwrap(), c);
    }

    #[test]
    fn add_controls_overflow() {
        let mut c = Circuit::new(4, 0).unwrap();
        c.phase(0, &[1], Angle::rk(2)).unwrap();
        let err = add_controls(&c, &[2, 3]).unwrap_err();
        assert!(matches!(err, Error::ControlOverflow { kind: GateKind::CPhase, added: 2 }));
        let mut h = Circuit::new(2, 0).unwrap();
        h.h(0).unwrap();
        assert!(matches!(add_controls(&h, &[1]), Err(Error::ControlOverflow { .. })));
    }

    #[test]
    fn add_controls_rejects_overlap() {
        let mut c = Circuit::new(2, 0).unwrap();
        c.cnot(0, 1).unwrap();
        assert!(add_controls(&c, &[1]).is_err());
    }

    #[test]
    fn depth_examples() {
        let c = Circuit::new(2, 0).unwrap();
        assert_eq!(circuit_depth(&c), 0);
        let mut par = Circuit::new(2, 0).unwrap();
        par.x(0).unwrap();
        par.x(1).unwrap();
        assert_eq!(circuit_depth(&par), 1);
        let mut ser = Circuit::new(2, 0).unwrap();
        ser.x(0).unwrap();
        ser.phase(0, &[], Angle::rk(1)).unwrap();
        assert_eq!(circuit_depth(&ser), 2);
    }

    #[test]
    fn classical_lane_serializes() {
        let mut c = Circuit::new(2, 2).unwrap();
        c.measure(0, 0).unwrap();
        c.classical_x(1, 0).unwrap();
        assert_eq!(circuit_depth(&c), 2);
    }

    #[test]
    fn counts_sum_to_length() {
        let c = sample();
        let counts = count_gates(&c);
        assert_eq!(counts.total(), c.len());
        assert_eq!(counts.get(GateKind::CPhase), 1);
        assert_eq!(count_gates(&Circuit::new(1, 0).unwrap()).total(), 0);
        assert!(count_gates(&Circuit::new(1, 0).unwrap()).iter().all(|(_, v)| v == 0));
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2, 1).unwrap();
        assert!(matches!(c.x(2), Err(Error::QubitOutOfRange { index: 2, width: 2 })));
        assert!(c.cnot(1, 1).is_err());
        assert!(matches!(c.measure(0, 1), Err(Error::ClbitOutOfRange { .. })));
        let mut bad = Gate::x(0);
        bad.angle = Some(Angle::rk(1));
        assert!(c.push(bad).is_err());
    }
}
