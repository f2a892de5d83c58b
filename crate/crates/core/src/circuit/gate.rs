use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::Angle;
use crate::error::{Error, Result};

/// Qubit index list; no gate in the vocabulary touches more than two targets
/// or two controls.
pub type Wires = SmallVec<[usize; 2]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    Phase,
    CPhase,
    CCPhase,
    #[serde(rename = "CNOT")]
    Cnot,
    Toffoli,
    Swap,
    CSwap,
    Measure,
    ClassicalX,
    ClassicalPhase,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::X,
        GateKind::H,
        GateKind::Phase,
        GateKind::CPhase,
        GateKind::CCPhase,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::Swap,
        GateKind::CSwap,
        GateKind::Measure,
        GateKind::ClassicalX,
        GateKind::ClassicalPhase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Phase => "Phase",
            GateKind::CPhase => "CPhase",
            GateKind::CCPhase => "CCPhase",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "Toffoli",
            GateKind::Swap => "Swap",
            GateKind::CSwap => "CSwap",
            GateKind::Measure => "Measure",
            GateKind::ClassicalX => "ClassicalX",
            GateKind::ClassicalPhase => "ClassicalPhase",
        }
    }

    pub fn num_controls(self) -> usize {
        match self {
            GateKind::CPhase | GateKind::Cnot | GateKind::CSwap => 1,
            GateKind::CCPhase | GateKind::Toffoli => 2,
            _ => 0,
        }
    }

    pub fn num_targets(self) -> usize {
        match self {
            GateKind::Swap | GateKind::CSwap => 2,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::Phase | GateKind::CPhase | GateKind::CCPhase | GateKind::ClassicalPhase)
    }

    pub fn is_conditioned(self) -> bool {
        matches!(self, GateKind::ClassicalX | GateKind::ClassicalPhase)
    }

    /// Measurements and classically conditioned gates.
    pub fn is_classical(self) -> bool {
        self == GateKind::Measure || self.is_conditioned()
    }

    /// Kind obtained by adding `extra` quantum controls, if the gate set has one.
    pub fn promoted(self, extra: usize) -> Option<GateKind> {
        if extra == 0 {
            return Some(self);
        }
        let family: &[GateKind] = match self {
            GateKind::Phase | GateKind::CPhase | GateKind::CCPhase => {
                &[GateKind::Phase, GateKind::CPhase, GateKind::CCPhase]
            }
            GateKind::X | GateKind::Cnot | GateKind::Toffoli => &[GateKind::X, GateKind::Cnot, GateKind::Toffoli],
            GateKind::Swap | GateKind::CSwap => &[GateKind::Swap, GateKind::CSwap],
            _ => return None,
        };
        family.get(self.num_controls() + extra).copied()
    }
}

/// One instruction of a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Wires,
    pub controls: Wires,
    /// Present exactly for the phase kinds.
    pub angle: Option<Angle>,
    /// Classical bit enabling a `ClassicalX`/`ClassicalPhase`.
    pub condition: Option<usize>,
    /// Classical bit written by `Measure`.
    pub clbit: Option<usize>,
}

impl Gate {
    fn plain(kind: GateKind, targets: &[usize], controls: &[usize]) -> Gate {
        Gate {
            kind,
            targets: Wires::from_slice(targets),
            controls: Wires::from_slice(controls),
            angle: None,
            condition: None,
            clbit: None,
        }
    }

    pub fn x(target: usize) -> Gate {
        Gate::plain(GateKind::X, &[target], &[])
    }

    pub fn h(target: usize) -> Gate {
        Gate::plain(GateKind::H, &[target], &[])
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::plain(GateKind::Cnot, &[target], &[control])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::plain(GateKind::Toffoli, &[target], &[c1, c2])
    }

    pub fn swap(p: usize, q: usize) -> Gate {
        Gate::plain(GateKind::Swap, &[p, q], &[])
    }

    pub fn cswap(control: usize, p: usize, q: usize) -> Gate {
        Gate::plain(GateKind::CSwap, &[p, q], &[control])
    }

    /// Phase rotation on `target` with any number (0..=2) of quantum controls.
    pub fn phase(target: usize, controls: &[usize], angle: Angle) -> Gate {
        let kind = GateKind::Phase.promoted(controls.len()).expect("phase gates take at most two controls");
        let mut g = Gate::plain(kind, &[target], controls);
        g.angle = Some(angle);
        g
    }

    pub fn measure(target: usize, clbit: usize) -> Gate {
        let mut g = Gate::plain(GateKind::Measure, &[target], &[]);
        g.clbit = Some(clbit);
        g
    }

    pub fn classical_x(target: usize, condition: usize) -> Gate {
        let mut g = Gate::plain(GateKind::ClassicalX, &[target], &[]);
        g.condition = Some(condition);
        g
    }

    pub fn classical_phase(target: usize, angle: Angle, condition: usize) -> Gate {
        let mut g = Gate::plain(GateKind::ClassicalPhase, &[target], &[]);
        g.angle = Some(angle);
        g.condition = Some(condition);
        g
    }

    /// Every qubit the gate reads or writes.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(self.controls.iter()).copied()
    }

    pub fn validate(&self, num_qubits: usize, num_clbits: usize) -> Result<()> {
        let kind = self.kind;
        if self.targets.len() != kind.num_targets() {
            return Err(Error::MalformedGate(format!(
                "{} expects {} target(s), got {}",
                kind.name(),
                kind.num_targets(),
                self.targets.len()
            )));
        }
        if self.controls.len() != kind.num_controls() {
            return Err(Error::MalformedGate(format!(
                "{} expects {} control(s), got {}",
                kind.name(),
                kind.num_controls(),
                self.controls.len()
            )));
        }
        if let Some(index) = self.qubits().find(|&q| q >= num_qubits) {
            return Err(Error::QubitOutOfRange { index, width: num_qubits });
        }
        let wires: Vec<usize> = self.qubits().collect();
        for (i, q) in wires.iter().enumerate() {
            if wires[i + 1..].contains(q) {
                return Err(Error::MalformedGate(format!("{} uses qubit {q} more than once", kind.name())));
            }
        }
        if kind.has_angle() != self.angle.is_some() {
            return Err(Error::MalformedGate(format!(
                "{} {} an angle",
                kind.name(),
                if kind.has_angle() { "requires" } else { "does not take" }
            )));
        }
        if kind.is_conditioned() != self.condition.is_some() {
            return Err(Error::MalformedGate(format!(
                "condition bit is required exactly on classically conditioned gates, not on {}",
                kind.name()
            )));
        }
        if (kind == GateKind::Measure) != self.clbit.is_some() {
            return Err(Error::MalformedGate(format!(
                "output clbit is required exactly on Measure, not on {}",
                kind.name()
            )));
        }
        for index in self.condition.iter().chain(self.clbit.iter()).copied() {
            if index >= num_clbits {
                return Err(Error::ClbitOutOfRange { index, width: num_clbits });
            }
        }
        Ok(())
    }

    /// Inverse of a unitary gate. Panics on measurements and conditioned gates.
    pub fn inverse(&self) -> Gate {
        assert!(!self.kind.is_classical(), "{} has no unitary inverse", self.kind.name());
        let mut g = self.clone();
        g.angle = g.angle.map(|a| -a);
        g
    }
}
