//! Dense statevector simulation with mid-circuit measurement and classical
//! feedback.
//!
//! Results depend only on the circuit, the initial state and the random
//! stream: amplitude updates are element-wise, and reductions are summed over
//! fixed-size blocks in a fixed order, so the worker count never changes a
//! single bit of the output.

mod kernels;
mod state;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

pub use state::{QuantumState, MAX_QUBITS};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use kernels::Op;

/// Smallest chunk handed to a worker.
const MIN_CHUNK: usize = 1 << 12;
/// Block size of the probability partial sums.
const REDUCE_BLOCK: usize = 1 << 10;
/// Outcomes below this probability are treated as impossible.
const NEGLIGIBLE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_state: QuantumState,
    pub clbits: Vec<u8>,
    pub rng_draws: u64,
}

#[derive(Default)]
pub struct Simulator {
    pool: Option<rayon::ThreadPool>,
}

impl Simulator {
    /// Simulator that splits large states across `workers` threads.
    pub fn with_workers(workers: usize) -> Result<Simulator> {
        if workers <= 1 {
            return Ok(Simulator::default());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
        Ok(Simulator { pool: Some(pool) })
    }

    pub fn workers(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    fn apply_op(&self, state: &mut QuantumState, op: Op) {
        let amps = &mut state.amps;
        let chunk = (op.pairing_bits() + 1).next_power_of_two().max(MIN_CHUNK);
        match &self.pool {
            Some(pool) if chunk < amps.len() => pool.install(|| {
                amps.par_chunks_mut(chunk).enumerate().for_each(|(ci, slice)| op.apply(slice, ci * chunk));
            }),
            _ => op.apply(amps, 0),
        }
    }

    /// Probabilities of reading 0 and 1 on qubit `q`.
    fn outcome_probabilities(&self, state: &QuantumState, q: usize) -> (f64, f64) {
        let bit = 1usize << q;
        let partial = |(bi, block): (usize, &[Complex64])| {
            let base = bi * REDUCE_BLOCK;
            let mut sums = (0.0, 0.0);
            for (i, a) in block.iter().enumerate() {
                if (base + i) & bit == 0 {
                    sums.0 += a.norm_sqr();
                } else {
                    sums.1 += a.norm_sqr();
                }
            }
            sums
        };
        let partials: Vec<(f64, f64)> = match &self.pool {
            Some(pool) if state.amps.len() > MIN_CHUNK => {
                pool.install(|| state.amps.par_chunks(REDUCE_BLOCK).enumerate().map(partial).collect())
            }
            _ => state.amps.chunks(REDUCE_BLOCK).enumerate().map(partial).collect(),
        };
        partials.into_iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
    }

    /// Born-rule measurement of qubit `q` with exactly one uniform draw;
    /// the outcome is 1 iff the draw is below P(1).
    pub fn measure_qubit<R: Rng + ?Sized>(&self, state: &mut QuantumState, q: usize, rng: &mut R) -> Result<u8> {
        if q >= state.num_qubits() {
            return Err(Error::QubitOutOfRange { index: q, width: state.num_qubits() });
        }
        let (p0, p1) = self.outcome_probabilities(state, q);
        if p0 < NEGLIGIBLE && p1 < NEGLIGIBLE {
            return Err(Error::NumericalCorruption(format!(
                "no probability mass on either outcome of qubit {q} (P0 = {p0:e}, P1 = {p1:e})"
            )));
        }
        let prob_one = if p1 < NEGLIGIBLE {
            0.0
        } else if p0 < NEGLIGIBLE {
            1.0
        } else {
            p1 / (p0 + p1)
        };
        let draw: f64 = rng.gen();
        let outcome = u8::from(draw < prob_one);
        let kept = if outcome == 1 { p1 } else { p0 };
        let scale = Complex64::new(1.0 / kept.sqrt(), 0.0);
        let bit = 1usize << q;
        let want = if outcome == 1 { bit } else { 0 };
        let project = |(ci, slice): (usize, &mut [Complex64])| {
            let base = ci * REDUCE_BLOCK;
            for (i, a) in slice.iter_mut().enumerate() {
                if (base + i) & bit == want {
                    *a *= scale;
                } else {
                    *a = Complex64::new(0.0, 0.0);
                }
            }
        };
        match &self.pool {
            Some(pool) if state.amps.len() > MIN_CHUNK => {
                pool.install(|| state.amps.par_chunks_mut(REDUCE_BLOCK).enumerate().for_each(project))
            }
            _ => state.amps.chunks_mut(REDUCE_BLOCK).enumerate().for_each(project),
        }
        Ok(outcome)
    }

    /// Applies one gate. Conditioned gates read `clbits`; `Measure` writes
    /// its result there and draws from `rng`.
    pub fn apply_gate<R: Rng + ?Sized>(
        &self,
        state: &mut QuantumState,
        gate: &Gate,
        clbits: &mut [u8],
        rng: &mut R,
    ) -> Result<()> {
        gate.validate(state.num_qubits(), clbits.len())?;
        let bit = |q: usize| 1usize << q;
        let controls: usize = gate.controls.iter().map(|&q| bit(q)).sum();
        let t0 = bit(gate.targets[0]);
        let op = match gate.kind {
            GateKind::Measure => {
                let clbit = gate.clbit.expect("validated");
                clbits[clbit] = self.measure_qubit(state, gate.targets[0], rng)?;
                return Ok(());
            }
            GateKind::ClassicalX | GateKind::ClassicalPhase => {
                if clbits[gate.condition.expect("validated")] == 0 {
                    return Ok(());
                }
                if gate.kind == GateKind::ClassicalX {
                    Op::Flip { controls: 0, target: t0 }
                } else {
                    diagonal(t0, gate)
                }
            }
            GateKind::Phase | GateKind::CPhase | GateKind::CCPhase => diagonal(controls | t0, gate),
            GateKind::X | GateKind::Cnot | GateKind::Toffoli => Op::Flip { controls, target: t0 },
            GateKind::H => Op::Hadamard { target: t0 },
            GateKind::Swap | GateKind::CSwap => {
                let (p, q) = (t0, bit(gate.targets[1]));
                // Visit each pair once: p set, q clear.
                Op::Exchange { controls, p, q }
            }
        };
        if let Op::Diagonal { phase, .. } = op {
            if phase == Complex64::new(1.0, 0.0) {
                return Ok(());
            }
        }
        self.apply_op(state, op);
        Ok(())
    }

    pub fn run_circuit<R: Rng + ?Sized>(
        &self,
        circuit: &Circuit,
        initial: QuantumState,
        rng: &mut R,
    ) -> Result<RunResult> {
        self.run_circuit_with_clbits(circuit, initial, vec![0; circuit.num_clbits()], rng)
    }

    /// Like [`Simulator::run_circuit`] but starting from given classical bits.
    pub fn run_circuit_with_clbits<R: Rng + ?Sized>(
        &self,
        circuit: &Circuit,
        initial: QuantumState,
        mut clbits: Vec<u8>,
        rng: &mut R,
    ) -> Result<RunResult> {
        if initial.num_qubits() != circuit.num_qubits() {
            return Err(Error::WidthMismatch { expected: circuit.num_qubits(), actual: initial.num_qubits() });
        }
        if clbits.len() != circuit.num_clbits() {
            return Err(Error::ClbitOutOfRange { index: clbits.len(), width: circuit.num_clbits() });
        }
        let mut state = initial;
        let mut rng_draws = 0;
        for gate in circuit.gates() {
            self.apply_gate(&mut state, gate, &mut clbits, rng)?;
            if gate.kind == GateKind::Measure {
                rng_draws += 1;
            }
        }
        Ok(RunResult { final_state: state, clbits, rng_draws })
    }

    /// Runs a unitary circuit on one basis state; no randomness is involved.
    pub fn run_unitary(&self, circuit: &Circuit, initial: QuantumState) -> Result<QuantumState> {
        if !circuit.is_unitary() {
            return Err(Error::NonUnitary("expected a circuit without measurements or feedback".into()));
        }
        let mut rng = rand::rngs::mock::StepRng::new(0, 0);
        Ok(self.run_circuit(circuit, initial, &mut rng)?.final_state)
    }
}

fn diagonal(mask: usize, gate: &Gate) -> Op {
    let theta = gate.angle.expect("validated").radians();
    Op::Diagonal { mask, phase: Complex64::from_polar(1.0, theta) }
}

/// Largest width accepted by [`circuit_unitary`].
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Full unitary of a circuit; column `k` is the circuit applied to `|k⟩`.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Array2<Complex64>> {
    let m = circuit.num_qubits();
    if m > MAX_UNITARY_QUBITS {
        return Err(Error::CapacityExceeded { requested: m, max: MAX_UNITARY_QUBITS });
    }
    if !circuit.is_unitary() {
        return Err(Error::NonUnitary("circuit_unitary needs a measurement-free circuit".into()));
    }
    let dim = 1usize << m;
    let sim = Simulator::default();
    let columns: Vec<QuantumState> = (0..dim)
        .into_par_iter()
        .map(|k| sim.run_unitary(circuit, QuantumState::basis(m, k as u64)?))
        .collect::<Result<_>>()?;
    let mut u = Array2::zeros((dim, dim));
    for (k, col) in columns.iter().enumerate() {
        for (row, a) in col.amplitudes().iter().enumerate() {
            u[(row, k)] = *a;
        }
    }
    check_unitary(&u)?;
    Ok(u)
}

/// Verifies `U†U = I` to 1e-8: in full up to 256 columns, otherwise column
/// norms plus orthogonality of each column to its neighbour and to column 0.
fn check_unitary(u: &Array2<Complex64>) -> Result<()> {
    let dim = u.nrows();
    let inner = |a: usize, b: usize| -> Complex64 {
        u.column(a).iter().zip(u.column(b).iter()).map(|(x, y)| x.conj() * y).sum()
    };
    let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if dim <= 256 {
        Box::new((0..dim).flat_map(move |a| (a..dim).map(move |b| (a, b))))
    } else {
        Box::new((0..dim).flat_map(move |a| [(a, a), (a, (a + 1) % dim), (0, a)]))
    };
    for (a, b) in pairs {
        let expected = if a == b { 1.0 } else { 0.0 };
        let got = inner(a, b);
        if (got - Complex64::new(expected, 0.0)).norm() > 1e-8 {
            return Err(Error::NumericalCorruption(format!("unitarity check failed at columns ({a}, {b}): {got}")));
        }
    }
    Ok(())
}

pub fn init_basis_state(num_qubits: usize, value: u64) -> Result<QuantumState> {
    QuantumState::basis(num_qubits, value)
}

pub fn apply_gate<R: Rng + ?Sized>(
    state: &mut QuantumState,
    gate: &Gate,
    clbits: &mut [u8],
    rng: &mut R,
) -> Result<()> {
    Simulator::default().apply_gate(state, gate, clbits, rng)
}

pub fn measure_qubit<R: Rng + ?Sized>(state: &mut QuantumState, q: usize, rng: &mut R) -> Result<u8> {
    Simulator::default().measure_qubit(state, q, rng)
}

pub fn run_circuit<R: Rng + ?Sized>(circuit: &Circuit, initial: QuantumState, rng: &mut R) -> Result<RunResult> {
    Simulator::default().run_circuit(circuit, initial, rng)
}
