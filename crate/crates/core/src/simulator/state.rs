use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on simulated width; 2^28 amplitudes is 4 GiB.
pub const MAX_QUBITS: usize = 28;

/// Dense statevector; basis index bit `q` is the value of qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    pub(crate) amps: Vec<Complex64>,
}

impl QuantumState {
    pub fn basis(num_qubits: usize, value: u64) -> Result<QuantumState> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if value >= dim as u64 {
            return Err(Error::InvalidParameter(format!("basis value {value} does not fit in {num_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[value as usize] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { num_qubits, amps })
    }

    /// Takes ownership of an explicit amplitude vector, which must have a
    /// power-of-two length and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<QuantumState> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector length {} is not a power of two",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_capacity(num_qubits)?;
        let state = QuantumState { num_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("amplitudes have squared norm {norm}")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits, "fidelity of states with different widths");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    /// Probability that qubit `q` reads 1.
    pub fn qubit_one_probability(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps.iter().enumerate().filter(|(i, _)| i & bit != 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Index of the largest-probability basis state.
    pub fn most_likely(&self) -> (usize, f64) {
        self.amps.iter().enumerate().map(|(i, a)| (i, a.norm_sqr())).fold((0, -1.0), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
    }

    /// Writes `index,real,imag` lines, one per amplitude.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,real,imag")?;
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(w, "{i},{:e},{:e}", a.re, a.im)?;
        }
        Ok(())
    }
}

pub(crate) fn check_capacity(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::InvalidParameter("a state needs at least one qubit".into()));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::CapacityExceeded { requested: num_qubits, max: MAX_QUBITS });
    }
    Ok(())
}
