use crate::circuit::{Angle, BlockMetadata, Circuit};
use crate::error::{Error, Result};

use super::{emit_inverse, emit_iqft, emit_qft, BlockParams};

fn phi_add_angle(a: u64, j: usize) -> Angle {
    let p = j as u32 + 1;
    let residue = if p >= 64 { a } else { a & ((1u64 << p) - 1) };
    Angle::turns(residue as i64, p)
}

/// Fourier-space addition of the classical constant `a`: one phase gate per
/// register qubit, each carrying the given quantum controls.
///
/// Qubit `j` of `reg` gets `Phase(2π·a/2^{j+1})`, which is the product of
/// all classically controlled rotations a Draper adder would apply to it.
pub fn emit_phi_add(c: &mut Circuit, reg: &[usize], a: u64, controls: &[usize]) -> Result<()> {
    for (j, &q) in reg.iter().enumerate() {
        c.phase(q, controls, phi_add_angle(a, j))?;
    }
    Ok(())
}

/// Standalone φADD(a) on an `m`-qubit register (qubits `0..m`), with its
/// controls on qubits `m` and `m+1`.
pub fn build_phi_add_const(m: usize, a: u64, num_controls: usize) -> Result<Circuit> {
    if m == 0 || m > 62 {
        return Err(Error::InvalidParameter(format!("adder width m = {m} outside 1..=62")));
    }
    if a >> m != 0 {
        return Err(Error::InvalidParameter(format!("a = {a} does not fit in {m} qubits")));
    }
    if num_controls > 2 {
        return Err(Error::InvalidParameter(format!("{num_controls} controls requested, at most 2 allowed")));
    }
    let mut c = Circuit::new(m + num_controls, 0)?;
    let reg: Vec<usize> = (0..m).collect();
    let controls: Vec<usize> = (m..m + num_controls).collect();
    emit_phi_add(&mut c, &reg, a, &controls)?;
    Ok(c.with_metadata(BlockMetadata { block: "phi_add".into(), n: m - 1, a: Some(a), modulus: None, kmax: m }))
}

/// Doubly controlled φADD(a)MOD(N) on the Fourier register `b` (`n+1`
/// qubits, overflow last).
///
/// With both controls set it maps φ(b) to φ((a+b) mod N) for `b < N` and
/// leaves `ancilla` at |0⟩; otherwise it acts as the identity. Only the
/// φADD(a) pieces are controlled.
#[allow(clippy::too_many_arguments)]
pub fn emit_cc_phi_add_mod(
    c: &mut Circuit,
    b: &[usize],
    ancilla: usize,
    controls: [usize; 2],
    a: u64,
    modulus: u64,
    kmax: usize,
) -> Result<()> {
    let overflow = *b.last().expect("empty Fourier register");
    emit_phi_add(c, b, a, &controls)?;
    emit_inverse(c, |s| emit_phi_add(s, b, modulus, &[]))?;
    // Sign of a+b-N lands on the overflow qubit.
    emit_iqft(c, b, kmax)?;
    c.cnot(overflow, ancilla)?;
    emit_qft(c, b, kmax)?;
    emit_phi_add(c, b, modulus, &[ancilla])?;
    // Uncompute the ancilla: (a+b) mod N >= a exactly when a+b < N.
    emit_inverse(c, |s| emit_phi_add(s, b, a, &controls))?;
    emit_iqft(c, b, kmax)?;
    c.x(overflow)?;
    c.cnot(overflow, ancilla)?;
    c.x(overflow)?;
    emit_qft(c, b, kmax)?;
    emit_phi_add(c, b, a, &controls)
}

/// Standalone modular adder on `n+4` qubits: Fourier register `0..=n`,
/// ancilla `n+1`, controls `n+2` and `n+3`.
pub fn build_cc_phi_add_mod(n: usize, a: u64, modulus: u64, kmax: usize) -> Result<Circuit> {
    let p = BlockParams::new(n, a, modulus, kmax)?;
    let mut c = Circuit::new(n + 4, 0)?;
    let b: Vec<usize> = (0..=n).collect();
    emit_cc_phi_add_mod(&mut c, &b, n + 1, [n + 2, n + 3], a, modulus, kmax)?;
    Ok(c.with_metadata(p.metadata("cc_phi_add_mod")))
}
