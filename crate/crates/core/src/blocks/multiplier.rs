use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::numtheory::{mod_inverse, mod_mul};

use super::{emit_cc_phi_add_mod, emit_inverse, emit_iqft, emit_qft, BlockParams, Layout};

/// CMULT(a)MOD(N): |c⟩|x⟩|b⟩ → |c⟩|x⟩|(b + a·x) mod N⟩.
///
/// The i-th modular adder adds `(2^i·a) mod N` under controls `(c, x_i)`.
/// The b-register is taken to Fourier space once around all of them.
pub fn emit_cmult_mod(c: &mut Circuit, layout: &Layout, a: u64, modulus: u64, kmax: usize) -> Result<()> {
    let b = layout.b();
    emit_qft(c, &b, kmax)?;
    let mut addend = a % modulus;
    for xi in layout.x() {
        emit_cc_phi_add_mod(c, &b, layout.ancilla(), [layout.control(), xi], addend, modulus, kmax)?;
        addend = mod_mul(addend, 2, modulus);
    }
    emit_iqft(c, &b, kmax)
}

/// Controlled swap of the x-register with the low `n` qubits of the
/// b-register, each pair as CNOT, Toffoli, CNOT.
pub fn emit_controlled_swap_register(c: &mut Circuit, layout: &Layout) -> Result<()> {
    let ctrl = layout.control();
    for (xi, bi) in layout.x().into_iter().zip(layout.b()) {
        c.cnot(bi, xi)?;
        c.toffoli(ctrl, xi, bi)?;
        c.cnot(bi, xi)?;
    }
    Ok(())
}

/// C-U_a: |x⟩|0⟩ → |(a·x) mod N⟩|0⟩ when the control is set.
///
/// Multiply into the b-register, swap the registers, then run the inverse
/// multiplier by `a⁻¹` to clear the old value.
pub fn emit_controlled_ua(c: &mut Circuit, layout: &Layout, a: u64, modulus: u64, kmax: usize) -> Result<()> {
    let a_inv = mod_inverse(a, modulus).ok_or_else(|| Error::NotCoprime {
        a,
        modulus,
        gcd: crate::numtheory::gcd(a, modulus),
    })?;
    emit_cmult_mod(c, layout, a, modulus, kmax)?;
    emit_controlled_swap_register(c, layout)?;
    emit_inverse(c, |s| emit_cmult_mod(s, layout, a_inv, modulus, kmax))
}

pub fn build_cmult_mod(n: usize, a: u64, modulus: u64, kmax: usize) -> Result<Circuit> {
    let p = BlockParams::new(n, a, modulus, kmax)?;
    let layout = Layout::new(n);
    let mut c = Circuit::new(layout.width(), 0)?;
    emit_cmult_mod(&mut c, &layout, a, modulus, kmax)?;
    Ok(c.with_metadata(p.metadata("cmult")))
}

/// Standalone register swap on the `2n+3`-qubit layout.
pub fn build_controlled_swap_register(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidParameter("register swap needs n >= 1".into()));
    }
    let layout = Layout::new(n);
    let mut c = Circuit::new(layout.width(), 0)?;
    emit_controlled_swap_register(&mut c, &layout)?;
    Ok(c.with_metadata(crate::circuit::BlockMetadata { block: "cswap".into(), n, a: None, modulus: None, kmax: n + 1 }))
}

pub fn build_controlled_ua(n: usize, a: u64, modulus: u64, kmax: usize) -> Result<Circuit> {
    let p = BlockParams::new(n, a, modulus, kmax)?;
    p.require_coprime()?;
    let layout = Layout::new(n);
    let mut c = Circuit::new(layout.width(), 0)?;
    emit_controlled_ua(&mut c, &layout, a, modulus, kmax)?;
    Ok(c.with_metadata(p.metadata("controlled_ua")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_gates, GateKind};

    #[test]
    fn swap_register_gate_count() {
        for n in 1..6 {
            let counts = count_gates(&build_controlled_swap_register(n).unwrap());
            assert_eq!(counts.get(GateKind::Cnot), 2 * n);
            assert_eq!(counts.get(GateKind::Toffoli), n);
            assert_eq!(counts.total(), 3 * n);
        }
    }

    #[test]
    fn controlled_ua_rejects_common_factor() {
        let err = build_controlled_ua(4, 6, 15, 5).unwrap_err();
        assert!(matches!(err, Error::NotCoprime { gcd: 3, .. }), "{err}");
        assert!(err.to_string().contains("gcd = 3"));
    }

    #[test]
    fn widths() {
        assert_eq!(build_cmult_mod(4, 7, 15, 5).unwrap().num_qubits(), 11);
        assert_eq!(build_controlled_ua(3, 4, 7, 4).unwrap().num_qubits(), 9);
    }
}
