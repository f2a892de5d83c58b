//! Circuit generators for the arithmetic building blocks.
//!
//! Every block works in the swapless QFT convention: after [`build_qft`] on an
//! `m`-qubit register holding `b`, qubit `j` carries the relative phase
//! `e^{2πi·b/2^{j+1}}`. The modular blocks use the register layout of
//! [`Layout`].
//!
//! Each block has an `emit_*` form that writes into an existing circuit at
//! given qubit positions and a `build_*` form that returns a standalone,
//! metadata-tagged circuit.

mod adder;
mod multiplier;
mod qft;

pub use adder::{build_cc_phi_add_mod, build_phi_add_const, emit_cc_phi_add_mod, emit_phi_add};
pub use multiplier::{
    build_cmult_mod, build_controlled_swap_register, build_controlled_ua, emit_cmult_mod,
    emit_controlled_swap_register, emit_controlled_ua,
};
pub use qft::{build_qft, emit_iqft, emit_qft};

use crate::circuit::{invert_circuit, BlockMetadata, Circuit};
use crate::error::{Error, Result};
use crate::numtheory::gcd;

/// Qubit positions of the `2n+3`-qubit order-finding register file.
///
/// `x` occupies qubits `0..n`, the Fourier register `b` occupies `n..=2n`
/// with its overflow qubit at `2n`, then the modular-adder ancilla and the
/// single control qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    n: usize,
}

impl Layout {
    pub fn new(n: usize) -> Layout {
        Layout { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        2 * self.n + 3
    }

    pub fn x(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// `n+1` qubits, least significant first; the last one is the overflow qubit.
    pub fn b(&self) -> Vec<usize> {
        (self.n..=2 * self.n).collect()
    }

    pub fn overflow(&self) -> usize {
        2 * self.n
    }

    pub fn ancilla(&self) -> usize {
        2 * self.n + 1
    }

    pub fn control(&self) -> usize {
        2 * self.n + 2
    }
}

/// Classical parameters of the modular blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockParams {
    /// Bit width of the modulus.
    pub n: usize,
    pub a: u64,
    pub modulus: u64,
    /// QFT truncation; `n + 1` is the exact transform.
    pub kmax: usize,
}

/// Largest register width for which dyadic angles and `u64` arithmetic stay exact.
pub const MAX_BITS: usize = 60;

impl BlockParams {
    pub fn new(n: usize, a: u64, modulus: u64, kmax: usize) -> Result<BlockParams> {
        let p = BlockParams { n, a, modulus, kmax };
        p.validate()?;
        Ok(p)
    }

    /// Bit width of `modulus`.
    pub fn bits_of(modulus: u64) -> usize {
        (64 - modulus.leading_zeros()) as usize
    }

    fn validate(&self) -> Result<()> {
        let BlockParams { n, a, modulus, kmax } = *self;
        if !(2..=MAX_BITS).contains(&n) {
            return Err(Error::InvalidParameter(format!("register width n = {n} outside 2..={MAX_BITS}")));
        }
        if modulus < 3 || modulus % 2 == 0 {
            return Err(Error::InvalidParameter(format!("modulus N = {modulus} must be odd and at least 3")));
        }
        if Self::bits_of(modulus) != n {
            return Err(Error::InvalidParameter(format!("modulus N = {modulus} is not an {n}-bit number")));
        }
        if a >= modulus {
            return Err(Error::InvalidParameter(format!("a = {a} must be smaller than N = {modulus}")));
        }
        if !(1..=n + 1).contains(&kmax) {
            return Err(Error::InvalidParameter(format!("kmax = {kmax} outside 1..={}", n + 1)));
        }
        Ok(())
    }

    pub(crate) fn require_coprime(&self) -> Result<()> {
        let g = gcd(self.a, self.modulus);
        if g != 1 {
            return Err(Error::NotCoprime { a: self.a, modulus: self.modulus, gcd: g });
        }
        Ok(())
    }

    pub(crate) fn metadata(&self, block: &str) -> BlockMetadata {
        BlockMetadata { block: block.into(), n: self.n, a: Some(self.a), modulus: Some(self.modulus), kmax: self.kmax }
    }
}

/// Emits the gate-wise inverse of whatever `emit` writes.
pub(crate) fn emit_inverse<F>(c: &mut Circuit, emit: F) -> Result<()>
where
    F: FnOnce(&mut Circuit) -> Result<()>,
{
    let mut scratch = Circuit::new(c.num_qubits(), 0)?;
    emit(&mut scratch)?;
    c.append(&invert_circuit(&scratch)?)
}
