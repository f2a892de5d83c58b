use crate::circuit::{Angle, BlockMetadata, Circuit};
use crate::error::{Error, Result};

use super::emit_inverse;

/// Swapless QFT on `reg` (least significant qubit first), dropping every
/// controlled rotation `R_k` with `k > kmax`.
pub fn emit_qft(c: &mut Circuit, reg: &[usize], kmax: usize) -> Result<()> {
    for i in (0..reg.len()).rev() {
        c.h(reg[i])?;
        for j in (0..i).rev() {
            let k = i - j + 1;
            if k <= kmax {
                c.phase(reg[i], &[reg[j]], Angle::rk(k as u32))?;
            }
        }
    }
    Ok(())
}

pub fn emit_iqft(c: &mut Circuit, reg: &[usize], kmax: usize) -> Result<()> {
    emit_inverse(c, |s| emit_qft(s, reg, kmax))
}

/// `m`-qubit (approximate) QFT without the terminal swap network.
pub fn build_qft(m: usize, kmax: usize) -> Result<Circuit> {
    if m == 0 || kmax == 0 {
        return Err(Error::InvalidParameter(format!("QFT needs m >= 1 and kmax >= 1, got m = {m}, kmax = {kmax}")));
    }
    let mut c = Circuit::new(m, 0)?;
    let reg: Vec<usize> = (0..m).collect();
    emit_qft(&mut c, &reg, kmax)?;
    Ok(c.with_metadata(BlockMetadata { block: "qft".into(), n: m, a: None, modulus: None, kmax }))
}
