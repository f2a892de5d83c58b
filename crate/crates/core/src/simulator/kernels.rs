//! In-place amplitude kernels.
//!
//! Every kernel acts on a slice covering basis indices `base..base+len`,
//! where `len` is a power of two larger than every target bit. Control bits
//! above the slice are resolved from `base`. Each amplitude (or amplitude
//! pair) is updated by the same arithmetic however the vector is chunked.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Op {
    /// Multiply every amplitude whose index contains `mask` by `phase`.
    Diagonal {
        mask: usize,
        phase: Complex64,
    },
    /// Bit flip of `target` where `controls` are all set.
    Flip {
        controls: usize,
        target: usize,
    },
    Hadamard {
        target: usize,
    },
    /// Exchange bits `p` and `q` where `controls` are all set.
    Exchange {
        controls: usize,
        p: usize,
        q: usize,
    },
}

impl Op {
    /// Highest bit that pairs amplitudes; chunks must be wider than this.
    pub(crate) fn pairing_bits(&self) -> usize {
        match *self {
            Op::Diagonal { .. } => 0,
            Op::Flip { target, .. } | Op::Hadamard { target } => target,
            Op::Exchange { p, q, .. } => p | q,
        }
    }

    pub(crate) fn apply(&self, amps: &mut [Complex64], base: usize) {
        let len = amps.len();
        let local = len - 1;
        let split = |mask: usize| -> Option<usize> {
            let high = mask & !local;
            (base & high == high).then_some(mask & local)
        };
        match *self {
            Op::Diagonal { mask, phase } => {
                let Some(ones) = split(mask) else { return };
                for_each_fixed(len, ones, 0, |i| amps[i] *= phase);
            }
            Op::Flip { controls, target } => {
                let Some(ones) = split(controls) else { return };
                for_each_fixed(len, ones, target, |i| amps.swap(i, i | target));
            }
            Op::Hadamard { target } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for_each_fixed(len, 0, target, |i| {
                    let (a, b) = (amps[i], amps[i | target]);
                    amps[i] = (a + b) * s;
                    amps[i | target] = (a - b) * s;
                });
            }
            Op::Exchange { controls, p, q } => {
                let Some(ones) = split(controls) else { return };
                for_each_fixed(len, ones | p, q, |i| amps.swap(i, i ^ p ^ q));
            }
        }
    }
}

/// Visits, in increasing order, every index below `len` with all bits of
/// `ones` set and all bits of `zeros` clear.
#[inline]
fn for_each_fixed(len: usize, ones: usize, zeros: usize, mut f: impl FnMut(usize)) {
    let fixed = ones | zeros;
    let mut i = ones;
    while i < len {
        f(i);
        i = (((i | fixed) + 1) & !zeros) | ones;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_bit_enumeration() {
        let mut seen = Vec::new();
        for_each_fixed(16, 0b0010, 0b1000, |i| seen.push(i));
        assert_eq!(seen, vec![0b0010, 0b0011, 0b0110, 0b0111]);
    }

    #[test]
    fn chunked_matches_whole() {
        let amps: Vec<Complex64> = (0..64).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let ops = [
            Op::Diagonal { mask: 0b100001, phase: Complex64::new(0.0, 1.0) },
            Op::Flip { controls: 0b100000, target: 0b10 },
            Op::Hadamard { target: 0b100 },
            Op::Exchange { controls: 0b010000, p: 0b1, q: 0b1000 },
        ];
        for op in ops {
            let mut whole = amps.clone();
            op.apply(&mut whole, 0);
            let mut chunked = amps.clone();
            for (ci, chunk) in chunked.chunks_mut(16).enumerate() {
                op.apply(chunk, ci * 16);
            }
            assert_eq!(whole, chunked, "{op:?}");
        }
    }
}
