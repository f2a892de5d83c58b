//! Semiclassical order finding with a single, recycled control qubit.
//!
//! Stage `i` (of `2n`) puts the control in |+⟩, applies C-U with multiplier
//! `a^{2^j} mod N` for `j = 2n-1-i`, undoes the contribution of the bits
//! already measured with classically conditioned phases, and measures in the
//! X basis. The first measured bit is the least significant bit of the phase
//! numerator `m`, so the phase estimate is `m / 2^{2n}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{emit_controlled_ua, BlockParams, Layout};
use crate::circuit::{Angle, BlockMetadata, Circuit};
use crate::error::{Error, Result};
use crate::numtheory::{continued_fraction_convergents, gcd, mod_exp, mod_mul};
use crate::simulator::{QuantumState, Simulator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub n: usize,
    /// Measured bits in measurement order.
    pub bits: Vec<u8>,
    /// `Σ bits[i]·2^i`.
    pub m: u64,
    /// `m / 2^{2n}`.
    pub phase: f64,
}

impl MeasurementRecord {
    pub fn from_bits(n: usize, bits: Vec<u8>) -> MeasurementRecord {
        assert_eq!(bits.len(), 2 * n, "expected 2n measured bits");
        let m = bits.iter().enumerate().map(|(i, &b)| u64::from(b) << i).sum();
        MeasurementRecord { n, phase: m as f64 / (1u64 << (2 * n)) as f64, bits, m }
    }

    /// Record for a known phase numerator, as if read out bit by bit.
    pub fn from_numerator(n: usize, m: u64) -> MeasurementRecord {
        MeasurementRecord::from_bits(n, (0..2 * n).map(|i| ((m >> i) & 1) as u8).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    pub r: Option<u64>,
    pub record: MeasurementRecord,
    pub validated: bool,
}

/// Flat JSON form `{bits, m, phase, r, validated}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub bits: Vec<u8>,
    pub m: u64,
    pub phase: f64,
    pub r: Option<u64>,
    pub validated: bool,
}

impl From<&OrderResult> for OrderReport {
    fn from(o: &OrderResult) -> Self {
        OrderReport {
            bits: o.record.bits.clone(),
            m: o.record.m,
            phase: o.record.phase,
            r: o.r,
            validated: o.validated,
        }
    }
}

/// Exact correction applied before the `i`-th X-basis measurement, where
/// `i = previous_bits.len()`: `-Σ_{k=1..i} m_{i-k} / 2^{k+1}` turns.
pub fn feedback_turns(previous_bits: &[u8]) -> Angle {
    let i = previous_bits.len();
    (1..=i).filter(|&k| previous_bits[i - k] == 1).fold(Angle::ZERO, |acc, k| acc + -Angle::turns(1, k as u32 + 1))
}

pub fn feedback_angle(previous_bits: &[u8]) -> f64 {
    let i = previous_bits.len();
    -std::f64::consts::TAU * (1..=i).map(|k| f64::from(previous_bits[i - k]) / 2f64.powi(k as i32 + 1)).sum::<f64>()
}

/// Validated parameters of one order-finding run.
#[derive(Clone, Copy, Debug)]
pub struct OrderFindingParams {
    pub modulus: u64,
    pub a: u64,
    pub n: usize,
    pub kmax: usize,
}

impl OrderFindingParams {
    /// `kmax = None` selects the exact QFT.
    pub fn new(modulus: u64, a: u64, kmax: Option<usize>) -> Result<OrderFindingParams> {
        let n = BlockParams::bits_of(modulus);
        let kmax = kmax.unwrap_or(n + 1);
        BlockParams::new(n, a, modulus, kmax)?;
        if a < 2 {
            return Err(Error::InvalidParameter(format!("base a = {a} must satisfy 1 < a < N")));
        }
        let g = gcd(a, modulus);
        if g != 1 {
            return Err(Error::NotCoprime { a, modulus, gcd: g });
        }
        Ok(OrderFindingParams { modulus, a, n, kmax })
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.n)
    }

    pub fn num_measurements(&self) -> usize {
        2 * self.n
    }

    /// `a^{2^j} mod N` for `j = 0..2n`.
    pub fn multipliers(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.num_measurements());
        let mut x = self.a;
        for _ in 0..self.num_measurements() {
            out.push(x);
            x = mod_mul(x, x, self.modulus);
        }
        out
    }
}

/// Sets the x-register to |1⟩.
pub fn build_preparation(p: &OrderFindingParams) -> Result<Circuit> {
    let layout = p.layout();
    let mut c = Circuit::new(layout.width(), p.num_measurements())?;
    c.x(layout.x()[0])?;
    Ok(c)
}

/// Stage `i` of the semiclassical loop, writing classical bit `i`.
pub fn build_stage(p: &OrderFindingParams, i: usize, multiplier: u64) -> Result<Circuit> {
    let layout = p.layout();
    let ctrl = layout.control();
    let mut c = Circuit::new(layout.width(), p.num_measurements())?;
    c.h(ctrl)?;
    emit_controlled_ua(&mut c, &layout, multiplier, p.modulus, p.kmax)?;
    for k in 1..=i {
        c.classical_phase(ctrl, -Angle::turns(1, k as u32 + 1), i - k)?;
    }
    c.h(ctrl)?;
    c.measure(ctrl, i)?;
    c.classical_x(ctrl, i)?;
    Ok(c)
}

fn build_stages(p: &OrderFindingParams) -> Result<Vec<Circuit>> {
    let multipliers = p.multipliers();
    let total = p.num_measurements();
    (0..total).map(|i| build_stage(p, i, multipliers[total - 1 - i])).collect()
}

/// The whole `2n+3`-qubit order-finding circuit with `2n` classical bits.
pub fn build_order_finding_circuit(modulus: u64, a: u64, kmax: Option<usize>) -> Result<Circuit> {
    let p = OrderFindingParams::new(modulus, a, kmax)?;
    let mut c = build_preparation(&p)?;
    for stage in build_stages(&p)? {
        c.append(&stage)?;
    }
    Ok(c.with_metadata(BlockMetadata {
        block: "order_finding".into(),
        n: p.n,
        a: Some(a),
        modulus: Some(modulus),
        kmax: p.kmax,
    }))
}

/// A run plus the control qubit's P(1) after each reset.
#[derive(Clone, Debug)]
pub struct OrderFindingTrace {
    pub record: MeasurementRecord,
    pub control_residuals: Vec<f64>,
    pub qubits: usize,
}

pub fn run_semiclassical_order_finding_traced<R: Rng + ?Sized>(
    sim: &Simulator,
    modulus: u64,
    a: u64,
    kmax: Option<usize>,
    rng: &mut R,
) -> Result<OrderFindingTrace> {
    let p = OrderFindingParams::new(modulus, a, kmax)?;
    let layout = p.layout();
    let prep = build_preparation(&p)?;
    let stages = build_stages(&p)?;
    let mut run = sim.run_circuit(&prep, QuantumState::basis(layout.width(), 0)?, rng)?;
    let mut control_residuals = Vec::with_capacity(stages.len());
    for stage in &stages {
        run = sim.run_circuit_with_clbits(stage, run.final_state, run.clbits, rng)?;
        control_residuals.push(run.final_state.qubit_one_probability(layout.control()));
    }
    Ok(OrderFindingTrace {
        record: MeasurementRecord::from_bits(p.n, run.clbits),
        control_residuals,
        qubits: layout.width(),
    })
}

/// One semiclassical order-finding run for `a` modulo `N`.
pub fn run_semiclassical_order_finding<R: Rng + ?Sized>(
    modulus: u64,
    a: u64,
    kmax: Option<usize>,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    Ok(run_semiclassical_order_finding_traced(&Simulator::default(), modulus, a, kmax, rng)?.record)
}

/// Continued-fraction postprocessing: the first convergent denominator
/// `0 < q < N` (in increasing order) with `a^q = 1 mod N`.
pub fn phase_to_order(record: &MeasurementRecord, modulus: u64, a: u64) -> OrderResult {
    let absent = || OrderResult { r: None, record: record.clone(), validated: false };
    if record.m == 0 {
        return absent();
    }
    let den = 1u64 << (2 * record.n);
    let mut last_q = 0;
    for (_, q) in continued_fraction_convergents(record.m, den) {
        if q == last_q || q >= modulus {
            continue;
        }
        last_q = q;
        if mod_exp(a, q, modulus) == 1 {
            return OrderResult { r: Some(q), record: record.clone(), validated: true };
        }
    }
    absent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn feedback_examples() {
        assert_eq!(feedback_angle(&[]), 0.0);
        assert!((feedback_angle(&[1]) + FRAC_PI_2).abs() < 1e-15);
        assert!((feedback_angle(&[1, 0]) + FRAC_PI_4).abs() < 1e-15);
        assert_eq!(feedback_turns(&[1, 0]), Angle::turns(-1, 3));
    }

    #[test]
    fn feedback_exact_matches_float() {
        for bits in 0u32..256 {
            let prev: Vec<u8> = (0..8).map(|i| ((bits >> i) & 1) as u8).collect();
            assert!((feedback_turns(&prev).radians() - feedback_angle(&prev)).abs() < 1e-12);
        }
    }

    #[test]
    fn stage_gates_sum_to_feedback() {
        let p = OrderFindingParams::new(15, 7, None).unwrap();
        let stage = build_stage(&p, 3, 1).unwrap();
        let prev = [1u8, 0, 1];
        let total = stage
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::ClassicalPhase && prev[g.condition.unwrap()] == 1)
            .fold(Angle::ZERO, |acc, g| acc + g.angle.unwrap());
        assert_eq!(total, feedback_turns(&prev));
    }

    #[test]
    fn postprocessing_examples() {
        let rec = MeasurementRecord::from_numerator(4, 192);
        assert_eq!(rec.phase, 0.75);
        let out = phase_to_order(&rec, 15, 7);
        assert_eq!((out.r, out.validated), (Some(4), true));

        let out = phase_to_order(&MeasurementRecord::from_numerator(4, 0), 15, 7);
        assert_eq!(out.r, None);
        assert!(!out.validated);

        // 85/256 has convergent 1/3, but 7^3 = 13 mod 15.
        assert_eq!(mod_exp(7, 3, 15), 13);
        assert_eq!(phase_to_order(&MeasurementRecord::from_numerator(4, 85), 15, 7).r, None);
    }

    #[test]
    fn record_bit_significance() {
        let rec = MeasurementRecord::from_bits(2, vec![0, 0, 0, 1]);
        assert_eq!(rec.m, 8);
        assert_eq!(rec.phase, 0.5);
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(OrderFindingParams::new(15, 5, None), Err(Error::NotCoprime { gcd: 5, .. })));
        assert!(OrderFindingParams::new(15, 1, None).is_err());
        assert!(OrderFindingParams::new(15, 15, None).is_err());
        assert!(OrderFindingParams::new(16, 3, None).is_err());
    }

    #[test]
    fn circuit_shape_for_fifteen() {
        let c = build_order_finding_circuit(15, 7, None).unwrap();
        assert_eq!(c.num_qubits(), 11);
        assert_eq!(c.num_clbits(), 8);
        assert_eq!(c.gates().iter().filter(|g| g.kind == GateKind::Measure).count(), 8);
    }

    #[test]
    fn order_two_base() {
        // 4 has order 2 mod 15: the phase is 0 or 1/2 exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            let rec = run_semiclassical_order_finding(15, 4, None, &mut rng).unwrap();
            assert!(rec.m == 0 || rec.m == 128, "m = {}", rec.m);
        }
    }

    #[test]
    fn control_is_reset_every_stage() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trace = run_semiclassical_order_finding_traced(&Simulator::default(), 15, 7, None, &mut rng).unwrap();
        assert_eq!(trace.qubits, 11);
        assert_eq!(trace.control_residuals.len(), 8);
        assert!(trace.control_residuals.iter().all(|&p| p <= 1e-9));
    }
}
