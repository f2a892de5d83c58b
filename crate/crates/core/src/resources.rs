//! Exact resource accounting for the full order-finding circuit.
//!
//! For `n <= 12` the circuit is constructed and counted gate by gate. Above
//! that, gate counts come from the closed-form totals of the construction
//! (checked against constructed counts in the tests) and the depth is a
//! power-law extrapolation; such reports are flagged.

use serde::{Deserialize, Serialize};

use crate::blocks::build_phi_add_const;
use crate::circuit::{circuit_depth, count_gates, GateCounts, GateKind};
use crate::error::{Error, Result};
use crate::orderfind::build_order_finding_circuit;

/// Largest `n` counted by construction.
pub const MAX_CONSTRUCTED_N: usize = 12;
/// Largest `n` accepted in extrapolation mode.
pub const MAX_EXTRAPOLATED_N: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingMode {
    Constructed,
    Extrapolated,
}

/// Reference values next to the measured ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Predicted {
    /// `2n + 3`.
    pub qubits: usize,
    /// Closed-form total of the construction.
    pub gates_closed_form: usize,
    /// `n^3 · kmax`, the leading gate-count scale.
    pub gates_scale: f64,
    /// `n^3`, the claimed depth scale.
    pub depth_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n: usize,
    pub kmax: usize,
    pub qubits: usize,
    pub gate_counts: GateCounts,
    pub gates_total: usize,
    pub depth: usize,
    pub mode: CountingMode,
    pub predicted: Predicted,
}

/// Representative odd `n`-bit modulus and base; the circuit's shape does not
/// depend on their values.
fn representative(n: usize) -> (u64, u64) {
    ((1u64 << (n - 1)) + 1, 2)
}

fn qft_rotations(m: usize, kmax: usize) -> usize {
    (0..m).map(|i| i.min(kmax.saturating_sub(1))).sum()
}

/// Per-kind totals of the order-finding circuit, from its structure alone.
pub fn closed_form_counts(n: usize, kmax: usize) -> GateCounts {
    let m = n + 1;
    let stages = 2 * n;
    let rot = qft_rotations(m, kmax);
    // One multiplier: n modular adders plus a QFT pair on the b-register.
    // Each adder holds three doubly controlled φADD(a), one plain and one
    // ancilla-controlled φADD(N), four transforms, two CNOTs and two NOTs.
    let mut mult = GateCounts::default();
    mult.add(GateKind::CCPhase, n * 3 * m);
    mult.add(GateKind::Phase, n * m);
    mult.add(GateKind::CPhase, n * (m + 4 * rot) + 2 * rot);
    mult.add(GateKind::H, n * 4 * m + 2 * m);
    mult.add(GateKind::Cnot, 2 * n);
    mult.add(GateKind::X, 2 * n);

    let mut stage = GateCounts::default();
    stage.accumulate(&mult, 2);
    stage.add(GateKind::Cnot, 2 * n);
    stage.add(GateKind::Toffoli, n);
    stage.add(GateKind::H, 2);
    stage.add(GateKind::Measure, 1);
    stage.add(GateKind::ClassicalX, 1);

    let mut total = GateCounts::default();
    total.accumulate(&stage, stages);
    total.add(GateKind::ClassicalPhase, stages * (stages - 1) / 2);
    total.add(GateKind::X, 1);
    total
}

fn predicted(n: usize, kmax: usize) -> Predicted {
    let nf = n as f64;
    Predicted {
        qubits: 2 * n + 3,
        gates_closed_form: closed_form_counts(n, kmax).total(),
        gates_scale: nf.powi(3) * kmax as f64,
        depth_scale: nf.powi(3),
    }
}

fn check_range(n: usize, kmax: usize) -> Result<()> {
    if !(2..=MAX_EXTRAPOLATED_N).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} outside 2..={MAX_EXTRAPOLATED_N}")));
    }
    if !(1..=n + 1).contains(&kmax) {
        return Err(Error::InvalidParameter(format!("kmax = {kmax} outside 1..={}", n + 1)));
    }
    Ok(())
}

/// Qubits, per-kind gate counts and greedy depth of the order-finding circuit
/// for an `n`-bit modulus.
pub fn estimate(n: usize, kmax: usize) -> Result<ResourceReport> {
    check_range(n, kmax)?;
    if n > MAX_CONSTRUCTED_N {
        return extrapolate(n, kmax);
    }
    let (modulus, a) = representative(n);
    let circuit = build_order_finding_circuit(modulus, a, Some(kmax))?;
    let gate_counts = count_gates(&circuit);
    Ok(ResourceReport {
        n,
        kmax,
        qubits: circuit.num_qubits(),
        gates_total: gate_counts.total(),
        gate_counts,
        depth: circuit_depth(&circuit),
        mode: CountingMode::Constructed,
        predicted: predicted(n, kmax),
    })
}

fn extrapolate(n: usize, kmax: usize) -> Result<ResourceReport> {
    // Fit depth ~ c·n^p on the largest constructed sizes with the same kmax
    // (capped at each size's exact transform).
    let points: Vec<(f64, f64)> = (8..=MAX_CONSTRUCTED_N)
        .map(|m| estimate(m, kmax.min(m + 1)).map(|r| (m as f64, r.depth as f64)))
        .collect::<Result<_>>()?;
    let fit = log_log_fit(&points);
    let gate_counts = closed_form_counts(n, kmax);
    Ok(ResourceReport {
        n,
        kmax,
        qubits: 2 * n + 3,
        gates_total: gate_counts.total(),
        gate_counts,
        depth: (fit.coefficient * (n as f64).powf(fit.exponent)).round() as usize,
        mode: CountingMode::Extrapolated,
        predicted: predicted(n, kmax),
    })
}

/// `kmax` as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KmaxRule {
    Exact,
    /// `ceil(lg n) + 2`, capped at the exact transform.
    Logarithmic,
    Fixed(usize),
}

impl KmaxRule {
    pub fn kmax_for(self, n: usize) -> usize {
        let k = match self {
            KmaxRule::Exact => n + 1,
            KmaxRule::Logarithmic => n.next_power_of_two().trailing_zeros() as usize + 2,
            KmaxRule::Fixed(k) => k,
        };
        k.clamp(1, n + 1)
    }
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub coefficient: f64,
    /// RMS residual in log space.
    pub residual: f64,
}

pub fn log_log_fit(points: &[(f64, f64)]) -> PowerFit {
    assert!(points.len() >= 2, "need at least two points to fit");
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (logs.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum::<f64>() / k).sqrt();
    PowerFit { exponent, coefficient: intercept.exp(), residual }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rule: KmaxRule,
    pub reports: Vec<ResourceReport>,
    pub gates: PowerFit,
    pub depth: PowerFit,
}

/// Fitted growth exponents of gate count and depth in `n`.
pub fn scaling_report(n_values: &[usize], rule: KmaxRule) -> Result<ScalingReport> {
    if n_values.len() < 3 {
        return Err(Error::InvalidParameter("scaling fit needs at least three values of n".into()));
    }
    let reports: Vec<ResourceReport> =
        n_values.iter().map(|&n| estimate(n, rule.kmax_for(n))).collect::<Result<_>>()?;
    let gates: Vec<(f64, f64)> = reports.iter().map(|r| (r.n as f64, r.gates_total as f64)).collect();
    let depth: Vec<(f64, f64)> = reports.iter().map(|r| (r.n as f64, r.depth as f64)).collect();
    Ok(ScalingReport { rule, gates: log_log_fit(&gates), depth: log_log_fit(&depth), reports })
}

/// Depth growth of the singly controlled φADD on `n+1` qubits.
pub fn controlled_phi_add_depth_fit(n_values: &[usize]) -> Result<PowerFit> {
    let points: Vec<(f64, f64)> = n_values
        .iter()
        .map(|&n| build_phi_add_const(n + 1, 1, 1).map(|c| (n as f64, circuit_depth(&c) as f64)))
        .collect::<Result<_>>()?;
    Ok(log_log_fit(&points))
}

pub const CSV_HEADER: &str = "n,kmax,qubits,gates_total,depth";

pub fn csv_row(r: &ResourceReport) -> String {
    format!("{},{},{},{},{}", r.n, r.kmax, r.qubits, r.gates_total, r.depth)
}

pub fn to_csv(reports: &[ResourceReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}
