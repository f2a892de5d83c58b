#![allow(dead_code)]

use num_complex::Complex64;
use shor_core::circuit::{Circuit, Gate, GateKind};

pub const FIDELITY: f64 = 1.0 - 1e-9;

/// Straightforward per-basis-state gate application, written without the
/// simulator's bitmask kernels so the two can be compared.
pub fn naive_apply(state: &[Complex64], g: &Gate) -> Vec<Complex64> {
    let bit = |i: usize, q: usize| (i >> q) & 1 == 1;
    let controls_on = |i: usize| g.controls.iter().all(|&c| bit(i, c));
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (i, &amp) in state.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        match g.kind {
            GateKind::H => {
                let t = g.targets[0];
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let sign = if bit(i, t) { -1.0 } else { 1.0 };
                out[i & !(1 << t)] += amp * s;
                out[i | (1 << t)] += amp * s * sign;
            }
            GateKind::X | GateKind::Cnot | GateKind::Toffoli => {
                let j = if controls_on(i) { i ^ (1 << g.targets[0]) } else { i };
                out[j] += amp;
            }
            GateKind::Swap | GateKind::CSwap => {
                let (p, q) = (g.targets[0], g.targets[1]);
                let j = if controls_on(i) && bit(i, p) != bit(i, q) { i ^ (1 << p) ^ (1 << q) } else { i };
                out[j] += amp;
            }
            GateKind::Phase | GateKind::CPhase | GateKind::CCPhase => {
                let theta = g.angle.expect("phase gate has an angle").radians();
                let on = controls_on(i) && bit(i, g.targets[0]);
                out[i] += if on { amp * Complex64::from_polar(1.0, theta) } else { amp };
            }
            other => panic!("naive oracle does not handle {other:?}"),
        }
    }
    out
}

pub fn naive_run(c: &Circuit, input: usize) -> Vec<Complex64> {
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << c.num_qubits()];
    state[input] = Complex64::new(1.0, 0.0);
    for g in c.gates() {
        state = naive_apply(&state, g);
    }
    state
}

/// Basis index for the `x | b | ancilla | control` register layout.
pub fn layout_index(n: usize, x: u64, b: u64, ancilla: u64, control: u64) -> usize {
    (x | b << n | ancilla << (2 * n + 1) | control << (2 * n + 2)) as usize
}

pub fn bit_reverse(v: usize, bits: usize) -> usize {
    (0..bits).fold(0, |acc, i| acc | (((v >> i) & 1) << (bits - 1 - i)))
}

/// `QFT_M` under the swapless convention: `U[y][b] = ω^{b · rev(y)} / √M`.
pub fn dft_entry(m: usize, y: usize, b: usize) -> Complex64 {
    let dim = 1usize << m;
    let turns = ((b * bit_reverse(y, m)) % dim) as f64 / dim as f64;
    Complex64::from_polar(1.0 / (dim as f64).sqrt(), std::f64::consts::TAU * turns)
}

/// Gate total of the order-finding circuit, counted by hand from the block
/// structure (independent of the library's own closed form).
pub fn hand_count(n: usize, kmax: usize) -> usize {
    let m = n + 1;
    let qft = m + (0..m).map(|i| i.min(kmax - 1)).sum::<usize>();
    let modadd = 3 * m + m + m + 4 * qft + 2 + 2;
    let cmult = 2 * qft + n * modadd;
    let cua = 2 * cmult + 3 * n;
    let stages = 2 * n;
    1 + stages * (cua + 4) + stages * (stages - 1) / 2
}

/// Largest singular value of `a − b` by power iteration on `D†D`.
pub fn operator_distance(a: &ndarray::Array2<Complex64>, b: &ndarray::Array2<Complex64>) -> f64 {
    let d = a - b;
    let dh = d.t().mapv(|z| z.conj());
    let dim = d.nrows();
    let mut v = ndarray::Array1::from_shape_fn(dim, |i| Complex64::new(1.0 + (i % 7) as f64, (i % 3) as f64 - 1.0));
    let mut sigma2: f64 = 0.0;
    for iter in 0..2000 {
        let w = dh.dot(&d.dot(&v));
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / vnorm;
        let settled = iter >= 20 && (next - sigma2).abs() <= 1e-12 * next;
        sigma2 = next;
        v = w.mapv(|z| z / norm);
        if settled {
            break;
        }
    }
    sigma2.sqrt()
}

fn apply_scaled(sim: &shor_core::simulator::Simulator, c: &Circuit, v: &[Complex64]) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v.to_vec();
    }
    let unit = shor_core::simulator::QuantumState::from_amplitudes(v.iter().map(|z| z / norm).collect()).unwrap();
    sim.run_unitary(c, unit).unwrap().amplitudes().iter().map(|z| z * norm).collect()
}

/// Same quantity as [`operator_distance`], applying the circuits to vectors
/// instead of forming their matrices.
pub fn circuit_distance(a: &Circuit, b: &Circuit) -> f64 {
    let sim = shor_core::simulator::Simulator::default();
    let (ai, bi) = (shor_core::circuit::invert_circuit(a).unwrap(), shor_core::circuit::invert_circuit(b).unwrap());
    let diff = |x: &Circuit, y: &Circuit, v: &[Complex64]| -> Vec<Complex64> {
        apply_scaled(&sim, x, v).iter().zip(apply_scaled(&sim, y, v)).map(|(p, q)| p - q).collect()
    };
    let dim = 1usize << a.num_qubits();
    let mut v: Vec<Complex64> = (0..dim).map(|i| Complex64::new(1.0 + (i % 7) as f64, (i % 3) as f64 - 1.0)).collect();
    let n0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n0);
    let mut sigma2: f64 = 0.0;
    for iter in 0..2000 {
        let w = diff(&ai, &bi, &diff(a, b, &v));
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let settled = iter >= 20 && (norm - sigma2).abs() <= 1e-12 * norm;
        sigma2 = norm;
        v = w.iter().map(|z| z / norm).collect();
        if settled {
            break;
        }
    }
    sigma2.sqrt()
}
