//! Exhaustive small-instance checks of every block against classical oracles.
//!
//! Each suite simulates the generated circuits on basis inputs and compares
//! with plain integer arithmetic. A [`Fault`] can be injected into the
//! circuits before simulation to confirm the suites catch broken builders.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::{
    build_cc_phi_add_mod, build_cmult_mod, build_controlled_swap_register, build_controlled_ua, build_phi_add_const,
    build_qft, emit_iqft, emit_qft, BlockParams, Layout,
};
use crate::circuit::{invert_circuit, Circuit, GateKind};
use crate::error::{Error, Result};
use crate::numtheory::{continued_fraction_convergents, gcd, is_perfect_power, mod_inverse, mod_mul};
use crate::orderfind::run_semiclassical_order_finding;
use crate::simulator::{circuit_unitary, QuantumState, Simulator};

pub const SUITES: [&str; 8] = ["qft", "adder", "modadd", "cmult", "cswap", "cua", "numtheory", "orderfind"];

/// Minimum probability of the expected basis state.
pub const FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of every uncontrolled `Phase` angle.
    NegatePhase,
}

impl Fault {
    fn apply(self, c: Circuit) -> Circuit {
        match self {
            Fault::None => c,
            Fault::NegatePhase => {
                let mut out = Circuit::new(c.num_qubits(), c.num_clbits()).expect("nonzero width");
                for g in c.gates() {
                    let mut g = g.clone();
                    if g.kind == GateKind::Phase {
                        g.angle = g.angle.map(|a| -a);
                    }
                    out.push(g).expect("gate was valid before");
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally { report: SuiteReport { name: name.into(), checks: 0, failures: 0, first_failure: None } }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(describe());
            }
        }
    }
}

fn run_basis(sim: &Simulator, c: &Circuit, input: u64) -> Result<QuantumState> {
    sim.run_unitary(c, QuantumState::basis(c.num_qubits(), input)?)
}

/// `QFT · block · QFT⁻¹` on the register `reg`.
fn fourier_sandwich(block: &Circuit, reg: &[usize], kmax: usize) -> Result<Circuit> {
    let mut c = Circuit::new(block.num_qubits(), 0)?;
    emit_qft(&mut c, reg, kmax)?;
    c.append(block)?;
    emit_iqft(&mut c, reg, kmax)?;
    Ok(c)
}

fn bit_reverse(v: usize, bits: usize) -> usize {
    (0..bits).fold(0, |acc, i| acc | (((v >> i) & 1) << (bits - 1 - i)))
}

fn suite_qft(fault: Fault) -> Result<SuiteReport> {
    let mut t = Tally::new("qft");
    for m in 1..=6 {
        let u = circuit_unitary(&fault.apply(build_qft(m, m)?))?;
        let dim = 1usize << m;
        let scale = 1.0 / (dim as f64).sqrt();
        let mut worst: f64 = 0.0;
        for y in 0..dim {
            for b in 0..dim {
                let turns = ((b * bit_reverse(y, m)) % dim) as f64 / dim as f64;
                let expected = Complex64::from_polar(scale, TAU * turns);
                worst = worst.max((u[(y, b)] - expected).norm());
            }
        }
        t.check(worst <= 1e-8, || format!("QFT on {m} qubits deviates from the DFT by {worst:e}"));
    }
    Ok(t.report)
}

fn suite_adder(fault: Fault) -> Result<SuiteReport> {
    let sim = Simulator::default();
    let mut t = Tally::new("adder");
    for m in 2..=5usize {
        let reg: Vec<usize> = (0..m).collect();
        let modulus = 1u64 << m;
        for a in 0..modulus {
            let add = build_phi_add_const(m, a, 0)?;
            let forward = fault.apply(fourier_sandwich(&add, &reg, m)?);
            let reverse = fault.apply(fourier_sandwich(&invert_circuit(&add)?, &reg, m)?);
            for b in 0..modulus {
                let sum = (a + b) % modulus;
                let p = run_basis(&sim, &forward, b)?.probability(sum as usize);
                t.check(p >= FIDELITY, || format!("m={m}: {b} + {a} should be {sum}, P = {p:e}"));

                let diff = (b + modulus - a) % modulus;
                let out = run_basis(&sim, &reverse, b)?;
                let p = out.probability(diff as usize);
                t.check(p >= FIDELITY, || format!("m={m}: {b} - {a} should be {diff}, P = {p:e}"));
                if a < modulus / 2 && b < modulus / 2 {
                    let top = out.qubit_one_probability(m - 1);
                    let want_one = b < a;
                    let ok = if want_one { top >= FIDELITY } else { top <= 1e-9 };
                    t.check(ok, || format!("m={m}: overflow qubit of {b} - {a} has P(1) = {top:e}"));
                }
            }
        }
    }
    Ok(t.report)
}

fn suite_modadd(fault: Fault) -> Result<SuiteReport> {
    let sim = Simulator::default();
    let mut t = Tally::new("modadd");
    for modulus in (3..=15u64).step_by(2) {
        let n = BlockParams::bits_of(modulus);
        let reg: Vec<usize> = (0..=n).collect();
        let (ancilla, c1, c2) = (n + 1, n + 2, n + 3);
        for a in 0..modulus {
            let block = build_cc_phi_add_mod(n, a, modulus, n + 1)?;
            let circuit = fault.apply(fourier_sandwich(&block, &reg, n + 1)?);
            for b in 0..modulus {
                for ctrl in 0..4u64 {
                    let input = b | (ctrl & 1) << c1 | (ctrl >> 1) << c2;
                    let value = if ctrl == 3 { (a + b) % modulus } else { b };
                    let expected = (input & !((1 << ancilla) - 1)) | value;
                    let out = run_basis(&sim, &circuit, input)?;
                    let p = out.probability(expected as usize);
                    let stray = out.qubit_one_probability(ancilla);
                    t.check(p >= FIDELITY && stray <= 1e-9, || {
                        format!("N={modulus} a={a} b={b} controls={ctrl:02b}: P = {p:e}, ancilla P(1) = {stray:e}")
                    });
                }
            }
        }
    }
    Ok(t.report)
}

fn layout_index(layout: &Layout, x: u64, b: u64, ancilla: u64, control: u64) -> u64 {
    x | b << layout.n() | ancilla << layout.ancilla() | control << layout.control()
}

fn suite_cmult(fault: Fault) -> Result<SuiteReport> {
    let sim = Simulator::default();
    let mut t = Tally::new("cmult");
    for modulus in [5u64, 7, 11, 15] {
        let n = BlockParams::bits_of(modulus);
        let layout = Layout::new(n);
        for a in 0..modulus {
            let circuit = fault.apply(build_cmult_mod(n, a, modulus, n + 1)?);
            for x in 0..modulus {
                for b in [0, 1, modulus - 1] {
                    for c in 0..2u64 {
                        let input = layout_index(&layout, x, b, 0, c);
                        let out_b = if c == 1 { (b + mod_mul(a, x, modulus)) % modulus } else { b };
                        let expected = layout_index(&layout, x, out_b, 0, c);
                        let p = run_basis(&sim, &circuit, input)?.probability(expected as usize);
                        t.check(p >= FIDELITY, || {
                            format!("N={modulus} a={a} x={x} b={b} c={c}: expected b'={out_b}, P = {p:e}")
                        });
                    }
                }
            }
        }
    }
    Ok(t.report)
}

fn suite_cswap(fault: Fault) -> Result<SuiteReport> {
    let sim = Simulator::default();
    let mut t = Tally::new("cswap");
    for n in 1..=4usize {
        let layout = Layout::new(n);
        let circuit = fault.apply(build_controlled_swap_register(n)?);
        for x in 0..1u64 << n {
            for y in 0..1u64 << n {
                for c in 0..2u64 {
                    let input = layout_index(&layout, x, y, 0, c);
                    let (ox, oy) = if c == 1 { (y, x) } else { (x, y) };
                    let expected = layout_index(&layout, ox, oy, 0, c);
                    let p = run_basis(&sim, &circuit, input)?.probability(expected as usize);
                    t.check(p >= FIDELITY, || format!("n={n} x={x} y={y} c={c}: P = {p:e}"));
                }
            }
        }
    }
    Ok(t.report)
}

fn suite_cua(fault: Fault) -> Result<SuiteReport> {
    let sim = Simulator::default();
    let mut t = Tally::new("cua");
    for modulus in [7u64, 9, 11, 13, 15] {
        let n = BlockParams::bits_of(modulus);
        let layout = Layout::new(n);
        for a in (1..modulus).filter(|&a| gcd(a, modulus) == 1) {
            let circuit = fault.apply(build_controlled_ua(n, a, modulus, n + 1)?);
            for x in 0..modulus {
                for c in 0..2u64 {
                    let input = layout_index(&layout, x, 0, 0, c);
                    let ox = if c == 1 { mod_mul(a, x, modulus) } else { x };
                    let expected = layout_index(&layout, ox, 0, 0, c);
                    let p = run_basis(&sim, &circuit, input)?.probability(expected as usize);
                    t.check(p >= FIDELITY, || format!("N={modulus} a={a} x={x} c={c}: expected {ox}, P = {p:e}"));
                }
            }
        }
    }
    Ok(t.report)
}

fn suite_numtheory() -> Result<SuiteReport> {
    let mut t = Tally::new("numtheory");
    for n in 2..=200u64 {
        for a in 1..n {
            match mod_inverse(a, n) {
                Some(inv) => t.check(mod_mul(a, inv, n) == 1, || format!("{a}^-1 mod {n} = {inv} is wrong")),
                None => t.check(gcd(a, n) > 1, || format!("{a} is invertible mod {n} but no inverse found")),
            }
        }
        let brute = (2..n).find_map(|p| {
            let mut v = p;
            let mut q = 1;
            while v < n {
                v *= p;
                q += 1;
            }
            (v == n && q >= 2).then_some((p, q))
        });
        t.check(is_perfect_power(n) == brute, || format!("perfect-power test wrong for {n}"));
    }
    for den in [16u64, 256, 1024] {
        for num in 0..den {
            let last = *continued_fraction_convergents(num, den).last().expect("non-empty");
            let g = gcd(num, den);
            t.check(last == (num / g, den / g), || format!("last convergent of {num}/{den} is {last:?}"));
        }
    }
    Ok(t.report)
}

fn suite_orderfind() -> Result<SuiteReport> {
    let mut t = Tally::new("orderfind");
    for seed in 0..16 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rec = run_semiclassical_order_finding(15, 7, None, &mut rng)?;
        t.check(rec.m % 64 == 0, || format!("seed {seed}: N=15 a=7 measured m = {}", rec.m));
    }
    Ok(t.report)
}

pub fn run_suite(name: &str, fault: Fault) -> Result<SuiteReport> {
    match name {
        "qft" => suite_qft(fault),
        "adder" => suite_adder(fault),
        "modadd" => suite_modadd(fault),
        "cmult" => suite_cmult(fault),
        "cswap" => suite_cswap(fault),
        "cua" => suite_cua(fault),
        "numtheory" => suite_numtheory(),
        "orderfind" => suite_orderfind(),
        other => {
            Err(Error::InvalidParameter(format!("unknown suite '{other}', expected one of {}", SUITES.join(", "))))
        }
    }
}
