mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shor_core::circuit::{Angle, Circuit};
use shor_core::numtheory::*;
use shor_core::orderfind::*;
use shor_core::simulator::{init_basis_state, measure_qubit, run_circuit, QuantumState, Simulator};

fn brute_inverse(a: u64, n: u64) -> Option<u64> {
    (1..n).find(|&x| (a * x) % n == 1)
}

fn slow_pow(a: u64, k: u64, n: u64) -> u64 {
    (0..k).fold(1 % n, |acc, _| acc * a % n)
}

#[test]
fn number_theory_examples() {
    assert_eq!(gcd(48, 18), 6);
    assert_eq!(gcd(17, 1), 1);
    assert_eq!(gcd(21, 7), 7);
    assert_eq!(mod_inverse(7, 15), Some(13));
    assert_eq!(mod_inverse(1, 11), Some(1));
    assert_eq!(mod_inverse(4, 9), Some(7));
    assert_eq!(mod_inverse(6, 9), None);
    assert_eq!(mod_exp(7, 4, 15), 1);
    assert_eq!(mod_exp(5, 0, 13), 1);
    assert_eq!(mod_exp(2, 10, 33), 1);
    assert_eq!(is_perfect_power(27), Some((3, 3)));
    assert_eq!(is_perfect_power(15), None);
    assert_eq!(is_perfect_power(4), Some((2, 2)));
    assert_eq!(continued_fraction_convergents(3, 4), vec![(0, 1), (1, 1), (3, 4)]);
    assert_eq!(continued_fraction_convergents(0, 256), vec![(0, 1)]);
    assert!(continued_fraction_convergents(85, 256).contains(&(1, 3)));
}

#[test]
fn inverses_and_powers_match_brute_force() {
    for n in 2..=120u64 {
        for a in 0..n {
            assert_eq!(mod_inverse(a, n), brute_inverse(a, n), "{a} mod {n}");
            for k in [0, 1, 2, 7, 30] {
                assert_eq!(mod_exp(a, k, n), slow_pow(a, k, n));
            }
        }
    }
}

#[test]
fn large_moduli_do_not_overflow() {
    let p = (1u64 << 61) - 1;
    assert_eq!(mod_exp(3, p - 1, p), 1);
    let inv = mod_inverse(123_456_789, p).unwrap();
    assert_eq!(mod_mul(inv, 123_456_789, p), 1);
}

#[test]
fn simulator_examples() {
    let s = init_basis_state(2, 0).unwrap();
    assert_eq!(s.amplitude(0), Complex64::new(1.0, 0.0));
    let s = init_basis_state(3, 5).unwrap();
    assert_eq!(s.probability(0b101), 1.0);
    assert!(init_basis_state(2, 4).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut h = Circuit::new(1, 0).unwrap();
    h.h(0).unwrap();
    let out = run_circuit(&h, init_basis_state(1, 0).unwrap(), &mut rng).unwrap().final_state;
    assert!((out.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((out.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);

    let mut cx = Circuit::new(2, 0).unwrap();
    cx.cnot(0, 1).unwrap();
    let out = run_circuit(&cx, init_basis_state(2, 0b01).unwrap(), &mut rng).unwrap().final_state;
    assert_eq!(out.probability(0b11), 1.0);

    let mut ph = Circuit::new(1, 0).unwrap();
    ph.phase(0, &[], Angle::turns(1, 1)).unwrap();
    let out = run_circuit(&ph, init_basis_state(1, 1).unwrap(), &mut rng).unwrap().final_state;
    assert!((out.amplitude(1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

    let empty = Circuit::new(3, 0).unwrap();
    let start = init_basis_state(3, 6).unwrap();
    assert_eq!(run_circuit(&empty, start.clone(), &mut rng).unwrap().final_state, start);

    let mut xm = Circuit::new(1, 1).unwrap();
    xm.x(0).unwrap();
    xm.measure(0, 0).unwrap();
    assert_eq!(run_circuit(&xm, init_basis_state(1, 0).unwrap(), &mut rng).unwrap().clbits, vec![1]);
}

#[test]
fn measurement_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut one = init_basis_state(1, 1).unwrap();
    assert_eq!(measure_qubit(&mut one, 0, &mut rng).unwrap(), 1);
    assert_eq!(one.probability(1), 1.0);

    let plus = QuantumState::from_amplitudes(vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
    let outcome = |seed| {
        let mut s = plus.clone();
        measure_qubit(&mut s, 0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    };
    let seen: Vec<u8> = (0..32).map(outcome).collect();
    assert_eq!(seen, (0..32).map(outcome).collect::<Vec<_>>());
    assert!(seen.contains(&0) && seen.contains(&1));

    let mut s = plus.clone();
    let first = measure_qubit(&mut s, 0, &mut rng).unwrap();
    let after = s.clone();
    for _ in 0..5 {
        assert_eq!(measure_qubit(&mut s, 0, &mut rng).unwrap(), first);
        assert_eq!(s, after);
    }
}

#[test]
fn norm_survives_long_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 10;
    let mut c = Circuit::new(n, 0).unwrap();
    while c.len() < 100_000 {
        let q = rng.gen_range(0..n);
        let r = (q + rng.gen_range(1..n)) % n;
        match rng.gen_range(0..4) {
            0 => c.h(q).unwrap(),
            1 => c.cnot(r, q).unwrap(),
            2 => c.phase(q, &[r], Angle::turns(rng.gen_range(-64..64), 6)).unwrap(),
            _ => c.phase(q, &[], Angle::turns(rng.gen_range(-1024..1024), 10)).unwrap(),
        }
    }
    let s = Simulator::default().run_unitary(&c, init_basis_state(n, 3).unwrap()).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-9, "norm drift {:e}", s.norm_sqr() - 1.0);
}

#[test]
fn feedback_examples() {
    assert_eq!(feedback_angle(&[]), 0.0);
    assert!((feedback_angle(&[1]) + PI / 2.0).abs() < 1e-15);
    assert!((feedback_angle(&[1, 0]) + PI / 4.0).abs() < 1e-15);
    assert!((feedback_angle(&[1, 1]) + 3.0 * PI / 4.0).abs() < 1e-15);
}

#[test]
fn postprocessing_examples() {
    let r = phase_to_order(&MeasurementRecord::from_numerator(4, 192), 15, 7);
    assert_eq!((r.r, r.validated), (Some(4), true));
    assert_eq!(phase_to_order(&MeasurementRecord::from_numerator(4, 0), 15, 7).r, None);
    assert_eq!(phase_to_order(&MeasurementRecord::from_numerator(4, 85), 15, 7).r, None);
    assert_eq!(phase_to_order(&MeasurementRecord::from_numerator(4, 64), 15, 7).r, Some(4));
    assert_eq!(phase_to_order(&MeasurementRecord::from_numerator(4, 128), 15, 7).r, None);
}

#[test]
fn order_two_base_measures_half_turns() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rec = run_semiclassical_order_finding(15, 4, None, &mut rng).unwrap();
        assert!(rec.m == 0 || rec.m == 128, "m = {}", rec.m);
    }
    let p = OrderFindingParams::new(15, 7, None).unwrap();
    assert_eq!(p.layout().width(), 11);
    assert!(matches!(OrderFindingParams::new(15, 5, None), Err(shor_core::Error::NotCoprime { gcd: 5, .. })));
}

#[test]
fn factoring_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let forced = |a| FactorConfig { forced_a: Some(a), ..FactorConfig::default() };

    let res = shor_factor(15, &forced(7), &mut rng).unwrap();
    if let Ok(res) = res {
        assert!(res.factor == 3 || res.factor == 5);
        assert_eq!(res.route, Route::OrderFinding);
    }
    let res = shor_factor(21, &forced(2), &mut rng).unwrap().unwrap();
    assert!(res.factor == 3 || res.factor == 7);
    assert!(res.attempts.iter().any(|at| at.r == Some(6)));

    let res = shor_factor(16, &FactorConfig::default(), &mut rng).unwrap().unwrap();
    assert_eq!((res.factor, res.route), (2, Route::Even));
    let res = shor_factor(27, &FactorConfig::default(), &mut rng).unwrap().unwrap();
    assert_eq!((res.factor, res.route), (3, Route::PerfectPower));
    let res = shor_factor(15, &forced(6), &mut rng).unwrap().unwrap();
    assert_eq!((res.factor, res.route), (3, Route::LuckyGcd));

    let fail = shor_factor(13, &FactorConfig { max_attempts: 3, ..FactorConfig::default() }, &mut rng).unwrap();
    assert_eq!(fail.unwrap_err().attempts.len(), 3);
    assert!(shor_factor(3, &FactorConfig::default(), &mut rng).is_err());
}

#[test]
fn hand_arithmetic_for_factoring_examples() {
    assert_eq!(mod_exp(7, 2, 15), 4);
    assert_eq!((gcd(48, 15), gcd(50, 15)), (3, 5));
    assert_eq!(mod_exp(2, 3, 21), 8);
    assert_eq!((gcd(7, 21), gcd(9, 21)), (7, 3));
}
