//! Classical pre- and post-processing around order finding, and the full
//! factoring loop.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orderfind::{phase_to_order, run_semiclassical_order_finding};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a * b mod m` without overflow.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Square-and-multiply `a^k mod n`.
pub fn mod_exp(a: u64, mut k: u64, n: u64) -> u64 {
    let mut base = a % n;
    let mut acc = 1 % n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mod_mul(acc, base, n);
        }
        base = mod_mul(base, base, n);
        k >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n` by extended Euclid; `None` when gcd(a, n) != 1.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Integer `q`-th root, rounded down.
fn integer_root(n: u64, q: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / q as f64).round() as u64;
    while r > 0 && checked_pow(r, q).is_none_or(|v| v > n) {
        r -= 1;
    }
    while checked_pow(r + 1, q).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// `(p, q)` with `p^q = n`, `q >= 2` and `p` as small as possible.
pub fn is_perfect_power(n: u64) -> Option<(u64, u32)> {
    if n < 4 {
        return None;
    }
    let max_q = 63 - n.leading_zeros();
    (2..=max_q).rev().find_map(|q| {
        let p = integer_root(n, q);
        (p >= 2 && checked_pow(p, q) == Some(n)).then_some((p, q))
    })
}

/// Convergents `(p_k, q_k)` of `num/den`, `0 <= num < den`.
pub fn continued_fraction_convergents(num: u64, den: u64) -> Vec<(u64, u64)> {
    assert!(num < den, "expected a proper fraction, got {num}/{den}");
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p, mut q) = (0u64, 1u64);
    let mut out = vec![(p, q)];
    let (mut x, mut y) = (den, num);
    // num/den = [0; a1, a2, ...]; expand den/num from here on.
    while y != 0 {
        let a = x / y;
        (x, y) = (y, x % y);
        let (np, nq) = (a * p + p_prev, a * q + q_prev);
        (p_prev, q_prev, p, q) = (p, q, np, nq);
        out.push((p, q));
    }
    out
}

/// Which step of the factoring procedure produced the factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Even,
    PerfectPower,
    LuckyGcd,
    OrderFinding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttemptOutcome {
    /// gcd(a, N) > 1 without running order finding.
    LuckyGcd,
    /// Postprocessing produced no validated order.
    NoOrder,
    OddOrder,
    /// a^(r/2) = -1 mod N.
    TrivialSquareRoot,
    /// Neither gcd gave a nontrivial factor.
    TrivialGcds,
    Factor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub a: u64,
    pub r: Option<u64>,
    pub outcome: AttemptOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationResult {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub factor: u64,
    pub route: Route,
    pub attempts: Vec<Attempt>,
}

#[derive(Clone, Debug)]
pub struct FactorConfig {
    pub max_attempts: usize,
    /// Use this base instead of drawing one at random.
    pub forced_a: Option<u64>,
    /// QFT truncation for the arithmetic; `None` is exact.
    pub kmax: Option<usize>,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig { max_attempts: 10, forced_a: None, kmax: None }
    }
}

/// Failure of [`shor_factor`] once every attempt is spent.
#[derive(Debug)]
pub struct FactorFailure {
    pub modulus: u64,
    pub attempts: Vec<Attempt>,
}

impl From<FactorFailure> for Error {
    fn from(f: FactorFailure) -> Error {
        Error::AttemptsExhausted { modulus: f.modulus, attempts: f.attempts.len() }
    }
}

/// Outcome of the factoring loop: a factor, or the exhausted attempt log.
pub type FactorOutcome = std::result::Result<FactorizationResult, FactorFailure>;

/// Factors `n` with the quantum order-finding subroutine.
///
/// The same generator drives the choice of bases and every measurement, so
/// a seeded `rng` reproduces the whole run.
pub fn shor_factor<R: Rng + ?Sized>(n: u64, config: &FactorConfig, rng: &mut R) -> Result<FactorOutcome> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("N = {n} is too small to factor")));
    }
    let done = |factor, route, attempts| Ok(Ok(FactorizationResult { modulus: n, factor, route, attempts }));
    if n.is_multiple_of(2) {
        return done(2, Route::Even, Vec::new());
    }
    if let Some((p, _)) = is_perfect_power(n) {
        return done(p, Route::PerfectPower, Vec::new());
    }
    if let Some(a) = config.forced_a {
        if !(2..n - 1).contains(&a) {
            return Err(Error::InvalidParameter(format!("forced base {a} must lie in [2, N-2]")));
        }
    }

    let mut attempts = Vec::new();
    for _ in 0..config.max_attempts {
        let a = config.forced_a.unwrap_or_else(|| rng.gen_range(2..=n - 2));
        let g = gcd(a, n);
        if g > 1 {
            attempts.push(Attempt { a, r: None, outcome: AttemptOutcome::LuckyGcd });
            return done(g, Route::LuckyGcd, attempts);
        }
        let record = run_semiclassical_order_finding(n, a, config.kmax, rng)?;
        let found = phase_to_order(&record, n, a);
        let Some(r) = found.r.filter(|_| found.validated) else {
            attempts.push(Attempt { a, r: None, outcome: AttemptOutcome::NoOrder });
            continue;
        };
        if r % 2 == 1 {
            attempts.push(Attempt { a, r: Some(r), outcome: AttemptOutcome::OddOrder });
            continue;
        }
        let half = mod_exp(a, r / 2, n);
        if half == n - 1 {
            attempts.push(Attempt { a, r: Some(r), outcome: AttemptOutcome::TrivialSquareRoot });
            continue;
        }
        let candidates = [gcd(half + n - 1, n), gcd(half + 1, n)];
        match candidates.into_iter().find(|&f| f > 1 && f < n) {
            Some(f) => {
                attempts.push(Attempt { a, r: Some(r), outcome: AttemptOutcome::Factor });
                return done(f, Route::OrderFinding, attempts);
            }
            None => attempts.push(Attempt { a, r: Some(r), outcome: AttemptOutcome::TrivialGcds }),
        }
    }
    Ok(Err(FactorFailure { modulus: n, attempts }))
}
