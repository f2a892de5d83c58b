//! C ABI over `shor_core`.
//!
//! Every fallible call returns a [`ShorStatus`]. On failure the message is
//! available from [`shor_last_error`] on the same thread until the next
//! failing call. Circuits and strings handed out through out-pointers belong
//! to the caller and are released with [`shor_circuit_free`] and
//! [`shor_string_free`].
//!
//! A `kmax` argument of 0 selects the default rotation cutoff: the exact
//! transform up to 8-bit moduli and `ceil(lg n) + 2` above.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shor_core::blocks::{self, BlockParams};
use shor_core::circuit::{circuit_depth, json, Circuit};
use shor_core::cli::resolve_kmax;
use shor_core::numtheory::{shor_factor, FactorConfig, Route};
use shor_core::orderfind::{build_order_finding_circuit, phase_to_order, run_semiclassical_order_finding};
use shor_core::resources::{estimate, CountingMode};
use shor_core::simulator::{QuantumState, Simulator};
use shor_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    NotCoprime = 3,
    InvalidCircuit = 4,
    CapacityExceeded = 5,
    AttemptsExhausted = 6,
    Numerical = 7,
    Json = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShorBlock {
    Qft = 0,
    PhiAdd = 1,
    CcPhiAddMod = 2,
    Cmult = 3,
    Cswap = 4,
    ControlledUa = 5,
    OrderFinding = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShorRoute {
    Even = 0,
    PerfectPower = 1,
    LuckyGcd = 2,
    OrderFinding = 3,
}

/// One order-finding run. `order` is 0 when postprocessing found none.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ShorOrderResult {
    pub measured: u64,
    pub num_bits: u32,
    pub phase: f64,
    pub order: u64,
    pub qubits: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ShorFactorResult {
    pub factor: u64,
    pub cofactor: u64,
    pub route: ShorRoute,
    pub attempts: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ShorResources {
    pub n: u32,
    pub kmax: u32,
    pub qubits: u64,
    pub gates_total: u64,
    pub depth: u64,
    pub extrapolated: bool,
}

/// Opaque circuit handle.
pub struct ShorCircuit(Circuit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ShorStatus {
    match e {
        Error::InvalidParameter(_) => ShorStatus::InvalidParameter,
        Error::NotCoprime { .. } => ShorStatus::NotCoprime,
        Error::MalformedGate(_)
        | Error::QubitOutOfRange { .. }
        | Error::ClbitOutOfRange { .. }
        | Error::NonUnitary(_)
        | Error::ControlOverflow { .. }
        | Error::WidthMismatch { .. } => ShorStatus::InvalidCircuit,
        Error::CapacityExceeded { .. } => ShorStatus::CapacityExceeded,
        Error::AttemptsExhausted { .. } => ShorStatus::AttemptsExhausted,
        Error::NumericalCorruption(_) => ShorStatus::Numerical,
        Error::Json(_) => ShorStatus::Json,
        Error::Io(_) => ShorStatus::Io,
    }
}

struct Failure(ShorStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ShorStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ShorStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShorStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ShorStatus::Panic
        }
    }
}

fn kmax_for(kmax: u32, n: usize) -> usize {
    if kmax == 0 {
        resolve_kmax(None, n)
    } else {
        kmax as usize
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn circuit_ref<'a>(c: *const ShorCircuit) -> Result<&'a Circuit, Failure> {
    c.as_ref().map(|c| &c.0).ok_or_else(|| null("circuit"))
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn shor_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn shor_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the full order-finding circuit for `a` modulo `modulus`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn shor_order_finding_circuit(
    modulus: u64,
    a: u64,
    kmax: u32,
    out: *mut *mut ShorCircuit,
) -> ShorStatus {
    shor_block_circuit(ShorBlock::OrderFinding, modulus, a, kmax, out)
}

/// Builds one arithmetic block for the `n`-bit `modulus` and base `a`.
/// `Qft` and `PhiAdd` act on `n + 1` qubits; `PhiAdd` adds `a`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn shor_block_circuit(
    block: ShorBlock,
    modulus: u64,
    a: u64,
    kmax: u32,
    out: *mut *mut ShorCircuit,
) -> ShorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let n = BlockParams::bits_of(modulus);
        let k = kmax_for(kmax, n);
        let c = match block {
            ShorBlock::Qft => blocks::build_qft(n + 1, k)?,
            ShorBlock::PhiAdd => blocks::build_phi_add_const(n + 1, a, 0)?,
            ShorBlock::CcPhiAddMod => blocks::build_cc_phi_add_mod(n, a, modulus, k)?,
            ShorBlock::Cmult => blocks::build_cmult_mod(n, a, modulus, k)?,
            ShorBlock::Cswap => blocks::build_controlled_swap_register(n)?,
            ShorBlock::ControlledUa => blocks::build_controlled_ua(n, a, modulus, k)?,
            ShorBlock::OrderFinding => build_order_finding_circuit(modulus, a, Some(k))?,
        };
        write_out(out, Box::into_raw(Box::new(ShorCircuit(c))))
    })
}

/// Parses a circuit from its JSON document.
///
/// # Safety
/// `text` must be a valid nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_from_json(text: *const c_char, out: *mut *mut ShorCircuit) -> ShorStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("json text"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(ShorStatus::Json, format!("json text is not UTF-8: {e}")))?;
        let c = json::from_json(s)?;
        write_out(out, Box::into_raw(Box::new(ShorCircuit(c))))
    })
}

/// Serialises a circuit to JSON. Free the result with [`shor_string_free`].
///
/// # Safety
/// `circuit` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_to_json(circuit: *const ShorCircuit, out: *mut *mut c_char) -> ShorStatus {
    guard(|| {
        let c = circuit_ref(circuit)?;
        let text = json::to_json(c)?;
        let s = CString::new(text).map_err(|e| Failure(ShorStatus::Json, e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `circuit` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_num_qubits(circuit: *const ShorCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// # Safety
/// `circuit` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_num_clbits(circuit: *const ShorCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.num_clbits())
}

/// # Safety
/// `circuit` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_num_gates(circuit: *const ShorCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `circuit` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_depth(circuit: *const ShorCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| circuit_depth(&c.0))
}

/// Runs `circuit` from basis state `input`. Writes the most likely final
/// basis index and its probability, and copies the classical bits into
/// `clbits` (which must hold `shor_circuit_num_clbits` bytes; it may be null
/// when the circuit has none).
///
/// # Safety
/// Pointers must be valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_run(
    circuit: *const ShorCircuit,
    input: u64,
    seed: u64,
    clbits: *mut u8,
    clbits_len: usize,
    most_likely: *mut u64,
    probability: *mut f64,
) -> ShorStatus {
    guard(|| {
        let c = circuit_ref(circuit)?;
        if clbits_len < c.num_clbits() {
            return Err(Failure(
                ShorStatus::BufferTooSmall,
                format!("circuit has {} classical bits, buffer holds {clbits_len}", c.num_clbits()),
            ));
        }
        if c.num_clbits() > 0 && clbits.is_null() {
            return Err(null("clbits buffer"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = Simulator::default().run_circuit(c, QuantumState::basis(c.num_qubits(), input)?, &mut rng)?;
        let (index, p) = run.final_state.most_likely();
        if !run.clbits.is_empty() {
            ptr::copy_nonoverlapping(run.clbits.as_ptr(), clbits, run.clbits.len());
        }
        write_out(most_likely, index as u64)?;
        write_out(probability, p)
    })
}

/// # Safety
/// `circuit` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shor_circuit_free(circuit: *mut ShorCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shor_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// One semiclassical order-finding run seeded with `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shor_order_find(
    modulus: u64,
    a: u64,
    kmax: u32,
    seed: u64,
    out: *mut ShorOrderResult,
) -> ShorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let n = BlockParams::bits_of(modulus);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let record = run_semiclassical_order_finding(modulus, a, Some(kmax_for(kmax, n)), &mut rng)?;
        let result = phase_to_order(&record, modulus, a);
        write_out(
            out,
            ShorOrderResult {
                measured: record.m,
                num_bits: record.bits.len() as u32,
                phase: record.phase,
                order: result.r.unwrap_or(0),
                qubits: (2 * n + 3) as u32,
            },
        )
    })
}

/// Factors `modulus`. Returns `ATTEMPTS_EXHAUSTED` when every base failed.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shor_factor_number(
    modulus: u64,
    seed: u64,
    max_attempts: u32,
    out: *mut ShorFactorResult,
) -> ShorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let config = FactorConfig {
            max_attempts: max_attempts as usize,
            forced_a: None,
            kmax: Some(kmax_for(0, BlockParams::bits_of(modulus))),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let res = shor_factor(modulus, &config, &mut rng)?.map_err(Error::from)?;
        let route = match res.route {
            Route::Even => ShorRoute::Even,
            Route::PerfectPower => ShorRoute::PerfectPower,
            Route::LuckyGcd => ShorRoute::LuckyGcd,
            Route::OrderFinding => ShorRoute::OrderFinding,
        };
        write_out(
            out,
            ShorFactorResult {
                factor: res.factor,
                cofactor: modulus / res.factor,
                route,
                attempts: res.attempts.len() as u32,
            },
        )
    })
}

/// Resource counts of the order-finding circuit for an `n`-bit modulus.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shor_resources(n: u32, kmax: u32, out: *mut ShorResources) -> ShorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let n = n as usize;
        let r = estimate(n, kmax_for(kmax, n))?;
        write_out(
            out,
            ShorResources {
                n: r.n as u32,
                kmax: r.kmax as u32,
                qubits: r.qubits as u64,
                gates_total: r.gates_total as u64,
                depth: r.depth as u64,
                extrapolated: r.mode == CountingMode::Extrapolated,
            },
        )
    })
}
