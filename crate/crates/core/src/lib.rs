//! Order-finding circuits for Shor's algorithm using `2n+3` qubits.
//!
//! The crate builds every arithmetic block of the construction (Fourier-space
//! constant adder, doubly controlled modular adder, controlled multiplier,
//! register swap, controlled modular multiplication) as plain gate lists,
//! simulates them on a dense statevector with mid-circuit measurement, and
//! wraps them in the semiclassical order-finding loop and the classical
//! factoring procedure.

pub mod blocks;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod numtheory;
pub mod orderfind;
pub mod resources;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
