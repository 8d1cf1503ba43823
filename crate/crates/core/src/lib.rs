//! Dense-matrix simulation of a block-encoded Petz recovery channel.
//!
//! The crate builds the recovery map out of purified-access block-encodings, polynomial
//! transforms of their singular values and oblivious amplitude amplification, then checks
//! the result against exact oracles: the Petz map itself, classical Bayes reversal and the
//! pretty good measurement. Everything is explicit complex matrices at desk scale.
//!
//! Registers are ordered `ancilla ⊗ system` throughout.

pub mod block_encoding;
pub mod channels;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod poly;
pub mod petz;
pub mod pgm;
pub mod qsvt;
pub mod random;

pub use error::{Error, Result};
