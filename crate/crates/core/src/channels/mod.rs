//! Kraus-form channels, their Stinespring dilations and the named channel families.

mod bayes;
mod constructors;
mod extension;
mod kraus;

pub use bayes::{classical_bayes_reversal, BayesReversal};
pub use constructors::{
    amplitude_damping, binary_symmetric, check_stochastic, classical_channel, clock, dephasing,
    depolarizing, identity_channel, partial_trace_channel, search_channel, shift,
    unitary_channel,
};
pub use extension::{isometric_extension, minimal_kraus, IsometricExtension};
pub use kraus::{compose, CpMap, KrausMap, QuantumChannel, TP_TOL};
