//! Bell-factor analysis of N-mode single-photon W states under detector loss.
//!
//! The crate evaluates the four joint-outcome probabilities entering the
//! W-state Bell factor `Ω`, for ideal Pauli projectors and for a hybrid
//! scheme where `X̂` is approximated by sign-binned homodyne detection, and
//! solves for the smallest detector efficiencies that still give `Ω > 0`.
//!
//! Module map:
//! - [`mode_algebra`]: single-mode qubits and effects.
//! - [`wstate`]: pure and attenuated W states.
//! - [`measurement`]: N-mode joint probabilities, compact and dense.
//! - [`homodyne`]: Fock quadrature wavefunctions and binned-homodyne effects.
//! - [`bell`]: Bell factor, closed forms, efficiency thresholds.
//! - [`sweep`]: parameter sweeps and CSV/JSON emission for the CLI.

pub mod bell;
pub mod error;
pub mod exec;
pub mod homodyne;
pub mod measurement;
pub mod mode_algebra;
pub mod quadrature;
pub mod sweep;
pub mod wstate;

pub use error::{Error, Result};
pub use exec::Execution;
