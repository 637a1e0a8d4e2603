//! Exact quantum-decay dynamics of the Calogero-Sutherland gas released from a
//! harmonic trap.
//!
//! The crate is organised bottom-up:
//!
//! * [`ermakov`] produces the scaling factor `b(t)`, its rate and the
//!   conformal time `tau(t)` for a trap-frequency protocol.
//! * [`survival`] turns a scaling state into survival probabilities and
//!   complex survival amplitudes.
//! * [`ersak`] splits the survival probability into classical, memory and
//!   interference contributions.
//! * [`ensembles`] holds the Mehta normalisation, the Selberg integral and the
//!   log-Gamma function they rest on.
//! * [`observables`] covers the non-escape probability and the semicircle
//!   density.
//! * [`oracle`] integrates the defining integrals by brute force so that every
//!   closed form above can be certified independently.
//!
//! Data-parallel loops go through [`exec`]; with the `parallel` feature
//! disabled every [`Execution`] runs sequentially.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensembles;
pub mod ermakov;
pub mod error;
pub mod ersak;
pub mod exec;
pub mod fit;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod summation;
pub mod survival;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
pub use params::SystemParams;
