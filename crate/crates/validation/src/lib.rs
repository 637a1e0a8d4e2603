//! Acceptance checks for csdecay; see `tests/acceptance.rs`.
