//! Compile-and-run harness for the guide in `book/`.
//!
//! Each chapter is included verbatim as module documentation, so every
//! Rust snippet in the book runs under `cargo test` as a doctest. A
//! snippet that drifts from the library breaks this crate's build, which
//! keeps the prose honest.
//!
//! The crate exports nothing and is never published.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/state-vectors.md")]
pub mod state_vectors {}

#[doc = include_str!("../../../book/src/bell-basis.md")]
pub mod bell_basis {}

#[doc = include_str!("../../../book/src/discrimination.md")]
pub mod discrimination {}

#[doc = include_str!("../../../book/src/circuit-format.md")]
pub mod circuit_format {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
