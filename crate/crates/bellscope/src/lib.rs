//! Non-destructive Bell-state discrimination on a desk-scale state-vector
//! simulator.
//!
//! Two parties sharing one of the four Bell states can find out which one
//! they hold without sacrificing it. Each Bell state is a joint eigenstate
//! of X⊗X and Z⊗Z with a distinctive pair of eigenvalue signs, so two
//! ancilla qubits, each entangled with the pair and then measured, read the
//! two signs out while the shared state survives for later use (dense
//! coding, teleportation, or simply being measured again).
//!
//! The crate provides the simulator substrate ([`statevec`], [`gates`]),
//! the Bell basis and its local-operation algebra ([`bell`]), the two-stage
//! protocol with its analytic oracles ([`discriminator`]), a textual circuit
//! format hosting the equivalent monolithic circuit ([`circuit`]), and a
//! command-line interface ([`cli`]).
//!
//! # Quick start
//!
//! ```
//! use bellscope::{bell_state, discriminate, BellLabel};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let mut rng = ChaCha8Rng::seed_from_u64(0);
//! let channel = bell_state(BellLabel::PhiMinus);
//!
//! let result = discriminate(&channel, &mut rng)?;
//! assert_eq!((result.a1, result.a2), (1, 1));
//! assert_eq!(result.label, BellLabel::PhiMinus);
//!
//! // the channel is intact, not consumed
//! let fidelity = result.post_state.fidelity_up_to_phase(&channel)?;
//! assert!(fidelity >= 1.0 - 1e-12);
//! # Ok::<(), bellscope::StateError>(())
//! ```

pub mod bell;
pub mod circuit;
pub mod cli;
pub mod discriminator;
pub mod gates;
pub mod statevec;

pub use bell::{bell_state, classify_bell, BellLabel, LocalOp};
pub use discriminator::{discriminate, DiscriminationResult};
pub use statevec::{StateError, StateVector};
