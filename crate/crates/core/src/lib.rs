//! Hiding classical bits in Fock and coherent optical states that pass for
//! thermal noise.
//!
//! The crate is organised around the pieces of the protocol:
//!
//! * [`thermal`]: thermal and coherent states in a truncated Fock basis,
//!   Rayleigh radial laws and diagonal-state metrics.
//! * [`codec`]: enumerative constant-weight coding for the Fock scheme and
//!   the XOR scrambler.
//! * [`discrimination`]: coherent-state overlaps, Helstrom error
//!   probabilities and the trace distance between the two bit ensembles.
//! * [`homodyne`]: Gaussian model of balanced homodyne detection, moment
//!   bounds and Monte-Carlo transmission.
//! * [`rates`]: entropies, communication and key rates, scheme sweeps.
//! * [`verify`]: runtime oracle comparisons used by the command-line tool.
//!
//! Every stochastic routine takes an explicit 64-bit seed; see [`rng`].

pub mod codec;
pub mod discrimination;
pub mod error;
pub mod homodyne;
pub mod quadrature;
pub mod rates;
pub mod rng;
pub mod thermal;
pub mod verify;

pub use error::{Error, Result};
