//! Design optimization of planar closed-chain linkages.
//!
//! The crate models a hand-exoskeleton linkage, turns its link lengths into a
//! constrained objective, and searches that space by exhaustive grid, a
//! real-coded genetic algorithm and Big Bang-Big Crunch, with a harness that
//! runs seeded repetitions and reports comparative statistics.

pub mod bench;
pub mod error;
pub mod evo;
pub mod grid;
pub mod linkage;
pub mod problem;

pub use error::{Error, Result, SolveError};

pub(crate) fn hash_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
