//! A desk-scale laboratory for two-level generalized probabilistic theories
//! and the thermodynamics of their uncertainty bounds.
//!
//! The crate models a theory as a convex state space with affine effect
//! functionals, computes fine-grained uncertainty bounds and generalized
//! entropies, and evaluates the work ledger of a two-stage mixing cycle:
//! membranes keyed to a binary measurement expand against a piston, then the
//! resulting mixture is sorted into distinguishable components and the
//! original species are reassembled. When the membrane saturates the
//! uncertainty bound the cycle closes with zero net work; pushing the bound
//! past its theory value (a counterfactual the crate can inject) tips the
//! ledger positive.
//!
//! Start with the runnable examples (`cargo run --example cycle`) or the
//! ready-made scenarios in [`scenario`]:
//!
//! ```
//! use gptherm::{cycle, scenario};
//!
//! let ledger = cycle::net_work(&scenario::quantum_xz()).unwrap();
//! assert!(ledger.delta_w.abs() < 1e-9); // the cycle closes exactly
//!
//! let gain = cycle::net_work(&scenario::counterfactual(0.9).unwrap()).unwrap();
//! assert!(gain.delta_w > 0.13); // a violated bound pays out
//! ```
//!
//! Theories are defined in TOML files (see `theories/` and the README for
//! the schema); the built-ins are parsed from the same format.

pub mod cli;
pub mod cycle;
pub mod entropy;
pub mod error;
pub(crate) mod linalg;
pub mod scenario;
pub mod sim;
pub(crate) mod simplex;
pub mod theory;
pub mod uncertainty;

pub use error::{Error, Result};

use rand::SeedableRng;

/// The crate's deterministic RNG flavor: every sampled check derives from an
/// explicit seed.
pub(crate) fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
