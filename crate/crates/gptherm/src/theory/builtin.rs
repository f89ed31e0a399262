//! Built-in theories, stored in the same file format a user would write so
//! every default run also exercises the parser.

use super::{file, TheorySpec};

pub const QUBIT_TOML: &str = include_str!("../../theories/qubit.toml");
pub const GBIT_TOML: &str = include_str!("../../theories/gbit.toml");

/// The qubit: Bloch ball in three affine coordinates, with X, Z and the
/// bisecting measurement M declared, plus the Bloch duality table.
pub fn qubit() -> TheorySpec {
    file::load_str(QUBIT_TOML, "<built-in qubit>").expect("built-in qubit theory parses")
}

/// The gbit: square state space whose X-type and Z-type measurements share
/// jointly certain corner states.
pub fn gbit() -> TheorySpec {
    file::load_str(GBIT_TOML, "<built-in gbit>").expect("built-in gbit theory parses")
}
