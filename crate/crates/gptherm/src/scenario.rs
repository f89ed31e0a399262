//! Ready-made cycle scenarios. All of them are assembled from the bundled
//! theory files, so constructing one also exercises the file parser.

use crate::cycle::CycleScenario;
use crate::error::{Error, Result};
use crate::theory;

/// Default counterfactual bound value; chosen to exceed the quantum X/Z
/// bound of roughly 0.8536.
pub const DEFAULT_COUNTERFACTUAL_ZETA: f64 = 0.9;

/// The qubit X/Z cycle with the membrane keyed to the bisecting measurement
/// `M`, which saturates the uncertainty bound.
pub fn quantum_xz() -> CycleScenario {
    CycleScenario::from_labels(theory::qubit(), "X", "Z", "M")
        .expect("built-in quantum-xz scenario is well-formed")
}

/// The qubit X/Z cycle with an arbitrary declared measurement as membrane.
pub fn quantum_xz_with_membrane(membrane: &str) -> CycleScenario {
    CycleScenario::from_labels(theory::qubit(), "X", "Z", membrane)
        .expect("built-in qubit measurements are well-formed")
}

/// The gbit cycle: both species sit on jointly certain corners, the X-type
/// membrane sorts them perfectly, and the reassembly still swallows all the
/// gain.
pub fn gbit_demo() -> CycleScenario {
    CycleScenario::from_labels(theory::gbit(), "X", "Z", "X")
        .expect("built-in gbit scenario is well-formed")
}

/// The quantum X/Z cycle with both membrane probabilities overridden by a
/// counterfactual bound value.
pub fn counterfactual(zeta: f64) -> Result<CycleScenario> {
    quantum_xz().with_counterfactual(zeta, zeta)
}

/// Names accepted by the CLI for compiled-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinScenario {
    QuantumXz,
    Gbit,
    Counterfactual,
}

impl BuiltinScenario {
    pub const ALL: [(&'static str, BuiltinScenario); 3] = [
        ("quantum-xz", BuiltinScenario::QuantumXz),
        ("gbit", BuiltinScenario::Gbit),
        ("counterfactual", BuiltinScenario::Counterfactual),
    ];

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| *s)
    }

    pub fn build(self, zeta_override: Option<f64>) -> Result<CycleScenario> {
        match self {
            BuiltinScenario::QuantumXz => {
                let s = quantum_xz();
                match zeta_override {
                    Some(z) => s.with_counterfactual(z, z),
                    None => Ok(s),
                }
            }
            BuiltinScenario::Gbit => {
                let s = gbit_demo();
                match zeta_override {
                    Some(z) => s.with_counterfactual(z, z),
                    None => Ok(s),
                }
            }
            BuiltinScenario::Counterfactual => {
                let z = zeta_override.unwrap_or(DEFAULT_COUNTERFACTUAL_ZETA);
                counterfactual(z)
            }
        }
    }
}

impl std::str::FromStr for BuiltinScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s).ok_or_else(|| Error::Usage(format!("unknown built-in scenario `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_construct_and_pass_premises() {
        quantum_xz().validate_premises().unwrap();
        gbit_demo().validate_premises().unwrap();
        counterfactual(0.9).unwrap().validate_premises().unwrap();
    }

    #[test]
    fn counterfactual_rejects_out_of_range_zeta() {
        assert!(counterfactual(0.3).is_err());
        assert!(counterfactual(1.1).is_err());
    }

    #[test]
    fn builtin_names_round_trip() {
        for (name, scenario) in BuiltinScenario::ALL {
            assert_eq!(BuiltinScenario::parse(name), Some(scenario));
        }
        assert_eq!(BuiltinScenario::parse("nope"), None);
    }
}
