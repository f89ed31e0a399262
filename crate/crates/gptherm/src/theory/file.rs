//! Theory-spec files.
//!
//! A theory is described in a TOML file; the exact schema (field names and
//! types) is documented in the repository README. Parse failures cite the
//! offending line and field; semantic failures (unresolvable labels, wrong
//! dimensions) cite the field path.

use serde::Deserialize;

use super::{
    BinaryMeasurement, DistinguishableSet, DualityPair, Effect, State, TheoryKind, TheorySpec,
};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryFile {
    name: String,
    kind: TheoryKind,
    embedding_dim: usize,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    maximally_mixed: Vec<f64>,
    unit_effect: EffectBody,
    #[serde(default)]
    states: Vec<StateEntry>,
    #[serde(default)]
    effects: Vec<EffectEntry>,
    #[serde(default)]
    duality: Vec<DualityEntry>,
    #[serde(default)]
    measurements: Vec<MeasurementEntry>,
    #[serde(default)]
    distinguishable_sets: Vec<DistinguishableEntry>,
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    label: String,
    coords: Vec<f64>,
    #[serde(default)]
    pure: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EffectBody {
    bias: f64,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EffectEntry {
    label: String,
    bias: f64,
    weights: Vec<f64>,
    #[serde(default)]
    pure: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DualityEntry {
    effect: String,
    state: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementEntry {
    label: String,
    effects: [String; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistinguishableEntry {
    states: Vec<String>,
    effects: Vec<String>,
}

/// Parses a theory from TOML text. `origin` names the source in error
/// messages (a path, or e.g. `<built-in qubit>`).
pub fn load_str(text: &str, origin: &str) -> Result<TheorySpec> {
    let file: TheoryFile = toml::from_str(text).map_err(|e| Error::TheoryFile {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    resolve(file, origin)
}

/// Reads and parses a theory-spec file.
pub fn load_path(path: &std::path::Path) -> Result<TheorySpec> {
    let text = std::fs::read_to_string(path)?;
    load_str(&text, &path.display().to_string())
}

fn resolve(file: TheoryFile, origin: &str) -> Result<TheorySpec> {
    let dim = file.embedding_dim;
    let bad = |message: String| Error::TheoryFile {
        path: origin.to_string(),
        message,
    };

    if !(1..=4).contains(&dim) {
        return Err(bad(format!(
            "field `embedding_dim`: expected 1..=4, got {dim}"
        )));
    }
    if file.tolerance < 0.0 {
        return Err(bad("field `tolerance`: must be nonnegative".into()));
    }
    if file.maximally_mixed.len() != dim {
        return Err(bad(format!(
            "field `maximally_mixed`: expected {dim} coordinates, got {}",
            file.maximally_mixed.len()
        )));
    }

    let states: Vec<(String, State)> = file
        .states
        .iter()
        .map(|s| {
            if s.coords.len() != dim {
                return Err(bad(format!(
                    "field `states` (label `{}`): expected {dim} coordinates, got {}",
                    s.label,
                    s.coords.len()
                )));
            }
            Ok((
                s.label.clone(),
                State {
                    coords: s.coords.clone(),
                    pure: s.pure,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let effects: Vec<(String, Effect)> = file
        .effects
        .iter()
        .map(|e| {
            if e.weights.len() != dim {
                return Err(bad(format!(
                    "field `effects` (label `{}`): expected {dim} weights, got {}",
                    e.label,
                    e.weights.len()
                )));
            }
            Ok((
                e.label.clone(),
                Effect {
                    bias: e.bias,
                    weights: e.weights.clone(),
                    pure: e.pure,
                },
            ))
        })
        .collect::<Result<_>>()?;

    for (i, (label, _)) in states.iter().enumerate() {
        if states[..i].iter().any(|(l, _)| l == label) {
            return Err(bad(format!("field `states`: duplicate label `{label}`")));
        }
    }
    for (i, (label, _)) in effects.iter().enumerate() {
        if effects[..i].iter().any(|(l, _)| l == label) {
            return Err(bad(format!("field `effects`: duplicate label `{label}`")));
        }
    }

    if file.unit_effect.weights.len() != dim {
        return Err(bad(format!(
            "field `unit_effect.weights`: expected {dim} entries, got {}",
            file.unit_effect.weights.len()
        )));
    }
    let unit_effect = Effect::new(file.unit_effect.bias, file.unit_effect.weights.clone());

    let find_state = |label: &str, field: &str| -> Result<State> {
        states
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| bad(format!("field `{field}`: unknown state label `{label}`")))
    };
    let find_effect = |label: &str, field: &str| -> Result<Effect> {
        effects
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e.clone())
            .ok_or_else(|| bad(format!("field `{field}`: unknown effect label `{label}`")))
    };

    let duality: Vec<DualityPair> = file
        .duality
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Ok(DualityPair {
                effect: find_effect(&d.effect, &format!("duality[{i}].effect"))?,
                state: find_state(&d.state, &format!("duality[{i}].state"))?,
                effect_label: d.effect.clone(),
                state_label: d.state.clone(),
            })
        })
        .collect::<Result<_>>()?;

    let measurements: Vec<BinaryMeasurement> = file
        .measurements
        .iter()
        .enumerate()
        .map(|(i, m)| {
            Ok(BinaryMeasurement {
                label: m.label.clone(),
                e0: find_effect(&m.effects[0], &format!("measurements[{i}].effects[0]"))?,
                e1: find_effect(&m.effects[1], &format!("measurements[{i}].effects[1]"))?,
            })
        })
        .collect::<Result<_>>()?;

    let distinguishable_sets: Vec<DistinguishableSet> = file
        .distinguishable_sets
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if d.states.len() != d.effects.len() || d.states.is_empty() {
                return Err(bad(format!(
                    "field `distinguishable_sets[{i}]`: states and effects must be nonempty lists of equal length"
                )));
            }
            Ok(DistinguishableSet {
                states: d
                    .states
                    .iter()
                    .map(|l| find_state(l, &format!("distinguishable_sets[{i}].states")))
                    .collect::<Result<_>>()?,
                effects: d
                    .effects
                    .iter()
                    .map(|l| find_effect(l, &format!("distinguishable_sets[{i}].effects")))
                    .collect::<Result<_>>()?,
                state_labels: d.states.clone(),
            })
        })
        .collect::<Result<_>>()?;

    Ok(TheorySpec {
        name: file.name,
        kind: file.kind,
        embedding_dim: dim,
        tolerance: file.tolerance,
        maximally_mixed: State::mixed(file.maximally_mixed),
        unit_effect,
        states,
        effects,
        duality,
        measurements,
        distinguishable_sets,
    })
}
