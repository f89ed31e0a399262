//! Two-level generalized probabilistic theories.
//!
//! A theory is a convex state space together with the affine functionals
//! (effects) that can be measured on it. States are plain affine coordinate
//! vectors; the normalization component is implicit, so an effect is a bias
//! plus a weight vector and evaluates as `e(rho) = bias + weights . coords`.
//! Two concrete kinds are supported:
//!
//! * `continuous-ball` — the qubit (and its lower-dimensional sections),
//!   whose pure states are the unit sphere of Bloch vectors;
//! * `polytope` — finitely many extreme states, e.g. the square state space
//!   of a gbit.
//!
//! Duality between pure effects and pure states is analytic for the ball and
//! table-driven for polytopes; [`TheorySpec::verify_duality`] measures how
//! well a declared table actually satisfies the duality property instead of
//! assuming it.

mod axioms;
mod builtin;
mod file;

pub use axioms::{check_assumptions, AssumptionCheck, AssumptionReport, Verdict};
pub use builtin::{gbit, qubit, GBIT_TOML, QUBIT_TOML};
pub use file::{load_path, load_str};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::simplex;

/// Shape of the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoryKind {
    /// Pure states are the unit sphere in the embedding coordinates.
    #[serde(rename = "continuous-ball")]
    ContinuousBall,
    /// Pure states are a finite vertex list; the space is their convex hull.
    #[serde(rename = "polytope")]
    Polytope,
}

/// A state: affine coordinates in the theory's embedding, e.g. the Bloch
/// vector for the qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub coords: Vec<f64>,
    pub pure: bool,
}

impl State {
    pub fn pure(coords: Vec<f64>) -> Self {
        State { coords, pure: true }
    }

    pub fn mixed(coords: Vec<f64>) -> Self {
        State {
            coords,
            pure: false,
        }
    }

    /// Convex mixture of states. The weights are assumed to sum to one; the
    /// result is not marked pure.
    pub fn mixture(parts: &[(f64, &State)]) -> State {
        let points: Vec<&[f64]> = parts.iter().map(|(_, s)| s.coords.as_slice()).collect();
        let weights: Vec<f64> = parts.iter().map(|(w, _)| *w).collect();
        State::mixed(linalg::mix(&points, &weights))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// An affine functional `e(rho) = bias + weights . coords(rho)` with range
/// inside `[0, 1]` on the state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub bias: f64,
    pub weights: Vec<f64>,
    pub pure: bool,
}

impl Effect {
    pub fn new(bias: f64, weights: Vec<f64>) -> Self {
        Effect {
            bias,
            weights,
            pure: false,
        }
    }

    pub fn pure(bias: f64, weights: Vec<f64>) -> Self {
        Effect {
            bias,
            weights,
            pure: true,
        }
    }

    /// Raw affine evaluation, no membership or range checking.
    pub fn evaluate_raw(&self, state: &State) -> f64 {
        self.bias + linalg::dot(&self.weights, &state.coords)
    }

    /// Componentwise sum of two effects as functionals.
    pub fn plus(&self, other: &Effect) -> Effect {
        Effect::new(
            self.bias + other.bias,
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// The complement `u - e` within the unit effect `u`.
    pub fn complement_in(&self, unit: &Effect) -> Effect {
        Effect {
            bias: unit.bias - self.bias,
            weights: unit
                .weights
                .iter()
                .zip(&self.weights)
                .map(|(u, w)| u - w)
                .collect(),
            pure: self.pure,
        }
    }

    /// Functional equality within `tol` (bias and every weight component).
    pub fn approx_eq(&self, other: &Effect, tol: f64) -> bool {
        (self.bias - other.bias).abs() <= tol
            && self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.bias.abs() <= tol && self.weights.iter().all(|w| w.abs() <= tol)
    }
}

pub fn states_approx_eq(a: &State, b: &State, tol: f64) -> bool {
    a.coords.len() == b.coords.len()
        && a.coords
            .iter()
            .zip(&b.coords)
            .all(|(x, y)| (x - y).abs() <= tol)
}

/// A two-outcome measurement; its effects sum to the unit effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMeasurement {
    pub label: String,
    pub e0: Effect,
    pub e1: Effect,
}

impl BinaryMeasurement {
    pub fn effect(&self, outcome: u8) -> &Effect {
        if outcome == 0 {
            &self.e0
        } else {
            &self.e1
        }
    }
}

/// One association of a pure effect with a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityPair {
    pub effect_label: String,
    pub state_label: String,
    pub effect: Effect,
    pub state: State,
}

/// A declared set of perfectly distinguishable pure states together with the
/// effects that tell them apart.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishableSet {
    pub state_labels: Vec<String>,
    pub states: Vec<State>,
    pub effects: Vec<Effect>,
}

/// What `verify_duality` found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityReport {
    pub theory: String,
    pub pairs_checked: usize,
    pub max_residual: f64,
    /// Every pure effect and every pure state has a resolvable dual.
    pub complete: bool,
    pub missing_effect_duals: Vec<String>,
    pub missing_state_duals: Vec<String>,
    /// Pairs of distinct effects declared dual to the same state (or states
    /// sharing an effect); duality would force them to coincide.
    pub conflicting_entries: Vec<(String, String)>,
    pub tolerance: f64,
    pub duality_holds: bool,
}

/// A two-level generalized probabilistic theory: state space, effects, unit,
/// duality table and named measurements.
#[derive(Debug, Clone)]
pub struct TheorySpec {
    pub name: String,
    pub kind: TheoryKind,
    pub embedding_dim: usize,
    /// Tolerance for membership and algebraic identity checks.
    pub tolerance: f64,
    pub maximally_mixed: State,
    pub unit_effect: Effect,
    pub(crate) states: Vec<(String, State)>,
    pub(crate) effects: Vec<(String, Effect)>,
    pub(crate) duality: Vec<DualityPair>,
    pub(crate) measurements: Vec<BinaryMeasurement>,
    pub(crate) distinguishable_sets: Vec<DistinguishableSet>,
}

impl TheorySpec {
    pub fn state(&self, label: &str) -> Result<&State> {
        self.states
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "state",
                label: label.to_string(),
                context: format!(" in theory `{}`", self.name),
            })
    }

    pub fn effect(&self, label: &str) -> Result<&Effect> {
        self.effects
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "effect",
                label: label.to_string(),
                context: format!(" in theory `{}`", self.name),
            })
    }

    pub fn measurement(&self, label: &str) -> Result<&BinaryMeasurement> {
        self.measurements
            .iter()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "measurement",
                label: label.to_string(),
                context: format!(" in theory `{}`", self.name),
            })
    }

    pub fn states(&self) -> impl Iterator<Item = (&str, &State)> {
        self.states.iter().map(|(l, s)| (l.as_str(), s))
    }

    pub fn effects(&self) -> impl Iterator<Item = (&str, &Effect)> {
        self.effects.iter().map(|(l, e)| (l.as_str(), e))
    }

    pub fn measurements(&self) -> &[BinaryMeasurement] {
        &self.measurements
    }

    pub fn duality_pairs(&self) -> &[DualityPair] {
        &self.duality
    }

    pub fn distinguishable_sets(&self) -> &[DistinguishableSet] {
        &self.distinguishable_sets
    }

    /// Declared pure states; for a polytope these are the vertices spanning
    /// the space.
    pub fn pure_states(&self) -> Vec<&State> {
        self.states.iter().filter(|(_, s)| s.pure).map(|(_, s)| s).collect()
    }

    pub fn pure_effects(&self) -> Vec<(&str, &Effect)> {
        self.effects
            .iter()
            .filter(|(_, e)| e.pure)
            .map(|(l, e)| (l.as_str(), e))
            .collect()
    }

    /// Convex-hull weights reproducing `coords` from the vertex list, when
    /// the point lies in the hull.
    pub fn hull_weights(&self, coords: &[f64]) -> Option<Vec<f64>> {
        let vertices = self.pure_states();
        if vertices.is_empty() {
            return None;
        }
        let mut a = vec![vec![0.0; vertices.len()]; self.embedding_dim + 1];
        for (j, v) in vertices.iter().enumerate() {
            for (i, &c) in v.coords.iter().enumerate() {
                a[i][j] = c;
            }
            a[self.embedding_dim][j] = 1.0;
        }
        let mut b = coords.to_vec();
        b.push(1.0);
        simplex::nonneg_solution(&a, &b)
    }

    /// Whether `coords` lies in the state space (within tolerance).
    pub fn contains(&self, coords: &[f64]) -> bool {
        if coords.len() != self.embedding_dim {
            return false;
        }
        match self.kind {
            TheoryKind::ContinuousBall => linalg::norm(coords) <= 1.0 + self.tolerance,
            TheoryKind::Polytope => self.hull_weights(coords).is_some(),
        }
    }

    pub fn membership(&self, state: &State) -> Result<()> {
        if state.coords.len() != self.embedding_dim {
            return Err(Error::DimensionMismatch {
                expected: self.embedding_dim,
                got: state.coords.len(),
            });
        }
        if self.contains(&state.coords) {
            Ok(())
        } else {
            let detail = match self.kind {
                TheoryKind::ContinuousBall => {
                    format!("norm {} exceeds 1", linalg::norm(&state.coords))
                }
                TheoryKind::Polytope => "outside the convex hull of the vertices".to_string(),
            };
            Err(Error::StateNotInSpace {
                theory: self.name.clone(),
                coords: state.coords.clone(),
                detail,
            })
        }
    }

    /// Outcome probability `p(e|rho)`. The state must belong to the space and
    /// the raw affine value must lie in `[0, 1]` up to tolerance; values
    /// within tolerance of the ends are clamped.
    pub fn evaluate(&self, effect: &Effect, state: &State) -> Result<f64> {
        self.membership(state)?;
        if effect.weights.len() != self.embedding_dim {
            return Err(Error::DimensionMismatch {
                expected: self.embedding_dim,
                got: effect.weights.len(),
            });
        }
        let raw = effect.evaluate_raw(state);
        if raw < -self.tolerance || raw > 1.0 + self.tolerance {
            return Err(Error::EffectRangeViolation {
                value: raw,
                tolerance: self.tolerance,
            });
        }
        Ok(raw.clamp(0.0, 1.0))
    }

    /// Whether an effect is pure in this theory. For the ball this is the
    /// analytic test (a projector-like functional `1/2 + u.r/2` with unit
    /// direction); for polytopes, purity is declared and matching is
    /// functional.
    pub fn is_pure_effect(&self, effect: &Effect) -> bool {
        match self.kind {
            TheoryKind::ContinuousBall => {
                (effect.bias - 0.5).abs() <= self.tolerance
                    && (linalg::norm(&effect.weights) - 0.5).abs() <= self.tolerance
            }
            TheoryKind::Polytope => self
                .effects
                .iter()
                .any(|(_, e)| e.pure && e.approx_eq(effect, self.tolerance)),
        }
    }

    pub fn is_pure_state(&self, state: &State) -> bool {
        match self.kind {
            TheoryKind::ContinuousBall => {
                (linalg::norm(&state.coords) - 1.0).abs() <= self.tolerance
            }
            TheoryKind::Polytope => self
                .states
                .iter()
                .any(|(_, s)| s.pure && states_approx_eq(s, state, self.tolerance)),
        }
    }

    /// The pure state dual to a pure effect. Table entries take precedence;
    /// for the ball the analytic rule (dual Bloch vector = effect direction)
    /// covers effects without an entry.
    pub fn dual_state(&self, effect: &Effect) -> Result<State> {
        if !self.is_pure_effect(effect) {
            return Err(Error::NotPureEffect {
                detail: format!("bias {}, weights {:?}", effect.bias, effect.weights),
            });
        }
        if let Some(pair) = self
            .duality
            .iter()
            .find(|p| p.effect.approx_eq(effect, self.tolerance))
        {
            return Ok(pair.state.clone());
        }
        match self.kind {
            TheoryKind::ContinuousBall => {
                let n = linalg::norm(&effect.weights);
                Ok(State::pure(linalg::scale(&effect.weights, 1.0 / n)))
            }
            TheoryKind::Polytope => Err(Error::NoDualEntry {
                kind: "effect",
                what: format!("bias {}, weights {:?}", effect.bias, effect.weights),
            }),
        }
    }

    /// The pure effect dual to a pure state; mirror image of [`dual_state`].
    ///
    /// [`dual_state`]: TheorySpec::dual_state
    pub fn dual_effect(&self, state: &State) -> Result<Effect> {
        if !self.is_pure_state(state) {
            return Err(Error::NotPureState {
                detail: format!("coords {:?}", state.coords),
            });
        }
        if let Some(pair) = self
            .duality
            .iter()
            .find(|p| states_approx_eq(&p.state, state, self.tolerance))
        {
            return Ok(pair.effect.clone());
        }
        match self.kind {
            TheoryKind::ContinuousBall => {
                let n = linalg::norm(&state.coords);
                Ok(Effect::pure(0.5, linalg::scale(&state.coords, 0.5 / n)))
            }
            TheoryKind::Polytope => Err(Error::NoDualEntry {
                kind: "state",
                what: format!("coords {:?}", state.coords),
            }),
        }
    }

    /// Measures how well the duality table satisfies
    /// `p(f|sigma) = p(e_sigma|rho_f)`.
    ///
    /// Resolvable (effect, state) pairs contribute the direct residual. Two
    /// distinct effects declared dual to the same state would be forced equal
    /// by the duality property, so their largest gap over the pure states is
    /// also charged as residual (and symmetrically for shared effects). The
    /// report never fails: violations are quantified and flagged.
    pub fn verify_duality(&self, samples: usize) -> DualityReport {
        let tol = self.tolerance;
        let mut max_residual: f64 = 0.0;
        let mut pairs_checked = 0;
        let mut conflicting = Vec::new();

        let try_pair = |f: &Effect, sigma: &State| {
            let (Ok(e_sigma), Ok(rho_f)) = (self.dual_effect(sigma), self.dual_state(f)) else {
                return None;
            };
            let lhs = f.evaluate_raw(sigma);
            let rhs = e_sigma.evaluate_raw(&rho_f);
            Some((lhs - rhs).abs())
        };

        // Cross pairs among table entries.
        for pf in &self.duality {
            for ps in &self.duality {
                if let Some(r) = try_pair(&pf.effect, &ps.state) {
                    max_residual = max_residual.max(r);
                    pairs_checked += 1;
                }
            }
        }

        // Entries that share a target are incompatible with duality unless
        // they coincide as functionals; charge the largest pointwise gap.
        for (i, a) in self.duality.iter().enumerate() {
            for b in &self.duality[i + 1..] {
                if states_approx_eq(&a.state, &b.state, tol)
                    && !a.effect.approx_eq(&b.effect, tol)
                {
                    let gap = self
                        .pure_states()
                        .iter()
                        .map(|v| (a.effect.evaluate_raw(v) - b.effect.evaluate_raw(v)).abs())
                        .fold(0.0, f64::max);
                    max_residual = max_residual.max(gap);
                    conflicting.push((a.effect_label.clone(), b.effect_label.clone()));
                }
                if a.effect.approx_eq(&b.effect, tol)
                    && !states_approx_eq(&a.state, &b.state, tol)
                {
                    let gap = self
                        .pure_effects()
                        .iter()
                        .map(|(_, e)| (e.evaluate_raw(&a.state) - e.evaluate_raw(&b.state)).abs())
                        .fold(0.0, f64::max);
                    max_residual = max_residual.max(gap);
                    conflicting.push((a.state_label.clone(), b.state_label.clone()));
                }
            }
        }

        // Sampled pairs for the ball's parametric family.
        if self.kind == TheoryKind::ContinuousBall {
            let mut rng = crate::seeded_rng(0x6474_c0de);
            for _ in 0..samples {
                let f = Effect::pure(
                    0.5,
                    linalg::scale(&random_unit(self.embedding_dim, &mut rng), 0.5),
                );
                let sigma = State::pure(random_unit(self.embedding_dim, &mut rng));
                if let Some(r) = try_pair(&f, &sigma) {
                    max_residual = max_residual.max(r);
                    pairs_checked += 1;
                }
            }
        }

        let missing_effect_duals: Vec<String> = self
            .pure_effects()
            .iter()
            .filter(|(_, e)| self.dual_state(e).is_err())
            .map(|(l, _)| l.to_string())
            .collect();
        let missing_state_duals: Vec<String> = self
            .states
            .iter()
            .filter(|(_, s)| s.pure && self.dual_effect(s).is_err())
            .map(|(l, _)| l.clone())
            .collect();

        let complete = missing_effect_duals.is_empty() && missing_state_duals.is_empty();
        let duality_holds = complete && conflicting.is_empty() && max_residual <= tol;

        DualityReport {
            theory: self.name.clone(),
            pairs_checked,
            max_residual,
            complete,
            missing_effect_duals,
            missing_state_duals,
            conflicting_entries: conflicting,
            tolerance: tol,
            duality_holds,
        }
    }

    /// Checks the structural invariants declared by the theory itself: every
    /// effect stays in `[0, 1]` on the pure states, the unit effect is 1 on
    /// them, measurements are binary, and polytope vertices are extreme.
    pub fn validate(&self) -> Result<()> {
        let fail = |detail: String| {
            Err(Error::InvalidTheory {
                theory: self.name.clone(),
                detail,
            })
        };

        if self.maximally_mixed.coords.len() != self.embedding_dim {
            return fail("maximally_mixed has the wrong dimension".into());
        }
        for (label, state) in &self.states {
            if state.coords.len() != self.embedding_dim {
                return fail(format!("state `{label}` has the wrong dimension"));
            }
        }
        for (label, effect) in self
            .effects
            .iter()
            .chain(std::iter::once(&("u".to_string(), self.unit_effect.clone())))
        {
            if effect.weights.len() != self.embedding_dim {
                return fail(format!("effect `{label}` has the wrong dimension"));
            }
            for (slabel, state) in self.states.iter().filter(|(_, s)| s.pure) {
                let v = effect.evaluate_raw(state);
                if !(-self.tolerance..=1.0 + self.tolerance).contains(&v) {
                    return fail(format!(
                        "effect `{label}` evaluates to {v} on pure state `{slabel}`"
                    ));
                }
            }
        }
        for (slabel, state) in self.states.iter().filter(|(_, s)| s.pure) {
            let v = self.unit_effect.evaluate_raw(state);
            if (v - 1.0).abs() > self.tolerance {
                return fail(format!(
                    "unit effect evaluates to {v} on pure state `{slabel}`"
                ));
            }
        }
        for m in &self.measurements {
            if !m.e0.plus(&m.e1).approx_eq(&self.unit_effect, self.tolerance) {
                return fail(format!("measurement `{}` does not sum to the unit", m.label));
            }
        }
        if self.kind == TheoryKind::Polytope {
            // Every vertex must be extreme: not reproducible from the others.
            let vertices = self.pure_states();
            for (idx, v) in vertices.iter().enumerate() {
                let others: Vec<&State> = vertices
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != idx)
                    .map(|(_, s)| *s)
                    .collect();
                if others.is_empty() {
                    continue;
                }
                let mut a = vec![vec![0.0; others.len()]; self.embedding_dim + 1];
                for (j, o) in others.iter().enumerate() {
                    for (i, &c) in o.coords.iter().enumerate() {
                        a[i][j] = c;
                    }
                    a[self.embedding_dim][j] = 1.0;
                }
                let mut b = v.coords.clone();
                b.push(1.0);
                if simplex::nonneg_solution(&a, &b).is_some() {
                    return fail(format!(
                        "vertex {:?} is a convex combination of the other vertices",
                        v.coords
                    ));
                }
            }
        }
        if let TheoryKind::ContinuousBall = self.kind {
            for (label, state) in self.states.iter().filter(|(_, s)| s.pure) {
                if (linalg::norm(&state.coords) - 1.0).abs() > self.tolerance {
                    return fail(format!("pure state `{label}` is not on the unit sphere"));
                }
            }
        }
        Ok(())
    }

    /// Runs the numeric axiom checks; see [`check_assumptions`].
    pub fn check_assumptions(&self) -> AssumptionReport {
        check_assumptions(self)
    }
}

/// Uniform random unit vector by rejection sampling in the cube.
pub(crate) fn random_unit<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = linalg::norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return linalg::scale(&v, 1.0 / n);
        }
    }
}
