//! Shannon entropy and the two generalized state entropies used by the
//! mixing cycle: decomposition entropy (minimum weight entropy over
//! decompositions into perfectly distinguishable pure states) and
//! measurement entropy (minimum outcome entropy over maximally fine-grained
//! measurements). For the ball both reduce to the spectral formula
//! `H((1 + r)/2)` in the Bloch radius `r`; for polytopes they are computed
//! by enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::simplex::LinearFeasibility;
use crate::theory::{DistinguishableSet, Effect, State, TheoryKind, TheorySpec};

const WEIGHT_RESIDUAL_GATE: f64 = 1e-9;
/// Largest distinguishable set searched for during discovery.
const MAX_SET_SIZE: usize = 4;

/// A validated probability distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution {
                detail: "empty".to_string(),
            });
        }
        if let Some(p) = probs.iter().find(|&&p| !(0.0..=1.0 + 1e-9).contains(&p)) {
            return Err(Error::InvalidDistribution {
                detail: format!("entry {p} outside [0, 1]"),
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution {
                detail: format!("sums to {total}"),
            });
        }
        Ok(Distribution(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// `x log2 x` with the `0 log 0 = 0` convention.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Base-2 Shannon entropy.
pub fn shannon(dist: &Distribution) -> f64 {
    -dist.0.iter().map(|&p| xlogx(p)).sum::<f64>()
}

/// Shannon entropy of the two-point distribution `(p, 1 - p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { value: p });
    }
    Ok(-xlogx(p) - xlogx(1.0 - p))
}

/// Spectral entropy of a ball-kind state: `H((1 + r)/2)` for Bloch radius
/// `r`. For the qubit this is the von Neumann entropy.
pub fn spectral_entropy(theory: &TheorySpec, state: &State) -> Result<f64> {
    if theory.kind != TheoryKind::ContinuousBall {
        return Err(Error::NotQubitTheory {
            theory: theory.name.clone(),
        });
    }
    theory.membership(state)?;
    let r = linalg::norm(&state.coords).min(1.0);
    binary_entropy(0.5 * (1.0 + r))
}

/// A decomposition of a state into perfectly distinguishable pure components
/// together with the effects telling the components apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub weights: Distribution,
    pub components: Vec<State>,
    pub distinguishing_effects: Vec<Effect>,
}

impl Decomposition {
    /// Verifies the defining identities: the weighted components reassemble
    /// the state and the effects satisfy the delta relation and sum to the
    /// unit.
    pub fn verify(&self, theory: &TheorySpec, state: &State) -> Result<()> {
        let parts: Vec<(f64, &State)> = self
            .weights
            .probs()
            .iter()
            .copied()
            .zip(self.components.iter())
            .collect();
        let mixed = State::mixture(&parts);
        let residual = linalg::norm(&linalg::sub(&mixed.coords, &state.coords));
        if residual > 1e-9 {
            return Err(Error::MixtureMismatch { residual });
        }
        let mut total = Effect::new(0.0, vec![0.0; theory.embedding_dim]);
        for e in &self.distinguishing_effects {
            total = total.plus(e);
        }
        if !total.approx_eq(&theory.unit_effect, theory.tolerance) {
            return Err(Error::InvalidTheory {
                theory: theory.name.clone(),
                detail: "distinguishing effects do not sum to the unit".to_string(),
            });
        }
        for (k, h) in self.distinguishing_effects.iter().enumerate() {
            for (j, sigma) in self.components.iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                if (h.evaluate_raw(sigma) - expected).abs() > theory.tolerance {
                    return Err(Error::InvalidTheory {
                        theory: theory.name.clone(),
                        detail: format!("effect {k} does not single out component {j}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Minimum Shannon entropy of weights over decompositions of `state` into
/// perfectly distinguishable pure states, with the achieving decomposition.
pub fn decomposition_entropy(
    theory: &TheorySpec,
    state: &State,
) -> Result<(f64, Decomposition)> {
    theory.membership(state)?;
    match theory.kind {
        TheoryKind::ContinuousBall => ball_decomposition(theory, state),
        TheoryKind::Polytope => polytope_decomposition(theory, state),
    }
}

fn ball_decomposition(theory: &TheorySpec, state: &State) -> Result<(f64, Decomposition)> {
    let r = linalg::norm(&state.coords).min(1.0);
    // Antipodal pure pair along the state's own direction; for the fully
    // mixed state any axis works, so pick the last coordinate axis.
    let direction = if r > theory.tolerance {
        linalg::scale(&state.coords, 1.0 / linalg::norm(&state.coords))
    } else {
        let mut d = vec![0.0; theory.embedding_dim];
        d[theory.embedding_dim - 1] = 1.0;
        d
    };
    let up = State::pure(direction.clone());
    let down = State::pure(linalg::scale(&direction, -1.0));
    let weights = Distribution::new(vec![0.5 * (1.0 + r), 0.5 * (1.0 - r)])?;
    let h_up = Effect::pure(0.5, linalg::scale(&direction, 0.5));
    let h_down = h_up.complement_in(&theory.unit_effect);
    let entropy = shannon(&weights);
    Ok((
        entropy,
        Decomposition {
            weights,
            components: vec![up, down],
            distinguishing_effects: vec![h_up, h_down],
        },
    ))
}

fn polytope_decomposition(theory: &TheorySpec, state: &State) -> Result<(f64, Decomposition)> {
    let mut best: Option<(f64, Decomposition)> = None;
    for set in candidate_sets(theory) {
        let Some(weights) = solve_weights(theory, &set, state) else {
            continue;
        };
        let dist = Distribution::new(weights)?;
        let entropy = shannon(&dist);
        if best.as_ref().is_none_or(|(e, _)| entropy < *e) {
            best = Some((
                entropy,
                Decomposition {
                    weights: dist,
                    components: set.states.clone(),
                    distinguishing_effects: set.effects.clone(),
                },
            ));
        }
    }
    best.ok_or(Error::NoValidDecomposition)
}

/// Weights expressing `state` in the given component set, or `None` when the
/// state does not lie in their hull: the linear solve must reproduce the
/// state to within the residual gate and all weights must be nonnegative.
fn solve_weights(theory: &TheorySpec, set: &DistinguishableSet, state: &State) -> Option<Vec<f64>> {
    let k = set.states.len();
    let mut a = vec![vec![0.0; k]; theory.embedding_dim + 1];
    for (j, s) in set.states.iter().enumerate() {
        for (i, &c) in s.coords.iter().enumerate() {
            a[i][j] = c;
        }
        a[theory.embedding_dim][j] = 1.0;
    }
    let mut b = state.coords.clone();
    b.push(1.0);
    let (weights, residual) = linalg::least_squares(&a, &b)?;
    if residual > WEIGHT_RESIDUAL_GATE {
        return None;
    }
    if weights.iter().any(|&w| w < -WEIGHT_RESIDUAL_GATE) {
        return None;
    }
    // Clamp roundoff and renormalize so the entropy sees a clean simplex
    // point.
    let clamped: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    Some(clamped.iter().map(|w| w / total).collect())
}

/// Declared distinguishable sets plus the ones discoverable by exhaustive
/// search over small vertex subsets, with distinguishing-effect existence
/// decided by linear feasibility.
fn candidate_sets(theory: &TheorySpec) -> Vec<DistinguishableSet> {
    let mut sets: Vec<DistinguishableSet> = theory.distinguishable_sets().to_vec();
    let vertices: Vec<(String, State)> = theory
        .states()
        .filter(|(_, s)| s.pure)
        .map(|(l, s)| (l.to_string(), s.clone()))
        .collect();
    let n = vertices.len();
    let mut indices = Vec::new();
    for size in 1..=MAX_SET_SIZE.min(n) {
        indices.clear();
        combinations(n, size, &mut indices);
        for combo in &indices {
            let labels: Vec<String> = combo.iter().map(|&i| vertices[i].0.clone()).collect();
            if sets.iter().any(|s| {
                s.state_labels.len() == labels.len()
                    && labels.iter().all(|l| s.state_labels.contains(l))
            }) {
                continue;
            }
            let states: Vec<State> = combo.iter().map(|&i| vertices[i].1.clone()).collect();
            if let Some(effects) = distinguishing_effects(theory, &states) {
                sets.push(DistinguishableSet {
                    state_labels: labels,
                    states,
                    effects,
                });
            }
        }
    }
    sets
}

fn combinations(n: usize, size: usize, out: &mut Vec<Vec<usize>>) {
    let mut combo = (0..size).collect::<Vec<_>>();
    loop {
        out.push(combo.clone());
        // Advance to the next lexicographic combination.
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if combo[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        combo[i] += 1;
        for j in i + 1..size {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Searches for affine effects `h_j` with `h_j(sigma_k) = delta_jk`, summing
/// to the unit effect, and valid (nonnegative) on every vertex. Existence is
/// a small linear feasibility problem.
fn distinguishing_effects(theory: &TheorySpec, states: &[State]) -> Option<Vec<Effect>> {
    let dim = theory.embedding_dim;
    let k = states.len();
    let coeffs = dim + 1; // bias plus weights per effect
    let mut problem = LinearFeasibility::new(k * coeffs);

    let effect_row = |j: usize, point: &[f64]| {
        let mut row = vec![0.0; k * coeffs];
        row[j * coeffs] = 1.0;
        for (i, &c) in point.iter().enumerate() {
            row[j * coeffs + 1 + i] = c;
        }
        row
    };

    for (j, _) in states.iter().enumerate() {
        for (jj, sigma) in states.iter().enumerate() {
            let rhs = if j == jj { 1.0 } else { 0.0 };
            problem.eq(effect_row(j, &sigma.coords), rhs);
        }
    }
    // Sum to the unit effect, componentwise.
    for c in 0..coeffs {
        let mut row = vec![0.0; k * coeffs];
        for j in 0..k {
            row[j * coeffs + c] = 1.0;
        }
        let rhs = if c == 0 {
            theory.unit_effect.bias
        } else {
            theory.unit_effect.weights[c - 1]
        };
        problem.eq(row, rhs);
    }
    // Valid effects stay within [0, 1] on every vertex.
    for (_, v) in theory.states().filter(|(_, s)| s.pure) {
        for j in 0..k {
            problem.ge(effect_row(j, &v.coords), 0.0);
            problem.le(effect_row(j, &v.coords), 1.0);
        }
    }

    let solution = problem.solve()?;
    Some(
        (0..k)
            .map(|j| {
                Effect::new(
                    solution[j * coeffs],
                    solution[j * coeffs + 1..(j + 1) * coeffs].to_vec(),
                )
            })
            .collect(),
    )
}

/// The maximally fine-grained effects of a theory.
#[derive(Debug, Clone, PartialEq)]
pub enum FineGrainedFamily {
    /// Ball kind: the parametric family of projector-like effects
    /// `1/2 (1 + u . r)` over unit directions `u`.
    BallProjectors,
    /// Polytope kind: the declared effects that survive the two-term
    /// positive-decomposition test.
    Discrete(Vec<(String, Effect)>),
}

/// Filters the declared effect list down to the fine-grained ones: nonzero
/// effects that cannot be written as a positive combination of two distinct
/// other declared effects.
pub fn fine_grained_effects(theory: &TheorySpec) -> FineGrainedFamily {
    if theory.kind == TheoryKind::ContinuousBall {
        return FineGrainedFamily::BallProjectors;
    }
    let all: Vec<(String, Effect)> = theory
        .effects()
        .map(|(l, e)| (l.to_string(), e.clone()))
        .collect();
    let survivors = all
        .iter()
        .filter(|(_, e)| !e.is_zero(theory.tolerance))
        .filter(|(label, e)| !is_composite(e, label, &all, theory.tolerance))
        .cloned()
        .collect();
    FineGrainedFamily::Discrete(survivors)
}

fn is_composite(e: &Effect, label: &str, all: &[(String, Effect)], tol: f64) -> bool {
    let vec_of = |x: &Effect| {
        let mut v = vec![x.bias];
        v.extend_from_slice(&x.weights);
        v
    };
    let target = vec_of(e);
    for (i, (la, a)) in all.iter().enumerate() {
        if la == label {
            continue;
        }
        for (lb, b) in &all[i + 1..] {
            if lb == label || a.approx_eq(b, tol) {
                continue;
            }
            // Solve e = alpha a + beta b in the least-squares sense.
            let rows: Vec<Vec<f64>> = vec_of(a)
                .into_iter()
                .zip(vec_of(b))
                .map(|(x, y)| vec![x, y])
                .collect();
            if let Some((coef, residual)) = linalg::least_squares(&rows, &target) {
                if residual <= 1e-9 && coef[0] > 1e-9 && coef[1] > 1e-9 {
                    return true;
                }
            }
        }
    }
    false
}

/// Minimum outcome entropy over maximally fine-grained measurements.
pub fn measurement_entropy(theory: &TheorySpec, state: &State) -> Result<f64> {
    theory.membership(state)?;
    match fine_grained_effects(theory) {
        FineGrainedFamily::BallProjectors => {
            // Optimal projective measurement is along the state's own
            // direction, giving the spectral outcome distribution.
            spectral_entropy(theory, state)
        }
        FineGrainedFamily::Discrete(effects) => {
            let n = effects.len();
            assert!(n <= 20, "effect list too large for subset enumeration");
            let mut best: Option<f64> = None;
            for mask in 1u32..(1 << n) {
                let chosen: Vec<&Effect> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| &effects[i].1)
                    .collect();
                let mut total = Effect::new(0.0, vec![0.0; theory.embedding_dim]);
                for e in &chosen {
                    total = total.plus(e);
                }
                if !total.approx_eq(&theory.unit_effect, theory.tolerance) {
                    continue;
                }
                let probs: Vec<f64> = chosen
                    .iter()
                    .map(|e| theory.evaluate(e, state))
                    .collect::<Result<_>>()?;
                let h = -probs.iter().map(|&p| xlogx(p)).sum::<f64>();
                if best.is_none_or(|b| h < b) {
                    best = Some(h);
                }
            }
            best.ok_or(Error::NoFineGrainedMeasurement)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{gbit, load_str, qubit};
    use approx::assert_abs_diff_eq;

    #[test]
    fn shannon_basics() {
        let uniform = Distribution::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(shannon(&uniform), 1.0, epsilon = 1e-15);
        let point = Distribution::new(vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(shannon(&point), 0.0, epsilon = 1e-15);
        // frozen high-precision value for the bound-saturating split
        let skew = Distribution::new(vec![0.8535533906, 0.1464466094]).unwrap();
        assert_abs_diff_eq!(shannon(&skew), 0.6008760366757506, epsilon = 1e-12);
        assert!((shannon(&skew) - 0.6009).abs() < 1e-4);
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![-0.1, 1.1]).is_err());
        assert!(Distribution::new(vec![]).is_err());
    }

    #[test]
    fn binary_entropy_symmetry_and_range() {
        assert_abs_diff_eq!(
            binary_entropy(0.3).unwrap(),
            binary_entropy(0.7).unwrap(),
            epsilon = 1e-15
        );
        assert!(matches!(binary_entropy(1.2), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn spectral_entropy_matches_bloch_radius() {
        let th = qubit();
        let origin = State::mixed(vec![0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(spectral_entropy(&th, &origin).unwrap(), 1.0, epsilon = 1e-12);
        let pure = State::pure(vec![0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(spectral_entropy(&th, &pure).unwrap(), 0.0, epsilon = 1e-12);
        // the r = 1/sqrt(2) state that the saturating cycle produces
        let rho0 = State::mixed(vec![0.5, 0.0, 0.5]);
        assert_abs_diff_eq!(
            spectral_entropy(&th, &rho0).unwrap(),
            0.6008760366928562,
            epsilon = 1e-12
        );
        assert!(matches!(
            spectral_entropy(&gbit(), &State::mixed(vec![0.0, 0.0])),
            Err(Error::NotQubitTheory { .. })
        ));
    }

    #[test]
    fn qubit_decomposition_is_the_spectral_one() {
        let th = qubit();
        let state = State::mixed(vec![0.5, 0.0, 0.5]);
        let (entropy, decomp) = decomposition_entropy(&th, &state).unwrap();
        assert_abs_diff_eq!(entropy, 0.6008760366928562, epsilon = 1e-12);
        decomp.verify(&th, &state).unwrap();
        // fully mixed state decomposes into any antipodal pair at (1/2, 1/2)
        let (e_mixed, d_mixed) =
            decomposition_entropy(&th, &State::mixed(vec![0.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(e_mixed, 1.0, epsilon = 1e-12);
        assert_eq!(d_mixed.weights.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn gbit_decompositions() {
        let th = gbit();
        let pp = th.state("pp").unwrap().clone();
        let (e, d) = decomposition_entropy(&th, &pp).unwrap();
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-12);
        d.verify(&th, &pp).unwrap();

        let center = th.state("center").unwrap().clone();
        let (e, d) = decomposition_entropy(&th, &center).unwrap();
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-12);
        d.verify(&th, &center).unwrap();
        assert_eq!(d.components.len(), 2);

        // a generic interior point lies on no distinguishable axis
        let skew = State::mixed(vec![0.3, 0.7]);
        assert!(matches!(
            decomposition_entropy(&th, &skew),
            Err(Error::NoValidDecomposition)
        ));
    }

    #[test]
    fn gbit_center_decomposes_along_either_diagonal() {
        // oracle: enumerate both diagonal pairs by hand
        let th = gbit();
        for (a, b) in [("pp", "mm"), ("pm", "mp")] {
            let sa = th.state(a).unwrap();
            let sb = th.state(b).unwrap();
            let mid = State::mixture(&[(0.5, sa), (0.5, sb)]);
            assert_eq!(mid.coords, vec![0.0, 0.0]);
        }
        // so the minimum over candidate sets must be exactly H(1/2, 1/2) = 1
        let (e, _) = decomposition_entropy(&th, th.state("center").unwrap()).unwrap();
        assert_eq!(e, 1.0);
    }

    #[test]
    fn fine_grained_effects_exclude_composites() {
        let family = fine_grained_effects(&gbit());
        let FineGrainedFamily::Discrete(list) = family else {
            panic!("gbit is a polytope");
        };
        let labels: Vec<&str> = list.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["f0", "f1", "g0", "g1"]);
    }

    #[test]
    fn gbit_measurement_entropy() {
        let th = gbit();
        let pp = th.state("pp").unwrap().clone();
        assert_abs_diff_eq!(measurement_entropy(&th, &pp).unwrap(), 0.0, epsilon = 1e-12);
        let center = th.state("center").unwrap().clone();
        assert_abs_diff_eq!(
            measurement_entropy(&th, &center).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn qubit_entropies_coincide() {
        let th = qubit();
        let mut rng = crate::seeded_rng(17);
        for _ in 0..100 {
            let dir = crate::theory::random_unit(3, &mut rng);
            let r: f64 = rand::Rng::random_range(&mut rng, 0.0..1.0);
            let state = State::mixed(dir.iter().map(|d| d * r).collect());
            let s = spectral_entropy(&th, &state).unwrap();
            let (d, _) = decomposition_entropy(&th, &state).unwrap();
            let m = measurement_entropy(&th, &state).unwrap();
            assert_abs_diff_eq!(s, d, epsilon = 1e-6);
            assert_abs_diff_eq!(s, m, epsilon = 1e-6);
        }
    }

    #[test]
    fn missing_complement_means_no_measurement() {
        let text = r#"
            name = "halfopen"
            kind = "polytope"
            embedding_dim = 2
            maximally_mixed = [0.0, 0.0]
            [unit_effect]
            bias = 1.0
            weights = [0.0, 0.0]
            [[states]]
            label = "a"
            coords = [1.0, 0.0]
            pure = true
            [[states]]
            label = "b"
            coords = [-1.0, 0.0]
            pure = true
            [[effects]]
            label = "e"
            bias = 0.5
            weights = [0.5, 0.0]
            pure = true
        "#;
        let th = load_str(text, "<test>").unwrap();
        let a = th.state("a").unwrap().clone();
        assert!(matches!(
            measurement_entropy(&th, &a),
            Err(Error::NoFineGrainedMeasurement)
        ));
    }
}
