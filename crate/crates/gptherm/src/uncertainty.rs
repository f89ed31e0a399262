//! Fine-grained uncertainty bounds.
//!
//! For a pair of binary measurements and a fixed outcome pair, the bound is
//! the maximum over pure states of the average success probability
//! `(p(f_y1|rho) + p(g_y2|rho)) / 2`. The ball kind has a closed form, a
//! polytope is maximized exactly over its vertices, and a one-parameter
//! numeric search is available as an independent route for ball theories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::theory::{BinaryMeasurement, Effect, State, TheoryKind, TheorySpec};

/// How a bound was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    ClosedForm,
    VertexEnumeration,
    Numeric,
}

/// A fine-grained bound: the outcome pair, the bound value and the pure
/// state achieving it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FineGrainedBound {
    pub f: String,
    pub g: String,
    pub outcomes: (u8, u8),
    pub zeta: f64,
    pub maximizer: State,
    pub method: BoundMethod,
    /// Set when the objective is constant over the pure states; the bound is
    /// then 1/2 and the reported maximizer is arbitrary.
    pub degenerate: bool,
}

fn validate_measurement(theory: &TheorySpec, m: &BinaryMeasurement) -> Result<()> {
    if m.e0.weights.len() != theory.embedding_dim {
        return Err(Error::DimensionMismatch {
            expected: theory.embedding_dim,
            got: m.e0.weights.len(),
        });
    }
    if !m.e0.plus(&m.e1).approx_eq(&theory.unit_effect, theory.tolerance) {
        return Err(Error::InvalidTheory {
            theory: theory.name.clone(),
            detail: format!("measurement `{}` does not sum to the unit effect", m.label),
        });
    }
    Ok(())
}

/// Maximizes `(p(f_y1|rho) + p(g_y2|rho)) / 2` over pure states.
pub fn zeta_bound(
    theory: &TheorySpec,
    f: &BinaryMeasurement,
    g: &BinaryMeasurement,
    outcomes: (u8, u8),
) -> Result<FineGrainedBound> {
    validate_measurement(theory, f)?;
    validate_measurement(theory, g)?;
    let ef = f.effect(outcomes.0);
    let eg = g.effect(outcomes.1);

    let (zeta, maximizer, method, degenerate) = match theory.kind {
        TheoryKind::ContinuousBall => {
            // objective = (c_f + c_g)/2 + v . r with v = (w_f + w_g)/2,
            // maximized on the sphere by r = v / |v|
            let constant = 0.5 * (ef.bias + eg.bias);
            let v: Vec<f64> = ef
                .weights
                .iter()
                .zip(&eg.weights)
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            let vnorm = linalg::norm(&v);
            if vnorm <= theory.tolerance {
                let mut axis = vec![0.0; theory.embedding_dim];
                axis[0] = 1.0;
                (constant, State::pure(axis), BoundMethod::ClosedForm, true)
            } else {
                let direction = linalg::scale(&v, 1.0 / vnorm);
                (
                    constant + vnorm,
                    State::pure(direction),
                    BoundMethod::ClosedForm,
                    false,
                )
            }
        }
        TheoryKind::Polytope => {
            let mut best: Option<(f64, &State)> = None;
            for v in theory.pure_states() {
                let value = 0.5 * (theory.evaluate(ef, v)? + theory.evaluate(eg, v)?);
                // strict comparison keeps the lowest vertex index on ties
                if best.is_none_or(|(b, _)| value > b) {
                    best = Some((value, v));
                }
            }
            let (zeta, maximizer) = best.ok_or_else(|| Error::InvalidTheory {
                theory: theory.name.clone(),
                detail: "polytope theory declares no vertices".to_string(),
            })?;
            (zeta, maximizer.clone(), BoundMethod::VertexEnumeration, false)
        }
    };

    Ok(FineGrainedBound {
        f: f.label.clone(),
        g: g.label.clone(),
        outcomes,
        zeta,
        maximizer,
        method,
        degenerate,
    })
}

/// The bounds for all four outcome pairs, in the order
/// `(0,0), (0,1), (1,0), (1,1)`.
pub fn all_four_bounds(
    theory: &TheorySpec,
    f: &BinaryMeasurement,
    g: &BinaryMeasurement,
) -> Result<Vec<FineGrainedBound>> {
    [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|pair| zeta_bound(theory, f, g, pair))
        .collect()
}

/// Grid-plus-golden-section maximization over the circle of pure states in
/// the plane spanned by the two effect directions. Independent of the closed
/// form; ball kind only.
pub fn zeta_bound_numeric(
    theory: &TheorySpec,
    f: &BinaryMeasurement,
    g: &BinaryMeasurement,
    outcomes: (u8, u8),
) -> Result<FineGrainedBound> {
    if theory.kind != TheoryKind::ContinuousBall {
        return Err(Error::NotQubitTheory {
            theory: theory.name.clone(),
        });
    }
    validate_measurement(theory, f)?;
    validate_measurement(theory, g)?;
    let ef = f.effect(outcomes.0);
    let eg = g.effect(outcomes.1);
    let constant = 0.5 * (ef.bias + eg.bias);
    let v: Vec<f64> = ef
        .weights
        .iter()
        .zip(&eg.weights)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();

    // Orthonormal basis for the search plane: the objective gradient v and
    // any direction orthogonal to it within span(w_f, w_g).
    let vnorm = linalg::norm(&v);
    if vnorm <= theory.tolerance {
        let mut axis = vec![0.0; theory.embedding_dim];
        axis[0] = 1.0;
        return Ok(FineGrainedBound {
            f: f.label.clone(),
            g: g.label.clone(),
            outcomes,
            zeta: constant,
            maximizer: State::pure(axis),
            method: BoundMethod::Numeric,
            degenerate: true,
        });
    }
    let b1 = linalg::scale(&v, 1.0 / vnorm);
    let residual: Vec<f64> = {
        let proj = linalg::dot(&ef.weights, &b1);
        ef.weights
            .iter()
            .zip(&b1)
            .map(|(w, e)| w - proj * e)
            .collect()
    };
    let b2 = if linalg::norm(&residual) > 1e-12 {
        linalg::scale(&residual, 1.0 / linalg::norm(&residual))
    } else {
        // w_f parallel to v; the circle degenerates to the +-b1 pair
        b1.clone()
    };

    let point = |theta: f64| -> Vec<f64> {
        b1.iter()
            .zip(&b2)
            .map(|(x, y)| theta.cos() * x + theta.sin() * y)
            .collect()
    };
    let objective = |theta: f64| constant + linalg::dot(&v, &point(theta));

    // 64-point grid, then golden-section refinement between the neighbors of
    // the best grid point.
    const GRID: usize = 64;
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..GRID {
        let theta = i as f64 / GRID as f64 * std::f64::consts::TAU;
        let val = objective(theta);
        if val > best_val {
            best_val = val;
            best_idx = i;
        }
    }
    let step = std::f64::consts::TAU / GRID as f64;
    let mut lo = (best_idx as f64 - 1.0) * step;
    let mut hi = (best_idx as f64 + 1.0) * step;
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (objective(a), objective(b));
    while hi - lo > 1e-10 {
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = objective(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = objective(b);
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(FineGrainedBound {
        f: f.label.clone(),
        g: g.label.clone(),
        outcomes,
        zeta: objective(theta),
        maximizer: State::pure(point(theta)),
        method: BoundMethod::Numeric,
        degenerate: false,
    })
}

/// Maximizes the dual-form average `(p(e|rho_f) + p(e|rho_g)) / 2` over
/// pure effects; by linearity this is the largest value any pure effect
/// takes on the midpoint of the two states.
pub fn maximally_certain_effect(
    theory: &TheorySpec,
    rho_f: &State,
    rho_g: &State,
) -> Result<(Effect, f64)> {
    for rho in [rho_f, rho_g] {
        theory.membership(rho)?;
        if !theory.is_pure_state(rho) {
            return Err(Error::NotPureState {
                detail: format!("coords {:?}", rho.coords),
            });
        }
    }
    let midpoint = State::mixture(&[(0.5, rho_f), (0.5, rho_g)]);
    match theory.kind {
        TheoryKind::ContinuousBall => {
            let m = linalg::norm(&midpoint.coords);
            let direction = if m <= theory.tolerance {
                let mut axis = vec![0.0; theory.embedding_dim];
                axis[0] = 1.0;
                axis
            } else {
                linalg::scale(&midpoint.coords, 1.0 / m)
            };
            let effect = Effect::pure(0.5, linalg::scale(&direction, 0.5));
            Ok((effect, 0.5 * (1.0 + m.min(1.0))))
        }
        TheoryKind::Polytope => {
            let mut best: Option<(f64, &Effect)> = None;
            for (_, e) in theory.pure_effects() {
                let value = theory.evaluate(e, &midpoint)?;
                if best.is_none_or(|(b, _)| value > b) {
                    best = Some((value, e));
                }
            }
            let (value, effect) = best.ok_or_else(|| Error::InvalidTheory {
                theory: theory.name.clone(),
                detail: "no pure effects declared".to_string(),
            })?;
            Ok((effect.clone(), value))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{gbit, qubit};
    use approx::assert_abs_diff_eq;

    const ZETA_XZ: f64 = 0.8535533905932737;

    #[test]
    fn quantum_xz_bound_is_the_tsirelson_style_value() {
        let th = qubit();
        let x = th.measurement("X").unwrap().clone();
        let z = th.measurement("Z").unwrap().clone();
        let bound = zeta_bound(&th, &x, &z, (0, 0)).unwrap();
        assert_abs_diff_eq!(bound.zeta, ZETA_XZ, epsilon = 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(bound.maximizer.coords[0], s, epsilon = 1e-9);
        assert_abs_diff_eq!(bound.maximizer.coords[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bound.maximizer.coords[2], s, epsilon = 1e-9);
        assert!(!bound.degenerate);
        assert_eq!(bound.method, BoundMethod::ClosedForm);
    }

    #[test]
    fn identical_measurements_give_certainty() {
        let th = qubit();
        let z = th.measurement("Z").unwrap().clone();
        let bound = zeta_bound(&th, &z, &z, (0, 0)).unwrap();
        assert_abs_diff_eq!(bound.zeta, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bound.maximizer.coords[2], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn all_four_xz_bounds_agree() {
        let th = qubit();
        let x = th.measurement("X").unwrap().clone();
        let z = th.measurement("Z").unwrap().clone();
        let bounds = all_four_bounds(&th, &x, &z).unwrap();
        assert_eq!(bounds.len(), 4);
        for b in &bounds {
            assert_abs_diff_eq!(b.zeta, ZETA_XZ, epsilon = 1e-9);
        }
    }

    #[test]
    fn same_observable_splits_into_certain_and_degenerate_pairs() {
        let th = qubit();
        let x = th.measurement("X").unwrap().clone();
        let bounds = all_four_bounds(&th, &x, &x).unwrap();
        assert_abs_diff_eq!(bounds[0].zeta, 1.0, epsilon = 1e-12); // (0,0)
        assert_abs_diff_eq!(bounds[3].zeta, 1.0, epsilon = 1e-12); // (1,1)
        for idx in [1, 2] {
            assert_abs_diff_eq!(bounds[idx].zeta, 0.5, epsilon = 1e-12);
            assert!(bounds[idx].degenerate);
        }
    }

    #[test]
    fn skew_pair_matches_half_angle_formula() {
        // X against the bisecting measurement M (45 degrees apart): aligned
        // outcome pairs give 1/2 + cos(pi/8)/2, crossed pairs
        // 1/2 + sin(pi/8)/2; cross-checked against the independent numeric
        // route
        let th = qubit();
        let x = th.measurement("X").unwrap().clone();
        let m = th.measurement("M").unwrap().clone();
        let aligned = 0.5 + (std::f64::consts::PI / 8.0).cos() / 2.0;
        let crossed = 0.5 + (std::f64::consts::PI / 8.0).sin() / 2.0;
        let bounds = all_four_bounds(&th, &x, &m).unwrap();
        assert_abs_diff_eq!(bounds[0].zeta, aligned, epsilon = 1e-9);
        assert_abs_diff_eq!(bounds[3].zeta, aligned, epsilon = 1e-9);
        assert_abs_diff_eq!(bounds[1].zeta, crossed, epsilon = 1e-9);
        assert_abs_diff_eq!(bounds[2].zeta, crossed, epsilon = 1e-9);
        for (pair, expected) in [((0, 0), aligned), ((0, 1), crossed)] {
            let numeric = zeta_bound_numeric(&th, &x, &m, pair).unwrap();
            assert_abs_diff_eq!(numeric.zeta, expected, epsilon = 1e-8);
            assert_eq!(numeric.method, BoundMethod::Numeric);
        }
    }

    #[test]
    fn gbit_reaches_certainty_for_both() {
        let th = gbit();
        let x = th.measurement("X").unwrap().clone();
        let z = th.measurement("Z").unwrap().clone();
        let bound = zeta_bound(&th, &x, &z, (0, 0)).unwrap();
        assert_eq!(bound.zeta, 1.0);
        assert_eq!(bound.maximizer.coords, vec![1.0, 1.0]);
        assert_eq!(bound.method, BoundMethod::VertexEnumeration);
    }

    #[test]
    fn maximally_certain_effect_on_the_quantum_pair() {
        let th = qubit();
        let plus = th.state("xplus").unwrap().clone();
        let zero = th.state("zero").unwrap().clone();
        let (effect, value) = maximally_certain_effect(&th, &plus, &zero).unwrap();
        assert_abs_diff_eq!(value, ZETA_XZ, epsilon = 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(effect.weights[0], 0.5 * s, epsilon = 1e-9);
        assert_abs_diff_eq!(effect.weights[2], 0.5 * s, epsilon = 1e-9);
        // coinciding states: the dual effect itself, with certainty
        let (e2, v2) = maximally_certain_effect(&th, &zero, &zero).unwrap();
        assert_abs_diff_eq!(v2, 1.0, epsilon = 1e-12);
        assert!(e2.approx_eq(th.effect("z0").unwrap(), 1e-9));
    }

    #[test]
    fn maximally_certain_effect_on_gbit_corners() {
        let th = gbit();
        let pp = th.state("pp").unwrap().clone();
        let pm = th.state("pm").unwrap().clone();
        let (effect, value) = maximally_certain_effect(&th, &pp, &pm).unwrap();
        assert_eq!(value, 1.0);
        assert!(effect.approx_eq(th.effect("f0").unwrap(), 1e-12));
    }

    #[test]
    fn numeric_route_agrees_with_closed_form() {
        let th = qubit();
        let mut rng = crate::seeded_rng(99);
        for _ in 0..50 {
            let a = crate::theory::random_unit(3, &mut rng);
            let b = crate::theory::random_unit(3, &mut rng);
            let mk = |label: &str, dir: &[f64]| BinaryMeasurement {
                label: label.to_string(),
                e0: Effect::pure(0.5, linalg::scale(dir, 0.5)),
                e1: Effect::pure(0.5, linalg::scale(dir, -0.5)),
            };
            let f = mk("f", &a);
            let g = mk("g", &b);
            let closed = zeta_bound(&th, &f, &g, (0, 0)).unwrap();
            let numeric = zeta_bound_numeric(&th, &f, &g, (0, 0)).unwrap();
            assert_abs_diff_eq!(closed.zeta, numeric.zeta, epsilon = 1e-8);
        }
    }
}
