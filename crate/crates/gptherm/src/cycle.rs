//! The two-stage membrane cycle and its work ledger.
//!
//! Stage 1 replaces the wall between two particle species by a pair of
//! semi-transparent membranes keyed to a binary measurement and lets them
//! expand to equilibrium; stage 2 pulls the resulting mixture apart into
//! perfectly distinguishable pure components and reassembles the original
//! species. All work values are dimensionless in units of `N k T ln 2`;
//! conversion to joules is opt-in.

use serde::{Deserialize, Serialize};

use crate::entropy::{self, binary_entropy, xlogx, Decomposition};
use crate::error::{Error, Result};
use crate::theory::{states_approx_eq, BinaryMeasurement, State, TheorySpec};
use crate::uncertainty::{maximally_certain_effect, zeta_bound};

/// Boltzmann constant, J/K (defined SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Everything needed to run the cycle: the theory, the measurement pair
/// whose dual states define the two particle species, the membrane
/// measurement, and an optional counterfactual override of the membrane
/// equilibrium probabilities.
#[derive(Debug, Clone)]
pub struct CycleScenario {
    pub theory: TheorySpec,
    pub f: BinaryMeasurement,
    pub g: BinaryMeasurement,
    pub dual_f0: State,
    pub dual_f1: State,
    pub dual_g0: State,
    pub dual_g1: State,
    pub membrane: BinaryMeasurement,
    /// When set, stage 1 uses these two values in place of the computed
    /// membrane probabilities `q_i = p(e_i|rho_i)`; stage 2 is untouched.
    pub counterfactual_zeta: Option<(f64, f64)>,
}

impl CycleScenario {
    /// Builds a scenario from measurement labels, resolving the four dual
    /// states through the theory's duality table.
    pub fn from_labels(
        theory: TheorySpec,
        f_label: &str,
        g_label: &str,
        membrane_label: &str,
    ) -> Result<Self> {
        let f = theory.measurement(f_label)?.clone();
        let g = theory.measurement(g_label)?.clone();
        let membrane = theory.measurement(membrane_label)?.clone();
        Self::from_parts(theory, f, g, membrane)
    }

    /// Builds a scenario from explicit measurements, resolving dual states
    /// through the duality table.
    pub fn from_parts(
        theory: TheorySpec,
        f: BinaryMeasurement,
        g: BinaryMeasurement,
        membrane: BinaryMeasurement,
    ) -> Result<Self> {
        let dual_f0 = theory.dual_state(&f.e0)?;
        let dual_f1 = theory.dual_state(&f.e1)?;
        let dual_g0 = theory.dual_state(&g.e0)?;
        let dual_g1 = theory.dual_state(&g.e1)?;
        Ok(CycleScenario {
            theory,
            f,
            g,
            dual_f0,
            dual_f1,
            dual_g0,
            dual_g1,
            membrane,
            counterfactual_zeta: None,
        })
    }

    /// Builds the scenario with the membrane assembled from the maximally
    /// certain effect for the `(f_0, g_0)` pair and its complement, which is
    /// the work-optimal choice.
    pub fn with_optimal_membrane(
        theory: TheorySpec,
        f_label: &str,
        g_label: &str,
    ) -> Result<Self> {
        let f = theory.measurement(f_label)?.clone();
        let g = theory.measurement(g_label)?.clone();
        let rho_f0 = theory.dual_state(&f.e0)?;
        let rho_g0 = theory.dual_state(&g.e0)?;
        let (e0, _) = maximally_certain_effect(&theory, &rho_f0, &rho_g0)?;
        let e1 = e0.complement_in(&theory.unit_effect);
        let membrane = BinaryMeasurement {
            label: "mce".to_string(),
            e0,
            e1,
        };
        Self::from_parts(theory, f, g, membrane)
    }

    /// Replaces the membrane probabilities with a counterfactual pair of
    /// uncertainty-bound values.
    pub fn with_counterfactual(mut self, zeta0: f64, zeta1: f64) -> Result<Self> {
        for z in [zeta0, zeta1] {
            if !(0.5..=1.0).contains(&z) {
                return Err(Error::BadRange {
                    detail: format!("counterfactual zeta {z} outside [0.5, 1]"),
                });
            }
        }
        self.counterfactual_zeta = Some((zeta0, zeta1));
        Ok(self)
    }

    /// First species: the equal mixture of the duals of `f_0` and `g_0`.
    pub fn rho0(&self) -> State {
        State::mixture(&[(0.5, &self.dual_f0), (0.5, &self.dual_g0)])
    }

    /// Second species: the equal mixture of the duals of `f_1` and `g_1`.
    pub fn rho1(&self) -> State {
        State::mixture(&[(0.5, &self.dual_f1), (0.5, &self.dual_g1)])
    }

    /// The equal mixture of the two species.
    pub fn mixture(&self) -> State {
        let (rho0, rho1) = (self.rho0(), self.rho1());
        State::mixture(&[(0.5, &rho0), (0.5, &rho1)])
    }

    /// Hard preconditions for every work formula: the species mix to the
    /// declared maximally mixed state, the membrane is a binary measurement,
    /// and the membrane outcomes are unbiased on the mixture.
    pub fn validate_premises(&self) -> Result<()> {
        let tol = self.theory.tolerance;
        let premise = |detail: String| Err(Error::PremiseViolation { detail });

        for (name, state) in [
            ("dual of f0", &self.dual_f0),
            ("dual of f1", &self.dual_f1),
            ("dual of g0", &self.dual_g0),
            ("dual of g1", &self.dual_g1),
        ] {
            self.theory.membership(state)?;
            if !self.theory.is_pure_state(state) {
                return premise(format!("{name} is not a pure state"));
            }
        }

        let mixture = self.mixture();
        if !states_approx_eq(&mixture, &self.theory.maximally_mixed, tol) {
            return premise(format!(
                "equal mixture of the species is {:?}, not the maximally mixed state",
                mixture.coords
            ));
        }

        if !self
            .membrane
            .e0
            .plus(&self.membrane.e1)
            .approx_eq(&self.theory.unit_effect, tol)
        {
            return premise(format!(
                "membrane `{}` is not a binary measurement",
                self.membrane.label
            ));
        }
        for (idx, e) in [&self.membrane.e0, &self.membrane.e1].into_iter().enumerate() {
            let p = self.theory.evaluate(e, &mixture)?;
            if (p - 0.5).abs() > tol {
                return premise(format!(
                    "membrane outcome {idx} has probability {p} on the mixture, expected 1/2"
                ));
            }
        }
        if let Some((z0, z1)) = self.counterfactual_zeta {
            for z in [z0, z1] {
                if !(0.5..=1.0).contains(&z) {
                    return premise(format!("counterfactual zeta {z} outside [0.5, 1]"));
                }
            }
        }
        Ok(())
    }

    /// The membrane equilibrium probabilities `q_i = p(e_i|rho_i)`, or the
    /// counterfactual override when one is active.
    pub fn membrane_probabilities(&self) -> Result<[f64; 2]> {
        if let Some((z0, z1)) = self.counterfactual_zeta {
            return Ok([z0, z1]);
        }
        Ok([
            self.theory.evaluate(&self.membrane.e0, &self.rho0())?,
            self.theory.evaluate(&self.membrane.e1, &self.rho1())?,
        ])
    }
}

/// Outcome of the stage-1 expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage1Result {
    /// Extracted work in units `N k T ln 2`: `1 - H(q_0)/2 - H(q_1)/2`.
    pub w1: f64,
    /// The same quantity evaluated from first principles as the mixing
    /// ledger `sum_ij p_ij lg p_ij - sum_j p_j lg p_j - sum_i p_i lg p_i`.
    /// Equal to `w1` whenever the premises hold.
    pub mixing_ledger: f64,
    /// Equilibrium volume fractions `p_i * p(e_j|rho_i)`.
    pub region_fractions: [[f64; 2]; 2],
    pub q: [f64; 2],
}

/// Work extracted by the stage-1 membrane expansion.
pub fn stage1_work(scenario: &CycleScenario) -> Result<Stage1Result> {
    scenario.validate_premises()?;
    let q = scenario.membrane_probabilities()?;

    let fractions = [
        [0.5 * q[0], 0.5 * (1.0 - q[0])],
        [0.5 * (1.0 - q[1]), 0.5 * q[1]],
    ];
    let w1 = 1.0 - 0.5 * binary_entropy(q[0])? - 0.5 * binary_entropy(q[1])?;

    let mixing_ledger = mixing_ledger_from_fractions(&fractions);
    debug_assert!(
        (mixing_ledger - w1).abs() < 1e-8,
        "mixing ledger {mixing_ledger} drifted from closed form {w1}"
    );

    Ok(Stage1Result {
        w1,
        mixing_ledger,
        region_fractions: fractions,
        q,
    })
}

/// The ideal-gas mixing ledger for a 2x2 table of volume fractions:
/// `sum_ij p_ij lg p_ij - sum_j p_j lg p_j - sum_i p_i lg p_i`.
pub fn mixing_ledger_from_fractions(fractions: &[[f64; 2]; 2]) -> f64 {
    let joint: f64 = fractions.iter().flatten().map(|&p| xlogx(p)).sum();
    let outcome_marginals = [
        fractions[0][0] + fractions[1][0],
        fractions[0][1] + fractions[1][1],
    ];
    let species_marginals = [
        fractions[0][0] + fractions[0][1],
        fractions[1][0] + fractions[1][1],
    ];
    joint
        - outcome_marginals.iter().map(|&p| xlogx(p)).sum::<f64>()
        - species_marginals.iter().map(|&p| xlogx(p)).sum::<f64>()
}

/// The uncertainty-bound form of the stage-1 work,
/// `1 - H(zeta_(f0,g0))/2 - H(zeta_(f1,g1))/2`, together with the two bound
/// values.
pub fn stage1_upper_bound(
    theory: &TheorySpec,
    f: &BinaryMeasurement,
    g: &BinaryMeasurement,
) -> Result<(f64, [f64; 2])> {
    let z00 = zeta_bound(theory, f, g, (0, 0))?.zeta.min(1.0);
    let z11 = zeta_bound(theory, f, g, (1, 1))?.zeta.min(1.0);
    Ok((
        1.0 - 0.5 * binary_entropy(z00)? - 0.5 * binary_entropy(z11)?,
        [z00, z11],
    ))
}

/// Outcome of the stage-2 sorting and reassembly.
#[derive(Debug, Clone)]
pub struct Stage2Result {
    /// Invested work in units `N k T ln 2`: `S(rho) - sum_i p_i S(rho_i)`
    /// with `S` the decomposition entropy.
    pub w2: f64,
    pub s_mixture: f64,
    pub part_entropies: Vec<f64>,
    /// The decomposition used to sort the mixture into distinguishable
    /// components.
    pub extraction: Decomposition,
    /// Per part, the decomposition reassembled from pure components. The
    /// pure-to-pure conversion between extraction and reassembly components
    /// carries no work.
    pub reassembly: Vec<Decomposition>,
}

/// Work needed to sort `rho` into distinguishable components and reassemble
/// the weighted parts.
pub fn stage2_work(
    theory: &TheorySpec,
    rho: &State,
    parts: &[(f64, State)],
) -> Result<Stage2Result> {
    let weighted: Vec<(f64, &State)> = parts.iter().map(|(w, s)| (*w, s)).collect();
    let reassembled = State::mixture(&weighted);
    let residual = crate::linalg::norm(&crate::linalg::sub(&reassembled.coords, &rho.coords));
    if residual > theory.tolerance {
        return Err(Error::MixtureMismatch { residual });
    }

    let (s_mixture, extraction) = entropy::decomposition_entropy(theory, rho)?;
    let mut part_entropies = Vec::with_capacity(parts.len());
    let mut reassembly = Vec::with_capacity(parts.len());
    let mut weighted_sum = 0.0;
    for (p, state) in parts {
        let (s, d) = entropy::decomposition_entropy(theory, state)?;
        weighted_sum += p * s;
        part_entropies.push(s);
        reassembly.push(d);
    }
    Ok(Stage2Result {
        w2: s_mixture - weighted_sum,
        s_mixture,
        part_entropies,
        extraction,
        reassembly,
    })
}

/// The cycle's complete work ledger, dimensionless in units `N k T ln 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkLedger {
    /// Stage-1 work realized by the scenario's membrane (or by the
    /// counterfactual values when active).
    pub w1: f64,
    /// Stage-1 work in the uncertainty-bound form, from the theory's own
    /// bound values.
    pub w1_upper: f64,
    /// Stage-2 reassembly work.
    pub w2: f64,
    /// Net work over the cycle: the bound form (or counterfactual form)
    /// minus `w2`. Coincides with `w1 - w2` when the membrane saturates the
    /// bound.
    pub delta_w: f64,
    /// The zeta pair behind `delta_w`.
    pub zeta: [f64; 2],
    pub q: [f64; 2],
    pub region_fractions: [[f64; 2]; 2],
    pub mixing_ledger: f64,
    pub s_mixture: f64,
    pub s_parts: [f64; 2],
    pub counterfactual: bool,
    /// `delta_w * N k T ln 2`, when requested via
    /// [`WorkLedger::with_absolute_units`].
    pub absolute_joules: Option<f64>,
}

impl WorkLedger {
    /// Converts the net work to joules for `n_particles` particles at
    /// temperature `kelvin`.
    pub fn with_absolute_units(mut self, n_particles: f64, kelvin: f64) -> Self {
        self.absolute_joules =
            Some(self.delta_w * n_particles * BOLTZMANN * kelvin * std::f64::consts::LN_2);
        self
    }
}

/// Runs both stages and closes the cycle.
pub fn net_work(scenario: &CycleScenario) -> Result<WorkLedger> {
    let stage1 = stage1_work(scenario)?;
    let (w1_upper, zeta) = stage1_upper_bound(&scenario.theory, &scenario.f, &scenario.g)?;

    let rho = scenario.mixture();
    let parts = [(0.5, scenario.rho0()), (0.5, scenario.rho1())];
    let stage2 = stage2_work(&scenario.theory, &rho, &parts)?;

    let (delta_w, zeta_used) = match scenario.counterfactual_zeta {
        Some((z0, z1)) => {
            let counterfactual_form =
                1.0 - 0.5 * binary_entropy(z0)? - 0.5 * binary_entropy(z1)?;
            (counterfactual_form - stage2.w2, [z0, z1])
        }
        None => (w1_upper - stage2.w2, zeta),
    };

    // The bound premise only orders w1 against the bound when the membrane
    // does at least as well as a coin flip on both species.
    if scenario.counterfactual_zeta.is_none() && stage1.q.iter().all(|&q| q >= 0.5) {
        debug_assert!(stage1.w1 <= w1_upper + 1e-9);
    }

    Ok(WorkLedger {
        w1: stage1.w1,
        w1_upper,
        w2: stage2.w2,
        delta_w,
        zeta: zeta_used,
        q: stage1.q,
        region_fractions: stage1.region_fractions,
        mixing_ledger: stage1.mixing_ledger,
        s_mixture: stage2.s_mixture,
        s_parts: [stage2.part_entropies[0], stage2.part_entropies[1]],
        counterfactual: scenario.counterfactual_zeta.is_some(),
        absolute_joules: None,
    })
}

/// One row of a zeta sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub zeta: f64,
    pub delta_w: f64,
}

/// Net work as a function of a common counterfactual zeta, holding the
/// scenario's stage-2 entropies fixed: `delta_w(z) = (1 - H(z)) - w2`.
pub fn zeta_sweep(
    scenario: &CycleScenario,
    zeta_min: f64,
    zeta_max: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if !(0.5..=1.0).contains(&zeta_min)
        || !(0.5..=1.0).contains(&zeta_max)
        || zeta_min > zeta_max
        || steps == 0
    {
        return Err(Error::BadRange {
            detail: format!(
                "sweep requires 1/2 <= zeta_min <= zeta_max <= 1 and steps >= 1, got [{zeta_min}, {zeta_max}] with {steps} steps"
            ),
        });
    }
    scenario.validate_premises()?;
    let rho = scenario.mixture();
    let parts = [(0.5, scenario.rho0()), (0.5, scenario.rho1())];
    let w2 = stage2_work(&scenario.theory, &rho, &parts)?.w2;

    let rows = (0..steps)
        .map(|i| {
            let zeta = if steps == 1 {
                zeta_min
            } else {
                zeta_min + (zeta_max - zeta_min) * i as f64 / (steps - 1) as f64
            };
            let delta_w = (1.0 - binary_entropy(zeta)?) - w2;
            Ok(SweepRow { zeta, delta_w })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}
