//! Seeded Monte Carlo estimate of the stage-1 mixing work.
//!
//! The box starts with the particles split evenly between the two
//! compartments (the extra particle goes to the first compartment when the
//! count is odd); only the membrane outcomes are random. Sampling is
//! organized in chunks, each drawing from an independent substream of the
//! seeded generator (`ChaCha8` with the chunk index as stream), and chunk
//! counts are merged in index order, so a fixed `(seed, chunks, config)`
//! yields a bit-identical result. Changing the chunk count changes the
//! stream and therefore the sample, but not the distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cycle::{mixing_ledger_from_fractions, stage1_work, CycleScenario};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scenario: CycleScenario,
    pub n_particles: u64,
    pub seed: u64,
    pub chunks: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Observed volume fractions `n_ij / N` by compartment and outcome.
    pub empirical_fractions: [[f64; 2]; 2],
    /// The mixing ledger evaluated on the observed fractions, in units
    /// `N k T ln 2`.
    pub w1_hat: f64,
    pub w1_exact: f64,
    pub abs_error: f64,
    /// Multinomial delta-method estimate of the standard error of `w1_hat`.
    pub stderr_estimate: f64,
}

/// Samples the membrane outcomes for every particle and evaluates the
/// empirical mixing ledger.
pub fn simulate_stage1(config: &SimConfig) -> Result<SimResult> {
    if config.n_particles == 0 {
        return Err(Error::ZeroCount);
    }
    if config.chunks == 0 {
        return Err(Error::BadRange {
            detail: "chunks must be at least 1".to_string(),
        });
    }
    let exact = stage1_work(&config.scenario)?;
    let q = exact.q;
    // probability of outcome 0 per compartment
    let pass0 = [q[0], 1.0 - q[1]];

    let n = config.n_particles;
    let first_compartment = n - n / 2;
    let mut counts = [[0u64; 2]; 2];

    let chunks = u64::from(config.chunks);
    let base = n / chunks;
    let remainder = n % chunks;
    let mut particle = 0u64;
    for chunk in 0..chunks {
        let size = base + u64::from(chunk < remainder);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(chunk);
        for _ in 0..size {
            let compartment = usize::from(particle >= first_compartment);
            let outcome = usize::from(!rng.random_bool(pass0[compartment]));
            counts[compartment][outcome] += 1;
            particle += 1;
        }
    }

    let fractions = counts.map(|row| row.map(|c| c as f64 / n as f64));
    let w1_hat = mixing_ledger_from_fractions(&fractions);
    let abs_error = (w1_hat - exact.w1).abs();

    // Delta method over the multinomial cell frequencies; the gradient of
    // the ledger at cell (i, j) is lg(p_ij) - lg(p_i) - lg(p_j) up to a
    // constant that cancels under the sum-to-one constraint.
    let outcome_marginals = [
        fractions[0][0] + fractions[1][0],
        fractions[0][1] + fractions[1][1],
    ];
    let species_marginals = [
        fractions[0][0] + fractions[0][1],
        fractions[1][0] + fractions[1][1],
    ];
    let mut mean_grad = 0.0;
    let mut mean_grad_sq = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let p = fractions[i][j];
            if p > 0.0 {
                let grad = p.log2() - species_marginals[i].log2() - outcome_marginals[j].log2();
                mean_grad += p * grad;
                mean_grad_sq += p * grad * grad;
            }
        }
    }
    let variance = (mean_grad_sq - mean_grad * mean_grad).max(0.0) / n as f64;

    Ok(SimResult {
        empirical_fractions: fractions,
        w1_hat,
        w1_exact: exact.w1,
        abs_error,
        stderr_estimate: variance.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_particles: u64,
    pub mean_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln(mean error)` against `ln N`; `None` when
    /// fewer than two rows carry a positive error (e.g. a deterministic
    /// scenario).
    pub fitted_slope: Option<f64>,
    pub seeds_per_point: u32,
}

/// Mean absolute ledger error over `seeds` independent runs for each
/// particle count in `n_list` (which must be ascending).
pub fn convergence_report(
    config: &SimConfig,
    n_list: &[u64],
    seeds: u32,
) -> Result<ConvergenceReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadRange {
            detail: "n_list must be nonempty and strictly ascending".to_string(),
        });
    }
    if seeds == 0 {
        return Err(Error::BadRange {
            detail: "need at least one seed".to_string(),
        });
    }

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mut total = 0.0;
        for s in 0..seeds {
            let run = SimConfig {
                scenario: config.scenario.clone(),
                n_particles: n,
                seed: config.seed.wrapping_add(u64::from(s)),
                chunks: config.chunks,
            };
            total += simulate_stage1(&run)?.abs_error;
        }
        rows.push(ConvergenceRow {
            n_particles: n,
            mean_abs_error: total / f64::from(seeds),
        });
    }

    let log_points: (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.mean_abs_error > 0.0)
        .map(|r| ((r.n_particles as f64).ln(), r.mean_abs_error.ln()))
        .unzip();
    let fitted_slope = linalg::fit_slope(&log_points.0, &log_points.1);

    Ok(ConvergenceReport {
        rows,
        fitted_slope,
        seeds_per_point: seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    fn quantum_config(n: u64, seed: u64, chunks: u32) -> SimConfig {
        SimConfig {
            scenario: scenario::quantum_xz(),
            n_particles: n,
            seed,
            chunks,
        }
    }

    #[test]
    fn large_run_lands_near_the_exact_ledger() {
        let result = simulate_stage1(&quantum_config(1_000_000, 42, 8)).unwrap();
        assert!(result.abs_error <= 5e-3, "error {}", result.abs_error);
        let total: f64 = result.empirical_fractions.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // the delta-method error bar should be in the right ballpark
        assert!(result.stderr_estimate > 0.0 && result.stderr_estimate < 5e-3);
    }

    #[test]
    fn identical_configs_are_bit_identical() {
        let a = simulate_stage1(&quantum_config(10_000, 7, 4)).unwrap();
        let b = simulate_stage1(&quantum_config(10_000, 7, 4)).unwrap();
        assert_eq!(a.w1_hat.to_bits(), b.w1_hat.to_bits());
        assert_eq!(a.empirical_fractions, b.empirical_fractions);
    }

    #[test]
    fn deterministic_scenario_is_exact() {
        let config = SimConfig {
            scenario: scenario::gbit_demo(),
            n_particles: 1000,
            seed: 3,
            chunks: 4,
        };
        let result = simulate_stage1(&config).unwrap();
        assert_eq!(result.w1_hat, 1.0);
        assert_eq!(result.abs_error, 0.0);
        assert_eq!(result.stderr_estimate, 0.0);
    }

    #[test]
    fn single_particle_run_is_finite() {
        let result = simulate_stage1(&quantum_config(1, 0, 1)).unwrap();
        assert!(result.w1_hat.is_finite());
        assert!(!result.w1_hat.is_nan());
    }

    #[test]
    fn zero_particles_is_an_error() {
        assert!(matches!(
            simulate_stage1(&quantum_config(0, 0, 1)),
            Err(Error::ZeroCount)
        ));
    }

    #[test]
    fn species_marginals_stay_within_three_standard_errors() {
        for seed in 0..5 {
            let result = simulate_stage1(&quantum_config(10_000, seed, 2)).unwrap();
            let p0 = result.empirical_fractions[0][0] + result.empirical_fractions[0][1];
            let three_sigma = 3.0 * (0.25f64 / 10_000.0).sqrt();
            assert!((p0 - 0.5).abs() <= three_sigma);
        }
    }

    #[test]
    fn error_halves_when_n_quadruples() {
        let report = convergence_report(
            &quantum_config(0x0, 11, 2),
            &[10_000, 40_000],
            30,
        )
        .unwrap();
        let ratio = report.rows[1].mean_abs_error / report.rows[0].mean_abs_error;
        assert!((0.3..0.8).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn single_entry_report_has_one_row() {
        let report = convergence_report(&quantum_config(0, 5, 1), &[1000], 3).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(report.fitted_slope.is_none());
    }

    #[test]
    fn constant_scenario_has_zero_error_at_all_n() {
        let config = SimConfig {
            scenario: scenario::gbit_demo(),
            n_particles: 0,
            seed: 1,
            chunks: 1,
        };
        let report = convergence_report(&config, &[100, 1000], 5).unwrap();
        for row in &report.rows {
            assert_eq!(row.mean_abs_error, 0.0);
        }
        assert!(report.fitted_slope.is_none());
    }

    #[test]
    fn descending_n_list_is_rejected() {
        assert!(matches!(
            convergence_report(&quantum_config(0, 1, 1), &[1000, 100], 2),
            Err(Error::BadRange { .. })
        ));
    }

    #[test]
    fn chunking_changes_the_stream_but_not_the_distribution() {
        // Welch's t-test on 100 seeds per arm at significance 0.01.
        let sample = |chunks: u32| -> Vec<f64> {
            (0..100)
                .map(|seed| {
                    simulate_stage1(&quantum_config(4000, 1000 + seed, chunks))
                        .unwrap()
                        .w1_hat
                })
                .collect()
        };
        let a = sample(1);
        let b = sample(8);
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let var = |v: &[f64], m: f64| {
            v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
        };
        let (ma, mb) = (mean(&a), mean(&b));
        let (va, vb) = (var(&a, ma), var(&b, mb));
        let na = a.len() as f64;
        let nb = b.len() as f64;
        let t = (ma - mb) / (va / na + vb / nb).sqrt();
        let dof = (va / na + vb / nb).powi(2)
            / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
        let dist = statrs::distribution::StudentsT::new(0.0, 1.0, dof).unwrap();
        let p_value = 2.0 * statrs::distribution::ContinuousCDF::cdf(&dist, -t.abs());
        assert!(p_value > 0.01, "t = {t}, p = {p_value}");
    }
}
