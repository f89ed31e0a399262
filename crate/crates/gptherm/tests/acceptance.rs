//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use gptherm::cycle::{self, zeta_sweep};
use gptherm::entropy;
use gptherm::scenario;
use gptherm::sim::{self, SimConfig};
use gptherm::theory::{self, BinaryMeasurement, Effect, State};
use gptherm::uncertainty;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZETA_SAT: f64 = 0.8535533905932737; // 1/2 + 1/(2 sqrt 2)
const W1_EXACT: f64 = 0.3991239633071438; // 1 - H(zeta_sat)
const DELTA_CF: f64 = 0.1318804431035750; // H(zeta_sat) - H(0.9)

struct Criterion {
    n: u32,
    name: &'static str,
    budget: Duration,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(n: u32, name: &'static str, budget_secs: f64) -> Self {
        Criterion {
            n,
            name,
            budget: Duration::from_secs_f64(budget_secs),
            start: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn check_close(&mut self, what: &str, got: f64, expected: f64, tol: f64) {
        if !((got - expected).abs() <= tol) {
            self.failures
                .push(format!("{what}: got {got}, expected {expected} +- {tol}"));
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        let in_budget = elapsed <= self.budget;
        let ok = self.failures.is_empty() && in_budget;
        println!(
            "acceptance criterion {} [{}] {} ({:.1?} of {:.1?} budget)",
            self.n,
            if ok { "PASS" } else { "FAIL" },
            self.name,
            elapsed,
            self.budget
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.n,
            self.failures
        );
        assert!(
            in_budget,
            "criterion {} exceeded its runtime budget: {:.1?} > {:.1?}",
            self.n, elapsed, self.budget
        );
    }
}

fn random_projective(rng: &mut ChaCha8Rng, label: &str) -> BinaryMeasurement {
    let dir = loop {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        if n > 1e-3 && n <= 1.0 {
            break v.iter().map(|x| x / n).collect::<Vec<f64>>();
        }
    };
    let e0 = Effect::pure(0.5, dir.iter().map(|x| 0.5 * x).collect());
    let e1 = Effect::pure(0.5, dir.iter().map(|x| -0.5 * x).collect());
    BinaryMeasurement {
        label: label.to_string(),
        e0,
        e1,
    }
}

#[test]
fn criterion_1_quantum_fine_grained_bound() {
    let mut c = Criterion::new(1, "quantum X/Z fine-grained bounds", 1.0);
    let th = theory::qubit();
    let x = th.measurement("X").unwrap().clone();
    let z = th.measurement("Z").unwrap().clone();
    let bounds = uncertainty::all_four_bounds(&th, &x, &z).unwrap();
    c.check("four bounds", bounds.len() == 4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for b in &bounds {
        c.check_close(
            &format!("zeta{:?}", b.outcomes),
            b.zeta,
            ZETA_SAT,
            1e-9,
        );
        // maximizer is +-(1, 0, 1)/sqrt(2)
        let m = &b.maximizer.coords;
        let aligned = (m[0] - s).abs() <= 1e-6 && (m[2] - s).abs() <= 1e-6;
        let anti = (m[0] + s).abs() <= 1e-6 && (m[2] + s).abs() <= 1e-6;
        c.check(
            &format!("maximizer{:?} = +-(1,0,1)/sqrt2, got {m:?}", b.outcomes),
            (aligned || anti) && m[1].abs() <= 1e-6,
        );
    }
    c.finish();
}

#[test]
fn criterion_2_cycle_closure() {
    let mut c = Criterion::new(2, "quantum cycle closes with zero net work", 1.0);
    let ledger = cycle::net_work(&scenario::quantum_xz()).unwrap();
    c.check_close("w1", ledger.w1, W1_EXACT, 1e-6);
    c.check_close("w2", ledger.w2, W1_EXACT, 1e-6);
    c.check_close("delta_w", ledger.delta_w, 0.0, 1e-9);
    c.finish();
}

#[test]
fn criterion_3_violation_pays_out() {
    let mut c = Criterion::new(3, "counterfactual bound yields positive net work", 1.0);
    let cf = scenario::counterfactual(0.9).unwrap();
    let ledger = cycle::net_work(&cf).unwrap();
    c.check_close("delta_w at zeta = 0.9", ledger.delta_w, DELTA_CF, 1e-6);

    // monotone nondecreasing over the full sweep
    let s = scenario::quantum_xz();
    let rows = zeta_sweep(&s, 0.5, 1.0, 201).unwrap();
    c.check(
        "sweep monotone nondecreasing",
        rows.windows(2).all(|w| w[1].delta_w >= w[0].delta_w - 1e-12),
    );

    // the sweep's zero crossing sits at the saturating zeta
    let delta_at = |z: f64| zeta_sweep(&s, z, z, 1).unwrap()[0].delta_w;
    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if delta_at(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    c.check_close("zero crossing", root, ZETA_SAT, 1e-6);
    c.finish();
}

#[test]
fn criterion_4_mixing_ledger_identity() {
    let mut c = Criterion::new(4, "mixing ledger equals the closed form on random scenarios", 5.0);
    let th = theory::qubit();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    for i in 0..100 {
        let f = random_projective(&mut rng, "f");
        let g = random_projective(&mut rng, "g");
        let membrane = random_projective(&mut rng, "e");
        let s = cycle::CycleScenario::from_parts(th.clone(), f, g, membrane).unwrap();
        let r = cycle::stage1_work(&s).unwrap();
        c.check_close(
            &format!("scenario {i}: ledger vs closed form"),
            r.mixing_ledger,
            r.w1,
            1e-9,
        );
    }
    c.finish();
}

#[test]
fn criterion_5_entropy_coincidence() {
    let mut c = Criterion::new(5, "qubit entropies coincide on random states", 10.0);
    let th = theory::qubit();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce95);
    for i in 0..100 {
        let dir = loop {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0_f64..1.0)).collect();
            let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
            if n > 1e-3 && n <= 1.0 {
                break v;
            }
        };
        let r: f64 = rng.random_range(0.0..1.0);
        let norm = (dir.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let state = State::mixed(dir.iter().map(|x| x / norm * r).collect());
        let spectral = entropy::spectral_entropy(&th, &state).unwrap();
        let (decomposition, _) = entropy::decomposition_entropy(&th, &state).unwrap();
        let measurement = entropy::measurement_entropy(&th, &state).unwrap();
        c.check_close(&format!("state {i}: decomposition"), decomposition, spectral, 1e-6);
        c.check_close(&format!("state {i}: measurement"), measurement, spectral, 1e-6);
    }
    c.finish();
}

#[test]
fn criterion_6_box_world_caveat() {
    let mut c = Criterion::new(6, "gbit certainty is swallowed by reassembly", 1.0);
    let ledger = cycle::net_work(&scenario::gbit_demo()).unwrap();
    c.check("zeta = [1, 1] exactly", ledger.zeta == [1.0, 1.0]);
    c.check("w1 = 1 exactly", ledger.w1 == 1.0);
    c.check("w2 = 1 exactly", ledger.w2 == 1.0);
    c.check("delta_w = 0 exactly", ledger.delta_w == 0.0);
    c.finish();
}

#[test]
fn criterion_7_monte_carlo_convergence() {
    let mut c = Criterion::new(7, "Monte Carlo ledger converges at the root-N rate", 60.0);
    let config = SimConfig {
        scenario: scenario::quantum_xz(),
        n_particles: 1_000_000,
        seed: 2024,
        chunks: 4,
    };
    let result = sim::simulate_stage1(&config).unwrap();
    c.check(
        &format!("|w1_hat - w1_exact| = {} <= 5e-3", result.abs_error),
        result.abs_error <= 5e-3,
    );

    let report =
        sim::convergence_report(&config, &[1_000, 10_000, 100_000, 1_000_000], 30).unwrap();
    let slope = report.fitted_slope.unwrap_or(f64::NAN);
    c.check(
        &format!("log-log slope {slope} within -0.5 +- 0.15"),
        (slope + 0.5).abs() <= 0.15,
    );
    c.finish();
}

#[test]
fn criterion_8_axiom_suite() {
    let mut c = Criterion::new(8, "axiom checks for qubit and gbit", 5.0);
    let qubit_report = theory::qubit().check_assumptions();
    for id in ["A1", "A2", "A5", "A6"] {
        c.check(
            &format!("qubit {id} passes"),
            qubit_report.verdict(id).is_pass(),
        );
    }
    c.check(
        &format!(
            "qubit duality residual {} <= 1e-9",
            qubit_report.duality.max_residual
        ),
        qubit_report.duality.max_residual <= 1e-9,
    );

    let gbit_report = theory::gbit().check_assumptions();
    for id in ["A1", "A2", "A5", "A6"] {
        c.check(
            &format!("gbit {id} passes"),
            gbit_report.verdict(id).is_pass(),
        );
    }
    c.check(
        "gbit reports duality_holds=false",
        !gbit_report.duality.duality_holds,
    );
    c.finish();
}
