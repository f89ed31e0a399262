//! Scenario runner behind the `gptherm` binary.
//!
//! Six subcommands: `bounds`, `entropy`, `cycle`, `sweep`, `simulate` and
//! `check`. Each loads a built-in scenario or a theory-spec file, runs the
//! corresponding library routine, and emits a table (with unit tags), CSV
//! (header row always present) or JSON. Errors carry a stable
//! machine-readable code and map to distinct exit statuses.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cycle::{self, CycleScenario, WorkLedger, BOLTZMANN};
use crate::entropy;
use crate::error::{Error, Result};
use crate::scenario::BuiltinScenario;
use crate::sim::{self, SimConfig};
use crate::theory::{self, State, TheoryKind, TheorySpec};
use crate::uncertainty::{self, FineGrainedBound};

/// Environment variable naming the directory relative output paths are
/// resolved against.
pub const OUTPUT_DIR_ENV: &str = "GPTHERM_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "gptherm",
    about = "Uncertainty bounds, generalized entropies and membrane-cycle work ledgers for two-level theories",
    version
)]
pub struct RunRequest {
    #[command(subcommand)]
    pub command: RunCommand,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the artifact to a file instead of stdout. Relative paths are
    /// resolved against $GPTHERM_OUTPUT_DIR when it is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ScenarioArg {
    /// Built-in scenario (quantum-xz, gbit, counterfactual) or path to a
    /// theory-spec TOML file.
    #[arg(long, default_value = "quantum-xz")]
    pub scenario: String,

    /// Measurement label for the first species pair (file scenarios;
    /// defaults to the file's first measurement).
    #[arg(long)]
    pub f: Option<String>,

    /// Measurement label for the second species pair (file scenarios;
    /// defaults to the file's second measurement).
    #[arg(long)]
    pub g: Option<String>,

    /// Membrane measurement label (file scenarios; defaults to the
    /// work-optimal membrane built from maximally certain effects).
    #[arg(long)]
    pub membrane: Option<String>,

    /// Counterfactual bound value applied to both outcome pairs.
    #[arg(long)]
    pub zeta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum RunCommand {
    /// Fine-grained bounds for all four outcome pairs of the scenario's
    /// measurement pair.
    Bounds {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// Spectral, decomposition and measurement entropies of a state.
    Entropy {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// State to analyze: a label from the theory or comma-separated
        /// coordinates, e.g. "0.5,0,0.5".
        #[arg(long)]
        state: String,
    },
    /// Work ledger of the full cycle.
    Cycle {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Particle count for the optional conversion to joules.
        #[arg(long)]
        particles: Option<f64>,
        /// Temperature in kelvin for the optional conversion to joules.
        #[arg(long)]
        temperature: Option<f64>,
    },
    /// Net work as a function of a common counterfactual zeta.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 0.5)]
        zeta_min: f64,
        #[arg(long, default_value_t = 1.0)]
        zeta_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        particles: Option<f64>,
        #[arg(long)]
        temperature: Option<f64>,
    },
    /// Monte Carlo estimate of the stage-1 work.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Particle count.
        #[arg(short, long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        chunks: u32,
        /// Emit a convergence table over --n-list instead of a single run.
        #[arg(long)]
        convergence: bool,
        /// Comma-separated ascending particle counts for --convergence.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        n_list: Vec<u64>,
        /// Seeds per point for --convergence.
        #[arg(long, default_value_t = 30)]
        seeds: u32,
    },
    /// Assumption checks and duality verification for a theory.
    Check {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
}

/// Scenario resolution: a built-in name builds the compiled-in scenario; any
/// other value is treated as a path to a theory-spec file.
fn resolve_scenario(arg: &ScenarioArg) -> Result<CycleScenario> {
    if let Some(builtin) = BuiltinScenario::parse(&arg.scenario) {
        let mut s = builtin.build(arg.zeta)?;
        if let Some(membrane) = &arg.membrane {
            s.membrane = s.theory.measurement(membrane)?.clone();
        }
        return Ok(s);
    }
    let theory = load_theory(&arg.scenario)?;
    let mut names = theory.measurements().iter().map(|m| m.label.clone());
    let f_label = match &arg.f {
        Some(f) => f.clone(),
        None => names.next().ok_or_else(|| {
            Error::Usage("theory file declares no measurements; pass --f/--g".to_string())
        })?,
    };
    let g_label = match &arg.g {
        Some(g) => g.clone(),
        None => names
            .find(|l| *l != f_label)
            .ok_or_else(|| Error::Usage("theory file declares fewer than two measurements; pass --g".to_string()))?,
    };
    let s = match &arg.membrane {
        Some(m) => CycleScenario::from_labels(theory, &f_label, &g_label, m)?,
        None => CycleScenario::with_optimal_membrane(theory, &f_label, &g_label)?,
    };
    match arg.zeta {
        Some(z) => s.with_counterfactual(z, z),
        None => Ok(s),
    }
}

fn load_theory(name: &str) -> Result<TheorySpec> {
    match BuiltinScenario::parse(name) {
        Some(BuiltinScenario::Gbit) => Ok(theory::gbit()),
        Some(_) => Ok(theory::qubit()),
        None => {
            let path = Path::new(name);
            if !path.exists() {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("theory file not found: {name}"),
                )));
            }
            theory::load_path(path)
        }
    }
}

fn parse_state(theory: &TheorySpec, text: &str) -> Result<State> {
    if let Ok(state) = theory.state(text) {
        return Ok(state.clone());
    }
    let coords: std::result::Result<Vec<f64>, _> =
        text.split(',').map(|c| c.trim().parse::<f64>()).collect();
    match coords {
        Ok(coords) if coords.len() == theory.embedding_dim => Ok(State::mixed(coords)),
        Ok(coords) => Err(Error::DimensionMismatch {
            expected: theory.embedding_dim,
            got: coords.len(),
        }),
        Err(_) => Err(Error::Usage(format!(
            "--state must be a state label or {} comma-separated coordinates, got `{text}`",
            theory.embedding_dim
        ))),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}

#[derive(Serialize)]
struct EntropyOutput {
    theory: String,
    coords: Vec<f64>,
    spectral: Option<f64>,
    decomposition: f64,
    measurement: f64,
}

#[derive(Serialize)]
struct CheckOutput {
    report: theory::AssumptionReport,
}

/// Runs a request and returns the rendered artifact.
pub fn render(request: &RunRequest) -> Result<String> {
    match &request.command {
        RunCommand::Bounds { scenario } => {
            let s = resolve_scenario(scenario)?;
            let bounds = uncertainty::all_four_bounds(&s.theory, &s.f, &s.g)?;
            render_bounds(&bounds, request.format)
        }
        RunCommand::Entropy { scenario, state } => {
            let s = resolve_scenario(scenario)?;
            let target = parse_state(&s.theory, state)?;
            let spectral = match s.theory.kind {
                TheoryKind::ContinuousBall => Some(entropy::spectral_entropy(&s.theory, &target)?),
                TheoryKind::Polytope => None,
            };
            let (decomposition, _) = entropy::decomposition_entropy(&s.theory, &target)?;
            let measurement = entropy::measurement_entropy(&s.theory, &target)?;
            let out = EntropyOutput {
                theory: s.theory.name.clone(),
                coords: target.coords.clone(),
                spectral,
                decomposition,
                measurement,
            };
            render_entropy(&out, request.format)
        }
        RunCommand::Cycle {
            scenario,
            particles,
            temperature,
        } => {
            let s = resolve_scenario(scenario)?;
            let mut ledger = cycle::net_work(&s)?;
            if let (Some(n), Some(t)) = (particles, temperature) {
                ledger = ledger.with_absolute_units(*n, *t);
            }
            render_ledger(&ledger, request.format)
        }
        RunCommand::Sweep {
            scenario,
            zeta_min,
            zeta_max,
            steps,
            particles,
            temperature,
        } => {
            let s = resolve_scenario(scenario)?;
            let rows = cycle::zeta_sweep(&s, *zeta_min, *zeta_max, *steps)?;
            let joules_per_unit = match (particles, temperature) {
                (Some(n), Some(t)) => Some(n * BOLTZMANN * t * std::f64::consts::LN_2),
                _ => None,
            };
            render_sweep(&rows, joules_per_unit, request.format)
        }
        RunCommand::Simulate {
            scenario,
            n,
            seed,
            chunks,
            convergence,
            n_list,
            seeds,
        } => {
            let s = resolve_scenario(scenario)?;
            let config = SimConfig {
                scenario: s,
                n_particles: *n,
                seed: *seed,
                chunks: *chunks,
            };
            if *convergence {
                let report = sim::convergence_report(&config, n_list, *seeds)?;
                render_convergence(&report, request.format)
            } else {
                let result = sim::simulate_stage1(&config)?;
                render_sim(&result, *n, *seed, request.format)
            }
        }
        RunCommand::Check { scenario } => {
            let theory = load_theory(&scenario.scenario)?;
            let report = theory.check_assumptions();
            render_check(&CheckOutput { report }, request.format)
        }
    }
}

fn render_bounds(bounds: &[FineGrainedBound], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(bounds)?),
        Format::Csv => {
            let dim = bounds[0].maximizer.coords.len();
            let mut header = vec!["y1".to_string(), "y2".to_string(), "zeta".to_string()];
            header.extend((0..dim).map(|i| format!("m{i}")));
            let mut out = csv_row(&header) + "\n";
            for b in bounds {
                let mut row = vec![
                    b.outcomes.0.to_string(),
                    b.outcomes.1.to_string(),
                    fmt_f64(b.zeta),
                ];
                row.extend(b.maximizer.coords.iter().map(|&c| fmt_f64(c)));
                out += &(csv_row(&row) + "\n");
            }
            Ok(out)
        }
        Format::Table => {
            let mut out = String::new();
            writeln!(out, "fine-grained bounds for ({}, {})", bounds[0].f, bounds[0].g).unwrap();
            for b in bounds {
                writeln!(
                    out,
                    "  ({}, {})  zeta = {} [prob]  maximizer = {:?}{}",
                    b.outcomes.0,
                    b.outcomes.1,
                    fmt_f64(b.zeta),
                    b.maximizer.coords,
                    if b.degenerate { "  (degenerate)" } else { "" }
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

fn render_entropy(out: &EntropyOutput, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(out)?),
        Format::Csv => {
            let header = ["spectral", "decomposition", "measurement"];
            let row = [
                out.spectral.map(fmt_f64).unwrap_or_default(),
                fmt_f64(out.decomposition),
                fmt_f64(out.measurement),
            ];
            Ok(format!("{}\n{}\n", header.join(","), csv_row(&row)))
        }
        Format::Table => {
            let mut text = format!("entropies of {:?} in `{}`\n", out.coords, out.theory);
            if let Some(s) = out.spectral {
                writeln!(text, "  spectral      = {} [bit]", fmt_f64(s)).unwrap();
            }
            writeln!(text, "  decomposition = {} [bit]", fmt_f64(out.decomposition)).unwrap();
            writeln!(text, "  measurement   = {} [bit]", fmt_f64(out.measurement)).unwrap();
            Ok(text)
        }
    }
}

fn render_ledger(ledger: &WorkLedger, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(ledger)?),
        Format::Csv => {
            let header = [
                "w1", "w1_upper", "w2", "delta_w", "zeta0", "zeta1", "q0", "q1", "r00", "r01",
                "r10", "r11", "absolute_joules",
            ];
            let row = vec![
                fmt_f64(ledger.w1),
                fmt_f64(ledger.w1_upper),
                fmt_f64(ledger.w2),
                fmt_f64(ledger.delta_w),
                fmt_f64(ledger.zeta[0]),
                fmt_f64(ledger.zeta[1]),
                fmt_f64(ledger.q[0]),
                fmt_f64(ledger.q[1]),
                fmt_f64(ledger.region_fractions[0][0]),
                fmt_f64(ledger.region_fractions[0][1]),
                fmt_f64(ledger.region_fractions[1][0]),
                fmt_f64(ledger.region_fractions[1][1]),
                ledger.absolute_joules.map(fmt_f64).unwrap_or_default(),
            ];
            Ok(format!("{}\n{}\n", header.join(","), csv_row(&row)))
        }
        Format::Table => {
            let mut out = String::new();
            let tag = "NkT·ln2";
            if ledger.counterfactual {
                writeln!(
                    out,
                    "work ledger (counterfactual zeta = [{}, {}] [prob])",
                    fmt_f64(ledger.zeta[0]),
                    fmt_f64(ledger.zeta[1])
                )
                .unwrap();
            } else {
                writeln!(out, "work ledger").unwrap();
            }
            writeln!(out, "  w1       = {} [{tag}]  (stage-1 extraction)", fmt_f64(ledger.w1)).unwrap();
            writeln!(out, "  w1_upper = {} [{tag}]  (uncertainty-bound form)", fmt_f64(ledger.w1_upper)).unwrap();
            writeln!(out, "  w2       = {} [{tag}]  (stage-2 reassembly)", fmt_f64(ledger.w2)).unwrap();
            writeln!(out, "  delta_w  = {} [{tag}]  (net over the cycle)", fmt_f64(ledger.delta_w)).unwrap();
            writeln!(
                out,
                "  zeta     = [{} , {}] [prob]",
                fmt_f64(ledger.zeta[0]),
                fmt_f64(ledger.zeta[1])
            )
            .unwrap();
            writeln!(
                out,
                "  q        = [{} , {}] [prob]",
                fmt_f64(ledger.q[0]),
                fmt_f64(ledger.q[1])
            )
            .unwrap();
            writeln!(
                out,
                "  regions  = [{} , {} ; {} , {}] [prob]",
                fmt_f64(ledger.region_fractions[0][0]),
                fmt_f64(ledger.region_fractions[0][1]),
                fmt_f64(ledger.region_fractions[1][0]),
                fmt_f64(ledger.region_fractions[1][1])
            )
            .unwrap();
            writeln!(
                out,
                "  S(rho)   = {} [bit]   S(rho_i) = [{} , {}] [bit]",
                fmt_f64(ledger.s_mixture),
                fmt_f64(ledger.s_parts[0]),
                fmt_f64(ledger.s_parts[1])
            )
            .unwrap();
            if let Some(j) = ledger.absolute_joules {
                writeln!(out, "  delta_w  = {} [J]", fmt_f64(j)).unwrap();
            }
            Ok(out)
        }
    }
}

fn render_sweep(
    rows: &[cycle::SweepRow],
    joules_per_unit: Option<f64>,
    format: Format,
) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(rows)?),
        Format::Csv | Format::Table => {
            let mut out = String::new();
            if joules_per_unit.is_some() {
                out += "zeta,delta_w,delta_w_joules\n";
            } else {
                out += "zeta,delta_w\n";
            }
            for row in rows {
                match joules_per_unit {
                    Some(k) => {
                        writeln!(
                            out,
                            "{},{},{}",
                            fmt_f64(row.zeta),
                            fmt_f64(row.delta_w),
                            fmt_f64(row.delta_w * k)
                        )
                        .unwrap();
                    }
                    None => {
                        writeln!(out, "{},{}", fmt_f64(row.zeta), fmt_f64(row.delta_w)).unwrap();
                    }
                }
            }
            Ok(out)
        }
    }
}

fn render_sim(result: &sim::SimResult, n: u64, seed: u64, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(result)?),
        Format::Csv => Ok(format!(
            "N,seed,w1_hat,w1_exact,abs_error\n{n},{seed},{},{},{}\n",
            fmt_f64(result.w1_hat),
            fmt_f64(result.w1_exact),
            fmt_f64(result.abs_error)
        )),
        Format::Table => {
            let mut out = String::new();
            writeln!(out, "membrane simulation, N = {n}, seed = {seed}").unwrap();
            writeln!(out, "  w1_hat   = {} [NkT·ln2]", fmt_f64(result.w1_hat)).unwrap();
            writeln!(out, "  w1_exact = {} [NkT·ln2]", fmt_f64(result.w1_exact)).unwrap();
            writeln!(out, "  error    = {} [NkT·ln2]", fmt_f64(result.abs_error)).unwrap();
            writeln!(out, "  stderr   = {} [NkT·ln2]", fmt_f64(result.stderr_estimate)).unwrap();
            writeln!(
                out,
                "  regions  = [{} , {} ; {} , {}] [prob]",
                fmt_f64(result.empirical_fractions[0][0]),
                fmt_f64(result.empirical_fractions[0][1]),
                fmt_f64(result.empirical_fractions[1][0]),
                fmt_f64(result.empirical_fractions[1][1])
            )
            .unwrap();
            Ok(out)
        }
    }
}

fn render_convergence(report: &sim::ConvergenceReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(report)?),
        Format::Csv | Format::Table => {
            let mut out = String::from("N,mean_abs_error\n");
            for row in &report.rows {
                writeln!(out, "{},{}", row.n_particles, fmt_f64(row.mean_abs_error)).unwrap();
            }
            if format == Format::Table {
                match report.fitted_slope {
                    Some(slope) => writeln!(out, "# fitted log-log slope = {}", fmt_f64(slope)).unwrap(),
                    None => writeln!(out, "# fitted log-log slope: n/a").unwrap(),
                }
            }
            Ok(out)
        }
    }
}

fn render_check(out: &CheckOutput, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(out)?),
        Format::Csv => {
            let mut text = String::from("assumption,verdict,detail\n");
            for check in &out.report.checks {
                let (verdict, detail) = match &check.verdict {
                    theory::Verdict::Pass => ("pass", String::new()),
                    theory::Verdict::Fail { witness } => ("fail", witness.clone()),
                    theory::Verdict::Flagged { detail } => ("flagged", detail.clone()),
                    theory::Verdict::Declared => ("declared", String::new()),
                };
                writeln!(text, "{},{},\"{}\"", check.id, verdict, detail.replace('"', "'"))
                    .unwrap();
            }
            writeln!(
                text,
                "duality,{},\"residual {}\"",
                if out.report.duality.duality_holds {
                    "holds"
                } else {
                    "duality_holds=false"
                },
                fmt_f64(out.report.duality.max_residual)
            )
            .unwrap();
            Ok(text)
        }
        Format::Table => {
            let mut text = format!("assumption checks for `{}`\n", out.report.theory);
            for check in &out.report.checks {
                writeln!(text, "  {}: {}  ({})", check.id, check.verdict, check.description)
                    .unwrap();
            }
            let d = &out.report.duality;
            writeln!(
                text,
                "duality: duality_holds={} residual = {} [prob] over {} pairs{}",
                d.duality_holds,
                fmt_f64(d.max_residual),
                d.pairs_checked,
                if d.complete { "" } else { " (table incomplete)" }
            )
            .unwrap();
            Ok(text)
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Usage(format!("serialization: {e}")))
}

/// Resolves the output destination, honoring [`OUTPUT_DIR_ENV`] for relative
/// paths.
fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Runs a request, writing the artifact to the requested destination.
pub fn run(request: &RunRequest) -> Result<()> {
    let artifact = render(request)?;
    match &request.output {
        Some(path) => {
            let target = resolve_output(path);
            if let Some(parent) = target.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&target, artifact)?;
        }
        None => print!("{artifact}"),
    }
    Ok(())
}

/// Exit status for an error class; documented in the README.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) => 2,
        Error::Io(_) => 3,
        Error::TheoryFile { .. } | Error::UnknownLabel { .. } => 4,
        Error::PremiseViolation { .. } | Error::MixtureMismatch { .. } => 5,
        _ => 6,
    }
}

/// Entry point used by the binary: parse, run, report.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let request = match RunRequest::try_parse_from(args) {
        Ok(r) => r,
        Err(e) => {
            // clap prints its own message and uses exit code 2 for usage
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&request) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("gptherm: error[{}]: {err}", err.code());
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(args: &[&str]) -> RunRequest {
        RunRequest::try_parse_from(std::iter::once("gptherm").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn cycle_table_carries_unit_tags() {
        let out = render(&request(&["cycle", "--scenario", "quantum-xz"])).unwrap();
        assert!(out.contains("[NkT·ln2]"));
        assert!(out.contains("delta_w"));
    }

    #[test]
    fn bounds_csv_has_header_and_four_rows() {
        let out = render(&request(&[
            "bounds",
            "--scenario",
            "quantum-xz",
            "--format",
            "csv",
        ]))
        .unwrap();
        let lines: Vec<&str> = out.trim_end().lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "y1,y2,zeta,m0,m1,m2");
    }

    #[test]
    fn csv_output_is_byte_stable() {
        let req = request(&[
            "simulate",
            "--scenario",
            "quantum-xz",
            "-n",
            "10000",
            "--seed",
            "9",
            "--format",
            "csv",
        ]);
        assert_eq!(render(&req).unwrap(), render(&req).unwrap());
    }

    #[test]
    fn ledger_json_round_trips() {
        let out = render(&request(&[
            "cycle",
            "--scenario",
            "counterfactual",
            "--zeta",
            "0.9",
            "--format",
            "json",
        ]))
        .unwrap();
        let ledger: WorkLedger = serde_json::from_str(&out).unwrap();
        let direct = cycle::net_work(&crate::scenario::counterfactual(0.9).unwrap()).unwrap();
        assert_eq!(ledger, direct);
    }

    #[test]
    fn unknown_scenario_is_a_usage_style_error() {
        let err = render(&request(&["cycle", "--scenario", "no-such-file.toml"])).unwrap_err();
        assert_eq!(err.code(), "io");
        assert_eq!(exit_code(&err), 3);
    }

    #[test]
    fn bad_sweep_range_maps_to_domain_exit_code() {
        let err = render(&request(&[
            "sweep",
            "--scenario",
            "quantum-xz",
            "--zeta-min",
            "0.2",
        ]))
        .unwrap_err();
        assert_eq!(err.code(), "bad_range");
        assert_eq!(exit_code(&err), 6);
    }

    #[test]
    fn check_reports_gbit_duality_flag() {
        let out = render(&request(&["check", "--scenario", "gbit"])).unwrap();
        assert!(out.contains("duality_holds=false"));
    }

    #[test]
    fn entropy_accepts_labels_and_coordinates() {
        let by_label = render(&request(&[
            "entropy", "--scenario", "gbit", "--state", "center",
        ]))
        .unwrap();
        let by_coords = render(&request(&[
            "entropy", "--scenario", "gbit", "--state", "0,0",
        ]))
        .unwrap();
        assert!(by_label.contains("decomposition = 1 [bit]"));
        assert!(by_coords.contains("measurement   = 1 [bit]"));
    }
}
