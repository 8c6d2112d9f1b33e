//! Command-line front end: gallery runs, classifiers, probes, the period
//! comparator, convergence tables, and exact trajectory export.
//!
//! Exit codes: 0 success, 1 expectation failure, 2 usage error, 3 I/O
//! error. Outputs are deterministic: JSON objects have sorted keys and
//! rationals are exact `p/q` strings.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ndslab_core::classify::{check_def1, check_def2, check_def3, check_def4, check_def5};
use ndslab_core::gallery::{
    build_scenario, convergence_table, gallery_ids, scenario_expectations, ScenarioParams,
};
use ndslab_core::matrix::{implication_expectations, MatrixMode};
use ndslab_core::probes::{
    dense_orbit_probe, devaney_report, sensitivity_probe, transitivity_probe, DevaneyParams,
};
use ndslab_core::rational::Rational;
use ndslab_core::sequence::MapSequence;
use ndslab_core::sharkovsky::sharkovsky_precedes;

#[derive(Parser)]
#[command(
    name = "ndslab",
    about = "Exact-arithmetic laboratory for piecewise-linear nonautonomous dynamics on [0,1]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProbeKindArg {
    Devaney,
    Transitivity,
    DenseOrbit,
    Sensitivity,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenario ids.
    List,
    /// Replay every expectation of a built-in scenario.
    Run {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a scenario (system spec and distinguished points) as JSON.
    Export {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a point under one of the five periodicity notions.
    Classify {
        /// Scenario id or path to a system-spec JSON file.
        #[arg(long)]
        system: String,
        /// Point as an exact rational "p/q".
        #[arg(long)]
        point: String,
        /// Notion selector 1..=5.
        #[arg(long = "def")]
        definition: u8,
        /// Exact period for notions 2 and 4.
        #[arg(long)]
        r: Option<u64>,
        /// Period search bound for notions 1 and 5.
        #[arg(long = "r-max")]
        r_max: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        horizon: u64,
        /// Tolerance "p/q" for the tolerance-based notions.
        #[arg(long, default_value = "1/1000")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a chaos probe against a system.
    Probe {
        #[arg(long)]
        system: String,
        #[arg(long, value_enum, default_value_t = ProbeKindArg::Devaney)]
        kind: ProbeKindArg,
        /// Start point for the dense-orbit probe.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        /// Cell width for the dense-orbit probe.
        #[arg(long)]
        eps: Option<String>,
        /// Separation threshold for the sensitivity probe.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two periods in the forcing order (is l stronger than m?).
    Sharkovsky { l: u64, m: u64 },
    /// Exact sup-distance table from g_n to the limit map.
    Convergence {
        #[arg(long = "n-max", default_value_t = 50)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact trajectory as CSV (with a decimal column flagged approximate).
    Trajectory {
        #[arg(long)]
        system: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1000)]
        horizon: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the expected implication matrix for one mode.
    Matrix {
        #[arg(long, default_value = "general")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Expectation,
}

impl From<ndslab_core::Error> for Failure {
    fn from(e: ndslab_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type RunResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Expectation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    Rational::parse(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_unit_point(s: &str) -> Result<Rational, Failure> {
    let x = parse_rational(s)?;
    if !x.in_unit_interval() {
        return Err(Failure::Usage(format!("point {x} lies outside [0,1]")));
    }
    Ok(x)
}

/// Resolve `--system` as a scenario id first, then as a spec-file path.
fn resolve_system(spec: &str) -> Result<MapSequence, Failure> {
    if gallery_ids().contains(&spec) {
        return Ok(build_scenario(spec, &ScenarioParams::default())?.system);
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(Failure::Usage(format!(
            "{spec:?} is neither a scenario id ({}) nor an existing spec file",
            gallery_ids().join(", ")
        )));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::Io(e.to_string()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad JSON: {e}")))?;
    Ok(MapSequence::from_spec_json(&value)?)
}

fn emit(text: &str, out: &Option<PathBuf>) -> RunResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(value: &Value, out: &Option<PathBuf>) -> RunResult {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    emit(&text, out)
}

/// Tolerance schedule ending at `eps`, prefixed by the coarser defaults.
fn schedule_down_to(eps: &Rational) -> Vec<Rational> {
    let mut sched: Vec<Rational> = [
        Rational::new(1, 4).unwrap(),
        Rational::new(1, 20).unwrap(),
        Rational::new(1, 100).unwrap(),
    ]
    .into_iter()
    .filter(|e| e > eps)
    .collect();
    sched.push(eps.clone());
    sched
}

fn execute(command: Command) -> RunResult {
    match command {
        Command::List => {
            for id in gallery_ids() {
                println!("{id}");
            }
            Ok(())
        }
        Command::Run { id, out } => {
            let scenario = build_scenario(&id, &ScenarioParams::default())?;
            let results = scenario_expectations(&scenario)?;
            let all_passed = results.iter().all(|r| r.passed);
            let mut obj = Map::new();
            obj.insert("scenario".into(), json!(id));
            obj.insert(
                "expectations".into(),
                Value::Array(results.iter().map(|r| r.to_json()).collect()),
            );
            obj.insert("all_passed".into(), json!(all_passed));
            emit_json(&Value::Object(obj), &out)?;
            if all_passed {
                Ok(())
            } else {
                Err(Failure::Expectation)
            }
        }
        Command::Export { id, out } => {
            let scenario = build_scenario(&id, &ScenarioParams::default())?;
            emit_json(&scenario.to_json(), &out)
        }
        Command::Classify {
            system,
            point,
            definition,
            r,
            r_max,
            horizon,
            eps,
            out,
        } => {
            let seq = resolve_system(&system)?;
            let x = parse_unit_point(&point)?;
            let eps = parse_rational(&eps)?;
            let verdict = match definition {
                1 => check_def1(&seq, &x, r_max.unwrap_or(8), horizon, &eps)?,
                2 => check_def2(&seq, &x, r.unwrap_or(1), horizon)?,
                3 => check_def3(&seq, &x, horizon)?,
                4 => check_def4(&seq, &x, r.unwrap_or(1), horizon)?,
                5 => check_def5(&seq, &x, r_max.unwrap_or(8), horizon, &schedule_down_to(&eps))?,
                other => {
                    return Err(Failure::Usage(format!(
                        "--def must be 1..=5, got {other}"
                    )))
                }
            };
            emit_json(&verdict.to_json(), &out)
        }
        Command::Probe {
            system,
            kind,
            point,
            grid,
            horizon,
            eps,
            delta,
            out,
        } => {
            let seq = resolve_system(&system)?;
            let report = match kind {
                ProbeKindArg::Transitivity => {
                    transitivity_probe(&seq, grid.unwrap_or(16), horizon.unwrap_or(20))?
                }
                ProbeKindArg::DenseOrbit => {
                    let p = point.as_deref().ok_or_else(|| {
                        Failure::Usage("dense-orbit probe needs --point".into())
                    })?;
                    let x = parse_unit_point(p)?;
                    let eps = match eps {
                        Some(s) => parse_rational(&s)?,
                        None => Rational::new(1, 20).unwrap(),
                    };
                    let t = seq.trajectory(&x, horizon.unwrap_or(5000))?;
                    dense_orbit_probe(&t, &eps)?
                }
                ProbeKindArg::Sensitivity => {
                    let delta = match delta {
                        Some(s) => parse_rational(&s)?,
                        None => Rational::new(1, 4).unwrap(),
                    };
                    sensitivity_probe(&seq, &delta, grid.unwrap_or(16), 8, horizon.unwrap_or(200))?
                }
                ProbeKindArg::Devaney => devaney_report(&seq, &DevaneyParams::default())?,
            };
            emit_json(&report.to_json(), &out)
        }
        Command::Sharkovsky { l, m } => {
            if l == 0 || m == 0 {
                return Err(Failure::Usage("periods must be positive".into()));
            }
            let forward = sharkovsky_precedes(l, m);
            let backward = sharkovsky_precedes(m, l);
            let value = json!({
                "l": l,
                "m": m,
                "l_precedes_m": forward,
                "m_precedes_l": backward,
            });
            emit_json(&value, &None)
        }
        Command::Convergence { n_max, format, out } => {
            if n_max < 1 {
                return Err(Failure::Usage("--n-max must be at least 1".into()));
            }
            let table = convergence_table(n_max);
            match format {
                Format::Csv => {
                    let mut text = String::from("n,distance\n");
                    for (n, d) in &table {
                        writeln!(text, "{n},{d}").expect("string write");
                    }
                    emit(&text, &out)
                }
                Format::Json => {
                    let value = Value::Array(
                        table
                            .iter()
                            .map(|(n, d)| json!({ "n": n, "distance": d.to_string() }))
                            .collect(),
                    );
                    emit_json(&value, &out)
                }
            }
        }
        Command::Trajectory {
            system,
            point,
            horizon,
            out,
        } => {
            let seq = resolve_system(&system)?;
            let x = parse_unit_point(&point)?;
            let t = seq.trajectory(&x, horizon)?;
            let mut text = String::from("n,value_num,value_den,value_approx\n");
            for (n, v) in t.values().iter().enumerate() {
                writeln!(
                    text,
                    "{n},{},{},{:.12}",
                    v.numer(),
                    v.denom(),
                    v.to_f64_approx()
                )
                .expect("string write");
            }
            emit(&text, &out)
        }
        Command::Matrix { mode, out } => {
            let mode = match mode.as_str() {
                "general" | "general_nds" => MatrixMode::GeneralNds,
                "uniform" | "uniformly_convergent" => MatrixMode::UniformlyConvergent,
                other => {
                    return Err(Failure::Usage(format!(
                        "--mode must be 'general' or 'uniform', got {other:?}"
                    )))
                }
            };
            emit_json(&implication_expectations(mode).to_json(), &out)
        }
    }
}
