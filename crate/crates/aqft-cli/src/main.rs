//! Batch command-line front end: matrix export, plan and schedule
//! inspection, deviation reports, and the order-finding demo. Everything is
//! deterministic: the same command with the same seed produces byte-identical
//! output.

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aqft_core::circuit::{build_aqft_plan, build_qft_plan, CircuitPlan};
use aqft_core::order_finding::{
    default_width, extract_period, factor_from_period, histogram, histogram_csv, report_json,
    run_shots, OrderFindingConfig,
};
use aqft_core::scheduler::schedule_plan;
use aqft_core::transforms::{
    afft_matrix, deviation_report, dft_matrix, hadamard_matrix, TransformMatrix,
};

/// Environment variable naming the directory relative output paths land in.
const OUTPUT_DIR_VAR: &str = "AQFT_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "aqft",
    version,
    about = "Radix-2 transform circuits, reference matrices, parallel schedules, and order finding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    /// Exact transform matrix
    Fft,
    /// Reversed-index Hadamard matrix
    Ht,
    /// Approximate transform matrix (needs --m)
    Afft,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Export a reference transform matrix
    Matrix {
        #[arg(long, value_enum)]
        kind: MatrixKind,
        /// Register width L
        #[arg(long)]
        l: usize,
        /// Approximation parameter m (afft only)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output file; standard output when omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a gate plan, or re-serialize an imported one
    Plan {
        /// Register width L
        #[arg(long, conflicts_with = "import", required_unless_present = "import")]
        l: Option<usize>,
        /// Approximation parameter m; defaults to L (full transform)
        #[arg(long, requires = "l")]
        m: Option<usize>,
        /// Read a gate list in the line format instead of building one
        #[arg(long)]
        import: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Partition a plan into parallel time-step layers
    Schedule {
        #[arg(long)]
        l: usize,
        /// Approximation parameter m; defaults to L
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Phase-deviation report of the approximate transform
    Deviation {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the order-finding demo and report period and factors
    Orderfind {
        /// Odd composite modulus to factor
        #[arg(long)]
        n: u64,
        /// Base coprime to n
        #[arg(long)]
        x: u64,
        /// Register width L; defaults to the smallest L with 2^L >= 5n²
        #[arg(long)]
        l: Option<usize>,
        /// Approximation parameter m; defaults to L
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 64)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Matrix {
            kind,
            l,
            m,
            format,
            output,
        } => {
            let matrix = build_matrix(kind, l, m)?;
            let content = match format {
                Format::Text => matrix.to_text(),
                Format::Json => {
                    let mut json = matrix.to_json();
                    json.push('\n');
                    json
                }
                Format::Csv => matrix.to_csv(),
            };
            write_output(&output, &content)
        }
        Command::Plan {
            l,
            m,
            import,
            output,
        } => {
            let plan = match import {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    CircuitPlan::from_text(&text).map_err(|e| e.to_string())?
                }
                None => {
                    let l = l.expect("clap enforces --l without --import");
                    build_plan(l, m)?
                }
            };
            let (hadamards, phases) = plan.gate_counts();
            let mut content = format!(
                "# l={} m={} hadamard={hadamards} controlled_phase={phases}\n",
                plan.width_l(),
                plan.approx_m()
            );
            content.push_str(&plan.to_text());
            write_output(&output, &content)
        }
        Command::Schedule {
            l,
            m,
            format,
            output,
        } => {
            let plan = build_plan(l, m)?;
            let schedule = schedule_plan(&plan).map_err(|e| e.to_string())?;
            let content = match format {
                Format::Text => {
                    let mut text = format!("{schedule}\n");
                    text.push_str(&format!("depth={}\n", schedule.depth()));
                    let empty = schedule.empty_steps();
                    if !empty.is_empty() {
                        let steps: Vec<String> = empty.iter().map(usize::to_string).collect();
                        text.push_str(&format!("empty_steps={}\n", steps.join(",")));
                    }
                    text
                }
                Format::Json => {
                    let layers: Vec<serde_json::Value> = schedule
                        .layers()
                        .iter()
                        .map(|layer| {
                            serde_json::json!({
                                "step": layer.time_step(),
                                "gates": layer
                                    .gates()
                                    .iter()
                                    .map(|g| g.to_string())
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let value = serde_json::json!({
                        "l": plan.width_l(),
                        "m": plan.approx_m(),
                        "depth": schedule.depth(),
                        "empty_steps": schedule.empty_steps(),
                        "layers": layers,
                    });
                    format!("{value}\n")
                }
                Format::Csv => return Err("schedule has no csv form; use text or json".into()),
            };
            write_output(&output, &content)
        }
        Command::Deviation {
            l,
            m,
            format,
            output,
        } => {
            let report = deviation_report(l, m).map_err(|e| e.to_string())?;
            let content = match format {
                Format::Text => {
                    let mut text = format!("l={l} m={m}\n");
                    text.push_str(&format!("analytic_bound={:e}\n", report.analytic_bound));
                    match report.max_phase_deviation {
                        Some(observed) => {
                            text.push_str(&format!("observed_max={observed:e}\n"));
                            text.push_str(&format!(
                                "bound_satisfied={}\n",
                                report.bound_satisfied.unwrap_or(false)
                            ));
                        }
                        None => text.push_str("observed_max=n/a (width guard)\n"),
                    }
                    text
                }
                Format::Json => {
                    let value = serde_json::json!({
                        "l": l,
                        "m": m,
                        "analytic_bound": report.analytic_bound,
                        "observed_max": report.max_phase_deviation,
                        "bound_satisfied": report.bound_satisfied,
                    });
                    format!("{value}\n")
                }
                Format::Csv => return Err("deviation has no csv form; use text or json".into()),
            };
            write_output(&output, &content)
        }
        Command::Orderfind {
            n,
            x,
            l,
            m,
            shots,
            seed,
            format,
            output,
        } => {
            if n % 2 == 0 {
                return Err(format!(
                    "modulus {n} is even; the demo targets odd composites"
                ));
            }
            let width = l.unwrap_or_else(|| default_width(n));
            let approx = m.unwrap_or(width);
            let config =
                OrderFindingConfig::new(n, x, width, approx, seed).map_err(|e| e.to_string())?;
            let records = run_shots(&config, shots).map_err(|e| e.to_string())?;
            let content = match format {
                Format::Text => {
                    let mut text =
                        format!("n={n} x={x} l={width} m={approx} shots={shots} seed={seed}\n");
                    text.push_str("outcome,count,frequency\n");
                    for row in histogram(&records) {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            row.outcome, row.count, row.frequency
                        ));
                    }
                    let estimates: Vec<u64> =
                        records.iter().map(|r| r.frequency_estimate).collect();
                    match extract_period(&estimates, config.q(), n, x) {
                        Some(period) => {
                            text.push_str(&format!("period={period}\n"));
                            match factor_from_period(n, x, period).map_err(|e| e.to_string())? {
                                Some((p, q)) => text.push_str(&format!("factors={p} x {q}\n")),
                                None => text.push_str("factors=none\n"),
                            }
                        }
                        None => {
                            text.push_str("period=none\n");
                            text.push_str("factors=none\n");
                        }
                    }
                    text
                }
                Format::Json => {
                    let mut json = report_json(&config, &records);
                    json.push('\n');
                    json
                }
                Format::Csv => histogram_csv(&records),
            };
            write_output(&output, &content)
        }
    }
}

fn build_matrix(kind: MatrixKind, l: usize, m: Option<usize>) -> Result<TransformMatrix, String> {
    match kind {
        MatrixKind::Fft => {
            reject_m(m, "fft")?;
            dft_matrix(l).map_err(|e| e.to_string())
        }
        MatrixKind::Ht => {
            reject_m(m, "ht")?;
            hadamard_matrix(l).map_err(|e| e.to_string())
        }
        MatrixKind::Afft => {
            let m = m.ok_or("afft needs --m")?;
            afft_matrix(l, m).map_err(|e| e.to_string())
        }
    }
}

fn reject_m(m: Option<usize>, kind: &str) -> Result<(), String> {
    match m {
        Some(_) => Err(format!("--m does not apply to {kind}")),
        None => Ok(()),
    }
}

fn build_plan(l: usize, m: Option<usize>) -> Result<CircuitPlan, String> {
    match m {
        Some(m) => build_aqft_plan(l, m).map_err(|e| e.to_string()),
        None => build_qft_plan(l).map_err(|e| e.to_string()),
    }
}

/// Print to standard output, or write to a file. Relative paths are placed
/// under the directory named by `AQFT_OUTPUT_DIR` when it is set.
fn write_output(output: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let resolved = match env::var_os(OUTPUT_DIR_VAR) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            fs::write(&resolved, content)
                .map_err(|e| format!("cannot write {}: {e}", resolved.display()))
        }
    }
}
