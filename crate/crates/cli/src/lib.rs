//! Command-line driver for the simplicity checker: argument parsing,
//! report rendering and exit-code mapping.

pub mod fuzz;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use labeled_simplicity::conditions::Limits;
use labeled_simplicity::oracle::FuzzParams;
use labeled_simplicity::{parse_graph, stable_partition, Error, LabeledGraph};

pub use fuzz::{run_fuzz, FuzzSummary};
pub use report::{analyze, render_text, replay_witnesses, AnalysisReport, AnalyzeOptions};

/// Analyzed, whatever the verdict.
pub const EXIT_OK: u8 = 0;
/// I/O, parse or flag error, a failed witness replay, or fuzz violations.
pub const EXIT_ERROR: u8 = 1;
/// The graph has a sink or source, or is not weakly left-resolving.
pub const EXIT_OUT_OF_SCOPE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lgsimple",
    version,
    about = "Decide simplicity of labeled-graph C*-algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every condition and the simplicity verdict for a graph file.
    Analyze {
        file: PathBuf,
        /// Emit the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Rebuild each witness from the report and re-check it.
        #[arg(long)]
        verify_witness: bool,
        /// Also list loops up to this length, with their exit types.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_loop_len: Option<u64>,
    },
    /// Print the generalized-vertex partitions up to stabilization.
    Atoms { file: PathBuf },
    /// Cross-check random weakly left-resolving graphs.
    Fuzz {
        /// Number of graphs to check.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        max_vertices: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_labels: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Edge probability per ordered vertex pair.
        #[arg(long, default_value_t = 0.35)]
        density: f64,
        /// Give every edge its own label.
        #[arg(long)]
        trivial: bool,
        /// Directory for graphs that violate a cross-check.
        #[arg(long, default_value = "fuzz-violations")]
        out: PathBuf,
        /// Emit the summary as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &PathBuf) -> anyhow::Result<LabeledGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn render_atoms(g: &LabeledGraph) -> String {
    let atoms = stable_partition(g);
    let mut out = String::new();
    for (i, level) in atoms.level_history().iter().enumerate() {
        let classes: Vec<String> = level.iter().map(|c| g.format_set(c)).collect();
        out.push_str(&format!("level {}: {}\n", i + 1, classes.join(" ")));
    }
    out.push_str(&format!(
        "stabilized at level {} with {} atoms\n",
        atoms.stabilization_level(),
        atoms.len()
    ));
    out
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> anyhow::Result<u8> {
    match cli.command {
        Command::Analyze {
            file,
            json,
            verify_witness,
            max_loop_len,
        } => {
            let g = load(&file)?;
            let opts = AnalyzeOptions {
                verify_witness,
                max_loop_len: max_loop_len.map(|n| n as usize),
                limits: Limits::default(),
            };
            let report = match analyze(&g, opts) {
                Ok(r) => r,
                Err(e @ Error::OutsideScope(_)) => {
                    if json {
                        let refusal =
                            serde_json::json!({ "in_scope": false, "reason": e.to_string() });
                        writeln!(stdout, "{}", serde_json::to_string_pretty(&refusal)?)?;
                    } else {
                        writeln!(stdout, "{e}")?;
                    }
                    return Ok(EXIT_OUT_OF_SCOPE);
                }
                Err(e) => return Err(e.into()),
            };
            if json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(stdout, "{}", render_text(&report))?;
            }
            let replay_failed = report
                .witness_replay
                .as_ref()
                .is_some_and(|r| r.iter().any(|e| !e.ok));
            Ok(if replay_failed { EXIT_ERROR } else { EXIT_OK })
        }
        Command::Atoms { file } => {
            let g = load(&file)?;
            write!(stdout, "{}", render_atoms(&g))?;
            Ok(EXIT_OK)
        }
        Command::Fuzz {
            n,
            max_vertices,
            max_labels,
            seed,
            density,
            trivial,
            out,
            json,
        } => {
            let params = FuzzParams {
                max_vertices: max_vertices as usize,
                max_labels: max_labels as usize,
                edge_density: density,
                count: n as usize,
                seed,
                trivial_labeling: trivial,
            };
            let summary = run_fuzz(params, Limits::default(), Some(&out))?;
            if json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&summary)?)?;
            } else {
                write!(stdout, "{}", summary.render())?;
            }
            Ok(if summary.violations == 0 {
                EXIT_OK
            } else {
                EXIT_ERROR
            })
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
