use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vorocell::generators::FamilyId;
use vorocell::report::{
    resolve_spec, run_analyze, run_sweep, schedule_or_default, AnalysisReport, AnalyzeOptions,
};
use vorocell::svg::render_svg;
use vorocell::{Error, Result};

/// Exact analysis of the Voronoi cell at the origin.
#[derive(Parser)]
#[command(name = "vorocell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a built-in family or a spec file and emit a JSON report.
    Analyze {
        /// Family name or path to a spec file.
        source: String,
        /// Increasing truncation radii, e.g. `2,4,8,16,32`.
        #[arg(long)]
        schedule: Option<String>,
        /// Expected dimension of the spec.
        #[arg(long)]
        dim: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out the figure geometry.
        #[arg(long)]
        no_figure: bool,
    },
    /// Per-radius counts without verdicts.
    Sweep {
        source: String,
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        /// Print JSON instead of a text table.
        #[arg(long)]
        json: bool,
    },
    /// Render the figure of a saved report as SVG.
    Plot {
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the built-in families.
    Families,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            source,
            schedule,
            dim,
            out,
            no_figure,
        } => {
            let spec = resolve_spec(&source, dim)?;
            let schedule = schedule_or_default(schedule.as_deref())?;
            let report = run_analyze(&spec, &schedule, &AnalyzeOptions { no_figure })?;
            let json = report.to_json();
            match out {
                Some(path) => {
                    fs::write(&path, json)?;
                    println!("polyhedrality: {}", report.polyhedrality.label());
                    println!("boundedness: {}", report.boundedness.label());
                    println!("conclusion: {:?}", report.conclusion);
                    for m in &report.markers {
                        println!("marker: {m}");
                    }
                }
                None => print!("{json}"),
            }
        }
        Command::Sweep {
            source,
            schedule,
            dim,
            json,
        } => {
            let spec = resolve_spec(&source, dim)?;
            let schedule = schedule_or_default(schedule.as_deref())?;
            let table = run_sweep(&spec, &schedule)?;
            if json {
                print!("{}", table.to_json());
            } else {
                print!("{}", table.to_text());
            }
        }
        Command::Plot { report, out } => {
            let report = AnalysisReport::from_json(&fs::read_to_string(report)?)?;
            fs::write(out, render_svg(&report)?)?;
        }
        Command::Families => {
            for f in FamilyId::ALL {
                let tag = if f.is_approximated() {
                    " (approximated)"
                } else {
                    ""
                };
                println!("{}{tag}\n    {}", f.name(), f.description());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
