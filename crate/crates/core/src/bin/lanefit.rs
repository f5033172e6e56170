use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lanefit::commands::{
    cmd_compare_models, cmd_eval, cmd_fit, cmd_match, cmd_synth, cmd_transform,
};
use lanefit::io::{frames_to_string, load_frames, Mode, SceneKind, ToolConfig};
use lanefit::{LaneError, Result};

/// Joint Bézier/key-point lane modeling, matching and evaluation.
///
/// The worker count is capped by the LANEFIT_WORKERS environment variable.
#[derive(Parser)]
#[command(name = "lanefit", version)]
struct Cli {
    /// TOML config; keys override the preset of the selected mode.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dataset preset (overrides `mode` in the config file).
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Machine-readable output file. JSON report for fit, match, eval and
    /// compare-models; JSON-lines lane file for transform and synth.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Base seed for synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Lane file (JSON lines).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Also write curve samples as CSV for plotting.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit key points and Bézier control points to every lane.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Match predictions to ground truth and report the loss breakdown.
    Match {
        #[command(flatten)]
        input: InputArgs,
        /// Prediction lane file.
        #[arg(long)]
        predictions: PathBuf,
    },
    /// Keep the front-camera-visible part of surround-view lanes.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        /// Also write the JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// F-Score, category accuracy and AP against ground truth.
    Eval {
        #[command(flatten)]
        input: InputArgs,
        /// Prediction lane file.
        #[arg(long)]
        predictions: PathBuf,
    },
    /// Modeling error of polynomial, interpolation and Bézier models.
    CompareModels {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        plot: PlotArgs,
    },
    /// Generate synthetic scenes.
    Synth {
        /// Scene kinds to cycle through: straight, u_shape, closed_loop,
        /// y_shape, lateral, or all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        kind: Vec<String>,
        /// Gaussian noise per coordinate, in meters.
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Number of frames.
        #[arg(long, default_value_t = 1)]
        frames: usize,
        /// Also write the JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Files to write once the command has succeeded.
#[derive(Default)]
struct Outputs {
    text: String,
    files: Vec<(PathBuf, String)>,
    stdout: Option<String>,
}

fn json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn io_err(path: &Path, e: std::io::Error) -> LaneError {
    LaneError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes through a temporary sibling so a failed write leaves no partial file.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, content).map_err(|e| io_err(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_err(path, e)
    })
}

fn parse_kinds(names: &[String]) -> Result<Vec<SceneKind>> {
    if names.iter().any(|n| n == "all") {
        return Ok(SceneKind::ALL.to_vec());
    }
    names.iter().map(|n| n.parse()).collect()
}

/// Report commands print text; the JSON report is written only to `--output`.
fn set_report(out: &mut Outputs, target: Option<&PathBuf>, text: String, json: String) {
    out.text = text;
    if let Some(p) = target {
        out.files.push((p.clone(), json));
    }
}

fn run(cli: Cli) -> Result<Outputs> {
    let cfg = ToolConfig::load(cli.config.as_deref(), cli.mode)?;
    let mut out = Outputs::default();
    match &cli.command {
        Command::Fit { input, plot } => {
            let r = cmd_fit(&cfg, &load_frames(&input.input)?)?;
            set_report(&mut out, cli.output.as_ref(), r.to_text(), json(&r));
            if let Some(p) = &plot.plot {
                out.files.push((p.clone(), r.plot_csv));
            }
        }
        Command::Match { input, predictions } => {
            let r = cmd_match(
                &cfg,
                &load_frames(&input.input)?,
                &load_frames(predictions)?,
            )?;
            set_report(&mut out, cli.output.as_ref(), r.to_text(), json(&r));
        }
        Command::Eval { input, predictions } => {
            let r = cmd_eval(
                &cfg,
                &load_frames(&input.input)?,
                &load_frames(predictions)?,
            )?;
            set_report(&mut out, cli.output.as_ref(), r.to_text(), json(&r));
        }
        Command::CompareModels { input, plot } => {
            let r = cmd_compare_models(&cfg, &load_frames(&input.input)?)?;
            set_report(&mut out, cli.output.as_ref(), r.to_text(), json(&r));
            if let Some(p) = &plot.plot {
                out.files.push((p.clone(), r.plot_csv));
            }
        }
        Command::Transform { input, report } => {
            let r = cmd_transform(&cfg, &load_frames(&input.input)?)?;
            out.text = r.to_text();
            let lanes = frames_to_string(&r.output);
            match &cli.output {
                Some(p) => out.files.push((p.clone(), lanes)),
                None => out.stdout = Some(lanes),
            }
            if let Some(p) = report {
                out.files.push((p.clone(), json(&r)));
            }
        }
        Command::Synth {
            kind,
            sigma,
            frames,
            report,
        } => {
            let r = cmd_synth(&cfg, &parse_kinds(kind)?, *frames, *sigma, cli.seed)?;
            out.text = r.to_text();
            let lanes = frames_to_string(&r.output);
            match &cli.output {
                Some(p) => out.files.push((p.clone(), lanes)),
                None => out.stdout = Some(lanes),
            }
            if let Some(p) = report {
                out.files.push((p.clone(), json(&r)));
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(cli).and_then(|out| {
        for (path, content) in &out.files {
            write_atomic(path, content)?;
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            match out.stdout {
                // Lane data owns stdout; the summary goes to stderr.
                Some(data) => {
                    print!("{data}");
                    eprint!("{}", out.text);
                }
                None => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
