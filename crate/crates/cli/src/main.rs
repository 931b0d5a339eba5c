use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use recover_core::certify::{format_table, run_certification, CertifyOptions};
use recover_core::config::{Mode, RunConfig};
use recover_core::io::{image_to_pgm, summary_text, tensor_to_csv, write_file};
use recover_core::scenarios::{relative_error, Preset, Scenario, ScenarioParams};
use recover_core::solver::{solve_relaxed, RelaxedConfig, StopReason};
use recover_core::{solve, Tensor, Trace};

/// Signal and image recovery from nonlinear observations by fixed-point
/// iteration.
#[derive(Parser)]
#[command(name = "recover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the scenario described by a config file, solve it and write
    /// the outputs.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Output directory (default `out_<scenario>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the operator catalog numerically and print a PASS/FAIL table.
    Certify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, hide = true)]
        inject_expansive: bool,
    },
    /// Print the default parameters and operators of a scenario.
    Info {
        scenario: String,
        #[arg(long, value_enum, default_value_t = PresetArg::Desk)]
        preset: PresetArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Full,
}

/// Worker threads from `RECOVER_THREADS`; 0 and 1 mean sequential.
fn threads() -> Result<usize> {
    match std::env::var("RECOVER_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("RECOVER_THREADS must be a nonnegative integer, got `{v}`")),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run(
    path: &Path,
    seed: Option<u64>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    out: Option<PathBuf>,
) -> Result<()> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(v) = seed {
        cfg.set("seed", &v.to_string())?;
    }
    if let Some(v) = tol {
        cfg.set("tol", &v.to_string())?;
    }
    if let Some(v) = max_iters {
        cfg.set("max_iters", &v.to_string())?;
    }
    let params = cfg
        .scenario_params()
        .with_context(|| format!("in {}", path.display()))?;
    let settings = cfg
        .settings()
        .with_context(|| format!("in {}", path.display()))?;
    let scenario = params.build()?;
    let threads = threads()?;

    let (x, trace) = match settings.mode {
        Mode::Extrapolated => {
            let mut config = scenario.config.clone();
            if let Some(r) = settings.relaxation {
                config.relaxation = r;
            }
            config.epsilon = settings.epsilon;
            config.threads = threads;
            solve(&scenario.problem, &config)?
        }
        Mode::Relaxed => {
            let config = RelaxedConfig {
                weights: None,
                lambda: settings.lambda,
                residual_tol: scenario.config.residual_tol,
                max_iters: scenario.config.max_iters,
                x0: scenario.config.x0.clone(),
                reference: scenario.config.reference.clone(),
                threads,
            };
            solve_relaxed(&scenario.problem, &config).context("relaxed mode")?
        }
    };

    let dir = out.unwrap_or(settings.output_dir);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    write_outputs(&dir, &scenario, &x, &trace, settings.mode)?;
    let last = trace.last().map_or(f64::NAN, |r| r.residual);
    println!(
        "{}: {} after {} iterations, residual {last:.3e}; outputs in {}",
        scenario.name,
        stop_label(&trace),
        trace.iterations(),
        dir.display()
    );
    Ok(())
}

fn stop_label(trace: &Trace) -> &'static str {
    match trace.stop {
        StopReason::Converged => "converged",
        StopReason::MaxIterations => "iteration limit",
    }
}

fn write_outputs(dir: &Path, s: &Scenario, x: &Tensor, trace: &Trace, mode: Mode) -> Result<()> {
    let is_image = !x.is_signal();
    let put = |name: &str, t: &Tensor| -> Result<()> {
        write_file(&dir.join(format!("{name}.csv")), &tensor_to_csv(t))?;
        if is_image && t.shape() == x.shape() {
            write_file(&dir.join(format!("{name}.pgm")), &image_to_pgm(t))?;
        }
        Ok(())
    };
    put("solution", x)?;
    put("ground_truth", &s.ground_truth)?;
    if s.observations.len() <= 16 {
        for (id, obs) in &s.observations {
            put(&format!("observation_{id}"), obs)?;
        }
    } else {
        // many scalar observations: one value per line, in id order
        let text: String = s
            .observations
            .iter()
            .map(|(_, t)| tensor_to_csv(t))
            .collect();
        write_file(&dir.join("observations.csv"), &text)?;
    }
    write_file(&dir.join("trace.csv"), &trace.to_csv())?;

    let mut entries = vec![
        ("scenario".to_string(), s.name.to_string()),
        (
            "mode".to_string(),
            match mode {
                Mode::Extrapolated => "extrapolated",
                Mode::Relaxed => "relaxed",
            }
            .to_string(),
        ),
        ("stop".to_string(), stop_label(trace).to_string()),
        ("iterations".to_string(), trace.iterations().to_string()),
        (
            "max_residual".to_string(),
            format!("{:e}", s.max_residual(x)?),
        ),
        (
            "relative_error".to_string(),
            format!("{:e}", relative_error(x, &s.ground_truth)?),
        ),
    ];
    for (id, name, r) in s.op_residuals(x)? {
        entries.push((format!("residual_{id}_{name}"), format!("{r:e}")));
    }
    for (name, v) in s.evaluate_metrics(x)? {
        entries.push((format!("metric_{name}"), format!("{v:e}")));
    }
    write_file(&dir.join("summary.txt"), &summary_text(&entries))?;
    Ok(())
}

fn info(name: &str, preset: PresetArg) -> Result<()> {
    let preset = match preset {
        PresetArg::Desk => Preset::Desk,
        PresetArg::Full => Preset::Full,
    };
    let params = ScenarioParams::preset(name, preset)?;
    println!("{params:#?}");
    let s = params.build()?;
    let (rows, cols) = s.problem.shape();
    println!("shape: {rows}x{cols}");
    println!("control: {}", s.config.control);
    println!("relaxation: {}", s.config.relaxation);
    let ops: Vec<_> = s.problem.ops().collect();
    let shown = ops.len().min(12);
    for (id, op) in &ops[..shown] {
        println!("  {id:>5}  {:<24} {}", op.name(), op.kind());
    }
    if ops.len() > shown {
        println!("  ... {} more", ops.len() - shown);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            tol,
            max_iters,
            out,
        } => run(&config, seed, tol, max_iters, out),
        Command::Certify {
            seed,
            trials,
            inject_expansive,
        } => run_certification(&CertifyOptions {
            seed,
            trials,
            inject_expansive,
        })
        .map_err(Into::into)
        .and_then(|rows| {
            print!("{}", format_table(&rows));
            let failed = rows.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                bail!("{failed} certification check(s) failed");
            }
            Ok(())
        }),
        Command::Info { scenario, preset } => info(&scenario, preset),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
