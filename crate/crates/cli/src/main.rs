use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polydisk::par::set_threads;
use polydisk::Execution;
use polydisk_cli::config::{CapsValue, ExperimentConfig};
use polydisk_cli::run::{dump_matrix, run_check, run_kernel, run_sweep, write_sweep};
use polydisk_cli::verify::{self, Battery, CRITERIA};
use polydisk_cli::{CliError, EXIT_FAIL, EXIT_INVALID, EXIT_PASS};

#[derive(Parser)]
#[command(
    name = "polydisk",
    version,
    about = "Structural checks for weighted composition-differentiation operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML, or JSON for `.json` files).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the path in the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Caps per variable, e.g. `10` or `8,6`; overrides `caps.block`.
    #[arg(long, value_delimiter = ',')]
    caps: Option<Vec<usize>>,
    /// Symmetry and normality tolerance; overrides the config.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in the config and write a JSON report.
    Check(Common),
    /// Dump the matrix section as CSV.
    Matrix(Common),
    /// Null space of the section with both predicted dimensions.
    Kernel(Common),
    /// Run the checks over the config's parameter grid and write a CSV table.
    Sweep(Common),
    /// Run the verification battery.
    Verify {
        /// Print the criteria without running them.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Multiply every upper tolerance (test hook).
        #[arg(long, default_value_t = 1.0, hide = true)]
        tol_scale: f64,
    },
}

fn execution(jobs: Option<usize>) -> Result<Execution, CliError> {
    match jobs {
        Some(0) => Err(CliError::Invalid("--jobs must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            set_threads(n)?;
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::default()),
    }
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(caps) = &common.caps {
        let value = match caps.as_slice() {
            [c] => CapsValue::Uniform(*c),
            many => CapsValue::PerVariable(many.to_vec()),
        };
        config.caps.block = value.clone();
        config.caps.rows = Some(value.clone());
        config.caps.cols = Some(value);
    }
    if let Some(t) = common.tol {
        config.tolerances.symmetry = t;
        config.tolerances.normal = t;
    }
    config.validate()?;
    Ok(config)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut w = sink(path)?;
    writeln!(w, "{text}")
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn report_exit(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check(common) => {
            let exec = execution(common.jobs)?;
            let config = load(&common)?;
            let report = run_check(&config, exec)?;
            let out = common.out.as_deref().or(config.output.report.as_deref());
            emit(out, &report.to_json())?;
            for c in &report.checks {
                eprintln!(
                    "{}: residual {:.3e}, tolerance {:.3e}, {}",
                    c.name, c.residual, c.tolerance, c.verdict
                );
            }
            Ok(report_exit(report.passed))
        }
        Command::Kernel(common) => {
            let exec = execution(common.jobs)?;
            let config = load(&common)?;
            let report = run_kernel(&config, exec)?;
            let out = common.out.as_deref().or(config.output.report.as_deref());
            emit(out, &report.to_json())?;
            if let Some(k) = &report.kernel {
                eprintln!(
                    "kernel dimension {} (adjoint {}); monomial-kill count {}, degree < m count {}{}",
                    k.dim_computed,
                    k.dim_adjoint,
                    k.dim_derived_claim,
                    k.dim_paper_claim,
                    if k.paper_discrepancy { " (differs from the computed kernel)" } else { "" }
                );
            }
            Ok(report_exit(report.passed))
        }
        Command::Matrix(common) => {
            let exec = execution(common.jobs)?;
            let config = load(&common)?;
            let out = common.out.as_deref().or(config.output.matrix.as_deref());
            dump_matrix(&config, exec, sink(out)?)?;
            Ok(EXIT_PASS)
        }
        Command::Sweep(common) => {
            let exec = execution(common.jobs)?;
            let config = load(&common)?;
            let rows = run_sweep(&config, exec)?;
            let out = common.out.as_deref().or(config.output.sweep.as_deref());
            write_sweep(&config, &rows, sink(out)?)?;
            let invalid = rows.iter().filter(|r| r.invalid.is_some()).count();
            let failed = rows
                .iter()
                .filter(|r| r.invalid.is_none() && !r.passed())
                .count();
            eprintln!(
                "{} grid points: {invalid} invalid, {failed} failing",
                rows.len()
            );
            Ok(report_exit(failed == 0))
        }
        Command::Verify {
            list,
            jobs,
            seed,
            tol_scale,
        } => {
            if list {
                for (id, name, what) in CRITERIA {
                    println!("{id} {name}: {what}");
                }
                return Ok(EXIT_PASS);
            }
            let battery = Battery {
                seed,
                tol_scale,
                exec: execution(jobs)?,
            };
            let mut all = true;
            for (id, _, _) in CRITERIA {
                let outcome = verify::run(id, &battery);
                println!("{}", outcome.line());
                all &= outcome.passed;
            }
            println!(
                "{}",
                if all {
                    "all criteria passed"
                } else {
                    "some criteria failed"
                }
            );
            Ok(report_exit(all))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = dispatch(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_INVALID
    });
    ExitCode::from(code as u8)
}
