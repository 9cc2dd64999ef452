//! Command-line front-end for the Thomas–Fermi FRB collocation solver.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frbc::report::{
    convergence_table, log_probe, reference_abscissas, parse_list, residual_table, value_table,
    RunConfig, SolveSummary, Table, Which,
};
use frbc::{build_grid, Error, Result, TfSolution};

#[derive(Parser)]
#[command(name = "frbc", version, about = "Thomas–Fermi solver by FRB collocation and quasilinearization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and print slope and diagnostics; optionally save the solution.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Write the solution document here.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Write the per-iteration trace (JSON) here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Tabulate y or y' at given abscissas (default: the 52 published ones).
    Table {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value_t = WhichArg::Y)]
        which: WhichArg,
        /// Comma-separated abscissas.
        #[arg(long)]
        x_list: Option<String>,
        /// Use a saved solution instead of solving.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Slope and values per truncation order and iteration checkpoint.
    Convergence {
        #[command(flatten)]
        run: MultiRunArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated iteration checkpoints.
        #[arg(long, value_delimiter = ',', default_value = "15,30,45")]
        iterations: Vec<usize>,
        /// Comma-separated abscissas; 0 gives y(0) = 1 and the initial slope.
        #[arg(long, default_value = "0,10,100,200,300,400,500")]
        x_list: String,
    },
    /// Nonlinear residual |y'' − y^(3/2)/√x| on a probe grid, one series per N.
    ResidualProfile {
        #[command(flatten)]
        run: MultiRunArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 45)]
        iterations: usize,
        /// Probe range `lo,hi` for log-spaced points.
        #[arg(long, default_value = "0.01,100")]
        probe_log_range: String,
        #[arg(long, default_value_t = 100)]
        probe_count: usize,
        /// Explicit probe points; overrides the log range.
        #[arg(long)]
        x_list: Option<String>,
        /// Use a saved solution instead of solving.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Dump the collocation grid.
    Grid {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Truncation order N (N + 1 basis functions).
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Map exponent, decimal or p/q.
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Map scale L, decimal or p/q.
    #[arg(long, default_value = "1")]
    scale: String,
    #[arg(long, default_value_t = 45)]
    iterations: usize,
    /// Significant decimal digits of working precision.
    #[arg(long, default_value_t = 50)]
    digits: u32,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            order: self.n,
            alpha: self.alpha.clone(),
            scale: self.scale.clone(),
            iterations: self.iterations,
            digits: self.digits,
        }
    }
}

#[derive(Args, Clone)]
struct MultiRunArgs {
    /// Comma-separated truncation orders.
    #[arg(long, value_delimiter = ',', default_value = "50")]
    n: Vec<usize>,
    #[arg(long, default_value = "1/2")]
    alpha: String,
    #[arg(long, default_value = "1")]
    scale: String,
    #[arg(long, default_value_t = 50)]
    digits: u32,
}

impl MultiRunArgs {
    fn configs(&self, iterations: usize) -> Vec<RunConfig> {
        self.n
            .iter()
            .map(|&order| RunConfig {
                order,
                alpha: self.alpha.clone(),
                scale: self.scale.clone(),
                iterations,
                digits: self.digits,
            })
            .collect()
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Y,
    Dy,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Self {
        match w {
            WhichArg::Y => Which::Value,
            WhichArg::Dy => Which::Derivative,
        }
    }
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match output.format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &table.to_json())?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Map a parse failure on user input to a usage error.
fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(_) | Error::InvalidPrecision(_) | Error::InvalidBasis(_) | Error::Domain(_) => {
            Error::Usage(e.to_string())
        }
        other => other,
    })
}

fn validate(config: &RunConfig) -> Result<()> {
    usage(config.problem().map(|_| ()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            run,
            output,
            save,
            trace,
        } => {
            let config = run.config();
            validate(&config)?;
            let started = Instant::now();
            let (solution, iteration_trace) = config.solve()?;
            let summary = SolveSummary::new(&solution, &iteration_trace)?;
            eprintln!("solved in {:.3} s", started.elapsed().as_secs_f64());
            if let Some(path) = save {
                solution.save(&path)?;
            }
            if let Some(path) = trace {
                let mut text = serde_json::to_string_pretty(&iteration_trace.to_json(solution.context(), false))?;
                text.push('\n');
                std::fs::write(path, text)?;
            }
            match output.format {
                Format::Csv => emit(&summary.to_table(), &output),
                Format::Json => {
                    let mut text = serde_json::to_string_pretty(&summary)?;
                    text.push('\n');
                    match &output.out {
                        Some(path) => std::fs::write(path, text)?,
                        None => io::stdout().lock().write_all(text.as_bytes())?,
                    }
                    Ok(())
                }
            }
        }
        Command::Table {
            run,
            output,
            which,
            x_list,
            solution,
        } => {
            let solution = match solution {
                Some(path) => TfSolution::load(&path)?,
                None => {
                    let config = run.config();
                    validate(&config)?;
                    config.solve()?.0
                }
            };
            let ctx = *solution.context();
            let xs = match x_list {
                Some(text) => usage(parse_list(&text, &ctx))?,
                None => reference_abscissas(&ctx),
            };
            emit(&value_table(&solution, which.into(), &xs)?, &output)
        }
        Command::Convergence {
            run,
            output,
            iterations,
            x_list,
        } => {
            let configs = run.configs(iterations.iter().copied().max().unwrap_or(0));
            for config in &configs {
                validate(config)?;
            }
            let ctx = usage(configs[0].context())?;
            let xs = usage(parse_list(&x_list, &ctx))?;
            emit(&convergence_table(&configs, &iterations, &xs)?, &output)
        }
        Command::ResidualProfile {
            run,
            output,
            iterations,
            probe_log_range,
            probe_count,
            x_list,
            solution,
        } => {
            let solutions = match solution {
                Some(path) => vec![TfSolution::load(&path)?],
                None => {
                    let configs = run.configs(iterations);
                    for config in &configs {
                        validate(config)?;
                    }
                    configs
                        .iter()
                        .map(|c| c.solve().map(|(s, _)| s))
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let ctx = *solutions[0].context();
            let probe = match x_list {
                Some(text) => usage(parse_list(&text, &ctx))?,
                None => {
                    let bounds = usage(parse_list(&probe_log_range, &ctx))?;
                    let [lo, hi] = bounds.as_slice() else {
                        return Err(Error::Usage("--probe-log-range expects lo,hi".into()));
                    };
                    log_probe(lo, hi, probe_count, &ctx)?
                }
            };
            emit(&residual_table(&solutions, &probe)?, &output)
        }
        Command::Grid { n, digits, output } => {
            let ctx = usage(frbc::PrecisionContext::new(digits))?;
            let grid = build_grid(n, &ctx);
            let mut table = Table::new(&["index", "x"]);
            table.rows = grid
                .points()
                .iter()
                .enumerate()
                .map(|(i, x)| vec![(i + 1).to_string(), ctx.format(x)])
                .collect();
            emit(&table, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("frbc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
