use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dimless::eigensolver::{solve, SolverConfig, DEFAULT_C_LAMBDA, DEFAULT_MAX_ITERATIONS, DEFAULT_POINTS};
use dimless::model::{Family, PotentialSpec};
use dimless::report::{
    emit_figure_data, oracle_check, paired_record, run_partner_sweep, run_sweep, write_rows, FigureId, OutputFormat,
    ReportRow, SweepConfig,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_ORACLE: u8 = 3;

/// Dimensionless uncertainty products for power-law and box potentials.
#[derive(Parser)]
#[command(name = "dimless", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every state 0..=n of one potential
    Spectrum {
        #[arg(long, default_value = "symmetric-power")]
        family: Family,
        /// Power-law exponent (ignored for boxes)
        #[arg(long, default_value_t = 2)]
        b: u32,
        /// Highest state index
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Rows for every (family, b, n) combination
    Sweep {
        /// Comma-separated families
        #[arg(long, value_delimiter = ',', default_value = "symmetric-power")]
        family: Vec<Family>,
        /// Exponents: a list `1,2,5` or an inclusive range `1..10`
        #[arg(long, default_value = "1..10")]
        b: String,
        /// State indices, same syntax as --b
        #[arg(long, default_value = "0")]
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Data behind one figure panel (F1a..F1d, F2a..F2d, F3a, F3b, SUPP)
    Figure {
        id: FigureId,
        #[command(flatten)]
        common: Common,
    },
    /// Analytic-versus-numeric self-checks
    OracleCheck {
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_C_LAMBDA)]
        c_lambda: f64,
    },
    /// Supersymmetric partners of the symmetric power family
    Susy {
        /// Exponents, same syntax as `sweep --b`
        #[arg(long, default_value = "1..4")]
        b: String,
        /// Number of partner levels (at most 5)
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_C_LAMBDA)]
    c_lambda: f64,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

impl Common {
    fn solver(&self) -> SolverConfig {
        solver(self.points, self.c_lambda)
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn solver(points: usize, c_lambda: f64) -> SolverConfig {
    SolverConfig {
        points,
        c_lambda,
        max_iterations: DEFAULT_MAX_ITERATIONS,
    }
}

enum Failure {
    Config(String),
    Solver(String),
    Oracle(usize),
}

impl From<dimless::Error> for Failure {
    fn from(e: dimless::Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

/// Parses `3`, `1,2,5` or the inclusive range `1..10`.
fn parse_list(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::Config(format!("cannot parse {s:?} as a list or range"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(Failure::Config(format!("empty range {s:?}")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn write_report(rows: &[ReportRow], common: &Common) -> Result<(), Failure> {
    let mut out = common.sink()?;
    write_rows(rows, common.format.into(), &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { family, b, n, common } => {
            let spec = PotentialSpec::new(family, b as i64)?;
            let spectrum = solve(&spec, n, &common.solver())?;
            let rows = (0..=n)
                .map(|k| ReportRow::from_record(family.name(), &paired_record(&spec, &spectrum, k)?))
                .collect::<dimless::Result<Vec<_>>>()?;
            write_report(&rows, &common)
        }
        Command::Sweep { family, b, n, common } => {
            let config = SweepConfig {
                families: family,
                b_values: parse_list(&b)?,
                n_values: parse_list(&n)?.into_iter().map(|k| k as usize).collect(),
                solver: common.solver(),
            };
            for w in config.validate()? {
                eprintln!("warning: {w}");
            }
            let rows = run_sweep(&config)?;
            write_report(&rows, &common)
        }
        Command::Figure { id, common } => {
            let data = emit_figure_data(id, &common.solver())?;
            let mut out = common.sink()?;
            data.write(common.format.into(), &mut out)?;
            out.flush()?;
            Ok(())
        }
        Command::OracleCheck { points, c_lambda } => {
            let report = oracle_check(&solver(points, c_lambda));
            let mut out = io::stdout().lock();
            report.write_table(&mut out)?;
            match report.failures() {
                0 => Ok(()),
                k => Err(Failure::Oracle(k)),
            }
        }
        Command::Susy { b, levels, common } => {
            let rows = run_partner_sweep(&parse_list(&b)?, levels, &common.solver())?;
            write_report(&rows, &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
        Err(Failure::Oracle(count)) => {
            eprintln!("{count} oracle checks failed");
            ExitCode::from(EXIT_ORACLE)
        }
    }
}
