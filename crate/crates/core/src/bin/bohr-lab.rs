use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bohr_lab::extremal::{self, ExtremalParams};
use bohr_lab::report::{self, Format, MajorantRecord, Table};
use bohr_lab::{BoundKind, Error, Normalization, RadiusProblem};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bohr-lab",
    version,
    about = "Bohr-type radii and majorants for averaging operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a radius equation.
    Radius {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a majorant of the extremal family at one point.
    Majorant {
        #[command(flatten)]
        operator: OperatorArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = NormalizationArg::PerIndex)]
        normalization: NormalizationArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sharpness margins of the extremal family over an (a, rho) grid.
    Sweep {
        #[command(flatten)]
        operator: OperatorArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// `lo:hi:n` or a comma-separated list.
        #[arg(long)]
        a_grid: String,
        /// `lo:hi:n` or a comma-separated list.
        #[arg(long)]
        rho_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the figure data files into a directory.
    Figures {
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long, value_enum)]
    operator: OperatorArg,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    CesaroTh1,
    CesaroOmega,
    BernardiTh2,
    BernardiThc,
    BernardiOmega,
    Dft,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Cesaro,
    Bernardi,
    Dft,
    Bohr,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    PerIndex,
    PerOuter,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Contract(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn require_beta(beta: Option<f64>) -> Result<f64, Failure> {
    beta.ok_or_else(|| Failure::Usage("--beta is required for this problem".into()))
}

fn problem(
    arg: ProblemArg,
    gamma: f64,
    beta: Option<f64>,
    m: u32,
) -> Result<RadiusProblem, Failure> {
    Ok(match arg {
        ProblemArg::CesaroTh1 => RadiusProblem::Cesaro,
        ProblemArg::CesaroOmega => RadiusProblem::CesaroUnitDisk { gamma },
        ProblemArg::BernardiTh2 => RadiusProblem::Bernardi {
            beta: require_beta(beta)?,
        },
        ProblemArg::BernardiThc => RadiusProblem::BernardiVanishing {
            beta: require_beta(beta)?,
            m,
        },
        ProblemArg::BernardiOmega => RadiusProblem::BernardiUnitDisk {
            gamma,
            beta: require_beta(beta)?,
        },
        ProblemArg::Dft => RadiusProblem::Dft,
    })
}

fn operator(args: &OperatorArgs) -> Result<BoundKind, Failure> {
    Ok(match args.operator {
        OperatorArg::Cesaro => BoundKind::Cesaro,
        OperatorArg::Bernardi => BoundKind::bernardi(require_beta(args.beta)?)?,
        OperatorArg::Dft => BoundKind::Dft,
        OperatorArg::Bohr => BoundKind::PlainBohr,
    })
}

fn parse_grid(name: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("invalid --{name} '{text}'"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => Ok(vec![lo]),
                _ => Ok((0..n)
                    .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
                    .collect()),
            }
        }
        [_] => text.split(',').map(number).collect(),
        _ => Err(bad()),
    }
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Radius {
            problem: arg,
            gamma,
            beta,
            m,
            output,
        } => {
            let record = report::solve_record(problem(arg, gamma, beta, m)?)?;
            write_output(&record.render(output.format.into()), output.out.as_deref())
        }
        Command::Majorant {
            operator: op,
            gamma,
            a,
            rho,
            tol,
            normalization,
            output,
        } => {
            let kind = operator(&op)?;
            let normalization = match normalization {
                NormalizationArg::PerIndex => Normalization::PerIndex,
                NormalizationArg::PerOuter => Normalization::PerOuter,
            };
            if normalization == Normalization::PerOuter && kind != BoundKind::Dft {
                return Err(Failure::Usage(
                    "--normalization applies to the dft operator only".into(),
                ));
            }
            if tol.is_nan() || tol <= 0.0 {
                return Err(Failure::Usage("--tol must be positive".into()));
            }
            let params = ExtremalParams::new(a, gamma)?;
            let record = MajorantRecord::evaluate(kind, params, rho, tol, normalization)?;
            write_output(&record.render(output.format.into()), output.out.as_deref())
        }
        Command::Sweep {
            operator: op,
            gamma,
            a_grid,
            rho_grid,
            output,
        } => {
            let kind = operator(&op)?;
            let a_grid = parse_grid("a-grid", &a_grid)?;
            let rho_grid = parse_grid("rho-grid", &rho_grid)?;
            let table = extremal::sweep_margins(kind, gamma, &a_grid, &rho_grid)?;
            write_output(&table.render(output.format.into()), output.out.as_deref())
        }
        Command::Verify { seed, output } => {
            let report = report::run_verification(seed)?;
            write_output(&report.render(output.format.into()), output.out.as_deref())?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Command::Figures {
            out,
            samples,
            format,
        } => {
            if samples < 2 {
                return Err(Failure::Usage("--samples must be at least 2".into()));
            }
            std::fs::create_dir_all(&out)?;
            let format: Format = format.into();
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let figures = [
                report::figure_circles(),
                report::figure_concavity(samples),
                report::figure_radius_equation(samples),
            ];
            for fig in &figures {
                report::emit_table(fig, format, &out.join(format!("{}.{ext}", fig.name)))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Failure::Verify) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
