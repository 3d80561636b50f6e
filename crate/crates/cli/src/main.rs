use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use yukawa_core::report::{self, ComparisonRow, Format, RegimeName, Screening, UnitRegime};
use yukawa_core::StateLabel;

const EXIT_GOLDEN: u8 = 1;
const EXIT_ORACLE: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Bound-state energies of the screened Coulomb potential -(A/r)exp(-alpha r).
#[derive(Parser)]
#[command(name = "yukawa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy breakdown for one state.
    State {
        #[command(flatten)]
        units: UnitArgs,
        #[arg(long = "A")]
        coupling: Option<f64>,
        #[command(flatten)]
        screening: ScreeningArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        ell: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce comparison table 1, 2 or 3.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every combination of the listed parameters.
    Sweep {
        #[command(flatten)]
        units: UnitArgs,
        #[arg(long = "A", value_delimiter = ',')]
        coupling: Vec<f64>,
        #[arg(long, value_delimiter = ',', conflicts_with = "g")]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        g: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        ell: Vec<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample chi and psi on a uniform radial grid, as CSV.
    Wavefunction {
        #[command(flatten)]
        units: UnitArgs,
        #[arg(long = "A")]
        coupling: Option<f64>,
        #[command(flatten)]
        screening: ScreeningArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        ell: u32,
        #[arg(long = "r-max")]
        r_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// 0 for the Coulomb function alone, 2 for the corrected one.
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
}

#[derive(Args)]
struct UnitArgs {
    #[arg(long, value_enum, default_value_t = RegimeArg::Custom)]
    regime: RegimeArg,
    /// Only with --regime custom.
    #[arg(long)]
    hbar: Option<f64>,
    /// Only with --regime custom.
    #[arg(long)]
    mass: Option<f64>,
}

#[derive(Args)]
#[group(multiple = false)]
struct ScreeningArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Screening as g = alpha/A.
    #[arg(long)]
    g: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Also solve each state with the Numerov shooting oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Absolute tolerance against printed values (default: half a printed unit).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Table1,
    Table23,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<yukawa_core::Error> for Failure {
    fn from(e: yukawa_core::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl UnitArgs {
    fn regime(&self) -> Result<UnitRegime, Failure> {
        let name = match self.regime {
            RegimeArg::Table1 => RegimeName::Table1,
            RegimeArg::Table23 => RegimeName::Table23,
            RegimeArg::Custom => RegimeName::Custom,
        };
        if name != RegimeName::Custom && (self.hbar.is_some() || self.mass.is_some()) {
            return Err(usage("--hbar and --mass are fixed by table regimes; use --regime custom"));
        }
        let mut regime = UnitRegime::by_name(name);
        if let Some(h) = self.hbar {
            regime.hbar = h;
        }
        if let Some(m) = self.mass {
            regime.mass = m;
        }
        Ok(regime)
    }
}

impl ScreeningArgs {
    fn screening(&self) -> Option<Screening> {
        match (self.alpha, self.g) {
            (Some(a), _) => Some(Screening::Alpha(a)),
            (None, Some(g)) => Some(Screening::G(g)),
            (None, None) => None,
        }
    }
}

fn finish(rows: &[ComparisonRow], output: &OutputArgs) -> Result<(), Failure> {
    let text = report::emit(rows, output.format.into())?;
    print!("{text}");
    for r in rows {
        if let Some(e) = r.oracle_error() {
            eprintln!("oracle failed: {e}");
        }
    }
    let verdict = report::verdict(rows, output.tol);
    if verdict.golden_failures > 0 {
        return Err(Failure {
            code: EXIT_GOLDEN,
            message: format!(
                "{} row(s) deviate from the printed values beyond tolerance",
                verdict.golden_failures
            ),
        });
    }
    if verdict.oracle_failures > 0 {
        return Err(Failure {
            code: EXIT_ORACLE,
            message: format!("{} oracle solve(s) failed", verdict.oracle_failures),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::State {
            units,
            coupling,
            screening,
            n,
            ell,
            output,
        } => {
            let row = report::compute_state(
                units.regime()?,
                coupling,
                screening.screening(),
                StateLabel::new(n, ell),
                output.oracle,
            )?;
            finish(&[row], &output)
        }
        Command::Table { id, output } => {
            let rows = report::reproduce_table(id, output.oracle)?;
            finish(&rows, &output)
        }
        Command::Sweep {
            units,
            coupling,
            alpha,
            g,
            n,
            ell,
            output,
        } => {
            let regime = units.regime()?;
            let couplings: Vec<Option<f64>> = if coupling.is_empty() {
                vec![None]
            } else {
                coupling.into_iter().map(Some).collect()
            };
            let screenings: Vec<Option<Screening>> = match (alpha.is_empty(), g.is_empty()) {
                (true, true) => vec![None],
                (false, _) => alpha.into_iter().map(|a| Some(Screening::Alpha(a))).collect(),
                (true, false) => g.into_iter().map(|g| Some(Screening::G(g))).collect(),
            };
            let mut rows = Vec::new();
            for &a in &couplings {
                for &s in &screenings {
                    for &l in &ell {
                        for &k in &n {
                            rows.push(report::compute_state(regime, a, s, StateLabel::new(k, l), output.oracle)?);
                        }
                    }
                }
            }
            finish(&rows, &output)
        }
        Command::Wavefunction {
            units,
            coupling,
            screening,
            n,
            ell,
            r_max,
            points,
            order,
        } => {
            let ctx = units.regime()?.context(coupling, screening.screening())?;
            let samples = report::sample_wavefunction(&ctx, StateLabel::new(n, ell), r_max, points, order)?;
            print!("{}", report::wavefunction_csv(&samples));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
