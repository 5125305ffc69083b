use clap::{Args, Parser, Subcommand, ValueEnum};
use mal::family::{example_family, ExampleParams, Family, Property};
use mal::scalar::{parse_rational, Rational};
use std::fmt;
use std::path::{Path, PathBuf};

/// Seed used by randomized sweeps when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_611;
pub const MAX_DEPTH: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "mal", version, about = "Exact finite-stage checks for Rademacher families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check (R1)-(R4) at a depth and write a property report.
    Verify(RunConfig),
    /// Dyadic measures of particles, or of one element with --element.
    Measure(RunConfig),
    /// Haar system table and, with --step, the expansion of a step element.
    Haar(RunConfig),
    /// Integrate a step element (--step) or the lazy geometric example.
    Integrate(RunConfig),
    /// Build the finite probability-space representation.
    Represent(RunConfig),
    /// List builtin examples, or dump one as a family file.
    Examples(RunConfig),
    /// Write a directory of report artifacts.
    Report(RunConfig),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Family file (JSON).
    #[arg(long, value_name = "PATH", conflicts_with = "example")]
    pub family: Option<PathBuf>,
    /// Builtin example name; see `mal examples`.
    #[arg(long, value_name = "NAME")]
    pub example: Option<String>,
    #[arg(long, value_name = "N")]
    pub depth: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Positive rational such as `1/1024` or `1/2^40`.
    #[arg(long, value_name = "Q", default_value = "1/2^20")]
    pub tolerance: String,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Number of generators for builtin examples.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub stage: Option<usize>,
    /// Chain length for the nonsigma report.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_name = "N")]
    pub haar_depth: Option<usize>,
    /// Comma-separated subset of r1,r2,r3,r4.
    #[arg(long, default_value = "r1,r2,r3,r4")]
    pub properties: String,
    /// Generator removed by the ffk4 example.
    #[arg(long)]
    pub remove: Option<u32>,
    /// Label width of the digit example.
    #[arg(long)]
    pub bits: Option<u32>,
    /// Number of atoms of the mixed example.
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Dyadic cell `LEVEL,POS` of the usual-on example.
    #[arg(long, value_name = "LEVEL,POS")]
    pub cell: Option<String>,
    /// Element file (JSON) for `measure`.
    #[arg(long, value_name = "PATH")]
    pub element: Option<PathBuf>,
    /// Step element file (JSON) for `haar` and `integrate`.
    #[arg(long, value_name = "PATH")]
    pub step: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: String, message: String },
    Lib(mal::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use mal::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Lib(E::BudgetExceeded { .. }) => 3,
            CliError::Lib(
                E::Parse(_)
                | E::InvalidParams(_)
                | E::UnknownExample(_)
                | E::UnknownIndex(_)
                | E::InsufficientGenerators { .. }
                | E::IncompatibleAlgebra(_)
                | E::UnitMismatch,
            ) => 2,
            CliError::Lib(_) => 1,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<mal::Error> for CliError {
    fn from(e: mal::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl RunConfig {
    pub fn tolerance(&self) -> CliResult<Rational> {
        let t = parse_rational(&self.tolerance)?;
        if t <= Rational::from_integer(0.into()) {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        Ok(t)
    }

    pub fn properties(&self) -> CliResult<Vec<Property>> {
        self.properties.split(',').filter(|s| !s.trim().is_empty()).map(|s| Ok(s.parse()?)).collect()
    }

    pub fn example_name(&self) -> &str {
        self.example.as_deref().unwrap_or("usual")
    }

    pub fn params(&self) -> CliResult<ExampleParams> {
        let gamma = self.gamma.as_deref().map(parse_rational).transpose()?;
        let cell = match &self.cell {
            None => None,
            Some(c) => {
                let bad = || CliError::Usage(format!("--cell expects LEVEL,POS, got {c:?}"));
                let (l, p) = c.split_once(',').ok_or_else(bad)?;
                Some((l.trim().parse().map_err(|_| bad())?, p.trim().parse().map_err(|_| bad())?))
            }
        };
        Ok(ExampleParams {
            n: self.n,
            remove: self.remove,
            bits: self.bits,
            labels: None,
            atoms: self.atoms,
            gamma,
            stage: self.stage,
            cell,
        })
    }

    pub fn family(&self) -> CliResult<Family> {
        match &self.family {
            Some(path) => {
                let text = read(path)?;
                let name = path.file_stem().map_or("family".into(), |s| s.to_string_lossy().into_owned());
                Ok(Family::from_json(name, &text)?)
            }
            None => Ok(example_family(self.example_name(), &self.params()?)?),
        }
    }

    /// `--depth`, defaulting to `min(len, default)` and capped at 20.
    pub fn depth(&self, fam_len: usize, default: usize) -> CliResult<usize> {
        let d = self.depth.unwrap_or(fam_len.min(default));
        if d > MAX_DEPTH {
            return Err(CliError::Usage(format!("depth {d} exceeds {MAX_DEPTH}")));
        }
        Ok(d)
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
