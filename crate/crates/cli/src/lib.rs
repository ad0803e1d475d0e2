//! Command-line front end: spectral sequence pages, A∞-models, identity
//! checks and structure comparisons for presentations and built-in fixtures.
//!
//! [`run`] does all the work and returns the text and exit status, so tests
//! can drive the tool in-process.

mod commands;
mod load;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use load::{ModelKind, Source};

#[derive(Parser, Debug)]
#[command(name = "fainf", version, about = "Filtered A-infinity structures on spectral sequence pages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension grids and class labels of the pages E_r.
    Pages {
        #[command(flatten)]
        source: SourceArgs,
        /// Last page to print; defaults to the degeneration page.
        #[arg(long = "max-page", value_name = "R")]
        max_page: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Structure constants of a transferred A∞-structure.
    Model {
        #[command(flatten)]
        source: SourceArgs,
        /// er-minimal, dolbeault, hodge-de-rham or page, optionally with a `:R` suffix.
        #[arg(long, default_value = "er-minimal", value_name = "KIND")]
        kind: String,
        /// Page number used when `--kind` has no `:R` suffix.
        #[arg(long, value_name = "R")]
        r: Option<usize>,
        /// Highest arity of the operations ν_k.
        #[arg(long, default_value_t = 4, value_name = "K")]
        arity: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Validation, A∞ identities, filtration windows and, for mixed Hodge inputs, strictness.
    Check {
        #[command(flatten)]
        source: SourceArgs,
        /// Highest arity of the operations ν_k.
        #[arg(long, default_value_t = 4, value_name = "K")]
        arity: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Side-by-side differences of two or more structures on the same basis.
    ///
    /// Each `--kind` is `KIND` or `KIND:R`; `--r` is the default `R`.
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        /// A structure to compare; give it at least twice.
        #[arg(long = "kind", value_name = "KIND[:R]", required = true, num_args = 1)]
        kinds: Vec<String>,
        /// Page number used when `--kind` has no `:R` suffix.
        #[arg(long, value_name = "R")]
        r: Option<usize>,
        /// Highest arity of the operations ν_k.
        #[arg(long, default_value_t = 4, value_name = "K")]
        arity: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixturesCommand {
    /// Names, fields and descriptions of the built-in fixtures.
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Built-in fixture (see `fainf fixtures list`).
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
    /// Presentation document (JSON).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Table)]
    pub emit: Emit,
    /// Write the output to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandName {
    Pages,
    Model,
    Check,
    Compare,
    FixturesList,
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: CommandName,
    pub source: Option<Source>,
    pub max_page: Option<usize>,
    pub arity: usize,
    pub kinds: Vec<ModelKind>,
    pub emit: Emit,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let base = |command, output: OutputArgs| RunConfig {
            command,
            source: None,
            max_page: None,
            arity: 4,
            kinds: vec![],
            emit: output.emit,
            out: output.out,
        };
        let config = match cli.command {
            Command::Pages { source, max_page, output } => {
                RunConfig { source: Some(source.into()), max_page, ..base(CommandName::Pages, output) }
            }
            Command::Model { source, kind, r, arity, output } => RunConfig {
                source: Some(source.into()),
                arity,
                kinds: vec![ModelKind::parse(&kind, r)?],
                ..base(CommandName::Model, output)
            },
            Command::Check { source, arity, output } => {
                RunConfig { source: Some(source.into()), arity, ..base(CommandName::Check, output) }
            }
            Command::Compare { source, kinds, r, arity, output } => {
                if kinds.len() < 2 {
                    return Err(CliError::Usage("compare needs at least two --kind values".into()));
                }
                let kinds = kinds.iter().map(|k| ModelKind::parse(k, r)).collect::<Result<_, _>>()?;
                RunConfig { source: Some(source.into()), arity, kinds, ..base(CommandName::Compare, output) }
            }
            Command::Fixtures { command: FixturesCommand::List { output } } => base(CommandName::FixturesList, output),
        };
        if config.arity < 2 {
            return Err(CliError::Usage("--arity must be at least 2".into()));
        }
        Ok(config)
    }
}

impl From<SourceArgs> for Source {
    fn from(s: SourceArgs) -> Self {
        match (s.fixture, s.input) {
            (Some(name), _) => Source::Fixture(name),
            (None, Some(path)) => Source::Input(path),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<fainf_core::Error> for CliError {
    fn from(e: fainf_core::Error) -> Self {
        use fainf_core::Error as E;
        match e {
            E::Invariant(_) => CliError::Internal(e.to_string()),
            E::UnknownFixture(_) | E::Precondition(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// Text produced by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    execute(&config)
}

/// Runs a validated configuration, writing to `--out` when given.
pub fn execute(config: &RunConfig) -> Outcome {
    let (code, text) = match commands::dispatch(config) {
        Ok(r) => (r.code, r.text),
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    match &config.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => {
                let e = CliError::Io(format!("{}: {e}", path.display()));
                Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") }
            }
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}
