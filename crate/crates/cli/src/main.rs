mod commands;
mod error;
mod gallery;
mod render;
mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{rational_arg, read_json, Report};
use error::{CliError, EXIT_USAGE, EXIT_VALIDATION};
use okounkov::Rational;

#[derive(Parser, Debug)]
#[command(name = "okounkov", version, about = "Exact Newton–Okounkov bodies, volumes and slices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(clap::Args, Debug)]
struct Io {
    /// JSON input document
    #[arg(long)]
    input: PathBuf,
    /// Output file (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct Params {
    /// Single parameter value, e.g. 1/3
    #[arg(long, value_parser = rational_arg)]
    t: Option<Rational>,
    /// Comma-separated parameter values, e.g. 0,1/4,1/2
    #[arg(long, value_parser = rational_arg, value_delimiter = ',')]
    grid: Option<Vec<Rational>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convex hull of a point set: vertices, facets, volume
    Hull {
        #[command(flatten)]
        io: Io,
    },
    /// Body of a graded semigroup from its first slices
    SemigroupBody {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m_max: u64,
    },
    /// Slice counts #S_m / m^d against the body volume
    SemigroupDensity {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m_max: u64,
    },
    /// Volume gap of the semigroup generated by one slice
    SemigroupFujita {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
    },
    /// Translate of the cone contained in a finitely generated semigroup
    SemigroupTranslate {
        #[command(flatten)]
        io: Io,
    },
    /// Body of a monomial linear series
    MonomialBody {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m_max: u64,
    },
    /// Colength and multiplicity ratios of a family of monomial ideals
    MonomialMult {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m_max: u64,
    },
    /// Body of a toric divisor for a chosen flag
    ToricBody {
        #[command(flatten)]
        io: Io,
    },
    /// Lattice point counts and Ehrhart polynomial of a toric divisor
    ToricCount {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m_max: u64,
    },
    /// Zariski decomposition and volume of a surface class
    SurfaceZariski {
        #[command(flatten)]
        io: Io,
    },
    /// Body of a surface class for a curve flag
    SurfaceBody {
        #[command(flatten)]
        io: Io,
    },
    /// Check slices of a surface body at given parameters
    SurfaceSlice {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        params: Params,
    },
    /// One-sided derivatives of the volume along the flag curve
    SurfaceDerivative {
        #[command(flatten)]
        io: Io,
    },
    /// Slope function of the classical non-polyhedral example
    Cutkosky {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        params: Params,
    },
    /// Write the figure data set into a directory
    Gallery {
        #[arg(long)]
        output: PathBuf,
    },
    /// Check an input document against a schema and its invariants
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// surface-model, fan or semigroup
        #[arg(long)]
        schema: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render(report: Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(pretty(&report.json)),
        Format::Csv => report
            .table
            .ok_or_else(|| CliError::validation("this command has no tabular output; use --format json"))?
            .to_csv(),
        Format::Svg => Ok(report
            .polygon
            .ok_or_else(|| CliError::validation("SVG output needs a 2-dimensional body"))?
            .to_svg()),
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    use commands as c;
    let (io, report) = match cmd {
        Command::Gallery { output } => {
            let index = gallery::gallery(&output)?;
            return emit(None, &pretty(&index));
        }
        Command::Validate { input, schema, output } => {
            let checks = validate::validate(&read_json(&input)?, &schema)?;
            return emit(output.as_ref(), &pretty(&checks.to_json(&schema)));
        }
        Command::Hull { io } => {
            let r = c::hull(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::SemigroupBody { io, m_max } => {
            let r = c::semigroup_body(&read_json(&io.input)?, m_max)?;
            (io, r)
        }
        Command::SemigroupDensity { io, m_max } => {
            let r = c::semigroup_density(&read_json(&io.input)?, m_max)?;
            (io, r)
        }
        Command::SemigroupFujita { io, p, k } => {
            let r = c::semigroup_fujita(&read_json(&io.input)?, p, k)?;
            (io, r)
        }
        Command::SemigroupTranslate { io } => {
            let r = c::semigroup_translate(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::MonomialBody { io, m_max } => {
            let r = c::monomial_body(&read_json(&io.input)?, m_max)?;
            (io, r)
        }
        Command::MonomialMult { io, m_max } => {
            let r = c::monomial_mult(&read_json(&io.input)?, m_max)?;
            (io, r)
        }
        Command::ToricBody { io } => {
            let r = c::toric_body(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::ToricCount { io, m_max } => {
            let r = c::toric_count(&read_json(&io.input)?, m_max)?;
            (io, r)
        }
        Command::SurfaceZariski { io } => {
            let r = c::surface_zariski(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::SurfaceBody { io } => {
            let r = c::surface_body(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::SurfaceSlice { io, params } => {
            let r = c::surface_slice(&read_json(&io.input)?, params.t, params.grid)?;
            (io, r)
        }
        Command::SurfaceDerivative { io } => {
            let r = c::surface_derivative(&read_json(&io.input)?)?;
            (io, r)
        }
        Command::Cutkosky { io, params } => {
            let r = c::cutkosky(&read_json(&io.input)?, params.t, params.grid)?;
            (io, r)
        }
    };
    emit(io.output.as_ref(), &render(report, io.format)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.to_json()).expect("serializable"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
