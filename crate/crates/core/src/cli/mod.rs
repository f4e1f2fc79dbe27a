//! The `wzgain` command line.
//!
//! Every subcommand takes the same flag set; a subcommand rejects flags it
//! does not read. `sweep <command>` evaluates another subcommand over a grid
//! of up to two ranged parameters and writes CSV.
//!
//! Exit status: 0 on success, 2 for invalid parameters, input files or
//! infeasible targets, 3 when a witness search is exhausted, 1 for I/O
//! failures.

pub mod commands;
pub mod params;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use commands::{evaluate, Command, Outcome};
pub use report::{Format, RunReport};

use crate::error::{Error, Result};
use params::{is_ranged, parse_range, FILE_PARAMETERS, MAX_SWEEP_POINTS, PARAMETERS};
use report::{csv_number, write_csv};

#[derive(Debug, Parser)]
#[command(
    name = "wzgain",
    version,
    about = "One- and two-message rate-distortion computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// One-message rate at distortion D by grid search over test channels
    WzRate,
    /// Exact one-message rate reduction of a binary source under erasure distortion
    Rho1,
    /// Check whether interaction strictly helps at (p, q, alpha0e)
    GainDetect,
    /// Search p for a certificate that interaction strictly helps
    GainSearch,
    /// Rates of the explicit two-message erasure scheme
    TwoMsg,
    /// Search for scheme parameters with sum-rate ratio above L
    RatioSearch,
    /// h(slope * p) / h(p)
    EntropyRatio,
    /// Evaluate another subcommand over ranged parameters, as CSV
    Sweep {
        /// Subcommand to evaluate at each grid point
        target: String,
    },
    /// Recompute the headline example, its limits and witnesses
    ReproducePaper,
}

#[derive(Debug, Args)]
struct Flags {
    /// Crossover probability of the source (X = Y + BSC(p) noise)
    #[arg(long, global = true, allow_hyphen_values = true)]
    p: Option<String>,
    /// Bernoulli parameter of Y, or crossover of the first message's channel
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    /// Erasure probability of X = 0
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha0e: Option<String>,
    /// Erasure probability of the two-message scheme
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Distortion target D
    #[arg(long, global = true, allow_hyphen_values = true)]
    distortion: Option<String>,
    /// Doubly symmetric binary source with crossover p
    #[arg(long = "dsbs-p", global = true, allow_hyphen_values = true)]
    dsbs_p: Option<String>,
    /// JSON file with the joint pmf of (X, Y)
    #[arg(long, global = true, value_name = "FILE")]
    joint: Option<String>,
    /// JSON file with the distortion matrix (default: erasure distortion)
    #[arg(long, global = true, value_name = "FILE")]
    dist: Option<String>,
    /// Grid steps per probability unit for the one-message oracle
    #[arg(long = "grid-res", global = true, allow_hyphen_values = true)]
    grid_res: Option<String>,
    /// Refinement rounds for the one-message oracle
    #[arg(long, global = true, allow_hyphen_values = true)]
    refine: Option<String>,
    /// Absolute margin a certified gap must exceed
    #[arg(long, global = true, allow_hyphen_values = true)]
    margin: Option<String>,
    /// Target sum-rate ratio
    #[arg(long = "L", global = true, allow_hyphen_values = true)]
    l: Option<String>,
    /// Slope of the entropy ratio check (default 2)
    #[arg(long, global = true, allow_hyphen_values = true)]
    slope: Option<String>,
    /// Output format (default text; sweeps always write CSV)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Flags {
    fn into_params(self) -> BTreeMap<String, String> {
        let values = [
            self.p,
            self.q,
            self.alpha0e,
            self.alpha,
            self.distortion,
            self.dsbs_p,
            self.joint,
            self.dist,
            self.grid_res,
            self.refine,
            self.margin,
            self.l,
            self.slope,
        ];
        PARAMETERS
            .iter()
            .zip(values)
            .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandRequest {
    pub command: Command,
    /// For `sweep`, the subcommand evaluated at each point.
    pub target: Option<Command>,
    /// Parameter name (flag without dashes) to its text.
    pub params: BTreeMap<String, String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Outcome of argument parsing that is not a request.
#[derive(Debug)]
pub enum ParseExit {
    /// `--help` or `--version`: print and exit successfully.
    Info(String),
    /// Usage error, as a one-line message.
    Usage(String),
}

impl CommandRequest {
    pub fn new(command: Command, params: BTreeMap<String, String>) -> Self {
        Self {
            command,
            target: None,
            params,
            format: None,
            out: None,
        }
    }

    pub fn parse_from<I, T>(args: I) -> std::result::Result<Self, ParseExit>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseExit::Info(e.to_string()),
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand | ErrorKind::MissingSubcommand => {
                    ParseExit::Usage("error: missing subcommand (see --help)".into())
                }
                _ => ParseExit::Usage(first_line(&e.to_string())),
            }
        })?;
        let (command, target) = match cli.command {
            Sub::WzRate => (Command::WzRate, None),
            Sub::Rho1 => (Command::Rho1, None),
            Sub::GainDetect => (Command::GainDetect, None),
            Sub::GainSearch => (Command::GainSearch, None),
            Sub::TwoMsg => (Command::TwoMsg, None),
            Sub::RatioSearch => (Command::RatioSearch, None),
            Sub::EntropyRatio => (Command::EntropyRatio, None),
            Sub::ReproducePaper => (Command::ReproducePaper, None),
            Sub::Sweep { target } => match Command::from_name(&target) {
                Some(t) if t != Command::Sweep && t != Command::ReproducePaper => (Command::Sweep, Some(t)),
                _ => return Err(ParseExit::Usage(format!("error: `{target}` cannot be swept"))),
            },
        };
        Ok(Self {
            command,
            target,
            format: cli.flags.format,
            out: cli.flags.out.clone(),
            params: cli.flags.into_params(),
        })
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("error")
        .trim()
        .to_string()
}

/// Runs a non-sweep request.
pub fn dispatch(request: &CommandRequest) -> Result<RunReport> {
    if request.command == Command::Sweep {
        return Err(Error::format("sweep", "use `sweep` to evaluate ranged parameters"));
    }
    let start = Instant::now();
    let outcome = evaluate(request.command, &request.params)?;
    Ok(RunReport::new(
        request.command.name(),
        outcome,
        start.elapsed().as_secs_f64(),
    ))
}

/// Evaluates `target` at every point of the grid spanned by the ranged
/// parameters and returns the CSV text. Rows follow the nesting order of the
/// flags, first ranged flag outermost.
pub fn sweep(target: Command, raw: &BTreeMap<String, String>) -> Result<String> {
    if matches!(target, Command::Sweep | Command::ReproducePaper) {
        return Err(Error::format("sweep", format!("`{}` cannot be swept", target.name())));
    }
    let mut axes: Vec<(String, Vec<String>)> = Vec::new();
    for name in PARAMETERS {
        let Some(text) = raw.get(name) else { continue };
        if is_ranged(text) {
            if FILE_PARAMETERS.contains(&name) {
                return Err(Error::format(format!("--{name}"), "file parameters cannot be swept"));
            }
            axes.push((name.to_string(), parse_range(name, text)?));
        }
    }
    if axes.len() > 2 {
        return Err(Error::format(
            format!("--{}", axes[2].0),
            "at most two parameters can be ranged",
        ));
    }
    let points = axes.iter().try_fold(1usize, |acc, (_, v)| acc.checked_mul(v.len()));
    if points.is_none_or(|n| n > MAX_SWEEP_POINTS) {
        return Err(Error::format(
            "sweep",
            format!("grid exceeds {MAX_SWEEP_POINTS} points"),
        ));
    }

    let (results, verdicts) = target.columns();
    let mut header: Vec<&str> = axes.iter().map(|(n, _)| n.as_str()).collect();
    header.extend(results);
    header.extend(verdicts);

    let mut rows = Vec::new();
    let mut point = raw.clone();
    let mut index = vec![0usize; axes.len()];
    let total = points.unwrap_or(0);
    for _ in 0..total {
        for (axis, &i) in axes.iter().zip(&index) {
            point.insert(axis.0.clone(), axis.1[i].clone());
        }
        let outcome = evaluate(target, &point)?;
        let mut row: Vec<String> = axes.iter().zip(&index).map(|(axis, &i)| axis.1[i].clone()).collect();
        row.extend(outcome.results.iter().map(|r| csv_number(r.1)));
        row.extend(outcome.verdicts.iter().map(|v| v.1.to_string()));
        rows.push(row);
        // odometer, last axis fastest
        for k in (0..axes.len()).rev() {
            index[k] += 1;
            if index[k] < axes[k].1.len() {
                break;
            }
            index[k] = 0;
        }
    }
    write_csv(&header, rows)
}

/// Renders the output of `request` without writing it anywhere.
pub fn execute(request: &CommandRequest) -> Result<String> {
    match request.command {
        Command::Sweep => {
            if matches!(request.format, Some(Format::Text | Format::Json)) {
                return Err(Error::format("--format", "sweeps write CSV only"));
            }
            let target = request
                .target
                .ok_or_else(|| Error::format("sweep", "missing subcommand to sweep"))?;
            sweep(target, &request.params)
        }
        _ => dispatch(request)?.render(request.format.unwrap_or(Format::Text)),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 1,
        Error::SearchExhausted(_) => 3,
        Error::Domain { .. }
        | Error::InvalidPmf { .. }
        | Error::Dimension(_)
        | Error::Infeasible(_)
        | Error::Format { .. } => 2,
    }
}

/// Parses `args`, runs the request and writes the output. Returns the process
/// exit status. Output is written only after the whole computation succeeds.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let request = match CommandRequest::parse_from(args) {
        Ok(r) => r,
        Err(ParseExit::Info(text)) => {
            print!("{text}");
            return 0;
        }
        Err(ParseExit::Usage(line)) => {
            eprintln!("{line}");
            return 2;
        }
    };
    let written = execute(&request).and_then(|text| match &request.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Error::from)
        }
    });
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", first_line(&e.to_string()));
            exit_code(&e)
        }
    }
}
