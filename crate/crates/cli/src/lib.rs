//! Command line front end for `homleib-core`: JSON documents, reports and
//! the `homleib` subcommands.
//!
//! Exit status is 0 when every check passes, 1 on a mathematical failure
//! (violated identities, an obstructed extension, a coboundary that does not
//! square to zero) and 2 on bad input or usage.

pub mod commands;
pub mod doc;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homleib_core::SignConvention;

pub use report::{Format, Report, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] homleib_core::Error),
}

/// Inclusive degree range, written `2`, `1..3` or `1..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub lo: usize,
    pub hi: usize,
}

impl std::str::FromStr for Degrees {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a degree"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => (num(s)?, num(s)?),
        };
        if lo == 0 {
            return Err("degree 0 is not part of the complex; degrees start at 1".into());
        }
        if hi < lo {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(Degrees { lo, hi })
    }
}

fn parse_convention(s: &str) -> Result<SignConvention, String> {
    s.parse::<SignConvention>().map_err(|e| format!("{e}"))
}

#[derive(Debug, Parser)]
#[command(name = "homleib", version, about = "Exact cohomology and deformations of n-Hom-Leibniz algebras and their morphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Sign convention id for the coboundary (expert override).
    #[arg(long, global = true, value_parser = parse_convention)]
    pub convention: Option<SignConvention>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of an algebra, and optionally of a morphism out of it
    /// or a representation of it.
    Validate {
        algebra: PathBuf,
        /// Morphism document; its source and target default to ALGEBRA.
        morphism: Option<PathBuf>,
        /// Representation document to check against ALGEBRA.
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Dimensions of cochains, coboundary ranks and cohomology.
    Cohomology {
        algebra: PathBuf,
        /// `adjoint` or a representation document.
        #[arg(long, default_value = "adjoint")]
        module: String,
        #[arg(long, default_value = "1..2")]
        degrees: Degrees,
    },
    /// Cohomology of the deformation complex of a morphism. Takes either
    /// `MORPHISM` (source and target from its references) or `SOURCE TARGET
    /// MORPHISM`.
    MorphismCohomology {
        #[arg(num_args = 1..=3, required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "1..2")]
        degrees: Degrees,
    },
    /// Order-by-order checks, obstructions and extensions of a morphism
    /// deformation.
    Deform {
        action: DeformAction,
        deformation: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
        /// Enumeration of the restricted sum in the third obstruction
        /// component.
        #[arg(long, value_enum, default_value_t = SumMode::Set)]
        sum: SumMode,
        /// For `extend`: write the extended deformation document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeformAction {
    Check,
    Obstruct,
    Extend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SumMode {
    Set,
    ThreeSums,
}

/// What a run prints and returns.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("homleib")).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::execute(&cli, echo) {
        Ok(report) => Outcome { stdout: report.render(cli.common.format), stderr: String::new(), code: report.status.exit_code() },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!("2".parse::<Degrees>(), Ok(Degrees { lo: 2, hi: 2 }));
        assert_eq!("1..3".parse::<Degrees>(), Ok(Degrees { lo: 1, hi: 3 }));
        assert_eq!("1..=3".parse::<Degrees>(), Ok(Degrees { lo: 1, hi: 3 }));
        assert!("0..2".parse::<Degrees>().is_err());
        assert!("3..1".parse::<Degrees>().is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run(["cohomology", "x.json", "--degrees", "0"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("degree 0"), "{}", out.stderr);
        assert_eq!(run(["cohomology", "missing.json"]).code, 2);
    }
}
