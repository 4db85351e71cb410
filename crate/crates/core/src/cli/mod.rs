//! Configuration files, built-in examples, analysis orchestration and the
//! command-line interface.

pub mod analyze;
pub mod config;
pub mod fixtures;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::toricdata;
use analyze::{exit_code, AnalyzeOptions};
use config::Config;

#[derive(Debug, Parser)]
#[command(name = "mirrorcone", version, about = "Toric mirror data checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the toric-data axioms of a configuration file.
    Validate { config: PathBuf },
    /// Run the analysis pipeline and print a JSON report.
    Analyze {
        config: PathBuf,
        /// Comma-separated report sections.
        #[arg(long, value_delimiter = ',')]
        sections: Option<Vec<String>>,
        /// Compute the Koszul algebra dimensions and deformation classes.
        #[arg(long)]
        algebra: bool,
        /// z-degree cutoff for the algebra computations.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Seed for the lexicographic height perturbation.
        #[arg(long)]
        perturb: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or print the built-in example configurations.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    List,
    Show { name: String },
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn err(code: i32, stderr: String) -> Outcome {
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn load(path: &PathBuf) -> Result<Config, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Config::from_json(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn cmd_validate(path: &PathBuf) -> Outcome {
    let result = load(path).and_then(|c| c.to_input()).and_then(toricdata::validate);
    match result {
        Ok(vt) => Outcome::ok(format!("ok: |I| = {}, r = {}, |Ξ| = {}, |Ξ₀| = {}\n", vt.n(), vt.r(), vt.xi.len(), vt.xi0.len())),
        Err(e) => Outcome::err(exit_code(&e), format!("{e}\n")),
    }
}

pub fn cmd_analyze(path: &PathBuf, opts: &AnalyzeOptions, out: Option<&PathBuf>) -> Outcome {
    let config = match load(path) {
        Ok(c) => c,
        Err(e) => return Outcome::err(exit_code(&e), format!("cli: {e}\n")),
    };
    let analysis = match analyze::analyze(&config, opts) {
        Ok(a) => a,
        Err(t) => return Outcome::err(exit_code(&t.error), format!("{t}\n")),
    };
    let text = analyze::render(&analysis.report);
    let mut outcome = match out {
        Some(p) => match std::fs::write(p, &text) {
            Ok(()) => Outcome::ok(String::new()),
            Err(e) => return Outcome::err(2, format!("cli: {}: {e}\n", p.display())),
        },
        None => Outcome::ok(text),
    };
    if analysis.certificate_failure {
        outcome.code = 3;
        outcome.stderr = "fans: isolated-singularity certificate failed although MPCP holds\n".into();
    }
    outcome
}

pub fn cmd_examples(action: &ExamplesAction) -> Outcome {
    match action {
        ExamplesAction::List => Outcome::ok(fixtures::NAMES.iter().map(|n| format!("{n}\n")).collect()),
        ExamplesAction::Show { name } => match fixtures::config(name) {
            Ok(c) => Outcome::ok(format!("{}\n", c.to_json_pretty())),
            Err(e) => Outcome::err(2, format!("{e}\n")),
        },
    }
}

/// Sizes the global thread pool from `MIRRORCONE_THREADS`, if set.
pub fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("MIRRORCONE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("MIRRORCONE_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))
}

pub fn run(cli: &Cli) -> Outcome {
    if let Err(e) = configure_threads() {
        return Outcome::err(2, format!("{e}\n"));
    }
    match &cli.command {
        Command::Validate { config } => cmd_validate(config),
        Command::Analyze { config, sections, algebra, cutoff, perturb, out } => {
            let opts = AnalyzeOptions { sections: sections.clone(), algebra: *algebra, cutoff: *cutoff, perturb: *perturb };
            cmd_analyze(config, &opts, out.as_ref())
        }
        Command::Examples { action } => cmd_examples(action),
    }
}
