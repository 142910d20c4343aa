//! `bicross`: batch driver over `.grp` matched-pair descriptions.
//!
//! Exit status is 0 when every executed check passes, 1 when a check fails
//! (including a failed build gate) and 2 for malformed input or usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bicross::bicross::Instance;
use bicross::export::StructureConstants;
use bicross::report::{self, ProbeConfig, Report, DEFAULT_COUNT, DEFAULT_SEED};
use bicross::verify::{self, PipelineOptions};
use bicross::Error;

/// Environment variable holding the default probe seed.
const SEED_VAR: &str = "BICROSS_SEED";

#[derive(Parser, Debug)]
#[command(name = "bicross", version, about = "Bicrossproduct multiplier Hopf algebras from matched pairs of groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `exhaustive`, `random`, `random:<seed>` or `random:<seed>:<count>`.
    #[arg(long, global = true, default_value = "exhaustive")]
    probes: String,
    /// Write the reports as JSON to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include the involution and positivity checks.
    #[arg(long, global = true)]
    star: bool,
    /// Build past failing gates (build commands only).
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Verify the six matched-pair identities.
    CheckMatchedPair { file: PathBuf },
    /// Run the gated pipeline and build both bicrossproducts.
    BuildBicross {
        file: PathBuf,
        /// Write the structure constants of AB here.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the structure constants of CD here.
        #[arg(long)]
        export_cd: Option<PathBuf>,
    },
    /// Run one suite, or `all` for every suite without gating.
    Verify {
        file: PathBuf,
        #[arg(long)]
        suite: String,
    },
    /// Serialize the structure constants of one side.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: Side,
        /// Destination; standard output when absent.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Check the pairings between AB and CD and between their factors.
    PairDuality { file: PathBuf },
    /// List the available suites.
    ListSuites,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    #[value(name = "AB")]
    Ab,
    #[value(name = "CD")]
    Cd,
}

/// A validated invocation.
#[derive(Debug)]
struct JobConfig {
    command: Command,
    probes: ProbeConfig,
    out: Option<PathBuf>,
    force: bool,
    star: bool,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PreconditionFailed(m) => Failure::Check(format!("precondition failed: {m}")),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn parse_probes(arg: &str, default_seed: u64) -> Result<ProbeConfig, String> {
    let num = |s: &str, what: &str| s.parse::<u64>().map_err(|_| format!("bad probe {what} `{s}`"));
    let parts: Vec<&str> = arg.split(':').collect();
    let (seed, count) = match parts.as_slice() {
        ["exhaustive"] => return Ok(ProbeConfig { seed: default_seed, ..ProbeConfig::default() }),
        ["random"] => (default_seed, DEFAULT_COUNT),
        ["random", s] => (num(s, "seed")?, DEFAULT_COUNT),
        ["random", s, c] => (num(s, "seed")?, num(c, "count")? as usize),
        _ => return Err(format!("unknown probe mode `{arg}`")),
    };
    if count == 0 {
        return Err("probe count must be positive".into());
    }
    Ok(ProbeConfig::random(seed, count))
}

impl JobConfig {
    fn new(cli: Cli, env_seed: Option<String>) -> Result<JobConfig, String> {
        let default_seed = match env_seed {
            Some(s) => s.trim().parse().map_err(|_| format!("{SEED_VAR} is not an integer: `{s}`"))?,
            None => DEFAULT_SEED,
        };
        let builds = matches!(cli.command, Command::BuildBicross { .. } | Command::Export { .. });
        if cli.force && !builds {
            return Err("--force only applies to build-bicross and export".into());
        }
        Ok(JobConfig { probes: parse_probes(&cli.probes, default_seed)?, command: cli.command, out: cli.out, force: cli.force, star: cli.star })
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    bicross::input::parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// The suites that must pass before anything is built.
const GATES: &[&str] = &[
    verify::MATCHED_PAIR,
    verify::MODULE_ALGEBRA,
    verify::COMODULE_COALGEBRA,
    verify::FINITE_SUPPORT,
    verify::AB_COMPAT,
    verify::CD_COMPAT,
];

fn gates(inst: &Instance, job: &JobConfig) -> Result<Vec<Report>, Failure> {
    let mut out = Vec::new();
    for g in GATES {
        let r = verify::run_suite(inst, g, &job.probes)?;
        let ok = r.passed();
        out.push(r);
        if !ok && !job.force {
            break;
        }
    }
    Ok(out)
}

fn first_failure(reports: &[Report]) -> Option<&str> {
    reports.iter().find(|r| !r.passed()).map(|r| r.suite.as_str())
}

fn export_side(inst: &Instance, side: Side) -> Result<String, Failure> {
    if !inst.is_finite() {
        return Err(Failure::Input(format!("{} is infinite; only finite algebras export", inst.name)));
    }
    let m = match side {
        Side::Ab => inst.build_ab()?,
        Side::Cd => inst.build_cd()?,
    };
    Ok(StructureConstants::from_mha(&m)?.render())
}

/// Runs the job, printing human-readable reports on `stdout` text.
fn run(job: &JobConfig, stdout: &mut String) -> Result<(), Failure> {
    let reports = match &job.command {
        Command::ListSuites => {
            for s in verify::SUITES {
                stdout.push_str(s);
                stdout.push('\n');
            }
            return Ok(());
        }
        Command::CheckMatchedPair { file } => vec![verify::matched_pair_suite(&load(file)?, &job.probes)],
        Command::PairDuality { file } => vec![verify::run_suite(&load(file)?, verify::DUALITY, &job.probes)?],
        Command::Verify { file, suite } => {
            let inst = load(file)?;
            if suite == "all" {
                verify::full_pipeline(&inst, &job.probes, PipelineOptions { force: true, star: job.star })?
            } else {
                vec![verify::run_suite(&inst, suite, &job.probes)?]
            }
        }
        Command::BuildBicross { file, export, export_cd } => {
            let inst = load(file)?;
            let reports = verify::full_pipeline(&inst, &job.probes, PipelineOptions { force: job.force, star: job.star })?;
            let gated = first_failure(&reports).filter(|s| GATES.contains(s));
            if gated.is_none() || job.force {
                if let Some(p) = export {
                    write(p, &export_side(&inst, Side::Ab)?)?;
                }
                if let Some(p) = export_cd {
                    write(p, &export_side(&inst, Side::Cd)?)?;
                }
            }
            reports
        }
        Command::Export { file, what, export } => {
            let inst = load(file)?;
            let reports = gates(&inst, job)?;
            if first_failure(&reports).is_none() || job.force {
                let sc = export_side(&inst, *what)?;
                match export {
                    Some(p) => write(p, &sc)?,
                    None => stdout.push_str(&sc),
                }
            }
            // the serialization owns stdout here, so reports go to --out only
            finish(job, &reports, None)?;
            return verdict(&reports);
        }
    };
    finish(job, &reports, Some(stdout))?;
    verdict(&reports)
}

fn finish(job: &JobConfig, reports: &[Report], stdout: Option<&mut String>) -> Result<(), Failure> {
    if let Some(p) = &job.out {
        write(p, &report::render_json(reports))?;
    }
    if let Some(s) = stdout {
        s.push_str(&report::render_text(reports));
    }
    Ok(())
}

fn verdict(reports: &[Report]) -> Result<(), Failure> {
    match first_failure(reports) {
        None => Ok(()),
        Some(s) if GATES.contains(&s) && reports.last().map(|r| r.suite.as_str()) == Some(s) => {
            Err(Failure::Check(format!("gate `{s}` failed; nothing built (use --force to continue)")))
        }
        Some(s) => Err(Failure::Check(format!("suite `{s}` failed"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let job = match JobConfig::new(cli, std::env::var(SEED_VAR).ok()) {
        Ok(j) => j,
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = String::new();
    let result = run(&job, &mut stdout);
    print!("{stdout}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
