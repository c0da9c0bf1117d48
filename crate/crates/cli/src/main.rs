use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gt_operads::Error;

mod commands;

/// Exact checks for braids, parenthesized-braid operads, groupoid
/// cohomology and Grothendieck–Teichmüller candidates.
#[derive(Debug, Parser)]
#[command(name = "gtop", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunConfigArgs {
    /// Truncation arity of operads in groupoids (at least 2).
    #[arg(long, global = true, default_value_t = 4)]
    arity: usize,
    /// Maximum number of basepoints in based monomials.
    #[arg(long, global = true, default_value_t = 2)]
    star_budget: usize,
    /// Finite-group catalog: small, order8 or default.
    #[arg(long, global = true, default_value = "default")]
    catalog: String,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperadSelector {
    #[value(name = "A")]
    A,
    #[value(name = "UM")]
    Um,
    #[value(name = "BM")]
    Bm,
    #[value(name = "CoB")]
    Cob,
    #[value(name = "PaB")]
    Pab,
    #[value(name = "PaUB")]
    Paub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiTarget {
    /// Endomorphisms of PaB, whose levels 0 and 1 are points.
    Pab,
    /// Maps into PaUB, whose levels 0 and 1 are not points.
    Paub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HomotopyCase {
    /// The full-twist self-homotopy of the identity of PaB.
    Fulltwist,
    /// Decide whether the identity and the mirror endomorphism are homotopic.
    IdMirror,
    /// Object fixing of the tree-swap endomorphism of the codiscrete operad.
    FixCodiscrete,
    /// Object fixing of the rotation endomorphism of PaB.
    FixRotation,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check relations (1)-(3) and the abelianization test for each candidate.
    GtCheck { file: PathBuf },
    /// Multiply the candidates of a file from left to right.
    GtMul { file: PathBuf },
    /// Apply each candidate to a target word ("1 2 -1") or braid ("B3 1 2"),
    /// or without a target check that the F2 action is a monoid map.
    GtAct {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// Audit the operad axioms.
    OperadAudit {
        #[arg(value_enum)]
        operad: OperadSelector,
        /// Shorthand for --arity.
        n: Option<usize>,
        /// Sampled instances per axiom for operads in groupoids.
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// H0, Z1 and H1 of a groupoid file.
    Cohomology {
        file: PathBuf,
        /// Restrict to one coefficient group of the catalog, e.g. C2.
        #[arg(long)]
        coefficients: Option<String>,
    },
    /// Transport relations (1)-(3) through every homomorphism to the catalog.
    Certify { file: PathBuf },
    /// Check the section s of u and the levelwise equivalence PaUB -> PaB.
    PaubSection,
    /// Round trip of phi and its inverse on the identity and the mirror.
    PhiRoundtrip {
        /// Shorthand for --arity.
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "pab")]
        target: PhiTarget,
    },
    /// Validate or decide homotopies between operad maps.
    HomotopyValidate {
        #[arg(value_enum)]
        case: HomotopyCase,
    },
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub arity: usize,
    pub star_budget: usize,
    pub catalog: gt_operads::Catalog,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// A rendered report and whether every verdict in it passed.
pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Verdict(anyhow::Error),
}

fn classify(e: anyhow::Error) -> Failure {
    match e.downcast_ref::<Error>() {
        Some(Error::HypothesisViolated(_)) | Some(Error::NoConnectingMorphism(_)) => Failure::Verdict(e),
        _ => Failure::Usage(e),
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let arity_override = match &cli.command {
        Command::OperadAudit { n, .. } | Command::PhiRoundtrip { n, .. } => *n,
        _ => None,
    };
    let arity = arity_override.unwrap_or(cli.config.arity);
    if arity < 2 {
        return Err(Failure::Usage(anyhow::anyhow!("--arity must be at least 2, got {arity}")));
    }
    let catalog = gt_operads::Catalog::parse(&cli.config.catalog).map_err(|e| Failure::Usage(e.into()))?;
    let config = RunConfig {
        arity,
        star_budget: cli.config.star_budget,
        catalog,
        seed: cli.config.seed,
        out: cli.config.out,
    };
    let read = |path: &PathBuf| {
        fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::Usage)
    };
    let result = match cli.command {
        Command::GtCheck { file } => commands::gt_check(&read(&file)?),
        Command::GtMul { file } => commands::gt_mul(&read(&file)?),
        Command::GtAct { file, target } => commands::gt_act(&read(&file)?, target.as_deref()),
        Command::OperadAudit { operad, samples, .. } => commands::operad_audit(operad, samples, &config),
        Command::Cohomology { file, coefficients } => {
            commands::cohomology(&read(&file)?, coefficients.as_deref(), &config)
        }
        Command::Certify { file } => commands::certify(&read(&file)?, &config),
        Command::PaubSection => commands::paub_section(&config),
        Command::PhiRoundtrip { target, .. } => commands::phi_roundtrip(target, &config),
        Command::HomotopyValidate { case } => commands::homotopy_validate(case, &config),
    };
    let outcome = result.map_err(classify)?;
    if let Some(path) = &config.out {
        fs::write(path, &outcome.report)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Usage)?;
    } else {
        print!("{}", outcome.report);
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(Failure::Verdict(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
