use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hcns_lab::report::{
    division_record, finite_hcns, instance_checks, load_instance, moufang_checks, one_invert_checks, property_checks,
    universal_checks, CheckRecord, Report, ReportError,
};
use hcns_lab::scalars::poly_stats;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "hcns-lab", version, about = "Exact checks for hermitian cubic norm structures")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "HCNS_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Report polynomial multiplication counts.
    #[arg(long, global = true)]
    profile: bool,
    /// Coordinate bound for the bounded division search over infinite rings.
    #[arg(long, global = true, default_value_t = 1000)]
    max_height: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Axioms of the universal model, the seven one-invertibility equations
    /// and the two computations of nu.
    VerifyUniversal {
        /// Run only the named check (repeatable).
        #[arg(long)]
        only: Vec<String>,
        /// Corrupt one coefficient of the model; the axiom checks must fail.
        #[arg(long)]
        self_test: bool,
    },
    /// Axioms at the generic point and division status of an instance.
    CheckInstance { path: PathBuf },
    /// Division status: exhaustive over finite fields, bounded search otherwise.
    CheckDivision {
        path: PathBuf,
        /// Random samples for the bounded search.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Certificate (g_r, g_l, tau) for one element, or the obstruction nu(g) = 0.
    OneInvert {
        path: PathBuf,
        /// JSON object {"a": [x0, x1], "v": [[x0, x1], ...], "u": [x0, x1]}
        /// or with "r" (skew coefficient of u) instead of "u".
        #[arg(long)]
        element: String,
    },
    /// Points, Moufang axioms, tau cross-check and little projective group order.
    Moufang {
        path: PathBuf,
        /// Check conjugation for every root group element, not only generators.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Randomized property suites.
    Properties {
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

fn read(path: &Path) -> Result<String, ReportError> {
    std::fs::read_to_string(path).map_err(|e| ReportError::Internal(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, report: &mut Report) -> Result<Vec<CheckRecord>, ReportError> {
    let seed = cli.seed;
    match &cli.command {
        Command::VerifyUniversal { only, self_test } => universal_checks(only, *self_test),
        Command::CheckInstance { path } => {
            let (_, inst, digest) = load_instance(&read(path)?)?;
            report.instance_digest = Some(digest);
            report.seed = Some(seed);
            instance_checks(&inst, cli.max_height, 10_000, seed)
        }
        Command::CheckDivision { path, samples } => {
            let (_, inst, digest) = load_instance(&read(path)?)?;
            report.instance_digest = Some(digest);
            report.seed = Some(seed);
            Ok(vec![division_record(&inst, cli.max_height, *samples, seed)?])
        }
        Command::OneInvert { path, element } => {
            let (_, inst, digest) = load_instance(&read(path)?)?;
            report.instance_digest = Some(digest);
            one_invert_checks(&inst, element)
        }
        Command::Moufang { path, exhaustive } => {
            let (_, inst, digest) = load_instance(&read(path)?)?;
            report.instance_digest = Some(digest);
            moufang_checks(finite_hcns(&inst)?, *exhaustive)
        }
        Command::Properties { cases } => {
            report.seed = Some(seed);
            Ok(property_checks(*cases, seed))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyUniversal { .. } => "verify-universal",
        Command::CheckInstance { .. } => "check-instance",
        Command::CheckDivision { .. } => "check-division",
        Command::OneInvert { .. } => "one-invert",
        Command::Moufang { .. } => "moufang",
        Command::Properties { .. } => "properties",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut report = Report::new(command_name(&cli.command));
    let before = poly_stats::snapshot();
    match run(&cli, &mut report) {
        Ok(checks) => report.checks = checks,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.profile {
        report.set_profile(before);
    }
    let out = match cli.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_structured(),
    };
    print!("{out}");
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
