//! Command-line surface over the equilibrium construction library.
//!
//! Subcommands cover the full workflow: `construct` writes a radial
//! profile with a machine-readable header, `verify` re-reads such a file
//! and checks the equilibrium conditions by independent quadrature,
//! `energy` ranks a profile against the two-atom competitor, `sweep`
//! tabulates a parameter scan, `particles` cross-checks the continuum
//! radius against a discrete gradient descent, and `identities` evaluates
//! the calibration integrals the constructions rest on.
//!
//! Exit codes: 0 on success, 1 on a runtime or convergence failure (and
//! on a failed verification), 2 when parameters fall outside the
//! supported region. The environment variable `AGGSTEADY_REL_TOL`
//! overrides the default quadrature tolerance of 1e-9.

mod commands;
mod profile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// A failure carrying the process exit code it should produce.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    /// Map a library error onto the exit-code convention: parameter
    /// problems exit 2, numerical failures exit 1.
    pub fn from_core(err: aggsteady::Error) -> Self {
        let code = match err {
            aggsteady::Error::Domain(_) | aggsteady::Error::Unsupported(_) => 2,
            aggsteady::Error::NoConvergence(_) | aggsteady::Error::Degenerate(_) => 1,
        };
        Failure::new(code, err.to_string())
    }

    pub fn from_io(err: std::io::Error) -> Self {
        Failure::new(1, format!("io error: {err}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Kernel and mass parameters shared by most subcommands. The kernel is
/// `|x|^a/a - |x|^b/b` (a zero exponent stands for `log|x|`) in dimension
/// `d`, normalized to the given total mass.
#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Attraction exponent a.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Repulsion exponent b; 0 selects logarithmic repulsion.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub b: f64,
    /// Space dimension.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Total mass of the configuration.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Family weight of the singular component (quadratic attraction on
    /// the line only; 0 selects the plain profile).
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    /// Number of radial grid points in the emitted profile.
    #[arg(long, default_value_t = 512)]
    pub samples: u32,
    /// Output format: csv writes "r,rho" rows under a '#'-prefixed JSON
    /// header line; json writes one document with header and arrays.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Profile file produced by `construct` (csv or json format).
    pub input: PathBuf,
    /// Output path for the JSON report; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Family weight (quadratic attraction on the line only).
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    /// Output path for the JSON ranking; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Family weight passed through to each construction.
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    /// Lower end of a repulsion-exponent sweep (requires --b-max).
    #[arg(long, allow_negative_numbers = true)]
    pub b_min: Option<f64>,
    /// Upper end of a repulsion-exponent sweep.
    #[arg(long, allow_negative_numbers = true)]
    pub b_max: Option<f64>,
    /// Lower end of an attraction-exponent sweep (requires --a-max).
    #[arg(long, allow_negative_numbers = true)]
    pub a_min: Option<f64>,
    /// Upper end of an attraction-exponent sweep.
    #[arg(long, allow_negative_numbers = true)]
    pub a_max: Option<f64>,
    /// Number of grid rows (inclusive endpoints); 0 emits an empty table.
    #[arg(long, default_value_t = 0)]
    pub steps: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParticlesArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Number of particles.
    #[arg(long, default_value_t = 100)]
    pub n: u32,
    /// Seed of the initial uniform-in-ball draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iteration budget for the descent.
    #[arg(long, default_value_t = 200_000)]
    pub steps: u32,
    /// Output path for the JSON comparison; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    /// Restrict to the interval identities at this kernel exponent
    /// instead of running the full suite.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Support radius used by the subset run.
    #[arg(long, visible_alias = "R", default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flip the sign of one tabulated value, to demonstrate that the
    /// suite catches a wrong closed form.
    #[arg(long, hide = true, default_value_t = false)]
    pub inject_error: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct an equilibrium profile and write it with its metadata.
    Construct(ConstructArgs),
    /// Re-read a profile file and check the equilibrium conditions by
    /// quadrature; exits 1 if the profile fails them.
    Verify(VerifyArgs),
    /// Rank the constructed profile against the optimal two-atom
    /// configuration by interaction energy per unit mass.
    Energy(EnergyArgs),
    /// Construct along a parameter grid and tabulate radius, energy,
    /// central density, and validity per row.
    Sweep(SweepArgs),
    /// Relax discrete particles by gradient descent and compare their
    /// support radius with the continuum prediction.
    Particles(ParticlesArgs),
    /// Evaluate the calibration identities against quadrature and report
    /// per-identity errors; exits 0 only if all pass.
    Identities(IdentitiesArgs),
}

/// Construct and verify equilibria of attractive-repulsive power-law
/// interactions.
///
/// Defaults: mass 1, 512 profile grid points, quadrature tolerance 1e-9
/// (override with AGGSTEADY_REL_TOL); all are echoed in output headers.
#[derive(Debug, Parser)]
#[command(name = "aggsteady", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => commands::construct(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Energy(args) => commands::energy(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Particles(args) => commands::particles(&args),
        Command::Identities(args) => commands::identities(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// The quadrature configuration all commands use, honoring the
/// environment override for the relative tolerance.
pub fn quadrature_spec() -> Result<aggsteady::QuadratureSpec, Failure> {
    let mut spec = aggsteady::QuadratureSpec::default();
    if let Ok(raw) = std::env::var("AGGSTEADY_REL_TOL") {
        let value: f64 = raw
            .parse()
            .map_err(|_| Failure::new(2, format!("AGGSTEADY_REL_TOL is not a number: {raw:?}")))?;
        if !(value > 0.0 && value < 1.0) {
            return Err(Failure::new(2, "AGGSTEADY_REL_TOL must lie in (0, 1)"));
        }
        spec.rel_tol = value;
    }
    Ok(spec)
}

/// Write `content` to the path, or to stdout when no path was given.
pub fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(Failure::from_io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
