//! `wulff`: polar transforms, distances and property suites for spherical
//! convex bodies stored as shape files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand, ValueEnum};
use wulff_core::harness::gen::{gen_convex, random_wulff};
use wulff_core::harness::{run_suite, suite_passed, summary, write_csv, SuiteConfig, SUITES};
use wulff_core::metric::{default_resolution, hausdorff_measured, separate, RESOLUTION_ENV};
use wulff_core::point::seeded_rng;
use wulff_core::shape_file::ShapeSpec;
use wulff_core::transforms::{polar, spherical_hull};
use wulff_core::SphericalBodyF64;

#[derive(Parser)]
#[command(name = "wulff", version, about = "Spherical convex bodies: polar duality, Hausdorff distances and property suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polar (dual) body of a shape file.
    Dual {
        shape: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pompeiu-Hausdorff distance between two shape files, in radians.
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
        /// Bracket width for bodies that need the sampled path.
        #[arg(long, env = RESOLUTION_ENV)]
        resolution: Option<f64>,
    },
    /// Spherical convex hull of the points in a shape file.
    Hull {
        points: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// A point Q with a inside H(Q) and b strictly outside it.
    Separate { a: PathBuf, b: PathBuf },
    /// Run property suites and report per-trial results.
    Verify {
        #[arg(long, value_parser = suite_names())]
        suite: String,
        /// Trials per suite; each suite has its own default.
        #[arg(long)]
        trials: Option<usize>,
        /// Sphere dimension n.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides every suite's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Sampling resolution in radians for bodies off the exact path.
        #[arg(long, env = RESOLUTION_ENV)]
        resolution: Option<f64>,
        /// CSV report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random body to a shape file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Wulff shape relative to the pole.
    Wulff,
    /// Convex body in an open hemisphere.
    Convex,
}

fn suite_names() -> PossibleValuesParser {
    PossibleValuesParser::new(SUITES.iter().copied().chain(["all"]))
}

fn read_body(path: &Path) -> Result<SphericalBodyF64> {
    let spec = ShapeSpec::read(path).with_context(|| format!("cannot read shape file {}", path.display()))?;
    spec.body().with_context(|| format!("{}: invalid body", path.display()))
}

fn emit(spec: &ShapeSpec, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => spec.write(path).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{}", spec.to_text());
            Ok(())
        }
    }
}

fn label_of(path: &Path, what: &str) -> Option<String> {
    let stem = path.file_stem()?.to_string_lossy();
    Some(format!("{what} of {stem}"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Dual { shape, out } => {
            let dual = polar(&read_body(&shape)?)?;
            emit(&ShapeSpec::from_body(&dual, label_of(&shape, "polar")), out.as_deref())?;
        }
        Command::Hausdorff { a, b, resolution } => {
            let res = resolution.unwrap_or_else(default_resolution);
            let m = hausdorff_measured(&read_body(&a)?, &read_body(&b)?, res)?;
            println!("{}", m.angle.radians());
            if !m.exact {
                eprintln!("sampled path: true value within +{:e}", m.error_bound);
            }
        }
        Command::Hull { points, out } => {
            let spec = ShapeSpec::read(&points).with_context(|| format!("cannot read {}", points.display()))?;
            let hull = spherical_hull(&spec.points::<f64>()?)?;
            emit(&ShapeSpec::from_body(&hull, label_of(&points, "hull")), out.as_deref())?;
        }
        Command::Separate { a, b } => {
            let q = separate(&read_body(&a)?, &read_body(&b)?)?;
            let coords: Vec<String> = q.coords().iter().map(f64::to_string).collect();
            println!("{}", coords.join(" "));
        }
        Command::Verify { suite, trials, dim, seed, tol, resolution, out } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            let mut first_failure = None;
            for name in names {
                let mut cfg = SuiteConfig::new(name);
                if let Some(t) = trials {
                    cfg.trials = t;
                }
                cfg.dim = dim;
                cfg.seed = seed;
                cfg.tolerance = tol;
                if let Some(r) = resolution {
                    cfg.sampling_resolution = r;
                }
                cfg.output_path = out.clone();
                let rows = run_suite(&cfg)?;
                if first_failure.is_none() && !suite_passed(&rows) {
                    first_failure = Some(name);
                }
                reports.extend(rows);
            }
            if let Some(path) = &out {
                write_csv(path, &reports)?;
            }
            print!("{}", summary(&reports));
            if let Some(name) = first_failure {
                eprintln!("suite `{name}` failed");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Gen { kind, dim, seed, out } => {
            if dim < 1 {
                bail!("dim must be at least 1");
            }
            let mut rng = seeded_rng(seed);
            let (body, what) = match kind {
                Kind::Wulff => (random_wulff(dim, &mut rng)?, "wulff"),
                Kind::Convex => (gen_convex(dim, &mut rng)?, "convex"),
            };
            emit(&ShapeSpec::from_body(&body, Some(format!("{what} seed {seed}"))), out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
