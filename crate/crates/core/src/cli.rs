//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error, 3 I/O or parse
//! error, 4 overlapping spheres, 5 dependent constraints, 6 infeasible path
//! endpoint, 7 color/radii conflict.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::Serialize;

use crate::enumeration::{survey, write_summary_csv, SurveyOptions};
use crate::geometry::{
    build_constraint_system, canonical_chain, canonical_loop, detect_contacts, octahedron, permute_flat,
    polytetrahedron, Cluster, Partition, Vec3,
};
use crate::io::read_cluster;
use crate::manifold::{find_path, toy_endpoints, toy_set, write_path_csv, PathConfig, PathMode, PathResult};
use crate::symmetry::{colored_symmetry, sticky_symmetry_group, SymmetryOptions, SymmetryReport};
use crate::{Error, PIOperation, Result};

#[derive(Debug, Parser)]
#[command(name = "stickysym", version, about = "Sticky symmetry groups of hard-sphere clusters")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the sticky symmetry group of one cluster.
    Symmetry(SymmetryArgs),
    /// Restrict an existing report to a coloring, without new path searches.
    Color(ColorArgs),
    /// Enumerate and analyse all connected 6-sphere contact graphs.
    Survey(SurveyArgs),
    /// Search a single path and dump its points.
    Path(PathArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PathFlags {
    /// Descent step bound and arrival radius.
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    /// Random step scale.
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Inverse temperature of the sampling mode.
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub beta: f64,
    /// Random steps per escape burst.
    #[arg(long, default_value_t = 20)]
    pub nr: usize,
    /// Point budget per attempt.
    #[arg(long, default_value_t = 100_000)]
    pub nmax: usize,
    /// Stagnation threshold.
    #[arg(long, default_value_t = 1e-3)]
    pub toln: f64,
    #[arg(long, value_enum, default_value_t = PathMode::Sample)]
    pub mode: PathMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independently seeded attempts before a search reports failure.
    #[arg(long, default_value_t = 3)]
    pub retries: usize,
}

impl PathFlags {
    pub fn config(&self) -> PathConfig {
        PathConfig {
            tol: self.tol,
            sigma: self.sigma,
            beta: self.beta,
            nr: self.nr,
            nmax: self.nmax,
            tol_n: self.toln,
            mode: self.mode,
            seed: self.seed,
            retries: self.retries,
            ..PathConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PipelineFlags {
    #[command(flatten)]
    pub path: PathFlags,
    /// Concurrent path searches (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Work in the automorphism group alone, without inversions.
    #[arg(long)]
    pub no_inversions: bool,
    /// Fix the center of mass with three linear equalities.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub fix_com: bool,
    /// Sampling steps (β = 0) applied before the analysis.
    #[arg(long)]
    pub sample_steps: Option<usize>,
    /// Search closure-inferred elements again with fresh seeds.
    #[arg(long)]
    pub reverify: bool,
    /// Search every candidate, without double-coset pruning after failures.
    #[arg(long)]
    pub no_prune: bool,
}

impl PipelineFlags {
    pub fn options(&self, default_sample_steps: usize) -> SymmetryOptions {
        SymmetryOptions {
            path: PathConfig {
                record: false,
                ..self.path.config()
            },
            include_inversions: !self.no_inversions,
            fix_com: self.fix_com,
            prune_negative: !self.no_prune,
            reverify_closure: self.reverify,
            sample_steps: self.sample_steps.unwrap_or(default_sample_steps),
            jobs: self
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            ..SymmetryOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    /// Cluster JSON file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    /// Builtin cluster: loop:N, chain:N, octahedron, polytetrahedron, dimer.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Override radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Color labels, comma separated; the report is restricted to them.
    #[arg(long)]
    pub colors: Option<String>,
    #[command(flatten)]
    pub flags: PipelineFlags,
    /// Report destination (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    /// Report written by `symmetry`.
    #[arg(long)]
    pub report: PathBuf,
    /// Color labels, comma separated.
    #[arg(long)]
    pub colors: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    /// Largest number of broken bonds.
    #[arg(long, default_value_t = 7)]
    pub max_d: usize,
    /// Only enumerate graphs and representatives.
    #[arg(long)]
    pub no_symmetry: bool,
    #[command(flatten)]
    pub flags: PipelineFlags,
    /// Survey JSON destination (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Summary table destination.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// `toy2d`, or a cluster builtin searched towards its image under
    /// `--element`.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub builtin: Option<String>,
    /// Cluster JSON file searched towards its image under `--element`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Start point as comma-separated coordinates (toy set only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub from: Option<Vec<f64>>,
    /// End point as comma-separated coordinates (toy set only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub to: Option<Vec<f64>>,
    /// PI element in cycle notation, e.g. "(12)(34)*".
    #[arg(long)]
    pub element: Option<String>,
    #[command(flatten)]
    pub path: PathFlags,
    /// Result JSON destination (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// CSV point dump.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => 3,
        Error::Overlap(..) => 4,
        Error::RankDeficient(_) => 5,
        Error::InfeasibleEndpoint => 6,
        Error::ColorRadiiConflict(_) => 7,
        _ => 1,
    }
}

/// Parses `loop:N`, `chain:N`, `octahedron`, `polytetrahedron` or `dimer`.
pub fn builtin_cluster(spec: &str) -> Result<Cluster> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let size = || -> Result<usize> {
        arg.ok_or_else(|| Error::InvalidConfig(format!("builtin {name} needs a size, e.g. {name}:6")))?
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad size in builtin {spec:?}")))
    };
    match name {
        "loop" => canonical_loop(size()?),
        "chain" => canonical_chain(size()?),
        "octahedron" => Ok(octahedron()),
        "polytetrahedron" => polytetrahedron(),
        "dimer" => Cluster::identical(vec![Vec3::new(-0.5, 0.0, 0.0), Vec3::new(0.5, 0.0, 0.0)]),
        _ => Err(Error::InvalidConfig(format!("unknown builtin {spec:?}"))),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn load_cluster(input: Option<&Path>, builtin: Option<&str>) -> Result<(Cluster, Option<Partition>)> {
    match (input, builtin) {
        (Some(p), _) => read_cluster(p),
        (None, Some(b)) => Ok((builtin_cluster(b)?, None)),
        (None, None) => Err(Error::InvalidConfig("either --input or --builtin is required".into())),
    }
}

pub fn cmd_symmetry(args: &SymmetryArgs) -> Result<SymmetryReport> {
    let (mut cluster, file_colors) = load_cluster(args.input.as_deref(), args.builtin.as_deref())?;
    if let Some(r) = &args.radii {
        cluster = cluster.with_radii(r.clone())?;
    }
    let report = sticky_symmetry_group(&cluster, &args.flags.options(0))?;
    let colors = match &args.colors {
        Some(c) => Some(Partition::parse_labels(c)?),
        None => file_colors,
    };
    let report = match colors {
        Some(c) => colored_symmetry(&report, &c)?,
        None => report,
    };
    write_output(args.output.as_deref(), &report.to_json()?)?;
    Ok(report)
}

pub fn cmd_color(args: &ColorArgs) -> Result<SymmetryReport> {
    let report = SymmetryReport::from_json(&std::fs::read_to_string(&args.report)?)?;
    let colored = colored_symmetry(&report, &Partition::parse_labels(&args.colors)?)?;
    write_output(args.output.as_deref(), &colored.to_json()?)?;
    Ok(colored)
}

pub fn cmd_survey(args: &SurveyArgs) -> Result<()> {
    let options = SurveyOptions {
        symmetry: args.flags.options(SurveyOptions::default().symmetry.sample_steps),
        max_d: args.max_d,
        analyse: !args.no_symmetry,
        ..SurveyOptions::default()
    };
    if options.max_d > 7 {
        return Err(Error::InvalidConfig("6-sphere clusters have at most 7 breakable bonds".into()));
    }
    let result = survey(&options)?;
    write_output(args.output.as_deref(), &to_json(&result)?)?;
    if let Some(p) = &args.csv {
        write_summary_csv(&result, BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

pub fn cmd_path(args: &PathArgs) -> Result<PathResult> {
    let config = args.path.config();
    let result = if args.builtin.as_deref() == Some("toy2d") {
        let (a, b) = toy_endpoints();
        let point = |v: &Option<Vec<f64>>, default: DVector<f64>| match v {
            None => Ok(default),
            Some(v) if v.len() == 2 => Ok(DVector::from_vec(v.clone())),
            Some(v) => Err(Error::DimensionMismatch { expected: 2, found: v.len() }),
        };
        find_path(&toy_set(), &point(&args.from, a)?, &point(&args.to, b)?, &config)?
    } else {
        let (cluster, _) = load_cluster(args.input.as_deref(), args.builtin.as_deref())?;
        let cluster = cluster.centered();
        let element = args
            .element
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--element is required for cluster paths".into()))?;
        let op = PIOperation::parse(element, cluster.len())?;
        let a = detect_contacts(&cluster, crate::geometry::DEFAULT_EPS_CONTACT)?;
        let cs = build_constraint_system(&a, cluster.radii(), true);
        let x0 = crate::manifold::newton_polish(&cs, &cluster.to_flat(), config.tol_q * 1e-3, 50)?;
        find_path(&cs, &x0, &permute_flat(&x0, &op), &config)?
    };
    if let Some(p) = &args.csv {
        write_path_csv(&result, BufWriter::new(File::create(p)?))?;
    }
    write_output(args.output.as_deref(), &to_json(&result)?)?;
    Ok(result)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Symmetry(a) => cmd_symmetry(a).map(drop),
        Command::Color(a) => cmd_color(a).map(drop),
        Command::Survey(a) => cmd_survey(a),
        Command::Path(a) => cmd_path(a).map(drop),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
