#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod io;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use elastica::ElasticParams;

use crate::error::CliResult;

/// Elastic shape analysis of plane curves.
#[derive(Debug, Parser)]
#[command(name = "elastica", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Bending weight `a` and stretching weight `b` of the elastic metric.
#[derive(Debug, Clone, Copy, Args)]
pub struct ElasticArgs {
    #[arg(short = 'a', long = "a", default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(short = 'b', long = "b", default_value_t = 0.5, allow_negative_numbers = true)]
    pub b: f64,
}

impl ElasticArgs {
    pub fn params(&self) -> CliResult<ElasticParams> {
        Ok(ElasticParams::new(self.a, self.b)?)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct MatchArgs {
    /// Rescale both curves to unit length and measure on the sphere.
    #[arg(long)]
    pub fixed_length: bool,
    /// Grid size of the reparameterization search.
    #[arg(long, default_value_t = elastica::matching::DEFAULT_GRID)]
    pub grid: usize,
    /// Largest step of the search in either direction.
    #[arg(long, default_value_t = elastica::matching::DEFAULT_WINDOW)]
    pub window: usize,
    /// Try every k-th starting vertex of closed curves.
    #[arg(long, default_value_t = 1)]
    pub seed_stride: usize,
    /// Resample closed curves to this many vertices before matching.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl MatchArgs {
    pub fn options(&self) -> elastica::MatchOptions {
        elastica::MatchOptions {
            grid_n: self.grid,
            window: self.window,
            fixed_length: self.fixed_length,
            seed_stride: self.seed_stride.max(1),
            closed_samples: self.samples,
            ..elastica::MatchOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Aligned transform-space distance.
    Elastic,
    /// L2 gap between arclength-parameterized curves.
    Arclength,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the transform of a curve as CSV rows `t,re,im`.
    Transform {
        input: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rebuild a curve (starting at the origin) from a transform CSV.
    Invert {
        input: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Align two curves and print their distance.
    Match {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[command(flatten)]
        matching: MatchArgs,
        /// Write the optimal warp as CSV rows `t,gamma`.
        #[arg(long)]
        gamma: Option<PathBuf>,
    },
    /// Geodesic between two shapes; prints `dist=...`.
    Geodesic {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[command(flatten)]
        matching: MatchArgs,
        /// Treat both inputs as closed curves.
        #[arg(long)]
        closed: bool,
        /// Number of path points, endpoints included.
        #[arg(long, default_value_t = elastica::geodesics::DEFAULT_STEPS)]
        steps: usize,
        /// Write the curve evolution and the warp as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write one curve file per path point.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Project an open curve onto the closed curves; prints the final residual.
    Close {
        input: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[arg(short, long)]
        output: PathBuf,
        /// Target endpoint gap.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },
    /// Leave-one-out nearest-neighbor classification of a dataset directory.
    Classify {
        /// Directory with one subdirectory of curve files per class.
        root: PathBuf,
        #[command(flatten)]
        elastic: ElasticArgs,
        #[command(flatten)]
        matching: MatchArgs,
        #[arg(long, value_enum, default_value_t = Method::Elastic)]
        method: Method,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the distance matrix as CSV.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Write the text report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Sweep a/2b over 1/4, 1/2, 1, 2, 3, 4 and print a rate table.
        #[arg(long)]
        table: bool,
    },
    /// Convert whitespace-delimited point lists to curve files.
    Ingest {
        /// A point-list file, or a directory of class subdirectories.
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Close each outline.
        #[arg(long)]
        closed: bool,
        /// Resample each curve evenly in arclength to this many vertices.
        #[arg(long)]
        resample: Option<usize>,
    },
    /// Write a built-in curve or synthetic dataset.
    Sample {
        /// Curve or dataset name; `--list` shows the choices.
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        list: bool,
        /// Random seed for datasets.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Samples per class for datasets.
        #[arg(long, default_value_t = 10)]
        per_class: usize,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Transform { input, elastic, output } => commands::transform(&input, elastic.params()?, &output),
        Command::Invert {
            input,
            elastic,
            output,
            name,
        } => commands::invert(&input, elastic.params()?, &output, name.as_deref()),
        Command::Match {
            first,
            second,
            elastic,
            matching,
            gamma,
        } => commands::match_pair(&first, &second, elastic.params()?, &matching, gamma.as_deref()),
        Command::Geodesic {
            first,
            second,
            elastic,
            matching,
            closed,
            steps,
            svg,
            out_dir,
        } => commands::geodesic(&commands::GeodesicRequest {
            first: &first,
            second: &second,
            params: elastic.params()?,
            matching,
            closed,
            steps,
            svg: svg.as_deref(),
            out_dir: out_dir.as_deref(),
        }),
        Command::Close {
            input,
            elastic,
            output,
            tol,
            max_iter,
        } => commands::close(&input, elastic.params()?, &output, tol, max_iter),
        Command::Classify {
            root,
            elastic,
            matching,
            method,
            jobs,
            matrix,
            report,
            table,
        } => commands::classify(&commands::ClassifyRequest {
            root: &root,
            elastic,
            matching,
            method,
            jobs,
            matrix: matrix.as_deref(),
            report: report.as_deref(),
            table,
        }),
        Command::Ingest {
            input,
            output,
            closed,
            resample,
        } => commands::ingest(&input, &output, closed, resample),
        Command::Sample {
            name,
            output,
            list,
            seed,
            per_class,
        } => commands::sample(name.as_deref(), output.as_deref(), list, seed, per_class),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ELASTICA_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
