use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperminhash::experiment::{
    run_collision_trials, run_similarity_sweep, write_sweep_csv, SweepConfig, DEFAULT_MAX_ITEMS,
};
use hyperminhash::{
    collision_bound, deserialize, estimate_cardinality, expected_collisions_approx,
    expected_collisions_exact, intersection, jaccard, serialize, Correction, Error, HmhSketch,
    SketchParams,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_IO: u8 = 3;
const EXIT_INCOMPATIBLE: u8 = 4;
const EXIT_INVALID: u8 = 5;

#[derive(Parser)]
#[command(
    name = "hmh",
    version,
    about = "HyperMinHash sketches: cardinality, Jaccard and intersection estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Bucket-count exponent (2^p buckets)
    #[arg(short, default_value_t = 12)]
    p: u8,
    /// Exponent cap parameter (exponents in 1..=2^q)
    #[arg(short, default_value_t = 6)]
    q: u8,
    /// Mantissa bits
    #[arg(short, default_value_t = 10)]
    r: u8,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    #[arg(long, env = "HMH_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrectionArg {
    None,
    Exact,
    Approx,
}

impl From<CorrectionArg> for Correction {
    fn from(c: CorrectionArg) -> Self {
        match c {
            CorrectionArg::None => Correction::None,
            CorrectionArg::Exact => Correction::Exact,
            CorrectionArg::Approx => Correction::Approximate,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sketch a newline-delimited item stream (one item per line)
    Sketch {
        /// Input file; standard input when omitted or "-"
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Merge two sketches into the sketch of the union
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Estimate the number of distinct items in a sketch
    Card { sketch: PathBuf },
    /// Estimate the Jaccard index of two sketches
    Jaccard {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        correction: CorrectionArg,
    },
    /// Estimate the intersection cardinality of two sketches
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        correction: CorrectionArg,
    },
    /// Expected accidental collisions between sketches of disjoint sets
    ExpectedCollisions {
        #[arg(short)]
        n: f64,
        #[arg(short)]
        m: f64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, conflicts_with = "approx")]
        exact: bool,
        #[arg(long)]
        approx: bool,
    },
    /// Jaccard accuracy sweep of equal-budget sketches (CSV)
    Sweep {
        /// Set cardinalities, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = [1024u64, 4096, 16384, 65536])]
        cardinalities: Vec<u64>,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        jaccard: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITEMS)]
        max_items: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Check the collision model against sketches of random disjoint sets (CSV)
    VerifyCollisions {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short)]
        n: u64,
        #[arg(short)]
        m: u64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

enum CliError {
    Io(PathBuf, io::Error),
    File(PathBuf, Error),
    Sketch(Error),
    VerifyFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) | CliError::File(..) => EXIT_IO,
            CliError::Sketch(Error::IncompatibleParams) => EXIT_INCOMPATIBLE,
            CliError::Sketch(_) => EXIT_INVALID,
            CliError::VerifyFailed => EXIT_VERIFY_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::File(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Sketch(e) => write!(f, "{e}"),
            CliError::VerifyFailed => write!(f, "collision model check failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Sketch(e)
    }
}

fn stdout_error(e: impl Into<io::Error>) -> CliError {
    CliError::Io(PathBuf::from("<stdout>"), e.into())
}

fn read_sketch(path: &Path) -> Result<HmhSketch, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    deserialize(&bytes).map_err(|e| CliError::File(path.to_owned(), e))
}

fn write_sketch(path: &Path, sketch: &HmhSketch) -> Result<(), CliError> {
    std::fs::write(path, serialize(sketch)).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn sketch_stream(
    input: Option<&Path>,
    output: &Path,
    params: SketchParams,
) -> Result<(u64, f64), CliError> {
    let (name, reader): (PathBuf, Box<dyn Read>) = match input {
        Some(path) if path != Path::new("-") => {
            let file = File::open(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
            (path.to_owned(), Box::new(file))
        }
        _ => (PathBuf::from("<stdin>"), Box::new(io::stdin().lock())),
    };
    let mut sketch = HmhSketch::new(params);
    let mut count = 0u64;
    for line in BufReader::with_capacity(1 << 16, reader).split(b'\n') {
        let line = line.map_err(|e| CliError::Io(name.clone(), e))?;
        sketch.insert(&line);
        count += 1;
    }
    write_sketch(output, &sketch)?;
    Ok((count, estimate_cardinality(&sketch)?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Sketch {
            input,
            output,
            params,
            seed,
        } => {
            let params = SketchParams::with_seed(params.p, params.q, params.r, seed.seed)?;
            let (items, distinct) = sketch_stream(input.as_deref(), &output, params)?;
            writeln!(out, "items={items} distinct_estimate={distinct:.1}").map_err(stdout_error)?;
        }
        Command::Union { a, b, output } => {
            let merged = read_sketch(&a)?.union(&read_sketch(&b)?)?;
            write_sketch(&output, &merged)?;
        }
        Command::Card { sketch } => {
            let estimate = estimate_cardinality(&read_sketch(&sketch)?)?;
            writeln!(out, "{estimate:.1}").map_err(stdout_error)?;
        }
        Command::Jaccard { a, b, correction } => {
            let j = jaccard(&read_sketch(&a)?, &read_sketch(&b)?, correction.into())?;
            writeln!(
                out,
                "jaccard={:.6} matched={} occupied={} expected_collisions={:.6}",
                j.estimate, j.matched, j.occupied, j.correction
            )
            .map_err(stdout_error)?;
        }
        Command::Intersect { a, b, correction } => {
            let i = intersection(&read_sketch(&a)?, &read_sketch(&b)?, correction.into())?;
            writeln!(out, "{i:.1}").map_err(stdout_error)?;
        }
        Command::ExpectedCollisions {
            n,
            m,
            params,
            approx,
            ..
        } => {
            let params = SketchParams::new(params.p, params.q, params.r)?;
            let (big, small) = (n.max(m), n.min(m));
            let expected = if approx {
                expected_collisions_approx(big, small, &params)?
            } else {
                expected_collisions_exact(big, small, &params)
            };
            let bound = collision_bound(big, &params);
            writeln!(out, "expected_collisions={expected} bound={bound}").map_err(stdout_error)?;
        }
        Command::Sweep {
            cardinalities,
            trials,
            jaccard,
            max_items,
            seed,
        } => {
            let mut config = SweepConfig::new(cardinalities, trials, jaccard, seed.seed);
            config.max_items = max_items;
            let rows = run_similarity_sweep(&config)?;
            write_sweep_csv(&rows, &mut out).map_err(stdout_error)?;
        }
        Command::VerifyCollisions {
            params,
            n,
            m,
            trials,
            seed,
        } => {
            let params = SketchParams::new(params.p, params.q, params.r)?;
            let summary = run_collision_trials(params, n, m, trials, seed.seed)?;
            summary.write_csv(&mut out).map_err(stdout_error)?;
            out.flush().map_err(stdout_error)?;
            if !summary.passed() {
                return Err(CliError::VerifyFailed);
            }
        }
    }
    out.flush().map_err(stdout_error)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hmh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
