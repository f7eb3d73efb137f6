//! Command-line front door: parse JSON inputs, dispatch to the library, emit
//! deterministic JSON or CSV reports on stdout (or `--out`). Wall time goes
//! to stderr so reports stay byte-identical across runs.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bigramsey::cli::{self, CliError, Ctx};
use bigramsey::harness::DEFAULT_MAX_COLOURINGS;
use bigramsey::report::{sha256_hex, InputDigest, Report};
use bigramsey::scalar::Scalar;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "bigramsey", version, about = "Finite-scale machinery for metric big Ramsey degrees")]
struct Args {
    /// Approximation tolerance for metric commands, as a rational.
    #[arg(long, global = true, default_value = "1/1000")]
    eps: String,
    /// Seed for the ChaCha8 generator behind every randomized experiment.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on exhaustive colouring enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COLOURINGS)]
    max_colourings: u128,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Colour a sphere tuple by its pumpkin and diagnose it.
    Pp {
        /// Tuple JSON file ("-" for stdin).
        input: PathBuf,
    },
    /// Certified chain distance between two pumpkin files.
    Dist { left: PathBuf, right: PathBuf },
    /// Least 1-Lipschitz surjection SOURCE -> TARGET, if any.
    Order { source: PathBuf, target: PathBuf },
    /// Transport a coloured tuple net along sampled spread embeddings and
    /// report the minimum observed image diameter.
    Oscillation {
        /// Colouring JSON file: tuples, target space, table.
        colouring: PathBuf,
        /// Number of embeddings to sample.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Brute-force least colour count over the subcopies of a copy system.
    Ramsey { system: PathBuf },
    /// Exhaustive combinatorial-line check.
    Hj {
        alphabet: usize,
        colours: usize,
        len: usize,
    },
    /// Enumerate rigid surjections [domain] -> [range].
    Rigid { domain: usize, range: usize },
    /// Intertwining counts of disjointly supported vectors.
    Intertwine { input: PathBuf },
}

fn read_input(path: &PathBuf) -> Result<(String, InputDigest), CliError> {
    let (bytes, shown) = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        (buf, "-".to_string())
    } else {
        let buf = std::fs::read(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        (buf, path.display().to_string())
    };
    let digest = InputDigest {
        path: shown,
        sha256: sha256_hex(&bytes),
    };
    let text = String::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok((text, digest))
}

fn run(args: &Args) -> Result<Report, CliError> {
    let eps: Scalar = args
        .eps
        .parse()
        .map_err(|e| CliError::Parse(format!("--eps: {e}")))?;
    let ctx = Ctx {
        eps: eps.clone(),
        seed: args.seed,
        max_colourings: args.max_colourings,
    };
    let base_params = json!({
        "eps": eps.to_string(),
        "seed": args.seed,
        "max_colourings": args.max_colourings.to_string(),
        "generator": "chacha8",
    });

    let (name, inputs, result) = match &args.cmd {
        Cmd::Pp { input } => {
            let (text, digest) = read_input(input)?;
            ("pp", vec![digest], cli::cmd_pp(&text, &ctx)?)
        }
        Cmd::Dist { left, right } => {
            let (lt, ld) = read_input(left)?;
            let (rt, rd) = read_input(right)?;
            ("dist", vec![ld, rd], cli::cmd_dist(&lt, &rt, &ctx)?)
        }
        Cmd::Order { source, target } => {
            let (st, sd) = read_input(source)?;
            let (tt, td) = read_input(target)?;
            ("order", vec![sd, td], cli::cmd_order(&st, &tt)?)
        }
        Cmd::Oscillation { colouring, count } => {
            let (text, digest) = read_input(colouring)?;
            (
                "oscillation",
                vec![digest],
                cli::cmd_oscillation(&text, *count, &ctx)?,
            )
        }
        Cmd::Ramsey { system } => {
            let (text, digest) = read_input(system)?;
            ("ramsey", vec![digest], cli::cmd_ramsey(&text, &ctx)?)
        }
        Cmd::Hj {
            alphabet,
            colours,
            len,
        } => (
            "hj",
            vec![],
            cli::cmd_hj(*alphabet, *colours, *len, &ctx)?,
        ),
        Cmd::Rigid { domain, range } => ("rigid", vec![], cli::cmd_rigid(*domain, *range)?),
        Cmd::Intertwine { input } => {
            let (text, digest) = read_input(input)?;
            ("intertwine", vec![digest], cli::cmd_intertwine(&text)?)
        }
    };
    Ok(Report::new(name, inputs, base_params, result))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let started = Instant::now();
    match run(&args) {
        Ok(report) => {
            let body = match args.format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.to_csv_string(),
            };
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{body}");
            }
            eprintln!(
                "# {} finished in {:.3}s",
                report.command,
                started.elapsed().as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
