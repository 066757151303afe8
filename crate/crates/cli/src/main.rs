use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use reebsnake_cli::{
    diagnostic, exit_code, parse_direction, parse_emit, parse_epsilon, run, Artifact, RunConfig, RunError,
};

/// Poincaré-Reeb tree and snakes of the small level curves of a polynomial
/// with a strict local minimum at the origin.
#[derive(Parser, Debug)]
#[command(name = "reebsnake", version)]
struct Args {
    /// Polynomial in x and y, e.g. "x^2 + y^2".
    #[arg(long, conflicts_with = "poly_file")]
    poly: Option<String>,
    /// File holding the polynomial.
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Half-angle t, an exact pair "c,s", or "auto".
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    direction: String,
    /// Level p/q, or "auto".
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    epsilon: String,
    /// Directions scanned when --direction auto.
    #[arg(long, default_value_t = 64)]
    scan_points: u32,
    /// Comma-separated subset of json,dot,svg,summary.
    #[arg(long, default_value = "summary")]
    emit: String,
    /// Output directory for files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for a random polynomial when no --poly is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn config(args: Args) -> Result<RunConfig, RunError> {
    let polynomial_text = match (&args.poly, &args.poly_file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?,
        (None, None) => String::new(),
    };
    Ok(RunConfig {
        polynomial_text,
        direction: parse_direction(&args.direction)?,
        epsilon: parse_epsilon(&args.epsilon)?,
        scan_points: args.scan_points,
        emit: parse_emit(&args.emit)?,
        output_dir: args.out,
        seed: args.seed,
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("REEBSNAKE_LOG")).init();
    let args = Args::parse();
    let result = config(args).and_then(|cfg| {
        let out = run(&cfg)?;
        if cfg.emit.contains(&Artifact::Summary) {
            print!("{}", out.summary);
        }
        for p in &out.written {
            log::info!("wrote {}", p.display());
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
