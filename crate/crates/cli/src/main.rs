use std::path::PathBuf;
use std::process::ExitCode;

use ccm::app::{analyze_candidate, run_synthesis, RunOptions};
use clap::{Args, Parser, Subcommand};

/// Topology synthesis of contact-aided compliant mechanisms.
///
/// The worker thread count can be set with the CCM_THREADS environment
/// variable.
#[derive(Parser)]
#[command(name = "ccm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the stochastic search for a problem specification.
    Synth {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Validate the specification and draw the initial guess only.
        #[arg(long)]
        dry_run: bool,
    },
    /// Analyze one design, optionally across mesh scales and quadratures.
    Analyze {
        spec: PathBuf,
        design: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_evals: Option<usize>,
    /// Mesh refinement factors, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    mesh_scale: Vec<usize>,
    /// Points per fan triangle (1, 3, 7 or 25), comma separated.
    #[arg(long, value_delimiter = ',')]
    gauss_points: Vec<usize>,
    /// Boundary smoothing steps.
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

impl Common {
    fn options(self, dry_run: bool) -> RunOptions {
        RunOptions {
            seed: self.seed,
            max_evals: self.max_evals,
            mesh_scales: self.mesh_scale,
            gauss_points: self.gauss_points,
            beta: self.beta,
            dry_run,
            out_dir: self.out_dir,
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CCM_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("CCM_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match cli.command {
        Command::Synth { spec, common, dry_run } => match run_synthesis(&spec, &common.options(dry_run)) {
            Ok(r) => {
                if let Some(o) = &r.outcome {
                    println!("best objective {:?} after {} evaluations", o.best_f, o.trace.records.len());
                }
                match r.failure {
                    Some(reason) => {
                        eprintln!("incomplete: {reason}");
                        ExitCode::from(3)
                    }
                    None => {
                        println!("artifacts in {}", r.out_dir.display());
                        ExitCode::SUCCESS
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Analyze { spec, design, common } => match analyze_candidate(&spec, &design, &common.options(false)) {
            Ok(r) => {
                for row in &r.rows {
                    println!(
                        "scale {} gauss {}: objective {:?}, path length {:.4}, {:.2}s{}",
                        row.mesh_scale,
                        row.gauss_points,
                        row.objective,
                        row.length,
                        row.seconds,
                        row.failure.as_ref().map_or(String::new(), |f| format!(" ({f})"))
                    );
                }
                println!("artifacts in {}", r.out_dir.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
