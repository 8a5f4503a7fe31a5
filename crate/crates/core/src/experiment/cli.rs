use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{resolve_out_dir, run_scenario, run_with_jobs, Scenario, ScenarioConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "predgain",
    version,
    about = "Run predictive-routing experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides PREDGAIN_OUT_DIR and the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a config file and print it with every default filled in.
    Validate { config: PathBuf },
    /// Print the available scenarios.
    ListScenarios,
}

/// Parses `args` (program name first), executes the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                println!("{:<20} {}", s.name(), s.description());
            }
            EXIT_OK
        }
        Command::Validate { config } => match ScenarioConfig::load(&config) {
            Ok(c) => {
                println!("{}", c.to_json());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("{e}");
                EXIT_CONFIG
            }
        },
        Command::Run {
            config,
            seed,
            out,
            jobs,
        } => {
            let mut cfg = match ScenarioConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_CONFIG;
                }
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if jobs == Some(0) {
                eprintln!("--jobs: must be >= 1");
                return EXIT_CONFIG;
            }
            let out_dir = resolve_out_dir(out.as_deref(), &cfg);
            let result = match jobs {
                Some(k) => run_with_jobs(&cfg, &out_dir, k),
                None => run_scenario(&cfg, &out_dir),
            };
            match result {
                Ok(summary) => {
                    for f in &summary.files {
                        println!("{}", f.display());
                    }
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_RUNTIME
                }
            }
        }
    }
}
