use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entropy_shortcut::dynamics::{equilibrium_population, read_protocol_csv, ThermalContext};
use entropy_shortcut::harness::{self, RunConfig};
use entropy_shortcut::oracle::{reachability, DEFAULT_SAMPLES};
use entropy_shortcut::policy::Checkpoint;
use entropy_shortcut::{Error, Result};

/// Minimum-entropy-production protocols for a driven two-level system.
///
/// Exit codes: 0 success, 2 usage or invalid input, 3 unreachable target,
/// 4 numerical failure or divergence, 1 I/O.
#[derive(Parser)]
#[command(name = "shortcut", version)]
struct Cli {
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides SHORTCUT_OUT and the config).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Run sweep targets sequentially; replay checkpoints with mean actions.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the reachability bound for the start state.
    Bound {
        /// Initial ground-state population (instead of lambda_i).
        #[arg(long)]
        p_i: Option<f64>,
        #[arg(long)]
        lambda_i: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Solve the classical variational problem and write oracle.csv and oracle.meta.
    Oracle {
        #[arg(long)]
        lambda_f: Option<f64>,
        #[arg(long)]
        lambda_i: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Train one policy; writes checkpoint, learning curve and evaluation trajectory.
    Train {
        /// Continue from the checkpoint in the output directory.
        #[arg(long)]
        resume: bool,
    },
    /// Train one policy per lambda_f and write sweep.csv.
    Sweep {
        #[arg(long)]
        resume: bool,
    },
    /// Replay a stored protocol or a checkpointed policy.
    Evolve {
        /// CSV with epsilon,lam columns or a trajectory CSV.
        #[arg(long, value_name = "PATH", conflicts_with = "checkpoint", required_unless_present = "checkpoint")]
        protocol: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.deterministic {
        cfg.sequential = true;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(&cli)?;
    let out = harness::resolve_out_dir(cli.out.as_deref(), &cfg);
    match cli.command {
        Command::Bound { p_i, lambda_i, tau, beta } => {
            if p_i.is_some() && lambda_i.is_some() {
                return Err(Error::InvalidInput("give either --p-i or --lambda-i, not both".into()));
            }
            let ctx = ThermalContext::new(beta.unwrap_or(cfg.beta))?;
            let tau = tau.unwrap_or(cfg.tau);
            let p_i = p_i.unwrap_or_else(|| equilibrium_population(lambda_i.unwrap_or(cfg.lambda_i), ctx));
            let b = reachability(p_i, tau, ctx)?;
            println!("p_i={p_i}\ntau={tau}\nbeta={}\np_f_max={}\nlambda_f_max={}", ctx.beta, b.p_f_max, b.lambda_f_max);
        }
        Command::Oracle { lambda_f, lambda_i, tau, beta, samples } => {
            cfg.lambda_i = lambda_i.unwrap_or(cfg.lambda_i);
            cfg.tau = tau.unwrap_or(cfg.tau);
            cfg.beta = beta.unwrap_or(cfg.beta);
            let lambda_f = lambda_f.unwrap_or(cfg.lambda_f[0]);
            let sol = harness::run_oracle(&cfg, lambda_f, samples, &out)?;
            println!("K={}\nsigma_min={}\nout={}", sol.k, sol.sigma_min, out.display());
        }
        Command::Train { resume } => {
            let s = harness::run_train(&cfg, &out, resume)?;
            println!("episodes={}\ndelta_d={}\nsigma={}", s.episodes, s.delta_d, s.sigma);
            if let Some(o) = s.oracle_sigma {
                println!("oracle_sigma={o}");
            }
            println!("converged={}\nout={}", s.converged, out.display());
        }
        Command::Sweep { resume } => {
            let rows = harness::run_sweep(&cfg, &out, resume)?;
            for r in &rows {
                let oracle = r.oracle_sigma.map(|o| format!("{o:.6}")).unwrap_or_else(|| "-".into());
                match &r.error {
                    None => println!("lambda_f={:.4} delta_d={:.6} sigma={:.6} oracle={oracle}", r.lambda_f, r.delta_d, r.sigma_min),
                    Some(e) => println!("lambda_f={:.4} error: {e}", r.lambda_f),
                }
            }
            println!("out={}", out.join("sweep.csv").display());
        }
        Command::Evolve { protocol, checkpoint } => {
            let (traj, dd) = match (protocol, checkpoint) {
                (Some(p), _) => harness::run_evolve(&cfg, &read_protocol_csv(&p)?, &out)?,
                (None, Some(c)) => harness::run_replay(&cfg, &Checkpoint::load(&c)?, cfg.seed, cli.deterministic, &out)?,
                (None, None) => return Err(Error::InvalidInput("evolve needs --protocol or --checkpoint".into())),
            };
            println!("sigma={}\ndelta_d={dd}\nout={}", traj.sigma_total, out.join("trajectory.csv").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
