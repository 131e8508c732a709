use clap::{Parser, Subcommand, ValueEnum};
use locbound::asymptotic::{
    asymptotic_rmse_joint, asymptotic_rmse_rss, mean_fim_norm_joint, mean_fim_norm_rss,
    required_n_joint, required_n_rss, AsymptoticParams, SecondMoment,
};
use locbound::config::{format_scenario, parse_config, parse_scenario, Config};
use locbound::experiments::{run_figure_suite, run_one_figure};
use locbound::fim::{crb_from_fim, joint_fim, rss_fim, QuadratureSpec};
use locbound::scenario::generate_scenario;
use locbound::{DoaModel, Error, Result};
use std::path::{Path, PathBuf};

/// Position error bounds and localizer benchmarks for a sensor network that
/// observes a transmitter through received signal strength and direction of
/// arrival.
#[derive(Parser)]
#[command(name = "locbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the error bound for a fixed scenario file.
    Bound {
        /// Scenario file: one `pu <x> <y>` line, then `cr <x> <y> <orientation>` lines.
        #[arg(long)]
        scenario: PathBuf,
        /// Config file; reference defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Measurement model the bound assumes.
        #[arg(long, value_enum, default_value_t = Model::Optimal)]
        model: Model,
    },
    /// Print the closed-form large-network bounds at a given node count.
    Asymptotic {
        /// Number of sensors.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Orientation moment convention in the second Frobenius moment.
        #[arg(long, value_enum, default_value_t = Moment::Exact)]
        moment: Moment,
    },
    /// Node count keeping the network-averaged information near its mean.
    RequiredN {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Allowed probability of a larger deviation, in (0, 1].
        #[arg(long, default_value_t = 0.15)]
        eta: f64,
        /// Absolute deviation threshold; overrides --delta0-scale.
        #[arg(long)]
        delta0: Option<f64>,
        /// Threshold as a multiple of the mean-information Frobenius norm
        /// (defaults: 1 for the RSS bound, 2 for the joint bound).
        #[arg(long)]
        delta0_scale: Option<f64>,
    },
    /// Run the predefined figure sweeps and write CSV tables plus a manifest.
    Sweep {
        /// Output directory for the tables.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Random placements per sweep point.
        #[arg(long)]
        placements: Option<usize>,
        /// Noise draws per placement.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Run a single figure by name instead of the full suite.
        #[arg(long)]
        figure: Option<String>,
    },
    /// Generate a random scenario file from the placement distribution.
    GenScenario {
        /// Number of sensors.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Rss,
    Optimal,
    Music,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Moment {
    Exact,
    Upper,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bound { scenario, config, model } => cmd_bound(&scenario, &config, model),
        Command::Asymptotic { n, config, moment } => cmd_asymptotic(n, &config, moment),
        Command::RequiredN { config, eta, delta0, delta0_scale } => {
            cmd_required_n(&config, eta, delta0, delta0_scale)
        }
        Command::Sweep { out, config, placements, trials, seed, jobs, figure } => {
            cmd_sweep(&out, &config, placements, trials, seed, jobs, figure.as_deref())
        }
        Command::GenScenario { n, seed, out, config } => {
            cmd_gen_scenario(n, seed, &out, &config)
        }
    }
}

// Exit code 2 marks bad input (usage, config, scenario); 3 marks inputs that
// parse but describe an infeasible computation.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::InvalidParameter(_) => 2,
        _ => 3,
    }
}

fn cmd_bound(scenario_path: &Path, config: &Option<PathBuf>, model: Model) -> Result<()> {
    let config = load_config(config)?;
    let scenario = parse_scenario(&read_file(scenario_path)?)?;
    let quad = QuadratureSpec::default();
    let fim = match model {
        Model::Rss => rss_fim(&config.bundle.ch, &scenario)?,
        Model::Optimal => joint_fim(
            DoaModel::OptimalCrb,
            &config.bundle.ch,
            &config.bundle.arr,
            &scenario,
            &quad,
        )?,
        Model::Music => joint_fim(
            DoaModel::Music,
            &config.bundle.ch,
            &config.bundle.arr,
            &scenario,
            &quad,
        )?,
    };
    let crb = crb_from_fim(&fim)?;
    let model_name = match model {
        Model::Rss => "rss",
        Model::Optimal => "optimal",
        Model::Music => "music",
    };
    println!("model {model_name}");
    println!("sensors {}", scenario.n());
    println!("fim_xx_per_m2 {}", sig4(crb.fim.matrix[(0, 0)]));
    println!("fim_xy_per_m2 {}", sig4(crb.fim.matrix[(0, 1)]));
    println!("fim_yy_per_m2 {}", sig4(crb.fim.matrix[(1, 1)]));
    println!("cov_xx_m2 {}", sig4(crb.covariance_bound[(0, 0)]));
    println!("cov_xy_m2 {}", sig4(crb.covariance_bound[(0, 1)]));
    println!("cov_yy_m2 {}", sig4(crb.covariance_bound[(1, 1)]));
    println!("rmse_bound_m {}", sig4(crb.rmse_bound));
    Ok(())
}

fn cmd_asymptotic(n: usize, config: &Option<PathBuf>, moment: Moment) -> Result<()> {
    let config = load_config(config)?;
    let params = AsymptoticParams {
        dist: config.bundle.dist,
        ch: config.bundle.ch,
        arr: config.bundle.arr,
    };
    if params.correlation_ignored() {
        eprintln!("note: the asymptotic model assumes independent shadowing; x_c is ignored");
    }
    let moments = params.moments(second_moment(moment))?;
    println!("n_sensors {n}");
    println!("moment {}", moment_name(moment));
    println!("f_phi_per_m2 {}", sig4(moments.f_phi));
    println!("f_theta_phi_per_m2 {}", sig4(moments.f_theta_phi));
    println!("e_fn_per_m2 {}", sig4(moments.e_fn));
    println!("e_fn2_per_m4 {}", sig4(moments.e_fn2));
    println!("rmse_rss_m {}", sig4(asymptotic_rmse_rss(&params.dist, &params.ch, n)?));
    println!(
        "rmse_joint_m {}",
        sig4(asymptotic_rmse_joint(&params.dist, &params.ch, &params.arr, n)?)
    );
    Ok(())
}

fn cmd_required_n(
    config: &Option<PathBuf>,
    eta: f64,
    delta0: Option<f64>,
    delta0_scale: Option<f64>,
) -> Result<()> {
    let config = load_config(config)?;
    let bundle = &config.bundle;
    let norm_rss = mean_fim_norm_rss(&bundle.dist, &bundle.ch)?;
    let norm_joint = mean_fim_norm_joint(&bundle.dist, &bundle.ch, &bundle.arr)?;
    let (delta0_rss, delta0_joint) = match (delta0, delta0_scale) {
        (Some(d), _) => (d, d),
        (None, Some(s)) => (s * norm_rss, s * norm_joint),
        (None, None) => (norm_rss, 2.0 * norm_joint),
    };
    let rss = required_n_rss(&bundle.dist, &bundle.ch, delta0_rss, eta)?;
    let joint_upper = required_n_joint(
        &bundle.dist,
        &bundle.ch,
        &bundle.arr,
        delta0_joint,
        eta,
        SecondMoment::UpperBound,
    )?;
    let joint_exact = required_n_joint(
        &bundle.dist,
        &bundle.ch,
        &bundle.arr,
        delta0_joint,
        eta,
        SecondMoment::Exact,
    )?;
    println!("eta {}", sig4(eta));
    println!("delta0_rss {}", sig4(delta0_rss));
    println!("required_n_rss {}", rss.count);
    println!("raw_bound_rss {}", sig4(rss.raw_bound));
    println!("delta0_joint {}", sig4(delta0_joint));
    println!("required_n_joint_upper {}", joint_upper.count);
    println!("raw_bound_joint_upper {}", sig4(joint_upper.raw_bound));
    println!("required_n_joint_exact {}", joint_exact.count);
    println!("raw_bound_joint_exact {}", sig4(joint_exact.raw_bound));
    Ok(())
}

fn cmd_sweep(
    out: &Path,
    config: &Option<PathBuf>,
    placements: Option<usize>,
    trials: Option<usize>,
    seed: u64,
    jobs: Option<usize>,
    figure: Option<&str>,
) -> Result<()> {
    let config = load_config(config)?;
    let placements = placements.unwrap_or(config.placements);
    let trials = trials.unwrap_or(config.noise_trials);
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    }
    match figure {
        Some(name) => {
            let report = run_one_figure(name, out, seed, placements, trials)?;
            println!(
                "wrote {} ({} rows, {} ms)",
                report.file.display(),
                report.rows,
                report.wall_ms
            );
        }
        None => {
            let manifest = run_figure_suite(out, seed, placements, trials)?;
            for report in &manifest.reports {
                println!(
                    "wrote {} ({} rows, {} ms)",
                    report.file.display(),
                    report.rows,
                    report.wall_ms
                );
            }
            println!("manifest {}", manifest.manifest_file.display());
        }
    }
    Ok(())
}

fn cmd_gen_scenario(
    n: usize,
    seed: u64,
    out: &Option<PathBuf>,
    config: &Option<PathBuf>,
) -> Result<()> {
    let config = load_config(config)?;
    let scenario = generate_scenario(&config.bundle.dist, n, seed)?;
    let text = format_scenario(&scenario);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

// --- private helpers ---

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        Some(p) => parse_config(&read_file(p)?),
        None => Ok(Config::default()),
    }
}

fn second_moment(moment: Moment) -> SecondMoment {
    match moment {
        Moment::Exact => SecondMoment::Exact,
        Moment::Upper => SecondMoment::UpperBound,
    }
}

fn moment_name(moment: Moment) -> &'static str {
    match moment {
        Moment::Exact => "exact",
        Moment::Upper => "upper",
    }
}

// Four significant digits: fixed point near unit scale, scientific otherwise.
fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-3..4).contains(&exp) {
        let decimals = (3 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.3e}")
    }
}
