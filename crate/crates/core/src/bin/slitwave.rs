use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slitwave::oracle::{convolve_kernel, QuadratureSpec, Scheme};
use slitwave::run::run_with_workers;
use slitwave::scenario::{ScenarioConfig, PRESETS};
use slitwave::wavefield::packet;
use slitwave::{Error, Result, ScenarioParams};

#[derive(Parser)]
#[command(name = "slitwave", version, about = "N-slit Gaussian wavepacket interference and Bohmian trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a key=value config file and write its outputs.
    Run(RunArgs),
    /// List the built-in presets with their Talbot lengths.
    Presets,
    /// Compare the slit convolution quadrature with the closed-form packet.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset name or path to a config file.
    scenario: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    lambda_nm: Option<f64>,
    #[arg(long)]
    slits: Option<usize>,
    #[arg(long)]
    pitch_nm: Option<f64>,
    #[arg(long)]
    width_nm: Option<f64>,
    #[arg(long)]
    sigma_nm: Option<f64>,
    #[arg(long)]
    grid_nx: Option<usize>,
    #[arg(long)]
    grid_nz: Option<usize>,
    #[arg(long)]
    zmax_talbots: Option<f64>,
    #[arg(long)]
    per_slit: Option<usize>,
    /// Worker threads for the grid fill and trajectory batch.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0.5)]
    lambda_nm: f64,
    #[arg(long, default_value_t = 5.0)]
    pitch_nm: f64,
    #[arg(long, default_value_t = 1.0)]
    width_nm: f64,
    #[arg(long, default_value_t = 0.0)]
    x_nm: f64,
    #[arg(long, default_value_t = 50.0)]
    z_nm: f64,
    #[arg(long, default_value_t = 4000)]
    points: usize,
}

fn load(args: &RunArgs) -> Result<ScenarioConfig> {
    let mut cfg = if PRESETS.contains(&args.scenario.as_str()) {
        ScenarioConfig::preset(&args.scenario)?
    } else {
        let path = PathBuf::from(&args.scenario);
        if !path.is_file() {
            return Err(Error::Config(format!(
                "'{}' is neither a preset ({}) nor a readable file",
                args.scenario,
                PRESETS.join(", ")
            )));
        }
        ScenarioConfig::parse(&std::fs::read_to_string(&path)?)?
    };
    let overrides: [(&str, Option<String>); 9] = [
        ("wavelength", args.lambda_nm.map(|v| v.to_string())),
        ("slit_count", args.slits.map(|v| v.to_string())),
        ("slit_pitch", args.pitch_nm.map(|v| v.to_string())),
        ("slit_width", args.width_nm.map(|v| v.to_string())),
        ("sigma", args.sigma_nm.map(|v| v.to_string())),
        ("grid_nx", args.grid_nx.map(|v| v.to_string())),
        ("grid_nz", args.grid_nz.map(|v| v.to_string())),
        ("zmax_talbots", args.zmax_talbots.map(|v| v.to_string())),
        ("per_slit", args.per_slit.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<()> {
    let scenario = load(&args)?.resolve()?;
    let summary = run_with_workers(&scenario, &args.out, args.workers)?;
    println!("{}", summary.line());
    Ok(())
}

fn presets() -> Result<()> {
    for name in PRESETS {
        let s = ScenarioConfig::preset(name)?.resolve()?;
        println!("{name:<12} z_T={} nm", s.talbot_length());
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let params = ScenarioParams::new(args.lambda_nm, 1, args.pitch_nm, args.width_nm)?;
    let spec = QuadratureSpec::covering(&params, args.points, Scheme::GaussLegendre);
    let numeric = convolve_kernel(&params, &spec, 0, args.x_nm, args.z_nm)?;
    let closed = packet(&params, 0, args.x_nm, args.z_nm);
    let ratio = numeric / closed;
    println!("quadrature  = {numeric:e}");
    println!("closed form = {closed:e}");
    println!("ratio       = {ratio:e}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets => presets(),
        Command::Oracle(args) => oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
