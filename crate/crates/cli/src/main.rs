//! Command-line front end: generate instances, analyze their walks,
//! build schedules, run sweeps, fit slopes, and tabulate the radius
//! tradeoff.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use slotmix::{
    audit_records, build_cluster_graph, build_disk_graph, build_longrange_graph, fit_slope,
    greedy_schedule, guard_zone_lower_bound, lattice_schedule, min_theta_search, parse_records,
    plot_script, rate_tradeoff, run_sweep, sample_points, validate_schedule, ExperimentConfig,
    MixingMode, PointSet, RadioConfig, SpectralReport, TopologyGraph,
};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "slotmix",
    version,
    about = "Random geometric networks on the unit torus: walks, schedules, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a point set, build a graph, and write both as text files
    Generate(GenerateArgs),
    /// One-instance spectral report (gap, conductance, mixing bounds)
    Analyze(AnalyzeArgs),
    /// Build a transmission schedule for an instance and validate it
    Schedule(ScheduleArgs),
    /// Run a full sweep from a config file and export the records CSV
    Sweep(SweepArgs),
    /// Fit log-log slopes over an exported records CSV
    Fit(FitArgs),
    /// Tabulate the radius-multiple cost curve and its minimizer
    Tradeoff(TradeoffArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMixing {
    Auto,
    Empirical,
    Proxy,
}

impl From<CliMixing> for MixingMode {
    fn from(m: CliMixing) -> Self {
        match m {
            CliMixing::Auto => MixingMode::Auto,
            CliMixing::Empirical => MixingMode::Empirical,
            CliMixing::Proxy => MixingMode::Proxy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Plain,
}

#[derive(Args)]
struct GenerateArgs {
    /// Torus dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of nodes
    #[arg(long)]
    n: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Communication radius
    #[arg(long)]
    r: f64,
    /// Graph kind: disk, longrange, or cluster
    #[arg(long, default_value = "disk")]
    kind: String,
    /// Long-range spacing exponent
    #[arg(long)]
    gamma: Option<f64>,
    /// Tiling scale for long-range partner selection
    #[arg(long)]
    eta: Option<f64>,
    /// Partners adopted per tile in the cluster kind
    #[arg(long)]
    rho: Option<usize>,
    /// Output directory for points.txt and graph.txt
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct InstanceArgs {
    /// Point-set file written by generate
    #[arg(long)]
    points: PathBuf,
    /// Graph file written by generate
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Total-variation target; defaults to 1/n
    #[arg(long)]
    epsilon: Option<f64>,
    /// Empirical mixing measurement policy
    #[arg(long, value_enum, default_value_t = CliMixing::Auto)]
    mixing_mode: CliMixing,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Path-loss exponent
    #[arg(long)]
    alpha: f64,
    /// SIR decoding threshold
    #[arg(long)]
    beta: f64,
    /// Scheduler: lattice or greedy
    #[arg(long, default_value = "lattice")]
    protocol: String,
    /// Lattice separation; defaults to the smallest feasible value
    #[arg(long)]
    theta: Option<f64>,
    /// Greedy tie-breaking seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the schedule here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config and the environment
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's mixing mode
    #[arg(long, value_enum)]
    mixing_mode: Option<CliMixing>,
    /// Records output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Also write a gnuplot companion script
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Records CSV produced by sweep
    #[arg(long)]
    input: PathBuf,
    /// Predictor field
    #[arg(long)]
    x: String,
    /// Response field
    #[arg(long)]
    y: String,
    /// Comma-separated fields to fit separately per value
    #[arg(long)]
    group_by: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
}

#[derive(Args)]
struct TradeoffArgs {
    /// Torus dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Path-loss exponent
    #[arg(long)]
    alpha: f64,
    /// Smallest radius multiple
    #[arg(long, default_value_t = 0.5)]
    from: f64,
    /// Largest radius multiple
    #[arg(long, default_value_t = 5.0)]
    to: f64,
    /// Grid step
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Write the curve here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Generate(args) => generate(args),
        Cmd::Analyze(args) => analyze(args),
        Cmd::Schedule(args) => schedule(args),
        Cmd::Sweep(args) => sweep(args),
        Cmd::Fit(args) => fit(args),
        Cmd::Tradeoff(args) => tradeoff(args),
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let pts = sample_points(args.n, args.dim, args.seed)?;
    let g = match args.kind.as_str() {
        "disk" => build_disk_graph(&pts, args.r)?,
        "longrange" => build_longrange_graph(
            &pts,
            args.r,
            require(args.gamma, "--gamma")?,
            require(args.eta, "--eta")?,
        )?,
        "cluster" => build_cluster_graph(
            &pts,
            args.r,
            require(args.gamma, "--gamma")?,
            require(args.eta, "--eta")?,
            require(args.rho, "--rho")?,
        )?,
        other => bail!("unknown kind {other:?}: expected disk, longrange, or cluster"),
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let points_path = args.out.join("points.txt");
    let graph_path = args.out.join("graph.txt");
    fs::write(&points_path, pts.to_text())?;
    fs::write(&graph_path, g.to_text())?;
    println!(
        "wrote {} and {} (n={}, edges={}, connected={})",
        points_path.display(),
        graph_path.display(),
        g.n(),
        g.edge_count(),
        slotmix::is_connected(&g)
    );
    Ok(())
}

fn load_instance(args: &InstanceArgs) -> Result<TopologyGraph> {
    let pts_text = fs::read_to_string(&args.points)
        .with_context(|| format!("reading {}", args.points.display()))?;
    let pts = PointSet::from_text(&pts_text)?;
    let g_text = fs::read_to_string(&args.graph)
        .with_context(|| format!("reading {}", args.graph.display()))?;
    Ok(TopologyGraph::from_text(&g_text, pts)?)
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let g = load_instance(&args.instance)?;
    let eps = args.epsilon.unwrap_or(1.0 / g.n() as f64);
    let empirical = MixingMode::from(args.mixing_mode).resolve(g.n()) == MixingMode::Empirical;
    let report = SpectralReport::compute(&g, eps, empirical)?;
    let text = match args.format {
        OutputFormat::Csv => format!(
            "{}\n{}\n",
            SpectralReport::csv_header(),
            report.to_csv_row()
        ),
        OutputFormat::Plain => SpectralReport::csv_header()
            .split(',')
            .zip(report.to_csv_row().split(','))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect(),
    };
    emit(args.out.as_deref(), &text)
}

fn schedule(args: ScheduleArgs) -> Result<()> {
    let g = load_instance(&args.instance)?;
    let radio = RadioConfig::new(args.alpha, args.beta)?;
    let (sched, theta_note) = match args.protocol.as_str() {
        "lattice" => {
            let theta = match args.theta {
                Some(t) => t,
                None => min_theta_search(&g, &radio)?,
            };
            (
                lattice_schedule(&g, &radio, theta)?,
                format!(" theta={theta}"),
            )
        }
        "greedy" => (greedy_schedule(&g, &radio, args.seed)?, String::new()),
        other => bail!("unknown protocol {other:?}: expected lattice or greedy"),
    };
    let report = validate_schedule(&g, &sched)?;
    let guard = guard_zone_lower_bound(&g, &radio, slotmix::DEFAULT_GUARD_DELTA)?;
    emit(args.out.as_deref(), &sched.to_text())?;
    println!(
        "protocol={}{} slots={} feasible={} guard_lb={}",
        sched.protocol(),
        theta_note,
        sched.len(),
        report.feasible,
        guard
    );
    if !report.feasible {
        bail!(
            "schedule leaves {} directed links uncovered",
            report.missing.len()
        );
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = ExperimentConfig::from_text(&text)?;
    if let Some(mode) = args.mixing_mode {
        cfg.mixing = mode.into();
    }
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(cfg.effective_out()));
    let records = run_sweep(&cfg)?;
    let csv_path = out_dir.join("records.csv");
    match args.format {
        OutputFormat::Csv => slotmix::export_records(&records, &csv_path)?,
        OutputFormat::Plain => bail!("sweep only exports csv; pass --format csv"),
    }
    if args.plot {
        fs::write(out_dir.join("records.gnuplot"), plot_script("records.csv"))?;
    }
    let failed = records.iter().filter(|r| r.status != "ok").count();
    println!(
        "rows={} ok={} failed={} wrote {}",
        records.len(),
        records.len() - failed,
        failed,
        csv_path.display()
    );
    let violations = audit_records(&records);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("audit: {v}");
        }
        bail!("{} record invariant violations", violations.len());
    }
    Ok(())
}

fn fit(args: FitArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let records = parse_records(&text)?;
    let groups: Vec<&str> = args
        .group_by
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect()
        })
        .unwrap_or_default();
    let fits = fit_slope(&records, &args.x, &args.y, &groups)?;
    match args.format {
        OutputFormat::Csv => {
            println!("group,predictor,exponent,std_error,r_squared,points");
            for (label, f) in &fits {
                println!(
                    "{label},{},{},{},{},{}",
                    f.predictor, f.exponent, f.std_error, f.r_squared, f.points
                );
            }
        }
        OutputFormat::Plain => {
            for (label, f) in &fits {
                println!(
                    "{label}: {} ~ {}^{:.4} (std_error={:.4}, r_squared={:.4}, points={})",
                    args.y, f.predictor, f.exponent, f.std_error, f.r_squared, f.points
                );
            }
        }
    }
    Ok(())
}

fn tradeoff(args: TradeoffArgs) -> Result<()> {
    if !(args.step > 0.0 && args.from > 0.0 && args.to >= args.from) {
        bail!("tradeoff grid needs 0 < from <= to and step > 0");
    }
    let mut curve = Vec::new();
    let mut k = 0usize;
    loop {
        let x = args.from + k as f64 * args.step;
        if x > args.to + 1e-12 {
            break;
        }
        curve.push((x, rate_tradeoff(x, args.dim, args.alpha)?));
        k += 1;
    }
    let (best_x, best_v) = curve
        .iter()
        .copied()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or_else(|| anyhow!("empty tradeoff grid"))?;
    let mut text = String::from("radius_multiple,cost\n");
    for (x, v) in &curve {
        text.push_str(&format!("{x},{v}\n"));
    }
    match args.format {
        OutputFormat::Csv => emit(args.out.as_deref(), &text)?,
        OutputFormat::Plain => {
            if let Some(path) = args.out.as_deref() {
                fs::write(path, &text)?;
            }
        }
    }
    println!("minimum at R={best_x:.2} cost={best_v:.6}");
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("{flag} is required for this kind"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
