use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use erwalk_cli::commands::{clt, gen, hist, mc, mix, scan, spectral, verify, GraphSpec};
use erwalk_cli::config::{resolve, resolve_required, resolve_switch, ConfigFile};
use erwalk_cli::output::OutputFormat;
use std::path::PathBuf;
use std::process::ExitCode;

/// Hitting-time experiments on Erdős–Rényi graphs.
///
/// Parameter precedence: command-line flags override the `--config` file,
/// which overrides built-in defaults.
#[derive(Parser, Debug)]
#[command(name = "erwalk", version, about)]
struct Cli {
    /// Flat `key = value` config file ('#' comments).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for replicate- and target-level parallelism
    /// (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GraphArgs {
    /// Vertex count.
    #[arg(long)]
    n: Option<usize>,

    /// Edge probability in (0, 1].
    #[arg(long)]
    p: Option<f64>,

    /// RNG seed; repeat for commands that take several.
    #[arg(long)]
    seed: Vec<u64>,

    /// Read the graph from an edge-list file instead of generating it.
    #[arg(long, conflicts_with_all = ["n", "p"])]
    graph: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct OutputArgs {
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a realization and write its edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact hitting times for one realization vs the two-cluster
    /// prediction.
    Hist {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Target vertex (single-target mode).
        #[arg(long)]
        target: Option<usize>,
        /// Emit H for every ordered pair instead of one target.
        #[arg(long)]
        all_pairs: bool,
        /// Use the empirical edge density instead of the nominal p in
        /// predictions.
        #[arg(long)]
        empirical_p: bool,
    },
    /// Max prediction error over an n-grid and its log-log slope.
    Scan {
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated n grid.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Base seed; replicate i uses seed + i.
        #[arg(long)]
        seed: Vec<u64>,
        /// Replicates per grid point.
        #[arg(long)]
        replicates: Option<u64>,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Standardized hitting-time statistic over independent realizations.
    Clt {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Base seed; replicate i uses seed + i.
        #[arg(long)]
        seed: Vec<u64>,
        /// Number of independent realizations.
        #[arg(long)]
        replicates: Option<u64>,
    },
    /// Exact-identity and calibrated-bound suite on one realization.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Walk-distribution mixing norms.
    Mix {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Spectrum of the normalized adjacency operator.
    Spectral {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo hitting-time estimate.
    Mc {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        origin: Option<usize>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        /// Walk step cap (default 100 n log n).
        #[arg(long)]
        cap: Option<u64>,
    },
}

fn graph_spec(args: &GraphArgs, cfg: &ConfigFile) -> Result<GraphSpec> {
    if let Some(path) = &args.graph {
        return Ok(GraphSpec::File(path.clone()));
    }
    if let Some(path) = cfg.get::<PathBuf>("graph")? {
        if args.n.is_none() && args.p.is_none() {
            return Ok(GraphSpec::File(path));
        }
    }
    let n = resolve_required(args.n, cfg, "n")?;
    let p = resolve_required(args.p, cfg, "p")?;
    let seed = first_seed(&args.seed, cfg)?;
    Ok(GraphSpec::Generate { n, p, seed })
}

fn first_seed(seeds: &[u64], cfg: &ConfigFile) -> Result<u64> {
    if let Some(&s) = seeds.first() {
        return Ok(s);
    }
    if let Some(list) = cfg.get_list::<u64>("seed")? {
        if let Some(&s) = list.first() {
            return Ok(s);
        }
        bail!("config key `seed` must list at least one seed");
    }
    Ok(0)
}

/// Seed list for replicate commands: an explicit multi-seed list is used
/// verbatim; a single seed s expands to s, s+1, ..., s+replicates-1.
fn replicate_seeds(flag_seeds: &[u64], cfg: &ConfigFile, replicates: u64) -> Result<Vec<u64>> {
    let listed: Vec<u64> = if flag_seeds.is_empty() {
        cfg.get_list("seed")?.unwrap_or_default()
    } else {
        flag_seeds.to_vec()
    };
    match listed.len() {
        0 => Ok((0..replicates).collect()),
        1 => Ok((listed[0]..listed[0] + replicates).collect()),
        _ => Ok(listed),
    }
}

fn out_format(args: &OutputArgs, cfg: &ConfigFile, default: OutputFormat) -> Result<(Option<PathBuf>, OutputFormat)> {
    let out = match &args.out {
        Some(path) => Some(path.clone()),
        None => cfg.get::<PathBuf>("out")?,
    };
    let format = resolve(args.format, cfg, "format", default)?;
    Ok((out, format))
}

fn dispatch(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    match cli.command {
        Command::Gen { graph, out } => {
            let n = resolve_required(graph.n, &cfg, "n")?;
            let p = resolve_required(graph.p, &cfg, "p")?;
            let seed = first_seed(&graph.seed, &cfg)?;
            let out = match out {
                Some(path) => Some(path),
                None => cfg.get::<PathBuf>("out")?,
            };
            gen::run(&gen::GenParams { n, p, seed, out })?;
            Ok(true)
        }
        Command::Hist { graph, output, target, all_pairs, empirical_p } => {
            let params = hist::HistParams {
                source: graph_spec(&graph, &cfg)?,
                target: resolve(target, &cfg, "target", 0)?,
                all_pairs: resolve_switch(all_pairs, &cfg, "all_pairs")?,
                empirical_p: resolve_switch(empirical_p, &cfg, "empirical_p")?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            hist::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
        Command::Scan { output, grid, p, seed, replicates, target } => {
            let grid = if grid.is_empty() {
                cfg.get_list("grid")?.unwrap_or_else(|| vec![250, 500, 1000, 2000])
            } else {
                grid
            };
            let replicates = resolve(replicates, &cfg, "replicates", 20)?;
            let params = scan::ScanParams {
                grid,
                p: resolve(p, &cfg, "p", 0.5)?,
                seeds: replicate_seeds(&seed, &cfg, replicates)?,
                target: resolve(target, &cfg, "target", 0)?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            scan::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
        Command::Clt { output, n, p, seed, replicates } => {
            let replicates = resolve(replicates, &cfg, "replicates", 500)?;
            let params = clt::CltParams {
                n: resolve_required(n, &cfg, "n")?,
                p: resolve(p, &cfg, "p", 0.5)?,
                seeds: replicate_seeds(&seed, &cfg, replicates)?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            clt::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
        Command::Verify { graph, output, target } => {
            let params = verify::VerifyParams {
                source: graph_spec(&graph, &cfg)?,
                target: resolve(target, &cfg, "target", 0)?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            let (result, passed) = verify::run(&params)?;
            result.write_to(format, out.as_deref())?;
            Ok(passed)
        }
        Command::Mix { graph, output, target, k_max } => {
            let params = mix::MixParams {
                source: graph_spec(&graph, &cfg)?,
                target: resolve(target, &cfg, "target", 0)?,
                k_max: resolve(k_max, &cfg, "k_max", 3)?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            mix::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
        Command::Spectral { graph, output } => {
            let params = spectral::SpectralParams {
                source: graph_spec(&graph, &cfg)?,
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Csv)?;
            spectral::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
        Command::Mc { graph, output, origin, target, trials, cap } => {
            let params = mc::McParams {
                source: graph_spec(&graph, &cfg)?,
                origin: resolve(origin, &cfg, "origin", 1)?,
                target: resolve(target, &cfg, "target", 0)?,
                trials: resolve(trials, &cfg, "trials", 10_000)?,
                seed: first_seed(&graph.seed, &cfg)?,
                cap: match cap {
                    Some(c) => Some(c),
                    None => cfg.get("cap")?,
                },
            };
            let (out, format) = out_format(&output, &cfg, OutputFormat::Json)?;
            mc::run(&params)?.write_to(format, out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
