use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wecfarm::farm::{FarmLayout, Objective};
use wecfarm::harness::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "wecfarm", version, about = "Evaluate and optimize wave-energy converter farms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded run of one method; writes its trace, layout and metadata.
    Run(Common),
    /// Every selected method over several seeds, plus summary tables.
    Compare(Common),
    /// Total power over a shared (k, d) grid for a fixed layout.
    Landscape(WithLayout),
    /// Farm power, per-buoy power and q-factor of a layout.
    Qfactor(WithLayout),
    /// Fitness and penalty breakdown of a layout.
    LayoutEval(WithLayout),
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file, then to the built-in defaults.
#[derive(Args, Clone, Default)]
struct Common {
    /// Scenario file or bundled name (perth_like.scn, sydney_like.scn, monochromatic).
    #[arg(long)]
    scenario: Option<String>,
    /// Number of buoys.
    #[arg(long)]
    n: Option<usize>,
    /// Single method (used by `run`).
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated method list (used by `compare`).
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluations per run.
    #[arg(long)]
    budget: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Landscape lattice step.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct WithLayout {
    /// Layout file.
    #[arg(long)]
    layout: PathBuf,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::default();
        if let Some(p) = &self.config {
            c.apply_file(p)?;
        }
        let pairs = [
            ("scenario", self.scenario.clone()),
            ("n", self.n.map(|v| v.to_string())),
            ("methods", self.methods.clone()),
            ("method", self.method.clone()),
            ("runs", self.runs.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("budget", self.budget.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
            ("step", self.step.map(|v| v.to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                c.set(k, &v)?;
            }
        }
        if let Some(o) = &self.out {
            c.out = o.clone();
        }
        Ok(c)
    }
}

fn stop_flag() -> Arc<AtomicBool> {
    let flag = Arc::new(AtomicBool::new(false));
    let f = flag.clone();
    // Fails only if a handler is already installed; the run then simply
    // cannot be interrupted early.
    let _ = ctrlc::set_handler(move || f.store(true, Ordering::Relaxed));
    flag
}

/// Reads a layout file; the scenario named in its header applies unless
/// overridden on the command line or in the config file.
fn layout_config(w: &WithLayout) -> Result<(ExperimentConfig, FarmLayout)> {
    let text = std::fs::read_to_string(&w.layout).with_context(|| format!("reading {}", w.layout.display()))?;
    let (layout, scenario) = FarmLayout::parse(&text).with_context(|| format!("parsing {}", w.layout.display()))?;
    let mut c = w.common.config()?;
    let scenario_set = w.common.scenario.is_some()
        || w.common
            .config
            .as_deref()
            .map(config_sets_scenario)
            .transpose()?
            .unwrap_or(false);
    if !scenario_set {
        c.scenario = scenario;
    }
    c.n = layout.len();
    Ok((c, layout))
}

fn config_sets_scenario(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .filter_map(|l| l.split('#').next()?.split_once('='))
        .any(|(k, _)| k.trim() == "scenario"))
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn run(c: &Common) -> Result<()> {
    let cfg = c.config()?;
    let method = match (&c.method, cfg.methods.as_slice()) {
        (Some(m), _) => m.clone(),
        (None, [m]) => m.clone(),
        _ => bail!("`run` needs exactly one method (--method)"),
    };
    let seed = cfg.seed;
    let t = Instant::now();
    let (r, stem) = harness::run_and_write(&cfg, &method, seed, stop_flag())?;
    println!("method = {}", r.method);
    println!("seed = {seed}");
    println!("evaluations = {}", r.evaluations);
    println!("best_fitness = {}", r.best_fitness);
    println!("written = {}", stem.display());
    eprintln!("wall time {:.1} s", t.elapsed().as_secs_f64());
    Ok(())
}

fn compare(c: &Common) -> Result<()> {
    let cfg = c.config()?;
    let t = Instant::now();
    let outcome = harness::run_experiment(&cfg, stop_flag())?;
    println!("method,runs,max,min,mean,median,std");
    for r in &outcome.summary.rows {
        println!("{},{},{},{},{},{},{}", r.method, r.runs, r.max, r.min, r.mean, r.median, r.std);
        if let Some(w) = &r.warning {
            eprintln!("warning: {}: {w}", r.method);
        }
    }
    eprintln!("wall time {:.1} s; tables in {}", t.elapsed().as_secs_f64(), cfg.out.display());
    if outcome.interrupted {
        bail!("interrupted; tables cover {} finished runs", outcome.records.len());
    }
    Ok(())
}

fn landscape(w: &WithLayout) -> Result<()> {
    let (cfg, layout) = layout_config(w)?;
    let obj = harness::build_objective(&cfg)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let t = Instant::now();
    let grid = pool.install(|| harness::landscape(&obj, &layout, cfg.step));
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join("landscape.csv");
    let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    grid.write_csv(std::io::BufWriter::new(file))?;
    let best = grid.argmax();
    println!("cells = {} ({} k × {} d)", grid.cells.len(), grid.k_axis.len(), grid.d_axis.len());
    println!("argmax k = {} d = {} power = {}", best.k, best.d, best.power);
    println!(
        "default k = {} d = {} power = {}",
        grid.default_cell.k, grid.default_cell.d, grid.default_cell.power
    );
    println!("written = {}", path.display());
    eprintln!("wall time {:.1} s", t.elapsed().as_secs_f64());
    Ok(())
}

fn qfactor(w: &WithLayout) -> Result<()> {
    let (cfg, layout) = layout_config(w)?;
    let obj = harness::build_objective(&cfg)?;
    let r = wecfarm::hydro::farm_power(&obj.model, &obj.scenario, &layout)?;
    println!("total_power = {}", r.total_power);
    println!("per_buoy_power = {}", join(&r.per_buoy_power));
    println!("isolated_power = {}", join(&r.isolated_power));
    println!("q = {:?}", r.q_factor);
    Ok(())
}

fn layout_eval(w: &WithLayout) -> Result<()> {
    let (cfg, layout) = layout_config(w)?;
    let obj = harness::build_objective(&cfg)?;
    let s = obj.score(&layout);
    let power = s.outcome.as_ref().map(|r| r.total_power);
    match &power {
        Ok(p) => println!("power = {p}"),
        Err(e) => println!("power = failed ({e})"),
    }
    println!("sum_violation = {}", s.sum_violation);
    println!("penalty = {}", s.penalty);
    println!("fitness = {}", s.fitness);
    println!("feasible = {}", wecfarm::farm::is_feasible(layout.positions(), &obj.bounds));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => run(c),
        Command::Compare(c) => compare(c),
        Command::Landscape(w) => landscape(w),
        Command::Qfactor(w) => qfactor(w),
        Command::LayoutEval(w) => layout_eval(w),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
