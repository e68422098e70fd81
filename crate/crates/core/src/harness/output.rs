//! On-disk artifacts. Traces, grids and tables are CSV; run metadata is
//! `key = value` text; layouts use the farm layout format.
//!
//! Nothing written here depends on timing, so repeated runs produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::optimizers::RunRecord;

use super::stats::SummaryTable;

/// Stem shared by the three files of one run, e.g. `runs/de-seed3`.
pub fn run_stem(out: &Path, method: &str, seed: u64) -> PathBuf {
    out.join("runs").join(format!("{method}-seed{seed}"))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Metadata record of one run.
pub fn run_metadata(r: &RunRecord, scenario: &str, budget: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "method = {}", r.method);
    let _ = writeln!(s, "seed = {}", r.seed);
    let _ = writeln!(s, "scenario = {scenario}");
    let _ = writeln!(s, "budget = {budget}");
    let _ = writeln!(s, "evaluations = {}", r.evaluations);
    let _ = writeln!(s, "best_fitness = {}", r.best_fitness);
    if let Some(res) = &r.best_result {
        let _ = writeln!(s, "total_power = {}", res.total_power);
        let _ = writeln!(s, "q_factor = {}", res.q_factor);
        let _ = writeln!(s, "per_buoy_power = {}", join(&res.per_buoy_power));
    }
    let st = &r.stats;
    let _ = writeln!(s, "mutation_draws = {}", st.mutation_draws);
    let _ = writeln!(s, "phases = {}", st.phases);
    let _ = writeln!(s, "exchanges = {}", st.exchanges);
    let _ = writeln!(s, "placement_samples = {}", join(&st.placement_samples));
    let _ = writeln!(s, "placement_evaluations = {}", st.placement_evaluations);
    let _ = writeln!(s, "backtrack_passes = {}", st.backtrack_passes);
    s
}

fn create(path: &Path) -> io::Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// Writes `<stem>.trace.csv`, `<stem>.run` and, when the run found a
/// complete layout, `<stem>.lay`. Returns the stem.
pub fn write_run(out: &Path, r: &RunRecord, scenario: &str, budget: u64) -> io::Result<PathBuf> {
    let stem = run_stem(out, &r.method, r.seed);
    let with = |ext: &str| stem.with_extension(ext);

    let mut w = create(&with("trace.csv"))?;
    writeln!(w, "evaluation,fitness,best")?;
    for t in &r.trace {
        writeln!(w, "{},{},{}", t.index, t.fitness, t.best)?;
    }
    w.flush()?;

    let mut w = create(&with("run"))?;
    w.write_all(run_metadata(r, scenario, budget).as_bytes())?;
    w.flush()?;

    if let Some(l) = &r.best_layout {
        let mut w = create(&with("lay"))?;
        w.write_all(l.to_text(scenario).as_bytes())?;
        w.flush()?;
    }
    Ok(stem)
}

/// `summary.csv`: one row per method.
pub fn write_summary(path: &Path, t: &SummaryTable) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "method,runs,max,min,mean,median,std,warning")?;
    for r in &t.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.method,
            r.runs,
            r.max,
            r.min,
            r.mean,
            r.median,
            r.std,
            r.warning.as_deref().unwrap_or("")
        )?;
    }
    w.flush()
}

/// `pvalues.csv`: the square p-value matrix, empty where untestable.
pub fn write_p_values(path: &Path, t: &SummaryTable) -> io::Result<()> {
    let mut w = create(path)?;
    let names: Vec<&str> = t.rows.iter().map(|r| r.method.as_str()).collect();
    writeln!(w, "method,{}", names.join(","))?;
    for (name, row) in names.iter().zip(&t.p_values) {
        let cells: Vec<String> = row.iter().map(|p| p.map_or(String::new(), |v| v.to_string())).collect();
        writeln!(w, "{name},{}", cells.join(","))?;
    }
    w.flush()
}

/// Mean best-so-far fitness across runs at each evaluation count. Runs
/// that stopped early hold their final best.
pub fn mean_convergence(runs: &[&RunRecord]) -> Vec<f64> {
    let len = runs.iter().map(|r| r.trace.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let sum: f64 = runs
                .iter()
                .map(|r| r.trace.get(i).or(r.trace.last()).map_or(f64::NEG_INFINITY, |t| t.best))
                .sum();
            sum / runs.len() as f64
        })
        .collect()
}

/// `convergence.csv`: `method,evaluation,mean_best` for every method.
pub fn write_convergence(path: &Path, groups: &[(String, Vec<&RunRecord>)]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "method,evaluation,mean_best")?;
    for (method, runs) in groups {
        for (i, v) in mean_convergence(runs).iter().enumerate() {
            writeln!(w, "{method},{},{v}", i + 1)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farm::TracePoint;
    use crate::optimizers::RunStats;

    fn record(method: &str, seed: u64, bests: &[f64]) -> RunRecord {
        RunRecord {
            method: method.into(),
            seed,
            best_layout: None,
            best_fitness: bests.last().copied().unwrap_or(f64::NEG_INFINITY),
            best_result: None,
            trace: bests
                .iter()
                .enumerate()
                .map(|(i, &b)| TracePoint {
                    index: i as u64 + 1,
                    fitness: b,
                    best: b,
                })
                .collect(),
            evaluations: bests.len() as u64,
            wall_seconds: 123.0,
            stats: RunStats::default(),
        }
    }

    #[test]
    fn convergence_holds_final_value_of_short_runs() {
        let a = record("m", 1, &[1.0, 2.0, 3.0]);
        let b = record("m", 2, &[5.0]);
        assert_eq!(mean_convergence(&[&a, &b]), vec![3.0, 3.5, 4.0]);
    }

    #[test]
    fn run_files_exclude_wall_time() {
        let dir = tempfile::tempdir().unwrap();
        let r = record("de", 4, &[1.5, 2.5]);
        let stem = write_run(dir.path(), &r, "perth_like", 10).unwrap();
        let meta = fs::read_to_string(stem.with_extension("run")).unwrap();
        assert!(meta.contains("evaluations = 2\n"));
        assert!(!meta.contains("123"));
        let trace = fs::read_to_string(stem.with_extension("trace.csv")).unwrap();
        assert_eq!(trace, "evaluation,fitness,best\n1,1.5,1.5\n2,2.5,2.5\n");
        assert!(!stem.with_extension("lay").exists());
    }
}
