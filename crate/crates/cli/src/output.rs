//! CSV files with a `#`-prefixed metadata header.
//!
//! Regret experiments write `<experiment>.csv` with the columns of [`RUN_COLUMNS`] and
//! `<experiment>-summary.csv` with per-`T` means, standard errors and a final
//! `# loglog_slope=` line. The only nondeterministic bytes are the `generated_unix` header line
//! and, with `timing`, the `runtime_ms` column.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use dynreg::stats::{loglog_slope, MeanSe};

use crate::config::ExperimentConfig;
use crate::CliError;

pub const RUN_COLUMNS: [&str; 9] = [
    "seed",
    "T",
    "beta",
    "d_beta",
    "measured_regret",
    "theory_upper",
    "theory_lower",
    "comparator_gain",
    "runtime_ms",
];

pub const SUMMARY_COLUMNS: [&str; 7] = [
    "T",
    "runs",
    "mean_regret",
    "se_regret",
    "mean_theory_upper",
    "mean_theory_lower",
    "mean_comparator_gain",
];

/// One seed at one horizon. `theory_lower` is absent where no lower bound applies.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub seed: u64,
    pub horizon: usize,
    pub beta: f64,
    pub d_beta: f64,
    pub measured_regret: f64,
    pub theory_upper: f64,
    pub theory_lower: Option<f64>,
    pub comparator_gain: f64,
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub horizon: usize,
    pub regret: MeanSe,
    pub mean_theory_upper: f64,
    pub mean_theory_lower: Option<f64>,
    pub mean_comparator_gain: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    /// Least-squares slope of `log mean_regret` on `log T`; `None` with fewer than two horizons
    /// or a nonpositive mean.
    pub loglog_slope: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Per-`T` aggregates in order of first appearance.
pub fn summarize(rows: &[RunRow]) -> Summary {
    let mut horizons: Vec<usize> = Vec::new();
    for r in rows {
        if !horizons.contains(&r.horizon) {
            horizons.push(r.horizon);
        }
    }
    let out: Vec<SummaryRow> = horizons
        .iter()
        .map(|&t| {
            let group: Vec<&RunRow> = rows.iter().filter(|r| r.horizon == t).collect();
            let pick = |f: fn(&RunRow) -> f64| -> Vec<f64> { group.iter().map(|r| f(r)).collect() };
            let lower: Option<Vec<f64>> = group.iter().map(|r| r.theory_lower).collect();
            SummaryRow {
                horizon: t,
                regret: MeanSe::from_samples(&pick(|r| r.measured_regret)),
                mean_theory_upper: dynreg::stats::mean(&pick(|r| r.theory_upper)),
                mean_theory_lower: lower.map(|l| dynreg::stats::mean(&l)),
                mean_comparator_gain: dynreg::stats::mean(&pick(|r| r.comparator_gain)),
            }
        })
        .collect();
    let xs: Vec<f64> = out.iter().map(|r| r.horizon as f64).collect();
    let ys: Vec<f64> = out.iter().map(|r| r.regret.mean).collect();
    let loglog_slope = if out.len() >= 2 && ys.iter().all(|&y| y > 0.0) {
        loglog_slope(&xs, &ys).ok()
    } else {
        None
    };
    Summary {
        rows: out,
        loglog_slope,
    }
}

fn header(w: &mut impl Write, title: &str, config: &ExperimentConfig) -> std::io::Result<()> {
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    writeln!(w, "# dynreg {title}")?;
    writeln!(
        w,
        "# config_hash={:016x} seeds={}..{}",
        config.hash(),
        config.seed_offset,
        config.seed_offset + config.seeds as u64
    )?;
    writeln!(w, "# generated_unix={now}")
}

/// Writes a header block followed by a CSV table.
pub fn write_table(
    path: &Path,
    title: &str,
    config: &ExperimentConfig,
    columns: &[&str],
    records: &[Vec<String>],
) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    header(&mut file, title, config)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(columns).map_err(csv_err)?;
    for r in records {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn run_records(rows: &[RunRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.seed.to_string(),
                r.horizon.to_string(),
                r.beta.to_string(),
                r.d_beta.to_string(),
                r.measured_regret.to_string(),
                r.theory_upper.to_string(),
                opt(r.theory_lower),
                r.comparator_gain.to_string(),
                opt(r.runtime_ms),
            ]
        })
        .collect()
}

/// Writes `<experiment>.csv` and `<experiment>-summary.csv` under `config.out`.
pub fn write_runs(config: &ExperimentConfig, rows: &[RunRow], summary: &Summary) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&config.out)?;
    let name = config.experiment.name();
    let runs = config.out.join(format!("{name}.csv"));
    write_table(&runs, name, config, &RUN_COLUMNS, &run_records(rows))?;

    let path = config.out.join(format!("{name}-summary.csv"));
    let records: Vec<Vec<String>> = summary
        .rows
        .iter()
        .map(|r| {
            vec![
                r.horizon.to_string(),
                r.regret.count.to_string(),
                r.regret.mean.to_string(),
                r.regret.std_err.to_string(),
                r.mean_theory_upper.to_string(),
                opt(r.mean_theory_lower),
                r.mean_comparator_gain.to_string(),
            ]
        })
        .collect();
    write_table(&path, &format!("{name} summary"), config, &SUMMARY_COLUMNS, &records)?;
    let mut file = std::fs::OpenOptions::new().append(true).open(&path)?;
    match summary.loglog_slope {
        Some(s) => writeln!(file, "# loglog_slope={s}")?,
        None => writeln!(file, "# loglog_slope=NA")?,
    }
    Ok(vec![runs, path])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(seed: u64, horizon: usize, regret: f64) -> RunRow {
        RunRow {
            seed,
            horizon,
            beta: 0.0,
            d_beta: 1.0,
            measured_regret: regret,
            theory_upper: 10.0 * regret,
            theory_lower: Some(regret),
            comparator_gain: 1.0,
            runtime_ms: None,
        }
    }

    #[test]
    fn summary_groups_by_horizon_and_fits_slope() {
        let rows = vec![row(0, 4, 1.0), row(1, 4, 3.0), row(0, 16, 4.0), row(1, 16, 4.0)];
        let s = summarize(&rows);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.rows[0].regret.mean, 2.0);
        assert_eq!(s.rows[0].regret.count, 2);
        assert!((s.loglog_slope.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(summarize(&rows[..2]).loglog_slope, None);
    }

    #[test]
    fn empty_fields_for_missing_values() {
        let mut r = row(3, 8, 0.5);
        r.theory_lower = None;
        let rec = &run_records(&[r])[0];
        assert_eq!(rec.len(), RUN_COLUMNS.len());
        assert_eq!(rec[6], "");
        assert_eq!(rec[8], "");
        assert_eq!(rec[4], "0.5");
    }
}
