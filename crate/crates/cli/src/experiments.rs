//! The five experiments. Each regret experiment maps one `(T, seed)` pair to a [`RunRow`];
//! pairs run in parallel and are reduced in `(T, seed)` order.

use std::path::PathBuf;
use std::time::Instant;

use dynreg::adversary::{build_comparator, comparator_gain, play_game, RademacherGame};
use dynreg::analysis::{run_lemma_suite, shift_to_path_budget, theorem2_bound};
use dynreg::budget::ShiftBudget;
use dynreg::instances::shifting_instance_on;
use dynreg::online::FixedLosses;
use dynreg::oracle::{grid_oracle, grid_tolerance, solve_offline, OracleConfig};
use dynreg::{
    dynamic_regret, run_pog, schedule_corollary1, schedule_corollary2, shifting_regret, ComparatorSequence,
    DynamicsBudget, FixedLearner, LossFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{self, RunRow, Summary};
use crate::{thread_pool, CliError};

/// Absolute slack on every measured-regret-versus-upper-bound assertion.
pub const BOUND_SLACK: f64 = 1e-5;
/// Largest constraint violation accepted from the offline solver in `oracle-check`.
pub const RESIDUAL_TOL: f64 = 1e-7;
/// Step scale of the offline solver on the linear game losses: large enough that each
/// subgradient step lands at the extreme points and the projection does the work.
pub const GAME_ORACLE_STEP_SCALE: f64 = 1e6;

#[derive(Debug)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub summary: Option<Summary>,
    /// Human-readable result lines for the terminal.
    pub report: Vec<String>,
}

fn finite(v: f64, what: &str) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Numerical(format!("{what} is {v}")))
    }
}

/// POG with the tuned schedule on the Rademacher game, against the better of the offline optimum
/// and the block comparator (both feasible).
pub fn upper_bound_row(config: &ExperimentConfig, horizon: usize, seed: u64) -> Result<RunRow, CliError> {
    let budget = DynamicsBudget::new(config.beta, config.d_beta)?;
    let game = RademacherGame::<f64>::new(config.dim, horizon, budget, seed)?;
    let domain = game.domain();
    let (r, g) = (domain.diameter_sq_bound(), domain.subgrad_sq_bound());
    let schedule = schedule_corollary1(config.gamma(), config.beta, config.d_beta, r, g, horizon)?;
    let traj = run_pog(&mut game.stream(), &schedule, &domain, domain.center())?;
    let losses = game.losses();
    let oracle = OracleConfig {
        step_scale: Some(GAME_ORACLE_STEP_SCALE),
        ..Default::default()
    };
    let sol = solve_offline(&losses, &domain, &budget, &oracle)?;
    let block = build_comparator(&game)?;
    let oracle_regret = dynamic_regret(&traj, &sol.comparator, &losses)?;
    let block_regret = dynamic_regret(&traj, &block, &losses)?;
    let (regret, gain) = if oracle_regret >= block_regret {
        (oracle_regret, -sol.objective)
    } else {
        (block_regret, comparator_gain(&game))
    };
    Ok(RunRow {
        seed,
        horizon,
        beta: config.beta,
        d_beta: config.d_beta,
        measured_regret: finite(regret, "measured regret")?,
        theory_upper: theorem2_bound(&schedule, horizon, &budget, r, g, 0.0, 0.0),
        theory_lower: Some(dynreg::analysis::theorem1_bound(&budget, horizon)),
        comparator_gain: gain,
        runtime_ms: None,
    })
}

/// The learner that always plays 0, against the block comparator.
pub fn lower_bound_row(config: &ExperimentConfig, horizon: usize, seed: u64) -> Result<RunRow, CliError> {
    let budget = DynamicsBudget::new(config.beta, config.d_beta)?;
    let game = RademacherGame::<f64>::new(config.dim, horizon, budget, seed)?;
    let report = play_game(&game, &mut FixedLearner::zero(config.dim))?;
    let regret = report
        .dynamic_regret
        .ok_or_else(|| CliError::Invariant("game reported no dynamic regret".into()))?;
    Ok(RunRow {
        seed,
        horizon,
        beta: config.beta,
        d_beta: config.d_beta,
        measured_regret: finite(regret, "measured regret")?,
        theory_upper: report.theory_upper,
        theory_lower: Some(report.theory_lower),
        comparator_gain: comparator_gain(&game),
        runtime_ms: None,
    })
}

/// POG with the shift-tuned schedule on piecewise-stationary quadratics, against the per-segment
/// minimisers. `d_beta` is the path budget `M sqrt(R)` that covers any `M`-shift comparator.
pub fn shifting_row(config: &ExperimentConfig, horizon: usize, seed: u64) -> Result<RunRow, CliError> {
    let domain = config.domain.build(config.dim)?;
    let h = config.regularizer.build()?;
    let inst = shifting_instance_on(domain, h, horizon, config.shifts, seed)?;
    let (r, g) = (inst.domain.diameter_sq_bound(), inst.domain.subgrad_sq_bound());
    let schedule = schedule_corollary2(config.gamma(), config.shifts, r, g, horizon)?;
    let x1 = inst.domain.center();
    let traj = run_pog(&mut FixedLosses(&inst.losses), &schedule, &inst.domain, x1.clone())?;
    let comparator = ComparatorSequence::from_flat(config.dim, inst.comparator, 0.0)?;
    let regret = shifting_regret(&traj, &comparator, &inst.losses, ShiftBudget::new(config.shifts))?;
    let d_beta = shift_to_path_budget(config.shifts, r);
    let budget = DynamicsBudget::new(0.0, d_beta)?;
    let last = traj.final_decision().unwrap_or(&x1);
    let upper = theorem2_bound(&schedule, horizon, &budget, r, g, h.value(&x1), h.value(last));
    let loss: f64 = comparator.points().zip(&inst.losses).map(|(y, f)| f.value(y)).sum();
    Ok(RunRow {
        seed,
        horizon,
        beta: 0.0,
        d_beta,
        measured_regret: finite(regret, "measured regret")?,
        theory_upper: upper,
        theory_lower: None,
        comparator_gain: -loss,
        runtime_ms: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub seed: u64,
    pub horizon: usize,
    pub solver_objective: f64,
    pub grid_objective: f64,
    pub tolerance: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub ok: bool,
}

pub const ORACLE_COLUMNS: [&str; 12] = [
    "seed",
    "T",
    "beta",
    "d_beta",
    "solver_objective",
    "grid_objective",
    "tolerance",
    "residual",
    "iterations",
    "converged",
    "ok",
    "runtime_ms",
];

/// Linear losses `<a_t, x> + H(x)` with `a_t` uniform on `[-1, 1]^d`.
pub fn random_linear_losses(
    dim: usize,
    horizon: usize,
    h: dynreg::Regularizer<f64>,
    seed: u64,
) -> Vec<LossFunction<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..horizon)
        .map(|_| LossFunction::linear((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect(), h))
        .collect()
}

/// The offline solver against exhaustive grid search on a small linear instance.
pub fn oracle_row(config: &ExperimentConfig, horizon: usize, seed: u64) -> Result<OracleRow, CliError> {
    let domain = config
        .domain
        .build(config.dim)?
        .with_subgrad_sq_bound(config.dim as f64)?;
    let losses = random_linear_losses(config.dim, horizon, config.regularizer.build()?, seed);
    let budget = DynamicsBudget::new(config.beta, config.d_beta)?;
    let sol = solve_offline(&losses, &domain, &budget, &OracleConfig::default())?;
    let grid = grid_oracle(&losses, &domain, &budget, config.resolution)?;
    let tolerance = grid_tolerance(&losses, &domain, config.resolution)?;
    let ok = (sol.objective - grid.objective).abs() <= tolerance && sol.residual <= RESIDUAL_TOL;
    Ok(OracleRow {
        seed,
        horizon,
        solver_objective: finite(sol.objective, "solver objective")?,
        grid_objective: grid.objective,
        tolerance,
        residual: sol.residual,
        iterations: sol.iterations,
        converged: sol.converged,
        ok,
    })
}

fn tasks(config: &ExperimentConfig) -> Vec<(usize, u64)> {
    config
        .horizons
        .iter()
        .flat_map(|&t| (0..config.seeds as u64).map(move |s| (t, config.seed_offset + s)))
        .collect()
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, timing.then(|| start.elapsed().as_secs_f64() * 1e3))
}

/// Per-run rows of a regret experiment, in `(T, seed)` order.
pub fn regret_rows(config: &ExperimentConfig) -> Result<Vec<RunRow>, CliError> {
    let row = match config.experiment {
        Experiment::UpperBound => upper_bound_row,
        Experiment::LowerBound => lower_bound_row,
        Experiment::ShiftingRegret => shifting_row,
        e => return Err(CliError::Usage(format!("{e} has no regret rows"))),
    };
    let pool = thread_pool()?;
    pool.install(|| {
        tasks(config)
            .into_par_iter()
            .map(|(t, seed)| {
                let (r, ms) = timed(config.timing, || row(config, t, seed));
                r.map(|r| RunRow { runtime_ms: ms, ..r })
            })
            .collect()
    })
}

fn check_upper(rows: &[RunRow]) -> Result<(), CliError> {
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.measured_regret > r.theory_upper + BOUND_SLACK)
        .map(|r| {
            format!(
                "seed {} T {}: regret {} > bound {}",
                r.seed, r.horizon, r.measured_regret, r.theory_upper
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "measured regret above theory_upper\n{}",
            bad.join("\n")
        )))
    }
}

fn run_lemmas(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let report = run_lemma_suite();
    std::fs::create_dir_all(&config.out)?;
    let path = config.out.join("lemmas.csv");
    let records: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.inputs.clone(),
                c.lhs.to_string(),
                c.rhs.to_string(),
                c.ok.to_string(),
            ]
        })
        .collect();
    output::write_table(
        &path,
        "lemmas",
        config,
        &["check", "inputs", "lhs", "rhs", "ok"],
        &records,
    )?;
    let failures: Vec<String> = report
        .failures()
        .map(|c| format!("{} ({}): {} vs {}", c.name, c.inputs, c.lhs, c.rhs))
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Invariant(format!(
            "lemma checks failed\n{}",
            failures.join("\n")
        )));
    }
    Ok(RunOutcome {
        files: vec![path],
        summary: None,
        report: vec![format!("{} lemma checks passed", report.checks.len())],
    })
}

fn run_oracle_check(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let pool = thread_pool()?;
    let rows: Vec<(OracleRow, Option<f64>)> = pool.install(|| {
        tasks(config)
            .into_par_iter()
            .map(|(t, seed)| {
                let (r, ms) = timed(config.timing, || oracle_row(config, t, seed));
                r.map(|r| (r, ms))
            })
            .collect::<Result<_, CliError>>()
    })?;
    std::fs::create_dir_all(&config.out)?;
    let path = config.out.join("oracle-check.csv");
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|(r, ms)| {
            vec![
                r.seed.to_string(),
                r.horizon.to_string(),
                config.beta.to_string(),
                config.d_beta.to_string(),
                r.solver_objective.to_string(),
                r.grid_objective.to_string(),
                r.tolerance.to_string(),
                r.residual.to_string(),
                r.iterations.to_string(),
                r.converged.to_string(),
                r.ok.to_string(),
                ms.map(|m| m.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    output::write_table(&path, "oracle-check", config, &ORACLE_COLUMNS, &records)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|(r, _)| !r.ok)
        .map(|(r, _)| {
            format!(
                "seed {} T {}: solver {} grid {} tolerance {} residual {}",
                r.seed, r.horizon, r.solver_objective, r.grid_objective, r.tolerance, r.residual
            )
        })
        .collect();
    if !bad.is_empty() {
        return Err(CliError::Invariant(format!(
            "solver disagrees with grid\n{}",
            bad.join("\n")
        )));
    }
    Ok(RunOutcome {
        files: vec![path],
        summary: None,
        report: vec![format!("{} instances agree with the grid oracle", rows.len())],
    })
}

/// Runs the configured experiment and writes its files under `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    match config.experiment {
        Experiment::Lemmas => run_lemmas(config),
        Experiment::OracleCheck => run_oracle_check(config),
        _ => {
            let rows = regret_rows(config)?;
            let summary = output::summarize(&rows);
            let files = output::write_runs(config, &rows, &summary)?;
            if matches!(config.experiment, Experiment::UpperBound | Experiment::ShiftingRegret) {
                check_upper(&rows)?;
            }
            let mut report: Vec<String> = summary
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "T={} mean_regret={:.4} se={:.4} mean_upper={:.4}",
                        r.horizon, r.regret.mean, r.regret.std_err, r.mean_theory_upper
                    )
                })
                .collect();
            if let Some(s) = summary.loglog_slope {
                report.push(format!("loglog_slope={s:.4}"));
            }
            Ok(RunOutcome {
                files,
                summary: Some(summary),
                report,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Layer;

    fn config(e: Experiment, layer: Layer) -> ExperimentConfig {
        crate::parse_config(Some(e), None, &layer).unwrap()
    }

    #[test]
    fn upper_bound_rows_respect_the_bound() {
        let c = config(
            Experiment::UpperBound,
            Layer {
                horizons: Some(vec![16, 64]),
                seeds: Some(3),
                ..Default::default()
            },
        );
        let rows = regret_rows(&c).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.measured_regret <= r.theory_upper));
        // ordered by (T, seed)
        assert_eq!((rows[0].horizon, rows[0].seed), (16, 0));
        assert_eq!((rows[5].horizon, rows[5].seed), (64, 2));
    }

    #[test]
    fn lower_bound_regret_is_the_comparator_gain() {
        let c = config(
            Experiment::LowerBound,
            Layer {
                horizons: Some(vec![32]),
                seeds: Some(4),
                ..Default::default()
            },
        );
        for r in regret_rows(&c).unwrap() {
            assert!((r.measured_regret - r.comparator_gain).abs() < 1e-12);
        }
    }

    #[test]
    fn shifting_rows_respect_the_bound() {
        let c = config(
            Experiment::ShiftingRegret,
            Layer {
                horizons: Some(vec![128]),
                shifts: Some(2),
                seeds: Some(3),
                ..Default::default()
            },
        );
        let rows = regret_rows(&c).unwrap();
        assert!(rows.iter().all(|r| r.measured_regret <= r.theory_upper + BOUND_SLACK));
        assert_eq!(rows[0].d_beta, 4.0);
    }

    #[test]
    fn oracle_rows_agree_with_grid() {
        let c = config(
            Experiment::OracleCheck,
            Layer {
                seeds: Some(3),
                ..Default::default()
            },
        );
        for seed in 0..3 {
            assert!(oracle_row(&c, 3, seed).unwrap().ok);
        }
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(CliError::from(dynreg::Error::BadOracle("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(dynreg::Error::Infeasible("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(dynreg::Error::InvalidBudget("x".into())).exit_code(), 1);
        let rows = vec![RunRow {
            seed: 0,
            horizon: 4,
            beta: 0.0,
            d_beta: 0.0,
            measured_regret: 2.0,
            theory_upper: 1.0,
            theory_lower: None,
            comparator_gain: 0.0,
            runtime_ms: None,
        }];
        assert_eq!(check_upper(&rows).unwrap_err().exit_code(), 2);
    }
}
