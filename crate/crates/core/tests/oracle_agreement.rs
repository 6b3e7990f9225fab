use dynreg::instances::{random_comparator, random_instance, shrink_to_budget};
use dynreg::online::FixedLosses;
use dynreg::oracle::{grid_oracle, grid_tolerance, solve_offline, OracleConfig};
use dynreg::pog::run_pog;
use dynreg::{dynamic_regret, ComparatorSequence, DomainSpec, DynamicsBudget, LossFunction, Regularizer, Schedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn solver_agrees_with_grid_on_small_linear_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let domain = DomainSpec::<f64>::unit_ball(1, 1.0).unwrap();
    for _ in 0..10 {
        let losses: Vec<_> = (0..3)
            .map(|_| LossFunction::linear(vec![rng.gen_range(-1.0..1.0)], Regularizer::zero()))
            .collect();
        let budget = DynamicsBudget::new(0.0, rng.gen_range(0..250) as f64 / 100.0).unwrap();
        let sol = solve_offline(&losses, &domain, &budget, &OracleConfig::default()).unwrap();
        let grid = grid_oracle(&losses, &domain, &budget, 0.01).unwrap();
        let tol = grid_tolerance(&losses, &domain, 0.01).unwrap();
        assert!(
            (sol.objective - grid.objective).abs() <= tol,
            "{} vs {}",
            sol.objective,
            grid.objective
        );
        assert!(sol.residual <= 1e-7);
    }
}

#[test]
fn two_dimensional_grid_agreement() {
    let domain = DomainSpec::<f64>::cube(2, -1.0, 1.0, 2.0).unwrap();
    let budget = DynamicsBudget::new(0.0, 1.0).unwrap();
    let losses = vec![
        LossFunction::linear(vec![1.0, 0.5], Regularizer::zero()),
        LossFunction::linear(vec![-1.0, 0.5], Regularizer::zero()),
    ];
    let sol = solve_offline(&losses, &domain, &budget, &OracleConfig::default()).unwrap();
    let grid = grid_oracle(&losses, &domain, &budget, 0.05).unwrap();
    let tol = grid_tolerance(&losses, &domain, 0.05).unwrap();
    assert!(sol.objective >= grid.objective - tol);
    assert!(sol.objective <= grid.objective + 1e-9);
    assert!(sol.residual <= 1e-7);
}

#[test]
fn oracle_regret_dominates_feasible_comparators() {
    for seed in 0..8u64 {
        let inst = random_instance::<f64>(seed, 8..=20).unwrap();
        let d = inst.domain.dimension();
        let horizon = inst.losses.len();
        let beta = 0.3;
        let budget = DynamicsBudget::new(beta, 2.0).unwrap();
        let sol = solve_offline(&inst.losses, &inst.domain, &budget, &OracleConfig::default()).unwrap();
        sol.comparator.check_feasible(&inst.domain, &budget).unwrap();
        let traj = run_pog(
            &mut FixedLosses(&inst.losses),
            &Schedule::constant(0.1).unwrap(),
            &inst.domain,
            inst.domain.center(),
        )
        .unwrap();
        let best = dynamic_regret(&traj, &sol.comparator, &inst.losses).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let mut y = random_comparator(&inst.domain, horizon, &mut rng);
            shrink_to_budget(&mut y, &inst.domain, beta, 2.0).unwrap();
            let y = ComparatorSequence::from_flat(d, y, beta).unwrap();
            let r = dynamic_regret(&traj, &y, &inst.losses).unwrap();
            assert!(r <= best + 1e-6, "seed {seed}: {r} > {best}");
        }
    }
}
