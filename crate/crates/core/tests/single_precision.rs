use dynreg::adversary::{build_comparator, comparator_gain, play_game, RademacherGame};
use dynreg::analysis::theorem2_bound;
use dynreg::oracle::{solve_offline, OracleConfig};
use dynreg::{schedule_corollary1, DynamicsBudget, FixedLearner, Pog};

#[test]
fn rademacher_game_in_f32() {
    let budget = DynamicsBudget::<f32>::new(0.0, 4.0).unwrap();
    let game = RademacherGame::<f32>::new(2, 128, budget, 5).unwrap();
    let y = build_comparator(&game).unwrap();
    y.check_feasible(&game.domain(), game.budget()).unwrap();
    let report = play_game(&game, &mut FixedLearner::zero(2)).unwrap();
    assert!((report.dynamic_regret.unwrap() - comparator_gain(&game)).abs() < 1e-3);

    let schedule = schedule_corollary1(0.0f32, 0.0, 4.0, 4.0, 2.0, 128).unwrap();
    let mut pog = Pog::new(game.domain(), schedule);
    let report = play_game(&game, &mut pog).unwrap();
    let bound = theorem2_bound(&schedule, 128, &budget, 4.0, 2.0, 0.0, 0.0);
    assert!(report.dynamic_regret.unwrap() <= bound);
}

#[test]
fn offline_oracle_in_f32() {
    let budget = DynamicsBudget::<f32>::new(0.0, 2.0).unwrap();
    let game = RademacherGame::<f32>::new(1, 64, budget, 1).unwrap();
    let config = OracleConfig {
        step_scale: Some(1e4),
        tolerance: 1e-4,
        ..Default::default()
    };
    let sol = solve_offline(&game.losses(), &game.domain(), &budget, &config).unwrap();
    assert!(sol.residual <= 1e-4);
    // the oracle is at least as good as the block comparator
    assert!(-sol.objective >= comparator_gain(&game) - 1e-3);
}
