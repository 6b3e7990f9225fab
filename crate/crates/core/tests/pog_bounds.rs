use dynreg::analysis::{recursive_bound_check, step_inequality_check, theorem2_bound};
use dynreg::instances::{random_comparator, random_instance};
use dynreg::online::FixedLosses;
use dynreg::pog::run_pog;
use dynreg::{dynamic_regret, schedule_corollary1, schedule_corollary2, ComparatorSequence, DynamicsBudget, Schedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn schedule_for(kind: u64, rng: &mut ChaCha8Rng, r: f64, g: f64, t: usize) -> Schedule<f64> {
    match kind % 3 {
        0 => Schedule::constant(rng.gen_range(0.01..1.0)).unwrap(),
        1 => {
            let beta = rng.gen_range(0.0..0.8);
            let gamma = rng.gen_range(beta..0.95);
            schedule_corollary1(gamma, beta, rng.gen_range(0.0..5.0), r, g, t).unwrap()
        }
        _ => schedule_corollary2(rng.gen_range(0.0..0.9), rng.gen_range(0..5), r, g, t).unwrap(),
    }
}

#[test]
fn step_recursive_and_end_to_end_bounds() {
    for seed in 0..25u64 {
        let inst = random_instance::<f64>(seed, 10..=60).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let horizon = inst.losses.len();
        let d = inst.domain.dimension();
        let (r, g) = (inst.domain.diameter_sq_bound(), inst.domain.subgrad_sq_bound());
        let schedule = schedule_for(seed, &mut rng, r, g, horizon);
        let x1 = inst.domain.sample(&mut rng);
        let traj = run_pog(&mut FixedLosses(&inst.losses), &schedule, &inst.domain, x1).unwrap();
        let mut xs: Vec<&[f64]> = traj.decisions().collect();
        let last = traj.final_decision().unwrap().to_vec();
        xs.push(&last);
        let etas = schedule.etas(horizon);
        let h = inst.regularizer;
        for _ in 0..5 {
            let flat = random_comparator(&inst.domain, horizon, &mut rng);
            let ys: Vec<&[f64]> = flat.chunks(d).collect();
            for t in 0..horizon {
                let c = step_inequality_check(xs[t], xs[t + 1], ys[t], &inst.losses[t], etas[t]);
                assert!(c.ok, "seed {seed} t {t}: {c:?}");
            }
            let c = recursive_bound_check(&xs, &ys, &etas, r);
            assert!(c.ok, "seed {seed}: {c:?}");
            let beta = rng.gen_range(0.0..0.8);
            let comparator = ComparatorSequence::from_flat(d, flat.clone(), beta).unwrap();
            let budget = DynamicsBudget::new(beta, comparator.weighted_path_length()).unwrap();
            let regret = dynamic_regret(&traj, &comparator, &inst.losses).unwrap();
            let bound = theorem2_bound(&schedule, horizon, &budget, r, g, h.value(xs[0]), h.value(&last));
            assert!(regret <= bound + 1e-5, "seed {seed}: {regret} > {bound}");
        }
    }
}

#[test]
fn sharper_bound_fails_for_an_understated_diameter() {
    // sanity check that the end-to-end check can fail: understate R by a factor 100
    let inst = random_instance::<f64>(3, 40..=40).unwrap();
    let horizon = inst.losses.len();
    let g = inst.domain.subgrad_sq_bound();
    let schedule = Schedule::constant(0.05).unwrap();
    let x1 = inst.domain.center();
    let traj = run_pog(&mut FixedLosses(&inst.losses), &schedule, &inst.domain, x1).unwrap();
    // compare against the best fixed point on a coarse sample: regret is usually positive,
    // and a zero-budget bound with R -> 0 shrinks to (G/2) sum eta
    let budget = DynamicsBudget::new(0.0, 0.0).unwrap();
    let tiny = theorem2_bound(&schedule, horizon, &budget, 1e-12, g, 0.0, 0.0);
    let full = theorem2_bound(
        &schedule,
        horizon,
        &budget,
        inst.domain.diameter_sq_bound(),
        g,
        0.0,
        0.0,
    );
    assert!(tiny < full);
    assert_eq!(traj.horizon(), horizon);
}
