//! Random-walk expectations, closed-form bounds and numerical inequality checks.

pub mod bounds;
pub mod lemmas;
pub mod walk;

pub use bounds::{
    corollary1_bound, corollary1_display, series_bound_check, shift_to_path_budget, theorem1_bound, theorem2_bound,
    SeriesBound,
};
pub use lemmas::{recursive_bound_check, run_lemma_suite, step_inequality_check, LemmaCheck, LemmaSuiteReport};
pub use walk::{
    central_binomial_ratio, l1_walk_lower_bound_check, walk_expectation, walk_expectation_closed_form,
    walk_expectation_enumeration, walk_expectation_exact, L1WalkReport, WalkExpectation, WalkMethod,
};
