//! Run the randomized verification suites: the two integral inequalities
//! behind the sandwich constants, the sandwich itself on random states and
//! short trajectories, and discrete dissipativity.
//!
//! ```bash
//! cargo run --release --example inequality_checks
//! ```

use beamdecay::checks::{
    run_dissipativity_suite, run_poincare_suite, run_sandwich_state_suite,
    run_sandwich_trajectory_suite, run_trace_suite, SandwichConfig,
};

fn main() {
    let seed = 42;
    let outcomes = vec![
        run_poincare_suite(1000, 1.0, seed),
        run_trace_suite(1000, 1.0, seed),
        run_sandwich_state_suite(SandwichConfig {
            states: 400,
            seed,
            ..SandwichConfig::default()
        })
        .unwrap(),
        run_sandwich_trajectory_suite().unwrap(),
        run_dissipativity_suite().unwrap(),
    ];
    let mut failed = false;
    for o in &outcomes {
        println!(
            "suite {:<20} {:>6} checks   {}",
            o.name,
            o.checks,
            if o.passed() {
                "pass".to_string()
            } else {
                failed = true;
                format!("FAIL ({} violations)", o.failures)
            }
        );
    }
    std::process::exit(if failed { 1 } else { 0 });
}
