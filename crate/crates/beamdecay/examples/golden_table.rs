//! Print the built-in six-row reference table of decay-rate parameters and
//! verify every cell against its golden value.
//!
//! ```bash
//! cargo run --example golden_table
//! ```

use beamdecay::numeric::round_dp;
use beamdecay::stability::table1;

fn main() {
    let rows = table1::reference_rows();
    println!("gamma   ka      beta0  beta1   lambda  M        sigma");
    for row in &rows {
        println!(
            "{:<7} {:<7} {:<6.2} {:<7.2} {:<7} {:<8.2} {:<5.2}",
            row.gamma,
            row.ka_minus,
            round_dp(row.beta0, 2),
            round_dp(row.beta1, 2),
            row.lambda,
            round_dp(row.overshoot, 2),
            round_dp(row.rate, 2),
        );
    }
    let bad = table1::golden_deviations(&rows);
    if bad.is_empty() {
        println!(
            "\nall {} cells match the golden table within {}",
            rows.len() * 4,
            table1::GOLDEN_TOL
        );
    } else {
        println!("\ndeviating cells: {bad:?}");
        std::process::exit(1);
    }
}
