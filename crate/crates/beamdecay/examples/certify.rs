//! Compute the exponential-decay certificate for the bundled benchmark
//! beam, with and without boundary dampers.
//!
//! ```bash
//! cargo run --example certify
//! ```

use beamdecay::model::bench;
use beamdecay::{beta_bounds_constant, beta_bounds_general, certificate, lambda_range};

fn main() {
    let section = bench::section();
    let (m, r) = (section.mass_per_length, section.rigidity);
    let length = bench::LENGTH;
    println!("benchmark beam: l = {length} m, m = {m:.4e} kg/m, r = {r:.4e} N m^2\n");

    for gamma in [0.1, 1.0, 5.0] {
        for ka in [0.0, 0.01] {
            let bounds = beta_bounds_constant(m, gamma, r, length, ka, ka).unwrap();
            let general = beta_bounds_general(m, gamma * m, r, length, ka, ka).unwrap();
            let (_, lambda_max) = lambda_range(bounds.beta0, gamma, m, m).unwrap();
            let cert = certificate(&bounds, 0.96 * lambda_max, gamma, m, m).unwrap();
            println!(
                "gamma = {gamma:<4} ka = {ka:<5}  beta0 = {:.4}  beta1 = {:.4} (general {:.4})",
                bounds.beta0, bounds.beta1, general.beta1
            );
            println!(
                "    lambda = {:.4} (max {:.4})  M = {:.4}  sigma = {:.4}",
                cert.lambda, cert.lambda_max, cert.overshoot, cert.rate
            );
            println!(
                "    guarantee: E(t) <= {:.2} exp(-{:.3} t) E(0)\n",
                cert.overshoot, cert.rate
            );
        }
    }
}
