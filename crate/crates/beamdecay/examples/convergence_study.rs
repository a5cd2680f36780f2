//! Mesh-convergence study for the hinged conservative beam: the first
//! discrete natural frequency approaches the closed form
//! `omega_1 = (pi / l)^2 sqrt(r / m)` at fourth order.
//!
//! ```bash
//! cargo run --example convergence_study
//! ```

use beamdecay::discretization::{assemble, smallest_natural_frequency, Mesh};
use beamdecay::model::{bench, BoundaryControls};

fn main() {
    let spec = bench::beam(0.0);
    let m = spec.mass_density.as_constant().unwrap();
    let r = spec.rigidity.as_constant().unwrap();
    let exact = (std::f64::consts::PI / spec.length).powi(2) * (r / m).sqrt();
    println!("analytic first frequency: {exact:.6} rad/s\n");
    println!("  n     omega_1        error         ratio");
    let mut previous: Option<f64> = None;
    for n in [4usize, 8, 16, 32] {
        let mesh = Mesh::uniform(spec.length, n).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let omega = smallest_natural_frequency(&beam).unwrap();
        let error = (omega - exact).abs();
        match previous {
            Some(p) => println!("  {n:<5} {omega:<14.8} {error:<13.3e} {:.2}", p / error),
            None => println!("  {n:<5} {omega:<14.8} {error:<13.3e} -"),
        }
        previous = Some(error);
    }
    println!("\nratios near 16 per mesh halving confirm fourth-order convergence");
}
