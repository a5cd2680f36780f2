//! Randomized verification suites: the two integral inequalities on random
//! endpoint-vanishing spline profiles, the Lyapunov sandwich on random
//! states and short trajectories, and discrete dissipativity.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::{assemble, interpolate_initial, Mesh};
use crate::energy::{auxiliary_j, build_ledger, energy};
use crate::error::Result;
use crate::model::{bench, BoundaryControls, InitialConditions, Profile};
use crate::stability::{beta_bounds_constant, lambda_range, poincare_check, trace_check};
use crate::timestepper::{integrate, IntegratorConfig};

/// Number of evaluation points for sampled profiles.
pub const PROFILE_GRID: usize = 201;

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// A minimized failing profile (sampled on the uniform grid), when the
    /// suite can attribute the failure to one.
    pub counterexample: Option<Vec<f64>>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Natural cubic spline through `(xs, ys)`, evaluated at `x`.
fn spline_eval(xs: &[f64], ys: &[f64], second: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let mut i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(n - 2),
        Err(i) => i.saturating_sub(1).min(n - 2),
    };
    if x <= xs[0] {
        i = 0;
    }
    let h = xs[i + 1] - xs[i];
    let a = (xs[i + 1] - x) / h;
    let b = (x - xs[i]) / h;
    a * ys[i]
        + b * ys[i + 1]
        + ((a * a * a - a) * second[i] + (b * b * b - b) * second[i + 1]) * h * h / 6.0
}

/// Second derivatives of the natural cubic spline (tridiagonal solve).
fn spline_moments(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut rhs = vec![0.0; n];
    let mut diag = vec![1.0; n];
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        lower[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
    }
    // Thomas algorithm; natural ends keep the identity rows
    for i in 1..n {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

/// Generator of random cubic-spline profiles vanishing at both endpoints.
pub struct ProfileSampler {
    rng: ChaCha8Rng,
    length: f64,
}

impl ProfileSampler {
    pub fn new(seed: u64, length: f64) -> Self {
        ProfileSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            length,
        }
    }

    /// A random spline through 5 to 12 knots, sampled on the uniform grid.
    pub fn sample(&mut self) -> Vec<f64> {
        let knots = self.rng.gen_range(5..=12);
        let xs: Vec<f64> = (0..knots)
            .map(|i| self.length * i as f64 / (knots - 1) as f64)
            .collect();
        let mut ys: Vec<f64> = (0..knots).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
        ys[0] = 0.0;
        ys[knots - 1] = 0.0;
        let second = spline_moments(&xs, &ys);
        let mut samples: Vec<f64> = (0..PROFILE_GRID)
            .map(|i| {
                let x = self.length * i as f64 / (PROFILE_GRID - 1) as f64;
                spline_eval(&xs, &ys, &second, x)
            })
            .collect();
        samples[0] = 0.0;
        samples[PROFILE_GRID - 1] = 0.0;
        samples
    }
}

/// Greedy counterexample shrinking: repeatedly zero interior spans while the
/// failure predicate still fires.
fn minimize_profile(profile: &[f64], still_fails: impl Fn(&[f64]) -> bool) -> Vec<f64> {
    let mut best = profile.to_vec();
    let mut span = best.len() / 2;
    while span >= 4 {
        let mut start = 1;
        while start + span < best.len() {
            let mut candidate = best.clone();
            for v in candidate[start..start + span].iter_mut() {
                *v = 0.0;
            }
            if still_fails(&candidate) {
                best = candidate;
            }
            start += span;
        }
        span /= 2;
    }
    best
}

/// Poincare-type inequality on `n` random profiles.
pub fn run_poincare_suite(n: usize, length: f64, seed: u64) -> SuiteOutcome {
    let mut sampler = ProfileSampler::new(seed, length);
    let mut failures = 0;
    let mut counterexample = None;
    for _ in 0..n {
        let profile = sampler.sample();
        let rep = poincare_check(&profile, length).expect("generated profile is admissible");
        if !rep.holds {
            failures += 1;
            if counterexample.is_none() {
                let fails = |p: &[f64]| poincare_check(p, length).map(|r| !r.holds).unwrap_or(false);
                counterexample = Some(minimize_profile(&profile, fails));
            }
        }
    }
    SuiteOutcome {
        name: "poincare",
        checks: n,
        failures,
        counterexample,
    }
}

/// Boundary-trace inequalities on `n` random profiles.
pub fn run_trace_suite(n: usize, length: f64, seed: u64) -> SuiteOutcome {
    let mut sampler = ProfileSampler::new(seed, length);
    let mut failures = 0;
    let mut counterexample = None;
    for _ in 0..n {
        let profile = sampler.sample();
        let rep = trace_check(&profile, length).expect("generated profile is admissible");
        if !(rep.left.holds && rep.right.holds) {
            failures += 1;
            if counterexample.is_none() {
                let fails = |p: &[f64]| {
                    trace_check(p, length)
                        .map(|r| !(r.left.holds && r.right.holds))
                        .unwrap_or(false)
                };
                counterexample = Some(minimize_profile(&profile, fails));
            }
        }
    }
    SuiteOutcome {
        name: "trace",
        checks: n,
        failures,
        counterexample,
    }
}

/// Sandwich suite configuration. `beta0_scale` is a fault-injection hook:
/// it scales the claimed lower-bound constant before checking, so a
/// sufficiently shrunk claim must be caught by the suite.
#[derive(Debug, Clone, Copy)]
pub struct SandwichConfig {
    pub states: usize,
    pub seed: u64,
    pub beta0_scale: f64,
    pub beta1_scale: f64,
}

impl Default for SandwichConfig {
    fn default() -> Self {
        SandwichConfig {
            states: 400,
            seed: 42,
            beta0_scale: 1.0,
            beta1_scale: 1.0,
        }
    }
}

/// Lyapunov sandwich `(1 - beta0 lambda) E <= L <= (1 + beta1 lambda) E`
/// over discrete states of the benchmark beam, with and without boundary
/// dampers.
///
/// The state family combines random spline profiles (independent
/// velocities), velocity-anticorrelated states `v = -alpha q` at the
/// energy-balancing rate where `J` is most negative relative to `E`, and
/// the first-mode extremal state that attains the sharp constant of the
/// underlying quadratic inequality.
pub fn run_sandwich_state_suite(cfg: SandwichConfig) -> Result<SuiteOutcome> {
    let gamma = 1.0;
    let spec = bench::beam(gamma);
    let mesh = Mesh::uniform(spec.length, 16)?;
    let m = spec.mass_density.as_constant().unwrap();
    let r = spec.rigidity.as_constant().unwrap();

    let mut failures = 0;
    let mut checks = 0;
    let mut counterexample: Option<Vec<f64>> = None;

    // two boundary configurations: dampers exercise the upper bound's
    // damper terms, the free beam exposes the lower bound
    for ka in [0.0, 0.01] {
        let bc = BoundaryControls {
            ka_left: ka,
            ka_right: ka,
            ..BoundaryControls::free()
        };
        let beam = assemble(&spec, &bc, &mesh)?;
        let bounds = beta_bounds_constant(m, gamma, r, spec.length, ka, ka)?;
        let beta0 = bounds.beta0 * cfg.beta0_scale;
        let beta1 = bounds.beta1 * cfg.beta1_scale;
        let (_, upper) = lambda_range(beta0, gamma, m, m)?;
        let lambda = 0.96 * upper;

        let interpolate = |samples: &[f64]| -> Result<DVector<f64>> {
            let ic = InitialConditions {
                deflection: Profile::Samples(samples.to_vec()),
                velocity: Profile::Zero,
            };
            let (q, _) = interpolate_initial(&ic, &mesh)?;
            Ok(q)
        };
        let balanced_velocity = |q: &DVector<f64>| -> DVector<f64> {
            let potential = q.dot(&(&beam.stiffness * q));
            let inertia = q.dot(&(&beam.mass * q)).max(1e-300);
            -(q * (potential / inertia).sqrt())
        };

        let mut states: Vec<(Vec<f64>, DVector<f64>, DVector<f64>)> = Vec::new();
        // deterministic extremal probe: first mode with balanced velocity
        let halfsine: Vec<f64> = (0..PROFILE_GRID)
            .map(|i| {
                let x = spec.length * i as f64 / (PROFILE_GRID - 1) as f64;
                0.01 * (std::f64::consts::PI * x / spec.length).sin()
            })
            .collect();
        let q = interpolate(&halfsine)?;
        let v = balanced_velocity(&q);
        states.push((halfsine, q, v));

        let mut sampler = ProfileSampler::new(cfg.seed, spec.length);
        for k in 0..cfg.states {
            let profile = sampler.sample();
            let q = interpolate(&profile)?;
            let v = if k % 2 == 0 {
                interpolate(&sampler.sample())?
            } else {
                balanced_velocity(&q)
            };
            states.push((profile, q, v));
        }

        for (profile, q, v) in states {
            checks += 1;
            let e = energy(&beam, &q, &v);
            let j = auxiliary_j(&beam, &q, &v);
            let l = e + lambda * j;
            let slack = 1e-9 * e.max(1e-300);
            let ok =
                (1.0 - beta0 * lambda) * e <= l + slack && l <= (1.0 + beta1 * lambda) * e + slack;
            if !ok {
                failures += 1;
                if counterexample.is_none() {
                    counterexample = Some(profile);
                }
            }
        }
    }
    Ok(SuiteOutcome {
        name: "sandwich",
        checks,
        failures,
        counterexample,
    })
}

/// Sandwich along short trajectories at the reference damping levels.
pub fn run_sandwich_trajectory_suite() -> Result<SuiteOutcome> {
    let mut checks = 0;
    let mut failures = 0;
    for &(gamma, ka, lambda) in &[(0.1, 0.0, 0.04), (1.0, 0.01, 0.4), (5.0, 0.0, 2.4)] {
        let spec = bench::beam(gamma);
        let bc = BoundaryControls {
            ka_left: ka,
            ka_right: ka,
            ..BoundaryControls::free()
        };
        let m = spec.mass_density.as_constant().unwrap();
        let r = spec.rigidity.as_constant().unwrap();
        let bounds = beta_bounds_constant(m, gamma, r, spec.length, ka, ka)?;
        let mesh = Mesh::uniform(spec.length, 16)?;
        let beam = assemble(&spec, &bc, &mesh)?;
        let (q0, v0) = interpolate_initial(&InitialConditions::demo(), &mesh)?;
        let cfg = IntegratorConfig {
            snapshot_stride: Some(20),
            ..IntegratorConfig::new(2.0).with_dt(1e-4)
        };
        let traj = integrate(&beam, &q0, &v0, &cfg)?;
        let ledger = build_ledger(&beam, &traj, Some(lambda));
        let lvals = ledger.lyapunov.as_ref().unwrap();
        let slack = 1e-9 * ledger.e0;
        for i in 0..ledger.times.len() {
            checks += 1;
            let e = ledger.energy[i];
            let l = lvals[i];
            if !((1.0 - bounds.beta0 * lambda) * e <= l + slack
                && l <= (1.0 + bounds.beta1 * lambda) * e + slack)
            {
                failures += 1;
            }
        }
    }
    Ok(SuiteOutcome {
        name: "sandwich-trajectory",
        checks,
        failures,
        counterexample: None,
    })
}

/// Discrete dissipativity: damped energies never increase step to step, and
/// the conservative configuration conserves energy to roundoff.
pub fn run_dissipativity_suite() -> Result<SuiteOutcome> {
    let mut checks = 0;
    let mut failures = 0;

    for &(gamma, ka) in &[(0.1, 0.0), (1.0, 0.01), (5.0, 0.01)] {
        let spec = bench::beam(gamma);
        let bc = BoundaryControls {
            ka_left: ka,
            ka_right: ka,
            ..BoundaryControls::free()
        };
        let mesh = Mesh::uniform(spec.length, 16)?;
        let beam = assemble(&spec, &bc, &mesh)?;
        let (q0, v0) = interpolate_initial(&InitialConditions::demo(), &mesh)?;
        let cfg = IntegratorConfig {
            snapshot_stride: Some(1),
            ..IntegratorConfig::new(1.0).with_dt(5e-4)
        };
        let traj = integrate(&beam, &q0, &v0, &cfg)?;
        let ledger = build_ledger(&beam, &traj, None);
        let tol = 1e-10 * ledger.e0;
        for w in ledger.energy.windows(2) {
            checks += 1;
            if w[1] > w[0] + tol {
                failures += 1;
            }
        }
    }

    // conservative configuration: spring only
    let spec = bench::beam(0.0);
    let bc = BoundaryControls {
        kr_left: 1.0,
        ..BoundaryControls::free()
    };
    let mesh = Mesh::uniform(spec.length, 16)?;
    let beam = assemble(&spec, &bc, &mesh)?;
    let (q0, v0) = interpolate_initial(&InitialConditions::demo(), &mesh)?;
    let cfg = IntegratorConfig {
        snapshot_stride: Some(100),
        ..IntegratorConfig::new(10.0).with_dt(1e-3)
    };
    let traj = integrate(&beam, &q0, &v0, &cfg)?;
    let ledger = build_ledger(&beam, &traj, None);
    checks += ledger.energy.len();
    for &e in &ledger.energy {
        if (e - ledger.e0).abs() > 1e-8 * ledger.e0 {
            failures += 1;
        }
    }

    Ok(SuiteOutcome {
        name: "dissipativity",
        checks,
        failures,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        let p = run_poincare_suite(200, 1.0, 42);
        assert!(p.passed(), "{} failures", p.failures);
        let t = run_trace_suite(200, 1.0, 42);
        assert!(t.passed(), "{} failures", t.failures);
        let s = run_sandwich_state_suite(SandwichConfig {
            states: 150,
            ..SandwichConfig::default()
        })
        .unwrap();
        assert!(s.passed(), "{} failures", s.failures);
    }

    #[test]
    fn decisively_corrupted_beta0_is_caught() {
        // the true sandwich constant carries slack (the sharp constant of
        // the underlying quadratic inequality is 2/pi^2 of the claimed one),
        // so mild corruption still yields a valid bound; a scale well below
        // 2/pi^2 ~ 0.2 must be falsified by the anticorrelated states
        let s = run_sandwich_state_suite(SandwichConfig {
            states: 200,
            beta0_scale: 0.1,
            ..SandwichConfig::default()
        })
        .unwrap();
        assert!(!s.passed(), "corrupted lower bound escaped the suite");
        assert!(s.counterexample.is_some());
    }

    #[test]
    fn spline_profiles_vanish_at_ends() {
        let mut sampler = ProfileSampler::new(7, 2.0);
        for _ in 0..5 {
            let p = sampler.sample();
            assert_eq!(p[0], 0.0);
            assert_eq!(*p.last().unwrap(), 0.0);
            assert_eq!(p.len(), PROFILE_GRID);
        }
    }

    #[test]
    fn dissipativity_suite_passes() {
        let d = run_dissipativity_suite().unwrap();
        assert!(d.passed(), "{} failures", d.failures);
    }

    #[test]
    fn trajectory_sandwich_suite_passes() {
        let s = run_sandwich_trajectory_suite().unwrap();
        assert!(s.passed(), "{} failures", s.failures);
    }
}
