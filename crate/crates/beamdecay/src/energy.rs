//! Discrete evaluation of the energy `E`, the auxiliary function `J`, the
//! Lyapunov function `L = E + lambda J`, and the verification checks built
//! on them: the energy identity, the derivative relations, the decay
//! certificate, and the measured decay rate.

use nalgebra::DVector;

use crate::discretization::DiscreteBeam;
use crate::error::{Error, Result};
use crate::stability::DecayCertificate;
use crate::timestepper::Trajectory;

/// Total energy `E = 1/2 qd' M qd + 1/2 q' K q`.
///
/// The stiffness operator already carries the boundary-spring terms, so
/// this equals kinetic + bending + spring energy.
pub fn energy(beam: &DiscreteBeam, q: &DVector<f64>, v: &DVector<f64>) -> f64 {
    0.5 * v.dot(&(&beam.mass * v)) + 0.5 * q.dot(&(&beam.stiffness * q))
}

/// Auxiliary function `J = qd' M q + 1/2 q' C q`.
///
/// The damping operator bundles the distributed term `1/2 int mu u^2` and
/// the boundary-damper terms `1/2 ka u_x^2` in one quadratic form, for
/// proportional and non-proportional damping alike.
pub fn auxiliary_j(beam: &DiscreteBeam, q: &DVector<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(&beam.mass * q)) + 0.5 * q.dot(&(&beam.damping * q))
}

/// Lyapunov function value `L = E + lambda J`.
pub fn lyapunov_l(e: f64, j: f64, lambda: f64) -> f64 {
    e + lambda * j
}

/// Per-snapshot energy bookkeeping extracted from a trajectory.
#[derive(Debug, Clone)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub auxiliary: Vec<f64>,
    /// `L` values when a penalty term was supplied.
    pub lyapunov: Option<Vec<f64>>,
    /// Energy-identity residual `E(t) + dissipation(t) - E(0)`.
    pub residual: Vec<f64>,
    pub e0: f64,
    pub lambda: Option<f64>,
}

/// Evaluates the ledger along a trajectory.
pub fn build_ledger(beam: &DiscreteBeam, traj: &Trajectory, lambda: Option<f64>) -> EnergyLedger {
    let n = traj.n_snapshots();
    let mut e = Vec::with_capacity(n);
    let mut j = Vec::with_capacity(n);
    for i in 0..n {
        e.push(energy(beam, &traj.states[i], &traj.velocities[i]));
        j.push(auxiliary_j(beam, &traj.states[i], &traj.velocities[i]));
    }
    let e0 = e[0];
    let residual: Vec<f64> = (0..n)
        .map(|i| e[i] + traj.diss_viscous[i] + traj.diss_left[i] + traj.diss_right[i] - e0)
        .collect();
    let lyapunov = lambda.map(|l| e.iter().zip(j.iter()).map(|(&e, &j)| lyapunov_l(e, j, l)).collect());
    EnergyLedger {
        times: traj.times.clone(),
        energy: e,
        auxiliary: j,
        lyapunov,
        residual,
        e0,
        lambda,
    }
}

/// Energy-identity residual per snapshot:
/// `E(t) + D_viscous(t) + D_left(t) + D_right(t) - E(0)`.
pub fn energy_identity_residual(beam: &DiscreteBeam, traj: &Trajectory) -> Vec<f64> {
    build_ledger(beam, traj, None).residual
}

/// Pairs `(numerical dE/dt, -qd' C qd)` per interior snapshot. The left
/// entry is a central difference of `E` over snapshots, so the snapshots
/// must be uniformly spaced.
pub fn de_dt_check(beam: &DiscreteBeam, traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    let ledger = build_ledger(beam, traj, None);
    let n = ledger.times.len();
    if n < 3 {
        return Err(Error::InsufficientData(
            "need at least three snapshots for a central difference".into(),
        ));
    }
    let dt = uniform_snapshot_spacing(&ledger.times)?;
    let mut out = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let numeric = (ledger.energy[i + 1] - ledger.energy[i - 1]) / (2.0 * dt);
        let v = &traj.velocities[i];
        let formula = -v.dot(&(&beam.damping * v));
        out.push((numeric, formula));
    }
    Ok(out)
}

/// Pairs `(numerical dJ/dt, 2 qd' M qd - 2 E)` per interior snapshot.
pub fn dj_dt_check(beam: &DiscreteBeam, traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    let ledger = build_ledger(beam, traj, None);
    let n = ledger.times.len();
    if n < 3 {
        return Err(Error::InsufficientData(
            "need at least three snapshots for a central difference".into(),
        ));
    }
    let dt = uniform_snapshot_spacing(&ledger.times)?;
    let mut out = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let numeric = (ledger.auxiliary[i + 1] - ledger.auxiliary[i - 1]) / (2.0 * dt);
        let v = &traj.velocities[i];
        let formula = 2.0 * v.dot(&(&beam.mass * v)) - 2.0 * ledger.energy[i];
        out.push((numeric, formula));
    }
    Ok(out)
}

fn uniform_snapshot_spacing(times: &[f64]) -> Result<f64> {
    let dt = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::Precondition(
                "derivative checks need uniformly spaced snapshots".into(),
            ));
        }
    }
    Ok(dt)
}

/// Outcome of checking `E(t) <= M exp(-sigma t) E(0)` along a ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck {
    pub holds: bool,
    /// Minimum over snapshots of `envelope - E`; negative when violated.
    pub margin: f64,
    /// Time of the worst snapshot.
    pub worst_time: f64,
}

/// Relative slack allowed when comparing energies against the envelope.
pub const CERTIFICATE_SLACK: f64 = 1e-6;

pub fn certificate_check(ledger: &EnergyLedger, cert: &DecayCertificate) -> CertificateCheck {
    let mut margin = f64::INFINITY;
    let mut worst_time = 0.0;
    let mut holds = true;
    for (&t, &e) in ledger.times.iter().zip(ledger.energy.iter()) {
        let envelope = ledger.e0 * cert.overshoot * (-cert.rate * t).exp();
        let m = envelope - e;
        if m < margin {
            margin = m;
            worst_time = t;
        }
        if e > envelope * (1.0 + CERTIFICATE_SLACK) {
            holds = false;
        }
    }
    CertificateCheck {
        holds,
        margin,
        worst_time,
    }
}

/// Least-squares slope of `-ln E(t)` over the snapshots inside `window`.
pub fn measured_decay_rate(times: &[f64], energy: &[f64], window: (f64, f64)) -> Result<f64> {
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &e) in times.iter().zip(energy.iter()) {
        if t < window.0 || t > window.1 {
            continue;
        }
        if !(e > 0.0) {
            return Err(Error::RateUndefined);
        }
        ts.push(t);
        ys.push(-e.ln());
    }
    if ts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "window [{}, {}] contains {} snapshots",
            window.0,
            window.1,
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (t, y) in ts.iter().zip(ys.iter()) {
        sxy += (t - tm) * (y - ym);
        sxx += (t - tm) * (t - tm);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("degenerate time window".into()));
    }
    Ok(sxy / sxx)
}

/// Default measurement window: skip the first and last tenth of the run,
/// where the overshoot transient and terminal noise live.
pub fn default_rate_window(t_final: f64) -> (f64, f64) {
    (0.1 * t_final, 0.9 * t_final)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::{assemble, interpolate_initial, Mesh};
    use crate::model::{bench, BoundaryControls, InitialConditions, Profile};
    use crate::stability::{beta_bounds_constant, certificate, FormulaVariant, LyapunovBounds};
    use crate::timestepper::{integrate, IntegratorConfig};
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn demo_run(
        gamma: f64,
        bc: BoundaryControls,
        n: usize,
        dt: f64,
        t_final: f64,
        stride: usize,
    ) -> (crate::discretization::DiscreteBeam, Trajectory) {
        let spec = bench::beam(gamma);
        let mesh = Mesh::uniform(spec.length, n).unwrap();
        let beam = assemble(&spec, &bc, &mesh).unwrap();
        let (q0, v0) = interpolate_initial(&InitialConditions::demo(), &mesh).unwrap();
        let cfg = IntegratorConfig {
            snapshot_stride: Some(stride),
            ..IntegratorConfig::new(t_final).with_dt(dt)
        };
        let traj = integrate(&beam, &q0, &v0, &cfg).unwrap();
        (beam, traj)
    }

    #[test]
    fn zero_state_has_zero_energy_and_j() {
        let spec = bench::beam(1.0);
        let mesh = Mesh::uniform(spec.length, 4).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let z = DVector::zeros(beam.n_unknowns());
        assert_eq!(energy(&beam, &z, &z), 0.0);
        assert_eq!(auxiliary_j(&beam, &z, &z), 0.0);
    }

    #[test]
    fn kinetic_energy_of_cubic_velocity_is_exact() {
        // v(x) = c x^2 (l - x) lies in the interpolation space, so the mass
        // quadrature is exact: E = (m / 2) int v^2 = m c^2 l^7 / 210
        let spec = bench::beam(0.0);
        let m = spec.mass_density.as_constant().unwrap();
        let l = spec.length;
        let c = 3.1;
        let mesh = Mesh::uniform(l, 6).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let mut v = DVector::zeros(beam.n_unknowns());
        let mut idx = 0;
        for node in 0..=6usize {
            let x = mesh.node_positions[node];
            if !(node == 0 || node == 6) {
                v[idx] = c * x * x * (l - x);
                idx += 1;
            }
            v[idx] = c * (2.0 * l * x - 3.0 * x * x);
            idx += 1;
        }
        let q = DVector::zeros(beam.n_unknowns());
        // int_0^l x^4 (l-x)^2 dx = l^7 / 105
        let exact = 0.5 * m * c * c * l.powi(7) / 105.0;
        assert_relative_eq!(energy(&beam, &q, &v), exact, max_relative = 1e-12);
    }

    #[test]
    fn spring_term_appears_in_energy() {
        let spec = bench::beam(0.0);
        let mesh = Mesh::uniform(spec.length, 4).unwrap();
        let kr = 0.8;
        let bc = BoundaryControls {
            kr_right: kr,
            ..BoundaryControls::free()
        };
        let with = assemble(&spec, &bc, &mesh).unwrap();
        let without = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let (q, _) = interpolate_initial(
            &InitialConditions {
                deflection: Profile::HalfSine { amplitude: 0.02 },
                velocity: Profile::Zero,
            },
            &mesh,
        )
        .unwrap();
        let v = DVector::zeros(with.n_unknowns());
        let diff = energy(&with, &q, &v) - energy(&without, &q, &v);
        let expected = 0.5 * kr * q[with.right_rotation_index].powi(2);
        assert_relative_eq!(diff, expected, max_relative = 1e-12);
    }

    #[test]
    fn j_vanishes_without_velocity_damping_and_dampers() {
        let spec = bench::beam(0.0);
        let mesh = Mesh::uniform(spec.length, 4).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let (q, _) = interpolate_initial(&InitialConditions::demo(), &mesh).unwrap();
        let v = DVector::zeros(beam.n_unknowns());
        assert_eq!(auxiliary_j(&beam, &q, &v), 0.0);
    }

    #[test]
    fn j_equals_twice_kinetic_when_q_equals_v() {
        let spec = bench::beam(0.0);
        let mesh = Mesh::uniform(spec.length, 4).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let (q, _) = interpolate_initial(&InitialConditions::demo(), &mesh).unwrap();
        let j = auxiliary_j(&beam, &q, &q);
        let kinetic = 0.5 * q.dot(&(&beam.mass * &q));
        assert_relative_eq!(j, 2.0 * kinetic, max_relative = 1e-12);
    }

    #[test]
    fn lyapunov_arithmetic() {
        assert_eq!(lyapunov_l(1.0, 0.0, 7.0), 1.0);
        assert_eq!(lyapunov_l(2.0, -1.0, 0.5), 1.5);
    }

    #[test]
    fn residual_is_zero_at_t0_and_small_when_conservative() {
        let bc = BoundaryControls {
            kr_left: 1.0,
            ..BoundaryControls::free()
        };
        let (beam, traj) = demo_run(0.0, bc, 8, 1e-3, 2.0, 10);
        let res = energy_identity_residual(&beam, &traj);
        assert_eq!(res[0], 0.0);
        let ledger = build_ledger(&beam, &traj, None);
        let bound = 1e-8 * ledger.e0;
        for r in &res {
            assert!(r.abs() <= bound, "conservative residual {r}");
        }
    }

    /// Resolved configuration: first-mode initial data, fully resolved in
    /// space and time, where the trapezoidal dissipation bookkeeping shows
    /// clean second-order convergence.
    fn resolved_residual(dt: f64) -> f64 {
        let spec = bench::beam(1.0);
        let mesh = Mesh::uniform(spec.length, 8).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let ic = InitialConditions {
            deflection: Profile::HalfSine { amplitude: 0.01 },
            velocity: Profile::Zero,
        };
        let (q0, v0) = interpolate_initial(&ic, &mesh).unwrap();
        let cfg = IntegratorConfig {
            snapshot_stride: Some(1),
            ..IntegratorConfig::new(2.0).with_dt(dt)
        };
        let traj = integrate(&beam, &q0, &v0, &cfg).unwrap();
        let res = energy_identity_residual(&beam, &traj);
        res.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }

    #[test]
    fn residual_halving_ratio_is_second_order() {
        let coarse = resolved_residual(2e-3);
        let fine = resolved_residual(1e-3);
        let ratio = coarse / fine;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "dt-halving ratio {ratio} outside [3.5, 4.5]"
        );
    }

    #[test]
    fn de_dt_matches_formula_at_scheme_order() {
        let run = |dt: f64| -> f64 {
            let spec = bench::beam(1.0);
            let mesh = Mesh::uniform(spec.length, 8).unwrap();
            let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
            let ic = InitialConditions {
                deflection: Profile::HalfSine { amplitude: 0.01 },
                velocity: Profile::Zero,
            };
            let (q0, v0) = interpolate_initial(&ic, &mesh).unwrap();
            let cfg = IntegratorConfig {
                snapshot_stride: Some(1),
                ..IntegratorConfig::new(1.0).with_dt(dt)
            };
            let traj = integrate(&beam, &q0, &v0, &cfg).unwrap();
            de_dt_check(&beam, &traj)
                .unwrap()
                .iter()
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        };
        let coarse = run(2e-3);
        let fine = run(1e-3);
        let ratio = coarse / fine;
        assert!((3.0..=5.0).contains(&ratio), "dE/dt refinement ratio {ratio}");
    }

    #[test]
    fn de_dt_conservative_rhs_is_zero() {
        let bc = BoundaryControls {
            kr_left: 1.0,
            ..BoundaryControls::free()
        };
        let (beam, traj) = demo_run(0.0, bc, 6, 1e-3, 0.5, 1);
        let pairs = de_dt_check(&beam, &traj).unwrap();
        let e0 = build_ledger(&beam, &traj, None).e0;
        for (numeric, formula) in pairs {
            assert_eq!(formula, 0.0);
            assert!(numeric.abs() <= 1e-4 * e0 / traj.dt * 1e-3 + 1e-12);
        }
    }

    #[test]
    fn de_dt_needs_three_snapshots() {
        let bc = BoundaryControls::free();
        let (beam, traj) = demo_run(1.0, bc, 4, 1e-3, 2e-3, 1000);
        assert!(matches!(
            de_dt_check(&beam, &traj),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn dj_dt_zero_state_and_refinement() {
        let spec = bench::beam(1.0);
        let mesh = Mesh::uniform(spec.length, 6).unwrap();
        let beam = assemble(&spec, &BoundaryControls::free(), &mesh).unwrap();
        let z = DVector::zeros(beam.n_unknowns());
        let cfg = IntegratorConfig {
            snapshot_stride: Some(1),
            ..IntegratorConfig::new(0.01).with_dt(1e-3)
        };
        let traj = integrate(&beam, &z, &z, &cfg).unwrap();
        for (a, b) in dj_dt_check(&beam, &traj).unwrap() {
            assert_eq!(a, 0.0);
            assert_eq!(b, 0.0);
        }

        let run = |dt: f64| -> f64 {
            let ic = InitialConditions {
                deflection: Profile::HalfSine { amplitude: 0.01 },
                velocity: Profile::Zero,
            };
            let (q0, v0) = interpolate_initial(&ic, &mesh).unwrap();
            let cfg = IntegratorConfig {
                snapshot_stride: Some(1),
                ..IntegratorConfig::new(1.0).with_dt(dt)
            };
            let traj = integrate(&beam, &q0, &v0, &cfg).unwrap();
            dj_dt_check(&beam, &traj)
                .unwrap()
                .iter()
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        };
        let ratio = run(2e-3) / run(1e-3);
        assert!((3.0..=5.0).contains(&ratio), "dJ/dt refinement ratio {ratio}");
    }

    #[test]
    fn dj_dt_period_average_matches_secant() {
        // over interior snapshots the mean of dJ/dt must match the secant
        // slope of J itself at the scheme's order
        let (beam, traj) = demo_run(0.0, BoundaryControls { kr_left: 1.0, ..BoundaryControls::free() }, 8, 1e-4, 0.5, 1);
        let ledger = build_ledger(&beam, &traj, None);
        let pairs = dj_dt_check(&beam, &traj).unwrap();
        let mean_formula: f64 = pairs.iter().map(|(_, b)| b).sum::<f64>() / pairs.len() as f64;
        let n = ledger.times.len();
        let secant = (ledger.auxiliary[n - 2] - ledger.auxiliary[1])
            / (ledger.times[n - 2] - ledger.times[1]);
        let scale = ledger.e0.max(1e-30);
        assert!(
            (mean_formula - secant).abs() <= 2e-2 * scale,
            "mean dJ/dt {mean_formula} vs secant {secant}"
        );
    }

    #[test]
    fn certificate_check_fails_on_conservative_run() {
        let bc = BoundaryControls {
            kr_left: 1.0,
            ..BoundaryControls::free()
        };
        let (beam, traj) = demo_run(0.0, bc, 6, 1e-3, 10.0, 100);
        let ledger = build_ledger(&beam, &traj, None);
        let cert = DecayCertificate {
            lambda: 0.1,
            overshoot: 1.5,
            rate: 0.5,
            lambda_max: 1.0,
            bounds: LyapunovBounds {
                beta0: 0.3,
                beta1: 0.4,
                variant: FormulaVariant::ConstantCoefficient,
            },
        };
        let check = certificate_check(&ledger, &cert);
        assert!(!check.holds, "constant energy must escape a decaying envelope");
        assert!(check.margin < 0.0);
    }

    #[test]
    fn certificate_check_holds_at_t0_alone() {
        let bc = BoundaryControls::free();
        let (beam, traj) = demo_run(1.0, bc, 4, 1e-3, 1e-3, 10);
        let ledger = build_ledger(&beam, &traj, None);
        let cert = DecayCertificate {
            lambda: 0.1,
            overshoot: 1.03,
            rate: 5.0,
            lambda_max: 1.0,
            bounds: LyapunovBounds {
                beta0: 0.3,
                beta1: 0.4,
                variant: FormulaVariant::ConstantCoefficient,
            },
        };
        assert!(certificate_check(&ledger, &cert).holds);
    }

    #[test]
    fn measured_rate_on_synthetic_ledgers() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let decaying: Vec<f64> = times.iter().map(|t| (-2.0 * t).exp()).collect();
        let rate = measured_decay_rate(&times, &decaying, (0.5, 9.0)).unwrap();
        assert_relative_eq!(rate, 2.0, max_relative = 1e-8);

        let constant = vec![3.7; times.len()];
        let rate = measured_decay_rate(&times, &constant, (0.5, 9.0)).unwrap();
        assert_relative_eq!(rate, 0.0, epsilon = 1e-12);

        let with_zero: Vec<f64> = times.iter().map(|&t| if t > 5.0 { 0.0 } else { 1.0 }).collect();
        assert!(matches!(
            measured_decay_rate(&times, &with_zero, (0.5, 9.0)),
            Err(Error::RateUndefined)
        ));
    }

    #[test]
    fn sandwich_holds_along_damped_trajectory() {
        let spec = bench::beam(1.0);
        let bc = BoundaryControls {
            ka_left: 0.01,
            ka_right: 0.01,
            ..BoundaryControls::free()
        };
        let m = spec.mass_density.as_constant().unwrap();
        let r = spec.rigidity.as_constant().unwrap();
        let bounds = beta_bounds_constant(m, spec.gamma, r, spec.length, bc.ka_left, bc.ka_right).unwrap();
        let cert = certificate(&bounds, 0.4, spec.gamma, m, m).unwrap();
        let mesh = Mesh::uniform(spec.length, 16).unwrap();
        let beam = assemble(&spec, &bc, &mesh).unwrap();
        let (q0, v0) = interpolate_initial(&InitialConditions::demo(), &mesh).unwrap();
        let cfg = IntegratorConfig {
            snapshot_stride: Some(10),
            ..IntegratorConfig::new(2.0).with_dt(1e-4)
        };
        let traj = integrate(&beam, &q0, &v0, &cfg).unwrap();
        let ledger = build_ledger(&beam, &traj, Some(cert.lambda));
        let lvals = ledger.lyapunov.as_ref().unwrap();
        let slack = 1e-9 * ledger.e0;
        for i in 0..ledger.times.len() {
            let e = ledger.energy[i];
            let l = lvals[i];
            assert!(
                (1.0 - bounds.beta0 * cert.lambda) * e <= l + slack,
                "lower sandwich violated at t = {}",
                ledger.times[i]
            );
            assert!(
                l <= (1.0 + bounds.beta1 * cert.lambda) * e + slack,
                "upper sandwich violated at t = {}",
                ledger.times[i]
            );
        }
    }

    #[test]
    fn residual_and_rate_formula_are_consistent() {
        // with per-step snapshots the trapezoidal time integral of the
        // dE/dt formula RHS is, sample for sample, the same sum the
        // dissipation accumulators build, so residual and rate agree to
        // roundoff
        let bc = BoundaryControls {
            ka_left: 1e-4,
            ka_right: 1e-4,
            ..BoundaryControls::free()
        };
        let (beam, traj) = demo_run(1.0, bc, 8, 5e-4, 1.0, 1);
        let ledger = build_ledger(&beam, &traj, None);
        let rhs: Vec<f64> = traj
            .velocities
            .iter()
            .map(|v| v.dot(&(&beam.damping * v)))
            .collect();
        let dt = traj.dt;
        let mut trap = 0.0;
        for i in 1..rhs.len() {
            trap += 0.5 * dt * (rhs[i - 1] + rhs[i]);
        }
        let accumulated = traj.diss_viscous.last().unwrap()
            + traj.diss_left.last().unwrap()
            + traj.diss_right.last().unwrap();
        assert_relative_eq!(trap, accumulated, max_relative = 1e-12);
        // and the residual is exactly E(T) + accumulated - E(0)
        let expected = ledger.energy.last().unwrap() + accumulated - ledger.e0;
        assert_relative_eq!(
            *ledger.residual.last().unwrap(),
            expected,
            epsilon = 1e-14 * ledger.e0
        );
    }

    #[test]
    fn dissipation_monotone_in_damper_strength() {
        // underdamped pair plus the zero-vs-positive pair: cumulative
        // boundary dissipation ordered, final energy ordered the same way
        let run = |ka: f64| -> (f64, f64) {
            let bc = BoundaryControls {
                ka_left: ka,
                ka_right: ka,
                ..BoundaryControls::free()
            };
            let (beam, traj) = demo_run(1.0, bc, 8, 2e-4, 2.0, 10);
            let ledger = build_ledger(&beam, &traj, None);
            let boundary = traj.diss_left.last().unwrap() + traj.diss_right.last().unwrap();
            (boundary, *ledger.energy.last().unwrap() / ledger.e0)
        };
        let (d0, e0) = run(0.0);
        let (d1, e1) = run(1e-5);
        let (d2, e2) = run(3e-5);
        assert_eq!(d0, 0.0);
        assert!(d1 > 0.0 && d2 > d1, "boundary dissipation not ordered: {d1} vs {d2}");
        assert!(e1 <= e0 + 1e-9 && e2 <= e1 + 1e-9, "final energies not ordered: {e0}, {e1}, {e2}");
    }
}
