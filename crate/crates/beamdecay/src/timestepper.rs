//! Implicit time integration of `M qdd + C qd + K q = 0` with the
//! average-acceleration one-step family, plus the trajectory record the
//! energy bookkeeping consumes.
//!
//! At the default parameters `(beta, gamma) = (1/4, 1/2)` the scheme is
//! second order, unconditionally stable, and free of algorithmic damping,
//! so measured decay rates reflect the physics rather than the integrator.

use nalgebra::DVector;

use crate::discretization::DiscreteBeam;
use crate::error::{Error, Result};
use crate::linalg::{BandedCholesky, SymBanded};

/// Integration settings.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    /// Step size; `None` selects the default policy
    /// `min(2 pi / (20 omega_max), t_final / 2000)`.
    pub dt: Option<f64>,
    pub t_final: f64,
    /// Newmark displacement parameter, default 1/4.
    pub newmark_beta: f64,
    /// Newmark velocity parameter, default 1/2.
    pub newmark_gamma: f64,
    /// Snapshots are kept every `snapshot_stride` steps; `None` targets
    /// roughly two thousand snapshots.
    pub snapshot_stride: Option<usize>,
}

impl IntegratorConfig {
    pub fn new(t_final: f64) -> Self {
        IntegratorConfig {
            dt: None,
            t_final,
            newmark_beta: 0.25,
            newmark_gamma: 0.5,
            snapshot_stride: None,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) {
            return Err(Error::Domain("t_final must be positive".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::Domain("dt must be positive".into()));
            }
        }
        // unconditional stability region of the implicit family
        if !(self.newmark_gamma >= 0.5 && self.newmark_beta >= 0.5 * self.newmark_gamma) {
            return Err(Error::Domain(format!(
                "scheme parameters (beta = {}, gamma = {}) leave the unconditionally stable region",
                self.newmark_beta, self.newmark_gamma
            )));
        }
        Ok(())
    }
}

/// Default step policy: resolve the fastest retained mode with twenty steps
/// per period, but never take fewer than two thousand steps.
pub fn default_dt(beam: &DiscreteBeam, t_final: f64) -> Result<f64> {
    let omega_max = crate::discretization::estimate_max_frequency(beam)?.max(1e-12);
    Ok((2.0 * std::f64::consts::PI / (20.0 * omega_max)).min(t_final / 2000.0))
}

/// Time-sampled solution record.
///
/// Snapshots (states, energies' inputs, dissipation accumulators) are kept
/// every `snapshot_stride` steps; the boundary traces are kept at every
/// step so they can be resampled at arbitrary times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Snapshot times, ascending, first 0 and last `t_final`.
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    pub velocities: Vec<DVector<f64>>,
    pub accelerations: Vec<DVector<f64>>,
    /// Viscous dissipation accumulator at snapshots (trapezoidal in time).
    pub diss_viscous: Vec<f64>,
    /// Left and right boundary-damper dissipation accumulators at snapshots.
    pub diss_left: Vec<f64>,
    pub diss_right: Vec<f64>,
    /// Per-step times and boundary traces `u_x(0)`, `u_x(l)`, `u_xt(0)`,
    /// `u_xt(l)`.
    pub step_times: Vec<f64>,
    pub trace_ux0: Vec<f64>,
    pub trace_uxl: Vec<f64>,
    pub trace_uxt0: Vec<f64>,
    pub trace_uxtl: Vec<f64>,
    pub dt: f64,
}

impl Trajectory {
    pub fn n_snapshots(&self) -> usize {
        self.times.len()
    }
}

/// One-step operator of the implicit average-acceleration family for a
/// fixed step size. The effective matrix is factored once.
pub struct Newmark {
    mass: SymBanded,
    damping: SymBanded,
    stiffness: SymBanded,
    effective: BandedCholesky,
    beta: f64,
    gamma: f64,
    dt: f64,
}

impl Newmark {
    /// Builds the operator; `dt` may be negative (used by reversibility
    /// checks), but must be nonzero.
    pub fn new(beam: &DiscreteBeam, dt: f64, beta: f64, gamma: f64) -> Result<Newmark> {
        if dt == 0.0 || !dt.is_finite() {
            return Err(Error::Domain("dt must be nonzero".into()));
        }
        let hb = DiscreteBeam::HALF_BANDWIDTH;
        let mass = SymBanded::from_dense(&beam.mass, hb);
        let damping = SymBanded::from_dense(&beam.damping, hb);
        let stiffness = SymBanded::from_dense(&beam.stiffness, hb);
        let effective = SymBanded::combine(
            1.0,
            &mass,
            gamma * dt,
            &damping,
            beta * dt * dt,
            &stiffness,
        )
        .cholesky()?;
        Ok(Newmark {
            mass,
            damping,
            stiffness,
            effective,
            beta,
            gamma,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `(q, v, a)` by one step.
    pub fn step(
        &self,
        q: &DVector<f64>,
        v: &DVector<f64>,
        a: &DVector<f64>,
    ) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let dt = self.dt;
        let q_pred = q + dt * v + (0.5 - self.beta) * dt * dt * a;
        let v_pred = v + (1.0 - self.gamma) * dt * a;
        let rhs = -(self.damping.mul_vec(&v_pred)) - self.stiffness.mul_vec(&q_pred);
        let a_next = self.effective.solve(&rhs);
        let q_next = q_pred + self.beta * dt * dt * &a_next;
        let v_next = v_pred + self.gamma * dt * &a_next;
        (q_next, v_next, a_next)
    }

    /// Consistent initial acceleration from `M a = -C v - K q`.
    pub fn initial_acceleration(&self, q: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        let rhs = -(self.damping.mul_vec(v)) - self.stiffness.mul_vec(q);
        Ok(self.mass.cholesky()?.solve(&rhs))
    }
}

/// Integrates the semi-discrete system from `(q0, v0)`.
///
/// Dissipation accumulators integrate the sampled rates `qd' C_int qd`,
/// `ka qd_L^2`, `ka qd_R^2` with the trapezoid rule, matching the scheme's
/// second-order accuracy.
pub fn integrate(
    beam: &DiscreteBeam,
    q0: &DVector<f64>,
    v0: &DVector<f64>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let n = beam.n_unknowns();
    if q0.len() != n || v0.len() != n {
        return Err(Error::Domain(format!(
            "state dimension {} does not match the {} unknowns",
            q0.len(),
            n
        )));
    }
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => default_dt(beam, cfg.t_final)?,
    };
    let steps = (cfg.t_final / dt).round().max(1.0) as usize;
    if ((steps as f64) * dt - cfg.t_final).abs() > dt {
        return Err(Error::Domain(format!(
            "dt = {dt} does not divide t_final = {} within one step",
            cfg.t_final
        )));
    }
    let stride = cfg
        .snapshot_stride
        .unwrap_or_else(|| (steps / 2000).max(1))
        .max(1);

    let op = Newmark::new(beam, dt, cfg.newmark_beta, cfg.newmark_gamma)?;
    let mut q = q0.clone();
    let mut v = v0.clone();
    let mut a = op.initial_acceleration(&q, &v)?;

    let il = beam.left_rotation_index;
    let ir = beam.right_rotation_index;
    let ka_l = beam.controls.ka_left;
    let ka_r = beam.controls.ka_right;
    // interior viscous rate: full damping form minus the boundary dampers
    let viscous_rate = |v: &DVector<f64>| -> f64 {
        let full = v.dot(&(&beam.damping * v));
        (full - ka_l * v[il] * v[il] - ka_r * v[ir] * v[ir]).max(0.0)
    };

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        velocities: Vec::new(),
        accelerations: Vec::new(),
        diss_viscous: Vec::new(),
        diss_left: Vec::new(),
        diss_right: Vec::new(),
        step_times: Vec::with_capacity(steps + 1),
        trace_ux0: Vec::with_capacity(steps + 1),
        trace_uxl: Vec::with_capacity(steps + 1),
        trace_uxt0: Vec::with_capacity(steps + 1),
        trace_uxtl: Vec::with_capacity(steps + 1),
        dt,
    };

    let mut acc_viscous = 0.0;
    let mut acc_left = 0.0;
    let mut acc_right = 0.0;
    let mut rate_viscous = viscous_rate(&v);
    let mut rate_left = ka_l * v[il] * v[il];
    let mut rate_right = ka_r * v[ir] * v[ir];

    let record_step = |traj: &mut Trajectory, t: f64, q: &DVector<f64>, v: &DVector<f64>| {
        traj.step_times.push(t);
        traj.trace_ux0.push(q[il]);
        traj.trace_uxl.push(q[ir]);
        traj.trace_uxt0.push(v[il]);
        traj.trace_uxtl.push(v[ir]);
    };
    let record_snapshot = |traj: &mut Trajectory,
                           t: f64,
                           q: &DVector<f64>,
                           v: &DVector<f64>,
                           a: &DVector<f64>,
                           dv: f64,
                           dl: f64,
                           dr: f64| {
        traj.times.push(t);
        traj.states.push(q.clone());
        traj.velocities.push(v.clone());
        traj.accelerations.push(a.clone());
        traj.diss_viscous.push(dv);
        traj.diss_left.push(dl);
        traj.diss_right.push(dr);
    };

    record_step(&mut traj, 0.0, &q, &v);
    record_snapshot(&mut traj, 0.0, &q, &v, &a, 0.0, 0.0, 0.0);

    for step in 1..=steps {
        let (q_next, v_next, a_next) = op.step(&q, &v, &a);
        let t = step as f64 * dt;

        let next_viscous = viscous_rate(&v_next);
        let next_left = ka_l * v_next[il] * v_next[il];
        let next_right = ka_r * v_next[ir] * v_next[ir];
        acc_viscous += 0.5 * dt * (rate_viscous + next_viscous);
        acc_left += 0.5 * dt * (rate_left + next_left);
        acc_right += 0.5 * dt * (rate_right + next_right);
        rate_viscous = next_viscous;
        rate_left = next_left;
        rate_right = next_right;

        q = q_next;
        v = v_next;
        a = a_next;
        record_step(&mut traj, t, &q, &v);
        if step % stride == 0 || step == steps {
            record_snapshot(&mut traj, t, &q, &v, &a, acc_viscous, acc_left, acc_right);
        }
    }
    Ok(traj)
}

/// Boundary traces resampled at arbitrary times by linear interpolation
/// between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSamples {
    pub ux0: Vec<f64>,
    pub uxl: Vec<f64>,
    pub uxt0: Vec<f64>,
    pub uxtl: Vec<f64>,
}

pub fn resample_traces(traj: &Trajectory, times: &[f64]) -> Result<TraceSamples> {
    let t_first = *traj.step_times.first().unwrap();
    let t_last = *traj.step_times.last().unwrap();
    let mut out = TraceSamples {
        ux0: Vec::with_capacity(times.len()),
        uxl: Vec::with_capacity(times.len()),
        uxt0: Vec::with_capacity(times.len()),
        uxtl: Vec::with_capacity(times.len()),
    };
    for &t in times {
        if t < t_first - 1e-12 || t > t_last + 1e-12 {
            return Err(Error::Domain(format!(
                "requested time {t} is outside [{t_first}, {t_last}]"
            )));
        }
        let pos = (t - t_first) / traj.dt;
        let i = (pos.floor() as usize).min(traj.step_times.len() - 2);
        let w = (pos - i as f64).clamp(0.0, 1.0);
        let lerp = |series: &[f64]| series[i] * (1.0 - w) + series[i + 1] * w;
        out.ux0.push(lerp(&traj.trace_ux0));
        out.uxl.push(lerp(&traj.trace_uxl));
        out.uxt0.push(lerp(&traj.trace_uxt0));
        out.uxtl.push(lerp(&traj.trace_uxtl));
    }
    Ok(out)
}
