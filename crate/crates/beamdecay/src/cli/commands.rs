//! Implementations of the five subcommands. Each returns a process exit
//! code from the stable contract: 0 success, 2 config, 3 ineligible,
//! 4 golden mismatch, 5 resource cap, 6 property failure, 1 other runtime
//! failure.

use std::path::Path;

use super::config::{build_model, FileConfig, ModelInputs};
use super::csvout::{write_text, Cell, CsvTable};
use crate::checks;
use crate::discretization::{assemble, interpolate_initial, DiscreteBeam, Mesh};
use crate::energy::{
    build_ledger, certificate_check, default_rate_window, measured_decay_rate, EnergyLedger,
};
use crate::error::{Error, Result};
use crate::model::{validate, BoundaryControls};
use crate::numeric::{linspace, round_dp};
use crate::stability::{
    beta_bounds_constant, beta_bounds_general, certificate, decay_envelope, lambda_range, table1,
    DecayCertificate, LyapunovBounds, LAMBDA_POLICY_FRACTION,
};
use crate::timestepper::{integrate, IntegratorConfig, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INELIGIBLE: i32 = 3;
pub const EXIT_GOLDEN: i32 = 4;
pub const EXIT_CAP: i32 = 5;
pub const EXIT_PROPERTY: i32 = 6;

const CERT_CSV_HEADER: [&str; 8] = [
    "gamma", "ka_minus", "ka_plus", "beta0", "beta1", "lambda", "M", "sigma",
];

fn print_validation_failure(violations: &[crate::model::Condition]) {
    eprintln!("configuration rejected by validation:");
    for v in violations {
        eprintln!("  {}", v.as_str());
    }
}

/// Bounds for a validated model: the uniform variant when all coefficients
/// are constant (the authoritative one there), the general envelope variant
/// otherwise. Returns `(authoritative, general)`.
fn bounds_for(model: &ModelInputs) -> Result<(LyapunovBounds, LyapunovBounds)> {
    let spec = &model.spec;
    let bc = &model.controls;
    let (_, m_sup) = spec.mass_bounds()?;
    let (_, mu_sup) = spec.damping_bounds()?;
    let (r_inf, _) = spec.rigidity_bounds()?;
    let general = beta_bounds_general(m_sup, mu_sup, r_inf, spec.length, bc.ka_left, bc.ka_right)?;
    let authoritative = if spec.is_uniform() {
        beta_bounds_constant(
            spec.mass_density.as_constant().unwrap(),
            spec.gamma,
            spec.rigidity.as_constant().unwrap(),
            spec.length,
            bc.ka_left,
            bc.ka_right,
        )?
    } else {
        general
    };
    Ok((authoritative, general))
}

fn certificate_for(model: &ModelInputs, bounds: &LyapunovBounds, lambda: Option<f64>) -> Result<DecayCertificate> {
    let (m_inf, m_sup) = model.spec.mass_bounds()?;
    let (_, upper) = lambda_range(bounds.beta0, model.spec.gamma, m_inf, m_sup)?;
    let lambda = lambda.unwrap_or(LAMBDA_POLICY_FRACTION * upper);
    certificate(bounds, lambda, model.spec.gamma, m_inf, m_sup)
}

pub fn cmd_certify(cfg: &FileConfig, out_dir: &Path) -> i32 {
    match certify_inner(cfg, out_dir) {
        Ok(code) => code,
        Err(Error::CertificateIneligible) => {
            eprintln!("{}", Error::CertificateIneligible);
            EXIT_INELIGIBLE
        }
        Err(e @ (Error::Config(_) | Error::Domain(_) | Error::LambdaInadmissible { .. })) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_RUNTIME
        }
    }
}

fn certify_inner(cfg: &FileConfig, out_dir: &Path) -> Result<i32> {
    let model = build_model(cfg)?;
    let report = validate(&model.spec, &model.controls, &model.ic);
    if !report.is_valid() {
        print_validation_failure(&report.violations);
        return Ok(EXIT_CONFIG);
    }
    if !report.certificate_eligible {
        eprintln!("{}", Error::CertificateIneligible);
        return Ok(EXIT_INELIGIBLE);
    }
    let (authoritative, general) = bounds_for(&model)?;
    let cert = certificate_for(&model, &authoritative, cfg.lambda)?;

    let mut csv = CsvTable::new(&CERT_CSV_HEADER);
    csv.push(vec![
        Cell::F(model.spec.gamma),
        Cell::F(model.controls.ka_left),
        Cell::F(model.controls.ka_right),
        Cell::F(authoritative.beta0),
        Cell::F(authoritative.beta1),
        Cell::F(cert.lambda),
        Cell::F(cert.overshoot),
        Cell::F(cert.rate),
    ]);
    let cert_path = csv.write(out_dir, "certificate.csv")?;

    let horizon = cfg.horizon.unwrap_or(100.0);
    let times = linspace(horizon, 501);
    let envelope = decay_envelope(&cert, 1.0, &times);
    let mut env_csv = CsvTable::new(&["t", "envelope"]);
    for (t, e) in times.iter().zip(envelope.iter()) {
        env_csv.push(vec![Cell::F(*t), Cell::F(*e)]);
    }
    let env_path = env_csv.write(out_dir, "envelope.csv")?;

    // both damper-term variants and their gap, for audit
    let gap = general.beta1 - authoritative.beta1;
    let summary = format!(
        "decay certificate\n\
         variant = {:?}\n\
         beta0 = {} ({:e})\n\
         beta1 = {} ({:e})\n\
         beta1_general = {} ({:e})\n\
         beta1_damper_gap = {:e}\n\
         lambda_max = {:e}\n\
         lambda = {:e}\n\
         M = {} ({:e})\n\
         sigma = {} ({:e})\n\
         envelope horizon = {} s\n",
        authoritative.variant,
        round_dp(authoritative.beta0, 2),
        authoritative.beta0,
        round_dp(authoritative.beta1, 2),
        authoritative.beta1,
        round_dp(general.beta1, 2),
        general.beta1,
        gap,
        cert.lambda_max,
        cert.lambda,
        round_dp(cert.overshoot, 2),
        cert.overshoot,
        round_dp(cert.rate, 2),
        cert.rate,
        horizon,
    );
    print!("{summary}");
    let summary_path = write_text(out_dir, "summary.txt", &summary)?;
    eprintln!(
        "wrote {}, {}, {}",
        cert_path.display(),
        env_path.display(),
        summary_path.display()
    );
    Ok(EXIT_OK)
}

pub fn cmd_table1(cfg: &FileConfig, out_dir: &Path) -> i32 {
    match table1_inner(cfg, out_dir) {
        Ok(code) => code,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_RUNTIME
        }
    }
}

fn table1_inner(cfg: &FileConfig, out_dir: &Path) -> Result<i32> {
    let policy = match &cfg.lambda_policy {
        None => "table".to_string(),
        Some(v) => v
            .as_str()
            .map(|s| s.to_string())
            .ok_or_else(|| Error::Config("lambda_policy must be \"table\" or \"auto\"".into()))?,
    };
    let params: Vec<table1::RowParams> = table1::reference_params()
        .into_iter()
        .filter(|p| match &cfg.gamma_list {
            Some(list) => list.iter().any(|g| (g - p.gamma).abs() < 1e-12),
            None => true,
        })
        .collect();
    let rows: Vec<table1::Row> = match policy.as_str() {
        "table" => params.iter().map(|&p| table1::compute_row(p)).collect(),
        "auto" => params
            .iter()
            .map(|p| table1::compute_row_auto_lambda(p.gamma, p.ka))
            .collect(),
        other => {
            return Err(Error::Config(format!(
                "lambda_policy {other:?} is not \"table\" or \"auto\""
            )))
        }
    };

    let mut csv = CsvTable::new(&CERT_CSV_HEADER);
    for row in &rows {
        csv.push(vec![
            Cell::F(row.gamma),
            Cell::F(row.ka_minus),
            Cell::F(row.ka_plus),
            Cell::F(row.beta0),
            Cell::F(row.beta1),
            Cell::F(row.lambda),
            Cell::F(row.overshoot),
            Cell::F(row.rate),
        ]);
    }
    let csv_path = csv.write(out_dir, "table1.csv")?;

    let mut text = String::from(
        "gamma    ka_minus  ka_plus   beta0   beta1    lambda   M         sigma\n",
    );
    for row in &rows {
        text.push_str(&format!(
            "{:<8} {:<9} {:<9} {:<7.2} {:<8.2} {:<8} {:<9.2} {:<6.2}\n",
            row.gamma, row.ka_minus, row.ka_plus,
            round_dp(row.beta0, 2),
            round_dp(row.beta1, 2),
            row.lambda,
            round_dp(row.overshoot, 2),
            round_dp(row.rate, 2),
        ));
    }
    print!("{text}");
    let txt_path = write_text(out_dir, "table1.txt", &text)?;
    eprintln!("wrote {}, {}", csv_path.display(), txt_path.display());

    if policy == "table" {
        let bad = table1::golden_deviations(&rows);
        if !bad.is_empty() {
            eprintln!("golden table mismatch:");
            for (row, col, got, want) in bad {
                eprintln!("  row {row} column {col}: computed {got}, reference {want}");
            }
            return Ok(EXIT_GOLDEN);
        }
        println!(
            "golden check: all {} cells within {}",
            rows.len() * 4,
            table1::GOLDEN_TOL
        );
    }
    Ok(EXIT_OK)
}

pub fn cmd_simulate(cfg: &FileConfig, out_dir: &Path) -> i32 {
    match simulate_inner(cfg, out_dir) {
        Ok(code) => code,
        Err(e @ (Error::Config(_) | Error::Domain(_) | Error::Resolution(_) | Error::MeshIncompatible(_))) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_RUNTIME
        }
    }
}

struct SimulationArtifacts {
    beam: DiscreteBeam,
    traj: Trajectory,
    ledger: EnergyLedger,
    cert: Option<DecayCertificate>,
}

fn run_simulation(cfg: &FileConfig, model: &ModelInputs) -> Result<SimulationArtifacts> {
    let n_elements = cfg.mesh.n_elements.unwrap_or(32);
    let mesh = Mesh::uniform(model.spec.length, n_elements)?;
    let beam = assemble(&model.spec, &model.controls, &mesh)?;
    let (q0, v0) = interpolate_initial(&model.ic, &mesh)?;
    let t_final = cfg.integrator.t_final.unwrap_or(20.0);
    let icfg = IntegratorConfig {
        dt: cfg.integrator.dt,
        t_final,
        newmark_beta: cfg.integrator.newmark_beta.unwrap_or(0.25),
        newmark_gamma: cfg.integrator.newmark_gamma.unwrap_or(0.5),
        snapshot_stride: cfg.integrator.snapshot_stride,
    };
    let traj = integrate(&beam, &q0, &v0, &icfg)?;

    let report = validate(&model.spec, &model.controls, &model.ic);
    let cert = if report.certificate_eligible {
        let (authoritative, _) = bounds_for(model)?;
        Some(certificate_for(model, &authoritative, cfg.lambda)?)
    } else {
        None
    };
    let ledger = build_ledger(&beam, &traj, cert.as_ref().map(|c| c.lambda));
    Ok(SimulationArtifacts {
        beam,
        traj,
        ledger,
        cert,
    })
}

fn simulate_inner(cfg: &FileConfig, out_dir: &Path) -> Result<i32> {
    let model = build_model(cfg)?;
    let report = validate(&model.spec, &model.controls, &model.ic);
    if !report.is_valid() {
        print_validation_failure(&report.violations);
        return Ok(EXIT_CONFIG);
    }
    let art = run_simulation(cfg, &model)?;
    let SimulationArtifacts {
        beam,
        traj,
        ledger,
        cert,
    } = &art;

    // trajectory CSV, one row per snapshot
    let mut tcsv = CsvTable::new(&[
        "t", "E", "J", "L", "diss_viscous", "diss_left", "diss_right", "ux0", "uxl", "uxt0",
        "uxtl",
    ]);
    let snap_traces = crate::timestepper::resample_traces(traj, &ledger.times)?;
    for i in 0..ledger.times.len() {
        tcsv.push(vec![
            Cell::F(ledger.times[i]),
            Cell::F(ledger.energy[i]),
            Cell::F(ledger.auxiliary[i]),
            match &ledger.lyapunov {
                Some(l) => Cell::F(l[i]),
                None => Cell::Empty,
            },
            Cell::F(traj.diss_viscous[i]),
            Cell::F(traj.diss_left[i]),
            Cell::F(traj.diss_right[i]),
            Cell::F(snap_traces.ux0[i]),
            Cell::F(snap_traces.uxl[i]),
            Cell::F(snap_traces.uxt0[i]),
            Cell::F(snap_traces.uxtl[i]),
        ]);
    }
    let traj_path = tcsv.write(out_dir, "trajectory.csv")?;

    // ledger CSV with envelope and running rate estimate
    let mut lcsv = CsvTable::new(&[
        "t",
        "E",
        "J",
        "L",
        "residual",
        "envelope",
        "sigma_measured_running",
    ]);
    for i in 0..ledger.times.len() {
        let t = ledger.times[i];
        let envelope = cert
            .as_ref()
            .map(|c| ledger.e0 * c.overshoot * (-c.rate * t).exp());
        let running = if i >= 3 && ledger.e0 > 0.0 {
            measured_decay_rate(
                &ledger.times[..=i],
                &ledger.energy[..=i],
                (0.1 * t, 0.9 * t),
            )
            .ok()
        } else {
            None
        };
        lcsv.push(vec![
            Cell::F(t),
            Cell::F(ledger.energy[i]),
            Cell::F(ledger.auxiliary[i]),
            match &ledger.lyapunov {
                Some(l) => Cell::F(l[i]),
                None => Cell::Empty,
            },
            Cell::F(ledger.residual[i]),
            envelope.map(Cell::F).unwrap_or(Cell::Empty),
            running.map(Cell::F).unwrap_or(Cell::Empty),
        ]);
    }
    let ledger_path = lcsv.write(out_dir, "ledger.csv")?;

    if cfg.dump_matrices {
        for (name, matrix) in [
            ("mass.coord.txt", &beam.mass),
            ("damping.coord.txt", &beam.damping),
            ("stiffness.coord.txt", &beam.stiffness),
        ] {
            let mut buf = Vec::new();
            beam.write_coordinate(matrix, &mut buf)?;
            write_text(out_dir, name, &String::from_utf8_lossy(&buf))?;
        }
    }

    // summary
    let mut summary = String::new();
    summary.push_str(&format!(
        "simulate: {} unknowns, dt = {:e}, t_final = {}\n",
        beam.n_unknowns(),
        traj.dt,
        ledger.times.last().unwrap()
    ));
    let conservative = model.spec.gamma == 0.0 && model.controls.damper_sum() == 0.0;
    if ledger.e0 == 0.0 {
        summary.push_str("warning: ZERO_ENERGY - initial energy is zero, no decay rate to measure\n");
    } else {
        let max_residual = ledger
            .residual
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        summary.push_str(&format!(
            "max identity residual = {:e} ({:e} relative to E0)\n",
            max_residual,
            max_residual / ledger.e0
        ));
        if conservative {
            let drift = ledger
                .energy
                .iter()
                .fold(0.0f64, |m, e| m.max((e - ledger.e0).abs()))
                / ledger.e0;
            summary.push_str(&format!(
                "dissipativity: constant energy, drift={:e} relative\n",
                drift
            ));
        } else {
            let mut max_rise = 0.0f64;
            for w in ledger.energy.windows(2) {
                max_rise = max_rise.max(w[1] - w[0]);
            }
            summary.push_str(&format!(
                "dissipativity: nonincreasing energy, max step rise = {:e} (tolerance {:e})\n",
                max_rise,
                1e-10 * ledger.e0
            ));
        }
        let t_final = *ledger.times.last().unwrap();
        match measured_decay_rate(&ledger.times, &ledger.energy, default_rate_window(t_final)) {
            Ok(rate) => summary.push_str(&format!("sigma_measured = {:e}\n", rate)),
            Err(e) => summary.push_str(&format!("sigma_measured unavailable: {e}\n")),
        }
        if let Some(c) = cert {
            let check = certificate_check(ledger, c);
            summary.push_str(&format!(
                "certificate: lambda = {:e}, M = {:e}, sigma = {:e}\n",
                c.lambda, c.overshoot, c.rate
            ));
            summary.push_str(&format!(
                "certificate_check: holds = {}, margin = {:e} at t = {}\n",
                check.holds, check.margin, check.worst_time
            ));
        } else {
            summary.push_str("certificate: not eligible (gamma = 0)\n");
        }
    }
    print!("{summary}");
    write_text(out_dir, "summary.txt", &summary)?;
    eprintln!("wrote {}, {}", traj_path.display(), ledger_path.display());
    Ok(EXIT_OK)
}

pub fn cmd_sweep(cfg: &FileConfig, out_dir: &Path, workers: Option<usize>) -> i32 {
    match sweep_inner(cfg, out_dir, workers) {
        Ok(code) => code,
        Err(e @ (Error::Config(_) | Error::Domain(_))) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_RUNTIME
        }
    }
}

/// beta0, beta1, lambda, M, sigma, and the optional measured rate.
type SweepCells = (f64, f64, f64, f64, f64, Option<f64>);

#[derive(Clone, Copy)]
struct SweepPoint {
    gamma: f64,
    ka_left: f64,
    ka_right: f64,
}

fn sweep_lambda(policy: &Option<serde_json::Value>, gamma: f64, beta0: f64, m_inf: f64, m_sup: f64) -> Result<f64> {
    let auto = || -> Result<f64> {
        let (_, upper) = lambda_range(beta0, gamma, m_inf, m_sup)?;
        Ok(LAMBDA_POLICY_FRACTION * upper)
    };
    match policy {
        None => auto(),
        Some(serde_json::Value::Number(n)) => Ok(n.as_f64().unwrap()),
        Some(serde_json::Value::String(s)) => match s.as_str() {
            "auto" => auto(),
            "table" => {
                // reference lambda column for the three tabulated damping
                // levels; anything else falls back to the automatic policy
                for (g, l) in [(0.1, 0.04), (1.0, 0.4), (5.0, 2.4)] {
                    if (gamma - g).abs() < 1e-12 {
                        return Ok(l);
                    }
                }
                auto()
            }
            other => Err(Error::Config(format!("unknown lambda_policy {other:?}"))),
        },
        Some(other) => Err(Error::Config(format!(
            "lambda_policy must be a string or number, got {other}"
        ))),
    }
}

fn sweep_inner(cfg: &FileConfig, out_dir: &Path, workers: Option<usize>) -> Result<i32> {
    let model = build_model(cfg)?;
    let report = validate(&model.spec, &model.controls, &model.ic);
    if !report.is_valid() {
        print_validation_failure(&report.violations);
        return Ok(EXIT_CONFIG);
    }
    let sweep = &cfg.sweep;
    let gamma_list = sweep
        .gamma_list
        .clone()
        .unwrap_or_else(|| vec![model.spec.gamma]);
    let (ka_left_list, ka_right_list) = match (&sweep.ka_list, &sweep.ka_left_list, &sweep.ka_right_list) {
        (Some(sym), None, None) => (sym.clone(), vec![]),
        (None, Some(l), Some(r)) => (l.clone(), r.clone()),
        (None, None, None) => (vec![model.controls.ka_left], vec![]),
        _ => {
            return Err(Error::Config(
                "give either sweep.ka_list or both sweep.ka_left_list and sweep.ka_right_list".into(),
            ))
        }
    };
    let symmetric = ka_right_list.is_empty();

    let mut points = Vec::new();
    for &gamma in &gamma_list {
        if symmetric {
            for &ka in &ka_left_list {
                points.push(SweepPoint {
                    gamma,
                    ka_left: ka,
                    ka_right: ka,
                });
            }
        } else {
            for &kl in &ka_left_list {
                for &kr in &ka_right_list {
                    points.push(SweepPoint {
                        gamma,
                        ka_left: kl,
                        ka_right: kr,
                    });
                }
            }
        }
    }

    let max_points = sweep.max_points.unwrap_or(10_000);
    let max_sim_points = sweep.max_sim_points.unwrap_or(100);
    if points.len() > max_points {
        eprintln!(
            "sweep grid has {} points, above the cap of {max_points}",
            points.len()
        );
        return Ok(EXIT_CAP);
    }
    if sweep.simulate && points.len() > max_sim_points {
        eprintln!(
            "sweep grid has {} points with simulation enabled, above the cap of {max_sim_points}",
            points.len()
        );
        return Ok(EXIT_CAP);
    }

    let rounding = sweep.rounding.as_deref().unwrap_or("exact");
    if !matches!(rounding, "exact" | "table") {
        return Err(Error::Config(format!(
            "sweep.rounding must be \"exact\" or \"table\", got {rounding:?}"
        )));
    }

    let eval_point = |p: &SweepPoint| -> Result<SweepCells> {
        let mut spec = model.spec.clone();
        spec.gamma = p.gamma;
        spec.damping = spec.mass_density.scaled(p.gamma);
        let (m_inf, m_sup) = spec.mass_bounds()?;
        if rounding == "table" {
            let lambda = sweep_lambda(&sweep.lambda_policy, p.gamma, 0.33, m_inf, m_sup)?;
            let row = table1::compute_row(table1::RowParams {
                gamma: p.gamma,
                ka: p.ka_left,
                lambda,
            });
            return Ok((row.beta0, row.beta1, row.lambda, row.overshoot, row.rate, None));
        }
        let (_, mu_sup) = spec.damping_bounds()?;
        let (r_inf, _) = spec.rigidity_bounds()?;
        let bounds = if spec.is_uniform() {
            beta_bounds_constant(
                spec.mass_density.as_constant().unwrap(),
                p.gamma,
                spec.rigidity.as_constant().unwrap(),
                spec.length,
                p.ka_left,
                p.ka_right,
            )?
        } else {
            beta_bounds_general(m_sup, mu_sup, r_inf, spec.length, p.ka_left, p.ka_right)?
        };
        let lambda = sweep_lambda(&sweep.lambda_policy, p.gamma, bounds.beta0, m_inf, m_sup)?;
        let cert = certificate(&bounds, lambda, p.gamma, m_inf, m_sup)?;
        let sigma_measured = if sweep.simulate {
            let bc = BoundaryControls {
                ka_left: p.ka_left,
                ka_right: p.ka_right,
                ..model.controls
            };
            let sub_model = ModelInputs {
                spec: spec.clone(),
                controls: bc,
                ic: model.ic.clone(),
            };
            let mut sub_cfg = cfg.clone();
            sub_cfg.mesh.n_elements = Some(cfg.mesh.n_elements.unwrap_or(16));
            sub_cfg.lambda = Some(lambda);
            let art = run_simulation(&sub_cfg, &sub_model)?;
            let t_final = *art.ledger.times.last().unwrap();
            measured_decay_rate(
                &art.ledger.times,
                &art.ledger.energy,
                default_rate_window(t_final),
            )
            .ok()
        } else {
            None
        };
        Ok((
            bounds.beta0,
            bounds.beta1,
            cert.lambda,
            cert.overshoot,
            cert.rate,
            sigma_measured,
        ))
    };

    let results: Vec<Result<SweepCells>> = {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.unwrap_or(0))
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
        pool.install(|| points.par_iter().map(eval_point).collect())
    };

    let mut header: Vec<&str> = CERT_CSV_HEADER.to_vec();
    if sweep.simulate {
        header.push("sigma_measured");
    }
    let mut csv = CsvTable::new(&header);
    for (p, res) in points.iter().zip(results) {
        let (beta0, beta1, lambda, overshoot, rate, measured) = res?;
        let mut row = vec![
            Cell::F(p.gamma),
            Cell::F(p.ka_left),
            Cell::F(p.ka_right),
            Cell::F(beta0),
            Cell::F(beta1),
            Cell::F(lambda),
            Cell::F(overshoot),
            Cell::F(rate),
        ];
        if sweep.simulate {
            row.push(measured.map(Cell::F).unwrap_or(Cell::Empty));
        }
        csv.push(row);
    }
    let path = csv.write(out_dir, "sweep.csv")?;
    println!("sweep: {} grid points", points.len());
    eprintln!("wrote {}", path.display());
    Ok(EXIT_OK)
}

pub fn cmd_check(cfg: &FileConfig, out_dir: &Path, seed_flag: Option<u64>) -> i32 {
    match check_inner(cfg, out_dir, seed_flag) {
        Ok(code) => code,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_RUNTIME
        }
    }
}

fn check_inner(cfg: &FileConfig, out_dir: &Path, seed_flag: Option<u64>) -> Result<i32> {
    let seed = seed_flag
        .or(cfg.check.seed)
        .or(cfg.seed)
        .unwrap_or(42);
    let profiles = cfg.check.profiles.or(cfg.profiles).unwrap_or(1000);
    let length = cfg.check.length.unwrap_or(1.0);
    let suite_filter = cfg.check.suite.clone().or_else(|| cfg.suite.clone());
    let beta0_scale = cfg.check.beta0_scale.or(cfg.beta0_scale).unwrap_or(1.0);

    let enabled = |name: &str| -> bool {
        match &suite_filter {
            None => true,
            Some(s) => s == name,
        }
    };

    let mut outcomes = Vec::new();
    if enabled("poincare") {
        outcomes.push(checks::run_poincare_suite(profiles, length, seed));
    }
    if enabled("trace") {
        outcomes.push(checks::run_trace_suite(profiles, length, seed));
    }
    if enabled("sandwich") {
        outcomes.push(checks::run_sandwich_state_suite(checks::SandwichConfig {
            states: profiles.min(400),
            seed,
            beta0_scale,
            beta1_scale: 1.0,
        })?);
        outcomes.push(checks::run_sandwich_trajectory_suite()?);
    }
    if enabled("dissipativity") {
        outcomes.push(checks::run_dissipativity_suite()?);
    }
    if outcomes.is_empty() {
        return Err(Error::Config(format!(
            "unknown suite {suite_filter:?}; expected poincare, trace, sandwich, or dissipativity"
        )));
    }

    let mut failed = false;
    for o in &outcomes {
        if o.passed() {
            println!("suite {}: pass ({} checks)", o.name, o.checks);
        } else {
            failed = true;
            println!(
                "suite {}: FAIL ({} of {} checks violated)",
                o.name, o.failures, o.checks
            );
            if let Some(profile) = &o.counterexample {
                let mut csv = CsvTable::new(&["x", "u"]);
                let h = length / (profile.len() - 1) as f64;
                for (i, &u) in profile.iter().enumerate() {
                    csv.push(vec![Cell::F(i as f64 * h), Cell::F(u)]);
                }
                let path = csv.write(out_dir, &format!("counterexample_{}.csv", o.name))?;
                eprintln!("counterexample written to {}", path.display());
            }
        }
    }
    Ok(if failed { EXIT_PROPERTY } else { EXIT_OK })
}
