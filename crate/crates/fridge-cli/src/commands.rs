//! The four workflows behind the subcommands.

use std::io::Write as _;
use std::path::Path;

use fridge_core::dynamics::{evolve as integrate, master_rhs, sig12};
use fridge_core::model::thermal_product;
use fridge_core::qops::trace_distance;
use fridge_core::steady::{coefficients, effective_temperature, reduced_steady_state, steady_state};
use fridge_core::thermo::{carnot_efficiency, cooling_condition, heat_currents};
use fridge_core::verify::{check_sample, sample_batch, SampleCheck, VerifyOptions};
use fridge_core::{FridgeError, FridgeParams};

use crate::config::load_params;
use crate::report::{Coefficients, Currents, MatrixParts, ReducedQubit, SteadyReport};
use crate::Failure;

fn core_error(err: FridgeError) -> Failure {
    match err {
        FridgeError::IntegrationDiverged { .. } => Failure::divergence(err.to_string()),
        other => Failure::config(other.to_string()),
    }
}

pub fn steady(config: &Path, json_out: Option<&Path>) -> Result<(), Failure> {
    let params = load_params(config)?;
    let rho = steady_state(&params).map_err(core_error)?;
    let co = coefficients(&params);
    let condition = cooling_condition(&params).ok();
    let currents = heat_currents(&params);
    let residual_max = master_rhs(&rho, &params).max_abs();

    let mut reduced = Vec::with_capacity(3);
    for qubit in 1..=3u8 {
        let state = reduced_steady_state(&params, qubit).map_err(core_error)?;
        let t = effective_temperature(&state, params.energy(qubit).map_err(core_error)?)
            .map_err(core_error)?;
        reduced.push(ReducedQubit {
            qubit,
            ground: state.entry(0, 0).re,
            excited: state.entry(1, 1).re,
            effective_temperature: t.is_finite().then_some(t),
        });
    }

    let dim = rho.dim();
    let re = (0..dim)
        .map(|r| (0..dim).map(|c| rho.entry(r, c).re).collect())
        .collect();
    let im = (0..dim)
        .map(|r| (0..dim).map(|c| rho.entry(r, c).im).collect())
        .collect();

    let report = SteadyReport {
        params,
        weak_coupling_ok: params.weak_coupling_ok(),
        coefficients: Coefficients {
            q: co.q,
            q1: co.q_single[0],
            q2: co.q_single[1],
            q3: co.q_single[2],
            q23: co.q23(),
            q13: co.q13(),
            q12: co.q12(),
            delta: co.delta,
            omega23: co.omega23(),
            omega13: co.omega13(),
            omega12: co.omega12(),
            gamma: co.gamma,
        },
        cooling: co.gamma > 0.0,
        margin: condition.map(|c| c.margin),
        bound: condition.map(|c| c.bound),
        heat_currents: Currents {
            qc: currents.qc,
            qr: currents.qr,
            qh: currents.qh,
        },
        efficiency: fridge_core::thermo::efficiency(&params).ok(),
        eta_carnot: carnot_efficiency(params.tc(), params.tr(), params.th()).ok(),
        steady_state: MatrixParts { re, im },
        reduced,
        residual_max,
        residual_bound: 1e-10 * params.total_rate(),
    };

    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::config(format!("cannot serialize report: {e}")))?;
    println!("{text}");
    if let Some(path) = json_out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn evolve(
    config: &Path,
    t_end: f64,
    sample_every: Option<f64>,
    out: &Path,
) -> Result<(), Failure> {
    let params = load_params(config)?;
    let rho0 = thermal_product(&params).map_err(core_error)?;
    let sample_every = sample_every.unwrap_or(t_end / 1000.0);
    let traj = integrate(&rho0, &params, t_end, sample_every).map_err(core_error)?;

    let file = std::fs::File::create(out)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
    let mut writer = std::io::BufWriter::new(file);
    traj.write_csv(&mut writer)
        .and_then(|()| writer.flush())
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;

    let target = steady_state(&params).map_err(core_error)?;
    let distance = trace_distance(traj.final_state(), &target).map_err(core_error)?;
    println!(
        "final trace distance to analytic steady state: {}",
        sig12(distance)
    );
    Ok(())
}

const SWEEP_VARIABLES: [&str; 9] = ["E1", "E3", "g", "p1", "p2", "p3", "Tc", "Tr", "Th"];

fn with_variable(base: &FridgeParams, name: &str, x: f64) -> FridgeParams {
    let mut e1 = base.e1();
    let mut e3 = base.e3();
    let mut g = base.g();
    let mut p = base.rates();
    let mut tc = base.tc();
    let mut tr = base.tr();
    let mut th = base.th();
    match name {
        "E1" => e1 = x,
        "E3" => e3 = x,
        "g" => g = x,
        "p1" => p[0] = x,
        "p2" => p[1] = x,
        "p3" => p[2] = x,
        "Tc" => tc = x,
        "Tr" => tr = x,
        "Th" => th = x,
        _ => unreachable!("variable name validated"),
    }
    // Unchecked on purpose: sweeps may cross the temperature ordering; the
    // positivity constraints that the formulas genuinely need are re-checked
    // per row below.
    FridgeParams::new_unchecked(e1, e3, g, p, tc, tr, th)
}

fn check_row_domain(params: &FridgeParams, x: f64) -> Result<(), Failure> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    let mut problems = Vec::new();
    if !positive(params.e1()) {
        problems.push("E1 <= 0");
    }
    if !positive(params.e3()) {
        problems.push("E3 <= 0");
    }
    if !(params.g().is_finite() && params.g() >= 0.0) {
        problems.push("g < 0");
    }
    if !params.rates().iter().all(|&p| positive(p)) {
        problems.push("reset rate <= 0");
    }
    if !positive(params.tc()) || !positive(params.tr()) || !positive(params.th()) {
        problems.push("temperature <= 0");
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::config(format!(
            "sweep row at x = {x} leaves the domain: {}",
            problems.join(", ")
        )))
    }
}

pub fn sweep(
    config: &Path,
    vary: &str,
    from: f64,
    to: f64,
    steps: usize,
    out: &Path,
) -> Result<(), Failure> {
    let base = load_params(config)?;
    if !SWEEP_VARIABLES.contains(&vary) {
        return Err(Failure::config(format!(
            "unknown sweep variable {vary:?}; expected one of {}",
            SWEEP_VARIABLES.join(", ")
        )));
    }
    if steps < 2 {
        return Err(Failure::config(format!("steps must be >= 2, got {steps}")));
    }
    if !from.is_finite() || !to.is_finite() || from >= to {
        return Err(Failure::config(format!(
            "range must satisfy from < to with finite bounds, got [{from}, {to}]"
        )));
    }

    let file = std::fs::File::create(out)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
    let mut w = std::io::BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(w, "x,gamma,Qc,Qr,Qh,eta,eta_carnot,T1S,cooling,margin")?;
        Ok(())
    })()
    .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;

    for k in 0..steps {
        let x = from + (to - from) * k as f64 / (steps - 1) as f64;
        let params = with_variable(&base, vary, x);
        check_row_domain(&params, x)?;

        let gamma = coefficients(&params).gamma;
        let currents = heat_currents(&params);
        let cooling = gamma > 0.0;
        let eta = cooling.then(|| params.e1() / params.e3());
        let eta_carnot = carnot_efficiency(params.tc(), params.tr(), params.th()).ok();
        let reduced = reduced_steady_state(&params, 1).map_err(core_error)?;
        let t1s = effective_temperature(&reduced, params.e1()).map_err(core_error)?;
        let margin = cooling_condition(&params).ok().map(|c| c.margin);

        let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
        let row = format!(
            "{},{},{},{},{},{},{},{},{},{}",
            sig12(x),
            sig12(gamma),
            sig12(currents.qc),
            sig12(currents.qr),
            sig12(currents.qh),
            opt(eta),
            opt(eta_carnot),
            sig12(t1s),
            cooling,
            opt(margin),
        );
        writeln!(w, "{row}")
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;
    }
    w.flush()
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}

fn describe(check: &SampleCheck) -> String {
    format!(
        "analytic-vs-numeric {} | residual {} (budget {}) | first-law {} | sigma {} | kernel-sep {}",
        sig12(check.analytic_vs_numeric),
        sig12(check.rhs_residual),
        sig12(check.rhs_residual_bound),
        sig12(check.first_law_relative),
        sig12(check.entropy_rate),
        sig12(check.kernel_separation),
    )
}

pub fn verify(config: &Path, samples: usize, seed: u64) -> Result<(), Failure> {
    let params = load_params(config)?;
    if samples < 1 {
        return Err(Failure::config(format!(
            "samples must be >= 1, got {samples}"
        )));
    }
    let options = VerifyOptions { samples, seed };

    // The configured point is checked first, then the seeded random draws.
    let mut batch: Vec<(String, FridgeParams)> = vec![("config".into(), params)];
    for (k, point) in sample_batch(options.samples, options.seed).into_iter().enumerate() {
        batch.push((format!("sample {k}"), point));
    }

    let mut failed: Option<(String, FridgeParams, String)> = None;
    for (label, point) in &batch {
        match check_sample(point) {
            Ok(check) if check.pass() => {
                println!("{label}: PASS — {}", describe(&check));
            }
            Ok(check) => {
                println!("{label}: FAIL — {}", check.failures.join("; "));
                if failed.is_none() {
                    failed = Some((label.clone(), *point, check.failures.join("; ")));
                }
            }
            Err(err) => {
                println!("{label}: FAIL — {err}");
                if failed.is_none() {
                    failed = Some((label.clone(), *point, err.to_string()));
                }
            }
        }
    }

    match failed {
        None => {
            println!(
                "verify: all {} checks passed (seed {})",
                batch.len(),
                options.seed
            );
            Ok(())
        }
        Some((label, point, reason)) => {
            let rendered = serde_json::to_string(&point)
                .unwrap_or_else(|_| "<unserializable>".to_string());
            Err(Failure::verification(format!(
                "{label} failed: {reason}\nparameters: {rendered}"
            )))
        }
    }
}
