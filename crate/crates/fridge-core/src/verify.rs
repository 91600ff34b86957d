//! Seeded randomized self-verification: draws valid parameter sets and runs
//! every cross-check that ties the closed forms to the generator.
//!
//! The pseudo-random stream is pinned to ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded via `seed_from_u64`, so identical seeds reproduce identical
//! parameter sets byte for byte on every platform.
//!
//! Sampling ranges: gaps `E1, E3` uniform in `[0.1, 10]`; temperatures are
//! three ordered draws uniform in `[0.1, 20]`; the coupling is log-uniform in
//! `[1e-4, 1e-2] * min(E1, E3)`; each reset rate is log-uniform in
//! `[1e-5, 1e-3] * min(E1, E3)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{master_rhs, solve_steady_kernel};
use crate::error::Result;
use crate::model::FridgeParams;
use crate::steady::{coefficients, steady_state};
use crate::thermo::{cooling_condition, entropy_production_rate, heat_currents};

/// Entry-wise budget for analytic vs null-space agreement.
pub const ANALYTIC_VS_NUMERIC_TOL: f64 = 1e-10;
/// Stationarity budget: max residual entry per unit of total rate.
pub const RESIDUAL_PER_RATE: f64 = 1e-10;
/// Relative first-law budget.
pub const FIRST_LAW_TOL: f64 = 1e-12;
/// Entropy-rate floor (second law up to rounding).
pub const ENTROPY_FLOOR: f64 = -1e-14;
/// Budget for `|Qc/Qh - E1/E3|`.
pub const EFFICIENCY_RATIO_TOL: f64 = 1e-12;
/// Margins smaller than this are too close to the boundary to call a side.
pub const COOLING_MARGIN_MIN: f64 = 1e-9;
/// Minimum separation between the kernel direction and the rest of the
/// spectrum, `sigma[62]/sigma[63]`.
pub const KERNEL_SEPARATION_MIN: f64 = 1e8;
/// Residual budget for the numeric kernel state, `||L x|| / ||L||`.
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-11;

/// Options for a verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 100,
            seed: 42,
        }
    }
}

/// Every measured quantity for one parameter set, with its pass verdicts.
#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub params: FridgeParams,
    /// Max entry distance between the analytic and null-space states.
    pub analytic_vs_numeric: f64,
    /// Max entry of the master-equation right-hand side at the analytic state.
    pub rhs_residual: f64,
    /// The residual budget `RESIDUAL_PER_RATE * q` for this sample.
    pub rhs_residual_bound: f64,
    /// `|Qc + Qr + Qh|` relative to the current magnitudes.
    pub first_law_relative: f64,
    pub entropy_rate: f64,
    /// `|Qc/Qh - E1/E3|` when the currents are nonzero.
    pub efficiency_deviation: Option<f64>,
    /// Sign agreement between gamma and the design margin (None when the
    /// margin is within [`COOLING_MARGIN_MIN`] of the boundary).
    pub cooling_sign_agrees: Option<bool>,
    /// `sigma[62] / sigma[0]` of the rescaled Liouvillian.
    pub kernel_gap_ratio: f64,
    /// `sigma[62] / sigma[63]`.
    pub kernel_separation: f64,
    /// `||L x|| / ||L||` for the numeric state.
    pub kernel_residual: f64,
    pub failures: Vec<String>,
}

impl SampleCheck {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Report of a full verification run.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<SampleCheck>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(SampleCheck::pass)
    }

    pub fn first_failure(&self) -> Option<&SampleCheck> {
        self.checks.iter().find(|c| !c.pass())
    }
}

/// Draws one valid parameter set from the documented ranges.
pub fn sample_params(rng: &mut ChaCha8Rng) -> FridgeParams {
    let e1: f64 = rng.gen_range(0.1..10.0);
    let e3: f64 = rng.gen_range(0.1..10.0);
    let min_e = e1.min(e3);
    let temps = loop {
        let mut t = [
            rng.gen_range(0.1..20.0),
            rng.gen_range(0.1..20.0),
            rng.gen_range(0.1..20.0),
        ];
        t.sort_by(f64::total_cmp);
        if t[0] < t[1] && t[1] < t[2] {
            break t;
        }
    };
    let g = min_e * 10f64.powf(rng.gen_range(-4.0..-2.0));
    let p = [
        min_e * 10f64.powf(rng.gen_range(-5.0..-3.0)),
        min_e * 10f64.powf(rng.gen_range(-5.0..-3.0)),
        min_e * 10f64.powf(rng.gen_range(-5.0..-3.0)),
    ];
    FridgeParams::new(e1, e3, g, p, temps[0], temps[1], temps[2])
        .expect("sampled inside the valid domain")
}

/// The first `samples` parameter sets of the stream for `seed`.
pub fn sample_batch(samples: usize, seed: u64) -> Vec<FridgeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sample_params(&mut rng)).collect()
}

/// Runs the full cross-check battery on one parameter set.
pub fn check_sample(params: &FridgeParams) -> Result<SampleCheck> {
    let mut failures = Vec::new();

    let analytic = steady_state(params)?;
    let kernel = solve_steady_kernel(params)?;
    let analytic_vs_numeric = (analytic.op() - kernel.state.op()).max_abs();
    if analytic_vs_numeric > ANALYTIC_VS_NUMERIC_TOL {
        failures.push(format!(
            "analytic vs numeric state: {analytic_vs_numeric:.3e} > {ANALYTIC_VS_NUMERIC_TOL:.1e}"
        ));
    }

    let rhs_residual = master_rhs(&analytic, params).max_abs();
    let rhs_residual_bound = RESIDUAL_PER_RATE * params.total_rate();
    if rhs_residual > rhs_residual_bound {
        failures.push(format!(
            "stationarity residual: {rhs_residual:.3e} > {rhs_residual_bound:.3e}"
        ));
    }

    let currents = heat_currents(params);
    let scale = currents.qc.abs() + currents.qr.abs() + currents.qh.abs() + f64::MIN_POSITIVE;
    let first_law_relative = currents.sum().abs() / scale;
    if first_law_relative > FIRST_LAW_TOL {
        failures.push(format!(
            "first law: |sum|/scale = {first_law_relative:.3e} > {FIRST_LAW_TOL:.1e}"
        ));
    }

    let entropy_rate = entropy_production_rate(params);
    if entropy_rate < ENTROPY_FLOOR {
        failures.push(format!(
            "second law: sigma = {entropy_rate:.3e} < {ENTROPY_FLOOR:.1e}"
        ));
    }

    let gamma = coefficients(params).gamma;
    let efficiency_deviation = if gamma != 0.0 {
        let dev = (currents.qc / currents.qh - params.e1() / params.e3()).abs();
        if dev > EFFICIENCY_RATIO_TOL {
            failures.push(format!(
                "efficiency ratio: |Qc/Qh - E1/E3| = {dev:.3e} > {EFFICIENCY_RATIO_TOL:.1e}"
            ));
        }
        Some(dev)
    } else {
        None
    };

    let condition = cooling_condition(params)?;
    let cooling_sign_agrees = if condition.margin.abs() > COOLING_MARGIN_MIN {
        let agrees = (gamma > 0.0) == (condition.margin > 0.0);
        if !agrees {
            failures.push(format!(
                "cooling sign: gamma = {gamma:.3e} vs margin = {:.3e}",
                condition.margin
            ));
        }
        Some(agrees)
    } else {
        None
    };

    if kernel.kernel_separation < KERNEL_SEPARATION_MIN {
        failures.push(format!(
            "kernel separation: {:.3e} < {KERNEL_SEPARATION_MIN:.1e}",
            kernel.kernel_separation
        ));
    }
    if kernel.residual_ratio > KERNEL_RESIDUAL_TOL {
        failures.push(format!(
            "kernel residual: {:.3e} > {KERNEL_RESIDUAL_TOL:.1e}",
            kernel.residual_ratio
        ));
    }

    Ok(SampleCheck {
        params: *params,
        analytic_vs_numeric,
        rhs_residual,
        rhs_residual_bound,
        first_law_relative,
        entropy_rate,
        efficiency_deviation,
        cooling_sign_agrees,
        kernel_gap_ratio: kernel.gap_ratio,
        kernel_separation: kernel.kernel_separation,
        kernel_residual: kernel.residual_ratio,
        failures,
    })
}

/// Draws `options.samples` parameter sets and checks each one.
pub fn run(options: VerifyOptions) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut checks = Vec::with_capacity(options.samples);
    for _ in 0..options.samples {
        let params = sample_params(&mut rng);
        checks.push(check_sample(&params)?);
    }
    Ok(VerifyReport { options, checks })
}
