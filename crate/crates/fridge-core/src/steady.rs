//! Exact analytic stationary state of the reset-model master equation, its
//! coefficients, reduced states, and effective temperatures.
//!
//! The full stationary state is assembled as
//!
//! ```text
//! rho_S = tau1 tau2 tau3
//!       + gamma * ( Q23 Z1 tau2 tau3 + Q13 tau1 Z2 tau3 + Q12 tau1 tau2 Z3
//!                 + q1 tau1 Z23     + q2 tau2 Z13      + q3 Z12 tau3
//!                 + Z123 + (q / 2g) Y123 )
//! ```
//!
//! with rate coefficients `q_i = p_i / (q - p_i)` and
//! `Q_jk = (p_j q_k + p_k q_j) / p_i` (the denominator `q - p_j - p_k` equals
//! the complementary rate `p_i` exactly, which is how it is evaluated here —
//! the literal subtraction would cancel catastrophically for lopsided rates).
//!
//! # The Omega convention
//!
//! The scale factor `gamma` divides by
//! `2 + q^2/(2 g^2) + sum_i q_i + sum_jk Q_jk Omega_jk`, where `Omega_jk`
//! weighs pair occupations of qubits `j,k`. Two candidate conventions exist
//! for these weights; they differ in which ground/excited products enter.
//! Only one of them makes the closed form an *exact* stationary point of the
//! generator (residual at the rounding floor for every parameter set, see the
//! `omega_variant_selection` test and the acceptance suite); the other leaves
//! a finite residual. The exact one is [`OmegaVariant::SwapAligned`]:
//!
//! ```text
//! Omega_23 = r2 rb3 + rb2 r3
//! Omega_13 = r1 r3  + rb1 rb3
//! Omega_12 = r1 rb2 + rb1 r2
//! ```
//!
//! i.e. the probability that the pair sits in one of the two occupation
//! patterns connected by the `|010> <-> |101>` swap. It is the default
//! everywhere. The rejected [`OmegaVariant::Asymmetric`] candidate
//! (`Omega_jk = r'_j rb'_k + rb'_j r_k` with only qubit 2 primed) is kept
//! selectable so the selection stays demonstrable.

use crate::error::{FridgeError, Result};
use crate::model::{pauli_like_operators, thermal_state, FridgeParams};
use crate::qops::{tensor, validate_density, DensityMatrix, QOperator};
use num_complex::Complex64;

/// Off-diagonal tolerance below which a qubit state counts as diagonal for
/// [`effective_temperature`].
pub const EFFECTIVE_TEMP_DIAG_TOL: f64 = 1e-10;
/// Population-difference tolerance below which the effective temperature is
/// reported as infinite.
pub const EQUAL_POPULATION_TOL: f64 = 1e-14;

/// Candidate conventions for the pair-occupation weights `Omega_jk`.
///
/// See the module docs; [`OmegaVariant::SwapAligned`] is the one selected by
/// the stationarity requirement and is the crate-wide default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaVariant {
    /// Products of populations aligned with the two swap configurations
    /// (qubit 2 counted with flipped ground/excited roles). Exactly
    /// stationary; the default.
    SwapAligned,
    /// The asymmetric candidate with one unflipped factor. Leaves a nonzero
    /// master-equation residual; retained for comparison only.
    Asymmetric,
}

/// Convention used throughout the crate, frozen after the residual selection.
pub const DEFAULT_OMEGA_VARIANT: OmegaVariant = OmegaVariant::SwapAligned;

/// Dimensionless coefficients of the stationary solution.
///
/// Pair quantities are indexed by the *excluded* qubit:
/// index 0 holds the (2,3) pair, index 1 the (1,3) pair, index 2 the (1,2)
/// pair. Accessors `q23()`, `omega13()`, ... avoid off-by-one reading.
#[derive(Clone, Copy, Debug)]
pub struct SteadyCoefficients {
    /// Total reset rate `q = p1 + p2 + p3`.
    pub q: f64,
    /// `q_i = p_i / (q - p_i)`.
    pub q_single: [f64; 3],
    /// `Q_jk`, indexed by the excluded qubit.
    pub q_pair: [f64; 3],
    /// Population imbalance `Delta = r1 rb2 r3 - rb1 r2 rb3`.
    pub delta: f64,
    /// `Omega_jk`, indexed by the excluded qubit.
    pub omega: [f64; 3],
    /// Stationary shift scale; positive exactly in the cooling regime.
    pub gamma: f64,
}

impl SteadyCoefficients {
    pub fn q23(&self) -> f64 {
        self.q_pair[0]
    }
    pub fn q13(&self) -> f64 {
        self.q_pair[1]
    }
    pub fn q12(&self) -> f64 {
        self.q_pair[2]
    }
    pub fn omega23(&self) -> f64 {
        self.omega[0]
    }
    pub fn omega13(&self) -> f64 {
        self.omega[1]
    }
    pub fn omega12(&self) -> f64 {
        self.omega[2]
    }
}

/// Rate-only coefficients `(q, q_i, Q_jk)`; `Q_jk` indexed by excluded qubit.
pub fn rate_coefficients(p1: f64, p2: f64, p3: f64) -> Result<(f64, [f64; 3], [f64; 3])> {
    for (i, v) in [p1, p2, p3].iter().enumerate() {
        if !(v.is_finite() && *v > 0.0) {
            return Err(FridgeError::InvalidParams {
                reason: format!("p{} must be a positive finite rate, got {v}", i + 1),
            });
        }
    }
    let q = p1 + p2 + p3;
    let q_single = [p1 / (q - p1), p2 / (q - p2), p3 / (q - p3)];
    // q - p_j - p_k = p_i exactly; dividing by p_i avoids the cancellation.
    let q_pair = [
        (p2 * q_single[2] + p3 * q_single[1]) / p1,
        (p1 * q_single[2] + p3 * q_single[0]) / p2,
        (p1 * q_single[1] + p2 * q_single[0]) / p3,
    ];
    Ok((q, q_single, q_pair))
}

fn populations(params: &FridgeParams) -> [(f64, f64); 3] {
    let mut out = [(0.0, 0.0); 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let t = params
            .bath_thermal_qubit(i as u8 + 1)
            .expect("labels 1..=3 are valid");
        *slot = (t.r(), t.r_bar());
    }
    out
}

/// Population imbalance `Delta = r1 rb2 r3 - rb1 r2 rb3` between the two swap
/// configurations. Negative exactly in the cooling regime; zero at global
/// equilibrium.
pub fn delta(params: &FridgeParams) -> f64 {
    let [(r1, rb1), (r2, rb2), (r3, rb3)] = populations(params);
    r1 * rb2 * r3 - rb1 * r2 * rb3
}

/// Pair-occupation weights under the given convention, indexed by the
/// excluded qubit.
pub fn omega_with(params: &FridgeParams, variant: OmegaVariant) -> [f64; 3] {
    let [(r1, rb1), (r2, rb2), (r3, rb3)] = populations(params);
    match variant {
        OmegaVariant::SwapAligned => [
            r2 * rb3 + rb2 * r3,
            r1 * r3 + rb1 * rb3,
            r1 * rb2 + rb1 * r2,
        ],
        OmegaVariant::Asymmetric => [
            rb2 * rb3 + r2 * r3,
            r1 * rb3 + rb1 * r3,
            r1 * r2 + rb1 * r2,
        ],
    }
}

/// Pair-occupation weights under the default (stationary) convention.
pub fn omega(params: &FridgeParams) -> [f64; 3] {
    omega_with(params, DEFAULT_OMEGA_VARIANT)
}

fn gamma_with(params: &FridgeParams, variant: OmegaVariant) -> f64 {
    let g = params.g();
    if g == 0.0 {
        // The q^2/(2g^2) term dominates the denominator as g -> 0, so the
        // shift vanishes; returned exactly rather than dividing by zero.
        return 0.0;
    }
    let [p1, p2, p3] = params.rates();
    let (q, q_single, q_pair) = rate_coefficients(p1, p2, p3).expect("validated rates");
    let om = omega_with(params, variant);
    let denom = 2.0
        + q * q / (2.0 * g * g)
        + q_single.iter().sum::<f64>()
        + q_pair[0] * om[0]
        + q_pair[1] * om[1]
        + q_pair[2] * om[2];
    -delta(params) / denom
}

/// Stationary shift scale `gamma`; same sign as `-Delta`, zero when `g = 0`.
pub fn gamma(params: &FridgeParams) -> f64 {
    gamma_with(params, DEFAULT_OMEGA_VARIANT)
}

/// All stationary coefficients in one pass.
pub fn coefficients(params: &FridgeParams) -> SteadyCoefficients {
    let [p1, p2, p3] = params.rates();
    let (q, q_single, q_pair) = rate_coefficients(p1, p2, p3).expect("validated rates");
    SteadyCoefficients {
        q,
        q_single,
        q_pair,
        delta: delta(params),
        omega: omega(params),
        gamma: gamma(params),
    }
}

fn steady_state_with(params: &FridgeParams, variant: OmegaVariant) -> Result<DensityMatrix> {
    let t1 = thermal_state(params.e1(), params.tc(), 1)?;
    let t2 = thermal_state(params.e2(), params.tr(), 2)?;
    let t3 = thermal_state(params.e3(), params.th(), 3)?;
    let product = tensor(&tensor(t1.op(), t2.op())?, t3.op())?;

    let g = params.g();
    if g == 0.0 {
        // gamma = 0 and the coherence weight gamma*q/(2g) -> 0 in the same
        // limit: no interaction, no deviation from the bath product.
        return validate_density(product);
    }

    let ops = pauli_like_operators();
    let co = {
        let mut c = coefficients(params);
        if variant != DEFAULT_OMEGA_VARIANT {
            c.omega = omega_with(params, variant);
            c.gamma = gamma_with(params, variant);
        }
        c
    };

    let pair_terms = &(&(&tensor(&ops.z1, &tensor(t2.op(), t3.op())?)? * co.q23())
        + &(&tensor(&tensor(t1.op(), &ops.z2)?, t3.op())? * co.q13()))
        + &(&tensor(&tensor(t1.op(), t2.op())?, &ops.z3)? * co.q12());
    let single_terms = &(&(&tensor(t1.op(), &ops.z23)? * co.q_single[0])
        + &(&tensor(t2.op(), &ops.z13)? * co.q_single[1]))
        + &(&tensor(&ops.z12, t3.op())? * co.q_single[2]);
    let swap_terms = &ops.z123 + &(&ops.y123 * (co.q / (2.0 * g)));

    let structure = &(&pair_terms + &single_terms) + &swap_terms;
    let rho = &product + &(&structure * co.gamma);
    validate_density(rho)
}

/// The exact stationary state of the master equation (dimension 8).
///
/// Passes [`validate_density`] for every valid parameter set; its off-diagonal
/// support is confined to the `(|010>, |101>)` coherence.
pub fn steady_state(params: &FridgeParams) -> Result<DensityMatrix> {
    steady_state_with(params, DEFAULT_OMEGA_VARIANT)
}

/// Stationary state assembled under an explicit Omega convention. Only
/// [`OmegaVariant::SwapAligned`] is exactly stationary; the other variant is
/// exposed so the selection can be demonstrated against the generator.
pub fn steady_state_with_variant(
    params: &FridgeParams,
    variant: OmegaVariant,
) -> Result<DensityMatrix> {
    steady_state_with(params, variant)
}

/// Reduced stationary state of one qubit: `tau_i + (q gamma / p_i) Z_i`.
///
/// Agrees with the partial trace of [`steady_state`] to rounding.
pub fn reduced_steady_state(params: &FridgeParams, qubit: u8) -> Result<DensityMatrix> {
    if !(1..=3).contains(&qubit) {
        return Err(FridgeError::InvalidQubit { label: qubit });
    }
    let shift = coefficients(params).gamma * params.total_rate() / params.rate(qubit)?;
    // Z_1 = Z_3 = diag(1,-1), Z_2 = diag(-1,1)
    let sign = if qubit == 2 { -1.0 } else { 1.0 };
    let tau = thermal_state(params.energy(qubit)?, params.temperature(qubit)?, qubit)?;
    let z = QOperator::from_diagonal(tau.qubits(), &[sign, -sign])?;
    validate_density(&tau.into_operator() + &(&z * shift))
}

/// Effective temperature `E / ln(p_ground / p_excited)` of a diagonal qubit
/// state.
///
/// Total on the physical edge cases: equal populations (within
/// [`EQUAL_POPULATION_TOL`]) give `+inf`, an unpopulated excited level gives
/// `0`, and population inversion gives a negative value rather than an error
/// so that sweeps leaving the cooling regime stay rectangular.
pub fn effective_temperature(state: &DensityMatrix, e: f64) -> Result<f64> {
    if state.dim() != 2 {
        return Err(FridgeError::InvalidArgument {
            reason: format!(
                "effective temperature needs a single-qubit state, got dimension {}",
                state.dim()
            ),
        });
    }
    if !(e.is_finite() && e > 0.0) {
        return Err(FridgeError::InvalidParams {
            reason: format!("energy gap must be positive and finite, got {e}"),
        });
    }
    let offdiag = state.op().max_offdiagonal_abs();
    if offdiag > EFFECTIVE_TEMP_DIAG_TOL {
        return Err(FridgeError::NotDiagonal { deviation: offdiag });
    }
    let ground = state.entry(0, 0).re;
    let excited = state.entry(1, 1).re;
    if (ground - excited).abs() <= EQUAL_POPULATION_TOL {
        return Ok(f64::INFINITY);
    }
    if excited <= 0.0 {
        return Ok(0.0);
    }
    if ground <= 0.0 {
        return Ok(-0.0);
    }
    Ok(e / (ground / excited).ln())
}

/// Coherence weight of the stationary state: the `(|010>, |101>)` matrix
/// element is `-i * gamma * q / (2 g)`.
pub fn steady_coherence(params: &FridgeParams) -> Complex64 {
    let g = params.g();
    if g == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, -gamma(params) * params.total_rate() / (2.0 * g))
}
