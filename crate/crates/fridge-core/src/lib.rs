//! Simulation library for the three-qubit self-contained quantum
//! refrigerator: three qubits, each reset toward its own bath's thermal state,
//! coupled by a weak swap between the degenerate states `|010>` and `|101>`.
//!
//! The crate provides the exact analytic stationary state of the reset-model
//! master equation together with two independent numerical routes that check
//! it (the Liouvillian null space and direct time integration), plus the
//! thermodynamics built on top: heat currents, refrigerator efficiency, the
//! cooling condition, the three-bath Carnot reference, and entropy-production
//! audits.
//!
//! Modules:
//! - [`qops`]: dense operator algebra (tensor, partial trace, commutator,
//!   density-matrix validation) on the fixed basis ordering
//!   `|q1 q2 q3> <-> 4 q1 + 2 q2 + q3`.
//! - [`model`]: physical parameters, thermal states, Hamiltonians, and the
//!   swap-sector operators.
//! - [`steady`]: the exact stationary solution and its coefficients.
//! - [`dynamics`]: master-equation right-hand side, fixed-step RK4 evolution,
//!   the 64x64 Liouvillian, and the null-space solver.
//! - [`thermo`]: currents, efficiency, cooling condition, Carnot reference,
//!   entropy production.
//! - [`verify`]: seeded randomized cross-check battery over the full
//!   parameter domain.
//!
//! Units: `hbar = k_B = 1` everywhere.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod qops;
pub mod steady;
pub mod thermo;
pub mod verify;

pub use dynamics::{
    evolve, liouvillian_matrix, master_rhs, steady_state_numeric, KernelSolve, Superoperator,
    Trajectory,
};
pub use error::{FridgeError, Result};
pub use model::{
    free_hamiltonian, interaction_hamiltonian, pauli_like_operators, thermal_populations,
    thermal_product, thermal_state, FridgeParams, ThermalQubit,
};
pub use qops::{
    commutator, partial_trace, tensor, trace_distance, validate_density, DensityMatrix, QOperator,
    QubitSet,
};
pub use steady::{
    coefficients, delta, effective_temperature, gamma, omega, rate_coefficients,
    reduced_steady_state, steady_state, OmegaVariant, SteadyCoefficients,
};
pub use thermo::{
    carnot_efficiency, cooling_condition, critical_e1, efficiency, entropy_production_rate,
    heat_current_numeric, heat_currents, max_quantum_efficiency, CoolingCondition, HeatCurrents,
};
