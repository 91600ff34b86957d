//! JSON report emitted by `fridge steady`. Field order is fixed by the
//! struct definitions, so identical inputs produce byte-identical reports.

use fridge_core::FridgeParams;
use serde::Serialize;

#[derive(Serialize)]
pub struct SteadyReport {
    pub params: FridgeParams,
    pub weak_coupling_ok: bool,
    pub coefficients: Coefficients,
    pub cooling: bool,
    /// Design margin `bound - E1/E3`; absent when `Tr <= Tc`.
    pub margin: Option<f64>,
    pub bound: Option<f64>,
    pub heat_currents: Currents,
    /// `E1/E3`, present only in the cooling regime.
    pub efficiency: Option<f64>,
    /// Three-bath Carnot reference; absent unless `Tc < Tr < Th` strictly.
    pub eta_carnot: Option<f64>,
    pub steady_state: MatrixParts,
    pub reduced: Vec<ReducedQubit>,
    /// Max entry of the master-equation right-hand side at the analytic state.
    pub residual_max: f64,
    /// The stationarity budget `1e-10 * q` this run must beat.
    pub residual_bound: f64,
}

#[derive(Serialize)]
pub struct Coefficients {
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    #[serde(rename = "Q23")]
    pub q23: f64,
    #[serde(rename = "Q13")]
    pub q13: f64,
    #[serde(rename = "Q12")]
    pub q12: f64,
    pub delta: f64,
    pub omega23: f64,
    pub omega13: f64,
    pub omega12: f64,
    pub gamma: f64,
}

#[derive(Serialize)]
pub struct Currents {
    #[serde(rename = "Qc")]
    pub qc: f64,
    #[serde(rename = "Qr")]
    pub qr: f64,
    #[serde(rename = "Qh")]
    pub qh: f64,
}

#[derive(Serialize)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Serialize)]
pub struct ReducedQubit {
    pub qubit: u8,
    pub ground: f64,
    pub excited: f64,
    /// Signed effective temperature; absent when the populations are equal
    /// (the infinite-temperature point).
    pub effective_temperature: Option<f64>,
}
