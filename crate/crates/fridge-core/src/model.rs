//! Physical model: parameter set, thermal states, free and interaction
//! Hamiltonians, and the swap-sector operators.
//!
//! Units are `hbar = k_B = 1` throughout. The middle qubit's gap is never
//! stored: `E2 = E1 + E3` structurally, which keeps `|010>` and `|101>`
//! degenerate to the bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FridgeError, Result};
use crate::qops::{
    partial_trace, tensor, validate_density, CMatrix, DensityMatrix, QOperator, QubitSet,
};

/// Relative threshold standing in for "much smaller than" in the
/// weak-coupling advisory check.
pub const WEAK_COUPLING_RATIO: f64 = 0.01;

/// The nine physical inputs of the refrigerator.
///
/// Qubit 1 couples to the cold bath (`Tc`), qubit 2 to the room bath (`Tr`),
/// qubit 3 to the hot bath (`Th`). `E2` is derived, never stored.
///
/// The JSON form is a flat object with exactly the keys
/// `E1, E3, g, p1, p2, p3, Tc, Tr, Th`; unknown keys are rejected and the
/// constructor invariants are enforced on deserialization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFridgeParams", into = "RawFridgeParams")]
pub struct FridgeParams {
    e1: f64,
    e3: f64,
    g: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    tc: f64,
    tr: f64,
    th: f64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFridgeParams {
    #[serde(rename = "E1")]
    e1: f64,
    #[serde(rename = "E3")]
    e3: f64,
    g: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    #[serde(rename = "Tc")]
    tc: f64,
    #[serde(rename = "Tr")]
    tr: f64,
    #[serde(rename = "Th")]
    th: f64,
}

impl TryFrom<RawFridgeParams> for FridgeParams {
    type Error = FridgeError;
    fn try_from(r: RawFridgeParams) -> Result<Self> {
        FridgeParams::new(r.e1, r.e3, r.g, [r.p1, r.p2, r.p3], r.tc, r.tr, r.th)
    }
}

impl From<FridgeParams> for RawFridgeParams {
    fn from(p: FridgeParams) -> Self {
        RawFridgeParams {
            e1: p.e1,
            e3: p.e3,
            g: p.g,
            p1: p.p1,
            p2: p.p2,
            p3: p.p3,
            tc: p.tc,
            tr: p.tr,
            th: p.th,
        }
    }
}

impl FridgeParams {
    /// Validating constructor: energies and temperatures positive, reset
    /// rates positive, coupling nonnegative, and `Tc <= Tr <= Th`.
    pub fn new(e1: f64, e3: f64, g: f64, p: [f64; 3], tc: f64, tr: f64, th: f64) -> Result<Self> {
        let fail = |reason: String| Err(FridgeError::InvalidParams { reason });
        for (name, v) in [("E1", e1), ("E3", e3)] {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be a positive finite energy, got {v}"));
            }
        }
        if !(g.is_finite() && g >= 0.0) {
            return fail(format!("g must be a nonnegative finite energy, got {g}"));
        }
        for (i, v) in p.iter().enumerate() {
            if !(v.is_finite() && *v > 0.0) {
                return fail(format!("p{} must be a positive finite rate, got {v}", i + 1));
            }
        }
        for (name, v) in [("Tc", tc), ("Tr", tr), ("Th", th)] {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!(
                    "{name} must be a positive finite temperature, got {v}"
                ));
            }
        }
        if !(tc <= tr && tr <= th) {
            return fail(format!(
                "temperatures must satisfy Tc <= Tr <= Th, got Tc={tc}, Tr={tr}, Th={th}"
            ));
        }
        Ok(FridgeParams {
            e1,
            e3,
            g,
            p1: p[0],
            p2: p[1],
            p3: p[2],
            tc,
            tr,
            th,
        })
    }

    /// Skips every check. For exploratory sweeps that intentionally leave the
    /// validated domain (e.g. unordered temperatures or vanishing rates); all
    /// downstream formulas are evaluated as written, garbage in, garbage out.
    pub fn new_unchecked(
        e1: f64,
        e3: f64,
        g: f64,
        p: [f64; 3],
        tc: f64,
        tr: f64,
        th: f64,
    ) -> Self {
        FridgeParams {
            e1,
            e3,
            g,
            p1: p[0],
            p2: p[1],
            p3: p[2],
            tc,
            tr,
            th,
        }
    }

    pub fn e1(&self) -> f64 {
        self.e1
    }

    /// Derived middle gap, exactly `E1 + E3`.
    pub fn e2(&self) -> f64 {
        self.e1 + self.e3
    }

    pub fn e3(&self) -> f64 {
        self.e3
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn rates(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn tc(&self) -> f64 {
        self.tc
    }

    pub fn tr(&self) -> f64 {
        self.tr
    }

    pub fn th(&self) -> f64 {
        self.th
    }

    /// Energy gap of qubit `label`.
    pub fn energy(&self, label: u8) -> Result<f64> {
        match label {
            1 => Ok(self.e1),
            2 => Ok(self.e2()),
            3 => Ok(self.e3),
            _ => Err(FridgeError::InvalidQubit { label }),
        }
    }

    /// Bath temperature seen by qubit `label`.
    pub fn temperature(&self, label: u8) -> Result<f64> {
        match label {
            1 => Ok(self.tc),
            2 => Ok(self.tr),
            3 => Ok(self.th),
            _ => Err(FridgeError::InvalidQubit { label }),
        }
    }

    /// Reset rate of qubit `label`.
    pub fn rate(&self, label: u8) -> Result<f64> {
        match label {
            1 => Ok(self.p1),
            2 => Ok(self.p2),
            3 => Ok(self.p3),
            _ => Err(FridgeError::InvalidQubit { label }),
        }
    }

    /// Total reset rate `q = p1 + p2 + p3`.
    pub fn total_rate(&self) -> f64 {
        self.p1 + self.p2 + self.p3
    }

    pub fn min_rate(&self) -> f64 {
        self.p1.min(self.p2).min(self.p3)
    }

    /// Advisory flag: true when both the coupling and every reset rate sit at
    /// or below 1% of the smallest gap. Gates warnings only, never results.
    pub fn weak_coupling_ok(&self) -> bool {
        let scale = WEAK_COUPLING_RATIO * self.e1.min(self.e3);
        self.g <= scale && self.p1.max(self.p2).max(self.p3) <= scale
    }

    /// Thermal state of qubit `label` in its own bath.
    pub fn bath_thermal_qubit(&self, label: u8) -> Result<ThermalQubit> {
        thermal_populations(self.energy(label)?, self.temperature(label)?)
    }
}

/// Ground/excited populations of a thermal qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalQubit {
    r: f64,
    r_bar: f64,
}

impl ThermalQubit {
    /// Ground-state population.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Excited-state population.
    pub fn r_bar(&self) -> f64 {
        self.r_bar
    }
}

/// Boltzmann populations `r = 1/(1 + e^(-E/T))`, `r_bar = e^(-E/T)/(1 + e^(-E/T))`.
///
/// Stable for arbitrarily large `E/T`: the exponential underflows to zero and
/// the populations clamp to (1, 0).
pub fn thermal_populations(e: f64, t: f64) -> Result<ThermalQubit> {
    if !(t.is_finite() && t > 0.0) {
        return Err(FridgeError::InvalidParams {
            reason: format!("temperature must be positive and finite, got {t}"),
        });
    }
    if !(e.is_finite() && e >= 0.0) {
        return Err(FridgeError::InvalidParams {
            reason: format!("energy must be nonnegative and finite, got {e}"),
        });
    }
    let w = (-e / t).exp();
    let z = 1.0 + w;
    Ok(ThermalQubit {
        r: 1.0 / z,
        r_bar: w / z,
    })
}

/// Thermal state `diag(r, r_bar)` on the given qubit label.
pub fn thermal_state(e: f64, t: f64, label: u8) -> Result<DensityMatrix> {
    let pops = thermal_populations(e, t)?;
    let op = QOperator::from_diagonal(QubitSet::single(label)?, &[pops.r, pops.r_bar])?;
    validate_density(op)
}

/// Product of the three bath thermal states, `tau1 (x) tau2 (x) tau3`.
pub fn thermal_product(params: &FridgeParams) -> Result<DensityMatrix> {
    let t1 = thermal_state(params.e1(), params.tc(), 1)?;
    let t2 = thermal_state(params.e2(), params.tr(), 2)?;
    let t3 = thermal_state(params.e3(), params.th(), 3)?;
    let prod = tensor(&tensor(t1.op(), t2.op())?, t3.op())?;
    validate_density(prod)
}

/// Free Hamiltonian `E1 P1 + E2 P2 + E3 P3` (diagonal, dimension 8).
pub fn free_hamiltonian(params: &FridgeParams) -> QOperator {
    let (e1, e2, e3) = (params.e1(), params.e2(), params.e3());
    let mut diag = [0.0f64; 8];
    for (b, d) in diag.iter_mut().enumerate() {
        let (q1, q2, q3) = (b >> 2 & 1, b >> 1 & 1, b & 1);
        *d = e1 * q1 as f64 + e2 * q2 as f64 + e3 * q3 as f64;
    }
    QOperator::from_diagonal(QubitSet::ALL, &diag).expect("8 entries for 3 qubits")
}

/// Interaction Hamiltonian `g (|010><101| + |101><010|)`.
///
/// With `E2 = E1 + E3` the two coupled basis states are degenerate under the
/// free Hamiltonian, so the two commute.
pub fn interaction_hamiltonian(g: f64) -> Result<QOperator> {
    if !(g.is_finite() && g >= 0.0) {
        return Err(FridgeError::InvalidParams {
            reason: format!("g must be a nonnegative finite energy, got {g}"),
        });
    }
    let mut mat = CMatrix::zeros(8, 8);
    mat[(2, 5)] = Complex64::new(g, 0.0);
    mat[(5, 2)] = Complex64::new(g, 0.0);
    QOperator::from_matrix(QubitSet::ALL, mat)
}

/// The swap-sector operators and their partial traces.
///
/// `Z123 = |010><010| - |101><101|` and `Y123 = i|101><010| - i|010><101|`;
/// every lower-order member is obtained by tracing out the missing qubits,
/// which gives `Z1 = diag(1,-1)`, `Z2 = diag(-1,1)`, `Z3 = diag(1,-1)`.
#[derive(Clone, Debug)]
pub struct PauliLike {
    pub z123: QOperator,
    pub y123: QOperator,
    pub z23: QOperator,
    pub z13: QOperator,
    pub z12: QOperator,
    pub z1: QOperator,
    pub z2: QOperator,
    pub z3: QOperator,
}

/// Builds the full set of swap-sector operators.
pub fn pauli_like_operators() -> PauliLike {
    let mut z = CMatrix::zeros(8, 8);
    z[(2, 2)] = Complex64::new(1.0, 0.0);
    z[(5, 5)] = Complex64::new(-1.0, 0.0);
    let z123 = QOperator::from_matrix(QubitSet::ALL, z).expect("8x8");

    let mut y = CMatrix::zeros(8, 8);
    y[(5, 2)] = Complex64::new(0.0, 1.0);
    y[(2, 5)] = Complex64::new(0.0, -1.0);
    let y123 = QOperator::from_matrix(QubitSet::ALL, y).expect("8x8");

    let keep = |labels: &[u8]| QubitSet::new(labels).expect("valid labels");
    let pt = |k: QubitSet| partial_trace(&z123, k).expect("subset of {1,2,3}");
    PauliLike {
        z23: pt(keep(&[2, 3])),
        z13: pt(keep(&[1, 3])),
        z12: pt(keep(&[1, 2])),
        z1: pt(keep(&[1])),
        z2: pt(keep(&[2])),
        z3: pt(keep(&[3])),
        z123,
        y123,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::commutator;

    fn canonical() -> FridgeParams {
        FridgeParams::new(1.0, 2.0, 1e-3, [1e-4, 1e-4, 1e-4], 1.0, 2.0, 10.0).unwrap()
    }

    #[test]
    fn thermal_population_values() {
        let d = thermal_populations(0.0, 1.0).unwrap();
        assert_eq!((d.r(), d.r_bar()), (0.5, 0.5));

        let frozen = thermal_populations(1.0, 1e-6).unwrap();
        assert_eq!(frozen.r(), 1.0);
        assert!(frozen.r_bar().abs() < 1e-300);

        // 1/(1 + e^-1) evaluated in extended precision
        let t = thermal_populations(1.0, 1.0).unwrap();
        assert!((t.r() - 0.7310585786300049).abs() < 1e-15);
        assert!((t.r_bar() - 0.2689414213699951).abs() < 1e-15);
        assert!((t.r() + t.r_bar() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_population_domain_errors() {
        assert!(thermal_populations(1.0, 0.0).is_err());
        assert!(thermal_populations(1.0, -2.0).is_err());
        assert!(thermal_populations(-1.0, 1.0).is_err());
    }

    #[test]
    fn thermal_population_monotone_in_temperature() {
        let mut prev = thermal_populations(1.0, 0.05).unwrap().r();
        for k in 1..60 {
            let t = 0.05 + 0.25 * k as f64;
            let r = thermal_populations(1.0, t).unwrap().r();
            assert!(r < prev, "r must strictly decrease in T (t = {t})");
            prev = r;
        }
    }

    #[test]
    fn thermal_state_is_valid_and_diagonal() {
        let s = thermal_state(1.0, 1.0, 2).unwrap();
        assert_eq!(s.qubits().labels(), vec![2]);
        assert!((s.entry(0, 0).re - 0.7310585786300049).abs() < 1e-15);
        assert!((s.op().trace().re - 1.0).abs() < 1e-15);
        assert_eq!(s.op().max_offdiagonal_abs(), 0.0);
    }

    #[test]
    fn free_hamiltonian_degeneracy_and_trace() {
        let p = FridgeParams::new(1.0, 2.0, 0.0, [1e-3; 3], 1.0, 1.0, 1.0).unwrap();
        let h = free_hamiltonian(&p);
        assert_eq!(h.entry(2, 2).re, 3.0);
        assert_eq!(h.entry(5, 5).re, 3.0);
        assert_eq!(h.entry(2, 2), h.entry(5, 5));
        assert_eq!(h.entry(0, 0).re, 0.0);
        assert_eq!(h.entry(7, 7).re, 6.0);
        assert!((h.trace().re - 8.0 * (p.e1() + p.e3())).abs() < 1e-12);
        assert_eq!(h.hermiticity_error(), 0.0);
    }

    #[test]
    fn interaction_hamiltonian_structure() {
        let h = interaction_hamiltonian(0.25).unwrap();
        assert_eq!(h.entry(2, 5).re, 0.25);
        assert_eq!(h.entry(5, 2).re, 0.25);
        assert_eq!(h.hermiticity_error(), 0.0);
        let count_nonzero = (0..8)
            .flat_map(|r| (0..8).map(move |c| (r, c)))
            .filter(|&(r, c)| h.entry(r, c).norm() > 0.0)
            .count();
        assert_eq!(count_nonzero, 2);

        assert_eq!(interaction_hamiltonian(0.0).unwrap().max_abs(), 0.0);
        assert!(interaction_hamiltonian(-1.0).is_err());

        // H_int^2 = g^2 (|010><010| + |101><101|)
        let sq = &h * &h;
        assert_eq!(sq.entry(2, 2).re, 0.0625);
        assert_eq!(sq.entry(5, 5).re, 0.0625);
        assert!(sq.max_offdiagonal_abs() == 0.0);
    }

    #[test]
    fn free_and_interaction_commute() {
        for (e1, e3) in [(1.0, 2.0), (0.3, 0.3), (5.0, 0.7)] {
            let p = FridgeParams::new(e1, e3, 0.1, [1e-3; 3], 1.0, 2.0, 3.0).unwrap();
            let c = commutator(
                &free_hamiltonian(&p),
                &interaction_hamiltonian(p.g()).unwrap(),
            )
            .unwrap();
            assert!(
                c.max_abs() <= 1e-12,
                "degeneracy must make [H0, Hint] vanish, got {}",
                c.max_abs()
            );
        }
    }

    #[test]
    fn pauli_like_operator_matrix_elements() {
        let ops = pauli_like_operators();
        assert_eq!(ops.z123.entry(2, 2).re, 1.0);
        assert_eq!(ops.z123.entry(5, 5).re, -1.0);
        assert_eq!(ops.z1.entry(0, 0).re, 1.0);
        assert_eq!(ops.z1.entry(1, 1).re, -1.0);
        assert_eq!(ops.z2.entry(0, 0).re, -1.0);
        assert_eq!(ops.z2.entry(1, 1).re, 1.0);
        assert_eq!(ops.z3.entry(0, 0).re, 1.0);
        assert_eq!(ops.z3.entry(1, 1).re, -1.0);
        assert_eq!(ops.y123.trace().norm(), 0.0);
        assert_eq!(ops.y123.hermiticity_error(), 0.0);
        assert_eq!(ops.z12.qubits().labels(), vec![1, 2]);
        assert_eq!(ops.z13.qubits().labels(), vec![1, 3]);
        assert_eq!(ops.z23.qubits().labels(), vec![2, 3]);
        // pair reductions: Z12 = diag(0,1,-1,0), Z13 = diag(1,0,0,-1), Z23 = diag(0,-1,1,0)
        let diag = |op: &QOperator| (0..4).map(|i| op.entry(i, i).re).collect::<Vec<_>>();
        assert_eq!(diag(&ops.z12), vec![0.0, 1.0, -1.0, 0.0]);
        assert_eq!(diag(&ops.z13), vec![1.0, 0.0, 0.0, -1.0]);
        assert_eq!(diag(&ops.z23), vec![0.0, -1.0, 1.0, 0.0]);
    }

    #[test]
    fn params_validation() {
        assert!(FridgeParams::new(1.0, 2.0, 0.0, [1e-3; 3], 1.0, 2.0, 3.0).is_ok());
        // ordering violated
        assert!(FridgeParams::new(1.0, 2.0, 0.0, [1e-3; 3], 2.0, 1.0, 3.0).is_err());
        // nonpositive rate
        assert!(FridgeParams::new(1.0, 2.0, 0.0, [1e-3, 0.0, 1e-3], 1.0, 2.0, 3.0).is_err());
        // nonpositive energy
        assert!(FridgeParams::new(0.0, 2.0, 0.0, [1e-3; 3], 1.0, 2.0, 3.0).is_err());
        // negative coupling
        assert!(FridgeParams::new(1.0, 2.0, -0.1, [1e-3; 3], 1.0, 2.0, 3.0).is_err());
        // equalities in the ordering are allowed
        assert!(FridgeParams::new(1.0, 2.0, 0.0, [1e-3; 3], 2.0, 2.0, 2.0).is_ok());
    }

    #[test]
    fn e2_is_derived_exactly() {
        let p = canonical();
        assert_eq!(p.e2(), p.e1() + p.e3());
        assert_eq!(p.energy(2).unwrap(), p.e2());
    }

    #[test]
    fn weak_coupling_flag() {
        assert!(canonical().weak_coupling_ok());
        let strong = FridgeParams::new(1.0, 2.0, 0.5, [1e-4; 3], 1.0, 2.0, 10.0).unwrap();
        assert!(!strong.weak_coupling_ok());
        let fast_reset = FridgeParams::new(1.0, 2.0, 1e-3, [0.5, 1e-4, 1e-4], 1.0, 2.0, 10.0);
        assert!(!fast_reset.unwrap().weak_coupling_ok());
    }

    #[test]
    fn json_round_trip_exact_keys() {
        let p = canonical();
        let text = serde_json::to_string(&p).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = value.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            vec!["E1", "E3", "Tc", "Th", "Tr", "g", "p1", "p2", "p3"]
        );
        let back: FridgeParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_rejects_unknown_keys_and_bad_values() {
        let bad_key = r#"{"E1":1,"E3":2,"g":1e-3,"p1":1e-4,"p2":1e-4,"p3":1e-4,
                          "Tc":1,"Tr":2,"Th":10,"E2":3}"#;
        assert!(serde_json::from_str::<FridgeParams>(bad_key).is_err());
        let bad_order = r#"{"E1":1,"E3":2,"g":1e-3,"p1":1e-4,"p2":1e-4,"p3":1e-4,
                            "Tc":5,"Tr":2,"Th":10}"#;
        assert!(serde_json::from_str::<FridgeParams>(bad_order).is_err());
        let zero_rate = r#"{"E1":1,"E3":2,"g":1e-3,"p1":1e-4,"p2":0.0,"p3":1e-4,
                            "Tc":1,"Tr":2,"Th":10}"#;
        assert!(serde_json::from_str::<FridgeParams>(zero_rate).is_err());
    }

    #[test]
    fn thermal_product_is_valid() {
        let rho = thermal_product(&canonical()).unwrap();
        assert_eq!(rho.dim(), 8);
        assert_eq!(rho.op().max_offdiagonal_abs(), 0.0);
    }
}
