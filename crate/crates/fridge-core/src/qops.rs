//! Dense operator algebra on one-, two-, and three-qubit Hilbert spaces.
//!
//! Basis convention, used everywhere in this crate: a computational basis
//! state of the qubits with labels `l1 < l2 < ... < lk` is indexed by
//! `b = sum_i q_{l_i} * 2^(k-1-i)` with `|0>` the ground state, i.e. the
//! lowest label is the most significant bit. For the full register this is
//! `|q1 q2 q3> <-> b = 4*q1 + 2*q2 + q3`, so `|010>` has index 2 and `|101>`
//! has index 5.
//!
//! All operators are stored dense; dimensions never exceed 8 here (the
//! 64-dimensional superoperator lives in [`crate::dynamics`]).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FridgeError, Result};

/// Hermiticity tolerance for density-matrix validation.
pub const HERM_TOL: f64 = 1e-12;
/// Unit-trace tolerance for density-matrix validation.
pub const TRACE_TOL: f64 = 1e-12;
/// Positivity floor for density-matrix validation (eigenvalues may dip this
/// far below zero before a state is rejected).
pub const PSD_TOL: f64 = 1e-10;

/// Dense complex matrix used throughout.
pub type CMatrix = DMatrix<Complex64>;

/// Ordered subset of the qubit labels {1, 2, 3}, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct QubitSet(u8);

impl QubitSet {
    /// All three qubits.
    pub const ALL: QubitSet = QubitSet(0b111);

    /// Builds a set from labels; rejects labels outside {1,2,3} and duplicates.
    pub fn new(labels: &[u8]) -> Result<Self> {
        let mut bits = 0u8;
        for &l in labels {
            if !(1..=3).contains(&l) {
                return Err(FridgeError::InvalidQubit { label: l });
            }
            let bit = 1u8 << (l - 1);
            if bits & bit != 0 {
                return Err(FridgeError::LabelCollision { overlap: vec![l] });
            }
            bits |= bit;
        }
        Ok(QubitSet(bits))
    }

    /// Single-qubit set.
    pub fn single(label: u8) -> Result<Self> {
        Self::new(&[label])
    }

    pub fn contains(self, label: u8) -> bool {
        (1..=3).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: QubitSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Labels in ascending order.
    pub fn labels(self) -> Vec<u8> {
        (1..=3).filter(|&l| self.contains(l)).collect()
    }

    /// Hilbert-space dimension 2^len.
    pub fn dim(self) -> usize {
        1 << self.len()
    }

    fn difference(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 & !other.0)
    }

    fn intersection(self, other: QubitSet) -> QubitSet {
        QubitSet(self.0 & other.0)
    }
}

impl std::fmt::Display for QubitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Dense operator on the Hilbert space of a set of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator {
    qubits: QubitSet,
    mat: CMatrix,
}

impl QOperator {
    /// Wraps a matrix, checking that it is square with dimension `2^#labels`.
    pub fn from_matrix(qubits: QubitSet, mat: CMatrix) -> Result<Self> {
        let expected = qubits.dim();
        if mat.nrows() != expected || mat.ncols() != expected {
            return Err(FridgeError::DimensionMismatch {
                rows: mat.nrows(),
                cols: mat.ncols(),
                expected,
            });
        }
        Ok(QOperator { qubits, mat })
    }

    pub fn zeros(qubits: QubitSet) -> Self {
        let d = qubits.dim();
        QOperator {
            qubits,
            mat: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(qubits: QubitSet) -> Self {
        let d = qubits.dim();
        QOperator {
            qubits,
            mat: CMatrix::identity(d, d),
        }
    }

    /// Diagonal operator from real entries in basis order.
    pub fn from_diagonal(qubits: QubitSet, diag: &[f64]) -> Result<Self> {
        if diag.len() != qubits.dim() {
            return Err(FridgeError::DimensionMismatch {
                rows: diag.len(),
                cols: diag.len(),
                expected: qubits.dim(),
            });
        }
        let mut mat = CMatrix::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            mat[(i, i)] = Complex64::new(v, 0.0);
        }
        Ok(QOperator { qubits, mat })
    }

    pub fn qubits(&self) -> QubitSet {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> QOperator {
        QOperator {
            qubits: self.qubits,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> QOperator {
        QOperator {
            qubits: self.qubits,
            mat: &self.mat * c,
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude among strictly off-diagonal entries.
    pub fn max_offdiagonal_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if r != c {
                    m = m.max(self.mat[(r, c)].norm());
                }
            }
        }
        m
    }

    /// max |A - A^dag| over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..self.dim() {
            for c in r..self.dim() {
                m = m.max((self.mat[(r, c)] - self.mat[(c, r)].conj()).norm());
            }
        }
        m
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()).scale(0.5);
        let mut eig: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    fn assert_same_labels(&self, other: &QOperator, what: &str) {
        assert!(
            self.qubits == other.qubits,
            "{what} requires identical qubit sets, got {} vs {}",
            self.qubits,
            other.qubits
        );
    }
}

// Entry-wise arithmetic panics on mismatched qubit sets, like nalgebra does
// on shape mismatch; the fallible spec-level operations validate first.
impl std::ops::Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        self.assert_same_labels(rhs, "operator addition");
        QOperator {
            qubits: self.qubits,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        self.assert_same_labels(rhs, "operator subtraction");
        QOperator {
            qubits: self.qubits,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl std::ops::Mul for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        self.assert_same_labels(rhs, "operator product");
        QOperator {
            qubits: self.qubits,
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl std::ops::Mul<f64> for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: f64) -> QOperator {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

fn bit_at(index: usize, pos: usize, nbits: usize) -> usize {
    (index >> (nbits - 1 - pos)) & 1
}

/// Kronecker product with canonical label ordering.
///
/// The factors may act on any disjoint label sets; the result is re-indexed
/// so that merged labels are ascending with the lowest label as the most
/// significant bit. In particular `tensor(a on {2}, b on {1,3})` interleaves
/// correctly.
pub fn tensor(a: &QOperator, b: &QOperator) -> Result<QOperator> {
    let overlap = a.qubits.intersection(b.qubits);
    if !overlap.is_empty() {
        return Err(FridgeError::LabelCollision {
            overlap: overlap.labels(),
        });
    }
    let merged = QubitSet(a.qubits.0 | b.qubits.0);
    let labels = merged.labels();
    let k = labels.len();
    let a_labels = a.qubits.labels();
    let b_labels = b.qubits.labels();
    let d = merged.dim();
    let mut mat = CMatrix::zeros(d, d);
    for row in 0..d {
        for col in 0..d {
            let sub_index = |labs: &[u8], idx: usize| -> usize {
                labs.iter().fold(0usize, |acc, &l| {
                    let pos = labels.iter().position(|&x| x == l).unwrap();
                    (acc << 1) | bit_at(idx, pos, k)
                })
            };
            let (ra, ca) = (sub_index(&a_labels, row), sub_index(&a_labels, col));
            let (rb, cb) = (sub_index(&b_labels, row), sub_index(&b_labels, col));
            mat[(row, col)] = a.mat[(ra, ca)] * b.mat[(rb, cb)];
        }
    }
    Ok(QOperator {
        qubits: merged,
        mat,
    })
}

/// Trace over the qubits not in `keep`. Preserves the total trace.
pub fn partial_trace(a: &QOperator, keep: QubitSet) -> Result<QOperator> {
    if keep.is_empty() || !keep.is_subset_of(a.qubits) {
        return Err(FridgeError::BadKeepSet {
            keep: keep.to_string(),
            labels: a.qubits.to_string(),
        });
    }
    let drop = a.qubits.difference(keep);
    if drop.is_empty() {
        return Ok(a.clone());
    }
    let full_labels = a.qubits.labels();
    let keep_labels = keep.labels();
    let drop_labels = drop.labels();
    let d_out = keep.dim();
    let mut mat = CMatrix::zeros(d_out, d_out);
    for row in 0..d_out {
        for col in 0..d_out {
            let mut acc = Complex64::new(0.0, 0.0);
            for assign in 0..drop.dim() {
                let full_index = |kept_idx: usize| -> usize {
                    full_labels.iter().fold(0usize, |acc2, &l| {
                        let bit = if let Some(p) = keep_labels.iter().position(|&x| x == l) {
                            bit_at(kept_idx, p, keep_labels.len())
                        } else {
                            let p = drop_labels.iter().position(|&x| x == l).unwrap();
                            bit_at(assign, p, drop_labels.len())
                        };
                        (acc2 << 1) | bit
                    })
                };
                acc += a.mat[(full_index(row), full_index(col))];
            }
            mat[(row, col)] = acc;
        }
    }
    Ok(QOperator { qubits: keep, mat })
}

/// `a b - b a`; anti-Hermitian whenever both inputs are Hermitian.
pub fn commutator(a: &QOperator, b: &QOperator) -> Result<QOperator> {
    if a.qubits != b.qubits {
        return Err(FridgeError::LabelMismatch {
            left: a.qubits.to_string(),
            right: b.qubits.to_string(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Hermitian, unit-trace, positive-semidefinite operator (each within the
/// module tolerances, checked at construction by [`validate_density`]).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: QOperator,
}

impl DensityMatrix {
    pub fn op(&self) -> &QOperator {
        &self.op
    }

    pub fn into_operator(self) -> QOperator {
        self.op
    }

    pub fn qubits(&self) -> QubitSet {
        self.op.qubits()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.op.entry(row, col)
    }

    /// Diagonal populations in basis order (real parts).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|b| self.op.entry(b, b).re).collect()
    }
}

/// Checks the density-matrix invariants and wraps the operator.
///
/// Violations report the offending magnitude: Hermiticity at [`HERM_TOL`],
/// unit trace at [`TRACE_TOL`], positivity at [`PSD_TOL`].
pub fn validate_density(op: QOperator) -> Result<DensityMatrix> {
    let herm = op.hermiticity_error();
    if herm > HERM_TOL {
        return Err(FridgeError::NotHermitian { deviation: herm });
    }
    let tr = op.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(FridgeError::TraceNotOne { trace: tr.re });
    }
    let min_eig = op
        .hermitian_eigenvalues()
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    if min_eig.is_nan() || min_eig < -PSD_TOL {
        return Err(FridgeError::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    Ok(DensityMatrix { op })
}

/// Trace distance `(1/2) sum |eig(a - b)|`; zero iff the states coincide.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.qubits() != b.qubits() {
        return Err(FridgeError::LabelMismatch {
            left: a.qubits().to_string(),
            right: b.qubits().to_string(),
        });
    }
    let diff = a.op() - b.op();
    Ok(diff.hermitian_eigenvalues().iter().map(|e| e.abs()).sum::<f64>() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_op(labels: &[u8], d: &[f64]) -> QOperator {
        QOperator::from_diagonal(QubitSet::new(labels).unwrap(), d).unwrap()
    }

    /// Index-summation partial trace, kept independent of the production
    /// implementation: works directly on 8x8 matrices for keep = {single}.
    fn ptrace_oracle_single(m: &CMatrix, keep: u8) -> CMatrix {
        let mut out = CMatrix::zeros(2, 2);
        for r in 0..2usize {
            for col in 0..2usize {
                let mut acc = Complex64::new(0.0, 0.0);
                for rest in 0..4usize {
                    let place = |kept_bit: usize| -> usize {
                        // insert kept_bit at the position of `keep` in (q1,q2,q3)
                        let others = [rest >> 1, rest & 1];
                        match keep {
                            1 => (kept_bit << 2) | (others[0] << 1) | others[1],
                            2 => (others[0] << 2) | (kept_bit << 1) | others[1],
                            _ => (others[0] << 2) | (others[1] << 1) | kept_bit,
                        }
                    };
                    acc += m[(place(r), place(col))];
                }
                out[(r, col)] = acc;
            }
        }
        out
    }

    #[test]
    fn tensor_identities() {
        let i1 = QOperator::identity(QubitSet::single(1).unwrap());
        let i2 = QOperator::identity(QubitSet::single(2).unwrap());
        let t = tensor(&i1, &i2).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.matrix(), QOperator::identity(t.qubits()).matrix());
    }

    #[test]
    fn tensor_diagonal_product() {
        let (r, s) = (0.7, 0.4);
        let a = diag_op(&[1], &[r, 1.0 - r]);
        let b = diag_op(&[2], &[s, 1.0 - s]);
        let t = tensor(&a, &b).unwrap();
        let expect = [r * s, r * (1.0 - s), (1.0 - r) * s, (1.0 - r) * (1.0 - s)];
        for (i, &e) in expect.iter().enumerate() {
            assert!((t.entry(i, i) - c(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_respects_basis_ordering() {
        let z = diag_op(&[1], &[1.0, -1.0]);
        let i2 = QOperator::identity(QubitSet::single(2).unwrap());
        let t = tensor(&z, &i2).unwrap();
        let expect = [1.0, 1.0, -1.0, -1.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(t.entry(i, i), c(e, 0.0));
        }
    }

    #[test]
    fn tensor_interleaves_middle_qubit() {
        // a on {2}, b on {1,3}: entry at |q1 q2 q3> must be a[q2]*b[q1 q3].
        let a = diag_op(&[2], &[2.0, 3.0]);
        let b = diag_op(&[1, 3], &[5.0, 7.0, 11.0, 13.0]);
        let t = tensor(&a, &b).unwrap();
        for full in 0..8usize {
            let (q1, q2, q3) = (full >> 2 & 1, full >> 1 & 1, full & 1);
            let expect = [2.0, 3.0][q2] * [5.0, 7.0, 11.0, 13.0][(q1 << 1) | q3];
            assert_eq!(t.entry(full, full), c(expect, 0.0));
        }
    }

    #[test]
    fn tensor_rejects_label_collision() {
        let a = QOperator::identity(QubitSet::new(&[1, 2]).unwrap());
        let b = QOperator::identity(QubitSet::single(2).unwrap());
        match tensor(&a, &b) {
            Err(FridgeError::LabelCollision { overlap }) => assert_eq!(overlap, vec![2]),
            other => panic!("expected label collision, got {other:?}"),
        }
    }

    #[test]
    fn partial_trace_of_product_state_factorizes() {
        let t1 = diag_op(&[1], &[0.9, 0.1]);
        let t2 = diag_op(&[2], &[0.6, 0.4]);
        let t3 = diag_op(&[3], &[0.3, 0.7]);
        let prod = tensor(&tensor(&t1, &t2).unwrap(), &t3).unwrap();
        let red = partial_trace(&prod, QubitSet::single(1).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((red.entry(i, j) - t1.entry(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_matches_index_summation_oracle() {
        // Z_123 = |010><010| - |101><101|
        let mut z = CMatrix::zeros(8, 8);
        z[(2, 2)] = c(1.0, 0.0);
        z[(5, 5)] = c(-1.0, 0.0);
        let z123 = QOperator::from_matrix(QubitSet::ALL, z.clone()).unwrap();
        for (keep, expect) in [(1u8, [1.0, -1.0]), (2, [-1.0, 1.0]), (3, [1.0, -1.0])] {
            let red = partial_trace(&z123, QubitSet::single(keep).unwrap()).unwrap();
            let oracle = ptrace_oracle_single(&z, keep);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(red.entry(i, j), oracle[(i, j)]);
                }
            }
            assert_eq!(red.entry(0, 0), c(expect[0], 0.0));
            assert_eq!(red.entry(1, 1), c(expect[1], 0.0));
        }
    }

    #[test]
    fn partial_trace_rejects_empty_or_foreign_keep() {
        let op = QOperator::identity(QubitSet::new(&[1, 2]).unwrap());
        assert!(matches!(
            partial_trace(&op, QubitSet::new(&[]).unwrap()),
            Err(FridgeError::BadKeepSet { .. })
        ));
        assert!(matches!(
            partial_trace(&op, QubitSet::single(3).unwrap()),
            Err(FridgeError::BadKeepSet { .. })
        ));
    }

    #[test]
    fn commutator_of_diagonals_vanishes() {
        let a = diag_op(&[1, 2], &[1.0, 2.0, 3.0, 4.0]);
        let b = diag_op(&[1, 2], &[5.0, 6.0, 7.0, 8.0]);
        assert_eq!(commutator(&a, &b).unwrap().max_abs(), 0.0);
        assert_eq!(commutator(&a, &a).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn commutator_rejects_mismatched_labels() {
        let a = QOperator::identity(QubitSet::single(1).unwrap());
        let b = QOperator::identity(QubitSet::single(2).unwrap());
        assert!(matches!(
            commutator(&a, &b),
            Err(FridgeError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn trace_distance_cases() {
        let rho = validate_density(diag_op(&[1], &[0.7, 0.3])).unwrap();
        let sig = validate_density(diag_op(&[1], &[0.5, 0.5])).unwrap();
        let ground = validate_density(diag_op(&[1], &[1.0, 0.0])).unwrap();
        let excited = validate_density(diag_op(&[1], &[0.0, 1.0])).unwrap();
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
        assert!((trace_distance(&ground, &excited).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&rho, &sig).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn validate_density_accepts_maximally_mixed() {
        let op = &QOperator::identity(QubitSet::ALL) * (1.0 / 8.0);
        let dm = validate_density(op).unwrap();
        assert_eq!(dm.dim(), 8);
    }

    #[test]
    fn validate_density_reports_violations() {
        match validate_density(diag_op(&[1], &[1.5, -0.5])) {
            Err(FridgeError::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-12)
            }
            other => panic!("expected positivity error, got {other:?}"),
        }
        match validate_density(diag_op(&[1], &[0.6, 0.3])) {
            Err(FridgeError::TraceNotOne { trace }) => assert!((trace - 0.9).abs() < 1e-12),
            other => panic!("expected trace error, got {other:?}"),
        }
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        let op = QOperator::from_matrix(QubitSet::single(1).unwrap(), m).unwrap();
        assert!(matches!(
            validate_density(op),
            Err(FridgeError::NotHermitian { .. })
        ));
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_y() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        let op = QOperator::from_matrix(QubitSet::single(1).unwrap(), m).unwrap();
        let eig = op.hermitian_eigenvalues();
        assert!((eig[0] + 1.0).abs() < 1e-14 && (eig[1] - 1.0).abs() < 1e-14);
    }
}
