//! Time-domain master-equation evolution and the independent Liouvillian
//! null-space route to the stationary state.
//!
//! The generator is
//!
//! ```text
//! L(rho) = -i [H0 + Hint, rho] + sum_i p_i ( tau_i (x) Tr_i rho - rho )
//! ```
//!
//! Superoperators use the column-stacking convention: an 8x8 matrix is
//! flattened column-major, so the basis matrix `E_{r,c}` (1 at row `r`,
//! column `c`) stacks to index `8*c + r`, and column `j = 8*c + r` of the
//! 64x64 Liouvillian is the stacked image of `E_{r,c}` under the generator.
//!
//! Time evolution is fixed-step classical fourth-order Runge-Kutta with step
//! `h <= 0.05 / max(E1+E3, q, g)`; a fixed step keeps trajectories bit-stable
//! run to run, which the CSV determinism contract relies on.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FridgeError, Result};
use crate::model::{thermal_populations, FridgeParams};
use crate::qops::{validate_density, CMatrix, DensityMatrix, QOperator, QubitSet};

/// Per-step trace drift allowed before integration is declared divergent.
pub const STEP_TRACE_TOL: f64 = 1e-12;
/// Kernel one-dimensionality threshold: the second-smallest singular value
/// must stay above this fraction of the largest.
pub const KERNEL_GAP_THRESHOLD: f64 = 1e-8;
/// Hard cap on stored samples per trajectory.
pub const MAX_SAMPLES: usize = 1_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense 8x8 state in column-major order: entry `(r, c)` lives at `8*c + r`.
type Mat8 = [Complex64; 64];

#[inline]
fn at(r: usize, c: usize) -> usize {
    c * 8 + r
}

fn mat8_from(op: &QOperator) -> Mat8 {
    let mut out = [ZERO; 64];
    out.copy_from_slice(op.matrix().as_slice());
    out
}

fn mat8_to_operator(m: &Mat8) -> QOperator {
    let mat = CMatrix::from_column_slice(8, 8, m);
    QOperator::from_matrix(QubitSet::ALL, mat).expect("8x8 on three qubits")
}

fn trace8(m: &Mat8) -> Complex64 {
    (0..8).map(|d| m[at(d, d)]).sum()
}

/// The reset-model generator with everything precomputed for tight loops.
#[derive(Clone, Copy, Debug)]
struct Generator {
    hdiag: [f64; 8],
    g: f64,
    p: [f64; 3],
    /// `[qubit][ground, excited]` bath populations.
    tau: [[f64; 2]; 3],
}

impl Generator {
    fn with_rates(params: &FridgeParams, g: f64, p: [f64; 3]) -> Self {
        let (e1, e2, e3) = (params.e1(), params.e2(), params.e3());
        let mut hdiag = [0.0f64; 8];
        for (b, h) in hdiag.iter_mut().enumerate() {
            let (q1, q2, q3) = (b >> 2 & 1, b >> 1 & 1, b & 1);
            *h = e1 * q1 as f64 + e2 * q2 as f64 + e3 * q3 as f64;
        }
        let mut tau = [[0.0; 2]; 3];
        for (i, slot) in tau.iter_mut().enumerate() {
            let t = thermal_populations(
                params.energy(i as u8 + 1).expect("label in range"),
                params.temperature(i as u8 + 1).expect("label in range"),
            )
            .expect("valid bath");
            *slot = [t.r(), t.r_bar()];
        }
        Generator { hdiag, g, p, tau }
    }

    fn new(params: &FridgeParams) -> Self {
        Self::with_rates(params, params.g(), params.rates())
    }

    /// `out = L(rho)`. Linear in `rho`; works on arbitrary complex matrices.
    #[inline]
    fn apply(&self, rho: &Mat8, out: &mut Mat8) {
        let q = self.p[0] + self.p[1] + self.p[2];
        // free part -i (h_r - h_c) rho_rc, fused with the total decay -q rho.
        for c in 0..8 {
            for r in 0..8 {
                let z = rho[at(r, c)];
                let hd = self.hdiag[r] - self.hdiag[c];
                out[at(r, c)] =
                    Complex64::new(hd * z.im - q * z.re, -hd * z.re - q * z.im);
            }
        }
        // interaction -i g ([S, rho]) with S = |010><101| + |101><010|.
        if self.g != 0.0 {
            let g = self.g;
            for c in 0..8 {
                let a = rho[at(5, c)];
                let b = rho[at(2, c)];
                out[at(2, c)] += Complex64::new(g * a.im, -g * a.re);
                out[at(5, c)] += Complex64::new(g * b.im, -g * b.re);
            }
            for r in 0..8 {
                let a = rho[at(r, 5)];
                let b = rho[at(r, 2)];
                out[at(r, 2)] += Complex64::new(-g * a.im, g * a.re);
                out[at(r, 5)] += Complex64::new(-g * b.im, g * b.re);
            }
        }
        // reset refills + p_i tau_i (x) Tr_i rho (the -p_i rho is in -q rho).
        for i in 0..3 {
            let mask = 4usize >> i;
            let refill_g = self.p[i] * self.tau[i][0];
            let refill_e = self.p[i] * self.tau[i][1];
            for c in 0..8 {
                if c & mask != 0 {
                    continue;
                }
                for r in 0..8 {
                    if r & mask != 0 {
                        continue;
                    }
                    let s = rho[at(r, c)] + rho[at(r | mask, c | mask)];
                    out[at(r, c)] += s * refill_g;
                    out[at(r | mask, c | mask)] += s * refill_e;
                }
            }
        }
    }
}

/// Right-hand side of the master equation at `rho` (dimension 8).
///
/// Traceless and Hermitian (to rounding) for Hermitian input.
pub fn master_rhs(rho: &DensityMatrix, params: &FridgeParams) -> QOperator {
    assert_eq!(rho.dim(), 8, "master_rhs acts on the full three-qubit state");
    let gen = Generator::new(params);
    let input = mat8_from(rho.op());
    let mut out = [ZERO; 64];
    gen.apply(&input, &mut out);
    mat8_to_operator(&out)
}

struct StepBufs {
    k1: Mat8,
    k2: Mat8,
    k3: Mat8,
    k4: Mat8,
    tmp: Mat8,
}

impl StepBufs {
    fn new() -> Self {
        StepBufs {
            k1: [ZERO; 64],
            k2: [ZERO; 64],
            k3: [ZERO; 64],
            k4: [ZERO; 64],
            tmp: [ZERO; 64],
        }
    }
}

#[inline]
fn offset_state(base: &Mat8, factor: f64, dir: &Mat8, out: &mut Mat8) {
    for ((slot, &b), &d) in out.iter_mut().zip(base).zip(dir) {
        *slot = b + d * factor;
    }
}

#[inline]
fn rk4_step(gen: &Generator, rho: &mut Mat8, h: f64, bufs: &mut StepBufs) {
    gen.apply(rho, &mut bufs.k1);
    offset_state(rho, h * 0.5, &bufs.k1, &mut bufs.tmp);
    gen.apply(&bufs.tmp, &mut bufs.k2);
    offset_state(rho, h * 0.5, &bufs.k2, &mut bufs.tmp);
    gen.apply(&bufs.tmp, &mut bufs.k3);
    offset_state(rho, h, &bufs.k3, &mut bufs.tmp);
    gen.apply(&bufs.tmp, &mut bufs.k4);
    let w = h / 6.0;
    for (i, slot) in rho.iter_mut().enumerate() {
        let incr = bufs.k1[i] + (bufs.k2[i] + bufs.k3[i]) * 2.0 + bufs.k4[i];
        *slot += incr * w;
    }
}

/// Sampled master-equation trajectory.
///
/// Every stored state has passed [`validate_density`]; times strictly
/// increase from zero.
#[derive(Clone, Debug)]
pub struct Trajectory {
    params: FridgeParams,
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn params(&self) -> &FridgeParams {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds at least t = 0")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t = 0")
    }

    /// Writes the trajectory as CSV with header
    /// `t,p000,p001,p010,p011,p100,p101,p110,p111,re_c,im_c`: the eight
    /// diagonal populations in basis order plus the `(|010>,|101>)` coherence,
    /// 12 significant digits each.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,p000,p001,p010,p011,p100,p101,p110,p111,re_c,im_c")?;
        for (t, state) in self.times.iter().zip(&self.states) {
            write!(w, "{}", sig12(*t))?;
            for b in 0..8 {
                write!(w, ",{}", sig12(state.entry(b, b).re))?;
            }
            let coh = state.entry(2, 5);
            writeln!(w, ",{},{}", sig12(coh.re), sig12(coh.im))?;
        }
        Ok(())
    }
}

/// 12-significant-digit scientific form used by all CSV output.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn default_step(params: &FridgeParams) -> f64 {
    0.05 / params.e2().max(params.total_rate()).max(params.g())
}

/// Integrates the master equation from `rho0` to `t_end`, sampling every
/// `sample_every` time units (plus the exact endpoint), with the default
/// stability step.
///
/// Each step's trace change is checked against [`STEP_TRACE_TOL`] before the
/// trace is projected back to one; every sampled state is re-validated.
pub fn evolve(
    rho0: &DensityMatrix,
    params: &FridgeParams,
    t_end: f64,
    sample_every: f64,
) -> Result<Trajectory> {
    evolve_with_step(rho0, params, t_end, sample_every, default_step(params))
}

/// [`evolve`] with an explicit step override, for step-refinement studies.
/// The step is clamped to the stability rule.
pub fn evolve_with_step(
    rho0: &DensityMatrix,
    params: &FridgeParams,
    t_end: f64,
    sample_every: f64,
    step: f64,
) -> Result<Trajectory> {
    if rho0.dim() != 8 {
        return Err(FridgeError::InvalidArgument {
            reason: format!("evolution needs the full register, got dimension {}", rho0.dim()),
        });
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(FridgeError::InvalidArgument {
            reason: format!("t_end must be positive and finite, got {t_end}"),
        });
    }
    if !(sample_every.is_finite() && sample_every > 0.0) {
        return Err(FridgeError::InvalidArgument {
            reason: format!("sample_every must be positive and finite, got {sample_every}"),
        });
    }
    if t_end / sample_every > MAX_SAMPLES as f64 {
        return Err(FridgeError::InvalidArgument {
            reason: format!(
                "t_end / sample_every = {:.3e} exceeds the {} stored-sample cap",
                t_end / sample_every,
                MAX_SAMPLES
            ),
        });
    }
    let h_max = step.min(default_step(params));
    if !(h_max.is_finite() && h_max > 0.0) {
        return Err(FridgeError::InvalidArgument {
            reason: format!("step must be positive, got {step}"),
        });
    }

    let mut boundaries = Vec::new();
    let mut k = 1usize;
    loop {
        let t = k as f64 * sample_every;
        if t < t_end * (1.0 - 1e-12) {
            boundaries.push(t);
            k += 1;
        } else {
            break;
        }
    }
    boundaries.push(t_end);

    let gen = Generator::new(params);
    let mut bufs = StepBufs::new();
    let mut current = mat8_from(rho0.op());
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut t_prev = 0.0;

    for &t_next in &boundaries {
        let span = t_next - t_prev;
        let n_steps = (span / h_max).ceil().max(1.0) as usize;
        let h = span / n_steps as f64;
        for s in 0..n_steps {
            let before = trace8(&current);
            rk4_step(&gen, &mut current, h, &mut bufs);
            let after = trace8(&current);
            let drift = (after - before).norm();
            if !drift.is_finite() || drift > STEP_TRACE_TOL {
                return Err(FridgeError::IntegrationDiverged {
                    time: t_prev + (s + 1) as f64 * h,
                    reason: format!("per-step trace drift {drift:.3e}"),
                });
            }
            // The exact flow conserves the trace identically; project the
            // rounding-level drift away so it cannot random-walk out of the
            // density tolerance over 1e7-step horizons.
            let rescale = 1.0 / after.re;
            for z in current.iter_mut() {
                *z *= rescale;
            }
        }
        let state = validate_density(mat8_to_operator(&current)).map_err(|e| {
            FridgeError::IntegrationDiverged {
                time: t_next,
                reason: e.to_string(),
            }
        })?;
        times.push(t_next);
        states.push(state);
        t_prev = t_next;
    }

    Ok(Trajectory {
        params: *params,
        times,
        states,
    })
}

/// Matrix form of the generator on column-stacked states (64x64).
#[derive(Clone, Debug)]
pub struct Superoperator {
    mat: DMatrix<Complex64>,
}

impl Superoperator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies the superoperator: `unstack(M stack(op))`.
    pub fn apply(&self, op: &QOperator) -> Result<QOperator> {
        if op.dim() != 8 {
            return Err(FridgeError::DimensionMismatch {
                rows: op.dim(),
                cols: op.dim(),
                expected: 8,
            });
        }
        let v = stack_state(op);
        unstack_state(&(&self.mat * v))
    }
}

/// Column-major stacking of an 8x8 operator into a 64-vector.
pub fn stack_state(op: &QOperator) -> DVector<Complex64> {
    DVector::from_column_slice(op.matrix().as_slice())
}

/// Inverse of [`stack_state`].
pub fn unstack_state(v: &DVector<Complex64>) -> Result<QOperator> {
    if v.len() != 64 {
        return Err(FridgeError::DimensionMismatch {
            rows: v.len(),
            cols: 1,
            expected: 64,
        });
    }
    QOperator::from_matrix(QubitSet::ALL, CMatrix::from_column_slice(8, 8, v.as_slice()))
}

/// Exact matrix of the generator, built column by column from the images of
/// the stacked basis matrices.
pub fn liouvillian_matrix(params: &FridgeParams) -> Superoperator {
    Superoperator {
        mat: liouvillian_of(&Generator::new(params)),
    }
}

fn liouvillian_of(gen: &Generator) -> DMatrix<Complex64> {
    let mut mat = DMatrix::zeros(64, 64);
    let mut basis = [ZERO; 64];
    let mut image = [ZERO; 64];
    for j in 0..64 {
        basis[j] = Complex64::new(1.0, 0.0);
        gen.apply(&basis, &mut image);
        basis[j] = ZERO;
        for (i, z) in image.iter().enumerate() {
            mat[(i, j)] = *z;
        }
    }
    mat
}

/// Diagnostics of the stationary-kernel solve.
#[derive(Clone, Debug)]
pub struct KernelSolve {
    /// The stationary state (Hermitized, unit trace, validated).
    pub state: DensityMatrix,
    /// Largest singular value of the (rate-rescaled) Liouvillian.
    pub sigma_max: f64,
    /// Second-smallest singular value.
    pub sigma_second: f64,
    /// Smallest singular value (the numerical kernel direction).
    pub sigma_min: f64,
    /// `sigma_second / sigma_max`; the solve errors below
    /// [`KERNEL_GAP_THRESHOLD`].
    pub gap_ratio: f64,
    /// `sigma_second / sigma_min` (clamped when the smallest reads zero).
    pub kernel_separation: f64,
    /// `||L stack(state)||_2 / ||L||_F` for the solved operator.
    pub residual_ratio: f64,
}

/// Stationary state via the numerical kernel of the Liouvillian, with
/// diagnostics.
///
/// The reset rates and coupling are internally rescaled by a common factor
/// `c = 0.1 (E1+E2+E3) / max(q, g)` before solving: the free Hamiltonian
/// annihilates the populated sector (degeneracy of `|010>` and `|101>`), and
/// on that sector the rest of the generator scales uniformly with `c`, so the
/// kernel element is unchanged while the solve becomes far better
/// conditioned than at bare weak-coupling rates. The smallest-singular-value
/// direction from the SVD is then polished by one bordered LU solve
/// (trace row in place of one redundant population row) with two rounds of
/// iterative refinement.
pub fn solve_steady_kernel(params: &FridgeParams) -> Result<KernelSolve> {
    let q = params.total_rate();
    let g = params.g();
    let scale = 0.1 * (params.e1() + params.e2() + params.e3()) / q.max(g);
    let p = params.rates();
    let gen = Generator::with_rates(
        params,
        g * scale,
        [p[0] * scale, p[1] * scale, p[2] * scale],
    );
    let l = liouvillian_of(&gen);

    let svd = l.clone().svd(false, true);
    let s = &svd.singular_values;
    let (sigma_max, sigma_second, sigma_min) = (s[0], s[62], s[63]);
    let gap_ratio = sigma_second / sigma_max;
    if gap_ratio < KERNEL_GAP_THRESHOLD {
        return Err(FridgeError::DegenerateSteadyState { ratio: gap_ratio });
    }
    let v_t = svd.v_t.as_ref().expect("V^H requested");
    let mut x: DVector<Complex64> = v_t.row(63).adjoint();

    // Bordered polish: replace the redundant (0,0)-population row by the
    // trace functional and refine. Componentwise-small residuals in the slow
    // rows is what pushes the kernel direction to the rounding floor.
    let mut bordered = l.clone();
    for j in 0..64 {
        bordered[(0, j)] = ZERO;
    }
    for d in 0..8 {
        bordered[(0, at(d, d))] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = DVector::from_element(64, ZERO);
    rhs[0] = Complex64::new(1.0, 0.0);
    let lu = bordered.clone().lu();
    if let Some(mut sol) = lu.solve(&rhs) {
        for _ in 0..2 {
            let residual = &rhs - &bordered * &sol;
            if let Some(corr) = lu.solve(&residual) {
                sol += corr;
            }
        }
        x = sol;
    }

    let op = unstack_state(&x)?;
    let herm = (op.matrix() + op.matrix().adjoint()).scale(0.5);
    let tr = herm.trace();
    let normalized = herm.map(|z| z / tr);
    let residual_vec = &l * DVector::from_column_slice(normalized.as_slice());
    let l_norm = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let residual_ratio = residual_vec.norm() / l_norm;
    let state = validate_density(QOperator::from_matrix(QubitSet::ALL, normalized)?)?;

    Ok(KernelSolve {
        state,
        sigma_max,
        sigma_second,
        sigma_min,
        gap_ratio,
        kernel_separation: sigma_second / sigma_min.max(1e-300),
        residual_ratio,
    })
}

/// Stationary state via the numerical kernel of the Liouvillian.
pub fn steady_state_numeric(params: &FridgeParams) -> Result<DensityMatrix> {
    solve_steady_kernel(params).map(|k| k.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::thermal_product;
    use crate::qops::trace_distance;
    use crate::steady::steady_state;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn canonical() -> FridgeParams {
        FridgeParams::new(1.0, 2.0, 1e-3, [1e-4, 1e-4, 1e-4], 1.0, 2.0, 10.0).unwrap()
    }

    /// Canonical rates scaled up 100x: identical steady state, 100x faster
    /// relaxation, cheap to integrate in tests.
    fn fast() -> FridgeParams {
        FridgeParams::new(1.0, 2.0, 0.1, [0.01, 0.01, 0.01], 1.0, 2.0, 10.0).unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let raw = CMatrix::from_fn(8, 8, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let psd = &raw * raw.adjoint();
        let tr = psd.trace();
        validate_density(
            QOperator::from_matrix(QubitSet::ALL, psd.map(|z| z / tr)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rhs_vanishes_on_thermal_product_without_coupling() {
        let p = FridgeParams::new(1.0, 2.0, 0.0, [1e-3, 2e-3, 3e-3], 1.0, 2.0, 10.0).unwrap();
        let rho = thermal_product(&p).unwrap();
        assert!(master_rhs(&rho, &p).max_abs() <= 1e-14);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = canonical();
        for _ in 0..5 {
            let rho = random_density(&mut rng);
            let out = master_rhs(&rho, &p);
            assert!(out.trace().norm() <= 1e-13);
            assert!(out.hermiticity_error() <= 1e-13);
        }
    }

    #[test]
    fn rhs_reduces_to_interaction_commutator_at_vanishing_rates() {
        let p = FridgeParams::new_unchecked(1.0, 2.0, 0.5, [0.0; 3], 1.0, 2.0, 10.0);
        let rho = validate_density(
            QOperator::from_diagonal(
                QubitSet::ALL,
                &[0.3, 0.1, 0.2, 0.05, 0.05, 0.15, 0.1, 0.05],
            )
            .unwrap(),
        )
        .unwrap();
        let out = master_rhs(&rho, &p);
        // -i [H_int, rho] on a diagonal state only touches (2,5) and (5,2)
        for r in 0..8 {
            for c in 0..8 {
                let v = out.entry(r, c);
                if (r, c) == (2, 5) || (r, c) == (5, 2) {
                    let expect = Complex64::new(0.0, -0.5) // -i g
                        * (rho.entry(5, 5) - rho.entry(2, 2))
                        * if r == 2 { 1.0 } else { -1.0 };
                    assert!((v - expect).norm() <= 1e-15);
                } else {
                    assert_eq!(v.norm(), 0.0, "entry ({r},{c}) must stay zero");
                }
            }
        }
    }

    #[test]
    fn rhs_annihilates_analytic_steady_state() {
        for params in [canonical(), fast()] {
            let rho = steady_state(&params).unwrap();
            let res = master_rhs(&rho, &params).max_abs();
            assert!(
                res <= 1e-10 * params.total_rate(),
                "residual {res:.3e} exceeds the stationarity budget"
            );
        }
    }

    #[test]
    fn liouvillian_agrees_with_rhs_on_random_states() {
        let params = canonical();
        let l = liouvillian_matrix(&params);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let rho = random_density(&mut rng);
            let via_matrix = l.apply(rho.op()).unwrap();
            let direct = master_rhs(&rho, &params);
            assert!((&via_matrix - &direct).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn liouvillian_annihilates_trace_functional() {
        let l = liouvillian_matrix(&fast());
        // column sums over diagonal row indices = trace of the image of E_rc
        for j in 0..64 {
            let s: Complex64 = (0..8).map(|d| l.matrix()[(at(d, d), j)]).sum();
            assert!(s.norm() <= 1e-12, "column {j} breaks trace preservation");
        }
    }

    #[test]
    fn thermal_product_spans_kernel_without_coupling() {
        let p = FridgeParams::new(1.0, 2.0, 0.0, [1e-3, 2e-3, 3e-3], 1.0, 2.0, 10.0).unwrap();
        let l = liouvillian_matrix(&p);
        let rho = thermal_product(&p).unwrap();
        let image = l.apply(rho.op()).unwrap();
        assert!(image.max_abs() <= 1e-15);
    }

    #[test]
    fn numeric_steady_state_matches_analytic() {
        for params in [
            canonical(),
            fast(),
            FridgeParams::new(0.7, 3.2, 5e-3, [2e-4, 8e-4, 1e-4], 0.9, 1.7, 8.0).unwrap(),
        ] {
            let numeric = steady_state_numeric(&params).unwrap();
            let analytic = steady_state(&params).unwrap();
            let dist = (numeric.op() - analytic.op()).max_abs();
            assert!(dist <= 1e-10, "entry-wise gap {dist:.3e}");
        }
    }

    #[test]
    fn numeric_steady_state_at_equilibrium_is_thermal_product() {
        let p = FridgeParams::new(1.0, 2.0, 1e-3, [1e-4, 2e-4, 3e-4], 2.0, 2.0, 2.0).unwrap();
        let numeric = steady_state_numeric(&p).unwrap();
        let product = thermal_product(&p).unwrap();
        assert!((numeric.op() - product.op()).max_abs() <= 1e-12);
    }

    #[test]
    fn kernel_solve_reports_clean_gap_and_residual() {
        let k = solve_steady_kernel(&canonical()).unwrap();
        assert!(k.gap_ratio >= KERNEL_GAP_THRESHOLD * 10.0);
        assert!(k.kernel_separation >= 1e8);
        assert!(k.residual_ratio <= 1e-11);
    }

    #[test]
    fn kernel_is_invariant_under_rate_rescaling() {
        let base = canonical();
        let reference = steady_state_numeric(&base).unwrap();
        for c in [0.5, 2.0] {
            let scaled = FridgeParams::new(
                base.e1(),
                base.e3(),
                c * base.g(),
                [c * 1e-4, c * 1e-4, c * 1e-4],
                base.tc(),
                base.tr(),
                base.th(),
            )
            .unwrap();
            let state = steady_state_numeric(&scaled).unwrap();
            let gap = (state.op() - reference.op()).max_abs();
            assert!(gap <= 1e-10, "rescale c = {c}: gap {gap:.3e}");
        }
    }

    #[test]
    fn evolve_keeps_steady_state_stationary() {
        let params = fast();
        let rho = steady_state(&params).unwrap();
        let traj = evolve(&rho, &params, 50.0, 10.0).unwrap();
        for state in traj.states() {
            let d = trace_distance(state, &rho).unwrap();
            assert!(d <= 1e-9, "steady state drifted by {d:.3e}");
        }
    }

    #[test]
    fn evolve_converges_to_steady_state() {
        let params = fast();
        let rho0 = thermal_product(&params).unwrap();
        let t_end = 20.0 / params.min_rate();
        let traj = evolve(&rho0, &params, t_end, t_end / 8.0).unwrap();
        let target = steady_state(&params).unwrap();
        let d = trace_distance(traj.final_state(), &target).unwrap();
        assert!(d <= 1e-6, "final trace distance {d:.3e}");
        assert_eq!(traj.final_time(), t_end);
    }

    #[test]
    fn evolve_without_coupling_is_constant_from_product() {
        let p = FridgeParams::new(1.0, 2.0, 0.0, [0.01; 3], 1.0, 2.0, 10.0).unwrap();
        let rho0 = thermal_product(&p).unwrap();
        let traj = evolve(&rho0, &p, 100.0, 25.0).unwrap();
        for state in traj.states() {
            assert!((state.op() - rho0.op()).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn evolve_rejects_bad_arguments() {
        let p = fast();
        let rho0 = thermal_product(&p).unwrap();
        assert!(evolve(&rho0, &p, 0.0, 1.0).is_err());
        assert!(evolve(&rho0, &p, -1.0, 1.0).is_err());
        assert!(evolve(&rho0, &p, 10.0, 0.0).is_err());
        assert!(evolve(&rho0, &p, 1e9, 1e-3).is_err());
        let small = crate::model::thermal_state(1.0, 1.0, 1).unwrap();
        assert!(evolve(&small, &p, 1.0, 0.5).is_err());
    }

    #[test]
    fn evolve_samples_align_with_schedule() {
        let p = fast();
        let rho0 = thermal_product(&p).unwrap();
        let traj = evolve(&rho0, &p, 10.0, 3.0).unwrap();
        assert_eq!(traj.times(), &[0.0, 3.0, 6.0, 9.0, 10.0]);
        let aligned = evolve(&rho0, &p, 9.0, 3.0).unwrap();
        assert_eq!(aligned.times(), &[0.0, 3.0, 6.0, 9.0]);
    }

    #[test]
    fn trajectory_csv_shape_and_determinism() {
        let p = fast();
        let rho0 = thermal_product(&p).unwrap();
        let traj = evolve(&rho0, &p, 5.0, 2.5).unwrap();
        let mut a = Vec::new();
        traj.write_csv(&mut a).unwrap();
        let text = String::from_utf8(a).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "t,p000,p001,p010,p011,p100,p101,p110,p111,re_c,im_c"
        );
        assert_eq!(lines.len(), 1 + traj.len());
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 11);
        }
        let again = evolve(&rho0, &p, 5.0, 2.5).unwrap();
        let mut b = Vec::new();
        again.write_csv(&mut b).unwrap();
        assert_eq!(text.as_bytes(), b.as_slice());
    }
}
