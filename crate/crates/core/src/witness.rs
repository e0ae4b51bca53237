//! Witness-coefficient construction, prepare-and-measure protocol
//! simulation, and see-saw optimization of the separable and classical
//! bounds.
//!
//! A witness is the 16^3 coefficient tensor
//! `w_xyz = sgn(t_zz) Tr(A_x A_z A_x A_z) Tr(B_y B_z B_y B_z)`,
//! tailored to a target state through the diagonal of its correlation
//! tensor. Played against the protocol (senders conjugate the shared state
//! by doubled basis operators, the receiver measures `4 A_z x B_z`), the
//! witness reaches `4^3 sum_z |t_zz|`, while no strategy without shared
//! entanglement has been observed to exceed `4^3`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{conj_sign, conj_sign_b, PauliIndex, Permutation, ProductBasis};
use crate::error::{Error, Result};
use crate::matops::{self, kron, ComplexMatrix};
use crate::states::{random_pure_state, DensityMatrix};
use crate::tol;

/// Conjectured separable bound of every witness in this family; proven to
/// be attainable, and never exceeded in extensive see-saw searches.
pub const Q_SEP: f64 = 64.0;

/// Proven lower bound to the separable maximum (product strategies attain it).
pub const Q_SEP_LOWER: f64 = 64.0;

/// Classical-message bound; coincides with the separable bound.
pub const Q_CLASSICAL: f64 = 64.0;

/// Witness coefficient tensor, indexed 1-based as `(x, y, z)`.
#[derive(Debug, Clone)]
pub struct WitnessCoefficients {
    /// 4096 values in `{-1/16, 0, +1/16}`, laid out x-major.
    values: Vec<f64>,
    permutation: Permutation,
}

impl WitnessCoefficients {
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.values[((x - 1) * 16 + (y - 1)) * 16 + (z - 1)]
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    /// Builds directly from raw values; used by the file loader.
    pub fn from_values(values: Vec<f64>, permutation: Permutation) -> Result<Self> {
        if values.len() != 4096 {
            return Err(Error::ParseError(format!(
                "witness tensor needs 4096 entries, got {}",
                values.len()
            )));
        }
        Ok(Self {
            values,
            permutation,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Witness tailored to a diagonal correlation vector under a permutation:
/// `w_xyz = sgn(diag_t[z]) conj_sign(x, z) conj_sign_B(y, z) / 16`.
pub fn witness_coefficients(diag_t: &[f64; 16], permutation: Permutation) -> WitnessCoefficients {
    let mut values = vec![0.0; 4096];
    let mut a_signs = [[0i8; 16]; 16];
    let mut b_signs = [[0i8; 16]; 16];
    for i in 1..=16 {
        for z in 1..=16 {
            let xi = PauliIndex::from_flat(i).expect("in range");
            let zi = PauliIndex::from_flat(z).expect("in range");
            a_signs[i - 1][z - 1] = conj_sign(xi, zi);
            b_signs[i - 1][z - 1] = conj_sign_b(&permutation, i, z);
        }
    }
    for x in 1..=16 {
        for y in 1..=16 {
            for z in 1..=16 {
                let sgn = match diag_t[z - 1].partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Greater) => 1.0,
                    Some(std::cmp::Ordering::Less) => -1.0,
                    _ => 0.0,
                };
                values[((x - 1) * 16 + (y - 1)) * 16 + (z - 1)] = sgn
                    * (a_signs[x - 1][z - 1] as f64)
                    * (b_signs[y - 1][z - 1] as f64)
                    / 16.0;
            }
        }
    }
    WitnessCoefficients {
        values,
        permutation,
    }
}

/// The canonical witness: identity permutation and all signs positive.
pub fn canonical_coefficients() -> WitnessCoefficients {
    witness_coefficients(&[1.0; 16], Permutation::identity())
}

/// Prepared states and observables for one run of the protocol.
#[derive(Debug, Clone)]
pub struct PMStrategy {
    /// 16 sender-A message states, 4x4.
    pub prep_a: Vec<ComplexMatrix>,
    /// 16 sender-B message states, 4x4.
    pub prep_b: Vec<ComplexMatrix>,
    /// 16 receiver observables, 16x16 with spectrum in [-1, 1].
    pub observables: Vec<ComplexMatrix>,
}

impl PMStrategy {
    pub fn validate(&self) -> Result<()> {
        if self.prep_a.len() != 16 || self.prep_b.len() != 16 || self.observables.len() != 16 {
            return Err(Error::InvalidStrategy(format!(
                "expected 16 preparations per sender and 16 observables, got {} / {} / {}",
                self.prep_a.len(),
                self.prep_b.len(),
                self.observables.len()
            )));
        }
        for (label, states) in [("A", &self.prep_a), ("B", &self.prep_b)] {
            for (i, rho) in states.iter().enumerate() {
                let report = crate::states::validate_matrix(rho);
                if rho.rows() != 4
                    || rho.cols() != 4
                    || !report.passes_with(tol::HERMITICITY, tol::TRACE, tol::PSD_SLACK)
                {
                    return Err(Error::InvalidStrategy(format!(
                        "sender {label} preparation {} is not a valid 4-dim state",
                        i + 1
                    )));
                }
            }
        }
        for (z, c) in self.observables.iter().enumerate() {
            if c.rows() != 16 || c.cols() != 16 {
                return Err(Error::InvalidStrategy(format!(
                    "observable {} must be 16x16",
                    z + 1
                )));
            }
            check_observable(c)?;
        }
        Ok(())
    }
}

fn check_observable(c: &ComplexMatrix) -> Result<()> {
    let defect = c.hermiticity_defect();
    if defect > tol::HERMITICITY {
        return Err(Error::NotHermitian { defect });
    }
    let (vals, _) = matops::hermitian_eig(c)?;
    let low = vals[0];
    let high = vals[vals.len() - 1];
    if low < -1.0 - tol::EQUALITY {
        return Err(Error::SpectrumOutOfRange { extreme: low });
    }
    if high > 1.0 + tol::EQUALITY {
        return Err(Error::SpectrumOutOfRange { extreme: high });
    }
    Ok(())
}

/// Single protocol correlator `E = Tr[(U x V) rho (U x V)^dagger C]`.
pub fn correlator(
    rho: &DensityMatrix,
    u_x: &ComplexMatrix,
    v_y: &ComplexMatrix,
    c_z: &ComplexMatrix,
) -> Result<f64> {
    if rho.dim_a() != 4 || rho.dim_b() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "protocol runs on 4 x 4 states, got ({}, {})",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    for u in [u_x, v_y] {
        if u.rows() != 4 || u.cols() != 4 {
            return Err(Error::DimensionMismatch(
                "encoding unitaries must be 4x4".into(),
            ));
        }
        let defect = u.unitarity_defect();
        if defect > tol::EQUALITY {
            return Err(Error::NotUnitary { defect });
        }
    }
    check_observable(c_z)?;
    let uv = kron(u_x, v_y);
    let conjugated = uv.matmul(rho.matrix()).matmul(&uv.dagger());
    Ok(conjugated.trace_product(c_z).re)
}

struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Full protocol value of the witness on a shared state: every one of the
/// 4096 correlators is simulated with `U_x = 2A_x`, `V_y = 2B_y`,
/// `C_z = 4 A_z x B_z` and summed against the coefficients.
///
/// For a witness built from the state's own diagonal signs this equals
/// `4^3 sum_z |t_zz|`; the closed form serves as the independent oracle in
/// the tests, never as the computation path.
pub fn entangled_value(rho: &DensityMatrix, w: &WitnessCoefficients) -> Result<f64> {
    if rho.dim_a() != 4 || rho.dim_b() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "protocol runs on 4 x 4 states, got ({}, {})",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let basis = ProductBasis::new(w.permutation().clone());
    let two = Complex64::new(2.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    let observables: Vec<ComplexMatrix> = (1..=16)
        .map(|z| kron(basis.a(z), basis.b(z)).scale(four))
        .collect();

    // E_xyz for all inputs, x-major like the coefficient layout.
    let mut correlators = vec![0.0; 4096];
    for x in 1..=16 {
        let ux = basis.a(x).scale(two);
        for y in 1..=16 {
            let vy = basis.b(y).scale(two);
            let uv = kron(&ux, &vy);
            let conjugated = uv.matmul(rho.matrix()).matmul(&uv.dagger());
            for z in 1..=16 {
                correlators[((x - 1) * 16 + (y - 1)) * 16 + (z - 1)] =
                    conjugated.trace_product(&observables[z - 1]).re;
            }
        }
    }

    // z-major compensated accumulation.
    let mut acc = KahanSum::new();
    for z in 0..16 {
        for x in 0..16 {
            for y in 0..16 {
                let idx = (x * 16 + y) * 16 + z;
                let coeff = w.values[idx];
                if coeff != 0.0 {
                    acc.add(coeff * correlators[idx]);
                }
            }
        }
    }
    Ok(acc.sum)
}

/// Exact witness value of a fixed strategy: `sum w_xyz Tr(rho_x x rho_y C_z)`.
pub fn evaluate_witness(w: &WitnessCoefficients, strategy: &PMStrategy) -> Result<f64> {
    strategy.validate()?;
    Ok(evaluate_unchecked(w, strategy))
}

fn evaluate_unchecked(w: &WitnessCoefficients, strategy: &PMStrategy) -> f64 {
    let mut correlators = vec![0.0; 4096];
    for x in 0..16 {
        for y in 0..16 {
            let product = kron(&strategy.prep_a[x], &strategy.prep_b[y]);
            for z in 0..16 {
                correlators[(x * 16 + y) * 16 + z] =
                    product.trace_product(&strategy.observables[z]).re;
            }
        }
    }
    let mut acc = KahanSum::new();
    for z in 0..16 {
        for x in 0..16 {
            for y in 0..16 {
                let idx = (x * 16 + y) * 16 + z;
                let coeff = w.values[idx];
                if coeff != 0.0 {
                    acc.add(coeff * correlators[idx]);
                }
            }
        }
    }
    acc.sum
}

/// The fixed product strategy that attains the separable bound of the
/// canonical witness: each sender conjugates the ground state by the
/// doubled basis operators, the receiver measures `4 A_z x A_z`.
pub fn saturating_product_strategy() -> PMStrategy {
    let basis = ProductBasis::with_identity_permutation();
    let two = Complex64::new(2.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    let mut ground = ComplexMatrix::zeros(4, 4);
    ground[(0, 0)] = Complex64::ONE;
    let preps: Vec<ComplexMatrix> = (1..=16)
        .map(|x| {
            let u = basis.a(x).scale(two);
            u.matmul(&ground).matmul(&u.dagger())
        })
        .collect();
    let observables: Vec<ComplexMatrix> = (1..=16)
        .map(|z| kron(basis.a(z), basis.a(z)).scale(four))
        .collect();
    PMStrategy {
        prep_a: preps.clone(),
        prep_b: preps,
        observables,
    }
}

/// Convergence parameters for the see-saw search.
#[derive(Debug, Clone)]
pub struct SeeSawParams {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SeeSawParams {
    fn default() -> Self {
        Self {
            seed: 42,
            restarts: 200,
            max_iter: tol::SEESAW_MAX_ITER,
            tol: tol::SEESAW_CONVERGENCE,
        }
    }
}

/// Result of a single see-saw restart.
#[derive(Debug, Clone)]
pub struct SeeSawOutcome {
    pub value: f64,
    pub strategy: PMStrategy,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    pub restart_index: usize,
    /// Objective after each alternating step, in order.
    pub history: Vec<f64>,
}

/// Compact per-restart record.
#[derive(Debug, Clone, Copy)]
pub struct RestartSummary {
    pub restart_index: usize,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A full multi-restart run: the best outcome plus per-restart records.
#[derive(Debug, Clone)]
pub struct SeeSawRun {
    pub best: SeeSawOutcome,
    pub summaries: Vec<RestartSummary>,
}

impl SeeSawRun {
    pub fn converged_fraction(&self) -> f64 {
        let converged = self.summaries.iter().filter(|s| s.converged).count();
        converged as f64 / self.summaries.len() as f64
    }
}

/// See-saw over unrestricted four-dimensional message states and
/// contraction observables.
pub fn seesaw_separable(w: &WitnessCoefficients, params: &SeeSawParams) -> Result<SeeSawRun> {
    seesaw(w, params, Mode::Separable)
}

/// See-saw over classical messages: computational-basis preparations and
/// diagonal +/-1 observables.
pub fn seesaw_classical(w: &WitnessCoefficients, params: &SeeSawParams) -> Result<SeeSawRun> {
    seesaw(w, params, Mode::Classical)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Separable,
    Classical,
}

fn seesaw(w: &WitnessCoefficients, params: &SeeSawParams, mode: Mode) -> Result<SeeSawRun> {
    if params.restarts == 0 {
        return Err(Error::DomainError("need at least one restart".into()));
    }
    let factors = factorize_slices(w);
    let outcomes: Vec<SeeSawOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|restart| run_restart(w, params, restart, mode, &factors))
        .collect();
    let summaries: Vec<RestartSummary> = outcomes
        .iter()
        .map(|o| RestartSummary {
            restart_index: o.restart_index,
            value: o.value,
            iterations: o.iterations,
            converged: o.converged,
        })
        .collect();
    // Deterministic reduction: best value, ties to the lower restart index.
    let best_index = summaries
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    Ok(SeeSawRun {
        best: outcomes[best_index].clone(),
        summaries,
    })
}

/// Rank-one factorizations `w_xyz = scale_z a_x b_y` of the coefficient
/// slices, where they exist. Witnesses built from diagonal signs always
/// factorize; the observable update then splits the 16x16 eigenproblem of
/// `F_z = scale_z (sum_x a_x rho_x) x (sum_y b_y rho_y)` into two 4x4 ones.
struct SliceFactorization {
    slices: Vec<Option<(f64, [f64; 16], [f64; 16])>>,
}

fn factorize_slices(w: &WitnessCoefficients) -> SliceFactorization {
    let slices = (0..16).map(|z| factorize_slice(w, z)).collect();
    SliceFactorization { slices }
}

fn factorize_slice(w: &WitnessCoefficients, z: usize) -> Option<(f64, [f64; 16], [f64; 16])> {
    let at = |x: usize, y: usize| w.values[(x * 16 + y) * 16 + z];
    let mut pivot = (0usize, 0usize, 0.0f64);
    for x in 0..16 {
        for y in 0..16 {
            if at(x, y).abs() > pivot.2.abs() {
                pivot = (x, y, at(x, y));
            }
        }
    }
    let (x0, y0, p) = pivot;
    if p == 0.0 {
        return Some((0.0, [1.0; 16], [1.0; 16]));
    }
    let mut a = [0.0; 16];
    let mut b = [0.0; 16];
    for (x, slot) in a.iter_mut().enumerate() {
        *slot = at(x, y0) / p;
    }
    for (y, slot) in b.iter_mut().enumerate() {
        *slot = at(x0, y) / p;
    }
    for x in 0..16 {
        for y in 0..16 {
            if (p * a[x] * b[y] - at(x, y)).abs() > 1e-12 {
                return None;
            }
        }
    }
    Some((p, a, b))
}

/// Observable update for a factorized slice: eigendecompose the two 4x4
/// factors and sign the product eigenprojectors.
fn observable_update_factored(
    scale: f64,
    a: &[f64; 16],
    b: &[f64; 16],
    prep_a: &[ComplexMatrix],
    prep_b: &[ComplexMatrix],
) -> (ComplexMatrix, f64) {
    if scale == 0.0 {
        // F_z = 0: every contraction is optimal; sgn(0) -> +1 gives identity.
        return (ComplexMatrix::identity(16), 0.0);
    }
    let mut s_a = ComplexMatrix::zeros(4, 4);
    let mut s_b = ComplexMatrix::zeros(4, 4);
    for x in 0..16 {
        if a[x] != 0.0 {
            s_a.add_scaled(&prep_a[x], a[x]);
        }
    }
    for y in 0..16 {
        if b[y] != 0.0 {
            s_b.add_scaled(&prep_b[y], b[y]);
        }
    }
    let (la, va) = matops::hermitian_eig(&s_a).expect("Hermitian by construction");
    let (lb, vb) = matops::hermitian_eig(&s_b).expect("Hermitian by construction");
    let proj_a: Vec<ComplexMatrix> = (0..4).map(|i| ComplexMatrix::outer(&va.column(i))).collect();
    let proj_b: Vec<ComplexMatrix> = (0..4).map(|j| ComplexMatrix::outer(&vb.column(j))).collect();
    let mut c = ComplexMatrix::zeros(16, 16);
    let mut gain = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let lambda = scale * la[i] * lb[j];
            let sign = if lambda < 0.0 { -1.0 } else { 1.0 };
            matops::kron_add_into(&mut c, &proj_a[i], &proj_b[j], sign);
            gain += lambda.abs();
        }
    }
    (c, gain)
}

fn run_restart(
    w: &WitnessCoefficients,
    params: &SeeSawParams,
    restart: usize,
    mode: Mode,
    factors: &SliceFactorization,
) -> SeeSawOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(restart as u64);

    let mut prep_a: Vec<ComplexMatrix> = Vec::with_capacity(16);
    let mut prep_b: Vec<ComplexMatrix> = Vec::with_capacity(16);
    match mode {
        Mode::Separable => {
            for _ in 0..16 {
                prep_a.push(ComplexMatrix::outer(&random_pure_state(&mut rng, 4)));
            }
            for _ in 0..16 {
                prep_b.push(ComplexMatrix::outer(&random_pure_state(&mut rng, 4)));
            }
        }
        Mode::Classical => {
            for _ in 0..16 {
                prep_a.push(basis_projector(rand::Rng::random_range(&mut rng, 0..4)));
            }
            for _ in 0..16 {
                prep_b.push(basis_projector(rand::Rng::random_range(&mut rng, 0..4)));
            }
        }
    }

    let mut observables: Vec<ComplexMatrix> =
        (0..16).map(|_| ComplexMatrix::zeros(16, 16)).collect();
    let mut history: Vec<f64> = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=params.max_iter {
        iterations = iter;

        // Observable update: maximize each Tr(F_z C_z) in closed form.
        let mut value_observables = KahanSum::new();
        for z in 0..16 {
            let (c_z, gain) = match (mode, &factors.slices[z]) {
                (Mode::Separable, Some((scale, a, b))) => {
                    observable_update_factored(*scale, a, b, &prep_a, &prep_b)
                }
                (Mode::Separable, None) => {
                    optimal_contraction(&accumulate_f(w, &prep_a, &prep_b, z))
                }
                (Mode::Classical, _) => {
                    optimal_diagonal_signs(&accumulate_f(w, &prep_a, &prep_b, z))
                }
            };
            observables[z] = c_z;
            value_observables.add(gain);
        }
        history.push(value_observables.sum);

        // Sender-A update: top eigenvector (or best basis state) of each G_x.
        let reduced_a: Vec<Vec<ComplexMatrix>> = (0..16)
            .map(|y| {
                (0..16)
                    .map(|z| reduce_to_a(&observables[z], &prep_b[y]))
                    .collect()
            })
            .collect();
        let mut value_a = KahanSum::new();
        for x in 0..16 {
            let mut g_x = ComplexMatrix::zeros(4, 4);
            for y in 0..16 {
                for z in 0..16 {
                    let coeff = w.values[(x * 16 + y) * 16 + z];
                    if coeff != 0.0 {
                        g_x.add_scaled(&reduced_a[y][z], coeff);
                    }
                }
            }
            let (state, gain) = match mode {
                Mode::Separable => top_eigen_projector(&g_x),
                Mode::Classical => best_basis_projector(&g_x),
            };
            prep_a[x] = state;
            value_a.add(gain);
        }
        history.push(value_a.sum);

        // Sender-B update, symmetric.
        let reduced_b: Vec<Vec<ComplexMatrix>> = (0..16)
            .map(|x| {
                (0..16)
                    .map(|z| reduce_to_b(&observables[z], &prep_a[x]))
                    .collect()
            })
            .collect();
        let mut value_b = KahanSum::new();
        for y in 0..16 {
            let mut g_y = ComplexMatrix::zeros(4, 4);
            for x in 0..16 {
                for z in 0..16 {
                    let coeff = w.values[(x * 16 + y) * 16 + z];
                    if coeff != 0.0 {
                        g_y.add_scaled(&reduced_b[x][z], coeff);
                    }
                }
            }
            let (state, gain) = match mode {
                Mode::Separable => top_eigen_projector(&g_y),
                Mode::Classical => best_basis_projector(&g_y),
            };
            prep_b[y] = state;
            value_b.add(gain);
        }
        history.push(value_b.sum);

        let value = value_b.sum;
        if (value - previous).abs() < params.tol * value.abs().max(1.0) {
            converged = true;
            break;
        }
        previous = value;
    }

    let value = *history.last().expect("at least one iteration");
    SeeSawOutcome {
        value,
        strategy: PMStrategy {
            prep_a,
            prep_b,
            observables,
        },
        iterations,
        converged,
        seed: params.seed,
        restart_index: restart,
        history,
    }
}

fn basis_projector(index: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(index, index)] = Complex64::ONE;
    m
}

/// `F_z = sum_xy w_xyz rho_x^A x rho_y^B` for a fixed z (0-based).
///
/// Contracted in two stages: `T_x = sum_y w_xyz rho_y^B` first, then
/// `F_z = sum_x rho_x^A x T_x`.
fn accumulate_f(
    w: &WitnessCoefficients,
    prep_a: &[ComplexMatrix],
    prep_b: &[ComplexMatrix],
    z: usize,
) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(16, 16);
    for x in 0..16 {
        let mut t_x = ComplexMatrix::zeros(4, 4);
        let mut any = false;
        for y in 0..16 {
            let coeff = w.values[(x * 16 + y) * 16 + z];
            if coeff != 0.0 {
                t_x.add_scaled(&prep_b[y], coeff);
                any = true;
            }
        }
        if any {
            matops::kron_add_into(&mut f, &prep_a[x], &t_x, 1.0);
        }
    }
    f
}

/// Best Hermitian contraction for `Tr(F C)`: sign the eigenprojectors of F.
/// Returns the observable and the attained value, the trace norm of F.
fn optimal_contraction(f: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let (vals, vecs) = matops::hermitian_eig(f).expect("F is Hermitian by construction");
    let n = f.rows();
    // C = V diag(sgn(lambda)) V^dagger, with sgn(0) -> +1 for determinism.
    let signs: Vec<f64> = vals
        .iter()
        .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let mut c = ComplexMatrix::zeros(n, n);
    for (j, &sign) in signs.iter().enumerate() {
        let col = vecs.column(j);
        c.add_scaled(&ComplexMatrix::outer(&col), sign);
    }
    let gain = vals.iter().map(|v| v.abs()).sum();
    (c, gain)
}

/// Best diagonal +/-1 observable for `Tr(F C)`: sign the diagonal of F.
fn optimal_diagonal_signs(f: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let n = f.rows();
    let mut c = ComplexMatrix::zeros(n, n);
    let mut gain = 0.0;
    for i in 0..n {
        let d = f[(i, i)].re;
        let sign = if d < 0.0 { -1.0 } else { 1.0 };
        c[(i, i)] = Complex64::new(sign, 0.0);
        gain += d.abs();
    }
    (c, gain)
}

/// Projector onto the top eigenvector, plus the top eigenvalue.
fn top_eigen_projector(g: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let (vals, vecs) = matops::hermitian_eig(g).expect("G is Hermitian by construction");
    let top = vals.len() - 1;
    let col = vecs.column(top);
    (ComplexMatrix::outer(&col), vals[top])
}

/// Best computational-basis projector, ties to the lowest index.
fn best_basis_projector(g: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..g.rows() {
        let d = g[(i, i)].re;
        if d > best.1 {
            best = (i, d);
        }
    }
    (basis_projector(best.0), best.1)
}

/// The 4x4 matrix `K` with `Tr(rho_a K) = Tr((rho_a x rho_b) C)`, i.e. the
/// B-side contraction `Tr_B[(1 x rho_b) C]`.
pub fn reduce_to_a(c: &ComplexMatrix, rho_b: &ComplexMatrix) -> ComplexMatrix {
    let d_b = rho_b.rows();
    let d_a = c.rows() / d_b;
    ComplexMatrix::from_fn(d_a, d_a, |i, j| {
        let mut acc = Complex64::ZERO;
        for b in 0..d_b {
            for bp in 0..d_b {
                acc += rho_b[(b, bp)] * c[(i * d_b + bp, j * d_b + b)];
            }
        }
        acc
    })
}

/// The 4x4 matrix `L` with `Tr(rho_b L) = Tr((rho_a x rho_b) C)`.
pub fn reduce_to_b(c: &ComplexMatrix, rho_a: &ComplexMatrix) -> ComplexMatrix {
    let d_a = rho_a.rows();
    let d_b = c.rows() / d_a;
    ComplexMatrix::from_fn(d_b, d_b, |i, j| {
        let mut acc = Complex64::ZERO;
        for a in 0..d_a {
            for ap in 0..d_a {
                acc += rho_a[(a, ap)] * c[(ap * d_b + i, a * d_b + j)];
            }
        }
        acc
    })
}
