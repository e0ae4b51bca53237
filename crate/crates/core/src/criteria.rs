//! Entanglement criteria and visibility thresholds: correlation tensor,
//! CCNR, trace criterion, negativity/PPT, quantum Fisher information, and
//! bisection over noise families.

use num_complex::Complex64;

use crate::basis::{hermitian_basis, ProductBasis};
use crate::error::{Error, Result};
use crate::matops::{self, kron, partial_transpose, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tol;

/// Real correlation matrix `t_kl = Tr(rho A_k x B_l)`, 1-based accessors.
#[derive(Debug, Clone)]
pub struct CorrelationTensor {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl CorrelationTensor {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `t_kl` with 1-based `k, l`.
    pub fn t(&self, k: usize, l: usize) -> f64 {
        self.entries[(k - 1) * self.cols + (l - 1)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (1..=self.rows.min(self.cols)).map(|k| self.t(k, k)).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.entries[i * self.cols + j], 0.0)
        })
    }
}

/// Expands a state in a pair of orthonormal Hermitian operator bases.
pub fn correlation_tensor(
    rho: &DensityMatrix,
    basis_a: &[ComplexMatrix],
    basis_b: &[ComplexMatrix],
) -> Result<CorrelationTensor> {
    let da = rho.dim_a();
    let db = rho.dim_b();
    if basis_a.len() != da * da || basis_b.len() != db * db {
        return Err(Error::DimensionMismatch(format!(
            "expected {} x {} basis operators, got {} x {}",
            da * da,
            db * db,
            basis_a.len(),
            basis_b.len()
        )));
    }
    if basis_a.iter().any(|m| m.rows() != da || m.cols() != da)
        || basis_b.iter().any(|m| m.rows() != db || m.cols() != db)
    {
        return Err(Error::DimensionMismatch(
            "basis operator dimensions do not match the state".into(),
        ));
    }
    let rows = basis_a.len();
    let cols = basis_b.len();
    let mut entries = vec![0.0; rows * cols];
    for (k, ak) in basis_a.iter().enumerate() {
        for (l, bl) in basis_b.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for a in 0..da {
                for ap in 0..da {
                    let aka = ak[(ap, a)];
                    if aka == Complex64::ZERO {
                        continue;
                    }
                    for b in 0..db {
                        for bp in 0..db {
                            acc += rho.matrix()[(a * db + b, ap * db + bp)]
                                * aka
                                * bl[(bp, b)];
                        }
                    }
                }
            }
            debug_assert!(acc.im.abs() < tol::HERMITICITY);
            entries[k * cols + l] = acc.re;
        }
    }
    Ok(CorrelationTensor {
        rows,
        cols,
        entries,
    })
}

/// CCNR value: sum of the operator-Schmidt coefficients, computed as the
/// trace norm of the correlation tensor in the canonical orthonormal bases.
/// Values above 1 certify entanglement.
pub fn ccnr(rho: &DensityMatrix) -> Result<f64> {
    let basis_a = hermitian_basis(rho.dim_a())?;
    let basis_b = hermitian_basis(rho.dim_b())?;
    let tensor = correlation_tensor(rho, &basis_a, &basis_b)?;
    Ok(matops::trace_norm(&tensor.to_matrix()))
}

/// Trace criterion `S = sum_k |t_kk|` in the Pauli-product basis with the
/// given B-side permutation. Values above 1 certify entanglement; `S` never
/// exceeds the CCNR value.
pub fn trace_criterion_s(
    rho: &DensityMatrix,
    permutation: crate::basis::Permutation,
) -> Result<f64> {
    if rho.dim_a() != 4 || rho.dim_b() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "trace criterion is defined on 4 x 4 states, got ({}, {})",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let basis = ProductBasis::new(permutation);
    let mut s = 0.0;
    for k in 1..=16 {
        let t = kron(basis.a(k), basis.b(k)).trace_product(rho.matrix());
        debug_assert!(t.im.abs() < tol::HERMITICITY);
        s += t.re.abs();
    }
    Ok(s)
}

/// Negativity `(||PT(rho)||_1 - 1) / 2`; zero exactly for PPT states.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b())?;
    Ok(((matops::trace_norm(&pt) - 1.0) / 2.0).max(0.0))
}

/// Whether the partial transpose has no eigenvalue below `-tolerance`.
pub fn is_ppt(rho: &DensityMatrix, tolerance: f64) -> Result<bool> {
    let pt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b())?;
    let (vals, _) = matops::hermitian_eig(&pt)?;
    Ok(vals[0] >= -tolerance)
}

/// Quantum Fisher information of `rho` for the generator `h`, from the
/// spectral decomposition:
/// `F_Q = 2 sum_{i,j} (lambda_i - lambda_j)^2 / (lambda_i + lambda_j) |<i|H|j>|^2`,
/// dropping pairs with `lambda_i + lambda_j` below the rank floor.
pub fn qfi(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    let d = rho.total_dim();
    if h.rows() != d || h.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian must be {d}x{d}, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > tol::HERMITICITY {
        return Err(Error::NotHermitian { defect });
    }
    let (vals, vecs) = matops::hermitian_eig(rho.matrix())?;
    // H in the eigenbasis of rho.
    let hm = vecs.dagger().matmul(&h.matmul(&vecs));
    let mut f = 0.0;
    for i in 0..d {
        for j in 0..d {
            let sum = vals[i] + vals[j];
            if sum <= tol::QFI_EIGENVALUE_FLOOR {
                continue;
            }
            let diff = vals[i] - vals[j];
            f += 2.0 * diff * diff / sum * hm[(i, j)].norm_sqr();
        }
    }
    Ok(f)
}

/// `H_A x I + I x H_B` for local generators on the two sides.
pub fn collective_hamiltonian_pair(h_a: &ComplexMatrix, h_b: &ComplexMatrix) -> ComplexMatrix {
    assert!(h_a.is_square() && h_b.is_square());
    kron(h_a, &ComplexMatrix::identity(h_b.rows()))
        .add(&kron(&ComplexMatrix::identity(h_a.rows()), h_b))
}

/// `H_AB = H x I + I x H` for a shared local generator.
pub fn collective_hamiltonian(h: &ComplexMatrix) -> ComplexMatrix {
    collective_hamiltonian_pair(h, h)
}

/// `diag(+1, -1, +1, -1)`, the qubit Z on the second tensor slot.
pub fn h_second_slot_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0, 1.0, -1.0])
}

/// `diag(+1, +1, -1, -1)`, the qubit Z on the first tensor slot.
pub fn h_first_slot_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, 1.0, -1.0, -1.0])
}

/// The candidate collective generators used for the catalog's metrology
/// numbers: qubit Z on either tensor slot, with the B side taken at both
/// signs.
///
/// The slot matters for the rank-6 and rank-8 states (each reaches its
/// reported maximum with one specific slot), and the relative sign matters
/// for the Werner family: swap-invariant states commute with every
/// equal-sign choice exactly, so their metrological response lives entirely
/// in the opposite-sign pair.
pub fn standard_hamiltonians() -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(4);
    for h in [h_second_slot_z(), h_first_slot_z()] {
        out.push(collective_hamiltonian(&h));
        out.push(collective_hamiltonian_pair(
            &h,
            &h.scale(Complex64::new(-1.0, 0.0)),
        ));
    }
    out
}

/// Best quantum Fisher information over [`standard_hamiltonians`].
pub fn qfi_standard_max(rho: &DensityMatrix) -> Result<f64> {
    let mut best = 0.0f64;
    for h in standard_hamiltonians() {
        best = best.max(qfi(rho, &h)?);
    }
    Ok(best)
}

/// Separability limit of the quantum Fisher information for local +/-1
/// generators on 4 x 4: states at or below this are metrologically useless.
pub const QFI_SEPARABLE_LIMIT: f64 = 8.0;

/// Outcome of a bisection over the visibility parameter.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdResult {
    pub v_star: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

/// Bisects a monotone predicate over a state family parametrized by `v`.
/// The predicate must be false at `lo` and true at `hi`.
pub fn v_threshold(
    family: impl Fn(f64) -> Result<DensityMatrix>,
    predicate: impl Fn(&DensityMatrix) -> Result<bool>,
    lo: f64,
    hi: f64,
    tolerance: f64,
) -> Result<ThresholdResult> {
    if predicate(&family(lo)?)? {
        return Err(Error::BracketError(format!(
            "predicate already true at lo = {lo}"
        )));
    }
    if !predicate(&family(hi)?)? {
        return Err(Error::BracketError(format!(
            "predicate still false at hi = {hi}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while hi - lo > tolerance && iterations < tol::BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if predicate(&family(mid)?)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(ThresholdResult {
        v_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        iterations,
    })
}

/// Critical visibility of the isotropic mixture under the witness:
/// `v_PM = 3 / (4 CCNR - 1)`, defined for CCNR above 1.
pub fn v_pm_closed_form(ccnr_value: f64) -> Result<f64> {
    if ccnr_value <= 1.0 {
        return Err(Error::DomainError(format!(
            "no detection threshold exists for CCNR <= 1, got {ccnr_value}"
        )));
    }
    Ok((3.0 / (4.0 * ccnr_value - 1.0)).min(1.0))
}

/// Target dimension for the high-dimensional noise construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseDim {
    Finite(usize),
    Infinite,
}

/// Closed-form trace-criterion value of the re-prepared product-noise
/// construction seeded with the Bloch-product-diagonal state:
/// `S(v, D) = 2v/3 + 3/4 - 8(1-v)/D^2 + |v/3 - 1/4 + 4(1-v)/D^2|`,
/// with the piecewise large-`D` form `(3v + 2)/3` below `v = 4/3`.
pub fn highdim_s(v: f64, dim: NoiseDim) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::DomainError(format!(
            "visibility must be in [0, 1], got {v}"
        )));
    }
    match dim {
        NoiseDim::Finite(d) => {
            if d < 4 {
                return Err(Error::DomainError(format!(
                    "noise dimension must be >= 4, got {d}"
                )));
            }
            let d2 = (d * d) as f64;
            Ok(2.0 * v / 3.0 + 0.75 - 8.0 * (1.0 - v) / d2
                + (v / 3.0 - 0.25 + 4.0 * (1.0 - v) / d2).abs())
        }
        NoiseDim::Infinite => {
            if v < 4.0 / 3.0 {
                Ok((3.0 * v + 2.0) / 3.0)
            } else {
                Ok((v + 2.0) / 3.0)
            }
        }
    }
}

/// CCNR of the isotropic `D`-dimensional mixture `v rho + (1-v) I/D^2`,
/// closed form `v CCNR(rho) + (1-v)/D`.
pub fn highdim_ccnr(ccnr_rho: f64, v: f64, dim: NoiseDim) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::DomainError(format!(
            "visibility must be in [0, 1], got {v}"
        )));
    }
    match dim {
        NoiseDim::Finite(d) if d < 4 => Err(Error::DomainError(format!(
            "noise dimension must be >= 4, got {d}"
        ))),
        NoiseDim::Finite(d) => Ok(v * ccnr_rho + (1.0 - v) / d as f64),
        NoiseDim::Infinite => Ok(v * ccnr_rho),
    }
}

/// Thresholds quoted from the literature; their computation (local-model
/// constructions, symmetric-extension hierarchies, positive-map criteria)
/// is outside this crate's scope.
pub mod reference {
    /// Projective-measurement local-model threshold for the isotropic
    /// state: `1/6 + 1/9 + 1/12`.
    pub fn v_loc_me() -> f64 {
        1.0 / 6.0 + 1.0 / 9.0 + 1.0 / 12.0
    }

    /// Werner's local model covers the antisymmetric state up to `v = 3/4`.
    pub const V_LOC_WERNER_AS: f64 = 0.75;

    /// The `p = 27/34` Werner state admits a local model at full visibility.
    pub const V_LOC_WERNER_LOC: f64 = 1.0;

    /// Separability threshold of the rank-6/rank-8 states, from the absence
    /// of a two-copy PPT symmetric extension.
    pub const V_SEP_SYMMETRIC_EXTENSION: f64 = 0.7446;

    /// Separability threshold of the Sentis et al. state, from Breuer-Hall
    /// positive maps.
    pub const V_SEP_BREUER_HALL: f64 = 0.7814;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Permutation;
    use crate::states::{
        self, bloch_spec, catalog, isotropic_mix, max_entangled, rho_3x3, werner, StateId,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli_bases() -> Vec<ComplexMatrix> {
        ProductBasis::with_identity_permutation()
            .a_operators()
            .to_vec()
    }

    #[test]
    fn tensor_of_maximally_mixed() {
        let rho = isotropic_mix(&catalog(StateId::Bpd).unwrap(), 0.0, 4).unwrap();
        let basis = pauli_bases();
        let t = correlation_tensor(&rho, &basis, &basis).unwrap();
        for k in 1..=16 {
            for l in 1..=16 {
                let expected = if k == 1 && l == 1 { 0.25 } else { 0.0 };
                assert!((t.t(k, l) - expected).abs() < tol::STRICT);
            }
        }
    }

    #[test]
    fn tensor_of_bpd_is_diagonal_with_table_coefficients() {
        let spec = bloch_spec(StateId::Bpd).unwrap();
        let rho = catalog(StateId::Bpd).unwrap();
        let basis = pauli_bases();
        let t = correlation_tensor(&rho, &basis, &basis).unwrap();
        for k in 1..=16 {
            for l in 1..=16 {
                let expected = if k == l { spec.lambdas[k - 1] } else { 0.0 };
                assert!((t.t(k, l) - expected).abs() < tol::STRICT, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn tensor_of_rho_3x3_recovers_entry_list() {
        use crate::states::constants::*;
        let rho = rho_3x3().unwrap();
        let basis = pauli_bases();
        let t = correlation_tensor(&rho, &basis, &basis).unwrap();
        let diag = [
            0.25,
            r4(),
            -r4(),
            -r3(),
            0.0,
            r4(),
            r4(),
            0.0,
            0.0,
            r4(),
            r4(),
            0.0,
            r1(),
            r4(),
            -r4(),
            r1(),
        ];
        for k in 1..=16 {
            assert!((t.t(k, k) - diag[k - 1]).abs() < tol::STRICT, "k={k}");
        }
        for (k, l, value) in [
            (1, 13, 0.125),
            (1, 16, -0.125),
            (7, 10, -r4()),
            (6, 11, r4()),
            (2, 14, r4()),
            (3, 15, -r4()),
            (4, 13, r3() / 2.0),
            (4, 16, -r3() / 2.0),
        ] {
            assert!((t.t(k, l) - value).abs() < tol::STRICT, "({k},{l})");
            assert!((t.t(l, k) - value).abs() < tol::STRICT, "({l},{k})");
        }
    }

    #[test]
    fn ccnr_of_catalog_states() {
        let me = catalog(StateId::Me).unwrap();
        assert!((ccnr(&me).unwrap() - 4.0).abs() < tol::EQUALITY);
        let wl = werner(27.0 / 34.0, 4).unwrap();
        assert!((ccnr(&wl).unwrap() - 1.0882).abs() < 5e-5);
        let bpd = catalog(StateId::Bpd).unwrap();
        assert!((ccnr(&bpd).unwrap() - 1.5).abs() < tol::EQUALITY);
    }

    #[test]
    fn ccnr_of_product_states_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let a = states::random_density(&mut rng, 4, 2);
            let b = states::random_density(&mut rng, 4, 3);
            let rho = DensityMatrix::with_default_slack(kron(&a, &b), 4, 4).unwrap();
            let value = ccnr(&rho).unwrap();
            assert!(value <= 1.0 + tol::EQUALITY, "got {value}");
        }
    }

    #[test]
    fn trace_criterion_values() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let s = trace_criterion_s(&bpd, Permutation::identity()).unwrap();
        assert!((s - 1.5).abs() < tol::EQUALITY);

        let embedded = rho_3x3().unwrap();
        let s = trace_criterion_s(&embedded, Permutation::identity()).unwrap();
        assert!((s - (2.5 - std::f64::consts::SQRT_2)).abs() < tol::EQUALITY);

        let mixed = isotropic_mix(&bpd, 0.0, 4).unwrap();
        let s = trace_criterion_s(&mixed, Permutation::identity()).unwrap();
        assert!((s - 0.25).abs() < tol::STRICT);
    }

    #[test]
    fn trace_criterion_of_rho_asym_has_resolved_normalization() {
        // With the unit-trace noise reading, S(v) = 1/4 + 5v/4: the
        // detection threshold S = 1 sits exactly at v = 0.6.
        for v in [0.0, 0.3, 0.6, 1.0] {
            let rho = states::rho_asym(v).unwrap();
            let s = trace_criterion_s(&rho, Permutation::identity()).unwrap();
            assert!((s - (0.25 + 1.25 * v)).abs() < tol::EQUALITY, "v={v}");
        }
    }

    #[test]
    fn negativity_of_catalog_states() {
        assert!((negativity(&catalog(StateId::Me).unwrap()).unwrap() - 1.5).abs() < tol::EQUALITY);
        assert!((negativity(&werner(1.0, 4).unwrap()).unwrap() - 0.25).abs() < tol::EQUALITY);
        assert!(negativity(&catalog(StateId::R8).unwrap()).unwrap() < 1e-6);
    }

    #[test]
    fn ppt_checks() {
        assert!(!is_ppt(&catalog(StateId::Me).unwrap(), tol::EQUALITY).unwrap());
        assert!(is_ppt(&catalog(StateId::R6).unwrap(), 1e-6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let a = states::random_density(&mut rng, 4, 4);
        let b = states::random_density(&mut rng, 4, 4);
        let product = DensityMatrix::with_default_slack(kron(&a, &b), 4, 4).unwrap();
        assert!(is_ppt(&product, tol::EQUALITY).unwrap());
    }

    #[test]
    fn qfi_vanishes_on_maximally_mixed() {
        let rho = isotropic_mix(&catalog(StateId::Bpd).unwrap(), 0.0, 4).unwrap();
        let f = qfi(&rho, &collective_hamiltonian(&h_second_slot_z())).unwrap();
        assert!(f.abs() < tol::EQUALITY);
    }

    #[test]
    fn qfi_resolves_hamiltonian_slot_for_r6_and_r8() {
        let target = 32.0 - 16.0 * std::f64::consts::SQRT_2;
        for id in [StateId::R6, StateId::R8] {
            let rho = catalog(id).unwrap();
            let f = qfi_standard_max(&rho).unwrap();
            assert!((f - target).abs() < 1e-6, "{}: {f}", id.name());
        }
    }

    #[test]
    fn qfi_of_local_model_werner() {
        // Werner states commute with every equal-sign collective generator,
        // so the reported value sits at the opposite-sign pairing.
        let rho = werner(27.0 / 34.0, 4).unwrap();
        let h = h_second_slot_z();
        let equal = qfi(&rho, &collective_hamiltonian(&h)).unwrap();
        assert!(equal.abs() < tol::EQUALITY);
        let f = qfi_standard_max(&rho).unwrap();
        assert!((f - 5.2271).abs() < 5e-5, "got {f}");
    }

    #[test]
    fn qfi_pure_state_is_four_times_variance() {
        let rho = max_entangled(4).unwrap();
        let h = collective_hamiltonian(&h_second_slot_z());
        let f = qfi(&rho, &h).unwrap();
        let mean = h.trace_product(rho.matrix()).re;
        let mean_sq = h.matmul(&h).trace_product(rho.matrix()).re;
        assert!((f - 4.0 * (mean_sq - mean * mean)).abs() < tol::EQUALITY);
    }

    #[test]
    fn qfi_convexity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let h = collective_hamiltonian(&h_second_slot_z());
        for _ in 0..5 {
            let rho1 = states::random_density_matrix(&mut rng, 4, 4, 16).unwrap();
            let rho2 = states::random_density_matrix(&mut rng, 4, 4, 16).unwrap();
            let v = 0.3;
            let mixed_matrix = rho1
                .matrix()
                .scale(Complex64::new(v, 0.0))
                .add(&rho2.matrix().scale(Complex64::new(1.0 - v, 0.0)));
            let mixed = DensityMatrix::with_default_slack(mixed_matrix, 4, 4).unwrap();
            let lhs = qfi(&mixed, &h).unwrap();
            let rhs = v * qfi(&rho1, &h).unwrap() + (1.0 - v) * qfi(&rho2, &h).unwrap();
            assert!(lhs <= rhs + tol::EQUALITY);
        }
    }

    #[test]
    fn threshold_ppt_of_max_entangled() {
        let me = catalog(StateId::Me).unwrap();
        let result = v_threshold(
            |v| isotropic_mix(&me, v, 4),
            |rho| Ok(!is_ppt(rho, tol::EQUALITY)?),
            0.0,
            1.0,
            tol::BISECTION,
        )
        .unwrap();
        assert!((result.v_star - 0.2).abs() < 1e-4, "got {}", result.v_star);
        assert!(result.bracket_width <= tol::BISECTION);
    }

    #[test]
    fn threshold_ppt_of_local_model_werner() {
        let wl = werner(27.0 / 34.0, 4).unwrap();
        let result = v_threshold(
            |v| isotropic_mix(&wl, v, 4),
            |rho| Ok(!is_ppt(rho, tol::EQUALITY)?),
            0.0,
            1.0,
            tol::BISECTION,
        )
        .unwrap();
        assert!((result.v_star - 0.2983).abs() < 1e-4, "got {}", result.v_star);
    }

    #[test]
    fn threshold_metrology_of_max_entangled() {
        let me = catalog(StateId::Me).unwrap();
        let h = collective_hamiltonian(&h_second_slot_z());
        let result = v_threshold(
            |v| isotropic_mix(&me, v, 4),
            |rho| Ok(qfi(rho, &h)? > QFI_SEPARABLE_LIMIT),
            0.0,
            1.0,
            tol::BISECTION,
        )
        .unwrap();
        let expected = (7.0 + 113f64.sqrt()) / 32.0;
        assert!((result.v_star - expected).abs() < 5e-4, "got {}", result.v_star);
    }

    #[test]
    fn threshold_rejects_bad_bracket() {
        let bpd = catalog(StateId::Bpd).unwrap();
        // BPD stays PPT at every visibility: no flip to bracket.
        let err = v_threshold(
            |v| isotropic_mix(&bpd, v, 4),
            |rho| Ok(!is_ppt(rho, tol::EQUALITY)?),
            0.0,
            1.0,
            tol::BISECTION,
        );
        assert!(matches!(err, Err(Error::BracketError(_))));
    }

    #[test]
    fn v_pm_closed_form_values() {
        assert!((v_pm_closed_form(4.0).unwrap() - 0.2).abs() < tol::STRICT);
        assert!((v_pm_closed_form(1.5).unwrap() - 0.6).abs() < tol::STRICT);
        // Exact CCNR of the rank-6/rank-8 states: 5/2 - sqrt(2).
        let c = 2.5 - std::f64::consts::SQRT_2;
        assert!((v_pm_closed_form(c).unwrap() - 0.8974).abs() < 5e-5);
        assert!(v_pm_closed_form(1.0).is_err());
        assert!(v_pm_closed_form(0.7).is_err());
    }

    #[test]
    fn highdim_ccnr_limit_crossing() {
        // In the infinite-dimension limit the CCNR law `v * 1.5` crosses
        // the detection threshold exactly at v = 2/3.
        let delta = 1e-6;
        let below = highdim_ccnr(1.5, 2.0 / 3.0 - delta, NoiseDim::Infinite).unwrap();
        let above = highdim_ccnr(1.5, 2.0 / 3.0 + delta, NoiseDim::Infinite).unwrap();
        assert!(below < 1.0 && above > 1.0);
    }

    #[test]
    fn highdim_s_closed_form() {
        for d in [4, 5, 6, 100] {
            assert!((highdim_s(1.0, NoiseDim::Finite(d)).unwrap() - 1.5).abs() < tol::STRICT);
        }
        assert!((highdim_s(0.0, NoiseDim::Infinite).unwrap() - 2.0 / 3.0).abs() < tol::STRICT);
        assert!(
            (highdim_s(0.7, NoiseDim::Infinite).unwrap() - (3.0 * 0.7 + 2.0) / 3.0).abs()
                < tol::STRICT
        );
        assert!(highdim_s(1.2, NoiseDim::Finite(5)).is_err());
        assert!(highdim_s(0.5, NoiseDim::Finite(3)).is_err());
    }

    #[test]
    fn highdim_s_matches_direct_computation() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let mut ground = ComplexMatrix::zeros(4, 4);
        ground[(0, 0)] = Complex64::ONE;
        for d in [4usize, 5, 6] {
            for v in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let mixed = isotropic_mix(&bpd, v, d).unwrap();
                let out = states::reprepare_channel(&mixed, &ground, &ground).unwrap();
                let direct = trace_criterion_s(&out, Permutation::identity()).unwrap();
                let formula = highdim_s(v, NoiseDim::Finite(d)).unwrap();
                assert!(
                    (direct - formula).abs() < 1e-8,
                    "v={v} D={d}: direct {direct}, formula {formula}"
                );
            }
        }
    }

    #[test]
    fn ccnr_of_isotropic_highdim_family() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let base = ccnr(&bpd).unwrap();
        for d in [4usize, 5, 6] {
            for v in [0.3, 0.8] {
                let mixed = isotropic_mix(&bpd, v, d).unwrap();
                let direct = ccnr(&mixed).unwrap();
                let formula = highdim_ccnr(base, v, NoiseDim::Finite(d)).unwrap();
                assert!(
                    (direct - formula).abs() < tol::EQUALITY,
                    "v={v} D={d}: direct {direct}, formula {formula}"
                );
            }
        }
    }

    #[test]
    fn ccnr_of_reprepared_isotropic_output() {
        // After the isotropic re-preparation the CCNR of the channel
        // output is v CCNR(rho) + (1 - v)/4, independent of D.
        let bpd = catalog(StateId::Bpd).unwrap();
        let base = ccnr(&bpd).unwrap();
        let id4 = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        for d in [5usize, 6] {
            for v in [0.4, 0.9] {
                let mixed = isotropic_mix(&bpd, v, d).unwrap();
                let out = states::reprepare_channel(&mixed, &id4, &id4).unwrap();
                let direct = ccnr(&out).unwrap();
                let formula = v * base + (1.0 - v) / 4.0;
                assert!(
                    (direct - formula).abs() < tol::EQUALITY,
                    "v={v} D={d}: direct {direct}, formula {formula}"
                );
            }
        }
    }

    #[test]
    fn ccnr_dominates_trace_criterion() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let rho = states::random_density_matrix(&mut rng, 4, 4, 16).unwrap();
            let c = ccnr(&rho).unwrap();
            let s = trace_criterion_s(&rho, Permutation::identity()).unwrap();
            assert!(c + tol::EQUALITY >= s, "ccnr {c} < S {s}");
        }
        // Equality on Bloch-diagonal constructions.
        for id in StateId::table1() {
            let spec = bloch_spec(id).unwrap();
            let rho = catalog(id).unwrap();
            let c = ccnr(&rho).unwrap();
            let s = trace_criterion_s(&rho, spec.permutation).unwrap();
            assert!((c - s).abs() < tol::EQUALITY, "{}", id.name());
        }
    }

    #[test]
    fn ccnr_invariant_under_local_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let rho = catalog(StateId::R6).unwrap();
        let base = ccnr(&rho).unwrap();
        for _ in 0..3 {
            let u = states::random_unitary(&mut rng, 4);
            let w = states::random_unitary(&mut rng, 4);
            let uw = kron(&u, &w);
            let rotated = DensityMatrix::with_default_slack(
                uw.matmul(rho.matrix()).matmul(&uw.dagger()),
                4,
                4,
            )
            .unwrap();
            assert!((ccnr(&rotated).unwrap() - base).abs() < tol::EQUALITY);
        }
    }

    #[test]
    fn negativity_iff_ppt_on_catalog() {
        for id in StateId::table1() {
            let rho = catalog(id).unwrap();
            let n = negativity(&rho).unwrap();
            let ppt = is_ppt(&rho, tol::EQUALITY).unwrap();
            if ppt {
                assert!(n < 1e-6, "{}", id.name());
            } else {
                assert!(n > 1e-6, "{}", id.name());
            }
        }
    }
}
