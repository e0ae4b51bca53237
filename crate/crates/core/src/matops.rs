//! Dense complex matrix primitives for small bipartite problems.
//!
//! Everything here targets matrices up to roughly `D^2 x D^2` with `D <= 8`
//! (4096 entries). Storage is dense row-major. Eigen- and singular-value
//! decompositions use cyclic Jacobi iterations, which are compact and very
//! accurate at these sizes; there is no attempt to scale past ~100x100.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Which subsystem of a bipartite matrix an operation keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices of `(re, im)` pairs; rows must be equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| e * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// In-place `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: f64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * factor;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex64::ZERO;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `M = M^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut defect: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tolerance
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        assert!(self.is_square());
        let prod = self.matmul(&self.dagger());
        prod.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Projector `|v><v|` from a column vector.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Accumulates `factor * (a x b)` into `out` without allocating.
pub fn kron_add_into(out: &mut ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix, factor: f64) {
    debug_assert_eq!(out.rows, a.rows * b.rows);
    debug_assert_eq!(out.cols, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let f = a[(ia, ja)] * factor;
            if f == Complex64::ZERO {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] += f * b[(ib, jb)];
                }
            }
        }
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let f = a[(ia, ja)];
            if f == Complex64::ZERO {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvector columns, so that `m v_j = lambda_j v_j`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > tol::HERMITICITY {
        return Err(Error::NotHermitian { defect });
    }

    let n = m.rows;
    // Symmetrize so rounding in the input cannot bias the iteration.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs_entry().max(f64::MIN_POSITIVE);
    let threshold = scale * 1e-15;

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= threshold {
                    continue;
                }
                rotated = true;

                // Phase step: multiply column q by e^{-i phi} (and row q by
                // its conjugate) so the pivot entry becomes real positive.
                let phase = apq / mag;
                let phase_conj = phase.conj();
                for i in 0..n {
                    let x = a[(i, q)] * phase_conj;
                    a[(i, q)] = x;
                }
                for j in 0..n {
                    let x = a[(q, j)] * phase;
                    a[(q, j)] = x;
                }
                for i in 0..n {
                    let x = v[(i, q)] * phase_conj;
                    v[(i, q)] = x;
                }

                // Real symmetric Jacobi rotation on the (p, q) plane.
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for j in 0..n {
                    let ap = a[(p, j)];
                    let aq = a[(q, j)];
                    a[(p, j)] = ap * c - aq * s;
                    a[(q, j)] = ap * s + aq * c;
                }
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    a[(i, p)] = ap * c - aq * s;
                    a[(i, q)] = ap * s + aq * c;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c - vq * s;
                    v[(i, q)] = vp * s + vq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((eigenvalues, eigenvectors))
}

/// Singular values in descending order, via one-sided Jacobi on the columns.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // Work on the tall orientation; singular values are shared with the adjoint.
    let mut g = if m.rows >= m.cols { m.clone() } else { m.dagger() };
    let rows = g.rows;
    let n = g.cols;

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::ZERO;
                for i in 0..rows {
                    let gp = g[(i, p)];
                    let gq = g[(i, q)];
                    alpha += gp.norm_sqr();
                    beta += gq.norm_sqr();
                    gamma += gp.conj() * gq;
                }
                let mag = gamma.norm();
                if mag <= 1e-15 * (alpha * beta).sqrt() + f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;

                // Phase-align column q so the inner product is real, then
                // rotate the pair to orthogonality.
                let psi_conj = (gamma / mag).conj();
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..rows {
                    let gp = g[(i, p)];
                    let gq = g[(i, q)] * psi_conj;
                    g[(i, p)] = gp * c - gq * s;
                    g[(i, q)] = gp * s + gq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut svals: Vec<f64> = (0..n)
        .map(|j| (0..rows).map(|i| g[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    svals.sort_by(|a, b| b.total_cmp(a));
    svals
}

/// Sum of singular values (nuclear norm).
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Transposes the B-subsystem block indices of a bipartite matrix.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
) -> Result<ComplexMatrix> {
    let d = dim_a * dim_b;
    if rho.rows != d || rho.cols != d {
        return Err(Error::DimensionMismatch(format!(
            "partial transpose expects a {d}x{d} matrix for dims ({dim_a}, {dim_b}), got {}x{}",
            rho.rows, rho.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for a in 0..dim_a {
        for b in 0..dim_b {
            for ap in 0..dim_a {
                for bp in 0..dim_b {
                    out[(a * dim_b + b, ap * dim_b + bp)] =
                        rho[(a * dim_b + bp, ap * dim_b + b)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out one subsystem of a bipartite matrix, keeping the other.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let d = dim_a * dim_b;
    if rho.rows != d || rho.cols != d {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {d}x{d} matrix for dims ({dim_a}, {dim_b}), got {}x{}",
            rho.rows, rho.cols
        )));
    }
    match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(dim_a, dim_a);
            for a in 0..dim_a {
                for ap in 0..dim_a {
                    let mut acc = Complex64::ZERO;
                    for b in 0..dim_b {
                        acc += rho[(a * dim_b + b, ap * dim_b + b)];
                    }
                    out[(a, ap)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(dim_b, dim_b);
            for b in 0..dim_b {
                for bp in 0..dim_b {
                    let mut acc = Complex64::ZERO;
                    for a in 0..dim_a {
                        acc += rho[(a * dim_b + b, a * dim_b + bp)];
                    }
                    out[(b, bp)] = acc;
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let g = random_matrix(rng, n, n);
        g.add(&g.dagger()).scale(c(0.5, 0.0))
    }

    /// Haar-ish random unitary: eigenvector matrix of a random Hermitian.
    fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let h = random_hermitian(rng, n);
        hermitian_eig(&h).unwrap().1
    }

    fn swap_operator(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, j) = (row / d, row % d);
            let (k, l) = (col / d, col % d);
            if i == l && j == k {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    fn max_entangled_4() -> ComplexMatrix {
        // |Phi+> = 1/2 sum_k |kk> on 4x4.
        ComplexMatrix::from_fn(16, 16, |row, col| {
            let (i, j) = (row / 4, row % 4);
            let (k, l) = (col / 4, col % 4);
            if i == j && k == l {
                c(0.25, 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_pauli_x_z() {
        let k = kron(&pauli(1).unwrap(), &pauli(3).unwrap());
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 2)] = c(1.0, 0.0);
        expected[(1, 3)] = c(-1.0, 0.0);
        expected[(2, 0)] = c(1.0, 0.0);
        expected[(3, 1)] = c(-1.0, 0.0);
        assert!(k.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn kron_trace_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 3, 3);
            let b = random_matrix(&mut rng, 3, 3);
            let lhs = kron(&a, &b).trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() < tol::STRICT);
        }
    }

    #[test]
    fn kron_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 2, 3);
            let b = random_matrix(&mut rng, 3, 2);
            let m = random_matrix(&mut rng, 2, 2);
            let lhs = kron(&kron(&a, &b), &m);
            let rhs = kron(&a, &kron(&b, &m));
            assert!(lhs.max_abs_diff(&rhs) < tol::STRICT);
        }
    }

    #[test]
    fn eig_diagonal_input() {
        let (vals, _) = hermitian_eig(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_pauli_x_spectrum() {
        let (vals, vecs) = hermitian_eig(&pauli(1).unwrap()).unwrap();
        assert!((vals[0] + 1.0).abs() < tol::STRICT);
        assert!((vals[1] - 1.0).abs() < tol::STRICT);
        assert!(vecs.unitarity_defect() < tol::EQUALITY);
    }

    #[test]
    fn eig_antisymmetric_projector_spectrum() {
        // P_as/6 on 4x4: eigenvalue 1/6 with multiplicity 6 = 4*3/2, rest 0.
        let v = swap_operator(4);
        let p_as = ComplexMatrix::identity(16).sub(&v).scale(c(0.5, 0.0));
        let (vals, _) = hermitian_eig(&p_as.scale(c(1.0 / 6.0, 0.0))).unwrap();
        let near = |x: f64, y: f64| (x - y).abs() < tol::EQUALITY;
        assert_eq!(vals.iter().filter(|&&x| near(x, 1.0 / 6.0)).count(), 6);
        assert_eq!(vals.iter().filter(|&&x| near(x, 0.0)).count(), 10);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            hermitian_eig(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_reconstructs_random_16x16() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let h = random_hermitian(&mut rng, 16);
            let (vals, vecs) = hermitian_eig(&h).unwrap();
            let lambda = ComplexMatrix::diag(&vals);
            let rebuilt = vecs.matmul(&lambda).matmul(&vecs.dagger());
            assert!(rebuilt.max_abs_diff(&h) < tol::EQUALITY);
            assert!(vecs.unitarity_defect() < tol::EQUALITY);
        }
    }

    #[test]
    fn trace_norm_zero_matrix() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(4, 4)), 0.0);
    }

    #[test]
    fn trace_norm_diagonal() {
        let m = ComplexMatrix::diag(&[1.0, -2.0, 3.0]);
        assert!((trace_norm(&m) - 6.0).abs() < tol::STRICT);
    }

    #[test]
    fn trace_norm_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let m = random_matrix(&mut rng, 6, 6);
            let u = random_unitary(&mut rng, 6);
            let w = random_unitary(&mut rng, 6);
            let rotated = u.matmul(&m).matmul(&w);
            assert!((trace_norm(&rotated) - trace_norm(&m)).abs() < tol::EQUALITY);
        }
    }

    #[test]
    fn trace_norm_rectangular_matches_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let m = random_matrix(&mut rng, 3, 5);
        assert!((trace_norm(&m) - trace_norm(&m.dagger())).abs() < tol::STRICT);
    }

    #[test]
    fn partial_transpose_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_hermitian(&mut rng, 4);
        // Real symmetric factor on B so that B^T = conj(B) is easy to compare.
        let b_raw = random_matrix(&mut rng, 4, 4);
        let b = ComplexMatrix::from_fn(4, 4, |i, j| {
            c((b_raw[(i, j)].re + b_raw[(j, i)].re) * 0.5, 0.0)
        });
        let pt = partial_transpose(&kron(&a, &b), 4, 4).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) < tol::STRICT);
    }

    #[test]
    fn partial_transpose_max_entangled_min_eigenvalue() {
        let pt = partial_transpose(&max_entangled_4(), 4, 4).unwrap();
        let (vals, _) = hermitian_eig(&pt).unwrap();
        assert!((vals[0] + 0.25).abs() < tol::EQUALITY);
    }

    #[test]
    fn partial_transpose_involution_and_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let h = random_hermitian(&mut rng, 16);
        let pt = partial_transpose(&h, 4, 4).unwrap();
        assert!((pt.trace() - h.trace()).norm() < tol::STRICT);
        assert_eq!(pt.hermiticity_defect(), 0.0);
        let back = partial_transpose(&pt, 4, 4).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn partial_transpose_rejects_bad_dims() {
        let m = ComplexMatrix::identity(6);
        assert!(matches!(
            partial_transpose(&m, 4, 4),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partial_trace_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_hermitian(&mut rng, 4);
        let b = random_hermitian(&mut rng, 4);
        let reduced = partial_trace(&kron(&a, &b), 4, 4, Subsystem::A).unwrap();
        assert!(reduced.max_abs_diff(&a.scale(b.trace())) < tol::STRICT);
    }

    #[test]
    fn partial_trace_max_entangled_marginal() {
        let reduced = partial_trace(&max_entangled_4(), 4, 4, Subsystem::B).unwrap();
        let expected = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(reduced.max_abs_diff(&expected) < tol::STRICT);
    }

    #[test]
    fn partial_trace_maximally_mixed() {
        let rho = ComplexMatrix::identity(16).scale(c(1.0 / 16.0, 0.0));
        let reduced = partial_trace(&rho, 4, 4, Subsystem::A).unwrap();
        let expected = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(reduced.max_abs_diff(&expected) < tol::STRICT);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
            proptest::collection::vec(
                (-1.0f64..1.0, -1.0f64..1.0),
                rows * cols,
            )
            .prop_map(move |entries| {
                ComplexMatrix::from_fn(rows, cols, |i, j| {
                    let (re, im) = entries[i * cols + j];
                    c(re, im)
                })
            })
        }

        proptest! {
            #[test]
            fn kron_trace_multiplicative((a, b) in (arb_matrix(3, 3), arb_matrix(2, 2))) {
                let lhs = kron(&a, &b).trace();
                let rhs = a.trace() * b.trace();
                prop_assert!((lhs - rhs).norm() < tol::STRICT);
            }

            #[test]
            fn partial_transpose_is_an_involution(m in arb_matrix(6, 6)) {
                let pt = partial_transpose(&m, 2, 3).unwrap();
                let back = partial_transpose(&pt, 2, 3).unwrap();
                prop_assert!(back.max_abs_diff(&m) == 0.0);
                prop_assert!((pt.trace() - m.trace()).norm() == 0.0);
            }

            #[test]
            fn trace_norm_is_subadditive((a, b) in (arb_matrix(4, 4), arb_matrix(4, 4))) {
                let sum = trace_norm(&a.add(&b));
                let parts = trace_norm(&a) + trace_norm(&b);
                prop_assert!(sum <= parts + tol::EQUALITY);
            }

            #[test]
            fn hermitian_eig_reconstructs(m in arb_matrix(5, 5)) {
                let h = m.add(&m.dagger()).scale(c(0.5, 0.0));
                let (vals, vecs) = hermitian_eig(&h).unwrap();
                let rebuilt = vecs
                    .matmul(&ComplexMatrix::diag(&vals))
                    .matmul(&vecs.dagger());
                prop_assert!(rebuilt.max_abs_diff(&h) < tol::EQUALITY);
            }
        }
    }
}
