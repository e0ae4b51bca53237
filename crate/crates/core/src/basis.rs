//! Pauli matrices, the normalized Pauli-product operator basis, permuted
//! partner bases, conjugation-sign tables, and orthonormal Hermitian bases
//! for general local dimension.
//!
//! Index convention: a basis label is a pair `(k0, k1)` of Pauli indices with
//! flat form `4*k0 + k1 + 1`, so flat indices run 1..=16. Permutations are
//! stored 1-based to match that convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matops::{kron, ComplexMatrix};

/// Label of a Pauli-product basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliIndex {
    pub k0: u8,
    pub k1: u8,
}

impl PauliIndex {
    pub fn new(k0: u8, k1: u8) -> Self {
        assert!(k0 < 4 && k1 < 4);
        Self { k0, k1 }
    }

    /// 1-based flat index `4*k0 + k1 + 1`.
    pub fn flat(self) -> usize {
        4 * self.k0 as usize + self.k1 as usize + 1
    }

    /// Inverse of [`PauliIndex::flat`].
    pub fn from_flat(flat: usize) -> Result<Self> {
        if !(1..=16).contains(&flat) {
            return Err(Error::IndexOutOfRange(format!(
                "flat Pauli index must be in 1..=16, got {flat}"
            )));
        }
        Ok(Self {
            k0: ((flat - 1) / 4) as u8,
            k1: ((flat - 1) % 4) as u8,
        })
    }
}

/// The 2x2 Pauli matrix `sigma_i` for `i` in 0..=3 (identity, X, Y, Z).
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let c = Complex64::new;
    let rows = match i {
        0 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        1 => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        2 => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        3 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => {
            return Err(Error::IndexOutOfRange(format!(
                "Pauli index must be in 0..=3, got {i}"
            )))
        }
    };
    Ok(ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]))
}

/// A 1-based permutation of `{1..16}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: [usize; 16],
}

impl Permutation {
    pub fn identity() -> Self {
        let mut map = [0usize; 16];
        for (i, slot) in map.iter_mut().enumerate() {
            *slot = i + 1;
        }
        Self { map }
    }

    /// Builds from 1-based images `map[k-1] = P(k)`; must be a bijection.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.len() != 16 {
            return Err(Error::InvalidPermutation(format!(
                "expected 16 images, got {}",
                images.len()
            )));
        }
        let mut seen = [false; 16];
        for &img in images {
            if !(1..=16).contains(&img) || seen[img - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "images {images:?} are not a bijection on 1..=16"
                )));
            }
            seen[img - 1] = true;
        }
        let mut map = [0usize; 16];
        map.copy_from_slice(images);
        Ok(Self { map })
    }

    /// Identity with the listed 1-based pairs swapped.
    pub fn from_swaps(swaps: &[(usize, usize)]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=16).collect();
        for &(a, b) in swaps {
            if !(1..=16).contains(&a) || !(1..=16).contains(&b) {
                return Err(Error::InvalidPermutation(format!(
                    "swap ({a}, {b}) out of range"
                )));
            }
            images.swap(a - 1, b - 1);
        }
        Self::from_images(&images)
    }

    /// Image of the 1-based index `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.map[k - 1]
    }

    pub fn images(&self) -> &[usize; 16] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

/// The operator basis `A_k = (1/2) sigma_{k0} x sigma_{k1}` together with the
/// permuted partner basis `B_k = A_{P(k)}`.
#[derive(Debug, Clone)]
pub struct ProductBasis {
    operators: Vec<ComplexMatrix>,
    permutation: Permutation,
}

impl ProductBasis {
    pub fn new(permutation: Permutation) -> Self {
        let mut operators = Vec::with_capacity(16);
        for flat in 1..=16 {
            let idx = PauliIndex::from_flat(flat).expect("flat in range");
            let op = kron(
                &pauli(idx.k0 as usize).expect("pauli index in range"),
                &pauli(idx.k1 as usize).expect("pauli index in range"),
            )
            .scale(Complex64::new(0.5, 0.0));
            operators.push(op);
        }
        Self {
            operators,
            permutation,
        }
    }

    pub fn with_identity_permutation() -> Self {
        Self::new(Permutation::identity())
    }

    /// `A_k` for 1-based `k`.
    pub fn a(&self, k: usize) -> &ComplexMatrix {
        &self.operators[k - 1]
    }

    /// `B_k = A_{P(k)}` for 1-based `k`.
    pub fn b(&self, k: usize) -> &ComplexMatrix {
        &self.operators[self.permutation.apply(k) - 1]
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    /// All 16 `A_k` in order.
    pub fn a_operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

/// Builds the product basis for a given permutation.
pub fn product_basis(permutation: Permutation) -> ProductBasis {
    ProductBasis::new(permutation)
}

fn pair_sign(i: u8, j: u8) -> i8 {
    if i == j || i == 0 || j == 0 {
        1
    } else {
        -1
    }
}

/// Sign `eta` with `Tr(A_x A_z A_x A_z) = eta / 4`, from the Pauli
/// conjugation relations: `sigma_i sigma_j sigma_i = +/- sigma_j` with plus
/// exactly when `i = j` or either index is the identity.
pub fn conj_sign(x: PauliIndex, z: PauliIndex) -> i8 {
    pair_sign(x.k0, z.k0) * pair_sign(x.k1, z.k1)
}

/// Same sign computed on the permuted B side:
/// `Tr(B_y B_z B_y B_z) = conj_sign(P(y), P(z)) / 4`.
pub fn conj_sign_b(perm: &Permutation, y: usize, z: usize) -> i8 {
    let py = PauliIndex::from_flat(perm.apply(y)).expect("permutation image in range");
    let pz = PauliIndex::from_flat(perm.apply(z)).expect("permutation image in range");
    conj_sign(py, pz)
}

/// Full `16 Tr(A_x A_z A_x A_z) Tr(B_y B_z B_y B_z)` sign table.
#[derive(Debug, Clone)]
pub struct SignTable {
    /// `signs[x-1][y-1][z-1]`, each +/-1.
    signs: Vec<[[i8; 16]; 16]>,
}

impl SignTable {
    pub fn get(&self, x: usize, y: usize, z: usize) -> i8 {
        self.signs[x - 1][y - 1][z - 1]
    }
}

/// Tabulates `s(x, y, z) = conj_sign(x, z) * conj_sign_B(y, z)` for the basis.
pub fn sign_table(basis: &ProductBasis) -> SignTable {
    let perm = basis.permutation();
    let mut signs = vec![[[0i8; 16]; 16]; 16];
    for x in 1..=16 {
        let xi = PauliIndex::from_flat(x).expect("in range");
        for z in 1..=16 {
            let zi = PauliIndex::from_flat(z).expect("in range");
            let a_side = conj_sign(xi, zi);
            for y in 1..=16 {
                signs[x - 1][y - 1][z - 1] = a_side * conj_sign_b(perm, y, z);
            }
        }
    }
    SignTable { signs }
}

/// Orthonormal Hermitian operator basis for dimension `d`: the normalized
/// identity first, then the generalized Gell-Mann operators (symmetric pairs,
/// antisymmetric pairs, diagonal), each group in lexicographic index order.
pub fn hermitian_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "hermitian basis needs dimension >= 2, got {d}"
        )));
    }
    let mut ops = Vec::with_capacity(d * d);

    let norm = 1.0 / (d as f64).sqrt();
    ops.push(ComplexMatrix::identity(d).scale(Complex64::new(norm, 0.0)));

    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(inv_sqrt2, 0.0);
            sym[(k, j)] = Complex64::new(inv_sqrt2, 0.0);
            ops.push(sym);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut asym = ComplexMatrix::zeros(d, d);
            asym[(j, k)] = Complex64::new(0.0, -inv_sqrt2);
            asym[(k, j)] = Complex64::new(0.0, inv_sqrt2);
            ops.push(asym);
        }
    }
    for l in 1..d {
        let scale = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            diag[(j, j)] = Complex64::new(scale, 0.0);
        }
        diag[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        ops.push(diag);
    }

    debug_assert_eq!(ops.len(), d * d);
    Ok(ops)
}

/// Checks `Tr(G_k G_l) = delta_kl` for a candidate operator basis.
pub fn gram_defect(ops: &[ComplexMatrix]) -> f64 {
    let mut defect: f64 = 0.0;
    for (k, gk) in ops.iter().enumerate() {
        for (l, gl) in ops.iter().enumerate() {
            let inner = gk.trace_product(gl);
            let expected = if k == l { 1.0 } else { 0.0 };
            defect = defect.max((inner - Complex64::new(expected, 0.0)).norm());
        }
    }
    defect
}
