//! Constructors for the two-ququart state catalog: the seven Bloch-diagonal
//! states, the Werner family, the maximally entangled state, the embedded
//! 3x3 bound entangled state, the asymmetric-noise family, noise channels,
//! and the Bell-pair mixture assembly of the Bloch-product-diagonal state.

use num_complex::Complex64;

use crate::basis::{pauli, Permutation, ProductBasis};
use crate::error::{Error, Result};
use crate::matops::{self, kron, ComplexMatrix};
use crate::tol;

/// Constants used by the catalog states.
pub mod constants {
    /// `q = 19/340` (Werner state at the local-model boundary).
    pub const Q: f64 = 19.0 / 340.0;
    /// `r1 = (sqrt(2) - 1)/4`.
    pub fn r1() -> f64 {
        (std::f64::consts::SQRT_2 - 1.0) / 4.0
    }
    /// `r2 = (2 - sqrt(2))/4`.
    pub fn r2() -> f64 {
        (2.0 - std::f64::consts::SQRT_2) / 4.0
    }
    /// `r3 = r2 - r1`.
    pub fn r3() -> f64 {
        r2() - r1()
    }
    /// `r4 = r2 / 2`.
    pub fn r4() -> f64 {
        r2() / 2.0
    }
    /// 7-digit truncations from the experimental-certification literature.
    pub const S1: f64 = 0.055_706_6;
    pub const S2: f64 = 0.014_266_4;
    pub const S3: f64 = 0.097_146_7;
}

/// Bipartite density matrix with subsystem dimension tags.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (up to `psd_slack`,
    /// a non-positive number) before wrapping the matrix.
    pub fn new(
        matrix: ComplexMatrix,
        dim_a: usize,
        dim_b: usize,
        psd_slack: f64,
    ) -> Result<Self> {
        let d = dim_a * dim_b;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "state for dims ({dim_a}, {dim_b}) must be {d}x{d}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let report = validate_matrix(&matrix);
        if !report.passes_with(tol::HERMITICITY, tol::TRACE, psd_slack) {
            return Err(Error::InvalidState(report.describe()));
        }
        Ok(Self {
            matrix,
            dim_a,
            dim_b,
        })
    }

    pub fn with_default_slack(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(matrix, dim_a, dim_b, tol::PSD_SLACK)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }
}

/// Validation diagnostics for a candidate density matrix.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    /// Single-tolerance check: all three defects within `tolerance`.
    pub fn passes(&self, tolerance: f64) -> bool {
        self.passes_with(tolerance, tolerance, -tolerance)
    }

    pub fn passes_with(&self, herm_tol: f64, trace_tol: f64, psd_slack: f64) -> bool {
        self.hermiticity_defect <= herm_tol
            && self.trace_defect <= trace_tol
            && self.min_eigenvalue >= psd_slack
    }

    fn describe(&self) -> String {
        format!(
            "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
            self.hermiticity_defect, self.trace_defect, self.min_eigenvalue
        )
    }
}

/// Computes the validation diagnostics of a raw matrix.
pub fn validate_matrix(m: &ComplexMatrix) -> ValidationReport {
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - Complex64::ONE).norm();
    // Eigenvalues of the symmetrized matrix; for near-Hermitian inputs this
    // is the meaningful positivity measure.
    let sym = m.add(&m.dagger()).scale(Complex64::new(0.5, 0.0));
    let min_eigenvalue = matops::hermitian_eig(&sym)
        .map(|(vals, _)| vals[0])
        .unwrap_or(f64::NEG_INFINITY);
    ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
    }
}

/// Report-only state check, per the diagnostics above.
pub fn validate_state(rho: &DensityMatrix, tolerance: f64) -> (ValidationReport, bool) {
    let report = validate_matrix(rho.matrix());
    let pass = report.passes(tolerance);
    (report, pass)
}

/// 16 Bloch coefficients plus the B-side index permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDiagonalSpec {
    pub lambdas: [f64; 16],
    pub permutation: Permutation,
}

impl BlochDiagonalSpec {
    pub fn new(lambdas: [f64; 16], permutation: Permutation) -> Self {
        Self {
            lambdas,
            permutation,
        }
    }
}

/// Builds `rho = sum_k lambda_k A_k x B_k` and validates it.
pub fn from_bloch_diagonal(spec: &BlochDiagonalSpec) -> Result<DensityMatrix> {
    from_bloch_diagonal_with_slack(spec, tol::PSD_SLACK)
}

/// Same as [`from_bloch_diagonal`] with an explicit positivity slack, for
/// specs whose coefficients are truncated literature constants.
pub fn from_bloch_diagonal_with_slack(
    spec: &BlochDiagonalSpec,
    psd_slack: f64,
) -> Result<DensityMatrix> {
    let basis = ProductBasis::new(spec.permutation.clone());
    let mut m = ComplexMatrix::zeros(16, 16);
    for k in 1..=16 {
        let lambda = spec.lambdas[k - 1];
        if lambda == 0.0 {
            continue;
        }
        m.add_scaled(&kron(basis.a(k), basis.b(k)), lambda);
    }
    DensityMatrix::new(m, 4, 4, psd_slack)
}

/// Identifier for the states under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateId {
    /// Maximally entangled two-ququart state.
    Me,
    /// Antisymmetric Werner state (`p = 1`).
    WernerAs,
    /// Werner state at the local-hidden-variable boundary (`p = 27/34`).
    WernerLoc,
    /// Rank-6 metrologically useful bound entangled state.
    R6,
    /// Rank-8 metrologically useful bound entangled state.
    R8,
    /// Bloch-product-diagonal bound entangled state.
    Bpd,
    /// Bound entangled state certified with high statistical significance.
    Sentis,
    /// 3x3 bound entangled state embedded in the two-ququart space.
    Rho3x3,
    /// Asymmetric-noise family `v * rho_BPD + (1-v) * noise`.
    Asym(f64),
}

impl StateId {
    /// The seven Bloch-diagonal catalog rows, in table order.
    pub fn table1() -> [StateId; 7] {
        [
            StateId::Me,
            StateId::WernerAs,
            StateId::WernerLoc,
            StateId::R6,
            StateId::R8,
            StateId::Bpd,
            StateId::Sentis,
        ]
    }

    pub fn name(&self) -> String {
        match self {
            StateId::Me => "rho_ME".into(),
            StateId::WernerAs => "rho_W_as".into(),
            StateId::WernerLoc => "rho_W_loc".into(),
            StateId::R6 => "rho_R6".into(),
            StateId::R8 => "rho_R8".into(),
            StateId::Bpd => "rho_BPD".into(),
            StateId::Sentis => "rho_Sentis".into(),
            StateId::Rho3x3 => "rho_3x3".into(),
            StateId::Asym(v) => format!("rho_asym({v})"),
        }
    }

    /// Positivity slack appropriate for the state's defining constants.
    pub fn psd_slack(&self) -> f64 {
        match self {
            StateId::Sentis => tol::PSD_SLACK_TRUNCATED,
            _ => tol::PSD_SLACK,
        }
    }
}

impl std::str::FromStr for StateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(v) = lower.strip_prefix("asym:") {
            let v: f64 = v
                .parse()
                .map_err(|_| Error::UnknownStateId(s.to_string()))?;
            return Ok(StateId::Asym(v));
        }
        match lower.as_str() {
            "me" => Ok(StateId::Me),
            "werner-as" => Ok(StateId::WernerAs),
            "werner-loc" => Ok(StateId::WernerLoc),
            "r6" => Ok(StateId::R6),
            "r8" => Ok(StateId::R8),
            "bpd" => Ok(StateId::Bpd),
            "sentis" => Ok(StateId::Sentis),
            "rho3x3" => Ok(StateId::Rho3x3),
            _ => Err(Error::UnknownStateId(s.to_string())),
        }
    }
}

/// Bloch coefficients and permutation for the seven catalog rows.
pub fn bloch_spec(id: StateId) -> Result<BlochDiagonalSpec> {
    use constants::*;
    let quarter = 0.25;
    let (lambdas, permutation) = match id {
        StateId::Me => (
            [
                quarter, quarter, -quarter, quarter, quarter, quarter, -quarter, quarter,
                -quarter, -quarter, quarter, -quarter, quarter, quarter, -quarter, quarter,
            ],
            Permutation::identity(),
        ),
        StateId::WernerAs => {
            let mut l = [-1.0 / 12.0; 16];
            l[0] = quarter;
            (l, Permutation::identity())
        }
        StateId::WernerLoc => {
            let mut l = [-Q; 16];
            l[0] = quarter;
            (l, Permutation::identity())
        }
        StateId::R6 => (
            [
                quarter,
                0.0,
                0.0,
                -r1(),
                r2(),
                r2(),
                0.0,
                -r2(),
                0.0,
                0.0,
                r2(),
                0.0,
                r3(),
                0.0,
                0.0,
                r1(),
            ],
            Permutation::from_swaps(&[(6, 11)])?,
        ),
        StateId::R8 => (
            [
                quarter,
                r4(),
                -r4(),
                r3(),
                r1(),
                r4(),
                -r4(),
                -r1(),
                0.0,
                -r4(),
                -r4(),
                0.0,
                0.0,
                -r4(),
                -r4(),
                0.0,
            ],
            Permutation::from_swaps(&[(10, 11), (14, 15)])?,
        ),
        StateId::Bpd => {
            let twelfth = 1.0 / 12.0;
            (
                [
                    quarter, twelfth, -twelfth, -twelfth, -twelfth, twelfth, twelfth, twelfth,
                    twelfth, twelfth, twelfth, -twelfth, twelfth, twelfth, -twelfth, twelfth,
                ],
                Permutation::identity(),
            )
        }
        StateId::Sentis => (
            [
                quarter,
                -S1,
                -S1,
                -S1,
                -S1,
                -S1,
                S2,
                S3,
                -S1,
                S3,
                S2,
                -S1,
                S2,
                -S1,
                S3,
                -S1,
            ],
            Permutation::identity(),
        ),
        StateId::Rho3x3 | StateId::Asym(_) => {
            return Err(Error::UnknownStateId(format!(
                "{} is not a Bloch-diagonal catalog row",
                id.name()
            )))
        }
    };
    Ok(BlochDiagonalSpec::new(lambdas, permutation))
}

/// Constructs any state in the catalog.
pub fn catalog(id: StateId) -> Result<DensityMatrix> {
    match id {
        StateId::Rho3x3 => rho_3x3(),
        StateId::Asym(v) => rho_asym(v),
        _ => from_bloch_diagonal_with_slack(&bloch_spec(id)?, id.psd_slack()),
    }
}

/// Swap operator `V = sum_{ij} |ji><ij|` on a `d x d` bipartite space.
pub fn swap_operator(d: usize) -> ComplexMatrix {
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

/// Werner state `p P_as / dim(as) + (1-p) P_sym / dim(sym)` on `d x d`.
pub fn werner(p: f64, d: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!(
            "Werner parameter must be in [0, 1], got {p}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "Werner state needs local dimension >= 2, got {d}"
        )));
    }
    let v = swap_operator(d);
    let id = ComplexMatrix::identity(d * d);
    let p_as = id.sub(&v).scale(Complex64::new(0.5, 0.0));
    let p_sym = id.add(&v).scale(Complex64::new(0.5, 0.0));
    let dim_as = (d * (d - 1) / 2) as f64;
    let dim_sym = (d * (d + 1) / 2) as f64;
    let m = p_as
        .scale(Complex64::new(p / dim_as, 0.0))
        .add(&p_sym.scale(Complex64::new((1.0 - p) / dim_sym, 0.0)));
    DensityMatrix::with_default_slack(m, d, d)
}

/// Projector onto the canonical maximally entangled vector on `d x d`.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "maximally entangled state needs dimension >= 2, got {d}"
        )));
    }
    let norm = 1.0 / d as f64;
    let m = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        if i == j && k == l {
            Complex64::new(norm, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    DensityMatrix::with_default_slack(m, d, d)
}

/// Embeds a state into the first levels of each side of a `big_d x big_d`
/// bipartite space.
fn embed(rho: &DensityMatrix, big_d: usize) -> ComplexMatrix {
    let (da, db) = (rho.dim_a(), rho.dim_b());
    ComplexMatrix::from_fn(big_d * big_d, big_d * big_d, |row, col| {
        let (a, b) = (row / big_d, row % big_d);
        let (ap, bp) = (col / big_d, col % big_d);
        if a < da && ap < da && b < db && bp < db {
            rho.matrix()[(a * db + b, ap * db + bp)]
        } else {
            Complex64::ZERO
        }
    })
}

/// `v rho + (1 - v) I / D^2`, embedding `rho` into the top-left block of a
/// `D x D` bipartite space when `D` exceeds the state's local dimension.
pub fn isotropic_mix(rho: &DensityMatrix, v: f64, big_d: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::DomainError(format!(
            "visibility must be in [0, 1], got {v}"
        )));
    }
    if big_d < rho.dim_a() || big_d < rho.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "target dimension {big_d} is smaller than the state's local dims ({}, {})",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let n = big_d * big_d;
    let mut m = embed(rho, big_d).scale(Complex64::new(v, 0.0));
    let mixed_weight = (1.0 - v) / n as f64;
    for i in 0..n {
        m[(i, i)] += Complex64::new(mixed_weight, 0.0);
    }
    DensityMatrix::with_default_slack(m, big_d, big_d)
}

/// Local re-preparation channel: each side is projected onto its first four
/// levels; the weight that falls outside is re-prepared as `rho_a x rho_b`.
/// The output is reported on the 4x4 message space.
pub fn reprepare_channel(
    rho_dv: &DensityMatrix,
    rho_a: &ComplexMatrix,
    rho_b: &ComplexMatrix,
) -> Result<DensityMatrix> {
    let big_d = rho_dv.dim_a();
    if rho_dv.dim_b() != big_d || big_d < 4 {
        return Err(Error::DimensionMismatch(format!(
            "input must live on D x D with D >= 4, got ({}, {})",
            rho_dv.dim_a(),
            rho_dv.dim_b()
        )));
    }
    for (label, m) in [("rho_a", rho_a), ("rho_b", rho_b)] {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "{label} must be 4x4, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let report = validate_matrix(m);
        if !report.passes_with(tol::HERMITICITY, tol::TRACE, tol::PSD_SLACK) {
            return Err(Error::InvalidState(format!(
                "{label}: {}",
                report.describe()
            )));
        }
    }

    // P rho P restricted to the embedded 4x4 block.
    let mut block = ComplexMatrix::zeros(16, 16);
    for a in 0..4 {
        for b in 0..4 {
            for ap in 0..4 {
                for bp in 0..4 {
                    block[(a * 4 + b, ap * 4 + bp)] =
                        rho_dv.matrix()[(a * big_d + b, ap * big_d + bp)];
                }
            }
        }
    }
    let outside_weight = 1.0 - block.trace().re;
    let mut out = block;
    out.add_scaled(&kron(rho_a, rho_b), outside_weight);
    DensityMatrix::with_default_slack(out, 4, 4)
}

/// Assembles the Bloch-product-diagonal bound entangled state as the equal
/// mixture of six Bell-product projectors, then regroups the qubit order
/// from (A B)(A' B') pairs to Alice = (A A'), Bob = (B B') ququarts.
pub fn bpd_from_bell_mixture() -> DensityMatrix {
    let c = Complex64::new;
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    // |Psi_1> = (|01> + |10>)/sqrt(2).
    let psi1 = [
        c(0.0, 0.0),
        c(inv_sqrt2, 0.0),
        c(inv_sqrt2, 0.0),
        c(0.0, 0.0),
    ];
    let apply_first = |sigma: &ComplexMatrix, v: &[Complex64; 4]| {
        let mut out = [Complex64::ZERO; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            let (a, b) = (i / 2, i % 2);
            for ap in 0..2 {
                *slot += sigma[(a, ap)] * v[ap * 2 + b];
            }
        }
        out
    };
    let rotated: Vec<[Complex64; 4]> = [0usize, 1, 3]
        .iter()
        .map(|&k| apply_first(&pauli(k).expect("pauli index in range"), &psi1))
        .collect();
    let psi4 = apply_first(&pauli(2).expect("pauli index in range"), &psi1);

    // Accumulate the six projectors in (A, B, A', B') qubit order.
    let mut mixed = ComplexMatrix::zeros(16, 16);
    for v in &rotated {
        let full: Vec<Complex64> = (0..16).map(|i| v[i / 4] * v[i % 4]).collect();
        mixed.add_scaled(&ComplexMatrix::outer(&full), 1.0 / 6.0);
    }
    for v in &rotated {
        let full: Vec<Complex64> = (0..16).map(|i| psi4[i / 4] * v[i % 4]).collect();
        mixed.add_scaled(&ComplexMatrix::outer(&full), 1.0 / 6.0);
    }

    // Regroup qubits [A, B, A', B'] -> [A, A', B, B']: the ququart spaces
    // are Alice = (A, A') and Bob = (B, B').
    let regroup = |i: usize| -> usize {
        let (a, b, apr, bpr) = (i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1);
        a << 3 | apr << 2 | b << 1 | bpr
    };
    let mut m = ComplexMatrix::zeros(16, 16);
    for i in 0..16 {
        for j in 0..16 {
            m[(regroup(i), regroup(j))] = mixed[(i, j)];
        }
    }
    DensityMatrix {
        matrix: m,
        dim_a: 4,
        dim_b: 4,
    }
}

/// The embedded 3x3 bound entangled state, assembled from its correlation
/// matrix in the Pauli-product basis.
pub fn rho_3x3() -> Result<DensityMatrix> {
    use constants::*;
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
    // (k, l, value) upper-triangle entries, 1-based; the matrix is symmetric.
    let off = [
        (1, 13, 0.125),
        (1, 16, -0.125),
        (7, 10, -r4()),
        (6, 11, r4()),
        (2, 14, r4()),
        (3, 15, -r4()),
        (4, 13, r3() / 2.0),
        (4, 16, -r3() / 2.0),
    ];
    let basis = ProductBasis::with_identity_permutation();
    let mut m = ComplexMatrix::zeros(16, 16);
    for k in 1..=16 {
        if diag[k - 1] != 0.0 {
            m.add_scaled(&kron(basis.a(k), basis.a(k)), diag[k - 1]);
        }
    }
    for &(k, l, value) in &off {
        m.add_scaled(&kron(basis.a(k), basis.a(l)), value);
        m.add_scaled(&kron(basis.a(l), basis.a(k)), value);
    }
    DensityMatrix::with_default_slack(m, 4, 4)
}

/// Normalized vector of independent standard complex Gaussians.
pub fn random_pure_state(rng: &mut impl rand::Rng, d: usize) -> Vec<Complex64> {
    use rand_distr::StandardNormal;
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|&z| z / norm).collect();
        }
    }
}

/// Random `d x d` density matrix of the given rank: a complex Gaussian
/// factor `G` of shape `d x rank` normalized as `G G^dagger / Tr`.
pub fn random_density(rng: &mut impl rand::Rng, d: usize, rank: usize) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    let rank = rank.clamp(1, d);
    let g = ComplexMatrix::from_fn(d, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = g.matmul(&g.dagger());
    let trace = m.trace().re;
    m.scale(Complex64::new(1.0 / trace, 0.0))
}

/// [`random_density`] with bipartite dimension tags.
pub fn random_density_matrix(
    rng: &mut impl rand::Rng,
    dim_a: usize,
    dim_b: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    DensityMatrix::with_default_slack(random_density(rng, dim_a * dim_b, rank), dim_a, dim_b)
}

/// Random unitary, taken as the eigenvector matrix of a random Hermitian.
pub fn random_unitary(rng: &mut impl rand::Rng, d: usize) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = g.add(&g.dagger()).scale(Complex64::new(0.5, 0.0));
    matops::hermitian_eig(&h)
        .expect("random Hermitian matrix decomposes")
        .1
}

/// `v rho_BPD + (1 - v) (I_4/4) x |0><0|`.
///
/// The pure-noise term is normalized so the mixture has unit trace; with
/// this reading the diagonal of the correlation tensor obeys
/// `S(v) = 1/4 + 5v/4`, which crosses the detection threshold `S = 1`
/// exactly at `v = 0.6`.
pub fn rho_asym(v: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::DomainError(format!(
            "visibility must be in [0, 1], got {v}"
        )));
    }
    let bpd = catalog(StateId::Bpd)?;
    let mut ground = ComplexMatrix::zeros(4, 4);
    ground[(0, 0)] = Complex64::ONE;
    let noise = kron(
        &ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)),
        &ground,
    );
    let mut m = bpd.matrix().scale(Complex64::new(v, 0.0));
    m.add_scaled(&noise, 1.0 - v);
    DensityMatrix::with_default_slack(m, 4, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::sign_table;
    use crate::matops::{partial_trace, partial_transpose, Subsystem};

    fn min_pt_eigenvalue(rho: &DensityMatrix) -> f64 {
        let pt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b()).unwrap();
        matops::hermitian_eig(&pt).unwrap().0[0]
    }

    #[test]
    fn bloch_maximally_mixed() {
        let mut lambdas = [0.0; 16];
        lambdas[0] = 0.25;
        let spec = BlochDiagonalSpec::new(lambdas, Permutation::identity());
        let rho = from_bloch_diagonal(&spec).unwrap();
        let expected = ComplexMatrix::identity(16).scale(Complex64::new(1.0 / 16.0, 0.0));
        assert!(rho.matrix().max_abs_diff(&expected) < tol::STRICT);
    }

    #[test]
    fn bloch_round_trip_recovers_lambdas() {
        let spec = bloch_spec(StateId::R8).unwrap();
        let rho = catalog(StateId::R8).unwrap();
        let basis = ProductBasis::new(spec.permutation.clone());
        for k in 1..=16 {
            let t = kron(basis.a(k), basis.b(k)).trace_product(rho.matrix());
            assert!((t.re - spec.lambdas[k - 1]).abs() < tol::STRICT);
            assert!(t.im.abs() < tol::STRICT);
        }
    }

    #[test]
    fn max_entangled_is_pure_and_matches_table_column() {
        let rho = catalog(StateId::Me).unwrap();
        let squared = rho.matrix().matmul(rho.matrix());
        assert!(squared.max_abs_diff(rho.matrix()) < tol::EQUALITY);
        let direct = max_entangled(4).unwrap();
        assert!(rho.matrix().max_abs_diff(direct.matrix()) < tol::STRICT);
    }

    #[test]
    fn max_entangled_d2_is_bell_projector() {
        let rho = max_entangled(2).unwrap();
        let c = Complex64::new;
        for (i, j, want) in [(0, 0, 0.5), (0, 3, 0.5), (3, 0, 0.5), (3, 3, 0.5)] {
            assert_eq!(rho.matrix()[(i, j)], c(want, 0.0));
        }
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn werner_antisymmetric_matches_table_column() {
        let direct = werner(1.0, 4).unwrap();
        let table = catalog(StateId::WernerAs).unwrap();
        assert!(direct.matrix().max_abs_diff(table.matrix()) < tol::EQUALITY);
        assert!(werner(1.2, 4).is_err());
        assert!(werner(-0.1, 4).is_err());
    }

    #[test]
    fn catalog_states_are_valid() {
        for id in StateId::table1() {
            let rho = catalog(id).unwrap();
            let report = validate_matrix(rho.matrix());
            assert!(
                report.passes_with(tol::HERMITICITY, tol::TRACE, id.psd_slack()),
                "{}: {report:?}",
                id.name()
            );
        }
    }

    #[test]
    fn catalog_ppt_members() {
        for id in [StateId::R6, StateId::R8, StateId::Bpd, StateId::Sentis] {
            assert!(
                min_pt_eigenvalue(&catalog(id).unwrap()) >= -1e-6,
                "{} should be PPT",
                id.name()
            );
        }
    }

    #[test]
    fn validate_state_examples() {
        let mixed = DensityMatrix::with_default_slack(
            ComplexMatrix::identity(16).scale(Complex64::new(1.0 / 16.0, 0.0)),
            4,
            4,
        )
        .unwrap();
        let (report, pass) = validate_state(&mixed, 1e-9);
        assert!(pass, "{report:?}");

        let off = ComplexMatrix::identity(16).scale(Complex64::new(0.9 / 16.0, 0.0));
        let report = validate_matrix(&off);
        assert!((report.trace_defect - 0.1).abs() < tol::STRICT);
        assert!(!report.passes(1e-9));

        let sentis = catalog(StateId::Sentis).unwrap();
        let (_, pass) = validate_state(&sentis, 1e-6);
        assert!(pass);
    }

    #[test]
    fn isotropic_mix_limits() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let unchanged = isotropic_mix(&bpd, 1.0, 4).unwrap();
        assert!(unchanged.matrix().max_abs_diff(bpd.matrix()) < tol::STRICT);

        let fully_mixed = isotropic_mix(&bpd, 0.0, 4).unwrap();
        let expected = ComplexMatrix::identity(16).scale(Complex64::new(1.0 / 16.0, 0.0));
        assert!(fully_mixed.matrix().max_abs_diff(&expected) < tol::STRICT);

        assert!(isotropic_mix(&bpd, 1.5, 4).is_err());
        assert!(isotropic_mix(&bpd, 0.5, 3).is_err());
    }

    #[test]
    fn isotropic_mix_ppt_boundary_of_max_entangled() {
        let me = catalog(StateId::Me).unwrap();
        let boundary = isotropic_mix(&me, 0.2, 4).unwrap();
        assert!(min_pt_eigenvalue(&boundary).abs() < tol::EQUALITY);
    }

    #[test]
    fn reprepare_identity_at_d4() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let mixed = isotropic_mix(&bpd, 0.7, 4).unwrap();
        let id4 = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let out = reprepare_channel(&mixed, &id4, &id4).unwrap();
        assert!(out.matrix().max_abs_diff(mixed.matrix()) < tol::STRICT);
    }

    #[test]
    fn reprepare_isotropic_noise_is_dimension_free() {
        let bpd = catalog(StateId::Bpd).unwrap();
        let id4 = ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        let v = 0.35;
        let reference = isotropic_mix(&bpd, v, 4).unwrap();
        for big_d in [5, 6] {
            let mixed = isotropic_mix(&bpd, v, big_d).unwrap();
            let out = reprepare_channel(&mixed, &id4, &id4).unwrap();
            assert!(
                out.matrix().max_abs_diff(reference.matrix()) < tol::EQUALITY,
                "D = {big_d}"
            );
            assert!((out.matrix().trace() - Complex64::ONE).norm() < tol::STRICT);
        }
    }

    #[test]
    fn bell_mixture_equals_table_column() {
        let assembled = bpd_from_bell_mixture();
        let table = catalog(StateId::Bpd).unwrap();
        assert!((assembled.matrix().trace() - Complex64::ONE).norm() < tol::STRICT);
        assert!(assembled.matrix().max_abs_diff(table.matrix()) < tol::STRICT);
        assert!(min_pt_eigenvalue(&assembled) >= -tol::EQUALITY);
    }

    #[test]
    fn rho_3x3_is_valid_ppt_and_rank_3_supported() {
        let rho = rho_3x3().unwrap();
        assert!(min_pt_eigenvalue(&rho) >= -tol::EQUALITY);
        for keep in [Subsystem::A, Subsystem::B] {
            let marginal = partial_trace(rho.matrix(), 4, 4, keep).unwrap();
            let (vals, _) = matops::hermitian_eig(&marginal).unwrap();
            let rank = vals.iter().filter(|&&x| x > 1e-9).count();
            assert!(rank <= 3, "marginal rank {rank}");
        }
    }

    #[test]
    fn rho_asym_limits_and_validity() {
        let at_one = rho_asym(1.0).unwrap();
        let bpd = catalog(StateId::Bpd).unwrap();
        assert!(at_one.matrix().max_abs_diff(bpd.matrix()) < tol::STRICT);
        for v in [0.0, 0.3, 0.6, 0.9] {
            let rho = rho_asym(v).unwrap();
            assert!((rho.matrix().trace() - Complex64::ONE).norm() < tol::STRICT);
        }
        assert!(rho_asym(-0.2).is_err());
        assert!(rho_asym(1.2).is_err());
    }

    #[test]
    fn pauli_product_conjugation_keeps_bloch_diagonal_form() {
        // (2A_x x 2B_y) rho (2A_x x 2B_y)^dagger stays Bloch-diagonal with
        // coefficients s(x,y,z) lambda_z.
        let spec = bloch_spec(StateId::R6).unwrap();
        let rho = catalog(StateId::R6).unwrap();
        let basis = ProductBasis::new(spec.permutation.clone());
        let table = sign_table(&basis);
        for &(x, y) in &[(2, 2), (6, 11), (7, 3), (16, 5)] {
            let u = kron(basis.a(x), basis.b(y)).scale(Complex64::new(4.0, 0.0));
            let conjugated = u.matmul(rho.matrix()).matmul(&u.dagger());
            let mut expected = ComplexMatrix::zeros(16, 16);
            for z in 1..=16 {
                let coeff = table.get(x, y, z) as f64 * spec.lambdas[z - 1];
                if coeff != 0.0 {
                    expected.add_scaled(&kron(basis.a(z), basis.b(z)), coeff);
                }
            }
            assert!(
                conjugated.max_abs_diff(&expected) < tol::STRICT,
                "x={x} y={y}"
            );
        }
    }
}
