//! Domain types for a dissipative two-level system and the conversions
//! between its three descriptions:
//!
//! * a list of Lindblad operators `L_m`,
//! * the 3×3 Gorini–Kossakowski–Sudarshan (GKS) matrix `A` in the Pauli basis,
//! * the six real parameters `(a1 >= a2 >= a3; b1, b2, b3)` of the radial
//!   equation, written in the eigenframe of the symmetric part of `A`.
//!
//! Convention: the dissipator is `½ Σ_jk a_jk (σ_j ρ σ_k − ½{σ_k σ_j, ρ})`
//! with raw Pauli matrices, so an operator `L = Σ_j c_j σ_j` contributes
//! `a_jk = 2 c_j conj(c_k)`.
//!
//! Raising and lowering at rates `α+` and `α−` (operators `√α± σ±`) give
//! `a1 = a2 = (α+ + α−)/2`, `a3 = 0`, `b = (0, 0, α+ − α−)`. The frequently
//! quoted `|α+ − α−|/2` for `a1` does not follow from the dissipator; the
//! tests pin the sum.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, det3, dot, hermitian3_eigenvalues, jacobi_eigen, m2_add, m2_adjoint, m2_mul,
    m2_norm, m2_scale, m2_sub, m2_trace, mat_vec, norm, transpose, Mat2c, Mat3, Vec3, CONE,
    CZERO, IDENTITY3,
};

pub type Gks = [[Complex64; 3]; 3];

/// Pauli matrices `σx, σy, σz` in the basis where `σz = diag(1, −1)`.
pub const PAULI: [Mat2c; 3] = [
    [[CZERO, CONE], [CONE, CZERO]],
    [
        [CZERO, Complex64 { re: 0.0, im: -1.0 }],
        [Complex64 { re: 0.0, im: 1.0 }, CZERO],
    ],
    [[CONE, CZERO], [CZERO, Complex64 { re: -1.0, im: 0.0 }]],
];

pub const IDENTITY2: Mat2c = [[CONE, CZERO], [CZERO, CONE]];

/// `σ− = |2⟩⟨1|`, mapping the `σz = +1` state to the `σz = −1` state.
pub const SIGMA_MINUS: Mat2c = [[CZERO, CZERO], [CONE, CZERO]];
/// `σ+ = |1⟩⟨2|`.
pub const SIGMA_PLUS: Mat2c = [[CZERO, CONE], [CZERO, CZERO]];

/// Levi-Civita symbol on indices `0..3`.
pub fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Coefficients `c_j = tr(σ_j m)/2` of a traceless 2×2 matrix, so that
/// `m = Σ_j c_j σ_j`.
pub fn pauli_expand(m: &Mat2c) -> Result<[Complex64; 3]> {
    let tr = m2_trace(m).norm();
    if tr > 1e-10 * m2_norm(m).max(f64::MIN_POSITIVE) {
        return Err(Error::NonTraceless { trace: tr });
    }
    Ok(pauli_coefficients(m))
}

fn pauli_coefficients(m: &Mat2c) -> [Complex64; 3] {
    let mut out = [CZERO; 3];
    for (j, s) in PAULI.iter().enumerate() {
        out[j] = m2_trace(&m2_mul(s, m)) * 0.5;
    }
    out
}

/// `Σ_j c_j σ_j`
pub fn pauli_combine(coeffs: &[Complex64; 3]) -> Mat2c {
    let mut m = [[CZERO; 2]; 2];
    for (s, &cj) in PAULI.iter().zip(coeffs) {
        m = m2_add(&m, &m2_scale(s, cj));
    }
    m
}

/// A traceless Lindblad operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladOp {
    entries: Mat2c,
}

impl LindbladOp {
    /// Canonicalizes `m` by removing its identity component. The removed part
    /// only shifts the Hamiltonian, which the (unbounded) controls absorb.
    pub fn new(m: Mat2c) -> Self {
        let half_tr = m2_trace(&m) * 0.5;
        LindbladOp {
            entries: m2_sub(&m, &m2_scale(&IDENTITY2, half_tr)),
        }
    }

    /// Like [`LindbladOp::new`] but rejects matrices with a trace.
    pub fn traceless(m: Mat2c) -> Result<Self> {
        pauli_expand(&m)?;
        Ok(Self::new(m))
    }

    pub fn from_pauli(coeffs: [Complex64; 3]) -> Self {
        Self::new(pauli_combine(&coeffs))
    }

    pub fn matrix(&self) -> &Mat2c {
        &self.entries
    }

    pub fn pauli(&self) -> [Complex64; 3] {
        pauli_coefficients(&self.entries)
    }

    pub fn scaled(&self, s: f64) -> Self {
        LindbladOp {
            entries: m2_scale(&self.entries, c(s, 0.0)),
        }
    }

    pub fn norm(&self) -> f64 {
        m2_norm(&self.entries)
    }
}

fn matrix_scale(a: &Gks) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// GKS coefficient matrix indexed by Pauli axes, plus the operators it was
/// built from when known.
#[derive(Debug, Clone, PartialEq)]
pub struct GksModel {
    a: Gks,
    source_ops: Option<Vec<LindbladOp>>,
}

impl GksModel {
    /// Validates Hermiticity and positive semidefiniteness at `1e-12`,
    /// scaled by the matrix norm above unit scale.
    pub fn new(a: Gks) -> Result<Self> {
        if a.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("GKS matrix has non-finite entries"));
        }
        let tol = 1e-12 * matrix_scale(&a).max(1.0);
        let mut deviation: f64 = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                deviation = deviation.max((a[j][k] - a[k][j].conj()).norm());
            }
        }
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let min_eigenvalue = hermitian3_eigenvalues(&a)[0];
        if min_eigenvalue < -tol {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(GksModel { a, source_ops: None })
    }

    pub fn matrix(&self) -> &Gks {
        &self.a
    }

    pub fn source_ops(&self) -> Option<&[LindbladOp]> {
        self.source_ops.as_deref()
    }

    /// Axial vector `b_l = Σ_jk i a_jk ε_jkl` of the anti-symmetric part, in
    /// Pauli coordinates.
    pub fn b_vector(&self) -> Vec3 {
        let mut b = [0.0; 3];
        for (l, bl) in b.iter_mut().enumerate() {
            let mut s = CZERO;
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(j, k, l);
                    if e != 0.0 {
                        s += self.a[j][k] * e;
                    }
                }
            }
            // i·s is real for Hermitian a.
            *bl = -s.im;
        }
        b
    }

    /// `A^S = (A + Aᵀ)/2`, which is real for Hermitian `A`.
    pub fn symmetric_part(&self) -> Mat3 {
        let mut s = [[0.0; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                s[j][k] = 0.5 * (self.a[j][k] + self.a[k][j]).re;
            }
        }
        s
    }
}

/// `a_jk = 2 Σ_m c_j^(m) conj(c_k^(m))` with `c^(m)` the Pauli coefficients
/// of `L_m`.
pub fn gks_from_lindblad(ops: &[LindbladOp]) -> Result<GksModel> {
    let mut a = [[CZERO; 3]; 3];
    for op in ops {
        let cm = pauli_expand(op.matrix())?;
        for j in 0..3 {
            for k in 0..3 {
                a[j][k] += cm[j] * cm[k].conj() * 2.0;
            }
        }
    }
    // Exact Hermiticity, so that validation only ever sees rounding-free input.
    for j in 0..3 {
        a[j][j] = c(a[j][j].re, 0.0);
        for k in j + 1..3 {
            a[k][j] = a[j][k].conj();
        }
    }
    let mut g = GksModel::new(a)?;
    g.source_ops = Some(ops.to_vec());
    Ok(g)
}

/// The six-parameter description of the radial dynamics.
///
/// `a` holds the eigenvalues of `A^S`, sorted descending; `b` is the axial
/// vector expressed in the matching eigenframe; `frame` is the rotation
/// taking Pauli-axis coordinates to intrinsic coordinates (its rows are the
/// intrinsic axes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedSystem {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub frame: Mat3,
}

impl ProjectedSystem {
    /// Builds a system given directly in its intrinsic frame.
    pub fn new(a: [f64; 3], b: [f64; 3]) -> Result<Self> {
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("projected parameters must be finite"));
        }
        let sc = a[0].abs().max(norm(&b)).max(1.0);
        if a[0] < a[1] - 1e-12 * sc || a[1] < a[2] - 1e-12 * sc || a[2] < -1e-12 * sc {
            return Err(Error::UnsortedEigenvalues);
        }
        Ok(ProjectedSystem { a, b, frame: IDENTITY3 })
    }

    /// Characteristic rate of the system, `max(a1, |b|)`.
    pub fn scale(&self) -> f64 {
        self.a[0].abs().max(norm(&self.b))
    }

    pub fn trace(&self) -> f64 {
        self.a[0] + self.a[1] + self.a[2]
    }

    pub fn b_norm(&self) -> f64 {
        norm(&self.b)
    }

    /// Pauli-axis coordinates to intrinsic coordinates.
    pub fn to_intrinsic(&self, v: &Vec3) -> Vec3 {
        mat_vec(&self.frame, v)
    }

    /// Intrinsic coordinates to Pauli-axis coordinates.
    pub fn to_pauli(&self, v: &Vec3) -> Vec3 {
        mat_vec(&transpose(&self.frame), v)
    }

    /// Every component of the system multiplied by `s` (rates scale linearly).
    pub fn scaled(&self, s: f64) -> Self {
        ProjectedSystem {
            a: linalg::scale(&self.a, s),
            b: linalg::scale(&self.b, s),
            frame: self.frame,
        }
    }

    /// GKS matrix in the intrinsic frame, `diag(a) − (i/2)[b]×`.
    pub fn gks_matrix(&self) -> Gks {
        let mut m = [[CZERO; 3]; 3];
        for j in 0..3 {
            m[j][j] = c(self.a[j], 0.0);
            for k in 0..3 {
                for l in 0..3 {
                    let e = levi_civita(j, k, l);
                    if e != 0.0 {
                        m[j][k] += c(0.0, -0.5 * e * self.b[l]);
                    }
                }
            }
        }
        m
    }

    /// Full positive-semidefiniteness of the reconstructed GKS matrix.
    ///
    /// The scalar inequality of [`validate_inequality`] is the determinant
    /// condition only; this also covers the 2×2 minors `b_l² <= 4 a_j a_k`.
    pub fn is_positive_semidefinite(&self) -> bool {
        let tol = 1e-12 * self.scale().max(1.0);
        hermitian3_eigenvalues(&self.gks_matrix())[0] >= -tol
    }
}

/// Sorted, canonically oriented eigenframe of a real symmetric matrix.
///
/// Degenerate eigenspaces get the basis obtained by projecting the Pauli axes
/// into them (greedy Gram–Schmidt), then every column is signed so its
/// largest-magnitude entry is positive, and the third column is flipped if
/// needed to make the frame right-handed.
fn canonical_eigenframe(sym: &Mat3) -> ([f64; 3], Mat3) {
    let (vals, vecs) = jacobi_eigen(sym);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let values = [vals[order[0]], vals[order[1]], vals[order[2]]];
    let mut cols: [Vec3; 3] = [[0.0; 3]; 3];
    for (slot, &i) in order.iter().enumerate() {
        cols[slot] = [vecs[0][i], vecs[1][i], vecs[2][i]];
    }

    let spread = values[0].abs().max(values[2].abs());
    let tol = 1e-10 * spread;
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (values[start] - values[end]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec3> = cols[start..end].to_vec();
            let project = |v: &Vec3| -> Vec3 {
                let mut out = [0.0; 3];
                for q in &cluster {
                    out = linalg::axpy(&out, dot(q, v), q);
                }
                out
            };
            let mut chosen: Vec<Vec3> = Vec::new();
            let mut used = [false; 3];
            while chosen.len() < cluster.len() {
                let mut best: Option<(usize, Vec3, f64)> = None;
                for (axis, taken) in used.iter().enumerate() {
                    if *taken {
                        continue;
                    }
                    let mut e = [0.0; 3];
                    e[axis] = 1.0;
                    let mut w = project(&e);
                    for q in &chosen {
                        w = linalg::axpy(&w, -dot(q, &w), q);
                    }
                    let n = norm(&w);
                    if best.as_ref().map_or(true, |b| n > b.2 + 1e-12) {
                        best = Some((axis, w, n));
                    }
                }
                let (axis, w, n) = best.expect("cluster dimension is at most 3");
                used[axis] = true;
                chosen.push(linalg::scale(&w, 1.0 / n));
            }
            cols[start..end].copy_from_slice(&chosen);
        }
        start = end;
    }

    for col in cols.iter_mut() {
        let mut pivot = 0;
        for i in 1..3 {
            if col[i].abs() > col[pivot].abs() + 1e-12 {
                pivot = i;
            }
        }
        if col[pivot] < 0.0 {
            *col = linalg::scale(col, -1.0);
        }
    }
    // columns -> matrix with eigenvectors as columns
    let mut v = [[0.0; 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            v[i][j] = col[i];
        }
    }
    if det3(&transpose(&v)) < 0.0 {
        for row in v.iter_mut() {
            row[2] = -row[2];
        }
    }
    (values, v)
}

/// Six-parameter form of a GKS model.
pub fn project_to_six_params(g: &GksModel) -> Result<ProjectedSystem> {
    let sym = g.symmetric_part();
    let (mut a, v) = canonical_eigenframe(&sym);
    let frame = transpose(&v);
    let mut b = mat_vec(&frame, &g.b_vector());

    let sc = a[0].abs().max(norm(&b));
    if sc > 0.0 {
        for x in a.iter_mut().chain(b.iter_mut()) {
            if x.abs() <= 1e-12 * sc {
                *x = 0.0;
            }
        }
    }
    if a[2] < 0.0 {
        return Err(Error::NotPsd { min_eigenvalue: a[2] });
    }
    Ok(ProjectedSystem { a, b, frame })
}

/// `a1 b1² + a2 b2² + a3 b3² <= 4 a1 a2 a3`, up to a tolerance of
/// `1e-9 · max(a1, |b|)³`.
pub fn validate_inequality(p: &ProjectedSystem) -> bool {
    let lhs: f64 = (0..3).map(|j| p.a[j] * p.b[j] * p.b[j]).sum();
    let rhs = 4.0 * p.a[0] * p.a[1] * p.a[2];
    let sc = p.scale();
    lhs <= rhs + 1e-9 * sc * sc * sc
}

/// A Bloch vector `n` with `|n| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub n: Vec3,
}

impl BlochState {
    pub fn new(n: Vec3) -> Result<Self> {
        if n.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDensity("non-finite Bloch vector"));
        }
        if norm(&n) > 1.0 + 1e-9 {
            return Err(Error::InvalidDensity("Bloch vector outside the unit ball"));
        }
        Ok(BlochState { n })
    }

    pub fn radius(&self) -> f64 {
        norm(&self.n)
    }

    /// `n / |n|`, undefined at the origin.
    pub fn direction(&self) -> Option<Vec3> {
        linalg::normalized(&self.n)
    }
}

/// A 2×2 density matrix (Hermitian, unit trace, positive semidefinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Mat2c,
}

impl DensityMatrix {
    pub fn new(m: Mat2c) -> Result<Self> {
        const TOL: f64 = 1e-12;
        if (m[0][1] - m[1][0].conj()).norm() > TOL || m[0][0].im.abs() > TOL || m[1][1].im.abs() > TOL
        {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        let tr = m2_trace(&m);
        if (tr - CONE).norm() > TOL {
            return Err(Error::InvalidDensity("trace is not one"));
        }
        // Eigenvalues (1 ± r)/2 with r the Bloch radius.
        let r = norm(&bloch_components(&m));
        if (1.0 - r) / 2.0 < -TOL {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(DensityMatrix { entries: m })
    }

    pub fn matrix(&self) -> &Mat2c {
        &self.entries
    }
}

fn bloch_components(m: &Mat2c) -> Vec3 {
    let mut n = [0.0; 3];
    for (j, s) in PAULI.iter().enumerate() {
        n[j] = m2_trace(&m2_mul(s, m)).re;
    }
    n
}

/// `n_j = tr(σ_j ρ)`
pub fn bloch_from_density(rho: &DensityMatrix) -> BlochState {
    BlochState {
        n: bloch_components(rho.matrix()),
    }
}

/// `ρ = (I + Σ_j n_j σ_j)/2`
pub fn density_from_bloch(n: &BlochState) -> DensityMatrix {
    DensityMatrix {
        entries: density_matrix_of(&n.n),
    }
}

/// `(I + Σ_j n_j σ_j)/2` for any real vector (no validation).
pub fn density_matrix_of(n: &Vec3) -> Mat2c {
    let half = 0.5;
    [
        [c(half * (1.0 + n[2]), 0.0), c(half * n[0], -half * n[1])],
        [c(half * n[0], half * n[1]), c(half * (1.0 - n[2]), 0.0)],
    ]
}

fn anticommutator(a: &Mat2c, b: &Mat2c) -> Mat2c {
    m2_add(&m2_mul(a, b), &m2_mul(b, a))
}

/// `Σ_m (L_m ρ L_m† − ½{L_m† L_m, ρ})`
pub fn lindblad_dissipator(ops: &[LindbladOp], rho: &Mat2c) -> Mat2c {
    let mut out = [[CZERO; 2]; 2];
    for op in ops {
        let l = op.matrix();
        let ld = m2_adjoint(l);
        let jump = m2_mul(&m2_mul(l, rho), &ld);
        let recoil = anticommutator(&m2_mul(&ld, l), rho);
        out = m2_add(&out, &m2_sub(&jump, &m2_scale(&recoil, c(0.5, 0.0))));
    }
    out
}

/// Full controlled generator in the Pauli basis:
/// `Σ_j [−i u_j σ_j, ρ] + ½ Σ_jk a_jk (σ_j ρ σ_k − ½{σ_k σ_j, ρ})`.
pub fn gks_generator(a: &Gks, u: &Vec3, rho: &Mat2c) -> Mat2c {
    let mut out = [[CZERO; 2]; 2];
    for (j, s) in PAULI.iter().enumerate() {
        let h = m2_scale(s, c(0.0, -u[j]));
        let comm = m2_sub(&m2_mul(&h, rho), &m2_mul(rho, &h));
        out = m2_add(&out, &comm);
    }
    for j in 0..3 {
        for k in 0..3 {
            let ajk = a[j][k];
            if ajk == CZERO {
                continue;
            }
            let jump = m2_mul(&m2_mul(&PAULI[j], rho), &PAULI[k]);
            let recoil = anticommutator(&m2_mul(&PAULI[k], &PAULI[j]), rho);
            let term = m2_sub(&jump, &m2_scale(&recoil, c(0.5, 0.0)));
            out = m2_add(&out, &m2_scale(&term, ajk * 0.5));
        }
    }
    out
}

/// Time derivative of the Bloch vector (Pauli coordinates) implied by a
/// generator output `dρ/dt`.
pub fn bloch_derivative_of(drho: &Mat2c) -> Vec3 {
    bloch_components(drho)
}
