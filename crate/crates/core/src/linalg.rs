//! Fixed-size real and complex linear algebra used throughout the crate.
//!
//! Everything here is stack-allocated: 3-vectors as `[f64; 3]`, 3×3 real
//! matrices as row-major `[[f64; 3]; 3]`, and 2×2 complex matrices as
//! row-major `[[Complex64; 2]; 2]`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type Mat2c = [[Complex64; 2]; 2];
pub type Vec2c = [Complex64; 2];

pub const ZERO3: Vec3 = [0.0; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &Vec3, s: f64, b: &Vec3) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// Unit vector along `a`, or `None` for the zero vector.
pub fn normalized(a: &Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            t[j][i] = x;
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn det3(m: &Mat3) -> f64 {
    dot(&m[0], &cross(&m[1], &m[2]))
}

pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Eigen-decomposition of a real symmetric `N×N` matrix by cyclic Jacobi
/// rotations.
///
/// Returns the eigenvalues (unsorted) and a matrix whose *columns* are the
/// corresponding orthonormal eigenvectors. Only the upper triangle is read
/// as far as symmetry goes; the caller is responsible for symmetrizing.
pub fn jacobi_eigen<const N: usize>(m: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut a = *m;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return ([0.0; N], v);
    }

    for _sweep in 0..64 {
        let off: f64 = (0..N)
            .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * frob {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut vals = [0.0; N];
    for (i, x) in vals.iter_mut().enumerate() {
        *x = a[i][i];
    }
    (vals, v)
}

/// Eigenvalues of a 3×3 complex Hermitian matrix, ascending.
///
/// Uses the real 6×6 embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is
/// the Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian3_eigenvalues(h: &[[Complex64; 3]; 3]) -> [f64; 3] {
    let mut big = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            // Symmetrize so rounding in the input cannot break the embedding.
            let z = (h[i][j] + h[j][i].conj()) * 0.5;
            big[i][j] = z.re;
            big[i + 3][j + 3] = z.re;
            big[i][j + 3] = -z.im;
            big[i + 3][j] = z.im;
        }
    }
    let (mut vals, _) = jacobi_eigen(&big);
    vals.sort_by(|a, b| a.total_cmp(b));
    [vals[0], vals[2], vals[4]]
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const CZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const CONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn m2_mul(a: &Mat2c, b: &Mat2c) -> Mat2c {
    let mut out = [[CZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn m2_add(a: &Mat2c, b: &Mat2c) -> Mat2c {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn m2_sub(a: &Mat2c, b: &Mat2c) -> Mat2c {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn m2_scale(a: &Mat2c, s: Complex64) -> Mat2c {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn m2_adjoint(a: &Mat2c) -> Mat2c {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn m2_trace(a: &Mat2c) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn m2_det(a: &Mat2c) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Frobenius norm.
pub fn m2_norm(a: &Mat2c) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius inner product `tr(a† b)`.
pub fn m2_inner(a: &Mat2c, b: &Mat2c) -> Complex64 {
    let mut s = CZERO;
    for i in 0..2 {
        for j in 0..2 {
            s += a[i][j].conj() * b[i][j];
        }
    }
    s
}

pub fn m2_apply(a: &Mat2c, v: &Vec2c) -> Vec2c {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn v2_inner(u: &Vec2c, v: &Vec2c) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

pub fn v2_norm(v: &Vec2c) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Unit vector along `v` with a fixed global phase: the component of larger
/// modulus is made real and positive.
pub fn v2_canonical(v: &Vec2c) -> Option<Vec2c> {
    let n = v2_norm(v);
    if !(n > 0.0) || !n.is_finite() {
        return None;
    }
    let pivot = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let phase = pivot.conj() / pivot.norm();
    Some([v[0] * phase / n, v[1] * phase / n])
}

/// Unit vector orthogonal to the unit vector `v`.
pub fn v2_orthogonal(v: &Vec2c) -> Vec2c {
    [-v[1].conj(), v[0].conj()]
}
