//! Trap radius, reachability, pure-state decay and purifiability.
//!
//! With `b ≠ 0` the largest achievable rate `f_M(r)` starts at `|b| > 0` and
//! decreases; its zero `r_T` bounds the trap `(0, r_T)`. Inside the trap every
//! radius reaches every other one, outside only decreases are possible. A
//! system is purifiable when `r_T = 1` and `f_M` is strictly decreasing.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extremal::{analytic_axial_envelope, envelope_at};
use crate::linalg::{
    m2_adjoint, m2_apply, m2_det, m2_inner, m2_mul, m2_norm, m2_scale, m2_sub, v2_canonical,
    v2_inner, v2_norm, v2_orthogonal, Vec2c,
};
use crate::model::{gks_from_lindblad, project_to_six_params, LindbladOp, ProjectedSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapMethod {
    Analytic,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapReport {
    pub r_trap: f64,
    pub trap_exists: bool,
    pub method: TrapMethod,
    /// `|f_M(r_trap)|`.
    pub residual: f64,
}

fn f_max(r: f64, p: &ProjectedSystem) -> f64 {
    envelope_at(r, p).map(|e| e.f_max).unwrap_or(0.0)
}

/// Zero of `f_M` on `(0, 1]`, or `1` when `f_M(1)` vanishes within
/// `1e-10·scale`. Systems with `b = 0` have no trap and report `r_T = 0`.
pub fn trap_radius(p: &ProjectedSystem) -> TrapReport {
    if p.b_norm() == 0.0 {
        return TrapReport { r_trap: 0.0, trap_exists: false, method: TrapMethod::Analytic, residual: 0.0 };
    }
    let axial = analytic_axial_envelope(p, 1.0).is_some();
    let method = if axial { TrapMethod::Analytic } else { TrapMethod::Bisection };
    let at_one = f_max(1.0, p);
    if at_one >= -1e-10 * p.scale() {
        return TrapReport { r_trap: 1.0, trap_exists: true, method, residual: at_one.abs() };
    }
    if axial {
        let r = p.b[2].abs() / (2.0 * p.a[0]);
        return TrapReport { r_trap: r, trap_exists: true, method, residual: f_max(r, p).abs() };
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_max(mid, p) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // whichever bracket end sits closer to the zero
    let (f_lo, f_hi) = (f_max(lo, p), f_max(hi, p));
    let (r, residual) = if lo > 0.0 && f_lo.abs() < f_hi.abs() { (lo, f_lo.abs()) } else { (hi, f_hi.abs()) };
    TrapReport { r_trap: r, trap_exists: true, method, residual }
}

/// Whether radius `r_i` can be steered to `r_f` in finite time.
pub fn reachable(r_i: f64, r_f: f64, p: &ProjectedSystem) -> Result<bool> {
    for r in [r_i, r_f] {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidArgument("radii must lie in (0, 1]"));
        }
    }
    if r_f <= r_i {
        return Ok(true);
    }
    let trap = trap_radius(p);
    Ok(trap.trap_exists && r_f < trap.r_trap)
}

/// `dr/dt` of the pure state `ψ+`: `−2 Σ_j |⟨ψ−|L_j|ψ+⟩|²`.
pub fn pure_state_rate(ops: &[LindbladOp], psi_plus: &Vec2c) -> Result<f64> {
    let n = v2_norm(psi_plus);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit { norm: n });
    }
    let psi_minus = v2_orthogonal(psi_plus);
    Ok(-2.0
        * ops
            .iter()
            .map(|op| v2_inner(&psi_minus, &m2_apply(op.matrix(), psi_plus)).norm_sqr())
            .sum::<f64>())
}

fn nonzero_ops(ops: &[LindbladOp]) -> Result<Vec<&LindbladOp>> {
    let kept: Vec<&LindbladOp> = ops.iter().filter(|op| op.norm() >= 1e-12).collect();
    if kept.is_empty() {
        return Err(Error::EmptyModel);
    }
    Ok(kept)
}

/// Unit eigenvectors of a traceless 2×2 operator (one or two of them).
fn eigenvectors(op: &LindbladOp) -> Vec<Vec2c> {
    let m = op.matrix();
    let (p, q, s) = (m[0][0], m[0][1], m[1][0]);
    // a nilpotent operator has the double eigenvalue 0; the square root
    // would otherwise inflate rounding in p² + qs to O(√ε)
    let mu = if is_singular(op) { Complex64::new(0.0, 0.0) } else { (p * p + q * s).sqrt() };
    let mut out = Vec::with_capacity(2);
    for mu in [mu, -mu] {
        let first = [q, mu - p];
        let second = [mu + p, s];
        let v = if v2_norm(&first) >= v2_norm(&second) { first } else { second };
        if let Some(v) = v2_canonical(&v) {
            out.push(v);
        }
    }
    out
}

fn eigen_residual(op: &LindbladOp, v: &Vec2c) -> f64 {
    let lv = m2_apply(op.matrix(), v);
    let along = v2_inner(v, &lv);
    v2_norm(&[lv[0] - along * v[0], lv[1] - along * v[1]])
}

fn shared_by_all(ops: &[&LindbladOp], v: &Vec2c) -> bool {
    ops.iter().all(|op| eigen_residual(op, v) <= 1e-10 * op.norm())
}

fn shared_eigenvector(ops: &[&LindbladOp]) -> Option<Vec2c> {
    // any shared vector is an eigenvector of each operator; trying all of
    // them guards against an ill-conditioned first one
    ops.iter().flat_map(|op| eigenvectors(op)).find(|v| shared_by_all(ops, v))
}

/// A unit vector that every operator maps to a multiple of itself, with its
/// largest component real and positive. Operators below norm `1e-12` are
/// ignored.
pub fn common_eigenvector(ops: &[LindbladOp]) -> Result<Option<Vec2c>> {
    Ok(shared_eigenvector(&nonzero_ops(ops)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurifiabilityCategory {
    SingleSingular,
    SingleNonsingularNonorthogonal,
    MixedSharedEigenvector,
    NonsingularSharedEigenvector,
    NotPurifiable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurifiabilityVerdict {
    pub purifiable: bool,
    pub category: PurifiabilityCategory,
    pub shared_eigenvector: Option<Vec2c>,
    pub reason: String,
    /// Trap radius of the projected system.
    pub r_trap: f64,
    /// Whether `r_T = 1` (within `1e-9`) matches `purifiable`.
    pub numeric_agrees: bool,
}

fn is_singular(op: &LindbladOp) -> bool {
    m2_det(op.matrix()).norm() < 1e-12 * op.norm() * op.norm()
}

/// Normal operators are exactly those with orthogonal eigenvectors.
fn is_normal(op: &LindbladOp) -> bool {
    let m = op.matrix();
    let adj = m2_adjoint(m);
    m2_norm(&m2_sub(&m2_mul(m, &adj), &m2_mul(&adj, m))) < 1e-10 * op.norm() * op.norm()
}

/// Drops every operator that is a complex multiple of an earlier one.
fn distinct_processes<'a>(ops: &[&'a LindbladOp]) -> Vec<&'a LindbladOp> {
    let mut kept: Vec<&LindbladOp> = Vec::new();
    for &op in ops {
        let duplicate = kept.iter().any(|base| {
            let c: Complex64 = m2_inner(base.matrix(), op.matrix()) / (base.norm() * base.norm());
            m2_norm(&m2_sub(op.matrix(), &m2_scale(base.matrix(), c))) < 1e-10 * op.norm()
        });
        if !duplicate {
            kept.push(op);
        }
    }
    kept
}

/// Structural purifiability test for a list of Lindblad operators, with the
/// trap radius as a numeric cross-check.
pub fn classify_purifiable(ops: &[LindbladOp]) -> Result<PurifiabilityVerdict> {
    let nonzero = nonzero_ops(ops)?;
    let distinct = distinct_processes(&nonzero);
    let p = project_to_six_params(&gks_from_lindblad(ops)?)?;
    let r_trap = trap_radius(&p).r_trap;

    let singular = distinct.iter().filter(|op| is_singular(op)).count();
    let shared = shared_eigenvector(&distinct);
    let spread = p.a[1] > 1e-12 * p.a[0];

    use PurifiabilityCategory::*;
    let (category, reason) = match (distinct.len(), singular, shared.is_some()) {
        (1, 1, _) => (SingleSingular, "single singular operator"),
        (1, _, _) if is_normal(distinct[0]) || !spread => {
            (NotPurifiable, "single non-singular operator with orthogonal eigenvectors")
        }
        (1, _, _) => (SingleNonsingularNonorthogonal, "single non-singular operator with non-orthogonal eigenvectors"),
        (_, s, _) if s > 1 => (NotPurifiable, "more than one singular operator"),
        (_, _, false) => (NotPurifiable, "operators share no eigenvector"),
        (_, _, true) if !spread => (NotPurifiable, "dissipation is rank one (a2 = 0)"),
        (_, 1, true) => (MixedSharedEigenvector, "one singular operator sharing an eigenvector with the rest"),
        (_, _, true) => (NonsingularSharedEigenvector, "non-singular operators sharing an eigenvector"),
    };
    let purifiable = category != NotPurifiable;
    Ok(PurifiabilityVerdict {
        purifiable,
        category,
        shared_eigenvector: if purifiable { shared } else { None },
        reason: String::from(reason),
        r_trap,
        numeric_agrees: purifiable == ((r_trap - 1.0).abs() <= 1e-9),
    })
}
