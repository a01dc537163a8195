//! Extremal radial rates `f_M(r)` and `f_m(r)`: the largest and smallest
//! `dr/dt` reachable at radius `r` over all state directions `n̂`.
//!
//! Stationary points of `b·n̂ + r Σ a_j n_j² − r tr(a)` on the unit sphere
//! satisfy `b_j + 2 r a_j n_j = 2 λ n_j`. They are enumerated exactly:
//!
//! * interior roots: `λ` distinct from every `r a_j`, so
//!   `n_j = b_j / (2(λ − r a_j))`, with `λ` a root of
//!   `Σ b_j² / (λ − r a_j)² = 4` (see [`crate::roots`]);
//! * axis branches: `λ = r a_j` for an axis with `b_j = 0`, the other
//!   components fixed by the same formula and the axis (or the degenerate
//!   plane it shares with equal `a`'s) taking up the remaining norm.
//!
//! The extremes over this finite list are the global extremes. A
//! Fibonacci-lattice sampler provides an independent brute-force check.

use alloc::vec::Vec;
use core::cmp::Ordering;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::radial_rate_unchecked;
use crate::error::{Error, Result};
use crate::linalg::{normalized, Vec3};
use crate::model::ProjectedSystem;
use crate::roots::secular_roots;

/// Grid resolution used when none is requested.
pub const DEFAULT_GRID: usize = 10_000;

/// Where a stationary direction came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    InteriorRoot,
    AxisBranch,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryCandidate {
    pub direction: Vec3,
    /// Lagrange multiplier `λ`.
    pub multiplier: f64,
    pub rate: f64,
    pub branch: Branch,
    /// The direction represents a whole circle of equivalent stationary
    /// points (equal `a_j` on axes with `b_j = 0`).
    pub ring: bool,
}

/// `f_M`, `f_m` at one radius with the directions achieving them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub f_max: f64,
    pub f_min: f64,
    pub argmax: Vec3,
    pub argmin: Vec3,
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument("radius must lie in (0, 1]"));
    }
    Ok(())
}

fn lexicographic(a: &Vec3, b: &Vec3) -> Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

/// All solutions of the first-order conditions at radius `r`.
pub fn stationary_candidates(r: f64, p: &ProjectedSystem) -> Result<Vec<StationaryCandidate>> {
    check_radius(r)?;
    let b_norm = p.b_norm();
    let scale = b_norm.max(r * p.a[0]);
    if scale == 0.0 {
        return Err(Error::DegenerateSystem);
    }
    let zero_tol = 1e-10 * scale;
    let same_a_tol = 1e-12 * p.a[0].abs().max(f64::MIN_POSITIVE);
    let is_zero: [bool; 3] = core::array::from_fn(|j| p.b[j].abs() < zero_tol);

    let mut out = Vec::new();
    let mut push = |dir: Vec3, multiplier: f64, branch: Branch, ring: bool| {
        if let Some(d) = normalized(&dir) {
            out.push(StationaryCandidate {
                direction: d,
                multiplier,
                rate: radial_rate_unchecked(r, &d, p),
                branch,
                ring,
            });
        }
    };

    // interior roots
    let poles: Vec<(f64, f64)> = (0..3)
        .filter(|&j| !is_zero[j])
        .map(|j| (r * p.a[j], p.b[j] * p.b[j]))
        .collect();
    for lambda in secular_roots(&poles) {
        let mut dir = [0.0; 3];
        for j in 0..3 {
            if !is_zero[j] {
                dir[j] = p.b[j] / (2.0 * (lambda - r * p.a[j]));
            }
        }
        push(dir, lambda, Branch::InteriorRoot, false);
    }

    // axis branches, one per group of b-free axes sharing the same a
    let mut visited = [false; 3];
    for lead in 0..3 {
        if !is_zero[lead] || visited[lead] {
            continue;
        }
        let a_lead = p.a[lead];
        let group: Vec<usize> = (lead..3)
            .filter(|&j| is_zero[j] && (p.a[j] - a_lead).abs() <= same_a_tol)
            .collect();
        for &j in &group {
            visited[j] = true;
        }
        // a b-carrying axis with the same a admits no solution at this λ
        if (0..3).any(|k| !is_zero[k] && (p.a[k] - a_lead).abs() <= same_a_tol) {
            continue;
        }
        let lambda = r * a_lead;
        let mut dir = [0.0; 3];
        let mut used = 0.0;
        for k in 0..3 {
            if !is_zero[k] {
                dir[k] = p.b[k] / (2.0 * r * (a_lead - p.a[k]));
                used += dir[k] * dir[k];
            }
        }
        let rest = 1.0 - used;
        if rest < -1e-12 {
            continue;
        }
        let along = rest.max(0.0).sqrt();
        let ring = group.len() > 1 && along > 0.0;
        dir[lead] = along;
        push(dir, lambda, Branch::AxisBranch, ring);
        if along > 0.0 {
            dir[lead] = -along;
            push(dir, lambda, Branch::AxisBranch, ring);
        }
    }
    Ok(out)
}

fn select(cands: &[StationaryCandidate], scale: f64) -> EnvelopePoint {
    let tie = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let f_max = cands.iter().map(|c| c.rate).fold(f64::NEG_INFINITY, f64::max);
    let f_min = cands.iter().map(|c| c.rate).fold(f64::INFINITY, f64::min);
    let pick = |target: f64| -> Vec3 {
        cands
            .iter()
            .filter(|c| (c.rate - target).abs() <= tie)
            .map(|c| c.direction)
            .min_by(lexicographic)
            .expect("the extreme value is attained by some candidate")
    };
    EnvelopePoint { f_max, f_min, argmax: pick(f_max), argmin: pick(f_min) }
}

/// Extremal rates at `r`, ties broken towards the lexicographically smallest
/// direction. A system without any dissipation is stationary everywhere and
/// reports zero rates with direction `(−1, 0, 0)`.
pub fn envelope_at(r: f64, p: &ProjectedSystem) -> Result<EnvelopePoint> {
    match stationary_candidates(r, p) {
        Ok(cands) => Ok(select(&cands, p.scale())),
        Err(Error::DegenerateSystem) => {
            let d = [-1.0, 0.0, 0.0];
            Ok(EnvelopePoint { f_max: 0.0, f_min: 0.0, argmax: d, argmin: d })
        }
        Err(e) => Err(e),
    }
}

/// Closed-form envelope for the axial case `b = (0, 0, b3)`, `a1 = a2`,
/// `a3 = 0`:
///
/// ```text
/// f_M = |b3| − 2 a1 r              for r <= |b3| / (2 a1)
/// f_M = b3² / (4 a1 r) − a1 r      otherwise
/// f_m = −|b3| − 2 a1 r
/// ```
///
/// Returns `None` when the system is not of this form.
pub fn analytic_axial_envelope(p: &ProjectedSystem, r: f64) -> Option<EnvelopePoint> {
    let a1 = p.a[0];
    let tol = 1e-12 * p.scale();
    if !(a1 > 0.0)
        || (p.a[0] - p.a[1]).abs() > tol
        || p.a[2].abs() > tol
        || p.b[0].abs() > tol
        || p.b[1].abs() > tol
        || !(r > 0.0)
    {
        return None;
    }
    let b3 = p.b[2];
    let up = if b3 > 0.0 { 1.0 } else { -1.0 };
    let f_min = -b3.abs() - 2.0 * a1 * r;
    let argmin = [0.0, 0.0, -up];
    let switch = b3.abs() / (2.0 * a1);
    let (f_max, argmax) = if r <= switch {
        (b3.abs() - 2.0 * a1 * r, [0.0, 0.0, up])
    } else {
        let n3 = b3 / (2.0 * a1 * r);
        (b3 * b3 / (4.0 * a1 * r) - a1 * r, [-(1.0 - n3 * n3).sqrt(), 0.0, n3])
    };
    Some(EnvelopePoint { f_max, f_min, argmax, argmin })
}

/// `n` equally spaced radii `k/n`, `k = 1..=n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

/// Sampled envelope curves.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEnvelope {
    pub r_grid: Vec<f64>,
    pub f_max: Vec<f64>,
    pub f_min: Vec<f64>,
    pub argmax_dirs: Vec<Vec3>,
    pub argmin_dirs: Vec<Vec3>,
    /// Whether the closed-form axial solution produced the values.
    pub analytic: bool,
}

impl RateEnvelope {
    pub fn len(&self) -> usize {
        self.r_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_grid.is_empty()
    }

    pub fn point(&self, i: usize) -> EnvelopePoint {
        EnvelopePoint {
            f_max: self.f_max[i],
            f_min: self.f_min[i],
            argmax: self.argmax_dirs[i],
            argmin: self.argmin_dirs[i],
        }
    }
}

/// Envelope on a grid of radii. Axial systems use the closed form and are
/// checked against the stationary-point enumeration on every hundredth point.
pub fn envelope_curve(p: &ProjectedSystem, grid: &[f64]) -> Result<RateEnvelope> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("radius grid must be strictly increasing"));
    }
    for &r in grid {
        check_radius(r)?;
    }
    let analytic = grid.first().map_or(false, |&r| analytic_axial_envelope(p, r).is_some());
    let mut env = RateEnvelope {
        r_grid: grid.to_vec(),
        f_max: Vec::with_capacity(grid.len()),
        f_min: Vec::with_capacity(grid.len()),
        argmax_dirs: Vec::with_capacity(grid.len()),
        argmin_dirs: Vec::with_capacity(grid.len()),
        analytic,
    };
    let check_tol = 1e-10 * p.scale().max(1.0);
    for (i, &r) in grid.iter().enumerate() {
        let pt = if analytic {
            let pt = analytic_axial_envelope(p, r).expect("applicability does not depend on r");
            if i % 100 == 0 || i + 1 == grid.len() {
                let num = envelope_at(r, p)?;
                for (an, nu) in [(pt.f_max, num.f_max), (pt.f_min, num.f_min)] {
                    if (an - nu).abs() > check_tol {
                        return Err(Error::EnvelopeMismatch { r, analytic: an, numeric: nu });
                    }
                }
            }
            pt
        } else {
            envelope_at(r, p)?
        };
        env.f_max.push(pt.f_max);
        env.f_min.push(pt.f_min);
        env.argmax_dirs.push(pt.argmax);
        env.argmin_dirs.push(pt.argmin);
    }
    Ok(env)
}

/// Near-uniform points on the unit sphere along a golden-angle spiral. The
/// first and last points are the poles `(0, 0, ±1)`.
#[derive(Debug, Clone)]
pub struct FibonacciLattice {
    points: Vec<Vec3>,
}

impl FibonacciLattice {
    pub fn new(count: usize) -> Self {
        let golden = core::f64::consts::PI * (3.0 - 5.0.sqrt());
        let last = count.saturating_sub(1).max(1) as f64;
        let points = (0..count)
            .map(|i| {
                let z = if count == 1 { 1.0 } else { 1.0 - 2.0 * i as f64 / last };
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let theta = golden * i as f64;
                [rho * theta.cos(), rho * theta.sin(), z]
            })
            .collect();
        FibonacciLattice { points }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Largest and smallest sampled rate with the sample directions.
    pub fn extremes(&self, r: f64, p: &ProjectedSystem) -> EnvelopePoint {
        let mut best = EnvelopePoint {
            f_max: f64::NEG_INFINITY,
            f_min: f64::INFINITY,
            argmax: [0.0; 3],
            argmin: [0.0; 3],
        };
        for d in &self.points {
            let v = radial_rate_unchecked(r, d, p);
            if v > best.f_max {
                best.f_max = v;
                best.argmax = *d;
            }
            if v < best.f_min {
                best.f_min = v;
                best.argmin = *d;
            }
        }
        best
    }
}

/// Sampled approximation `(f̃_M, f̃_m)` over `count` lattice directions.
pub fn brute_force_envelope(r: f64, p: &ProjectedSystem, count: usize) -> (f64, f64) {
    let e = FibonacciLattice::new(count).extremes(r, p);
    (e.f_max, e.f_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ProjectedSystem {
        ProjectedSystem::new([10.0, 10.0, 0.0], [0.0, 0.0, 12.0]).unwrap()
    }

    fn fig2() -> ProjectedSystem {
        ProjectedSystem::new([10.0, 5.0, 0.3], [0.15 * 0.6.sqrt(), 0.9, 3.0 * 6.0.sqrt()]).unwrap()
    }

    #[test]
    fn candidates_above_the_switch_include_the_ring() {
        let c = stationary_candidates(0.8, &fig1()).unwrap();
        assert!(c.iter().any(|c| c.direction == [0.0, 0.0, 1.0]));
        assert!(c.iter().any(|c| c.direction == [0.0, 0.0, -1.0]));
        let ring: Vec<_> = c.iter().filter(|c| c.ring).collect();
        assert!(!ring.is_empty());
        for c in ring {
            assert!((c.direction[2] - 0.75).abs() < 1e-15);
            assert_eq!(c.branch, Branch::AxisBranch);
        }
    }

    #[test]
    fn candidates_below_the_switch_are_the_poles() {
        let c = stationary_candidates(0.3, &fig1()).unwrap();
        assert_eq!(c.len(), 2);
        for c in &c {
            assert_eq!(c.direction[0], 0.0);
            assert_eq!(c.direction[1], 0.0);
            assert_eq!(c.direction[2].abs(), 1.0);
        }
    }

    #[test]
    fn candidates_without_b_are_the_signed_axes() {
        let p = ProjectedSystem::new([3.0, 2.0, 1.0], [0.0; 3]).unwrap();
        let r = 0.4;
        let c = stationary_candidates(r, &p).unwrap();
        assert_eq!(c.len(), 6);
        for cand in &c {
            let j = cand.direction.iter().position(|x| x.abs() == 1.0).unwrap();
            let expect = -r * (p.trace() - p.a[j]);
            assert!((cand.rate - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_system_is_degenerate() {
        let p = ProjectedSystem::new([0.0; 3], [0.0; 3]).unwrap();
        assert_eq!(stationary_candidates(0.5, &p), Err(Error::DegenerateSystem));
        let e = envelope_at(0.5, &p).unwrap();
        assert_eq!((e.f_max, e.f_min), (0.0, 0.0));
    }

    #[test]
    fn envelope_examples() {
        let e = envelope_at(0.3, &fig1()).unwrap();
        assert!((e.f_max - 6.0).abs() < 1e-13 && (e.f_min + 18.0).abs() < 1e-13);
        let e = envelope_at(0.8, &fig1()).unwrap();
        assert!((e.f_max + 3.5).abs() < 1e-13);
        let iso = ProjectedSystem::new([1.0; 3], [0.0; 3]).unwrap();
        let e = envelope_at(0.5, &iso).unwrap();
        assert_eq!((e.f_max, e.f_min), (-1.0, -1.0));
    }

    #[test]
    fn analytic_examples() {
        let p = fig1();
        assert!((analytic_axial_envelope(&p, 0.3).unwrap().f_max - 6.0).abs() < 1e-14);
        let at_switch = analytic_axial_envelope(&p, 0.6).unwrap();
        assert!(at_switch.f_max.abs() < 1e-14);
        assert!((144.0 / 24.0 - 6.0 - at_switch.f_max).abs() < 1e-14);
        let end = analytic_axial_envelope(&p, 1.0).unwrap();
        assert!((end.f_max + 6.4).abs() < 1e-14 && (end.f_min + 32.0).abs() < 1e-14);
        assert!(analytic_axial_envelope(&fig2(), 0.5).is_none());
    }

    #[test]
    fn analytic_and_numeric_directions_agree() {
        let p = fig1();
        for r in [0.1, 0.6, 0.7, 0.95] {
            let a = analytic_axial_envelope(&p, r).unwrap();
            let n = envelope_at(r, &p).unwrap();
            for j in 0..3 {
                assert!((a.argmax[j] - n.argmax[j]).abs() < 1e-12, "{r}: {a:?} {n:?}");
                assert!((a.argmin[j] - n.argmin[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curve_without_b_is_linear() {
        let p = ProjectedSystem::new([3.0, 2.0, 1.0], [0.0; 3]).unwrap();
        let env = envelope_curve(&p, &uniform_grid(50)).unwrap();
        for i in 0..env.len() {
            let r = env.r_grid[i];
            assert!((env.f_max[i] + 3.0 * r).abs() < 1e-14);
            assert!((env.f_min[i] + 5.0 * r).abs() < 1e-14);
        }
    }

    #[test]
    fn curve_rejects_bad_grid() {
        assert!(envelope_curve(&fig1(), &[0.5, 0.4]).is_err());
        assert!(envelope_curve(&fig1(), &[0.0, 0.4]).is_err());
    }

    #[test]
    fn lattice_is_on_the_sphere() {
        let l = FibonacciLattice::new(1000);
        assert_eq!(l.points().len(), 1000);
        for d in l.points() {
            assert!((crate::linalg::norm(d) - 1.0).abs() < 1e-14);
        }
        let iso = ProjectedSystem::new([1.0; 3], [0.0; 3]).unwrap();
        let (hi, lo) = brute_force_envelope(0.3, &iso, 1000);
        assert!((hi + 0.6).abs() < 1e-15 && (lo + 0.6).abs() < 1e-15);
    }

    #[test]
    fn brute_force_agrees_on_figure_systems() {
        let lattice = FibonacciLattice::new(1_000_000);
        let e = envelope_at(0.8, &fig1()).unwrap();
        let b = lattice.extremes(0.8, &fig1());
        assert!(b.f_max <= e.f_max + 1e-12 && e.f_max - b.f_max < 1e-5);
        assert!(b.f_min >= e.f_min - 1e-12 && b.f_min - e.f_min < 1e-5);

        let e = envelope_at(0.5, &fig2()).unwrap();
        let b = lattice.extremes(0.5, &fig2());
        assert!(b.f_max <= e.f_max + 1e-12 && e.f_max - b.f_max < 1e-4);
        assert!(b.f_min >= e.f_min - 1e-12 && b.f_min - e.f_min < 1e-4);
    }
}
