//! Bloch-vector, radial and unit-vector equations, their integration, and
//! synthesis of Hamiltonian controls that realize a planned direction path.
//!
//! All vectors here are in the intrinsic frame of the [`ProjectedSystem`],
//! where the symmetric dissipation matrix is `diag(a)`. The control `u`
//! multiplies the Pauli matrices in the Hamiltonian `Σ_j u_j σ_j`, which
//! rotates the Bloch vector at angular velocity `2u`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    add, axpy, c, cross, dot, m2_apply, norm, scale, sub, v2_orthogonal, Vec2c, Vec3,
};
use crate::model::{BlochState, ProjectedSystem, PAULI};

/// Control amplitudes `(u_x, u_y, u_z)` of the Hamiltonian `Σ_j u_j σ_j`.
pub type ControlVector = Vec3;

pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_RADIUS_FLOOR: f64 = 1e-6;

const UNIT_TOL: f64 = 1e-10;
const BALL_TOL: f64 = 1e-6;

fn diag_apply(a: &[f64; 3], v: &Vec3) -> Vec3 {
    [a[0] * v[0], a[1] * v[1], a[2] * v[2]]
}

fn check_unit(n_hat: &Vec3) -> Result<()> {
    let nn = norm(n_hat);
    if (nn - 1.0).abs() > UNIT_TOL || !nn.is_finite() {
        return Err(Error::NotUnit { norm: nn });
    }
    Ok(())
}

/// `dn/dt = b + 2u×n + (A^S − tr(A^S) I) n`
pub fn bloch_rhs(n: &Vec3, u: &ControlVector, p: &ProjectedSystem) -> Vec3 {
    let rot = scale(&cross(u, n), 2.0);
    let diss = sub(&diag_apply(&p.a, n), &scale(n, p.trace()));
    add(&add(&p.b, &rot), &diss)
}

/// `dr/dt = Σ b_j n_j − r Σ a_j (1 − n_j²)` without checking `|n̂| = 1`.
#[inline]
pub fn radial_rate_unchecked(r: f64, n_hat: &Vec3, p: &ProjectedSystem) -> f64 {
    let mut lin = 0.0;
    let mut quad = 0.0;
    for j in 0..3 {
        lin += p.b[j] * n_hat[j];
        quad += p.a[j] * (1.0 - n_hat[j] * n_hat[j]);
    }
    lin - r * quad
}

/// Rate of change of the Bloch radius at radius `r` with the state pointing
/// along `n_hat`. Independent of the controls.
pub fn radial_rate(r: f64, n_hat: &Vec3, p: &ProjectedSystem) -> Result<f64> {
    check_unit(n_hat)?;
    Ok(radial_rate_unchecked(r, n_hat, p))
}

/// `dn̂/dt = 2u×n̂ + (b − (b·n̂)n̂)/r + (A^S n̂ − (n̂·A^S n̂) n̂)`
pub fn unit_rhs(n_hat: &Vec3, r: f64, u: &ControlVector, p: &ProjectedSystem) -> Result<Vec3> {
    if !(r > 0.0) {
        return Err(Error::ZeroRadius);
    }
    check_unit(n_hat)?;
    let rot = scale(&cross(u, n_hat), 2.0);
    let b_t = axpy(&p.b, -dot(&p.b, n_hat), n_hat);
    let an = diag_apply(&p.a, n_hat);
    let a_t = axpy(&an, -dot(n_hat, &an), n_hat);
    Ok(add(&add(&rot, &scale(&b_t, 1.0 / r)), &a_t))
}

/// Spectrum and eigenvectors of the density matrix of a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub psi_plus: Vec2c,
    pub psi_minus: Vec2c,
}

/// Eigen-decomposition of `ρ(n)`: eigenvalues `(1 ± r)/2`, `ψ+` along the
/// Bloch direction and `ψ−` its orthogonal complement. The vector components
/// are in the Pauli frame, so `n` must be given in Pauli coordinates too.
pub fn eigenpair(n: &BlochState) -> Result<Eigenpair> {
    let r = n.radius();
    if r < 1e-12 {
        return Err(Error::DegenerateState);
    }
    let d = scale(&n.n, 1.0 / r);
    // Two charts of the same state; each is regular away from its own pole.
    let psi_plus = if d[2] >= 0.0 {
        let s = (2.0 * (1.0 + d[2])).sqrt();
        [c(((1.0 + d[2]) / 2.0).sqrt(), 0.0), c(d[0] / s, d[1] / s)]
    } else {
        let s = (2.0 * (1.0 - d[2])).sqrt();
        [c(d[0] / s, -d[1] / s), c(((1.0 - d[2]) / 2.0).sqrt(), 0.0)]
    };
    Ok(Eigenpair {
        lambda_plus: (1.0 + r) / 2.0,
        lambda_minus: (1.0 - r) / 2.0,
        psi_plus,
        psi_minus: v2_orthogonal(&psi_plus),
    })
}

/// Pauli-frame Bloch vector `⟨ψ|σ_j|ψ⟩` of a normalized pure state.
pub fn bloch_vector_of(psi: &Vec2c) -> Vec3 {
    let mut n = [0.0; 3];
    for (j, s) in PAULI.iter().enumerate() {
        let sv = m2_apply(s, psi);
        n[j] = (psi[0].conj() * sv[0] + psi[1].conj() * sv[1]).re;
    }
    n
}

/// Samples of a time series with values known at `times`.
fn locate(times: &[f64], t: f64) -> (usize, f64) {
    let last = times.len() - 1;
    if t <= times[0] {
        return (0, 0.0);
    }
    if t >= times[last] {
        return (last, 0.0);
    }
    let i = times.partition_point(|&x| x <= t) - 1;
    let w = (t - times[i]) / (times[i + 1] - times[i]);
    (i, w)
}

/// A direction path `n̂(t)` and radius `r(t)` to be realized by controls.
///
/// `breakpoints` lists the sample indices where a new differentiable piece
/// starts (the first piece starts at 0 implicitly).
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    pub times: Vec<f64>,
    pub directions: Vec<Vec3>,
    pub radii: Vec<f64>,
    pub breakpoints: Vec<usize>,
}

impl PlannedPath {
    /// Splits the path wherever consecutive directions differ by more than
    /// `max_angle` radians.
    pub fn split_at_jumps(mut self, max_angle: f64) -> Self {
        let mut bps: Vec<usize> = self.breakpoints.clone();
        for i in 1..self.directions.len() {
            let cosang = dot(&self.directions[i - 1], &self.directions[i]).clamp(-1.0, 1.0);
            if cosang.acos() > max_angle {
                bps.push(i);
            }
        }
        bps.sort_unstable();
        bps.dedup();
        self.breakpoints = bps;
        self
    }

    fn segments(&self) -> Vec<(usize, usize)> {
        let n = self.times.len();
        let mut starts: Vec<usize> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&b| b > 0 && b < n)
            .collect();
        starts.sort_unstable();
        starts.dedup();
        let mut out = Vec::with_capacity(starts.len() + 1);
        let mut s = 0;
        for &b in &starts {
            out.push((s, b));
            s = b;
        }
        out.push((s, n));
        out
    }
}

/// Finite-difference derivative on a (possibly non-uniform) grid: three-point
/// central differences inside, three-point one-sided at the ends.
fn derivative(times: &[f64], values: &[Vec3]) -> Vec<Vec3> {
    let n = times.len();
    let mut out = Vec::with_capacity(n);
    match n {
        0 => {}
        1 => out.push([0.0; 3]),
        2 => {
            let d = scale(&sub(&values[1], &values[0]), 1.0 / (times[1] - times[0]));
            out.push(d);
            out.push(d);
        }
        _ => {
            let combo = |i: usize, w: [f64; 3]| -> Vec3 {
                let mut acc = scale(&values[i], w[0]);
                acc = axpy(&acc, w[1], &values[i + 1]);
                axpy(&acc, w[2], &values[i + 2])
            };
            // forward at 0
            let (h1, h2) = (times[1] - times[0], times[2] - times[1]);
            out.push(combo(
                0,
                [
                    -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                    (h1 + h2) / (h1 * h2),
                    -h1 / (h2 * (h1 + h2)),
                ],
            ));
            for i in 1..n - 1 {
                let (h1, h2) = (times[i] - times[i - 1], times[i + 1] - times[i]);
                out.push(combo(
                    i - 1,
                    [
                        -h2 / (h1 * (h1 + h2)),
                        (h2 - h1) / (h1 * h2),
                        h1 / (h2 * (h1 + h2)),
                    ],
                ));
            }
            let (h1, h2) = (times[n - 2] - times[n - 3], times[n - 1] - times[n - 2]);
            out.push(combo(
                n - 3,
                [
                    h2 / (h1 * (h1 + h2)),
                    -(h1 + h2) / (h1 * h2),
                    (2.0 * h2 + h1) / (h2 * (h1 + h2)),
                ],
            ));
        }
    }
    out
}

/// Piecewise-continuous controls together with the path they realize.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub times: Vec<f64>,
    pub controls: Vec<ControlVector>,
    pub planned_path: Vec<Vec3>,
    pub planned_radius: Vec<f64>,
    /// Sample indices starting a new piece.
    pub breakpoints: Vec<usize>,
}

impl ControlSchedule {
    /// Control at time `t`: linear interpolation inside a piece, held from
    /// the left across a breakpoint, constant outside the sampled range.
    pub fn control_at(&self, t: f64) -> ControlVector {
        let (i, w) = locate(&self.times, t);
        if w == 0.0 || self.breakpoints.binary_search(&(i + 1)).is_ok() {
            return self.controls[i];
        }
        let u0 = &self.controls[i];
        let u1 = &self.controls[i + 1];
        axpy(&scale(u0, 1.0 - w), w, u1)
    }

    pub fn max_control_norm(&self) -> f64 {
        self.controls.iter().map(norm).fold(0.0, f64::max)
    }

    /// Start time of every piece.
    pub fn breakpoint_times(&self) -> Vec<f64> {
        self.breakpoints.iter().map(|&i| self.times[i]).collect()
    }
}

/// Controls that make the Bloch equation follow `r(t) n̂(t)`:
///
/// `u = ½ (n̂ × dn̂/dt − (1/r) n̂ × b − n̂ × (A^S n̂))`
///
/// `dn̂/dt` is taken by finite differences within each piece of the path.
/// The prescription diverges as `r → 0`, so radii below `radius_floor` are
/// rejected.
pub fn controls_for_path(
    path: &PlannedPath,
    p: &ProjectedSystem,
    radius_floor: f64,
) -> Result<ControlSchedule> {
    let n = path.times.len();
    if n == 0 || path.directions.len() != n || path.radii.len() != n {
        return Err(Error::InvalidArgument("path samples must be non-empty and of equal length"));
    }
    if path.times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("path times must be strictly increasing"));
    }
    for d in &path.directions {
        check_unit(d)?;
    }
    for (index, &r) in path.radii.iter().enumerate() {
        if !(r >= radius_floor) || r <= 0.0 {
            return Err(Error::RadiusUnderflow { index, radius: r, floor: radius_floor });
        }
        if r > 1.0 + 1e-9 {
            return Err(Error::InvalidArgument("planned radius exceeds one"));
        }
    }

    let segments = path.segments();
    let mut controls = Vec::with_capacity(n);
    for &(s, e) in &segments {
        let dn = derivative(&path.times[s..e], &path.directions[s..e]);
        for (k, dnk) in dn.iter().enumerate() {
            let i = s + k;
            let nh = &path.directions[i];
            let r = path.radii[i];
            let steer = cross(nh, dnk);
            let drift_b = scale(&cross(nh, &p.b), 1.0 / r);
            let drift_a = cross(nh, &diag_apply(&p.a, nh));
            controls.push(scale(&sub(&sub(&steer, &drift_b), &drift_a), 0.5));
        }
    }

    Ok(ControlSchedule {
        times: path.times.clone(),
        controls,
        planned_path: path.directions.clone(),
        planned_radius: path.radii.clone(),
        breakpoints: segments.iter().skip(1).map(|s| s.0).collect(),
    })
}

fn rk4_step<F: FnMut(f64, &Vec3) -> Vec3>(f: &mut F, t: f64, y: &Vec3, h: f64) -> Vec3 {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut acc = add(&k1, &k4);
    acc = axpy(&acc, 2.0, &add(&k2, &k3));
    axpy(y, h / 6.0, &acc)
}

fn rk4_scalar<F: FnMut(f64, f64) -> Result<f64>>(f: &mut F, t: f64, y: f64, h: f64) -> Result<f64> {
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, y + 0.5 * h * k1)?;
    let k3 = f(t + 0.5 * h, y + 0.5 * h * k2)?;
    let k4 = f(t + h, y + h * k3)?;
    Ok(y + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4))
}

fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument("time step must be positive"));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidArgument("duration must be non-negative"));
    }
    let steps = (t_final / dt - 1e-9).ceil().max(0.0);
    if steps > 1e9 {
        return Err(Error::InvalidArgument("too many integration steps"));
    }
    Ok(steps as usize)
}

fn grid_time(k: usize, steps: usize, dt: f64, t_final: f64) -> f64 {
    if k == steps {
        t_final
    } else {
        k as f64 * dt
    }
}

/// Time-stamped Bloch vectors, optionally with the controls applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
    pub controls: Option<Vec<ControlVector>>,
}

impl Trajectory {
    pub fn last(&self) -> &BlochState {
        self.states.last().expect("a trajectory holds at least its initial state")
    }
}

/// Classical fixed-step RK4 integration of the Bloch equation from `n0` over
/// `[0, t_final]`. The last step is shortened to land on `t_final`.
pub fn integrate_bloch<U: FnMut(f64) -> ControlVector>(
    n0: &BlochState,
    mut control: U,
    p: &ProjectedSystem,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    let steps = step_count(t_final, dt)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut controls = Vec::with_capacity(steps + 1);

    let mut y = n0.n;
    times.push(0.0);
    states.push(*n0);
    controls.push(control(0.0));

    let mut rhs = |t: f64, n: &Vec3| bloch_rhs(n, &control(t), p);
    for k in 0..steps {
        let t = grid_time(k, steps, dt, t_final);
        let t_next = grid_time(k + 1, steps, dt, t_final);
        y = rk4_step(&mut rhs, t, &y, t_next - t);
        let r = norm(&y);
        if !(r <= 1.0 + BALL_TOL) {
            return Err(Error::BallViolation { time: t_next, norm: r });
        }
        times.push(t_next);
        states.push(BlochState { n: y });
    }
    drop(rhs);
    for &t in &times[1..] {
        controls.push(control(t));
    }
    Ok(Trajectory { times, states, controls: Some(controls) })
}

/// Why a radial integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialStop {
    /// Ran for the full duration.
    Completed,
    /// Radius fell to the floor: the state would pass through the completely
    /// mixed point, where the direction is undefined.
    ReachedFloor,
    /// Radius hit the requested target.
    ReachedTarget,
}

/// Radius samples from [`integrate_radial`] with the policy directions used.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    pub directions: Vec<Vec3>,
    pub stop: RadialStop,
}

/// Settings for a radial integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialRun {
    pub t_final: f64,
    pub dt: f64,
    pub floor: f64,
    /// Stop as soon as the radius reaches this value.
    pub target: Option<f64>,
}

impl RadialRun {
    pub fn new(t_final: f64, dt: f64) -> Self {
        RadialRun { t_final, dt, floor: DEFAULT_RADIUS_FLOOR, target: None }
    }

    pub fn floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    pub fn target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    /// Integrates `dr/dt = radial_rate(r, policy(t, r))` with RK4.
    pub fn run<P>(&self, r0: f64, mut policy: P, p: &ProjectedSystem) -> Result<RadialCurve>
    where
        P: FnMut(f64, f64) -> Result<Vec3>,
    {
        if !(r0 > 0.0 && r0 <= 1.0 + 1e-12) {
            return Err(Error::InvalidArgument("initial radius must lie in (0, 1]"));
        }
        let steps = step_count(self.t_final, self.dt)?;
        let mut times = alloc::vec![0.0];
        let mut radii = alloc::vec![r0];
        let mut directions = alloc::vec![policy(0.0, r0)?];

        if self.target == Some(r0) {
            return Ok(RadialCurve { times, radii, directions, stop: RadialStop::ReachedTarget });
        }

        let mut rate = |t: f64, r: f64| -> Result<f64> { radial_rate(r, &policy(t, r)?, p) };
        let mut r = r0;
        let mut stop = RadialStop::Completed;
        let mut samples: Vec<(f64, f64)> = Vec::new();
        for k in 0..steps {
            let t = grid_time(k, steps, self.dt, self.t_final);
            let t_next = grid_time(k + 1, steps, self.dt, self.t_final);
            let h = t_next - t;
            let mut r_next = rk4_scalar(&mut rate, t, r, h)?;
            let mut t_end = t_next;

            if let Some(target) = self.target {
                if (r - target) * (r_next - target) <= 0.0 {
                    // Shorten the step so it lands on the target.
                    let (mut lo, mut hi) = (0.0, h);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        let rm = rk4_scalar(&mut rate, t, r, mid)?;
                        if (r - target) * (rm - target) > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    t_end = t + hi;
                    r_next = rk4_scalar(&mut rate, t, r, hi)?;
                    stop = RadialStop::ReachedTarget;
                }
            }
            if r_next > 1.0 + BALL_TOL {
                return Err(Error::BallViolation { time: t_end, norm: r_next });
            }
            if r_next <= self.floor {
                stop = RadialStop::ReachedFloor;
            }
            samples.push((t_end, r_next));
            r = r_next;
            if stop != RadialStop::Completed {
                break;
            }
        }
        drop(rate);
        for (t, r) in samples {
            times.push(t);
            radii.push(r);
            let d = if r > 0.0 { policy(t, r)? } else { *directions.last().unwrap() };
            directions.push(d);
        }
        Ok(RadialCurve { times, radii, directions, stop })
    }
}

/// [`RadialRun`] with the default floor and no target.
pub fn integrate_radial<P>(
    r0: f64,
    policy: P,
    p: &ProjectedSystem,
    t_final: f64,
    dt: f64,
) -> Result<RadialCurve>
where
    P: FnMut(f64, f64) -> Result<Vec3>,
{
    RadialRun::new(t_final, dt).run(r0, policy, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{m2_apply, v2_inner, v2_norm};
    use crate::model::density_from_bloch;

    fn fig1() -> ProjectedSystem {
        ProjectedSystem::new([10.0, 10.0, 0.0], [0.0, 0.0, 12.0]).unwrap()
    }

    fn zero() -> ProjectedSystem {
        ProjectedSystem::new([0.0; 3], [0.0; 3]).unwrap()
    }

    fn iso() -> ProjectedSystem {
        ProjectedSystem::new([1.0; 3], [0.0; 3]).unwrap()
    }

    fn assert_vec_close(a: &Vec3, b: &Vec3, tol: f64) {
        for j in 0..3 {
            assert!((a[j] - b[j]).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn bloch_rhs_examples() {
        assert_eq!(bloch_rhs(&[0.0; 3], &[3.0, -1.0, 2.0], &fig1()), [0.0, 0.0, 12.0]);
        // precession at angular velocity 2u
        assert_eq!(bloch_rhs(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &zero()), [0.0, 2.0, 0.0]);
        assert_vec_close(&bloch_rhs(&[0.0, 0.0, 0.3], &[0.0; 3], &fig1()), &[0.0, 0.0, 6.0], 1e-14);
    }

    #[test]
    fn radial_rate_examples() {
        let d = [0.48, -0.6, 0.64];
        assert!((radial_rate(0.5, &d, &iso()).unwrap() + 1.0).abs() < 1e-15);
        assert!((radial_rate(0.3, &[0.0, 0.0, 1.0], &fig1()).unwrap() - 6.0).abs() < 1e-14);
        assert!((radial_rate(0.3, &[0.0, 0.0, -1.0], &fig1()).unwrap() + 18.0).abs() < 1e-14);
        assert!(matches!(radial_rate(0.3, &[0.0, 0.0, 1.1], &fig1()), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn unit_rhs_examples() {
        let v = unit_rhs(&[1.0, 0.0, 0.0], 0.7, &[0.0, 0.0, 1.0], &zero()).unwrap();
        assert_eq!(v, [0.0, 2.0, 0.0]);
        let v = unit_rhs(&[0.0, 0.0, 1.0], 0.42, &[0.0; 3], &fig1()).unwrap();
        assert_vec_close(&v, &[0.0; 3], 1e-15);
        let transverse = ProjectedSystem::new([0.0; 3], [0.0, 0.0, 12.0]).unwrap();
        let v = unit_rhs(&[1.0, 0.0, 0.0], 0.5, &[0.0; 3], &transverse).unwrap();
        assert_vec_close(&v, &[0.0, 0.0, 24.0], 1e-14);
        assert_eq!(unit_rhs(&[1.0, 0.0, 0.0], 0.0, &[0.0; 3], &fig1()), Err(Error::ZeroRadius));
    }

    #[test]
    fn eigenpair_examples() {
        let e = eigenpair(&BlochState::new([0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!((e.lambda_plus, e.lambda_minus), (1.0, 0.0));
        assert_eq!(e.psi_plus, [c(1.0, 0.0), c(0.0, 0.0)]);

        let e = eigenpair(&BlochState::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
        let h = f64::sqrt(0.5);
        assert!((e.psi_plus[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((e.psi_plus[1] - c(h, 0.0)).norm() < 1e-15);

        for n in [[0.6, 0.0, 0.8], [0.1, -0.2, -0.7], [0.0, 0.0, -0.5], [-0.3, 0.4, 0.0]] {
            let s = BlochState::new(n).unwrap();
            let e = eigenpair(&s).unwrap();
            let rho = density_from_bloch(&s);
            for (lam, psi) in [(e.lambda_plus, e.psi_plus), (e.lambda_minus, e.psi_minus)] {
                let rp = m2_apply(rho.matrix(), &psi);
                assert!((rp[0] - psi[0] * lam).norm() < 1e-14);
                assert!((rp[1] - psi[1] * lam).norm() < 1e-14);
                assert!((v2_norm(&psi) - 1.0).abs() < 1e-14);
            }
            assert!(v2_inner(&e.psi_plus, &e.psi_minus).norm() < 1e-15);
        }
        // |n| = 1 here, so ρ = [[0.9, 0.3], [0.3, 0.1]] is pure: λ+ = 1.
        let e = eigenpair(&BlochState::new([0.6, 0.0, 0.8]).unwrap()).unwrap();
        assert!((e.lambda_plus - 1.0).abs() < 1e-15 && e.lambda_minus.abs() < 1e-15);
        assert_eq!(eigenpair(&BlochState::new([0.0; 3]).unwrap()), Err(Error::DegenerateState));
    }

    #[test]
    fn bloch_vector_of_eigenvector_is_direction() {
        let n = [0.1, -0.2, -0.7];
        let e = eigenpair(&BlochState::new(n).unwrap()).unwrap();
        let d = bloch_vector_of(&e.psi_plus);
        let r = norm(&n);
        assert_vec_close(&d, &scale(&n, 1.0 / r), 1e-14);
    }

    fn constant_path(dir: Vec3, r: f64, samples: usize) -> PlannedPath {
        PlannedPath {
            times: (0..samples).map(|k| k as f64 * 0.01).collect(),
            directions: alloc::vec![dir; samples],
            radii: alloc::vec![r; samples],
            breakpoints: Vec::new(),
        }
    }

    #[test]
    fn synthesis_examples() {
        let s = controls_for_path(&constant_path([0.0, 0.6, 0.8], 0.4, 5), &zero(), 1e-6).unwrap();
        assert!(s.controls.iter().all(|u| norm(u) < 1e-12));

        let s = controls_for_path(&constant_path([0.0, 0.0, 1.0], 0.4, 5), &fig1(), 1e-6).unwrap();
        assert!(s.controls.iter().all(|u| norm(u) < 1e-15));

        let s = controls_for_path(&constant_path([1.0, 0.0, 0.0], 0.5, 5), &fig1(), 1e-6).unwrap();
        for u in &s.controls {
            assert_vec_close(u, &[0.0, 12.0, 0.0], 1e-13);
        }
    }

    #[test]
    fn synthesis_holds_direction_fixed_in_closed_loop() {
        // Hold n̂ = x̂ for the Fig. 1 system: r follows 12·0 − r·10, i.e. r0 e^{-10t}.
        let p = fig1();
        let r0 = 0.5;
        let dt = 1e-4;
        let radial = integrate_radial(r0, |_, _| Ok([1.0, 0.0, 0.0]), &p, 0.2, dt / 2.0).unwrap();
        let path = PlannedPath {
            times: radial.times.clone(),
            directions: radial.directions.clone(),
            radii: radial.radii.clone(),
            breakpoints: Vec::new(),
        };
        let sched = controls_for_path(&path, &p, DEFAULT_RADIUS_FLOOR).unwrap();
        let traj = integrate_bloch(
            &BlochState::new([r0, 0.0, 0.0]).unwrap(),
            |t| sched.control_at(t),
            &p,
            0.2,
            dt,
        )
        .unwrap();
        let end = traj.last().n;
        let r_exact = r0 * f64::exp(-10.0 * 0.2);
        assert_vec_close(&end, &[r_exact, 0.0, 0.0], 1e-8);
    }

    #[test]
    fn synthesis_rejects_small_radius() {
        let path = constant_path([1.0, 0.0, 0.0], 1e-7, 3);
        assert!(matches!(
            controls_for_path(&path, &fig1(), DEFAULT_RADIUS_FLOOR),
            Err(Error::RadiusUnderflow { index: 0, .. })
        ));
    }

    #[test]
    fn derivative_is_exact_for_quadratics() {
        let times = [0.0, 0.1, 0.25, 0.3, 0.55];
        let values: Vec<Vec3> = times.iter().map(|&t| [t * t, 3.0 * t - 1.0, 2.0]).collect();
        let d = derivative(&times, &values);
        for (t, dv) in times.iter().zip(&d) {
            assert_vec_close(dv, &[2.0 * t, 3.0, 0.0], 1e-12);
        }
    }

    #[test]
    fn schedule_holds_controls_across_breakpoints() {
        let s = ControlSchedule {
            times: alloc::vec![0.0, 1.0, 2.0],
            controls: alloc::vec![[0.0; 3], [1.0, 0.0, 0.0], [5.0, 0.0, 0.0]],
            planned_path: alloc::vec![[1.0, 0.0, 0.0]; 3],
            planned_radius: alloc::vec![0.5; 3],
            breakpoints: alloc::vec![2],
        };
        assert_eq!(s.control_at(0.5), [0.5, 0.0, 0.0]);
        assert_eq!(s.control_at(1.5), [1.0, 0.0, 0.0]);
        assert_eq!(s.control_at(9.0), [5.0, 0.0, 0.0]);
        assert_eq!(s.control_at(-1.0), [0.0; 3]);
    }

    #[test]
    fn integrate_bloch_examples() {
        let n0 = BlochState::new([0.1, -0.4, 0.3]).unwrap();
        let t = integrate_bloch(&n0, |_| [0.0; 3], &zero(), 1.0, 1e-2).unwrap();
        assert_eq!(t.last().n, n0.n);
        assert_eq!(t.times.len(), 101);
        assert_eq!(*t.times.last().unwrap(), 1.0);

        let t = integrate_bloch(&BlochState::new([0.0, 0.0, 1.0]).unwrap(), |_| [0.0; 3], &iso(), 1.0, DEFAULT_DT)
            .unwrap();
        assert_vec_close(&t.last().n, &[0.0, 0.0, f64::exp(-2.0)], 1e-8);

        let t = integrate_bloch(&BlochState::new([0.0, 0.0, 0.3]).unwrap(), |_| [0.0; 3], &fig1(), 2.0, 1e-3)
            .unwrap();
        assert_vec_close(&t.last().n, &[0.0, 0.0, 0.6], 1e-12);
    }

    #[test]
    fn ball_violation_is_reported() {
        // b far beyond what positivity allows pushes the state out of the ball.
        let p = ProjectedSystem::new([0.0; 3], [0.0, 0.0, 5.0]).unwrap();
        let err = integrate_bloch(&BlochState::new([0.0, 0.0, 0.9]).unwrap(), |_| [0.0; 3], &p, 1.0, 1e-3);
        assert!(matches!(err, Err(Error::BallViolation { .. })));
    }

    #[test]
    fn integrate_radial_examples() {
        let c = integrate_radial(0.3, |_, _| Ok([0.0, 0.0, 1.0]), &fig1(), 0.5, 1e-4).unwrap();
        for (t, r) in c.times.iter().zip(&c.radii) {
            assert!((r - (0.6 - 0.3 * f64::exp(-20.0 * t))).abs() < 1e-12);
        }
        assert_eq!(c.stop, RadialStop::Completed);

        let mut k = 0usize;
        let c = integrate_radial(
            0.8,
            |_, _| {
                k += 1;
                let dirs = [[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [0.0, 0.0, 1.0]];
                Ok(dirs[k % 3])
            },
            &iso(),
            1.0,
            1e-3,
        )
        .unwrap();
        assert!((c.radii.last().unwrap() - 0.8 * f64::exp(-2.0)).abs() < 1e-12);
    }

    #[test]
    fn integrate_radial_stops_at_target_and_floor() {
        let c = RadialRun::new(1.0, 1e-3)
            .target(0.55)
            .run(0.3, |_, _| Ok([0.0, 0.0, 1.0]), &fig1())
            .unwrap();
        assert_eq!(c.stop, RadialStop::ReachedTarget);
        assert!((c.radii.last().unwrap() - 0.55).abs() < 1e-12);
        // 0.6 − 0.3 e^{-20 t} = 0.55
        let t_exact = f64::ln(6.0) / 20.0;
        assert!((c.times.last().unwrap() - t_exact).abs() < 1e-9);

        // Pointing against b drives the radius through zero in finite time.
        let c = RadialRun::new(1.0, 1e-4)
            .floor(1e-3)
            .run(0.3, |_, _| Ok([0.0, 0.0, -1.0]), &fig1())
            .unwrap();
        assert_eq!(c.stop, RadialStop::ReachedFloor);
    }
}
