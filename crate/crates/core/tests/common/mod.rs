#![allow(dead_code)]

use bloch_trap_core::linalg::{c, norm, Mat2c, Mat3, Vec2c, Vec3, CZERO};
use bloch_trap_core::model::Gks;
use bloch_trap_core::{project_to_six_params, BlochState, GksModel, LindbladOp, ProjectedSystem};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Pair = (f64, f64);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_c<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `A = B B†` from the entries of `B`.
pub fn gks_from_factor(bm: &[[Pair; 3]; 3]) -> Gks {
    let mut a = [[CZERO; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            for m in 0..3 {
                a[j][k] += c(bm[j][m].0, bm[j][m].1) * c(bm[k][m].0, -bm[k][m].1);
            }
        }
    }
    a
}

pub fn system_from_factor(bm: &[[Pair; 3]; 3]) -> ProjectedSystem {
    project_to_six_params(&GksModel::new(gks_from_factor(bm)).unwrap()).unwrap()
}

pub fn random_system<R: Rng>(rng: &mut R) -> ProjectedSystem {
    let mut bm = [[(0.0, 0.0); 3]; 3];
    for row in bm.iter_mut() {
        for e in row.iter_mut() {
            *e = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    system_from_factor(&bm)
}

pub fn random_ops<R: Rng>(rng: &mut R, count: usize) -> Vec<LindbladOp> {
    (0..count)
        .map(|_| {
            let m: Mat2c = [[normal_c(rng), normal_c(rng)], [normal_c(rng), normal_c(rng)]];
            LindbladOp::new(m)
        })
        .collect()
}

pub fn random_unit2<R: Rng>(rng: &mut R) -> Vec2c {
    let v = [normal_c(rng), normal_c(rng)];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

pub fn random_direction<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = norm(&v);
        if n > 1e-3 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Rotation matrix of a unit quaternion.
pub fn rotation(q: [f64; 4]) -> Mat3 {
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// `|v⟩⟨w|` as a matrix.
pub fn outer(v: &Vec2c, w: &Vec2c) -> Mat2c {
    [
        [v[0] * w[0].conj(), v[0] * w[1].conj()],
        [v[1] * w[0].conj(), v[1] * w[1].conj()],
    ]
}

/// Traceless operator with eigenvector `v`: `α(|v⟩⟨v| − |w⟩⟨w|) + β|v⟩⟨w|`
/// where `w ⊥ v`. Singular exactly when `α = 0`.
pub fn op_with_eigenvector(v: &Vec2c, alpha: Complex64, beta: Complex64) -> LindbladOp {
    let w = [-v[1].conj(), v[0].conj()];
    let pv = outer(v, v);
    let pw = outer(&w, &w);
    let vw = outer(v, &w);
    let mut m = [[CZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = alpha * (pv[i][j] - pw[i][j]) + beta * vw[i][j];
        }
    }
    LindbladOp::new(m)
}

pub fn pair() -> impl Strategy<Value = Pair> {
    (-2.0..2.0f64, -2.0..2.0f64)
}

pub fn factor() -> impl Strategy<Value = [[Pair; 3]; 3]> {
    prop::array::uniform3(prop::array::uniform3(pair()))
}

pub fn unit_vector() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("away from zero", |v| norm(v) > 1e-2)
        .prop_map(|v| {
            let n = norm(&v);
            [v[0] / n, v[1] / n, v[2] / n]
        })
}

pub fn operator_list(max: usize) -> impl Strategy<Value = Vec<LindbladOp>> {
    prop::collection::vec(prop::array::uniform3(pair()), 1..=max).prop_map(|list| {
        list.into_iter()
            .map(|p| LindbladOp::from_pauli([c(p[0].0, p[0].1), c(p[1].0, p[1].1), c(p[2].0, p[2].1)]))
            .collect()
    })
}

/// Unit vector `cos(ωt) d0 + sin(ωt) e` along a great circle (`e ⊥ d0`).
pub fn arc(d0: &Vec3, e: &Vec3, omega: f64, t: f64) -> Vec3 {
    let (s, c) = (omega * t).sin_cos();
    [c * d0[0] + s * e[0], c * d0[1] + s * e[1], c * d0[2] + s * e[2]]
}

/// Plans `r(t) n̂(t)` along a great-circle arc starting at `d0` and turning
/// towards `toward`, on a grid of spacing `dt / 2` so that every RK4 stage
/// of a step `dt` lands on a sample. `None` when the planned radius drops
/// below `min_radius`, where the synthesized controls blow up.
pub fn plan_arc(
    p: &ProjectedSystem,
    d0: &Vec3,
    toward: &Vec3,
    omega: f64,
    r0: f64,
    t_final: f64,
    dt: f64,
    min_radius: f64,
) -> Option<bloch_trap_core::dynamics::PlannedPath> {
    use bloch_trap_core::dynamics::{integrate_radial, PlannedPath};
    use bloch_trap_core::linalg::{axpy, dot, normalized};

    let e = normalized(&axpy(toward, -dot(toward, d0), d0))?;
    let radial = integrate_radial(r0, |t, _| Ok(arc(d0, &e, omega, t)), p, t_final, dt / 2.0).ok()?;
    if radial.radii.iter().any(|&r| r < min_radius) || *radial.times.last()? != t_final {
        return None;
    }
    Some(PlannedPath {
        times: radial.times,
        directions: radial.directions,
        radii: radial.radii,
        breakpoints: Vec::new(),
    })
}

/// Synthesizes controls for a path planned by [`plan_arc`] and integrates
/// the Bloch equation with them. Returns the largest componentwise deviation
/// between the planned and integrated Bloch vectors.
pub fn closed_loop_deviation(p: &ProjectedSystem, path: &bloch_trap_core::dynamics::PlannedPath, dt: f64) -> f64 {
    use bloch_trap_core::dynamics::{controls_for_path, integrate_bloch, DEFAULT_RADIUS_FLOOR};
    use bloch_trap_core::linalg::scale;

    let sched = controls_for_path(path, p, DEFAULT_RADIUS_FLOOR).unwrap();
    let n0 = BlochState::new(scale(&path.directions[0], path.radii[0])).unwrap();
    let t_final = *path.times.last().unwrap();
    let traj = integrate_bloch(&n0, |t| sched.control_at(t), p, t_final, dt).unwrap();
    let mut worst: f64 = 0.0;
    for (k, state) in traj.states.iter().enumerate() {
        let planned = scale(&path.directions[2 * k], path.radii[2 * k]);
        for j in 0..3 {
            worst = worst.max((state.n[j] - planned[j]).abs());
        }
    }
    worst
}

/// Endpoint error of RK4 on the isotropic system `a = (10, 10, 10)`, `b = 0`
/// under a constant control about `z`, whose exact solution is a decaying
/// rotation. Relative to the exact endpoint norm.
pub fn isotropic_endpoint_error(dt: f64) -> f64 {
    use bloch_trap_core::dynamics::integrate_bloch;
    let p = ProjectedSystem::new([10.0; 3], [0.0; 3]).unwrap();
    let (u, t_final) = (5.0, 0.5);
    let n0 = [0.6, 0.0, 0.5];
    let traj = integrate_bloch(&BlochState::new(n0).unwrap(), |_| [0.0, 0.0, u], &p, t_final, dt).unwrap();
    let decay = (-20.0 * t_final).exp();
    let (s, c) = (2.0 * u * t_final).sin_cos();
    let exact = [decay * c * n0[0], decay * s * n0[0], decay * n0[2]];
    let end = traj.last().n;
    let diff = [end[0] - exact[0], end[1] - exact[1], end[2] - exact[2]];
    norm(&diff) / norm(&exact)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Operator lists covering every branch of the classification:
///
/// 0. one generic operator
/// 1. one singular operator
/// 2. one Hermitian operator up to phase
/// 3. one singular and 1-3 non-singular operators sharing an eigenvector
/// 4. 2-4 non-singular operators sharing an eigenvector
/// 5. 2-4 generic operators
/// 6. two singular operators with different eigenvectors
/// 7. a singular operator, a multiple of it and a non-singular one, all
///    sharing an eigenvector
pub fn structured_ops(kind: usize, seed: u64) -> Vec<LindbladOp> {
    let mut g = rng(seed);
    let v = random_unit2(&mut g);
    let nonsingular = |g: &mut ChaCha8Rng, v| op_with_eigenvector(v, normal_c(g), normal_c(g));
    match kind {
        0 => random_ops(&mut g, 1),
        1 => vec![op_with_eigenvector(&v, c(0.0, 0.0), normal_c(&mut g))],
        2 => {
            let m = random_direction(&mut g);
            let phase = c(0.0, g.gen_range(0.0..core::f64::consts::TAU)).exp();
            vec![LindbladOp::from_pauli([phase * m[0], phase * m[1], phase * m[2]])]
        }
        3 => {
            let mut ops = vec![op_with_eigenvector(&v, c(0.0, 0.0), normal_c(&mut g))];
            for _ in 0..g.gen_range(1..4) {
                ops.push(nonsingular(&mut g, &v));
            }
            ops
        }
        4 => (0..g.gen_range(2..5)).map(|_| nonsingular(&mut g, &v)).collect(),
        5 => {
            let n = g.gen_range(2..5);
            random_ops(&mut g, n)
        }
        6 => {
            let w = random_unit2(&mut g);
            vec![
                op_with_eigenvector(&v, c(0.0, 0.0), normal_c(&mut g)),
                op_with_eigenvector(&w, c(0.0, 0.0), normal_c(&mut g)),
            ]
        }
        _ => {
            let base = op_with_eigenvector(&v, c(0.0, 0.0), normal_c(&mut g));
            vec![base, base.scaled(g.gen_range(0.2..3.0)), nonsingular(&mut g, &v)]
        }
    }
}
