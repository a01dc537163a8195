use std::path::{Path, PathBuf};

use bloch_trap_core::analysis::{PurifiabilityCategory, TrapMethod};
use bloch_trap_core::dynamics::{
    controls_for_path, integrate_bloch, ControlSchedule, PlannedPath, RadialRun, RadialStop,
    DEFAULT_RADIUS_FLOOR,
};
use bloch_trap_core::extremal::{uniform_grid, FibonacciLattice};
use bloch_trap_core::linalg::{norm, scale, Vec2c};
use bloch_trap_core::{
    classify_purifiable, envelope_at, envelope_curve, reachable, trap_radius, validate_inequality,
    BlochState, Trajectory,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::model::{Complex, Model};
use crate::output::{emit, to_json, Table};

pub const ENVELOPE_HEADER: [&str; 9] =
    ["r", "f_max", "f_min", "nmax1", "nmax2", "nmax3", "nmin1", "nmin2", "nmin3"];
pub const TRAJECTORY_HEADER: [&str; 8] = ["t", "n1", "n2", "n3", "r", "u1", "u2", "u3"];

/// Sample count of the sphere lattice used by `--oracle-check`.
pub const ORACLE_POINTS: usize = 1_000_000;
/// Radius at which the `r → 0+` limits are evaluated.
pub const NEAR_ZERO: f64 = 1e-8;
/// Largest angle between consecutive steering directions before the path is
/// treated as two separate pieces.
const MAX_TURN: f64 = 0.1;
/// Allowed terminal radius error of a steering run.
pub const STEER_TOLERANCE: f64 = 1e-4;

pub struct Context {
    pub model: Model,
    pub out: Option<PathBuf>,
    pub indent: usize,
    pub seed: u64,
    pub quiet: bool,
}

impl Context {
    /// JSON-only commands write to `--out` when given, else standard output.
    fn json_result<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = to_json(value, self.indent);
        text.push('\n');
        emit(self.out.as_deref(), text.as_bytes())
    }

    /// Commands producing a table send it to `--out` and the summary to
    /// standard output; without `--out` the table takes standard output and
    /// the summary moves to standard error.
    fn table_result<T: Serialize>(&self, table: Table, summary: &T) -> Result<()> {
        let mut text = to_json(summary, self.indent);
        text.push('\n');
        emit(self.out.as_deref(), &table.into_bytes())?;
        if self.out.is_some() {
            emit(None, text.as_bytes())
        } else {
            if !self.quiet {
                eprint!("{text}");
            }
            Ok(())
        }
    }
}

fn clean(v: [f64; 3]) -> [f64; 3] {
    v.map(|x| x + 0.0)
}

#[derive(Debug, Serialize)]
struct ProjectSummary<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    a: [f64; 3],
    b: [f64; 3],
    /// Rows are the intrinsic axes in Pauli coordinates.
    frame: [[f64; 3]; 3],
    inequality_ok: bool,
}

pub fn project(ctx: &Context) -> Result<()> {
    let p = &ctx.model.system;
    ctx.json_result(&ProjectSummary {
        label: ctx.model.label.as_deref(),
        a: clean(p.a),
        b: clean(p.b),
        frame: p.frame.map(clean),
        inequality_ok: validate_inequality(p),
    })
}

#[derive(Debug, Serialize)]
struct Limits {
    r: f64,
    f_max: f64,
    f_min: f64,
    b_norm: f64,
}

#[derive(Debug, Serialize)]
struct OracleCheck {
    rows: usize,
    points: usize,
    seed: u64,
    max_deviation: f64,
}

#[derive(Debug, Serialize)]
struct EnvelopeSummary<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    grid: usize,
    analytic: bool,
    r_trap: f64,
    trap_exists: bool,
    trap_method: &'static str,
    f_max_at_1: f64,
    f_min_at_1: f64,
    limit_r0: Limits,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_check: Option<OracleCheck>,
}

fn method_name(m: TrapMethod) -> &'static str {
    match m {
        TrapMethod::Analytic => "analytic",
        TrapMethod::Bisection => "bisection",
    }
}

pub fn envelope(ctx: &Context, grid: usize, oracle: Option<usize>) -> Result<()> {
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let p = &ctx.model.system;
    let env = envelope_curve(p, &uniform_grid(grid))?;

    let mut table = Table::new(&ENVELOPE_HEADER);
    for i in 0..env.len() {
        let (x, n) = (env.argmax_dirs[i], env.argmin_dirs[i]);
        table.push(&[env.r_grid[i], env.f_max[i], env.f_min[i], x[0], x[1], x[2], n[0], n[1], n[2]]);
    }

    let oracle_check = oracle.filter(|&k| k > 0).map(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut rows = rand::seq::index::sample(&mut rng, env.len(), k.min(env.len())).into_vec();
        rows.sort_unstable();
        let lattice = FibonacciLattice::new(ORACLE_POINTS);
        let max_deviation = rows
            .iter()
            .map(|&i| {
                let b = lattice.extremes(env.r_grid[i], p);
                (env.f_max[i] - b.f_max).abs().max((env.f_min[i] - b.f_min).abs())
            })
            .fold(0.0, f64::max);
        OracleCheck { rows: rows.len(), points: ORACLE_POINTS, seed: ctx.seed, max_deviation }
    });

    let trap = trap_radius(p);
    let near = envelope_at(NEAR_ZERO, p)?;
    let last = env.len() - 1;
    let summary = EnvelopeSummary {
        label: ctx.model.label.as_deref(),
        grid,
        analytic: env.analytic,
        r_trap: trap.r_trap,
        trap_exists: trap.trap_exists,
        trap_method: method_name(trap.method),
        f_max_at_1: env.f_max[last] + 0.0,
        f_min_at_1: env.f_min[last] + 0.0,
        limit_r0: Limits { r: NEAR_ZERO, f_max: near.f_max, f_min: near.f_min, b_norm: p.b_norm() },
        oracle_check,
    };
    ctx.table_result(table, &summary)
}

#[derive(Debug, Serialize)]
struct ClassifySummary<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    purifiable: bool,
    category: &'static str,
    reason: String,
    shared_eigenvector: Option<[Complex; 2]>,
    r_trap: f64,
    numeric_agrees: bool,
}

fn category_name(c: PurifiabilityCategory) -> &'static str {
    match c {
        PurifiabilityCategory::SingleSingular => "single-singular",
        PurifiabilityCategory::SingleNonsingularNonorthogonal => "single-nonsingular-nonorthogonal",
        PurifiabilityCategory::MixedSharedEigenvector => "mixed-shared-eigenvector",
        PurifiabilityCategory::NonsingularSharedEigenvector => "nonsingular-shared-eigenvector",
        PurifiabilityCategory::NotPurifiable => "not-purifiable",
    }
}

fn complex_pair(v: &Vec2c) -> [Complex; 2] {
    [[v[0].re + 0.0, v[0].im + 0.0], [v[1].re + 0.0, v[1].im + 0.0]]
}

pub fn classify(ctx: &Context) -> Result<()> {
    let ops = ctx.model.ops.as_deref().ok_or_else(|| {
        CliError::InvalidModel(
            "classify needs `lindblad_ops`: a GKS matrix or projected system does not fix the operators"
                .into(),
        )
    })?;
    let v = classify_purifiable(ops)?;
    ctx.json_result(&ClassifySummary {
        label: ctx.model.label.as_deref(),
        purifiable: v.purifiable,
        category: category_name(v.category),
        reason: v.reason,
        shared_eigenvector: v.shared_eigenvector.as_ref().map(complex_pair),
        r_trap: v.r_trap,
        numeric_agrees: v.numeric_agrees,
    })
}

#[derive(Debug, Serialize)]
struct SteerSummary {
    feasible: bool,
    from: f64,
    to: f64,
    r_trap: f64,
    policy: &'static str,
    duration: Option<f64>,
    max_control_norm: Option<f64>,
    final_radius: Option<f64>,
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut table = Table::new(&TRAJECTORY_HEADER);
    let controls = traj.controls.as_deref().unwrap_or(&[]);
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let u = controls.get(i).copied().unwrap_or([0.0; 3]);
        let n = s.n;
        table.push(&[*t, n[0], n[1], n[2], norm(&n), u[0], u[1], u[2]]);
    }
    table
}

pub fn steer(ctx: &Context, from: f64, to: f64, dt: f64, t_max: f64) -> Result<()> {
    let p = &ctx.model.system;
    let trap = trap_radius(p);
    let upward = to > from;
    let policy_name = if from == to { "hold" } else if upward { "argmax" } else { "argmin" };
    let mut summary = SteerSummary {
        feasible: false,
        from,
        to,
        r_trap: trap.r_trap,
        policy: policy_name,
        duration: None,
        max_control_norm: None,
        final_radius: None,
    };

    if !reachable(from, to, p)? {
        let mut text = to_json(&summary, ctx.indent);
        text.push('\n');
        emit(None, text.as_bytes())?;
        return Err(CliError::Infeasible(format!(
            "target above trap radius: r = {to} cannot be reached from {from} (r_T = {})",
            trap.r_trap
        )));
    }

    let policy = |_: f64, r: f64| {
        let e = envelope_at(r, p)?;
        Ok(if upward { e.argmax } else { e.argmin })
    };

    if from == to {
        let d = envelope_at(from, p)?.argmax;
        let n0 = BlochState::new(scale(&d, from))?;
        let traj = Trajectory { times: vec![0.0], states: vec![n0], controls: Some(vec![[0.0; 3]]) };
        summary.feasible = true;
        summary.duration = Some(0.0);
        summary.max_control_norm = Some(0.0);
        summary.final_radius = Some(from);
        return ctx.table_result(trajectory_table(&traj), &summary);
    }

    // Plan on a half-step grid so that every RK4 stage lands on a sample.
    let run = RadialRun::new(t_max, dt / 2.0).floor(DEFAULT_RADIUS_FLOOR).target(to).run(from, policy, p)?;
    match run.stop {
        RadialStop::ReachedTarget => {}
        RadialStop::ReachedFloor => {
            return Err(CliError::Numeric("radius reached the floor before the target".into()))
        }
        RadialStop::Completed => {
            return Err(CliError::Numeric(format!("target not reached within t_max = {t_max}")))
        }
    }
    let duration = *run.times.last().expect("radial runs hold their start");
    let path = PlannedPath {
        times: run.times,
        directions: run.directions,
        radii: run.radii,
        breakpoints: Vec::new(),
    }
    .split_at_jumps(MAX_TURN);
    let sched = controls_for_path(&path, p, DEFAULT_RADIUS_FLOOR)?;
    let n0 = BlochState::new(scale(&path.directions[0], path.radii[0]))?;
    let traj = integrate_bloch(&n0, |t| sched.control_at(t), p, duration, dt)?;

    let final_radius = traj.last().radius();
    if (final_radius - to).abs() > STEER_TOLERANCE {
        return Err(CliError::Numeric(format!(
            "closed-loop radius {final_radius} misses the target {to} by more than {STEER_TOLERANCE}"
        )));
    }
    summary.feasible = true;
    summary.duration = Some(duration);
    summary.max_control_norm = Some(sched.max_control_norm());
    summary.final_radius = Some(final_radius);
    ctx.table_result(trajectory_table(&traj), &summary)
}

#[derive(Debug, Deserialize)]
struct ControlRow {
    t: f64,
    u1: f64,
    u2: f64,
    u3: f64,
}

/// Piecewise-linear controls from a `t,u1,u2,u3` file.
fn read_controls(path: &Path) -> Result<ControlSchedule> {
    let parse = |message: String| CliError::Parse { path: path.to_path_buf(), message };
    let mut reader = csv::Reader::from_path(path).map_err(|e| parse(e.to_string()))?;
    let mut times = Vec::new();
    let mut controls = Vec::new();
    for row in reader.deserialize::<ControlRow>() {
        let row = row.map_err(|e| parse(e.to_string()))?;
        if times.last().is_some_and(|&t| !(row.t > t)) {
            return Err(parse(format!("times must increase (t = {})", row.t)));
        }
        times.push(row.t);
        controls.push([row.u1, row.u2, row.u3]);
    }
    if times.is_empty() {
        return Err(parse("no control rows".into()));
    }
    Ok(ControlSchedule {
        times,
        controls,
        planned_path: Vec::new(),
        planned_radius: Vec::new(),
        breakpoints: Vec::new(),
    })
}

pub fn simulate(ctx: &Context, n0: [f64; 3], controls: &str, t_final: f64, dt: f64) -> Result<()> {
    let p = &ctx.model.system;
    let start = BlochState::new(n0)?;
    let traj = if controls == "zero" {
        integrate_bloch(&start, |_| [0.0; 3], p, t_final, dt)?
    } else {
        let sched = read_controls(Path::new(controls))?;
        integrate_bloch(&start, |t| sched.control_at(t), p, t_final, dt)?
    };
    let end = BlochState::new(traj.last().n)
        .map_err(|e| CliError::Numeric(format!("final state: {e}")))?;
    if !ctx.quiet && ctx.out.is_some() {
        let n = end.n;
        eprintln!("final state ({}, {}, {}), r = {}", n[0], n[1], n[2], end.radius());
    }
    emit(ctx.out.as_deref(), &trajectory_table(&traj).into_bytes())
}
