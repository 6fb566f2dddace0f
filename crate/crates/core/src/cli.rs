//! Command-line driver. Output files land in `--out` under fixed names.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bench::{bench_cut, bench_drill, cut_both};
use crate::cga::{blade_name, BlendMode, Multivector, Vec3, Versor, BLADES};
use crate::error::Error;
use crate::io::{export_obj, load_rig, load_trajectory, RigAsset};
use crate::mesh::{SkinnedMesh, Weights};
use crate::rig::{
    deform_matrix_oracle, deform_multivector, global_pose, local_pose, oracle_pose_matrices,
    AnimationClip,
};
use crate::surgery::{cut, drill, tear, Backend, CutPlane, DrillSpec, NewVertexRecord};

#[derive(Debug, Parser)]
#[command(
    name = "cga-surgery",
    version,
    about = "Conformal skinning and mesh surgery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deform the mesh at time K and write deformed.obj.
    Deform(DeformArgs),
    /// Write the local and global bone motors at time K to pose.json.
    Interp(PoseArgs),
    /// Cut along a plane; writes above.obj, below.obj and cut.json.
    Cut(CutArgs),
    /// Tear along one scalpel step; writes torn.obj and tear.json.
    Tear(TearArgs),
    /// Drill a cylindrical hole; writes drilled.obj and drill.json.
    Drill(DrillArgs),
    /// Time the cut subroutines under both backends; writes bench.json.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Rig document (JSON).
    #[arg(long)]
    rig: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BlendArg {
    Linear,
    Log,
}

impl From<BlendArg> for BlendMode {
    fn from(b: BlendArg) -> Self {
        match b {
            BlendArg::Linear => BlendMode::Linear,
            BlendArg::Log => BlendMode::Log,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Euclid,
    Ga,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Euclid => Backend::Euclidean,
            BackendArg::Ga => Backend::Ga,
        }
    }
}

#[derive(Debug, Args)]
struct PoseArgs {
    #[command(flatten)]
    common: Common,
    /// Clip time.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    time: f64,
    /// Clip name; defaults to the first clip in the file.
    #[arg(long)]
    clip: Option<String>,
    #[arg(long, value_enum, default_value = "log")]
    blend: BlendArg,
}

#[derive(Debug, Args)]
struct DeformArgs {
    #[command(flatten)]
    pose: PoseArgs,
    /// Use the 4×4 matrix pipeline instead of motors.
    #[arg(long)]
    matrix: bool,
}

#[derive(Debug, Args)]
struct CutArgs {
    #[command(flatten)]
    common: Common,
    /// Plane `nx,ny,nz,d` with points x satisfying n·x = d.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    plane: [f64; 4],
    #[arg(long, value_enum, default_value = "ga")]
    backend: BackendArg,
}

#[derive(Debug, Args)]
struct TearArgs {
    #[command(flatten)]
    common: Common,
    /// Scalpel trajectory (JSON).
    #[arg(long)]
    scalpel: PathBuf,
    /// Tear between states I and I+1.
    #[arg(long, default_value_t = 0)]
    step: usize,
    /// Gap between the two sides of the tear.
    #[arg(long, default_value_t = 0.0)]
    opening: f64,
}

#[derive(Debug, Args)]
struct DrillArgs {
    #[command(flatten)]
    common: Common,
    /// Drill tip `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    tip: Vec3,
    /// Drill base `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    base: Vec3,
    /// Hole radius.
    #[arg(long, allow_negative_numbers = true)]
    radius: f64,
    /// Rim points below which the affected faces are subdivided once.
    #[arg(long, default_value_t = 8)]
    min_points: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Plane `nx,ny,nz,d` to cut.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    plane: [f64; 4],
    /// Timed repetitions per backend (at least 3).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Extra random planes checked for backend agreement, drawn from `--seed`.
    #[arg(long, default_value_t = 0)]
    cases: usize,
    /// Also time a drill (`--tip`, `--base`, `--radius` together).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, requires_all = ["base", "radius"])]
    tip: Option<Vec3>,
    /// Drill base for the timed drill.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    base: Option<Vec3>,
    /// Drill radius for the timed drill.
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !o.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    parse_floats::<3>(s).map(Vec3::from)
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    parse_floats::<4>(s)
}

/// Failure of one invocation.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for '{flag}': {msg}"))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            1
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Deform(a) => run_deform(a),
        Command::Interp(a) => run_interp(a),
        Command::Cut(a) => run_cut(a),
        Command::Tear(a) => run_tear(a),
        Command::Drill(a) => run_drill(a),
        Command::Bench(a) => run_bench(a),
    }
}

fn prepare(common: &Common) -> Result<RigAsset, Failure> {
    let asset = load_rig(&common.rig)?;
    std::fs::create_dir_all(&common.out).map_err(|source| crate::error::ModelIoError::Io {
        path: common.out.clone(),
        source,
    })?;
    Ok(asset)
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    crate::io::write_text(path, &text)?;
    Ok(())
}

fn select_clip(asset: &RigAsset, name: Option<&str>) -> Result<AnimationClip, Failure> {
    match name {
        Some(n) => asset
            .clip(n)
            .cloned()
            .ok_or_else(|| usage("--clip", format!("no clip named {n:?}"))),
        None => match asset.clips.first() {
            Some(c) => Ok(c.clone()),
            None => Ok(AnimationClip::bind_pose(&asset.rig)?),
        },
    }
}

fn check_time(k: f64) -> Result<(), Failure> {
    if k.is_finite() {
        Ok(())
    } else {
        Err(usage("--time", "must be finite"))
    }
}

fn run_deform(a: DeformArgs) -> Result<(), Failure> {
    let p = &a.pose;
    check_time(p.time)?;
    let asset = prepare(&p.common)?;
    let clip = select_clip(&asset, p.clip.as_deref())?;
    let out = if a.matrix {
        let m = oracle_pose_matrices(&asset.rig, &clip, p.time)?;
        deform_matrix_oracle(&asset.mesh, &asset.rig, &m)?
    } else {
        let pose = global_pose(&asset.rig, &clip, p.time, p.blend.into())?;
        deform_multivector(&asset.mesh, &asset.rig, &pose)?
    };
    export_obj(&out, asset.mesh.faces(), p.common.out.join("deformed.obj"))?;
    println!("deformed {} vertices at time {}", out.len(), p.time);
    Ok(())
}

fn mv_json(m: &Multivector) -> Value {
    let terms: Vec<Value> = (0..BLADES)
        .filter(|&b| m.get(b) != 0.0)
        .map(|b| json!([blade_name(b), m.get(b)]))
        .collect();
    Value::Array(terms)
}

fn run_interp(a: PoseArgs) -> Result<(), Failure> {
    check_time(a.time)?;
    let asset = prepare(&a.common)?;
    let clip = select_clip(&asset, a.clip.as_deref())?;
    let mode: BlendMode = a.blend.into();
    let local = local_pose(&asset.rig, &clip, a.time, mode)?;
    let global = global_pose(&asset.rig, &clip, a.time, mode)?;
    let (i, j, alpha) = clip.bracket(a.time);
    let bones: Vec<Value> = asset
        .rig
        .bones()
        .iter()
        .zip(local.iter().zip(&global))
        .map(|(b, (l, g)): (_, (&Versor, &Versor))| {
            json!({
                "bone": b.id,
                "name": b.name,
                "local": mv_json(l.mv()),
                "global": mv_json(g.mv()),
            })
        })
        .collect();
    let report = json!({
        "clip": clip.name,
        "time": a.time,
        "blend": mode,
        "keyframes": [i, j],
        "alpha": alpha,
        "bones": bones,
    });
    write_json(&a.common.out.join("pose.json"), &report)?;
    println!("pose of {} bones at time {}", asset.rig.len(), a.time);
    Ok(())
}

fn weights_json(w: &Weights) -> Value {
    Value::Array(w.iter().map(|i| json!([i.bone, i.weight])).collect())
}

fn records_json(records: &[NewVertexRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "position": [r.position.x, r.position.y, r.position.z],
                    "host": r.host,
                    "weights": weights_json(&r.weights),
                })
            })
            .collect(),
    )
}

fn mesh_json(m: &SkinnedMesh) -> Value {
    json!({ "vertices": m.vertices().len(), "faces": m.faces().len(), "area": m.area() })
}

fn plane_from(flag: &str, p: [f64; 4]) -> Result<CutPlane, Failure> {
    CutPlane::new(Vec3::new(p[0], p[1], p[2]), p[3]).map_err(|e| usage(flag, e))
}

fn run_cut(a: CutArgs) -> Result<(), Failure> {
    let plane = plane_from("--plane", a.plane)?;
    let asset = prepare(&a.common)?;
    let backend: Backend = a.backend.into();
    let r = cut(&asset.mesh, &plane, backend)?;
    let out = &a.common.out;
    export_obj(r.above.vertices(), r.above.faces(), out.join("above.obj"))?;
    export_obj(r.below.vertices(), r.below.faces(), out.join("below.obj"))?;
    let n = plane.normal();
    let report = json!({
        "backend": backend,
        "plane": [n.x, n.y, n.z, plane.d()],
        "intersection_points": r.new_vertices.len(),
        "crossed_faces": r.crossed_faces,
        "loops": r.loops.len(),
        "above": mesh_json(&r.above),
        "below": mesh_json(&r.below),
        "new_vertices": records_json(&r.new_vertices),
    });
    write_json(&out.join("cut.json"), &report)?;
    println!("cut: {} new vertices", r.new_vertices.len());
    Ok(())
}

fn run_tear(a: TearArgs) -> Result<(), Failure> {
    if !(a.opening.is_finite() && a.opening >= 0.0) {
        return Err(usage("--opening", "must be a finite number >= 0"));
    }
    let traj = load_trajectory(&a.scalpel)?;
    let (s0, s1) = traj.step(a.step).ok_or_else(|| {
        usage(
            "--step",
            format!(
                "trajectory has {} states, so steps 0..{}",
                traj.states().len(),
                traj.states().len() - 1
            ),
        )
    })?;
    let asset = prepare(&a.common)?;
    let r = tear(&asset.mesh, s0, s1, a.opening)?;
    let out = &a.common.out;
    export_obj(r.mesh.vertices(), r.mesh.faces(), out.join("torn.obj"))?;
    let n = r.plane.normal();
    let report = json!({
        "step": a.step,
        "times": [s0.time, s1.time],
        "opening": a.opening,
        "plane": [n.x, n.y, n.z, r.plane.d()],
        "entry_faces": [r.entries[0].face, r.entries[1].face],
        "path": r.path.iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
        "duplicates": r.duplicates,
        "strip": r.strip,
        "mesh": mesh_json(&r.mesh),
        "new_vertices": records_json(&r.new_vertices),
    });
    write_json(&out.join("tear.json"), &report)?;
    println!(
        "tear: {} path points across {} faces",
        r.path.len(),
        r.strip.len()
    );
    Ok(())
}

fn drill_spec(tip: Vec3, base: Vec3, radius: f64) -> Result<DrillSpec, Failure> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(usage("--radius", "must be a finite number > 0"));
    }
    DrillSpec::new(tip, base, radius).map_err(|e| usage("--tip/--base", e))
}

fn run_drill(a: DrillArgs) -> Result<(), Failure> {
    let spec = drill_spec(a.tip, a.base, a.radius)?;
    let asset = prepare(&a.common)?;
    let r = drill(&asset.mesh, &spec, a.min_points)?;
    let out = &a.common.out;
    export_obj(r.mesh.vertices(), r.mesh.faces(), out.join("drilled.obj"))?;
    let report = json!({
        "tip": [spec.a.x, spec.a.y, spec.a.z],
        "base": [spec.b.x, spec.b.y, spec.b.z],
        "radius": spec.r,
        "intersection_points": r.intersection_points,
        "affected_faces": r.affected_faces,
        "split_affected": r.split_affected,
        "split_children": r.split_children,
        "rim": r.rim,
        "rim_residual": r.rim_residual,
        "mesh": mesh_json(&r.mesh),
        "new_vertices": records_json(&r.new_vertices),
    });
    write_json(&out.join("drill.json"), &report)?;
    println!("drill: {} rim points", r.intersection_points);
    Ok(())
}

/// Random planes through points of the mesh's bounding box.
fn random_planes(mesh: &SkinnedMesh, seed: u64, n: usize) -> Vec<CutPlane> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = mesh.vertices().iter().fold(
        (Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY)),
        |(lo, hi), v| (lo.inf(v), hi.sup(v)),
    );
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let normal = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let t = Vec3::new(rng.gen(), rng.gen(), rng.gen());
        let point = lo + (hi - lo).component_mul(&t);
        if let Ok(p) = CutPlane::through(&point, normal) {
            out.push(p);
        }
    }
    out
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    if a.reps < 3 {
        return Err(usage("--reps", "need at least 3 repetitions"));
    }
    let plane = plane_from("--plane", a.plane)?;
    let drill_spec = match (a.tip, a.base, a.radius) {
        (Some(t), Some(b), Some(r)) => Some(drill_spec(t, b, r)?),
        _ => None,
    };
    let asset = prepare(&a.common)?;
    let mut checked = 0;
    for p in random_planes(&asset.mesh, a.common.seed, a.cases) {
        match cut_both(&asset.mesh, &p) {
            Ok(_) | Err(crate::error::SurgeryError::NoIntersection) => checked += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let mut report = bench_cut(&asset.mesh, &plane, a.reps)?;
    if let Some(spec) = drill_spec {
        report.drill = Some(bench_drill(&asset.mesh, &spec, 8, a.reps)?);
    }
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["seed"] = json!(a.common.seed);
    value["random_planes_checked"] = json!(checked);
    write_json(&a.common.out.join("bench.json"), &value)?;
    println!("{:<30} {:>12} {:>12}", "subroutine", "euclid ms", "ga ms");
    for row in &report.subroutines {
        println!(
            "{:<30} {:>12.6} {:>12.6}",
            row.subroutine, row.euclid_ms, row.ga_ms
        );
    }
    println!(
        "{:<30} {:>12.6} {:>12.6}",
        "total", report.totals.euclid_ms, report.totals.ga_ms
    );
    println!("intersection points: {}", report.intersection_points);
    Ok(())
}
