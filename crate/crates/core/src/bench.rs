//! Timing harness for the four cut subroutines under both predicate backends.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::SurgeryError;
use crate::mesh::SkinnedMesh;
use crate::surgery::{
    cut::{assign_weights, classify_all, intersect_and_triangulate, split},
    drill, Backend, CutPlane, CutResult, DrillSpec,
};

/// Largest position or weight difference tolerated between backends.
pub const BACKEND_TOL: f64 = 1e-9;

pub const SUBROUTINES: [&str; 4] = [
    "vertex classification",
    "intersection + triangulation",
    "weight evaluation",
    "mesh split",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubroutineRow {
    pub subroutine: &'static str,
    pub euclid_ms: f64,
    pub ga_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub euclid_ms: f64,
    pub ga_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Machine {
    pub os: &'static str,
    pub arch: &'static str,
    pub threads: usize,
    pub debug_build: bool,
    pub version: &'static str,
}

impl Machine {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            debug_build: cfg!(debug_assertions),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub vertices: usize,
    pub faces: usize,
    /// `[nx, ny, nz, d]`.
    pub plane: [f64; 4],
    pub repetitions: usize,
}

/// Informational drill timing; never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrillTiming {
    pub intersection_points: usize,
    pub median_ms: f64,
    pub ms_per_point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub machine: Machine,
    /// One row per subroutine, in pipeline order.
    pub subroutines: Vec<SubroutineRow>,
    /// Sum of the per-subroutine medians.
    pub totals: Totals,
    pub intersection_points: usize,
    /// Always true: a report is only produced after the check passes.
    pub backends_agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drill: Option<DrillTiming>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// One timed pass of the cut pipeline.
fn timed_cut(
    mesh: &SkinnedMesh,
    plane: &CutPlane,
    backend: Backend,
) -> Result<[Duration; 4], SurgeryError> {
    let t0 = Instant::now();
    let sides = classify_all(mesh, plane, backend);
    let t1 = Instant::now();
    let retri = intersect_and_triangulate(mesh, plane, &sides, backend)?;
    let t2 = Instant::now();
    let weights = assign_weights(mesh, &retri);
    let t3 = Instant::now();
    let halves = split(mesh, &retri, &weights);
    let t4 = Instant::now();
    std::hint::black_box(halves);
    Ok([t1 - t0, t2 - t1, t3 - t2, t4 - t3])
}

fn meshes_match(a: &SkinnedMesh, b: &SkinnedMesh, what: &str) -> Result<(), SurgeryError> {
    let mismatch = |m: String| Err(SurgeryError::BackendMismatch(format!("{what}: {m}")));
    if a.faces() != b.faces() {
        return mismatch("face lists differ".into());
    }
    if a.vertices().len() != b.vertices().len() {
        return mismatch(format!(
            "{} vs {} vertices",
            a.vertices().len(),
            b.vertices().len()
        ));
    }
    for (i, (p, q)) in a.vertices().iter().zip(b.vertices()).enumerate() {
        let d = (p - q).amax();
        if d > BACKEND_TOL {
            return mismatch(format!("vertex {i} differs by {d:e}"));
        }
    }
    for (i, (p, q)) in a.influences().iter().zip(b.influences()).enumerate() {
        let bones_p: Vec<usize> = p.iter().map(|x| x.bone).collect();
        let bones_q: Vec<usize> = q.iter().map(|x| x.bone).collect();
        let close = bones_p == bones_q
            && p.iter()
                .zip(q.iter())
                .all(|(x, y)| (x.weight - y.weight).abs() <= BACKEND_TOL);
        if !close {
            return mismatch(format!("weights of vertex {i} differ"));
        }
    }
    Ok(())
}

/// Checks that two cut results describe the same meshes.
pub fn compare_cuts(a: &CutResult, b: &CutResult) -> Result<(), SurgeryError> {
    meshes_match(&a.above, &b.above, "above")?;
    meshes_match(&a.below, &b.below, "below")?;
    if a.new_vertices.len() != b.new_vertices.len() {
        return Err(SurgeryError::BackendMismatch(format!(
            "{} vs {} intersection points",
            a.new_vertices.len(),
            b.new_vertices.len()
        )));
    }
    Ok(())
}

/// Cuts with both backends and fails unless the results agree.
pub fn cut_both(mesh: &SkinnedMesh, plane: &CutPlane) -> Result<CutResult, SurgeryError> {
    let e = crate::surgery::cut(mesh, plane, Backend::Euclidean)?;
    let g = crate::surgery::cut(mesh, plane, Backend::Ga)?;
    compare_cuts(&e, &g)?;
    Ok(g)
}

/// Median time of each cut subroutine per backend over `repetitions` runs,
/// after one untimed warm-up run per backend.
pub fn bench_cut(
    mesh: &SkinnedMesh,
    plane: &CutPlane,
    repetitions: usize,
) -> Result<BenchReport, SurgeryError> {
    if repetitions < 3 {
        return Err(SurgeryError::InvalidInput(format!(
            "need at least 3 repetitions, got {repetitions}"
        )));
    }
    let reference = cut_both(mesh, plane)?;

    let mut medians = [[0.0; 4]; 2];
    for (col, backend) in [Backend::Euclidean, Backend::Ga].into_iter().enumerate() {
        timed_cut(mesh, plane, backend)?;
        let mut samples: [Vec<f64>; 4] = Default::default();
        for _ in 0..repetitions {
            let t = timed_cut(mesh, plane, backend)?;
            for (s, d) in samples.iter_mut().zip(t) {
                s.push(ms(d));
            }
        }
        for (m, s) in medians[col].iter_mut().zip(samples) {
            *m = median(s);
        }
    }

    let subroutines = SUBROUTINES
        .iter()
        .enumerate()
        .map(|(i, &subroutine)| SubroutineRow {
            subroutine,
            euclid_ms: medians[0][i],
            ga_ms: medians[1][i],
        })
        .collect();
    let n = plane.normal();
    Ok(BenchReport {
        config: BenchConfig {
            vertices: mesh.vertices().len(),
            faces: mesh.faces().len(),
            plane: [n.x, n.y, n.z, plane.d()],
            repetitions,
        },
        machine: Machine::current(),
        subroutines,
        totals: Totals {
            euclid_ms: medians[0].iter().sum(),
            ga_ms: medians[1].iter().sum(),
        },
        intersection_points: reference.new_vertices.len(),
        backends_agree: true,
        drill: None,
    })
}

/// Median wall time of a full drill and the time per rim point.
pub fn bench_drill(
    mesh: &SkinnedMesh,
    spec: &DrillSpec,
    min_points: usize,
    repetitions: usize,
) -> Result<DrillTiming, SurgeryError> {
    let points = drill(mesh, spec, min_points)?.intersection_points;
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions.max(1) {
        let t = Instant::now();
        std::hint::black_box(drill(mesh, spec, min_points)?);
        samples.push(ms(t.elapsed()));
    }
    let median_ms = median(samples);
    Ok(DrillTiming {
        intersection_points: points,
        median_ms,
        ms_per_point: median_ms / points as f64,
    })
}
