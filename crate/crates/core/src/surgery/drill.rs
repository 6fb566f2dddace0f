//! Cylindrical drill through a skinned surface.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::cga::{Vec3, EPS0};
use crate::error::SurgeryError;
use crate::mesh::{Face, SkinnedMesh, Weights};

use super::predicates::EPS_ON;
use super::topology::{
    compact, ear_clip, edge_faces, edge_key, face_edges, face_neighbours, plane_basis,
    segment_triangle, Edge,
};
use super::weights::{edge_weight, Host, NewVertexRecord};

/// Drill cylinder: axis from tip `a` to `b`, radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrillSpec {
    pub a: Vec3,
    pub b: Vec3,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CylinderSide {
    Inside,
    OnSurface,
    Outside,
}

impl DrillSpec {
    pub fn new(a: Vec3, b: Vec3, r: f64) -> Result<Self, SurgeryError> {
        let s = Self { a, b, r };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SurgeryError> {
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(SurgeryError::InvalidInput(format!(
                "drill radius {}",
                self.r
            )));
        }
        if !((self.b - self.a).norm() > EPS0) {
            return Err(SurgeryError::InvalidInput(
                "drill endpoints coincide".into(),
            ));
        }
        Ok(())
    }

    /// Unit axis direction from `a` to `b`.
    pub fn axis(&self) -> Vec3 {
        (self.b - self.a).normalize()
    }

    /// Projection onto the plane through `b` normal to the axis.
    pub fn project(&self, v: &Vec3) -> Vec3 {
        let n = self.axis();
        v - n * n.dot(&(v - self.b))
    }

    /// Distance of `v`'s projection from `b`.
    pub fn projected_distance(&self, v: &Vec3) -> f64 {
        (self.project(v) - self.b).norm()
    }
}

pub fn point_in_cylinder(v: &Vec3, spec: &DrillSpec) -> CylinderSide {
    let d = spec.projected_distance(v);
    if d < spec.r - EPS_ON {
        CylinderSide::Inside
    } else if d > spec.r + EPS_ON {
        CylinderSide::Outside
    } else {
        CylinderSide::OnSurface
    }
}

/// Roots in `[0, 1]` of `K α² + L α + N = 0`, where the point
/// `α v_i + (1-α) v_j` projects onto the cylinder circle, with a flag for a
/// double (tangent) root.
fn edge_roots(vi: &Vec3, vj: &Vec3, spec: &DrillSpec) -> Result<(Vec<f64>, bool), SurgeryError> {
    let mu = spec.project(vi) - spec.b;
    let nu = spec.project(vj) - spec.b;
    let diff = mu - nu;
    let k = diff.norm_squared();
    if diff.norm() < EPS0 {
        return Err(SurgeryError::DegenerateProjection);
    }
    let l = 2.0 * nu.dot(&diff);
    let n = nu.norm_squared() - spec.r * spec.r;
    let disc = l * l - 4.0 * k * n;
    let tol = 1e-12 * (l * l).max((4.0 * k * n).abs()).max(f64::MIN_POSITIVE);
    let in_range = |a: f64| (-1e-12..=1.0 + 1e-12).contains(&a);
    if disc.abs() <= tol {
        let a = -l / (2.0 * k);
        return Ok((
            if in_range(a) {
                vec![a.clamp(0.0, 1.0)]
            } else {
                vec![]
            },
            true,
        ));
    }
    if disc < 0.0 {
        return Ok((vec![], false));
    }
    let sq = disc.sqrt();
    // Numerically stable pair of roots.
    let q = -0.5 * (l + l.signum() * sq);
    let (r1, r2) = if q == 0.0 {
        (sq / (2.0 * k), -sq / (2.0 * k))
    } else {
        (q / k, n / q)
    };
    let mut roots: Vec<f64> = [r1, r2]
        .into_iter()
        .filter(|&a| in_range(a))
        .map(|a| a.clamp(0.0, 1.0))
        .collect();
    roots.sort_by(f64::total_cmp);
    Ok((roots, false))
}

/// Parameters `α ∈ [0, 1]` where `α v_i + (1-α) v_j` meets the cylinder.
pub fn edge_cylinder_alpha(
    vi: &Vec3,
    vj: &Vec3,
    spec: &DrillSpec,
) -> Result<Vec<f64>, SurgeryError> {
    Ok(edge_roots(vi, vj, spec)?.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrillResult {
    pub mesh: SkinnedMesh,
    /// Rim vertices created on edges, as output indices.
    pub rim: Vec<usize>,
    pub intersection_points: usize,
    /// Affected faces of the pass that produced the output.
    pub affected_faces: usize,
    /// Affected faces when a refinement round ran, before it.
    pub split_affected: Option<usize>,
    /// Sub-triangles created from those faces.
    pub split_children: usize,
    /// Largest `|projected distance - r|` over rim vertices.
    pub rim_residual: f64,
    /// Every vertex added and kept, with output indices.
    pub new_vertices: Vec<NewVertexRecord>,
}

struct Working {
    vertices: Vec<Vec3>,
    faces: Vec<Face>,
    weights: Vec<Weights>,
    records: Vec<NewVertexRecord>,
}

impl Working {
    fn add(&mut self, position: Vec3, host: Host, weights: Weights) -> usize {
        let index = self.vertices.len();
        self.vertices.push(position);
        self.weights.push(weights.clone());
        self.records.push(NewVertexRecord {
            index,
            position,
            host,
            weights,
        });
        index
    }
}

fn affected_faces(w: &Working, spec: &DrillSpec) -> Result<Vec<usize>, SurgeryError> {
    let v = &w.vertices;
    let mut seeds: Vec<usize> = w
        .faces
        .iter()
        .enumerate()
        .filter(|(_, f)| segment_triangle(&spec.a, &spec.b, &v[f[0]], &v[f[1]], &v[f[2]]).is_some())
        .map(|(i, _)| i)
        .collect();
    if seeds.is_empty() {
        return Err(SurgeryError::NoDrillContact);
    }
    seeds.sort_unstable();
    let adj = edge_faces(&w.faces);
    let mut seen = vec![false; w.faces.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut out = BTreeSet::new();
    for s in seeds {
        seen[s] = true;
        queue.push_back(s);
        out.insert(s);
    }
    while let Some(f) = queue.pop_front() {
        for g in face_neighbours(&w.faces, &adj, f) {
            if seen[g] {
                continue;
            }
            seen[g] = true;
            if face_touches(&w.faces[g], v, spec)? {
                out.insert(g);
                queue.push_back(g);
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn face_touches(f: &Face, v: &[Vec3], spec: &DrillSpec) -> Result<bool, SurgeryError> {
    if f.iter()
        .any(|&i| point_in_cylinder(&v[i], spec) == CylinderSide::Inside)
    {
        return Ok(true);
    }
    for (a, b) in face_edges(f) {
        if !crossing_roots(&v[a], &v[b], spec)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Transversal roots strictly inside the edge.
fn crossing_roots(vi: &Vec3, vj: &Vec3, spec: &DrillSpec) -> Result<Vec<f64>, SurgeryError> {
    match edge_roots(vi, vj, spec) {
        Ok((roots, false)) => {
            let len = (vi - vj).norm();
            let tol = EPS_ON / len.max(EPS_ON);
            Ok(roots
                .into_iter()
                .filter(|a| *a > tol && *a < 1.0 - tol)
                .collect())
        }
        Ok((_, true)) => Ok(vec![]),
        Err(SurgeryError::DegenerateProjection) => Ok(vec![]),
        Err(e) => Err(e),
    }
}

fn check_boundary(w: &Working, affected: &[usize], spec: &DrillSpec) -> Result<(), SurgeryError> {
    let adj = edge_faces(&w.faces);
    for &fi in affected {
        for (a, b) in face_edges(&w.faces[fi]) {
            let key = edge_key(a, b);
            if adj[&key].len() != 1 {
                continue;
            }
            let inside = [a, b]
                .iter()
                .any(|&i| point_in_cylinder(&w.vertices[i], spec) == CylinderSide::Inside);
            if inside || !crossing_roots(&w.vertices[a], &w.vertices[b], spec)?.is_empty() {
                return Err(SurgeryError::OpenBoundaryHit(key.0, key.1));
            }
        }
    }
    Ok(())
}

/// Splits `affected` faces 1→4 at edge midpoints and splits neighbours so the
/// result stays conforming. Returns the refined face list in place.
fn refine(w: &mut Working, affected: &[usize]) {
    let mut red: BTreeSet<usize> = affected.iter().copied().collect();
    let mut marked: BTreeSet<Edge> = BTreeSet::new();
    for &f in &red {
        for (a, b) in face_edges(&w.faces[f]) {
            marked.insert(edge_key(a, b));
        }
    }
    loop {
        let promote: Vec<usize> = (0..w.faces.len())
            .filter(|f| !red.contains(f))
            .filter(|&f| {
                face_edges(&w.faces[f])
                    .iter()
                    .filter(|(a, b)| marked.contains(&edge_key(*a, *b)))
                    .count()
                    >= 2
            })
            .collect();
        if promote.is_empty() {
            break;
        }
        for f in promote {
            red.insert(f);
            for (a, b) in face_edges(&w.faces[f]) {
                marked.insert(edge_key(a, b));
            }
        }
    }
    let mut mid: HashMap<Edge, usize> = HashMap::new();
    let faces = std::mem::take(&mut w.faces);
    for f in &faces {
        for (a, b) in face_edges(f) {
            let key = edge_key(a, b);
            if marked.contains(&key) && !mid.contains_key(&key) {
                let p = (w.vertices[key.0] + w.vertices[key.1]) * 0.5;
                let weights = edge_weight(&w.weights[key.0], &w.weights[key.1], 0.5);
                let i = w.add(
                    p,
                    Host::Edge {
                        i: key.0,
                        j: key.1,
                        alpha: 0.5,
                    },
                    weights,
                );
                mid.insert(key, i);
            }
        }
    }
    let mut out = Vec::with_capacity(faces.len() + 3 * red.len());
    for (fi, f) in faces.iter().enumerate() {
        let m = |a: usize, b: usize| mid.get(&edge_key(a, b)).copied();
        let [a, b, c] = *f;
        if red.contains(&fi) {
            let (ab, bc, ca) = (m(a, b).unwrap(), m(b, c).unwrap(), m(c, a).unwrap());
            out.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            continue;
        }
        let green = (0..3).find_map(|r| {
            let (x, y, z) = (f[r], f[(r + 1) % 3], f[(r + 2) % 3]);
            m(x, y).map(|q| [[x, q, z], [q, y, z]])
        });
        match green {
            Some(pair) => out.extend(pair),
            None => out.push(*f),
        }
    }
    w.faces = out;
}

/// Rim points on each edge touched by an affected face, keyed by edge, as
/// `(alpha from the lower-index end, vertex index)` sorted along the edge.
fn rim_points(
    w: &mut Working,
    affected: &[usize],
    spec: &DrillSpec,
) -> Result<BTreeMap<Edge, Vec<(f64, usize)>>, SurgeryError> {
    let mut keys: BTreeSet<Edge> = BTreeSet::new();
    for &f in affected {
        for (a, b) in face_edges(&w.faces[f]) {
            keys.insert(edge_key(a, b));
        }
    }
    let mut out = BTreeMap::new();
    for key in keys {
        let (vi, vj) = (w.vertices[key.0], w.vertices[key.1]);
        let roots = crossing_roots(&vi, &vj, spec)?;
        let mut pts = Vec::with_capacity(roots.len());
        for alpha in roots {
            // Distance from v_i along the edge is 1 - alpha.
            let s = 1.0 - alpha;
            let p = vi * alpha + vj * (1.0 - alpha);
            let weights = edge_weight(&w.weights[key.0], &w.weights[key.1], s);
            let idx = w.add(
                p,
                Host::Edge {
                    i: key.0,
                    j: key.1,
                    alpha: s,
                },
                weights,
            );
            pts.push((s, idx));
        }
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        if !pts.is_empty() {
            out.insert(key, pts);
        }
    }
    Ok(out)
}

fn retriangulate_face(
    w: &Working,
    f: &Face,
    rims: &BTreeMap<Edge, Vec<(f64, usize)>>,
    spec: &DrillSpec,
) -> Vec<Face> {
    let mut cycle: Vec<usize> = Vec::with_capacity(7);
    for (a, b) in face_edges(f) {
        cycle.push(a);
        if let Some(pts) = rims.get(&edge_key(a, b)) {
            if a < b {
                cycle.extend(pts.iter().map(|p| p.1));
            } else {
                cycle.extend(pts.iter().rev().map(|p| p.1));
            }
        }
    }
    let m = cycle.len();
    let outside: Vec<bool> = (0..m)
        .map(|k| {
            let mid = (w.vertices[cycle[k]] + w.vertices[cycle[(k + 1) % m]]) * 0.5;
            spec.projected_distance(&mid) > spec.r
        })
        .collect();
    if outside.iter().all(|&o| o) {
        return vec![*f];
    }
    if outside.iter().all(|&o| !o) {
        return vec![];
    }
    // Start right after an inside sub-segment so chains do not wrap.
    let start = (0..m)
        .find(|&k| !outside[k])
        .map(|k| (k + 1) % m)
        .unwrap_or(0);
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for step in 0..m {
        let k = (start + step) % m;
        if outside[k] {
            if cur.is_empty() {
                cur.push(cycle[k]);
            }
            cur.push(cycle[(k + 1) % m]);
        } else if !cur.is_empty() {
            chains.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        chains.push(cur);
    }

    let fv = [f[0], f[1], f[2]].map(|i| w.vertices[i]);
    let face_n = (fv[1] - fv[0]).cross(&(fv[2] - fv[0]));
    let axis = spec.axis();
    let normal = if face_n.norm() > 0.0 && face_n.normalize().dot(&axis).abs() >= 0.1 {
        axis
    } else {
        face_n.try_normalize(0.0).unwrap_or(axis)
    };
    let (u, v) = plane_basis(&normal);
    let mut out = Vec::new();
    for chain in chains {
        if chain.len() < 3 {
            continue;
        }
        let pts: Vec<[f64; 2]> = chain
            .iter()
            .map(|&i| {
                let p = w.vertices[i];
                [u.dot(&p), v.dot(&p)]
            })
            .collect();
        for t in ear_clip(&pts) {
            out.push([chain[t[0]], chain[t[1]], chain[t[2]]]);
        }
    }
    out
}

/// Drills a hole: faces reached by a BFS from the faces the axis pierces are
/// cut against the cylinder, the parts inside are removed and the rest is
/// re-triangulated. With fewer than `min_points` rim points the affected faces
/// are split once at edge midpoints and the drill runs again.
pub fn drill(
    mesh: &SkinnedMesh,
    spec: &DrillSpec,
    min_points: usize,
) -> Result<DrillResult, SurgeryError> {
    spec.validate()?;
    let base = Working {
        vertices: mesh.vertices().to_vec(),
        faces: mesh.faces().to_vec(),
        weights: mesh.influences().to_vec(),
        records: Vec::new(),
    };
    let mut split_affected = None;
    let mut split_children = 0;
    let mut w = base;
    let mut attempt = 0;
    let (affected, rims) = loop {
        let affected = affected_faces(&w, spec)?;
        check_boundary(&w, &affected, spec)?;
        let mut trial = Working {
            vertices: w.vertices.clone(),
            faces: w.faces.clone(),
            weights: w.weights.clone(),
            records: w.records.clone(),
        };
        let rims = rim_points(&mut trial, &affected, spec)?;
        let count: usize = rims.values().map(|p| p.len()).sum();
        if count >= min_points || attempt == 1 {
            if count == 0 {
                return Err(SurgeryError::DrillBelowResolution);
            }
            w = trial;
            break (affected, rims);
        }
        log::info!(
            "drill found {count} rim points (< {min_points}); splitting {} faces",
            affected.len()
        );
        split_affected = Some(affected.len());
        split_children = 4 * affected.len();
        refine(&mut w, &affected);
        attempt += 1;
    };

    let affected_set: BTreeSet<usize> = affected.iter().copied().collect();
    let mut faces = Vec::with_capacity(w.faces.len() + 2 * affected.len());
    for (fi, f) in w.faces.iter().enumerate() {
        if affected_set.contains(&fi) {
            faces.extend(retriangulate_face(&w, f, &rims, spec));
        } else {
            faces.push(*f);
        }
    }
    let (out, map) = compact(&w.vertices, &faces, &w.weights);
    let rim_ids: Vec<usize> = rims.values().flatten().map(|p| p.1).collect();
    let rim: Vec<usize> = rim_ids.iter().filter_map(|&i| map[i]).collect();
    let rim_residual = rim_ids
        .iter()
        .map(|&i| (spec.projected_distance(&w.vertices[i]) - spec.r).abs())
        .fold(0.0, f64::max);
    log::debug!("drill rim residual {rim_residual:e}");
    let new_vertices = w
        .records
        .iter()
        .filter_map(|r| map[r.index].map(|index| NewVertexRecord { index, ..r.clone() }))
        .collect();
    Ok(DrillResult {
        mesh: out,
        intersection_points: rim_ids.len(),
        rim,
        affected_faces: affected.len(),
        split_affected,
        split_children,
        rim_residual,
        new_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_spec(r: f64) -> DrillSpec {
        DrillSpec::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0), r).unwrap()
    }

    #[test]
    fn cylinder_membership() {
        let s = z_spec(1.0);
        assert_eq!(point_in_cylinder(&s.b, &s), CylinderSide::Inside);
        assert_eq!(
            point_in_cylinder(&Vec3::new(1.0, 0.0, 5.0), &s),
            CylinderSide::OnSurface
        );
        assert_eq!(
            point_in_cylinder(&Vec3::new(2.0, 0.0, 0.0), &s),
            CylinderSide::Outside
        );
    }

    #[test]
    fn analytic_roots() {
        let s = z_spec(1.0);
        let a = edge_cylinder_alpha(&Vec3::new(2.0, 0.0, 0.0), &Vec3::zeros(), &s).unwrap();
        assert_eq!(a, vec![0.5]);
        let t =
            edge_cylinder_alpha(&Vec3::new(2.0, 1.0, 0.0), &Vec3::new(-2.0, 1.0, 0.0), &s).unwrap();
        assert_eq!(t, vec![0.5]);
        let none =
            edge_cylinder_alpha(&Vec3::new(2.0, 2.0, 0.0), &Vec3::new(3.0, 2.0, 0.0), &s).unwrap();
        assert!(none.is_empty());
        assert_eq!(
            edge_cylinder_alpha(&Vec3::zeros(), &Vec3::new(0.0, 0.0, 3.0), &s),
            Err(SurgeryError::DegenerateProjection)
        );
    }

    #[test]
    fn misses_are_reported() {
        let v = vec![
            Vec3::new(5.0, 5.0, 0.0),
            Vec3::new(6.0, 5.0, 0.0),
            Vec3::new(5.0, 6.0, 0.0),
        ];
        let m = SkinnedMesh::rigid(v, vec![[0, 1, 2]], 0).unwrap();
        assert_eq!(
            drill(&m, &z_spec(0.1), 6),
            Err(SurgeryError::NoDrillContact)
        );
    }
}
