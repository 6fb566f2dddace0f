//! Scalpel tear between two sampled scalpel positions.

use std::collections::HashMap;

use crate::cga::{dual, plane_normal_distance, up_project, Multivector, Vec3, E_INF};
use crate::error::SurgeryError;
use crate::mesh::{triangle_area, Face, SkinnedMesh, Weights};

use super::cut::fan_lowest;
use super::predicates::{segment_plane_intersection, Backend, CutPlane, Side};
use super::topology::{edge_faces, edge_key, face_edges, segment_triangle, Edge};
use super::weights::{barycentric_weight, edge_weight, Host, NewVertexRecord};

/// Scalpel segment at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalpelState {
    pub time: f64,
    pub p_top: Vec3,
    pub p_tip: Vec3,
}

/// Where a scalpel segment enters the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryPoint {
    pub face: usize,
    pub position: Vec3,
    pub bary: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TearResult {
    pub mesh: SkinnedMesh,
    /// Entry points at the two instants.
    pub entries: [EntryPoint; 2],
    pub plane: CutPlane,
    /// Intermediate points in order from the first entry to the second,
    /// before the opening displacement.
    pub path: Vec<Vec3>,
    /// Output indices of each path point's copies on the positive and negative
    /// side of the plane.
    pub duplicates: Vec<(usize, usize)>,
    /// Faces crossed by the tear, first entry face to last.
    pub strip: Vec<usize>,
    pub new_vertices: Vec<NewVertexRecord>,
}

/// Hit of the segment `top → tip` with the mesh nearest the tip.
pub fn scalpel_entry(mesh: &SkinnedMesh, s: &ScalpelState) -> Result<EntryPoint, SurgeryError> {
    let v = mesh.vertices();
    let mut best: Option<(f64, EntryPoint)> = None;
    for (fi, f) in mesh.faces().iter().enumerate() {
        if let Some((t, bary)) = segment_triangle(&s.p_top, &s.p_tip, &v[f[0]], &v[f[1]], &v[f[2]])
        {
            if best.as_ref().is_none_or(|(bt, _)| t > *bt) {
                let position = v[f[0]] * bary[0] + v[f[1]] * bary[1] + v[f[2]] * bary[2];
                best = Some((
                    t,
                    EntryPoint {
                        face: fi,
                        position,
                        bary,
                    },
                ));
            }
        }
    }
    best.map(|b| b.1)
        .ok_or(SurgeryError::NoScalpelContact { time: s.time })
}

/// Plane through three points, as the dual of `A ∧ B ∧ C ∧ e_inf`.
pub fn plane_through(a: &Vec3, b: &Vec3, c: &Vec3) -> Result<CutPlane, SurgeryError> {
    let flat = Multivector::wedge_all([&up_project(a), &up_project(b), &up_project(c), &E_INF]);
    let p = dual(&flat);
    let n = Vec3::new(p.get(0b001), p.get(0b010), p.get(0b100));
    let scale = (b - a).norm() * (c - a).norm();
    if !(n.norm() > 1e-12 * scale) {
        return Err(SurgeryError::DegeneratePlane);
    }
    let (n, d) = plane_normal_distance(&p.grade(1)).map_err(|_| SurgeryError::DegeneratePlane)?;
    CutPlane::new(n, d)
}

struct Walk {
    faces: Vec<usize>,
    edges: Vec<Edge>,
}

fn crossed_edges(f: &Face, sides: &[Side]) -> Result<Vec<Edge>, String> {
    if let Some(&v) = f.iter().find(|&&i| sides[i] == Side::On) {
        return Err(format!("tear plane passes through vertex {v}"));
    }
    Ok(face_edges(f)
        .iter()
        .filter(|(a, b)| sides[*a] != sides[*b])
        .map(|&(a, b)| edge_key(a, b))
        .collect())
}

fn walk(
    faces: &[Face],
    adj: &HashMap<Edge, Vec<usize>>,
    sides: &[Side],
    start: usize,
    first: Edge,
    goal: usize,
) -> Result<Walk, String> {
    let mut out = Walk {
        faces: vec![start],
        edges: vec![],
    };
    let mut visited = vec![false; faces.len()];
    visited[start] = true;
    let mut cur = start;
    let mut exit = first;
    loop {
        out.edges.push(exit);
        let next = adj[&exit]
            .iter()
            .copied()
            .find(|&g| g != cur)
            .ok_or_else(|| format!("reached open edge {exit:?}"))?;
        if visited[next] {
            return Err(format!("strip loops back to face {next}"));
        }
        visited[next] = true;
        out.faces.push(next);
        if next == goal {
            return Ok(out);
        }
        let crossed = crossed_edges(&faces[next], sides)?;
        exit = crossed
            .into_iter()
            .find(|&e| e != exit)
            .ok_or_else(|| format!("strip ends in face {next}"))?;
        cur = next;
    }
}

/// Tears the surface from the entry of `s0` to the entry of `s1` along the
/// plane through the first entry and the second scalpel segment. Path points
/// are duplicated and the copies pushed `±opening/2` along the plane normal.
pub fn tear(
    mesh: &SkinnedMesh,
    s0: &ScalpelState,
    s1: &ScalpelState,
    opening: f64,
) -> Result<TearResult, SurgeryError> {
    if !(opening >= 0.0) || !opening.is_finite() {
        return Err(SurgeryError::InvalidInput(format!("opening {opening}")));
    }
    for s in [s0, s1] {
        if (s.p_top - s.p_tip).norm() == 0.0 {
            return Err(SurgeryError::InvalidInput(format!(
                "scalpel segment at t={} has zero length",
                s.time
            )));
        }
    }
    let e0 = scalpel_entry(mesh, s0)?;
    let e1 = scalpel_entry(mesh, s1)?;
    let plane = plane_through(&e0.position, &s1.p_top, &s1.p_tip)?;
    let verts = mesh.vertices();
    let faces = mesh.faces();
    let w = mesh.influences();
    let sides: Vec<Side> = verts
        .iter()
        .map(|v| Side::from_distance(plane.signed_distance(v, Backend::Euclidean)))
        .collect();

    let strip = if e0.face == e1.face {
        Walk {
            faces: vec![e0.face],
            edges: vec![],
        }
    } else {
        let adj = edge_faces(faces);
        let starts =
            crossed_edges(&faces[e0.face], &sides).map_err(SurgeryError::TearPathNotFound)?;
        let mut found: Option<Walk> = None;
        let mut reason = String::from("entry face is not crossed by the tear plane");
        for first in starts {
            match walk(faces, &adj, &sides, e0.face, first, e1.face) {
                Ok(wk) => {
                    if found
                        .as_ref()
                        .is_none_or(|f| wk.faces.len() < f.faces.len())
                    {
                        found = Some(wk);
                    }
                }
                Err(r) => reason = r,
            }
        }
        found.ok_or(SurgeryError::TearPathNotFound(reason))?
    };

    let n = *plane.normal();
    let mut out_v = verts.to_vec();
    let mut out_w = w.to_vec();
    let mut records = Vec::new();
    let mut push = |pos: Vec3,
                    host: Host,
                    weights: Weights,
                    out_v: &mut Vec<Vec3>,
                    out_w: &mut Vec<Weights>| {
        let index = out_v.len();
        out_v.push(pos);
        out_w.push(weights.clone());
        records.push(NewVertexRecord {
            index,
            position: pos,
            host,
            weights,
        });
        index
    };

    let entry_weights = |e: &EntryPoint| {
        let f = faces[e.face];
        barycentric_weight(&w[f[0]], &w[f[1]], &w[f[2]], e.bary)
    };
    let s_idx = [e0, e1].map(|e| {
        push(
            e.position,
            Host::Face {
                face: e.face,
                bary: e.bary,
            },
            entry_weights(&e),
            &mut out_v,
            &mut out_w,
        )
    });

    let mut path = Vec::with_capacity(strip.edges.len());
    let mut duplicates = Vec::with_capacity(strip.edges.len());
    let mut copy_of: HashMap<Edge, (usize, usize)> = HashMap::new();
    for &e in &strip.edges {
        let (alpha, q) = segment_plane_intersection(&verts[e.0], &verts[e.1], &plane, Backend::Ga)?
            .ok_or_else(|| {
                SurgeryError::TearPathNotFound(format!("edge {e:?} does not cross the plane"))
            })?;
        let weights = edge_weight(&w[e.0], &w[e.1], alpha);
        let host = Host::Edge {
            i: e.0,
            j: e.1,
            alpha,
        };
        let shift = n * (0.5 * opening);
        let plus = push(q + shift, host, weights.clone(), &mut out_v, &mut out_w);
        let minus = push(q - shift, host, weights, &mut out_v, &mut out_w);
        path.push(q);
        duplicates.push((plus, minus));
        copy_of.insert(e, (plus, minus));
    }
    let copy = |e: Edge, v: usize| {
        let (p, m) = copy_of[&e];
        if sides[v] == Side::Above {
            p
        } else {
            m
        }
    };

    let mut replaced: HashMap<usize, Vec<Face>> = HashMap::new();
    if strip.edges.is_empty() {
        replaced.insert(e0.face, two_point_split(faces[e0.face], s_idx, &out_v)?);
    } else {
        let last = strip.faces.len() - 1;
        for (k, &fi) in strip.faces.iter().enumerate() {
            let f = faces[fi];
            let tris = if k == 0 || k == last {
                let (e, s) = if k == 0 {
                    (strip.edges[0], s_idx[0])
                } else {
                    (strip.edges[last - 1], s_idx[1])
                };
                let r = (0..3)
                    .find(|&r| edge_key(f[r], f[(r + 1) % 3]) == e)
                    .expect("strip edge belongs to its face");
                let (a, b, c) = (f[r], f[(r + 1) % 3], f[(r + 2) % 3]);
                vec![[a, copy(e, a), s], [copy(e, b), b, s], [b, c, s], [c, a, s]]
            } else {
                let (ein, eout) = (strip.edges[k - 1], strip.edges[k]);
                let mut up = Vec::with_capacity(4);
                let mut down = Vec::with_capacity(4);
                for r in 0..3 {
                    let (a, b) = (f[r], f[(r + 1) % 3]);
                    if sides[a] == Side::Above {
                        up.push(a);
                    } else {
                        down.push(a);
                    }
                    let e = edge_key(a, b);
                    if e == ein || e == eout {
                        up.push(copy_of[&e].0);
                        down.push(copy_of[&e].1);
                    }
                }
                let mut t = fan_lowest(&up);
                t.extend(fan_lowest(&down));
                t
            };
            let input_area = triangle_area(&verts[f[0]], &verts[f[1]], &verts[f[2]]);
            let keep = tris
                .into_iter()
                .filter(|t| {
                    triangle_area(&out_v[t[0]], &out_v[t[1]], &out_v[t[2]]) > 1e-12 * input_area
                })
                .collect();
            replaced.insert(fi, keep);
        }
    }

    let mut out_f = Vec::with_capacity(faces.len() + 3 * strip.faces.len());
    for (fi, f) in faces.iter().enumerate() {
        match replaced.get(&fi) {
            Some(tris) => out_f.extend_from_slice(tris),
            None => out_f.push(*f),
        }
    }
    let mesh = SkinnedMesh::from_parts_unchecked(out_v, out_f, out_w);
    Ok(TearResult {
        mesh,
        entries: [e0, e1],
        plane,
        path,
        duplicates,
        strip: strip.faces,
        new_vertices: records,
    })
}

/// Both entry points inside one face: split at the first, then split the
/// sub-triangle holding the second.
fn two_point_split(f: Face, s: [usize; 2], v: &[Vec3]) -> Result<Vec<Face>, SurgeryError> {
    let [a, b, c] = f;
    let mut tris = vec![[a, b, s[0]], [b, c, s[0]], [c, a, s[0]]];
    let p = v[s[1]];
    let (k, margin) = tris
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let bary = super::weights::barycentric(&p, &v[t[0]], &v[t[1]], &v[t[2]]);
            (k, bary.iter().cloned().fold(f64::INFINITY, f64::min))
        })
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("three sub-triangles");
    if margin <= 1e-12 {
        return Err(SurgeryError::TearPathNotFound(
            "entry points coincide or are aligned with a corner".into(),
        ));
    }
    let [x, y, z] = tris.remove(k);
    tris.insert(k, [x, y, s[1]]);
    tris.insert(k + 1, [y, z, s[1]]);
    tris.insert(k + 2, [z, x, s[1]]);
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> SkinnedMesh {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let w = vec![
            Weights::single(0),
            Weights::single(1),
            Weights::single(1),
            Weights::single(0),
        ];
        SkinnedMesh::new(v, vec![[0, 1, 2], [0, 2, 3]], w).unwrap()
    }

    fn state(time: f64, x: f64, y: f64) -> ScalpelState {
        ScalpelState {
            time,
            p_top: Vec3::new(x, y, 1.0),
            p_tip: Vec3::new(x, y, -0.5),
        }
    }

    #[test]
    fn tear_across_diagonal() {
        let r = tear(&quad(), &state(0.0, 0.7, 0.2), &state(1.0, 0.2, 0.7), 0.0).unwrap();
        assert_eq!(r.path.len(), 1);
        assert_eq!(r.mesh.vertices().len(), 4 + 2 + 2);
        assert_eq!(r.mesh.faces().len(), 8);
        assert!((r.mesh.area() - 1.0).abs() < 1e-12);
        let q = r.path[0];
        assert!((q - Vec3::new(0.45, 0.45, 0.0)).amax() < 1e-12);
        let (p, m) = r.duplicates[0];
        assert_eq!(r.mesh.vertices()[p], r.mesh.vertices()[m]);
        r.mesh.validate().unwrap();
    }

    #[test]
    fn opening_moves_copies_apart() {
        let r = tear(&quad(), &state(0.0, 0.7, 0.2), &state(1.0, 0.2, 0.7), 0.1).unwrap();
        let (p, m) = r.duplicates[0];
        let gap = r.mesh.vertices()[p] - r.mesh.vertices()[m];
        assert!((gap.norm() - 0.1).abs() < 1e-12);
        assert!(gap.cross(r.plane.normal()).norm() < 1e-12);
        assert!(
            r.plane
                .signed_distance(&r.mesh.vertices()[p], Backend::Euclidean)
                > 0.0
        );
    }

    #[test]
    fn missing_contact_and_degenerate_plane() {
        let miss = state(2.0, 3.0, 3.0);
        assert_eq!(
            tear(&quad(), &state(0.0, 0.7, 0.2), &miss, 0.0),
            Err(SurgeryError::NoScalpelContact { time: 2.0 })
        );
        // Second segment passes through the first entry point.
        assert_eq!(
            tear(&quad(), &state(0.0, 0.7, 0.2), &state(1.0, 0.7, 0.2), 0.0),
            Err(SurgeryError::DegeneratePlane)
        );
    }

    #[test]
    fn same_face_inserts_points() {
        let r = tear(&quad(), &state(0.0, 0.8, 0.1), &state(1.0, 0.9, 0.3), 0.0).unwrap();
        assert!(r.path.is_empty());
        assert_eq!(r.mesh.vertices().len(), 6);
        assert_eq!(r.mesh.faces().len(), 6);
        assert!((r.mesh.area() - 1.0).abs() < 1e-12);
    }
}
