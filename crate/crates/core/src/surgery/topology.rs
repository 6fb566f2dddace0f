//! Adjacency, compaction and polygon triangulation helpers.

use std::collections::HashMap;

use crate::cga::Vec3;
use crate::mesh::{Face, SkinnedMesh, Weights};

pub type Edge = (usize, usize);

pub fn edge_key(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The three edges of a face in cyclic order.
pub fn face_edges(f: &Face) -> [(usize, usize); 3] {
    [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]
}

/// Faces incident to each undirected edge, in face order.
pub fn edge_faces(faces: &[Face]) -> HashMap<Edge, Vec<usize>> {
    let mut map: HashMap<Edge, Vec<usize>> = HashMap::with_capacity(faces.len() * 2);
    for (fi, f) in faces.iter().enumerate() {
        for (a, b) in face_edges(f) {
            map.entry(edge_key(a, b)).or_default().push(fi);
        }
    }
    map
}

/// Faces sharing an edge with `face`, ascending.
pub fn face_neighbours(faces: &[Face], map: &HashMap<Edge, Vec<usize>>, face: usize) -> Vec<usize> {
    let mut out: Vec<usize> = face_edges(&faces[face])
        .iter()
        .flat_map(|&(a, b)| map[&edge_key(a, b)].iter().copied())
        .filter(|&g| g != face)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Drops vertices no face references, keeping the survivors in order.
/// Returns the mesh and the old-to-new index map.
pub fn compact(
    vertices: &[Vec3],
    faces: &[Face],
    influences: &[Weights],
) -> (SkinnedMesh, Vec<Option<usize>>) {
    let mut used = vec![false; vertices.len()];
    for f in faces {
        for &i in f {
            used[i] = true;
        }
    }
    let mut map = vec![None; vertices.len()];
    let mut v = Vec::new();
    let mut w = Vec::new();
    for (i, u) in used.iter().enumerate() {
        if *u {
            map[i] = Some(v.len());
            v.push(vertices[i]);
            w.push(influences[i].clone());
        }
    }
    let f = faces
        .iter()
        .map(|f| f.map(|i| map[i].expect("referenced vertex kept")))
        .collect();
    (SkinnedMesh::from_parts_unchecked(v, f, w), map)
}

/// Segment/triangle hit as `(t along p→q, barycentric (u, v, w))` with the
/// point `u a + v b + w c`. Uses the Möller–Trumbore test.
pub fn segment_triangle(
    p: &Vec3,
    q: &Vec3,
    a: &Vec3,
    b: &Vec3,
    c: &Vec3,
) -> Option<(f64, [f64; 3])> {
    const TOL: f64 = 1e-12;
    let dir = q - p;
    let e1 = b - a;
    let e2 = c - a;
    let h = dir.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < TOL * dir.norm() * e1.norm() * e2.norm() {
        return None;
    }
    let inv = 1.0 / det;
    let s = p - a;
    let v = inv * s.dot(&h);
    if !(-TOL..=1.0 + TOL).contains(&v) {
        return None;
    }
    let qv = s.cross(&e1);
    let w = inv * dir.dot(&qv);
    if w < -TOL || v + w > 1.0 + TOL {
        return None;
    }
    let t = inv * e2.dot(&qv);
    if !(-TOL..=1.0 + TOL).contains(&t) {
        return None;
    }
    Some((t, [1.0 - v - w, v, w]))
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn signed_area2(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum()
}

fn in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    cross2(a, b, p) >= 0.0 && cross2(b, c, p) >= 0.0 && cross2(c, a, p) >= 0.0
}

/// Ear-clips a simple polygon given in 2D, returning corner-index triples in
/// the polygon's own winding. Ears of zero area are skipped while others
/// exist; a fan from corner 0 finishes any remainder.
pub fn ear_clip(pts: &[[f64; 2]]) -> Vec<[usize; 3]> {
    let n = pts.len();
    if n < 3 {
        return Vec::new();
    }
    let orient = if signed_area2(pts) >= 0.0 { 1.0 } else { -1.0 };
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n - 2);
    let area_tol = 1e-14 * bbox_scale(pts).powi(2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (i0, i1, i2) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (pts[i0], pts[i1], pts[i2]);
            let cr = orient * cross2(a, b, c);
            if cr <= area_tol {
                continue;
            }
            let (oa, ob, oc) = if orient > 0.0 { (a, b, c) } else { (a, c, b) };
            let blocked = idx.iter().any(|&j| {
                j != i0
                    && j != i1
                    && j != i2
                    && pts[j] != a
                    && pts[j] != b
                    && pts[j] != c
                    && in_triangle(pts[j], oa, ob, oc)
            });
            if blocked {
                continue;
            }
            out.push([i0, i1, i2]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            break;
        }
    }
    if idx.len() >= 3 {
        for k in 1..idx.len() - 1 {
            let t = [idx[0], idx[k], idx[k + 1]];
            if orient * cross2(pts[t[0]], pts[t[1]], pts[t[2]]) > area_tol || idx.len() == 3 {
                out.push(t);
            }
        }
    }
    out
}

fn bbox_scale(pts: &[[f64; 2]]) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE)
}

/// Orthonormal `(u, v)` spanning the plane with normal `n`.
pub fn plane_basis(n: &Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let u = n.cross(&helper).normalize();
    let v = n.cross(&u);
    (u, v)
}
