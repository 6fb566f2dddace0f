//! Planar cut of a skinned mesh into two skinned meshes.
//!
//! The cut runs as four stages that can be timed on their own: vertex
//! classification, edge intersection with re-triangulation, weight
//! evaluation, and the split into two meshes.

use std::collections::{BTreeMap, HashMap};

use crate::cga::Vec3;
use crate::error::SurgeryError;
use crate::mesh::{Face, SkinnedMesh, Weights};

use super::predicates::{classify_vertex, segment_plane_intersection, Backend, CutPlane, Side};
use super::topology::{compact, edge_key, Edge};
use super::weights::{edge_weight, Host, NewVertexRecord};

/// A point where the plane crosses an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    /// Edge `(i, j)` with `i < j`.
    pub edge: Edge,
    /// Position is `(1-alpha) v_i + alpha v_j`.
    pub alpha: f64,
    pub position: Vec3,
}

/// Output of the intersection stage. Vertex indices past the input vertex
/// count refer to `points`.
#[derive(Debug, Clone, PartialEq)]
pub struct Retriangulation {
    pub base_vertices: usize,
    pub points: Vec<CutPoint>,
    /// Faces of the re-triangulated mesh with the side each belongs to.
    pub faces: Vec<(Face, Side)>,
    /// Pieces of the cut curve, one per crossed face.
    pub segments: Vec<(usize, usize)>,
    pub crossed_faces: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub above: SkinnedMesh,
    pub below: SkinnedMesh,
    /// New vertices, indexed into the re-triangulated mesh before the split.
    pub new_vertices: Vec<NewVertexRecord>,
    /// Cut curve components as ordered positions.
    pub loops: Vec<Vec<Vec3>>,
    pub crossed_faces: usize,
}

/// Stage 1.
pub fn classify_all(mesh: &SkinnedMesh, plane: &CutPlane, backend: Backend) -> Vec<Side> {
    mesh.vertices()
        .iter()
        .map(|v| classify_vertex(v, plane, backend))
        .collect()
}

/// Stage 2: intersect crossed edges and split crossed faces into one triangle
/// and one quad, the quad fanned from its lowest-index vertex.
pub fn intersect_and_triangulate(
    mesh: &SkinnedMesh,
    plane: &CutPlane,
    sides: &[Side],
    backend: Backend,
) -> Result<Retriangulation, SurgeryError> {
    if !sides.contains(&Side::Above) || !sides.contains(&Side::Below) {
        return Err(SurgeryError::NoIntersection);
    }
    let base = mesh.vertices().len();
    let verts = mesh.vertices();
    let mut points: Vec<CutPoint> = Vec::new();
    let mut point_of: HashMap<Edge, usize> = HashMap::new();
    let mut faces = Vec::with_capacity(mesh.faces().len() + 8);
    let mut segments = Vec::new();
    let mut crossed_faces = 0;
    let mut degenerate = 0usize;

    for f in mesh.faces() {
        let s = f.map(|i| sides[i]);
        let any_above = s.contains(&Side::Above);
        let any_below = s.contains(&Side::Below);
        if !(any_above && any_below) {
            let side = if any_below { Side::Below } else { Side::Above };
            if !any_above && !any_below {
                degenerate += 1;
            }
            faces.push((*f, side));
            continue;
        }
        crossed_faces += 1;
        let mut up: Vec<usize> = Vec::with_capacity(4);
        let mut down: Vec<usize> = Vec::with_capacity(4);
        let mut on_curve: Vec<usize> = Vec::with_capacity(2);
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            match sides[a] {
                Side::Above => up.push(a),
                Side::Below => down.push(a),
                Side::On => {
                    up.push(a);
                    down.push(a);
                    on_curve.push(a);
                }
            }
            if sides[a].is_strict() && sides[b].is_strict() && sides[a] != sides[b] {
                let key = edge_key(a, b);
                let idx = match point_of.get(&key) {
                    Some(&i) => i,
                    None => {
                        let (t, p) = segment_plane_intersection(
                            &verts[key.0],
                            &verts[key.1],
                            plane,
                            backend,
                        )?
                        .ok_or(SurgeryError::NoIntersection)?;
                        points.push(CutPoint {
                            edge: key,
                            alpha: t,
                            position: p,
                        });
                        let i = base + points.len() - 1;
                        point_of.insert(key, i);
                        i
                    }
                };
                up.push(idx);
                down.push(idx);
                on_curve.push(idx);
            }
        }
        for (poly, side) in [(up, Side::Above), (down, Side::Below)] {
            for t in fan_lowest(&poly) {
                faces.push((t, side));
            }
        }
        if on_curve.len() == 2 {
            segments.push((on_curve[0], on_curve[1]));
        }
    }
    if degenerate > 0 {
        log::warn!("{degenerate} face(s) lie in the cutting plane; assigned to the Above side");
    }
    Ok(Retriangulation {
        base_vertices: base,
        points,
        faces,
        segments,
        crossed_faces,
    })
}

pub(crate) fn fan_lowest(poly: &[usize]) -> Vec<Face> {
    match poly.len() {
        3 => vec![[poly[0], poly[1], poly[2]]],
        4 => {
            let s = (0..4).min_by_key(|&k| poly[k]).unwrap_or(0);
            let p = |k: usize| poly[(s + k) % 4];
            vec![[p(0), p(1), p(2)], [p(0), p(2), p(3)]]
        }
        _ => Vec::new(),
    }
}

/// Stage 3.
pub fn assign_weights(mesh: &SkinnedMesh, retri: &Retriangulation) -> Vec<Weights> {
    let w = mesh.influences();
    retri
        .points
        .iter()
        .map(|p| edge_weight(&w[p.edge.0], &w[p.edge.1], p.alpha))
        .collect()
}

/// Stage 4.
pub fn split(
    mesh: &SkinnedMesh,
    retri: &Retriangulation,
    new_weights: &[Weights],
) -> (SkinnedMesh, SkinnedMesh) {
    let mut verts = mesh.vertices().to_vec();
    verts.extend(retri.points.iter().map(|p| p.position));
    let mut weights = mesh.influences().to_vec();
    weights.extend_from_slice(new_weights);
    let pick = |side: Side| -> Vec<Face> {
        retri
            .faces
            .iter()
            .filter(|(_, s)| *s == side)
            .map(|(f, _)| *f)
            .collect()
    };
    let (above, _) = compact(&verts, &pick(Side::Above), &weights);
    let (below, _) = compact(&verts, &pick(Side::Below), &weights);
    (above, below)
}

/// Orders cut segments into polylines by following shared endpoints.
pub fn order_segments(segments: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (si, &(a, b)) in segments.iter().enumerate() {
        adj.entry(a).or_default().push(si);
        adj.entry(b).or_default().push(si);
    }
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    let open_starts: Vec<usize> = adj
        .iter()
        .filter(|(_, s)| s.len() == 1)
        .map(|(&v, _)| v)
        .collect();
    let all_starts: Vec<usize> = adj.keys().copied().collect();
    for start in open_starts.into_iter().chain(all_starts) {
        let Some(mut seg) = adj[&start].iter().copied().find(|&s| !used[s]) else {
            continue;
        };
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            cur = if a == cur { b } else { a };
            chain.push(cur);
            match adj[&cur].iter().copied().find(|&s| !used[s]) {
                Some(s) => seg = s,
                None => break,
            }
        }
        loops.push(chain);
    }
    loops
}

/// Cuts `mesh` along `plane`. Faces lying in the plane go to the Above mesh.
pub fn cut(
    mesh: &SkinnedMesh,
    plane: &CutPlane,
    backend: Backend,
) -> Result<CutResult, SurgeryError> {
    let sides = classify_all(mesh, plane, backend);
    let retri = intersect_and_triangulate(mesh, plane, &sides, backend)?;
    let new_weights = assign_weights(mesh, &retri);
    let (above, below) = split(mesh, &retri, &new_weights);
    let position = |i: usize| {
        if i < retri.base_vertices {
            mesh.vertices()[i]
        } else {
            retri.points[i - retri.base_vertices].position
        }
    };
    let loops = order_segments(&retri.segments)
        .into_iter()
        .map(|l| l.into_iter().map(position).collect())
        .collect();
    let new_vertices = retri
        .points
        .iter()
        .zip(new_weights)
        .enumerate()
        .map(|(k, (p, w))| NewVertexRecord {
            index: retri.base_vertices + k,
            position: p.position,
            host: Host::Edge {
                i: p.edge.0,
                j: p.edge.1,
                alpha: p.alpha,
            },
            weights: w,
        })
        .collect();
    Ok(CutResult {
        above,
        below,
        new_vertices,
        loops,
        crossed_faces: retri.crossed_faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> SkinnedMesh {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        SkinnedMesh::rigid(v, vec![[0, 1, 2], [0, 2, 3]], 0).unwrap()
    }

    #[test]
    fn square_cut_in_half() {
        let plane = CutPlane::new(Vec3::x(), 0.5).unwrap();
        for b in Backend::ALL {
            let r = cut(&square(), &plane, b).unwrap();
            assert_eq!(r.new_vertices.len(), 3);
            assert!((r.above.area() - 0.5).abs() < 1e-15);
            assert!((r.below.area() - 0.5).abs() < 1e-15);
            assert_eq!(r.loops.len(), 1);
            assert_eq!(r.loops[0].len(), 3);
        }
    }

    #[test]
    fn plane_through_vertices() {
        // The diagonal x = y passes through vertices 0 and 2.
        let plane = CutPlane::new(Vec3::new(1.0, -1.0, 0.0), 0.0).unwrap();
        let r = cut(&square(), &plane, Backend::Ga).unwrap();
        assert!(r.new_vertices.is_empty());
        assert_eq!(r.above.faces().len(), 1);
        assert_eq!(r.below.faces().len(), 1);
    }

    #[test]
    fn missing_plane() {
        let plane = CutPlane::new(Vec3::z(), 3.0).unwrap();
        assert_eq!(
            cut(&square(), &plane, Backend::Euclidean),
            Err(SurgeryError::NoIntersection)
        );
    }

    #[test]
    fn orders_open_and_closed_chains() {
        let open = order_segments(&[(5, 6), (3, 4), (4, 5)]);
        assert_eq!(open, vec![vec![3, 4, 5, 6]]);
        let closed = order_segments(&[(1, 2), (3, 1), (2, 3)]);
        assert_eq!(closed, vec![vec![1, 2, 3, 1]]);
    }
}
