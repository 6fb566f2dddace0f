//! Skinned triangle meshes.

use std::fmt;

use arrayvec::ArrayVec;

use crate::cga::Vec3;
use crate::error::RigError;

pub const MAX_INFLUENCES: usize = 4;
/// Allowed deviation of a vertex's weights from summing to 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-6;

pub type Face = [usize; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Influence {
    pub bone: usize,
    pub weight: f64,
}

/// Up to four bone influences of one vertex.
#[derive(Clone, Default, PartialEq)]
pub struct Weights(ArrayVec<Influence, MAX_INFLUENCES>);

impl Weights {
    pub fn single(bone: usize) -> Self {
        let mut v = ArrayVec::new();
        v.push(Influence { bone, weight: 1.0 });
        Self(v)
    }

    /// Builds from `(bone, weight)` pairs. Zero weights are dropped; more than
    /// four nonzero pairs or a repeated bone is an error.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self, RigError> {
        let mut v = ArrayVec::new();
        for &(bone, weight) in pairs {
            if weight == 0.0 {
                continue;
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(RigError::InvalidMesh(format!(
                    "bone {bone} has invalid weight {weight}"
                )));
            }
            if v.iter().any(|i: &Influence| i.bone == bone) {
                return Err(RigError::InvalidMesh(format!("bone {bone} listed twice")));
            }
            v.try_push(Influence { bone, weight }).map_err(|_| {
                RigError::InvalidMesh(format!("more than {MAX_INFLUENCES} nonzero influences"))
            })?;
        }
        Ok(Self(v))
    }

    pub(crate) fn from_sorted_unchecked(items: impl IntoIterator<Item = Influence>) -> Self {
        Self(items.into_iter().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Influence> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().map(|i| i.weight).sum()
    }

    /// Weight of `bone`, or zero.
    pub fn weight_of(&self, bone: usize) -> f64 {
        self.0
            .iter()
            .find(|i| i.bone == bone)
            .map_or(0.0, |i| i.weight)
    }

    /// Divides by the sum so the weights add to 1.
    pub fn normalized(&self) -> Self {
        let s = self.sum();
        if s <= 0.0 {
            return self.clone();
        }
        Self(
            self.0
                .iter()
                .map(|i| Influence {
                    bone: i.bone,
                    weight: i.weight / s,
                })
                .collect(),
        )
    }

    pub fn is_partition_of_unity(&self) -> bool {
        !self.0.is_empty() && (self.sum() - 1.0).abs() <= WEIGHT_SUM_TOL
    }
}

impl fmt::Debug for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|i| (i.bone, i.weight)))
            .finish()
    }
}

/// Triangle mesh with per-vertex skinning weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SkinnedMesh {
    vertices: Vec<Vec3>,
    faces: Vec<Face>,
    influences: Vec<Weights>,
}

impl SkinnedMesh {
    /// Validated constructor.
    pub fn new(
        vertices: Vec<Vec3>,
        faces: Vec<Face>,
        influences: Vec<Weights>,
    ) -> Result<Self, RigError> {
        let mesh = Self {
            vertices,
            faces,
            influences,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Mesh where every vertex is owned by one bone.
    pub fn rigid(vertices: Vec<Vec3>, faces: Vec<Face>, bone: usize) -> Result<Self, RigError> {
        let influences = vec![Weights::single(bone); vertices.len()];
        Self::new(vertices, faces, influences)
    }

    pub(crate) fn from_parts_unchecked(
        vertices: Vec<Vec3>,
        faces: Vec<Face>,
        influences: Vec<Weights>,
    ) -> Self {
        let mesh = Self {
            vertices,
            faces,
            influences,
        };
        debug_assert!(mesh.validate().is_ok(), "{:?}", mesh.validate());
        mesh
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn influences(&self) -> &[Weights] {
        &self.influences
    }

    pub fn into_parts(self) -> (Vec<Vec3>, Vec<Face>, Vec<Weights>) {
        (self.vertices, self.faces, self.influences)
    }

    /// Same topology and weights, new positions.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Result<Self, RigError> {
        if vertices.len() != self.vertices.len() {
            return Err(RigError::InvalidMesh(format!(
                "expected {} positions, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        Ok(Self {
            vertices,
            faces: self.faces.clone(),
            influences: self.influences.clone(),
        })
    }

    /// Checks index ranges, non-degenerate faces, finiteness and weight invariants.
    pub fn validate(&self) -> Result<(), RigError> {
        let n = self.vertices.len();
        if self.influences.len() != n {
            return Err(RigError::InvalidMesh(format!(
                "{} vertices but {} influence lists",
                n,
                self.influences.len()
            )));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(RigError::InvalidMesh(format!("vertex {i} is not finite")));
            }
        }
        for (fi, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i >= n) {
                return Err(RigError::InvalidMesh(format!(
                    "face {fi} {f:?} indexes past {n} vertices"
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(RigError::InvalidMesh(format!(
                    "face {fi} {f:?} repeats a vertex"
                )));
            }
        }
        for (i, w) in self.influences.iter().enumerate() {
            if !w.is_partition_of_unity() {
                return Err(RigError::InvalidMesh(format!(
                    "vertex {i} weights sum to {} ({w:?})",
                    w.sum()
                )));
            }
        }
        Ok(())
    }

    /// Checks that every influence refers to an existing bone.
    pub fn validate_bones(&self, bone_count: usize) -> Result<(), RigError> {
        for (i, w) in self.influences.iter().enumerate() {
            if let Some(bad) = w.iter().find(|inf| inf.bone >= bone_count) {
                return Err(RigError::InvalidMesh(format!(
                    "vertex {i} references bone {} but the rig has {bone_count}",
                    bad.bone
                )));
            }
        }
        Ok(())
    }

    pub fn face_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.faces[face];
        triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> (Vec<Vec3>, Vec<Face>) {
        (vec![Vec3::zeros(), Vec3::x(), Vec3::y()], vec![[0, 1, 2]])
    }

    #[test]
    fn rigid_triangle_is_valid() {
        let (v, f) = tri();
        let m = SkinnedMesh::rigid(v, f, 0).unwrap();
        assert!((m.area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_faces_and_weights() {
        let (v, _) = tri();
        assert!(SkinnedMesh::rigid(v.clone(), vec![[0, 1, 3]], 0).is_err());
        assert!(SkinnedMesh::rigid(v.clone(), vec![[0, 1, 1]], 0).is_err());
        let w = Weights::from_pairs(&[(0, 0.5), (1, 0.4)]).unwrap();
        assert!(SkinnedMesh::new(v, vec![[0, 1, 2]], vec![w; 3]).is_err());
    }

    #[test]
    fn weights_limits() {
        assert!(Weights::from_pairs(&[(0, 0.2), (1, 0.2), (2, 0.2), (3, 0.2), (4, 0.2)]).is_err());
        assert!(Weights::from_pairs(&[(0, 0.5), (0, 0.5)]).is_err());
        let w = Weights::from_pairs(&[(0, 0.5), (3, 0.0), (2, 0.5)]).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.weight_of(2), 0.5);
        assert_eq!(w.weight_of(3), 0.0);
    }
}
