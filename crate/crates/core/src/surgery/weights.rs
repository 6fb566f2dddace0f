//! Skinning weights for vertices created by surgery.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cga::Vec3;
use crate::mesh::{Influence, Weights, MAX_INFLUENCES};

/// Where a new vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Host {
    /// On edge `(i, j)` at `(1-alpha) v_i + alpha v_j`.
    Edge { i: usize, j: usize, alpha: f64 },
    /// Inside face `face` with barycentric coordinates over its corners.
    Face { face: usize, bary: [f64; 3] },
}

/// A vertex added by cut, tear or drill.
#[derive(Debug, Clone, PartialEq)]
pub struct NewVertexRecord {
    /// Index in the mesh the record belongs to.
    pub index: usize,
    pub position: Vec3,
    pub host: Host,
    pub weights: Weights,
}

/// Reduces bone/weight pairs to at most four influences. With more than four
/// nonzero weights the largest four are kept (ties go to the lower bone id)
/// and rescaled to sum 1; otherwise the pairs are returned as they are.
pub fn limit_influences(pairs: impl IntoIterator<Item = (usize, f64)>) -> Weights {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for (bone, w) in pairs {
        *acc.entry(bone).or_insert(0.0) += w;
    }
    let mut items: Vec<(usize, f64)> = acc.into_iter().filter(|&(_, w)| w > 0.0).collect();
    if items.len() > MAX_INFLUENCES {
        items.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        items.truncate(MAX_INFLUENCES);
        let s: f64 = items.iter().map(|i| i.1).sum();
        for i in &mut items {
            i.1 /= s;
        }
        items.sort_by_key(|i| i.0);
    }
    Weights::from_sorted_unchecked(
        items
            .into_iter()
            .map(|(bone, weight)| Influence { bone, weight }),
    )
}

/// Blend of host weights with the given coefficients. Coefficients are
/// clamped at zero and rescaled to sum 1 first.
pub fn blend_weights(hosts: &[(&Weights, f64)]) -> Weights {
    let total: f64 = hosts.iter().map(|h| h.1.max(0.0)).sum();
    let total = if total > 0.0 { total } else { 1.0 };
    limit_influences(hosts.iter().flat_map(|&(w, c)| {
        let c = c.max(0.0) / total;
        w.iter().map(move |i| (i.bone, c * i.weight))
    }))
}

/// Weights of the point `(1-alpha) a + alpha b`.
pub fn edge_weight(a: &Weights, b: &Weights, alpha: f64) -> Weights {
    if alpha <= 0.0 {
        return a.clone();
    }
    if alpha >= 1.0 {
        return b.clone();
    }
    blend_weights(&[(a, 1.0 - alpha), (b, alpha)])
}

/// Weights of the point `p A + q B + r C`.
pub fn barycentric_weight(a: &Weights, b: &Weights, c: &Weights, bary: [f64; 3]) -> Weights {
    blend_weights(&[(a, bary[0]), (b, bary[1]), (c, bary[2])])
}

/// Barycentric coordinates of `x` in triangle `abc` (least squares for points
/// off the plane).
pub fn barycentric(x: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> [f64; 3] {
    let (v0, v1, v2) = (b - a, c - a, x - a);
    let (d00, d01, d11) = (v0.dot(&v0), v0.dot(&v1), v1.dot(&v1));
    let (d20, d21) = (v2.dot(&v0), v2.dot(&v1));
    let den = d00 * d11 - d01 * d01;
    let q = (d11 * d20 - d01 * d21) / den;
    let r = (d00 * d21 - d01 * d20) / den;
    [1.0 - q - r, q, r]
}
