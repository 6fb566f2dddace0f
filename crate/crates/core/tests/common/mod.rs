#![allow(dead_code)]

use std::path::PathBuf;

use cga_surgery::cga::{Multivector, Vec3, BLADES};
use cga_surgery::io::{load_rig, RigAsset};
use cga_surgery::mesh::{SkinnedMesh, Weights};
use nalgebra::{Matrix4, Rotation3, Unit};
use rand::Rng;

pub fn assets_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../assets"))
}

pub fn asset(name: &str) -> RigAsset {
    load_rig(assets_dir().join(name)).expect("bundled asset loads")
}

pub fn random_mv<R: Rng>(rng: &mut R) -> Multivector {
    let mut c = [0.0; BLADES];
    for x in c.iter_mut() {
        *x = rng.gen_range(-1.0..1.0);
    }
    Multivector::from_coeffs(c)
}

pub fn random_vec3<R: Rng>(rng: &mut R, scale: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_axis<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = random_vec3(rng, 1.0);
        if v.norm() > 0.1 {
            return v.normalize();
        }
    }
}

/// Homogeneous rotation by `phi` about `axis`, counter-clockwise.
pub fn rotation_matrix(axis: &Vec3, phi: f64) -> Matrix4<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), phi).to_homogeneous()
}

pub fn translation_matrix(t: &Vec3) -> Matrix4<f64> {
    Matrix4::new_translation(t)
}

pub fn scale_matrix(d: f64) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m[(0, 0)] = d;
    m[(1, 1)] = d;
    m[(2, 2)] = d;
    m
}

pub fn apply(m: &Matrix4<f64>, v: &Vec3) -> Vec3 {
    let h = m * v.push(1.0);
    h.xyz() / h.w
}

/// Height field over `[0,1]²` with `n×n` cells, random heights, skinned to
/// up to three bones with random weights.
pub fn random_mesh<R: Rng>(rng: &mut R, n: usize) -> SkinnedMesh {
    let mut v = Vec::new();
    let mut w = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            v.push(Vec3::new(
                j as f64 / n as f64,
                i as f64 / n as f64,
                rng.gen_range(-0.3..0.3),
            ));
            let a: f64 = rng.gen_range(0.05..1.0);
            let b: f64 = rng.gen_range(0.05..1.0);
            let c: f64 = rng.gen_range(0.05..1.0);
            let s = a + b + c;
            w.push(Weights::from_pairs(&[(0, a / s), (1, b / s), (2, c / s)]).unwrap());
        }
    }
    let mut f = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = i * (n + 1) + j;
            f.push([a, a + 1, a + n + 2]);
            f.push([a, a + n + 2, a + n + 1]);
        }
    }
    SkinnedMesh::new(v, f, w).unwrap()
}

pub fn partition_of_unity(m: &SkinnedMesh) -> bool {
    m.influences()
        .iter()
        .all(|w| w.len() <= 4 && (w.sum() - 1.0).abs() <= 1e-6)
}
