mod common;

use cga_surgery::cga::{BlendMode, Vec3};
use cga_surgery::error::SurgeryError;
use cga_surgery::mesh::Weights;
use cga_surgery::rig::{deform_multivector, global_pose};
use cga_surgery::surgery::*;
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn cube_cut_at_half_height() {
    let cube = asset("cube.json");
    let plane = CutPlane::new(Vec3::z(), 0.5).unwrap();
    for backend in Backend::ALL {
        let r = cut(&cube.mesh, &plane, backend).unwrap();
        assert_eq!(r.new_vertices.len(), 8);
        assert_eq!(r.crossed_faces, 8);
        assert_eq!(r.loops.len(), 1);
        assert!((r.above.area() + r.below.area() - 6.0).abs() < 1e-12);
        assert!((r.above.area() - 3.0).abs() < 1e-12);
        for v in r.below.vertices() {
            assert!(v.z <= 0.5 + 1e-12);
        }
    }
}

#[test]
fn plane_touching_a_face_does_not_cut() {
    let cube = asset("cube.json");
    let plane = CutPlane::new(Vec3::z(), 0.0).unwrap();
    assert!(matches!(
        cut(&cube.mesh, &plane, Backend::Ga),
        Err(SurgeryError::NoIntersection)
    ));
    let far = CutPlane::new(Vec3::x(), 3.0).unwrap();
    assert!(matches!(
        cut(&cube.mesh, &far, Backend::Euclidean),
        Err(SurgeryError::NoIntersection)
    ));
}

#[test]
fn zero_normal_is_rejected() {
    assert!(CutPlane::new(Vec3::zeros(), 1.0).is_err());
}

#[test]
fn backends_agree_on_points_and_segments() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let plane = CutPlane::new(random_axis(&mut rng), rng.gen_range(-2.0..2.0)).unwrap();
        let a = random_vec3(&mut rng, 3.0);
        let b = random_vec3(&mut rng, 3.0);
        assert_eq!(
            classify_vertex(&a, &plane, Backend::Euclidean),
            classify_vertex(&a, &plane, Backend::Ga)
        );
        let e = segment_plane_intersection(&a, &b, &plane, Backend::Euclidean).unwrap();
        let g = segment_plane_intersection(&a, &b, &plane, Backend::Ga).unwrap();
        assert_eq!(e.is_some(), g.is_some());
        if let (Some((_, p)), Some((_, q))) = (e, g) {
            worst = worst.max((p - q).amax());
            let n = plane.normal();
            assert!((n.dot(&p) - plane.d()).abs() <= 1e-9);
        }
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn only_the_four_largest_influences_survive() {
    let w = limit_influences([(5, 0.1), (2, 0.3), (7, 0.1), (1, 0.2), (3, 0.2), (4, 0.1)]);
    let bones: Vec<usize> = w.iter().map(|i| i.bone).collect();
    assert_eq!(bones, vec![1, 2, 3, 4]);
    assert!((w.sum() - 1.0).abs() < 1e-15);
    assert!((w.weight_of(2) - 0.3 / 0.8).abs() < 1e-15);

    let few = limit_influences([(0, 0.25), (3, 0.75)]);
    assert_eq!(few.weight_of(3), 0.75);
}

#[test]
fn barycentric_blend_of_vertex_weights() {
    let a = Weights::single(0);
    let b = Weights::single(1);
    let c = Weights::from_pairs(&[(1, 0.5), (2, 0.5)]).unwrap();
    let w = barycentric_weight(&a, &b, &c, [0.5, 0.25, 0.25]);
    assert!((w.weight_of(0) - 0.5).abs() < 1e-15);
    assert!((w.weight_of(1) - 0.375).abs() < 1e-15);
    assert!((w.weight_of(2) - 0.125).abs() < 1e-15);
}

#[test]
fn pinned_arm_cut_is_stable() {
    let manifest = cga_surgery::assets::read_manifest(assets_dir()).unwrap();
    let pin = &manifest.pinned_cut;
    let arm = asset(&pin.file);
    let p = pin.plane;
    let plane = CutPlane::new(Vec3::new(p[0], p[1], p[2]), p[3]).unwrap();
    for backend in Backend::ALL {
        let first = cut(&arm.mesh, &plane, backend).unwrap();
        let again = cut(&arm.mesh, &plane, backend).unwrap();
        assert_eq!(first.new_vertices.len(), pin.intersection_points);
        assert_eq!(first, again);
    }
}

#[test]
fn drill_rim_lies_on_the_cylinder() {
    let plate = asset("plate.json");
    for (c, r) in [((0.1, 0.05), 0.3), ((-0.33, 0.41), 0.17), ((0.0, 0.0), 0.5)] {
        let spec = DrillSpec::new(Vec3::new(c.0, c.1, 2.0), Vec3::new(c.0, c.1, -2.0), r).unwrap();
        let out = drill(&plate.mesh, &spec, 8).unwrap();
        assert!(out.rim_residual <= 1e-9);
        for &i in &out.rim {
            let v = out.mesh.vertices()[i];
            let d = (v.x - c.0).hypot(v.y - c.1);
            assert!((d - r).abs() <= 1e-9, "{d} vs {r}");
        }
        for v in out.mesh.vertices() {
            assert!(
                (v.x - c.0).hypot(v.y - c.1) >= r - 1e-9,
                "vertex {v} inside the hole"
            );
        }
        let hole = std::f64::consts::PI * r * r;
        let lost = plate.mesh.area() - out.mesh.area();
        assert!(
            lost > 0.9 * hole && lost < hole,
            "removed {lost}, hole {hole}"
        );
        assert!(partition_of_unity(&out.mesh));
    }
}

#[test]
fn drill_errors() {
    let plate = asset("plate.json");
    let miss = DrillSpec::new(Vec3::new(5.0, 5.0, 1.0), Vec3::new(5.0, 5.0, -1.0), 0.2).unwrap();
    assert!(matches!(
        drill(&plate.mesh, &miss, 8),
        Err(SurgeryError::NoDrillContact)
    ));
    let edge = DrillSpec::new(Vec3::new(0.95, 0.0, 1.0), Vec3::new(0.95, 0.0, -1.0), 0.2).unwrap();
    assert!(matches!(
        drill(&plate.mesh, &edge, 8),
        Err(SurgeryError::OpenBoundaryHit(..))
    ));
    assert!(DrillSpec::new(Vec3::z(), -Vec3::z(), 0.0).is_err());
    assert!(DrillSpec::new(Vec3::z(), Vec3::z(), 1.0).is_err());
}

#[test]
fn drilled_arm_still_deforms() {
    let arm = asset("arm.json");
    let spec = DrillSpec::new(Vec3::new(-1.0, 0.0, 1.75), Vec3::new(1.0, 0.0, 1.75), 0.12).unwrap();
    let out = drill(&arm.mesh, &spec, 8).unwrap();
    assert!(out.intersection_points > 0);
    for &i in &out.rim {
        let w = &out.mesh.influences()[i];
        assert!(w.len() <= 4 && (w.sum() - 1.0).abs() <= 1e-6);
    }
    let pose = global_pose(&arm.rig, arm.clip("flex").unwrap(), 0.8, BlendMode::Log).unwrap();
    deform_multivector(&out.mesh, &arm.rig, &pose).unwrap();
}

fn plate_scalpel() -> (ScalpelState, ScalpelState) {
    let t = cga_surgery::io::load_trajectory(assets_dir().join("scalpel.json")).unwrap();
    let (a, b) = t.step(0).unwrap();
    (*a, *b)
}

#[test]
fn tear_opens_symmetrically() {
    let plate = asset("plate.json");
    let (s0, s1) = plate_scalpel();
    let w = 0.04;
    let r = tear(&plate.mesh, &s0, &s1, w).unwrap();
    let n = r.plane.normal();
    let v = r.mesh.vertices();
    assert_eq!(r.duplicates.len(), r.path.len());
    for (&(p, m), q) in r.duplicates.iter().zip(&r.path) {
        assert!((v[p] - (q + n * (0.5 * w))).amax() <= 1e-12);
        assert!((v[m] - (q - n * (0.5 * w))).amax() <= 1e-12);
    }
    assert!(r.mesh.validate().is_ok());
    assert!(partition_of_unity(&r.mesh));
    assert_eq!(
        r.mesh.faces().len(),
        plate.mesh.faces().len() + 2 * r.strip.len() + 2
    );
}

#[test]
fn scalpel_above_the_surface_misses() {
    let plate = asset("plate.json");
    let (mut s0, s1) = plate_scalpel();
    s0.p_tip = Vec3::new(s0.p_tip.x, s0.p_tip.y, 0.2);
    assert!(matches!(
        tear(&plate.mesh, &s0, &s1, 0.0),
        Err(SurgeryError::NoScalpelContact { .. })
    ));
}

fn plane_strategy() -> impl Strategy<Value = CutPlane> {
    (
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        (0.05..0.95f64, 0.05..0.95f64),
    )
        .prop_filter("normal", |(n, _)| Vec3::new(n.0, n.1, n.2).norm() > 0.1)
        .prop_map(|(n, p)| {
            CutPlane::through(&Vec3::new(p.0, p.1, 0.0), Vec3::new(n.0, n.1, n.2)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cuts_preserve_area_and_weights(seed in 0u64..1000, plane in plane_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = random_mesh(&mut rng, 5);
        match cut(&mesh, &plane, Backend::Ga) {
            Err(SurgeryError::NoIntersection) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
            Ok(r) => {
                let total = r.above.area() + r.below.area();
                prop_assert!((total - mesh.area()).abs() <= 1e-9 * mesh.area());
                prop_assert!(partition_of_unity(&r.above) && partition_of_unity(&r.below));
                for nv in &r.new_vertices {
                    prop_assert!(plane.signed_distance(&nv.position, Backend::Euclidean).abs() <= 1e-9);
                }
                let n = plane.normal();
                for v in r.above.vertices() {
                    prop_assert!(n.dot(v) - plane.d() >= -1e-9);
                }
                for v in r.below.vertices() {
                    prop_assert!(n.dot(v) - plane.d() <= 1e-9);
                }
            }
        }
    }
}
