use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use softgrip::grasp::closure_search_limit;
use softgrip::{
    closure_phi, plan_grasp, CalibrationGrid, FingerParams, GraspObject, GraspTarget,
    GripperParams,
};

// Tip of a circular arc, tilted by the mount angle; radial distance only.
fn oracle_radius(phi: f64, l: f64, mount: f64) -> f64 {
    let (x, z) = if phi == 0.0 {
        (0.0, l)
    } else {
        let lambda = l / phi;
        (lambda * (1.0 - phi.cos()), lambda * phi.sin())
    };
    (mount.cos() * x + mount.sin() * z).abs()
}

fn dense_sweep(radius: f64, l: f64, mount: f64, limit: f64) -> f64 {
    let step = 1e-5;
    let n = (limit / step) as usize;
    (0..=n)
        .map(|i| i as f64 * step)
        .min_by(|a, b| {
            let ea = (oracle_radius(*a, l, mount) - radius).abs();
            let eb = (oracle_radius(*b, l, mount) - radius).abs();
            ea.total_cmp(&eb)
        })
        .unwrap()
}

#[test]
fn sphere_of_five_centimetres() {
    let (p, g) = (FingerParams::default(), GripperParams::default());
    let phi = closure_phi(&GraspObject::sphere(0.05), &p, &g).unwrap();
    // dense sweep at 1e-5 rad gives 0.86836; a bracketed solve gives 0.868361263
    assert!((phi - 0.86836).abs() < 1e-4);
    assert!((phi - 0.868_361_263).abs() < 1e-8);
}

#[test]
fn closure_agrees_with_dense_sweep() {
    let (p, g) = (FingerParams::default(), GripperParams::default());
    let limit = closure_search_limit(&p, &g);
    assert!((limit - PI / 2.0).abs() < 1e-15);
    let open = oracle_radius(0.0, p.arc_length, g.mount_angle);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let radius = rng.gen_range(0.005..open);
        let phi = closure_phi(&GraspObject::sphere(radius), &p, &g).unwrap();
        let brute = dense_sweep(radius, p.arc_length, g.mount_angle, limit);
        assert!((phi - brute).abs() < 1e-4, "radius {radius}: {phi} vs {brute}");
    }
}

#[test]
fn larger_objects_close_earlier() {
    let (p, g) = (FingerParams::default(), GripperParams::default());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a: f64 = rng.gen_range(0.005..0.105);
        let b: f64 = rng.gen_range(0.005..0.105);
        if (a - b).abs() < 1e-4 {
            continue;
        }
        let (small, large) = if a < b { (a, b) } else { (b, a) };
        let phi_small = closure_phi(&GraspObject::sphere(small), &p, &g).unwrap();
        let phi_large = closure_phi(&GraspObject::sphere(large), &p, &g).unwrap();
        assert!(phi_large < phi_small);
    }
}

#[test]
fn closure_is_deterministic() {
    let (p, g) = (FingerParams::default(), GripperParams::default());
    let object = GraspObject::from_json(r#"{"shape":"pyramid","edge_m":0.09,"mass_kg":0.1}"#).unwrap();
    let a = closure_phi(&object, &p, &g).unwrap();
    let b = closure_phi(&object, &p, &g).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn stiffness_targets_order_commands() {
    let (p, g) = (FingerParams::default(), GripperParams::default());
    let grid = CalibrationGrid::bundled();
    let object = GraspObject::sphere(0.05);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi = closure_phi(&object, &p, &g).unwrap();
    let (kmin, kmax) = grid.stiffness_band(phi).unwrap();
    for _ in 0..20 {
        let a = rng.gen_range(kmin..kmax);
        let b = rng.gen_range(kmin..kmax);
        let pa = plan_grasp(&grid, &object, GraspTarget::Stiffness(a), &p, &g).unwrap();
        let pb = plan_grasp(&grid, &object, GraspTarget::Stiffness(b), &p, &g).unwrap();
        assert_eq!(pa.phi, pb.phi);
        assert_eq!(a < b, pa.command.p1 < pb.command.p1);
        assert_eq!(a < b, pa.security() < pb.security());
        assert!((grid.shape_from_pressures(pa.command.p1, pa.command.p2).unwrap() - pa.phi).abs() < 1e-6);
    }
}
