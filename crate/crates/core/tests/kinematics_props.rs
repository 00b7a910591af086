use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use softgrip::kinematics::{
    curve_from_joints, finger_transform, fingertips, gripper_finger_transform, joints_from_phi,
    CurveParams, FingerParams, GripperParams, RigidTransform, SERIES_THRESHOLD,
};

fn params() -> FingerParams {
    FingerParams::default()
}

fn curve(phi: f64) -> CurveParams {
    CurveParams::new(phi, &params()).unwrap()
}

// Rotation about Z written out independently of the library.
fn rz(angle: f64, p: &Vector3<f64>) -> Vector3<f64> {
    let (s, c) = angle.sin_cos();
    Vector3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inextensible(phi in 1e-9..PI) {
        let c = curve(phi);
        prop_assert!((c.radius * c.phi - c.arc_length).abs() <= 1e-12 * c.arc_length);
    }

    #[test]
    fn joints_round_trip_and_antagonism(phi in 0.0..PI) {
        let q = joints_from_phi(phi, &params()).unwrap();
        prop_assert_eq!(q.l1 + 2.0 * q.l2, 0.0);
        let back = curve_from_joints(q, &params()).unwrap();
        prop_assert!((back.phi - phi).abs() < 1e-12);
    }

    #[test]
    fn arc_group_law(phi in 1e-4..PI, a in 0.0..1.0f64, frac in 0.0..1.0f64) {
        let b = (1.0 - a) * frac;
        let c = curve(phi);
        let lhs = finger_transform(&c, a).unwrap() * finger_transform(&c, b).unwrap();
        let rhs = finger_transform(&c, a + b).unwrap();
        prop_assert!((lhs.position - rhs.position).amax() < 1e-10);
        prop_assert!((lhs.rotation - rhs.rotation).amax() < 1e-10);
    }

    #[test]
    fn root_is_identity(phi in 0.0..PI) {
        let t = finger_transform(&curve(phi), 0.0).unwrap();
        prop_assert!(t.position.amax() < 1e-12);
        prop_assert!((t.rotation - Matrix3::identity()).amax() < 1e-12);
    }

    #[test]
    fn rotations_are_rigid(phi in 0.0..PI, xi in 0.0..1.0f64, finger in 1usize..=3) {
        let c = curve(phi);
        prop_assert!(finger_transform(&c, xi).unwrap().rigidity_error() < 1e-12);
        let g = gripper_finger_transform(finger, &c, xi, &GripperParams::default()).unwrap();
        prop_assert!(g.rigidity_error() < 1e-12);
    }

    #[test]
    fn chord_law(phi in 1e-6..PI) {
        let c = curve(phi);
        let tip = finger_transform(&c, 1.0).unwrap().position;
        let root = finger_transform(&c, 0.0).unwrap().position;
        let chord = 2.0 * c.radius * (phi / 2.0).sin();
        prop_assert!(((tip - root).norm() - chord).abs() < 1e-10);
    }

    #[test]
    fn three_fold_symmetry(phi in 0.0..PI) {
        let tips = fingertips(&curve(phi), &GripperParams::default()).unwrap();
        prop_assert!((tips[1] - rz(2.0 * PI / 3.0, &tips[0])).amax() < 1e-12);
        prop_assert!((tips[2] - rz(4.0 * PI / 3.0, &tips[0])).amax() < 1e-12);
        prop_assert!((tips[0].z - tips[1].z).abs() < 1e-12);
        prop_assert!((tips[0].xy().norm() - tips[2].xy().norm()).abs() < 1e-12);
    }

    #[test]
    fn aperture_shrinks_until_fold(a in 0.0..(PI / 2.0), b in 0.0..(PI / 2.0)) {
        prop_assume!((a - b).abs() > 1e-9);
        let g = GripperParams::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let r = |phi| softgrip::fingertip_aperture(&curve(phi), &g).unwrap().radial_distance;
        prop_assert!(r(lo) > r(hi));
    }
}

#[test]
fn continuity_across_series_threshold() {
    let p = |phi| finger_transform(&curve(phi), 1.0).unwrap().position;
    assert!((p(1e-7) - p(1e-5)).norm() < 1e-6);
    let below = p(SERIES_THRESHOLD * (1.0 - 1e-9));
    let above = p(SERIES_THRESHOLD * (1.0 + 1e-9));
    assert!((below - above).norm() < 1e-12);
}

#[test]
fn half_turn_tip() {
    let t = finger_transform(&curve(PI), 1.0).unwrap();
    assert_abs_diff_eq!(t.position, Vector3::new(0.3 / PI, 0.0, 0.0), epsilon = 1e-12);
    let expected = RigidTransform::rot_y(PI).rotation;
    assert_abs_diff_eq!(t.rotation, expected, epsilon = 1e-15);
}
