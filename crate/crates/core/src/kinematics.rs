//! Constant-curvature finger model and tri-finger gripper assembly.
//!
//! A finger is an inextensible backbone of arc length `L` that bends as a
//! circular arc in its local X–Z plane. PMA 1 sits at `+r` on the X axis and
//! the bundled PMAs 2 & 3 sit at `-r/2`; under gripping (`l1 <= l2`) the arc
//! bends towards `+X`.
//!
//! The three fingers hang from a base unit: finger 1 is translated along Z by
//! `sigma`, tilted about Y by the mount angle, and fingers 2 and 3 are copies
//! rotated about the gripper's Z axis by 2π/3 and 4π/3.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this bend angle the arc formulas switch to their series expansions.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Azimuths of the three fingers about the gripper axis.
pub const FINGER_AZIMUTHS: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("{quantity} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("finger index {0} is not one of 1, 2, 3")]
    InvalidIndex(usize),
}

pub type Result<T> = std::result::Result<T, KinematicsError>;

fn check_range(quantity: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && value >= min && value <= max {
        Ok(())
    } else {
        Err(KinematicsError::OutOfRange {
            quantity,
            value,
            min,
            max,
        })
    }
}

/// Geometric constants of one finger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerParams {
    /// Length of the bending segment (m).
    pub arc_length: f64,
    /// Radial offset of PMA 1 from the backbone centre (m).
    pub actuator_radius: f64,
    /// Largest admissible subtended angle (rad).
    pub phi_max: f64,
    /// Admissible pressure range of any PMA (bar).
    pub pressure_min: f64,
    pub pressure_max: f64,
}

impl Default for FingerParams {
    fn default() -> Self {
        Self {
            arc_length: 0.150,
            actuator_radius: 0.012,
            phi_max: PI,
            pressure_min: 0.0,
            pressure_max: 7.0,
        }
    }
}

impl FingerParams {
    pub fn validate(&self) -> Result<()> {
        let Self {
            arc_length: l,
            actuator_radius: r,
            phi_max,
            pressure_min,
            pressure_max,
        } = *self;
        if !(l.is_finite() && l > 0.0) {
            return Err(KinematicsError::InvalidParams(format!(
                "arc length must be positive, got {l}"
            )));
        }
        if !(r.is_finite() && r > 0.0 && r < l) {
            return Err(KinematicsError::InvalidParams(format!(
                "actuator radius must lie in (0, L = {l}), got {r}"
            )));
        }
        if !(phi_max > 0.0 && phi_max <= PI) {
            return Err(KinematicsError::InvalidParams(format!(
                "phi_max must lie in (0, π], got {phi_max}"
            )));
        }
        if !(pressure_min.is_finite() && pressure_max.is_finite() && pressure_min < pressure_max)
        {
            return Err(KinematicsError::InvalidParams(format!(
                "pressure range [{pressure_min}, {pressure_max}] is empty"
            )));
        }
        Ok(())
    }
}

/// Length changes of the actuators: PMA 1 and the common change of PMAs 2 & 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub l1: f64,
    pub l2: f64,
}

/// State of the bending arc.
///
/// `radius` is `f64::INFINITY` for a straight finger. Geometry is always
/// evaluated from `(phi, arc_length)` so the straight limit stays well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub radius: f64,
    pub phi: f64,
    pub arc_length: f64,
}

impl CurveParams {
    /// Builds the arc for a bend angle, checking it against the finger limits.
    pub fn new(phi: f64, params: &FingerParams) -> Result<Self> {
        params.validate()?;
        check_range("phi", phi, 0.0, params.phi_max)?;
        Ok(Self::from_phi_unchecked(phi, params.arc_length))
    }

    fn from_phi_unchecked(phi: f64, arc_length: f64) -> Self {
        let radius = if phi == 0.0 {
            f64::INFINITY
        } else {
            arc_length / phi
        };
        Self {
            radius,
            phi,
            arc_length,
        }
    }

    pub fn is_straight(&self) -> bool {
        self.phi < SERIES_THRESHOLD
    }
}

/// Rotation plus translation, acting as the 4×4 homogeneous matrix
/// `[R p; 0 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub position: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            position: Vector3::zeros(),
        }
    }

    pub fn translation(x: f64, y: f64, z: f64) -> Self {
        Self {
            rotation: Matrix3::identity(),
            position: Vector3::new(x, y, z),
        }
    }

    pub fn rot_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            rotation: Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
            position: Vector3::zeros(),
        }
    }

    pub fn rot_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            rotation: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            position: Vector3::zeros(),
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            position: -(rt * self.position),
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.position
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.position);
        m
    }

    /// Largest deviation of `RᵀR` from the identity and of `det R` from one.
    pub fn rigidity_error(&self) -> f64 {
        let gram = self.rotation.transpose() * self.rotation - Matrix3::identity();
        gram.amax().max((self.rotation.determinant() - 1.0).abs())
    }
}

impl Mul for RigidTransform {
    type Output = RigidTransform;

    fn mul(self, rhs: RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * rhs.rotation,
            position: self.rotation * rhs.position + self.position,
        }
    }
}

/// Geometry of the base unit holding the three fingers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GripperParams {
    /// Translation along the base Z axis applied before mounting (m).
    /// Negative values place the finger roots below the base origin.
    pub base_offset: f64,
    /// Tilt of each finger about its local Y axis (rad).
    pub mount_angle: f64,
}

impl Default for GripperParams {
    fn default() -> Self {
        Self {
            base_offset: 0.030,
            mount_angle: 3.0 * FRAC_PI_4,
        }
    }
}

impl GripperParams {
    pub fn validate(&self) -> Result<()> {
        if !self.base_offset.is_finite() {
            return Err(KinematicsError::InvalidParams(format!(
                "base offset must be finite, got {}",
                self.base_offset
            )));
        }
        if !(self.mount_angle > PI / 2.0 && self.mount_angle < PI) {
            return Err(KinematicsError::InvalidParams(format!(
                "mount angle must lie in (π/2, π), got {}",
                self.mount_angle
            )));
        }
        Ok(())
    }

    pub fn azimuths(&self) -> [f64; 3] {
        FINGER_AZIMUTHS
    }

    /// Bend angle at which a fingertip reaches the gripper axis.
    ///
    /// The fingertip's radial coordinate is `2λ·sin(φ/2)·sin(mount + φ/2)`,
    /// which vanishes once the chord turns past the axis at `φ = 2(π − mount)`.
    pub fn fold_angle(&self) -> f64 {
        2.0 * (PI - self.mount_angle)
    }
}

/// Joint lengths to arc parameters.
pub fn curve_from_joints(q: JointState, params: &FingerParams) -> Result<CurveParams> {
    params.validate()?;
    let r = params.actuator_radius;
    let phi = if q.l1 > q.l2 {
        -q.l1 / r
    } else {
        2.0 * q.l2 / r
    };
    check_range("phi", phi, 0.0, params.phi_max)?;
    Ok(CurveParams::from_phi_unchecked(phi, params.arc_length))
}

/// Arc angle to joint lengths, `l1 = -rφ`, `l2 = rφ/2`.
pub fn joints_from_phi(phi: f64, params: &FingerParams) -> Result<JointState> {
    params.validate()?;
    check_range("phi", phi, 0.0, params.phi_max)?;
    let r = params.actuator_radius;
    Ok(JointState {
        l1: -r * phi,
        l2: r * phi / 2.0,
    })
}

// (1 - cos θ)/θ and sin θ/θ, with series forms near zero.
fn arc_factors(theta: f64) -> (f64, f64) {
    if theta.abs() < SERIES_THRESHOLD {
        let t2 = theta * theta;
        (theta / 2.0 - theta * t2 / 24.0, 1.0 - t2 / 6.0)
    } else {
        let half = (theta / 2.0).sin();
        (2.0 * half * half / theta, theta.sin() / theta)
    }
}

/// Pose of backbone point `xi` (0 = root, 1 = tip) in the finger frame:
/// `Px(λ)·Ry(ξφ)·Px(−λ)`.
pub fn finger_transform(curve: &CurveParams, xi: f64) -> Result<RigidTransform> {
    check_range("xi", xi, 0.0, 1.0)?;
    let theta = xi * curve.phi;
    let (one_minus_cos, sinc) = arc_factors(theta);
    // x = λ(1 − cos θ), z = λ sin θ with λ = L/φ = Lξ/θ
    let s = curve.arc_length * xi;
    let mut pose = RigidTransform::rot_y(theta);
    pose.position = Vector3::new(s * one_minus_cos, 0.0, s * sinc);
    Ok(pose)
}

/// The transform that places finger 1's root frame in the gripper frame.
pub fn finger_mount(gparams: &GripperParams) -> RigidTransform {
    RigidTransform::translation(0.0, 0.0, gparams.base_offset) * RigidTransform::rot_y(gparams.mount_angle)
}

/// Pose of backbone point `xi` of finger `finger_index` (1-based) in the
/// gripper frame.
pub fn gripper_finger_transform(
    finger_index: usize,
    curve: &CurveParams,
    xi: f64,
    gparams: &GripperParams,
) -> Result<RigidTransform> {
    if !(1..=3).contains(&finger_index) {
        return Err(KinematicsError::InvalidIndex(finger_index));
    }
    gparams.validate()?;
    let first = finger_mount(gparams) * finger_transform(curve, xi)?;
    Ok(match finger_index {
        1 => first,
        i => RigidTransform::rot_z(FINGER_AZIMUTHS[i - 1]) * first,
    })
}

/// Fingertip distance from the gripper axis and its height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub radial_distance: f64,
    pub height: f64,
}

pub fn fingertip_aperture(curve: &CurveParams, gparams: &GripperParams) -> Result<Aperture> {
    let tip = gripper_finger_transform(1, curve, 1.0, gparams)?.position;
    Ok(Aperture {
        radial_distance: tip.x.hypot(tip.y),
        height: tip.z,
    })
}

/// All three fingertip positions at one bend angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceSample {
    pub phi: f64,
    pub fingertips: [Vector3<f64>; 3],
}

pub fn fingertips(curve: &CurveParams, gparams: &GripperParams) -> Result<[Vector3<f64>; 3]> {
    let mut tips = [Vector3::zeros(); 3];
    for (i, tip) in tips.iter_mut().enumerate() {
        *tip = gripper_finger_transform(i + 1, curve, 1.0, gparams)?.position;
    }
    Ok(tips)
}

/// `n` bend angles evenly spaced over `[0, phi_max]` with their fingertips.
pub fn sample_workspace(
    params: &FingerParams,
    gparams: &GripperParams,
    n: usize,
) -> Result<Vec<WorkspaceSample>> {
    if n < 2 {
        return Err(KinematicsError::InvalidParams(format!(
            "workspace needs at least 2 samples, got {n}"
        )));
    }
    params.validate()?;
    gparams.validate()?;
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let phi = params.phi_max * (i as f64 / last);
            let curve = CurveParams::new(phi, params)?;
            Ok(WorkspaceSample {
                phi,
                fingertips: fingertips(&curve, gparams)?,
            })
        })
        .collect()
}
