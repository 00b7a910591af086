//! Grasp closure against simple test objects and decoupled grasp planning.
//!
//! Contact is modelled at the fingertips only: a grasp closes when the
//! fingertip's distance from the gripper axis equals the object's
//! characteristic radius (the circumradius of its widest cross-section). The
//! object is assumed centred on the gripper axis.
//!
//! Once the closing shape is fixed, stiffness is chosen independently through
//! the calibration grid.

use std::cmp::Ordering;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::{CalibrationError, CalibrationGrid, PressureCommand};
use crate::kinematics::{
    fingertip_aperture, CurveParams, FingerParams, GripperParams, KinematicsError,
};
use crate::solve::{bisect_increasing, BisectFailure};

/// Tolerance on fingertip radius at closure (m).
pub const CLOSURE_TOLERANCE: f64 = 1e-6;

/// Number of samples used to check that the aperture shrinks monotonically.
pub const MONOTONE_CHECK_SAMPLES: usize = 10_001;

// Bisection runs on φ; this bracket width keeps the radius residual far
// below CLOSURE_TOLERANCE for any realistic finger length.
const PHI_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GraspError {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("no closure: {0}")]
    NoClosure(String),
    #[error("aperture is not strictly decreasing near phi = {0} rad")]
    NotMonotone(f64),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("{context}: {source}")]
    Calibration {
        context: String,
        #[source]
        source: CalibrationError,
    },
}

pub type Result<T> = std::result::Result<T, GraspError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectShape {
    Sphere,
    Box,
    Pyramid,
}

/// A test object, reduced to what fingertip contact can see.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraspObject {
    pub shape: ObjectShape,
    /// Sphere radius, or circumradius of the widest cross-section (m).
    pub characteristic_radius: f64,
    /// Height of the object centre in the gripper frame (m). Informational.
    pub center_height: f64,
    /// Mass (kg). Informational.
    pub mass: f64,
}

/// JSON description of an object, e.g. `{"shape":"sphere","radius_m":0.05}`.
/// Boxes and pyramids give `edge_m` instead of `radius_m`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub shape: ObjectShape,
    pub radius_m: Option<f64>,
    pub edge_m: Option<f64>,
    #[serde(default)]
    pub mass_kg: f64,
    #[serde(default)]
    pub center_height_m: f64,
}

impl GraspObject {
    pub fn sphere(radius: f64) -> Self {
        Self {
            shape: ObjectShape::Sphere,
            characteristic_radius: radius,
            center_height: 0.0,
            mass: 0.1,
        }
    }

    /// Square cross-section of side `edge`; the circumradius is `edge·√2/2`.
    pub fn square_section(shape: ObjectShape, edge: f64) -> Self {
        Self {
            shape,
            characteristic_radius: edge * FRAC_1_SQRT_2,
            center_height: 0.0,
            mass: 0.1,
        }
    }

    pub fn from_spec(spec: &ObjectSpec) -> Result<Self> {
        let object = match (spec.shape, spec.radius_m, spec.edge_m) {
            (ObjectShape::Sphere, Some(r), None) => Self::sphere(r),
            (ObjectShape::Sphere, _, _) => {
                return Err(GraspError::InvalidObject(
                    "a sphere needs `radius_m` and no `edge_m`".into(),
                ))
            }
            (shape, None, Some(edge)) => Self::square_section(shape, edge),
            (_, _, _) => {
                return Err(GraspError::InvalidObject(
                    "boxes and pyramids need `edge_m` and no `radius_m`".into(),
                ))
            }
        };
        let object = Self {
            mass: spec.mass_kg,
            center_height: spec.center_height_m,
            ..object
        };
        if !(object.characteristic_radius.is_finite() && object.characteristic_radius > 0.0) {
            return Err(GraspError::InvalidObject(format!(
                "characteristic radius must be positive, got {}",
                object.characteristic_radius
            )));
        }
        if object.mass < 0.0 || !object.mass.is_finite() {
            return Err(GraspError::InvalidObject(format!(
                "mass must be non-negative, got {}",
                object.mass
            )));
        }
        Ok(object)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ObjectSpec = serde_json::from_str(text)
            .map_err(|e| GraspError::InvalidObject(format!("bad object JSON: {e}")))?;
        Self::from_spec(&spec)
    }
}

/// Largest bend angle over which closure is searched: the fingertips reach the
/// gripper axis at the fold angle, past which the aperture grows again.
pub fn closure_search_limit(params: &FingerParams, gparams: &GripperParams) -> f64 {
    params.phi_max.min(gparams.fold_angle())
}

fn radial(phi: f64, params: &FingerParams, gparams: &GripperParams) -> Result<f64> {
    Ok(fingertip_aperture(&CurveParams::new(phi, params)?, gparams)?.radial_distance)
}

/// Dense-sampling check that the aperture strictly decreases on `[0, limit]`.
pub fn check_aperture_monotone(
    params: &FingerParams,
    gparams: &GripperParams,
    limit: f64,
) -> Result<()> {
    let last = (MONOTONE_CHECK_SAMPLES - 1) as f64;
    let mut prev = radial(0.0, params, gparams)?;
    for i in 1..MONOTONE_CHECK_SAMPLES {
        let phi = limit * (i as f64 / last);
        let r = radial(phi, params, gparams)?;
        if !(r < prev) {
            return Err(GraspError::NotMonotone(phi));
        }
        prev = r;
    }
    Ok(())
}

/// Bend angle at which the fingertips close onto `object`.
pub fn closure_phi(
    object: &GraspObject,
    params: &FingerParams,
    gparams: &GripperParams,
) -> Result<f64> {
    params.validate()?;
    gparams.validate()?;
    let radius = object.characteristic_radius;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GraspError::InvalidObject(format!(
            "characteristic radius must be positive, got {radius}"
        )));
    }
    let open = radial(0.0, params, gparams)?;
    if radius > open + CLOSURE_TOLERANCE {
        return Err(GraspError::InvalidObject(format!(
            "radius {radius} m does not fit between the open fingers (aperture {open} m)"
        )));
    }
    let limit = closure_search_limit(params, gparams);
    check_aperture_monotone(params, gparams, limit)?;
    let closed = radial(limit, params, gparams)?;
    if radius < closed - CLOSURE_TOLERANCE {
        return Err(GraspError::NoClosure(format!(
            "fingertips reach only {closed} m from the axis at phi = {limit} rad; object radius is {radius} m"
        )));
    }
    let target = radius.clamp(closed, open);
    // aperture decreases in phi, so solve -aperture(phi) = -radius
    bisect_increasing(
        |phi| -radial(phi, params, gparams).unwrap_or(f64::NAN),
        -target,
        0.0,
        limit,
        PHI_TOLERANCE,
    )
    .map_err(|e| match e {
        BisectFailure::NotBracketed(..) => {
            GraspError::NoClosure(format!("radius {radius} m is not bracketed on [0, {limit}]"))
        }
        BisectFailure::NoConvergence => GraspError::NoClosure(format!(
            "closure solve for radius {radius} m did not converge"
        )),
    })
}

/// How the stiffness side of a grasp is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraspTarget {
    /// Desired bending stiffness (Nm/rad).
    Stiffness(f64),
    /// Desired stiffness-PMA pressure (bar).
    P1(f64),
}

/// Ordinal grip-security rank of a plan: compares `phi` first, then
/// stiffness. More curl and more stiffness rank higher. Not a force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GripSecurity {
    pub phi: f64,
    pub stiffness: f64,
}

impl PartialOrd for GripSecurity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.phi.partial_cmp(&other.phi)? {
            Ordering::Equal => self.stiffness.partial_cmp(&other.stiffness),
            ord => Some(ord),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraspPlan {
    pub phi: f64,
    pub stiffness: f64,
    pub command: PressureCommand,
    /// Fingertip distance from the gripper axis at `phi` (m).
    pub aperture: f64,
}

impl GraspPlan {
    pub fn security(&self) -> GripSecurity {
        GripSecurity {
            phi: self.phi,
            stiffness: self.stiffness,
        }
    }
}

/// Closes the fingers on `object` and picks pressures for the requested
/// stiffness (or stiffness-PMA pressure) at that shape.
pub fn plan_grasp(
    grid: &CalibrationGrid,
    object: &GraspObject,
    target: GraspTarget,
    params: &FingerParams,
    gparams: &GripperParams,
) -> Result<GraspPlan> {
    let phi = closure_phi(object, params, gparams)?;
    let with_context = |source| GraspError::Calibration {
        context: format!("closure at phi = {phi} rad"),
        source,
    };
    let (command, stiffness) = match target {
        GraspTarget::Stiffness(k) => {
            let command = grid.inverse_command(phi, k).map_err(with_context)?;
            let stiffness = grid
                .stiffness_from_target(phi, command.p1)
                .map_err(with_context)?;
            (command, stiffness)
        }
        GraspTarget::P1(p1) => {
            let p2 = grid.command_from_target(phi, p1).map_err(with_context)?;
            let stiffness = grid.stiffness_from_target(phi, p1).map_err(with_context)?;
            (PressureCommand { p1, p2 }, stiffness)
        }
    };
    let aperture = radial(phi, params, gparams)?;
    Ok(GraspPlan {
        phi,
        stiffness,
        command,
        aperture,
    })
}
