//! Model of a tri-fingered, variable-stiffness soft gripper.
//!
//! - [`kinematics`]: constant-curvature fingers and the three-finger assembly.
//! - [`calibration`]: the measured `(phi, P1) -> (P2, K)` grid, its
//!   interpolants, and the inverse that turns a shape and stiffness target
//!   into a pressure command.
//! - [`grasp`]: fingertip closure on test objects and full grasp plans.

pub mod calibration;
pub mod grasp;
pub mod kinematics;
pub mod solve;

pub use calibration::{
    estimate_stiffness, load_grid, CalibrationError, CalibrationGrid, HullPolicy,
    PressureCommand, StiffnessSample,
};
pub use grasp::{
    closure_phi, plan_grasp, GraspError, GraspObject, GraspPlan, GraspTarget, GripSecurity,
    ObjectShape,
};
pub use kinematics::{
    curve_from_joints, finger_transform, fingertip_aperture, gripper_finger_transform,
    joints_from_phi, sample_workspace, Aperture, CurveParams, FingerParams, GripperParams,
    JointState, KinematicsError, RigidTransform, WorkspaceSample,
};
