//! Run configuration: command-line flags over an optional TOML file over
//! built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use softgrip::{CalibrationGrid, FingerParams, GripperParams, HullPolicy};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML configuration file
    #[arg(long, global = true, env = "SOFTGRIP_CONFIG")]
    pub config: Option<PathBuf>,
    /// Calibration CSV (defaults to the bundled table)
    #[arg(long, global = true)]
    pub calibration: Option<PathBuf>,
    /// Output format; plain text when omitted
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Clamp out-of-hull calibration queries to the hull boundary
    #[arg(long, global = true)]
    pub clamp: bool,
    /// Finger arc length (m)
    #[arg(long, global = true)]
    pub arc_length: Option<f64>,
    /// Radial offset of the stiffness PMA (m)
    #[arg(long, global = true)]
    pub actuator_radius: Option<f64>,
    /// Largest admissible bend angle (rad)
    #[arg(long, global = true)]
    pub phi_max: Option<f64>,
    /// Base offset along Z before mounting (m)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub base_offset: Option<f64>,
    /// Finger mount angle about Y (rad)
    #[arg(long, global = true)]
    pub mount_angle: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    arc_length_m: Option<f64>,
    actuator_radius_m: Option<f64>,
    phi_max_rad: Option<f64>,
    pressure_min_bar: Option<f64>,
    pressure_max_bar: Option<f64>,
    base_offset_m: Option<f64>,
    mount_angle_rad: Option<f64>,
    calibration: Option<PathBuf>,
    format: Option<Format>,
    clamp: Option<bool>,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let mut file: ConfigFile = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        // calibration paths are relative to the config file
        if let (Some(cal), Some(dir)) = (&file.calibration, path.parent()) {
            if cal.is_relative() {
                file.calibration = Some(dir.join(cal));
            }
        }
        Ok(file)
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub finger: FingerParams,
    pub gripper: GripperParams,
    pub calibration: Option<PathBuf>,
    pub format: Option<Format>,
    pub hull: HullPolicy,
}

impl Config {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let defaults = FingerParams::default();
        let finger = FingerParams {
            arc_length: args
                .arc_length
                .or(file.arc_length_m)
                .unwrap_or(defaults.arc_length),
            actuator_radius: args
                .actuator_radius
                .or(file.actuator_radius_m)
                .unwrap_or(defaults.actuator_radius),
            phi_max: args.phi_max.or(file.phi_max_rad).unwrap_or(defaults.phi_max),
            pressure_min: file.pressure_min_bar.unwrap_or(defaults.pressure_min),
            pressure_max: file.pressure_max_bar.unwrap_or(defaults.pressure_max),
        };
        let gdefaults = GripperParams::default();
        let gripper = GripperParams {
            base_offset: args
                .base_offset
                .or(file.base_offset_m)
                .unwrap_or(gdefaults.base_offset),
            mount_angle: args
                .mount_angle
                .or(file.mount_angle_rad)
                .unwrap_or(gdefaults.mount_angle),
        };
        finger.validate()?;
        gripper.validate()?;

        let calibration = args.calibration.clone().or(file.calibration);
        if let Some(path) = &calibration {
            if !path.is_file() {
                return Err(CliError::config(format!(
                    "calibration file {} does not exist",
                    path.display()
                )));
            }
        }
        let clamp = args.clamp || file.clamp.unwrap_or(false);
        Ok(Self {
            finger,
            gripper,
            calibration,
            format: args.format.or(file.format),
            hull: if clamp {
                HullPolicy::Clamp
            } else {
                HullPolicy::Strict
            },
        })
    }

    pub fn grid(&self) -> Result<CalibrationGrid, CliError> {
        match &self.calibration {
            Some(path) => Ok(softgrip::load_grid(path)?),
            None => Ok(CalibrationGrid::bundled()),
        }
    }
}
