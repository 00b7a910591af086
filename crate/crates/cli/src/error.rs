use std::fmt;

use softgrip::{CalibrationError, GraspError, KinematicsError};

/// A failure reported as `ERROR:<code>:<message>` on stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("usage", message)
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new("config", message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line: String = self
            .message
            .split('\n')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "ERROR:{}:{}", self.code, one_line)
    }
}

impl std::error::Error for CliError {}

impl From<KinematicsError> for CliError {
    fn from(e: KinematicsError) -> Self {
        let code = match e {
            KinematicsError::OutOfRange { .. } => "out_of_range",
            KinematicsError::InvalidParams(_) => "invalid_params",
            KinematicsError::InvalidIndex(_) => "invalid_index",
        };
        Self::new(code, e.to_string())
    }
}

fn calibration_code(e: &CalibrationError) -> &'static str {
    match e {
        CalibrationError::Io { .. } => "io",
        CalibrationError::Parse { .. } => "parse",
        CalibrationError::Validation(_) => "validation",
        CalibrationError::OutOfHull { .. } => "out_of_hull",
        CalibrationError::DegenerateInput(_) => "degenerate",
        CalibrationError::Internal(_) => "internal",
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        Self::new(calibration_code(&e), e.to_string())
    }
}

impl From<GraspError> for CliError {
    fn from(e: GraspError) -> Self {
        let code = match &e {
            GraspError::InvalidObject(_) => "invalid_object",
            GraspError::NoClosure(_) => "no_closure",
            GraspError::NotMonotone(_) => "not_monotone",
            GraspError::Kinematics(k) => return k.clone().into(),
            GraspError::Calibration { source, .. } => calibration_code(source),
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new("io", e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_is_single_line() {
        let e = CliError::new("parse", "line 3:\n  bad value");
        assert_eq!(e.to_string(), "ERROR:parse:line 3: bad value");
    }

    #[test]
    fn grasp_errors_keep_inner_codes() {
        let e: CliError = GraspError::Kinematics(KinematicsError::InvalidIndex(5)).into();
        assert_eq!(e.code, "invalid_index");
        let e: CliError = GraspError::Calibration {
            context: "closure".into(),
            source: CalibrationError::Validation("x".into()),
        }
        .into();
        assert_eq!(e.code, "validation");
    }
}
