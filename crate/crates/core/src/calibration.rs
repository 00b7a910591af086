//! Empirical pressure ↔ shape ↔ stiffness map of a finger.
//!
//! The map is a rectilinear grid over bend angle `phi` (rad) and stiffness-PMA
//! pressure `p1` (bar). Each node stores the bending-pair pressure `p2` (bar)
//! that holds the finger at `phi`, and the bending stiffness `k` (Nm/rad)
//! measured there. Values are kept in exactly these units; nothing is
//! converted internally.
//!
//! Queries interpolate bilinearly and never extrapolate. Inverse queries rely
//! on the grid's monotonicity (validated at load) and solve by bisection.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kinematics::FingerParams;
use crate::solve::{bisect_increasing, BisectFailure};

/// Header line of the calibration CSV format.
pub const CSV_HEADER: [&str; 4] = ["phi_rad", "p1_bar", "p2_bar", "k_nm_per_rad"];

/// Bundled finger calibration (16 nodes, φ ∈ {0.4, 0.6, 0.8, 1.0} rad,
/// P1 ∈ {0.50, 0.75, 1.00, 1.25} bar).
pub const BUNDLED_TABLE: &str = include_str!("../data/table1.csv");

/// Bracket width at which inverse solves stop, in rad for φ and bar for P1.
pub const SOLVE_TOLERANCE: f64 = 1e-9;

/// Smallest |Δφ| accepted when estimating stiffness.
pub const MIN_DELTA_PHI: f64 = 1e-12;

/// Fraction of its length a PMA extends per bar in the idealized linear
/// model: 50 % extension at 7 bar.
pub const LINEAR_EXTENSION_PER_BAR: f64 = 0.5 / 7.0;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{quantity} = {value} is outside the calibrated hull{context}; achievable band [{min}, {max}]")]
    OutOfHull {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
        context: String,
    },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CalibrationError>;

/// What to do with a query that falls outside the calibrated hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HullPolicy {
    #[default]
    Strict,
    /// Move the query onto the nearest hull boundary.
    Clamp,
}

impl HullPolicy {
    pub fn resolve(self, value: f64, (min, max): (f64, f64)) -> f64 {
        match self {
            HullPolicy::Strict => value,
            HullPolicy::Clamp => value.clamp(min, max),
        }
    }
}

/// Stiffness-PMA pressure `p1` and shared bending-pair pressure `p2`, in bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureCommand {
    pub p1: f64,
    pub p2: f64,
}

impl PressureCommand {
    /// Checks the supply range and the gripping condition `p1 <= p2`.
    pub fn validate(&self, params: &FingerParams) -> Result<()> {
        for (name, p) in [("P1", self.p1), ("P2", self.p2)] {
            if !(p >= params.pressure_min && p <= params.pressure_max) {
                return Err(CalibrationError::Validation(format!(
                    "{name} = {p} bar is outside [{}, {}] bar",
                    params.pressure_min, params.pressure_max
                )));
            }
        }
        if self.p1 > self.p2 {
            return Err(CalibrationError::Validation(format!(
                "P1 = {} bar exceeds P2 = {} bar; gripping requires P1 <= P2",
                self.p1, self.p2
            )));
        }
        Ok(())
    }
}

/// One stiffness measurement, `k = Δτ / Δφ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessSample {
    pub delta_tau: f64,
    pub delta_phi: f64,
    pub k: f64,
}

impl StiffnessSample {
    pub fn measure(delta_tau: f64, delta_phi: f64) -> Result<Self> {
        Ok(Self {
            delta_tau,
            delta_phi,
            k: estimate_stiffness(delta_tau, delta_phi)?,
        })
    }
}

/// Bending stiffness from a torque perturbation and the bend it caused.
pub fn estimate_stiffness(delta_tau: f64, delta_phi: f64) -> Result<f64> {
    if !(delta_phi.abs() >= MIN_DELTA_PHI) {
        return Err(CalibrationError::DegenerateInput(format!(
            "|Δφ| = {} rad is below {MIN_DELTA_PHI}",
            delta_phi.abs()
        )));
    }
    Ok(delta_tau / delta_phi)
}

struct Cell(f64, f64);

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell (phi={}, p1={})", self.0, self.1)
    }
}

/// Dense `(phi, p1) -> (p2, k)` grid, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationGrid {
    phi_knots: Vec<f64>,
    p1_knots: Vec<f64>,
    // row-major, indexed [phi][p1]
    p2: Vec<f64>,
    k: Vec<f64>,
}

fn check_knots(name: &str, knots: &[f64]) -> Result<()> {
    if knots.len() < 2 {
        return Err(CalibrationError::Validation(format!(
            "{name} needs at least 2 knots, got {}",
            knots.len()
        )));
    }
    if let Some(bad) = knots.iter().find(|v| !v.is_finite()) {
        return Err(CalibrationError::Validation(format!(
            "{name} knot {bad} is not finite"
        )));
    }
    if let Some(w) = knots.windows(2).find(|w| w[0] >= w[1]) {
        return Err(CalibrationError::Validation(format!(
            "{name} knots are not strictly ascending at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

// Cell index `i` and fraction `t` with knots[i] <= x <= knots[i + 1].
fn locate(knots: &[f64], x: f64) -> (usize, f64) {
    let n = knots.len();
    let i = knots.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
    let t = (x - knots[i]) / (knots[i + 1] - knots[i]);
    (i, t)
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    (1.0 - t) * a + t * b
}

fn span(knots: &[f64]) -> (f64, f64) {
    (knots[0], knots[knots.len() - 1])
}

impl CalibrationGrid {
    /// Builds and validates a grid from matrices indexed `[phi][p1]`.
    pub fn new(
        phi_knots: Vec<f64>,
        p1_knots: Vec<f64>,
        p2: Vec<Vec<f64>>,
        k: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_knots("phi", &phi_knots)?;
        check_knots("p1", &p1_knots)?;
        let (rows, cols) = (phi_knots.len(), p1_knots.len());
        for (name, m) in [("p2", &p2), ("k", &k)] {
            if m.len() != rows || m.iter().any(|row| row.len() != cols) {
                return Err(CalibrationError::Validation(format!(
                    "{name} matrix is not {rows}x{cols}"
                )));
            }
        }
        let grid = Self {
            phi_knots,
            p1_knots,
            p2: p2.into_iter().flatten().collect(),
            k: k.into_iter().flatten().collect(),
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        let (rows, cols) = (self.phi_knots.len(), self.p1_knots.len());
        for i in 0..rows {
            for j in 0..cols {
                let cell = self.cell(i, j);
                for (name, v) in [("p2", self.p2_node(i, j)), ("k", self.k_node(i, j))] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(CalibrationError::Validation(format!(
                            "{cell}: {name} = {v} must be positive"
                        )));
                    }
                }
                if i > 0 {
                    if self.p2_node(i, j) <= self.p2_node(i - 1, j) {
                        return Err(CalibrationError::Validation(format!(
                            "{cell}: p2 must increase with phi ({} -> {})",
                            self.p2_node(i - 1, j),
                            self.p2_node(i, j)
                        )));
                    }
                    if self.k_node(i, j) <= self.k_node(i - 1, j) {
                        return Err(CalibrationError::Validation(format!(
                            "{cell}: k must increase with phi ({} -> {})",
                            self.k_node(i - 1, j),
                            self.k_node(i, j)
                        )));
                    }
                }
                if j > 0 && self.k_node(i, j) <= self.k_node(i, j - 1) {
                    return Err(CalibrationError::Validation(format!(
                        "{cell}: k must increase with p1 ({} -> {})",
                        self.k_node(i, j - 1),
                        self.k_node(i, j)
                    )));
                }
            }
        }
        Ok(())
    }

    fn cell(&self, i: usize, j: usize) -> Cell {
        Cell(self.phi_knots[i], self.p1_knots[j])
    }

    /// The bundled default calibration.
    pub fn bundled() -> Self {
        Self::from_csv_str(BUNDLED_TABLE).expect("bundled calibration table is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| CalibrationError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::from_csv_reader(text.as_bytes())
    }

    /// Parses the calibration CSV. Rows may come in any order.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers().map_err(parse_error)?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(CalibrationError::Parse {
                line: header.position().map_or(1, |p| p.line()),
                message: format!(
                    "expected header `{}`, found `{}`",
                    CSV_HEADER.join(","),
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }

        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(parse_error)?;
            let line = record.position().map_or(0, |p| p.line());
            let mut values = [0.0; 4];
            for (slot, (field, name)) in values.iter_mut().zip(record.iter().zip(CSV_HEADER)) {
                *slot = field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CalibrationError::Parse {
                        line,
                        message: format!("{name} `{field}` is not a finite number"),
                    })?;
            }
            rows.push(values);
        }
        Self::from_rows(&rows)
    }

    /// Assembles a grid from `[phi, p1, p2, k]` rows in any order.
    pub fn from_rows(rows: &[[f64; 4]]) -> Result<Self> {
        let knots = |col: usize| {
            let mut v: Vec<f64> = rows.iter().map(|r| r[col]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let phi_knots = knots(0);
        let p1_knots = knots(1);
        check_knots("phi", &phi_knots)?;
        check_knots("p1", &p1_knots)?;

        let cols = p1_knots.len();
        let mut slots: Vec<Option<(f64, f64)>> = vec![None; phi_knots.len() * cols];
        for &[phi, p1, p2, k] in rows {
            let i = phi_knots.partition_point(|&v| v < phi);
            let j = p1_knots.partition_point(|&v| v < p1);
            let slot = &mut slots[i * cols + j];
            if slot.is_some() {
                return Err(CalibrationError::Validation(format!(
                    "duplicate {}",
                    Cell(phi, p1)
                )));
            }
            *slot = Some((p2, k));
        }

        let mut p2 = Vec::with_capacity(slots.len());
        let mut k = Vec::with_capacity(slots.len());
        for (idx, slot) in slots.iter().enumerate() {
            let Some((p2v, kv)) = slot else {
                return Err(CalibrationError::Validation(format!(
                    "missing {}",
                    Cell(phi_knots[idx / cols], p1_knots[idx % cols])
                )));
            };
            p2.push(*p2v);
            k.push(*kv);
        }
        let grid = Self {
            phi_knots,
            p1_knots,
            p2,
            k,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Serializes to the calibration CSV, rows ordered by `phi` then `p1`.
    pub fn to_csv_string(&self) -> String {
        let mut out = CSV_HEADER.join(",");
        out.push('\n');
        for (i, phi) in self.phi_knots.iter().enumerate() {
            for (j, p1) in self.p1_knots.iter().enumerate() {
                out.push_str(&format!(
                    "{phi},{p1},{},{}\n",
                    self.p2_node(i, j),
                    self.k_node(i, j)
                ));
            }
        }
        out
    }

    pub fn phi_knots(&self) -> &[f64] {
        &self.phi_knots
    }

    pub fn p1_knots(&self) -> &[f64] {
        &self.p1_knots
    }

    pub fn p2_node(&self, phi_index: usize, p1_index: usize) -> f64 {
        self.p2[phi_index * self.p1_knots.len() + p1_index]
    }

    pub fn k_node(&self, phi_index: usize, p1_index: usize) -> f64 {
        self.k[phi_index * self.p1_knots.len() + p1_index]
    }

    pub fn phi_range(&self) -> (f64, f64) {
        span(&self.phi_knots)
    }

    pub fn p1_range(&self) -> (f64, f64) {
        span(&self.p1_knots)
    }

    fn check_phi(&self, phi: f64) -> Result<()> {
        let (min, max) = self.phi_range();
        if phi >= min && phi <= max {
            Ok(())
        } else {
            Err(CalibrationError::OutOfHull {
                quantity: "phi",
                value: phi,
                min,
                max,
                context: String::new(),
            })
        }
    }

    fn check_p1(&self, p1: f64) -> Result<()> {
        let (min, max) = self.p1_range();
        if p1 >= min && p1 <= max {
            Ok(())
        } else {
            Err(CalibrationError::OutOfHull {
                quantity: "P1",
                value: p1,
                min,
                max,
                context: String::new(),
            })
        }
    }

    fn interpolate(&self, values: &[f64], phi: f64, p1: f64) -> Result<f64> {
        self.check_phi(phi)?;
        self.check_p1(p1)?;
        let (i, s) = locate(&self.phi_knots, phi);
        let (j, t) = locate(&self.p1_knots, p1);
        let cols = self.p1_knots.len();
        let at = |a: usize, b: usize| values[a * cols + b];
        let lower = lerp(at(i, j), at(i, j + 1), t);
        let upper = lerp(at(i + 1, j), at(i + 1, j + 1), t);
        Ok(lerp(lower, upper, s))
    }

    /// Bending-pair pressure that holds `phi` when the stiffness PMA is at `p1`.
    pub fn command_from_target(&self, phi: f64, p1: f64) -> Result<f64> {
        self.interpolate(&self.p2, phi, p1)
    }

    /// Bending stiffness at `(phi, p1)`.
    pub fn stiffness_from_target(&self, phi: f64, p1: f64) -> Result<f64> {
        self.interpolate(&self.k, phi, p1)
    }

    /// Range of `p2` reachable at `p1` across the calibrated bend angles.
    pub fn p2_band(&self, p1: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.phi_range();
        Ok((
            self.command_from_target(lo, p1)?,
            self.command_from_target(hi, p1)?,
        ))
    }

    /// Range of stiffness reachable at `phi` across the calibrated `p1`.
    pub fn stiffness_band(&self, phi: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.p1_range();
        Ok((
            self.stiffness_from_target(phi, lo)?,
            self.stiffness_from_target(phi, hi)?,
        ))
    }

    /// Bend angle produced by the pressure pair `(p1, p2)`.
    pub fn shape_from_pressures(&self, p1: f64, p2: f64) -> Result<f64> {
        let (min, max) = self.p2_band(p1)?;
        let (lo, hi) = self.phi_range();
        bisect_increasing(
            |phi| self.interpolate(&self.p2, phi, p1).unwrap_or(f64::NAN),
            p2,
            lo,
            hi,
            SOLVE_TOLERANCE,
        )
        .map_err(|e| match e {
            BisectFailure::NotBracketed(..) => CalibrationError::OutOfHull {
                quantity: "P2",
                value: p2,
                min,
                max,
                context: format!(" at P1 = {p1} bar"),
            },
            BisectFailure::NoConvergence => {
                CalibrationError::Internal(format!("shape solve did not converge at ({p1}, {p2})"))
            }
        })
    }

    /// Pressure pair holding the finger at `phi` with bending stiffness `k`.
    pub fn inverse_command(&self, phi: f64, k: f64) -> Result<PressureCommand> {
        let (min, max) = self.stiffness_band(phi)?;
        let (lo, hi) = self.p1_range();
        let p1 = bisect_increasing(
            |p1| self.interpolate(&self.k, phi, p1).unwrap_or(f64::NAN),
            k,
            lo,
            hi,
            SOLVE_TOLERANCE,
        )
        .map_err(|e| match e {
            BisectFailure::NotBracketed(..) => CalibrationError::OutOfHull {
                quantity: "stiffness",
                value: k,
                min,
                max,
                context: format!(" at phi = {phi} rad"),
            },
            BisectFailure::NoConvergence => {
                CalibrationError::Internal(format!("stiffness solve did not converge at ({phi}, {k})"))
            }
        })?;
        Ok(PressureCommand {
            p1,
            p2: self.command_from_target(phi, p1)?,
        })
    }

    /// Pressure pairs along the iso-`phi` curve at the given `p1` samples.
    pub fn iso_phi_curve(&self, phi: f64, p1_samples: &[f64]) -> Result<Vec<PressureCommand>> {
        p1_samples
            .iter()
            .map(|&p1| {
                Ok(PressureCommand {
                    p1,
                    p2: self.command_from_target(phi, p1)?,
                })
            })
            .collect()
    }
}

/// Reads and validates a calibration CSV file.
pub fn load_grid(path: impl AsRef<Path>) -> Result<CalibrationGrid> {
    CalibrationGrid::from_path(path)
}

fn parse_error(err: csv::Error) -> CalibrationError {
    let line = err.position().map_or(0, |p| p.line());
    CalibrationError::Parse {
        line,
        message: err.to_string(),
    }
}

/// Grid from the idealized model in which each PMA's length change is
/// proportional to its pressure, `l = c·P` with `c = L·LINEAR_EXTENSION_PER_BAR`.
///
/// Bending follows the bundled pair, `φ = 2·c·P2 / r`, so `P2 = r·φ / (2c)`
/// regardless of `P1`. Stiffness is taken proportional to the common-mode
/// pressure, `k = stiffness_per_bar · (P1 + 2·P2)`.
pub fn synthetic_linear_grid(
    params: &FingerParams,
    phi_knots: &[f64],
    p1_knots: &[f64],
    stiffness_per_bar: f64,
) -> Result<CalibrationGrid> {
    params
        .validate()
        .map_err(|e| CalibrationError::Validation(e.to_string()))?;
    if !(stiffness_per_bar > 0.0) {
        return Err(CalibrationError::Validation(format!(
            "stiffness per bar must be positive, got {stiffness_per_bar}"
        )));
    }
    let c = params.arc_length * LINEAR_EXTENSION_PER_BAR;
    let r = params.actuator_radius;
    let mut p2 = Vec::with_capacity(phi_knots.len());
    let mut k = Vec::with_capacity(phi_knots.len());
    for &phi in phi_knots {
        let pair = r * phi / (2.0 * c);
        p2.push(vec![pair; p1_knots.len()]);
        k.push(
            p1_knots
                .iter()
                .map(|&p1| stiffness_per_bar * (p1 + 2.0 * pair))
                .collect(),
        );
    }
    CalibrationGrid::new(phi_knots.to_vec(), p1_knots.to_vec(), p2, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> CalibrationGrid {
        CalibrationGrid::bundled()
    }

    #[test]
    fn bundled_grid_shape_and_corners() {
        let g = grid();
        assert_eq!(g.phi_knots(), &[0.4, 0.6, 0.8, 1.0]);
        assert_eq!(g.p1_knots(), &[0.5, 0.75, 1.0, 1.25]);
        assert_eq!(g.p2_node(0, 0), 1.86);
        assert_eq!(g.k_node(3, 3), 2.58);
    }

    #[test]
    fn command_from_target_examples() {
        let g = grid();
        assert_eq!(g.command_from_target(0.8, 1.00).unwrap(), 2.52);
        assert_abs_diff_eq!(g.command_from_target(0.5, 0.50).unwrap(), 1.985, epsilon = 1e-12);
        assert_eq!(g.command_from_target(0.4, 1.25).unwrap(), 2.09);
        assert!(matches!(
            g.command_from_target(1.1, 0.5),
            Err(CalibrationError::OutOfHull { quantity: "phi", .. })
        ));
        assert!(matches!(
            g.command_from_target(0.5, 0.2),
            Err(CalibrationError::OutOfHull { quantity: "P1", .. })
        ));
    }

    #[test]
    fn stiffness_from_target_examples() {
        let g = grid();
        assert_eq!(g.stiffness_from_target(0.6, 1.00).unwrap(), 1.40);
        assert_eq!(g.stiffness_from_target(1.0, 0.50).unwrap(), 1.56);
        assert_abs_diff_eq!(g.stiffness_from_target(0.7, 0.75).unwrap(), 1.135, epsilon = 1e-12);
    }

    #[test]
    fn shape_from_pressures_examples() {
        let g = grid();
        assert_eq!(g.shape_from_pressures(0.50, 1.86).unwrap(), 0.4);
        assert_abs_diff_eq!(g.shape_from_pressures(0.50, 1.985).unwrap(), 0.5, epsilon = 1e-9);
        let err = g.shape_from_pressures(0.50, 3.50).unwrap_err();
        assert!(matches!(err, CalibrationError::OutOfHull { quantity: "P2", max, .. } if max == 2.60));
    }

    #[test]
    fn inverse_command_examples() {
        let g = grid();
        let c = g.inverse_command(0.8, 1.90).unwrap();
        assert_abs_diff_eq!(c.p1, 1.00, epsilon = 1e-9);
        assert_abs_diff_eq!(c.p2, 2.52, epsilon = 1e-9);

        let c = g.inverse_command(0.4, 0.63).unwrap();
        assert_eq!((c.p1, c.p2), (0.50, 1.86));

        let c = g.inverse_command(0.6, 1.125).unwrap();
        assert_abs_diff_eq!(c.p1, 0.875, epsilon = 1e-9);
        assert_abs_diff_eq!(c.p2, 2.205, epsilon = 1e-9);
    }

    #[test]
    fn inverse_command_reports_band() {
        let err = grid().inverse_command(0.8, 9.9).unwrap_err();
        match &err {
            CalibrationError::OutOfHull { min, max, .. } => {
                assert_eq!((*min, *max), (0.86, 2.18));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("[0.86, 2.18]"));
    }

    #[test]
    fn iso_phi_curve_examples() {
        let g = grid();
        let curve = g.iso_phi_curve(1.0, g.p1_knots()).unwrap();
        let p2: Vec<f64> = curve.iter().map(|c| c.p2).collect();
        assert_eq!(p2, vec![2.60, 2.68, 2.80, 2.98]);
        assert_eq!(
            g.iso_phi_curve(0.4, &[0.75]).unwrap(),
            vec![PressureCommand { p1: 0.75, p2: 1.90 }]
        );
        assert!(g.iso_phi_curve(0.7, &[]).unwrap().is_empty());
        assert!(g.iso_phi_curve(0.7, &[0.6, 2.0]).is_err());
    }

    #[test]
    fn estimate_stiffness_examples() {
        assert_abs_diff_eq!(estimate_stiffness(0.063, 0.1).unwrap(), 0.63, epsilon = 1e-15);
        assert_eq!(estimate_stiffness(0.0, 0.1).unwrap(), 0.0);
        assert!(matches!(
            estimate_stiffness(0.1, 0.0),
            Err(CalibrationError::DegenerateInput(_))
        ));
        let s = StiffnessSample::measure(-0.02, -0.04).unwrap();
        assert_abs_diff_eq!(s.k, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn shuffled_rows_give_identical_grid() {
        let mut lines: Vec<&str> = BUNDLED_TABLE
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("phi_rad"))
            .collect();
        lines.reverse();
        lines.swap(2, 9);
        let text = format!("{}\n{}\n", CSV_HEADER.join(","), lines.join("\n"));
        assert_eq!(CalibrationGrid::from_csv_str(&text).unwrap(), grid());
    }

    #[test]
    fn missing_cell_is_named() {
        let text: String = BUNDLED_TABLE
            .lines()
            .filter(|l| !l.starts_with("0.8,1.00"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = CalibrationGrid::from_csv_str(&text).unwrap_err();
        assert!(matches!(err, CalibrationError::Validation(_)));
        assert!(err.to_string().contains("phi=0.8, p1=1)"), "{err}");
    }

    #[test]
    fn duplicate_cell_is_rejected() {
        let text = format!("{BUNDLED_TABLE}0.4,0.50,1.86,0.63\n");
        let err = CalibrationGrid::from_csv_str(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate cell (phi=0.4, p1=0.5)"), "{err}");
    }

    #[test]
    fn monotonicity_violation_is_named() {
        let text = BUNDLED_TABLE.replace("0.6,1.00,2.24,1.40", "0.6,1.00,2.24,0.80");
        let err = CalibrationGrid::from_csv_str(&text).unwrap_err();
        assert!(err.to_string().contains("cell (phi=0.6, p1=1)"), "{err}");
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        let bad_number = BUNDLED_TABLE.replace("0.8,0.75,2.42,1.42", "0.8,0.75,two,1.42");
        assert!(matches!(
            CalibrationGrid::from_csv_str(&bad_number),
            Err(CalibrationError::Parse { line: 13, .. })
        ));
        let short_row = BUNDLED_TABLE.replace("0.8,0.75,2.42,1.42", "0.8,0.75,2.42");
        assert!(matches!(
            CalibrationGrid::from_csv_str(&short_row),
            Err(CalibrationError::Parse { .. })
        ));
        assert!(matches!(
            CalibrationGrid::from_csv_str("phi,p1,p2,k\n0.4,0.5,1.0,1.0\n"),
            Err(CalibrationError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn constructor_rejects_bad_knots() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 3.0]];
        assert!(CalibrationGrid::new(vec![0.5, 0.4], vec![0.1, 0.2], m.clone(), m.clone()).is_err());
        assert!(CalibrationGrid::new(vec![0.4, 0.5], vec![0.1], m.clone(), m.clone()).is_err());
        assert!(CalibrationGrid::new(vec![0.4, 0.5], vec![0.1, 0.2], m.clone(), m).is_ok());
    }

    #[test]
    fn serialization_round_trip() {
        let g = grid();
        let again = CalibrationGrid::from_csv_str(&g.to_csv_string()).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.to_csv_string(), g.to_csv_string());
    }

    #[test]
    fn clamp_policy() {
        let g = grid();
        let phi = HullPolicy::Clamp.resolve(1.3, g.phi_range());
        assert_eq!(phi, 1.0);
        assert_eq!(HullPolicy::Strict.resolve(1.3, g.phi_range()), 1.3);
    }

    #[test]
    fn pressure_command_validation() {
        let p = FingerParams::default();
        assert!(PressureCommand { p1: 1.0, p2: 2.52 }.validate(&p).is_ok());
        assert!(PressureCommand { p1: 2.0, p2: 1.0 }.validate(&p).is_err());
        assert!(PressureCommand { p1: 1.0, p2: 8.0 }.validate(&p).is_err());
        assert!(PressureCommand { p1: -0.1, p2: 1.0 }.validate(&p).is_err());
    }

    #[test]
    fn synthetic_grid_inverts_linear_model() {
        let p = FingerParams::default();
        let g = synthetic_linear_grid(&p, &[0.2, 0.6, 1.0, 1.4], &[0.1, 0.2, 0.3], 0.8).unwrap();
        let c = p.arc_length * LINEAR_EXTENSION_PER_BAR;
        for p2 in [0.15, 0.4, 0.7] {
            let phi = g.shape_from_pressures(0.2, p2).unwrap();
            assert_abs_diff_eq!(phi, 2.0 * c * p2 / p.actuator_radius, epsilon = 1e-9);
        }
        let cmd = g.inverse_command(0.6, g.stiffness_from_target(0.6, 0.25).unwrap()).unwrap();
        assert_abs_diff_eq!(cmd.p1, 0.25, epsilon = 1e-9);
    }
}
