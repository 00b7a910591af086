use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use softgrip::grasp::closure_phi;
use softgrip::kinematics::{gripper_finger_transform, sample_workspace};
use softgrip::{
    CalibrationGrid, CurveParams, GraspObject, GraspTarget, PressureCommand, RigidTransform,
};

use crate::config::{Config, Format};
use crate::error::CliError;
use crate::render::{coord, json_num, json_vec, qty, svg_polylines, FINGER_COLORS};

const BACKBONE_SAMPLES: usize = 41;

enum Tabular {
    Text,
    Csv,
    Json,
}

fn tabular(cfg: &Config, command: &str) -> Result<Tabular, CliError> {
    match cfg.format {
        None => Ok(Tabular::Text),
        Some(Format::Csv) => Ok(Tabular::Csv),
        Some(Format::Json) => Ok(Tabular::Json),
        Some(Format::Svg) => Err(CliError::usage(format!(
            "svg output is only available for fk and workspace, not {command}"
        ))),
    }
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn target(p1: Option<f64>, stiffness: Option<f64>) -> GraspTarget {
    match (p1, stiffness) {
        (_, Some(k)) => GraspTarget::Stiffness(k),
        (Some(p1), None) => GraspTarget::P1(p1),
        (None, None) => unreachable!("clap requires one target"),
    }
}

fn curve(cfg: &Config, phi: f64) -> Result<CurveParams, CliError> {
    let max = cfg.finger.phi_max;
    if !(phi >= 0.0 && phi <= max) {
        return Err(CliError::new(
            "out_of_range",
            format!("phi = {phi} rad is outside [0, {max}]; the finger model admits φ ∈ (0, π)"),
        ));
    }
    Ok(CurveParams::new(phi, &cfg.finger)?)
}

fn pose_json(t: &RigidTransform) -> Value {
    let rows: Vec<Value> = (0..3)
        .map(|i| json_vec(&[t.rotation[(i, 0)], t.rotation[(i, 1)], t.rotation[(i, 2)]]))
        .collect();
    json!({
        "position": json_vec(t.position.as_slice()),
        "rotation": rows,
    })
}

pub fn fk(cfg: &Config, phi: f64, xi: f64) -> Result<String, CliError> {
    let c = curve(cfg, phi)?;
    if cfg.format == Some(Format::Svg) {
        let mut lines = Vec::new();
        for (finger, color) in (1..=3).zip(FINGER_COLORS) {
            let pts = (0..BACKBONE_SAMPLES)
                .map(|i| {
                    let s = xi * i as f64 / (BACKBONE_SAMPLES - 1) as f64;
                    let p = gripper_finger_transform(finger, &c, s, &cfg.gripper)?.position;
                    Ok([p.x, p.z])
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            lines.push((color, pts));
        }
        return Ok(svg_polylines(&lines, &format!("fingers at phi = {phi} rad")));
    }

    let poses = (1..=3)
        .map(|i| gripper_finger_transform(i, &c, xi, &cfg.gripper))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    match tabular(cfg, "fk")? {
        Tabular::Text => {
            let _ = writeln!(out, "phi={} xi={}", qty(phi), qty(xi));
            for (i, t) in poses.iter().enumerate() {
                let p = t.position;
                let _ = writeln!(
                    out,
                    "finger_{} position=[{}, {}, {}] radial={}",
                    i + 1,
                    coord(p.x),
                    coord(p.y),
                    coord(p.z),
                    coord(p.x.hypot(p.y))
                );
            }
        }
        Tabular::Csv => {
            out.push_str("finger,phi_rad,xi,x_m,y_m,z_m,r11,r12,r13,r21,r22,r23,r31,r32,r33\n");
            for (i, t) in poses.iter().enumerate() {
                let p = t.position;
                let _ = write!(out, "{},{phi},{xi},{},{},{}", i + 1, p.x, p.y, p.z);
                for r in 0..3 {
                    for col in 0..3 {
                        let _ = write!(out, ",{}", t.rotation[(r, col)]);
                    }
                }
                out.push('\n');
            }
        }
        Tabular::Json => {
            let mut map = Map::new();
            map.insert("phi".into(), json_num(phi));
            map.insert("xi".into(), json_num(xi));
            for (i, t) in poses.iter().enumerate() {
                map.insert(format!("finger_{}", i + 1), pose_json(t));
            }
            out = json_text(&Value::Object(map));
        }
    }
    Ok(out)
}

fn command_report(
    cfg: &Config,
    name: &str,
    phi: f64,
    cmd: PressureCommand,
    k: f64,
) -> Result<String, CliError> {
    Ok(match tabular(cfg, name)? {
        Tabular::Text => format!(
            "phi={} P1={} P2={} K={}\n",
            qty(phi),
            qty(cmd.p1),
            qty(cmd.p2),
            qty(k)
        ),
        Tabular::Csv => format!(
            "phi_rad,p1_bar,p2_bar,k_nm_per_rad\n{phi},{},{},{k}\n",
            cmd.p1, cmd.p2
        ),
        Tabular::Json => json_text(&json!({
            "phi_rad": json_num(phi),
            "p1_bar": json_num(cmd.p1),
            "p2_bar": json_num(cmd.p2),
            "k_nm_per_rad": json_num(k),
        })),
    })
}

// Pressures for a target at a fixed bend angle, honouring the hull policy.
fn solve_target(
    cfg: &Config,
    grid: &CalibrationGrid,
    phi: f64,
    target: GraspTarget,
) -> Result<GraspTarget, CliError> {
    Ok(match target {
        GraspTarget::Stiffness(k) => {
            GraspTarget::Stiffness(cfg.hull.resolve(k, grid.stiffness_band(phi)?))
        }
        GraspTarget::P1(p1) => GraspTarget::P1(cfg.hull.resolve(p1, grid.p1_range())),
    })
}

pub fn command(cfg: &Config, phi: f64, target: GraspTarget) -> Result<String, CliError> {
    let grid = cfg.grid()?;
    let phi = cfg.hull.resolve(phi, grid.phi_range());
    let cmd = match solve_target(cfg, &grid, phi, target)? {
        GraspTarget::Stiffness(k) => grid.inverse_command(phi, k)?,
        GraspTarget::P1(p1) => PressureCommand {
            p1,
            p2: grid.command_from_target(phi, p1)?,
        },
    };
    cmd.validate(&cfg.finger)?;
    let k = grid.stiffness_from_target(phi, cmd.p1)?;
    command_report(cfg, "command", phi, cmd, k)
}

fn read_object(arg: &str) -> Result<GraspObject, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| CliError::new("io", format!("cannot read object file {arg}: {e}")))?
    };
    Ok(GraspObject::from_json(&text)?)
}

pub fn grasp(cfg: &Config, object: &str, target: GraspTarget) -> Result<String, CliError> {
    let grid = cfg.grid()?;
    let object = read_object(object)?;
    let phi = closure_phi(&object, &cfg.finger, &cfg.gripper)?;
    let target = if grid.phi_range().0 <= phi && phi <= grid.phi_range().1 {
        solve_target(cfg, &grid, phi, target)?
    } else {
        target
    };
    let plan = softgrip::plan_grasp(&grid, &object, target, &cfg.finger, &cfg.gripper)?;
    plan.command.validate(&cfg.finger)?;
    let shape = serde_json::to_value(object.shape)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    Ok(match tabular(cfg, "grasp")? {
        Tabular::Text => format!(
            "shape={shape} radius={} phi={} P1={} P2={} K={} aperture={}\n",
            coord(object.characteristic_radius),
            qty(plan.phi),
            qty(plan.command.p1),
            qty(plan.command.p2),
            qty(plan.stiffness),
            coord(plan.aperture)
        ),
        Tabular::Csv => format!(
            "shape,radius_m,phi_rad,p1_bar,p2_bar,k_nm_per_rad,aperture_m\n{shape},{},{},{},{},{},{}\n",
            object.characteristic_radius,
            plan.phi,
            plan.command.p1,
            plan.command.p2,
            plan.stiffness,
            plan.aperture
        ),
        Tabular::Json => json_text(&json!({
            "object": {
                "shape": shape,
                "characteristic_radius_m": json_num(object.characteristic_radius),
                "mass_kg": json_num(object.mass),
            },
            "phi_rad": json_num(plan.phi),
            "stiffness_nm_per_rad": json_num(plan.stiffness),
            "command": {
                "p1_bar": json_num(plan.command.p1),
                "p2_bar": json_num(plan.command.p2),
            },
            "aperture_m": json_num(plan.aperture),
            "grip_security": [json_num(plan.phi), json_num(plan.stiffness)],
        })),
    })
}

pub fn workspace(cfg: &Config, n: usize) -> Result<String, CliError> {
    let samples = sample_workspace(&cfg.finger, &cfg.gripper, n)?;
    let mut out = String::new();
    match cfg.format {
        None | Some(Format::Csv) => {
            out.push_str("phi_rad");
            for f in 1..=3 {
                let _ = write!(out, ",f{f}_x_m,f{f}_y_m,f{f}_z_m");
            }
            out.push('\n');
            for s in &samples {
                let _ = write!(out, "{}", s.phi);
                for tip in &s.fingertips {
                    let _ = write!(out, ",{},{},{}", tip.x, tip.y, tip.z);
                }
                out.push('\n');
            }
        }
        Some(Format::Json) => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    json!({
                        "phi": json_num(s.phi),
                        "fingertips": s.fingertips.iter().map(|t| json_vec(t.as_slice())).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out = json_text(&Value::Array(rows));
        }
        Some(Format::Svg) => {
            let lines: Vec<(&str, Vec<[f64; 2]>)> = (0..3)
                .map(|f| {
                    let pts = samples
                        .iter()
                        .map(|s| [s.fingertips[f].x, s.fingertips[f].z])
                        .collect();
                    (FINGER_COLORS[f], pts)
                })
                .collect();
            out = svg_polylines(&lines, &format!("fingertip loci, {n} bend angles"));
        }
    }
    Ok(out)
}

pub fn calib_validate(cfg: &Config, path: Option<&Path>) -> Result<String, CliError> {
    let grid = match path {
        Some(p) => softgrip::load_grid(p)?,
        None => cfg.grid()?,
    };
    let (rows, cols) = (grid.phi_knots().len(), grid.p1_knots().len());
    let (phi_lo, phi_hi) = grid.phi_range();
    let (p1_lo, p1_hi) = grid.p1_range();
    Ok(format!(
        "ok: {rows} phi knots [{phi_lo}, {phi_hi}] rad x {cols} P1 knots [{p1_lo}, {p1_hi}] bar, {} cells\n",
        rows * cols
    ))
}

pub fn calib_iso(cfg: &Config, phi: f64, p1: &[f64]) -> Result<String, CliError> {
    let grid = cfg.grid()?;
    let phi = cfg.hull.resolve(phi, grid.phi_range());
    let samples: Vec<f64> = if p1.is_empty() {
        grid.p1_knots().to_vec()
    } else {
        p1.iter()
            .map(|&p| cfg.hull.resolve(p, grid.p1_range()))
            .collect()
    };
    let curve = grid.iso_phi_curve(phi, &samples)?;
    let ks = curve
        .iter()
        .map(|c| grid.stiffness_from_target(phi, c.p1))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    match tabular(cfg, "calib iso")? {
        Tabular::Text => {
            for (c, k) in curve.iter().zip(&ks) {
                let _ = writeln!(out, "P1={} P2={} K={}", qty(c.p1), qty(c.p2), qty(*k));
            }
        }
        Tabular::Csv => {
            out.push_str("phi_rad,p1_bar,p2_bar,k_nm_per_rad\n");
            for (c, k) in curve.iter().zip(&ks) {
                let _ = writeln!(out, "{phi},{},{},{k}", c.p1, c.p2);
            }
        }
        Tabular::Json => {
            let rows: Vec<Value> = curve
                .iter()
                .zip(&ks)
                .map(|(c, k)| {
                    json!({
                        "p1_bar": json_num(c.p1),
                        "p2_bar": json_num(c.p2),
                        "k_nm_per_rad": json_num(*k),
                    })
                })
                .collect();
            out = json_text(&json!({ "phi_rad": json_num(phi), "commands": rows }));
        }
    }
    Ok(out)
}

pub fn calib_invert(cfg: &Config, p1: f64, p2: f64) -> Result<String, CliError> {
    let grid = cfg.grid()?;
    let p1 = cfg.hull.resolve(p1, grid.p1_range());
    let p2 = cfg.hull.resolve(p2, grid.p2_band(p1)?);
    let phi = grid.shape_from_pressures(p1, p2)?;
    let k = grid.stiffness_from_target(phi, p1)?;
    command_report(cfg, "calib invert", phi, PressureCommand { p1, p2 }, k)
}
