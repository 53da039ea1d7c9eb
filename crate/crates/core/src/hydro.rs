//! 5-DOF rigid-body dynamics for a small neutrally buoyant vehicle.
//!
//! Surge, sway, heave, roll and yaw are actuated. Pitch is left to the
//! restoring moment from the centre of buoyancy sitting above the centre of
//! mass. World frame is NED, body frame is FRD, attitude is Z-Y-X Euler.
//! Added mass and Coriolis terms are not modelled.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3, SMatrix, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type WrenchMatrix = SMatrix<f64, 6, 6>;

pub const NEUTRAL_PWM: u16 = 1500;
pub const PWM_MIN: u16 = 1100;
pub const PWM_MAX: u16 = 1900;
pub const PWM_HALF_RANGE: f64 = 400.0;
pub const GRAVITY: f64 = 9.81;
/// Euler-angle attitude is only trusted inside this pitch envelope.
pub const PITCH_LIMIT: f64 = 60.0 * PI / 180.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HydroError {
    #[error("pwm {0} us outside [1100, 1900]")]
    OutOfRange(u16),
    #[error("state became non-finite at t={t:.3}s")]
    NonFiniteState { t: f64 },
    #[error("pitch {pitch_deg:.1} deg left the supported envelope at t={t:.3}s")]
    PitchEnvelope { t: f64, pitch_deg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    /// World NED, metres. `position.z` is depth.
    pub position: Vector3<f64>,
    /// Roll, pitch, yaw in radians.
    pub attitude: Vector3<f64>,
    /// Body-frame linear velocity (u, v, w), m/s.
    pub v_body: Vector3<f64>,
    /// Body-frame angular velocity (p, q, r), rad/s.
    pub w_body: Vector3<f64>,
    pub t: f64,
}

impl Default for VehicleState {
    fn default() -> Self {
        Self {
            position: Vector3::zeros(),
            attitude: Vector3::zeros(),
            v_body: Vector3::zeros(),
            w_body: Vector3::zeros(),
            t: 0.0,
        }
    }
}

impl VehicleState {
    pub fn at(position: Vector3<f64>, attitude: Vector3<f64>) -> Self {
        Self { position, attitude, ..Self::default() }
    }

    pub fn roll(&self) -> f64 {
        self.attitude.x
    }
    pub fn pitch(&self) -> f64 {
        self.attitude.y
    }
    pub fn yaw(&self) -> f64 {
        self.attitude.z
    }
    pub fn depth(&self) -> f64 {
        self.position.z
    }

    /// Body-to-world rotation.
    pub fn rotation(&self) -> Rotation3<f64> {
        Rotation3::from_euler_angles(self.attitude.x, self.attitude.y, self.attitude.z)
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|v| v.is_finite())
            && self.attitude.iter().all(|v| v.is_finite())
            && self.v_body.iter().all(|v| v.is_finite())
            && self.w_body.iter().all(|v| v.is_finite())
            && self.t.is_finite()
    }

    pub fn kinetic_energy(&self, params: &VehicleParams) -> f64 {
        let inertia = Vector3::from(params.inertia);
        0.5 * params.mass * self.v_body.norm_squared()
            + 0.5 * self.w_body.component_mul(&self.w_body).dot(&inertia)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VehicleParams {
    pub mass: f64,
    /// Principal moments about body x, y, z.
    pub inertia: [f64; 3],
    /// Upward buoyant force in newtons. `None` means neutral (mass * g).
    pub buoyancy: Option<f64>,
    /// Centre of buoyancy relative to the centre of mass, body FRD.
    pub cob: [f64; 3],
    /// Linear drag per axis: u, v, w (N*s/m) then p, q, r (N*m*s/rad).
    pub linear_drag: [f64; 6],
    /// Quadratic drag per axis, same ordering.
    pub quadratic_drag: [f64; 6],
    /// Thrust at full deflection, newtons.
    pub thrust_max: f64,
    /// Half-width of the ESC deadband around 1500 us.
    pub deadband_us: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 11.0,
            inertia: [0.20, 0.25, 0.30],
            buoyancy: None,
            cob: [0.0, 0.0, -0.02],
            linear_drag: [3.0, 20.0, 8.0, 0.5, 0.5, 1.0],
            quadratic_drag: [12.0, 60.0, 40.0, 0.3, 0.3, 0.3],
            thrust_max: 40.0,
            deadband_us: 25.0,
        }
    }
}

impl VehicleParams {
    pub fn weight(&self) -> f64 {
        self.mass * GRAVITY
    }

    pub fn buoyancy_force(&self) -> f64 {
        self.buoyancy.unwrap_or_else(|| self.weight())
    }

    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(("vehicle.mass", "must be > 0"));
        }
        if self.inertia.iter().any(|&i| !(i > 0.0 && i.is_finite())) {
            return Err(("vehicle.inertia", "all moments must be > 0"));
        }
        if self.linear_drag.iter().chain(&self.quadratic_drag).any(|&d| !(d >= 0.0 && d.is_finite())) {
            return Err(("vehicle.drag", "coefficients must be >= 0"));
        }
        if matches!(self.buoyancy, Some(b) if !(b >= 0.0 && b.is_finite())) {
            return Err(("vehicle.buoyancy", "must be >= 0"));
        }
        if self.cob.iter().any(|c| !c.is_finite()) {
            return Err(("vehicle.cob", "must be finite"));
        }
        if !(self.thrust_max > 0.0 && self.thrust_max.is_finite()) {
            return Err(("vehicle.thrust_max", "must be > 0"));
        }
        if !(0.0..400.0).contains(&self.deadband_us) {
            return Err(("vehicle.deadband_us", "must be in [0, 400)"));
        }
        Ok(())
    }
}

/// ESC + thruster curve: quadratic in normalised stick, with a deadband.
pub fn pwm_to_thrust(pwm: u16, params: &VehicleParams) -> Result<f64, HydroError> {
    if !(PWM_MIN..=PWM_MAX).contains(&pwm) {
        return Err(HydroError::OutOfRange(pwm));
    }
    let offset = pwm as f64 - NEUTRAL_PWM as f64;
    if offset.abs() <= params.deadband_us {
        return Ok(0.0);
    }
    let s = (offset / PWM_HALF_RANGE).clamp(-1.0, 1.0);
    Ok(params.thrust_max * s * s.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thruster {
    /// Mount point, body FRD metres.
    pub position: [f64; 3],
    /// Unit thrust direction for positive command.
    pub direction: [f64; 3],
}

impl Thruster {
    fn horizontal(x: f64, y: f64, azimuth_deg: f64) -> Self {
        let az = azimuth_deg.to_radians();
        Self { position: [x, y, 0.0], direction: [az.cos(), az.sin(), 0.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThrusterGeometry {
    pub thrusters: Vec<Thruster>,
}

/// Rows of the wrench map that thrusters can drive: Fx, Fy, Fz, Mx, Mz.
pub const ACTUATED_ROWS: [usize; 5] = [0, 1, 2, 3, 5];

impl Default for ThrusterGeometry {
    /// Vectored frame: four horizontal thrusters at +-45 deg, two verticals pushing up.
    fn default() -> Self {
        Self {
            thrusters: vec![
                Thruster::horizontal(0.16, 0.11, -45.0),
                Thruster::horizontal(0.16, -0.11, 45.0),
                Thruster::horizontal(-0.16, 0.11, 45.0),
                Thruster::horizontal(-0.16, -0.11, -45.0),
                Thruster { position: [0.0, -0.11, 0.0], direction: [0.0, 0.0, -1.0] },
                Thruster { position: [0.0, 0.11, 0.0], direction: [0.0, 0.0, -1.0] },
            ],
        }
    }
}

impl ThrusterGeometry {
    /// Column i is the body wrench (force; torque) from one newton on thruster i.
    pub fn wrench_matrix(&self) -> WrenchMatrix {
        let mut m = WrenchMatrix::zeros();
        for (i, t) in self.thrusters.iter().enumerate().take(6) {
            let d = Vector3::from(t.direction);
            let tau = Vector3::from(t.position).cross(&d);
            for r in 0..3 {
                m[(r, i)] = d[r];
                m[(r + 3, i)] = tau[r];
            }
        }
        m
    }

    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if self.thrusters.len() != 6 {
            return Err(("thrusters", "exactly 6 thrusters required"));
        }
        for t in &self.thrusters {
            let n = Vector3::from(t.direction).norm();
            if (n - 1.0).abs() > 1e-6 || t.position.iter().any(|p| !p.is_finite()) {
                return Err(("thrusters", "directions must be unit vectors"));
            }
        }
        let b = self.wrench_matrix();
        let actuated = SMatrix::<f64, 5, 6>::from_fn(|r, c| b[(ACTUATED_ROWS[r], c)]);
        if actuated.rank(1e-9) != 5 {
            return Err(("thrusters", "wrench map must have rank 5 on Fx, Fy, Fz, Mx, Mz"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench {
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
}

impl std::ops::Add for Wrench {
    type Output = Wrench;
    fn add(self, rhs: Wrench) -> Wrench {
        Wrench { force: self.force + rhs.force, torque: self.torque + rhs.torque }
    }
}

pub fn thruster_wrench(thrusts: &[f64; 6], geometry: &ThrusterGeometry) -> Wrench {
    let mut w = Wrench::default();
    for (t, &f) in geometry.thrusters.iter().zip(thrusts) {
        let force = Vector3::from(t.direction) * f;
        w.force += force;
        w.torque += Vector3::from(t.position).cross(&force);
    }
    w
}

/// Weight at the centre of mass plus buoyancy at the centre of buoyancy, body frame.
pub fn hydrostatic_wrench(state: &VehicleState, params: &VehicleParams) -> Wrench {
    let down_body = state.rotation().inverse() * Vector3::z();
    let weight = down_body * params.weight();
    let buoyancy = -down_body * params.buoyancy_force();
    Wrench { force: weight + buoyancy, torque: Vector3::from(params.cob).cross(&buoyancy) }
}

pub fn drag_wrench(state: &VehicleState, params: &VehicleParams) -> Wrench {
    let l = &params.linear_drag;
    let q = &params.quadratic_drag;
    let axis = |v: f64, i: usize| -l[i] * v - q[i] * v * v.abs();
    let (v, w) = (state.v_body, state.w_body);
    Wrench {
        force: Vector3::new(axis(v.x, 0), axis(v.y, 1), axis(v.z, 2)),
        torque: Vector3::new(axis(w.x, 3), axis(w.y, 4), axis(w.z, 5)),
    }
}

pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

fn euler_rates(attitude: &Vector3<f64>, w: &Vector3<f64>) -> Vector3<f64> {
    let (sr, cr) = attitude.x.sin_cos();
    let (sp, cp) = attitude.y.sin_cos();
    let tp = sp / cp;
    Vector3::new(
        w.x + sr * tp * w.y + cr * tp * w.z,
        cr * w.y - sr * w.z,
        (sr * w.y + cr * w.z) / cp,
    )
}

/// Advance one step under an externally supplied body wrench (plus hydrostatics and drag).
///
/// Semi-implicit Euler: velocities first, then pose from the new velocities.
pub fn step_wrench(
    state: &VehicleState,
    applied: Wrench,
    params: &VehicleParams,
    dt: f64,
) -> Result<VehicleState, HydroError> {
    let total = applied + hydrostatic_wrench(state, params) + drag_wrench(state, params);
    let inertia_inv = Matrix3::from_diagonal(&Vector3::from(params.inertia).map(|i| 1.0 / i));

    let mut next = *state;
    next.v_body += total.force * (dt / params.mass);
    next.w_body += inertia_inv * total.torque * dt;
    next.position += state.rotation() * next.v_body * dt;
    next.attitude += euler_rates(&state.attitude, &next.w_body) * dt;
    next.attitude.x = wrap_angle(next.attitude.x);
    next.attitude.y = wrap_angle(next.attitude.y);
    next.attitude.z = wrap_angle(next.attitude.z);
    next.t = state.t + dt;
    if next.position.z < 0.0 {
        // free surface: the hull floats at z = 0 and loses its upward velocity
        next.position.z = 0.0;
        let r = next.rotation();
        let mut v_world = r * next.v_body;
        v_world.z = v_world.z.max(0.0);
        next.v_body = r.inverse() * v_world;
    }

    if !next.is_finite() {
        return Err(HydroError::NonFiniteState { t: next.t });
    }
    if next.attitude.y.abs() >= PITCH_LIMIT {
        return Err(HydroError::PitchEnvelope { t: next.t, pitch_deg: next.attitude.y.to_degrees() });
    }
    Ok(next)
}

pub fn step(
    state: &VehicleState,
    pwm: &[u16; 6],
    params: &VehicleParams,
    geometry: &ThrusterGeometry,
    dt: f64,
) -> Result<VehicleState, HydroError> {
    let mut thrusts = [0.0; 6];
    for (t, &p) in thrusts.iter_mut().zip(pwm) {
        *t = pwm_to_thrust(p, params)?;
    }
    step_wrench(state, thruster_wrench(&thrusts, geometry), params, dt)
}
