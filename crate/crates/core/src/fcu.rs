//! Simulated autopilot: arming, RC override, rate stabilisation, thruster mixing, telemetry.
//!
//! Single stabilised-manual mode. Channel map follows the usual sub layout:
//! ch2 roll, ch3 heave (+up), ch4 yaw, ch5 surge, ch6 sway. Ch1 (pitch) is
//! accepted but has nothing to drive.

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::hydro::{
    ThrusterGeometry, VehicleState, ACTUATED_ROWS, NEUTRAL_PWM, PWM_HALF_RANGE, PWM_MAX, PWM_MIN,
};
use crate::link::{LinkState, TIME_EPS};
use crate::mavproto::msgs::{
    Attitude, CommandAck, CommandLong, Heartbeat, RcChannelsOverride, ScaledPressure,
    ServoOutputRaw, CMD_COMPONENT_ARM_DISARM, MAV_AUTOPILOT_ARDUPILOTMEGA,
    MAV_MODE_FLAG_CUSTOM_MODE_ENABLED, MAV_MODE_FLAG_SAFETY_ARMED, MAV_RESULT_ACCEPTED,
    MAV_STATE_ACTIVE, MAV_STATE_STANDBY, MAV_TYPE_SUBMARINE,
};
use crate::mavproto::Message;

/// Sea-level reference pressure, hPa.
pub const SURFACE_PRESSURE_HPA: f64 = 1013.25;
/// rho * g / 100 for fresh water (rho = 1000 kg/m^3, g = 9.81 m/s^2), hPa per metre.
pub const HPA_PER_METRE: f64 = 98.1;
/// RC override older than this is treated as released.
pub const RC_TIMEOUT: f64 = 1.0;

pub fn depth_to_pressure(depth_m: f64) -> f64 {
    SURFACE_PRESSURE_HPA + HPA_PER_METRE * depth_m
}

pub fn pressure_to_depth(press_abs_hpa: f64) -> f64 {
    (press_abs_hpa - SURFACE_PRESSURE_HPA) / HPA_PER_METRE
}

/// Eight override channels in microseconds; 0 means "released".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcChannels(pub [u16; 8]);

impl RcChannels {
    pub const NEUTRAL: RcChannels = RcChannels([NEUTRAL_PWM; 8]);
    pub const RELEASED: RcChannels = RcChannels([0; 8]);

    pub fn new(ch: [u16; 8]) -> Option<Self> {
        let rc = RcChannels(ch);
        rc.is_valid().then_some(rc)
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|&c| c == 0 || (PWM_MIN..=PWM_MAX).contains(&c))
    }

    /// 1-based channel access.
    pub fn ch(&self, n: usize) -> u16 {
        self.0[n - 1]
    }

    pub fn set_ch(&mut self, n: usize, value: u16) {
        self.0[n - 1] = value;
    }
}

impl Default for RcChannels {
    fn default() -> Self {
        Self::NEUTRAL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PidGains {
    /// Proportional gain on measured roll rate.
    pub roll_rate_p: f64,
    /// Proportional gain on measured yaw rate. Zero leaves yaw unstabilised.
    pub yaw_rate_p: f64,
    /// Scales the passive pitch restoring estimate; pitch has no actuator.
    pub pitch_coupling: f64,
    /// Derivative damping on roll rate (per rad/s^2).
    pub roll_rate_d: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        Self { roll_rate_p: 0.100, yaw_rate_p: 0.00, pitch_coupling: 1.1, roll_rate_d: 0.02 }
    }
}

impl PidGains {
    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        let all = [self.roll_rate_p, self.yaw_rate_p, self.pitch_coupling, self.roll_rate_d];
        if all.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(("fcu.gains", "gains must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Normalised demand per actuated axis, each in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxisCommands {
    pub surge: f64,
    pub sway: f64,
    /// Positive is up.
    pub heave: f64,
    pub roll: f64,
    pub yaw: f64,
}

impl AxisCommands {
    pub fn clamped(self) -> Self {
        let c = |v: f64| v.clamp(-1.0, 1.0);
        Self {
            surge: c(self.surge),
            sway: c(self.sway),
            heave: c(self.heave),
            roll: c(self.roll),
            yaw: c(self.yaw),
        }
    }

    fn as_vector(&self) -> SVector<f64, 5> {
        SVector::<f64, 5>::new(self.surge, self.sway, self.heave, self.roll, self.yaw)
    }
}

impl std::ops::Neg for AxisCommands {
    type Output = AxisCommands;
    fn neg(self) -> Self {
        Self {
            surge: -self.surge,
            sway: -self.sway,
            heave: -self.heave,
            roll: -self.roll,
            yaw: -self.yaw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThrusterPwm(pub [u16; 6]);

impl ThrusterPwm {
    pub const NEUTRAL: ThrusterPwm = ThrusterPwm([NEUTRAL_PWM; 6]);

    pub fn is_neutral(&self) -> bool {
        *self == Self::NEUTRAL
    }
}

impl Default for ThrusterPwm {
    fn default() -> Self {
        Self::NEUTRAL
    }
}

fn normalise(pwm: u16) -> f64 {
    if pwm == 0 {
        0.0
    } else {
        ((pwm as f64 - NEUTRAL_PWM as f64) / PWM_HALF_RANGE).clamp(-1.0, 1.0)
    }
}

pub fn rc_to_axes(rc: &RcChannels) -> AxisCommands {
    AxisCommands {
        roll: normalise(rc.ch(2)),
        heave: normalise(rc.ch(3)),
        yaw: normalise(rc.ch(4)),
        surge: normalise(rc.ch(5)),
        sway: normalise(rc.ch(6)),
    }
}

/// Rate damping on roll and yaw. Pitch is not touched here.
pub fn stabilize(
    gains: &PidGains,
    roll_rate: f64,
    roll_accel: f64,
    yaw_rate: f64,
    axes: AxisCommands,
) -> AxisCommands {
    AxisCommands {
        roll: axes.roll - gains.roll_rate_p * roll_rate - gains.roll_rate_d * roll_accel,
        yaw: axes.yaw - gains.yaw_rate_p * yaw_rate,
        ..axes
    }
    .clamped()
}

/// Estimated passive pitch restoring demand. Reported only; pitch has no actuator.
pub fn pitch_restoring_estimate(gains: &PidGains, pitch: f64) -> f64 {
    -gains.pitch_coupling * pitch.sin()
}

/// Axis-to-thruster allocation derived from the thruster geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixer {
    /// Rows: thrusters. Columns: surge, sway, heave, roll, yaw.
    allocation: SMatrix<f64, 6, 5>,
}

impl Mixer {
    /// Pseudo-inverse of the actuated wrench rows, columns scaled to max-abs 1.
    pub fn from_geometry(geometry: &ThrusterGeometry) -> Mixer {
        let b = geometry.wrench_matrix();
        let b5 = SMatrix::<f64, 5, 6>::from_fn(|r, c| b[(ACTUATED_ROWS[r], c)]);
        let gram = b5 * b5.transpose();
        let pinv = b5.transpose()
            * gram.try_inverse().expect("geometry validated to rank 5");
        // axis order surge, sway, heave (up = -Fz), roll, yaw against wrench rows Fx, Fy, Fz, Mx, Mz
        let demand = SMatrix::<f64, 5, 5>::from_diagonal(&SVector::<f64, 5>::new(
            1.0, 1.0, -1.0, 1.0, 1.0,
        ));
        let mut allocation = pinv * demand;
        for mut col in allocation.column_iter_mut() {
            let m = col.amax();
            if m > 0.0 {
                col /= m;
            }
        }
        Mixer { allocation }
    }

    pub fn allocation(&self) -> &SMatrix<f64, 6, 5> {
        &self.allocation
    }

    /// Per-thruster normalised command before PWM conversion.
    pub fn commands(&self, axes: &AxisCommands) -> [f64; 6] {
        let v = self.allocation * axes.as_vector();
        let mut out = [0.0; 6];
        out.copy_from_slice(v.as_slice());
        out
    }

    pub fn mix(&self, axes: &AxisCommands) -> ThrusterPwm {
        let mut pwm = [NEUTRAL_PWM; 6];
        for (p, c) in pwm.iter_mut().zip(self.commands(&axes.clamped())) {
            let offset = (PWM_HALF_RANGE * c).round();
            *p = (NEUTRAL_PWM as f64 + offset).clamp(PWM_MIN as f64, PWM_MAX as f64) as u16;
        }
        ThrusterPwm(pwm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisarmReason {
    Commanded,
    LinkFailsafe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcuState {
    pub armed: bool,
    pub rc: RcChannels,
    pub gains: PidGains,
    pub last_rc_rx: Option<f64>,
    pub sys_id: u8,
    pub comp_id: u8,
    /// Outbound frame sequence number, wraps at 256.
    pub tx_seq: u8,
    pub pwm: ThrusterPwm,
    pub disarm_reason: Option<DisarmReason>,
    prev_roll_rate: Option<f64>,
    next_fast: f64,
    next_servo: f64,
    next_heartbeat: f64,
}

pub const FAST_TELEMETRY_PERIOD: f64 = 0.1;
pub const SERVO_TELEMETRY_PERIOD: f64 = 0.2;
pub const HEARTBEAT_PERIOD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcuOutput {
    pub pwm: ThrusterPwm,
    pub axes: AxisCommands,
    pub pitch_restoring: f64,
}

impl FcuState {
    pub fn new(gains: PidGains) -> Self {
        Self {
            armed: false,
            rc: RcChannels::RELEASED,
            gains,
            last_rc_rx: None,
            sys_id: 1,
            comp_id: 1,
            tx_seq: 0,
            pwm: ThrusterPwm::NEUTRAL,
            disarm_reason: None,
            prev_roll_rate: None,
            next_fast: 0.0,
            next_servo: 0.0,
            next_heartbeat: 0.0,
        }
    }

    pub fn next_seq(&mut self) -> u8 {
        let s = self.tx_seq;
        self.tx_seq = self.tx_seq.wrapping_add(1);
        s
    }

    fn addressed_to_me(&self, target_system: u8, target_component: u8) -> bool {
        (target_system == 0 || target_system == self.sys_id)
            && (target_component == 0 || target_component == self.comp_id)
    }

    /// Apply one inbound message; returns replies to send back.
    pub fn handle_message(&mut self, msg: &Message, now: f64) -> Vec<Message> {
        if let Some(cmd) = CommandLong::from_message(msg) {
            if cmd.command == CMD_COMPONENT_ARM_DISARM
                && self.addressed_to_me(cmd.target_system, cmd.target_component)
            {
                if cmd.params[0] >= 0.5 {
                    self.armed = true;
                    self.disarm_reason = None;
                } else {
                    self.disarm(DisarmReason::Commanded);
                }
                let ack = CommandAck { command: CMD_COMPONENT_ARM_DISARM, result: MAV_RESULT_ACCEPTED };
                return vec![ack.to_message()];
            }
        } else if let Some(ov) = RcChannelsOverride::from_message(msg) {
            if self.addressed_to_me(ov.target_system, ov.target_component) {
                if let Some(rc) = RcChannels::new(ov.chan_raw) {
                    self.rc = rc;
                    self.last_rc_rx = Some(now);
                }
            }
        }
        Vec::new()
    }

    fn disarm(&mut self, reason: DisarmReason) {
        if self.armed {
            self.disarm_reason = Some(reason);
        }
        self.armed = false;
        self.pwm = ThrusterPwm::NEUTRAL;
    }

    /// RC demands, or zero when the override has gone stale.
    pub fn current_axes(&self, now: f64) -> AxisCommands {
        match self.last_rc_rx {
            Some(t) if now - t < RC_TIMEOUT - TIME_EPS => rc_to_axes(&self.rc),
            _ => AxisCommands::default(),
        }
    }

    /// One control-loop iteration.
    pub fn step(
        &mut self,
        vehicle: &VehicleState,
        mixer: &Mixer,
        link: LinkState,
        now: f64,
        dt: f64,
    ) -> FcuOutput {
        if link == LinkState::Lost && self.armed {
            self.disarm(DisarmReason::LinkFailsafe);
        }
        let roll_rate = vehicle.w_body.x;
        let roll_accel = self.prev_roll_rate.map_or(0.0, |p| (roll_rate - p) / dt);
        self.prev_roll_rate = Some(roll_rate);
        let axes = stabilize(&self.gains, roll_rate, roll_accel, vehicle.w_body.z, self.current_axes(now));
        self.pwm = if self.armed { mixer.mix(&axes) } else { ThrusterPwm::NEUTRAL };
        FcuOutput {
            pwm: self.pwm,
            axes,
            pitch_restoring: pitch_restoring_estimate(&self.gains, vehicle.pitch()),
        }
    }

    pub fn heartbeat(&self) -> Heartbeat {
        let armed_flag = if self.armed { MAV_MODE_FLAG_SAFETY_ARMED } else { 0 };
        Heartbeat {
            mav_type: MAV_TYPE_SUBMARINE,
            autopilot: MAV_AUTOPILOT_ARDUPILOTMEGA,
            base_mode: armed_flag | MAV_MODE_FLAG_CUSTOM_MODE_ENABLED,
            custom_mode: 0,
            system_status: if self.armed { MAV_STATE_ACTIVE } else { MAV_STATE_STANDBY },
            mavlink_version: 3,
        }
    }

    /// Telemetry due at `now`: ATTITUDE and SCALED_PRESSURE at 10 Hz,
    /// SERVO_OUTPUT_RAW at 5 Hz, HEARTBEAT at 1 Hz.
    pub fn telemetry_tick(&mut self, vehicle: &VehicleState, now: f64) -> Vec<Message> {
        let mut out = Vec::new();
        let boot_ms = (now * 1000.0).round() as u32;
        if due(&mut self.next_heartbeat, HEARTBEAT_PERIOD, now) {
            out.push(self.heartbeat().to_message());
        }
        if due(&mut self.next_fast, FAST_TELEMETRY_PERIOD, now) {
            out.push(attitude_message(vehicle, boot_ms));
            let press = depth_to_pressure(vehicle.depth());
            out.push(
                ScaledPressure {
                    time_boot_ms: boot_ms,
                    press_abs: press as f32,
                    press_diff: (press - SURFACE_PRESSURE_HPA) as f32,
                    temperature: 1500,
                }
                .to_message(),
            );
        }
        if due(&mut self.next_servo, SERVO_TELEMETRY_PERIOD, now) {
            let mut servo_raw = [0u16; 8];
            servo_raw[..6].copy_from_slice(&self.pwm.0);
            let time_usec = (now * 1e6).round() as u64 as u32;
            out.push(ServoOutputRaw { time_usec, port: 0, servo_raw }.to_message());
        }
        out
    }
}

fn due(next: &mut f64, period: f64, now: f64) -> bool {
    if now + TIME_EPS < *next {
        return false;
    }
    while *next <= now + TIME_EPS {
        *next += period;
    }
    true
}

fn attitude_message(v: &VehicleState, boot_ms: u32) -> Message {
    let w: Vector3<f64> = v.w_body;
    Attitude {
        time_boot_ms: boot_ms,
        roll: v.roll() as f32,
        pitch: v.pitch() as f32,
        yaw: v.yaw() as f32,
        rollspeed: w.x as f32,
        pitchspeed: w.y as f32,
        yawspeed: w.z as f32,
    }
    .to_message()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::{pwm_to_thrust, thruster_wrench, VehicleParams};
    use crate::mavproto::msgs::CommandAck;

    fn arm_msg(arm: bool) -> Message {
        CommandLong::arm_disarm(1, 1, arm).to_message()
    }

    fn override_msg(ch: [u16; 8]) -> Message {
        RcChannelsOverride { target_system: 1, target_component: 1, chan_raw: ch }.to_message()
    }

    fn mixer() -> Mixer {
        Mixer::from_geometry(&ThrusterGeometry::default())
    }

    #[test]
    fn arm_command_acks() {
        let mut fcu = FcuState::new(PidGains::default());
        let replies = fcu.handle_message(&arm_msg(true), 0.0);
        assert!(fcu.armed);
        let ack = CommandAck::from_message(&replies[0]).unwrap();
        assert_eq!(ack, CommandAck { command: 400, result: 0 });
        fcu.handle_message(&arm_msg(false), 1.0);
        assert!(!fcu.armed);
        assert_eq!(fcu.disarm_reason, Some(DisarmReason::Commanded));
    }

    #[test]
    fn override_while_disarmed_keeps_neutral() {
        let mut fcu = FcuState::new(PidGains::default());
        fcu.handle_message(&override_msg([1500, 1500, 1900, 1500, 1900, 1100, 1500, 1500]), 0.0);
        assert_eq!(fcu.rc.ch(5), 1900);
        let out = fcu.step(&VehicleState::default(), &mixer(), LinkState::Ok, 0.01, 0.01);
        assert!(out.pwm.is_neutral());
    }

    #[test]
    fn heartbeat_leaves_state_alone() {
        let mut fcu = FcuState::new(PidGains::default());
        let before = fcu.clone();
        let replies = fcu.handle_message(&fcu.heartbeat().to_message(), 3.0);
        assert!(replies.is_empty());
        assert_eq!(fcu, before);
    }

    #[test]
    fn invalid_override_rejected() {
        let mut fcu = FcuState::new(PidGains::default());
        fcu.handle_message(&override_msg([1500, 1500, 2000, 1500, 1500, 1500, 0, 0]), 0.0);
        assert_eq!(fcu.rc, RcChannels::RELEASED);
        assert_eq!(fcu.last_rc_rx, None);
    }

    #[test]
    fn channel_map() {
        assert_eq!(rc_to_axes(&RcChannels::NEUTRAL), AxisCommands::default());
        let mut rc = RcChannels::NEUTRAL;
        rc.set_ch(5, 1900);
        assert_eq!(rc_to_axes(&rc), AxisCommands { surge: 1.0, ..Default::default() });
        let mut rc = RcChannels::NEUTRAL;
        rc.set_ch(6, 1300);
        assert_eq!(rc_to_axes(&rc), AxisCommands { sway: -0.5, ..Default::default() });
        assert_eq!(rc_to_axes(&RcChannels::RELEASED), AxisCommands::default());
    }

    #[test]
    fn stabilize_examples() {
        let g = PidGains::default();
        assert_eq!(stabilize(&g, 0.0, 0.0, 0.0, AxisCommands::default()), AxisCommands::default());
        let out = stabilize(&g, 0.5, 0.0, 0.0, AxisCommands::default());
        assert!((out.roll - (-0.05)).abs() < 1e-15);
        let demand = AxisCommands { yaw: 0.3, ..Default::default() };
        assert_eq!(stabilize(&g, 0.0, 0.0, 2.0, demand).yaw, 0.3);
        let out = stabilize(&g, -50.0, 0.0, 0.0, AxisCommands { roll: 0.5, ..Default::default() });
        assert_eq!(out.roll, 1.0);
    }

    #[test]
    fn pitch_estimate_uses_coupling() {
        let g = PidGains::default();
        assert!((pitch_restoring_estimate(&g, 0.1) + 1.1 * 0.1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn zero_axes_neutral_pwm() {
        assert!(mixer().mix(&AxisCommands::default()).is_neutral());
    }

    #[test]
    fn pure_surge_is_balanced() {
        let m = mixer();
        let axes = AxisCommands { surge: 1.0, ..Default::default() };
        let cmd = m.commands(&axes);
        assert!(cmd[0] > 0.0);
        for c in &cmd[1..4] {
            assert!((c - cmd[0]).abs() < 1e-12);
        }
        assert!(cmd[4].abs() < 1e-12 && cmd[5].abs() < 1e-12);
        let w = thruster_wrench(&cmd, &ThrusterGeometry::default());
        assert!(w.force.y.abs() < 1e-12 && w.torque.z.abs() < 1e-12);

        let pwm = m.mix(&axes);
        let p = VehicleParams::default();
        let thrusts = pwm.0.map(|v| pwm_to_thrust(v, &p).unwrap());
        let w = thruster_wrench(&thrusts, &ThrusterGeometry::default());
        assert!(w.force.x > 0.0);
        assert!(w.force.y.abs() < 1e-12 && w.torque.z.abs() < 1e-12);
    }

    #[test]
    fn each_axis_produces_its_own_wrench() {
        let m = mixer();
        let g = ThrusterGeometry::default();
        let b = g.wrench_matrix();
        // wrench rows Fx, Fy, Fz, Mx, Mz produced per unit axis demand
        let expect_sign = [(0, 1.0), (1, 1.0), (2, -1.0), (3, 1.0), (5, 1.0)];
        for (axis, (row, sign)) in expect_sign.iter().enumerate() {
            let col = m.allocation().column(axis);
            let mut t = [0.0; 6];
            t.copy_from_slice(col.as_slice());
            for r in 0..6 {
                let v: f64 = (0..6).map(|i| b[(r, i)] * t[i]).sum();
                if r == *row {
                    assert!(v * sign > 0.0, "axis {axis} row {r}: {v}");
                } else {
                    assert!(v.abs() < 1e-12, "axis {axis} leaks into row {r}: {v}");
                }
            }
            assert!((col.amax() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn saturated_demand_clamps() {
        let axes = AxisCommands { surge: 1.0, sway: 1.0, yaw: 1.0, heave: 1.0, roll: 1.0 };
        let pwm = mixer().mix(&axes);
        assert!(pwm.0.iter().all(|&p| (1100..=1900).contains(&p)));
        assert!(pwm.0.contains(&1900));
    }

    #[test]
    fn failsafe_disarms() {
        let mut fcu = FcuState::new(PidGains::default());
        fcu.handle_message(&arm_msg(true), 0.0);
        fcu.handle_message(&override_msg([1500, 1500, 1500, 1500, 1900, 1500, 1500, 1500]), 0.0);
        let out = fcu.step(&VehicleState::default(), &mixer(), LinkState::Ok, 0.01, 0.01);
        assert!(!out.pwm.is_neutral());
        let out = fcu.step(&VehicleState::default(), &mixer(), LinkState::Lost, 0.02, 0.01);
        assert!(out.pwm.is_neutral());
        assert!(!fcu.armed);
        assert_eq!(fcu.disarm_reason, Some(DisarmReason::LinkFailsafe));
        let servo = fcu
            .telemetry_tick(&VehicleState::default(), 0.02)
            .into_iter()
            .find_map(|m| ServoOutputRaw::from_message(&m))
            .unwrap();
        assert_eq!(&servo.servo_raw[..6], &[1500; 6]);
    }

    #[test]
    fn stale_override_decays() {
        let mut fcu = FcuState::new(PidGains::default());
        fcu.handle_message(&override_msg([1500, 1500, 1500, 1500, 1900, 1500, 1500, 1500]), 0.0);
        assert_eq!(fcu.current_axes(0.99).surge, 1.0);
        assert_eq!(fcu.current_axes(1.0).surge, 0.0);
    }

    #[test]
    fn telemetry_rates_and_values() {
        let mut fcu = FcuState::new(PidGains::default());
        let mut v = VehicleState::default();
        v.attitude.x = 0.1;
        v.position.z = 2.0;
        let mut counts = std::collections::HashMap::new();
        for n in 0..100 {
            for m in fcu.telemetry_tick(&v, n as f64 / 100.0) {
                *counts.entry(m.name()).or_insert(0) += 1;
                if let Some(att) = Attitude::from_message(&m) {
                    assert_eq!(att.roll, 0.1f32);
                }
                if let Some(p) = ScaledPressure::from_message(&m) {
                    // rho * g * h with rho = 1000, g = 9.81, h = 2 m, in hPa
                    let oracle = 1013.25 + 1000.0 * 9.81 * 2.0 / 100.0;
                    assert_eq!(p.press_abs, oracle as f32);
                }
            }
        }
        assert_eq!(counts["ATTITUDE"], 10);
        assert_eq!(counts["SCALED_PRESSURE"], 10);
        assert_eq!(counts["SERVO_OUTPUT_RAW"], 5);
        assert_eq!(counts["HEARTBEAT"], 1);
    }

    #[test]
    fn surface_pressure() {
        assert_eq!(depth_to_pressure(0.0), 1013.25);
        assert!((pressure_to_depth(depth_to_pressure(1.7)) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn seq_wraps() {
        let mut fcu = FcuState::new(PidGains::default());
        fcu.tx_seq = 255;
        assert_eq!(fcu.next_seq(), 255);
        assert_eq!(fcu.next_seq(), 0);
    }

    proptest::proptest! {
        #[test]
        fn mixer_is_odd(
            surge in -1.0f64..1.0, sway in -1.0f64..1.0, heave in -1.0f64..1.0,
            roll in -1.0f64..1.0, yaw in -1.0f64..1.0,
        ) {
            let m = mixer();
            let axes = AxisCommands { surge, sway, heave, roll, yaw };
            let a = m.mix(&axes);
            let b = m.mix(&-axes);
            for i in 0..6 {
                proptest::prop_assert_eq!(a.0[i] as i32 - 1500, 1500 - b.0[i] as i32);
            }
        }

        #[test]
        fn rc_map_is_linear_and_odd(d in 0u16..=400, ch in 2usize..=6) {
            let mut up = RcChannels::NEUTRAL;
            up.set_ch(ch, 1500 + d);
            let mut down = RcChannels::NEUTRAL;
            down.set_ch(ch, 1500 - d);
            let a = rc_to_axes(&up);
            let b = rc_to_axes(&down);
            proptest::prop_assert_eq!(a, -b);
            let total = a.surge + a.sway + a.heave + a.roll + a.yaw;
            proptest::prop_assert!((total - d as f64 / 400.0).abs() < 1e-15);
        }

        #[test]
        fn disarmed_always_neutral(ch in proptest::array::uniform8(1100u16..=1900)) {
            let mut fcu = FcuState::new(PidGains::default());
            fcu.handle_message(&override_msg(ch), 0.0);
            let v = VehicleState { w_body: Vector3::new(0.3, 0.0, -0.2), ..VehicleState::default() };
            let out = fcu.step(&v, &mixer(), LinkState::Ok, 0.01, 0.01);
            proptest::prop_assert!(out.pwm.is_neutral());
        }
    }
}
