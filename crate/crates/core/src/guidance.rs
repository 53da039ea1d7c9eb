//! Companion-computer autonomy: visual servoing on detection boxes and the
//! gate then flare mission.
//!
//! Every control tick picks one motion primitive and expresses it as an RC
//! override. Sway is corrected before heave; a target centred on both axes
//! means "exact front" and the vehicle creeps forward.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fcu::RcChannels;
use crate::hydro::{NEUTRAL_PWM, PWM_MAX, PWM_MIN};
use crate::percept::{CameraIntrinsics, Detection, Label};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GuidanceConfig {
    /// Detections must score strictly above this.
    pub score_threshold: f64,
    pub deadband_px: f64,
    pub pwm_step: u16,
    pub confirm_frames: u32,
    pub align_frames: u32,
    /// Seconds of surge after gate alignment.
    pub pass_duration: f64,
    pub search_yaw_pwm: u16,
    /// Flare box height (px) that counts as "close enough to touch".
    pub touch_box_height: f64,
    pub touch_duration: f64,
    /// Align phases fall back to search after this long without a sighting.
    pub lost_target_timeout: f64,
    /// Detections older than this at decision time are discarded.
    pub stale_after: f64,
    pub surface_depth: f64,
    /// Minimum spacing between repeated arm requests.
    pub arm_retry: f64,
}

impl Default for GuidanceConfig {
    fn default() -> Self {
        Self {
            score_threshold: 0.75,
            deadband_px: 30.0,
            pwm_step: 150,
            confirm_frames: 3,
            align_frames: 10,
            pass_duration: 8.0,
            search_yaw_pwm: 1550,
            touch_box_height: 500.0,
            touch_duration: 3.0,
            lost_target_timeout: 5.0,
            stale_after: 1.0,
            surface_depth: 0.2,
            arm_retry: 1.0,
        }
    }
}

impl GuidanceConfig {
    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if !(self.score_threshold > 0.0 && self.score_threshold < 1.0) {
            return Err(("guidance.score_threshold", "must be in (0, 1)"));
        }
        if !(self.deadband_px > 0.0 && self.deadband_px.is_finite()) {
            return Err(("guidance.deadband_px", "must be > 0"));
        }
        if self.pwm_step > 400 {
            return Err(("guidance.pwm_step", "must be <= 400"));
        }
        if !(PWM_MIN..=PWM_MAX).contains(&self.search_yaw_pwm) {
            return Err(("guidance.search_yaw_pwm", "must be in [1100, 1900]"));
        }
        if self.confirm_frames == 0 || self.align_frames == 0 {
            return Err(("guidance.confirm_frames", "frame counts must be >= 1"));
        }
        let durations = [
            self.pass_duration,
            self.touch_duration,
            self.lost_target_timeout,
            self.stale_after,
            self.arm_retry,
        ];
        if durations.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(("guidance.durations", "must be finite and >= 0"));
        }
        if self.touch_box_height.is_nan() || self.touch_box_height <= 0.0 || !self.surface_depth.is_finite() {
            return Err(("guidance.touch_box_height", "must be > 0"));
        }
        Ok(())
    }
}

/// Pixel offset of the box centre from the frame centre. Positive dx is right, positive dy is down.
pub fn center_offset(det: &Detection, intr: &CameraIntrinsics) -> (f64, f64) {
    let (u, v) = det.centre();
    (u - intr.cx(), v - intr.cy())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Horizontal {
    Left,
    Right,
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertical {
    Above,
    Below,
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Direction {
    pub horizontal: Horizontal,
    pub vertical: Vertical,
}

impl Direction {
    pub const EXACT_FRONT: Direction =
        Direction { horizontal: Horizontal::Centered, vertical: Vertical::Centered };

    pub fn is_exact_front(&self) -> bool {
        *self == Self::EXACT_FRONT
    }
}

pub fn classify(dx: f64, dy: f64, deadband: f64) -> Direction {
    let horizontal = if dx < -deadband {
        Horizontal::Left
    } else if dx > deadband {
        Horizontal::Right
    } else {
        Horizontal::Centered
    };
    let vertical = if dy < -deadband {
        Vertical::Above
    } else if dy > deadband {
        Vertical::Below
    } else {
        Vertical::Centered
    };
    Direction { horizontal, vertical }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Hold,
    /// Slow yaw to sweep the camera.
    Search,
    SwayLeft,
    SwayRight,
    HeaveUp,
    HeaveDown,
    Forward,
}

impl Primitive {
    /// Sway takes priority over heave; exact front creeps forward.
    pub fn from_direction(dir: Direction) -> Primitive {
        match (dir.horizontal, dir.vertical) {
            (Horizontal::Left, _) => Primitive::SwayLeft,
            (Horizontal::Right, _) => Primitive::SwayRight,
            (Horizontal::Centered, Vertical::Above) => Primitive::HeaveUp,
            (Horizontal::Centered, Vertical::Below) => Primitive::HeaveDown,
            (Horizontal::Centered, Vertical::Centered) => Primitive::Forward,
        }
    }
}

pub fn primitive_to_rc(p: Primitive, cfg: &GuidanceConfig) -> RcChannels {
    let mut rc = RcChannels::NEUTRAL;
    let up = NEUTRAL_PWM + cfg.pwm_step;
    let down = NEUTRAL_PWM - cfg.pwm_step;
    match p {
        Primitive::Hold => {}
        Primitive::Search => rc.set_ch(4, cfg.search_yaw_pwm),
        Primitive::SwayLeft => rc.set_ch(6, down),
        Primitive::SwayRight => rc.set_ch(6, up),
        Primitive::HeaveUp => rc.set_ch(3, up),
        Primitive::HeaveDown => rc.set_ch(3, down),
        Primitive::Forward => rc.set_ch(5, up),
    }
    rc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Idle,
    SearchGate,
    AlignGate,
    PassGate,
    SearchFlare,
    AlignFlare,
    TouchFlare,
    Surface,
    Disarmed,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Idle => "Idle",
            Phase::SearchGate => "SearchGate",
            Phase::AlignGate => "AlignGate",
            Phase::PassGate => "PassGate",
            Phase::SearchFlare => "SearchFlare",
            Phase::AlignFlare => "AlignFlare",
            Phase::TouchFlare => "TouchFlare",
            Phase::Surface => "Surface",
            Phase::Disarmed => "Disarmed",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Arm,
    Disarm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionState {
    pub phase: Phase,
    pub phase_entry_t: f64,
    /// Consecutive ticks with a sighting (search phases).
    pub sightings: u32,
    /// Consecutive exact-front classifications (align phases).
    pub aligned: u32,
    pub last_sighting_t: f64,
    pub last_arm_request_t: Option<f64>,
}

impl Default for MissionState {
    fn default() -> Self {
        Self::new()
    }
}

impl MissionState {
    pub fn new() -> Self {
        Self {
            phase: Phase::Idle,
            phase_entry_t: 0.0,
            sightings: 0,
            aligned: 0,
            last_sighting_t: f64::NEG_INFINITY,
            last_arm_request_t: None,
        }
    }

    /// The only way out of `Disarmed`.
    pub fn rearm(&self, now: f64) -> Self {
        Self { phase_entry_t: now, ..Self::new() }
    }

    fn enter(&mut self, phase: Phase, now: f64) {
        self.phase = phase;
        self.phase_entry_t = now;
        self.sightings = 0;
        self.aligned = 0;
        self.last_sighting_t = now;
    }
}

/// What the companion knows at a decision tick.
#[derive(Debug, Clone, Copy)]
pub struct MissionInputs<'a> {
    /// Detections received since the previous tick.
    pub detections: &'a [Detection],
    /// From the depth sensor telemetry.
    pub depth: f64,
    /// As last reported by the flight controller.
    pub armed: bool,
    pub now: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    pub primitive: Primitive,
    pub commands: Vec<Command>,
    /// Detection acted on this tick, if any.
    pub target: Option<Detection>,
    pub offset: Option<(f64, f64)>,
}

/// Detections of `label` above threshold and fresh at `now`.
pub fn usable<'a>(
    detections: &'a [Detection],
    label: Label,
    now: f64,
    cfg: &'a GuidanceConfig,
) -> impl Iterator<Item = &'a Detection> + 'a {
    detections.iter().filter(move |d| {
        d.label == label && d.score > cfg.score_threshold && now - d.t_capture <= cfg.stale_after
    })
}

/// Largest box wins; ties go to the smallest xmin.
pub fn select_target(
    detections: &[Detection],
    label: Label,
    now: f64,
    cfg: &GuidanceConfig,
) -> Option<Detection> {
    usable(detections, label, now, cfg).copied().reduce(|best, d| {
        if d.area() > best.area() || (d.area() == best.area() && d.xmin < best.xmin) {
            d
        } else {
            best
        }
    })
}

pub fn mission_step(
    ms: &MissionState,
    input: &MissionInputs<'_>,
    cfg: &GuidanceConfig,
    intr: &CameraIntrinsics,
) -> (MissionState, StepOutput) {
    let now = input.now;
    let mut next = *ms;
    let mut out = StepOutput { primitive: Primitive::Hold, commands: Vec::new(), target: None, offset: None };

    if ms.phase == Phase::Disarmed {
        return (next, out);
    }
    if ms.phase != Phase::Idle && !input.armed {
        next.enter(Phase::Disarmed, now);
        return (next, out);
    }

    let target_label = match ms.phase {
        Phase::SearchGate | Phase::AlignGate => Some(Label::Gate),
        Phase::SearchFlare | Phase::AlignFlare => Some(Label::Flare),
        _ => None,
    };
    let target = target_label.and_then(|l| select_target(input.detections, l, now, cfg));
    out.target = target;
    out.offset = target.map(|t| center_offset(&t, intr));

    match ms.phase {
        Phase::Idle => {
            if input.armed {
                next.enter(Phase::SearchGate, now);
            } else if ms.last_arm_request_t.is_none_or(|t| now - t >= cfg.arm_retry - 1e-9) {
                out.commands.push(Command::Arm);
                next.last_arm_request_t = Some(now);
            }
        }
        Phase::SearchGate | Phase::SearchFlare => {
            if target.is_some() {
                next.sightings += 1;
                next.last_sighting_t = now;
                if next.sightings >= cfg.confirm_frames {
                    let align =
                        if ms.phase == Phase::SearchGate { Phase::AlignGate } else { Phase::AlignFlare };
                    next.enter(align, now);
                }
            } else {
                next.sightings = 0;
                out.primitive = Primitive::Search;
            }
        }
        Phase::AlignGate | Phase::AlignFlare => match (target, out.offset) {
            (Some(t), Some((dx, dy))) => {
                next.last_sighting_t = now;
                let dir = classify(dx, dy, cfg.deadband_px);
                next.aligned = if dir.is_exact_front() { next.aligned + 1 } else { 0 };
                out.primitive = Primitive::from_direction(dir);
                if ms.phase == Phase::AlignGate && next.aligned >= cfg.align_frames {
                    next.enter(Phase::PassGate, now);
                    out.primitive = Primitive::Forward;
                } else if ms.phase == Phase::AlignFlare && t.height() > cfg.touch_box_height {
                    next.enter(Phase::TouchFlare, now);
                    out.primitive = Primitive::Forward;
                }
            }
            _ => {
                if now - ms.last_sighting_t >= cfg.lost_target_timeout - 1e-9 {
                    let search =
                        if ms.phase == Phase::AlignGate { Phase::SearchGate } else { Phase::SearchFlare };
                    next.enter(search, now);
                }
            }
        },
        Phase::PassGate => {
            if now - ms.phase_entry_t >= cfg.pass_duration - 1e-9 {
                next.enter(Phase::SearchFlare, now);
            } else {
                out.primitive = Primitive::Forward;
            }
        }
        Phase::TouchFlare => {
            if now - ms.phase_entry_t >= cfg.touch_duration - 1e-9 {
                next.enter(Phase::Surface, now);
                out.primitive = Primitive::HeaveUp;
            } else {
                out.primitive = Primitive::Forward;
            }
        }
        Phase::Surface => {
            if input.depth < cfg.surface_depth {
                next.enter(Phase::Disarmed, now);
                out.commands.push(Command::Disarm);
            } else {
                out.primitive = Primitive::HeaveUp;
            }
        }
        Phase::Disarmed => unreachable!(),
    }
    (next, out)
}
