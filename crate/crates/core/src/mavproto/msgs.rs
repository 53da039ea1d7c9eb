//! Typed views over the built-in messages.
//!
//! `to_message` always produces a complete message; `from_message` returns
//! `None` if the message is of another type or incomplete.

use super::def::{
    ATTITUDE, COMMAND_ACK, COMMAND_LONG, HEARTBEAT, RC_CHANNELS_OVERRIDE, SCALED_PRESSURE,
    SERVO_OUTPUT_RAW,
};
use super::message::{Message, Scalar};

/// MAV_CMD_COMPONENT_ARM_DISARM
pub const CMD_COMPONENT_ARM_DISARM: u16 = 400;
pub const MAV_RESULT_ACCEPTED: u8 = 0;
pub const MAV_MODE_FLAG_SAFETY_ARMED: u8 = 0x80;
pub const MAV_MODE_FLAG_CUSTOM_MODE_ENABLED: u8 = 0x01;
pub const MAV_TYPE_SUBMARINE: u8 = 12;
pub const MAV_TYPE_ONBOARD_CONTROLLER: u8 = 18;
pub const MAV_AUTOPILOT_ARDUPILOTMEGA: u8 = 3;
pub const MAV_AUTOPILOT_INVALID: u8 = 8;
pub const MAV_STATE_STANDBY: u8 = 3;
pub const MAV_STATE_ACTIVE: u8 = 4;

fn scalar(msg: &Message, name: &str) -> Option<Scalar> {
    msg.get(name).and_then(|v| v.first().copied())
}

macro_rules! get {
    ($msg:expr, $name:literal, $variant:ident) => {
        match scalar($msg, $name)? {
            Scalar::$variant(v) => v,
            _ => return None,
        }
    };
}

fn build(def: &'static super::def::MessageDef, values: &[(&str, Scalar)]) -> Message {
    let mut msg = Message::new(def);
    for (name, v) in values {
        msg.set(name, *v).expect("typed view matches schema");
    }
    debug_assert!(msg.is_complete());
    msg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Heartbeat {
    pub mav_type: u8,
    pub autopilot: u8,
    pub base_mode: u8,
    pub custom_mode: u32,
    pub system_status: u8,
    pub mavlink_version: u8,
}

impl Heartbeat {
    pub fn armed(&self) -> bool {
        self.base_mode & MAV_MODE_FLAG_SAFETY_ARMED != 0
    }

    pub fn to_message(&self) -> Message {
        build(
            &HEARTBEAT,
            &[
                ("type", Scalar::U8(self.mav_type)),
                ("autopilot", Scalar::U8(self.autopilot)),
                ("base_mode", Scalar::U8(self.base_mode)),
                ("custom_mode", Scalar::U32(self.custom_mode)),
                ("system_status", Scalar::U8(self.system_status)),
                ("mavlink_version", Scalar::U8(self.mavlink_version)),
            ],
        )
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != HEARTBEAT.msg_id {
            return None;
        }
        Some(Self {
            mav_type: get!(msg, "type", U8),
            autopilot: get!(msg, "autopilot", U8),
            base_mode: get!(msg, "base_mode", U8),
            custom_mode: get!(msg, "custom_mode", U32),
            system_status: get!(msg, "system_status", U8),
            mavlink_version: get!(msg, "mavlink_version", U8),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPressure {
    pub time_boot_ms: u32,
    pub press_abs: f32,
    pub press_diff: f32,
    pub temperature: i16,
}

impl ScaledPressure {
    pub fn to_message(&self) -> Message {
        build(
            &SCALED_PRESSURE,
            &[
                ("time_boot_ms", Scalar::U32(self.time_boot_ms)),
                ("press_abs", Scalar::F32(self.press_abs)),
                ("press_diff", Scalar::F32(self.press_diff)),
                ("temperature", Scalar::I16(self.temperature)),
            ],
        )
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != SCALED_PRESSURE.msg_id {
            return None;
        }
        Some(Self {
            time_boot_ms: get!(msg, "time_boot_ms", U32),
            press_abs: get!(msg, "press_abs", F32),
            press_diff: get!(msg, "press_diff", F32),
            temperature: get!(msg, "temperature", I16),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attitude {
    pub time_boot_ms: u32,
    pub roll: f32,
    pub pitch: f32,
    pub yaw: f32,
    pub rollspeed: f32,
    pub pitchspeed: f32,
    pub yawspeed: f32,
}

impl Attitude {
    pub fn to_message(&self) -> Message {
        build(
            &ATTITUDE,
            &[
                ("time_boot_ms", Scalar::U32(self.time_boot_ms)),
                ("roll", Scalar::F32(self.roll)),
                ("pitch", Scalar::F32(self.pitch)),
                ("yaw", Scalar::F32(self.yaw)),
                ("rollspeed", Scalar::F32(self.rollspeed)),
                ("pitchspeed", Scalar::F32(self.pitchspeed)),
                ("yawspeed", Scalar::F32(self.yawspeed)),
            ],
        )
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != ATTITUDE.msg_id {
            return None;
        }
        Some(Self {
            time_boot_ms: get!(msg, "time_boot_ms", U32),
            roll: get!(msg, "roll", F32),
            pitch: get!(msg, "pitch", F32),
            yaw: get!(msg, "yaw", F32),
            rollspeed: get!(msg, "rollspeed", F32),
            pitchspeed: get!(msg, "pitchspeed", F32),
            yawspeed: get!(msg, "yawspeed", F32),
        })
    }
}

const SERVO_NAMES: [&str; 8] = [
    "servo1_raw", "servo2_raw", "servo3_raw", "servo4_raw", "servo5_raw", "servo6_raw",
    "servo7_raw", "servo8_raw",
];

const CHAN_NAMES: [&str; 8] = [
    "chan1_raw", "chan2_raw", "chan3_raw", "chan4_raw", "chan5_raw", "chan6_raw", "chan7_raw",
    "chan8_raw",
];

fn u16_array(msg: &Message, names: &[&str; 8]) -> Option<[u16; 8]> {
    let mut out = [0u16; 8];
    for (slot, name) in out.iter_mut().zip(names) {
        *slot = match scalar(msg, name)? {
            Scalar::U16(v) => v,
            _ => return None,
        };
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServoOutputRaw {
    pub time_usec: u32,
    pub port: u8,
    pub servo_raw: [u16; 8],
}

impl ServoOutputRaw {
    pub fn to_message(&self) -> Message {
        let mut msg = Message::new(&SERVO_OUTPUT_RAW);
        msg.set("time_usec", Scalar::U32(self.time_usec)).unwrap();
        msg.set("port", Scalar::U8(self.port)).unwrap();
        for (name, v) in SERVO_NAMES.iter().zip(self.servo_raw) {
            msg.set(name, Scalar::U16(v)).unwrap();
        }
        msg
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != SERVO_OUTPUT_RAW.msg_id {
            return None;
        }
        Some(Self {
            time_usec: get!(msg, "time_usec", U32),
            port: get!(msg, "port", U8),
            servo_raw: u16_array(msg, &SERVO_NAMES)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RcChannelsOverride {
    pub target_system: u8,
    pub target_component: u8,
    pub chan_raw: [u16; 8],
}

impl RcChannelsOverride {
    pub fn to_message(&self) -> Message {
        let mut msg = Message::new(&RC_CHANNELS_OVERRIDE);
        msg.set("target_system", Scalar::U8(self.target_system)).unwrap();
        msg.set("target_component", Scalar::U8(self.target_component)).unwrap();
        for (name, v) in CHAN_NAMES.iter().zip(self.chan_raw) {
            msg.set(name, Scalar::U16(v)).unwrap();
        }
        msg
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != RC_CHANNELS_OVERRIDE.msg_id {
            return None;
        }
        Some(Self {
            target_system: get!(msg, "target_system", U8),
            target_component: get!(msg, "target_component", U8),
            chan_raw: u16_array(msg, &CHAN_NAMES)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommandLong {
    pub target_system: u8,
    pub target_component: u8,
    pub command: u16,
    pub confirmation: u8,
    pub params: [f32; 7],
}

impl CommandLong {
    pub fn arm_disarm(target_system: u8, target_component: u8, arm: bool) -> Self {
        let mut params = [0.0; 7];
        params[0] = if arm { 1.0 } else { 0.0 };
        Self {
            target_system,
            target_component,
            command: CMD_COMPONENT_ARM_DISARM,
            confirmation: 0,
            params,
        }
    }

    pub fn to_message(&self) -> Message {
        let mut msg = Message::new(&COMMAND_LONG);
        msg.set("target_system", Scalar::U8(self.target_system)).unwrap();
        msg.set("target_component", Scalar::U8(self.target_component)).unwrap();
        msg.set("command", Scalar::U16(self.command)).unwrap();
        msg.set("confirmation", Scalar::U8(self.confirmation)).unwrap();
        for (i, p) in self.params.iter().enumerate() {
            msg.set(&format!("param{}", i + 1), Scalar::F32(*p)).unwrap();
        }
        msg
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != COMMAND_LONG.msg_id {
            return None;
        }
        let mut params = [0.0f32; 7];
        for (i, p) in params.iter_mut().enumerate() {
            *p = match scalar(msg, &format!("param{}", i + 1))? {
                Scalar::F32(v) => v,
                _ => return None,
            };
        }
        Some(Self {
            target_system: get!(msg, "target_system", U8),
            target_component: get!(msg, "target_component", U8),
            command: get!(msg, "command", U16),
            confirmation: get!(msg, "confirmation", U8),
            params,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommandAck {
    pub command: u16,
    pub result: u8,
}

impl CommandAck {
    pub fn to_message(&self) -> Message {
        build(
            &COMMAND_ACK,
            &[("command", Scalar::U16(self.command)), ("result", Scalar::U8(self.result))],
        )
    }

    pub fn from_message(msg: &Message) -> Option<Self> {
        if msg.msg_id() != COMMAND_ACK.msg_id {
            return None;
        }
        Some(Self { command: get!(msg, "command", U16), result: get!(msg, "result", U8) })
    }
}
