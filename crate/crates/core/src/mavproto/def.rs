//! Message schemas and the compiled-in registry.

use std::sync::OnceLock;

use super::crc::{crc16_accumulate, CRC_INIT};
use super::ProtoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    U8,
    U16,
    U32,
    U64,
    I8,
    I16,
    I32,
    I64,
    F32,
    F64,
}

impl ScalarKind {
    pub const fn size(self) -> usize {
        match self {
            ScalarKind::U8 | ScalarKind::I8 => 1,
            ScalarKind::U16 | ScalarKind::I16 => 2,
            ScalarKind::U32 | ScalarKind::I32 | ScalarKind::F32 => 4,
            ScalarKind::U64 | ScalarKind::I64 | ScalarKind::F64 => 8,
        }
    }

    /// C type name as it appears in the CRC_EXTRA seed string.
    pub const fn c_name(self) -> &'static str {
        match self {
            ScalarKind::U8 => "uint8_t",
            ScalarKind::U16 => "uint16_t",
            ScalarKind::U32 => "uint32_t",
            ScalarKind::U64 => "uint64_t",
            ScalarKind::I8 => "int8_t",
            ScalarKind::I16 => "int16_t",
            ScalarKind::I32 => "int32_t",
            ScalarKind::I64 => "int64_t",
            ScalarKind::F32 => "float",
            ScalarKind::F64 => "double",
        }
    }

    pub const fn is_float(self) -> bool {
        matches!(self, ScalarKind::F32 | ScalarKind::F64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldDef {
    pub name: &'static str,
    pub kind: ScalarKind,
    pub array_len: usize,
}

impl FieldDef {
    pub const fn scalar(name: &'static str, kind: ScalarKind) -> Self {
        Self { name, kind, array_len: 1 }
    }

    pub const fn array(name: &'static str, kind: ScalarKind, array_len: usize) -> Self {
        Self { name, kind, array_len }
    }

    pub const fn wire_size(&self) -> usize {
        self.kind.size() * self.array_len
    }
}

/// Schema for one message type. Fields are listed in declaration order.
#[derive(Debug, PartialEq, Eq)]
pub struct MessageDef {
    pub name: &'static str,
    pub msg_id: u8,
    pub fields: &'static [FieldDef],
}

impl MessageDef {
    pub fn payload_len(&self) -> usize {
        self.fields.iter().map(FieldDef::wire_size).sum()
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.name == name)
    }

    pub fn validate(&self) -> Result<(), ProtoError> {
        let len = self.payload_len();
        if len > 255 {
            return Err(ProtoError::PayloadTooLarge { name: self.name, len });
        }
        for (i, f) in self.fields.iter().enumerate() {
            if f.array_len == 0 {
                return Err(ProtoError::InvalidDef {
                    name: self.name,
                    reason: format!("field {} has zero array length", f.name),
                });
            }
            if self.fields[..i].iter().any(|g| g.name == f.name) {
                return Err(ProtoError::InvalidDef {
                    name: self.name,
                    reason: format!("duplicate field {}", f.name),
                });
            }
        }
        Ok(())
    }
}

/// Fields sorted by scalar size, largest first; ties keep declaration order.
pub fn wire_order(def: &MessageDef) -> Vec<&FieldDef> {
    let mut fields: Vec<&FieldDef> = def.fields.iter().collect();
    // sort_by_key is stable
    fields.sort_by_key(|f| std::cmp::Reverse(f.kind.size()));
    fields
}

/// Per-message seed byte folded into every frame checksum.
pub fn crc_extra(def: &MessageDef) -> u8 {
    let mut acc = crc16_accumulate(def.name.as_bytes(), CRC_INIT);
    acc = crc16_accumulate(b" ", acc);
    for f in wire_order(def) {
        acc = crc16_accumulate(f.kind.c_name().as_bytes(), acc);
        acc = crc16_accumulate(b" ", acc);
        acc = crc16_accumulate(f.name.as_bytes(), acc);
        acc = crc16_accumulate(b" ", acc);
        if f.array_len > 1 {
            acc = crc16_accumulate(&[f.array_len as u8], acc);
        }
    }
    ((acc & 0xFF) ^ (acc >> 8)) as u8
}

use FieldDef as F;
use ScalarKind::*;

pub const HEARTBEAT: MessageDef = MessageDef {
    name: "HEARTBEAT",
    msg_id: 0,
    fields: &[
        F::scalar("type", U8),
        F::scalar("autopilot", U8),
        F::scalar("base_mode", U8),
        F::scalar("custom_mode", U32),
        F::scalar("system_status", U8),
        F::scalar("mavlink_version", U8),
    ],
};

pub const SCALED_PRESSURE: MessageDef = MessageDef {
    name: "SCALED_PRESSURE",
    msg_id: 29,
    fields: &[
        F::scalar("time_boot_ms", U32),
        F::scalar("press_abs", F32),
        F::scalar("press_diff", F32),
        F::scalar("temperature", I16),
    ],
};

pub const ATTITUDE: MessageDef = MessageDef {
    name: "ATTITUDE",
    msg_id: 30,
    fields: &[
        F::scalar("time_boot_ms", U32),
        F::scalar("roll", F32),
        F::scalar("pitch", F32),
        F::scalar("yaw", F32),
        F::scalar("rollspeed", F32),
        F::scalar("pitchspeed", F32),
        F::scalar("yawspeed", F32),
    ],
};

pub const SERVO_OUTPUT_RAW: MessageDef = MessageDef {
    name: "SERVO_OUTPUT_RAW",
    msg_id: 36,
    fields: &[
        F::scalar("time_usec", U32),
        F::scalar("port", U8),
        F::scalar("servo1_raw", U16),
        F::scalar("servo2_raw", U16),
        F::scalar("servo3_raw", U16),
        F::scalar("servo4_raw", U16),
        F::scalar("servo5_raw", U16),
        F::scalar("servo6_raw", U16),
        F::scalar("servo7_raw", U16),
        F::scalar("servo8_raw", U16),
    ],
};

pub const RC_CHANNELS_OVERRIDE: MessageDef = MessageDef {
    name: "RC_CHANNELS_OVERRIDE",
    msg_id: 70,
    fields: &[
        F::scalar("target_system", U8),
        F::scalar("target_component", U8),
        F::scalar("chan1_raw", U16),
        F::scalar("chan2_raw", U16),
        F::scalar("chan3_raw", U16),
        F::scalar("chan4_raw", U16),
        F::scalar("chan5_raw", U16),
        F::scalar("chan6_raw", U16),
        F::scalar("chan7_raw", U16),
        F::scalar("chan8_raw", U16),
    ],
};

pub const COMMAND_LONG: MessageDef = MessageDef {
    name: "COMMAND_LONG",
    msg_id: 76,
    fields: &[
        F::scalar("target_system", U8),
        F::scalar("target_component", U8),
        F::scalar("command", U16),
        F::scalar("confirmation", U8),
        F::scalar("param1", F32),
        F::scalar("param2", F32),
        F::scalar("param3", F32),
        F::scalar("param4", F32),
        F::scalar("param5", F32),
        F::scalar("param6", F32),
        F::scalar("param7", F32),
    ],
};

pub const COMMAND_ACK: MessageDef = MessageDef {
    name: "COMMAND_ACK",
    msg_id: 77,
    fields: &[F::scalar("command", U16), F::scalar("result", U8)],
};

/// Cached per-message framing facts.
#[derive(Debug)]
pub struct RegistryEntry {
    pub def: &'static MessageDef,
    pub crc_extra: u8,
    pub payload_len: usize,
    pub wire_order: Vec<usize>,
}

/// The compiled-in message set. Immutable once built.
#[derive(Debug)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    by_id: [Option<u8>; 256],
}

pub const BUILTIN_DEFS: [&MessageDef; 7] = [
    &HEARTBEAT,
    &SCALED_PRESSURE,
    &ATTITUDE,
    &SERVO_OUTPUT_RAW,
    &RC_CHANNELS_OVERRIDE,
    &COMMAND_LONG,
    &COMMAND_ACK,
];

impl Registry {
    fn build(defs: &[&'static MessageDef]) -> Result<Self, ProtoError> {
        let mut by_id = [None; 256];
        let mut entries = Vec::with_capacity(defs.len());
        for &def in defs {
            def.validate()?;
            if by_id[def.msg_id as usize].is_some() {
                return Err(ProtoError::InvalidDef {
                    name: def.name,
                    reason: format!("duplicate msg_id {}", def.msg_id),
                });
            }
            by_id[def.msg_id as usize] = Some(entries.len() as u8);
            let wire_order = wire_order(def)
                .into_iter()
                .map(|f| def.field_index(f.name).unwrap())
                .collect();
            entries.push(RegistryEntry {
                def,
                crc_extra: crc_extra(def),
                payload_len: def.payload_len(),
                wire_order,
            });
        }
        Ok(Self { entries, by_id })
    }

    pub fn get(&self, msg_id: u8) -> Option<&RegistryEntry> {
        self.by_id[msg_id as usize].map(|i| &self.entries[i as usize])
    }

    pub fn by_name(&self, name: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.def.name == name)
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }
}

pub fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| Registry::build(&BUILTIN_DEFS).expect("builtin registry is valid"))
}
