//! Decoded message values and frame encoding.

use std::fmt;

use super::crc::{crc16_accumulate, crc16_byte, CRC_INIT};
use super::def::{registry, FieldDef, MessageDef, ScalarKind};
use super::ProtoError;

pub const MAGIC_V1: u8 = 0xFE;
pub const HEADER_LEN: usize = 6;
pub const CHECKSUM_LEN: usize = 2;
pub const FRAME_OVERHEAD: usize = HEADER_LEN + CHECKSUM_LEN;

/// A single wire scalar. Floats compare by bit pattern so NaN payloads round-trip.
#[derive(Debug, Clone, Copy)]
pub enum Scalar {
    U8(u8),
    U16(u16),
    U32(u32),
    U64(u64),
    I8(i8),
    I16(i16),
    I32(i32),
    I64(i64),
    F32(f32),
    F64(f64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        use Scalar::*;
        match (self, other) {
            (U8(a), U8(b)) => a == b,
            (U16(a), U16(b)) => a == b,
            (U32(a), U32(b)) => a == b,
            (U64(a), U64(b)) => a == b,
            (I8(a), I8(b)) => a == b,
            (I16(a), I16(b)) => a == b,
            (I32(a), I32(b)) => a == b,
            (I64(a), I64(b)) => a == b,
            (F32(a), F32(b)) => a.to_bits() == b.to_bits(),
            (F64(a), F64(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::U8(_) => ScalarKind::U8,
            Scalar::U16(_) => ScalarKind::U16,
            Scalar::U32(_) => ScalarKind::U32,
            Scalar::U64(_) => ScalarKind::U64,
            Scalar::I8(_) => ScalarKind::I8,
            Scalar::I16(_) => ScalarKind::I16,
            Scalar::I32(_) => ScalarKind::I32,
            Scalar::I64(_) => ScalarKind::I64,
            Scalar::F32(_) => ScalarKind::F32,
            Scalar::F64(_) => ScalarKind::F64,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Scalar::U8(v) => v as f64,
            Scalar::U16(v) => v as f64,
            Scalar::U32(v) => v as f64,
            Scalar::U64(v) => v as f64,
            Scalar::I8(v) => v as f64,
            Scalar::I16(v) => v as f64,
            Scalar::I32(v) => v as f64,
            Scalar::I64(v) => v as f64,
            Scalar::F32(v) => v as f64,
            Scalar::F64(v) => v,
        }
    }

    /// Convert a number into `kind`. Integers must be integral and in range.
    pub fn from_f64(kind: ScalarKind, value: f64) -> Option<Scalar> {
        if kind.is_float() {
            return Some(match kind {
                ScalarKind::F32 => Scalar::F32(value as f32),
                _ => Scalar::F64(value),
            });
        }
        if !value.is_finite() || value.fract() != 0.0 {
            return None;
        }
        macro_rules! int {
            ($t:ty, $v:ident) => {{
                if value < <$t>::MIN as f64 || value > <$t>::MAX as f64 {
                    return None;
                }
                Scalar::$v(value as $t)
            }};
        }
        Some(match kind {
            ScalarKind::U8 => int!(u8, U8),
            ScalarKind::U16 => int!(u16, U16),
            ScalarKind::U32 => int!(u32, U32),
            ScalarKind::U64 => int!(u64, U64),
            ScalarKind::I8 => int!(i8, I8),
            ScalarKind::I16 => int!(i16, I16),
            ScalarKind::I32 => int!(i32, I32),
            ScalarKind::I64 => int!(i64, I64),
            ScalarKind::F32 | ScalarKind::F64 => unreachable!(),
        })
    }

    fn write_le(&self, out: &mut Vec<u8>) {
        match *self {
            Scalar::U8(v) => out.push(v),
            Scalar::U16(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::U32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::U64(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::I8(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::I16(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::I32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::I64(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::F32(v) => out.extend_from_slice(&v.to_le_bytes()),
            Scalar::F64(v) => out.extend_from_slice(&v.to_le_bytes()),
        }
    }

    fn read_le(kind: ScalarKind, b: &[u8]) -> Scalar {
        match kind {
            ScalarKind::U8 => Scalar::U8(b[0]),
            ScalarKind::I8 => Scalar::I8(b[0] as i8),
            ScalarKind::U16 => Scalar::U16(u16::from_le_bytes([b[0], b[1]])),
            ScalarKind::I16 => Scalar::I16(i16::from_le_bytes([b[0], b[1]])),
            ScalarKind::U32 => Scalar::U32(u32::from_le_bytes(b[..4].try_into().unwrap())),
            ScalarKind::I32 => Scalar::I32(i32::from_le_bytes(b[..4].try_into().unwrap())),
            ScalarKind::F32 => Scalar::F32(f32::from_le_bytes(b[..4].try_into().unwrap())),
            ScalarKind::U64 => Scalar::U64(u64::from_le_bytes(b[..8].try_into().unwrap())),
            ScalarKind::I64 => Scalar::I64(i64::from_le_bytes(b[..8].try_into().unwrap())),
            ScalarKind::F64 => Scalar::F64(f64::from_le_bytes(b[..8].try_into().unwrap())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::U8(v) => write!(f, "{v}"),
            Scalar::U16(v) => write!(f, "{v}"),
            Scalar::U32(v) => write!(f, "{v}"),
            Scalar::U64(v) => write!(f, "{v}"),
            Scalar::I8(v) => write!(f, "{v}"),
            Scalar::I16(v) => write!(f, "{v}"),
            Scalar::I32(v) => write!(f, "{v}"),
            Scalar::I64(v) => write!(f, "{v}"),
            Scalar::F32(v) => write!(f, "{v}"),
            Scalar::F64(v) => write!(f, "{v}"),
        }
    }
}

/// A message instance: one value slot per schema field, in declaration order.
///
/// Slots start empty; [`encode_frame`] refuses a message with any empty slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    def: &'static MessageDef,
    values: Vec<Option<Vec<Scalar>>>,
}

impl Message {
    pub fn new(def: &'static MessageDef) -> Self {
        Self { def, values: vec![None; def.fields.len()] }
    }

    /// Every field set to zero.
    pub fn zeroed(def: &'static MessageDef) -> Self {
        let values = def
            .fields
            .iter()
            .map(|f| Some(vec![Scalar::from_f64(f.kind, 0.0).unwrap(); f.array_len]))
            .collect();
        Self { def, values }
    }

    pub fn def(&self) -> &'static MessageDef {
        self.def
    }

    pub fn msg_id(&self) -> u8 {
        self.def.msg_id
    }

    pub fn name(&self) -> &'static str {
        self.def.name
    }

    fn field(&self, name: &str) -> Result<(usize, &'static FieldDef), ProtoError> {
        let idx = self.def.field_index(name).ok_or_else(|| ProtoError::UnknownField {
            msg: self.def.name,
            field: name.to_owned(),
        })?;
        Ok((idx, &self.def.fields[idx]))
    }

    /// Set all elements of a field. Kinds and length must match the schema.
    pub fn set_values(&mut self, name: &str, values: Vec<Scalar>) -> Result<(), ProtoError> {
        let (idx, f) = self.field(name)?;
        if values.len() != f.array_len || values.iter().any(|v| v.kind() != f.kind) {
            return Err(ProtoError::FieldKindMismatch { msg: self.def.name, field: f.name });
        }
        self.values[idx] = Some(values);
        Ok(())
    }

    pub fn set(&mut self, name: &str, value: Scalar) -> Result<(), ProtoError> {
        self.set_values(name, vec![value])
    }

    /// Set element `index` of a field from a plain number, converting to the field's kind.
    /// Unset elements of an array field are zero-filled.
    pub fn set_num(&mut self, name: &str, index: usize, value: f64) -> Result<(), ProtoError> {
        let (idx, f) = self.field(name)?;
        if index >= f.array_len {
            return Err(ProtoError::IndexOutOfRange { msg: self.def.name, field: f.name, index });
        }
        let scalar = Scalar::from_f64(f.kind, value)
            .ok_or(ProtoError::ValueOutOfRange { msg: self.def.name, field: f.name, value })?;
        let slot = self.values[idx]
            .get_or_insert_with(|| vec![Scalar::from_f64(f.kind, 0.0).unwrap(); f.array_len]);
        slot[index] = scalar;
        Ok(())
    }

    /// Builder form of [`Message::set_num`] for scalar fields.
    pub fn with(mut self, name: &str, value: f64) -> Result<Self, ProtoError> {
        self.set_num(name, 0, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&[Scalar]> {
        let idx = self.def.field_index(name)?;
        self.values[idx].as_deref()
    }

    pub fn get_f64(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(|v| v.first()).map(Scalar::as_f64)
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// `(field name, values)` pairs in declaration order, skipping unset fields.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &[Scalar])> + '_ {
        self.def
            .fields
            .iter()
            .zip(&self.values)
            .filter_map(|(f, v)| v.as_deref().map(|v| (f.name, v)))
    }

    /// Little-endian payload in wire order.
    pub fn payload(&self) -> Result<Vec<u8>, ProtoError> {
        let len = self.def.payload_len();
        if len > 255 {
            return Err(ProtoError::PayloadTooLarge { name: self.def.name, len });
        }
        let mut out = Vec::with_capacity(len);
        for f in super::def::wire_order(self.def) {
            let idx = self.def.field_index(f.name).unwrap();
            let values = self.values[idx]
                .as_ref()
                .ok_or(ProtoError::MissingFieldValue { msg: self.def.name, field: f.name })?;
            for v in values {
                v.write_le(&mut out);
            }
        }
        Ok(out)
    }

    /// Inverse of [`Message::payload`]; `bytes` must be exactly the schema's payload length.
    pub fn from_payload(def: &'static MessageDef, bytes: &[u8]) -> Option<Self> {
        if bytes.len() != def.payload_len() {
            return None;
        }
        let mut msg = Message::new(def);
        let mut off = 0;
        for f in super::def::wire_order(def) {
            let idx = def.field_index(f.name).unwrap();
            let size = f.kind.size();
            let values = (0..f.array_len)
                .map(|i| Scalar::read_le(f.kind, &bytes[off + i * size..]))
                .collect();
            off += f.wire_size();
            msg.values[idx] = Some(values);
        }
        Some(msg)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.def.name)?;
        for (i, (name, values)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {name}: ")?;
            if values.len() == 1 {
                write!(f, "{}", values[0])?;
            } else {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))?;
            }
        }
        write!(f, " }}")
    }
}

/// Link-layer addressing carried in every frame header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameHeader {
    pub seq: u8,
    pub sys_id: u8,
    pub comp_id: u8,
}

/// Frame checksum: header bytes after the magic, then the payload, then CRC_EXTRA.
pub fn frame_checksum(header_and_payload: &[u8], crc_extra: u8) -> u16 {
    crc16_byte(crc16_accumulate(header_and_payload, CRC_INIT), crc_extra)
}

pub fn encode_frame(
    msg: &Message,
    seq: u8,
    sys_id: u8,
    comp_id: u8,
) -> Result<Vec<u8>, ProtoError> {
    let payload = msg.payload()?;
    let extra = match registry().get(msg.msg_id()) {
        Some(entry) if entry.def == msg.def => entry.crc_extra,
        _ => super::def::crc_extra(msg.def),
    };
    let mut out = Vec::with_capacity(FRAME_OVERHEAD + payload.len());
    out.push(MAGIC_V1);
    out.push(payload.len() as u8);
    out.push(seq);
    out.push(sys_id);
    out.push(comp_id);
    out.push(msg.msg_id());
    out.extend_from_slice(&payload);
    let crc = frame_checksum(&out[1..], extra);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}
