//! MAVLink v1 codec for the message subset the vehicle stack uses.
//!
//! Frame layout:
//!
//! ```text
//! 0xFE | len | seq | sys | comp | msg_id | payload[len] | crc_lo | crc_hi
//! ```
//!
//! The checksum covers `len` through the payload and then the message's
//! CRC_EXTRA byte, which is derived from the schema so both ends agree on
//! field layout.

pub mod crc;
pub mod def;
pub mod golden;
pub mod message;
pub mod msgs;
pub mod parser;

use thiserror::Error;

pub use crc::{crc16, crc16_accumulate, CRC_INIT};
pub use def::{crc_extra, registry, wire_order, FieldDef, MessageDef, Registry, ScalarKind};
pub use message::{encode_frame, FrameHeader, Message, Scalar, MAGIC_V1};
pub use parser::{decode_stream, DecodeOutput, DecodedFrame, Diagnostic, ParserState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtoError {
    #[error("{name}: payload of {len} bytes exceeds 255")]
    PayloadTooLarge { name: &'static str, len: usize },
    #[error("{msg}.{field} has no value")]
    MissingFieldValue { msg: &'static str, field: &'static str },
    #[error("{msg} has no field {field}")]
    UnknownField { msg: &'static str, field: String },
    #[error("{msg}.{field}: value kind or length does not match schema")]
    FieldKindMismatch { msg: &'static str, field: &'static str },
    #[error("{msg}.{field}: index {index} out of range")]
    IndexOutOfRange { msg: &'static str, field: &'static str, index: usize },
    #[error("{msg}.{field}: {value} does not fit the field type")]
    ValueOutOfRange { msg: &'static str, field: &'static str, value: f64 },
    #[error("invalid message definition {name}: {reason}")]
    InvalidDef { name: &'static str, reason: String },
    #[error("golden file line {line}: {reason}")]
    GoldenFormat { line: usize, reason: String },
}
