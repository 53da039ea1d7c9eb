//! Incremental MAVLink v1 stream decoder.
//!
//! Bytes may arrive in arbitrary chunks. The parser scans for the 0xFE start
//! marker, checks the header against the registry, waits for the full frame,
//! and validates the checksum. Any failure is reported as a [`Diagnostic`];
//! scanning then resumes one byte after the rejected start marker so that a
//! valid frame hidden behind a corrupt one is still recovered.

use super::def::registry;
use super::message::{frame_checksum, FrameHeader, Message, FRAME_OVERHEAD, HEADER_LEN, MAGIC_V1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedFrame {
    pub header: FrameHeader,
    pub message: Message,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostic {
    /// Checksum over header, payload and CRC_EXTRA did not match.
    CrcMismatch { msg_id: u8, expected: u16, received: u16 },
    /// Known message id whose length byte disagrees with the schema.
    LengthMismatch { msg_id: u8, expected: u8, received: u8 },
    /// No schema for this id; the frame was skipped unverified.
    UnknownMsgId { msg_id: u8, payload_len: u8 },
}

/// Parser state: the bytes of a not-yet-complete frame. Owned by one caller.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParserState {
    buf: Vec<u8>,
    skipped: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeOutput {
    pub frames: Vec<DecodedFrame>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParserState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bytes held back waiting for the rest of a frame.
    pub fn pending_bytes(&self) -> usize {
        self.buf.len()
    }

    /// Total bytes discarded while hunting for a start marker.
    pub fn skipped_bytes(&self) -> u64 {
        self.skipped
    }

    pub fn feed(&mut self, bytes: &[u8]) -> DecodeOutput {
        let mut out = DecodeOutput::default();
        self.feed_into(bytes, &mut out);
        out
    }

    pub fn feed_into(&mut self, bytes: &[u8], out: &mut DecodeOutput) {
        self.buf.extend_from_slice(bytes);
        let mut pos = 0;
        loop {
            match self.buf[pos..].iter().position(|&b| b == MAGIC_V1) {
                Some(off) => {
                    self.skipped += off as u64;
                    pos += off;
                }
                None => {
                    self.skipped += (self.buf.len() - pos) as u64;
                    pos = self.buf.len();
                    break;
                }
            }
            let rest = &self.buf[pos..];
            if rest.len() < HEADER_LEN {
                break;
            }
            let payload_len = rest[1];
            let msg_id = rest[5];
            let entry = registry().get(msg_id);
            if let Some(entry) = entry {
                if entry.payload_len != payload_len as usize {
                    out.diagnostics.push(Diagnostic::LengthMismatch {
                        msg_id,
                        expected: entry.payload_len as u8,
                        received: payload_len,
                    });
                    pos += 1;
                    continue;
                }
            }
            let frame_len = FRAME_OVERHEAD + payload_len as usize;
            if rest.len() < frame_len {
                break;
            }
            let Some(entry) = entry else {
                out.diagnostics.push(Diagnostic::UnknownMsgId { msg_id, payload_len });
                pos += frame_len;
                continue;
            };
            let body = &rest[1..HEADER_LEN + payload_len as usize];
            let expected = frame_checksum(body, entry.crc_extra);
            let received = u16::from_le_bytes([rest[frame_len - 2], rest[frame_len - 1]]);
            if expected != received {
                out.diagnostics.push(Diagnostic::CrcMismatch { msg_id, expected, received });
                pos += 1;
                continue;
            }
            let header = FrameHeader { seq: rest[2], sys_id: rest[3], comp_id: rest[4] };
            let message = Message::from_payload(entry.def, &rest[HEADER_LEN..frame_len - 2])
                .expect("length checked against schema");
            out.frames.push(DecodedFrame { header, message });
            pos += frame_len;
        }
        self.buf.drain(..pos);
    }
}

/// Functional form: consume `state`, return what decoded plus the successor state.
pub fn decode_stream(
    buffer: &[u8],
    mut state: ParserState,
) -> (Vec<DecodedFrame>, Vec<Diagnostic>, ParserState) {
    let out = state.feed(buffer);
    (out.frames, out.diagnostics, state)
}
