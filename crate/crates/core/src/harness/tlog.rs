//! Telemetry log: per record an 8-byte big-endian microsecond timestamp, then one raw v1 frame.

use super::HarnessError;
use crate::mavproto::message::{FRAME_OVERHEAD, MAGIC_V1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TlogRecord {
    pub timestamp_us: u64,
    pub frame: Vec<u8>,
}

/// Length the frame claims for itself, if it has a v1 header.
fn framed_len(frame: &[u8]) -> Option<usize> {
    match frame {
        [MAGIC_V1, len, ..] => Some(*len as usize + FRAME_OVERHEAD),
        _ => None,
    }
}

pub fn write_tlog(records: &[TlogRecord]) -> Result<Vec<u8>, HarnessError> {
    let mut out = Vec::with_capacity(records.iter().map(|r| r.frame.len() + 8).sum());
    let mut prev = 0u64;
    for (i, r) in records.iter().enumerate() {
        if r.timestamp_us < prev {
            return Err(HarnessError::InvalidRecord {
                index: i,
                reason: format!("timestamp {} precedes {}", r.timestamp_us, prev),
            });
        }
        if framed_len(&r.frame) != Some(r.frame.len()) {
            // the reader relies on the header's length byte to find the next record
            return Err(HarnessError::InvalidRecord {
                index: i,
                reason: "not a complete v1 frame".into(),
            });
        }
        prev = r.timestamp_us;
        out.extend_from_slice(&r.timestamp_us.to_be_bytes());
        out.extend_from_slice(&r.frame);
    }
    Ok(out)
}

pub fn read_tlog(bytes: &[u8]) -> Result<Vec<TlogRecord>, HarnessError> {
    let mut out = Vec::new();
    let mut pos = 0;
    let mut prev = 0u64;
    while pos < bytes.len() {
        let corrupt = |offset, reason: &str| HarnessError::CorruptLog { offset, reason: reason.into() };
        let Some(ts) = bytes.get(pos..pos + 8) else {
            return Err(corrupt(pos, "truncated timestamp"));
        };
        let ts = u64::from_be_bytes(ts.try_into().unwrap());
        if ts < prev {
            return Err(corrupt(pos, "timestamps go backwards"));
        }
        let start = pos + 8;
        let len = framed_len(&bytes[start..]).ok_or_else(|| {
            if start >= bytes.len() {
                corrupt(start, "truncated frame")
            } else if bytes[start] != MAGIC_V1 {
                corrupt(start, "frame does not start with 0xFE")
            } else {
                corrupt(start, "truncated frame")
            }
        })?;
        let Some(frame) = bytes.get(start..start + len) else {
            return Err(corrupt(start, "truncated frame"));
        };
        out.push(TlogRecord { timestamp_us: ts, frame: frame.to_vec() });
        prev = ts;
        pos = start + len;
    }
    Ok(out)
}
