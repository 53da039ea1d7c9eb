//! Decode a tlog into one CSV row per frame.

use std::fmt::Write;

use super::tlog::read_tlog;
use super::HarnessError;
use crate::mavproto::{Message, ParserState};

pub const REPLAY_HEADER: &str = "timestamp_us,seq,sys_id,comp_id,msg_id,msg_name,fields";

/// `name=value` pairs joined by `;`, array elements joined by `|`.
pub fn format_fields(msg: &Message) -> String {
    let mut out = String::new();
    for (i, (name, values)) in msg.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(name);
        out.push('=');
        for (j, v) in values.iter().enumerate() {
            if j > 0 {
                out.push('|');
            }
            write!(out, "{v}").unwrap();
        }
    }
    out
}

pub fn tlog_to_csv(bytes: &[u8]) -> Result<String, HarnessError> {
    let mut out = String::from(REPLAY_HEADER);
    out.push('\n');
    for rec in read_tlog(bytes)? {
        let f = &rec.frame;
        let decoded = ParserState::new().feed(f);
        match decoded.frames.first() {
            Some(d) => writeln!(
                out,
                "{},{},{},{},{},{},{}",
                rec.timestamp_us,
                d.header.seq,
                d.header.sys_id,
                d.header.comp_id,
                d.message.msg_id(),
                d.message.name(),
                format_fields(&d.message)
            )
            .unwrap(),
            None => {
                let why = decoded.diagnostics.first().map_or("undecodable".to_string(), |d| format!("{d:?}"));
                writeln!(out, "{},{},{},{},{},,error={}", rec.timestamp_us, f[2], f[3], f[4], f[5], why.replace(',', ";"))
                    .unwrap()
            }
        }
    }
    Ok(out)
}
