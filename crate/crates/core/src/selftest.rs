//! Built-in conformance checks: CRC check value, CRC_EXTRA table, golden frames.

use crate::mavproto::golden::{read_golden, BUILTIN_GOLDEN};
use crate::mavproto::{crc16, encode_frame, registry, ParserState};

/// CRC_EXTRA bytes published with the reference message set.
pub const REFERENCE_CRC_EXTRA: [(u8, u8); 7] =
    [(0, 50), (29, 115), (30, 39), (36, 222), (70, 124), (76, 152), (77, 143)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

pub fn run_selftest() -> Vec<Check> {
    let mut out = Vec::new();
    let c = crc16(b"123456789");
    out.push(check("crc16 check value", c == 0x6F91, format!("got 0x{c:04X}, want 0x6F91")));

    for (id, want) in REFERENCE_CRC_EXTRA {
        match registry().get(id) {
            Some(e) => out.push(check(
                format!("crc_extra {}", e.def.name),
                e.crc_extra == want,
                format!("got {}, want {want}", e.crc_extra),
            )),
            None => out.push(check(format!("crc_extra id {id}"), false, "not registered")),
        }
    }

    match read_golden(BUILTIN_GOLDEN) {
        Err(e) => out.push(check("golden file", false, e.to_string())),
        Ok(frames) => {
            for (i, f) in frames.iter().enumerate() {
                let d = ParserState::new().feed(f);
                let name = format!("golden frame {i}");
                match (d.frames.as_slice(), d.diagnostics.is_empty()) {
                    ([one], true) => {
                        let h = one.header;
                        let again = encode_frame(&one.message, h.seq, h.sys_id, h.comp_id);
                        let same = again.as_deref() == Ok(f.as_slice());
                        out.push(check(
                            name,
                            same,
                            format!("{} {}", one.message.name(), if same { "re-encodes identically" } else { "re-encodes differently" }),
                        ));
                    }
                    _ => out.push(check(name, false, format!("{:?}", d.diagnostics))),
                }
            }
        }
    }
    out
}
