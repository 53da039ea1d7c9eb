//! Run trace as CSV, one row per 0.1 s. Floats use six decimals so the text is stable for hashing.

use std::fmt::Write;

use crate::guidance::Phase;
use crate::percept::Label;

pub const CSV_HEADER: &str =
    "t,x,y,depth,roll,pitch,yaw,pwm1,pwm2,pwm3,pwm4,pwm5,pwm6,phase,det_label,det_score,dx,dy";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDetection {
    pub label: Label,
    pub score: f64,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub depth: f64,
    /// Radians.
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
    pub pwm: [u16; 6],
    pub phase: Phase,
    pub detection: Option<TraceDetection>,
}

/// Six decimals, with negative zero printed as zero.
fn f6(out: &mut String, v: f64) {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        out.push_str(&s[1..]);
    } else {
        out.push_str(&s);
    }
}

pub fn write_row(out: &mut String, r: &TraceRow) {
    for v in [r.t, r.x, r.y, r.depth, r.roll, r.pitch, r.yaw] {
        f6(out, v);
        out.push(',');
    }
    for p in r.pwm {
        write!(out, "{p},").unwrap();
    }
    out.push_str(r.phase.as_str());
    out.push(',');
    match r.detection {
        Some(d) => {
            out.push_str(d.label.as_str());
            out.push(',');
            f6(out, d.score);
            out.push(',');
            f6(out, d.dx);
            out.push(',');
            f6(out, d.dy);
        }
        None => out.push_str(",,,"),
    }
    out.push('\n');
}

pub fn write_csv(rows: &[TraceRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        write_row(&mut out, r);
    }
    out
}
