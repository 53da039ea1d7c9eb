//! Golden-vector files: one frame per line as lowercase hex.
//!
//! Blank lines are ignored when reading. Writers emit nothing but frames.

use super::ProtoError;

pub fn write_golden(frames: &[Vec<u8>]) -> String {
    let mut out = String::new();
    for f in frames {
        out.push_str(&hex::encode(f));
        out.push('\n');
    }
    out
}

pub fn read_golden(text: &str) -> Result<Vec<Vec<u8>>, ProtoError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let l = l.trim();
            if l.chars().any(|c| c.is_ascii_uppercase()) {
                return Err(ProtoError::GoldenFormat { line: i + 1, reason: "uppercase hex".into() });
            }
            hex::decode(l).map_err(|e| ProtoError::GoldenFormat { line: i + 1, reason: e.to_string() })
        })
        .collect()
}

/// Reference frames produced by an independent MAVLink 1.0 encoder.
pub const BUILTIN_GOLDEN: &str = include_str!("../../tests/data/golden_frames.hex");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_builtin_file() {
        let frames = read_golden(BUILTIN_GOLDEN).unwrap();
        assert_eq!(frames.len(), 7);
        assert_eq!(write_golden(&frames), BUILTIN_GOLDEN);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(read_golden("fe0\n").is_err());
        assert!(read_golden("FE00\n").is_err());
        assert_eq!(read_golden("\n\n").unwrap().len(), 0);
    }
}
