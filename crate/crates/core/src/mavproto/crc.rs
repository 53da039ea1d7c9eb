//! X.25 / MCRF4XX checksum used by MAVLink frames.

/// Accumulator seed for every MAVLink checksum.
pub const CRC_INIT: u16 = 0xFFFF;

/// Fold one byte into the accumulator.
#[inline]
pub fn crc16_byte(acc: u16, byte: u8) -> u16 {
    let mut t = byte ^ (acc & 0xFF) as u8;
    t ^= t << 4;
    let t = t as u16;
    (acc >> 8) ^ (t << 8) ^ (t << 3) ^ (t >> 4)
}

/// Fold `data` into `init`. Splitting `data` across calls gives the same result.
pub fn crc16_accumulate(data: &[u8], init: u16) -> u16 {
    data.iter().fold(init, |acc, &b| crc16_byte(acc, b))
}

/// Convenience wrapper starting from [`CRC_INIT`].
pub fn crc16(data: &[u8]) -> u16 {
    crc16_accumulate(data, CRC_INIT)
}
