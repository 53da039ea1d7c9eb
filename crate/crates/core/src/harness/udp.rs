//! Live copy of controller-to-companion traffic for an external ground station.

use std::io;
use std::net::{SocketAddr, ToSocketAddrs, UdpSocket};

pub const DEFAULT_UDP_TARGET: &str = "127.0.0.1:14550";

#[derive(Debug)]
pub struct UdpMirror {
    socket: UdpSocket,
    target: SocketAddr,
    sent: u64,
    failed: u64,
}

impl UdpMirror {
    pub fn connect(target: impl ToSocketAddrs) -> io::Result<UdpMirror> {
        let target = target
            .to_socket_addrs()?
            .next()
            .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "no address"))?;
        let bind: SocketAddr = if target.is_ipv4() { "0.0.0.0:0" } else { "[::]:0" }.parse().unwrap();
        let socket = UdpSocket::bind(bind)?;
        Ok(UdpMirror { socket, target, sent: 0, failed: 0 })
    }

    /// Best effort: a missing listener must not disturb the run.
    pub fn send(&mut self, frame: &[u8]) {
        match self.socket.send_to(frame, self.target) {
            Ok(_) => self.sent += 1,
            Err(_) => self.failed += 1,
        }
    }

    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn failed(&self) -> u64 {
        self.failed
    }

    pub fn target(&self) -> SocketAddr {
        self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_arrive_verbatim() {
        let rx = UdpSocket::bind("127.0.0.1:0").unwrap();
        rx.set_read_timeout(Some(std::time::Duration::from_secs(2))).unwrap();
        let mut m = UdpMirror::connect(rx.local_addr().unwrap()).unwrap();
        m.send(&[0xFE, 0, 1, 2, 3, 4, 5, 6]);
        let mut buf = [0u8; 64];
        let (n, _) = rx.recv_from(&mut buf).unwrap();
        assert_eq!(&buf[..n], &[0xFE, 0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(m.sent(), 1);
    }
}
