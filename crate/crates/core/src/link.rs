//! Simulated serial link between companion computer and flight controller.
//!
//! Each side owns an [`Endpoint`] holding its outbound queue; the peer polls
//! that queue. Every frame is delayed by the configured latency and may have
//! exactly one bit flipped. Frames are never dropped or reordered.

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rng::stream_rng;

/// Slack for comparing simulated timestamps built from integer step counts.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkPreset {
    /// Tethered ethernet bridge.
    Wired,
    /// Radio bridge.
    Wireless,
}

impl LinkPreset {
    /// Placeholder figures; no measured link quality is available for either path.
    pub fn latency(self) -> f64 {
        match self {
            LinkPreset::Wired => 0.005,
            LinkPreset::Wireless => 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkConfig {
    /// One-way transport delay, seconds.
    pub latency: f64,
    /// Probability that a frame has one bit flipped in transit.
    pub bit_corruption_prob: f64,
    /// 0 means "derive from the scenario seed".
    pub seed: u64,
    pub heartbeat_interval: f64,
    pub failsafe_timeout: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            latency: LinkPreset::Wired.latency(),
            bit_corruption_prob: 0.0,
            seed: 0,
            heartbeat_interval: 1.0,
            failsafe_timeout: 3.0,
        }
    }
}

impl LinkConfig {
    pub fn preset(preset: LinkPreset) -> Self {
        Self { latency: preset.latency(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if !self.latency.is_finite() || self.latency < 0.0 {
            return Err(("link.latency", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.bit_corruption_prob) {
            return Err(("link.bit_corruption_prob", "must be in [0, 1]"));
        }
        if !(self.heartbeat_interval > 0.0 && self.heartbeat_interval.is_finite()) {
            return Err(("link.heartbeat_interval", "must be > 0"));
        }
        if !(self.failsafe_timeout > 0.0 && self.failsafe_timeout.is_finite()) {
            return Err(("link.failsafe_timeout", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkState {
    Ok,
    Lost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    /// What the receiver sees, possibly with one bit flipped.
    pub bytes: Vec<u8>,
    /// The frame as it was transmitted.
    pub original: Vec<u8>,
    pub corrupted: bool,
}

#[derive(Debug, Clone)]
struct InFlight {
    due: f64,
    bytes: Vec<u8>,
    original: Vec<u8>,
    corrupted: bool,
}

#[derive(Debug, Clone)]
pub struct Endpoint {
    config: LinkConfig,
    queue: VecDeque<InFlight>,
    last_heartbeat_rx: f64,
    last_heartbeat_tx: f64,
    rng: ChaCha8Rng,
}

impl Endpoint {
    /// `stream` separates the corruption RNG of the two directions sharing a seed.
    pub fn new(config: LinkConfig, stream: u64) -> Self {
        let rng = stream_rng(config.seed, stream);
        Self {
            config,
            queue: VecDeque::new(),
            last_heartbeat_rx: f64::NEG_INFINITY,
            last_heartbeat_tx: f64::NEG_INFINITY,
            rng,
        }
    }

    pub fn config(&self) -> &LinkConfig {
        &self.config
    }

    pub fn in_flight(&self) -> usize {
        self.queue.len()
    }

    pub fn transmit(&mut self, frame: Vec<u8>, now: f64) {
        assert!(!frame.is_empty(), "cannot transmit an empty frame");
        let due = now + self.config.latency;
        // queue stays sorted: latency is constant and callers advance time monotonically
        debug_assert!(self.queue.back().is_none_or(|f| f.due <= due + TIME_EPS));
        let mut bytes = frame.clone();
        let p = self.config.bit_corruption_prob;
        let corrupted = p > 0.0 && self.rng.random::<f64>() < p;
        if corrupted {
            let bit = self.rng.random_range(0..bytes.len() * 8);
            bytes[bit / 8] ^= 1 << (bit % 8);
        }
        self.queue.push_back(InFlight { due, bytes, original: frame, corrupted });
    }

    /// Remove and return, in transmission order, every frame due at or before `now`.
    pub fn poll(&mut self, now: f64) -> Vec<Delivery> {
        let mut out = Vec::new();
        while self.queue.front().is_some_and(|f| f.due <= now + TIME_EPS) {
            let f = self.queue.pop_front().unwrap();
            out.push(Delivery { bytes: f.bytes, original: f.original, corrupted: f.corrupted });
        }
        out
    }

    pub fn heartbeat_due(&self, now: f64) -> bool {
        now - self.last_heartbeat_tx >= self.config.heartbeat_interval - TIME_EPS
    }

    pub fn mark_heartbeat_tx(&mut self, now: f64) {
        self.last_heartbeat_tx = self.last_heartbeat_tx.max(now);
    }

    pub fn record_heartbeat_rx(&mut self, now: f64) {
        self.last_heartbeat_rx = self.last_heartbeat_rx.max(now);
    }

    pub fn last_heartbeat_rx(&self) -> f64 {
        self.last_heartbeat_rx
    }

    pub fn last_heartbeat_tx(&self) -> f64 {
        self.last_heartbeat_tx
    }

    pub fn failsafe_state(&self, now: f64) -> LinkState {
        if now - self.last_heartbeat_rx > self.config.failsafe_timeout {
            LinkState::Lost
        } else {
            LinkState::Ok
        }
    }
}
