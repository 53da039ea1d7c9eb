use serde::{Deserialize, Serialize};

use crate::fcu::DisarmReason;
use crate::guidance::Phase;

/// Summary of one run. Everything except `wall_time` is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub gate_passed: bool,
    pub t_first_gate_detect: Option<f64>,
    /// When gate alignment completed and the pass began.
    pub t_aligned: Option<f64>,
    pub t_gate_passed: Option<f64>,
    /// Closest approach of the vehicle centre to any flare, metres.
    pub min_flare_distance: Option<f64>,
    pub final_phase: Phase,
    pub disarm_reason: Option<DisarmReason>,
    /// Simulated seconds.
    pub sim_time: f64,
    pub frames_sent: u64,
    /// Frames the receivers rejected (CRC, length or unknown id).
    pub frames_rejected: u64,
    pub wall_time: f64,
}

impl RunReport {
    /// Copy with the wall-clock field zeroed, for comparing runs.
    pub fn without_wall_time(&self) -> RunReport {
        RunReport { wall_time: 0.0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Times that are present must be ordered, and a pass needs its timestamp.
    pub fn is_consistent(&self) -> bool {
        let times: Vec<f64> =
            [self.t_first_gate_detect, self.t_aligned, self.t_gate_passed].into_iter().flatten().collect();
        times.windows(2).all(|w| w[0] <= w[1]) && (!self.gate_passed || self.t_gate_passed.is_some())
    }
}
