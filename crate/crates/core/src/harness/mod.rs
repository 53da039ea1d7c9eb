//! Closed-loop scheduler and its file formats.
//!
//! One simulation step (dt = 0.01 s) runs, in this fixed order:
//!
//! 1. hydro: integrate the vehicle under the previous step's thruster PWM
//! 2. fcu: read the link, arm/disarm, failsafe, stabilise, mix, emit telemetry
//! 3. percept: capture a camera frame if one falls on this step
//! 4. guidance: receive due detections and telemetry; decide every 10th step
//! 5. link flush: hand both outboxes to the transport
//!
//! Changing the order changes every output byte.

pub mod csv;
pub mod replay;
pub mod report;
pub mod scenario;
pub mod sim;
pub mod tlog;
pub mod udp;

use thiserror::Error;

pub use csv::{write_csv, TraceRow, CSV_HEADER};
pub use replay::{tlog_to_csv, REPLAY_HEADER};
pub use report::RunReport;
pub use scenario::{load_scenario, InitialPose, LoadedScenario, Scenario};
pub use sim::{run, settling_time, stabilization_trial, RunOptions, RunOutput, Simulation, DT};
pub use tlog::{read_tlog, write_tlog, TlogRecord};
pub use udp::UdpMirror;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid {field}: {constraint}")]
    Validation { field: String, constraint: String },
    #[error("simulation diverged at t = {t:.2} s: {reason}")]
    SimulationDiverged { t: f64, reason: String },
    #[error("corrupt tlog at byte {offset}: {reason}")]
    CorruptLog { offset: usize, reason: String },
    #[error("tlog record {index}: {reason}")]
    InvalidRecord { index: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn validation(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        HarnessError::Validation { field: field.into(), constraint: constraint.into() }
    }

    /// Process exit status used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. } | HarnessError::Validation { .. } => 2,
            HarnessError::SimulationDiverged { .. } => 3,
            _ => 1,
        }
    }
}

impl From<(&'static str, &'static str)> for HarnessError {
    fn from((field, constraint): (&'static str, &'static str)) -> Self {
        HarnessError::validation(field, constraint)
    }
}
