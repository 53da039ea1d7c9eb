use std::time::Instant;

use nalgebra::Vector3;
use rand_chacha::ChaCha8Rng;

use super::csv::{write_csv, TraceDetection, TraceRow};
use super::report::RunReport;
use super::scenario::Scenario;
use super::tlog::{write_tlog, TlogRecord};
use super::udp::UdpMirror;
use super::HarnessError;
use crate::fcu::{pressure_to_depth, FcuState, Mixer, PidGains};
use crate::guidance::{mission_step, primitive_to_rc, Command, MissionInputs, MissionState, Phase, StepOutput};
use crate::hydro::{self, ThrusterGeometry, VehicleParams, VehicleState};
use crate::link::{Endpoint, LinkConfig, LinkState};
use crate::mavproto::msgs::{
    CommandAck, CommandLong, Heartbeat, RcChannelsOverride, ScaledPressure, CMD_COMPONENT_ARM_DISARM,
    MAV_AUTOPILOT_INVALID, MAV_RESULT_ACCEPTED, MAV_STATE_ACTIVE, MAV_TYPE_ONBOARD_CONTROLLER,
};
use crate::mavproto::{encode_frame, Message, ParserState};
use crate::percept::{capture_step, render_detections, CameraPose, Detection, Label, LatencyQueue};
use crate::rng::{stream_rng, STREAM_LINK_TO_COMPANION, STREAM_LINK_TO_FCU, STREAM_PERCEPT};

pub const DT: f64 = 0.01;
const STEPS_PER_SECOND: f64 = 100.0;
/// Guidance decides, and the trace records a row, every this many steps.
pub const DECISION_EVERY: u64 = 10;

pub const FCU_SYS_ID: u8 = 1;
pub const FCU_COMP_ID: u8 = 1;
pub const COMPANION_SYS_ID: u8 = 1;
pub const COMPANION_COMP_ID: u8 = 191;

fn step_time(n: u64) -> f64 {
    n as f64 / STEPS_PER_SECOND
}

fn micros(t: f64) -> u64 {
    (t * 1e6).round() as u64
}

#[derive(Debug, Default)]
pub struct RunOptions {
    pub udp: Option<UdpMirror>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub tlog: Vec<u8>,
    pub csv: String,
    pub trace: Vec<TraceRow>,
}

struct FcuNode {
    state: FcuState,
    mixer: Mixer,
    /// Outbound towards the companion.
    endpoint: Endpoint,
    parser: ParserState,
    outbox: Vec<Vec<u8>>,
}

impl FcuNode {
    fn send(&mut self, msg: &Message) {
        let seq = self.state.next_seq();
        self.outbox.push(encode_frame(msg, seq, self.state.sys_id, self.state.comp_id).expect("complete message"));
    }
}

struct CompanionNode {
    mission: MissionState,
    /// Outbound towards the flight controller.
    endpoint: Endpoint,
    parser: ParserState,
    outbox: Vec<Vec<u8>>,
    seq: u8,
    pending: Vec<Detection>,
    armed: bool,
    depth: Option<f64>,
    requested_arm: Option<bool>,
    last_decision: Option<StepOutput>,
}

impl CompanionNode {
    fn send(&mut self, msg: &Message) {
        let seq = self.seq;
        self.seq = self.seq.wrapping_add(1);
        self.outbox.push(encode_frame(msg, seq, COMPANION_SYS_ID, COMPANION_COMP_ID).expect("complete message"));
    }

    fn heartbeat() -> Heartbeat {
        Heartbeat {
            mav_type: MAV_TYPE_ONBOARD_CONTROLLER,
            autopilot: MAV_AUTOPILOT_INVALID,
            base_mode: 0,
            custom_mode: 0,
            system_status: MAV_STATE_ACTIVE,
            mavlink_version: 3,
        }
    }

    fn handle_telemetry(&mut self, msg: &Message, now: f64) {
        if let Some(hb) = Heartbeat::from_message(msg) {
            self.endpoint.record_heartbeat_rx(now);
            self.armed = hb.armed();
        } else if let Some(ack) = CommandAck::from_message(msg) {
            if ack.command == CMD_COMPONENT_ARM_DISARM && ack.result == MAV_RESULT_ACCEPTED {
                if let Some(arm) = self.requested_arm.take() {
                    self.armed = arm;
                }
            }
        } else if let Some(p) = ScaledPressure::from_message(msg) {
            self.depth = Some(pressure_to_depth(p.press_abs as f64));
        }
    }
}

/// One scenario being stepped. Build with [`Simulation::new`], call [`Simulation::step`]
/// until [`Simulation::is_finished`], then [`Simulation::finish`].
pub struct Simulation {
    scenario: Scenario,
    n: u64,
    last_step: u64,
    vehicle: VehicleState,
    fcu: FcuNode,
    companion: CompanionNode,
    queue: LatencyQueue,
    percept_rng: ChaCha8Rng,
    next_frame: u64,
    tlog: Vec<TlogRecord>,
    trace: Vec<TraceRow>,
    udp: Option<UdpMirror>,
    gate_passed_at: Option<f64>,
    t_first_gate_detect: Option<f64>,
    t_aligned: Option<f64>,
    min_flare_distance: Option<f64>,
    frames_sent: u64,
    frames_rejected: u64,
}

impl Simulation {
    pub fn new(scenario: Scenario, opts: RunOptions) -> Result<Simulation, HarnessError> {
        scenario.validate()?;
        let link = LinkConfig { seed: scenario.link_seed(), ..scenario.link.clone() };
        let vehicle = VehicleState::at(
            Vector3::from(scenario.initial.position),
            Vector3::from(scenario.initial.attitude),
        );
        let fcu = FcuNode {
            state: FcuState::new(scenario.gains),
            mixer: Mixer::from_geometry(&scenario.thrusters),
            endpoint: Endpoint::new(link.clone(), STREAM_LINK_TO_COMPANION),
            parser: ParserState::new(),
            outbox: Vec::new(),
        };
        let companion = CompanionNode {
            mission: MissionState::new(),
            endpoint: Endpoint::new(link, STREAM_LINK_TO_FCU),
            parser: ParserState::new(),
            outbox: Vec::new(),
            seq: 0,
            pending: Vec::new(),
            armed: false,
            depth: None,
            requested_arm: None,
            last_decision: None,
        };
        let last_step = (scenario.duration * STEPS_PER_SECOND).round() as u64;
        Ok(Simulation {
            queue: LatencyQueue::new(scenario.percept.latency),
            percept_rng: stream_rng(scenario.seed, STREAM_PERCEPT),
            scenario,
            n: 0,
            last_step,
            vehicle,
            fcu,
            companion,
            next_frame: 0,
            tlog: Vec::new(),
            trace: Vec::new(),
            udp: opts.udp,
            gate_passed_at: None,
            t_first_gate_detect: None,
            t_aligned: None,
            min_flare_distance: None,
            frames_sent: 0,
            frames_rejected: 0,
        })
    }

    pub fn now(&self) -> f64 {
        step_time(self.n)
    }

    pub fn is_finished(&self) -> bool {
        self.n > self.last_step
    }

    pub fn vehicle(&self) -> &VehicleState {
        &self.vehicle
    }

    pub fn fcu(&self) -> &FcuState {
        &self.fcu.state
    }

    pub fn phase(&self) -> Phase {
        self.companion.mission.phase
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn step(&mut self) -> Result<(), HarnessError> {
        let now = self.now();
        self.step_hydro(now)?;
        self.step_fcu(now);
        self.step_percept();
        self.step_guidance(now);
        self.flush_link(now);
        if self.n.is_multiple_of(DECISION_EVERY) {
            self.record_row(now);
        }
        self.n += 1;
        Ok(())
    }

    fn step_hydro(&mut self, now: f64) -> Result<(), HarnessError> {
        if self.n > 0 {
            let prev = self.vehicle;
            let s = &self.scenario;
            let mut next = hydro::step(&prev, &self.fcu.state.pwm.0, &s.vehicle, &s.thrusters, DT).map_err(
                |e| HarnessError::SimulationDiverged { t: now, reason: e.to_string() },
            )?;
            next.t = now;
            self.vehicle = next;
            self.check_gate_crossing(&prev);
        }
        let pos = self.vehicle.position;
        for o in self.scenario.objects.iter().filter(|o| o.label == Label::Flare) {
            let d = (pos - o.centre()).norm();
            self.min_flare_distance = Some(self.min_flare_distance.map_or(d, |m: f64| m.min(d)));
        }
        Ok(())
    }

    fn check_gate_crossing(&mut self, prev: &VehicleState) {
        if self.gate_passed_at.is_some() {
            return;
        }
        let (a, b) = (prev.position, self.vehicle.position);
        for gate in self.scenario.objects.iter().filter(|o| o.label == Label::Gate) {
            let c = gate.centre();
            let normal = gate.normal();
            let (sa, sb) = (normal.dot(&(a - c)), normal.dot(&(b - c)));
            if !(sa < 0.0 && sb >= 0.0) {
                continue;
            }
            let frac = -sa / (sb - sa);
            let hit = a + (b - a) * frac;
            let [w, h] = gate.extent();
            let lateral = gate.lateral_axis().dot(&(hit - c));
            let vertical = hit.z - c.z;
            if lateral.abs() <= w / 2.0 && vertical.abs() <= h / 2.0 {
                self.gate_passed_at = Some(prev.t + frac * DT);
                return;
            }
        }
    }

    fn step_fcu(&mut self, now: f64) {
        let ts = micros(now);
        for d in self.companion.endpoint.poll(now) {
            self.tlog.push(TlogRecord { timestamp_us: ts, frame: d.original });
            let out = self.fcu.parser.feed(&d.bytes);
            self.frames_rejected += out.diagnostics.len() as u64;
            for f in out.frames {
                if Heartbeat::from_message(&f.message).is_some() {
                    self.fcu.endpoint.record_heartbeat_rx(now);
                }
                for reply in self.fcu.state.handle_message(&f.message, now) {
                    self.fcu.send(&reply);
                }
            }
        }
        let link: LinkState = self.fcu.endpoint.failsafe_state(now);
        let fcu = &mut self.fcu;
        fcu.state.step(&self.vehicle, &fcu.mixer, link, now, DT);
        for m in fcu.state.telemetry_tick(&self.vehicle, now) {
            fcu.send(&m);
        }
    }

    fn step_percept(&mut self) {
        let fps = self.scenario.percept.camera.fps;
        let pose = CameraPose::from_vehicle(&self.vehicle);
        while capture_step(self.next_frame, fps, DT) <= self.n {
            let t = self.next_frame as f64 / fps as f64;
            let dets =
                render_detections(&self.scenario.objects, &pose, t, &self.scenario.percept, &mut self.percept_rng);
            self.queue.push(t, dets);
            self.next_frame += 1;
        }
    }

    fn step_guidance(&mut self, now: f64) {
        let c = &mut self.companion;
        c.pending.extend(self.queue.deliver(now));
        let ts = micros(now);
        for d in self.fcu.endpoint.poll(now) {
            self.tlog.push(TlogRecord { timestamp_us: ts, frame: d.original });
            let out = c.parser.feed(&d.bytes);
            self.frames_rejected += out.diagnostics.len() as u64;
            for f in out.frames {
                c.handle_telemetry(&f.message, now);
            }
        }
        if c.endpoint.heartbeat_due(now) {
            c.send(&CompanionNode::heartbeat().to_message());
            c.endpoint.mark_heartbeat_tx(now);
        }
        if !self.n.is_multiple_of(DECISION_EVERY) {
            return;
        }
        let input = MissionInputs {
            detections: &c.pending,
            depth: c.depth.unwrap_or(f64::INFINITY),
            armed: c.armed,
            now,
        };
        let cfg = &self.scenario.guidance;
        let (next, out) = mission_step(&c.mission, &input, cfg, &self.scenario.percept.camera);
        if c.mission.phase == Phase::AlignGate && next.phase == Phase::PassGate {
            self.t_aligned.get_or_insert(now);
        }
        if out.target.is_some_and(|t| t.label == Label::Gate) {
            self.t_first_gate_detect.get_or_insert(now);
        }
        c.mission = next;
        for cmd in &out.commands {
            let arm = *cmd == Command::Arm;
            c.requested_arm = Some(arm);
            c.send(&CommandLong::arm_disarm(FCU_SYS_ID, FCU_COMP_ID, arm).to_message());
        }
        let rc = primitive_to_rc(out.primitive, cfg);
        let ov = RcChannelsOverride { target_system: FCU_SYS_ID, target_component: FCU_COMP_ID, chan_raw: rc.0 };
        c.send(&ov.to_message());
        c.pending.clear();
        c.last_decision = Some(out);
    }

    fn flush_link(&mut self, now: f64) {
        for f in self.fcu.outbox.drain(..) {
            if let Some(u) = self.udp.as_mut() {
                u.send(&f);
            }
            self.fcu.endpoint.transmit(f, now);
            self.frames_sent += 1;
        }
        for f in self.companion.outbox.drain(..) {
            self.companion.endpoint.transmit(f, now);
            self.frames_sent += 1;
        }
    }

    fn record_row(&mut self, now: f64) {
        let v = &self.vehicle;
        let detection = self.companion.last_decision.as_ref().and_then(|d| {
            let (t, (dx, dy)) = (d.target?, d.offset?);
            Some(TraceDetection { label: t.label, score: t.score, dx, dy })
        });
        self.trace.push(TraceRow {
            t: now,
            x: v.position.x,
            y: v.position.y,
            depth: v.depth(),
            roll: v.roll(),
            pitch: v.pitch(),
            yaw: v.yaw(),
            pwm: self.fcu.state.pwm.0,
            phase: self.companion.mission.phase,
            detection,
        });
    }

    pub fn report(&self, wall_time: f64) -> RunReport {
        RunReport {
            gate_passed: self.gate_passed_at.is_some(),
            t_first_gate_detect: self.t_first_gate_detect,
            t_aligned: self.t_aligned,
            t_gate_passed: self.gate_passed_at,
            min_flare_distance: self.min_flare_distance,
            final_phase: self.companion.mission.phase,
            disarm_reason: self.fcu.state.disarm_reason,
            sim_time: step_time(self.n.saturating_sub(1)),
            frames_sent: self.frames_sent,
            frames_rejected: self.frames_rejected,
            wall_time,
        }
    }

    pub fn finish(self, wall_time: f64) -> RunOutput {
        let report = self.report(wall_time);
        let tlog = write_tlog(&self.tlog).expect("records are delivered in time order");
        RunOutput { report, tlog, csv: write_csv(&self.trace), trace: self.trace }
    }
}

pub fn run(scenario: Scenario, opts: RunOptions) -> Result<RunOutput, HarnessError> {
    let start = Instant::now();
    let mut sim = Simulation::new(scenario, opts)?;
    while !sim.is_finished() {
        sim.step()?;
    }
    Ok(sim.finish(start.elapsed().as_secs_f64()))
}

/// Armed controller with sticks centred, vehicle released at `initial_roll_deg`.
/// Returns (t, roll in degrees) at every step.
pub fn stabilization_trial(
    initial_roll_deg: f64,
    duration: f64,
    gains: PidGains,
    params: &VehicleParams,
    geometry: &ThrusterGeometry,
) -> Result<Vec<(f64, f64)>, HarnessError> {
    let mixer = Mixer::from_geometry(geometry);
    let mut fcu = FcuState::new(gains);
    fcu.armed = true;
    let mut v = VehicleState::at(Vector3::new(0.0, 0.0, 1.0), Vector3::new(initial_roll_deg.to_radians(), 0.0, 0.0));
    let steps = (duration * STEPS_PER_SECOND).round() as u64;
    let mut out = Vec::with_capacity(steps as usize + 1);
    for n in 0..=steps {
        let now = step_time(n);
        out.push((now, v.roll().to_degrees()));
        let pwm = fcu.step(&v, &mixer, LinkState::Ok, now, DT).pwm;
        v = hydro::step(&v, &pwm.0, params, geometry, DT)
            .map_err(|e| HarnessError::SimulationDiverged { t: now, reason: e.to_string() })?;
    }
    Ok(out)
}

/// First time after which |value| stays below `bound` for the rest of the trace.
pub fn settling_time(trace: &[(f64, f64)], bound: f64) -> Option<f64> {
    match trace.iter().rposition(|(_, v)| v.abs() >= bound) {
        None => trace.first().map(|s| s.0),
        Some(i) => trace.get(i + 1).map(|s| s.0),
    }
}
