//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::Vector3;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use auvsim::fcu::{AxisCommands, Mixer, PidGains};
use auvsim::guidance::{mission_step, GuidanceConfig, MissionInputs, MissionState, Phase, Primitive};
use auvsim::harness::{run, settling_time, stabilization_trial, RunOptions, Scenario};
use auvsim::hydro::{self, pwm_to_thrust, thruster_wrench, ThrusterGeometry, VehicleParams, VehicleState};
use auvsim::mavproto::def::{ATTITUDE, BUILTIN_DEFS, HEARTBEAT};
use auvsim::mavproto::golden::{read_golden, BUILTIN_GOLDEN};
use auvsim::mavproto::{crc16, crc_extra, encode_frame, Message, ParserState};
use auvsim::percept::{
    capture_step, project, render_detections, unproject, CameraIntrinsics, CameraPose, Detection, Label,
    LatencyQueue, PerceptConfig, SceneObject,
};
use auvsim::rng::stream_rng;

/// SHA-256 of run.csv for the default mission at seed 1, frozen from the first passing run.
const DEFAULT_MISSION_CSV_SHA256: &str = "2a932cd3212fc7a1f0c43a90b242afea8c705f3dd428edb433f5e0daf4cf365f";
/// Time for a 20 deg roll release to stay inside 2 deg, frozen from the first passing run.
const ROLL_SETTLING_BASELINE_S: f64 = 1.47;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// 1. Randomised encode/decode round trip for every registry message.
fn protocol_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut stream = Vec::new();
    let mut sent = Vec::new();
    for def in BUILTIN_DEFS {
        for _ in 0..1000 {
            let mut payload = vec![0u8; def.payload_len()];
            rng.fill_bytes(&mut payload);
            let msg = Message::from_payload(def, &payload).expect("payload length matches");
            let (seq, sys, comp) = (rng.random(), rng.random(), rng.random());
            let frame = encode_frame(&msg, seq, sys, comp).unwrap();
            stream.extend_from_slice(&frame);
            sent.push((msg, seq, sys, comp, payload));
        }
    }
    let out = ParserState::new().feed(&stream);
    let mut mismatches = out.diagnostics.len();
    if out.frames.len() != sent.len() {
        mismatches += sent.len().abs_diff(out.frames.len());
    }
    for (got, (msg, seq, sys, comp, payload)) in out.frames.iter().zip(&sent) {
        let h = got.header;
        let same = got.message == *msg
            && (h.seq, h.sys_id, h.comp_id) == (*seq, *sys, *comp)
            && got.message.payload().unwrap() == *payload;
        mismatches += usize::from(!same);
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && elapsed < 5.0,
        format!("{} messages, {mismatches} mismatches, {elapsed:.3} s (limit 5 s)", sent.len()),
    )
}

/// 2. Every single-bit flip after the magic byte is rejected, and the parser resynchronises.
fn crc_fault_detection() -> Outcome {
    let frames = read_golden(BUILTIN_GOLDEN).unwrap();
    let clean = frames[0].clone();
    let (mut flips, mut accepted, mut lost_resync, mut max_swallowed) = (0, 0, 0, 0);
    for f in &frames {
        for bit in 8..f.len() * 8 {
            let mut bad = f.clone();
            bad[bit / 8] ^= 1 << (bit % 8);
            let mut p = ParserState::new();
            let out = p.feed(&bad);
            flips += 1;
            accepted += out.frames.len();
            // A flip that forges a 0xFE can make the parser wait on a phantom frame
            // of up to 263 bytes, swallowing the next few clean frames.
            let mut fed = 0;
            loop {
                fed += 1;
                if !p.feed(&clean).frames.is_empty() {
                    break;
                }
                if fed * clean.len() > 300 {
                    lost_resync += 1;
                    break;
                }
            }
            max_swallowed = max_swallowed.max(fed - 1);
        }
    }
    outcome(
        accepted == 0 && lost_resync == 0,
        format!(
            "{flips} flips over {} frames, {accepted} accepted, {lost_resync} failed resync \
             (worst case {max_swallowed} clean frames swallowed)",
            frames.len()
        ),
    )
}

fn bitwise_crc(data: &[u8]) -> u16 {
    let mut crc = 0xFFFFu16;
    for &b in data {
        crc ^= b as u16;
        for _ in 0..8 {
            crc = if crc & 1 != 0 { (crc >> 1) ^ 0x8408 } else { crc >> 1 };
        }
    }
    crc
}

/// Seed byte from a hand-written wire-order field list.
fn seed_oracle(name: &str, fields: &[(&str, &str)]) -> u8 {
    let mut text = format!("{name} ");
    for (ty, field) in fields {
        text.push_str(&format!("{ty} {field} "));
    }
    let c = bitwise_crc(text.as_bytes());
    ((c & 0xFF) ^ (c >> 8)) as u8
}

/// 3. CRC and CRC_EXTRA against independent oracles, plus a reference-encoded frame.
fn crc_conformance() -> Outcome {
    let check = b"123456789";
    let crc_ok = crc16(check) == bitwise_crc(check) && bitwise_crc(check) == 0x6F91;
    let hb_oracle = seed_oracle(
        "HEARTBEAT",
        &[
            ("uint32_t", "custom_mode"),
            ("uint8_t", "type"),
            ("uint8_t", "autopilot"),
            ("uint8_t", "base_mode"),
            ("uint8_t", "system_status"),
            ("uint8_t", "mavlink_version"),
        ],
    );
    let att_oracle = seed_oracle(
        "ATTITUDE",
        &[
            ("uint32_t", "time_boot_ms"),
            ("float", "roll"),
            ("float", "pitch"),
            ("float", "yaw"),
            ("float", "rollspeed"),
            ("float", "pitchspeed"),
            ("float", "yawspeed"),
        ],
    );
    let hb = crc_extra(&HEARTBEAT);
    let att = crc_extra(&ATTITUDE);
    let golden_hb = &read_golden(BUILTIN_GOLDEN).unwrap()[0];
    let decoded = ParserState::new().feed(golden_hb);
    let golden_ok = decoded.diagnostics.is_empty()
        && decoded.frames.len() == 1
        && decoded.frames[0].message.name() == "HEARTBEAT";
    outcome(
        crc_ok && hb == hb_oracle && att == att_oracle && golden_ok,
        format!(
            "crc16=0x{:04X}, HEARTBEAT extra {hb} (oracle {hb_oracle}), ATTITUDE extra {att} (oracle {att_oracle}), \
             golden HEARTBEAT clean={golden_ok}",
            crc16(check)
        ),
    )
}

/// 4. Only scores strictly above 0.75 trigger guidance action.
fn threshold_behavior() -> Outcome {
    let cfg = GuidanceConfig::default();
    let intr = CameraIntrinsics::default();
    let now = 20.0;
    let align = MissionState { phase: Phase::AlignGate, phase_entry_t: now, last_sighting_t: now, ..MissionState::new() };
    let mut acted = Vec::new();
    for score in [0.74, 0.75, 0.76] {
        let det = Detection {
            label: Label::Gate,
            xmin: 900.0,
            ymin: 320.0,
            xmax: 1000.0,
            ymax: 400.0,
            score,
            t_capture: now - 0.5,
        };
        let input = MissionInputs { detections: &[det], depth: 1.0, armed: true, now };
        let (_, out) = mission_step(&align, &input, &cfg, &intr);
        if out.primitive != Primitive::Hold {
            acted.push(score);
        }
    }
    outcome(acted == [0.76], format!("action for scores {acted:?} out of [0.74, 0.75, 0.76]"))
}

/// 5. Detections arrive 0.5 s after capture (within one frame) at 30 fps.
fn latency_contract() -> Outcome {
    let cfg = PerceptConfig::default();
    let mut queue = LatencyQueue::new(cfg.latency);
    let mut rng = stream_rng(5, 3);
    let scene = [SceneObject::new(Label::Gate, [5.0, 0.3, 1.2], 0.0)];
    let pose = CameraPose::from_vehicle(&VehicleState::at(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros()));
    let period = 1.0 / 30.0;
    let (mut k, mut worst, mut early, mut late) = (0u64, 0.0f64, 0, 0);
    let mut captures = Vec::new();
    for n in 0..2000u64 {
        let now = n as f64 / 100.0;
        while capture_step(k, 30, 0.01) <= n {
            let t = k as f64 / 30.0;
            queue.push(t, render_detections(&scene, &pose, t, &cfg, &mut rng));
            k += 1;
        }
        for d in queue.deliver(now) {
            let age = now - d.t_capture;
            worst = worst.max((age - 0.5).abs());
            early += usize::from(age < 0.5 - 1e-9);
            late += usize::from(age > 0.5 + period + 1e-9);
            captures.push(d.t_capture);
        }
    }
    let cadence_ok = captures.windows(2).all(|w| ((w[1] - w[0]) - period).abs() < 1e-9);
    outcome(
        early == 0 && late == 0 && cadence_ok && captures.len() > 500,
        format!(
            "{} detections, max |age - 0.5| = {worst:.4} s (limit {period:.4}), early {early}, late {late}, 30 fps cadence {cadence_ok}",
            captures.len()
        ),
    )
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// 6. Default mission: aligned within 60 s, gate passed within 120 s, deterministic, fast.
fn closed_loop_mission() -> Outcome {
    let a = run(Scenario::default_mission(), RunOptions::default()).unwrap();
    let b = run(Scenario::default_mission(), RunOptions::default()).unwrap();
    let r = &a.report;
    let aligned_dx = r.t_aligned.and_then(|t| {
        a.trace.iter().find(|row| (row.t - t).abs() < 1e-9).and_then(|row| row.detection).map(|d| d.dx)
    });
    let aligned_ok = r.t_aligned.is_some_and(|t| t <= 60.0) && aligned_dx.is_some_and(|dx| dx.abs() <= 30.0);
    let passed_ok = r.gate_passed && r.t_gate_passed.is_some_and(|t| t <= 120.0);
    let deterministic = a.csv == b.csv && a.tlog == b.tlog && r.without_wall_time() == b.report.without_wall_time();
    let hash = sha256_hex(a.csv.as_bytes());
    let hash_ok = hash == DEFAULT_MISSION_CSV_SHA256;
    let wall_ok = r.wall_time < 10.0;
    outcome(
        aligned_ok && passed_ok && deterministic && hash_ok && wall_ok,
        format!(
            "t_aligned={:?} (dx={:?}), t_gate_passed={:?}, deterministic={deterministic}, wall={:.3} s, \
             csv sha256 {} baseline",
            r.t_aligned,
            aligned_dx,
            r.t_gate_passed,
            r.wall_time,
            if hash_ok { "matches".to_string() } else { format!("{hash} differs from") }
        ),
    )
}

/// 7. A 20 deg roll release settles inside 2 deg within 15 s and stays there.
fn stabilization() -> Outcome {
    let trace = stabilization_trial(
        20.0,
        60.0,
        PidGains::default(),
        &VehicleParams::default(),
        &ThrusterGeometry::default(),
    )
    .unwrap();
    let settle = settling_time(&trace, 2.0);
    let within = settle.is_some_and(|t| t <= 15.0);
    let baseline_ok = settle.is_some_and(|t| (t - ROLL_SETTLING_BASELINE_S).abs() < 1e-9);
    outcome(
        within && baseline_ok,
        format!(
            "gains P={} D={} yaw P={}, settled at {settle:?} s over a 60 s trace (baseline {ROLL_SETTLING_BASELINE_S} s)",
            PidGains::default().roll_rate_p,
            PidGains::default().roll_rate_d,
            PidGains::default().yaw_rate_p
        ),
    )
}

/// 8. Neutral fixed point, energy decay under zero thrust, decoupled pure surge.
fn physics_invariants() -> Outcome {
    let p = VehicleParams::default();
    let g = ThrusterGeometry::default();
    let start = VehicleState::at(Vector3::new(1.0, -2.0, 3.0), Vector3::zeros());
    let mut s = start;
    for _ in 0..10_000 {
        s = hydro::step(&s, &[1500; 6], &p, &g, 0.01).unwrap();
    }
    let drift = (s.position - start.position).norm() + s.attitude.norm() + s.v_body.norm() + s.w_body.norm();
    let fixed_ok = drift < 1e-9;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ke_violations = 0;
    for _ in 0..50 {
        let mut s = VehicleState::at(Vector3::new(0.0, 0.0, 2.0), Vector3::zeros());
        s.v_body = Vector3::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        s.w_body = Vector3::new(0.0, 0.0, rng.random_range(-1.0..1.0));
        let mut ke = s.kinetic_energy(&p);
        for _ in 0..500 {
            s = hydro::step(&s, &[1500; 6], &p, &g, 0.01).unwrap();
            let k = s.kinetic_energy(&p);
            ke_violations += usize::from(k > ke + 1e-12);
            ke = k;
        }
    }

    let pwm = Mixer::from_geometry(&g).mix(&AxisCommands { surge: 1.0, ..Default::default() });
    let thrusts = pwm.0.map(|v| pwm_to_thrust(v, &p).unwrap());
    let w = thruster_wrench(&thrusts, &g);
    let surge_ok = w.force.x > 0.0 && w.force.y.abs() < 1e-12 && w.torque.z.abs() < 1e-12;
    outcome(
        fixed_ok && ke_violations == 0 && surge_ok,
        format!(
            "fixed-point drift {drift:.2e} over 1e4 steps, {ke_violations} KE increases, \
             pure surge Fy={:.1e} Mz={:.1e}",
            w.force.y, w.torque.z
        ),
    )
}

/// 9. Same scenario and seed give byte-identical tlog and CSV.
fn determinism() -> Outcome {
    let mut noisy = Scenario::default_mission();
    noisy.seed = 42;
    noisy.link.latency = 0.03;
    noisy.link.bit_corruption_prob = 0.05;
    let empty = Scenario { objects: vec![], duration: 30.0, seed: 7, ..Scenario::default() };
    let mut identical = 0;
    let cases = [Scenario::default_mission(), noisy, empty];
    for s in &cases {
        let a = run(s.clone(), RunOptions::default()).unwrap();
        let b = run(s.clone(), RunOptions::default()).unwrap();
        identical += usize::from(a.tlog == b.tlog && a.csv == b.csv);
    }
    outcome(identical == cases.len(), format!("{identical}/{} scenarios byte-identical across two runs", cases.len()))
}

/// 10. Detector quality figures need the original dataset and CNN; this checks the stand-in's properties instead.
fn detector_substitute() -> Outcome {
    let intr = CameraIntrinsics::default();
    let cfg = PerceptConfig { score_noise: 0.0, ..PerceptConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst_proj, mut invalid, mut non_monotone) = (0.0f64, 0, 0);
    for _ in 0..2000 {
        let att = Vector3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-3.1..3.1));
        let pose = CameraPose::from_vehicle(&VehicleState::at(Vector3::new(0.0, 0.0, 1.0), att));
        let cam = Vector3::new(rng.random_range(0.2..15.0), rng.random_range(-4.0..4.0), rng.random_range(-3.0..3.0));
        let world = pose.to_world(&cam);
        if let Some((u, v)) = project(&world, &pose, &intr) {
            worst_proj = worst_proj.max((unproject(u, v, cam.x, &pose, &intr) - world).norm());
        }
        let obj = SceneObject::new(
            if rng.random() { Label::Gate } else { Label::Flare },
            [world.x, world.y, world.z],
            rng.random_range(-3.1..3.1),
        );
        let mut noise_rng = stream_rng(rng.random(), 3);
        for d in render_detections(std::slice::from_ref(&obj), &pose, 0.0, &PerceptConfig::default(), &mut noise_rng) {
            invalid += usize::from(!d.is_valid(&intr));
        }
        let far = pose.to_world(&(cam * 1.3));
        let far_obj = SceneObject { position: [far.x, far.y, far.z], ..obj.clone() };
        let near_s = render_detections(&[obj], &pose, 0.0, &cfg, &mut noise_rng);
        let far_s = render_detections(&[far_obj], &pose, 0.0, &cfg, &mut noise_rng);
        if let (Some(a), Some(b)) = (near_s.first(), far_s.first()) {
            non_monotone += usize::from(b.score > a.score + 1e-12);
        }
    }
    outcome(
        worst_proj < 1e-9 && invalid == 0 && non_monotone == 0,
        format!(
            "detection mAP/accuracy not reproducible (no dataset or CNN); substitute checks: \
             unprojection error {worst_proj:.1e} m, {invalid} invalid boxes, {non_monotone} score inversions"
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as --nocapture; none apply here.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 10] = [
        ("1 protocol round trip", protocol_round_trip),
        ("2 CRC fault detection", crc_fault_detection),
        ("3 CRC/seed conformance", crc_conformance),
        ("4 threshold behavior", threshold_behavior),
        ("5 latency contract", latency_contract),
        ("6 closed-loop mission", closed_loop_mission),
        ("7 stabilization", stabilization),
        ("8 physics invariants", physics_invariants),
        ("9 determinism", determinism),
        ("10 detector quality (substituted)", detector_substitute),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let o = f();
        failed += usize::from(!o.passed);
        println!("[{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
