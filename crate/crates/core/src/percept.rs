//! Geometric stand-in for the onboard object detector.
//!
//! Objects are projected through a pinhole camera mounted at the body origin
//! looking along +x body. Boxes are pixel corners; scores come from a simple
//! distance / bearing model plus seeded uniform noise. Frames pass through a
//! fixed-latency queue before guidance sees them.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::{Rotation3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hydro::VehicleState;
use crate::link::TIME_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CameraIntrinsics {
    pub width: u32,
    pub height: u32,
    /// Horizontal field of view, degrees.
    pub hfov_deg: f64,
    pub fps: u32,
}

impl Default for CameraIntrinsics {
    fn default() -> Self {
        Self { width: 1280, height: 720, hfov_deg: 65.0, fps: 30 }
    }
}

impl CameraIntrinsics {
    pub fn fx(&self) -> f64 {
        (self.width as f64 / 2.0) / (self.hfov_deg.to_radians() / 2.0).tan()
    }

    /// Square pixels.
    pub fn fy(&self) -> f64 {
        self.fx()
    }

    pub fn cx(&self) -> f64 {
        self.width as f64 / 2.0
    }

    pub fn cy(&self) -> f64 {
        self.height as f64 / 2.0
    }

    pub fn frame_period(&self) -> f64 {
        1.0 / self.fps as f64
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        (0.0..=self.width as f64).contains(&u) && (0.0..=self.height as f64).contains(&v)
    }

    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if self.width == 0 || self.height == 0 {
            return Err(("percept.camera", "resolution must be non-zero"));
        }
        if !(self.hfov_deg > 0.0 && self.hfov_deg < 180.0) {
            return Err(("percept.camera.hfov_deg", "must be in (0, 180)"));
        }
        if self.fps == 0 {
            return Err(("percept.camera.fps", "must be > 0"));
        }
        Ok(())
    }
}

/// Camera pose in the world: position plus body-to-world rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    pub position: Vector3<f64>,
    pub rotation: Rotation3<f64>,
}

impl CameraPose {
    pub fn from_vehicle(state: &VehicleState) -> Self {
        Self { position: state.position, rotation: state.rotation() }
    }

    pub fn to_camera(&self, world: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.inverse() * (world - self.position)
    }

    pub fn to_world(&self, cam: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * cam + self.position
    }
}

/// Points closer than this along the optical axis do not project.
pub const MIN_DEPTH: f64 = 0.1;

pub fn project(world: &Vector3<f64>, pose: &CameraPose, intr: &CameraIntrinsics) -> Option<(f64, f64)> {
    let p = pose.to_camera(world);
    if p.x <= MIN_DEPTH {
        return None;
    }
    Some((intr.cx() + intr.fx() * p.y / p.x, intr.cy() + intr.fy() * p.z / p.x))
}

/// Inverse of [`project`] for a known optical-axis depth.
pub fn unproject(u: f64, v: f64, depth: f64, pose: &CameraPose, intr: &CameraIntrinsics) -> Vector3<f64> {
    let cam = Vector3::new(depth, (u - intr.cx()) * depth / intr.fx(), (v - intr.cy()) * depth / intr.fy());
    pose.to_world(&cam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Gate,
    Flare,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Gate => "gate",
            Label::Flare => "flare",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const GATE_EXTENT: [f64; 2] = [1.5, 1.0];
pub const FLARE_EXTENT: [f64; 2] = [0.08, 1.2];
const FLARE_RIM_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub label: Label,
    /// Centre of the object, world NED metres.
    pub position: [f64; 3],
    /// Heading of the gate normal, radians. Irrelevant for the flare.
    #[serde(default)]
    pub yaw: f64,
    /// Gate: [width, height]. Flare: [radius, height]. Defaults per label.
    #[serde(default)]
    pub extent: Option<[f64; 2]>,
}

impl SceneObject {
    pub fn new(label: Label, position: [f64; 3], yaw: f64) -> Self {
        Self { label, position, yaw, extent: None }
    }

    pub fn extent(&self) -> [f64; 2] {
        self.extent.unwrap_or(match self.label {
            Label::Gate => GATE_EXTENT,
            Label::Flare => FLARE_EXTENT,
        })
    }

    pub fn centre(&self) -> Vector3<f64> {
        Vector3::from(self.position)
    }

    /// Unit vector along the gate's width, horizontal.
    pub fn lateral_axis(&self) -> Vector3<f64> {
        Vector3::new(-self.yaw.sin(), self.yaw.cos(), 0.0)
    }

    /// Gate plane normal (direction of travel through it).
    pub fn normal(&self) -> Vector3<f64> {
        Vector3::new(self.yaw.cos(), self.yaw.sin(), 0.0)
    }

    /// Points whose projections bound the object's image.
    pub fn outline(&self) -> Vec<Vector3<f64>> {
        let c = self.centre();
        let [a, h] = self.extent();
        let down = Vector3::z();
        match self.label {
            Label::Gate => {
                let l = self.lateral_axis() * (a / 2.0);
                let d = down * (h / 2.0);
                vec![c - l - d, c + l - d, c + l + d, c - l + d]
            }
            Label::Flare => {
                let mut pts = Vec::with_capacity(2 * FLARE_RIM_POINTS);
                for end in [-h / 2.0, h / 2.0] {
                    for i in 0..FLARE_RIM_POINTS {
                        let th = i as f64 * std::f64::consts::TAU / FLARE_RIM_POINTS as f64;
                        pts.push(c + Vector3::new(a * th.cos(), a * th.sin(), end));
                    }
                }
                pts
            }
        }
    }

    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        if self.position.iter().any(|p| !p.is_finite()) || !self.yaw.is_finite() {
            return Err(("objects.position", "must be finite"));
        }
        if self.extent().iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(("objects.extent", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub label: Label,
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
    pub score: f64,
    pub t_capture: f64,
}

impl Detection {
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn centre(&self) -> (f64, f64) {
        ((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)
    }

    pub fn is_valid(&self, intr: &CameraIntrinsics) -> bool {
        0.0 <= self.xmin
            && self.xmin < self.xmax
            && self.xmax <= intr.width as f64
            && 0.0 <= self.ymin
            && self.ymin < self.ymax
            && self.ymax <= intr.height as f64
            && (0.0..=1.0).contains(&self.score)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerceptConfig {
    pub camera: CameraIntrinsics,
    /// Capture-to-delivery delay, seconds.
    pub latency: f64,
    /// Objects farther than this (camera depth) are not reported.
    pub max_range: f64,
    pub score_base: f64,
    pub score_per_metre: f64,
    pub score_per_rad: f64,
    /// Half-width of the uniform score noise.
    pub score_noise: f64,
    /// Probability per frame of one spurious box. Zero disables the hook.
    pub false_positive_rate: f64,
}

impl Default for PerceptConfig {
    fn default() -> Self {
        Self {
            camera: CameraIntrinsics::default(),
            latency: 0.5,
            max_range: 10.0,
            score_base: 0.95,
            score_per_metre: 0.02,
            score_per_rad: 0.3,
            score_noise: 0.05,
            false_positive_rate: 0.0,
        }
    }
}

impl PerceptConfig {
    pub fn validate(&self) -> Result<(), (&'static str, &'static str)> {
        self.camera.validate()?;
        if !(self.latency >= 0.0 && self.latency.is_finite()) {
            return Err(("percept.latency", "must be finite and >= 0"));
        }
        if !(self.max_range > MIN_DEPTH && self.max_range.is_finite()) {
            return Err(("percept.max_range", "must exceed the minimum depth"));
        }
        let coeffs = [self.score_base, self.score_per_metre, self.score_per_rad, self.score_noise];
        if coeffs.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(("percept.score", "coefficients must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.false_positive_rate) {
            return Err(("percept.false_positive_rate", "must be in [0, 1]"));
        }
        Ok(())
    }

    /// Deterministic part of the confidence model.
    pub fn score_mean(&self, distance: f64, off_axis: f64) -> f64 {
        self.score_base - self.score_per_metre * distance - self.score_per_rad * off_axis.abs()
    }

    pub fn score(&self, distance: f64, off_axis: f64, noise: f64) -> f64 {
        (self.score_mean(distance, off_axis) + noise).clamp(0.0, 1.0)
    }
}

fn render_object(
    obj: &SceneObject,
    pose: &CameraPose,
    cfg: &PerceptConfig,
    t: f64,
    rng: &mut impl Rng,
) -> Option<Detection> {
    let intr = &cfg.camera;
    let centre = pose.to_camera(&obj.centre());
    if !(centre.x > MIN_DEPTH && centre.x <= cfg.max_range) {
        return None;
    }
    let (mut umin, mut vmin, mut umax, mut vmax) =
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in obj.outline() {
        let (u, v) = project(&p, pose, intr)?;
        umin = umin.min(u);
        umax = umax.max(u);
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    if !intr.contains((umin + umax) / 2.0, (vmin + vmax) / 2.0) {
        return None;
    }
    let (w, h) = (intr.width as f64, intr.height as f64);
    let (xmin, xmax) = (umin.clamp(0.0, w), umax.clamp(0.0, w));
    let (ymin, ymax) = (vmin.clamp(0.0, h), vmax.clamp(0.0, h));
    if !(xmin < xmax && ymin < ymax) {
        return None;
    }
    let distance = centre.norm();
    let off_axis = (centre.x / distance).clamp(-1.0, 1.0).acos();
    let noise = if cfg.score_noise > 0.0 {
        rng.random_range(-cfg.score_noise..=cfg.score_noise)
    } else {
        0.0
    };
    Some(Detection {
        label: obj.label,
        xmin,
        ymin,
        xmax,
        ymax,
        score: cfg.score(distance, off_axis, noise),
        t_capture: t,
    })
}

fn false_positive(cfg: &PerceptConfig, t: f64, rng: &mut impl Rng) -> Detection {
    let (w, h) = (cfg.camera.width as f64, cfg.camera.height as f64);
    let bw = rng.random_range(20.0..w / 4.0);
    let bh = rng.random_range(20.0..h / 4.0);
    let xmin = rng.random_range(0.0..w - bw);
    let ymin = rng.random_range(0.0..h - bh);
    let label = if rng.random::<bool>() { Label::Gate } else { Label::Flare };
    Detection {
        label,
        xmin,
        ymin,
        xmax: xmin + bw,
        ymax: ymin + bh,
        score: rng.random_range(0.0..=1.0),
        t_capture: t,
    }
}

/// Detections for one camera frame captured at `t`.
pub fn render_detections(
    scene: &[SceneObject],
    pose: &CameraPose,
    t: f64,
    cfg: &PerceptConfig,
    rng: &mut impl Rng,
) -> Vec<Detection> {
    let mut out: Vec<Detection> =
        scene.iter().filter_map(|o| render_object(o, pose, cfg, t, rng)).collect();
    if cfg.false_positive_rate > 0.0 && rng.random::<f64>() < cfg.false_positive_rate {
        out.push(false_positive(cfg, t, rng));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t_capture: f64,
    pub t_deliver: f64,
    pub detections: Vec<Detection>,
}

/// Pure transport delay between capture and guidance.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyQueue {
    latency: f64,
    frames: VecDeque<Frame>,
}

impl LatencyQueue {
    pub fn new(latency: f64) -> Self {
        Self { latency, frames: VecDeque::new() }
    }

    pub fn latency(&self) -> f64 {
        self.latency
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn push(&mut self, t_capture: f64, detections: Vec<Detection>) {
        self.frames.push_back(Frame { t_capture, t_deliver: t_capture + self.latency, detections });
    }

    /// Every frame with `t_deliver <= now`, oldest first. Empty frames included.
    pub fn deliver_frames(&mut self, now: f64) -> Vec<Frame> {
        let mut out = Vec::new();
        while self.frames.front().is_some_and(|f| f.t_deliver <= now + TIME_EPS) {
            out.push(self.frames.pop_front().unwrap());
        }
        out
    }

    pub fn deliver(&mut self, now: f64) -> Vec<Detection> {
        self.deliver_frames(now).into_iter().flat_map(|f| f.detections).collect()
    }
}

/// Simulation step on which frame `k` is captured: the nearest grid point to k / fps.
pub fn capture_step(k: u64, fps: u32, dt: f64) -> u64 {
    (k as f64 / (fps as f64 * dt)).round() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use proptest::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn level_pose(x: f64, y: f64, z: f64, yaw: f64) -> CameraPose {
        CameraPose::from_vehicle(&VehicleState::at(Vector3::new(x, y, z), Vector3::new(0.0, 0.0, yaw)))
    }

    fn quiet() -> PerceptConfig {
        PerceptConfig { score_noise: 0.0, ..PerceptConfig::default() }
    }

    fn rng() -> ChaCha8Rng {
        stream_rng(7, 3)
    }

    #[test]
    fn focal_length_from_fov() {
        let fx = CameraIntrinsics::default().fx();
        let oracle = 640.0 / (32.5f64 * std::f64::consts::PI / 180.0).tan();
        assert!((fx - oracle).abs() < 1e-12);
        assert!((fx - 1004.599).abs() < 1e-3);
    }

    #[test]
    fn on_axis_point_hits_principal_point() {
        let intr = CameraIntrinsics::default();
        let pose = level_pose(0.0, 0.0, 1.0, 0.0);
        assert_eq!(project(&Vector3::new(5.0, 0.0, 1.0), &pose, &intr), Some((640.0, 360.0)));
        assert_eq!(project(&Vector3::new(-5.0, 0.0, 1.0), &pose, &intr), None);
        assert_eq!(project(&Vector3::new(0.05, 0.0, 1.0), &pose, &intr), None);
    }

    #[test]
    fn image_axes_follow_body_axes() {
        let intr = CameraIntrinsics::default();
        let pose = level_pose(0.0, 0.0, 0.0, 0.0);
        let (u, v) = project(&Vector3::new(4.0, 1.0, 0.5), &pose, &intr).unwrap();
        assert!(u > 640.0 && v > 360.0);
        // yawing right moves a dead-ahead point to the left of the image
        let pose = level_pose(0.0, 0.0, 0.0, 0.2);
        let (u, _) = project(&Vector3::new(4.0, 0.0, 0.0), &pose, &intr).unwrap();
        assert!(u < 640.0);
    }

    #[test]
    fn centred_gate_three_metres() {
        let cfg = quiet();
        let gate = SceneObject::new(Label::Gate, [3.0, 0.0, 1.0], 0.0);
        let dets = render_detections(std::slice::from_ref(&gate), &level_pose(0.0, 0.0, 1.0, 0.0), 0.0, &cfg, &mut rng());
        assert_eq!(dets.len(), 1);
        let d = dets[0];
        assert_eq!(d.label, Label::Gate);
        assert!((d.score - (0.95 - 0.02 * 3.0)).abs() < 1e-12);
        let fx = cfg.camera.fx();
        assert!((d.width() - fx * 1.5 / 3.0).abs() < 1e-9);
        assert!((d.height() - fx * 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(d.centre(), (640.0, 360.0));

        let noisy = PerceptConfig::default();
        let mut r = rng();
        for t in 0..50 {
            let d = render_detections(std::slice::from_ref(&gate), &level_pose(0.0, 0.0, 1.0, 0.0), t as f64, &noisy, &mut r);
            assert!((d[0].score - 0.89).abs() <= 0.05 + 1e-12);
        }
    }

    #[test]
    fn outside_fov_culled() {
        let cfg = quiet();
        // 30 degrees beyond the 32.5 degree half-FOV edge
        let bearing = (32.5f64 + 30.0).to_radians();
        let obj = SceneObject::new(Label::Flare, [5.0 * bearing.cos(), 5.0 * bearing.sin(), 0.0], 0.0);
        assert!(render_detections(&[obj], &level_pose(0.0, 0.0, 0.0, 0.0), 0.0, &cfg, &mut rng()).is_empty());
    }

    #[test]
    fn range_limits() {
        let cfg = quiet();
        let pose = level_pose(0.0, 0.0, 0.0, 0.0);
        let at = |x: f64| SceneObject::new(Label::Flare, [x, 0.0, 0.0], 0.0);
        assert_eq!(render_detections(&[at(10.0)], &pose, 0.0, &cfg, &mut rng()).len(), 1);
        assert!(render_detections(&[at(10.01)], &pose, 0.0, &cfg, &mut rng()).is_empty());
    }

    #[test]
    fn partially_visible_box_is_clipped() {
        let cfg = quiet();
        let gate = SceneObject::new(Label::Gate, [1.0, 0.0, 0.0], 0.0);
        let d = render_detections(&[gate], &level_pose(0.0, 0.0, 0.0, 0.0), 0.0, &cfg, &mut rng());
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].xmin, d[0].xmax), (0.0, 1280.0));
        assert!(d[0].is_valid(&cfg.camera));
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = PerceptConfig::default();
        let scene = [
            SceneObject::new(Label::Gate, [6.0, 1.0, 1.5], 0.0),
            SceneObject::new(Label::Flare, [8.0, -0.5, 1.0], 0.0),
        ];
        let pose = level_pose(0.0, 0.0, 1.0, 0.0);
        let a = render_detections(&scene, &pose, 1.0, &cfg, &mut rng());
        let b = render_detections(&scene, &pose, 1.0, &cfg, &mut rng());
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn false_positive_hook() {
        let cfg = PerceptConfig { false_positive_rate: 1.0, ..PerceptConfig::default() };
        let d = render_detections(&[], &level_pose(0.0, 0.0, 0.0, 0.0), 0.0, &cfg, &mut rng());
        assert_eq!(d.len(), 1);
        assert!(d[0].is_valid(&cfg.camera));
        let off = render_detections(&[], &level_pose(0.0, 0.0, 0.0, 0.0), 0.0, &quiet(), &mut rng());
        assert!(off.is_empty());
    }

    #[test]
    fn queue_delays_by_latency() {
        let mut q = LatencyQueue::new(0.5);
        q.push(1.0, vec![]);
        assert!(q.deliver_frames(1.499).is_empty());
        let f = q.deliver_frames(1.5);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].t_capture, 1.0);
        assert!(q.is_empty());
    }

    #[test]
    fn capture_grid() {
        assert_eq!(capture_step(0, 30, 0.01), 0);
        assert_eq!(capture_step(1, 30, 0.01), 3);
        assert_eq!(capture_step(2, 30, 0.01), 7);
        assert_eq!(capture_step(3, 30, 0.01), 10);
        assert_eq!(capture_step(30, 30, 0.01), 100);
    }

    proptest! {
        #[test]
        fn unproject_recovers_point(
            x in 0.2f64..20.0, y in -5.0f64..5.0, z in -3.0f64..3.0,
            roll in -0.5f64..0.5, pitch in -0.5f64..0.5, yaw in -3.0f64..3.0,
        ) {
            let intr = CameraIntrinsics::default();
            let state = VehicleState::at(Vector3::new(0.3, -0.2, 1.0), Vector3::new(roll, pitch, yaw));
            let pose = CameraPose::from_vehicle(&state);
            let world = pose.to_world(&Vector3::new(x, y, z));
            let (u, v) = project(&world, &pose, &intr).unwrap();
            let back = unproject(u, v, x, &pose, &intr);
            prop_assert!((back - world).norm() < 1e-9);
        }

        #[test]
        fn emitted_boxes_valid(
            px in -2.0f64..2.0, py in -2.0f64..2.0, pz in 0.0f64..2.0,
            roll in -0.6f64..0.6, pitch in -0.6f64..0.6, yaw in -3.2f64..3.2,
            gx in -12.0f64..12.0, gy in -12.0f64..12.0, gz in -1.0f64..3.0, gyaw in -3.2f64..3.2,
            seed in 0u64..1000,
        ) {
            let cfg = PerceptConfig::default();
            let state = VehicleState::at(Vector3::new(px, py, pz), Vector3::new(roll, pitch, yaw));
            let scene = [
                SceneObject::new(Label::Gate, [gx, gy, gz], gyaw),
                SceneObject::new(Label::Flare, [gy, gx, gz], 0.0),
            ];
            let mut r = stream_rng(seed, 3);
            for d in render_detections(&scene, &CameraPose::from_vehicle(&state), 0.0, &cfg, &mut r) {
                prop_assert!(d.is_valid(&cfg.camera), "{:?}", d);
            }
        }

        #[test]
        fn score_non_increasing_with_distance(
            bearing in -0.5f64..0.5, elev in -0.3f64..0.3, d1 in 0.5f64..9.0, extra in 0.0f64..5.0,
        ) {
            let cfg = quiet();
            let pose = level_pose(0.0, 0.0, 0.0, 0.0);
            let dir = Vector3::new(bearing.cos() * elev.cos(), bearing.sin() * elev.cos(), elev.sin());
            let score_at = |d: f64| {
                let p = dir * d;
                let obj = SceneObject::new(Label::Flare, [p.x, p.y, p.z], 0.0);
                render_detections(&[obj], &pose, 0.0, &cfg, &mut rng()).first().map(|d| d.score)
            };
            if let (Some(a), Some(b)) = (score_at(d1), score_at(d1 + extra)) {
                prop_assert!(b <= a + 1e-12);
            }
        }

        #[test]
        fn queue_latency_exact(n_frames in 1u64..200, poll_every in 1u64..15) {
            let mut q = LatencyQueue::new(0.5);
            let mut k = 0;
            let mut delivered = Vec::new();
            for n in 0..(n_frames * 4 + 100) {
                let now = n as f64 / 100.0;
                while k < n_frames && capture_step(k, 30, 0.01) == n {
                    q.push(k as f64 / 30.0, vec![]);
                    k += 1;
                }
                if n % poll_every == 0 {
                    for f in q.deliver_frames(now) {
                        prop_assert!(now + TIME_EPS >= f.t_capture + 0.5);
                        delivered.push(f.t_capture);
                    }
                }
            }
            prop_assert!(delivered.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
