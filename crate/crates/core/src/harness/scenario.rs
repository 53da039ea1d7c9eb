//! Scenario files: JSON, every key optional except `objects`.

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::fcu::PidGains;
use crate::guidance::GuidanceConfig;
use crate::hydro::{ThrusterGeometry, VehicleParams};
use crate::link::LinkConfig;
use crate::percept::{Label, PerceptConfig, SceneObject};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialPose {
    /// World NED metres.
    pub position: [f64; 3],
    /// Roll, pitch, yaw in radians.
    pub attitude: [f64; 3],
}

impl Default for InitialPose {
    fn default() -> Self {
        Self { position: [0.0, 0.0, 1.0], attitude: [0.0; 3] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub description: String,
    pub labels: Vec<String>,
    pub seed: u64,
    /// Simulated seconds.
    pub duration: f64,
    pub vehicle: VehicleParams,
    pub initial: InitialPose,
    pub thrusters: ThrusterGeometry,
    pub link: LinkConfig,
    pub gains: PidGains,
    pub guidance: GuidanceConfig,
    pub percept: PerceptConfig,
    pub objects: Vec<SceneObject>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            description: String::new(),
            labels: Vec::new(),
            seed: 0,
            duration: 120.0,
            vehicle: VehicleParams::default(),
            initial: InitialPose::default(),
            thrusters: ThrusterGeometry::default(),
            link: LinkConfig::default(),
            gains: PidGains::default(),
            guidance: GuidanceConfig::default(),
            percept: PerceptConfig::default(),
            objects: Vec::new(),
        }
    }
}

impl Scenario {
    /// Desk-scale mission: gate 6 m ahead, 1 m to starboard, 0.5 m deeper; flare further on.
    pub fn default_mission() -> Scenario {
        Scenario {
            description: "gate 6 m ahead, 1 m lateral, 0.5 m deeper than start; flare beyond".into(),
            labels: vec!["default".into()],
            seed: 1,
            objects: vec![
                SceneObject::new(Label::Gate, [6.0, 1.0, 1.5], 0.0),
                SceneObject::new(Label::Flare, [18.0, 1.0, 1.5], 0.0),
            ],
            ..Scenario::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(HarnessError::validation("duration", "must be > 0"));
        }
        if self.initial.position.iter().chain(&self.initial.attitude).any(|v| !v.is_finite()) {
            return Err(HarnessError::validation("initial", "pose must be finite"));
        }
        if self.initial.attitude[1].abs() >= crate::hydro::PITCH_LIMIT {
            return Err(HarnessError::validation("initial.attitude", "pitch must be within +-60 deg"));
        }
        self.vehicle.validate()?;
        self.thrusters.validate()?;
        self.link.validate()?;
        self.gains.validate()?;
        self.guidance.validate()?;
        self.percept.validate()?;
        for o in &self.objects {
            o.validate()?;
        }
        Ok(())
    }

    /// Link corruption seed: explicit if set, otherwise the scenario seed.
    pub fn link_seed(&self) -> u64 {
        if self.link.seed != 0 {
            self.link.seed
        } else {
            self.seed
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    /// Paths of keys that were not recognised.
    pub warnings: Vec<String>,
}

pub fn load_scenario(text: &str) -> Result<LoadedScenario, HarnessError> {
    let parse_err = |e: serde_json::Error| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    match value.get("objects") {
        Some(serde_json::Value::Array(_)) => {}
        Some(_) => return Err(HarnessError::validation("objects", "must be an array")),
        None => return Err(HarnessError::validation("objects", "is required")),
    }
    let mut warnings = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: Scenario =
        serde_ignored::deserialize(&mut de, |path| warnings.push(path.to_string())).map_err(parse_err)?;
    scenario.validate()?;
    Ok(LoadedScenario { scenario, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let loaded = load_scenario(r#"{"seed": 9, "objects": []}"#).unwrap();
        assert_eq!(loaded.scenario, Scenario { seed: 9, ..Scenario::default() });
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn missing_objects_named() {
        let err = load_scenario(r#"{"seed": 9}"#).unwrap_err();
        assert!(matches!(err, HarnessError::Validation { ref field, .. } if field == "objects"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn negative_duration_rejected() {
        let err = load_scenario(r#"{"duration": -5, "objects": []}"#).unwrap_err();
        assert!(matches!(err, HarnessError::Validation { ref field, .. } if field == "duration"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = load_scenario("{\n  \"objects\": [,]\n}").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn type_error_has_position() {
        let err = load_scenario("{\"objects\": [], \"duration\": \"long\"}").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn unknown_keys_warn() {
        let text = r#"{"objects": [], "colour": "red", "link": {"latency": 0.01, "baud": 57600}}"#;
        let loaded = load_scenario(text).unwrap();
        assert_eq!(loaded.scenario.link.latency, 0.01);
        assert_eq!(loaded.warnings, vec!["colour".to_string(), "link.baud".to_string()]);
    }

    #[test]
    fn nested_validation() {
        let err = load_scenario(r#"{"objects": [], "guidance": {"pwm_step": 500}}"#).unwrap_err();
        assert!(matches!(err, HarnessError::Validation { ref field, .. } if field == "guidance.pwm_step"));
        let err = load_scenario(r#"{"objects": [{"label": "gate", "position": [1, 2, 3], "extent": [0, 1]}]}"#)
            .unwrap_err();
        assert!(matches!(err, HarnessError::Validation { ref field, .. } if field == "objects.extent"));
    }

    #[test]
    fn json_round_trip() {
        let s = Scenario::default_mission();
        assert_eq!(load_scenario(&s.to_json()).unwrap().scenario, s);
    }

    #[test]
    fn shipped_default_matches() {
        let text = include_str!("../../../../scenarios/default.json");
        let loaded = load_scenario(text).unwrap();
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.scenario, Scenario::default_mission());
    }
}
