//! Scalpel trajectories: timed scalpel segments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cga::Vec3;
use crate::error::ModelIoError;
use crate::surgery::ScalpelState;

use super::{read_text, write_text};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryDoc {
    states: Vec<StateDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    time: f64,
    p_top: [f64; 3],
    p_tip: [f64; 3],
}

/// At least two scalpel states with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalpelTrajectory {
    states: Vec<ScalpelState>,
}

impl ScalpelTrajectory {
    pub fn new(states: Vec<ScalpelState>) -> Result<Self, ModelIoError> {
        if states.len() < 2 {
            return Err(ModelIoError::schema(
                "states",
                "need at least 2 scalpel states",
            ));
        }
        for (i, s) in states.iter().enumerate() {
            let p = format!("states[{i}]");
            let finite =
                s.time.is_finite() && s.p_top.iter().chain(s.p_tip.iter()).all(|c| c.is_finite());
            if !finite {
                return Err(ModelIoError::schema(p, "non-finite value"));
            }
            if s.p_top == s.p_tip {
                return Err(ModelIoError::schema(p, "p_top and p_tip coincide"));
            }
            if i > 0 && s.time <= states[i - 1].time {
                return Err(ModelIoError::schema(
                    format!("{p}.time"),
                    format!("time {} does not follow {}", s.time, states[i - 1].time),
                ));
            }
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[ScalpelState] {
        &self.states
    }

    /// States `step` and `step + 1`.
    pub fn step(&self, step: usize) -> Option<(&ScalpelState, &ScalpelState)> {
        Some((self.states.get(step)?, self.states.get(step + 1)?))
    }
}

pub fn parse_trajectory(text: &str) -> Result<ScalpelTrajectory, ModelIoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: TrajectoryDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ModelIoError::schema(path, e.into_inner().to_string())
    })?;
    ScalpelTrajectory::new(
        doc.states
            .iter()
            .map(|s| ScalpelState {
                time: s.time,
                p_top: Vec3::from(s.p_top),
                p_tip: Vec3::from(s.p_tip),
            })
            .collect(),
    )
}

pub fn trajectory_to_string(t: &ScalpelTrajectory) -> String {
    let doc = TrajectoryDoc {
        states: t
            .states
            .iter()
            .map(|s| StateDoc {
                time: s.time,
                p_top: s.p_top.into(),
                p_tip: s.p_tip.into(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("trajectories serialize");
    s.push('\n');
    s
}

pub fn load_trajectory(path: impl AsRef<Path>) -> Result<ScalpelTrajectory, ModelIoError> {
    parse_trajectory(&read_text(path.as_ref())?)
}

pub fn save_trajectory(t: &ScalpelTrajectory, path: impl AsRef<Path>) -> Result<(), ModelIoError> {
    write_text(path.as_ref(), &trajectory_to_string(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_checks_order() {
        let ok = r#"{"states":[{"time":0,"p_top":[0,0,1],"p_tip":[0,0,-1]},
                               {"time":0.5,"p_top":[1,0,1],"p_tip":[1,0,-1]}]}"#;
        let t = parse_trajectory(ok).unwrap();
        assert_eq!(t.states().len(), 2);
        assert_eq!(parse_trajectory(&trajectory_to_string(&t)).unwrap(), t);
        let bad = ok.replace("0.5", "0");
        match parse_trajectory(&bad) {
            Err(ModelIoError::Schema { path, .. }) => assert_eq!(path, "states[1].time"),
            other => panic!("{other:?}"),
        }
        let one = r#"{"states":[{"time":0,"p_top":[0,0,1],"p_tip":[0,0,-1]}]}"#;
        assert!(parse_trajectory(one).is_err());
    }
}
