//! Speed parameters, control strings and motion profiles.

mod control;
mod params;
mod profile;

use thiserror::Error;

pub use control::{parse_control_string, Action, ControlSpec, Marker};
pub use params::{SettingKind, SettingValue, SpeedParams, SpeedTable};
pub use profile::{apply_control, base_profile, shape_profile, MotionProfile, Phase, DECREASE_FACTOR, INCREASE_FACTOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("cannot go from {entry} m/s to {exit} m/s within {length} m")]
    Infeasible { length: f64, entry: f64, exit: f64 },
    #[error("invalid speed parameters: {0}")]
    InvalidParams(String),
    #[error("invalid speed {0} m/s")]
    InvalidSpeed(f64),
    #[error("invalid path length {0} m")]
    InvalidDistance(f64),
    #[error("{} must be positive, got {value}", kind.keyword())]
    NonPositiveSetting { kind: SettingKind, value: f64 },
    #[error("{} of {value} exceeds the robot's limit of {limit}", kind.keyword())]
    SettingExceedsLimit { kind: SettingKind, value: f64, limit: f64 },
    #[error("speed profile did not converge")]
    NoConvergence,
}
