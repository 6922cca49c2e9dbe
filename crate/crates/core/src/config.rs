//! Simulator defaults, optionally read from a `key = value` file.

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::TurnConstraint;
use crate::motion::SpeedParams;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
}

/// Default speed limits for every robot plus the turning radius used by the planner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub speed: SpeedParams,
    pub min_turn_radius: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            speed: SpeedParams::default(),
            min_turn_radius: 0.5,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    max_speed: Option<f64>,
    acceleration: Option<f64>,
    deceleration: Option<f64>,
    physical_max: Option<f64>,
    hard_acceleration: Option<f64>,
    hard_deceleration: Option<f64>,
    min_turn_radius: Option<f64>,
}

impl Config {
    /// Reads overrides; keys left out keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let d = Config::default();
        let config = Config {
            speed: SpeedParams {
                max_speed: raw.max_speed.unwrap_or(d.speed.max_speed),
                acceleration: raw.acceleration.unwrap_or(d.speed.acceleration),
                deceleration: raw.deceleration.unwrap_or(d.speed.deceleration),
                hard_acceleration: raw.hard_acceleration.unwrap_or(d.speed.hard_acceleration),
                hard_deceleration: raw.hard_deceleration.unwrap_or(d.speed.hard_deceleration),
                physical_max: raw.physical_max.unwrap_or(d.speed.physical_max),
            },
            min_turn_radius: raw.min_turn_radius.unwrap_or(d.min_turn_radius),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.speed.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.turn_constraint()
            .map(|_| ())
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn turn_constraint(&self) -> Result<TurnConstraint, crate::geometry::GeometryError> {
        TurnConstraint::new(self.min_turn_radius)
    }
}
