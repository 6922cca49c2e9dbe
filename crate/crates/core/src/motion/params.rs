use serde::Deserialize;

use super::MotionError;
use crate::RobotId;

/// Speed and acceleration limits of one robot.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedParams {
    /// Cruise speed, m/s.
    pub max_speed: f64,
    /// Normal acceleration, m/s².
    pub acceleration: f64,
    /// Normal deceleration, m/s².
    pub deceleration: f64,
    /// Acceleration used for `!` starts and launches.
    pub hard_acceleration: f64,
    /// Deceleration used for `!` stops and jumps.
    pub hard_deceleration: f64,
    /// Top speed the hardware can reach; `+` never pushes past it.
    pub physical_max: f64,
}

impl Default for SpeedParams {
    fn default() -> Self {
        Self {
            max_speed: 1.0,
            acceleration: 0.5,
            deceleration: 0.5,
            hard_acceleration: 4.0,
            hard_deceleration: 4.0,
            physical_max: 2.0,
        }
    }
}

impl SpeedParams {
    pub fn validate(&self) -> Result<(), MotionError> {
        let fields = [
            ("max_speed", self.max_speed),
            ("acceleration", self.acceleration),
            ("deceleration", self.deceleration),
            ("hard_acceleration", self.hard_acceleration),
            ("hard_deceleration", self.hard_deceleration),
            ("physical_max", self.physical_max),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(MotionError::InvalidParams(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let ordering = [
            ("max_speed", self.max_speed, "physical_max", self.physical_max),
            (
                "acceleration",
                self.acceleration,
                "hard_acceleration",
                self.hard_acceleration,
            ),
            (
                "deceleration",
                self.deceleration,
                "hard_deceleration",
                self.hard_deceleration,
            ),
        ];
        for (lo_name, lo, hi_name, hi) in ordering {
            if lo > hi {
                return Err(MotionError::InvalidParams(format!(
                    "{lo_name} ({lo}) exceeds {hi_name} ({hi})"
                )));
            }
        }
        Ok(())
    }

    /// Applies one speed setting. `defaults` supplies the values `std` restores.
    pub fn with_setting(
        &self,
        kind: SettingKind,
        value: SettingValue,
        defaults: &SpeedParams,
    ) -> Result<SpeedParams, MotionError> {
        let (limit, standard) = match kind {
            SettingKind::MaxSpeed => (self.physical_max, defaults.max_speed),
            SettingKind::Acceleration => (self.hard_acceleration, defaults.acceleration),
            SettingKind::Deceleration => (self.hard_deceleration, defaults.deceleration),
        };
        let resolved = match value {
            SettingValue::Max => limit,
            SettingValue::Std => standard,
            SettingValue::Number(v) => {
                if !(v.is_finite() && v > 0.0) {
                    return Err(MotionError::NonPositiveSetting { kind, value: v });
                }
                if v > limit {
                    return Err(MotionError::SettingExceedsLimit { kind, value: v, limit });
                }
                v
            }
        };
        let mut next = *self;
        match kind {
            SettingKind::MaxSpeed => next.max_speed = resolved,
            SettingKind::Acceleration => next.acceleration = resolved,
            SettingKind::Deceleration => next.deceleration = resolved,
        }
        Ok(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SettingKind {
    MaxSpeed,
    Acceleration,
    Deceleration,
}

impl SettingKind {
    pub fn keyword(self) -> &'static str {
        match self {
            SettingKind::MaxSpeed => "maxSpeed",
            SettingKind::Acceleration => "acceleration",
            SettingKind::Deceleration => "deceleration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SettingValue {
    Number(f64),
    /// The physical limit of the robot.
    Max,
    /// The robot's standard value.
    Std,
}

/// Current speed parameters of every robot.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedTable {
    defaults: SpeedParams,
    robots: Vec<SpeedParams>,
}

impl SpeedTable {
    pub fn new(defaults: SpeedParams, robot_count: usize) -> Self {
        Self {
            defaults,
            robots: vec![defaults; robot_count],
        }
    }

    pub fn get(&self, robot: RobotId) -> &SpeedParams {
        &self.robots[robot.index()]
    }

    /// Applies a setting to one robot, or to all robots when `robot` is `None`.
    pub fn apply(&mut self, robot: Option<RobotId>, kind: SettingKind, value: SettingValue) -> Result<(), MotionError> {
        match robot {
            Some(id) => {
                let slot = &mut self.robots[id.index()];
                *slot = slot.with_setting(kind, value, &self.defaults)?;
            }
            None => {
                let updated = self
                    .robots
                    .iter()
                    .map(|p| p.with_setting(kind, value, &self.defaults))
                    .collect::<Result<Vec<_>, _>>()?;
                self.robots = updated;
            }
        }
        Ok(())
    }
}
