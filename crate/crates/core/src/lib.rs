pub mod config;
pub mod frontend;
pub mod geometry;
pub mod motion;
pub mod output;
pub mod scene;
pub mod scheduler;

pub use config::Config;
pub use frontend::{compile, InstructionStream, ScriptError};
pub use scheduler::{schedule, Timeline};

/// Index of a declared robot, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RobotId(pub usize);

impl RobotId {
    pub fn index(self) -> usize {
        self.0
    }
}
