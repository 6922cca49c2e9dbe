//! The stage: its bounds, forbidden areas, reference points and grid, plus
//! the scan that flags robots entering illegal positions.

use std::fmt;

use thiserror::Error;

use crate::geometry::Point;
use crate::scheduler::Timeline;
use crate::RobotId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("scene {0} must be positive, got {1}")]
    BadDimension(&'static str, f64),
    #[error("forbidden area {0:?} is already declared")]
    DuplicateArea(String),
    #[error("coordinates must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Color {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rgb({},{},{})", self.r, self.g, self.b)
    }
}

/// Axis-aligned rectangle with ordered corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    /// Builds a rectangle from any two opposite corners.
    pub fn from_corners(a: Point, b: Point) -> Self {
        Self {
            min: Point::new(a.x.min(b.x), a.y.min(b.y)),
            max: Point::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    /// Boundary inclusive.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min.x && x <= self.max.x && y >= self.min.y && y <= self.max.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForbiddenArea {
    pub name: String,
    pub color: Color,
    pub rect: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub color: Color,
    pub position: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    width: f64,
    depth: f64,
    areas: Vec<ForbiddenArea>,
    reference_points: Vec<ReferencePoint>,
    grid: bool,
}

/// Where a point lies relative to the scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    Legal,
    OutOfScene,
    /// Inside the forbidden area with this declaration index.
    Inside(usize),
}

impl Scene {
    pub fn new(width: f64, depth: f64) -> Result<Self, SceneError> {
        if !(width.is_finite() && width > 0.0) {
            return Err(SceneError::BadDimension("width", width));
        }
        if !(depth.is_finite() && depth > 0.0) {
            return Err(SceneError::BadDimension("depth", depth));
        }
        Ok(Self {
            width,
            depth,
            areas: Vec::new(),
            reference_points: Vec::new(),
            grid: false,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn areas(&self) -> &[ForbiddenArea] {
        &self.areas
    }

    pub fn reference_points(&self) -> &[ReferencePoint] {
        &self.reference_points
    }

    pub fn has_grid(&self) -> bool {
        self.grid
    }

    pub fn enable_grid(&mut self) {
        self.grid = true;
    }

    pub fn add_area(&mut self, name: &str, color: Color, a: Point, b: Point) -> Result<(), SceneError> {
        if ![a.x, a.y, b.x, b.y].iter().all(|v| v.is_finite()) {
            return Err(SceneError::NonFinite);
        }
        if self.areas.iter().any(|area| area.name == name) {
            return Err(SceneError::DuplicateArea(name.to_owned()));
        }
        self.areas.push(ForbiddenArea {
            name: name.to_owned(),
            color,
            rect: Rect::from_corners(a, b),
        });
        Ok(())
    }

    pub fn add_reference_point(&mut self, color: Color, position: Point) -> Result<(), SceneError> {
        if !(position.x.is_finite() && position.y.is_finite()) {
            return Err(SceneError::NonFinite);
        }
        self.reference_points.push(ReferencePoint { color, position });
        Ok(())
    }

    pub fn classify_point(&self, x: f64, y: f64) -> Placement {
        let half = self.width / 2.0;
        if !(x >= -half && x <= half && y >= 0.0 && y <= self.depth) {
            return Placement::OutOfScene;
        }
        self.areas
            .iter()
            .position(|a| a.rect.contains(x, y))
            .map_or(Placement::Legal, Placement::Inside)
    }

    pub fn area_name(&self, placement: Placement) -> Option<&str> {
        match placement {
            Placement::Inside(i) => self.areas.get(i).map(|a| a.name.as_str()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WarningCause {
    OutOfScene,
    ForbiddenArea(String),
}

impl fmt::Display for WarningCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WarningCause::OutOfScene => f.write_str("left the scene"),
            WarningCause::ForbiddenArea(name) => write!(f, "entered forbidden area {name:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub robot: RobotId,
    pub robot_name: String,
    /// Start of the violation episode, seconds.
    pub time: f64,
    pub position: Point,
    pub cause: WarningCause,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={:.3}: {} {} at ({:.3}, {:.3})",
            self.time, self.robot_name, self.cause, self.position.x, self.position.y
        )
    }
}

/// Sample times for a timeline: every multiple of `dt` up to the end, plus all action boundaries.
///
/// Boundaries within 1e-9 s of a grid time (or of each other) are folded
/// into the earlier-listed value so rounding noise does not duplicate frames.
pub(crate) fn sample_times(timeline: &Timeline, dt: f64) -> Vec<f64> {
    let total = timeline.duration();
    let mut times: Vec<f64> = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * dt;
        if t > total + 1e-9 {
            break;
        }
        times.push(t);
        k += 1;
    }
    let mut boundaries = vec![total];
    for track in timeline.tracks() {
        for action in track.actions() {
            boundaries.push(action.start);
            boundaries.push(action.end);
        }
    }
    boundaries.sort_by(f64::total_cmp);
    for b in boundaries {
        let near_grid = ((b / dt).round() * dt - b).abs() <= 1e-9;
        let near_previous = times.last().is_some_and(|&p| (b - p).abs() <= 1e-9);
        if !near_grid && !near_previous {
            times.push(b);
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

/// Samples every robot and reports each contiguous stretch spent in an illegal position once.
///
/// Panics if `dt` is not positive.
pub fn scan_timeline(scene: &Scene, timeline: &Timeline, dt: f64) -> Vec<Warning> {
    assert!(dt > 0.0 && dt.is_finite(), "sampling step must be positive");
    let times = sample_times(timeline, dt);
    let mut warnings = Vec::new();
    for track in timeline.tracks() {
        let mut current = Placement::Legal;
        for &t in &times {
            let pose = track.pose_at(t).pose;
            let placement = scene.classify_point(pose.x, pose.y);
            if placement != current && placement != Placement::Legal {
                let cause = match placement {
                    Placement::OutOfScene => WarningCause::OutOfScene,
                    _ => WarningCause::ForbiddenArea(scene.area_name(placement).unwrap_or_default().to_owned()),
                };
                warnings.push(Warning {
                    robot: track.robot(),
                    robot_name: track.name().to_owned(),
                    time: t,
                    position: pose.position(),
                    cause,
                });
            }
            current = placement;
        }
    }
    warnings.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.robot.cmp(&b.robot)));
    warnings
}
