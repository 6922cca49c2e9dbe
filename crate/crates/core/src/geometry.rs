//! Poses, compass headings, path segments and the pose-to-pose planner.
//!
//! Headings are compass degrees: 0 is north (pointing into the scene, +y),
//! 90 is east (+x), and angles grow clockwise. Everything crossing this
//! module's API is in degrees; trigonometry happens in radians internally.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Angular tolerance (degrees) below which a computed turn is treated as no turn.
const SNAP_DEGREES: f64 = 1e-10;
/// Planned paths must land this close to the goal (meters and degrees).
pub const GOAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("turning radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("arc angle must be a non-negative finite number of degrees, got {0}")]
    InvalidAngle(f64),
    #[error("distance must be non-negative and finite, got {0}")]
    InvalidDistance(f64),
    #[error("pose is not finite: {0}")]
    NonFinitePose(Pose),
    #[error("no circle-line-circle path from {start} to {goal} with radius {radius}")]
    NoPath { start: Pose, goal: Pose, radius: f64 },
    #[error("arclength {s} outside path of length {length}")]
    OutOfRange { s: f64, length: f64 },
}

/// Brings any finite compass angle into `[0, 360)`.
pub fn normalize_heading(degrees: f64) -> f64 {
    let h = degrees.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// Smallest absolute difference between two compass headings, in degrees.
pub fn heading_difference(a: f64, b: f64) -> f64 {
    let d = normalize_heading(a - b);
    d.min(360.0 - d)
}

/// Unit vector `(dx, dy)` pointing along a compass heading.
pub fn heading_to_vector(heading: f64) -> (f64, f64) {
    let r = heading.to_radians();
    (r.sin(), r.cos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Position in meters plus compass heading in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Always within `[0, 360)`.
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_heading(heading),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.heading.is_finite()
    }

    /// Same position, facing the opposite way.
    pub fn flipped(&self) -> Pose {
        Pose::new(self.x, self.y, self.heading + 180.0)
    }

    /// Reflection across the line `x = 0`.
    pub fn mirrored(&self) -> Pose {
        Pose::new(-self.x, self.y, -self.heading)
    }

    /// True when both position and heading agree within `tol` (meters / degrees).
    pub fn approx_eq(&self, other: &Pose, tol: f64) -> bool {
        self.position().distance(other.position()) <= tol && heading_difference(self.heading, other.heading) <= tol
    }
}

impl fmt::Display for Pose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.heading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Travel {
    Forward,
    Backing,
}

impl Travel {
    fn sign(self) -> f64 {
        match self {
            Travel::Forward => 1.0,
            Travel::Backing => -1.0,
        }
    }
}

/// Smallest circle the robot is able to drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnConstraint {
    min_radius: f64,
}

impl TurnConstraint {
    pub fn new(min_radius: f64) -> Result<Self, GeometryError> {
        if min_radius.is_finite() && min_radius > 0.0 {
            Ok(Self { min_radius })
        } else {
            Err(GeometryError::InvalidRadius(min_radius))
        }
    }

    pub fn min_radius(&self) -> f64 {
        self.min_radius
    }
}

impl Default for TurnConstraint {
    fn default() -> Self {
        Self { min_radius: 0.5 }
    }
}

/// Compass heading change (degrees) per degree of arc.
fn turn_sign(side: Side, travel: Travel) -> f64 {
    match (side, travel) {
        (Side::Right, Travel::Forward) | (Side::Left, Travel::Backing) => 1.0,
        (Side::Left, Travel::Forward) | (Side::Right, Travel::Backing) => -1.0,
    }
}

/// Unit vector pointing to the given side of a heading.
fn side_vector(heading: f64, side: Side) -> (f64, f64) {
    let (ux, uy) = heading_to_vector(heading);
    match side {
        Side::Right => (uy, -ux),
        Side::Left => (-uy, ux),
    }
}

fn turn_center(pose: &Pose, radius: f64, side: Side) -> Point {
    let (sx, sy) = side_vector(pose.heading, side);
    Point::new(pose.x + radius * sx, pose.y + radius * sy)
}

/// Pose reached after driving `angle` degrees around a circle of `radius`.
///
/// The circle's center sits `radius` meters to the named side of the robot.
/// Angles above 360 wind around the circle several times.
pub fn arc_endpoint(start: &Pose, radius: f64, angle: f64, side: Side, travel: Travel) -> Result<Pose, GeometryError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GeometryError::InvalidRadius(radius));
    }
    if !(angle.is_finite() && angle >= 0.0) {
        return Err(GeometryError::InvalidAngle(angle));
    }
    Ok(arc_endpoint_unchecked(start, radius, angle, side, travel))
}

fn arc_endpoint_unchecked(start: &Pose, radius: f64, angle: f64, side: Side, travel: Travel) -> Pose {
    let sign = turn_sign(side, travel);
    let reduced = angle.rem_euclid(360.0);
    if reduced == 0.0 {
        return *start;
    }
    let center = turn_center(start, radius, side);
    // a clockwise compass turn is a negative rotation in the x/y plane
    let (sin, cos) = (-sign * reduced.to_radians()).sin_cos();
    let (rx, ry) = (start.x - center.x, start.y - center.y);
    Pose::new(
        center.x + rx * cos - ry * sin,
        center.y + rx * sin + ry * cos,
        start.heading + sign * reduced,
    )
}

/// Pose reached after driving `distance` meters straight ahead (or back).
pub fn line_endpoint(start: &Pose, distance: f64, travel: Travel) -> Result<Pose, GeometryError> {
    if !(distance.is_finite() && distance >= 0.0) {
        return Err(GeometryError::InvalidDistance(distance));
    }
    Ok(line_endpoint_unchecked(start, distance, travel))
}

fn line_endpoint_unchecked(start: &Pose, distance: f64, travel: Travel) -> Pose {
    if distance == 0.0 {
        return *start;
    }
    let (ux, uy) = heading_to_vector(start.heading);
    let d = travel.sign() * distance;
    Pose {
        x: start.x + d * ux,
        y: start.y + d * uy,
        heading: start.heading,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Line,
    Arc {
        center: Point,
        radius: f64,
        side: Side,
        /// Degrees swept around the center; may exceed 360.
        sweep: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSegment {
    pub kind: SegmentKind,
    pub start: Pose,
    pub end: Pose,
    pub length: f64,
    pub travel: Travel,
}

impl PathSegment {
    pub fn line(start: Pose, distance: f64, travel: Travel) -> Result<Self, GeometryError> {
        let end = line_endpoint(&start, distance, travel)?;
        Ok(Self {
            kind: SegmentKind::Line,
            start,
            end,
            length: distance,
            travel,
        })
    }

    pub fn arc(start: Pose, radius: f64, angle: f64, side: Side, travel: Travel) -> Result<Self, GeometryError> {
        let end = arc_endpoint(&start, radius, angle, side, travel)?;
        Ok(Self {
            kind: SegmentKind::Arc {
                center: turn_center(&start, radius, side),
                radius,
                side,
                sweep: angle,
            },
            start,
            end,
            length: radius * angle * PI / 180.0,
            travel,
        })
    }

    /// Pose after `s` meters along this segment. `s` is clamped to the segment.
    pub fn sample(&self, s: f64) -> Pose {
        if s >= self.length {
            return self.end;
        }
        if s <= 0.0 {
            return self.start;
        }
        match self.kind {
            SegmentKind::Line => line_endpoint_unchecked(&self.start, s, self.travel),
            SegmentKind::Arc { radius, side, .. } => {
                arc_endpoint_unchecked(&self.start, radius, (s / radius).to_degrees(), side, self.travel)
            }
        }
    }

    /// The same stretch of floor driven the other way round: end to start, opposite travel.
    pub fn reversed(&self) -> PathSegment {
        let travel = match self.travel {
            Travel::Forward => Travel::Backing,
            Travel::Backing => Travel::Forward,
        };
        PathSegment {
            kind: self.kind,
            start: self.end,
            end: self.start,
            length: self.length,
            travel,
        }
    }

    /// Recomputes the end pose from the start pose with the analytic segment formulas.
    pub fn replay(&self, start: &Pose) -> Pose {
        match self.kind {
            SegmentKind::Line => line_endpoint_unchecked(start, self.length, self.travel),
            SegmentKind::Arc {
                radius, side, sweep, ..
            } => arc_endpoint_unchecked(start, radius, sweep, side, self.travel),
        }
    }
}

pub fn path_length(segments: &[PathSegment]) -> f64 {
    segments.iter().map(|s| s.length).sum()
}

/// Pose at arclength `s` along a chain of segments.
///
/// `s` may overshoot the total length by floating-point noise; anything
/// further out is an error. An empty path has no pose to report, so callers
/// hold on to their own start pose in that case.
pub fn sample_path(segments: &[PathSegment], s: f64) -> Result<Pose, GeometryError> {
    let length = path_length(segments);
    let slack = 1e-9 * length.max(1.0);
    if !(s >= -slack && s <= length + slack) || segments.is_empty() {
        return Err(GeometryError::OutOfRange { s, length });
    }
    let mut remaining = s.max(0.0);
    for (i, seg) in segments.iter().enumerate() {
        if remaining <= seg.length || i + 1 == segments.len() {
            return Ok(seg.sample(remaining));
        }
        remaining -= seg.length;
    }
    unreachable!("non-empty path always returns from the loop")
}

/// A candidate circle-line-circle path before degenerate pieces are dropped.
#[derive(Debug, Clone)]
struct Candidate {
    first: Side,
    segments: Vec<PathSegment>,
    length: f64,
}

fn snap_turn(angle: f64) -> f64 {
    if !(SNAP_DEGREES..=360.0 - SNAP_DEGREES).contains(&angle) {
        0.0
    } else {
        angle
    }
}

/// Turn needed (degrees, in `[0, 360)`) to swing from one heading to another on the given side.
fn forward_turn(from: f64, to: f64, side: Side) -> f64 {
    let raw = match side {
        Side::Right => normalize_heading(to - from),
        Side::Left => normalize_heading(from - to),
    };
    snap_turn(raw)
}

fn math_angle_to_heading(theta: f64) -> f64 {
    normalize_heading(90.0 - theta.to_degrees())
}

/// Forward circle-line-circle construction for one pair of turn sides.
fn csc_candidate(start: &Pose, goal: &Pose, radius: f64, first: Side, last: Side) -> Option<Candidate> {
    let c1 = turn_center(start, radius, first);
    let c2 = turn_center(goal, radius, last);
    let (dx, dy) = (c2.x - c1.x, c2.y - c1.y);
    let d = dx.hypot(dy);

    let line_heading = if first == last {
        if d < 1e-12 {
            start.heading
        } else {
            math_angle_to_heading(dy.atan2(dx))
        }
    } else {
        let inner = d * d - 4.0 * radius * radius;
        if inner < 0.0 {
            return None;
        }
        let straight = inner.sqrt();
        let offset = (2.0 * radius).atan2(straight);
        let theta = dy.atan2(dx);
        match first {
            Side::Right => math_angle_to_heading(theta - offset),
            Side::Left => math_angle_to_heading(theta + offset),
        }
    };

    let mut segments = Vec::with_capacity(3);
    let mut pose = *start;

    let turn1 = forward_turn(start.heading, line_heading, first);
    if turn1 > 0.0 {
        let seg = PathSegment::arc(pose, radius, turn1, first, Travel::Forward).ok()?;
        pose = seg.end;
        segments.push(seg);
    }

    // line length from the actual departure pose to the tangent point on the goal circle
    let (sx, sy) = side_vector(pose.heading, last);
    let tangent = Point::new(c2.x - radius * sx, c2.y - radius * sy);
    let (ux, uy) = heading_to_vector(pose.heading);
    let straight = (tangent.x - pose.x) * ux + (tangent.y - pose.y) * uy;
    if straight < -GOAL_TOLERANCE {
        return None;
    }
    if straight > 1e-12 {
        let seg = PathSegment::line(pose, straight, Travel::Forward).ok()?;
        pose = seg.end;
        segments.push(seg);
    }

    let turn2 = forward_turn(pose.heading, goal.heading, last);
    if turn2 > 0.0 {
        let seg = PathSegment::arc(pose, radius, turn2, last, Travel::Forward).ok()?;
        pose = seg.end;
        segments.push(seg);
    }

    if !pose.approx_eq(goal, GOAL_TOLERANCE) {
        return None;
    }
    if let Some(last_seg) = segments.last_mut() {
        // the construction already lands within tolerance; pin the nominal goal
        last_seg.end = *goal;
    }
    let length = path_length(&segments);
    Some(Candidate {
        first,
        segments,
        length,
    })
}

fn backing_segment(seg: &PathSegment) -> PathSegment {
    let kind = match seg.kind {
        SegmentKind::Line => SegmentKind::Line,
        SegmentKind::Arc {
            center,
            radius,
            side,
            sweep,
        } => SegmentKind::Arc {
            center,
            radius,
            side: side.opposite(),
            sweep,
        },
    };
    PathSegment {
        kind,
        start: seg.start.flipped(),
        end: seg.end.flipped(),
        length: seg.length,
        travel: Travel::Backing,
    }
}

/// Shortest arc-line-arc path from `start` to `goal` driving in one direction.
///
/// Arcs use the constraint's minimum radius. Zero-length pieces are dropped,
/// so a collinear goal yields a single line and `start == goal` yields an
/// empty path. Equal-length candidates prefer turning right first, then the
/// one with fewer segments.
pub fn plan_path(
    start: &Pose,
    goal: &Pose,
    travel: Travel,
    constraint: &TurnConstraint,
) -> Result<Vec<PathSegment>, GeometryError> {
    if !start.is_finite() {
        return Err(GeometryError::NonFinitePose(*start));
    }
    if !goal.is_finite() {
        return Err(GeometryError::NonFinitePose(*goal));
    }
    if start == goal {
        return Ok(Vec::new());
    }
    let radius = constraint.min_radius();

    // backing along a path is driving it forward with the robot turned around
    let (s, g) = match travel {
        Travel::Forward => (*start, *goal),
        Travel::Backing => (start.flipped(), goal.flipped()),
    };

    let mut best: Option<Candidate> = None;
    for (first, last) in [
        (Side::Right, Side::Right),
        (Side::Right, Side::Left),
        (Side::Left, Side::Right),
        (Side::Left, Side::Left),
    ] {
        let Some(mut cand) = csc_candidate(&s, &g, radius, first, last) else {
            continue;
        };
        if travel == Travel::Backing {
            cand.segments = cand.segments.iter().map(backing_segment).collect();
            cand.first = first.opposite();
        }
        best = match best {
            None => Some(cand),
            Some(current) => Some(if prefer(&cand, &current) { cand } else { current }),
        };
    }

    let best = best.ok_or(GeometryError::NoPath {
        start: *start,
        goal: *goal,
        radius,
    })?;
    let mut segments = best.segments;
    if let Some(last) = segments.last_mut() {
        last.end = *goal;
    }
    Ok(segments)
}

fn prefer(challenger: &Candidate, incumbent: &Candidate) -> bool {
    let tol = 1e-12 * incumbent.length.max(1.0);
    if challenger.length < incumbent.length - tol {
        return true;
    }
    if challenger.length > incumbent.length + tol {
        return false;
    }
    let rank = |c: &Candidate| (c.first != Side::Right, c.segments.len());
    rank(challenger) < rank(incumbent)
}
