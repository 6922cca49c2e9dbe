//! Turns an instruction stream into per-robot timelines.
//!
//! Each robot's queue is timed on its own. The only coupling between robots
//! is the barriers, which are released in source order at the latest arrival.

use thiserror::Error;

use crate::config::Config;
use crate::frontend::{InstructionStream, Op};
use crate::geometry::{
    arc_endpoint, line_endpoint, path_length, plan_path, sample_path, GeometryError, PathSegment, Pose, TurnConstraint,
};
use crate::motion::{shape_profile, ControlSpec, Marker, MotionError, MotionProfile, SpeedParams};
use crate::RobotId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instruction {instruction}: {source}")]
    Geometry {
        instruction: usize,
        #[source]
        source: GeometryError,
    },
    #[error("instruction {instruction}: {source}")]
    Motion {
        instruction: usize,
        #[source]
        source: MotionError,
    },
    #[error("robot {0:?} is not on the timeline")]
    UnknownRobot(RobotId),
    #[error("time {t} is outside [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
}

impl ScheduleError {
    /// Index of the instruction the error is about, if any.
    pub fn instruction(&self) -> Option<usize> {
        match self {
            ScheduleError::Geometry { instruction, .. } | ScheduleError::Motion { instruction, .. } => {
                Some(*instruction)
            }
            _ => None,
        }
    }
}

/// One entry of a robot's queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueueItem {
    /// Index into the stream's instructions.
    Instruction(usize),
    /// Index into [`Streams::barriers`].
    Barrier(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Barrier {
    /// Index of the `synchronize` instruction.
    pub instruction: usize,
    pub robots: Vec<RobotId>,
}

/// Per-robot queues; barriers are shared between the queues of their participants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Streams {
    pub queues: Vec<Vec<QueueItem>>,
    pub barriers: Vec<Barrier>,
}

/// Distributes instructions to per-robot queues. Global settings go to every queue.
pub fn split_streams(stream: &InstructionStream) -> Streams {
    let mut queues = vec![Vec::new(); stream.robots.len()];
    let mut barriers = Vec::new();
    for (idx, ins) in stream.instructions.iter().enumerate() {
        match &ins.op {
            Op::Synchronize { robots } => {
                if robots.is_empty() {
                    continue;
                }
                let id = barriers.len();
                barriers.push(Barrier {
                    instruction: idx,
                    robots: robots.clone(),
                });
                for r in robots {
                    queues[r.index()].push(QueueItem::Barrier(id));
                }
            }
            Op::Setting { robot: None, .. } => queues.iter_mut().for_each(|q| q.push(QueueItem::Instruction(idx))),
            op => {
                if let Some(r) = op.robot() {
                    queues[r.index()].push(QueueItem::Instruction(idx));
                }
            }
        }
    }
    Streams { queues, barriers }
}

/// Start and goal of one queue item under perfectly executed motion.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub item: QueueItem,
    pub start: Pose,
    pub goal: Pose,
}

/// Annotates a queue with ideal start and goal poses.
///
/// Returns `None` when the queue has no `initialPose`. Items before it
/// (only settings can be there) start and end at the initial pose.
pub fn chain_ideal_poses(stream: &InstructionStream, queue: &[QueueItem]) -> Result<Option<Vec<Leg>>, ScheduleError> {
    let initial = queue.iter().find_map(|item| match item {
        QueueItem::Instruction(i) => match stream.instructions[*i].op {
            Op::InitialPose { pose, .. } => Some(pose),
            _ => None,
        },
        QueueItem::Barrier(_) => None,
    });
    let Some(mut pose) = initial else {
        return Ok(None);
    };
    let mut legs = Vec::with_capacity(queue.len());
    for &item in queue {
        let start = pose;
        if let QueueItem::Instruction(i) = item {
            let geometry = |source| ScheduleError::Geometry { instruction: i, source };
            pose = match &stream.instructions[i].op {
                Op::InitialPose { pose, .. } => *pose,
                Op::MoveTo { goal, .. } => *goal,
                Op::Move { distance, travel, .. } => line_endpoint(&start, *distance, *travel).map_err(geometry)?,
                Op::Circle {
                    radius,
                    angle,
                    side,
                    travel,
                    ..
                } => arc_endpoint(&start, *radius, *angle, *side, *travel).map_err(geometry)?,
                _ => start,
            };
        }
        legs.push(Leg {
            item,
            start,
            goal: pose,
        });
    }
    Ok(Some(legs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    /// `initialPose`; takes no time.
    Place,
    /// A speed setting; takes no time.
    Setting,
    Path,
    Wait,
    /// Standing still at a barrier until the last participant arrives.
    Hold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedAction {
    pub robot: RobotId,
    /// Source instruction; for holds, the `synchronize` statement.
    pub instruction: usize,
    pub kind: ActionKind,
    pub segments: Vec<PathSegment>,
    pub profile: MotionProfile,
    pub start: f64,
    pub end: f64,
    pub start_pose: Pose,
    pub end_pose: Pose,
}

impl TimedAction {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Pose and speed of a robot at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSample {
    pub pose: Pose,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotTrack {
    robot: RobotId,
    name: String,
    initial: Pose,
    actions: Vec<TimedAction>,
}

impl RobotTrack {
    pub fn robot(&self) -> RobotId {
        self.robot
    }

    /// The robot's variable name in the script.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn initial_pose(&self) -> Pose {
        self.initial
    }

    pub fn actions(&self) -> &[TimedAction] {
        &self.actions
    }

    pub fn end_time(&self) -> f64 {
        self.actions.last().map_or(0.0, |a| a.end)
    }

    /// Pose and speed at time `t`; frozen before the first and after the last action.
    pub fn pose_at(&self, t: f64) -> PoseSample {
        let idx = self.actions.partition_point(|a| a.start <= t);
        let Some(action) = idx.checked_sub(1).map(|i| &self.actions[i]) else {
            return PoseSample {
                pose: self.initial,
                speed: 0.0,
            };
        };
        if action.kind == ActionKind::Path && t < action.end {
            let dt = t - action.start;
            let s = action.profile.distance_at(dt);
            if let Ok(pose) = sample_path(&action.segments, s) {
                return PoseSample {
                    pose,
                    speed: action.profile.speed_at(dt),
                };
            }
        }
        PoseSample {
            pose: action.end_pose,
            speed: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierRecord {
    pub instruction: usize,
    pub arrivals: Vec<(RobotId, f64)>,
    pub release: f64,
}

/// Something the scheduler changed or ignored on the script's behalf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notice {
    pub instruction: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    tracks: Vec<RobotTrack>,
    barriers: Vec<BarrierRecord>,
    notices: Vec<Notice>,
    duration: f64,
}

impl Timeline {
    /// Tracks of placed robots, in declaration order.
    pub fn tracks(&self) -> &[RobotTrack] {
        &self.tracks
    }

    pub fn track(&self, robot: RobotId) -> Option<&RobotTrack> {
        self.tracks.iter().find(|t| t.robot == robot)
    }

    pub fn barriers(&self) -> &[BarrierRecord] {
        &self.barriers
    }

    pub fn notices(&self) -> &[Notice] {
        &self.notices
    }

    /// Latest end time over all robots; 0 for an empty performance.
    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Pose of `robot` at time `t`, which must lie within the performance.
pub fn robot_pose_at(timeline: &Timeline, robot: RobotId, t: f64) -> Result<PoseSample, ScheduleError> {
    if !(t >= 0.0 && t <= timeline.duration) {
        return Err(ScheduleError::TimeOutOfRange {
            t,
            duration: timeline.duration,
        });
    }
    timeline
        .track(robot)
        .map(|track| track.pose_at(t))
        .ok_or(ScheduleError::UnknownRobot(robot))
}

/// A queue item with everything but its start time worked out.
struct Step {
    item: QueueItem,
    kind: ActionKind,
    segments: Vec<PathSegment>,
    profile: MotionProfile,
    duration: f64,
    start_pose: Pose,
    end_pose: Pose,
}

struct Movement {
    segments: Vec<PathSegment>,
    length: f64,
    params: SpeedParams,
    control: ControlSpec,
}

fn is_carry_entry(m: &Movement) -> bool {
    m.control.entry == Marker::Carry && m.length > 0.0
}

fn is_carry_exit(m: &Movement) -> bool {
    m.control.exit == Marker::Carry && m.length > 0.0
}

/// Plans and profiles one robot's queue.
fn prepare(
    stream: &InstructionStream,
    legs: &[Leg],
    defaults: &SpeedParams,
    turn: &TurnConstraint,
    notices: &mut Vec<Notice>,
) -> Result<Vec<Step>, ScheduleError> {
    // paths and the speed limits in force for each movement
    let mut params = *defaults;
    let mut movements: Vec<Option<Movement>> = Vec::with_capacity(legs.len());
    for leg in legs {
        let QueueItem::Instruction(i) = leg.item else {
            movements.push(None);
            continue;
        };
        let geometry = |source| ScheduleError::Geometry { instruction: i, source };
        let op = &stream.instructions[i].op;
        let segments = match op {
            Op::Setting { kind, value, .. } => {
                params = params
                    .with_setting(*kind, *value, defaults)
                    .map_err(|source| ScheduleError::Motion { instruction: i, source })?;
                None
            }
            Op::MoveTo { travel, .. } => Some(plan_path(&leg.start, &leg.goal, *travel, turn).map_err(geometry)?),
            Op::Move { distance, travel, .. } if *distance > 0.0 => {
                Some(vec![PathSegment::line(leg.start, *distance, *travel).map_err(geometry)?])
            }
            Op::Circle {
                radius,
                angle,
                side,
                travel,
                ..
            } if *angle > 0.0 => Some(vec![
                PathSegment::arc(leg.start, *radius, *angle, *side, *travel).map_err(geometry)?
            ]),
            Op::Move { .. } | Op::Circle { .. } => Some(Vec::new()),
            _ => None,
        };
        movements.push(segments.map(|segments| Movement {
            length: path_length(&segments),
            segments,
            params,
            control: op.control().cloned().unwrap_or_default(),
        }));
    }

    // carry links: a movement ending in `=` followed, settings aside, by one starting with `=`
    let mut next_carry: Vec<Option<usize>> = vec![None; legs.len()];
    for (k, m) in movements.iter().enumerate() {
        if !m.as_ref().is_some_and(is_carry_exit) {
            continue;
        }
        let mut j = k + 1;
        while j < legs.len() && is_setting(stream, legs[j].item) {
            j += 1;
        }
        match (legs.get(j).map(|l| l.item), movements.get(j).and_then(Option::as_ref)) {
            (Some(QueueItem::Barrier(_)), _) => {
                if let QueueItem::Instruction(i) = legs[k].item {
                    notices.push(Notice {
                        instruction: Some(i),
                        message: "robots stop at a synchronization point; the trailing `=` is ignored".into(),
                    });
                }
            }
            (_, Some(next)) if is_carry_entry(next) => next_carry[k] = Some(j),
            _ => {}
        }
    }

    // backward pass: the fastest speed each linked movement can be entered with
    let mut entry_cap = vec![f64::INFINITY; legs.len()];
    for k in (0..legs.len()).rev() {
        let Some(m) = &movements[k] else { continue };
        let exit_cap = next_carry[k].map_or(0.0, |j| entry_cap[j]);
        let brake = if m.control.exit == Marker::Hard {
            m.params.hard_deceleration
        } else {
            m.params.deceleration
        };
        entry_cap[k] = (exit_cap * exit_cap + 2.0 * brake * m.length).sqrt();
    }

    let mut steps = Vec::with_capacity(legs.len());
    let mut carried = vec![None; legs.len()];
    for (k, leg) in legs.iter().enumerate() {
        let QueueItem::Instruction(i) = leg.item else {
            steps.push(Step {
                item: leg.item,
                kind: ActionKind::Hold,
                segments: Vec::new(),
                profile: MotionProfile::instant(0.0),
                duration: 0.0,
                start_pose: leg.start,
                end_pose: leg.goal,
            });
            continue;
        };
        let (kind, segments, profile, duration) = match (&stream.instructions[i].op, movements[k].take()) {
            (Op::InitialPose { .. }, _) => (ActionKind::Place, Vec::new(), MotionProfile::instant(0.0), 0.0),
            (Op::Setting { .. }, _) => (ActionKind::Setting, Vec::new(), MotionProfile::instant(0.0), 0.0),
            (Op::Wait { seconds, .. }, _) => (ActionKind::Wait, Vec::new(), MotionProfile::instant(0.0), *seconds),
            (_, Some(m)) => {
                let profile = if m.length == 0.0 {
                    MotionProfile::instant(0.0)
                } else {
                    let mut control = m.control.clone();
                    let entry = carried[k].unwrap_or(0.0);
                    if carried[k].is_none() && control.entry == Marker::Carry {
                        control.entry = Marker::Normal;
                    }
                    let exit_cap = match next_carry[k] {
                        Some(j) => entry_cap[j],
                        None => {
                            if control.exit == Marker::Carry {
                                control.exit = Marker::Normal;
                            }
                            0.0
                        }
                    };
                    shape_profile(m.length, &m.params, &control, entry, exit_cap)
                        .map_err(|source| ScheduleError::Motion { instruction: i, source })?
                };
                if let Some(j) = next_carry[k] {
                    carried[j] = Some(profile.exit_speed());
                }
                let duration = profile.duration();
                (ActionKind::Path, m.segments, profile, duration)
            }
            (op, None) => unreachable!("no movement prepared for {op:?}"),
        };
        steps.push(Step {
            item: leg.item,
            kind,
            segments,
            profile,
            duration,
            start_pose: leg.start,
            end_pose: leg.goal,
        });
    }
    Ok(steps)
}

fn is_setting(stream: &InstructionStream, item: QueueItem) -> bool {
    matches!(item, QueueItem::Instruction(i) if matches!(stream.instructions[i].op, Op::Setting { .. }))
}

/// Per-robot cursor while assigning absolute times.
struct Runner {
    robot: RobotId,
    steps: Vec<Step>,
    next: usize,
    time: f64,
    actions: Vec<TimedAction>,
}

impl Runner {
    fn emit(&mut self, step_index: usize, instruction: usize, duration: f64) {
        let step = &mut self.steps[step_index];
        let start = self.time;
        let end = start + duration;
        self.actions.push(TimedAction {
            robot: self.robot,
            instruction,
            kind: step.kind,
            segments: std::mem::take(&mut step.segments),
            profile: std::mem::replace(&mut step.profile, MotionProfile::instant(0.0)),
            start,
            end,
            start_pose: step.start_pose,
            end_pose: step.end_pose,
        });
        self.time = end;
    }

    /// Runs up to (not through) the next barrier, returning its index, or to the end.
    fn advance(&mut self) -> Option<usize> {
        while self.next < self.steps.len() {
            let k = self.next;
            match self.steps[k].item {
                QueueItem::Barrier(b) => return Some(b),
                QueueItem::Instruction(i) => {
                    let duration = self.steps[k].duration;
                    self.emit(k, i, duration);
                    self.next += 1;
                }
            }
        }
        None
    }
}

/// Assigns absolute times to every robot's queue.
///
/// Robots that are never placed have nothing to do and are left off the timeline.
pub fn schedule(stream: &InstructionStream, config: &Config) -> Result<Timeline, ScheduleError> {
    config.validate().map_err(|e| ScheduleError::Config(e.to_string()))?;
    let turn = config
        .turn_constraint()
        .map_err(|e| ScheduleError::Config(e.to_string()))?;
    let streams = split_streams(stream);
    let mut notices = Vec::new();
    let mut runners: Vec<Option<Runner>> = Vec::with_capacity(stream.robots.len());
    for (r, queue) in streams.queues.iter().enumerate() {
        let Some(legs) = chain_ideal_poses(stream, queue)? else {
            notices.push(Notice {
                instruction: None,
                message: format!("robot {:?} is never placed and takes no part", stream.robots[r].var),
            });
            runners.push(None);
            continue;
        };
        let steps = prepare(stream, &legs, &config.speed, &turn, &mut notices)?;
        runners.push(Some(Runner {
            robot: RobotId(r),
            steps,
            next: 0,
            time: 0.0,
            actions: Vec::new(),
        }));
    }

    let mut barriers = Vec::with_capacity(streams.barriers.len());
    for (b, barrier) in streams.barriers.iter().enumerate() {
        let mut arrivals = Vec::with_capacity(barrier.robots.len());
        for r in &barrier.robots {
            let runner = runners[r.index()].as_mut().expect("barrier participants are placed");
            let reached = runner.advance();
            assert_eq!(reached, Some(b), "barriers are met in source order");
            arrivals.push((*r, runner.time));
        }
        let release = arrivals.iter().map(|&(_, t)| t).fold(0.0, f64::max);
        for r in &barrier.robots {
            let runner = runners[r.index()].as_mut().expect("barrier participants are placed");
            let k = runner.next;
            let hold = release - runner.time;
            runner.emit(k, barrier.instruction, hold);
            // the subtraction above can be off by an ulp; the release time is exact
            if let Some(last) = runner.actions.last_mut() {
                last.end = release;
            }
            runner.time = release;
            runner.next += 1;
        }
        barriers.push(BarrierRecord {
            instruction: barrier.instruction,
            arrivals,
            release,
        });
    }

    let mut tracks = Vec::new();
    for (r, runner) in runners.into_iter().enumerate() {
        let Some(mut runner) = runner else { continue };
        runner.advance();
        let initial = runner
            .actions
            .iter()
            .find(|a| a.kind == ActionKind::Place)
            .map(|a| a.end_pose)
            .expect("placed robots have a place action");
        tracks.push(RobotTrack {
            robot: runner.robot,
            name: stream.robots[r].var.clone(),
            initial,
            actions: runner.actions,
        });
    }
    let duration = tracks.iter().map(RobotTrack::end_time).fold(0.0, f64::max);
    Ok(Timeline {
        tracks,
        barriers,
        notices,
        duration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile;
    use crate::geometry::Travel;

    const HEADER: &str = "sceneWidth = 10; sceneDepth = 5;
robot nille = robot(\"Nille\", color(255,128,128));
robot frederik = robot(\"Frederik\", color(128,128,255));
robot third = robot(\"Third\", color(0,0,0));
";

    fn timeline(body: &str) -> Timeline {
        let stream = compile(&format!("{HEADER}{body}")).unwrap();
        schedule(&stream, &Config::default()).unwrap()
    }

    fn ends(track: &RobotTrack) -> Vec<(ActionKind, f64, f64)> {
        track.actions().iter().map(|a| (a.kind, a.start, a.end)).collect()
    }

    #[test]
    fn intertwined_and_grouped_queues_match() {
        let a = compile(&format!(
            "{HEADER}initialPose(nille, hsw/2, 0, north);
            initialPose(frederik, -hsw/2, 0, north);
            moveTo(nille, hsw/2, 3, north);
            moveTo(frederik, -hsw/2, 3, north);
            moveTo(nille, hsw/2+2, 3, east);
            moveTo(frederik, -hsw/2+2, 3, east);"
        ))
        .unwrap();
        let b = compile(&format!(
            "{HEADER}initialPose(nille, hsw/2, 0, north);
            moveTo(nille, hsw/2, 3, north);
            moveTo(nille, hsw/2+2, 3, east);
            initialPose(frederik, -hsw/2, 0, north);
            moveTo(frederik, -hsw/2, 3, north);
            moveTo(frederik, -hsw/2+2, 3, east);"
        ))
        .unwrap();
        let ops = |s: &InstructionStream| -> Vec<Vec<Op>> {
            split_streams(s)
                .queues
                .iter()
                .map(|q| {
                    q.iter()
                        .map(|item| match item {
                            QueueItem::Instruction(i) => s.instructions[*i].op.clone(),
                            QueueItem::Barrier(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect()
        };
        assert_eq!(ops(&a), ops(&b));
    }

    #[test]
    fn barriers_in_queues() {
        let s = compile(&format!(
            "{HEADER}initialPose(nille, 0, 0, north); initialPose(frederik, 1, 0, north); initialPose(third, 2, 0, north);
            synchronize(nille, frederik); synchronize(); maxSpeed(2);"
        ))
        .unwrap();
        let st = split_streams(&s);
        assert_eq!(st.barriers.len(), 2);
        assert_eq!(
            st.queues[0][1..],
            [QueueItem::Barrier(0), QueueItem::Barrier(1), QueueItem::Instruction(5)]
        );
        assert_eq!(st.queues[2][1..], [QueueItem::Barrier(1), QueueItem::Instruction(5)]);
    }

    #[test]
    fn chaining() {
        let s = compile(&format!(
            "{HEADER}initialPose(nille, 0, 0, north); move(nille, 2); circleRight(nille, 1, 90); move(nille, 0);"
        ))
        .unwrap();
        let st = split_streams(&s);
        let legs = chain_ideal_poses(&s, &st.queues[0]).unwrap().unwrap();
        assert!(legs[1].goal.approx_eq(&Pose::new(0.0, 2.0, 0.0), 1e-12));
        assert!(legs[2].goal.approx_eq(&Pose::new(1.0, 3.0, 90.0), 1e-12));
        assert_eq!(legs[3].goal, legs[2].goal);
        assert!(chain_ideal_poses(&s, &st.queues[1]).unwrap().is_none());
    }

    #[test]
    fn wait_between_moves() {
        let tl = timeline("initialPose(nille, 0, 0, north); move(nille, 2); wait(nille, 2); move(nille, 1);");
        let a = tl.tracks()[0].actions();
        assert_eq!(a[3].start, a[1].end + 2.0);
        assert_eq!(a[2].kind, ActionKind::Wait);
    }

    #[test]
    fn barrier_releases_at_latest_arrival() {
        // 4 m at 1 m/s with 0.5 m/s² ramps takes 6 s; 1 m takes 2√2 s
        let tl = timeline(
            "initialPose(nille, 0, 0, north); initialPose(frederik, 1, 0, north);
            move(nille, 1); move(frederik, 4);
            synchronize(nille, frederik);
            move(nille, 1); move(frederik, 1);",
        );
        let rec = &tl.barriers()[0];
        let slowest = rec.arrivals.iter().map(|a| a.1).fold(0.0, f64::max);
        assert_eq!(rec.release, slowest);
        assert!((rec.release - 6.0).abs() < 1e-12);
        for track in tl.tracks().iter().take(2) {
            let hold = track.actions().iter().find(|a| a.kind == ActionKind::Hold).unwrap();
            assert_eq!(hold.end, rec.release);
            let after = track
                .actions()
                .iter()
                .skip_while(|a| a.kind != ActionKind::Hold)
                .nth(1)
                .unwrap();
            assert_eq!(after.start, rec.release);
        }
        let nille_hold = tl.tracks()[0].actions()[2].duration();
        assert!((nille_hold - (6.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(tl.tracks()[1].actions()[2].duration(), 0.0);
    }

    #[test]
    fn subset_barrier_leaves_others_alone() {
        let body = |sync: &str| {
            timeline(&format!(
                "initialPose(nille, 0, 0, north); initialPose(frederik, 1, 0, north); initialPose(third, 2, 0, north);
                move(nille, 1); move(frederik, 3); move(third, 2);
                {sync}
                move(nille, 1); move(third, 1);"
            ))
        };
        let with = body("synchronize(nille, frederik);");
        let without = body("");
        // deleting the statement shifts later source indices; everything else must match
        let strip = |t: &RobotTrack| -> Vec<TimedAction> {
            t.actions()
                .iter()
                .cloned()
                .map(|a| TimedAction { instruction: 0, ..a })
                .collect()
        };
        assert_eq!(strip(&with.tracks()[2]), strip(&without.tracks()[2]));
        assert_ne!(ends(&with.tracks()[0]), ends(&without.tracks()[0]));
    }

    #[test]
    fn carry_links_and_barrier_stop() {
        let tl = timeline(
            "initialPose(nille, 2.5, 0, north);
            moveTo(nille, 2.5, 3, north, \"=\");
            circleRight(nille, 1, 90, \"=\");
            moveTo(nille, 4.5, 4, east, \"=\");",
        );
        let a = tl.tracks()[0].actions();
        assert!(a[1].profile.exit_speed() > 0.0);
        assert_eq!(a[1].profile.exit_speed(), a[2].profile.entry_speed());
        assert_eq!(a[2].profile.exit_speed(), a[3].profile.entry_speed());
        assert_eq!(a[3].profile.exit_speed(), 0.0);

        let tl =
            timeline("initialPose(nille, 0, 0, north); move(nille, 1, \"=\"); synchronize(); move(nille, 1, \"=\");");
        let a = tl.tracks()[0].actions();
        assert_eq!(a[1].profile.exit_speed(), 0.0);
        assert_eq!(a[3].profile.entry_speed(), 0.0);
        assert_eq!(tl.notices().iter().filter(|n| n.instruction.is_some()).count(), 1);
    }

    #[test]
    fn poses_over_time() {
        let tl = timeline(
            "initialPose(nille, 0, 0, north); maxSpeed(nille, 2); acceleration(nille, max); move(nille, 2, \"=\"); wait(nille, 2);",
        );
        let track = &tl.tracks()[0];
        assert_eq!(track.pose_at(0.0).pose, Pose::new(0.0, 0.0, 0.0));
        let mv = &track.actions()[3];
        assert_eq!(mv.segments[0].travel, Travel::Forward);
        let w = &track.actions()[4];
        for f in [0.0, 0.3, 0.99] {
            let t = w.start + f * (w.end - w.start);
            assert_eq!(track.pose_at(t).pose, w.end_pose);
            assert_eq!(track.pose_at(t).speed, 0.0);
        }
        assert!(robot_pose_at(&tl, RobotId(0), tl.duration() + 1.0).is_err());
        assert!(robot_pose_at(&tl, RobotId(1), 0.0).is_err());
        // continuity: pose never moves faster than the speed bound
        let mut prev = track.pose_at(0.0).pose;
        let dt = 1e-3;
        let mut t = 0.0;
        while t <= tl.duration() {
            let p = track.pose_at(t).pose;
            assert!(p.position().distance(prev.position()) <= 2.0 * dt + 1e-9);
            prev = p;
            t += dt;
        }
    }

    #[test]
    fn unplaced_robots_are_left_out() {
        let tl = timeline("initialPose(nille, 0, 0, north); maxSpeed(2); move(nille, 1);");
        assert_eq!(tl.tracks().len(), 1);
        assert_eq!(tl.notices().len(), 2);
        let empty = timeline("");
        assert_eq!(empty.duration(), 0.0);
        assert!(empty.tracks().is_empty());
    }

    #[test]
    fn setting_errors_carry_the_instruction() {
        let s = compile(&format!("{HEADER}initialPose(nille, 0, 0, north); maxSpeed(nille, 3);")).unwrap();
        let e = schedule(&s, &Config::default()).unwrap_err();
        assert_eq!(e.instruction(), Some(1));
        assert!(matches!(
            e,
            ScheduleError::Motion {
                source: MotionError::SettingExceedsLimit { .. },
                ..
            }
        ));
    }

    #[test]
    fn backing_move_to() {
        let tl = timeline("initialPose(nille, 0, 1, south); moveToBacking(nille, 0, 4, south);");
        let a = &tl.tracks()[0].actions()[1];
        assert_eq!(a.segments.len(), 1);
        assert_eq!(a.segments[0].travel, Travel::Backing);
        assert!(tl.tracks()[0]
            .pose_at(tl.duration())
            .pose
            .approx_eq(&Pose::new(0.0, 4.0, 180.0), 1e-9));
    }
}
