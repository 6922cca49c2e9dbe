//! Piecewise constant-acceleration speed profiles.
//!
//! Without interior control actions a movement gets the classic trapezoid
//! (or triangle, when the path is too short to reach cruise speed), computed
//! in closed form. With actions the profile is built phase by phase: the
//! target speed changes at equal time steps of the unmodulated duration and
//! the robot tracks it, always keeping enough room to brake onto the end of
//! the path.

use super::control::{Action, ControlSpec, Marker};
use super::{MotionError, SpeedParams};

/// Multiplier applied to the target speed by `+`.
pub const INCREASE_FACTOR: f64 = 1.25;
/// Multiplier applied to the target speed by `-`.
pub const DECREASE_FACTOR: f64 = 0.8;

/// Relative slack allowed when checking a required deceleration against its limit.
const RATE_SLACK: f64 = 1e-9;
const MAX_PHASES: usize = 100_000;

/// One stretch of constant acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    /// Time since the start of the movement, seconds.
    pub start: f64,
    pub duration: f64,
    /// Speed at `start`, m/s.
    pub speed: f64,
    /// m/s², negative while braking.
    pub accel: f64,
    /// Distance covered before this phase, meters.
    pub offset: f64,
}

impl Phase {
    pub fn end_speed(&self) -> f64 {
        (self.speed + self.accel * self.duration).max(0.0)
    }

    pub fn distance(&self) -> f64 {
        self.speed * self.duration + 0.5 * self.accel * self.duration * self.duration
    }

    fn speed_after(&self, dt: f64) -> f64 {
        (self.speed + self.accel * dt).max(0.0)
    }

    fn distance_after(&self, dt: f64) -> f64 {
        self.offset + self.speed * dt + 0.5 * self.accel * dt * dt
    }
}

/// Speed as a function of time for one movement.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionProfile {
    phases: Vec<Phase>,
    duration: f64,
    entry_speed: f64,
    exit_speed: f64,
    distance: f64,
}

impl MotionProfile {
    /// A movement that takes no time.
    pub fn instant(speed: f64) -> Self {
        Self {
            phases: Vec::new(),
            duration: 0.0,
            entry_speed: speed,
            exit_speed: speed,
            distance: 0.0,
        }
    }

    /// Stitches `(duration, accel)` pieces together starting at `entry` speed.
    fn from_pieces(entry: f64, pieces: &[(f64, f64)], distance: f64, exit: f64) -> Self {
        let mut phases = Vec::with_capacity(pieces.len());
        let (mut t, mut s, mut v) = (0.0, 0.0, entry);
        for &(duration, accel) in pieces {
            if duration <= 0.0 {
                continue;
            }
            let phase = Phase {
                start: t,
                duration,
                speed: v,
                accel,
                offset: s,
            };
            t += duration;
            s += phase.distance();
            v = phase.end_speed();
            phases.push(phase);
        }
        Self {
            phases,
            duration: t,
            entry_speed: entry,
            exit_speed: exit,
            distance,
        }
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn entry_speed(&self) -> f64 {
        self.entry_speed
    }

    pub fn exit_speed(&self) -> f64 {
        self.exit_speed
    }

    /// Path length the profile was built for.
    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Sum of the phase integrals; equals [`distance`](Self::distance) up to rounding.
    pub fn integrated_distance(&self) -> f64 {
        self.phases.iter().map(Phase::distance).sum()
    }

    fn phase_at(&self, t: f64) -> Option<&Phase> {
        let idx = self.phases.partition_point(|p| p.start <= t);
        idx.checked_sub(1).map(|i| &self.phases[i])
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.entry_speed;
        }
        if t >= self.duration {
            return self.exit_speed;
        }
        self.phase_at(t)
            .map_or(self.entry_speed, |p| p.speed_after(t - p.start))
    }

    /// Distance travelled after `t` seconds, clamped to `[0, distance]`.
    pub fn distance_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.duration {
            return self.distance;
        }
        self.phase_at(t)
            .map_or(0.0, |p| p.distance_after(t - p.start))
            .clamp(0.0, self.distance)
    }
}

/// Minimum-time trapezoid between two speeds under fixed limits.
fn trapezoid(
    length: f64,
    entry: f64,
    exit: f64,
    cruise: f64,
    accel: f64,
    decel: f64,
) -> Result<MotionProfile, MotionError> {
    let infeasible = || MotionError::Infeasible { length, entry, exit };
    if length == 0.0 {
        return if entry == exit {
            Ok(MotionProfile::instant(entry))
        } else {
            Err(infeasible())
        };
    }
    let needed = if exit > entry {
        (exit * exit - entry * entry) / (2.0 * accel)
    } else {
        (entry * entry - exit * exit) / (2.0 * decel)
    };
    if needed > length * (1.0 + RATE_SLACK) {
        return Err(infeasible());
    }
    let peak_sq = (2.0 * accel * decel * length + decel * entry * entry + accel * exit * exit) / (accel + decel);
    let peak = peak_sq.sqrt().min(cruise).max(entry).max(exit);
    let up = ((peak * peak - entry * entry) / (2.0 * accel)).max(0.0);
    let down = ((peak * peak - exit * exit) / (2.0 * decel)).max(0.0);
    let level = (length - up - down).max(0.0);
    let pieces = [
        ((peak - entry) / accel, accel),
        (if peak > 0.0 { level / peak } else { 0.0 }, 0.0),
        ((peak - exit) / decel, -decel),
    ];
    Ok(MotionProfile::from_pieces(entry, &pieces, length, exit))
}

/// Trapezoidal profile with the normal acceleration and deceleration.
///
/// Ramps from `entry_speed` toward `max_speed`, cruises, and ramps down to
/// `exit_speed`, in minimal time. Fails when the path is too short to go
/// from one speed to the other within the limits.
pub fn base_profile(
    distance: f64,
    params: &SpeedParams,
    entry_speed: f64,
    exit_speed: f64,
) -> Result<MotionProfile, MotionError> {
    check_inputs(distance, params)?;
    for v in [entry_speed, exit_speed] {
        if !(v.is_finite() && v >= 0.0 && v <= params.max_speed) {
            return Err(MotionError::InvalidSpeed(v));
        }
    }
    trapezoid(
        distance,
        entry_speed,
        exit_speed,
        params.max_speed,
        params.acceleration,
        params.deceleration,
    )
}

fn check_inputs(distance: f64, params: &SpeedParams) -> Result<(), MotionError> {
    params.validate()?;
    if !(distance.is_finite() && distance >= 0.0) {
        return Err(MotionError::InvalidDistance(distance));
    }
    Ok(())
}

/// Profile for one movement driven with a control string.
///
/// `previous_exit_speed` is only used when the string starts with `=`. A
/// trailing `=` keeps whatever speed the robot has when it reaches the end
/// of the path.
pub fn apply_control(
    distance: f64,
    params: &SpeedParams,
    spec: &ControlSpec,
    previous_exit_speed: f64,
) -> Result<MotionProfile, MotionError> {
    shape_profile(distance, params, spec, previous_exit_speed, f64::INFINITY)
}

/// Like [`apply_control`], with an upper bound on the speed a trailing `=` may carry out.
pub fn shape_profile(
    distance: f64,
    params: &SpeedParams,
    spec: &ControlSpec,
    previous_exit_speed: f64,
    exit_cap: f64,
) -> Result<MotionProfile, MotionError> {
    check_inputs(distance, params)?;
    let entry = if spec.entry == Marker::Carry {
        previous_exit_speed
    } else {
        0.0
    };
    if !(entry.is_finite() && entry >= 0.0) {
        return Err(MotionError::InvalidSpeed(entry));
    }
    if exit_cap.is_nan() || exit_cap < 0.0 {
        return Err(MotionError::InvalidSpeed(exit_cap));
    }
    let limits = Limits::new(params, spec, exit_cap);
    if spec.actions.is_empty() && entry <= params.max_speed {
        return closed_form(distance, entry, &limits);
    }
    let nominal = if entry <= params.max_speed {
        closed_form(distance, entry, &limits)?
    } else {
        Builder::new(distance, entry, &limits, &[], 0.0).run()?
    };
    // every character of the string owns one equal slice of the nominal duration
    let step = nominal.duration() / spec.slots.max(1) as f64;
    let lead = usize::from(spec.entry != Marker::Normal);
    Builder::new(distance, entry, &limits, &spec.actions, step)
        .starting_at_slot(lead)
        .run()
}

/// Rates and speeds in force for one movement.
#[derive(Debug, Clone, Copy)]
struct Limits {
    cruise: f64,
    physical_max: f64,
    accel: f64,
    decel: f64,
    launch: f64,
    hard_accel: f64,
    hard_decel: f64,
    /// Deceleration for the final stop (or slow-down onto the carry cap).
    brake: f64,
    carry_exit: bool,
    exit_cap: f64,
}

impl Limits {
    fn new(params: &SpeedParams, spec: &ControlSpec, exit_cap: f64) -> Self {
        Self {
            cruise: params.max_speed,
            physical_max: params.physical_max,
            accel: params.acceleration,
            decel: params.deceleration,
            launch: if spec.entry == Marker::Hard {
                params.hard_acceleration
            } else {
                params.acceleration
            },
            hard_accel: params.hard_acceleration,
            hard_decel: params.hard_deceleration,
            brake: if spec.exit == Marker::Hard {
                params.hard_deceleration
            } else {
                params.deceleration
            },
            carry_exit: spec.exit == Marker::Carry,
            exit_cap,
        }
    }

    /// Highest speed the robot may have when it reaches the end of the path.
    fn arrival_limit(&self) -> f64 {
        if self.carry_exit {
            self.exit_cap
        } else {
            0.0
        }
    }
}

fn closed_form(length: f64, entry: f64, limits: &Limits) -> Result<MotionProfile, MotionError> {
    let exit = if limits.carry_exit {
        let reachable = (entry * entry + 2.0 * limits.launch * length).sqrt();
        limits.cruise.min(limits.exit_cap).min(reachable).max(0.0)
    } else {
        0.0
    };
    // a carried-in speed above the cap must come down even when the path is short
    let exit = if limits.carry_exit && entry > exit {
        let lowest = (entry * entry - 2.0 * limits.brake * length).max(0.0).sqrt();
        exit.max(lowest.min(limits.exit_cap))
    } else {
        exit
    };
    trapezoid(length, entry, exit, limits.cruise, limits.launch, limits.brake)
}

/// Smallest root of `a t² + b t + c = 0` in `(0, horizon]`, if any.
fn first_root(a: f64, b: f64, c: f64, horizon: f64) -> Option<f64> {
    let root = if a.abs() < 1e-300 {
        if b.abs() < 1e-300 {
            return None;
        }
        let t = -c / b;
        if t > 0.0 {
            Some(t)
        } else {
            None
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        let mut roots = [q / a, if q != 0.0 { c / q } else { f64::NAN }];
        roots.sort_by(f64::total_cmp);
        roots.into_iter().find(|t| *t > 0.0)
    };
    root.filter(|t| *t <= horizon)
}

struct Builder<'a> {
    length: f64,
    limits: &'a Limits,
    actions: &'a [Action],
    step: f64,
    pieces: Vec<(f64, f64)>,
    t: f64,
    s: f64,
    v: f64,
    entry: f64,
    target: f64,
    ramp: f64,
    braking_to_zero: bool,
    next_action: usize,
    first_slot: usize,
}

enum Step {
    Continue,
    Done(f64),
}

impl<'a> Builder<'a> {
    fn new(length: f64, entry: f64, limits: &'a Limits, actions: &'a [Action], step: f64) -> Self {
        Self {
            length,
            limits,
            actions,
            step,
            pieces: Vec::new(),
            t: 0.0,
            s: 0.0,
            v: entry,
            entry,
            target: limits.cruise,
            ramp: limits.launch,
            braking_to_zero: false,
            next_action: 0,
            first_slot: 0,
        }
    }

    fn starting_at_slot(mut self, slot: usize) -> Self {
        self.first_slot = slot;
        self
    }

    fn action_time(&self, index: usize) -> f64 {
        (index + self.first_slot) as f64 * self.step
    }

    fn infeasible(&self) -> MotionError {
        MotionError::Infeasible {
            length: self.length,
            entry: self.entry,
            exit: self.limits.arrival_limit(),
        }
    }

    fn run(mut self) -> Result<MotionProfile, MotionError> {
        let ve = self.limits.arrival_limit();
        if self.length == 0.0 {
            return if self.v <= ve {
                Ok(MotionProfile::instant(self.v))
            } else {
                Err(self.infeasible())
            };
        }
        for _ in 0..MAX_PHASES {
            if let Step::Done(exit) = self.advance(ve)? {
                return Ok(MotionProfile::from_pieces(self.entry, &self.pieces, self.length, exit));
            }
        }
        Err(MotionError::NoConvergence)
    }

    fn fire_due_actions(&mut self) {
        while self.next_action < self.actions.len() && self.action_time(self.next_action) <= self.t {
            match self.actions[self.next_action] {
                Action::Increase => {
                    self.target = (self.target * INCREASE_FACTOR).min(self.limits.physical_max);
                }
                Action::Decrease => self.target *= DECREASE_FACTOR,
                Action::Hold => {}
                Action::Jump => {
                    self.braking_to_zero = true;
                    self.ramp = self.limits.hard_accel;
                }
            }
            self.next_action += 1;
        }
    }

    fn push(&mut self, duration: f64, accel: f64) {
        if duration > 0.0 {
            self.s += self.v * duration + 0.5 * accel * duration * duration;
            self.v = (self.v + accel * duration).max(0.0);
            self.t += duration;
            self.pieces.push((duration, accel));
        }
    }

    /// Brakes from the current speed onto `ve` exactly at the end of the path.
    fn final_brake(&mut self, ve: f64) -> Result<Step, MotionError> {
        let remaining = self.length - self.s;
        if self.v <= ve {
            return Ok(Step::Done(self.v));
        }
        if remaining <= 0.0 {
            return Err(self.infeasible());
        }
        let rate = (self.v * self.v - ve * ve) / (2.0 * remaining);
        if rate > self.limits.brake * (1.0 + RATE_SLACK) {
            return Err(self.infeasible());
        }
        let duration = (self.v - ve) / rate;
        self.pieces.push((duration, -rate));
        self.t += duration;
        self.s = self.length;
        self.v = ve;
        Ok(Step::Done(ve))
    }

    fn advance(&mut self, ve: f64) -> Result<Step, MotionError> {
        self.fire_due_actions();
        let lim = *self.limits;

        if self.braking_to_zero && self.v <= 0.0 {
            self.braking_to_zero = false;
        }
        let accel = if self.braking_to_zero {
            -lim.hard_decel
        } else if self.v < self.target {
            self.ramp
        } else if self.v > self.target {
            -lim.decel
        } else {
            0.0
        };

        let mut horizon = f64::INFINITY;
        if self.next_action < self.actions.len() {
            horizon = horizon.min(self.action_time(self.next_action) - self.t);
        }
        if self.braking_to_zero {
            horizon = horizon.min(self.v / lim.hard_decel);
        } else if accel != 0.0 {
            horizon = horizon.min((self.target - self.v) / accel);
        }
        if accel > 0.0 && self.v < ve {
            horizon = horizon.min((ve - self.v) / accel);
        } else if accel < 0.0 && self.v > ve {
            horizon = horizon.min((self.v - ve) / -accel);
        }
        let horizon = horizon.max(0.0);

        if self.v > ve || (self.v == ve && accel > 0.0) {
            // room needed to brake onto ve from the speed reached after dt
            let b = lim.brake;
            let qa = 0.5 * accel + accel * accel / (2.0 * b);
            let qb = self.v + self.v * accel / b;
            let qc = self.s + (self.v * self.v - ve * ve) / (2.0 * b) - self.length;
            if qc >= -1e-12 * self.length.max(1.0) {
                return self.final_brake(ve);
            }
            if let Some(dt) = first_root(qa, qb, qc, horizon) {
                self.push(dt, accel);
                return self.final_brake(ve);
            }
        } else {
            let qc = self.s - self.length;
            if let Some(dt) = first_root(0.5 * accel, self.v, qc, horizon) {
                self.push(dt, accel);
                self.s = self.length;
                return Ok(Step::Done(self.v));
            }
        }

        if !horizon.is_finite() {
            // cruising with nothing left to happen and no way to reach the end
            return Err(MotionError::NoConvergence);
        }
        self.push(horizon, accel);
        if self.braking_to_zero && self.v <= 1e-12 {
            self.v = 0.0;
            self.braking_to_zero = false;
        } else if !self.braking_to_zero && (self.v - self.target).abs() <= 1e-12 {
            self.v = self.target;
            self.ramp = lim.accel;
        }
        Ok(Step::Continue)
    }
}
