use std::collections::HashMap;

use super::ast::{Dimension, Expr, ExprKind, ScriptAst, Stmt, StmtKind};
use super::eval::{eval_expr, expect_number, format_number, is_reserved, Env, SpeedConstant, Value};
use super::{ScriptError, ScriptErrorKind, Span};
use crate::geometry::{Point, Pose, Side, Travel};
use crate::motion::{parse_control_string, ControlSpec, SettingKind, SettingValue};
use crate::scene::{Color, Scene};
use crate::RobotId;

/// Maximum depth of nested procedure calls.
pub const RECURSION_LIMIT: usize = 64;
const MAX_INSTRUCTIONS: usize = 1_000_000;

const INSTRUCTIONS: &[&str] = &[
    "initialPose",
    "moveTo",
    "moveToBacking",
    "move",
    "moveBacking",
    "circleRight",
    "circleLeft",
    "circleRightBacking",
    "circleLeftBacking",
    "wait",
    "synchronize",
    "maxSpeed",
    "acceleration",
    "deceleration",
    "grid",
    "referencePoint",
    "forbiddenArea",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RobotDecl {
    pub id: RobotId,
    /// Variable the script refers to the robot by.
    pub var: String,
    /// Display name given to `robot(...)`.
    pub name: String,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    InitialPose {
        robot: RobotId,
        pose: Pose,
    },
    MoveTo {
        robot: RobotId,
        goal: Pose,
        travel: Travel,
        control: ControlSpec,
    },
    Move {
        robot: RobotId,
        distance: f64,
        travel: Travel,
        control: ControlSpec,
    },
    Circle {
        robot: RobotId,
        radius: f64,
        angle: f64,
        side: Side,
        travel: Travel,
        control: ControlSpec,
    },
    Wait {
        robot: RobotId,
        seconds: f64,
    },
    Synchronize {
        robots: Vec<RobotId>,
    },
    /// `robot: None` applies to every robot.
    Setting {
        robot: Option<RobotId>,
        kind: SettingKind,
        value: SettingValue,
    },
}

impl Op {
    /// The single robot this instruction is bound to, if any.
    pub fn robot(&self) -> Option<RobotId> {
        match self {
            Op::InitialPose { robot, .. }
            | Op::MoveTo { robot, .. }
            | Op::Move { robot, .. }
            | Op::Circle { robot, .. }
            | Op::Wait { robot, .. } => Some(*robot),
            Op::Setting { robot, .. } => *robot,
            Op::Synchronize { .. } => None,
        }
    }

    pub fn control(&self) -> Option<&ControlSpec> {
        match self {
            Op::MoveTo { control, .. } | Op::Move { control, .. } | Op::Circle { control, .. } => Some(control),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub op: Op,
    pub span: Span,
    /// Canonical text with every argument evaluated and the robot left out.
    pub text: String,
}

/// A script after evaluation: scene, robots and the flat instruction list.
#[derive(Debug, Clone, PartialEq)]
pub struct InstructionStream {
    pub scene: Scene,
    pub robots: Vec<RobotDecl>,
    pub instructions: Vec<Instruction>,
}

impl InstructionStream {
    pub fn robot(&self, id: RobotId) -> &RobotDecl {
        &self.robots[id.index()]
    }

    pub fn robot_by_var(&self, var: &str) -> Option<&RobotDecl> {
        self.robots.iter().find(|r| r.var == var)
    }
}

struct Expander<'a> {
    procs: HashMap<&'a str, (&'a [String], &'a [Stmt])>,
    env: Env,
    width: Option<f64>,
    depth: Option<f64>,
    scene: Option<Scene>,
    robots: Vec<RobotDecl>,
    placed: Vec<bool>,
    out: Vec<Instruction>,
    calls: usize,
}

fn err(kind: ScriptErrorKind, span: Span) -> ScriptError {
    ScriptError::new(kind, span)
}

fn bad(msg: impl Into<String>, span: Span) -> ScriptError {
    err(ScriptErrorKind::BadArgument(msg.into()), span)
}

fn arity(name: &str, expected: &str, found: usize, span: Span) -> ScriptError {
    err(
        ScriptErrorKind::Arity {
            name: name.to_owned(),
            expected: expected.to_owned(),
            found,
        },
        span,
    )
}

fn mismatch(expected: &'static str, found: &Value, span: Span) -> ScriptError {
    err(
        ScriptErrorKind::TypeMismatch {
            expected,
            found: found.type_name(),
        },
        span,
    )
}

/// Evaluated call argument with the position of its expression.
struct Arg {
    value: Value,
    span: Span,
}

impl Arg {
    fn number(&self) -> Result<f64, ScriptError> {
        expect_number(&self.value, self.span)
    }

    fn text(&self) -> Result<&str, ScriptError> {
        match &self.value {
            Value::Text(s) => Ok(s),
            other => Err(mismatch("a string", other, self.span)),
        }
    }

    fn color(&self) -> Result<Color, ScriptError> {
        match &self.value {
            Value::Color(c) => Ok(*c),
            other => Err(mismatch("a color", other, self.span)),
        }
    }

    fn robot(&self) -> Result<RobotId, ScriptError> {
        match &self.value {
            Value::Robot(id) => Ok(*id),
            other => Err(mismatch("a robot", other, self.span)),
        }
    }
}

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

fn pose_text(p: &Pose) -> String {
    format!(
        "{}, {}, {}",
        format_number(p.x),
        format_number(p.y),
        format_number(p.heading)
    )
}

impl<'a> Expander<'a> {
    fn push(&mut self, op: Op, span: Span, text: String) -> Result<(), ScriptError> {
        if self.out.len() >= MAX_INSTRUCTIONS {
            return Err(err(ScriptErrorKind::TooManyInstructions(MAX_INSTRUCTIONS), span));
        }
        self.out.push(Instruction { op, span, text });
        Ok(())
    }

    fn args(&self, exprs: &[Expr]) -> Result<Vec<Arg>, ScriptError> {
        exprs
            .iter()
            .map(|e| {
                Ok(Arg {
                    value: eval_expr(e, &self.env)?,
                    span: e.span,
                })
            })
            .collect()
    }

    fn placed_robot(&self, arg: &Arg) -> Result<RobotId, ScriptError> {
        let id = arg.robot()?;
        if !self.placed[id.index()] {
            return Err(err(
                ScriptErrorKind::NotPlaced(self.robots[id.index()].var.clone()),
                arg.span,
            ));
        }
        Ok(id)
    }

    fn block(&mut self, body: &'a [Stmt]) -> Result<(), ScriptError> {
        body.iter().try_for_each(|s| self.statement(s))
    }

    fn statement(&mut self, stmt: &'a Stmt) -> Result<(), ScriptError> {
        let span = stmt.span;
        match &stmt.kind {
            StmtKind::Scene { dimension, value } => {
                let v = expect_number(&eval_expr(value, &self.env)?, value.span)?;
                match dimension {
                    Dimension::Width => {
                        self.width = Some(v);
                        self.env.set_width(v);
                    }
                    Dimension::Depth => {
                        self.depth = Some(v);
                        self.env.set_depth(v);
                    }
                }
                if let (Some(w), Some(d)) = (self.width, self.depth) {
                    let scene = Scene::new(w, d).map_err(|e| err(ScriptErrorKind::Scene(e.to_string()), value.span))?;
                    self.scene = Some(scene);
                }
                Ok(())
            }
            StmtKind::Robot { var, init } => self.declare_robot(var, init, span),
            StmtKind::Let { name, value } => {
                let v = eval_expr(value, &self.env)?;
                self.env.bind(name, v).map_err(|k| err(k, span))
            }
            StmtKind::Proc { .. } => Ok(()),
            StmtKind::Repeat { count, body } => {
                let n = expect_number(&eval_expr(count, &self.env)?, count.span)?;
                if !(n >= 0.0 && n.fract() == 0.0 && n.is_finite()) {
                    return Err(bad(
                        format!("repeat count must be a non-negative integer, got {n}"),
                        count.span,
                    ));
                }
                let mut i = 0.0;
                while i < n {
                    self.block(body)?;
                    i += 1.0;
                }
                Ok(())
            }
            StmtKind::Call { name, args } => {
                if INSTRUCTIONS.contains(&name.as_str()) {
                    let args = self.args(args)?;
                    self.instruction(name, &args, span)
                } else if let Some(&(params, body)) = self.procs.get(name.as_str()) {
                    self.call(name, params, body, args, span)
                } else {
                    Err(err(ScriptErrorKind::UndefinedProcedure(name.clone()), span))
                }
            }
        }
    }

    fn declare_robot(&mut self, var: &str, init: &Expr, span: Span) -> Result<(), ScriptError> {
        let ExprKind::Call { name, args } = &init.kind else {
            return Err(bad("a robot declaration needs robot(name, color)", init.span));
        };
        if name != "robot" {
            return Err(bad("a robot declaration needs robot(name, color)", init.span));
        }
        if args.len() != 2 {
            return Err(arity("robot", "2", args.len(), init.span));
        }
        if is_reserved(var) {
            return Err(err(ScriptErrorKind::ReservedName(var.to_owned()), span));
        }
        if self.robots.iter().any(|r| r.var == var) {
            return Err(err(ScriptErrorKind::DuplicateRobot(var.to_owned()), span));
        }
        let args = self.args(args)?;
        let id = RobotId(self.robots.len());
        self.robots.push(RobotDecl {
            id,
            var: var.to_owned(),
            name: args[0].text()?.to_owned(),
            color: args[1].color()?,
        });
        self.placed.push(false);
        self.env.bind(var, Value::Robot(id)).map_err(|k| err(k, span))
    }

    fn call(
        &mut self,
        name: &str,
        params: &'a [String],
        body: &'a [Stmt],
        args: &[Expr],
        span: Span,
    ) -> Result<(), ScriptError> {
        if args.len() != params.len() {
            return Err(arity(name, &params.len().to_string(), args.len(), span));
        }
        if self.calls >= RECURSION_LIMIT {
            return Err(err(ScriptErrorKind::RecursionLimit(RECURSION_LIMIT), span));
        }
        let mut frame = HashMap::new();
        for (param, arg) in params.iter().zip(self.args(args)?) {
            frame.insert(param.clone(), arg.value);
        }
        self.env.push_frame(frame);
        self.calls += 1;
        self.block(body)?;
        self.calls -= 1;
        self.env.pop_frame();
        Ok(())
    }

    /// Splits `x, y, h` or `pose` plus an optional control string.
    fn pose_and_control(&self, name: &str, rest: &[Arg], span: Span) -> Result<(Pose, Option<String>), ScriptError> {
        let (pose, tail) = match rest.first().map(|a| &a.value) {
            Some(Value::Pose(p)) => (*p, &rest[1..]),
            _ if rest.len() >= 3 => (
                Pose::new(rest[0].number()?, rest[1].number()?, rest[2].number()?),
                &rest[3..],
            ),
            _ => return Err(arity(name, "2 to 5", rest.len() + 1, span)),
        };
        match tail {
            [] => Ok((pose, None)),
            [c] => Ok((pose, Some(c.text()?.to_owned()))),
            _ => Err(arity(name, "2 to 5", rest.len() + 1, span)),
        }
    }

    fn instruction(&mut self, name: &str, args: &[Arg], span: Span) -> Result<(), ScriptError> {
        let control_text = |c: &Option<String>| c.as_deref().map(|s| format!(", {}", quoted(s))).unwrap_or_default();
        let control = |c: &Option<String>| c.as_deref().map(parse_control_string).unwrap_or_default();
        match name {
            "initialPose" => {
                let Some(first) = args.first() else {
                    return Err(arity(name, "2 or 4", 0, span));
                };
                let robot = first.robot()?;
                let (pose, ctrl) = self.pose_and_control(name, &args[1..], span)?;
                if ctrl.is_some() {
                    return Err(arity(name, "2 or 4", args.len(), span));
                }
                if self.placed[robot.index()] {
                    return Err(err(
                        ScriptErrorKind::AlreadyPlaced(self.robots[robot.index()].var.clone()),
                        first.span,
                    ));
                }
                self.placed[robot.index()] = true;
                let text = format!("initialPose({})", pose_text(&pose));
                self.push(Op::InitialPose { robot, pose }, span, text)
            }
            "moveTo" | "moveToBacking" => {
                let Some(first) = args.first() else {
                    return Err(arity(name, "2 to 5", 0, span));
                };
                let robot = self.placed_robot(first)?;
                let (goal, ctrl) = self.pose_and_control(name, &args[1..], span)?;
                let travel = if name == "moveTo" {
                    Travel::Forward
                } else {
                    Travel::Backing
                };
                let text = format!("{name}({}{})", pose_text(&goal), control_text(&ctrl));
                let op = Op::MoveTo {
                    robot,
                    goal,
                    travel,
                    control: control(&ctrl),
                };
                self.push(op, span, text)
            }
            "move" | "moveBacking" => {
                let (robot, ctrl) = match args {
                    [r, _] => (r, None),
                    [r, _, c] => (r, Some(c.text()?.to_owned())),
                    _ => return Err(arity(name, "2 or 3", args.len(), span)),
                };
                let robot = self.placed_robot(robot)?;
                let distance = args[1].number()?;
                if distance < 0.0 {
                    return Err(bad(
                        format!("distance must not be negative, got {distance}"),
                        args[1].span,
                    ));
                }
                let travel = if name == "move" {
                    Travel::Forward
                } else {
                    Travel::Backing
                };
                let text = format!("{name}({}{})", format_number(distance), control_text(&ctrl));
                let op = Op::Move {
                    robot,
                    distance,
                    travel,
                    control: control(&ctrl),
                };
                self.push(op, span, text)
            }
            "circleRight" | "circleLeft" | "circleRightBacking" | "circleLeftBacking" => {
                let (robot, ctrl) = match args {
                    [r, _, _] => (r, None),
                    [r, _, _, c] => (r, Some(c.text()?.to_owned())),
                    _ => return Err(arity(name, "3 or 4", args.len(), span)),
                };
                let robot = self.placed_robot(robot)?;
                let radius = args[1].number()?;
                if radius <= 0.0 {
                    return Err(bad(format!("radius must be positive, got {radius}"), args[1].span));
                }
                let angle = args[2].number()?;
                if angle < 0.0 {
                    return Err(bad(format!("angle must not be negative, got {angle}"), args[2].span));
                }
                let side = if name.starts_with("circleRight") {
                    Side::Right
                } else {
                    Side::Left
                };
                let travel = if name.ends_with("Backing") {
                    Travel::Backing
                } else {
                    Travel::Forward
                };
                let text = format!(
                    "{name}({}, {}{})",
                    format_number(radius),
                    format_number(angle),
                    control_text(&ctrl)
                );
                let op = Op::Circle {
                    robot,
                    radius,
                    angle,
                    side,
                    travel,
                    control: control(&ctrl),
                };
                self.push(op, span, text)
            }
            "wait" => {
                let [r, s] = args else {
                    return Err(arity(name, "2", args.len(), span));
                };
                let robot = self.placed_robot(r)?;
                let seconds = s.number()?;
                if seconds < 0.0 {
                    return Err(bad(format!("wait time must not be negative, got {seconds}"), s.span));
                }
                self.push(
                    Op::Wait { robot, seconds },
                    span,
                    format!("wait({})", format_number(seconds)),
                )
            }
            "synchronize" => {
                let mut robots = Vec::new();
                if args.is_empty() {
                    robots.extend(
                        self.placed
                            .iter()
                            .enumerate()
                            .filter(|(_, p)| **p)
                            .map(|(i, _)| RobotId(i)),
                    );
                } else {
                    for a in args {
                        let id = self.placed_robot(a)?;
                        if robots.contains(&id) {
                            return Err(bad(
                                format!("robot {:?} listed twice", self.robots[id.index()].var),
                                a.span,
                            ));
                        }
                        robots.push(id);
                    }
                }
                let names: Vec<&str> = robots.iter().map(|id| self.robots[id.index()].var.as_str()).collect();
                let text = format!("synchronize({})", names.join(", "));
                self.push(Op::Synchronize { robots }, span, text)
            }
            "maxSpeed" | "acceleration" | "deceleration" => {
                let kind = match name {
                    "maxSpeed" => SettingKind::MaxSpeed,
                    "acceleration" => SettingKind::Acceleration,
                    _ => SettingKind::Deceleration,
                };
                let (robot, v) = match args {
                    [v] => (None, v),
                    [r, v] => (Some(self.placed_robot(r)?), v),
                    _ => return Err(arity(name, "1 or 2", args.len(), span)),
                };
                let (value, shown) = match &v.value {
                    Value::Speed(SpeedConstant::Max) => (SettingValue::Max, "max".to_owned()),
                    Value::Speed(SpeedConstant::Std) => (SettingValue::Std, "std".to_owned()),
                    Value::Number(x) if *x > 0.0 => (SettingValue::Number(*x), format_number(*x)),
                    Value::Number(x) => return Err(bad(format!("{name} must be positive, got {x}"), v.span)),
                    other => return Err(mismatch("a number, max or std", other, v.span)),
                };
                self.push(Op::Setting { robot, kind, value }, span, format!("{name}({shown})"))
            }
            "grid" => {
                if !args.is_empty() {
                    return Err(arity(name, "0", args.len(), span));
                }
                self.scene_mut(span)?.enable_grid();
                Ok(())
            }
            "referencePoint" => {
                let [c, x, y] = args else {
                    return Err(arity(name, "3", args.len(), span));
                };
                let (color, position) = (c.color()?, Point::new(x.number()?, y.number()?));
                self.scene_mut(span)?
                    .add_reference_point(color, position)
                    .map_err(|e| err(ScriptErrorKind::Scene(e.to_string()), span))
            }
            "forbiddenArea" => {
                let [n, c, x1, y1, x2, y2] = args else {
                    return Err(arity(name, "6", args.len(), span));
                };
                let area = n.text()?.to_owned();
                let color = c.color()?;
                let a = Point::new(x1.number()?, y1.number()?);
                let b = Point::new(x2.number()?, y2.number()?);
                self.scene_mut(span)?
                    .add_area(&area, color, a, b)
                    .map_err(|e| err(ScriptErrorKind::Scene(e.to_string()), span))
            }
            _ => Err(err(ScriptErrorKind::UndefinedProcedure(name.to_owned()), span)),
        }
    }

    fn scene_mut(&mut self, span: Span) -> Result<&mut Scene, ScriptError> {
        self.scene
            .as_mut()
            .ok_or_else(|| err(ScriptErrorKind::MissingScene, span))
    }
}

/// Evaluates a script: inlines procedure calls, unrolls repeats and binds every instruction to its robot.
pub fn expand(ast: &ScriptAst) -> Result<InstructionStream, ScriptError> {
    let mut procs = HashMap::new();
    for stmt in ast.procedures() {
        if let StmtKind::Proc { name, params, body } = &stmt.kind {
            if INSTRUCTIONS.contains(&name.as_str()) || is_reserved(name) {
                return Err(err(ScriptErrorKind::ReservedName(name.clone()), stmt.span));
            }
            if let Some(p) = params.iter().find(|p| is_reserved(p)) {
                return Err(err(ScriptErrorKind::ReservedName(p.clone()), stmt.span));
            }
            procs.insert(name.as_str(), (params.as_slice(), body.as_slice()));
        }
    }
    let mut ex = Expander {
        procs,
        env: Env::new(),
        width: None,
        depth: None,
        scene: None,
        robots: Vec::new(),
        placed: Vec::new(),
        out: Vec::new(),
        calls: 0,
    };
    for stmt in &ast.statements {
        ex.statement(stmt)?;
    }
    let end = ast.statements.last().map_or(Span::new(1, 1), |s| s.span);
    let scene = ex.scene.ok_or_else(|| err(ScriptErrorKind::MissingScene, end))?;
    Ok(InstructionStream {
        scene,
        robots: ex.robots,
        instructions: ex.out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile;

    const HEADER: &str = "sceneWidth = 10; sceneDepth = 5;
robot nille = robot(\"Nille\", color(255,128,128));
robot frederik = robot(\"Frederik\", color(128,128,255));
";

    fn run(body: &str) -> Result<InstructionStream, ScriptError> {
        compile(&format!("{HEADER}{body}"))
    }

    fn texts(s: &InstructionStream) -> Vec<&str> {
        s.instructions.iter().map(|i| i.text.as_str()).collect()
    }

    #[test]
    fn steps_procedure() {
        let s = run(
            "proc steps(rob, n) { repeat n { move(rob, 0.3); moveBacking(rob, 0.3); } }
            initialPose(nille, 0, 1, south);
            steps(nille, 7);",
        )
        .unwrap();
        assert_eq!(s.instructions.len(), 15);
        for (k, ins) in s.instructions[1..].iter().enumerate() {
            let Op::Move { distance, travel, .. } = ins.op else {
                panic!("{ins:?}")
            };
            assert_eq!(distance, 0.3);
            let expected = if k % 2 == 0 { Travel::Forward } else { Travel::Backing };
            assert_eq!(travel, expected);
        }
    }

    #[test]
    fn repeat_zero() {
        let s = run("initialPose(nille, 0, 0, north); repeat 0 { move(nille, 1); }").unwrap();
        assert_eq!(s.instructions.len(), 1);
        for n in 0..5 {
            let s = run(&format!(
                "initialPose(nille, 0, 0, north); repeat {n} {{ move(nille, 1); wait(nille, 1); }}"
            ))
            .unwrap();
            assert_eq!(s.instructions.len(), 1 + 2 * n);
        }
    }

    #[test]
    fn meet_and_greet_body() {
        let s = run("proc meetAndGreat(r1, r2, x, y) {
              moveTo(r1, x-1, y, east);
              moveTo(r2, x+1, y, west);
              synchronize(r1,r2);
              moveTo(r1, x-0.25, y, east);
              moveTo(r2, x+0.25, y, west);
              wait(r1,1); wait(r2,1);
              moveToBacking(r1, x-1, y, east);
              moveToBacking(r2, x+1, y, west);
              wait(r1,0.5); wait(r2,0.5);
            }
            initialPose(nille, -3, 1, north);
            initialPose(frederik, 3, 1, north);
            meetAndGreat(nille, frederik, 0, 2.5);")
        .unwrap();
        let body = &s.instructions[2..];
        assert_eq!(body.len(), 11);
        let barriers: Vec<_> = body
            .iter()
            .filter_map(|i| match &i.op {
                Op::Synchronize { robots } => Some(robots.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(barriers, [vec![RobotId(0), RobotId(1)]]);
        assert_eq!(body[2].text, "synchronize(nille, frederik)");
        assert_eq!(body[0].text, "moveTo(-1, 2.5, 90)");
    }

    #[test]
    fn both_initial_pose_forms_agree() {
        let a = run("initialPose(nille, hsw/2+1, sd/4, west);").unwrap();
        let b = run("let p1 = pose(hsw/2+1, sd/4, west); initialPose(nille, p1);").unwrap();
        assert_eq!(a.instructions[0].op, b.instructions[0].op);
        assert_eq!(a.instructions[0].text, "initialPose(3.5, 1.25, 270)");
    }

    #[test]
    fn canonical_text() {
        let s = run("initialPose(nille, 0, 0, north);
            moveTo(nille, -hsw/2, sd/2, south, \"++__++____---!\");
            circleRightBacking(nille, 1, 90);
            wait(nille, 2);
            maxSpeed(2);
            deceleration(nille, 0.2);
            maxSpeed(nille, std);")
        .unwrap();
        assert_eq!(
            texts(&s),
            [
                "initialPose(0, 0, 0)",
                "moveTo(-2.5, 2.5, 180, \"++__++____---!\")",
                "circleRightBacking(1, 90)",
                "wait(2)",
                "maxSpeed(2)",
                "deceleration(0.2)",
                "maxSpeed(std)",
            ]
        );
        assert_eq!(
            s.instructions[4].op,
            Op::Setting {
                robot: None,
                kind: SettingKind::MaxSpeed,
                value: SettingValue::Number(2.0)
            }
        );
    }

    #[test]
    fn synchronize_forms() {
        let s =
            run("initialPose(nille, 0, 0, north); synchronize(); initialPose(frederik, 1, 0, north); synchronize();")
                .unwrap();
        assert_eq!(
            s.instructions[1].op,
            Op::Synchronize {
                robots: vec![RobotId(0)]
            }
        );
        assert_eq!(
            s.instructions[3].op,
            Op::Synchronize {
                robots: vec![RobotId(0), RobotId(1)]
            }
        );
    }

    #[test]
    fn placement_rules() {
        let e = run("move(nille, 1);").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::NotPlaced("nille".into()));
        assert_eq!(e.span, Span::new(4, 6));
        let e = run("initialPose(nille, 0, 0, north); initialPose(nille, 1, 0, north);").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::AlreadyPlaced("nille".into()));
        let e = run("initialPose(nille, 0, 0, north); synchronize(nille, frederik);").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::NotPlaced("frederik".into()));
    }

    #[test]
    fn procedure_errors() {
        let e = run("undefinedThing(nille);").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::UndefinedProcedure("undefinedThing".into()));
        let e = run("proc p(a) { } p(1, 2);").unwrap_err();
        assert!(matches!(e.kind, ScriptErrorKind::Arity { .. }));
        let e = run("proc p() { p(); } p();").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::RecursionLimit(RECURSION_LIMIT));
        let e = run("proc move(r) { }").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::ReservedName("move".into()));
        // definition order does not matter
        assert!(run("initialPose(nille, 0, 0, north); later(nille); proc later(r) { move(r, 1); }").is_ok());
    }

    #[test]
    fn procedure_scope() {
        let s = run("let d = 1;
            proc go(r) { let d = 2; move(r, d); }
            initialPose(nille, 0, 0, north);
            go(nille);
            move(nille, d);")
        .unwrap();
        assert_eq!(texts(&s)[1..], ["move(2)", "move(1)"]);
        let e = run("proc go(r) { move(r, local); } initialPose(nille, 0, 0, north); let local = 1; go(nille); proc h(r) { let q = 1; } h(nille); move(nille, q);")
            .unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::UnboundIdentifier("q".into()));
    }

    #[test]
    fn argument_errors() {
        let base = "initialPose(nille, 0, 0, north);";
        for bad_stmt in [
            "move(nille, -1);",
            "circleRight(nille, 0, 90);",
            "circleLeft(nille, 1, -5);",
            "wait(nille, -1);",
            "maxSpeed(0);",
            "repeat 1.5 { }",
            "repeat -1 { }",
        ] {
            let e = run(&format!("{base}{bad_stmt}")).unwrap_err();
            assert!(matches!(e.kind, ScriptErrorKind::BadArgument(_)), "{bad_stmt}: {e}");
        }
        let e = run(&format!("{base}move(nille, \"far\");")).unwrap_err();
        assert!(matches!(e.kind, ScriptErrorKind::TypeMismatch { .. }));
        let e = run(&format!("{base}move(3, 1);")).unwrap_err();
        assert!(matches!(
            e.kind,
            ScriptErrorKind::TypeMismatch {
                expected: "a robot",
                ..
            }
        ));
        let e = run(&format!("{base}moveTo(nille, 1, 2);")).unwrap_err();
        assert!(matches!(e.kind, ScriptErrorKind::Arity { .. }));
    }

    #[test]
    fn scene_furniture() {
        let s = run("grid();
            referencePoint(color(255,0,0),hsw/2,sd/2);
            referencePoint(color(0,255,0),-hsw/2,sd/2);
            forbiddenArea(\"green stuff\", color(192,255,192), -hsw+0.5, sd-1.75, -hsw+3, sd-2);
            forbiddenArea(\"purple stuff\", color(192,192,255), 0.5,0.5, hsw-2, 1);")
        .unwrap();
        assert!(s.scene.has_grid());
        assert_eq!(s.scene.reference_points().len(), 2);
        assert_eq!(s.scene.areas()[0].rect.min, Point::new(-4.5, 3.0));
        assert_eq!(s.scene.areas()[1].rect.max, Point::new(3.0, 1.0));
        let e = run("forbiddenArea(\"a\", color(0,0,0), 0,0,1,1); forbiddenArea(\"a\", color(0,0,0), 0,0,1,1);")
            .unwrap_err();
        assert!(matches!(e.kind, ScriptErrorKind::Scene(_)));
    }

    #[test]
    fn scene_declaration() {
        assert_eq!(compile("").unwrap_err().kind, ScriptErrorKind::MissingScene);
        assert!(matches!(
            compile("sceneWidth = 0; sceneDepth = 5;").unwrap_err().kind,
            ScriptErrorKind::Scene(_)
        ));
        let s = compile("sceneWidth = 10; sceneDepth = 5;").unwrap();
        assert_eq!((s.scene.width(), s.scene.depth()), (10.0, 5.0));
        let e = run("robot nille = robot(\"again\", color(0,0,0));").unwrap_err();
        assert_eq!(e.kind, ScriptErrorKind::DuplicateRobot("nille".into()));
    }
}
