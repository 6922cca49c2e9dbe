use std::collections::HashMap;

use super::ast::{BinaryOp, Expr, ExprKind};
use super::{ScriptError, ScriptErrorKind, Span};
use crate::geometry::Pose;
use crate::scene::Color;
use crate::RobotId;

const DIRECTIONS: [&str; 16] = [
    "north",
    "nne",
    "northEast",
    "ene",
    "east",
    "ese",
    "southEast",
    "sse",
    "south",
    "ssw",
    "southWest",
    "wsw",
    "west",
    "wnw",
    "northWest",
    "nnw",
];

const UNITS: [&str; 4] = ["sw", "hsw", "sd", "m"];

/// Compass heading in degrees for one of the 16 wind names.
pub fn resolve_direction(name: &str) -> Option<f64> {
    DIRECTIONS.iter().position(|d| *d == name).map(|k| k as f64 * 22.5)
}

pub(crate) fn is_reserved(name: &str) -> bool {
    DIRECTIONS.contains(&name) || UNITS.contains(&name) || name == "max" || name == "std"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpeedConstant {
    Max,
    Std,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Text(String),
    Color(Color),
    Pose(Pose),
    Robot(RobotId),
    Speed(SpeedConstant),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Number(_) => "a number",
            Value::Text(_) => "a string",
            Value::Color(_) => "a color",
            Value::Pose(_) => "a pose",
            Value::Robot(_) => "a robot",
            Value::Speed(_) => "max or std",
        }
    }
}

/// Variable bindings plus the scene dimensions the unit names refer to.
#[derive(Debug, Clone, Default)]
pub struct Env {
    width: Option<f64>,
    depth: Option<f64>,
    globals: HashMap<String, Value>,
    frames: Vec<HashMap<String, Value>>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_scene(width: f64, depth: f64) -> Self {
        Self {
            width: Some(width),
            depth: Some(depth),
            ..Self::default()
        }
    }

    pub fn set_width(&mut self, width: f64) {
        self.width = Some(width);
    }

    pub fn set_depth(&mut self, depth: f64) {
        self.depth = Some(depth);
    }

    pub fn scene(&self) -> Option<(f64, f64)> {
        self.width.zip(self.depth)
    }

    /// Binds in the innermost procedure frame, or globally at the top level.
    pub fn bind(&mut self, name: &str, value: Value) -> Result<(), ScriptErrorKind> {
        if is_reserved(name) {
            return Err(ScriptErrorKind::ReservedName(name.to_owned()));
        }
        let scope = self.frames.last_mut().unwrap_or(&mut self.globals);
        scope.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        if let Some(v) = self.frames.last().and_then(|f| f.get(name)) {
            return Some(v.clone());
        }
        if let Some(v) = self.globals.get(name) {
            return Some(v.clone());
        }
        let unit = |v: Option<f64>| v.map(Value::Number);
        match name {
            "sw" => unit(self.width),
            "hsw" => unit(self.width.map(|w| w / 2.0)),
            "sd" => unit(self.depth),
            "m" => Some(Value::Number(1.0)),
            "max" => Some(Value::Speed(SpeedConstant::Max)),
            "std" => Some(Value::Speed(SpeedConstant::Std)),
            _ => resolve_direction(name).map(Value::Number),
        }
    }

    pub(crate) fn push_frame(&mut self, frame: HashMap<String, Value>) {
        self.frames.push(frame);
    }

    pub(crate) fn pop_frame(&mut self) {
        self.frames.pop();
    }
}

fn mismatch(expected: &'static str, found: &Value, span: Span) -> ScriptError {
    ScriptError::new(
        ScriptErrorKind::TypeMismatch {
            expected,
            found: found.type_name(),
        },
        span,
    )
}

pub(crate) fn expect_number(value: &Value, span: Span) -> Result<f64, ScriptError> {
    match value {
        Value::Number(v) => Ok(*v),
        other => Err(mismatch("a number", other, span)),
    }
}

fn finite(v: f64, span: Span) -> Result<f64, ScriptError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ScriptError::new(
            ScriptErrorKind::BadArgument("arithmetic overflow".into()),
            span,
        ))
    }
}

fn channel(v: f64, span: Span) -> Result<u8, ScriptError> {
    if v.fract() == 0.0 && (0.0..=255.0).contains(&v) {
        Ok(v as u8)
    } else {
        Err(ScriptError::new(
            ScriptErrorKind::BadArgument(format!("color channel must be an integer in 0..=255, got {v}")),
            span,
        ))
    }
}

fn numbers<const N: usize>(name: &str, args: &[Expr], env: &Env, span: Span) -> Result<[f64; N], ScriptError> {
    if args.len() != N {
        return Err(ScriptError::new(
            ScriptErrorKind::Arity {
                name: name.to_owned(),
                expected: N.to_string(),
                found: args.len(),
            },
            span,
        ));
    }
    let mut out = [0.0; N];
    for (slot, arg) in out.iter_mut().zip(args) {
        *slot = expect_number(&eval_expr(arg, env)?, arg.span)?;
    }
    Ok(out)
}

/// Evaluates an expression. Arithmetic is defined on numbers only.
pub fn eval_expr(expr: &Expr, env: &Env) -> Result<Value, ScriptError> {
    let span = expr.span;
    match &expr.kind {
        ExprKind::Number(v) => Ok(Value::Number(*v)),
        ExprKind::Text(s) => Ok(Value::Text(s.clone())),
        ExprKind::Name(name) => env
            .lookup(name)
            .ok_or_else(|| ScriptError::new(ScriptErrorKind::UnboundIdentifier(name.clone()), span)),
        ExprKind::Neg(inner) => {
            let v = eval_expr(inner, env)?;
            Ok(Value::Number(-expect_number(&v, inner.span)?))
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let a = expect_number(&eval_expr(lhs, env)?, lhs.span)?;
            let b = expect_number(&eval_expr(rhs, env)?, rhs.span)?;
            let v = match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b == 0.0 {
                        return Err(ScriptError::new(ScriptErrorKind::DivisionByZero, rhs.span));
                    }
                    a / b
                }
            };
            Ok(Value::Number(finite(v, span)?))
        }
        ExprKind::Call { name, args } => match name.as_str() {
            "pose" => {
                let [x, y, h] = numbers::<3>(name, args, env, span)?;
                Ok(Value::Pose(Pose::new(x, y, h)))
            }
            "color" => {
                let [r, g, b] = numbers::<3>(name, args, env, span)?;
                Ok(Value::Color(Color::new(
                    channel(r, args[0].span)?,
                    channel(g, args[1].span)?,
                    channel(b, args[2].span)?,
                )))
            }
            "robot" => Err(ScriptError::new(ScriptErrorKind::RobotOutsideDeclaration, span)),
            _ => Err(ScriptError::new(ScriptErrorKind::UnknownFunction(name.clone()), span)),
        },
    }
}

/// Shortest decimal text for a number, at most six fractional digits.
pub(crate) fn format_number(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" => "0".to_owned(),
        _ => s.to_owned(),
    }
}
