//! Script frontend: lexing, parsing, evaluation and expansion into a flat instruction stream.

pub mod ast;
mod eval;
mod expand;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use eval::{eval_expr, resolve_direction, Env, SpeedConstant, Value};
pub use expand::{expand, Instruction, InstructionStream, Op, RobotDecl, RECURSION_LIMIT};
pub use lexer::{detokenize, tokenize, Token, TokenKind};
pub use parser::parse;

/// 1-based line and column of a source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl Span {
    pub const fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScriptErrorKind {
    #[error("unterminated string literal")]
    UnterminatedString,
    #[error("invalid character {0:?}")]
    InvalidCharacter(char),
    #[error("expected {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("nesting too deep")]
    TooDeeplyNested,
    #[error("procedures can only be defined at the top level")]
    NestedProcedure,
    #[error("robots can only be declared at the top level")]
    NestedRobot,
    #[error("the scene can only be declared at the top level")]
    NestedScene,
    #[error("parameter {0:?} appears twice")]
    DuplicateParameter(String),
    #[error("cannot assign to {0:?}; use `let`")]
    BareAssignment(String),
    #[error("sceneWidth and sceneDepth must be declared before anything else")]
    SceneNotFirst,
    #[error("scene dimension declared twice")]
    DuplicateScene,
    #[error("procedure {0:?} is already defined")]
    DuplicateProcedure(String),
    #[error("the script does not declare sceneWidth and sceneDepth")]
    MissingScene,
    #[error("unbound identifier {0:?}")]
    UnboundIdentifier(String),
    #[error("{0:?} is a built-in name and cannot be rebound")]
    ReservedName(String),
    #[error("expected {expected}, found {found}")]
    TypeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown direction {0:?}")]
    UnknownDirection(String),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("undefined procedure or instruction {0:?}")]
    UndefinedProcedure(String),
    #[error("{name} takes {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: String,
        found: usize,
    },
    #[error("procedure calls nested deeper than {0}")]
    RecursionLimit(usize),
    #[error("script expands to more than {0} instructions")]
    TooManyInstructions(usize),
    #[error("robot(...) may only appear in a robot declaration")]
    RobotOutsideDeclaration,
    #[error("robot {0:?} is already declared")]
    DuplicateRobot(String),
    #[error("robot {0:?} has no initialPose yet")]
    NotPlaced(String),
    #[error("robot {0:?} already has an initialPose")]
    AlreadyPlaced(String),
    #[error("{0}")]
    BadArgument(String),
    #[error("{0}")]
    Scene(String),
}

/// A frontend error with the source position it refers to.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {kind}")]
pub struct ScriptError {
    pub kind: ScriptErrorKind,
    pub span: Span,
}

impl ScriptError {
    pub fn new(kind: ScriptErrorKind, span: Span) -> Self {
        Self { kind, span }
    }
}

/// Tokenizes, parses and expands a script in one go.
pub fn compile(source: &str) -> Result<InstructionStream, ScriptError> {
    let tokens = tokenize(source)?;
    let ast = parse(&tokens)?;
    expand(&ast)
}
