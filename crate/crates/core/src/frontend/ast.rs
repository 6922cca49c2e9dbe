use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Text(String),
    Name(String),
    Call {
        name: String,
        args: Vec<Expr>,
    },
    Neg(Box<Expr>),
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Width,
    Depth,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    /// `sceneWidth = 10;` / `sceneDepth = 5;`
    Scene {
        dimension: Dimension,
        value: Expr,
    },
    /// `robot nille = robot("Nille", color(255,128,128));`
    Robot {
        var: String,
        init: Expr,
    },
    Let {
        name: String,
        value: Expr,
    },
    Proc {
        name: String,
        params: Vec<String>,
        body: Vec<Stmt>,
    },
    Repeat {
        count: Expr,
        body: Vec<Stmt>,
    },
    /// Built-in instruction or procedure call.
    Call {
        name: String,
        args: Vec<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

/// A parsed script; statements appear in source order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScriptAst {
    pub statements: Vec<Stmt>,
}

impl ScriptAst {
    pub fn procedures(&self) -> impl Iterator<Item = &Stmt> {
        self.statements
            .iter()
            .filter(|s| matches!(s.kind, StmtKind::Proc { .. }))
    }
}
