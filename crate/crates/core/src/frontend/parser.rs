//! Recursive-descent parser. See `docs/grammar.md` for the grammar.

use std::collections::HashSet;

use super::ast::{BinaryOp, Dimension, Expr, ExprKind, ScriptAst, Stmt, StmtKind};
use super::lexer::{Token, TokenKind};
use super::{ScriptError, ScriptErrorKind, Span};

const MAX_NESTING: usize = 256;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    depth: usize,
}

fn describe(token: Option<&Token>) -> String {
    token.map_or_else(|| "end of input".to_owned(), Token::to_string)
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_nth(&self, n: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + n)
    }

    fn end_span(&self) -> Span {
        self.tokens.last().map_or(Span::new(1, 1), |t| t.span)
    }

    fn here(&self) -> Span {
        self.peek().map_or_else(|| self.end_span(), |t| t.span)
    }

    fn error(&self, expected: &str) -> ScriptError {
        ScriptError::new(
            ScriptErrorKind::Expected {
                expected: expected.to_owned(),
                found: describe(self.peek()),
            },
            self.here(),
        )
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<&'t Token, ScriptError> {
        match self.peek() {
            Some(t) if t.is_punct(c) => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(&format!("`{c}`"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<&'t Token, ScriptError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(what)),
        }
    }

    fn nest(&mut self) -> Result<(), ScriptError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ScriptError::new(ScriptErrorKind::TooDeeplyNested, self.here()));
        }
        Ok(())
    }

    fn statement(&mut self, top_level: bool) -> Result<Stmt, ScriptError> {
        let Some(first) = self.peek() else {
            return Err(self.error("a statement"));
        };
        let span = first.span;
        if first.is_keyword("proc") {
            if !top_level {
                return Err(ScriptError::new(ScriptErrorKind::NestedProcedure, span));
            }
            self.advance();
            let name = self.expect_ident("a procedure name")?.lexeme.clone();
            self.expect_punct('(')?;
            let mut params = Vec::new();
            if !self.eat_punct(')') {
                loop {
                    let p = self.expect_ident("a parameter name")?;
                    if params.contains(&p.lexeme) {
                        return Err(ScriptError::new(
                            ScriptErrorKind::DuplicateParameter(p.lexeme.clone()),
                            p.span,
                        ));
                    }
                    params.push(p.lexeme.clone());
                    if self.eat_punct(')') {
                        break;
                    }
                    self.expect_punct(',')?;
                }
            }
            let body = self.block()?;
            return Ok(Stmt {
                kind: StmtKind::Proc { name, params, body },
                span,
            });
        }
        if first.is_keyword("repeat") {
            self.advance();
            let count = self.expr()?;
            let body = self.block()?;
            return Ok(Stmt {
                kind: StmtKind::Repeat { count, body },
                span,
            });
        }
        if first.is_keyword("let") {
            self.advance();
            let name = self.expect_ident("a variable name")?.lexeme.clone();
            self.expect_punct('=')?;
            let value = self.expr()?;
            self.expect_punct(';')?;
            return Ok(Stmt {
                kind: StmtKind::Let { name, value },
                span,
            });
        }
        if first.kind != TokenKind::Identifier {
            return Err(self.error("a statement"));
        }

        let is_robot_decl = matches!(first.lexeme.as_str(), "robot" | "Robot")
            && self.peek_nth(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            && self.peek_nth(2).is_some_and(|t| t.is_punct('='));
        if is_robot_decl {
            if !top_level {
                return Err(ScriptError::new(ScriptErrorKind::NestedRobot, span));
            }
            self.advance();
            let var = self.advance().map(|t| t.lexeme.clone()).unwrap_or_default();
            self.advance();
            let init = self.expr()?;
            self.expect_punct(';')?;
            return Ok(Stmt {
                kind: StmtKind::Robot { var, init },
                span,
            });
        }

        self.advance();
        let name = first.lexeme.clone();
        if self.eat_punct('=') {
            let dimension = match name.as_str() {
                "sceneWidth" => Dimension::Width,
                "sceneDepth" => Dimension::Depth,
                _ => return Err(ScriptError::new(ScriptErrorKind::BareAssignment(name), span)),
            };
            if !top_level {
                return Err(ScriptError::new(ScriptErrorKind::NestedScene, span));
            }
            let value = self.expr()?;
            self.expect_punct(';')?;
            return Ok(Stmt {
                kind: StmtKind::Scene { dimension, value },
                span,
            });
        }
        if !self.eat_punct('(') {
            return Err(self.error("`(` or `=`"));
        }
        let args = self.arguments()?;
        self.expect_punct(';')?;
        Ok(Stmt {
            kind: StmtKind::Call { name, args },
            span,
        })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ScriptError> {
        self.expect_punct('{')?;
        self.nest()?;
        let mut body = Vec::new();
        while !self.eat_punct('}') {
            if self.peek().is_none() {
                return Err(self.error("`}`"));
            }
            body.push(self.statement(false)?);
        }
        self.depth -= 1;
        Ok(body)
    }

    /// Comma-separated expressions after an opening parenthesis, through the closing one.
    fn arguments(&mut self) -> Result<Vec<Expr>, ScriptError> {
        let mut args = Vec::new();
        if self.eat_punct(')') {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(')') {
                return Ok(args);
            }
            if !self.eat_punct(',') {
                return Err(self.error("`,` or `)`"));
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ScriptError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.peek().is_some_and(|t| t.is_punct('+')) {
                BinaryOp::Add
            } else if self.peek().is_some_and(|t| t.is_punct('-')) {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            self.advance();
            let rhs = self.term()?;
            let span = lhs.span;
            lhs = Expr {
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ScriptError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.peek().is_some_and(|t| t.is_punct('*')) {
                BinaryOp::Mul
            } else if self.peek().is_some_and(|t| t.is_punct('/')) {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            self.advance();
            let rhs = self.unary()?;
            let span = lhs.span;
            lhs = Expr {
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ScriptError> {
        if let Some(t) = self.peek().filter(|t| t.is_punct('-')) {
            self.advance();
            self.nest()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span: t.span,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ScriptError> {
        let Some(t) = self.peek() else {
            return Err(self.error("an expression"));
        };
        let span = t.span;
        let kind = match t.kind {
            TokenKind::Number => {
                self.advance();
                let v: f64 = t
                    .lexeme
                    .parse()
                    .map_err(|_| ScriptError::new(ScriptErrorKind::BadNumber(t.lexeme.clone()), span))?;
                ExprKind::Number(v)
            }
            TokenKind::StringLiteral => {
                self.advance();
                ExprKind::Text(t.lexeme.clone())
            }
            TokenKind::Identifier => {
                self.advance();
                if self.eat_punct('(') {
                    self.nest()?;
                    let args = self.arguments()?;
                    self.depth -= 1;
                    ExprKind::Call {
                        name: t.lexeme.clone(),
                        args,
                    }
                } else {
                    ExprKind::Name(t.lexeme.clone())
                }
            }
            TokenKind::Punctuation if t.is_punct('(') => {
                self.advance();
                self.nest()?;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect_punct(')')?;
                return Ok(inner);
            }
            _ => return Err(self.error("an expression")),
        };
        Ok(Expr { kind, span })
    }
}

/// Builds the syntax tree for a token stream.
///
/// The scene's width and depth must be declared before any other statement;
/// a file with no statements at all is accepted.
pub fn parse(tokens: &[Token]) -> Result<ScriptAst, ScriptError> {
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    let mut statements = Vec::new();
    let mut dims_seen = HashSet::new();
    let mut proc_names = HashSet::new();
    while parser.peek().is_some() {
        let stmt = parser.statement(true)?;
        match &stmt.kind {
            StmtKind::Scene { dimension, .. } => {
                if !dims_seen.insert(*dimension) {
                    return Err(ScriptError::new(ScriptErrorKind::DuplicateScene, stmt.span));
                }
            }
            _ if dims_seen.len() < 2 => {
                return Err(ScriptError::new(ScriptErrorKind::SceneNotFirst, stmt.span));
            }
            StmtKind::Proc { name, .. } if !proc_names.insert(name.clone()) => {
                return Err(ScriptError::new(
                    ScriptErrorKind::DuplicateProcedure(name.clone()),
                    stmt.span,
                ));
            }
            _ => {}
        }
        statements.push(stmt);
    }
    Ok(ScriptAst { statements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::tokenize;

    const HEADER: &str = "sceneWidth = 10; sceneDepth = 5;\n";

    fn parse_src(src: &str) -> Result<ScriptAst, ScriptError> {
        parse(&tokenize(src)?)
    }

    #[test]
    fn empty_file() {
        assert!(parse_src("").unwrap().statements.is_empty());
        assert!(parse_src("// nothing here\n").unwrap().statements.is_empty());
    }

    #[test]
    fn intertwined_fragment_keeps_order() {
        let src = format!(
            "{HEADER}
            initialPose(nille, hsw/2, 0, north);
            initialPose(frederik, -hsw/2, 0, north);
            moveTo(nille, hsw/2, 3, north);
            moveTo(frederik, -hsw/2, 3, north);
            moveTo(nille, hsw/2+2, 3, east);
            moveTo(frederik, -hsw/2+2, 3, east);"
        );
        let ast = parse_src(&src).unwrap();
        let calls: Vec<_> = ast.statements[2..]
            .iter()
            .map(|s| match &s.kind {
                StmtKind::Call { name, args } => (name.clone(), args.len()),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(calls.len(), 6);
        assert_eq!(calls[0], ("initialPose".to_owned(), 4));
        assert_eq!(calls[5], ("moveTo".to_owned(), 4));
    }

    #[test]
    fn procedure_with_repeat() {
        let src = format!("{HEADER}proc steps(rob, n) {{ repeat n {{ move(rob, 0.3); moveBacking(rob, 0.3); }} }}");
        let ast = parse_src(&src).unwrap();
        assert_eq!(ast.procedures().count(), 1);
        match &ast.statements[2].kind {
            StmtKind::Proc { name, params, body } => {
                assert_eq!(name, "steps");
                assert_eq!(params, &["rob", "n"]);
                assert_eq!(body.len(), 1);
                match &body[0].kind {
                    StmtKind::Repeat { body, .. } => assert_eq!(body.len(), 2),
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let ast = parse_src(&format!("{HEADER}let x = -hsw/2 + 1*3;")).unwrap();
        let StmtKind::Let { value, .. } = &ast.statements[2].kind else {
            panic!()
        };
        let ExprKind::Binary {
            op: BinaryOp::Add,
            lhs,
            rhs,
        } = &value.kind
        else {
            panic!("{value:?}")
        };
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinaryOp::Div, .. }));
        assert!(matches!(rhs.kind, ExprKind::Binary { op: BinaryOp::Mul, .. }));
    }

    #[test]
    fn scene_must_come_first() {
        let err = parse_src("wait(nille, 1);").unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::SceneNotFirst);
        let err = parse_src("sceneWidth = 10; grid(); sceneDepth = 5;").unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::SceneNotFirst);
        assert_eq!(err.span, Span::new(1, 18));
        let err = parse_src("sceneWidth = 10; sceneWidth = 5;").unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::DuplicateScene);
    }

    #[test]
    fn syntax_errors_name_the_expected_token() {
        let err = parse_src(&format!("{HEADER}wait(nille, 2)")).unwrap_err();
        assert_eq!(
            err.kind,
            ScriptErrorKind::Expected {
                expected: "`;`".into(),
                found: "end of input".into()
            }
        );
        let err = parse_src(&format!("{HEADER}move(nille 2);")).unwrap_err();
        assert!(matches!(err.kind, ScriptErrorKind::Expected { .. }));
        assert_eq!(err.span, Span::new(2, 12));
        let err = parse_src(&format!("{HEADER}x = 2;")).unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::BareAssignment("x".into()));
    }

    #[test]
    fn structural_rules() {
        let err = parse_src(&format!("{HEADER}proc a() {{ proc b() {{ }} }}")).unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::NestedProcedure);
        let err = parse_src(&format!("{HEADER}proc a() {{ }} proc a() {{ }}")).unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::DuplicateProcedure("a".into()));
        let err = parse_src(&format!("{HEADER}proc a(x, x) {{ }}")).unwrap_err();
        assert_eq!(err.kind, ScriptErrorKind::DuplicateParameter("x".into()));
    }

    #[test]
    fn robot_declaration() {
        let ast = parse_src(&format!("{HEADER}robot nille = robot(\"Nille\", color(255,128,128));")).unwrap();
        assert!(matches!(&ast.statements[2].kind, StmtKind::Robot { var, .. } if var == "nille"));
    }
}
