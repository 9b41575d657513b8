//! Recursive-descent parser with inline type checking.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | 'mod') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'len' | 'last' | 'v' | 'root' | "vertex"
//!         | '(' expr ')' | 'if' cond 'then' expr 'else' expr | call
//! cond   := expr ('==' | '!=' | '<' | '<=' | '>' | '>=') expr
//! ```

use super::ast::{BinOp, CmpOp, Cond, Expr, Func, Type};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::tree::VertexId;

/// Which identifiers an expression may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Branching expressions: `len` and `last` only.
    Tree,
    /// Weights and maps: the full language.
    Vertex,
}

const KEYWORDS: [&str; 4] = ["if", "then", "else", "mod"];

pub fn parse_typed(
    src: &str,
    first_line: usize,
    mode: Mode,
    expect: Type,
) -> Result<Expr, ParseError> {
    let tokens = tokenize(src, first_line)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        mode,
    };
    let start = p.peek().clone();
    let (expr, ty) = p.expr()?;
    let end = p.peek();
    if end.tok != Tok::Eof {
        return Err(p.error_at(
            end,
            format!("unexpected {} after expression", end.tok.describe()),
        ));
    }
    if ty != expect {
        return Err(ParseError::new(
            start.line,
            start.col,
            format!("expression has type {ty}, expected {expect}"),
        ));
    }
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: String) -> ParseError {
        ParseError::new(t.line, t.col, message)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            let t = self.peek();
            Err(self.error_at(t, format!("expected `{kw}`, found {}", t.tok.describe())))
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            let t = self.peek();
            Err(self.error_at(t, format!("expected {what}, found {}", t.tok.describe())))
        }
    }

    fn numeric(&self, t: &Token, ty: Type, ctx: &str) -> Result<(), ParseError> {
        if ty == Type::Num {
            Ok(())
        } else {
            Err(self.error_at(t, format!("{ctx} requires a number, found a vertex")))
        }
    }

    fn expr(&mut self) -> Result<(Expr, Type), ParseError> {
        let start = self.peek().clone();
        let (mut lhs, mut ty) = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs_tok = self.peek().clone();
            let (rhs, rty) = self.term()?;
            self.numeric(&start, ty, &format!("operator `{}`", op.symbol()))?;
            self.numeric(&rhs_tok, rty, &format!("operator `{}`", op.symbol()))?;
            lhs = Expr::binary(op, lhs, rhs);
            ty = Type::Num;
        }
        Ok((lhs, ty))
    }

    fn term(&mut self) -> Result<(Expr, Type), ParseError> {
        let start = self.peek().clone();
        let (mut lhs, mut ty) = self.unary()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Ident(s) if s == "mod" => BinOp::Mod,
                _ => break,
            };
            self.bump();
            let rhs_tok = self.peek().clone();
            let (rhs, rty) = self.unary()?;
            self.numeric(&start, ty, &format!("operator `{}`", op.symbol()))?;
            self.numeric(&rhs_tok, rty, &format!("operator `{}`", op.symbol()))?;
            lhs = Expr::binary(op, lhs, rhs);
            ty = Type::Num;
        }
        Ok((lhs, ty))
    }

    fn unary(&mut self) -> Result<(Expr, Type), ParseError> {
        if self.peek().tok == Tok::Minus {
            let t = self.bump();
            let (e, ty) = self.unary()?;
            self.numeric(&t, ty, "negation")?;
            return Ok((Expr::Neg(Box::new(e)), Type::Num));
        }
        self.power()
    }

    fn power(&mut self) -> Result<(Expr, Type), ParseError> {
        let start = self.peek().clone();
        let (base, ty) = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok((base, ty));
        }
        self.bump();
        let exp_tok = self.peek().clone();
        let (exp, ety) = self.unary()?;
        self.numeric(&start, ty, "operator `^`")?;
        self.numeric(&exp_tok, ety, "operator `^`")?;
        Ok((Expr::binary(BinOp::Pow, base, exp), Type::Num))
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        let start = self.peek().clone();
        let (lhs, lty) = self.expr()?;
        let op = match self.peek().tok {
            Tok::EqEq => CmpOp::Eq,
            Tok::NotEq => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => {
                let t = self.peek();
                return Err(self.error_at(
                    t,
                    format!("expected a comparison, found {}", t.tok.describe()),
                ));
            }
        };
        self.bump();
        let rhs_tok = self.peek().clone();
        let (rhs, rty) = self.expr()?;
        self.numeric(&start, lty, "comparison")?;
        self.numeric(&rhs_tok, rty, "comparison")?;
        Ok(Cond { op, lhs, rhs })
    }

    fn atom(&mut self) -> Result<(Expr, Type), ParseError> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => Ok((Expr::Int(*n), Type::Num)),
            Tok::Float(x) => Ok((Expr::Float(*x), Type::Num)),
            Tok::Str(s) => {
                if self.mode == Mode::Tree {
                    return Err(self.error_at(
                        &t,
                        "vertex literals are not allowed in tree expressions".into(),
                    ));
                }
                let v: VertexId = s
                    .parse()
                    .map_err(|_| self.error_at(&t, format!("malformed vertex literal \"{s}\"")))?;
                Ok((Expr::VertexLit(v), Type::Vertex))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(&t, name),
            other => Err(self.error_at(
                &t,
                format!("expected an expression, found {}", other.describe()),
            )),
        }
    }

    fn ident(&mut self, t: &Token, name: &str) -> Result<(Expr, Type), ParseError> {
        let vertex_ok = self.mode == Mode::Vertex;
        match name {
            "len" => return Ok((Expr::Len, Type::Num)),
            "last" => return Ok((Expr::Last, Type::Num)),
            "v" if vertex_ok => return Ok((Expr::Current, Type::Vertex)),
            "root" if vertex_ok => return Ok((Expr::Root, Type::Vertex)),
            "if" => {
                let cond = self.cond()?;
                self.expect_keyword("then")?;
                let then_tok = self.peek().clone();
                let (a, aty) = self.expr()?;
                self.expect_keyword("else")?;
                let (b, bty) = self.expr()?;
                if aty != bty {
                    return Err(self.error_at(
                        &then_tok,
                        format!("branches of `if` have different types ({aty} and {bty})"),
                    ));
                }
                return Ok((Expr::If(Box::new(cond), Box::new(a), Box::new(b)), aty));
            }
            kw if KEYWORDS.contains(&kw) => {
                return Err(self.error_at(t, format!("unexpected keyword `{kw}`")));
            }
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(self.error_at(t, format!("unknown identifier `{name}`")));
        };
        let (params, ret) = func.signature();
        if !vertex_ok && (ret == Type::Vertex || params.contains(&Type::Vertex)) {
            return Err(self.error_at(t, format!("`{name}` is not available in tree expressions")));
        }
        if self.peek().tok != Tok::LParen {
            return Err(self.error_at(t, format!("`{name}` must be called with arguments")));
        }
        self.bump();
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            loop {
                let arg_tok = self.peek().clone();
                let (e, ty) = self.expr()?;
                if let Some(&want) = params.get(args.len()) {
                    if ty != want {
                        return Err(self.error_at(
                            &arg_tok,
                            format!(
                                "argument {} of `{name}` must be a {want}, found a {ty}",
                                args.len() + 1
                            ),
                        ));
                    }
                }
                args.push(e);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let close = self.peek().clone();
        self.expect(Tok::RParen, "`)` or `,`")?;
        if args.len() != params.len() {
            return Err(self.error_at(
                &close,
                format!(
                    "`{name}` takes {} argument(s), found {}",
                    params.len(),
                    args.len()
                ),
            ));
        }
        Ok((Expr::Call(func, args), ret))
    }
}
