use std::fmt;

use crate::tree::VertexId;

/// Static type of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Num,
    Vertex,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Num => "number",
            Type::Vertex => "vertex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "mod",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Built-in functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    /// Parent of a vertex, or the root at the root.
    Parent,
    Child,
    /// The all-zero path of length `floor(e)`.
    Spine,
    Length,
    Floor,
    Ceil,
    Abs,
    Sqrt,
    Exp,
    Ln,
    Min,
    Max,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Parent,
        Func::Child,
        Func::Spine,
        Func::Length,
        Func::Floor,
        Func::Ceil,
        Func::Abs,
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::Min,
        Func::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Parent => "parent",
            Func::Child => "child",
            Func::Spine => "spine",
            Func::Length => "length",
            Func::Floor => "floor",
            Func::Ceil => "ceil",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn signature(self) -> (&'static [Type], Type) {
        use Type::*;
        match self {
            Func::Parent => (&[Vertex], Vertex),
            Func::Child => (&[Vertex, Num], Vertex),
            Func::Spine => (&[Num], Vertex),
            Func::Length => (&[Vertex], Num),
            Func::Floor | Func::Ceil | Func::Abs | Func::Sqrt | Func::Exp | Func::Ln => {
                (&[Num], Num)
            }
            Func::Min | Func::Max => (&[Num, Num], Num),
        }
    }
}

/// Expression tree for weights, branchings and self-maps.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64),
    Float(f64),
    /// `len`, the length of the current vertex.
    Len,
    /// `last`, the final index of the current vertex path.
    Last,
    /// `v`, the current vertex.
    Current,
    Root,
    VertexLit(VertexId),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Cond>, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cond {
    pub op: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// True when the value does not depend on the vertex it is evaluated at.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Len | Expr::Last | Expr::Current => false,
            Expr::Int(_) | Expr::Float(_) | Expr::Root | Expr::VertexLit(_) => true,
            Expr::Neg(e) => e.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
            Expr::If(c, a, b) => {
                c.lhs.is_constant() && c.rhs.is_constant() && a.is_constant() && b.is_constant()
            }
            Expr::Call(_, args) => args.iter().all(Expr::is_constant),
        }
    }
}

/// Canonical, fully parenthesized text.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Float(x) => write!(f, "{x:?}"),
            Expr::Len => f.write_str("len"),
            Expr::Last => f.write_str("last"),
            Expr::Current => f.write_str("v"),
            Expr::Root => f.write_str("root"),
            Expr::VertexLit(v) => write!(f, "\"{v}\""),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::If(c, a, b) => write!(f, "(if {c} then {a} else {b})"),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}
