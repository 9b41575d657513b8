//! Evaluation of parsed expressions at a vertex.
//!
//! Integer subexpressions stay exact (`i128`) until division, a non-integer
//! operand, or overflow forces them into `f64`.

use std::cmp::Ordering;

use super::ast::{BinOp, CmpOp, Expr, Func};
use crate::error::{Error, Result};
use crate::tree::{TreeSpec, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Num {
    Int(i128),
    Float(f64),
}

impl Num {
    pub fn to_f64(self) -> f64 {
        match self {
            Num::Int(n) => n as f64,
            Num::Float(x) => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(Num),
    Vertex(VertexId),
}

/// A vertex during evaluation. Spine vertices stay symbolic so that long
/// images can be measured without being built.
#[derive(Debug, Clone)]
enum Vx {
    Path(VertexId),
    Spine(usize),
}

impl Vx {
    fn len(&self) -> usize {
        match self {
            Vx::Path(v) => v.len(),
            Vx::Spine(n) => *n,
        }
    }

    fn into_vertex(self) -> VertexId {
        match self {
            Vx::Path(v) => v,
            Vx::Spine(n) => VertexId::spine(n),
        }
    }
}

enum Val {
    Num(Num),
    Vertex(Vx),
}

/// The tree a vertex expression is evaluated in, and the longest vertex it
/// may construct.
#[derive(Debug, Clone, Copy)]
pub struct Scope<'a> {
    pub tree: Option<&'a TreeSpec>,
    pub budget: usize,
}

impl<'a> Scope<'a> {
    pub fn new(tree: &'a TreeSpec, budget: usize) -> Self {
        Scope {
            tree: Some(tree),
            budget,
        }
    }
}

struct Env<'a> {
    path: &'a [u32],
    scope: Scope<'a>,
}

impl Env<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Eval {
            vertex: VertexId::from_path(self.path.to_vec()).to_string(),
            message: message.into(),
        }
    }

    fn finite(&self, x: f64) -> Result<Num> {
        if x.is_finite() {
            Ok(Num::Float(x))
        } else if x.is_nan() {
            Err(self.fail("arithmetic domain error"))
        } else {
            Err(self.fail("arithmetic overflow"))
        }
    }

    fn num(&self, e: &Expr) -> Result<Num> {
        match eval(e, self)? {
            Val::Num(n) => Ok(n),
            Val::Vertex(_) => Err(self.fail("expected a number, found a vertex")),
        }
    }

    fn vertex(&self, e: &Expr) -> Result<Vx> {
        match eval(e, self)? {
            Val::Vertex(v) => Ok(v),
            Val::Num(_) => Err(self.fail("expected a vertex, found a number")),
        }
    }

    /// Floors a number to a non-negative integer usable as a length or index.
    fn index(&self, n: Num, what: &str) -> Result<u64> {
        let x = match n {
            Num::Int(i) => i,
            Num::Float(x) => {
                let f = x.floor();
                if f >= i128::MAX as f64 {
                    i128::MAX
                } else {
                    f as i128
                }
            }
        };
        if x < 0 {
            return Err(self.fail(format!("{what} must be non-negative, got {}", n.to_f64())));
        }
        Ok(u64::try_from(x).unwrap_or(u64::MAX))
    }
}

fn eval(e: &Expr, env: &Env<'_>) -> Result<Val> {
    Ok(match e {
        Expr::Int(n) => Val::Num(Num::Int(*n as i128)),
        Expr::Float(x) => Val::Num(Num::Float(*x)),
        Expr::Len => Val::Num(Num::Int(env.path.len() as i128)),
        Expr::Last => match env.path.last() {
            Some(&i) => Val::Num(Num::Int(i as i128)),
            None => return Err(env.fail("`last` is undefined at the root")),
        },
        Expr::Current => Val::Vertex(Vx::Path(VertexId::from_path(env.path.to_vec()))),
        Expr::Root => Val::Vertex(Vx::Spine(0)),
        Expr::VertexLit(v) => Val::Vertex(Vx::Path(v.clone())),
        Expr::Neg(a) => Val::Num(match env.num(a)? {
            Num::Int(n) => n
                .checked_neg()
                .map(Num::Int)
                .unwrap_or(Num::Float(-(n as f64))),
            Num::Float(x) => Num::Float(-x),
        }),
        Expr::Binary(op, a, b) => {
            let (x, y) = (env.num(a)?, env.num(b)?);
            Val::Num(arith(*op, x, y, env)?)
        }
        Expr::If(c, a, b) => {
            let (x, y) = (env.num(&c.lhs)?, env.num(&c.rhs)?);
            if compare(c.op, x, y) {
                eval(a, env)?
            } else {
                eval(b, env)?
            }
        }
        Expr::Call(func, args) => call(*func, args, env)?,
    })
}

fn arith(op: BinOp, x: Num, y: Num, env: &Env<'_>) -> Result<Num> {
    use Num::Int;
    match (op, x, y) {
        (BinOp::Add, Int(a), Int(b)) => match a.checked_add(b) {
            Some(n) => Ok(Int(n)),
            None => env.finite(a as f64 + b as f64),
        },
        (BinOp::Sub, Int(a), Int(b)) => match a.checked_sub(b) {
            Some(n) => Ok(Int(n)),
            None => env.finite(a as f64 - b as f64),
        },
        (BinOp::Mul, Int(a), Int(b)) => match a.checked_mul(b) {
            Some(n) => Ok(Int(n)),
            None => env.finite(a as f64 * b as f64),
        },
        (BinOp::Mod, Int(a), Int(b)) => {
            if b == 0 {
                Err(env.fail("modulus by zero"))
            } else {
                Ok(Int(a.rem_euclid(b)))
            }
        }
        (BinOp::Pow, Int(a), Int(b)) if b >= 0 => {
            match u32::try_from(b).ok().and_then(|e| a.checked_pow(e)) {
                Some(n) => Ok(Int(n)),
                None => env.finite((a as f64).powf(b as f64)),
            }
        }
        (BinOp::Div, _, _) => {
            let d = y.to_f64();
            if d == 0.0 {
                Err(env.fail("division by zero"))
            } else {
                env.finite(x.to_f64() / d)
            }
        }
        (BinOp::Mod, _, _) => {
            let d = y.to_f64();
            if d == 0.0 {
                Err(env.fail("modulus by zero"))
            } else {
                env.finite(x.to_f64().rem_euclid(d))
            }
        }
        (BinOp::Pow, _, _) => {
            let (base, exp) = (x.to_f64(), y.to_f64());
            if base == 0.0 && exp < 0.0 {
                Err(env.fail("negative exponent on zero base"))
            } else {
                env.finite(base.powf(exp))
            }
        }
        (BinOp::Add, _, _) => env.finite(x.to_f64() + y.to_f64()),
        (BinOp::Sub, _, _) => env.finite(x.to_f64() - y.to_f64()),
        (BinOp::Mul, _, _) => env.finite(x.to_f64() * y.to_f64()),
    }
}

fn compare(op: CmpOp, x: Num, y: Num) -> bool {
    let ord = match (x, y) {
        (Num::Int(a), Num::Int(b)) => Some(a.cmp(&b)),
        _ => x.to_f64().partial_cmp(&y.to_f64()),
    };
    match ord {
        None => op == CmpOp::Ne,
        Some(o) => match op {
            CmpOp::Eq => o == Ordering::Equal,
            CmpOp::Ne => o != Ordering::Equal,
            CmpOp::Lt => o == Ordering::Less,
            CmpOp::Le => o != Ordering::Greater,
            CmpOp::Gt => o == Ordering::Greater,
            CmpOp::Ge => o != Ordering::Less,
        },
    }
}

fn integral(x: f64) -> Num {
    if x.abs() < 9.007_199_254_740_992e15 {
        Num::Int(x as i128)
    } else {
        Num::Float(x)
    }
}

fn call(func: Func, args: &[Expr], env: &Env<'_>) -> Result<Val> {
    let num = |i: usize| env.num(&args[i]);
    Ok(match func {
        Func::Parent => Val::Vertex(match env.vertex(&args[0])? {
            Vx::Path(v) => Vx::Path(v.parent_or_root()),
            Vx::Spine(n) => Vx::Spine(n.saturating_sub(1)),
        }),
        Func::Child => {
            let base = env.vertex(&args[0])?;
            let index = env.index(num(1)?, "child index")?;
            if let (Vx::Spine(n), 0) = (&base, index) {
                // index 0 exists below every vertex
                return Ok(Val::Vertex(Vx::Spine(n + 1)));
            }
            let base = base.into_vertex();
            if let Some(tree) = env.scope.tree {
                let b = tree.branching(&base)?;
                if index >= b as u64 {
                    return Err(Error::Address {
                        vertex: format!("child({base}, {index})"),
                        depth: base.len(),
                        index,
                        branching: b,
                    });
                }
            }
            let index = u32::try_from(index).map_err(|_| env.fail("child index out of range"))?;
            Val::Vertex(Vx::Path(base.child(index)))
        }
        Func::Spine => {
            let n = env.index(num(0)?, "spine length")?;
            if n > env.scope.budget as u64 {
                return Err(Error::Budget {
                    limit: env.scope.budget,
                    needed: usize::try_from(n).unwrap_or(usize::MAX),
                });
            }
            Val::Vertex(Vx::Spine(n as usize))
        }
        Func::Length => Val::Num(Num::Int(env.vertex(&args[0])?.len() as i128)),
        Func::Floor => Val::Num(match num(0)? {
            Num::Float(x) => integral(x.floor()),
            n => n,
        }),
        Func::Ceil => Val::Num(match num(0)? {
            Num::Float(x) => integral(x.ceil()),
            n => n,
        }),
        Func::Abs => Val::Num(match num(0)? {
            Num::Int(n) => n
                .checked_abs()
                .map(Num::Int)
                .unwrap_or(Num::Float((n as f64).abs())),
            Num::Float(x) => Num::Float(x.abs()),
        }),
        Func::Sqrt => {
            let x = num(0)?.to_f64();
            if x < 0.0 {
                return Err(env.fail("square root of a negative number"));
            }
            Val::Num(Num::Float(x.sqrt()))
        }
        Func::Exp => Val::Num(env.finite(num(0)?.to_f64().exp())?),
        Func::Ln => {
            let x = num(0)?.to_f64();
            if x <= 0.0 {
                return Err(env.fail("logarithm of a non-positive number"));
            }
            Val::Num(Num::Float(x.ln()))
        }
        Func::Min | Func::Max => {
            let (a, b) = (num(0)?, num(1)?);
            let a_first = match (a, b) {
                (Num::Int(x), Num::Int(y)) => x <= y,
                _ => a.to_f64() <= b.to_f64(),
            };
            let pick_a = if func == Func::Min { a_first } else { !a_first };
            Val::Num(if pick_a { a } else { b })
        }
    })
}

pub fn eval_value(ast: &Expr, v: &VertexId, scope: Scope<'_>) -> Result<Value> {
    Ok(
        match eval(
            ast,
            &Env {
                path: v.path(),
                scope,
            },
        )? {
            Val::Num(n) => Value::Num(n),
            Val::Vertex(x) => Value::Vertex(x.into_vertex()),
        },
    )
}

/// Evaluates a numeric expression as a weight; the result must be finite
/// and strictly positive.
pub fn eval_weight(ast: &Expr, v: &VertexId, scope: Scope<'_>) -> Result<f64> {
    let env = Env {
        path: v.path(),
        scope,
    };
    let value = env.num(ast)?.to_f64();
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositiveWeight {
            vertex: v.to_string(),
            value,
        })
    }
}

/// Evaluates a vertex expression and validates the result in the tree.
pub fn eval_map(ast: &Expr, v: &VertexId, tree: &TreeSpec, budget: usize) -> Result<VertexId> {
    eval_map_within(ast, v, tree, budget, usize::MAX).map(|w| w.expect("no length cap"))
}

/// Like [`eval_map`], but returns `None` without building the image when
/// its length exceeds `max_len`.
pub fn eval_map_within(
    ast: &Expr,
    v: &VertexId,
    tree: &TreeSpec,
    budget: usize,
    max_len: usize,
) -> Result<Option<VertexId>> {
    let env = Env {
        path: v.path(),
        scope: Scope::new(tree, budget),
    };
    match env.vertex(ast)? {
        x if x.len() > max_len => Ok(None),
        // spine vertices exist in every tree
        Vx::Spine(n) => Ok(Some(VertexId::spine(n))),
        Vx::Path(w) => {
            tree.validate(&w)?;
            Ok(Some(w))
        }
    }
}

/// Evaluates a branching expression; the result must be a positive integer.
pub fn eval_branching(ast: &Expr, path: &[u32]) -> Result<usize> {
    let env = Env {
        path,
        scope: Scope {
            tree: None,
            budget: 0,
        },
    };
    let n = env.num(ast)?;
    let k = match n {
        Num::Int(k) if k >= 1 => usize::try_from(k).ok(),
        Num::Float(x) if x >= 1.0 && x.fract() == 0.0 && x < usize::MAX as f64 => Some(x as usize),
        _ => None,
    };
    k.ok_or_else(|| Error::InvalidBranching {
        vertex: VertexId::from_path(path.to_vec()).to_string(),
        value: n.to_f64().to_string(),
    })
}
