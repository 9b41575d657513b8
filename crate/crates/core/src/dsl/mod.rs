//! A small expression language for branchings, weights and self-maps.
//!
//! Infinite objects are written as expressions in the current vertex:
//!
//! ```text
//! tree: 2
//! mu:   if len == 0 then 2 else 1/len
//! phi:  spine(2^len)
//! ```

mod ast;
mod eval;
mod lexer;
mod parser;
mod specfile;

use std::fmt;

pub use ast::{BinOp, CmpOp, Cond, Expr, Func, Type};
pub use eval::{
    eval_branching, eval_map, eval_map_within, eval_value, eval_weight, Num, Scope, Value,
};
pub use specfile::{parse_spec, SpecSource};

use parser::{parse_typed, Mode};

/// A syntax or type error with its 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

/// Parses a numeric weight expression.
pub fn parse_weight(text: &str) -> Result<Expr, ParseError> {
    parse_typed(text, 1, Mode::Vertex, Type::Num)
}

/// Parses a vertex-valued map expression.
pub fn parse_map(text: &str) -> Result<Expr, ParseError> {
    parse_typed(text, 1, Mode::Vertex, Type::Vertex)
}

/// Parses a branching expression, which may use `len` and `last` only.
pub fn parse_tree(text: &str) -> Result<Expr, ParseError> {
    parse_typed(text, 1, Mode::Tree, Type::Num)
}

pub(crate) fn parse_at(
    text: &str,
    first_line: usize,
    section: Section,
) -> Result<Expr, ParseError> {
    match section {
        Section::Tree => parse_typed(text, first_line, Mode::Tree, Type::Num),
        Section::Mu => parse_typed(text, first_line, Mode::Vertex, Type::Num),
        Section::Phi => parse_typed(text, first_line, Mode::Vertex, Type::Vertex),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Section {
    Tree,
    Mu,
    Phi,
}

/// Canonical fully parenthesized text of an expression.
pub fn print(ast: &Expr) -> String {
    ast.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::tree::{TreeSpec, VertexId};

    fn v(s: &str) -> VertexId {
        s.parse().unwrap()
    }

    fn at_len(n: usize) -> VertexId {
        VertexId::spine(n)
    }

    fn weight(text: &str, at: &VertexId) -> Result<f64, Error> {
        let tree = TreeSpec::binary();
        eval_weight(
            &parse_weight(text).unwrap(),
            at,
            Scope::new(&tree, 1_000_000),
        )
    }

    #[test]
    fn unbounded_example_weight() {
        let w = "if len == 0 then 2 else 1/len";
        assert_eq!(weight(w, &at_len(4)).unwrap(), 0.25);
        assert_eq!(weight(w, &VertexId::root()).unwrap(), 2.0);
    }

    #[test]
    fn power_weight() {
        assert_eq!(weight("2^len", &v("0.1.1")).unwrap(), 8.0);
    }

    #[test]
    fn parity_weight() {
        let w = "if len == 0 then 1 else (if len mod 2 == 0 then len else 1)";
        assert_eq!(weight(w, &at_len(6)).unwrap(), 6.0);
        assert_eq!(weight(w, &at_len(7)).unwrap(), 1.0);
        assert_eq!(weight(w, &VertexId::root()).unwrap(), 1.0);
    }

    #[test]
    fn parent_map() {
        let tree = TreeSpec::binary();
        let m = parse_map("parent(v)").unwrap();
        assert_eq!(eval_map(&m, &v("0.1"), &tree, 100).unwrap(), v("0"));
        assert_eq!(
            eval_map(&m, &VertexId::root(), &tree, 100).unwrap(),
            VertexId::root()
        );
    }

    #[test]
    fn spine_map() {
        let tree = TreeSpec::binary();
        let m = parse_map("spine(2^len)").unwrap();
        assert_eq!(
            eval_map(&m, &v("1.1"), &tree, 100).unwrap(),
            VertexId::spine(4)
        );
        assert!(matches!(
            eval_map(&m, &VertexId::spine(10), &tree, 100),
            Err(Error::Budget {
                limit: 100,
                needed: 1024
            })
        ));
    }

    #[test]
    fn root_map_is_constant() {
        let m = parse_map("root").unwrap();
        assert!(m.is_constant());
        assert_eq!(
            eval_map(&m, &v("1.0.1"), &TreeSpec::binary(), 10).unwrap(),
            VertexId::root()
        );
        assert!(!parse_map("parent(v)").unwrap().is_constant());
        assert!(parse_map("child(root, 1)").unwrap().is_constant());
    }

    #[test]
    fn parity_map() {
        let tree = TreeSpec::binary();
        let m = parse_map(
            "if len == 0 then root else (if len mod 2 == 0 then spine(len^2) else child(root,0))",
        )
        .unwrap();
        assert_eq!(
            eval_map(&m, &v("0.1.0.1"), &tree, 1000).unwrap(),
            VertexId::spine(16)
        );
        assert_eq!(eval_map(&m, &v("1.1.1"), &tree, 1000).unwrap(), v("0"));
        assert_eq!(
            eval_map(&m, &VertexId::root(), &tree, 1000).unwrap(),
            VertexId::root()
        );
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(
            weight("0 - 1", &v("0")),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            weight("1/(len - 1)", &v("0")),
            Err(Error::Eval { .. })
        ));
        assert!(matches!(
            weight("0^(0-1)", &v("0")),
            Err(Error::Eval { .. })
        ));
        assert!(matches!(
            weight("1 mod 0", &v("0")),
            Err(Error::Eval { .. })
        ));
        assert!(matches!(
            weight("sqrt(0-1)", &v("0")),
            Err(Error::Eval { .. })
        ));
        let m = parse_map("child(v, 5)").unwrap();
        assert!(matches!(
            eval_map(&m, &v("0"), &TreeSpec::binary(), 100),
            Err(Error::Address { .. })
        ));
        let lit = parse_map("\"0.7\"").unwrap();
        assert!(matches!(
            eval_map(&lit, &v("0"), &TreeSpec::binary(), 100),
            Err(Error::Address { .. })
        ));
        assert!(matches!(
            eval_map(
                &parse_map("spine(0 - 3)").unwrap(),
                &v("0"),
                &TreeSpec::binary(),
                100
            ),
            Err(Error::Eval { .. })
        ));
    }

    #[test]
    fn exact_integer_arithmetic() {
        let tree = TreeSpec::binary();
        let e = parse_weight("2^60 + 1 - 2^60").unwrap();
        assert_eq!(
            eval_value(&e, &VertexId::root(), Scope::new(&tree, 10)).unwrap(),
            Value::Num(Num::Int(1))
        );
        let big = parse_weight("2^200").unwrap();
        assert_eq!(
            eval_value(&big, &VertexId::root(), Scope::new(&tree, 10)).unwrap(),
            Value::Num(Num::Float(2f64.powi(200)))
        );
        let e = parse_weight("7 / 2").unwrap();
        assert_eq!(
            eval_value(&e, &VertexId::root(), Scope::new(&tree, 10)).unwrap(),
            Value::Num(Num::Float(3.5))
        );
        assert_eq!(weight("(0 - 7) mod 3", &VertexId::root()).unwrap(), 2.0);
    }

    #[test]
    fn branching_expressions() {
        let t = parse_tree("if len == 0 then 3 else last + 1").unwrap();
        assert_eq!(eval_branching(&t, &[]).unwrap(), 3);
        assert_eq!(eval_branching(&t, &[2]).unwrap(), 3);
        assert_eq!(eval_branching(&t, &[0]).unwrap(), 1);
        let bad = parse_tree("len - 1").unwrap();
        assert!(matches!(
            eval_branching(&bad, &[]),
            Err(Error::InvalidBranching { .. })
        ));
        assert!(matches!(
            eval_branching(&parse_tree("last").unwrap(), &[]),
            Err(Error::Eval { .. })
        ));
        assert!(parse_tree("length(v)").is_err());
        assert!(parse_tree("spine(2)").is_err());
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(print(&parse_weight("1+2*len").unwrap()), "(1 + (2 * len))");
        assert_eq!(print(&parse_weight("-2^2").unwrap()), "(-(2 ^ 2))");
        assert_eq!(print(&parse_weight("len mod 2").unwrap()), "(len mod 2)");
        assert_eq!(print(&parse_weight("2^3^2").unwrap()), "(2 ^ (3 ^ 2))");
        assert_eq!(print(&parse_weight("0.5 * 1e-3").unwrap()), "(0.5 * 0.001)");
        assert_eq!(
            print(&parse_map("if len == 0 then root else child(parent(v), 0)").unwrap()),
            "(if len == 0 then root else child(parent(v), 0))"
        );
        assert_eq!(print(&parse_map("\"0.1\"").unwrap()), "\"0.1\"");
    }

    #[test]
    fn type_errors() {
        let e = parse_weight("parent(v)").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        assert!(e.message.contains("expected number"));
        assert!(parse_map("len + 1").is_err());
        assert!(parse_weight("v + 1").is_err());
        assert!(parse_weight("if len == 0 then root else 1").is_err());
        let e = parse_weight("len + foo").unwrap_err();
        assert_eq!(e.col, 7);
        assert!(e.message.contains("unknown identifier"));
    }
}
