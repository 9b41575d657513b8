#![allow(dead_code)]

use proptest::prelude::*;
use treecomp::dsl::{BinOp, CmpOp, Cond, Expr, Func};
use treecomp::VertexId;

fn float_lit() -> impl Strategy<Value = f64> {
    prop_oneof![
        0.0f64..1e6,
        Just(0.1),
        Just(1e-300),
        Just(2.5e300),
        (0u32..64).prop_map(|k| 2f64.powi(-(k as i32))),
    ]
}

fn vertex_lit() -> impl Strategy<Value = VertexId> {
    prop::collection::vec(0u32..5, 0..6).prop_map(VertexId::from_path)
}

fn bin_op() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Add),
        Just(BinOp::Sub),
        Just(BinOp::Mul),
        Just(BinOp::Div),
        Just(BinOp::Mod),
        Just(BinOp::Pow),
    ]
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge),
    ]
}

fn unary_num_func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Floor),
        Just(Func::Ceil),
        Just(Func::Abs),
        Just(Func::Sqrt),
        Just(Func::Exp),
        Just(Func::Ln),
    ]
}

/// Well-typed numeric and vertex expressions over the full language.
pub fn typed_exprs() -> (BoxedStrategy<Expr>, BoxedStrategy<Expr>) {
    let num_leaf = prop_oneof![
        (0i64..100_000).prop_map(Expr::Int),
        float_lit().prop_map(Expr::Float),
        Just(Expr::Len),
        Just(Expr::Last),
    ]
    .boxed();
    let vtx_leaf = prop_oneof![
        Just(Expr::Current),
        Just(Expr::Root),
        vertex_lit().prop_map(Expr::VertexLit),
    ]
    .boxed();

    // Build both types level by level so each can refer to the other.
    let mut num = num_leaf.clone();
    let mut vtx = vtx_leaf.clone();
    for _ in 0..3 {
        let (n, v) = (num.clone(), vtx.clone());
        let cond = (cmp_op(), n.clone(), n.clone())
            .prop_map(|(op, lhs, rhs)| Cond { op, lhs, rhs })
            .boxed();
        let next_num = prop_oneof![
            2 => num_leaf.clone(),
            1 => n.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            3 => (bin_op(), n.clone(), n.clone()).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            1 => (cond.clone(), n.clone(), n.clone())
                .prop_map(|(c, a, b)| Expr::If(Box::new(c), Box::new(a), Box::new(b))),
            1 => v.clone().prop_map(|x| Expr::Call(Func::Length, vec![x])),
            1 => (unary_num_func(), n.clone()).prop_map(|(f, a)| Expr::Call(f, vec![a])),
            1 => (prop_oneof![Just(Func::Min), Just(Func::Max)], n.clone(), n.clone())
                .prop_map(|(f, a, b)| Expr::Call(f, vec![a, b])),
        ]
        .boxed();
        let next_vtx = prop_oneof![
            2 => vtx_leaf.clone(),
            1 => v.clone().prop_map(|x| Expr::Call(Func::Parent, vec![x])),
            1 => (v.clone(), n.clone()).prop_map(|(x, i)| Expr::Call(Func::Child, vec![x, i])),
            1 => n.clone().prop_map(|e| Expr::Call(Func::Spine, vec![e])),
            1 => (cond, v.clone(), v.clone())
                .prop_map(|(c, a, b)| Expr::If(Box::new(c), Box::new(a), Box::new(b))),
        ]
        .boxed();
        num = next_num;
        vtx = next_vtx;
    }
    (num, vtx)
}

/// A malformed spec and where its error must be reported.
pub struct Malformed {
    pub text: &'static str,
    pub line: usize,
    pub col: usize,
}

pub const MALFORMED: [Malformed; 20] = [
    // unknown identifier
    Malformed {
        text: "tree: 2\nmu: len + foo\nphi: v",
        line: 2,
        col: 11,
    },
    // incomplete expression
    Malformed {
        text: "tree: 2\nmu: 1 +\nphi: v",
        line: 2,
        col: 8,
    },
    // unbalanced parenthesis
    Malformed {
        text: "tree: 2\nmu: (1 + len\nphi: v",
        line: 2,
        col: 13,
    },
    // stray closing parenthesis
    Malformed {
        text: "tree: 2\nmu: 1 + len)\nphi: v",
        line: 2,
        col: 12,
    },
    // vertex where a number is required
    Malformed {
        text: "tree: 2\nmu: v\nphi: v",
        line: 2,
        col: 5,
    },
    // number where a vertex is required
    Malformed {
        text: "tree: 2\nmu: 1\nphi: len + 1",
        line: 3,
        col: 6,
    },
    // tree section may not use v
    Malformed {
        text: "tree: length(v)\nmu: 1\nphi: v",
        line: 1,
        col: 7,
    },
    // wrong argument count
    Malformed {
        text: "tree: 2\nmu: 1\nphi: parent(v, v)",
        line: 3,
        col: 17,
    },
    // wrong argument type
    Malformed {
        text: "tree: 2\nmu: 1\nphi: child(1, 0)",
        line: 3,
        col: 12,
    },
    // if without else
    Malformed {
        text: "tree: 2\nmu: if len == 0 then 1\nphi: v",
        line: 2,
        col: 23,
    },
    // branches of different types
    Malformed {
        text: "tree: 2\nmu: 1\nphi: if len == 0 then v else 1",
        line: 3,
        col: 23,
    },
    // single equals sign
    Malformed {
        text: "tree: 2\nmu: if len = 0 then 1 else 2\nphi: v",
        line: 2,
        col: 12,
    },
    // comparison without if
    Malformed {
        text: "tree: 2\nmu: len < 3\nphi: v",
        line: 2,
        col: 9,
    },
    // unterminated vertex literal
    Malformed {
        text: "tree: 2\nmu: 1\nphi: \"0.1",
        line: 3,
        col: 6,
    },
    // malformed vertex literal
    Malformed {
        text: "tree: 2\nmu: 1\nphi: \"0..1\"",
        line: 3,
        col: 6,
    },
    // missing section
    Malformed {
        text: "tree: 2\nmu: 1",
        line: 2,
        col: 1,
    },
    // duplicate section
    Malformed {
        text: "tree: 2\nmu: 1\nmu: 2\nphi: v",
        line: 3,
        col: 1,
    },
    // empty section
    Malformed {
        text: "tree:\nmu: 1\nphi: v",
        line: 1,
        col: 1,
    },
    // stray character, on a continuation line
    Malformed {
        text: "tree: 2\nmu: 1 +\n  len $ 2\nphi: v",
        line: 3,
        col: 7,
    },
    // text before the first section
    Malformed {
        text: "hello\ntree: 2\nmu: 1\nphi: v",
        line: 1,
        col: 1,
    },
];

/// Deterministic pseudo-random positive weight in `[2^-4, 2^4]`, keyed by
/// `seed` and the vertex path.
pub fn hashed_weight(seed: u64) -> treecomp::Weight {
    treecomp::Weight::from_fn(move |v| 2f64.powf(unit(seed, v.path()) * 8.0 - 4.0))
}

/// A map sending every vertex to a pseudo-random vertex of `window`.
pub fn hashed_map(tree: treecomp::TreeSpec, window: Vec<VertexId>, seed: u64) -> treecomp::SelfMap {
    treecomp::SelfMap::from_fn(tree, move |v| {
        let i = (unit(seed ^ 0x9e37_79b9, v.path()) * window.len() as f64) as usize;
        window[i.min(window.len() - 1)].clone()
    })
}

/// A uniform number in `[0, 1)` derived from `seed` and `path`.
pub fn unit(seed: u64, path: &[u32]) -> f64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    seed.hash(&mut h);
    path.hash(&mut h);
    (h.finish() >> 11) as f64 / (1u64 << 53) as f64
}

/// A tree whose branching at each vertex is pseudo-random in `1..=3`.
pub fn hashed_tree(seed: u64) -> treecomp::TreeSpec {
    treecomp::TreeSpec::from_fn(move |p| 1 + (unit(seed, p) * 3.0) as usize)
}
